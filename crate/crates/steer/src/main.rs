fn main() {
    std::process::exit(elastica_steer::cli::run(std::env::args_os()));
}
