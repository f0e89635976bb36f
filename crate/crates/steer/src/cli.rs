//! Command-line surface. Exit codes: 0 success, 1 domain or IO error,
//! 2 no path, 64 usage error.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use elastica_core::bezier::{approximate, excess_length};
use elastica_core::grid::{EndpointGrid, GridParams};
use elastica_core::planner::HeuristicMode;
use elastica_core::self_intersection::{check_self_intersection, compute_k_max, default_eps, fold_gap};
use elastica_core::solver::{solve_with_multistart, EndpointConstraint, SolverOptions};
use elastica_core::stability::{classify_stability, closure_gap, compute_k_c};
use elastica_core::{BaseFrame, ElasticaParams, Error, StabilityLabel};

use crate::cache::{load_or_build, save_grid};
use crate::error::{Result, SteerError};
use crate::plan_file::{save_plan, PlanFile};
use crate::planning::{context, plan_with};
use crate::scene::{load_scene, resolve_state};
use crate::svg::{fit_bounds, plan_panels, render_panels, write_svg, Panel, SvgStyle};
use crate::validation::run_validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NO_PATH: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "elastica-steer", version, about = "Planar flexible-cable shapes and steering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Elliptic modulus.
    #[arg(long)]
    pub k: f64,
    /// Phase offset, absolute length.
    #[arg(long)]
    pub s0: f64,
    /// Full period, absolute length.
    #[arg(long = "lt")]
    pub l_tilde: f64,
    /// Cable length.
    #[arg(long = "length", default_value_t = 1.0)]
    pub length: f64,
}

impl ShapeArgs {
    fn params(&self) -> Result<ElasticaParams> {
        Ok(ElasticaParams::new(self.k, self.s0, self.l_tilde)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long = "length", default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    #[arg(long, default_value_t = 160)]
    pub n_k: usize,
    #[arg(long, default_value_t = 200)]
    pub n_s0: usize,
    #[arg(long, default_value_t = 100)]
    pub n_lt: usize,
    #[arg(long = "bins", default_value_t = 50)]
    pub n: usize,
}

impl GridArgs {
    fn params(&self) -> GridParams {
        GridParams { n_k: self.n_k, n_s0: self.n_s0, n_lt: self.n_lt, n: self.n, ..GridParams::new(self.length, self.rho) }
    }
}

#[derive(Subcommand, Debug)]
pub enum GridCommand {
    /// Sample the parameter cells and write the binary grid.
    Build {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print k_max and k_c with their defining residuals.
    Constants,
    /// Solve for all grid-seeded shapes reaching a relative endpoint.
    Solve {
        #[arg(long)]
        xl: f64,
        #[arg(long)]
        yl: f64,
        /// Tangent change between the ends, degrees.
        #[arg(long, default_value_t = 0.0)]
        dphi: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = ".elastica-cache")]
        cache_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Sample points along a shape as CSV, optionally an SVG.
    Shape {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Number of equal arc-length intervals.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exact self-intersection test.
    CheckSelf {
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// Stability label.
    Stability {
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// Quadratic Bézier chain and its excess length.
    Approx {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Endpoint grid tools.
    Grid {
        #[command(subcommand)]
        command: GridCommand,
    },
    /// Plan a scene and write the plan file.
    Plan {
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Number of snapshot panels in the SVG.
        #[arg(long, default_value_t = 6)]
        panels: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value = ".elastica-cache")]
        cache_dir: PathBuf,
        /// Uniform-cost search instead of A*.
        #[arg(long)]
        dijkstra: bool,
        /// Override the scene's waypoint setting.
        #[arg(long)]
        waypoints: Option<bool>,
    },
    /// Show the grid nodes a scene's start and target snap to.
    Inspect {
        scene: PathBuf,
        #[arg(long, default_value = ".elastica-cache")]
        cache_dir: PathBuf,
    },
    /// Compare model shapes with the static cable-tie experiments.
    Validate {
        #[arg(long)]
        json: bool,
    },
}

fn exit_code(e: &SteerError) -> i32 {
    match e {
        SteerError::Core(Error::NoPath) => EXIT_NO_PATH,
        _ => EXIT_DOMAIN,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match execute(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn grid_for(grid: &GridArgs, cache_dir: &PathBuf, workers: usize) -> Result<EndpointGrid> {
    Ok(load_or_build(cache_dir, &grid.params(), workers)?.0)
}

fn io<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(|e| SteerError::io("<stdout>", e))
}

pub fn execute(cmd: Command, out: &mut impl std::io::Write) -> Result<()> {
    match cmd {
        Command::Constants => {
            let t = Instant::now();
            let km = compute_k_max();
            let kc = compute_k_c();
            io(writeln!(out, "k_max = {km:.12}  residual {:.3e}", fold_gap(km)?))?;
            io(writeln!(out, "k_c   = {kc:.12}  residual {:.3e}", closure_gap(kc)?))?;
            io(writeln!(out, "elapsed {:.3} s", t.elapsed().as_secs_f64()))?;
        }
        Command::Solve { xl, yl, dphi, grid, cache_dir, workers } => {
            let g = grid_for(&grid, &cache_dir, workers)?;
            let c = EndpointConstraint::with_delta_phi(xl, yl, dphi.to_radians(), grid.length)?;
            let sols = solve_with_multistart(&c, &g, &SolverOptions::new(grid.rho))?;
            io(writeln!(out, "k,s0,l_tilde,stability"))?;
            for p in sols {
                let lab = classify_stability(&p, grid.length);
                io(writeln!(out, "{:.10},{:.10},{:.10},{:?}", p.k(), p.s0(), p.l_tilde(), lab))?;
            }
        }
        Command::Shape { shape, samples, svg } => {
            let p = shape.params()?;
            io(writeln!(out, "s,x,y,curvature"))?;
            let n = samples.max(1);
            for i in 0..=n {
                let s = shape.length * i as f64 / n as f64;
                let q = p.point(s, &BaseFrame::ORIGIN);
                io(writeln!(out, "{:.8},{:.8},{:.8},{:.8}", s, q.x, q.y, p.curvature(s)))?;
            }
            if let Some(path) = svg {
                shape_svg(&p, shape.length, false, &path)?;
            }
        }
        Command::CheckSelf { shape } => {
            let hit = check_self_intersection(shape.k, shape.l_tilde, shape.s0, shape.length, default_eps(shape.l_tilde))?;
            io(writeln!(out, "{}", if hit { "self-intersecting" } else { "no self-intersection" }))?;
        }
        Command::Stability { shape } => {
            let lab = classify_stability(&shape.params()?, shape.length);
            let name = match lab {
                StabilityLabel::StableOneInflection => "stable (one inflection, L < L~)",
                StabilityLabel::StableTwoInflection => "stable (two inflections, L = L~)",
                StabilityLabel::Unstable => "unstable",
            };
            io(writeln!(out, "{name}"))?;
        }
        Command::Approx { shape, svg } => {
            let p = shape.params()?;
            let chain = approximate(&p, &BaseFrame::ORIGIN, shape.length)?;
            io(writeln!(out, "arc,p0x,p0y,qx,qy,p1x,p1y"))?;
            for (i, a) in chain.arcs().iter().enumerate() {
                io(writeln!(
                    out,
                    "{i},{:.8},{:.8},{:.8},{:.8},{:.8},{:.8}",
                    a.p_start.x, a.p_start.y, a.q_ctrl.x, a.q_ctrl.y, a.p_end.x, a.p_end.y
                ))?;
            }
            io(writeln!(out, "excess_length = {:.6}%", 100.0 * excess_length(&chain, shape.length)))?;
            if let Some(path) = svg {
                shape_svg(&p, shape.length, true, &path)?;
            }
        }
        Command::Grid { command: GridCommand::Build { grid, out: path, workers } } => {
            let t = Instant::now();
            let g = crate::parallel::build_grid(&grid.params(), workers)?;
            save_grid(&g, &path)?;
            io(writeln!(
                out,
                "{} samples, {} of {} bins feasible, {:.2} s -> {}",
                grid.params().sample_count(),
                g.feasible_count(),
                g.n() * g.n(),
                t.elapsed().as_secs_f64(),
                path.display()
            ))?;
        }
        Command::Plan { scene, out: plan_out, svg, panels, workers, cache_dir, dijkstra, waypoints } => {
            let sc = load_scene(&scene)?;
            let (g, _) = load_or_build(&cache_dir, &sc.grid, workers)?;
            let mut o = sc.options;
            if dijkstra {
                o.heuristic = HeuristicMode::Zero;
            }
            if let Some(w) = waypoints {
                o.use_waypoints = w;
            }
            let t = Instant::now();
            let r = plan_with(&sc, &g, o, workers);
            let secs = t.elapsed().as_secs_f64();
            let r = match r {
                Ok(r) => r,
                Err(e) => {
                    if matches!(e, SteerError::Core(Error::NoPath)) {
                        io(writeln!(out, "no path ({secs:.2} s)"))?;
                    }
                    return Err(e);
                }
            };
            io(writeln!(
                out,
                "path with {} configurations, cost {:.6}, {} expansions, {} interim targets, {secs:.2} s",
                r.path.len(),
                r.cost,
                r.expanded,
                r.waypoints.len()
            ))?;
            let file = PlanFile::new(&sc.source, &o, sc.grid.n, &r);
            let path = plan_out.unwrap_or_else(|| scene.with_extension("plan.json"));
            save_plan(&file, &path)?;
            io(writeln!(out, "plan written to {}", path.display()))?;
            if let Some(svg) = svg {
                let ps = plan_panels(&r, sc.cable.length, panels)?;
                let text = render_panels(&ps, &sc.workspace, &sc.obstacles, &SvgStyle::default());
                write_svg(&text, svg)?;
            }
        }
        Command::Inspect { scene, cache_dir } => {
            let sc = load_scene(&scene)?;
            let (g, _) = load_or_build(&cache_dir, &sc.grid, 1)?;
            let ctx = context(&sc, &g, sc.options)?;
            let mut nodes = Vec::new();
            for (name, st) in [("start", &sc.start), ("target", &sc.target)] {
                let (t, xy) = resolve_state(st, &g, &sc.cable)?;
                io(writeln!(out, "{name}: shape ({:.4}, {:.4}, {:.4}), relative endpoint ({:.4}, {:.4})", t.k, t.s0, t.l_tilde, xy.x, xy.y))?;
                let z = match ctx.snap(&st.base, xy) {
                    Ok(z) => z,
                    Err(e) => {
                        io(writeln!(out, "  does not snap: {e}"))?;
                        continue;
                    }
                };
                nodes.push(z);
                let b = ctx.base(z);
                io(writeln!(
                    out,
                    "  node {:?}: base ({:.4}, {:.4}, {:.1} deg), bin centre ({:.4}, {:.4})",
                    [z.ix, z.iy, z.iphi, z.ex, z.ey],
                    b.x,
                    b.y,
                    b.phi.to_degrees(),
                    ctx.endpoint(z).x,
                    ctx.endpoint(z).y
                ))?;
                let cell = g.cell(z.ex as usize, z.ey as usize);
                for (i, t) in cell.triplets().iter().enumerate() {
                    io(writeln!(
                        out,
                        "  branch {}: ({:.4}, {:.4}, {:.4}) {:?}",
                        i + 1,
                        t.k,
                        t.s0,
                        t.l_tilde,
                        ctx.branch_status(z, i as u8)
                    ))?;
                }
                if !cell.is_feasible() {
                    io(writeln!(out, "  bin stores no shape"))?;
                }
            }
            if let [s, t] = nodes[..] {
                match ctx.interim_targets(s, t) {
                    Ok(v) => {
                        let pts: Vec<String> = v.iter().map(|p| format!("({:.4}, {:.4})", p.x, p.y)).collect();
                        io(writeln!(out, "interim targets: {} [{}]", v.len(), pts.join(", ")))?;
                    }
                    Err(e) => io(writeln!(out, "interim targets: {e}"))?,
                }
            }
        }
        Command::Validate { json } => {
            let r = run_validation()?;
            if json {
                io(writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes")))?;
            } else {
                io(write!(out, "{}", r.records_csv()))?;
                io(write!(out, "{}", r.summary_text()))?;
            }
        }
    }
    Ok(())
}

fn shape_svg(p: &ElasticaParams, l: f64, control_points: bool, path: &PathBuf) -> Result<()> {
    let chain = approximate(p, &BaseFrame::ORIGIN, l)?;
    let b = fit_bounds(std::slice::from_ref(&chain), &[], 0.1 * l);
    let style = SvgStyle { control_points, columns: 1, scale: 300.0 / l };
    let text = render_panels(&[Panel { title: String::new(), chains: vec![chain] }], &b, &[], &style);
    write_svg(&text, path)
}
