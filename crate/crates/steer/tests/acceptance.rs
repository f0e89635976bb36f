//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use elastica_core::bezier::{approximate, chain_scene_collision, excess_length};
use elastica_core::elliptic::Modulus;
use elastica_core::grid::{compute_endpoint_samples, EndpointGrid, GridParams};
use elastica_core::planner::PlanResult;
use elastica_core::self_intersection::{brute_force_self_intersection, check_self_intersection, default_eps, tangency_margin};
use elastica_core::stability::classify_stability;
use elastica_core::{BaseFrame, ElasticaParams, Error, StabilityLabel, Vec2, K_MAX};
use elastica_steer::cache::{decode_grid, encode_grid};
use elastica_steer::error::SteerError;
use elastica_steer::parallel::build_grid;
use elastica_steer::plan_file::PlanFile;
use elastica_steer::planning::plan_scene;
use elastica_steer::scene::{load_scene, Scene};
use elastica_steer::validation::{run_validation, REL_THRESHOLD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K_MAX_REF: f64 = 0.855;
const K_C_REF: f64 = 0.909;
const CONSTANT_TOL: f64 = 1e-3;
const CONSTANTS_BUDGET: Duration = Duration::from_secs(1);

const IDENTITY_POINTS: usize = 2500;
const IDENTITY_TOL: f64 = 1e-8;
const DERIVATIVE_TOL: f64 = 1e-6;
const IDENTITY_BUDGET: Duration = Duration::from_secs(10);

const ODE_CASES: usize = 20;
const ODE_STEPS: usize = 20_000;
const ODE_TOL: f64 = 1e-6;

const EXCESS_A: (f64, f64) = (1.6, 0.3);
const EXCESS_B: (f64, f64) = (4.2, 0.5);

const POLYLINE_CASES: usize = 1000;
const POLYLINE_SAMPLES: usize = 2048;
const POLYLINE_AGREEMENT: f64 = 0.99;
/// Arc-length distance to a crossing threshold, as a fraction of the period.
const TANGENCY_BAND: f64 = 0.02;
/// Moduli this close above the fold limit cross only tangentially.
const TANGENCY_K_BAND: f64 = 0.005;

const ENDPOINT_TOL_MM: f64 = 1.0;
const MEAN_ABS_TOL_MM: f64 = 0.15;

const GAP_BUDGET: Duration = Duration::from_secs(600);
const TANGENT_TOL: f64 = 1e-8;
const GRID_SAMPLES: usize = 64_000;
const WORKERS: usize = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Result<Outcome, String>;

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome, String> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes")
}

fn default_grid() -> &'static EndpointGrid {
    static G: OnceLock<EndpointGrid> = OnceLock::new();
    G.get_or_init(|| build_grid(&GridParams::new(1.0, 0.5), WORKERS).expect("default grid builds"))
}

fn grid_for(scene: &Scene) -> Result<EndpointGrid, String> {
    if scene.grid == *default_grid().params() {
        Ok(default_grid().clone())
    } else {
        build_grid(&scene.grid, WORKERS).map_err(err)
    }
}

fn constants() -> Result<Outcome, String> {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_elastica-steer")).arg("constants").output().map_err(err)?;
    let secs = t.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let value = |name: &str| -> Result<f64, String> {
        text.lines()
            .find(|l| l.starts_with(name))
            .and_then(|l| l.split('=').nth(1))
            .and_then(|v| v.split_whitespace().next())
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("no {name} in output"))
    };
    let (km, kc) = (value("k_max")?, value("k_c")?);
    let pass = out.status.success()
        && (km - K_MAX_REF).abs() <= CONSTANT_TOL
        && (kc - K_C_REF).abs() <= CONSTANT_TOL
        && secs < CONSTANTS_BUDGET;
    outcome(pass, format!("k_max {km:.6}, k_c {kc:.6}, {:.3} s", secs.as_secs_f64()))
}

fn identities() -> Result<Outcome, String> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut jac, mut ham, mut der) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..IDENTITY_POINTS {
        let k = rng.random_range(0.0..0.999);
        let u = rng.random_range(-20.0..20.0);
        let m = Modulus::new(k).map_err(err)?;
        let (sn, cn, dn) = m.sn_cn_dn(u);
        jac = jac.max((sn * sn + cn * cn - 1.0).abs()).max((dn * dn + k * k * sn * sn - 1.0).abs());
        let h = 1e-5;
        let dam = (m.am(u + h) - m.am(u - h)) / (2.0 * h);
        der = der.max((dam - dn).abs() / dn.abs().max(1.0));
    }
    for _ in 0..IDENTITY_POINTS {
        let k = rng.random_range(0.01..0.99);
        let lt = rng.random_range(0.5..3.0);
        let s0 = rng.random_range(0.0..lt);
        let s = rng.random_range(0.0..2.0);
        let p = ElasticaParams::new(k, s0, lt).map_err(err)?;
        ham = ham.max(p.hamiltonian_residual(s, 1.0));
        let h = 1e-5 * lt;
        let o = BaseFrame::ORIGIN;
        let amp = 2.0 * k * p.sqrt_lambda();
        let fd_phi = (p.tangent_angle(s + h, &o) - p.tangent_angle(s - h, &o)) / (2.0 * h);
        let fd_kappa = (p.curvature(s + h) - p.curvature(s - h)) / (2.0 * h);
        let fd_xy = (p.point(s + h, &o) - p.point(s - h, &o)) * (1.0 / (2.0 * h));
        let phi = p.tangent_angle(s, &o);
        der = der
            .max((fd_phi - p.curvature(s)).abs() / amp)
            .max((fd_kappa - p.curvature_derivative(s)).abs() / (amp * p.sqrt_lambda()))
            .max(fd_xy.dist(Vec2::from_angle(phi)));
    }
    let secs = t.elapsed();
    let pass = jac < IDENTITY_TOL && ham < IDENTITY_TOL && der < DERIVATIVE_TOL && secs < IDENTITY_BUDGET;
    outcome(
        pass,
        format!(
            "{IDENTITY_POINTS} (u, k) and {IDENTITY_POINTS} (s, shape) points: jacobi {jac:.1e}, first integral {ham:.1e}, derivatives {der:.1e}, {:.2} s",
            secs.as_secs_f64()
        ),
    )
}

// State (x, y, phi, kappa, kappa') of the planar elastica,
// kappa'' = lambda (2k^2 - 1) kappa - kappa^3 / 2.
fn integrate(p: &ElasticaParams, l: f64, steps: usize) -> Vec2 {
    let c = p.lambda() * (2.0 * p.k() * p.k() - 1.0);
    let f = |y: [f64; 5]| [y[2].cos(), y[2].sin(), y[3], y[4], c * y[3] - 0.5 * y[3].powi(3)];
    let mut y = [0.0, 0.0, 0.0, p.curvature(0.0), p.curvature_derivative(0.0)];
    let h = l / steps as f64;
    let add = |a: [f64; 5], b: [f64; 5], s: f64| core::array::from_fn(|i| a[i] + s * b[i]);
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(add(y, k1, 0.5 * h));
        let k3 = f(add(y, k2, 0.5 * h));
        let k4 = f(add(y, k3, h));
        y = core::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    Vec2::new(y[0], y[1])
}

fn ode_oracle() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let l = 1.0;
    let mut worst = 0.0f64;
    for _ in 0..ODE_CASES {
        let k = rng.random_range(0.05..0.95);
        let lt = rng.random_range(1.0..2.5);
        let s0 = rng.random_range(0.0..lt);
        let p = ElasticaParams::new(k, s0, lt).map_err(err)?;
        worst = worst.max(p.relative_endpoint(l).dist(integrate(&p, l, ODE_STEPS)));
    }
    outcome(worst < ODE_TOL * l, format!("{ODE_CASES} shapes, worst endpoint gap {worst:.2e} L"))
}

fn excess() -> Result<Outcome, String> {
    let pct = |k: f64, s0: f64, l: f64| -> Result<f64, String> {
        let p = ElasticaParams::new(k, s0, 1.0).map_err(err)?;
        let c = approximate(&p, &BaseFrame::ORIGIN, l).map_err(err)?;
        Ok(100.0 * excess_length(&c, l))
    };
    let a = pct(0.7746, 0.0, 1.0)?;
    let b = pct(0.8515, 0.916, 2.0 / 3.0)?;
    let pass = (a - EXCESS_A.0).abs() <= EXCESS_A.1 && (b - EXCESS_B.0).abs() <= EXCESS_B.1;
    outcome(pass, format!("full period {a:.3}%, two-thirds period {b:.3}%"))
}

fn self_intersection() -> Result<Outcome, String> {
    let check = |k: f64, lt: f64, s0: f64| check_self_intersection(k, lt, s0, 1.0, default_eps(lt)).map_err(err);
    let pairs = !check(0.88, 1.0, 0.23)? && check(0.88, 1.0, 0.20)? && !check(0.99, 2.7, 0.75 * 2.7)? && check(0.99, 2.5, 0.75 * 2.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut agree, mut crossing, mut outside_band) = (0usize, 0usize, 0usize);
    for _ in 0..POLYLINE_CASES {
        let k = rng.random_range(0.80..0.995);
        let lt = rng.random_range(1.0..3.0);
        let s0 = rng.random_range(0.0..lt);
        let a = check(k, lt, s0)?;
        let b = brute_force_self_intersection(k, lt, s0, 1.0, POLYLINE_SAMPLES).map_err(err)?;
        crossing += usize::from(a);
        if a == b {
            agree += 1;
            continue;
        }
        let margin = tangency_margin(k, lt, s0, 1.0, default_eps(lt)).map_err(err)?;
        let in_band = k - K_MAX < TANGENCY_K_BAND || margin.is_some_and(|m| m < TANGENCY_BAND * lt);
        outside_band += usize::from(!in_band);
    }
    let rate = agree as f64 / POLYLINE_CASES as f64;
    let pass = pairs && rate >= POLYLINE_AGREEMENT && outside_band == 0;
    outcome(
        pass,
        format!(
            "reference pairs {}, polyline agreement {:.1}% ({crossing} crossing), {outside_band} disagreements outside the tangency band",
            if pairs { "reproduced" } else { "differ" },
            100.0 * rate
        ),
    )
}

fn appendix_validation() -> Result<Outcome, String> {
    let r = run_validation().map_err(err)?;
    let end = r.shapes.iter().map(|s| s.endpoint_error).fold(0.0, f64::max);
    let mean = r.shapes.iter().map(|s| (s.mean_abs - s.reported_mean_abs).abs()).fold(0.0, f64::max);
    let counts = r.rel_over_threshold == r.reported_rel_over_threshold;
    let pass = end <= ENDPOINT_TOL_MM && mean <= MEAN_ABS_TOL_MM && (!r.fallback || counts);
    outcome(
        pass,
        format!(
            "endpoints within {end:.3} mm, mean abs errors within {mean:.3} mm; station deviation {:.2} mm ({}); {} errors above {REL_THRESHOLD}% (tables {})",
            r.max_station_deviation,
            if r.fallback { "fallback to tabulated points" } else { "uniform stations" },
            r.rel_over_threshold,
            r.reported_rel_over_threshold
        ),
    )
}

fn gap_family() -> Result<Outcome, String> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, expect_path) in [("example2_gap029", true), ("example2_gap023", true), ("example2_gap015", false)] {
        let sc = load_scene(scenes_dir().join(format!("{name}.json"))).map_err(err)?;
        let g = grid_for(&sc)?;
        let res = (sc.options.nx, sc.options.ny, sc.options.nphi, sc.grid.n) == (48, 48, 24, 50);
        let t = Instant::now();
        let r = plan_scene(&sc, &g, WORKERS);
        let secs = t.elapsed();
        let got = match &r {
            Ok(_) => "path",
            Err(SteerError::Core(Error::NoPath)) => "no path",
            Err(_) => "error",
        };
        let ok = res && secs < GAP_BUDGET && if expect_path { r.is_ok() } else { got == "no path" };
        pass &= ok;
        parts.push(format!("{name} {got} {:.2} s", secs.as_secs_f64()));
    }
    outcome(pass, parts.join(", "))
}

fn waypoint_violations(sc: &Scene, r: &PlanResult) -> Result<(usize, f64), String> {
    let l = sc.cable.length;
    let mut bad = 0;
    let mut dphi = 0.0f64;
    for c in &r.path {
        let p = c.params().map_err(err)?;
        let t = c.triplet;
        let chain = approximate(&p, &c.base, l).map_err(err)?;
        let tangent = p.tangent_change(l).abs();
        dphi = dphi.max(tangent);
        let ok = classify_stability(&p, l) != StabilityLabel::Unstable
            && !check_self_intersection(t.k, t.l_tilde, t.s0, l, default_eps(t.l_tilde)).map_err(err)?
            && !chain_scene_collision(&chain, &sc.obstacles, sc.options.clearance).map_err(err)?
            && tangent < TANGENT_TOL;
        bad += usize::from(!ok);
    }
    Ok((bad, dphi))
}

fn path_validity() -> Result<Outcome, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenes_dir())
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let (mut plans, mut waypoints, mut bad, mut dphi) = (0, 0, 0, 0.0f64);
    for f in &files {
        let sc = load_scene(f).map_err(err)?;
        let g = grid_for(&sc)?;
        let r = match plan_scene(&sc, &g, WORKERS) {
            Ok(r) => r,
            Err(SteerError::Core(Error::NoPath)) => continue,
            Err(e) => return Err(format!("{}: {e}", f.display())),
        };
        let (b, d) = waypoint_violations(&sc, &r)?;
        plans += 1;
        waypoints += r.path.len();
        bad += b;
        dphi = dphi.max(d);
    }
    outcome(
        bad == 0 && plans > 0,
        format!("{plans} plans over {} fixtures, {waypoints} waypoints, {bad} failing, max |dphi| {dphi:.1e}", files.len()),
    )
}

fn plan_bytes(name: &str, workers: usize) -> Result<String, String> {
    let sc = load_scene(scenes_dir().join(format!("{name}.json"))).map_err(err)?;
    let g = grid_for(&sc)?;
    let r = plan_scene(&sc, &g, workers).map_err(err)?;
    Ok(PlanFile::new(&sc.source, &sc.options, sc.grid.n, &r).to_json())
}

fn determinism() -> Result<Outcome, String> {
    let p = GridParams::new(1.0, 0.5);
    let grids: Vec<Vec<u8>> = [1, WORKERS, 1, WORKERS]
        .iter()
        .map(|&w| build_grid(&p, w).map(|g| encode_grid(&g)).map_err(err))
        .collect::<Result<_, _>>()?;
    let grid_same = grids.windows(2).all(|w| w[0] == w[1]);
    let mut plan_same = true;
    for name in ["example2", "example2_gap029"] {
        let runs: Vec<String> = [1, WORKERS, 1, WORKERS].iter().map(|&w| plan_bytes(name, w)).collect::<Result<_, _>>()?;
        plan_same &= runs.windows(2).all(|w| w[0] == w[1]);
    }
    outcome(
        grid_same && plan_same,
        format!(
            "grid bytes {}, plan bytes {} (workers 1 and {WORKERS}, two runs each)",
            if grid_same { "identical" } else { "differ" },
            if plan_same { "identical" } else { "differ" }
        ),
    )
}

fn endpoint_grid() -> Result<Outcome, String> {
    let p = GridParams::new(1.0, 0.5);
    let samples = compute_endpoint_samples(&p).map_err(err)?.len();
    let g = default_grid();
    let mut stored = 0;
    let mut strays = 0;
    for (ix, iy) in g.feasible_bins() {
        for t in g.cell(ix, iy).triplets() {
            stored += 1;
            let e = ElasticaParams::from_triplet(*t).map_err(err)?.relative_endpoint(p.length);
            strays += usize::from(g.bin_of(e).ok() != Some((ix, iy)));
        }
    }
    let cache = decode_grid(&encode_grid(g)).map_err(err)? == *g;
    let pass = samples == GRID_SAMPLES && p.sample_count() == GRID_SAMPLES && strays == 0 && cache;
    outcome(
        pass,
        format!(
            "{samples} samples, {} feasible bins, {stored} stored triplets, {strays} outside their bin, cache round trip {}",
            g.feasible_count(),
            if cache { "exact" } else { "differs" }
        ),
    )
}

fn main() {
    let checks: [(&str, Check); 10] = [
        ("constants", constants),
        ("elliptic and elastica identities", identities),
        ("closed form vs ODE integration", ode_oracle),
        ("Bezier excess lengths", excess),
        ("self-intersection", self_intersection),
        ("static cable-tie validation", appendix_validation),
        ("gap feasibility flips", gap_family),
        ("path validity", path_validity),
        ("determinism", determinism),
        ("endpoint grid", endpoint_grid),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t = Instant::now();
        let o = f().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {} {name}: {} [{:.2} s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
