use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use elastica_core::bezier::approximate;
use elastica_core::grid::{EndpointGrid, GridParams};
use elastica_core::planner::PlanResult;
use elastica_core::{Error, Vec2};
use elastica_steer::error::SteerError;
use elastica_steer::parallel::build_grid;
use elastica_steer::plan_file::PlanFile;
use elastica_steer::planning::{plan_scene, plan_with};
use elastica_steer::scene::{load_scene, parse_scene, scene_to_json, Scene, ShapeSpec};
use elastica_steer::svg::{plan_panels, render_panels, SvgStyle};

fn path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name)
}

fn default_grid() -> &'static EndpointGrid {
    static G: OnceLock<EndpointGrid> = OnceLock::new();
    G.get_or_init(|| build_grid(&GridParams::new(1.0, 0.5), 4).unwrap())
}

fn plan(sc: &Scene) -> elastica_steer::error::Result<PlanResult> {
    if sc.grid == *default_grid().params() {
        plan_scene(sc, default_grid(), 4)
    } else {
        plan_scene(sc, &build_grid(&sc.grid, 4)?, 4)
    }
}

const FIXTURES: [&str; 7] =
    ["minimal", "example1", "example2", "example2_gap029", "example2_gap023", "example2_gap015", "example3"];

#[test]
fn fixtures_round_trip_byte_identical() {
    for name in FIXTURES {
        let file = path(&format!("{name}.json"));
        let text = std::fs::read_to_string(&file).unwrap();
        let sc = parse_scene(&text).unwrap();
        assert_eq!(sc.to_json(), text, "{name}");
        assert_eq!(parse_scene(&sc.to_json()).unwrap(), sc);
    }
}

#[test]
fn example_one_parameters() {
    let sc = load_scene(path("example1.json")).unwrap();
    let b = sc.start.base;
    assert_eq!((b.x, b.y), (0.12, 0.12));
    assert!((b.phi.to_degrees() + 135.0).abs() < 1e-12);
    let ShapeSpec::Elastica(t) = sc.start.shape else { panic!("start is an elastica shape") };
    assert_eq!((t.k, t.s0, t.l_tilde), (0.671, 0.0, 1.0));
    let ShapeSpec::Elastica(t) = sc.target.shape else { panic!("target is an elastica shape") };
    assert_eq!(t.k, 0.707);
    assert!((t.s0 - 0.9).abs() < 1e-12 && (t.l_tilde - 1.12).abs() < 1e-12);
    assert_eq!(sc.obstacles.len(), 1);
}

fn with(text: &str, from: &str, to: &str) -> String {
    assert!(text.contains(from), "{from}");
    text.replacen(from, to, 1)
}

#[test]
fn scene_errors() {
    let base = std::fs::read_to_string(path("example1.json")).unwrap();
    let two = r#"[[-0.35, 0.32], [0.0, 0.32]]"#;
    let bad = with(&base.replace(char::is_whitespace, ""), "[[-0.35,0.32],[0.0,0.32],[0.0,0.7],[-0.35,0.7]]", two);
    assert!(matches!(parse_scene(&bad), Err(SteerError::Semantic(_))));

    let unknown = with(&base, "\"ei\"", "\"stiffness\": 1.0,\n    \"ei\"");
    match parse_scene(&unknown) {
        Err(SteerError::Parse { line, column, .. }) => assert_eq!((line, column), (4, 15)),
        other => panic!("{other:?}"),
    }

    let outside = with(&base, "-0.35", "-0.95");
    assert!(matches!(parse_scene(&outside), Err(SteerError::Semantic(_))));

    let short = with(&base, "1.12", "0.9");
    assert!(matches!(parse_scene(&short), Err(SteerError::Semantic(_))));
}

#[test]
fn endpoint_state_uses_grid_shape() {
    let base = std::fs::read_to_string(path("example2.json")).unwrap().replace(char::is_whitespace, "");
    let text = with(&base, "\"elastica\":[0.707,1.15,1.32]", "\"endpoint\":[-0.07,-0.639]");
    let sc = parse_scene(&text).unwrap();
    assert_eq!(sc.target.shape, ShapeSpec::Endpoint(Vec2::new(-0.07, -0.639)));
    let r = plan(&sc).unwrap();
    let last = r.path.last().unwrap();
    assert!(last.endpoint.dist(Vec2::new(-0.07, -0.639)) < default_grid().params().bin_size());
}

#[test]
fn plan_file_round_trip() {
    let sc = load_scene(path("example3.json")).unwrap();
    let r = plan(&sc).unwrap();
    let f = PlanFile::new(&sc.source, &sc.options, sc.grid.n, &r);
    let text = f.to_json();
    let back = PlanFile::parse(&text).unwrap();
    assert_eq!(back, f);
    assert_eq!(back.to_json(), text);
    assert_eq!(f.scene_sha256.len(), 64);
    assert_eq!(f.waypoints.len(), r.path.len());
    assert!(f.waypoints.iter().all(|w| w.branch == 1 || w.branch == 2));
    for w in f.waypoints.windows(2) {
        let moved: u32 = (0..5).map(|i| w[0].index[i].abs_diff(w[1].index[i]) as u32).filter(|&d| d > 0).count() as u32;
        assert_eq!(moved, 1);
    }
    let other = scene_to_json(&sc.source).replace("0.56", "0.57");
    assert_ne!(elastica_steer::plan_file::scene_hash(&parse_scene(&other).unwrap().source), f.scene_sha256);
}

#[test]
fn example_two_waypoints_beat_plain_search() {
    let sc = load_scene(path("example2.json")).unwrap();
    assert!(sc.options.use_waypoints);
    let guided = plan(&sc).unwrap();
    assert_eq!(guided.waypoints.len(), 3);
    let plain = plan_with(&sc, default_grid(), elastica_core::planner::PlannerOptions { use_waypoints: false, ..sc.options }, 4).unwrap();
    assert!(plain.waypoints.is_empty());
    assert!(guided.expanded < plain.expanded, "{} vs {}", guided.expanded, plain.expanded);
    assert!(plain.cost <= guided.cost + 1e-12);
}

#[test]
fn narrow_gap_has_no_path() {
    let sc = load_scene(path("example2_gap015.json")).unwrap();
    assert!(matches!(plan(&sc), Err(SteerError::Core(Error::NoPath))));
}

#[test]
fn gap_passage_folds_the_cable() {
    let sc = load_scene(path("example2_gap023.json")).unwrap();
    let r = plan(&sc).unwrap();
    let (x0, x1) = (0.35, 0.65);
    let inside: Vec<_> = r.path.iter().filter(|c| c.base.x > x0 && c.base.x < x1).collect();
    assert!(!inside.is_empty());
    let kmax = inside.iter().map(|c| c.triplet.k).fold(0.0, f64::max);
    assert!(kmax < elastica_core::K_MAX + 1e-9);
}

#[test]
fn svg_panels() {
    let sc = load_scene(path("example1.json")).unwrap();
    let r = plan(&sc).unwrap();
    let panels = plan_panels(&r, 1.0, 6).unwrap();
    assert_eq!(panels.len(), 6);
    let arcs: usize = panels.iter().flat_map(|p| &p.chains).map(|c| c.arcs().len()).sum();
    let svg = render_panels(&panels, &sc.workspace, &sc.obstacles, &SvgStyle::default());
    assert_eq!(svg.matches("<path ").count(), arcs);
    assert_eq!(svg.matches("<polygon ").count(), 6 * sc.obstacles.len());

    let mut same = sc.clone();
    same.target = same.start;
    let r = plan(&same).unwrap();
    assert_eq!(r.path.len(), 1);
    assert_eq!(r.cost, 0.0);
    let panels = plan_panels(&r, 1.0, 6).unwrap();
    assert_eq!(panels.len(), 1);
    let start = approximate(&r.path[0].params().unwrap(), &r.path[0].base, 1.0).unwrap();
    assert_eq!(panels[0].chains[0], start);
}
