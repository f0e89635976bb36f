//! JSON scene files.
//!
//! Lengths are in the cable's unit, base angles in degrees. Elastica shapes
//! are given as `[k, s0 / L, L~ / L]`, endpoints as `[XL, YL]` in the base
//! frame.

use std::fs;
use std::path::Path;

use elastica_core::geometry::Aabb;
use elastica_core::grid::{EndpointGrid, GridParams};
use elastica_core::planner::{default_clearance, HeuristicMode, PlannerOptions};
use elastica_core::{BaseFrame, CableSpec, ElasticaParams, Polygon, Triplet, Vec2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableSection {
    pub length: f64,
    pub ei: f64,
    pub rho_flat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceSection {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub base: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elastica: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSection {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<f64>,
    #[serde(default = "n64")]
    pub nx: usize,
    #[serde(default = "n64")]
    pub ny: usize,
    #[serde(default = "n36")]
    pub nphi: usize,
    #[serde(rename = "N", default = "n50")]
    pub n: usize,
    #[serde(default)]
    pub use_waypoints: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_expansions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub n_k: usize,
    pub n_s0: usize,
    pub n_lt: usize,
}

fn one() -> f64 {
    1.0
}
fn n64() -> usize {
    64
}
fn n36() -> usize {
    36
}
fn n50() -> usize {
    50
}

impl Default for PlannerSection {
    fn default() -> Self {
        PlannerSection { a: 1.0, clearance: None, nx: 64, ny: 64, nphi: 36, n: 50, use_waypoints: false, max_expansions: None }
    }
}

/// Raw file content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub cable: CableSection,
    pub workspace: WorkspaceSection,
    #[serde(default)]
    pub obstacles: Vec<Vec<[f64; 2]>>,
    pub start: StateSection,
    pub target: StateSection,
    #[serde(default)]
    pub planner: PlannerSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSection>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeSpec {
    Elastica(Triplet),
    Endpoint(Vec2),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub base: BaseFrame,
    pub shape: ShapeSpec,
}

/// Validated scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub source: SceneFile,
    pub cable: CableSpec,
    pub workspace: Aabb,
    pub obstacles: Vec<Polygon>,
    pub start: StateSpec,
    pub target: StateSpec,
    pub options: PlannerOptions,
    pub grid: GridParams,
}

fn semantic(msg: impl Into<String>) -> SteerError {
    SteerError::Semantic(msg.into())
}

fn state(s: &StateSection, which: &str, cable: &CableSpec, ws: &Aabb) -> Result<StateSpec> {
    let [x, y, deg] = s.base;
    if !(x.is_finite() && y.is_finite() && deg.is_finite()) {
        return Err(semantic(format!("{which}: base must be finite")));
    }
    if x < ws.min.x || x > ws.max.x || y < ws.min.y || y > ws.max.y {
        return Err(semantic(format!("{which}: base lies outside the workspace")));
    }
    let base = BaseFrame::new(x, y, deg.to_radians());
    let l = cable.length;
    let shape = match (s.elastica, s.endpoint) {
        (Some([k, s0, lt]), None) => {
            let t = Triplet::new(k, s0 * l, lt * l);
            ElasticaParams::from_triplet(t).map_err(|e| semantic(format!("{which}: {e}")))?;
            if t.l_tilde < l * (1.0 - 1e-12) || t.l_tilde > cable.max_l_tilde() * (1.0 + 1e-12) {
                return Err(semantic(format!("{which}: full period must lie in [L, L/rho]")));
            }
            ShapeSpec::Elastica(t)
        }
        (None, Some([xl, yl])) => {
            if !(Vec2::new(xl, yl).norm() <= l) {
                return Err(semantic(format!("{which}: endpoint farther than the cable length")));
            }
            ShapeSpec::Endpoint(Vec2::new(xl, yl))
        }
        _ => return Err(semantic(format!("{which}: give exactly one of `elastica` or `endpoint`"))),
    };
    Ok(StateSpec { base, shape })
}

impl Scene {
    pub fn from_file(f: SceneFile) -> Result<Scene> {
        let c = &f.cable;
        let cable = CableSpec::new(c.length, c.ei, c.rho_flat).map_err(|e| semantic(format!("cable: {e}")))?;
        let [x0, y0] = f.workspace.min;
        let [x1, y1] = f.workspace.max;
        if !(x1 > x0 && y1 > y0) {
            return Err(semantic("workspace: max must exceed min in both coordinates"));
        }
        let workspace = Aabb { min: Vec2::new(x0, y0), max: Vec2::new(x1, y1) };
        let mut obstacles = Vec::with_capacity(f.obstacles.len());
        for (i, o) in f.obstacles.iter().enumerate() {
            let pts: Vec<Vec2> = o.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
            let p = Polygon::new(pts).map_err(|e| semantic(format!("obstacle {i}: {e}")))?;
            let inside = p.vertices().iter().all(|v| v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1);
            if !inside {
                return Err(semantic(format!("obstacle {i} extends outside the workspace")));
            }
            obstacles.push(p);
        }
        let start = state(&f.start, "start", &cable, &workspace)?;
        let target = state(&f.target, "target", &cable, &workspace)?;
        let p = &f.planner;
        let clearance = p.clearance.unwrap_or_else(|| default_clearance(cable.length, 0.0));
        if !(p.a > 0.0) || !(clearance >= 0.0) {
            return Err(semantic("planner: need a > 0 and clearance >= 0"));
        }
        let mut options = PlannerOptions {
            a: p.a,
            clearance,
            nx: p.nx,
            ny: p.ny,
            nphi: p.nphi,
            heuristic: HeuristicMode::Euclidean,
            use_waypoints: p.use_waypoints,
            ..PlannerOptions::new(cable.length)
        };
        if let Some(m) = p.max_expansions {
            options.max_expansions = m;
        }
        let mut grid = GridParams { n: p.n, ..GridParams::new(cable.length, cable.rho_flat) };
        if let Some(s) = &f.sampling {
            grid.n_k = s.n_k;
            grid.n_s0 = s.n_s0;
            grid.n_lt = s.n_lt;
        }
        grid.validate().map_err(|e| semantic(format!("grid: {e}")))?;
        elastica_core::planner::Dims::new(p.nx, p.ny, p.nphi, p.n).map_err(|e| semantic(format!("planner: {e}")))?;
        Ok(Scene { source: f, cable, workspace, obstacles, start, target, options, grid })
    }

    pub fn to_json(&self) -> String {
        scene_to_json(&self.source)
    }
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let f: SceneFile = serde_json::from_str(text).map_err(SteerError::parse)?;
    Scene::from_file(f)
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SteerError::io(path, e))?;
    parse_scene(&text)
}

pub fn scene_to_json(f: &SceneFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("scene serializes");
    s.push('\n');
    s
}

pub fn save_scene(f: &SceneFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, scene_to_json(f)).map_err(|e| SteerError::io(path, e))
}

/// Shape and relative endpoint of a start or target state. Endpoint states
/// take the first shape stored in the endpoint's grid bin.
pub fn resolve_state(s: &StateSpec, grid: &EndpointGrid, cable: &CableSpec) -> Result<(Triplet, Vec2)> {
    match s.shape {
        ShapeSpec::Elastica(t) => {
            let p = ElasticaParams::from_triplet(t)?;
            Ok((t, p.relative_endpoint(cable.length)))
        }
        ShapeSpec::Endpoint(xy) => {
            let t = grid.query_cell(xy)?.ok_or(elastica_core::Error::EmptyCell)?;
            Ok((t[0], xy))
        }
    }
}
