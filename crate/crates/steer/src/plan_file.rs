//! JSON plan files: a header with the scene hash and the planner options,
//! then one record per waypoint.

use std::fs;
use std::path::Path;

use elastica_core::planner::{HeuristicMode, PlanResult, PlannerOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SteerError};
use crate::scene::{scene_to_json, SceneFile};

pub const PLAN_FORMAT: &str = "elastica-plan";
pub const PLAN_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsRecord {
    pub a: f64,
    pub clearance: f64,
    pub nx: usize,
    pub ny: usize,
    pub nphi: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub use_waypoints: bool,
    pub heuristic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaypointRecord {
    /// `[ix, iy, iphi, iX, iY]`.
    pub index: [u16; 5],
    /// `[x, y, phi_deg]`.
    pub base: [f64; 3],
    pub endpoint: [f64; 2],
    /// `[k, s0, L~]` in absolute lengths.
    pub triplet: [f64; 3],
    /// 1 for the bin's first shape (larger start curvature), 2 for its mirror.
    pub branch: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub format: String,
    pub version: u32,
    pub scene_sha256: String,
    pub options: OptionsRecord,
    pub grid_n: usize,
    pub cost: f64,
    pub expanded: usize,
    pub interim_targets: Vec<[f64; 2]>,
    pub waypoints: Vec<WaypointRecord>,
}

pub fn scene_hash(f: &SceneFile) -> String {
    crate::hex(&Sha256::digest(scene_to_json(f).as_bytes()))
}

impl PlanFile {
    pub fn new(scene: &SceneFile, options: &PlannerOptions, grid_n: usize, r: &PlanResult) -> Self {
        let waypoints = r
            .path
            .iter()
            .map(|c| WaypointRecord {
                index: [c.node.ix, c.node.iy, c.node.iphi, c.node.ex, c.node.ey],
                base: [c.base.x, c.base.y, c.base.phi.to_degrees()],
                endpoint: [c.endpoint.x, c.endpoint.y],
                triplet: [c.triplet.k, c.triplet.s0, c.triplet.l_tilde],
                branch: c.branch + 1,
            })
            .collect();
        PlanFile {
            format: PLAN_FORMAT.into(),
            version: PLAN_VERSION,
            scene_sha256: scene_hash(scene),
            options: OptionsRecord {
                a: options.a,
                clearance: options.clearance,
                nx: options.nx,
                ny: options.ny,
                nphi: options.nphi,
                n: grid_n,
                use_waypoints: options.use_waypoints,
                heuristic: match options.heuristic {
                    HeuristicMode::Euclidean => "euclidean".into(),
                    HeuristicMode::Zero => "zero".into(),
                },
            },
            grid_n,
            cost: r.cost,
            expanded: r.expanded,
            interim_targets: r.waypoints.iter().map(|p| [p.x, p.y]).collect(),
            waypoints,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let p: PlanFile = serde_json::from_str(text).map_err(SteerError::parse)?;
        if p.format != PLAN_FORMAT || p.version != PLAN_VERSION {
            return Err(SteerError::Semantic(format!("unsupported plan format {} v{}", p.format, p.version)));
        }
        Ok(p)
    }
}

pub fn save_plan(p: &PlanFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, p.to_json()).map_err(|e| SteerError::io(path, e))
}

pub fn load_plan(path: impl AsRef<Path>) -> Result<PlanFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SteerError::io(path, e))?;
    PlanFile::parse(&text)
}
