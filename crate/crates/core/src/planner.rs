//! A* search over the five-dimensional grid of base poses and relative
//! endpoint bins.
//!
//! A node is feasible when at least one of the shapes stored in its endpoint
//! bin, placed at its base pose, stays inside the workspace and clear of the
//! grown obstacles. Feasibility is computed lazily in batches through a
//! [`MaskEvaluator`] so callers can evaluate neighbours in parallel.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::HashMap;

use crate::bezier::{approximate, BezierChain, InflatedObstacle, HAUSDORFF_BOUND};
use crate::elastica::{BaseFrame, CableSpec, ElasticaParams, Triplet};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Aabb, Polygon, Vec2};
use crate::grid::EndpointGrid;
use crate::self_intersection::{check_self_intersection, default_eps};
use crate::stability::{classify_stability, StabilityLabel};
use crate::visibility::intermediate_targets;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicMode {
    Euclidean,
    /// Uniform-cost search, used as a reference.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerOptions {
    /// Weight of the squared angle difference.
    pub a: f64,
    /// Obstacle growth, absolute length.
    pub clearance: f64,
    pub nx: usize,
    pub ny: usize,
    pub nphi: usize,
    pub heuristic: HeuristicMode,
    pub use_waypoints: bool,
    /// Keep every shape inside the workspace rectangle.
    pub confine: bool,
    pub max_expansions: usize,
}

impl PlannerOptions {
    pub fn new(length: f64) -> Self {
        PlannerOptions {
            a: 1.0,
            clearance: default_clearance(length, 0.0),
            nx: 64,
            ny: 64,
            nphi: 36,
            heuristic: HeuristicMode::Euclidean,
            use_waypoints: false,
            confine: true,
            max_expansions: 50_000_000,
        }
    }
}

/// Half the chain approximation bound plus a user margin.
pub fn default_clearance(length: f64, margin: f64) -> f64 {
    0.5 * HAUSDORFF_BOUND * length + margin
}

/// Grid indices of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub ix: u16,
    pub iy: u16,
    pub iphi: u16,
    pub ex: u16,
    pub ey: u16,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dims {
    pub nx: usize,
    pub ny: usize,
    pub nphi: usize,
    pub n: usize,
}

impl Dims {
    pub fn new(nx: usize, ny: usize, nphi: usize, n: usize) -> Result<Self> {
        if nx < 2 || ny < 2 || nphi < 1 || n < 1 {
            return Err(Error::InvalidParams("grid resolution too small"));
        }
        let total = (nx as u64) * (ny as u64) * (nphi as u64) * (n as u64) * (n as u64);
        if total > u32::MAX as u64 || nx.max(ny).max(nphi).max(n) > u16::MAX as usize {
            return Err(Error::InvalidParams("configuration grid too large"));
        }
        Ok(Dims { nx, ny, nphi, n })
    }

    #[inline]
    pub fn pack(&self, z: Node) -> u32 {
        let v = (((z.ix as usize * self.ny + z.iy as usize) * self.nphi + z.iphi as usize) * self.n + z.ex as usize)
            * self.n
            + z.ey as usize;
        v as u32
    }

    #[inline]
    pub fn unpack(&self, v: u32) -> Node {
        let mut v = v as usize;
        let ey = v % self.n;
        v /= self.n;
        let ex = v % self.n;
        v /= self.n;
        let iphi = v % self.nphi;
        v /= self.nphi;
        let iy = v % self.ny;
        let ix = v / self.ny;
        Node { ix: ix as u16, iy: iy as u16, iphi: iphi as u16, ex: ex as u16, ey: ey as u16 }
    }
}

/// Axis-aligned unit moves, in the fixed order x-, x+, y-, y+, phi-, phi+,
/// X-, X+, Y-, Y+. The returned axis index is `0..5`.
pub fn neighbors(z: Node, dims: &Dims, grid: &EndpointGrid) -> Vec<(Node, usize)> {
    let mut out = Vec::with_capacity(10);
    let mut push = |n: Node, axis: usize| {
        if axis < 3 || grid.cell(n.ex as usize, n.ey as usize).is_feasible() {
            out.push((n, axis));
        }
    };
    if z.ix > 0 {
        push(Node { ix: z.ix - 1, ..z }, 0);
    }
    if (z.ix as usize) + 1 < dims.nx {
        push(Node { ix: z.ix + 1, ..z }, 0);
    }
    if z.iy > 0 {
        push(Node { iy: z.iy - 1, ..z }, 1);
    }
    if (z.iy as usize) + 1 < dims.ny {
        push(Node { iy: z.iy + 1, ..z }, 1);
    }
    let m = dims.nphi as u16;
    if m >= 2 {
        push(Node { iphi: (z.iphi + m - 1) % m, ..z }, 2);
        if m >= 3 {
            push(Node { iphi: (z.iphi + 1) % m, ..z }, 2);
        }
    }
    if z.ex > 0 {
        push(Node { ex: z.ex - 1, ..z }, 3);
    }
    if (z.ex as usize) + 1 < dims.n {
        push(Node { ex: z.ex + 1, ..z }, 3);
    }
    if z.ey > 0 {
        push(Node { ey: z.ey - 1, ..z }, 4);
    }
    if (z.ey as usize) + 1 < dims.n {
        push(Node { ey: z.ey + 1, ..z }, 4);
    }
    out
}

/// One configuration along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableConfig {
    pub node: Node,
    pub base: BaseFrame,
    /// Bin centre of the relative endpoint.
    pub endpoint: Vec2,
    pub triplet: Triplet,
    pub branch: u8,
}

impl CableConfig {
    pub fn params(&self) -> Result<ElasticaParams> {
        ElasticaParams::from_triplet(self.triplet)
    }

    /// Distal endpoint in the world frame.
    pub fn distal(&self) -> Vec2 {
        self.base.to_world(self.endpoint)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub path: Vec<CableConfig>,
    pub cost: f64,
    pub expanded: usize,
    /// Intermediate distal targets actually used, empty for a direct search.
    pub waypoints: Vec<Vec2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchStatus {
    Free,
    /// The bin stores fewer shapes.
    Missing,
    /// Unstable, self-intersecting, unequal tangents or no chain.
    Inadmissible,
    OutsideWorkspace,
    Collides,
}

/// Computes feasibility masks for a batch of packed nodes.
pub trait MaskEvaluator {
    fn evaluate(&self, ctx: &PlanContext<'_>, nodes: &[u32], out: &mut [u8]);
}

pub struct SerialEvaluator;

impl MaskEvaluator for SerialEvaluator {
    fn evaluate(&self, ctx: &PlanContext<'_>, nodes: &[u32], out: &mut [u8]) {
        for (o, &v) in out.iter_mut().zip(nodes) {
            *o = ctx.mask(ctx.dims.unpack(v));
        }
    }
}

/// Scene data prepared for search.
pub struct PlanContext<'a> {
    pub grid: &'a EndpointGrid,
    pub cable: CableSpec,
    pub workspace: Aabb,
    pub options: PlannerOptions,
    pub dims: Dims,
    obstacles: Vec<Polygon>,
    inflated: Vec<InflatedObstacle>,
    local: Vec<[Option<BezierChain>; 2]>,
    steps: [f64; 5],
}

fn admissible(t: &Triplet, l: f64) -> Option<BezierChain> {
    let p = ElasticaParams::from_triplet(*t).ok()?;
    if classify_stability(&p, l) == StabilityLabel::Unstable {
        return None;
    }
    if check_self_intersection(t.k, t.l_tilde, t.s0, l, default_eps(t.l_tilde)).ok()? {
        return None;
    }
    if p.tangent_change(l).abs() >= 1e-8 {
        return None;
    }
    approximate(&p, &BaseFrame::ORIGIN, l).ok()
}

impl<'a> PlanContext<'a> {
    pub fn new(
        grid: &'a EndpointGrid,
        cable: CableSpec,
        workspace: Aabb,
        obstacles: Vec<Polygon>,
        options: PlannerOptions,
    ) -> Result<Self> {
        if (grid.params().length - cable.length).abs() > 1e-12 * cable.length {
            return Err(Error::InvalidParams("grid was built for a different cable length"));
        }
        if !(options.a > 0.0) {
            return Err(Error::InvalidParams("angle weight must be positive"));
        }
        if !(workspace.max.x > workspace.min.x && workspace.max.y > workspace.min.y) {
            return Err(Error::InvalidParams("empty workspace"));
        }
        let dims = Dims::new(options.nx, options.ny, options.nphi, grid.n())?;
        let inflated = obstacles
            .iter()
            .map(|p| InflatedObstacle::new(p, options.clearance))
            .collect::<Result<Vec<_>>>()?;
        let l = cable.length;
        let local = grid
            .cells()
            .iter()
            .map(|c| {
                let t = c.triplets();
                [t.first().and_then(|t| admissible(t, l)), t.get(1).and_then(|t| admissible(t, l))]
            })
            .collect();
        let hx = (workspace.max.x - workspace.min.x) / (dims.nx - 1) as f64;
        let hy = (workspace.max.y - workspace.min.y) / (dims.ny - 1) as f64;
        let hphi = libm::sqrt(options.a) * core::f64::consts::TAU / dims.nphi as f64;
        let hb = grid.params().bin_size();
        Ok(PlanContext {
            grid,
            cable,
            workspace,
            options,
            dims,
            obstacles,
            inflated,
            local,
            steps: [hx, hy, hphi, hb, hb],
        })
    }

    #[inline]
    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    #[inline]
    pub fn step_costs(&self) -> [f64; 5] {
        self.steps
    }

    pub fn base(&self, z: Node) -> BaseFrame {
        let ws = &self.workspace;
        BaseFrame::new(
            ws.min.x + z.ix as f64 * self.steps[0],
            ws.min.y + z.iy as f64 * self.steps[1],
            z.iphi as f64 * core::f64::consts::TAU / self.dims.nphi as f64,
        )
    }

    pub fn endpoint(&self, z: Node) -> Vec2 {
        self.grid.bin_center(z.ex as usize, z.ey as usize)
    }

    pub fn distal(&self, z: Node) -> Vec2 {
        self.base(z).to_world(self.endpoint(z))
    }

    /// Distal-endpoint waypoints between two nodes, obstacles grown by
    /// clearance plus one endpoint bin.
    pub fn interim_targets(&self, from: Node, to: Node) -> Result<Vec<Vec2>> {
        let inflate = self.options.clearance + self.grid.params().bin_size();
        intermediate_targets(self.distal(from), self.distal(to), &self.obstacles, inflate)
    }

    /// Nearest grid node for a base frame and relative endpoint.
    pub fn snap(&self, base: &BaseFrame, endpoint: Vec2) -> Result<Node> {
        let ws = &self.workspace;
        let fx = (base.x - ws.min.x) / self.steps[0];
        let fy = (base.y - ws.min.y) / self.steps[1];
        if !(fx > -0.5 && fy > -0.5 && fx < self.dims.nx as f64 - 0.5 && fy < self.dims.ny as f64 - 0.5) {
            return Err(Error::OutOfBounds);
        }
        let m = self.dims.nphi as f64;
        let fp = libm::round(crate::num::rem_euclid(base.phi, core::f64::consts::TAU) / core::f64::consts::TAU * m);
        let (ex, ey) = self.grid.bin_of(endpoint)?;
        Ok(Node {
            ix: libm::round(fx) as u16,
            iy: libm::round(fy) as u16,
            iphi: (fp as usize % self.dims.nphi) as u16,
            ex: ex as u16,
            ey: ey as u16,
        })
    }

    fn chain_status(&self, chain: &BezierChain, base: &BaseFrame) -> BranchStatus {
        let ws = &self.workspace;
        let inside = |p: Vec2| p.x >= ws.min.x && p.x <= ws.max.x && p.y >= ws.min.y && p.y <= ws.max.y;
        for a in chain.arcs() {
            let w = a.transformed(base);
            if self.options.confine && !(inside(w.p_start) && inside(w.q_ctrl) && inside(w.p_end)) {
                return BranchStatus::OutsideWorkspace;
            }
            if self.inflated.iter().any(|o| o.collides_arc(&w)) {
                return BranchStatus::Collides;
            }
        }
        BranchStatus::Free
    }

    /// Why branch `b` of node `z` is or is not usable.
    pub fn branch_status(&self, z: Node, b: u8) -> BranchStatus {
        let cell = z.ey as usize * self.dims.n + z.ex as usize;
        let stored = self.grid.cells()[cell].triplets().len();
        if b as usize >= stored {
            return BranchStatus::Missing;
        }
        match &self.local[cell][b as usize] {
            None => BranchStatus::Inadmissible,
            Some(c) => self.chain_status(c, &self.base(z)),
        }
    }

    /// Bit `b` is set when branch `b` of the node's bin is admissible and
    /// collision free.
    pub fn mask(&self, z: Node) -> u8 {
        let cell = z.ey as usize * self.dims.n + z.ex as usize;
        let base = self.base(z);
        let mut m = 0;
        for (b, chain) in self.local[cell].iter().enumerate() {
            if let Some(c) = chain {
                if self.chain_status(c, &base) == BranchStatus::Free {
                    m |= 1 << b;
                }
            }
        }
        m
    }

    /// World-frame chain for branch `branch` of node `z`.
    pub fn chain(&self, z: Node, branch: u8) -> Option<BezierChain> {
        let cell = z.ey as usize * self.dims.n + z.ex as usize;
        self.local[cell].get(branch as usize)?.as_ref().map(|c| c.transformed(&self.base(z)))
    }

    pub fn heuristic(&self, z: Node, t: Node) -> f64 {
        match self.options.heuristic {
            HeuristicMode::Zero => 0.0,
            HeuristicMode::Euclidean => self.distance(z, t),
        }
    }

    /// Weighted Euclidean distance in configuration space.
    pub fn distance(&self, z: Node, t: Node) -> f64 {
        self.distance_to(z, &self.base(t), self.endpoint(t))
    }

    /// Distance to an off-grid configuration.
    pub fn distance_to(&self, z: Node, bt: &BaseFrame, et: Vec2) -> f64 {
        let (bz, ez) = (self.base(z), self.endpoint(z));
        let dphi = wrap_angle(bz.phi - bt.phi);
        libm::sqrt(
            (bz.x - bt.x) * (bz.x - bt.x)
                + (bz.y - bt.y) * (bz.y - bt.y)
                + self.options.a * dphi * dphi
                + (ez.x - et.x) * (ez.x - et.x)
                + (ez.y - et.y) * (ez.y - et.y),
        )
    }

    fn config(&self, z: Node, branch: u8) -> CableConfig {
        let cell = self.grid.cell(z.ex as usize, z.ey as usize);
        CableConfig {
            node: z,
            base: self.base(z),
            endpoint: self.endpoint(z),
            triplet: cell.triplets()[branch as usize],
            branch,
        }
    }

    /// Branch of the node's bin whose triplet is closest to `t`.
    pub fn closest_branch(&self, z: Node, t: &Triplet) -> u8 {
        let cell = self.grid.cell(z.ex as usize, z.ey as usize);
        let d = |u: &Triplet| {
            let ds = libm::fabs(libm::remainder(u.s0 - t.s0, t.l_tilde.max(u.l_tilde)));
            (u.k - t.k).abs() + ds / t.l_tilde + (u.l_tilde - t.l_tilde).abs() / t.l_tilde
        };
        let ts = cell.triplets();
        (0..ts.len()).min_by(|&a, &b| d(&ts[a]).total_cmp(&d(&ts[b]))).unwrap_or(0) as u8
    }
}

#[derive(Debug, Clone, Copy)]
struct Open {
    f: f64,
    h: f64,
    g: f64,
    idx: u32,
}

impl PartialEq for Open {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Open {
    // Reversed so the max-heap pops the smallest (f, h, idx).
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f).then(o.h.total_cmp(&self.h)).then(o.idx.cmp(&self.idx))
    }
}

#[derive(Debug, Clone, Copy)]
struct Rec {
    g: f64,
    parent: u32,
    mask: u8,
    branch: u8,
    closed: bool,
    known: bool,
}

const UNKNOWN: Rec = Rec { g: f64::INFINITY, parent: u32::MAX, mask: 0, branch: 0, closed: false, known: false };

#[derive(Debug, Clone, Copy)]
enum Goal {
    Node(Node),
    /// Distal point within `radius` of `point`; guided towards the target
    /// base frame holding `point` as its endpoint.
    Distal { point: Vec2, radius: f64, base: BaseFrame },
}

struct Leg {
    path: Vec<CableConfig>,
    cost: f64,
}

fn search<E: MaskEvaluator>(
    ctx: &PlanContext<'_>,
    eval: &E,
    start: Node,
    start_branch: u8,
    goal: Goal,
    expanded: &mut usize,
) -> Result<Leg> {
    let dims = ctx.dims;
    let steps = ctx.steps;
    let h_of = |z: Node| match goal {
        Goal::Node(t) => ctx.heuristic(z, t),
        Goal::Distal { .. } if ctx.options.heuristic == HeuristicMode::Zero => 0.0,
        Goal::Distal { point, base, .. } => ctx.distance_to(z, &base, base.to_local(point)),
    };
    let is_goal = |z: Node| match goal {
        Goal::Node(t) => z == t,
        Goal::Distal { point, radius, .. } => ctx.distal(z).dist(point) <= radius,
    };
    let mut recs: HashMap<u32, Rec> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let s = dims.pack(start);
    let mut m = [0u8];
    eval.evaluate(ctx, &[s], &mut m);
    if m[0] & (1 << start_branch) == 0 {
        return Err(Error::InfeasibleStart);
    }
    recs.insert(s, Rec { g: 0.0, parent: u32::MAX, mask: m[0], branch: start_branch, closed: false, known: true });
    let h0 = h_of(start);
    heap.push(Open { f: h0, h: h0, g: 0.0, idx: s });
    let mut batch: Vec<u32> = Vec::with_capacity(10);
    let mut masks: Vec<u8> = Vec::with_capacity(10);
    while let Some(top) = heap.pop() {
        let rec = recs[&top.idx];
        if rec.closed || top.g > rec.g {
            continue;
        }
        let z = dims.unpack(top.idx);
        if is_goal(z) {
            let mut path = Vec::new();
            let mut at = top.idx;
            while at != u32::MAX {
                let r = recs[&at];
                path.push(ctx.config(dims.unpack(at), r.branch));
                at = r.parent;
            }
            path.reverse();
            return Ok(Leg { path, cost: rec.g });
        }
        if *expanded >= ctx.options.max_expansions {
            return Err(Error::BudgetExhausted);
        }
        *expanded += 1;
        recs.get_mut(&top.idx).unwrap().closed = true;
        let nbrs = neighbors(z, &dims, ctx.grid);
        batch.clear();
        for (n, _) in &nbrs {
            let v = dims.pack(*n);
            if !recs.get(&v).is_some_and(|r| r.known) {
                batch.push(v);
            }
        }
        if !batch.is_empty() {
            masks.clear();
            masks.resize(batch.len(), 0);
            eval.evaluate(ctx, &batch, &mut masks);
            for (&v, &mk) in batch.iter().zip(&masks) {
                recs.insert(v, Rec { mask: mk, known: true, ..UNKNOWN });
            }
        }
        for (n, axis) in nbrs {
            let v = dims.pack(n);
            let r = recs.get_mut(&v).unwrap();
            if r.mask == 0 || r.closed {
                continue;
            }
            let g = rec.g + steps[axis];
            if g < r.g {
                r.g = g;
                r.parent = top.idx;
                r.branch = if r.mask & (1 << rec.branch) != 0 { rec.branch } else { r.mask.trailing_zeros() as u8 };
                let h = h_of(n);
                heap.push(Open { f: g + h, h, g, idx: v });
            }
        }
    }
    Err(Error::NoPath)
}

/// Plans from `start` to `target`. `start_branch` selects which stored
/// shape of the start bin is used.
pub fn plan<E: MaskEvaluator>(ctx: &PlanContext<'_>, eval: &E, start: Node, start_branch: u8, target: Node) -> Result<PlanResult> {
    let dims = ctx.dims;
    let feasible = |z: Node| {
        let mut m = [0u8];
        eval.evaluate(ctx, &[dims.pack(z)], &mut m);
        m[0]
    };
    let ms = feasible(start);
    if ms & (1 << start_branch) == 0 {
        return Err(Error::InfeasibleStart);
    }
    if feasible(target) == 0 {
        return Err(Error::InfeasibleTarget);
    }
    let mut expanded = 0;
    if ctx.options.use_waypoints {
        let hb = ctx.grid.params().bin_size();
        if let Ok(targets) = ctx.interim_targets(start, target) {
            let mut path: Vec<CableConfig> = Vec::new();
            let mut cost = 0.0;
            let (mut cur, mut branch) = (start, start_branch);
            let mut ok = true;
            let goals = targets
                .iter()
                .map(|&p| Goal::Distal { point: p, radius: 1.5 * hb, base: ctx.base(target) })
                .chain(core::iter::once(Goal::Node(target)));
            for g in goals {
                match search(ctx, eval, cur, branch, g, &mut expanded) {
                    Ok(leg) => {
                        let skip = if path.is_empty() { 0 } else { 1 };
                        let last = *leg.path.last().unwrap();
                        path.extend_from_slice(&leg.path[skip..]);
                        cost += leg.cost;
                        cur = last.node;
                        branch = last.branch;
                    }
                    Err(Error::BudgetExhausted) => return Err(Error::BudgetExhausted),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(PlanResult { path, cost, expanded, waypoints: targets });
            }
        }
    }
    let leg = search(ctx, eval, start, start_branch, Goal::Node(target), &mut expanded)?;
    Ok(PlanResult { path: leg.path, cost: leg.cost, expanded, waypoints: Vec::new() })
}
