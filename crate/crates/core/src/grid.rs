//! Reachable relative endpoints sampled over the four parameter cells and
//! lumped into an `N x N` grid over `[-L, L]^2`.

use alloc::vec::Vec;

use crate::elastica::{relative_endpoint, ElasticaParams, Triplet};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::self_intersection::K_MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamCell {
    Cell1,
    Cell2,
    Cell3,
    Cell4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub length: f64,
    pub rho_flat: f64,
    pub n_k: usize,
    pub n_s0: usize,
    pub n_lt: usize,
    pub n: usize,
    pub k_sample_max: f64,
}

impl GridParams {
    pub fn new(length: f64, rho_flat: f64) -> Self {
        GridParams { length, rho_flat, n_k: 160, n_s0: 200, n_lt: 100, n: 50, k_sample_max: K_MAX }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || !(self.rho_flat > 0.0 && self.rho_flat < 1.0) {
            return Err(Error::InvalidParams("need L > 0 and 0 < rho < 1"));
        }
        if self.n_k < 2 || self.n_s0 < 2 || self.n_lt < 2 {
            return Err(Error::InvalidParams("sample counts must be at least 2"));
        }
        if self.n < 8 {
            return Err(Error::InvalidParams("grid size must be at least 8"));
        }
        if !(self.k_sample_max >= 0.0 && self.k_sample_max <= K_MAX) {
            return Err(Error::InvalidParams("k sampling cap must lie in [0, k_max]"));
        }
        Ok(())
    }

    #[inline]
    pub fn sample_count(&self) -> usize {
        self.n_k * self.n_s0 + 2 * self.n_k * self.n_lt
    }

    /// Edge length of one bin.
    #[inline]
    pub fn bin_size(&self) -> f64 {
        2.0 * self.length / self.n as f64
    }
}

/// One sampled endpoint. Cells 1 and 2 share a sample (two shapes, same
/// endpoint); cells 3 and 4 produce separate samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSample {
    pub endpoint: Vec2,
    pub cell: ParamCell,
    pub triplets: [Triplet; 2],
    pub count: u8,
}

impl EndpointSample {
    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets[..self.count as usize]
    }
}

/// Mirror partner of a cell-1 phase.
pub fn mirror_s0(s0: f64, l: f64) -> f64 {
    if s0 <= 0.5 * l {
        0.5 * l - s0
    } else {
        1.5 * l - s0
    }
}

/// Sample number `index` in the fixed build order: cells 1-2 row by row in
/// `k` then `s0`, then cells 3-4 by `k` then `L~`, cell 3 before cell 4.
pub fn sample_at(p: &GridParams, index: usize) -> Result<EndpointSample> {
    let l = p.length;
    let frac = |i: usize, n: usize| i as f64 / (n - 1) as f64;
    let full = p.n_k * p.n_s0;
    if index < full {
        let (i, j) = (index / p.n_s0, index % p.n_s0);
        let k = p.k_sample_max * frac(i, p.n_k);
        let s1 = l * (0.25 + 0.5 * frac(j, p.n_s0));
        let s2 = mirror_s0(s1, l);
        let endpoint = relative_endpoint(k, s1, l, l)?;
        let (a, b) = (Triplet::new(k, s1, l), Triplet::new(k, s2, l));
        let ka = ElasticaParams::new(k, s1, l)?.curvature(0.0);
        let kb = ElasticaParams::new(k, s2, l)?.curvature(0.0);
        let triplets = if ka >= kb { [a, b] } else { [b, a] };
        return Ok(EndpointSample { endpoint, cell: ParamCell::Cell1, triplets, count: 2 });
    }
    let rest = index - full;
    if rest >= 2 * p.n_k * p.n_lt {
        return Err(Error::OutOfBounds);
    }
    let (i, r) = (rest / (2 * p.n_lt), rest % (2 * p.n_lt));
    let (m, second) = (r / 2, r % 2 == 1);
    let k = p.k_sample_max * frac(i, p.n_k);
    let lt = l + (l / p.rho_flat - l) * frac(m, p.n_lt);
    let s0 = if second { (5.0 * lt - 2.0 * l) / 4.0 } else { (3.0 * lt - 2.0 * l) / 4.0 };
    let endpoint = relative_endpoint(k, s0, lt, l)?;
    let t = Triplet::new(k, s0, lt);
    Ok(EndpointSample {
        endpoint,
        cell: if second { ParamCell::Cell4 } else { ParamCell::Cell3 },
        triplets: [t, t],
        count: 1,
    })
}

pub fn compute_endpoint_samples(p: &GridParams) -> Result<Vec<EndpointSample>> {
    p.validate()?;
    (0..p.sample_count()).map(|i| sample_at(p, i)).collect()
}

/// Stored content of one bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    triplets: [Triplet; 2],
    count: u8,
}

impl GridCell {
    pub const EMPTY: GridCell = GridCell { triplets: [Triplet::new(0.0, 0.0, 0.0); 2], count: 0 };

    pub fn new(triplets: &[Triplet]) -> Result<Self> {
        if triplets.len() > 2 {
            return Err(Error::InvalidParams("a bin holds at most two triplets"));
        }
        let mut c = GridCell::EMPTY;
        c.triplets[..triplets.len()].copy_from_slice(triplets);
        c.count = triplets.len() as u8;
        Ok(c)
    }

    #[inline]
    pub fn is_feasible(&self) -> bool {
        self.count > 0
    }

    #[inline]
    pub fn triplets(&self) -> &[Triplet] {
        &self.triplets[..self.count as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndpointGrid {
    params: GridParams,
    cells: Vec<GridCell>,
}

impl EndpointGrid {
    /// Cells in row-major order: index `iy * n + ix`.
    pub fn from_cells(params: GridParams, cells: Vec<GridCell>) -> Result<Self> {
        params.validate()?;
        if cells.len() != params.n * params.n {
            return Err(Error::InvalidParams("cell count does not match grid size"));
        }
        Ok(EndpointGrid { params, cells })
    }

    pub fn build(params: &GridParams) -> Result<Self> {
        lump_to_grid(&compute_endpoint_samples(params)?, params)
    }

    #[inline]
    pub fn params(&self) -> &GridParams {
        &self.params
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.params.n
    }

    #[inline]
    pub fn cells(&self) -> &[GridCell] {
        &self.cells
    }

    #[inline]
    pub fn cell(&self, ix: usize, iy: usize) -> &GridCell {
        &self.cells[iy * self.params.n + ix]
    }

    /// Bin holding `xy`, indices clamped so the far edge belongs to the last bin.
    pub fn bin_of(&self, xy: Vec2) -> Result<(usize, usize)> {
        bin_index(&self.params, xy)
    }

    pub fn bin_center(&self, ix: usize, iy: usize) -> Vec2 {
        bin_center(&self.params, ix, iy)
    }

    /// Stored triplets for the bin containing `xy`, `None` when infeasible.
    pub fn query_cell(&self, xy: Vec2) -> Result<Option<&[Triplet]>> {
        let (ix, iy) = self.bin_of(xy)?;
        let c = self.cell(ix, iy);
        Ok(c.is_feasible().then(|| c.triplets()))
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_feasible()).count()
    }

    /// Feasible bins as `(ix, iy)` in row-major order.
    pub fn feasible_bins(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.params.n;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_feasible())
            .map(move |(i, _)| (i % n, i / n))
    }
}

fn bin_index(p: &GridParams, xy: Vec2) -> Result<(usize, usize)> {
    let l = p.length;
    let slack = 1e-12 * l;
    if !(xy.x.abs() <= l + slack && xy.y.abs() <= l + slack) {
        return Err(Error::OutOfBounds);
    }
    let h = p.bin_size();
    let idx = |v: f64| (libm::floor((v + l) / h).max(0.0) as usize).min(p.n - 1);
    Ok((idx(xy.x), idx(xy.y)))
}

fn bin_center(p: &GridParams, ix: usize, iy: usize) -> Vec2 {
    let h = p.bin_size();
    Vec2::new(-p.length + (ix as f64 + 0.5) * h, -p.length + (iy as f64 + 0.5) * h)
}

/// Keeps, per bin, the sample closest to the bin centre; ties go to the
/// earlier sample.
pub fn lump_to_grid(samples: &[EndpointSample], params: &GridParams) -> Result<EndpointGrid> {
    params.validate()?;
    let n = params.n;
    let mut best: Vec<Option<(f64, usize)>> = alloc::vec![None; n * n];
    for (i, s) in samples.iter().enumerate() {
        let (ix, iy) = bin_index(params, s.endpoint)?;
        let d = s.endpoint.dist(bin_center(params, ix, iy));
        let slot = &mut best[iy * n + ix];
        if slot.map_or(true, |(bd, _)| d < bd) {
            *slot = Some((d, i));
        }
    }
    let cells = best
        .iter()
        .map(|b| match b {
            Some((_, i)) => GridCell::new(samples[*i].triplets()),
            None => Ok(GridCell::EMPTY),
        })
        .collect::<Result<Vec<_>>>()?;
    EndpointGrid::from_cells(*params, cells)
}
