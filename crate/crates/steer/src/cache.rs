//! Binary grid cache, little-endian throughout.
//!
//! ```text
//! magic        8 bytes  b"ELSTGRID"
//! format       u32      FORMAT_VERSION
//! code         u16 len + UTF-8 crate version
//! length       f64
//! rho_flat     f64
//! k_sample_max f64
//! n_k n_s0 n_lt N   4 x u32
//! N*N records, row-major (index iy*N + ix):
//!   feasible   u8 (0 or 1)
//!   count      u8 (0..=2)
//!   count x (k, s0, l_tilde) as 3 x f64
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use elastica_core::grid::{EndpointGrid, GridCell, GridParams};
use elastica_core::Triplet;
use sha2::{Digest, Sha256};

use crate::error::{Result, SteerError};

pub const MAGIC: &[u8; 8] = b"ELSTGRID";
pub const FORMAT_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

fn header(out: &mut Vec<u8>, p: &GridParams) {
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(CODE_VERSION.len() as u16).to_le_bytes());
    out.extend_from_slice(CODE_VERSION.as_bytes());
    for v in [p.length, p.rho_flat, p.k_sample_max] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in [p.n_k, p.n_s0, p.n_lt, p.n] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
}

pub fn encode_grid(g: &EndpointGrid) -> Vec<u8> {
    let mut out = Vec::new();
    header(&mut out, g.params());
    for c in g.cells() {
        let t = c.triplets();
        out.push(c.is_feasible() as u8);
        out.push(t.len() as u8);
        for t in t {
            for v in [t.k, t.s0, t.l_tilde] {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| SteerError::Cache(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode_grid(buf: &[u8]) -> Result<EndpointGrid> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(SteerError::Cache("bad magic".into()));
    }
    let fv = r.u32()?;
    if fv != FORMAT_VERSION {
        return Err(SteerError::Cache(format!("format version {fv}, expected {FORMAT_VERSION}")));
    }
    let n = r.u16()? as usize;
    let code = r.take(n)?;
    if code != CODE_VERSION.as_bytes() {
        return Err(SteerError::Cache(format!("written by version {}", String::from_utf8_lossy(code))));
    }
    let (length, rho_flat, k_sample_max) = (r.f64()?, r.f64()?, r.f64()?);
    let (n_k, n_s0, n_lt, n) = (r.u32()? as usize, r.u32()? as usize, r.u32()? as usize, r.u32()? as usize);
    let params = GridParams { length, rho_flat, n_k, n_s0, n_lt, n, k_sample_max };
    params.validate()?;
    let mut cells = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let feasible = r.u8()?;
        let count = r.u8()? as usize;
        if count > 2 || (feasible == 1) != (count > 0) || feasible > 1 {
            return Err(SteerError::Cache(format!("bad cell record at byte {}", r.pos - 2)));
        }
        let mut ts = Vec::with_capacity(count);
        for _ in 0..count {
            ts.push(Triplet::new(r.f64()?, r.f64()?, r.f64()?));
        }
        cells.push(GridCell::new(&ts)?);
    }
    if r.pos != buf.len() {
        return Err(SteerError::Cache("trailing bytes".into()));
    }
    Ok(EndpointGrid::from_cells(params, cells)?)
}

pub fn save_grid(g: &EndpointGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_grid(g)).map_err(|e| SteerError::io(path, e))
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<EndpointGrid> {
    let path = path.as_ref();
    let buf = fs::read(path).map_err(|e| SteerError::io(path, e))?;
    decode_grid(&buf)
}

/// Cache file name derived from the header, so any parameter or version
/// change maps to a different file.
pub fn cache_file_name(p: &GridParams) -> String {
    let mut h = Vec::new();
    header(&mut h, p);
    let d = Sha256::digest(&h);
    format!("grid-{}.bin", crate::hex(&d[..8]))
}

/// Loads the grid from `dir` when a matching cache exists, otherwise builds
/// and stores it.
pub fn load_or_build(dir: impl AsRef<Path>, p: &GridParams, workers: usize) -> Result<(EndpointGrid, PathBuf)> {
    let dir = dir.as_ref();
    let path = dir.join(cache_file_name(p));
    if let Ok(g) = load_grid(&path) {
        if g.params() == p {
            return Ok((g, path));
        }
    }
    let g = crate::parallel::build_grid(p, workers)?;
    fs::create_dir_all(dir).map_err(|e| SteerError::io(dir, e))?;
    save_grid(&g, &path)?;
    Ok((g, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridParams {
        GridParams { n_k: 12, n_s0: 12, n_lt: 8, n: 10, ..GridParams::new(1.0, 0.5) }
    }

    #[test]
    fn encode_decode() {
        let g = EndpointGrid::build(&small()).unwrap();
        let b = encode_grid(&g);
        assert_eq!(&b[..8], MAGIC);
        let back = decode_grid(&b).unwrap();
        assert_eq!(back, g);
        assert_eq!(encode_grid(&back), b);
    }

    #[test]
    fn rejects_damage() {
        let g = EndpointGrid::build(&small()).unwrap();
        let mut b = encode_grid(&g);
        assert!(decode_grid(&b[..b.len() - 3]).is_err());
        b[8] = 9;
        assert!(matches!(decode_grid(&b), Err(SteerError::Cache(_))));
    }

    #[test]
    fn names_depend_on_params() {
        let a = small();
        let b = GridParams { n: 12, ..a };
        assert_ne!(cache_file_name(&a), cache_file_name(&b));
    }
}
