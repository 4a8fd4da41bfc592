//! Binary snapshots: magic `THFL`, u32 version, u32 dimension, u32 grid size,
//! f64 period scale, f64 time, then the coefficients of `a`, `u` (one array
//! per component) and `b` as little-endian `(re, im)` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PerturbationState;
use crate::spectral::{Grid, SpectralField};

const MAGIC: &[u8; 4] = b"THFL";
const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 4 + 4 + 8 + 8;

pub fn encode(state: &PerturbationState, t: f64) -> Vec<u8> {
    let grid = state.grid();
    let fields = [&state.a, &state.u, &state.b];
    let ncoef: usize = fields.iter().map(|f| f.coeffs().len()).sum();
    let mut out = Vec::with_capacity(HEADER + 16 * ncoef);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    out.extend_from_slice(&grid.period_scale().to_le_bytes());
    out.extend_from_slice(&t.to_le_bytes());
    for f in fields {
        for z in f.coeffs() {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("four bytes"))
}

fn read_f64(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("eight bytes"))
}

pub fn decode(bytes: &[u8]) -> Result<(PerturbationState, f64)> {
    if bytes.len() < HEADER {
        return Err(Error::Checkpoint(format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = read_u32(bytes, 4);
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let dim = read_u32(bytes, 8) as usize;
    let n = read_u32(bytes, 12) as usize;
    let l = read_f64(bytes, 16);
    let t = read_f64(bytes, 24);
    let grid = Grid::new(dim, n, l).map_err(|e| Error::Checkpoint(format!("bad grid header: {e}")))?;
    let m = grid.len();
    let expected = HEADER + 16 * m * (dim + 2);
    if bytes.len() != expected {
        return Err(Error::Checkpoint(format!(
            "expected {expected} bytes for a {dim}D grid of size {n}, found {}",
            bytes.len()
        )));
    }
    let mut at = HEADER;
    let mut take = |ncomp: usize| {
        let coeffs: Vec<Complex64> = (0..ncomp * m)
            .map(|i| {
                let off = at + 16 * i;
                Complex64::new(read_f64(bytes, off), read_f64(bytes, off + 8))
            })
            .collect();
        at += 16 * ncomp * m;
        SpectralField::from_coeffs(&grid, ncomp, coeffs)
    };
    let a = take(1)?;
    let u = take(dim)?;
    let b = take(1)?;
    Ok((PerturbationState { a, u, b }, t))
}

pub fn checkpoint_save(state: &PerturbationState, t: f64, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode(state, t))?;
    Ok(())
}

pub fn checkpoint_load(path: impl AsRef<Path>) -> Result<(PerturbationState, f64)> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> PerturbationState {
        let g = Grid::new(2, 8, 4.0).unwrap();
        PerturbationState {
            a: SpectralField::from_fn(&g, |x| (0.25 * x[0]).sin()),
            u: SpectralField::vector_from_fn(&g, |x, c| (0.25 * x[1] + c as f64).cos()),
            b: SpectralField::from_fn(&g, |x| 1e-3 * (0.5 * x[1]).sin()),
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let s = state();
        let (back, t) = decode(&encode(&s, 0.125)).unwrap();
        assert_eq!(back, s);
        assert_eq!(t.to_bits(), 0.125f64.to_bits());
    }

    #[test]
    fn corrupted_input_is_rejected() {
        let bytes = encode(&state(), 1.0);
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad), Err(Error::Checkpoint(_))));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(decode(&bad), Err(Error::Checkpoint(_))));
        assert!(matches!(decode(&bytes[..bytes.len() - 3]), Err(Error::Checkpoint(_))));
        assert!(matches!(decode(&bytes[..10]), Err(Error::Checkpoint(_))));
    }
}
