//! Binary cache for eigendecompositions, keyed by a content hash of the
//! resolved model parameters and the basis cutoff.
//!
//! Layout, all little-endian: 8-byte magic `KMEIG01\0`, dim as u64, 32-byte
//! key, residual and orthonormality defect as f64, then `dim` energies and
//! `dim²` eigenvector entries as (re, im) f64 pairs, vector-major in the
//! ascending-energy order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::ModelParams;

use super::EigenSystem;

const MAGIC: [u8; 8] = *b"KMEIG01\0";

/// Content hash of everything the Hamiltonian depends on. Parameters that
/// resolve to the same couplings share a key regardless of how they were
/// specified.
pub fn cache_key(params: &ModelParams, m_cut: usize) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for value in [
        params.omega1(),
        params.omega2(),
        params.lambda1(),
        params.lambda2(),
        params.beta1(),
        params.beta2(),
    ] {
        hasher.update(value.to_le_bytes());
    }
    hasher.update((m_cut as u64).to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(digest.as_slice());
    key
}

/// Hex form of a cache key, usable as a file name.
pub fn key_hex(key: &[u8; 32]) -> String {
    key.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write a decomposition to `path`.
pub fn write(path: &Path, key: &[u8; 32], eig: &EigenSystem) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&MAGIC)?;
    out.write_all(&(eig.dim() as u64).to_le_bytes())?;
    out.write_all(key)?;
    out.write_all(&eig.residual().to_le_bytes())?;
    out.write_all(&eig.orthonormality_defect().to_le_bytes())?;
    for e in eig.energies() {
        out.write_all(&e.to_le_bytes())?;
    }
    let n = eig.dim();
    for nu in 0..n {
        for r in 0..n {
            let z = eig.vectors()[[r, nu]];
            out.write_all(&z.re.to_le_bytes())?;
            out.write_all(&z.im.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Read a decomposition from `path`, rejecting magic/key/dimension mismatches.
pub fn read(path: &Path, key: &[u8; 32]) -> Result<EigenSystem> {
    let mut input = BufReader::new(File::open(path)?);

    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    let mut dim_bytes = [0u8; 8];
    input.read_exact(&mut dim_bytes)?;
    let dim = u64::from_le_bytes(dim_bytes) as usize;
    if dim == 0 || dim > 1 << 20 {
        return Err(Error::CacheFormat(format!("implausible dimension {dim}")));
    }
    let mut stored_key = [0u8; 32];
    input.read_exact(&mut stored_key)?;
    if &stored_key != key {
        return Err(Error::CacheFormat("key mismatch".into()));
    }

    let read_f64 = |input: &mut BufReader<File>| -> Result<f64> {
        let mut b = [0u8; 8];
        input.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let residual = read_f64(&mut input)?;
    let orthonormality_defect = read_f64(&mut input)?;
    let mut energies = Vec::with_capacity(dim);
    for _ in 0..dim {
        energies.push(read_f64(&mut input)?);
    }
    let mut vectors = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
    for nu in 0..dim {
        for r in 0..dim {
            let re = read_f64(&mut input)?;
            let im = read_f64(&mut input)?;
            vectors[[r, nu]] = Complex64::new(re, im);
        }
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(Error::CacheFormat("trailing bytes".into()));
    }
    Ok(EigenSystem {
        energies,
        vectors,
        residual,
        orthonormality_defect,
    })
}
