//! Identity-plus-SU(n) generator bases and the coefficient form of a
//! Hamiltonian.
//!
//! `Y^0` is the n x n identity; `Y^1 .. Y^{n^2-1}` are the Pauli matrices
//! (n = 2), the Gell-Mann matrices (n = 3), or the generalized Gell-Mann
//! matrices (n = 4), ordered with the antisymmetric (imaginary) pair
//! matrices first, then the symmetric pairs, then the diagonal matrices.
//! Coefficient indices therefore line up with the d_mu subscripts used by
//! the symmetry constraint tables.

use std::sync::OnceLock;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};

/// Ordered generator basis for an n-band system.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub n: usize,
    /// `matrices[0]` is the identity; length is n^2.
    pub matrices: Vec<CMatrix>,
}

/// Complex expansion coefficients `d_0 .. d_{n^2-1}` of `H = d_mu Y^mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub n: usize,
    pub d: Vec<C64>,
}

impl CoefficientVector {
    pub fn new(n: usize, d: Vec<C64>) -> Result<Self> {
        check_bands(n)?;
        if d.len() != n * n {
            return Err(Error::invalid(format!(
                "coefficient vector for n={} must have length {}, got {}",
                n,
                n * n,
                d.len()
            )));
        }
        Ok(CoefficientVector { n, d })
    }
}

pub(crate) fn check_bands(n: usize) -> Result<()> {
    if matches!(n, 2 | 3 | 4) {
        Ok(())
    } else {
        Err(Error::invalid(format!("band count must be 2, 3, or 4, got {n}")))
    }
}

fn zeros(n: usize) -> CMatrix {
    Array2::zeros((n, n))
}

/// Symmetric pair matrix: ones at (i, j) and (j, i).
fn sym(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(n);
    m[[i, j]] = C64::new(1.0, 0.0);
    m[[j, i]] = C64::new(1.0, 0.0);
    m
}

/// Antisymmetric pair matrix: -i at (i, j), +i at (j, i).
fn asym(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(n);
    m[[i, j]] = C64::new(0.0, -1.0);
    m[[j, i]] = C64::new(0.0, 1.0);
    m
}

fn diag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    let mut m = zeros(n);
    for (i, &e) in entries.iter().enumerate() {
        m[[i, i]] = C64::new(e, 0.0);
    }
    m
}

fn build_basis(n: usize) -> GeneratorBasis {
    let s3 = 3.0_f64.sqrt();
    let s6 = 6.0_f64.sqrt();
    let matrices = match n {
        2 => vec![
            Array2::eye(2),
            sym(2, 0, 1),
            asym(2, 0, 1),
            diag(&[1.0, -1.0]),
        ],
        3 => vec![
            Array2::eye(3),
            asym(3, 0, 1),
            asym(3, 0, 2),
            asym(3, 1, 2),
            sym(3, 0, 1),
            sym(3, 0, 2),
            sym(3, 1, 2),
            diag(&[1.0, -1.0, 0.0]),
            diag(&[1.0 / s3, 1.0 / s3, -2.0 / s3]),
        ],
        4 => vec![
            Array2::eye(4),
            asym(4, 0, 1),
            asym(4, 0, 2),
            asym(4, 0, 3),
            asym(4, 1, 2),
            asym(4, 1, 3),
            asym(4, 2, 3),
            sym(4, 0, 1),
            sym(4, 0, 2),
            sym(4, 0, 3),
            sym(4, 1, 2),
            sym(4, 1, 3),
            sym(4, 2, 3),
            diag(&[1.0, -1.0, 0.0, 0.0]),
            diag(&[1.0 / s3, 1.0 / s3, -2.0 / s3, 0.0]),
            diag(&[1.0 / s6, 1.0 / s6, 1.0 / s6, -(1.5_f64).sqrt()]),
        ],
        _ => unreachable!(),
    };
    GeneratorBasis { n, matrices }
}

/// The ordered generator basis for `n` in {2, 3, 4}.
pub fn basis(n: usize) -> Result<GeneratorBasis> {
    check_bands(n)?;
    Ok(cached(n).clone())
}

/// Shared immutable copy; the bases are small and fixed, so build them once.
pub(crate) fn cached(n: usize) -> &'static GeneratorBasis {
    static B2: OnceLock<GeneratorBasis> = OnceLock::new();
    static B3: OnceLock<GeneratorBasis> = OnceLock::new();
    static B4: OnceLock<GeneratorBasis> = OnceLock::new();
    match n {
        2 => B2.get_or_init(|| build_basis(2)),
        3 => B3.get_or_init(|| build_basis(3)),
        4 => B4.get_or_init(|| build_basis(4)),
        _ => panic!("no cached basis for n={n}"),
    }
}

/// Coefficients of `H` in the generator basis: `d_0 = tr(H)/n` and
/// `d_mu = tr(H Y^mu)/2` for mu >= 1, exact by the trace orthogonality of
/// the basis.
pub fn decompose(h: &CMatrix) -> Result<CoefficientVector> {
    let n = h.nrows();
    check_bands(n)?;
    if h.ncols() != n {
        return Err(Error::invalid(format!(
            "matrix must be square, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let b = cached(n);
    let mut d = Vec::with_capacity(n * n);
    let tr: C64 = h.diag().sum();
    d.push(tr / n as f64);
    for mu in 1..n * n {
        let y = &b.matrices[mu];
        // tr(H Y^mu) without forming the product.
        let mut t = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                t += h[[i, j]] * y[[j, i]];
            }
        }
        d.push(0.5 * t);
    }
    Ok(CoefficientVector { n, d })
}

/// `sum_mu d_mu Y^mu`.
pub fn reconstruct(coeffs: &CoefficientVector) -> CMatrix {
    let n = coeffs.n;
    let b = cached(n);
    let mut h = zeros(n);
    for (mu, &dmu) in coeffs.d.iter().enumerate() {
        if dmu == C64::new(0.0, 0.0) {
            continue;
        }
        h.scaled_add(dmu, &b.matrices[mu]);
    }
    h
}
