//! Dense complex linear algebra for small matrices.
//!
//! Everything here is self-contained (no LAPACK) so the same code paths run
//! natively and on wasm. Sizes are small: Bloch Hamiltonians are at most 4x4
//! and slab Hamiltonians a few hundred, so a straightforward Hessenberg +
//! single-shift QR iteration is adequate. Singular values come from one-sided
//! Jacobi, which stays accurate for the tiny singular values that show up
//! near defective matrices.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;

const EPS: f64 = f64::EPSILON;

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

/// Max-norm over entries.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diag().sum()
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &CMatrix) -> C64 {
    let n = m.nrows();
    let mut a = m.clone();
    let mut d = C64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[[col, col]].norm();
        for r in col + 1..n {
            let v = a[[r, col]].norm();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..n {
                let tmp = a[[col, c]];
                a[[col, c]] = a[[pivot, c]];
                a[[pivot, c]] = tmp;
            }
            d = -d;
        }
        d *= a[[col, col]];
        for r in col + 1..n {
            let f = a[[r, col]] / a[[col, col]];
            for c in col + 1..n {
                let sub = f * a[[col, c]];
                a[[r, c]] -= sub;
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan with partial pivoting.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[[col, col]].norm();
        for r in col + 1..n {
            let v = a[[r, col]].norm();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return Err(Error::NumericFailure {
                message: "singular matrix in inverse".into(),
                matrix: Some(m.clone()),
            });
        }
        if pivot != col {
            for c in 0..n {
                a.swap([col, c], [pivot, c]);
                inv.swap([col, c], [pivot, c]);
            }
        }
        let p = a[[col, col]];
        for c in 0..n {
            a[[col, c]] /= p;
            inv[[col, c]] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[[r, col]];
            if f.norm() == 0.0 {
                continue;
            }
            for c in 0..n {
                let s1 = f * a[[col, c]];
                a[[r, c]] -= s1;
                let s2 = f * inv[[col, c]];
                inv[[r, c]] -= s2;
            }
        }
    }
    Ok(inv)
}

/// Complex Givens rotation: returns (c, s) with c real such that
/// [[c, conj(s)], [-s, c]] * (a, b)^T = (r, 0)^T.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    let c = na / r;
    // s = conj(b) * (a/|a|) / r makes the lower entry vanish.
    let s = b.conj() * (a / na) / r;
    (c, s)
}

fn rot_rows(m: &mut CMatrix, i: usize, j: usize, c: f64, s: C64, col_lo: usize, col_hi: usize) {
    for col in col_lo..col_hi {
        let x = m[[i, col]];
        let y = m[[j, col]];
        m[[i, col]] = c * x + s * y;
        m[[j, col]] = -s.conj() * x + c * y;
    }
}

fn rot_cols(m: &mut CMatrix, i: usize, j: usize, c: f64, s: C64, row_lo: usize, row_hi: usize) {
    for row in row_lo..row_hi {
        let x = m[[row, i]];
        let y = m[[row, j]];
        m[[row, i]] = c * x + s.conj() * y;
        m[[row, j]] = -s * x + c * y;
    }
}

/// Reduce to upper Hessenberg form by Householder reflections, accumulating
/// the unitary transform into `q` when provided.
fn hessenberg(h: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        // Householder vector for column k, rows k+1..n.
        let mut alpha = 0.0f64;
        for r in k + 1..n {
            alpha = alpha.hypot(h[[r, k]].norm());
        }
        if alpha == 0.0 {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let beta = -phase * alpha;
        let mut v: Vec<C64> = (k + 1..n).map(|r| h[[r, k]]).collect();
        v[0] -= beta;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv^H) H
        for col in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, r) in (k + 1..n).enumerate() {
                dot += v[idx].conj() * h[[r, col]];
            }
            dot *= 2.0;
            for (idx, r) in (k + 1..n).enumerate() {
                let upd = v[idx] * dot;
                h[[r, col]] -= upd;
            }
        }
        // H <- H (I - 2vv^H)
        for row in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for (idx, c) in (k + 1..n).enumerate() {
                dot += h[[row, c]] * v[idx];
            }
            dot *= 2.0;
            for (idx, c) in (k + 1..n).enumerate() {
                let upd = dot * v[idx].conj();
                h[[row, c]] -= upd;
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for row in 0..n {
                let mut dot = C64::new(0.0, 0.0);
                for (idx, c) in (k + 1..n).enumerate() {
                    dot += q[[row, c]] * v[idx];
                }
                dot *= 2.0;
                for (idx, c) in (k + 1..n).enumerate() {
                    let upd = dot * v[idx].conj();
                    q[[row, c]] -= upd;
                }
            }
        }
        // Clean the annihilated entries.
        h[[k + 1, k]] = beta;
        for r in k + 2..n {
            h[[r, k]] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of a 2x2 complex matrix, closed form with a cancellation-safe
/// second root.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let half = 0.5 * tr;
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    let l1 = half + 0.5 * disc;
    let l2 = half - 0.5 * disc;
    // Refine the smaller-magnitude root through the product when possible.
    let detm = a * d - b * c;
    if l1.norm() > l2.norm() && l1.norm() > 0.0 {
        (l1, detm / l1)
    } else if l2.norm() > 0.0 {
        (detm / l2, l2)
    } else {
        (l1, l2)
    }
}

pub struct Schur {
    /// Unitary transform; `a = q t q^H`.
    pub q: Option<CMatrix>,
    /// Upper triangular factor with eigenvalues on the diagonal.
    pub t: CMatrix,
}

/// Complex Schur decomposition via Hessenberg reduction and single-shift QR
/// with Wilkinson shifts. Errors if the iteration does not converge.
pub fn schur(m: &CMatrix, want_q: bool) -> Result<Schur> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "schur requires a square matrix");
    let mut t = m.clone();
    let mut q = if want_q { Some(identity(n)) } else { None };
    if n <= 1 {
        return Ok(Schur { q, t });
    }
    hessenberg(&mut t, q.as_mut());

    let scale = frobenius(&t).max(f64::MIN_POSITIVE);
    let mut hi = n; // active block is rows/cols [lo, hi)
    let mut iters_this_block = 0usize;
    let mut total_iters = 0usize;
    let max_total = 120 * n;

    while hi > 1 {
        // Deflate any negligible subdiagonals from the bottom of the block.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = t[[lo, lo - 1]].norm();
            let mut tst = t[[lo - 1, lo - 1]].norm() + t[[lo, lo]].norm();
            if tst == 0.0 {
                tst = scale;
            }
            if sub <= EPS * tst {
                t[[lo, lo - 1]] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            // 1x1 block deflated.
            hi -= 1;
            iters_this_block = 0;
            continue;
        }

        total_iters += 1;
        iters_this_block += 1;
        if total_iters > max_total {
            return Err(Error::NumericFailure {
                message: "QR eigenvalue iteration did not converge".into(),
                matrix: Some(m.clone()),
            });
        }

        // Wilkinson shift from the trailing 2x2, or an exceptional shift when
        // the iteration stalls.
        let shift = if iters_this_block % 14 == 13 {
            t[[hi - 1, hi - 1]] + 1.5 * t[[hi - 1, hi - 2]].norm() * C64::new(1.0, 0.0)
        } else {
            let (l1, l2) = eig2(
                t[[hi - 2, hi - 2]],
                t[[hi - 2, hi - 1]],
                t[[hi - 1, hi - 2]],
                t[[hi - 1, hi - 1]],
            );
            let corner = t[[hi - 1, hi - 1]];
            if (l1 - corner).norm() < (l2 - corner).norm() {
                l1
            } else {
                l2
            }
        };

        // Implicit single-shift bulge chase across [lo, hi).
        let mut x = t[[lo, lo]] - shift;
        let mut y = t[[lo + 1, lo]];
        for k in lo..hi - 1 {
            let (c, s) = givens(x, y);
            let col_start = if k > lo { k - 1 } else { lo };
            rot_rows(&mut t, k, k + 1, c, s, col_start, n);
            let row_end = (k + 3).min(hi);
            rot_cols(&mut t, k, k + 1, c, s, 0, row_end);
            if let Some(q) = q.as_mut() {
                rot_cols(q, k, k + 1, c, s, 0, n);
            }
            if k + 2 < hi {
                x = t[[k + 1, k]];
                y = t[[k + 2, k]];
            }
        }
    }

    // Enforce exact triangularity.
    for r in 1..n {
        for c in 0..r {
            t[[r, c]] = C64::new(0.0, 0.0);
        }
    }
    Ok(Schur { q, t })
}

/// Eigenvalues only (unsorted). Closed form for n <= 2, QR otherwise.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let n = m.nrows();
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![m[[0, 0]]]),
        2 => {
            let (l1, l2) = eig2(m[[0, 0]], m[[0, 1]], m[[1, 0]], m[[1, 1]]);
            Ok(vec![l1, l2])
        }
        _ => {
            let s = schur(m, false)?;
            Ok(s.t.diag().to_vec())
        }
    }
}

/// Right eigenvectors from a Schur decomposition, one unit column per
/// diagonal entry of `t`, in diagonal order.
///
/// Uses protected back-substitution: a vanishing pivot (repeated eigenvalue)
/// is replaced by a small multiple of the matrix scale, which makes the
/// returned columns nearly parallel exactly when the eigenvalue cluster is
/// defective, and keeps them well separated for semisimple repeats.
pub fn right_eigenvectors(s: &Schur) -> CMatrix {
    let t = &s.t;
    let n = t.nrows();
    let tnorm = max_abs(t).max(f64::MIN_POSITIVE);
    let mut v = Array2::zeros((n, n));
    for k in 0..n {
        let lambda = t[[k, k]];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut num = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                num += t[[i, j]] * y[j];
            }
            let mut den = t[[i, i]] - lambda;
            let smin = (EPS * tnorm).max(f64::MIN_POSITIVE);
            if den.norm() < smin {
                den = C64::new(smin, 0.0);
            }
            y[i] = -num / den;
            let mag = y[i].norm();
            if mag > 1e120 {
                let inv = 1.0 / mag;
                for z in y.iter_mut().take(k + 1) {
                    *z *= inv;
                }
            }
        }
        // Back to the original basis and normalize.
        let mut col = vec![C64::new(0.0, 0.0); n];
        match &s.q {
            Some(q) => {
                for r in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..=k {
                        acc += q[[r, j]] * y[j];
                    }
                    col[r] = acc;
                }
            }
            None => col[..=k].copy_from_slice(&y[..=k]),
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for z in col.iter_mut() {
                *z /= norm;
            }
        }
        for r in 0..n {
            v[[r, k]] = col[r];
        }
    }
    v
}

/// Singular values by one-sided Jacobi, descending. Accurate for small
/// singular values (no normal-equation squaring).
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.clone();
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut gpp = 0.0f64;
                let mut gqq = 0.0f64;
                let mut gpq = C64::new(0.0, 0.0);
                for r in 0..rows {
                    let x = a[[r, p]];
                    let y = a[[r, q]];
                    gpp += x.norm_sqr();
                    gqq += y.norm_sqr();
                    gpq += x.conj() * y;
                }
                let mag = gpq.norm();
                if mag <= 1e2 * EPS * (gpp * gqq).sqrt() || mag == 0.0 {
                    continue;
                }
                off = true;
                let phase = gpq / mag;
                let tau = (gqq - gpp) / (2.0 * mag);
                let tee = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + tee * tee).sqrt();
                let sn = c * tee;
                for r in 0..rows {
                    let x = a[[r, p]];
                    let y = a[[r, q]] * phase.conj();
                    a[[r, p]] = c * x - sn * y;
                    a[[r, q]] = sn * x + c * y;
                }
            }
        }
        if !off {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|c| (0..rows).map(|r| a[[r, c]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Two-norm condition number; infinite when the smallest singular value
/// underflows to zero.
pub fn cond2(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(&hi), _) if hi == 0.0 => 1.0,
        _ => f64::INFINITY,
    }
}

/// Number of singular values strictly above `cutoff`.
pub fn numerical_rank(m: &CMatrix, cutoff: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > cutoff).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn char_residual(m: &CMatrix, lambda: C64) -> f64 {
        let n = m.nrows();
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[[i, i]] -= lambda;
        }
        det(&shifted).norm()
    }

    #[test]
    fn eigenvalues_satisfy_characteristic_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=6 {
            for _ in 0..200 {
                let m = random_matrix(n, &mut rng);
                let evs = eigenvalues(&m).unwrap();
                assert_eq!(evs.len(), n);
                for l in evs {
                    let res = char_residual(&m, l);
                    assert!(res < 1e-9 * (1.0 + l.norm()).powi(n as i32), "res {res} at n={n}");
                }
            }
        }
    }

    #[test]
    fn schur_reconstructs_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            let m = random_matrix(n, &mut rng);
            let s = schur(&m, true).unwrap();
            let q = s.q.as_ref().unwrap();
            let rec = q.dot(&s.t).dot(&adjoint(q));
            let err = max_abs(&(&rec - &m));
            assert!(err < 1e-12 * (1.0 + max_abs(&m)), "reconstruction err {err}");
            // Q unitary
            let qhq = adjoint(q).dot(q);
            let unit_err = max_abs(&(&qhq - &identity(n)));
            assert!(unit_err < 1e-13, "unitarity err {unit_err}");
        }
    }

    #[test]
    fn eigenvectors_satisfy_eigen_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 2..=6 {
            let m = random_matrix(n, &mut rng);
            let s = schur(&m, true).unwrap();
            let v = right_eigenvectors(&s);
            for k in 0..n {
                let lambda = s.t[[k, k]];
                for r in 0..n {
                    let mut hv = C64::new(0.0, 0.0);
                    for c in 0..n {
                        hv += m[[r, c]] * v[[c, k]];
                    }
                    let res = (hv - lambda * v[[r, k]]).norm();
                    assert!(res < 1e-10, "eigpair residual {res}");
                }
            }
        }
    }

    #[test]
    fn singular_values_match_eigen_for_hermitian_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = random_matrix(4, &mut rng);
        let h = adjoint(&g).dot(&g);
        let sv = singular_values(&h);
        let mut ev: Vec<f64> = eigenvalues(&h).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for (s, e) in sv.iter().zip(ev.iter()) {
            assert!((s - e).abs() < 1e-10 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn rank_of_jordan_block() {
        let mut n2 = Array2::zeros((2, 2));
        n2[[0, 1]] = C64::new(1.0, 0.0);
        assert_eq!(numerical_rank(&n2, 1e-8), 1);
        let z: CMatrix = Array2::zeros((3, 3));
        assert_eq!(numerical_rank(&z, 1e-8), 0);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = random_matrix(4, &mut rng);
        let inv = inverse(&m).unwrap();
        let err = max_abs(&(&m.dot(&inv) - &identity(4)));
        assert!(err < 1e-11);
    }

    #[test]
    fn det_of_triangular() {
        let mut m: CMatrix = Array2::zeros((3, 3));
        m[[0, 0]] = C64::new(2.0, 0.0);
        m[[1, 1]] = C64::new(0.0, 1.0);
        m[[2, 2]] = C64::new(-1.0, 0.0);
        m[[0, 2]] = C64::new(5.0, 5.0);
        let d = det(&m);
        assert!((d - C64::new(0.0, -2.0)).norm() < 1e-14);
    }
}
