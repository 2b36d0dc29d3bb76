//! Characteristic-polynomial coefficients, discriminant constraint scalars,
//! eigen-decomposition, multiplicity structure, and the closed-form 2x2
//! Jordan decomposition.

use ndarray::Array2;

use crate::basis::check_bands;
use crate::error::{Error, Result};
use crate::linalg::{
    self, C64, CMatrix, cond2, det, max_abs, numerical_rank, right_eigenvectors, schur,
    singular_values, trace,
};

/// Singular-value cutoff factor for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Coefficients of the characteristic polynomial in the fixed sign
/// convention
///
/// ```text
/// n = 2:  l^2 - a l     + d
/// n = 3:  l^3 - a l^2 + b l   - d
/// n = 4:  l^4 - a l^3 + b l^2 - c l + d
/// ```
///
/// with `a = tr H`, `b = (tr^2 - tr H^2)/2`,
/// `c = (tr^3 - 3 tr tr(H^2) + 2 tr(H^3))/6`, `d = det H`. Unused
/// coefficients for the lower band counts are stored as zero.
#[derive(Debug, Clone, Copy)]
pub struct CharPolyCoeffs {
    pub n: usize,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl CharPolyCoeffs {
    /// Evaluate the characteristic polynomial at `lambda`.
    pub fn evaluate(&self, lambda: C64) -> C64 {
        match self.n {
            2 => lambda * lambda - self.a * lambda + self.d,
            3 => ((lambda - self.a) * lambda + self.b) * lambda - self.d,
            4 => (((lambda - self.a) * lambda + self.b) * lambda - self.c) * lambda + self.d,
            _ => unreachable!(),
        }
    }
}

/// The discriminant-derived constraint scalars. `nu` is present for n >= 3,
/// `kappa` for n = 4.
#[derive(Debug, Clone, Copy)]
pub struct DiscriminantSet {
    pub n: usize,
    pub eta: C64,
    pub nu: Option<C64>,
    pub kappa: Option<C64>,
}

/// Eigenvalues plus cheap diagnostics.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Sorted ascending by (real, imaginary) part.
    pub eigenvalues: Vec<C64>,
    /// Condition number of the unit-column right-eigenvector matrix.
    pub right_eigvec_cond: f64,
    pub min_gap: f64,
    pub max_gap: f64,
}

/// Jordan-type multiplicity data for one eigenvalue cluster.
#[derive(Debug, Clone)]
pub struct MultiplicityStructure {
    pub eigenvalue: C64,
    pub algebraic: usize,
    pub geometric: usize,
    /// Ranks of (H - lambda I)^j for j = 1..=algebraic.
    pub rank_sequence: Vec<usize>,
}

impl MultiplicityStructure {
    /// Jordan block sizes for this eigenvalue, descending. The number of
    /// blocks of size >= j is rank((H-l)^{j-1}) - rank((H-l)^j); contributions
    /// from the other eigenvalues cancel in the differences.
    pub fn block_sizes(&self) -> Vec<usize> {
        if self.rank_sequence.is_empty() {
            return vec![];
        }
        let mut blocks_ge = vec![self.geometric];
        for j in 1..self.rank_sequence.len() {
            blocks_ge.push(self.rank_sequence[j - 1].saturating_sub(self.rank_sequence[j]));
        }
        blocks_ge.push(0);
        let mut sizes = Vec::new();
        for j in 0..blocks_ge.len() - 1 {
            let exact = blocks_ge[j].saturating_sub(blocks_ge[j + 1]);
            for _ in 0..exact {
                sizes.push(j + 1);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Closed-form Jordan decomposition of a defective 2x2 matrix:
/// `H = S J S^{-1}` with `J = [[l, 1], [0, l]]`.
#[derive(Debug, Clone)]
pub struct JordanDecomposition2x2 {
    pub s: CMatrix,
    pub j: CMatrix,
    pub cond_s: f64,
}

fn square_checked(h: &CMatrix) -> Result<usize> {
    let n = h.nrows();
    check_bands(n)?;
    if h.ncols() != n {
        return Err(Error::invalid("matrix must be square"));
    }
    Ok(n)
}

/// Coefficients from traces and the determinant, per the fixed convention.
pub fn char_poly_coeffs(h: &CMatrix) -> Result<CharPolyCoeffs> {
    let n = square_checked(h)?;
    let zero = C64::new(0.0, 0.0);
    let a = trace(h);
    let d = det(h);
    let (b, c) = match n {
        2 => (zero, zero),
        3 => {
            let t2 = trace(&h.dot(h));
            ((a * a - t2) * 0.5, zero)
        }
        4 => {
            let h2 = h.dot(h);
            let t2 = trace(&h2);
            let t3 = trace(&h2.dot(h));
            let b = (a * a - t2) * 0.5;
            let c = (a * a * a - 3.0 * a * t2 + 2.0 * t3) / 6.0;
            (b, c)
        }
        _ => unreachable!(),
    };
    Ok(CharPolyCoeffs { n, a, b, c, d })
}

/// The constraint scalars eta (n = 2), eta/nu (n = 3), eta/nu/kappa (n = 4).
pub fn discriminant_constraints(h: &CMatrix) -> Result<DiscriminantSet> {
    let n = square_checked(h)?;
    match n {
        2 => {
            let a = trace(h);
            let eta = a * a - 4.0 * det(h);
            Ok(DiscriminantSet { n, eta, nu: None, kappa: None })
        }
        3 => {
            let a = trace(h);
            let t2 = trace(&h.dot(h));
            let dd = det(h);
            let eta = (a * a - 3.0 * t2) * 0.5;
            let nu = (54.0 * dd - 5.0 * a * a * a + 9.0 * a * t2) * 0.5;
            Ok(DiscriminantSet { n, eta, nu: Some(nu), kappa: None })
        }
        4 => {
            let cp = char_poly_coeffs(h)?;
            let (a, b, c, d) = (cp.a, cp.b, cp.c, cp.d);
            let eta = -3.0 * a * c + b * b + 12.0 * d;
            let nu = 27.0 * a * a * d - 9.0 * a * b * c + 2.0 * b * b * b - 72.0 * b * d
                + 27.0 * c * c;
            let kappa = a * a * a - 4.0 * a * b + 8.0 * c;
            Ok(DiscriminantSet { n, eta, nu: Some(nu), kappa: Some(kappa) })
        }
        _ => unreachable!(),
    }
}

/// The polynomial discriminant expressed through the constraint scalars:
/// `eta` (n = 2), `-(4 eta^3 + nu^2)/27` (n = 3), `(4 eta^3 - nu^2)/27`
/// (n = 4).
pub fn discriminant_from_constraints(ds: &DiscriminantSet) -> C64 {
    match ds.n {
        2 => ds.eta,
        3 => {
            let nu = ds.nu.expect("nu present for n=3");
            -(4.0 * ds.eta * ds.eta * ds.eta + nu * nu) / 27.0
        }
        4 => {
            let nu = ds.nu.expect("nu present for n=4");
            (4.0 * ds.eta * ds.eta * ds.eta - nu * nu) / 27.0
        }
        _ => unreachable!(),
    }
}

/// Brute-force discriminant `prod_{i<j} (l_i - l_j)^2` from numerically
/// computed eigenvalues. Independent cross-check for the constraint-scalar
/// relations above.
pub fn discriminant_oracle(h: &CMatrix) -> Result<C64> {
    square_checked(h)?;
    let evs = linalg::eigenvalues(h)?;
    let mut prod = C64::new(1.0, 0.0);
    for i in 0..evs.len() {
        for j in i + 1..evs.len() {
            let diff = evs[i] - evs[j];
            prod *= diff * diff;
        }
    }
    Ok(prod)
}

/// Full eigen-decomposition with sorted eigenvalues, pairwise gap range, and
/// the right-eigenvector condition number.
pub fn eigen(h: &CMatrix) -> Result<SpectralData> {
    Ok(eigen_with_vectors(h)?.0)
}

/// Like [`eigen`] but also returns unit right-eigenvector columns aligned
/// with the sorted eigenvalues.
pub fn eigen_with_vectors(h: &CMatrix) -> Result<(SpectralData, CMatrix)> {
    let n = h.nrows();
    if h.ncols() != n || n == 0 {
        return Err(Error::invalid("matrix must be square and non-empty"));
    }
    let s = schur(h, true)?;
    let v = right_eigenvectors(&s);
    let raw: Vec<C64> = s.t.diag().to_vec();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw[i]
            .re
            .total_cmp(&raw[j].re)
            .then(raw[i].im.total_cmp(&raw[j].im))
    });
    let eigenvalues: Vec<C64> = order.iter().map(|&i| raw[i]).collect();
    let mut vs = Array2::zeros((n, n));
    for (newc, &oldc) in order.iter().enumerate() {
        for r in 0..n {
            vs[[r, newc]] = v[[r, oldc]];
        }
    }
    let mut min_gap = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let g = (eigenvalues[i] - eigenvalues[j]).norm();
            min_gap = min_gap.min(g);
            max_gap = max_gap.max(g);
        }
    }
    if n == 1 {
        min_gap = 0.0;
    }
    let cond = cond2(&vs);
    Ok((
        SpectralData { eigenvalues, right_eigvec_cond: cond, min_gap, max_gap },
        vs,
    ))
}

/// Single-linkage clusters of eigenvalues with linking radius
/// `max(tol, 1e-6 * spectral_radius)`. Returns index sets into `evs`.
pub fn cluster_eigenvalues(evs: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = evs.len();
    let radius = evs
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .mul_add(1e-6, 0.0)
        .max(tol);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (evs[i] - evs[j]).norm() <= radius {
                let ri = find(&mut parent, i);
                let rj = find(&mut parent, j);
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    out.sort_by_key(|g| g[0]);
    out
}

fn shifted(h: &CMatrix, lambda: C64) -> CMatrix {
    let mut m = h.clone();
    for i in 0..m.nrows() {
        m[[i, i]] -= lambda;
    }
    m
}

/// Rank cutoff that tolerates both rounding noise and the spread of a finite
/// eigenvalue cluster (deviations of cluster members from the cluster mean
/// would vanish at the exact degeneracy and must be treated as zero).
fn rank_cutoff(sv_max: f64, tol: f64, spread: f64, noise_floor: f64) -> f64 {
    (tol * sv_max).max(2.0 * spread).max(noise_floor)
}

/// Algebraic/geometric multiplicity and the rank sequence of powers of
/// `(H - lambda I)` for the eigenvalue cluster containing `lambda`.
pub fn multiplicity_structure(h: &CMatrix, lambda: C64, tol: f64) -> Result<MultiplicityStructure> {
    let n = square_checked(h)?;
    let evs = linalg::eigenvalues(h)?;
    if !evs.iter().any(|l| (l - lambda).norm() <= tol) {
        return Err(Error::invalid(format!(
            "lambda {lambda} is not within {tol} of any eigenvalue"
        )));
    }
    let clusters = cluster_eigenvalues(&evs, tol);
    let cluster = clusters
        .into_iter()
        .find(|c| c.iter().any(|&i| (evs[i] - lambda).norm() <= tol))
        .expect("membership established above");
    let algebraic = cluster.len();
    let mean = cluster.iter().map(|&i| evs[i]).sum::<C64>() / algebraic as f64;
    let spread = cluster
        .iter()
        .map(|&i| (evs[i] - mean).norm())
        .fold(0.0f64, f64::max);

    let nmat = shifted(h, mean);
    let base_norm = singular_values(&nmat).first().copied().unwrap_or(0.0);
    let mut rank_sequence = Vec::with_capacity(algebraic);
    let mut power = nmat.clone();
    for j in 1..=algebraic {
        let sv = singular_values(&power);
        let sv_max = sv.first().copied().unwrap_or(0.0);
        let noise = 64.0 * f64::EPSILON * base_norm.powi(j as i32) * n as f64;
        let cutoff = rank_cutoff(sv_max, tol, spread.powi(j as i32), noise);
        rank_sequence.push(sv.iter().filter(|&&s| s > cutoff).count());
        if j < algebraic {
            power = power.dot(&nmat);
        }
    }
    let geometric = (n - rank_sequence[0]).clamp(1, algebraic);
    Ok(MultiplicityStructure { eigenvalue: mean, algebraic, geometric, rank_sequence })
}

/// Max over eigenvalue clusters of (algebraic - geometric) multiplicity;
/// zero means diagonalizable at tolerance `tol`.
pub fn diagonalizability_defect(h: &CMatrix, tol: f64) -> Result<usize> {
    let n = square_checked(h)?;
    let evs = linalg::eigenvalues(h)?;
    let clusters = cluster_eigenvalues(&evs, tol);
    let mut worst = 0usize;
    for cluster in clusters {
        if cluster.len() < 2 {
            continue;
        }
        let alg = cluster.len();
        let mean = cluster.iter().map(|&i| evs[i]).sum::<C64>() / alg as f64;
        let spread = cluster
            .iter()
            .map(|&i| (evs[i] - mean).norm())
            .fold(0.0f64, f64::max);
        let nmat = shifted(h, mean);
        let sv = singular_values(&nmat);
        let sv_max = sv.first().copied().unwrap_or(0.0);
        let noise = 64.0 * f64::EPSILON * sv_max * n as f64;
        let cutoff = rank_cutoff(sv_max, tol, spread, noise);
        let rank = sv.iter().filter(|&&s| s > cutoff).count();
        let geometric = (n - rank).clamp(1, alg);
        worst = worst.max(alg - geometric);
    }
    Ok(worst)
}

/// Jordan decomposition of a defective 2x2 matrix. The repeated eigenvalue
/// is `tr(H)/2`; `N = H - l I` is nilpotent, so `s1 = N e / |N e|` is the
/// eigenvector and `s2 = e / |N e|` completes the Jordan chain.
pub fn jordan_decompose_2x2(h: &CMatrix) -> Result<JordanDecomposition2x2> {
    if h.nrows() != 2 || h.ncols() != 2 {
        return Err(Error::invalid("jordan_decompose_2x2 requires a 2x2 matrix"));
    }
    if diagonalizability_defect(h, DEFAULT_RANK_TOL)? == 0 {
        return Err(Error::invalid(
            "matrix is diagonalizable; use the eigen-decomposition instead",
        ));
    }
    Ok(jordan_like_2x2(h))
}

/// The same construction without the defectiveness gate; used on
/// near-defective matrices where the residual is O(|eta|) instead of zero.
pub(crate) fn jordan_like_2x2(h: &CMatrix) -> JordanDecomposition2x2 {
    let lambda = 0.5 * trace(h);
    let nmat = shifted(h, lambda);
    let col_norm = |j: usize| (nmat[[0, j]].norm_sqr() + nmat[[1, j]].norm_sqr()).sqrt();
    let pick = if col_norm(1) >= col_norm(0) { 1 } else { 0 };
    let beta = col_norm(pick).max(f64::MIN_POSITIVE);
    let mut s = Array2::zeros((2, 2));
    s[[0, 0]] = nmat[[0, pick]] / beta;
    s[[1, 0]] = nmat[[1, pick]] / beta;
    s[[pick, 1]] = C64::new(1.0 / beta, 0.0);
    let mut j = Array2::zeros((2, 2));
    j[[0, 0]] = lambda;
    j[[1, 1]] = lambda;
    j[[0, 1]] = C64::new(1.0, 0.0);
    let cond_s = cond2(&s);
    JordanDecomposition2x2 { s, j, cond_s }
}

/// Condition number of the component-gauge Jordan transform, the form used
/// for instability diagnostics near non-defective EPs: the eigenvector is
/// normalized to second component 1 and the generalized eigenvector to
/// second component 0. This gauge is singular along certain approach
/// directions even though the intrinsic conditioning is milder, and that
/// divergence is the signature being tracked.
pub(crate) fn jordan_gauge_cond_2x2(h: &CMatrix) -> f64 {
    let lambda = 0.5 * trace(h);
    let nmat = shifted(h, lambda);
    let n11 = nmat[[0, 0]];
    let n21 = nmat[[1, 0]];
    if n21.norm() == 0.0 {
        return f64::INFINITY;
    }
    let mut s = Array2::zeros((2, 2));
    s[[0, 0]] = n11 / n21;
    s[[0, 1]] = C64::new(1.0, 0.0) / n21;
    s[[1, 0]] = C64::new(1.0, 0.0);
    cond2(&s)
}
