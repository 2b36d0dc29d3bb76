//! Discrete symmetries of non-Hermitian Bloch Hamiltonians.
//!
//! The four kinds and their defining relations:
//!
//! ```text
//! PT:    H(k) =  U H*(k) U^{-1}
//! CP:    H(k) = -U H*(k) U^{-1}
//! psH:   H(k) =  U H^dag(k) U^{-1}
//! TRS+:  H(-k) = U H^dag(k) U^dag
//! ```
//!
//! Symmetries are verified by direct residual evaluation of these relations
//! rather than by component bookkeeping on the d_mu; the relations are
//! unambiguous while the component conditions (symmetric vs antisymmetric,
//! real vs imaginary parts under TRS-dagger) are subtle.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::basis::check_bands;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, CMatrix, adjoint, identity, max_abs};
use crate::models::{ModelSpec, eval_bloch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Pt,
    Cp,
    PsH,
    TrsDagger,
}

impl SymmetryKind {
    pub fn label(self) -> &'static str {
        match self {
            SymmetryKind::Pt => "PT",
            SymmetryKind::Cp => "CP",
            SymmetryKind::PsH => "psH",
            SymmetryKind::TrsDagger => "TRS-dagger",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pt" => Ok(SymmetryKind::Pt),
            "cp" => Ok(SymmetryKind::Cp),
            "psh" => Ok(SymmetryKind::PsH),
            "trsdag" | "trs-dagger" | "trsdagger" => Ok(SymmetryKind::TrsDagger),
            _ => Err(Error::invalid(format!("unknown symmetry kind '{s}'"))),
        }
    }
}

/// A symmetry kind together with its unitary generator.
#[derive(Debug, Clone)]
pub struct SymmetrySpec {
    pub kind: SymmetryKind,
    pub generator: CMatrix,
}

impl SymmetrySpec {
    /// Wrap a user-supplied generator, enforcing unitarity to 1e-12.
    pub fn new(kind: SymmetryKind, generator: CMatrix) -> Result<Self> {
        let n = generator.nrows();
        if generator.ncols() != n {
            return Err(Error::invalid("generator must be square"));
        }
        let gram = adjoint(&generator).dot(&generator);
        let err = max_abs(&(&gram - &identity(n)));
        if err > 1e-12 {
            return Err(Error::invalid(format!(
                "generator is not unitary (deviation {err:.3e})"
            )));
        }
        Ok(SymmetrySpec { kind, generator })
    }

    /// The generator choices of the constraint tables: identity for PT/CP at
    /// n = 2, antidiagonal [1, 1] (resp. [1, -1]) for psH (resp. TRS-dagger)
    /// at n = 2, and alternating-sign diagonals for n = 3, 4.
    pub fn with_default_generator(kind: SymmetryKind, n: usize) -> Result<Self> {
        check_bands(n)?;
        let gen = match (kind, n) {
            (SymmetryKind::Pt | SymmetryKind::Cp, 2) => identity(2),
            (SymmetryKind::PsH, 2) => antidiag(&[1.0, 1.0]),
            (SymmetryKind::TrsDagger, 2) => antidiag(&[1.0, -1.0]),
            (SymmetryKind::TrsDagger, _) => {
                return Err(Error::unsupported(
                    "no tabulated TRS-dagger generator beyond two bands",
                ));
            }
            (_, n) => alternating_diag(n),
        };
        SymmetrySpec::new(kind, gen)
    }
}

fn antidiag(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    let mut m = Array2::zeros((n, n));
    for (i, &e) in entries.iter().enumerate() {
        m[[i, n - 1 - i]] = C64::new(e, 0.0);
    }
    m
}

fn alternating_diag(n: usize) -> CMatrix {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        m[[i, i]] = C64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

/// Max-norm of the defining-relation residual at one momentum.
pub fn symmetry_residual(model: &ModelSpec, spec: &SymmetrySpec, k: [f64; 3]) -> Result<f64> {
    let n = model.bands;
    if spec.generator.nrows() != n {
        return Err(Error::invalid(format!(
            "generator dimension {} does not match band count {}",
            spec.generator.nrows(),
            n
        )));
    }
    let u = &spec.generator;
    let h = eval_bloch(model, k);
    let residual = match spec.kind {
        SymmetryKind::Pt => {
            let uinv = linalg::inverse(u)?;
            &h - &u.dot(&h.mapv(|z| z.conj())).dot(&uinv)
        }
        SymmetryKind::Cp => {
            let uinv = linalg::inverse(u)?;
            &h + &u.dot(&h.mapv(|z| z.conj())).dot(&uinv)
        }
        SymmetryKind::PsH => {
            let uinv = linalg::inverse(u)?;
            &h - &u.dot(&adjoint(&h)).dot(&uinv)
        }
        SymmetryKind::TrsDagger => {
            let hm = eval_bloch(model, [-k[0], -k[1], -k[2]]);
            &hm - &u.dot(&adjoint(&h)).dot(&adjoint(u))
        }
    };
    Ok(max_abs(&residual))
}

/// Outcome of a sampled symmetry verification.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryCheck {
    pub pass: bool,
    pub max_residual: f64,
    pub samples: usize,
}

/// Evaluate the residual on a deterministic low-discrepancy (Halton) sample
/// of the Brillouin zone; passes iff the max residual stays within `tol`.
/// `seed` offsets the Halton index so independent checks can use disjoint
/// sample sets while staying reproducible.
pub fn verify_symmetry_seeded(
    model: &ModelSpec,
    spec: &SymmetrySpec,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<SymmetryCheck> {
    if samples == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let mut max_residual = 0.0f64;
    for i in 0..samples {
        let k = halton_momentum(seed + 1 + i as u64);
        let r = symmetry_residual(model, spec, k)?;
        max_residual = max_residual.max(r);
    }
    Ok(SymmetryCheck { pass: max_residual <= tol, max_residual, samples })
}

pub fn verify_symmetry(
    model: &ModelSpec,
    spec: &SymmetrySpec,
    samples: usize,
    tol: f64,
) -> Result<SymmetryCheck> {
    verify_symmetry_seeded(model, spec, samples, tol, 0)
}

/// Which scalar a constraint refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintField {
    /// Real part of a discriminant scalar (eta, nu, kappa by level 0, 1, 2).
    DiscriminantRe(usize),
    /// Imaginary part of a discriminant scalar.
    DiscriminantIm(usize),
    /// Real part of the coefficient d_mu.
    CoefficientRe(usize),
    /// Imaginary part of d_mu.
    CoefficientIm(usize),
    /// k -> -k antisymmetric part of d_mu (both real and imaginary parts).
    CoefficientAntisymmetric(usize),
}

impl ConstraintField {
    pub fn display(&self, bands: usize) -> String {
        let disc = |level: usize| match level {
            0 => "eta",
            1 => "nu",
            _ => "kappa",
        };
        let comp = |mu: usize| {
            if bands == 2 {
                ["0", "x", "y", "z"][mu].to_string()
            } else {
                mu.to_string()
            }
        };
        match self {
            ConstraintField::DiscriminantRe(l) => format!("{}_R", disc(*l)),
            ConstraintField::DiscriminantIm(l) => format!("{}_I", disc(*l)),
            ConstraintField::CoefficientRe(mu) => format!("d_{}R", comp(*mu)),
            ConstraintField::CoefficientIm(mu) => format!("d_{}I", comp(*mu)),
            ConstraintField::CoefficientAntisymmetric(mu) => format!("d_{}a", comp(*mu)),
        }
    }
}

/// A symmetry-reduced constraint row: which scalars must vanish to find
/// defective and non-defective EPns, with the codimension of each set.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintDescriptor {
    pub kind: SymmetryKind,
    pub bands: usize,
    pub defective_constraints: Vec<ConstraintField>,
    pub nondefective_constraints: Vec<ConstraintField>,
}

impl ConstraintDescriptor {
    pub fn codimension_defective(&self) -> usize {
        self.defective_constraints.len()
    }

    pub fn codimension_nondefective(&self) -> usize {
        self.nondefective_constraints.len()
    }
}

/// The tabulated constraint rows for (kind, band count).
pub fn reduced_constraints(kind: SymmetryKind, n: usize) -> Result<ConstraintDescriptor> {
    use ConstraintField::{
        CoefficientAntisymmetric as Da, CoefficientIm as Di, CoefficientRe as Dr,
        DiscriminantIm as Qi, DiscriminantRe as Qr,
    };
    check_bands(n)?;
    let (defective, nondefective): (Vec<ConstraintField>, Vec<ConstraintField>) = match (kind, n) {
        (SymmetryKind::Pt, 2) => (vec![Qr(0)], vec![Dr(1), Di(2), Dr(3)]),
        (SymmetryKind::Cp, 2) => (vec![Qr(0)], vec![Di(1), Dr(2), Di(3)]),
        (SymmetryKind::PsH, 2) => (vec![Qr(0)], vec![Dr(1), Di(2), Di(3)]),
        (SymmetryKind::TrsDagger, 2) => (vec![Qr(0), Qi(0)], vec![Da(1), Da(2), Da(3)]),
        (SymmetryKind::Pt, 3) => (
            vec![Qr(0), Qr(1)],
            vec![Dr(1), Di(4), Di(2), Dr(5), Dr(3), Di(6), Dr(7), Dr(8)],
        ),
        (SymmetryKind::Cp, 3) => (
            vec![Qr(0), Qi(1)],
            vec![Di(1), Dr(4), Dr(2), Di(5), Di(3), Dr(6), Di(7), Di(8)],
        ),
        (SymmetryKind::PsH, 3) => (
            vec![Qr(0), Qr(1)],
            vec![Di(1), Di(4), Dr(2), Dr(5), Di(3), Di(6), Dr(7), Dr(8)],
        ),
        (SymmetryKind::Pt, 4) => (
            vec![Qr(0), Qr(1), Qr(2)],
            vec![
                Dr(1), Di(2), Dr(3), Dr(4), Di(5), Dr(6), Di(7), Dr(8),
                Di(9), Di(10), Dr(11), Di(12), Dr(13), Dr(14), Dr(15),
            ],
        ),
        (SymmetryKind::Cp, 4) => (
            vec![Qr(0), Qr(1), Qi(2)],
            vec![
                Di(1), Dr(2), Di(3), Di(4), Dr(5), Di(6), Dr(7), Di(8),
                Dr(9), Dr(10), Di(11), Dr(12), Di(13), Di(14), Di(15),
            ],
        ),
        (SymmetryKind::PsH, 4) => (
            vec![Qr(0), Qr(1), Qr(2)],
            vec![
                Di(1), Dr(2), Di(3), Di(4), Dr(5), Di(6), Di(7), Dr(8),
                Di(9), Di(10), Dr(11), Di(12), Dr(13), Dr(14), Dr(15),
            ],
        ),
        (SymmetryKind::TrsDagger, _) => {
            return Err(Error::unsupported(
                "no tabulated TRS-dagger constraints beyond two bands",
            ));
        }
        _ => unreachable!(),
    };
    Ok(ConstraintDescriptor {
        kind,
        bands: n,
        defective_constraints: defective,
        nondefective_constraints: nondefective,
    })
}

/// The 2^dim time-reversal invariant momenta: all components in {0, pi}.
pub fn trim_points(dim: usize) -> Result<Vec<Vec<f64>>> {
    if !(1..=3).contains(&dim) {
        return Err(Error::invalid("spatial dimension must be 1, 2, or 3"));
    }
    let mut out = Vec::with_capacity(1 << dim);
    for mask in 0..(1usize << dim) {
        out.push(
            (0..dim)
                .map(|a| if mask & (1 << a) != 0 { PI } else { 0.0 })
                .collect(),
        );
    }
    Ok(out)
}

fn radical_inverse(base: u64, mut index: u64) -> f64 {
    let mut frac = 1.0;
    let mut value = 0.0;
    let b = base as f64;
    while index > 0 {
        frac /= b;
        value += frac * (index % base) as f64;
        index /= base;
    }
    value
}

/// Deterministic Halton point in the Brillouin zone [-pi, pi)^3.
pub fn halton_momentum(index: u64) -> [f64; 3] {
    [
        -PI + 2.0 * PI * radical_inverse(2, index),
        -PI + 2.0 * PI * radical_inverse(3, index),
        -PI + 2.0 * PI * radical_inverse(5, index),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{zoo_with_defaults, ZOO_NAMES};

    #[test]
    fn default_generators_are_unitary_and_shaped() {
        for n in [2usize, 3, 4] {
            for kind in [SymmetryKind::Pt, SymmetryKind::Cp, SymmetryKind::PsH] {
                let spec = SymmetrySpec::with_default_generator(kind, n).unwrap();
                assert_eq!(spec.generator.nrows(), n);
            }
        }
        let trs = SymmetrySpec::with_default_generator(SymmetryKind::TrsDagger, 2).unwrap();
        // adiag[1, -1] = i sigma_y
        assert_eq!(trs.generator[[0, 1]], C64::new(1.0, 0.0));
        assert_eq!(trs.generator[[1, 0]], C64::new(-1.0, 0.0));
        assert!(SymmetrySpec::with_default_generator(SymmetryKind::TrsDagger, 3).is_err());
    }

    #[test]
    fn non_unitary_generator_rejected() {
        let mut g: CMatrix = identity(2);
        g[[0, 0]] = C64::new(2.0, 0.0);
        assert!(SymmetrySpec::new(SymmetryKind::Pt, g).is_err());
    }

    #[test]
    fn zoo_models_pass_their_declared_symmetries() {
        let cases = [
            ("pt-weyl-2b", SymmetryKind::Pt),
            ("psh-dirac-4b", SymmetryKind::PsH),
            ("trsdag-2b", SymmetryKind::TrsDagger),
        ];
        for (name, kind) in cases {
            let model = zoo_with_defaults(name).unwrap();
            let spec = SymmetrySpec::with_default_generator(kind, model.bands).unwrap();
            let check = verify_symmetry(&model, &spec, 1000, 1e-10).unwrap();
            assert!(check.pass, "{name} residual {:.3e}", check.max_residual);
        }
    }

    #[test]
    fn mismatched_symmetries_fail() {
        let pt_weyl = zoo_with_defaults("pt-weyl-2b").unwrap();
        let cp = SymmetrySpec::with_default_generator(SymmetryKind::Cp, 2).unwrap();
        let check = verify_symmetry(&pt_weyl, &cp, 1000, 1e-10).unwrap();
        assert!(!check.pass);
        // Direct residual at (pi/2, 0, 0) is visibly nonzero.
        let r = symmetry_residual(&pt_weyl, &cp, [PI / 2.0, 0.0, 0.0]).unwrap();
        assert!(r > 1e-2);

        let onp = zoo_with_defaults("onp-2b").unwrap();
        let pt = SymmetrySpec::with_default_generator(SymmetryKind::Pt, 2).unwrap();
        let check = verify_symmetry(&onp, &pt, 1000, 1e-10).unwrap();
        assert!(!check.pass);
    }

    #[test]
    fn hermitian_model_is_psh_with_identity() {
        // A constant Hermitian model: psH with generator 1 is Hermiticity.
        let model = ModelSpec {
            name: "const-hermitian".into(),
            bands: 2,
            terms: vec![
                crate::models::Term {
                    mu: 1,
                    coeff: C64::new(0.7, 0.0),
                    factors: vec![],
                },
                crate::models::Term {
                    mu: 3,
                    coeff: C64::new(-0.2, 0.0),
                    factors: vec![],
                },
            ],
            params: Default::default(),
        };
        let spec = SymmetrySpec::new(SymmetryKind::PsH, identity(2)).unwrap();
        let r = symmetry_residual(&model, &spec, [0.3, -0.8, 0.1]).unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn generator_dimension_mismatch_rejected() {
        let model = zoo_with_defaults("psh-dirac-4b").unwrap();
        let spec = SymmetrySpec::with_default_generator(SymmetryKind::Pt, 2).unwrap();
        assert!(symmetry_residual(&model, &spec, [0.0; 3]).is_err());
    }

    #[test]
    fn constraint_rows_match_tables() {
        use ConstraintField::*;
        let pt2 = reduced_constraints(SymmetryKind::Pt, 2).unwrap();
        assert_eq!(pt2.defective_constraints, vec![DiscriminantRe(0)]);
        assert_eq!(
            pt2.nondefective_constraints,
            vec![CoefficientRe(1), CoefficientIm(2), CoefficientRe(3)]
        );
        assert_eq!(pt2.codimension_defective(), 1);
        assert_eq!(pt2.codimension_nondefective(), 3);
        let labels: Vec<String> = pt2
            .nondefective_constraints
            .iter()
            .map(|c| c.display(2))
            .collect();
        assert_eq!(labels, vec!["d_xR", "d_yI", "d_zR"]);

        let trs = reduced_constraints(SymmetryKind::TrsDagger, 2).unwrap();
        assert_eq!(trs.defective_constraints, vec![DiscriminantRe(0), DiscriminantIm(0)]);
        assert_eq!(trs.codimension_defective(), 2);

        let cp3 = reduced_constraints(SymmetryKind::Cp, 3).unwrap();
        assert_eq!(cp3.defective_constraints, vec![DiscriminantRe(0), DiscriminantIm(1)]);
        assert_eq!(cp3.codimension_nondefective(), 8);

        let psh4 = reduced_constraints(SymmetryKind::PsH, 4).unwrap();
        assert_eq!(
            psh4.defective_constraints,
            vec![DiscriminantRe(0), DiscriminantRe(1), DiscriminantRe(2)]
        );
        assert_eq!(psh4.codimension_nondefective(), 15);

        assert!(reduced_constraints(SymmetryKind::TrsDagger, 4).is_err());
    }

    #[test]
    fn trim_point_sets() {
        assert_eq!(trim_points(1).unwrap(), vec![vec![0.0], vec![PI]]);
        let t2 = trim_points(2).unwrap();
        assert_eq!(t2.len(), 4);
        assert!(t2.contains(&vec![0.0, PI]));
        assert_eq!(trim_points(3).unwrap().len(), 8);
        assert!(trim_points(0).is_err());
        assert!(trim_points(4).is_err());
    }

    #[test]
    fn zoo_names_all_constructible() {
        for name in ZOO_NAMES {
            zoo_with_defaults(name).unwrap();
        }
    }
}
