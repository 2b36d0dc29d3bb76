//! Open-boundary (slab) Hamiltonians built from Bloch data.
//!
//! The Bloch matrix of a range-1 model factorizes as
//! `H(k) = T_{-1} e^{-i k_open} + T_0 + T_{+1} e^{+i k_open}` along the open
//! axis via `cos t = (e^{it} + e^{-it})/2`, `sin t = (e^{it} - e^{-it})/(2i)`.
//! The slab is the block-tridiagonal matrix with `T_0` on the diagonal and
//! `T_{+1}`/`T_{-1}` off it, with no periodic wrap.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};
use crate::models::{Axis, Factor, ModelSpec, Term, TrigFn, eval_bloch};

/// The hopping matrices of a range-1 chain at fixed transverse momentum,
/// indexed by hop distance m in {-1, 0, +1}.
#[derive(Debug, Clone)]
pub struct FourierBlocks {
    pub minus: CMatrix,
    pub zero: CMatrix,
    pub plus: CMatrix,
}

impl FourierBlocks {
    /// Reassemble the Bloch matrix at momentum `k_open` along the open axis.
    pub fn bloch(&self, k_open: f64) -> CMatrix {
        let phase = C64::new(0.0, k_open).exp();
        &self.minus.mapv(|z| z * phase.conj()) + &self.zero + &self.plus.mapv(|z| z * phase)
    }
}

/// A finite-width slab Hamiltonian.
#[derive(Debug, Clone)]
pub struct SlabHamiltonian {
    pub open_axis: Axis,
    pub sites: usize,
    pub k_perp: [f64; 3],
    pub matrix: CMatrix,
}

/// Split each term by its factor along `open_axis` and evaluate the
/// remaining factors at `k_perp` (the open-axis component of `k_perp` is
/// ignored). Terms with more than one factor along the open axis have
/// hopping range > 1 and are rejected.
pub fn fourier_blocks(
    model: &ModelSpec,
    open_axis: Axis,
    k_perp: [f64; 3],
) -> Result<FourierBlocks> {
    let n = model.bands;
    let eval_rest = |factors: &[Factor]| -> f64 {
        factors
            .iter()
            .map(|f| {
                let arg = k_perp[f.axis.index()];
                match f.function {
                    TrigFn::Sin => arg.sin(),
                    TrigFn::Cos => arg.cos(),
                }
            })
            .product()
    };

    let mut bucket_minus: Vec<Term> = Vec::new();
    let mut bucket_zero: Vec<Term> = Vec::new();
    let mut bucket_plus: Vec<Term> = Vec::new();
    for term in &model.terms {
        let (open, rest): (Vec<Factor>, Vec<Factor>) =
            term.factors.iter().partition(|f| f.axis == open_axis);
        match open.len() {
            0 => bucket_zero.push(Term { mu: term.mu, coeff: term.coeff, factors: rest }),
            1 => {
                let half = 0.5 * term.coeff;
                match open[0].function {
                    TrigFn::Cos => {
                        bucket_plus.push(Term { mu: term.mu, coeff: half, factors: rest.clone() });
                        bucket_minus.push(Term { mu: term.mu, coeff: half, factors: rest });
                    }
                    TrigFn::Sin => {
                        // sin t = (e^{it} - e^{-it}) / (2i)
                        let half_over_i = half * C64::new(0.0, -1.0);
                        bucket_plus.push(Term {
                            mu: term.mu,
                            coeff: half_over_i,
                            factors: rest.clone(),
                        });
                        bucket_minus.push(Term {
                            mu: term.mu,
                            coeff: -half_over_i,
                            factors: rest,
                        });
                    }
                }
            }
            _ => {
                return Err(Error::unsupported(format!(
                    "term on generator {} has hopping range {} along the open axis; only range 1 is supported",
                    term.mu,
                    open.len()
                )));
            }
        }
    }

    let assemble = |terms: &[Term]| -> CMatrix {
        let b = crate::basis::cached(n);
        let mut m: CMatrix = Array2::zeros((n, n));
        for t in terms {
            let v = t.coeff * eval_rest(&t.factors);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            m.scaled_add(v, &b.matrices[t.mu]);
        }
        m
    };

    Ok(FourierBlocks {
        minus: assemble(&bucket_minus),
        zero: assemble(&bucket_zero),
        plus: assemble(&bucket_plus),
    })
}

/// Block-tridiagonal slab with `sites` unit cells along `open_axis`.
pub fn obc_hamiltonian(
    model: &ModelSpec,
    open_axis: Axis,
    sites: usize,
    k_perp: [f64; 3],
) -> Result<SlabHamiltonian> {
    if sites == 0 {
        return Err(Error::invalid("slab needs at least one site"));
    }
    let blocks = fourier_blocks(model, open_axis, k_perp)?;
    let n = model.bands;
    let dim = n * sites;
    let mut matrix: CMatrix = Array2::zeros((dim, dim));
    for s in 0..sites {
        for i in 0..n {
            for j in 0..n {
                matrix[[s * n + i, s * n + j]] = blocks.zero[[i, j]];
                if s + 1 < sites {
                    matrix[[s * n + i, (s + 1) * n + j]] = blocks.plus[[i, j]];
                    matrix[[(s + 1) * n + i, s * n + j]] = blocks.minus[[i, j]];
                }
            }
        }
    }
    Ok(SlabHamiltonian { open_axis, sites, k_perp, matrix })
}

/// Fraction of the squared amplitude living in the first `w` and last `w`
/// site blocks of a slab state.
pub fn edge_weight(state: &[C64], sites: usize, w: usize) -> Result<f64> {
    if sites == 0 || state.len() % sites != 0 {
        return Err(Error::invalid(format!(
            "state length {} is not a multiple of the site count {}",
            state.len(),
            sites
        )));
    }
    if 2 * w >= sites {
        return Err(Error::invalid(format!(
            "boundary width {w} must be below half the site count {sites}"
        )));
    }
    let bands = state.len() / sites;
    let total: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::invalid("state has zero norm"));
    }
    let mut edge = 0.0;
    for s in 0..sites {
        if s < w || s >= sites - w {
            for b in 0..bands {
                edge += state[s * bands + b].norm_sqr();
            }
        }
    }
    Ok(edge / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::models::zoo_with_defaults;
    use crate::symmetry::halton_momentum;

    #[test]
    fn cos_and_sin_split_into_half_hoppings() {
        // cos(k_y) Y^1 -> T_{+1} = T_{-1} = Y^1 / 2, T_0 = 0.
        let model = ModelSpec {
            name: "cos-y".into(),
            bands: 2,
            terms: vec![Term {
                mu: 1,
                coeff: C64::new(1.0, 0.0),
                factors: vec![Factor { function: TrigFn::Cos, axis: Axis::Y }],
            }],
            params: Default::default(),
        };
        let blocks = fourier_blocks(&model, Axis::Y, [0.0; 3]).unwrap();
        assert!(max_abs(&blocks.zero) < 1e-15);
        assert!((blocks.plus[[0, 1]] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((blocks.minus[[0, 1]] - C64::new(0.5, 0.0)).norm() < 1e-15);

        // sin(k_y) Y^2 -> T_{+1} = Y^2/(2i), T_{-1} = -Y^2/(2i).
        let model = ModelSpec {
            name: "sin-y".into(),
            bands: 2,
            terms: vec![Term {
                mu: 2,
                coeff: C64::new(1.0, 0.0),
                factors: vec![Factor { function: TrigFn::Sin, axis: Axis::Y }],
            }],
            params: Default::default(),
        };
        let blocks = fourier_blocks(&model, Axis::Y, [0.0; 3]).unwrap();
        // Y^2[0,1] = -i, so T_{+1}[0,1] = (-i)/(2i) = -1/2.
        assert!((blocks.plus[[0, 1]] - C64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((blocks.minus[[0, 1]] - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn blocks_reproduce_bloch_matrix() {
        for name in ["pt-weyl-2b", "edge-2b", "psh-dirac-4b"] {
            let model = zoo_with_defaults(name).unwrap();
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                for i in 0..100 {
                    let k = halton_momentum(1 + i as u64);
                    let blocks = fourier_blocks(&model, axis, k).unwrap();
                    let rebuilt = blocks.bloch(k[axis.index()]);
                    let direct = eval_bloch(&model, k);
                    let err = max_abs(&(&rebuilt - &direct));
                    assert!(err < 1e-12, "{name} axis {axis:?} err {err}");
                }
            }
        }
    }

    #[test]
    fn range_two_terms_rejected() {
        let model = ModelSpec {
            name: "range2".into(),
            bands: 2,
            terms: vec![Term {
                mu: 1,
                coeff: C64::new(1.0, 0.0),
                factors: vec![
                    Factor { function: TrigFn::Sin, axis: Axis::Y },
                    Factor { function: TrigFn::Cos, axis: Axis::Y },
                ],
            }],
            params: Default::default(),
        };
        assert!(matches!(
            fourier_blocks(&model, Axis::Y, [0.0; 3]),
            Err(Error::Unsupported(_))
        ));
        // Fine along other axes.
        assert!(fourier_blocks(&model, Axis::X, [0.0; 3]).is_ok());
    }

    #[test]
    fn single_site_slab_is_t0() {
        let model = zoo_with_defaults("pt-weyl-2b").unwrap();
        let k = [0.3, 0.0, 1.2];
        let slab = obc_hamiltonian(&model, Axis::Y, 1, k).unwrap();
        let blocks = fourier_blocks(&model, Axis::Y, k).unwrap();
        assert!(max_abs(&(&slab.matrix - &blocks.zero)) < 1e-15);
    }

    #[test]
    fn slab_is_block_tridiagonal() {
        let model = zoo_with_defaults("pt-weyl-2b").unwrap();
        let slab = obc_hamiltonian(&model, Axis::Y, 8, [0.0, 0.0, 0.4]).unwrap();
        let n = 2;
        for si in 0..8usize {
            for sj in 0..8usize {
                if si.abs_diff(sj) > 1 {
                    for i in 0..n {
                        for j in 0..n {
                            assert_eq!(slab.matrix[[si * n + i, sj * n + j]], C64::new(0.0, 0.0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn edge_weight_examples() {
        // Fully localized on the first site.
        let mut state = vec![C64::new(0.0, 0.0); 2 * 10];
        state[0] = C64::new(1.0, 0.0);
        assert!((edge_weight(&state, 10, 2).unwrap() - 1.0).abs() < 1e-15);

        // Uniform state over 50 sites, w = 2: 4/50.
        let uniform = vec![C64::new(1.0, 0.0); 50];
        assert!((edge_weight(&uniform, 50, 2).unwrap() - 0.08).abs() < 1e-15);

        assert!(edge_weight(&uniform, 50, 25).is_err());
        assert!(edge_weight(&uniform, 7, 1).is_err());
    }
}
