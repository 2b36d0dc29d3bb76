//! A small description language for Bloch Hamiltonians and the built-in
//! model zoo.
//!
//! A model is a sum of monomial terms `coeff * prod_i f_i(k_axis_i) * Y^mu`
//! where each factor is `sin` or `cos` of one momentum component. Sums inside
//! parentheses of the published model definitions are pre-expanded into flat
//! term lists, which keeps Fourier extraction for slab construction trivial.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::basis;
use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigFn {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_name(s: &str) -> Result<Axis> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(Error::invalid(format!("unknown axis '{s}'"))),
        }
    }
}

/// One trigonometric factor of a term.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "fn")]
    pub function: TrigFn,
    pub axis: Axis,
}

impl Factor {
    fn eval(&self, k: [f64; 3]) -> f64 {
        let arg = k[self.axis.index()];
        match self.function {
            TrigFn::Sin => arg.sin(),
            TrigFn::Cos => arg.cos(),
        }
    }
}

/// `coeff * prod(factors) * Y^mu`. An empty factor list is a constant term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Term {
    pub mu: usize,
    #[serde(with = "complex_pair")]
    pub coeff: C64,
    #[serde(default)]
    pub factors: Vec<Factor>,
}

mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// A Bloch Hamiltonian as a flat sum of terms, with the real parameters that
/// were substituted into the coefficients echoed for provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub bands: usize,
    pub terms: Vec<Term>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        basis::check_bands(self.bands)?;
        for t in &self.terms {
            if t.mu >= self.bands * self.bands {
                return Err(Error::invalid(format!(
                    "term generator index {} out of range for {} bands",
                    t.mu, self.bands
                )));
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::invalid("term coefficient must be finite"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<ModelSpec> {
        let model: ModelSpec = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("malformed model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }
}

/// Coefficient values `d_mu(k)` accumulated directly from the term list.
pub fn d_components(model: &ModelSpec, k: [f64; 3]) -> Vec<C64> {
    let mut d = vec![C64::new(0.0, 0.0); model.bands * model.bands];
    for term in &model.terms {
        let mut v = term.coeff;
        for f in &term.factors {
            v *= f.eval(k);
        }
        d[term.mu] += v;
    }
    d
}

/// Evaluate the Bloch Hamiltonian at momentum `k` (radians).
pub fn eval_bloch(model: &ModelSpec, k: [f64; 3]) -> CMatrix {
    let n = model.bands;
    let b = basis::cached(n);
    let d = d_components(model, k);
    let mut h: CMatrix = Array2::zeros((n, n));
    for (mu, &dmu) in d.iter().enumerate() {
        if dmu.re == 0.0 && dmu.im == 0.0 {
            continue;
        }
        h.scaled_add(dmu, &b.matrices[mu]);
    }
    h
}

/// Names of the zoo models.
pub const ZOO_NAMES: [&str; 5] = [
    "pt-weyl-2b",
    "psh-dirac-4b",
    "onp-2b",
    "edge-2b",
    "trsdag-2b",
];

/// Parameter names (with conventional defaults) for each zoo model. The
/// defaults are the values used in the reference figures.
pub fn zoo_default_params(name: &str) -> Result<BTreeMap<String, f64>> {
    let pairs: &[(&str, f64)] = match name {
        "pt-weyl-2b" => &[("t", 1.0), ("v", 1.0), ("lambda0", 1.0)],
        "psh-dirac-4b" => &[
            ("t", 1.0),
            ("t_z", 1.0),
            ("lambda_ixx", 0.15),
            ("lambda_ixy", 0.15),
            ("m_i", -0.27),
            ("k0", PI / 2.0),
        ],
        "onp-2b" => &[],
        "edge-2b" => &[("t", 1.0), ("v", 1.0), ("lambda0", 2.3)],
        "trsdag-2b" => &[],
        _ => return Err(Error::invalid(format!("unknown zoo model '{name}'"))),
    };
    Ok(pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect())
}

/// One-line descriptions for the zoo listing.
pub fn zoo_description(name: &str) -> &'static str {
    match name {
        "pt-weyl-2b" => "two-band PT-symmetric Weyl-like model (generator 1)",
        "psh-dirac-4b" => "four-band pseudo-Hermitian Dirac-like model (generator diag[1,-1,1,-1])",
        "onp-2b" => "two-band model with fully complex coefficients; hosts ordinary nodal points",
        "edge-2b" => "two-band model, Hermitian on the k_z = 0 plane, with mid-gap boundary states",
        "trsdag-2b" => "two-band TRS-dagger test model (synthetic; no published counterpart)",
    _ => "",
    }
}

struct TermBuilder {
    terms: Vec<Term>,
}

impl TermBuilder {
    fn new() -> Self {
        TermBuilder { terms: Vec::new() }
    }

    fn add(&mut self, mu: usize, coeff: C64, factors: &[(TrigFn, Axis)]) {
        if coeff.re == 0.0 && coeff.im == 0.0 {
            return;
        }
        self.terms.push(Term {
            mu,
            coeff,
            factors: factors
                .iter()
                .map(|&(function, axis)| Factor { function, axis })
                .collect(),
        });
    }
}

fn require_params(
    name: &str,
    params: &BTreeMap<String, f64>,
    expected: &BTreeMap<String, f64>,
) -> Result<()> {
    for key in expected.keys() {
        if !params.contains_key(key) {
            return Err(Error::invalid(format!(
                "zoo model '{name}' requires parameter '{key}'"
            )));
        }
    }
    for key in params.keys() {
        if !expected.contains_key(key) {
            return Err(Error::invalid(format!(
                "zoo model '{name}' does not take parameter '{key}'"
            )));
        }
    }
    for (key, value) in params {
        if !value.is_finite() {
            return Err(Error::invalid(format!("parameter '{key}' must be finite")));
        }
    }
    Ok(())
}

/// Construct a zoo model with explicit parameters. Every parameter the model
/// declares must be supplied; unknown names are rejected.
pub fn zoo(name: &str, params: &BTreeMap<String, f64>) -> Result<ModelSpec> {
    let expected = zoo_default_params(name)?;
    require_params(name, params, &expected)?;
    let p = |key: &str| params[key];
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    use Axis::{X, Y, Z};
    use TrigFn::{Cos, Sin};

    let mut b = TermBuilder::new();
    let bands = match name {
        "pt-weyl-2b" => {
            let (t, v, l0) = (p("t"), p("v"), p("lambda0"));
            b.add(0, re(2.0 * l0), &[(Sin, X)]);
            b.add(1, re(2.0 * t), &[(Sin, X)]);
            b.add(3, re(2.0 * t), &[(Sin, Y)]);
            // i [2t cos k_z + 2V (2 - cos k_x - cos k_y)] Y^2
            b.add(2, im(2.0 * t), &[(Cos, Z)]);
            b.add(2, im(4.0 * v), &[]);
            b.add(2, im(-2.0 * v), &[(Cos, X)]);
            b.add(2, im(-2.0 * v), &[(Cos, Y)]);
            2
        }
        "psh-dirac-4b" => {
            let (t, tz) = (p("t"), p("t_z"));
            let (lxx, lxy, mi, k0) = (p("lambda_ixx"), p("lambda_ixy"), p("m_i"), p("k0"));
            let g14 = 2.0 / 3.0_f64.sqrt();
            let g15 = (2.0 / 3.0_f64).sqrt();
            // t (cos k_x + cos k_y - 2) and t_z (cos k_z - cos k0) on the
            // shared diagonal combination g14 Y^14 + g15 Y^15.
            for (mu, g) in [(14usize, g14), (15usize, g15)] {
                b.add(mu, re(t * g), &[(Cos, X)]);
                b.add(mu, re(t * g), &[(Cos, Y)]);
                b.add(mu, re(-2.0 * t * g), &[]);
                b.add(mu, re(tz * g), &[(Cos, Z)]);
                b.add(mu, re(-tz * k0.cos() * g), &[]);
            }
            b.add(3, im(lxy), &[(Sin, Y)]);
            b.add(4, im(lxy), &[(Sin, Y)]);
            b.add(9, im(lxx), &[(Sin, X)]);
            b.add(10, im(lxx), &[(Sin, X)]);
            // i m'_I sin k_z (cos k_x - cos k_y)(Y^7 - Y^12)
            b.add(7, im(mi), &[(Sin, Z), (Cos, X)]);
            b.add(7, im(-mi), &[(Sin, Z), (Cos, Y)]);
            b.add(12, im(-mi), &[(Sin, Z), (Cos, X)]);
            b.add(12, im(mi), &[(Sin, Z), (Cos, Y)]);
            4
        }
        "onp-2b" => {
            // sin(k_a) [1/2 + i cos(k_b)] on each Pauli component with the
            // cyclic partner axis.
            for (mu, a, c) in [(1usize, X, Y), (2, Y, Z), (3, Z, X)] {
                b.add(mu, re(0.5), &[(Sin, a)]);
                b.add(mu, im(1.0), &[(Sin, a), (Cos, c)]);
            }
            2
        }
        "edge-2b" => {
            let (t, v, l0) = (p("t"), p("v"), p("lambda0"));
            b.add(0, re(l0), &[(Cos, X)]);
            // -iV (1 - cos k_z) Y^1
            b.add(1, im(-v), &[]);
            b.add(1, im(v), &[(Cos, Z)]);
            b.add(1, re(2.0 * v), &[(Cos, Y)]);
            b.add(1, re(-2.0 * t), &[(Cos, X)]);
            b.add(2, re(-2.0 * t), &[(Sin, Y)]);
            b.add(3, re(-2.0 * t), &[(Sin, Z)]);
            2
        }
        "trsdag-2b" => {
            b.add(1, re(1.0), &[(Sin, X)]);
            b.add(2, im(1.0), &[(Sin, Y)]);
            b.add(3, re(1.0), &[(Sin, Z)]);
            2
        }
        _ => unreachable!("zoo_default_params already validated the name"),
    };

    let model = ModelSpec {
        name: name.to_string(),
        bands,
        terms: b.terms,
        params: params.clone(),
    };
    model.validate()?;
    Ok(model)
}

/// Zoo model with its default (reference-figure) parameters.
pub fn zoo_with_defaults(name: &str) -> Result<ModelSpec> {
    zoo(name, &zoo_default_params(name)?)
}
