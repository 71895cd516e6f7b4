//! Massey triple products of degree-one classes in the Laurent-graded algebra,
//! taken modulo the span of all products of two degree-one classes.

use serde::Serialize;

use crate::aomoto::{TwistedComplex, WeightMatrix};
use crate::error::{Error, Result};
use crate::laurent::{add_keys, laurent_cohomology, LaurentElement, WindowBox};
use crate::linalg::{sparse, Echelon};
use crate::os::{OSAlgebra, OSElement};

/// A degree-one form sitting in component `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOneClass {
    pub form: OSElement,
    pub k: Vec<i64>,
}

impl DegreeOneClass {
    pub fn new(form: OSElement, k: Vec<i64>) -> Self {
        DegreeOneClass { form, k }
    }

    /// Reads a single-component element; zero is placed in component 0.
    pub fn from_laurent(x: &LaurentElement, rank: usize) -> Result<Self> {
        if x.is_zero() {
            return Ok(DegreeOneClass::new(OSElement::zero(), vec![0; rank]));
        }
        let (k, form) = x
            .single_component()
            .ok_or_else(|| Error::NotHomogeneous(format!("{x} has several components")))?;
        if k.len() != rank {
            return Err(Error::WrongLength {
                expected: rank,
                got: k.len(),
            });
        }
        Ok(DegreeOneClass::new(form.clone(), k.clone()))
    }

    pub fn to_laurent(&self) -> LaurentElement {
        LaurentElement::single(self.k.clone(), self.form.clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MasseyResult {
    pub defined: bool,
    pub target: Vec<i64>,
    #[serde(serialize_with = "ser_one")]
    pub representative: LaurentElement,
    #[serde(serialize_with = "ser_many")]
    pub indeterminacy_basis: Vec<LaurentElement>,
    /// Dimension of the coboundaries in the target component.
    pub coboundary_dim: usize,
    /// `dim H²` of the target component.
    pub h2_dim: usize,
    pub nonzero_mod_indeterminacy: bool,
    #[serde(serialize_with = "ser_opt")]
    pub r12: Option<LaurentElement>,
    #[serde(serialize_with = "ser_opt")]
    pub r23: Option<LaurentElement>,
    /// Splittings `k' + k'' = target` with one summand outside the window.
    pub pairs_outside_window: usize,
}

fn ser_one<S: serde::Serializer>(x: &LaurentElement, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_many<S: serde::Serializer>(x: &[LaurentElement], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(ToString::to_string))
}

fn ser_opt<S: serde::Serializer>(x: &Option<LaurentElement>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl MasseyResult {
    pub fn verdict(&self) -> &'static str {
        match (self.defined, self.nonzero_mod_indeterminacy) {
            (false, _) => "UNDEFINED",
            (true, true) => "NONZERO",
            (true, false) => "ZERO",
        }
    }
}

fn check_class(alg: &OSAlgebra, a: &WeightMatrix, x: &DegreeOneClass) -> Result<()> {
    if x.k.len() != a.nrows() {
        return Err(Error::WrongLength {
            expected: a.nrows(),
            got: x.k.len(),
        });
    }
    if !matches!(x.form.degree(), None | Some(1)) {
        return Err(Error::NotHomogeneous(format!("{} is not of degree one", x.form)));
    }
    let c = TwistedComplex::new(alg, &a.combination(&x.k))?;
    if !c.apply(1, &x.form).is_zero() {
        return Err(Error::NotClosed(x.to_laurent().to_string()));
    }
    Ok(())
}

/// `⟨x₁, x₂, x₃⟩ = [r₁₂x₃ + x₁r₂₃]` with `d r₁₂ = x₁x₂`, `d r₂₃ = x₂x₃`.
pub fn massey_triple(
    alg: &OSAlgebra,
    a: &WeightMatrix,
    x: [&DegreeOneClass; 3],
    window: &WindowBox,
) -> Result<MasseyResult> {
    if a.ncols() != alg.n() {
        return Err(Error::WrongLength {
            expected: alg.n(),
            got: a.ncols(),
        });
    }
    for c in x {
        check_class(alg, a, c)?;
    }
    let [x1, x2, x3] = x;
    let k12 = add_keys(&x1.k, &x2.k);
    let k23 = add_keys(&x2.k, &x3.k);
    let target = add_keys(&k12, &x3.k);
    for k in [&x1.k, &x2.k, &x3.k, &k12, &k23, &target] {
        if !window.contains(k) {
            return Err(Error::WindowTooSmall(format!("component {k:?} lies outside")));
        }
    }

    let complex = |k: &[i64]| TwistedComplex::new(alg, &a.combination(k));
    let c12 = complex(&k12)?;
    let c23 = complex(&k23)?;
    let ct = complex(&target)?;
    let r12 = c12.primitive(1, &alg.multiply(&x1.form, &x2.form));
    let r23 = c23.primitive(1, &alg.multiply(&x2.form, &x3.form));
    let h2_dim = ct.cohomology_dim(2);
    let coboundaries = ct.coboundaries(2);
    let coboundary_dim = coboundaries.rank();

    let (Some(r12), Some(r23)) = (r12, r23) else {
        return Ok(MasseyResult {
            defined: false,
            target,
            representative: LaurentElement::zero(),
            indeterminacy_basis: Vec::new(),
            coboundary_dim,
            h2_dim,
            nonzero_mod_indeterminacy: false,
            r12: None,
            r23: None,
            pairs_outside_window: 0,
        });
    };
    let rep = alg
        .multiply(&r12, &x3.form)
        .add(&alg.multiply(&x1.form, &r23));

    let h1 = laurent_cohomology(alg, a, window, 1)?;
    let mut span = coboundaries;
    let mut basis = Vec::new();
    let mut outside = 0;
    for (k1, s1) in &h1 {
        let k2: Vec<i64> = target.iter().zip(k1).map(|(t, k)| t - k).collect();
        let Some(s2) = h1.get(&k2) else {
            outside += 1;
            continue;
        };
        for u in &s1.representatives {
            for v in &s2.representatives {
                let p = alg.multiply(u, v);
                if span.insert(sparse(&alg.to_vector(&p, 2))) {
                    basis.push(LaurentElement::single(target.clone(), p));
                }
            }
        }
    }
    let nonzero = !span.contains(sparse(&alg.to_vector(&rep, 2)));

    Ok(MasseyResult {
        defined: true,
        representative: LaurentElement::single(target.clone(), rep),
        target,
        indeterminacy_basis: basis,
        coboundary_dim,
        h2_dim,
        nonzero_mod_indeterminacy: nonzero,
        r12: Some(LaurentElement::single(k12, r12)),
        r23: Some(LaurentElement::single(k23, r23)),
        pairs_outside_window: outside,
    })
}

/// Whether `x` (degree two, single component `k`) lies in `span`-of-`basis` + im d.
pub fn in_indeterminacy(
    alg: &OSAlgebra,
    a: &WeightMatrix,
    result: &MasseyResult,
    x: &OSElement,
) -> Result<bool> {
    let ct = TwistedComplex::new(alg, &a.combination(&result.target))?;
    let mut span: Echelon = ct.coboundaries(2);
    for b in &result.indeterminacy_basis {
        span.insert(sparse(&alg.to_vector(b.component(&result.target), 2)));
    }
    Ok(span.contains(sparse(&alg.to_vector(x, 2))))
}
