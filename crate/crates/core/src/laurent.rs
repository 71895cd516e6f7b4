//! The ℤᴺ-graded algebra `⊕_k A•·q^k` with component differential `−k·a·ω^T`,
//! materialized inside a finite window of characters.
//!
//! Component `k` is printed as `q1^k1 … qN^kN`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::aomoto::{TwistedComplex, WeightMatrix};
use crate::arrangement::esv_check;
use crate::error::{Error, ParseError, Result};
use crate::expr::{self, Expr};
use crate::os::{OSAlgebra, OSElement};
use crate::scalar::Scalar;

/// Box `lo_i ≤ k_i ≤ hi_i` of characters; always contains 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl WindowBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::WrongLength {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| *l > 0 || *h < 0) {
            return Err(Error::WindowTooSmall("window must contain 0".into()));
        }
        Ok(WindowBox { lo, hi })
    }

    /// The cube `|k_i| ≤ radius`.
    pub fn radius(rank: usize, radius: u32) -> Self {
        let r = radius as i64;
        WindowBox {
            lo: vec![-r; rank],
            hi: vec![r; rank],
        }
    }

    /// Number of character coordinates `N`.
    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.len() == self.rank()
            && k.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l <= x && x <= h)
    }

    /// All lattice points, lexicographically ordered.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (*l..=*h).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

pub fn add_keys(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Finitely supported map from characters to OS elements.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentElement {
    comps: BTreeMap<Vec<i64>, OSElement>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: Vec<i64>, x: OSElement) -> Self {
        let mut e = Self::zero();
        e.add_component(k, &x);
        e
    }

    pub fn components(&self) -> &BTreeMap<Vec<i64>, OSElement> {
        &self.comps
    }

    pub fn component(&self, k: &[i64]) -> &OSElement {
        static ZERO: std::sync::OnceLock<OSElement> = std::sync::OnceLock::new();
        self.comps
            .get(k)
            .unwrap_or_else(|| ZERO.get_or_init(OSElement::zero))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, k: Vec<i64>, x: &OSElement) {
        let sum = self.component(&k).add(x);
        if sum.is_zero() {
            self.comps.remove(&k);
        } else {
            self.comps.insert(k, sum);
        }
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        let mut out = self.clone();
        for (k, x) in &other.comps {
            out.add_component(k.clone(), x);
        }
        out
    }

    pub fn sub(&self, other: &LaurentElement) -> LaurentElement {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> LaurentElement {
        LaurentElement {
            comps: self
                .comps
                .iter()
                .map(|(k, x)| (k.clone(), x.scale(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// The unique component of a single-component element.
    pub fn single_component(&self) -> Option<(&Vec<i64>, &OSElement)> {
        let mut it = self.comps.iter();
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    /// Common form degree of all components.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.comps.values().map(OSElement::degree);
        let d = it.next()??;
        it.all(|e| e == Some(d)).then_some(d)
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(k, x)| {
                let body = x.to_string();
                if k.is_empty() {
                    return body;
                }
                let simple = x.terms().len() == 1 && !body.starts_with('-');
                let body = if simple { body } else { format!("({body})") };
                let q: Vec<String> = k
                    .iter()
                    .enumerate()
                    .map(|(i, e)| format!("q{}^{}", i + 1, e))
                    .collect();
                format!("{body} * {}", q.join(" "))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Product with components outside the window dropped; `truncated` records
/// whether anything was dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentProduct {
    pub value: LaurentElement,
    pub truncated: bool,
}

fn multiply_unbounded(alg: &OSAlgebra, x: &LaurentElement, y: &LaurentElement) -> LaurentElement {
    let mut out = LaurentElement::zero();
    for (k1, a) in &x.comps {
        for (k2, b) in &y.comps {
            let p = alg.multiply(a, b);
            if !p.is_zero() {
                out.add_component(add_keys(k1, k2), &p);
            }
        }
    }
    out
}

pub fn laurent_multiply(
    alg: &OSAlgebra,
    x: &LaurentElement,
    y: &LaurentElement,
    window: &WindowBox,
) -> LaurentProduct {
    let mut value = LaurentElement::zero();
    let mut truncated = false;
    for (k1, a) in &x.comps {
        for (k2, b) in &y.comps {
            let k = add_keys(k1, k2);
            if !window.contains(&k) {
                truncated = true;
                continue;
            }
            let p = alg.multiply(a, b);
            if !p.is_zero() {
                value.add_component(k, &p);
            }
        }
    }
    LaurentProduct { value, truncated }
}

/// Applies `−k·a·ω^T ∧` on each component `k`.
pub fn laurent_d(alg: &OSAlgebra, a: &WeightMatrix, x: &LaurentElement) -> Result<LaurentElement> {
    let mut out = LaurentElement::zero();
    for (k, comp) in &x.comps {
        let w = a.combination(k);
        let theta = alg.linear_form(&w).scale(&Scalar::int(-1));
        out.add_component(k.clone(), &alg.multiply(&theta, comp));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologySlice {
    pub dim: usize,
    #[serde(serialize_with = "ser_elems")]
    pub representatives: Vec<OSElement>,
    pub esv_valid: bool,
}

fn ser_elems<S: serde::Serializer>(v: &[OSElement], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
}

/// `H^p` of every component in the window.
pub fn laurent_cohomology(
    alg: &OSAlgebra,
    a: &WeightMatrix,
    window: &WindowBox,
    p: usize,
) -> Result<BTreeMap<Vec<i64>, CohomologySlice>> {
    if a.nrows() != window.rank() {
        return Err(Error::WrongLength {
            expected: a.nrows(),
            got: window.rank(),
        });
    }
    window
        .points()
        .into_par_iter()
        .map(|k| {
            let w = a.combination(&k);
            let c = TwistedComplex::new(alg, &w)?;
            Ok((
                k,
                CohomologySlice {
                    dim: c.cohomology_dim(p),
                    representatives: c.representatives(p),
                    esv_valid: esv_check(alg.arrangement(), &w)?.valid,
                },
            ))
        })
        .collect()
}

fn eval(alg: &OSAlgebra, rank: usize, e: &Expr) -> Result<LaurentElement, ParseError> {
    let zero_key = vec![0i64; rank];
    let constant = |c: Scalar| LaurentElement::single(zero_key.clone(), OSElement::constant(c));
    let as_scalar = |x: &LaurentElement| -> Option<Scalar> {
        match x.single_component() {
            None => Some(Scalar::zero()),
            Some((k, v)) if k.iter().all(|&c| c == 0) && v.degree() == Some(0) => {
                Some(v.coefficient(&[]))
            }
            _ => None,
        }
    };
    Ok(match e {
        Expr::Int(n) => constant(Scalar::Rational(num_rational::BigRational::from_integer(n.clone()))),
        Expr::Ident('r', None) => constant(Scalar::r()),
        Expr::Ident('w', Some(j)) if (1..=alg.n()).contains(j) => {
            LaurentElement::single(zero_key, OSElement::generator(*j))
        }
        Expr::Ident('q', Some(i)) if (1..=rank).contains(i) => {
            let mut k = zero_key;
            k[i - 1] = 1;
            LaurentElement::single(k, OSElement::one())
        }
        Expr::Ident(c, i) => {
            return Err(ParseError::UnknownSymbol(format!(
                "{c}{}",
                i.map(|i| i.to_string()).unwrap_or_default()
            )))
        }
        Expr::Neg(a) => eval(alg, rank, a)?.scale(&Scalar::int(-1)),
        Expr::Add(a, b) => eval(alg, rank, a)?.add(&eval(alg, rank, b)?),
        Expr::Sub(a, b) => eval(alg, rank, a)?.sub(&eval(alg, rank, b)?),
        Expr::Mul(a, b) | Expr::Wedge(a, b) => {
            multiply_unbounded(alg, &eval(alg, rank, a)?, &eval(alg, rank, b)?)
        }
        Expr::Div(a, b) => {
            let d = as_scalar(&eval(alg, rank, b)?)
                .ok_or_else(|| ParseError::Unsupported("division by a non-scalar".into()))?;
            let inv = d.inv().ok_or(ParseError::ZeroDenominator)?;
            eval(alg, rank, a)?.scale(&inv)
        }
        Expr::Pow(a, n) => {
            let base = eval(alg, rank, a)?;
            if let Some(s) = as_scalar(&base) {
                constant(s.pow(*n).ok_or(ParseError::ZeroDenominator)?)
            } else if let Some((k, v)) = base.single_component().filter(|(_, v)| v.is_one_like()) {
                let coeff = v.coefficient(&[]);
                let c = coeff.pow(*n).ok_or(ParseError::ZeroDenominator)?;
                LaurentElement::single(k.iter().map(|x| x * n).collect(), OSElement::constant(c))
            } else if *n >= 0 {
                let mut acc = constant(Scalar::one());
                for _ in 0..*n {
                    acc = multiply_unbounded(alg, &acc, &base);
                }
                acc
            } else {
                return Err(ParseError::Unsupported("negative power of a form".into()));
            }
        }
    })
}

impl OSElement {
    fn is_one_like(&self) -> bool {
        self.degree() == Some(0)
    }
}

/// Parses the Laurent text form, e.g. `(w2 - w3) * q1^1 q2^0`, over `rank` characters.
pub fn parse_laurent(alg: &OSAlgebra, rank: usize, text: &str) -> Result<LaurentElement> {
    Ok(eval(alg, rank, &expr::parse(text)?)?)
}
