//! Twisted complexes `(A•, −w·ω^T ∧ ·)` on the Orlik–Solomon algebra.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::esv_check;
use crate::error::{Error, Result};
use crate::laurent::WindowBox;
use crate::linalg::{sparse, Echelon, Matrix};
use crate::os::{OSAlgebra, OSElement};
use crate::scalar::Scalar;

/// An `N × n` matrix of exponents; row `i` gives the weights of the `i`-th character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<Scalar>>,
    n: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightFile {
    Rows(Vec<Vec<String>>),
    Object {
        rows: Vec<Vec<String>>,
        #[serde(default)]
        classes: Vec<String>,
    },
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<Scalar>>, n: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != n {
                return Err(Error::WrongLength {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Ok(WeightMatrix { rows, n })
    }

    pub fn zero(nrows: usize, n: usize) -> Self {
        WeightMatrix {
            rows: vec![vec![Scalar::zero(); n]; nrows],
            n,
        }
    }

    /// Accepts either a bare list of rows of scalar strings or an object with a
    /// `rows` key.
    pub fn from_json(text: &str, n: usize) -> Result<Self> {
        let rows = match serde_json::from_str::<WeightFile>(text)? {
            WeightFile::Rows(r) => r,
            WeightFile::Object { rows, .. } => rows,
        };
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<Scalar>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        WeightMatrix::new(rows, n)
    }

    /// The optional `classes` list stored next to the rows.
    pub fn classes_from_json(text: &str) -> Result<Vec<String>> {
        Ok(match serde_json::from_str::<WeightFile>(text)? {
            WeightFile::Rows(_) => Vec::new(),
            WeightFile::Object { classes, .. } => classes,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn scaled(&self, c: &Scalar) -> WeightMatrix {
        WeightMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
            n: self.n,
        }
    }

    /// The weight row `k·a`.
    pub fn combination(&self, k: &[i64]) -> Vec<Scalar> {
        assert_eq!(k.len(), self.rows.len(), "character has wrong length");
        let mut out = vec![Scalar::zero(); self.n];
        for (ki, row) in k.iter().zip(&self.rows) {
            if *ki == 0 {
                continue;
            }
            let c = Scalar::int(*ki);
            for (o, x) in out.iter_mut().zip(row) {
                *o = &*o + &(&c * x);
            }
        }
        out
    }
}

/// The twisted complex for a fixed weight row, with its differential matrices.
#[derive(Clone, Debug)]
pub struct TwistedComplex<'a> {
    alg: &'a OSAlgebra,
    weights: Vec<Scalar>,
    /// `d[p]`: `A^p → A^{p+1}` with columns indexed by the degree-`p` NBC basis.
    d: Vec<Matrix>,
}

impl<'a> TwistedComplex<'a> {
    pub fn new(alg: &'a OSAlgebra, weights: &[Scalar]) -> Result<Self> {
        if weights.len() != alg.n() {
            return Err(Error::WrongLength {
                expected: alg.n(),
                got: weights.len(),
            });
        }
        let form = alg.linear_form(weights).scale(&Scalar::int(-1));
        let d = (0..=alg.top_degree())
            .map(|p| {
                let cols: Vec<Vec<Scalar>> = alg
                    .basis(p)
                    .iter()
                    .map(|m| {
                        let e = OSElement::monomial(m.clone(), Scalar::one());
                        alg.to_vector(&alg.multiply(&form, &e), p + 1)
                    })
                    .collect();
                Matrix::from_columns(alg.dim(p + 1), &cols)
            })
            .collect();
        Ok(TwistedComplex {
            alg,
            weights: weights.to_vec(),
            d,
        })
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn differential(&self, p: usize) -> &Matrix {
        &self.d[p]
    }

    /// Applies the differential to an element of degree `p`.
    pub fn apply(&self, p: usize, x: &OSElement) -> OSElement {
        if p > self.alg.top_degree() {
            return OSElement::zero();
        }
        let v = self.d[p].mul_vec(&self.alg.to_vector(x, p));
        self.alg.from_vector(p + 1, &v)
    }

    fn rank(&self, p: usize) -> usize {
        self.d.get(p).map_or(0, Matrix::rank)
    }

    /// Dimension of the coboundaries in degree `p`.
    pub fn coboundary_dim(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.rank(p - 1)
        }
    }

    pub fn cohomology_dim(&self, p: usize) -> usize {
        if p > self.alg.top_degree() {
            return 0;
        }
        self.alg.dim(p) - self.rank(p) - self.coboundary_dim(p)
    }

    /// Echelon basis of the coboundaries in degree `p`, in NBC coordinates.
    pub fn coboundaries(&self, p: usize) -> Echelon {
        let mut e = Echelon::new();
        if p == 0 || p > self.alg.top_degree() {
            return e;
        }
        let m = &self.d[p - 1];
        for j in 0..m.cols() {
            let col: Vec<Scalar> = (0..m.rows()).map(|i| m.get(i, j).clone()).collect();
            e.insert(sparse(&col));
        }
        e
    }

    /// Cocycles whose classes form a basis of `H^p`: kernel basis vectors taken
    /// in order, skipping those dependent on coboundaries and earlier picks.
    pub fn representatives(&self, p: usize) -> Vec<OSElement> {
        if p > self.alg.top_degree() {
            return Vec::new();
        }
        let mut span = self.coboundaries(p);
        self.d[p]
            .kernel()
            .into_iter()
            .filter(|v| span.insert(sparse(v)))
            .map(|v| self.alg.from_vector(p, &v))
            .collect()
    }

    /// A primitive `x` of degree `p` with `d x = target`, or `None` if `target`
    /// is not a coboundary. Free variables are set to zero.
    pub fn primitive(&self, p: usize, target: &OSElement) -> Option<OSElement> {
        let b = self.alg.to_vector(target, p + 1);
        if p > self.alg.top_degree() {
            return b.iter().all(Scalar::is_zero).then(OSElement::zero);
        }
        self.d[p].solve(&b).map(|x| self.alg.from_vector(p, &x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub dims: Vec<usize>,
    pub coboundary_dims: Vec<usize>,
    #[serde(serialize_with = "ser_reps")]
    pub representatives: Vec<Vec<OSElement>>,
    pub esv_valid: bool,
}

fn ser_reps<S: serde::Serializer>(reps: &[Vec<OSElement>], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    reps.iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Cohomology of `(A•, −w·ω^T)`; the ESV flag states whether the dimensions are
/// guaranteed to equal local-system cohomology.
pub fn aomoto_cohomology(alg: &OSAlgebra, weights: &[Scalar]) -> Result<CohomologyReport> {
    let c = TwistedComplex::new(alg, weights)?;
    let top = alg.top_degree();
    Ok(CohomologyReport {
        dims: (0..=top).map(|p| c.cohomology_dim(p)).collect(),
        coboundary_dims: (0..=top).map(|p| c.coboundary_dim(p)).collect(),
        representatives: (0..=top).map(|p| c.representatives(p)).collect(),
        esv_valid: esv_check(alg.arrangement(), weights)?.valid,
    })
}

/// `dim H^p(A•, −w·ω^T)`.
pub fn resonance_dim(alg: &OSAlgebra, weights: &[Scalar], p: usize) -> Result<usize> {
    if p > alg.top_degree() {
        return Err(Error::UnsupportedDegree(p, alg.top_degree()));
    }
    Ok(TwistedComplex::new(alg, weights)?.cohomology_dim(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub h1: usize,
    pub h2: usize,
    pub esv_valid: bool,
}

/// For every character `k` in the window: `dim H¹`, `dim H²` of the complex with
/// weights `k·a`, and the ESV validity of those weights.
pub fn h1_completion_profile(
    alg: &OSAlgebra,
    a: &WeightMatrix,
    window: &WindowBox,
) -> Result<BTreeMap<Vec<i64>, ProfileEntry>> {
    if a.ncols() != alg.n() || a.nrows() != window.rank() {
        return Err(Error::WrongLength {
            expected: alg.n(),
            got: a.ncols(),
        });
    }
    window
        .points()
        .into_par_iter()
        .map(|k| {
            let w = a.combination(&k);
            let c = TwistedComplex::new(alg, &w)?;
            let entry = ProfileEntry {
                h1: c.cohomology_dim(1),
                h2: c.cohomology_dim(2),
                esv_valid: esv_check(alg.arrangement(), &w)?.valid,
            };
            Ok((k, entry))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::int(c)).collect()
    }

    #[test]
    fn braid_untwisted() {
        let alg = OSAlgebra::new(&fixtures::braid());
        let rep = aomoto_cohomology(&alg, &row(&[0; 5])).unwrap();
        assert_eq!(rep.dims, vec![1, 5, 6]);
        assert!(rep.esv_valid);
    }

    #[test]
    fn braid_lambda1_resonant() {
        let alg = OSAlgebra::new(&fixtures::braid());
        let w = row(&[0, 1, 1, 0, -2]);
        let rep = aomoto_cohomology(&alg, &w).unwrap();
        assert_eq!(rep.dims[1], 1);
        let x = &rep.representatives[1][0];
        let target = OSElement::generator(2).sub(&OSElement::generator(3));
        // proportional to w2 - w3
        let c = x.coefficient(&[2]);
        assert_eq!(*x, target.scale(&c));
        assert_eq!(resonance_dim(&alg, &row(&[-1, 0, 0, -1, 2]), 1).unwrap(), 1);
    }

    #[test]
    fn braid_generic_weights() {
        let alg = OSAlgebra::new(&fixtures::braid());
        let rep = aomoto_cohomology(&alg, &row(&[7, 3, -2, 5, 1])).unwrap();
        assert_eq!(rep.dims, vec![0, 0, 2]);
        assert_eq!(rep.representatives[2].len(), 2);
        assert!(matches!(aomoto_cohomology(&alg, &row(&[1, 2])), Err(Error::WrongLength { .. })));
    }

    #[test]
    fn primitive_solves() {
        let alg = OSAlgebra::new(&fixtures::braid());
        let w = row(&[7, 3, -2, 5, 1]);
        let c = TwistedComplex::new(&alg, &w).unwrap();
        let x = OSElement::generator(1).add(&OSElement::generator(4));
        let dx = c.apply(1, &x);
        let y = c.primitive(1, &dx).unwrap();
        assert_eq!(c.apply(1, &y), dx);
    }
}
