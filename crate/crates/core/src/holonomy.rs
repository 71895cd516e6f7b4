//! Holonomy Lie algebra `𝔥 = 𝕃(H₁)/⟨im ∂⟩`, with `∂` dual to the cup product
//! `Λ²A¹ → A²`, and its graded dimensions through degree three.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::os::{OSAlgebra, OSElement};
use crate::scalar::Scalar;

pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Debug)]
pub struct HolonomyPresentation {
    pub n: usize,
    /// Pairs `(i, j)`, `i < j`, 1-based, indexing coordinates of `Λ²`.
    pub pairs: Vec<(usize, usize)>,
    /// Reduced basis of the relation space, in `pairs` coordinates.
    pub relations: Vec<Vec<Scalar>>,
    /// Cup product `Λ²A¹ → A²` in NBC coordinates.
    pub cup: Matrix,
}

impl HolonomyPresentation {
    /// Basis of `ker(cup)`.
    pub fn cup_kernel(&self) -> Vec<Vec<Scalar>> {
        self.cup.kernel()
    }

    pub fn relation_dim(&self) -> usize {
        self.relations.len()
    }

    /// `Σ c_ij [x_i, x_j]` text for a relation.
    pub fn format_relation(&self, r: &[Scalar]) -> String {
        let mut out = String::new();
        for (c, (i, j)) in r.iter().zip(&self.pairs) {
            if !c.is_zero() {
                let first = out.is_empty();
                crate::os::fmt_summand(&mut out, c, &format!("[x{i},x{j}]"), first);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for HolonomyPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        writeln!(f, "generators: {}", gens.join(" "))?;
        writeln!(f, "relations: {}", self.relations.len())?;
        for r in &self.relations {
            writeln!(f, "  {}", self.format_relation(r))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct PresentationJson {
    n: usize,
    relations: Vec<String>,
}

impl Serialize for HolonomyPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PresentationJson {
            n: self.n,
            relations: self.relations.iter().map(|r| self.format_relation(r)).collect(),
        }
        .serialize(s)
    }
}

/// The relation space is the image of `∂ = cup^*`, i.e. the row space of the
/// cup matrix, equivalently the annihilator of `ker(cup)`.
pub fn holonomy_presentation(alg: &OSAlgebra) -> HolonomyPresentation {
    let n = alg.n();
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let cols: Vec<Vec<Scalar>> = pairs
        .iter()
        .map(|&(i, j)| {
            let p = alg.multiply(&OSElement::generator(i), &OSElement::generator(j));
            alg.to_vector(&p, 2)
        })
        .collect();
    let cup = Matrix::from_columns(alg.dim(2), &cols);
    let mut rows = cup.clone();
    let pivots = rows.rref();
    let relations = (0..pivots.len()).map(|i| rows.row(i).to_vec()).collect();
    HolonomyPresentation {
        n,
        pairs,
        relations,
        cup,
    }
}

type Tensor = BTreeMap<Vec<usize>, Scalar>;

fn add_to(t: &mut Tensor, w: Vec<usize>, c: &Scalar) {
    let v = t.get(&w).map_or_else(|| c.clone(), |x| x + c);
    if v.is_zero() {
        t.remove(&w);
    } else {
        t.insert(w, v);
    }
}

/// `[a, b] = ab − ba` in the tensor algebra.
pub fn bracket(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (u, c) in a {
        for (v, e) in b {
            let ce = c * e;
            add_to(&mut out, [u.as_slice(), v].concat(), &ce);
            add_to(&mut out, [v.as_slice(), u].concat(), &(-&ce));
        }
    }
    out
}

/// Lyndon words of length `d` over `0..n`.
pub fn lyndon_words(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 || d == 0 {
        return out;
    }
    // Duval's generation in lexicographic order
    let mut w = vec![0usize];
    loop {
        if w.len() == d {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < d {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last + 1 == n {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

/// Bracketing of a Lyndon word by its standard factorization.
pub fn lyndon_bracket(w: &[usize]) -> Tensor {
    if w.len() == 1 {
        return Tensor::from([(w.to_vec(), Scalar::one())]);
    }
    // longest proper Lyndon suffix
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a Lyndon word has a Lyndon suffix");
    bracket(&lyndon_bracket(&w[..split]), &lyndon_bracket(&w[split..]))
}

fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|i| w[i..] > *w)
}

fn to_sparse(t: &Tensor, n: usize) -> SparseVec {
    t.iter()
        .map(|(w, c)| (w.iter().fold(0, |acc, &x| acc * n + x), c.clone()))
        .collect()
}

fn relation_tensors(p: &HolonomyPresentation) -> Vec<Tensor> {
    p.relations
        .iter()
        .map(|r| {
            let mut t = Tensor::new();
            for (c, &(i, j)) in r.iter().zip(&p.pairs) {
                if !c.is_zero() {
                    add_to(&mut t, vec![i - 1, j - 1], c);
                    add_to(&mut t, vec![j - 1, i - 1], &(-c));
                }
            }
            t
        })
        .collect()
}

/// Graded dimensions of `𝔥` in degrees `1..=max_degree` (at most 3).
pub fn lcs_dims(p: &HolonomyPresentation, max_degree: usize) -> Result<Vec<usize>> {
    if max_degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree(max_degree, MAX_DEGREE));
    }
    let n = p.n;
    let rels = relation_tensors(p);
    let mut ideal: Vec<Tensor> = Vec::new();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        ideal = match d {
            1 => Vec::new(),
            2 => rels.clone(),
            _ => ideal
                .iter()
                .flat_map(|r| {
                    (0..n).map(move |i| bracket(&Tensor::from([(vec![i], Scalar::one())]), r))
                })
                .collect(),
        };
        let mut ech = Echelon::new();
        for t in &ideal {
            ech.insert(to_sparse(t, n));
        }
        let ideal_rank = ech.rank();
        // the ideal lies in the Lie span, so this rank is dim 𝕃_d
        for w in lyndon_words(n, d) {
            ech.insert(to_sparse(&lyndon_bracket(&w), n));
        }
        out.push(ech.rank() - ideal_rank);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lyndon_counts_match_witt() {
        assert_eq!(lyndon_words(2, 1).len(), 2);
        assert_eq!(lyndon_words(2, 2).len(), 1);
        assert_eq!(lyndon_words(2, 3).len(), 2);
        assert_eq!(lyndon_words(5, 3).len(), 40);
        assert_eq!(lyndon_words(3, 4).len(), 18);
        let b = lyndon_bracket(&[0, 0, 1]);
        // [x0,[x0,x1]] = x0x0x1 − 2 x0x1x0 + x1x0x0
        assert_eq!(b[&vec![0, 1, 0]], Scalar::int(-2));
    }

    #[test]
    fn braid_presentation() {
        let p = holonomy_presentation(&OSAlgebra::new(&fixtures::braid()));
        assert_eq!(p.n, 5);
        assert_eq!(p.relation_dim(), 6);
        // relations annihilate ker(cup)
        let ker = p.cup_kernel();
        assert_eq!(ker.len() + p.relation_dim(), 10);
        for r in &p.relations {
            for k in &ker {
                let dot = r.iter().zip(k).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
                assert!(dot.is_zero());
            }
        }
        assert_eq!(lcs_dims(&p, 3).unwrap(), vec![5, 4, 10]);
        assert!(matches!(lcs_dims(&p, 4), Err(Error::UnsupportedDegree(4, 3))));
    }

    #[test]
    fn small_cases() {
        let p = holonomy_presentation(&OSAlgebra::new(&fixtures::generic_lines(3)));
        assert_eq!(p.relation_dim(), 3);
        assert_eq!(lcs_dims(&p, 3).unwrap(), vec![3, 0, 0]);
        let p = holonomy_presentation(&OSAlgebra::new(&fixtures::single_point()));
        assert_eq!(p.relation_dim(), 0);
        assert_eq!(lcs_dims(&p, 3).unwrap(), vec![1, 0, 0]);
        let p = holonomy_presentation(&OSAlgebra::new(&fixtures::two_points()));
        assert_eq!(lcs_dims(&p, 3).unwrap(), vec![2, 1, 2]);
    }
}
