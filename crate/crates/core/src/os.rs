//! The affine Orlik–Solomon algebra with its no-broken-circuit basis.
//!
//! Relations are generated by `e_S` for subsets with empty affine intersection
//! and by `∂e_S` for dependent subsets that do meet. Normal forms are read off
//! an echelon basis of the relation space in each degree, with columns ordered
//! so that NBC monomials are never pivots.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::arrangement::{intersection_lattice, Arrangement, FlatLattice};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Scalar;

/// Strictly increasing tuple of 1-based hyperplane indices.
pub type Monomial = Vec<usize>;

/// Sparse linear combination of NBC monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct OSElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl OSElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(Vec::new(), c)
    }

    /// The generator `ω_j`.
    pub fn generator(j: usize) -> Self {
        Self::monomial(vec![j], Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[usize]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Form degree when every term has the same degree; `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &OSElement) -> OSElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &OSElement) -> OSElement {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> OSElement {
        if c.is_zero() {
            return OSElement::zero();
        }
        OSElement {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Homogeneous part of the given degree.
    pub fn part(&self, degree: usize) -> OSElement {
        OSElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

fn fmt_monomial(m: &[usize]) -> String {
    m.iter().map(|j| format!("w{j}")).collect::<Vec<_>>().join("^")
}

/// Writes `c * body` as one summand (`first` controls the leading sign style).
pub(crate) fn fmt_summand(out: &mut String, c: &Scalar, body: &str, first: bool) {
    let neg = c.is_negative_leading();
    let a = if neg { -c } else { c.clone() };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(body);
    } else if a.needs_parens() {
        out.push_str(&format!("({a})*{body}"));
    } else {
        out.push_str(&format!("{a}*{body}"));
    }
}

impl fmt::Display for OSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            fmt_summand(&mut out, c, &fmt_monomial(m), i == 0);
        }
        f.write_str(&out)
    }
}

/// Sorts `word` into increasing order; returns the permutation sign, or `None`
/// when an index repeats.
pub fn sort_with_sign(word: &[usize]) -> Option<(Monomial, i64)> {
    let mut v = word.to_vec();
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn subsets(n: usize, k: usize, lo: usize) -> Vec<Vec<usize>> {
    // k-subsets of {lo, …, n}
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in lo..=n {
        if n + 1 - first < k {
            break;
        }
        for mut rest in subsets(n, k - 1, first + 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct OSAlgebra {
    arr: Arrangement,
    lattice: FlatLattice,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    /// Degree → monomial (all strictly increasing tuples) → NBC coordinates.
    normal_forms: Vec<HashMap<Monomial, Vec<(usize, Scalar)>>>,
}

/// Circuits of the coned matroid on `{0, …, n}` (0 = hyperplane at infinity).
pub fn circuits(arr: &Arrangement) -> Vec<Vec<usize>> {
    let n = arr.len();
    let mut out = Vec::new();
    for size in 2..=(arr.ambient_dim() + 2).min(n + 1) {
        for c in subsets(n, size, 0) {
            if arr.rank(&c) != size - 1 {
                continue;
            }
            let minimal = (0..size).all(|i| {
                let mut d = c.clone();
                d.remove(i);
                arr.rank(&d) == size - 1
            });
            if minimal {
                out.push(c);
            }
        }
    }
    out
}

/// NBC monomials by degree, using the order 0 < 1 < … < n with the hyperplane
/// at infinity smallest.
pub fn nbc_sets(arr: &Arrangement) -> Vec<Vec<Monomial>> {
    let n = arr.len();
    let broken: Vec<Vec<usize>> = circuits(arr).into_iter().map(|c| c[1..].to_vec()).collect();
    let mut out = vec![vec![Vec::new()]];
    for p in 1..=arr.ambient_dim().min(n) {
        let level: Vec<Monomial> = subsets(n, p, 1)
            .into_iter()
            .filter(|s| arr.rank(s) == p)
            .filter(|s| !broken.iter().any(|b| b.iter().all(|x| s.binary_search(x).is_ok())))
            .collect();
        if level.is_empty() {
            break;
        }
        out.push(level);
    }
    out
}

impl OSAlgebra {
    pub fn new(arr: &Arrangement) -> Self {
        let n = arr.len();
        let lattice = intersection_lattice(arr, false);
        let basis = nbc_sets(arr);
        let top = basis.len() - 1;
        let index: Vec<HashMap<Monomial, usize>> = basis
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();

        let dependent_meeting: Vec<Vec<usize>> = (2..=(top + 1).min(n))
            .flat_map(|k| subsets(n, k, 1))
            .filter(|s| arr.meets(s) && arr.rank(s) < s.len())
            .collect();

        let mut normal_forms = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let all = subsets(n, p, 1);
            let (mut cols, nbc): (Vec<Monomial>, Vec<Monomial>) =
                all.into_iter().partition(|m| !index[p].contains_key(m));
            let non_nbc = cols.len();
            cols.extend(nbc);
            let col_of: HashMap<Monomial, usize> =
                cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

            let mut ech = Echelon::new();
            for m in &cols {
                if !m.is_empty() && !arr.meets(m) {
                    ech.insert(SparseVec::from([(col_of[m], Scalar::one())]));
                }
            }
            for s in &dependent_meeting {
                if s.len() > p + 1 {
                    continue;
                }
                for t in subsets(n, p + 1 - s.len(), 1) {
                    let mut v = SparseVec::new();
                    for i in 0..s.len() {
                        let mut face = s.clone();
                        face.remove(i);
                        let mut word = t.clone();
                        word.extend(&face);
                        if let Some((m, sign)) = sort_with_sign(&word) {
                            let c = Scalar::int(if i % 2 == 0 { sign } else { -sign });
                            crate::linalg::axpy(
                                &mut v,
                                &c,
                                &SparseVec::from([(col_of[&m], Scalar::one())]),
                            );
                        }
                    }
                    if !v.is_empty() {
                        ech.insert(v);
                    }
                }
            }
            assert_eq!(
                ech.rank(),
                non_nbc,
                "NBC monomials must complement the relation space in degree {p}"
            );
            assert!(ech.pivot_columns().all(|c| c < non_nbc));

            let mut nf: HashMap<Monomial, Vec<(usize, Scalar)>> = HashMap::new();
            for (&c, row) in ech.rows() {
                let coords = row
                    .iter()
                    .filter(|(k, _)| **k != c)
                    .map(|(k, x)| (index[p][&cols[*k]], -x))
                    .collect();
                nf.insert(cols[c].clone(), coords);
            }
            for m in &basis[p] {
                nf.insert(m.clone(), vec![(index[p][m], Scalar::one())]);
            }
            normal_forms.push(nf);
        }

        OSAlgebra {
            arr: arr.clone(),
            lattice,
            basis,
            index,
            normal_forms,
        }
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arr
    }

    pub fn lattice(&self) -> &FlatLattice {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.arr.len()
    }

    /// Highest nonzero degree.
    pub fn top_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dim(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, Vec::len)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, p: usize) -> &[Monomial] {
        self.basis.get(p).map_or(&[], Vec::as_slice)
    }

    /// Normal form of `coeff · ω_{w1} ∧ … ∧ ω_{wk}`.
    pub fn reduce(&self, coeff: &Scalar, word: &[usize]) -> OSElement {
        let mut out = OSElement::zero();
        self.reduce_into(&mut out, coeff, word);
        out
    }

    fn reduce_into(&self, out: &mut OSElement, coeff: &Scalar, word: &[usize]) {
        if coeff.is_zero() || word.len() > self.top_degree() {
            return;
        }
        let Some((m, sign)) = sort_with_sign(word) else {
            return;
        };
        let p = m.len();
        let c = if sign < 0 { -coeff } else { coeff.clone() };
        for (i, x) in &self.normal_forms[p][&m] {
            out.add_term(self.basis[p][*i].clone(), &c * x);
        }
    }

    /// Rewrites an arbitrary combination of (possibly non-NBC) monomials.
    pub fn normalize(&self, x: &OSElement) -> OSElement {
        let mut out = OSElement::zero();
        for (m, c) in &x.terms {
            self.reduce_into(&mut out, c, m);
        }
        out
    }

    pub fn multiply(&self, x: &OSElement, y: &OSElement) -> OSElement {
        let mut out = OSElement::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let mut word = a.clone();
                word.extend(b);
                self.reduce_into(&mut out, &(ca * cb), &word);
            }
        }
        out
    }

    /// `Σ_j w_j ω_j`.
    pub fn linear_form(&self, weights: &[Scalar]) -> OSElement {
        let mut out = OSElement::zero();
        for (j, w) in weights.iter().enumerate() {
            out.add_term(vec![j + 1], w.clone());
        }
        out
    }

    /// Coordinates of the degree-`p` part in the NBC basis.
    pub fn to_vector(&self, x: &OSElement, p: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim(p)];
        for (m, c) in &x.terms {
            if m.len() == p {
                let i = *self.index[p]
                    .get(m)
                    .expect("element must be in NBC normal form");
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(&self, p: usize, v: &[Scalar]) -> OSElement {
        let mut out = OSElement::zero();
        for (i, c) in v.iter().enumerate() {
            out.add_term(self.basis[p][i].clone(), c.clone());
        }
        out
    }

    /// Parses the text form, e.g. `2/r*w2^w3 - w1^w4`.
    pub fn parse_element(&self, text: &str) -> Result<OSElement> {
        let l = crate::laurent::parse_laurent(self, 0, text)?;
        match l.components().len() {
            0 => Ok(OSElement::zero()),
            _ => Ok(l.component(&[]).clone()),
        }
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n() {
            Err(Error::IndexOutOfRange(j))
        } else {
            Ok(())
        }
    }
}

/// Convenience wrapper matching the operation name.
pub fn build_os(arr: &Arrangement) -> OSAlgebra {
    OSAlgebra::new(arr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(j: usize) -> OSElement {
        OSElement::generator(j)
    }

    #[test]
    fn braid_basis() {
        let alg = build_os(&fixtures::braid());
        assert_eq!(alg.betti(), vec![1, 5, 6]);
        let expected: Vec<Monomial> = vec![
            vec![1, 3],
            vec![1, 4],
            vec![1, 5],
            vec![2, 3],
            vec![2, 4],
            vec![2, 5],
        ];
        assert_eq!(alg.basis(2), expected.as_slice());
    }

    #[test]
    fn braid_reductions() {
        let alg = build_os(&fixtures::braid());
        let one = Scalar::one();
        let r35 = alg.reduce(&one, &[3, 5]);
        assert_eq!(r35, alg.parse_element("w2^w5 - w2^w3").unwrap());
        assert!(alg.reduce(&one, &[1, 2]).is_zero());
        assert!(alg.reduce(&one, &[3, 4]).is_zero());
        assert!(alg.reduce(&one, &[4, 4]).is_zero());
        assert_eq!(alg.reduce(&one, &[3, 1]), alg.reduce(&Scalar::int(-1), &[1, 3]));
    }

    #[test]
    fn braid_product_example() {
        let alg = build_os(&fixtures::braid());
        let x = w(1).sub(&w(4));
        let y = w(2).sub(&w(3));
        let p = alg.multiply(&x, &y);
        let expected = alg.reduce(&Scalar::one(), &[2, 4]).sub(&alg.reduce(&Scalar::one(), &[1, 3]));
        assert_eq!(p, expected);
        assert_eq!(alg.multiply(&x, &OSElement::one()), x);
    }

    #[test]
    fn generic_lines_and_single_hyperplane() {
        let alg = build_os(&fixtures::generic_lines(4));
        assert_eq!(alg.betti(), vec![1, 4, 6]);
        let alg = build_os(&fixtures::single_point());
        assert_eq!(alg.betti(), vec![1, 1]);
    }

    #[test]
    fn display_format() {
        let alg = build_os(&fixtures::braid());
        let x = alg
            .reduce(&"2/r".parse().unwrap(), &[2, 3])
            .sub(&alg.reduce(&Scalar::one(), &[1, 4]));
        assert_eq!(x.to_string(), "-w1^w4 + 2/r*w2^w3");
        assert_eq!(alg.parse_element(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn nbc_agrees_with_whitney() {
        for arr in fixtures::all() {
            let alg = build_os(&arr);
            for p in 0..=alg.top_degree() {
                assert_eq!(alg.dim(p) as u64, alg.lattice().whitney_number(p));
            }
        }
    }
}
