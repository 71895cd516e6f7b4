//! Reduced bar construction over a connected dga: differential, shuffle
//! product, Hopf structure for diagonal coactions and the first two pages of the
//! Eilenberg–Moore spectral sequence.
//!
//! A letter is a basis element of `R⁺` carrying a character label `k`; a bar
//! term is `[r₁|…|r_s]·q^m`. Shifted degree of a letter is `deg − 1`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::aomoto::{TwistedComplex, WeightMatrix};
use crate::error::{Error, Result};
use crate::laurent::{add_keys, WindowBox};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::os::{OSAlgebra, OSElement};
use crate::scalar::Scalar;

pub type Word = Vec<usize>;
pub type Comb = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Letter {
    pub name: String,
    pub degree: usize,
    pub label: Vec<i64>,
}

/// A connected dga `R = F·1 ⊕ R⁺` given on a basis of `R⁺`.
#[derive(Clone, Debug)]
pub struct ConnectedDGA {
    letters: Vec<Letter>,
    d: Vec<Comb>,
    mul: BTreeMap<(usize, usize), Comb>,
    rank: usize,
}

fn add_into(dst: &mut Comb, i: usize, c: &Scalar) {
    let v = dst.get(&i).map_or_else(|| c.clone(), |x| x + c);
    if v.is_zero() {
        dst.remove(&i);
    } else {
        dst.insert(i, v);
    }
}

fn sign(odd: bool) -> Scalar {
    Scalar::int(if odd { -1 } else { 1 })
}

/// Per component: key, cohomology representatives by degree, and the
/// matrices used to read off coordinates.
type ComponentData = (Vec<i64>, Vec<Vec<OSElement>>, Vec<Matrix>);

impl ConnectedDGA {
    /// Validates degrees, labels, `d² = 0`, the Leibniz rule and associativity
    /// on basis elements.
    pub fn new(letters: Vec<Letter>, d: Vec<Comb>, mul: BTreeMap<(usize, usize), Comb>) -> Result<Self> {
        let rank = letters.first().map_or(0, |l| l.label.len());
        if d.len() != letters.len() {
            return Err(Error::InvalidDga("differential has wrong length".into()));
        }
        for l in &letters {
            if l.degree == 0 {
                return Err(Error::InvalidDga(format!("{} has degree 0", l.name)));
            }
            if l.label.len() != rank {
                return Err(Error::InvalidDga(format!("{} has a label of wrong length", l.name)));
            }
        }
        let dga = ConnectedDGA { letters, d, mul, rank };
        dga.validate()?;
        Ok(dga)
    }

    fn validate(&self) -> Result<()> {
        let n = self.letters.len();
        let bad = |what: &str| Err(Error::InvalidDga(what.into()));
        for (i, di) in self.d.iter().enumerate() {
            for j in di.keys() {
                if *j >= n || self.letters[*j].degree != self.letters[i].degree + 1 {
                    return bad("differential does not raise degree by one");
                }
                if self.letters[*j].label != self.letters[i].label {
                    return bad("differential does not preserve labels");
                }
            }
            if !self.d_comb(di).is_empty() {
                return bad("d² ≠ 0");
            }
        }
        for ((i, j), c) in &self.mul {
            for l in c.keys() {
                if *i >= n || *j >= n || *l >= n {
                    return bad("product index out of range");
                }
                if self.letters[*l].degree != self.letters[*i].degree + self.letters[*j].degree {
                    return bad("product is not graded");
                }
                if self.letters[*l].label != add_keys(&self.letters[*i].label, &self.letters[*j].label) {
                    return bad("product does not add labels");
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                // d(ab) = da·b + (−1)^|a| a·db
                let lhs = self.d_comb(self.product(i, j));
                let mut rhs = Comb::new();
                for (l, c) in &self.d[i] {
                    for (t, e) in self.product(*l, j) {
                        add_into(&mut rhs, *t, &(c * e));
                    }
                }
                let s = sign(self.letters[i].degree % 2 == 1);
                for (l, c) in &self.d[j] {
                    for (t, e) in self.product(i, *l) {
                        add_into(&mut rhs, *t, &(&s * &(c * e)));
                    }
                }
                if lhs != rhs {
                    return bad("Leibniz rule fails");
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut left = Comb::new();
                    for (l, c) in self.product(i, j) {
                        for (t, e) in self.product(*l, k) {
                            add_into(&mut left, *t, &(c * e));
                        }
                    }
                    let mut right = Comb::new();
                    for (l, c) in self.product(j, k) {
                        for (t, e) in self.product(i, *l) {
                            add_into(&mut right, *t, &(c * e));
                        }
                    }
                    if left != right {
                        return bad("product is not associative");
                    }
                }
            }
        }
        Ok(())
    }

    fn d_comb(&self, x: &Comb) -> Comb {
        let mut out = Comb::new();
        for (i, c) in x {
            for (j, e) in &self.d[*i] {
                add_into(&mut out, *j, &(c * e));
            }
        }
        out
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.letters[i]
    }

    pub fn differential(&self, i: usize) -> &Comb {
        &self.d[i]
    }

    pub fn product(&self, i: usize, j: usize) -> &Comb {
        static EMPTY: Comb = Comb::new();
        self.mul.get(&(i, j)).unwrap_or(&EMPTY)
    }

    /// Length of character labels.
    pub fn label_rank(&self) -> usize {
        self.rank
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.iter().all(BTreeMap::is_empty)
    }

    /// The untwisted Orlik–Solomon algebra with zero differential; labels are empty.
    pub fn from_os(alg: &OSAlgebra) -> Result<Self> {
        let mut letters = Vec::new();
        let mut index = BTreeMap::new();
        for p in 1..=alg.top_degree() {
            for m in alg.basis(p) {
                index.insert(m.clone(), letters.len());
                let name = m.iter().map(|j| format!("w{j}")).collect::<Vec<_>>().join("^");
                letters.push(Letter { name, degree: p, label: Vec::new() });
            }
        }
        let mut mul = BTreeMap::new();
        for (mi, &i) in &index {
            for (mj, &j) in &index {
                if mi.len() + mj.len() > alg.top_degree() {
                    continue;
                }
                let e = OSElement::monomial(mi.clone(), Scalar::one());
                let f = OSElement::monomial(mj.clone(), Scalar::one());
                let prod: Comb = alg
                    .multiply(&e, &f)
                    .terms()
                    .iter()
                    .map(|(m, c)| (index[m], c.clone()))
                    .collect();
                if !prod.is_empty() {
                    mul.insert((i, j), prod);
                }
            }
        }
        let d = vec![Comb::new(); letters.len()];
        ConnectedDGA::new(letters, d, mul)
    }

    /// Exterior algebra on `n` degree-one generators `x1..xn` whose differential is
    /// given on generators as combinations of `x_i x_j` (`i < j`), extended by Leibniz.
    pub fn exterior(n: usize, dgen: &[BTreeMap<(usize, usize), Scalar>]) -> Result<Self> {
        if dgen.len() != n {
            return Err(Error::WrongLength { expected: n, got: dgen.len() });
        }
        let mut monos: Vec<Vec<usize>> = Vec::new();
        for mask in 1u32..(1 << n) {
            monos.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
        monos.sort_by_key(|m| (m.len(), m.clone()));
        let index: BTreeMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let letters = monos
            .iter()
            .map(|m| Letter {
                name: m.iter().map(|j| format!("x{}", j + 1)).collect::<Vec<_>>().join("^"),
                degree: m.len(),
                label: Vec::new(),
            })
            .collect();
        let wedge = |a: &[usize], b: &[usize]| -> Option<(Vec<usize>, bool)> {
            let mut w: Vec<usize> = a.iter().chain(b).copied().collect();
            let mut odd = false;
            for i in 0..w.len() {
                for j in 0..w.len() - 1 - i {
                    if w[j] == w[j + 1] {
                        return None;
                    }
                    if w[j] > w[j + 1] {
                        w.swap(j, j + 1);
                        odd = !odd;
                    }
                }
            }
            if w.windows(2).any(|p| p[0] == p[1]) {
                return None;
            }
            Some((w, odd))
        };
        let mut mul = BTreeMap::new();
        for a in &monos {
            for b in &monos {
                if let Some((w, odd)) = wedge(a, b) {
                    mul.insert((index[a], index[b]), Comb::from([(index[&w], sign(odd))]));
                }
            }
        }
        // d(x_{i1}⋯x_{ip}) = Σ_t (−1)^t x_{i1}⋯d(x_{it})⋯x_{ip}
        let mut d = Vec::new();
        for m in &monos {
            let mut out = Comb::new();
            for (t, &g) in m.iter().enumerate() {
                for ((i, j), c) in &dgen[g] {
                    let mut w = m[..t].to_vec();
                    w.extend([*i, *j]);
                    w.extend(&m[t + 1..]);
                    let mut acc: Option<(Vec<usize>, bool)> = Some((vec![], false));
                    for x in &w {
                        acc = acc.and_then(|(v, o)| wedge(&v, &[*x]).map(|(v2, o2)| (v2, o ^ o2)));
                    }
                    if let Some((v, odd)) = acc {
                        let s = sign(odd ^ (t % 2 == 1));
                        add_into(&mut out, index[&v], &(&s * c));
                    }
                }
            }
            d.push(out);
        }
        ConnectedDGA::new(letters, d, mul)
    }

    /// The cohomology ring `⊕_k H^{≥1}` of the Laurent-graded algebra inside
    /// `window`, with zero differential and letters labelled by their component.
    /// Products landing outside the window are dropped.
    pub fn from_laurent_cohomology(alg: &OSAlgebra, a: &WeightMatrix, window: &WindowBox) -> Result<Self> {
        if a.nrows() != window.rank() {
            return Err(Error::WrongLength { expected: a.nrows(), got: window.rank() });
        }
        let top = alg.top_degree();
        let comps: Vec<ComponentData> = window
            .points()
            .into_par_iter()
            .map(|k| {
                let c = TwistedComplex::new(alg, &a.combination(&k))?;
                if c.cohomology_dim(0) > 0 && k.iter().any(|&x| x != 0) {
                    return Err(Error::InvalidDga(format!("H⁰ is nonzero at {k:?}; not connected")));
                }
                let reps: Vec<Vec<OSElement>> = (0..=top).map(|p| c.representatives(p)).collect();
                // columns: representatives then coboundary spanning vectors
                let proj = (0..=top)
                    .map(|p| {
                        let mut cols: Vec<Vec<Scalar>> = reps[p].iter().map(|x| alg.to_vector(x, p)).collect();
                        for (_, row) in c.coboundaries(p).rows() {
                            let mut v = vec![Scalar::zero(); alg.dim(p)];
                            for (i, x) in row {
                                v[*i] = x.clone();
                            }
                            cols.push(v);
                        }
                        Matrix::from_columns(alg.dim(p), &cols)
                    })
                    .collect();
                Ok((k, reps, proj))
            })
            .collect::<Result<_>>()?;
        let mut letters = Vec::new();
        let mut index: BTreeMap<(Vec<i64>, usize), usize> = BTreeMap::new();
        let mut forms = Vec::new();
        for (k, reps, _) in &comps {
            for (p, r) in reps.iter().enumerate().skip(1) {
                if r.is_empty() {
                    continue;
                }
                index.insert((k.clone(), p), letters.len());
                for (i, x) in r.iter().enumerate() {
                    let q: Vec<String> = k.iter().enumerate().map(|(t, e)| format!("q{}^{}", t + 1, e)).collect();
                    letters.push(Letter {
                        name: format!("h{p}.{i}[{x}]{}", if q.is_empty() { String::new() } else { format!(" * {}", q.join(" ")) }),
                        degree: p,
                        label: k.clone(),
                    });
                    forms.push(x.clone());
                }
            }
        }
        let proj: BTreeMap<&Vec<i64>, &Vec<Matrix>> = comps.iter().map(|(k, _, m)| (k, m)).collect();
        let mut mul = BTreeMap::new();
        for i in 0..letters.len() {
            for j in 0..letters.len() {
                let (li, lj) = (&letters[i], &letters[j]);
                let p = li.degree + lj.degree;
                let k = add_keys(&li.label, &lj.label);
                if p > top || !window.contains(&k) {
                    continue;
                }
                let prod = alg.multiply(&forms[i], &forms[j]);
                if prod.is_zero() {
                    continue;
                }
                let Some(&first) = index.get(&(k.clone(), p)) else {
                    continue;
                };
                let coords = proj[&k][p]
                    .solve(&alg.to_vector(&prod, p))
                    .ok_or_else(|| Error::InvalidDga("product of cocycles is not a cocycle".into()))?;
                let nreps = comps.iter().find(|c| c.0 == k).map_or(0, |c| c.1[p].len());
                let comb: Comb = coords
                    .into_iter()
                    .take(nreps)
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(t, c)| (first + t, c))
                    .collect();
                if !comb.is_empty() {
                    mul.insert((i, j), comb);
                }
            }
        }
        let d = vec![Comb::new(); letters.len()];
        ConnectedDGA::new(letters, d, mul)
    }
}

pub type Term = (Word, Vec<i64>);

/// Linear combination of bar terms `[r₁|…|r_s]·q^m`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BarElement {
    terms: BTreeMap<Term, Scalar>,
}

impl BarElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(word: Word, m: Vec<i64>, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term((word, m), &c);
        e
    }

    /// `[ ]·q^m`.
    pub fn unit(m: Vec<i64>) -> Self {
        Self::term(Vec::new(), m, Scalar::one())
    }

    pub fn terms(&self) -> &BTreeMap<Term, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Term, c: &Scalar) {
        let v = self.terms.get(&t).map_or_else(|| c.clone(), |x| x + c);
        if v.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, v);
        }
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> BarElement {
        BarElement {
            terms: self
                .terms
                .iter()
                .map(|(t, x)| (t.clone(), x * c))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn sub(&self, other: &BarElement) -> BarElement {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// Maximal bar length.
    pub fn length(&self) -> usize {
        self.terms.keys().map(|(w, _)| w.len()).max().unwrap_or(0)
    }
}

/// Tensor `B ⊗ B`, as a combination of pairs of terms.
pub type BarTensor = BTreeMap<(Term, Term), Scalar>;

/// The truncated bar construction `B(R)` with lengths `≤ s_max`.
#[derive(Clone, Debug)]
pub struct Bar<'a> {
    dga: &'a ConnectedDGA,
    s_max: usize,
}

impl<'a> Bar<'a> {
    pub fn new(dga: &'a ConnectedDGA, s_max: usize) -> Self {
        Bar { dga, s_max }
    }

    pub fn dga(&self) -> &ConnectedDGA {
        self.dga
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    fn shifted(&self, i: usize) -> usize {
        self.dga.letters[i].degree - 1
    }

    /// Bar degree `Σ deg r_i − s` of a word.
    pub fn degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&i| self.shifted(i)).sum()
    }

    pub fn check(&self, x: &BarElement) -> Result<()> {
        for (w, m) in x.terms.keys() {
            if w.len() > self.s_max {
                return Err(Error::Truncation { got: w.len(), max: self.s_max });
            }
            if let Some(&i) = w.iter().find(|&&i| i >= self.dga.letters.len()) {
                return Err(Error::IndexOutOfRange(i));
            }
            if m.len() != self.dga.rank {
                return Err(Error::WrongLength { expected: self.dga.rank, got: m.len() });
            }
        }
        Ok(())
    }

    /// `d[r₁|…|r_s] = Σ_j (−1)^j [Jr₁|…|Jr_{j−1}|dr_j|…|r_s]
    ///              + Σ_{j<s} (−1)^{j+1} [Jr₁|…|Jr_{j−1}|Jr_j∧r_{j+1}|…|r_s]`,
    /// with `J(r) = (−1)^{deg r} r`.
    pub fn d(&self, x: &BarElement) -> BarElement {
        let mut out = BarElement::zero();
        for ((w, m), c) in &x.terms {
            let mut prefix_odd = false;
            for j in 0..w.len() {
                let j1 = j + 1;
                let deg_j = self.dga.letters[w[j]].degree;
                for (l, e) in &self.dga.d[w[j]] {
                    let mut v = w.clone();
                    v[j] = *l;
                    let s = sign(prefix_odd ^ (j1 % 2 == 1));
                    out.add_term((v, m.clone()), &(&(c * e) * &s));
                }
                if j + 1 < w.len() {
                    for (l, e) in self.dga.product(w[j], w[j + 1]) {
                        let mut v = w[..j].to_vec();
                        v.push(*l);
                        v.extend(&w[j + 2..]);
                        let s = sign(prefix_odd ^ ((j1 + 1) % 2 == 1) ^ (deg_j % 2 == 1));
                        out.add_term((v, m.clone()), &(&(c * e) * &s));
                    }
                }
                prefix_odd ^= deg_j % 2 == 1;
            }
        }
        out
    }

    fn shuffles(&self, a: &[usize], b: &[usize], acc: &mut Vec<usize>, odd: bool, out: &mut Vec<(Word, bool)>) {
        if a.is_empty() || b.is_empty() {
            let mut w = acc.clone();
            w.extend(a);
            w.extend(b);
            out.push((w, odd));
            return;
        }
        acc.push(a[0]);
        self.shuffles(&a[1..], b, acc, odd, out);
        acc.pop();
        // b[0] jumps over all of a
        let past: usize = a.iter().map(|&i| self.shifted(i)).sum();
        let flip = (past * self.shifted(b[0])) % 2 == 1;
        acc.push(b[0]);
        self.shuffles(a, &b[1..], acc, odd ^ flip, out);
        acc.pop();
    }

    /// Shuffle product with Koszul signs for the shifted degrees.
    pub fn shuffle(&self, x: &BarElement, y: &BarElement) -> Result<BarElement> {
        let mut out = BarElement::zero();
        for ((wa, ma), ca) in &x.terms {
            for ((wb, mb), cb) in &y.terms {
                if wa.len() + wb.len() > self.s_max {
                    return Err(Error::Truncation { got: wa.len() + wb.len(), max: self.s_max });
                }
                let mut sh = Vec::new();
                self.shuffles(wa, wb, &mut Vec::new(), false, &mut sh);
                let m = add_keys(ma, mb);
                let c = ca * cb;
                for (w, odd) in sh {
                    out.add_term((w, m.clone()), &(&c * &sign(odd)));
                }
            }
        }
        Ok(out)
    }

    fn label_sum(&self, w: &[usize]) -> Vec<i64> {
        let mut s = vec![0; self.dga.rank];
        for &i in w {
            s = add_keys(&s, &self.dga.letters[i].label);
        }
        s
    }

    /// `Δ[r₁|…|r_s]q^m = Σ_i [r₁|…|r_i]q^{m+Σ_{ℓ>i}k(r_ℓ)} ⊗ [r_{i+1}|…|r_s]q^m`.
    pub fn coproduct(&self, x: &BarElement) -> BarTensor {
        let mut out = BarTensor::new();
        for ((w, m), c) in &x.terms {
            for i in 0..=w.len() {
                let left = (w[..i].to_vec(), add_keys(m, &self.label_sum(&w[i..])));
                let right = (w[i..].to_vec(), m.clone());
                add_tensor(&mut out, (left, right), c);
            }
        }
        out
    }

    /// `λ([r₁|…|r_s]q^m) = (−1)^s ε_Koszul [r_s|…|r₁] q^{−m−Σk(r_i)}`.
    pub fn antipode(&self, x: &BarElement) -> BarElement {
        let mut out = BarElement::zero();
        for ((w, m), c) in &x.terms {
            let mut odd = w.len() % 2 == 1;
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    odd ^= (self.shifted(w[i]) * self.shifted(w[j])) % 2 == 1;
                }
            }
            let rev: Word = w.iter().rev().copied().collect();
            let mm: Vec<i64> = add_keys(m, &self.label_sum(w)).iter().map(|v| -v).collect();
            out.add_term((rev, mm), &(c * &sign(odd)));
        }
        out
    }

    /// `ε([ ]q^m) = 1`, zero on positive length.
    pub fn counit(&self, x: &BarElement) -> Scalar {
        x.terms
            .iter()
            .filter(|((w, _), _)| w.is_empty())
            .fold(Scalar::zero(), |acc, (_, c)| &acc + c)
    }

    /// Product on `B ⊗ B`: `(a⊗b)(c⊗d) = (−1)^{|b||c|} ac ⊗ bd`.
    pub fn tensor_multiply(&self, x: &BarTensor, y: &BarTensor) -> Result<BarTensor> {
        let mut out = BarTensor::new();
        for ((a, b), c1) in x {
            for ((c, d), c2) in y {
                let s = sign((self.degree(&b.0) * self.degree(&c.0)) % 2 == 1);
                let ac = self.shuffle(&one(a), &one(c))?;
                let bd = self.shuffle(&one(b), &one(d))?;
                let coeff = &(c1 * c2) * &s;
                for (t1, e1) in &ac.terms {
                    for (t2, e2) in &bd.terms {
                        add_tensor(&mut out, (t1.clone(), t2.clone()), &(&coeff * &(e1 * e2)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `m ∘ (λ ⊗ I) ∘ Δ`.
    pub fn convolution(&self, x: &BarElement) -> Result<BarElement> {
        let mut out = BarElement::zero();
        for ((a, b), c) in self.coproduct(x) {
            let sa = self.antipode(&one(&a));
            out = out.add(&self.shuffle(&sa, &one(&b))?.scale(&c));
        }
        Ok(out)
    }
}

fn one(t: &Term) -> BarElement {
    BarElement::term(t.0.clone(), t.1.clone(), Scalar::one())
}

pub fn add_tensor(t: &mut BarTensor, key: (Term, Term), c: &Scalar) {
    let v = t.get(&key).map_or_else(|| c.clone(), |x| x + c);
    if v.is_zero() {
        t.remove(&key);
    } else {
        t.insert(key, v);
    }
}

/// Dimensions of `E₁^{−s,t}` and `E₂^{−s,t}` for `0 ≤ s ≤ s_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmPages {
    pub s_max: usize,
    pub e1: BTreeMap<(usize, usize), usize>,
    pub e2: BTreeMap<(usize, usize), usize>,
}

/// Words of length `s` whose letter degrees sum to `t`.
pub fn words(dga: &ConnectedDGA, s: usize, t: usize) -> Vec<Word> {
    fn go(dga: &ConnectedDGA, s: usize, t: usize, acc: &mut Word, out: &mut Vec<Word>) {
        if s == 0 {
            if t == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for (i, l) in dga.letters.iter().enumerate() {
            // every remaining letter has degree ≥ 1
            if l.degree + (s - 1) <= t {
                acc.push(i);
                go(dga, s - 1, t - l.degree, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(dga, s, t, &mut Vec::new(), &mut out);
    out
}

fn d1_rank(bar: &Bar, s: usize, t: usize) -> usize {
    if s == 0 {
        return 0;
    }
    let target: BTreeMap<Word, usize> = words(bar.dga, s - 1, t)
        .into_iter()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut ech = Echelon::new();
    for w in words(bar.dga, s, t) {
        let img = bar.d(&BarElement::term(w, vec![0; bar.dga.rank], Scalar::one()));
        let v: SparseVec = img
            .terms
            .iter()
            .map(|((u, _), c)| (target[u], c.clone()))
            .collect();
        ech.insert(v);
    }
    ech.rank()
}

/// `E₁ = B(H)` and `E₂ = H(E₁, d₁)` for a dga with zero differential.
pub fn em_pages(dga: &ConnectedDGA, s_max: usize) -> Result<EmPages> {
    if !dga.has_zero_differential() {
        return Err(Error::InvalidDga("E-pages need zero differential".into()));
    }
    let bar = Bar::new(dga, s_max + 1);
    let top = dga.letters.iter().map(|l| l.degree).max().unwrap_or(0);
    let keys: Vec<(usize, usize)> = (0..=s_max)
        .flat_map(|s| {
            let hi = if s == 0 { 0 } else { s * top };
            (s..=hi).map(move |t| (s, t))
        })
        .collect();
    let rows: Vec<((usize, usize), usize, usize)> = keys
        .into_par_iter()
        .map(|(s, t)| {
            let dim = words(dga, s, t).len();
            let out = d1_rank(&bar, s, t);
            let inc = d1_rank(&bar, s + 1, t);
            ((s, t), dim, dim - out - inc)
        })
        .collect();
    let mut e1 = BTreeMap::new();
    let mut e2 = BTreeMap::new();
    for (k, a, b) in rows {
        if a > 0 {
            e1.insert(k, a);
        }
        if b > 0 {
            e2.insert(k, b);
        }
    }
    Ok(EmPages { s_max, e1, e2 })
}

impl fmt::Display for EmPages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, page) in [("E1", &self.e1), ("E2", &self.e2)] {
            writeln!(f, "{name}")?;
            for ((s, t), d) in page {
                let minus = if *s == 0 { "" } else { "-" };
                writeln!(f, "  ({minus}{s},{t}) {d}")?;
            }
        }
        Ok(())
    }
}

impl BarElement {
    pub fn display<'b>(&'b self, dga: &'b ConnectedDGA) -> impl fmt::Display + 'b {
        struct Show<'c>(&'c BarElement, &'c ConnectedDGA);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_zero() {
                    return f.write_str("0");
                }
                let mut out = String::new();
                for (i, ((w, m), c)) in self.0.terms.iter().enumerate() {
                    let names: Vec<&str> = w.iter().map(|&l| self.1.letters[l].name.as_str()).collect();
                    let mut body = format!("[{}]", names.join("|"));
                    if m.iter().any(|&x| x != 0) {
                        let q: Vec<String> = m.iter().enumerate().map(|(t, e)| format!("q{}^{}", t + 1, e)).collect();
                        body.push_str(&format!(" * {}", q.join(" ")));
                    }
                    crate::os::fmt_summand(&mut out, c, &body, i == 0);
                }
                f.write_str(&out)
            }
        }
        Show(self, dga)
    }
}
