//! Affine hyperplane arrangements over ℚ, their intersection lattices, dense
//! flats of the projective closure and the non-resonance test on weights.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `L(x) = coeffs · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

#[derive(Debug, Serialize, Deserialize)]
struct FormFile {
    coeffs: Vec<String>,
    #[serde(rename = "const")]
    constant: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArrangementFile {
    ambient_dim: usize,
    forms: Vec<FormFile>,
}

/// Hyperplanes are numbered `1..=n` in input order; index 0 is reserved for
/// the hyperplane at infinity of the projective closure.
#[derive(Clone, Debug)]
pub struct Arrangement {
    ambient_dim: usize,
    forms: Vec<AffineForm>,
    dense: OnceLock<Vec<Flat>>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    match s.parse::<Scalar>()? {
        Scalar::Rational(q) => Ok(q),
        other => Err(Error::Malformed(format!(
            "arrangement entries must be rational, got {other}"
        ))),
    }
}

fn rational_to_string(q: &BigRational) -> String {
    Scalar::Rational(q.clone()).to_string()
}

impl Arrangement {
    pub fn new(ambient_dim: usize, forms: Vec<AffineForm>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Malformed("ambient_dim must be at least 1".into()));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.coeffs.len() != ambient_dim {
                return Err(Error::WrongLength {
                    expected: ambient_dim,
                    got: f.coeffs.len(),
                });
            }
            if f.coeffs.iter().all(Zero::is_zero) {
                return Err(Error::ZeroForm(i + 1));
            }
        }
        let arr = Arrangement {
            ambient_dim,
            forms,
            dense: OnceLock::new(),
        };
        for i in 1..=arr.len() {
            for j in i + 1..=arr.len() {
                if arr.rank(&[i, j]) == 1 {
                    return Err(Error::DuplicateHyperplane(i, j));
                }
            }
        }
        Ok(arr)
    }

    /// Parses the JSON arrangement format
    /// `{"ambient_dim": 2, "forms": [{"coeffs": ["1", "0"], "const": "-1"}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ArrangementFile = serde_json::from_str(text)?;
        let forms = file
            .forms
            .iter()
            .map(|f| {
                Ok(AffineForm {
                    coeffs: f
                        .coeffs
                        .iter()
                        .map(|c| parse_rational(c))
                        .collect::<Result<_>>()?,
                    constant: parse_rational(&f.constant)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(file.ambient_dim, forms)
    }

    pub fn to_json(&self) -> String {
        let file = ArrangementFile {
            ambient_dim: self.ambient_dim,
            forms: self
                .forms
                .iter()
                .map(|f| FormFile {
                    coeffs: f.coeffs.iter().map(rational_to_string).collect(),
                    constant: rational_to_string(&f.constant),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Number of hyperplanes `n`.
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Form `j`, 1-based.
    pub fn form(&self, j: usize) -> &AffineForm {
        &self.forms[j - 1]
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    /// Homogenized form: `(coeffs, constant)` for `j ≥ 1`, `(0, …, 0, 1)` for `j = 0`.
    pub fn coned_vector(&self, j: usize) -> Vec<Scalar> {
        if j == 0 {
            let mut v = vec![Scalar::zero(); self.ambient_dim + 1];
            v[self.ambient_dim] = Scalar::one();
            return v;
        }
        let f = self.form(j);
        f.coeffs
            .iter()
            .chain(std::iter::once(&f.constant))
            .map(|q| Scalar::Rational(q.clone()))
            .collect()
    }

    fn linear_vector(&self, j: usize) -> Vec<Scalar> {
        self.form(j)
            .coeffs
            .iter()
            .map(|q| Scalar::Rational(q.clone()))
            .collect()
    }

    /// Rank of the coned vectors indexed by `set` (indices in `0..=n`).
    pub fn rank(&self, set: &[usize]) -> usize {
        if set.is_empty() {
            return 0;
        }
        Matrix::from_rows(
            self.ambient_dim + 1,
            set.iter().map(|&j| self.coned_vector(j)).collect(),
        )
        .rank()
    }

    fn linear_rank(&self, set: &[usize]) -> usize {
        if set.is_empty() {
            return 0;
        }
        Matrix::from_rows(
            self.ambient_dim,
            set.iter().map(|&j| self.linear_vector(j)).collect(),
        )
        .rank()
    }

    /// True when the affine hyperplanes in `set` (indices `1..=n`) have a common point.
    pub fn meets(&self, set: &[usize]) -> bool {
        self.rank(set) == self.linear_rank(set)
    }

    /// Relabels hyperplanes: new hyperplane `i` is old hyperplane `perm[i-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let forms = perm.iter().map(|&j| self.form(j).clone()).collect();
        Arrangement::new(self.ambient_dim, forms)
    }

    /// Dense flats of the projective closure, computed once.
    pub fn dense_flats(&self) -> &[Flat] {
        self.dense.get_or_init(|| {
            intersection_lattice(self, true)
                .flats
                .into_iter()
                .filter(|f| f.dense && f.rank >= 1)
                .collect()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    /// Sorted indices of every hyperplane containing the flat (0 = infinity).
    pub hyperplanes: Vec<usize>,
    pub rank: usize,
    pub moebius: i64,
    pub dense: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatLattice {
    pub projective: bool,
    /// Sorted by rank, then by hyperplane set.
    pub flats: Vec<Flat>,
    /// `covers[i]` lists the indices of the flats covering flat `i`.
    pub covers: Vec<Vec<usize>>,
}

impl FlatLattice {
    pub fn by_rank(&self, rank: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.rank == rank)
    }

    pub fn max_rank(&self) -> usize {
        self.flats.iter().map(|f| f.rank).max().unwrap_or(0)
    }

    /// Σ |μ| over the rank-`p` flats.
    pub fn whitney_number(&self, p: usize) -> u64 {
        self.by_rank(p).map(|f| f.moebius.unsigned_abs()).sum()
    }

    pub fn find(&self, hyperplanes: &[usize]) -> Option<&Flat> {
        self.flats.iter().find(|f| f.hyperplanes == hyperplanes)
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// All flats of the arrangement (or of its projective closure), with ranks,
/// Möbius values and density flags. Affine subsets with empty intersection
/// produce no flat.
pub fn intersection_lattice(arr: &Arrangement, projective: bool) -> FlatLattice {
    let candidates: Vec<usize> = if projective {
        (0..=arr.len()).collect()
    } else {
        (1..=arr.len()).collect()
    };
    let max_rank = arr.ambient_dim;
    let mut levels: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::from([Vec::new()])];
    for p in 0..max_rank {
        let mut next = BTreeSet::new();
        for s in &levels[p] {
            for &j in &candidates {
                if s.binary_search(&j).is_ok() {
                    continue;
                }
                let mut t = s.clone();
                t.push(j);
                t.sort_unstable();
                let rt = arr.rank(&t);
                if !projective && rt != arr.linear_rank(&t) {
                    continue;
                }
                if rt > max_rank {
                    continue;
                }
                let closure: Vec<usize> = candidates
                    .iter()
                    .copied()
                    .filter(|&k| {
                        t.binary_search(&k).is_ok() || {
                            let mut u = t.clone();
                            u.push(k);
                            arr.rank(&u) == rt
                        }
                    })
                    .collect();
                next.insert(closure);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }

    let mut flats: Vec<Flat> = Vec::new();
    for (rank, level) in levels.iter().enumerate() {
        for hs in level {
            let dense = !hs.is_empty() && is_irreducible(arr, hs);
            flats.push(Flat {
                hyperplanes: hs.clone(),
                rank,
                moebius: 0,
                dense,
            });
        }
    }
    for i in 0..flats.len() {
        if flats[i].rank == 0 {
            flats[i].moebius = 1;
            continue;
        }
        let s: i64 = flats[..i]
            .iter()
            .filter(|z| z.rank < flats[i].rank && is_subset(&z.hyperplanes, &flats[i].hyperplanes))
            .map(|z| z.moebius)
            .sum();
        flats[i].moebius = -s;
    }
    let covers = flats
        .iter()
        .map(|z| {
            flats
                .iter()
                .enumerate()
                .filter(|(_, y)| y.rank == z.rank + 1 && is_subset(&z.hyperplanes, &y.hyperplanes))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    FlatLattice {
        projective,
        flats,
        covers,
    }
}

/// Connectivity of the matroid on the coned vectors of `set`. Elements are
/// joined when they lie on a common circuit; fundamental circuits relative to
/// a greedy basis generate the same components.
fn is_irreducible(arr: &Arrangement, set: &[usize]) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut others = Vec::new();
    for &j in set {
        let mut t = basis.clone();
        t.push(j);
        if arr.rank(&t) == t.len() {
            basis.push(j);
        } else {
            others.push(j);
        }
    }
    let pos: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let basis_cols: Vec<Vec<Scalar>> = basis.iter().map(|&b| arr.coned_vector(b)).collect();
    let bm = Matrix::from_columns(arr.ambient_dim + 1, &basis_cols);
    for &e in &others {
        let coeffs = bm.solve(&arr.coned_vector(e)).expect("e is in the span of the basis");
        for (b, c) in basis.iter().zip(&coeffs) {
            if !c.is_zero() {
                let (x, y) = (find(&mut parent, pos[&e]), find(&mut parent, pos[b]));
                parent[x] = y;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..set.len()).all(|i| find(&mut parent, i) == root)
}

/// Dense flats of the projective closure (rank ≥ 1). Singletons are dense.
pub fn dense_flats(arr: &Arrangement) -> Vec<Flat> {
    arr.dense_flats().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsvViolation {
    pub hyperplanes: Vec<usize>,
    pub sum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsvReport {
    pub valid: bool,
    pub violations: Vec<EsvViolation>,
}

/// Checks that `M - Σ_{S ⊂ K̂_j} a_j ≠ 0` for every dense flat `S` and every
/// integer `M ≥ 1`, with `a_0 = -(a_1 + … + a_n)` for the hyperplane at infinity.
pub fn esv_check(arr: &Arrangement, weights: &[Scalar]) -> Result<EsvReport> {
    if weights.len() != arr.len() {
        return Err(Error::WrongLength {
            expected: arr.len(),
            got: weights.len(),
        });
    }
    let total = weights.iter().fold(Scalar::zero(), |acc, w| &acc + w);
    let a0 = -&total;
    let mut violations = Vec::new();
    for flat in arr.dense_flats() {
        let sum = flat.hyperplanes.iter().fold(Scalar::zero(), |acc, &j| {
            &acc + if j == 0 { &a0 } else { &weights[j - 1] }
        });
        if sum.is_positive_integer() {
            violations.push(EsvViolation {
                hyperplanes: flat.hyperplanes.clone(),
                sum: sum.to_string(),
            });
        }
    }
    Ok(EsvReport {
        valid: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sets(lat: &FlatLattice, rank: usize) -> Vec<Vec<usize>> {
        lat.by_rank(rank).map(|f| f.hyperplanes.clone()).collect()
    }

    #[test]
    fn braid_affine_lattice() {
        let arr = fixtures::braid();
        let lat = intersection_lattice(&arr, false);
        assert_eq!(sets(&lat, 1).len(), 5);
        assert_eq!(
            sets(&lat, 2),
            vec![vec![1, 3], vec![1, 4, 5], vec![2, 3, 5], vec![2, 4]]
        );
        assert_eq!(lat.whitney_number(0), 1);
        assert_eq!(lat.whitney_number(1), 5);
        assert_eq!(lat.whitney_number(2), 6);
        assert_eq!(lat.find(&[1, 4, 5]).unwrap().moebius, 2);
    }

    #[test]
    fn braid_projective_lattice() {
        let arr = fixtures::braid();
        let lat = intersection_lattice(&arr, true);
        let r2 = sets(&lat, 2);
        assert!(r2.contains(&vec![0, 1, 2]));
        assert!(r2.contains(&vec![0, 3, 4]));
        assert!(r2.contains(&vec![0, 5]));
        assert_eq!(r2.len(), 7);
    }

    #[test]
    fn empty_arrangement() {
        let arr = Arrangement::new(2, vec![]).unwrap();
        let lat = intersection_lattice(&arr, false);
        assert_eq!(lat.flats.len(), 1);
        assert_eq!(lat.flats[0].moebius, 1);
    }

    #[test]
    fn rejects_bad_input() {
        let dup = r#"{"ambient_dim":1,"forms":[{"coeffs":["1"],"const":"0"},{"coeffs":["2"],"const":"0"}]}"#;
        assert!(matches!(Arrangement::from_json(dup), Err(Error::DuplicateHyperplane(1, 2))));
        let zero = r#"{"ambient_dim":1,"forms":[{"coeffs":["0"],"const":"1"}]}"#;
        assert!(matches!(Arrangement::from_json(zero), Err(Error::ZeroForm(1))));
        assert!(Arrangement::from_json("{\"ambient_dim\":1}").is_err());
        let single = r#"{"ambient_dim":1,"forms":[{"coeffs":["1"],"const":"0"}]}"#;
        assert_eq!(Arrangement::from_json(single).unwrap().len(), 1);
    }

    #[test]
    fn braid_dense_flats() {
        let arr = fixtures::braid();
        let dense: Vec<Vec<usize>> = arr.dense_flats().iter().map(|f| f.hyperplanes.clone()).collect();
        assert!(dense.contains(&vec![2, 3, 5]));
        assert!(dense.contains(&vec![1, 4, 5]));
        assert!(!dense.contains(&vec![1, 3]));
        assert!(!dense.contains(&vec![0, 5]));
        for j in 0..=5 {
            assert!(dense.contains(&vec![j]));
        }
        assert_eq!(dense.len(), 6 + 4);
    }

    #[test]
    fn esv_examples() {
        let arr = fixtures::braid();
        let ones: Vec<Scalar> = (0..5).map(|_| Scalar::one()).collect();
        let rep = esv_check(&arr, &ones).unwrap();
        assert!(!rep.valid);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.hyperplanes == vec![1, 4, 5] && v.sum == "3"));
        let zeros = vec![Scalar::zero(); 5];
        assert!(esv_check(&arr, &zeros).unwrap().valid);
        assert!(matches!(esv_check(&arr, &zeros[..4]), Err(Error::WrongLength { .. })));
        // symbolic multiples of r never hit a positive integer
        let sym: Vec<Scalar> = [0, 1, 1, 0, -2].iter().map(|&c| &Scalar::r() * &Scalar::int(c)).collect();
        assert!(esv_check(&arr, &sym).unwrap().valid);
    }
}
