//! Floating-point twisted iterated integrals along polygonal loops in the
//! complement, with `ω_j = (2πi)⁻¹ dL_j/L_j`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::aomoto::WeightMatrix;
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::os::OSElement;
use crate::scalar::Scalar;

pub type Point = Vec<Complex64>;

/// Minimal admissible distance from a loop to any hyperplane.
pub const MIN_DISTANCE: f64 = 1e-9;

/// Closed polyline `base → v₁ → … → v_k → base`.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub base: Point,
    pub vertices: Vec<Point>,
    /// Base number of integration steps per segment; segments close to a
    /// hyperplane get proportionally more.
    pub samples: usize,
}

#[derive(Serialize, Deserialize)]
struct LoopFile {
    base: Vec<[f64; 2]>,
    vertices: Vec<Vec<[f64; 2]>>,
    samples: usize,
}

fn to_pairs(p: &Point) -> Vec<[f64; 2]> {
    p.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(p: &[[f64; 2]]) -> Point {
    p.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl Loop {
    pub fn new(base: Point, vertices: Vec<Point>, samples: usize) -> Self {
        Loop { base, vertices, samples: samples.max(1) }
    }

    pub fn constant(base: Point) -> Self {
        Loop::new(base, Vec::new(), 1)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: LoopFile = serde_json::from_str(text)?;
        let base = from_pairs(&f.base);
        let vertices: Vec<Point> = f.vertices.iter().map(|v| from_pairs(v)).collect();
        if let Some(v) = vertices.iter().find(|v| v.len() != base.len()) {
            return Err(Error::WrongLength { expected: base.len(), got: v.len() });
        }
        Ok(Loop::new(base, vertices, f.samples))
    }

    pub fn to_json(&self) -> String {
        let f = LoopFile {
            base: to_pairs(&self.base),
            vertices: self.vertices.iter().map(to_pairs).collect(),
            samples: self.samples,
        };
        serde_json::to_string_pretty(&f).expect("loop serializes")
    }

    /// Segments `(start, end)` in traversal order.
    pub fn segments(&self) -> Vec<(&Point, &Point)> {
        let mut pts: Vec<&Point> = vec![&self.base];
        pts.extend(&self.vertices);
        pts.push(&self.base);
        pts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn reversed(&self) -> Loop {
        Loop::new(self.base.clone(), self.vertices.iter().rev().cloned().collect(), self.samples)
    }

    /// Same loop with every step count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Loop {
        Loop::new(self.base.clone(), self.vertices.clone(), self.samples * factor)
    }

    /// The concatenation `self` then `other`; both must share the base point.
    pub fn compose(&self, other: &Loop) -> Result<Loop> {
        if self.base.len() != other.base.len()
            || self.base.iter().zip(&other.base).any(|(a, b)| (a - b).norm() > 1e-12)
        {
            return Err(Error::Malformed("loops have different base points".into()));
        }
        let mut vertices = self.vertices.clone();
        if !self.vertices.is_empty() && !other.vertices.is_empty() {
            vertices.push(self.base.clone());
        }
        vertices.extend(other.vertices.iter().cloned());
        Ok(Loop::new(self.base.clone(), vertices, self.samples.max(other.samples)))
    }
}

/// Numeric form `L(x) = c·x + c₀`.
#[derive(Clone, Debug)]
struct NumForm {
    coeffs: Vec<f64>,
    constant: f64,
}

impl NumForm {
    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.coeffs.iter().zip(x).map(|(c, z)| z * c).sum::<Complex64>() + self.constant
    }

    fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn num_forms(arr: &Arrangement) -> Vec<NumForm> {
    arr.forms()
        .iter()
        .map(|f| NumForm {
            coeffs: f.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
            constant: f.constant.to_f64().unwrap_or(f64::NAN),
        })
        .collect()
}

/// Distance from a segment to hyperplane `f`, minimizing `|L(p(t))|` over `t ∈ [0,1]`.
fn segment_distance(f: &NumForm, a: &Point, b: &Point) -> f64 {
    let alpha = f.eval(a);
    let beta = f.eval(b) - alpha;
    let t = if beta.norm_sqr() == 0.0 {
        0.0
    } else {
        (-(alpha * beta.conj()).re / beta.norm_sqr()).clamp(0.0, 1.0)
    };
    (alpha + beta * t).norm() / f.norm()
}

fn validate(arr: &Arrangement, forms: &[NumForm], l: &Loop) -> Result<()> {
    if l.base.len() != arr.ambient_dim() {
        return Err(Error::WrongLength { expected: arr.ambient_dim(), got: l.base.len() });
    }
    for (j, f) in forms.iter().enumerate() {
        for (a, b) in l.segments() {
            let distance = segment_distance(f, a, b);
            if distance.is_nan() || distance <= MIN_DISTANCE {
                return Err(Error::LoopTouchesHyperplane { hyperplane: j + 1, distance });
            }
        }
    }
    Ok(())
}

/// Steps for one segment: `samples` scaled by how fast the forms vary relative
/// to their distance from zero along it.
fn segment_steps(forms: &[NumForm], a: &Point, b: &Point, samples: usize) -> usize {
    let stiffness = forms
        .iter()
        .map(|f| {
            let beta = (f.eval(b) - f.eval(a)).norm();
            beta / (segment_distance(f, a, b) * f.norm())
        })
        .fold(0.0, f64::max);
    samples * (stiffness.ceil() as usize).clamp(1, 4096)
}

/// Checks that the loop stays away from every hyperplane.
pub fn check_loop(arr: &Arrangement, l: &Loop) -> Result<()> {
    validate(arr, &num_forms(arr), l)
}

// 8-point Gauss–Legendre on [0, 1]
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `(∫_γ ω_1, …, ∫_γ ω_n)` by composite Gauss–Legendre quadrature.
pub fn pairing(arr: &Arrangement, l: &Loop) -> Result<Vec<Complex64>> {
    let forms = num_forms(arr);
    validate(arr, &forms, l)?;
    let mut out = vec![Complex64::new(0.0, 0.0); forms.len()];
    for (a, b) in l.segments() {
        for (o, f) in out.iter_mut().zip(&forms) {
            let alpha = f.eval(a);
            let beta = f.eval(b) - alpha;
            let steps = segment_steps(&forms, a, b, l.samples);
            let h = 1.0 / steps as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..steps {
                let mid = (s as f64 + 0.5) * h;
                for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    let t = mid + 0.5 * h * x;
                    acc += beta / (alpha + beta * t) * (0.5 * h * w);
                }
            }
            *o += acc / two_pi_i();
        }
    }
    Ok(out)
}

fn numeric(s: &Scalar, r: Option<&BigRational>) -> Result<f64> {
    let q = match (s.as_rational(), r) {
        (Some(q), _) => q.clone(),
        (None, Some(r)) => s
            .specialize(r)
            .ok_or_else(|| Error::NonNumeric(format!("{s} has a pole at r = {r}")))?,
        (None, None) => return Err(Error::NonNumeric(s.to_string())),
    };
    q.to_f64().ok_or_else(|| Error::NonNumeric(s.to_string()))
}

/// Weight matrix with `r` specialized.
pub fn numeric_weights(a: &WeightMatrix, r: Option<&BigRational>) -> Result<Vec<Vec<f64>>> {
    a.rows()
        .iter()
        .map(|row| row.iter().map(|s| numeric(s, r)).collect())
        .collect()
}

/// `ρ(γ) = exp(∫_γ a·ω^T) ∈ (ℂ*)ᴺ`.
pub fn monodromy(arr: &Arrangement, a: &WeightMatrix, r: Option<&BigRational>, l: &Loop) -> Result<Vec<Complex64>> {
    let w = numeric_weights(a, r)?;
    let p = pairing(arr, l)?;
    Ok(w.iter()
        .map(|row| row.iter().zip(&p).map(|(c, z)| z * c).sum::<Complex64>().exp())
        .collect())
}

/// A degree-one OS form `η` carried in component `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedForm {
    pub eta: OSElement,
    pub k: Vec<i64>,
}

impl TwistedForm {
    pub fn new(eta: OSElement, k: Vec<i64>) -> Result<Self> {
        if !matches!(eta.degree(), None | Some(1)) {
            return Err(Error::NotHomogeneous(format!("{eta} is not of degree one")));
        }
        Ok(TwistedForm { eta, k })
    }
}

/// `φ(ρ(γ)) ∫_γ ψ₁⋯ψ_r` with `φ = q^m`, integrated by the cascade
/// `F_j' = f̃_j F_{j−1}` where `f̃_j = exp(∫₀ᵗ k_j a ω^T)·γ^*η_j`; classical RK4.
pub fn iterated_integral(
    arr: &Arrangement,
    a: &WeightMatrix,
    r: Option<&BigRational>,
    forms: &[TwistedForm],
    phi: &[i64],
    l: &Loop,
) -> Result<Complex64> {
    let nf = num_forms(arr);
    validate(arr, &nf, l)?;
    let w = numeric_weights(a, r)?;
    let big_n = w.len();
    if phi.len() != big_n {
        return Err(Error::WrongLength { expected: big_n, got: phi.len() });
    }
    let n = nf.len();
    let mut etas = Vec::new();
    let mut twists = Vec::new();
    for f in forms {
        if f.k.len() != big_n {
            return Err(Error::WrongLength { expected: big_n, got: f.k.len() });
        }
        let mut e = vec![0.0; n];
        for (m, c) in f.eta.terms() {
            e[m[0] - 1] = numeric(c, r)?;
        }
        etas.push(e);
        // weights of the twist k_j·a
        let tw: Vec<f64> = (0..n)
            .map(|col| f.k.iter().zip(&w).map(|(k, row)| *k as f64 * row[col]).sum())
            .collect();
        twists.push(tw);
    }
    let depth = forms.len();
    // state: [∫ω_1..∫ω_n, F_1..F_r]
    let mut state = vec![Complex64::new(0.0, 0.0); n + depth];
    for (a_pt, b_pt) in l.segments() {
        let alpha: Vec<Complex64> = nf.iter().map(|f| f.eval(a_pt)).collect();
        let beta: Vec<Complex64> = nf.iter().zip(&alpha).map(|(f, al)| f.eval(b_pt) - al).collect();
        let rhs = |t: f64, y: &[Complex64]| -> Vec<Complex64> {
            let om: Vec<Complex64> = alpha
                .iter()
                .zip(&beta)
                .map(|(al, be)| be / (al + be * t) / two_pi_i())
                .collect();
            let mut dy: Vec<Complex64> = om.clone();
            let mut prev = Complex64::new(1.0, 0.0);
            for j in 0..depth {
                let phase: Complex64 = twists[j].iter().zip(y).map(|(c, z)| z * c).sum();
                let pull: Complex64 = etas[j].iter().zip(&om).map(|(c, z)| z * c).sum();
                dy.push(phase.exp() * pull * prev);
                prev = y[n + j];
            }
            dy
        };
        let steps = segment_steps(&nf, a_pt, b_pt, l.samples);
        let h = 1.0 / steps as f64;
        for s in 0..steps {
            let t = s as f64 * h;
            let k1 = rhs(t, &state);
            let y2: Vec<Complex64> = state.iter().zip(&k1).map(|(y, k)| y + k * (h / 2.0)).collect();
            let k2 = rhs(t + h / 2.0, &y2);
            let y3: Vec<Complex64> = state.iter().zip(&k2).map(|(y, k)| y + k * (h / 2.0)).collect();
            let k3 = rhs(t + h / 2.0, &y3);
            let y4: Vec<Complex64> = state.iter().zip(&k3).map(|(y, k)| y + k * h).collect();
            let k4 = rhs(t + h, &y4);
            for i in 0..state.len() {
                state[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
            }
        }
    }
    let value = if depth == 0 { Complex64::new(1.0, 0.0) } else { state[n + depth - 1] };
    // φ(ρ(γ)) from the accumulated pairing
    let log_phi: Complex64 = phi
        .iter()
        .zip(&w)
        .map(|(m, row)| row.iter().zip(&state[..n]).map(|(c, z)| z * c).sum::<Complex64>() * *m as f64)
        .sum();
    Ok(value * log_phi.exp())
}

/// A loop linking hyperplane `j` once: a tail from `base` through a complex
/// midpoint to a circle of `radius` (64 vertices) around a point of `K_j`.
pub fn standard_meridian(arr: &Arrangement, base: &Point, j: usize, radius: f64) -> Result<Loop> {
    if j == 0 || j > arr.len() {
        return Err(Error::IndexOutOfRange(j));
    }
    let forms = num_forms(arr);
    let f = &forms[j - 1];
    let dim = arr.ambient_dim();
    let nn = f.norm() * f.norm();
    // unit normal scaled so that L_j(p + z v) = z
    let v: Vec<f64> = f.coeffs.iter().map(|c| c / nn).collect();
    // foot of the real part of the base on K_j
    let re: Vec<f64> = base.iter().map(|z| z.re).collect();
    let lb = f.coeffs.iter().zip(&re).map(|(c, x)| c * x).sum::<f64>() + f.constant;
    let foot: Vec<f64> = re.iter().zip(&v).map(|(x, vi)| x - lb * vi).collect();
    // directions along K_j to try when the foot is too close to other hyperplanes
    let along: Vec<f64> = if dim >= 2 {
        let mut u = vec![0.0; dim];
        u[0] = -f.coeffs[1];
        u[1] = f.coeffs[0];
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        u.iter().map(|x| x / nu).collect()
    } else {
        vec![0.0; dim]
    };
    const VERTICES: usize = 64;
    for shift in [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0] {
        let p: Vec<f64> = foot.iter().zip(&along).map(|(x, u)| x + shift * u).collect();
        let pc: Point = p.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        let clear = forms.iter().enumerate().all(|(i, g)| {
            i == j - 1 || g.eval(&pc).norm() / g.norm() > 2.0 * radius
        });
        if !clear {
            continue;
        }
        let circle: Vec<Point> = (0..VERTICES)
            .map(|s| {
                let z = Complex64::from_polar(radius * nn.sqrt(), 2.0 * PI * s as f64 / VERTICES as f64);
                p.iter().zip(&v).map(|(x, vi)| z * vi + x).collect()
            })
            .collect();
        let start = circle[0].clone();
        for lift in [0.37, -0.37, 0.61, -0.61, 0.19] {
            let mid: Point = base
                .iter()
                .zip(&start)
                .enumerate()
                .map(|(i, (b, s))| (b + s) * 0.5 + Complex64::new(0.0, lift * (1.0 + 0.3 * i as f64)))
                .collect();
            let mut vertices = vec![mid.clone()];
            vertices.extend(circle.iter().cloned());
            vertices.push(start.clone());
            vertices.push(mid);
            let l = Loop::new(base.clone(), vertices, 16);
            if validate(arr, &forms, &l).is_ok() {
                return Ok(l);
            }
        }
    }
    Err(Error::Meridian(format!(
        "no admissible circle of radius {radius} around hyperplane {j}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn base() -> Point {
        vec![Complex64::new(-1.0 / 3.0, 0.0), Complex64::new(-2.0 / 3.0, 0.0)]
    }

    #[test]
    fn meridians_pair_to_delta() {
        let arr = fixtures::braid();
        for j in 1..=5 {
            let l = standard_meridian(&arr, &base(), j, 0.05).unwrap();
            assert!(l.vertices.len() >= 64);
            let p = pairing(&arr, &l).unwrap();
            for (k, z) in p.iter().enumerate() {
                let expected = if k + 1 == j { 1.0 } else { 0.0 };
                assert!((z - expected).norm() < 1e-6, "j={j} k={k} {z}");
            }
            let back = pairing(&arr, &l.reversed()).unwrap();
            assert!((back[j - 1] + 1.0).norm() < 1e-6);
        }
        assert!(matches!(standard_meridian(&arr, &base(), 1, 5.0), Err(Error::Meridian(_))));
    }

    #[test]
    fn monodromy_of_meridian() {
        let arr = fixtures::braid();
        let a = WeightMatrix::new(fixtures::braid_b(), 5).unwrap();
        let l = standard_meridian(&arr, &base(), 5, 0.05).unwrap();
        let m = monodromy(&arr, &a, None, &l).unwrap();
        assert!((m[0] - (-2.0f64).exp()).norm() < 1e-8);
        assert!((m[1] - 2.0f64.exp()).norm() < 1e-8);
        let c = monodromy(&arr, &a, None, &Loop::constant(base())).unwrap();
        assert!(c.iter().all(|z| (z - 1.0).norm() < 1e-15));
    }

    #[test]
    fn symbolic_weights_need_r() {
        let arr = fixtures::braid();
        let a = WeightMatrix::new(fixtures::braid_b(), 5).unwrap().scaled(&Scalar::r());
        let l = standard_meridian(&arr, &base(), 2, 0.05).unwrap();
        assert!(matches!(monodromy(&arr, &a, None, &l), Err(Error::NonNumeric(_))));
        let half = BigRational::new(1.into(), 2.into());
        let m = monodromy(&arr, &a, Some(&half), &l).unwrap();
        assert!((m[0] - 0.5f64.exp()).norm() < 1e-8);
    }

    #[test]
    fn touching_loop_is_rejected() {
        let arr = fixtures::braid();
        let through = Loop::new(base(), vec![vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)]], 8);
        assert!(matches!(pairing(&arr, &through), Err(Error::LoopTouchesHyperplane { hyperplane: 1, .. })));
    }

    #[test]
    fn single_integrals_match_pairing() {
        let arr = fixtures::braid();
        let a = WeightMatrix::zero(2, 5);
        let l = standard_meridian(&arr, &base(), 3, 0.05).unwrap();
        for k in 1..=5 {
            let f = TwistedForm::new(OSElement::generator(k), vec![0, 0]).unwrap();
            let v = iterated_integral(&arr, &a, None, &[f], &[0, 0], &l).unwrap();
            let expected = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - expected).norm() < 1e-6);
        }
        let empty = iterated_integral(&arr, &a, None, &[], &[0, 0], &l).unwrap();
        assert!((empty - 1.0).norm() < 1e-12);
    }

    #[test]
    fn loop_file_round_trip() {
        let l = Loop::from_json(include_str!("../../../fixtures/braid_loop.json")).unwrap();
        check_loop(&fixtures::braid(), &l).unwrap();
        assert_eq!(Loop::from_json(&l.to_json()).unwrap(), l);
    }
}
