//! Exact scalars: rationals and rational functions in one indeterminate `r`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;
use crate::expr::{self, Expr};

/// Dense univariate polynomial over ℚ, coefficients stored lowest degree first.
/// The zero polynomial has no coefficients; there are never trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The indeterminate `r`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
                quot[k] = c;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn fmt_terms(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (k, a.is_one()) {
                (0, _) => fmt_rational(&a),
                (1, true) => "r".to_string(),
                (1, false) => format!("{}*r", fmt_rational(&a)),
                (_, true) => format!("r^{k}"),
                (_, false) => format!("{}*r^{k}", fmt_rational(&a)),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            out.push_str(&body);
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigRational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of ℚ(r) in canonical form.
///
/// Values whose numerator and denominator are both constant always use the
/// `Rational` tag. A `Function` has a monic denominator coprime to its numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Function { num: Poly, den: Poly },
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Rational(BigRational::new(p.into(), q.into()))
    }

    /// The indeterminate `r`.
    pub fn r() -> Self {
        Scalar::Function {
            num: Poly::var(),
            den: Poly::one(),
        }
    }

    /// Builds `num/den` in canonical form; `None` if `den` is zero.
    pub fn from_fraction(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Scalar::zero());
        }
        if let (Some(n), Some(d)) = (num.as_constant(), den.as_constant()) {
            return Some(Scalar::Rational(n / d));
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let l = den.lead().unwrap().recip();
        num = num.scale(&l);
        den = den.scale(&l);
        if let (Some(n), Some(d)) = (num.as_constant(), den.as_constant()) {
            return Some(Scalar::Rational(n / d));
        }
        Some(Scalar::Function { num, den })
    }

    fn parts(&self) -> (Poly, Poly) {
        match self {
            Scalar::Rational(q) => (Poly::constant(q.clone()), Poly::one()),
            Scalar::Function { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Function { .. } => None,
        }
    }

    /// True iff the value is a rational integer ≥ 1. A nonconstant rational
    /// function is never an integer.
    pub fn is_positive_integer(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_integer() && q.is_positive(),
            Scalar::Function { .. } => false,
        }
    }

    /// Size measure used to pick Gaussian-elimination pivots.
    pub fn complexity(&self) -> usize {
        match self {
            Scalar::Rational(q) => (q.numer().bits() + q.denom().bits()) as usize / 64,
            Scalar::Function { num, den } => {
                1000 * (num.degree().unwrap_or(0) + den.degree().unwrap_or(0) + 1)
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Function { num, den } => Scalar::from_fraction(den.clone(), num.clone()),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|i| self * &i)
    }

    /// Substitutes `r = value`; `None` at a pole.
    pub fn specialize(&self, value: &BigRational) -> Option<BigRational> {
        match self {
            Scalar::Rational(q) => Some(q.clone()),
            Scalar::Function { num, den } => {
                let d = den.eval(value);
                if d.is_zero() {
                    None
                } else {
                    Some(num.eval(value) / d)
                }
            }
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_rational().and_then(|q| q.to_f64())
    }

    /// Whether the printed form begins with a minus sign.
    pub fn is_negative_leading(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Function { num, .. } => num.lead().is_some_and(|l| l.is_negative()),
        }
    }

    /// Whether the printed form needs parentheses when used as a factor.
    pub fn needs_parens(&self) -> bool {
        match self {
            Scalar::Rational(_) => false,
            Scalar::Function { num, den } => den.is_one_poly() && num.term_count() > 1,
        }
    }

    pub fn pow(&self, e: i64) -> Option<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    pub fn from_expr(e: &Expr) -> Result<Scalar, ParseError> {
        Ok(match e {
            Expr::Int(n) => Scalar::Rational(BigRational::from_integer(n.clone())),
            Expr::Ident('r', None) => Scalar::r(),
            Expr::Ident(c, i) => {
                return Err(ParseError::UnknownSymbol(format!(
                    "{c}{}",
                    i.map(|i| i.to_string()).unwrap_or_default()
                )))
            }
            Expr::Neg(a) => -&Scalar::from_expr(a)?,
            Expr::Add(a, b) => &Scalar::from_expr(a)? + &Scalar::from_expr(b)?,
            Expr::Sub(a, b) => &Scalar::from_expr(a)? - &Scalar::from_expr(b)?,
            Expr::Mul(a, b) => &Scalar::from_expr(a)? * &Scalar::from_expr(b)?,
            Expr::Div(a, b) => Scalar::from_expr(a)?
                .checked_div(&Scalar::from_expr(b)?)
                .ok_or(ParseError::ZeroDenominator)?,
            Expr::Pow(a, k) => Scalar::from_expr(a)?
                .pow(*k)
                .ok_or(ParseError::ZeroDenominator)?,
            Expr::Wedge(..) => {
                return Err(ParseError::Unsupported(
                    "exterior product in a scalar".into(),
                ))
            }
        })
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let (a, b) = self.parts();
                let (c, d) = rhs.parts();
                if b == d {
                    Scalar::from_fraction(&a + &c, b).unwrap()
                } else {
                    Scalar::from_fraction(&(&a * &d) + &(&c * &b), &b * &d).unwrap()
                }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(a), Scalar::Function { num, den })
            | (Scalar::Function { num, den }, Scalar::Rational(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar::Function {
                        num: num.scale(a),
                        den: den.clone(),
                    }
                }
            }
            _ => {
                let (a, b) = self.parts();
                let (c, d) = rhs.parts();
                Scalar::from_fraction(&a * &c, &b * &d).unwrap()
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Function { num, den } => Scalar::Function {
                num: -num,
                den: den.clone(),
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&fmt_rational(q)),
            Scalar::Function { num, den } => {
                let n = num.fmt_terms();
                if den.is_one_poly() {
                    return f.write_str(&n);
                }
                let n = if num.term_count() > 1 { format!("({n})") } else { n };
                let d = den.fmt_terms();
                let d = if den.term_count() > 1 { format!("({d})") } else { d };
                write!(f, "{n}/{d}")
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::from_expr(&expr::parse(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("0"), Scalar::zero());
        assert_eq!(s("2/r"), Scalar::int(2).checked_div(&Scalar::r()).unwrap());
        assert!(matches!(s("2/r"), Scalar::Function { .. }));
        assert_eq!(s("(r+1)/(r+1)"), Scalar::one());
        assert!(matches!(s("(r+1)/(r+1)"), Scalar::Rational(_)));
        assert_eq!(s("-3/4"), Scalar::ratio(-3, 4));
        assert_eq!(s("2r"), &Scalar::int(2) * &Scalar::r());
        assert_eq!(s("1/r"), Scalar::r().inv().unwrap());
    }

    #[test]
    fn parse_errors() {
        assert_eq!("1/0".parse::<Scalar>(), Err(ParseError::ZeroDenominator));
        assert_eq!("1/(r-r)".parse::<Scalar>(), Err(ParseError::ZeroDenominator));
        assert!(matches!("x+1".parse::<Scalar>(), Err(ParseError::UnknownSymbol(_))));
        assert!(matches!("3+".parse::<Scalar>(), Err(ParseError::Syntax(_))));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        match s("(2*r+1)/(2*r-6)") {
            Scalar::Function { num, den } => {
                assert!(den.lead().unwrap().is_one());
                assert_eq!(num.gcd(&den), Poly::one());
            }
            other => panic!("expected function, got {other}"),
        }
    }

    #[test]
    fn printing() {
        assert_eq!(s("2/r").to_string(), "2/r");
        assert_eq!(s("(2*r+1)/(r-3)").to_string(), "(2*r+1)/(r-3)");
        assert_eq!(s("-r/(r-1)").to_string(), "-r/(r-1)");
        assert_eq!(s("r^2 - 1/2 r").to_string(), "r^2-1/2*r");
        assert_eq!(s("1/(2r^2)").to_string(), "1/2/r^2");
        assert_eq!(s("1/(2r^2)"), s("1/2/r^2"));
    }

    #[test]
    fn positive_integers() {
        assert!(Scalar::int(3).is_positive_integer());
        assert!(!Scalar::ratio(3, 2).is_positive_integer());
        assert!(!Scalar::r().is_positive_integer());
        assert!(!Scalar::zero().is_positive_integer());
        assert!(!Scalar::int(-2).is_positive_integer());
        assert!(!(&Scalar::r() * &Scalar::int(3)).is_positive_integer());
    }

    #[test]
    fn specialization() {
        let x = s("(r+1)/(r-2)");
        assert_eq!(x.specialize(&BigRational::from_integer(3.into())), Some(BigRational::from_integer(4.into())));
        assert_eq!(x.specialize(&BigRational::from_integer(2.into())), None);
    }
}
