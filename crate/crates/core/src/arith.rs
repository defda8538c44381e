//! Exact scalars: rationals and elements of the real quadratic field ℚ(√2).
//!
//! Both types are kept in canonical form, so `==` is structural equality.
//! Their string forms (`"num/den"` and `"x+y*sqrt2"`) are the wire format used
//! in every JSON report.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ntheory::exact_sqrt;
use crate::Error;

/// An arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// The integer value, if this rational is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer()?.to_i64()
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rat, Error> {
        Rat::one().checked_div(self)
    }

    pub fn pow(&self, exp: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Nonnegative square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        // lowest terms: a square iff numerator and denominator both are
        let n = exact_sqrt(self.numer())?;
        let d = exact_sqrt(self.denom())?;
        Some(Rat(BigRational::new_raw(n, d)))
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_exact().is_some()
    }
}

/// `Some(r)` with `r ≥ 0` and `r² = q` when `q` is a rational square.
pub fn rat_is_square(q: &Rat) -> Option<Rat> {
    q.sqrt_exact()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

/// Dispatching form of the field operations; `Neg` ignores `q`.
pub fn rat_arith(op: RatOp, p: &Rat, q: &Rat) -> Result<Rat, Error> {
    Ok(match op {
        RatOp::Add => p + q,
        RatOp::Sub => p - q,
        RatOp::Mul => p * q,
        RatOp::Div => p.checked_div(q)?,
        RatOp::Neg => -p,
    })
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

impl From<&BigInt> for Rat {
    fn from(n: &BigInt) -> Self {
        Rat::from_int(n.clone())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

/// Panics on a zero divisor, like integer division; use [`Rat::checked_div`]
/// where the divisor is not known to be nonzero.
impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        self.checked_div(&rhs).expect("rational division by zero")
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        self.checked_div(rhs).expect("rational division by zero")
    }
}

impl<'a> Div<&'a Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        self.checked_div(rhs).expect("rational division by zero")
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rat::new(n, d)
            }
            None => Ok(Rat::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `x + y√2` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadRat {
    pub x: Rat,
    pub y: Rat,
}

impl QuadRat {
    pub fn new(x: impl Into<Rat>, y: impl Into<Rat>) -> Self {
        QuadRat {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn from_rat(x: Rat) -> Self {
        QuadRat { x, y: Rat::zero() }
    }

    pub fn zero() -> Self {
        QuadRat::default()
    }

    pub fn one() -> Self {
        QuadRat::from_rat(Rat::one())
    }

    pub fn sqrt2() -> Self {
        QuadRat::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conj(&self) -> QuadRat {
        QuadRat {
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    /// `x² − 2y²`
    pub fn norm(&self) -> Rat {
        &self.x * &self.x - Rat::from(2) * &self.y * &self.y
    }

    pub fn checked_div(&self, rhs: &QuadRat) -> Result<QuadRat, Error> {
        let n = rhs.norm();
        if n.is_zero() {
            // √2 is irrational, so the norm vanishes only at zero
            return Err(Error::DivisionByZero);
        }
        let num = self * &rhs.conj();
        Ok(QuadRat {
            x: num.x.checked_div(&n)?,
            y: num.y.checked_div(&n)?,
        })
    }

    /// Sign under the embedding √2 ↦ +1.414…, decided exactly.
    pub fn real_sign(&self) -> Ordering {
        let sx = self.x.signum();
        let sy = self.y.signum();
        if sx >= 0 && sy >= 0 {
            return (sx + sy).cmp(&0);
        }
        if sx <= 0 && sy <= 0 {
            return 0.cmp(&(-(sx + sy)));
        }
        // opposite signs: compare x² with 2y²
        let x2 = &self.x * &self.x;
        let y2 = Rat::from(2) * &self.y * &self.y;
        match x2.cmp(&y2) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sx.cmp(&0),
            Ordering::Less => sy.cmp(&0),
        }
    }

    /// A square root in ℚ(√2), if one exists.
    ///
    /// The root is canonical: nonnegative rational part, and nonnegative √2
    /// part when the rational part is zero.
    pub fn sqrt_exact(&self) -> Option<QuadRat> {
        if self.is_zero() {
            return Some(QuadRat::zero());
        }
        // (r + s√2)² = x + y√2 ⇔ r² + 2s² = x, 2rs = y; then r² − 2s² = ±√(norm)
        let n0 = self.norm().sqrt_exact()?;
        let four = Rat::from(4);
        let mut candidates = Vec::with_capacity(4);
        for n in [n0.clone(), -&n0] {
            let s2 = (&self.x - &n) / &four;
            let Some(s) = s2.sqrt_exact() else { continue };
            if s.is_zero() {
                // pure rational root: y = 0 and x = r²
                if let Some(r) = self.x.sqrt_exact() {
                    candidates.push(QuadRat::from_rat(r));
                }
            } else {
                let r = &self.y / &(Rat::from(2) * &s);
                candidates.push(QuadRat { x: r, y: s });
            }
        }
        candidates
            .into_iter()
            .find(|c| &(c * c) == self)
            .map(QuadRat::canonical_sign)
    }

    fn canonical_sign(self) -> QuadRat {
        if self.x.is_negative() || (self.x.is_zero() && self.y.is_negative()) {
            -self
        } else {
            self
        }
    }
}

/// Square root in ℚ(√2) when one exists; see [`QuadRat::sqrt_exact`].
pub fn quad_is_square(q: &QuadRat) -> Option<QuadRat> {
    q.sqrt_exact()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
    Norm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadValue {
    Quad(QuadRat),
    Rat(Rat),
}

/// Dispatching form of the ℚ(√2) operations; unary ops ignore `q`.
pub fn quad_arith(op: QuadOp, p: &QuadRat, q: &QuadRat) -> Result<QuadValue, Error> {
    Ok(match op {
        QuadOp::Add => QuadValue::Quad(p + q),
        QuadOp::Sub => QuadValue::Quad(p - q),
        QuadOp::Mul => QuadValue::Quad(p * q),
        QuadOp::Div => QuadValue::Quad(p.checked_div(q)?),
        QuadOp::Conj => QuadValue::Quad(p.conj()),
        QuadOp::Norm => QuadValue::Rat(p.norm()),
    })
}

impl From<Rat> for QuadRat {
    fn from(x: Rat) -> Self {
        QuadRat::from_rat(x)
    }
}

impl From<i64> for QuadRat {
    fn from(n: i64) -> Self {
        QuadRat::from_rat(Rat::from(n))
    }
}

impl<'a> Add<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &'a QuadRat) -> QuadRat {
        QuadRat {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl<'a> Sub<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &'a QuadRat) -> QuadRat {
        QuadRat {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl<'a> Mul<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &'a QuadRat) -> QuadRat {
        let two = Rat::from(2);
        QuadRat {
            x: &self.x * &rhs.x + two * &self.y * &rhs.y,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

impl<'a> Div<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: &'a QuadRat) -> QuadRat {
        self.checked_div(rhs).expect("division by zero in Q(sqrt2)")
    }
}

impl Add for QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: QuadRat) -> QuadRat {
        &self + &rhs
    }
}

impl Sub for QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: QuadRat) -> QuadRat {
        &self - &rhs
    }
}

impl Mul for QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: QuadRat) -> QuadRat {
        &self * &rhs
    }
}

impl Div for QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: QuadRat) -> QuadRat {
        &self / &rhs
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            x: -self.x,
            y: -self.y,
        }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt2", self.x, self.y)
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid element of Q(sqrt2) {s:?}"));
        let body = s.trim().strip_suffix("*sqrt2").ok_or_else(bad)?;
        // the separator is the last '+' not directly following a sign or '/'
        let idx = body
            .char_indices()
            .filter(|&(i, c)| c == '+' && i > 0)
            .map(|(i, _)| i)
            .next_back()
            .ok_or_else(bad)?;
        let x: Rat = body[..idx].parse()?;
        let y: Rat = body[idx + 1..].parse()?;
        Ok(QuadRat { x, y })
    }
}

impl Serialize for QuadRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Squarefree part of a nonzero rational, as an integer representative of
/// its class in ℚ*/ℚ*².
pub fn squarefree_class(q: &Rat) -> BigInt {
    assert!(!q.is_zero(), "zero has no square class");
    let n = q.numer() * q.denom();
    crate::ntheory::squarefree_part(&n)
}

/// JSON number when it fits in an `i64`, decimal string otherwise.
pub fn ser_bigint_number<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.collect_str(n),
    }
}

/// Integer `floor(p/q)` of a rational.
pub fn floor(q: &Rat) -> BigInt {
    q.numer().div_floor(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn q(s: &str) -> QuadRat {
        s.parse().unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(
            rat_arith(RatOp::Add, &r("1/2"), &r("1/3")).unwrap(),
            r("5/6")
        );
        assert_eq!(
            rat_arith(RatOp::Mul, &r("0"), &r("7/5")).unwrap(),
            Rat::zero()
        );
        // 5233·81/81 by plain integer arithmetic
        let oracle = BigInt::from(5233) * BigInt::from(81) / BigInt::from(81);
        assert_eq!(
            rat_arith(RatOp::Div, &r("5233/81"), &r("1/81")).unwrap(),
            Rat::from_int(oracle)
        );
        assert_eq!(
            rat_arith(RatOp::Div, &r("1"), &Rat::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            rat_arith(RatOp::Neg, &r("3/4"), &Rat::zero()).unwrap(),
            r("-3/4")
        );
    }

    #[test]
    fn canonical_form() {
        let a = Rat::new(6, -4).unwrap();
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert_eq!(Rat::new(0, -7).unwrap().to_string(), "0");
        assert_eq!(Rat::new(1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_squares() {
        assert_eq!(rat_is_square(&r("9/4")), Some(r("3/2")));
        // 72² = 5184 < 5233 < 5329 = 73²
        assert_eq!(72 * 72, 5184);
        assert_eq!(73 * 73, 5329);
        assert_eq!(rat_is_square(&r("5233")), None);
        assert_eq!(rat_is_square(&r("-1")), None);
        assert_eq!(rat_is_square(&Rat::zero()), Some(Rat::zero()));
    }

    #[test]
    fn quad_examples() {
        let a = q("3+-2*sqrt2");
        let b = q("3+2*sqrt2");
        assert_eq!(
            quad_arith(QuadOp::Mul, &a, &b).unwrap(),
            QuadValue::Quad(QuadRat::one())
        );
        assert_eq!(
            quad_arith(QuadOp::Norm, &b, &QuadRat::zero()).unwrap(),
            QuadValue::Rat(Rat::one())
        );
        assert_eq!(
            quad_arith(QuadOp::Conj, &q("17+-12*sqrt2"), &QuadRat::zero()).unwrap(),
            QuadValue::Quad(q("17+12*sqrt2"))
        );
        assert_eq!(
            quad_arith(QuadOp::Div, &a, &QuadRat::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(&(&a / &b) * &b, a);
    }

    #[test]
    fn quad_square_examples() {
        assert_eq!(quad_is_square(&q("17+-12*sqrt2")), Some(q("3+-2*sqrt2")));
        assert_eq!(quad_is_square(&QuadRat::from(2)), Some(QuadRat::sqrt2()));
        assert_eq!(quad_is_square(&QuadRat::from(3)), None);
        assert_eq!(quad_is_square(&QuadRat::from(4)), Some(QuadRat::from(2)));
        assert_eq!(quad_is_square(&q("-1+0*sqrt2")), None);
        // 1 + √2 has norm −1, not a square
        assert_eq!(quad_is_square(&q("1+1*sqrt2")), None);
    }

    #[test]
    fn string_forms() {
        assert_eq!(r("-10/4").to_string(), "-5/2");
        assert_eq!(q("1/2+-3/4*sqrt2").to_string(), "1/2+-3/4*sqrt2");
        assert_eq!(q("-1+-1*sqrt2"), QuadRat::new(-1, -1));
        assert!("3+4".parse::<QuadRat>().is_err());
        assert!("x/2".parse::<Rat>().is_err());
        let json = serde_json::to_string(&QuadRat::new(r("1/2"), r("-3"))).unwrap();
        assert_eq!(json, "\"1/2+-3*sqrt2\"");
    }

    #[test]
    fn real_sign_matches_float() {
        for (x, y) in [
            (3, -2),
            (-3, 2),
            (1, 1),
            (-1, -1),
            (0, 0),
            (2, -1),
            (-2, 1),
            (0, -5),
        ] {
            let approx = x as f64 + y as f64 * 2f64.sqrt();
            let expected = approx.partial_cmp(&0.0).unwrap();
            let expected = if approx.abs() < 1e-12 {
                Ordering::Equal
            } else {
                expected
            };
            assert_eq!(QuadRat::new(x, y).real_sign(), expected, "{x} {y}");
        }
    }

    #[test]
    fn square_classes() {
        assert_eq!(squarefree_class(&r("72")), BigInt::from(2));
        assert_eq!(squarefree_class(&r("-8")), BigInt::from(-2));
        assert_eq!(squarefree_class(&r("3/4")), BigInt::from(3));
        assert_eq!(squarefree_class(&r("-1/6")), BigInt::from(-6));
    }
}
