//! Dense univariate polynomials over ℚ and ℚ(√2).
//!
//! The scalar ring is a type parameter, so mixing rings is a compile error
//! rather than a runtime check; [`Poly::embed`] lifts ℚ[t] into ℚ(√2)[t].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::{QuadRat, Rat};
use crate::Error;

/// Exact field arithmetic needed by the polynomial routines.
pub trait Scalar: Clone + PartialEq + fmt::Display + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, Error>;
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, Error> {
        self.recip()
    }
}

impl Scalar for QuadRat {
    fn zero() -> Self {
        QuadRat::zero()
    }
    fn one() -> Self {
        QuadRat::one()
    }
    fn is_zero(&self) -> bool {
        QuadRat::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, Error> {
        QuadRat::one().checked_div(self)
    }
}

/// Coefficients in ascending degree; the leading coefficient is nonzero
/// unless the polynomial is zero, which has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·tⁿ`.
    pub fn monomial(c: F, n: usize) -> Self {
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    /// The identity polynomial `t`.
    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn monic(&self) -> Result<Self, Error> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(&lead.inv()?))
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut k = F::zero();
                for _ in 0..i {
                    k = k.add(&F::one());
                }
                c.mul(&k)
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Euclidean division over the field: `self = q·d + r` with
    /// `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), Error> {
        let dlead_inv = d.leading().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&dlead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Even-polynomial substitution: `g` with `g(t²) = self(t)`.
    pub fn to_even_form(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// `self(t²)`
    pub fn from_even_form(&self) -> Self {
        let mut coeffs = Vec::with_capacity(2 * self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.clone());
            coeffs.push(F::zero());
        }
        Poly::new(coeffs)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Rat> {
    /// ℚ[t] ⊂ ℚ(√2)[t]
    pub fn embed(&self) -> Poly<QuadRat> {
        self.map(|c| QuadRat::from_rat(c.clone()))
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from(c)).collect())
    }
}

impl Poly<QuadRat> {
    /// Galois conjugation √2 ↦ −√2 applied coefficientwise.
    pub fn conj(&self) -> Self {
        self.map(QuadRat::conj)
    }

    /// The ℚ[t] polynomial, when every coefficient is rational.
    pub fn to_rational(&self) -> Option<Poly<Rat>> {
        self.coeffs
            .iter()
            .all(QuadRat::is_rational)
            .then(|| self.map(|c| c.x.clone()))
    }
}

/// Monic gcd over a field by the Euclidean algorithm.
pub fn poly_gcd<F: Scalar>(f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>, Error> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    a.monic()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith<F: Scalar>(op: PolyOp, f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    match op {
        PolyOp::Add => f + g,
        PolyOp::Sub => f - g,
        PolyOp::Mul => f * g,
    }
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.map(Scalar::neg)
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        &self + &rhs
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        &self - &rhs
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        &self * &rhs
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ascending coefficient array of scalar strings.
impl<F: Scalar> Serialize for Poly<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::from_ints(c)
    }

    #[test]
    fn products() {
        assert_eq!(
            poly_arith(PolyOp::Mul, &p(&[1, 0, 1]), &p(&[-1, 0, 1])),
            p(&[-1, 0, 0, 0, 1])
        );
        assert_eq!(&p(&[3, 4]) * &Poly::zero(), Poly::zero());
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn gcds() {
        assert_eq!(
            poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(),
            p(&[-1, 1])
        );
        let f = p(&[4, 0, 2]);
        assert_eq!(poly_gcd(&f, &f).unwrap(), p(&[2, 0, 1]));
        assert_eq!(poly_gcd(&f, &Poly::zero()).unwrap(), p(&[2, 0, 1]));
        assert_eq!(
            poly_gcd::<Rat>(&Poly::zero(), &Poly::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn even_forms() {
        let f = p(&[16, 0, -72, 0, 1, 0, 18, 0, 1]);
        let g = f.to_even_form().unwrap();
        assert_eq!(g, p(&[16, -72, 1, 18, 1]));
        assert_eq!(g.from_even_form(), f);
        assert_eq!(p(&[0, 0, 0, 1]).to_even_form(), None);
    }

    #[test]
    fn evaluation() {
        let f: Poly<QuadRat> = p(&[-2, 0, 1]).embed();
        assert_eq!(f.eval(&QuadRat::sqrt2()), QuadRat::zero());
        assert_eq!(
            p(&[16, 0, -72, 0, 1, 0, 18, 0, 1]).eval(&Rat::zero()),
            Rat::from(16)
        );
        assert_eq!(Poly::<Rat>::x().eval(&Rat::from(5)), Rat::from(5));
    }

    #[test]
    fn division() {
        let (q, r) = p(&[1, 2, 3, 4]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(&(&q * &p(&[1, 1])) + &r, p(&[1, 2, 3, 4]));
        assert!(r.degree().unwrap_or(0) < 1);
        assert_eq!(
            p(&[1, 1]).div_rem(&Poly::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[0, 2, 0, 3]).derivative(), p(&[2, 0, 9]));
    }

    #[test]
    fn serialization() {
        let f = Poly::new(vec![Rat::new(1, 2).unwrap(), Rat::from(-3)]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"["1/2","-3"]"#);
    }

    fn small_poly() -> impl Strategy<Value = Poly<Rat>> {
        prop::collection::vec((-20i64..20, 1i64..4), 0..5).prop_map(|cs| {
            Poly::new(
                cs.into_iter()
                    .map(|(n, d)| Rat::new(n, d).unwrap())
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn gcd_divides_both(f in small_poly(), g in small_poly(), h in small_poly()) {
            // seed a shared factor so nontrivial gcds actually occur
            let (f, g) = (&f * &h, &g * &h);
            prop_assume!(!(f.is_zero() && g.is_zero()));
            let d = poly_gcd(&f, &g).unwrap();
            prop_assert!(f.exact_div(&d).is_some());
            prop_assert!(g.exact_div(&d).is_some());
            if !h.is_zero() {
                prop_assert!(d.exact_div(&h.monic().unwrap()).is_some());
            }
        }

        #[test]
        fn ring_laws(f in small_poly(), g in small_poly(), h in small_poly(), x in -9i64..9) {
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            let x = Rat::from(x);
            prop_assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
        }

        #[test]
        fn even_form_substitution(g in small_poly(), x in -9i64..9) {
            let f = g.from_even_form();
            let back = f.to_even_form().unwrap();
            let x = Rat::from(x);
            prop_assert_eq!(back.eval(&(&x * &x)), f.eval(&x));
        }
    }
}
