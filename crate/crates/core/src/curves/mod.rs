//! Genus-one quartics, Weierstrass curves over ℚ and their arithmetic.
//!
//! Curves are always stored in long Weierstrass form
//! `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` so that every change of
//! coordinates, including the ones inside Tate's algorithm, goes through the
//! same [`WeierstrassIso`] code path.

mod integral;
mod tate;
mod torsion;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::Rat;
use crate::Error;

pub use integral::bounded_integral_points;
pub use tate::{conductor, minimal_model, ConductorReport, LocalReduction};
pub(crate) use torsion::{integer_roots_of_cubic, monic_cubic_model};
pub use torsion::{point_order, torsion_subgroup, TorsionReport};

/// `v² = qa·y⁴ + qb·y³ + qc·y² + qd·y + qe`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuarticModel {
    pub qa: Rat,
    pub qb: Rat,
    pub qc: Rat,
    pub qd: Rat,
    pub qe: Rat,
}

impl QuarticModel {
    pub fn new(coeffs: [i64; 5]) -> Self {
        let [qa, qb, qc, qd, qe] = coeffs.map(Rat::from);
        QuarticModel { qa, qb, qc, qd, qe }
    }

    /// The fixed quartic `v² = 16y⁴ + 136y² + 1`.
    pub fn fixed() -> Self {
        QuarticModel::new([16, 0, 136, 0, 1])
    }

    pub fn eval(&self, y: &Rat) -> Rat {
        [&self.qa, &self.qb, &self.qc, &self.qd, &self.qe]
            .into_iter()
            .fold(Rat::zero(), |acc, c| acc * y + c)
    }

    /// Discriminant of the binary quartic, `(4I³ − J²)/27`; nonzero exactly
    /// when the quartic has no repeated root.
    pub fn discriminant(&self) -> Rat {
        let (i, j) = quartic_invariants(self);
        (Rat::from(4) * i.pow(3) - j.pow(2)) / Rat::from(27)
    }
}

/// The classical invariants `I = 12ae − 3bd + c²` and
/// `J = 72ace + 9bcd − 27ad² − 27eb² − 2c³`.
pub fn quartic_invariants(q: &QuarticModel) -> (Rat, Rat) {
    let (a, b, c, d, e) = (&q.qa, &q.qb, &q.qc, &q.qd, &q.qe);
    let k = |n: i64| Rat::from(n);
    let i = k(12) * a * e - k(3) * b * d + c * c;
    let j = k(72) * a * c * e + k(9) * b * c * d
        - k(27) * a * d * d
        - k(27) * e * b * b
        - k(2) * c * c * c;
    (i, j)
}

/// `Y² = X³ − 27I·X − 27J`
pub fn jacobian_model(i: &Rat, j: &Rat) -> Result<EllCurve, Error> {
    let k = Rat::from(-27);
    EllCurve::new([Rat::zero(), Rat::zero(), Rat::zero(), &k * i, &k * j])
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EllCurve {
    pub a1: Rat,
    pub a2: Rat,
    pub a3: Rat,
    pub a4: Rat,
    pub a6: Rat,
}

/// Serialized as `[a1, a2, a3, a4, a6]`.
impl Serialize for EllCurve {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(5))?;
        for a in self.coeffs() {
            seq.serialize_element(a)?;
        }
        seq.end()
    }
}

impl fmt::Display for EllCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl fmt::Debug for EllCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl EllCurve {
    /// Rejects singular equations.
    pub fn new(coeffs: [Rat; 5]) -> Result<Self, Error> {
        let e = EllCurve::new_unchecked(coeffs);
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    /// Any Weierstrass equation, singular or not.
    pub fn new_unchecked(coeffs: [Rat; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = coeffs;
        EllCurve { a1, a2, a3, a4, a6 }
    }

    pub fn from_ints(coeffs: [i64; 5]) -> Result<Self, Error> {
        EllCurve::new(coeffs.map(Rat::from))
    }

    /// `Y² = X(X − 8)(X − 9) = X³ − 17X² + 72X`
    pub fn e_model() -> Self {
        EllCurve::from_ints([0, -17, 0, 72, 0]).unwrap()
    }

    /// `Y² = X³ − 504576X + 131604480`, the invariant-theoretic model.
    pub fn e0_model() -> Self {
        EllCurve::from_ints([0, 0, 0, -504576, 131604480]).unwrap()
    }

    pub fn coeffs(&self) -> [&Rat; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|a| a.is_integer())
    }

    pub fn b2(&self) -> Rat {
        &self.a1 * &self.a1 + Rat::from(4) * &self.a2
    }

    pub fn b4(&self) -> Rat {
        &self.a1 * &self.a3 + Rat::from(2) * &self.a4
    }

    pub fn b6(&self) -> Rat {
        &self.a3 * &self.a3 + Rat::from(4) * &self.a6
    }

    pub fn b8(&self) -> Rat {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1 * a1 * a6 + Rat::from(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> Rat {
        let b2 = self.b2();
        &b2 * &b2 - Rat::from(24) * self.b4()
    }

    pub fn c6(&self) -> Rat {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + Rat::from(36) * &b2 * self.b4() - Rat::from(216) * self.b6()
    }

    pub fn discriminant(&self) -> Rat {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - Rat::from(8) * b4.pow(3) - Rat::from(27) * &b6 * &b6
            + Rat::from(9) * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> Result<Rat, Error> {
        let disc = self.discriminant();
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(self.c4().pow(3) / disc)
    }

    /// Right side minus left side of the equation at an affine point.
    fn defect(&self, x: &Rat, y: &Rat) -> Rat {
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        rhs - lhs
    }

    pub fn contains(&self, p: &EllPoint) -> bool {
        match p {
            EllPoint::Infinity => true,
            EllPoint::Affine { x, y } => self.defect(x, y).is_zero(),
        }
    }

    pub fn check(&self, p: &EllPoint) -> Result<(), Error> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve(p.to_string()))
        }
    }

    /// Affine point from integer coordinates, checked against the equation.
    pub fn point(&self, x: i64, y: i64) -> Result<EllPoint, Error> {
        let p = EllPoint::affine(Rat::from(x), Rat::from(y));
        self.check(&p)?;
        Ok(p)
    }

    pub fn neg(&self, p: &EllPoint) -> EllPoint {
        match p {
            EllPoint::Infinity => EllPoint::Infinity,
            EllPoint::Affine { x, y } => EllPoint::affine(x.clone(), -y - &self.a1 * x - &self.a3),
        }
    }

    /// Chord-and-tangent addition; inputs are assumed to be on the curve.
    pub fn add(&self, p: &EllPoint, q: &EllPoint) -> EllPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (EllPoint::Infinity, _) => return q.clone(),
            (_, EllPoint::Infinity) => return p.clone(),
            (EllPoint::Affine { x: x1, y: y1 }, EllPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1 + y2 + &self.a1 * x2 + &self.a3;
            if denom.is_zero() {
                return EllPoint::Infinity;
            }
            // tangent; here y1 = y2 so denom = 2y1 + a1x1 + a3
            let num =
                Rat::from(3) * x1 * x1 + Rat::from(2) * &self.a2 * x1 + &self.a4 - &self.a1 * y1;
            let nu_num = -(x1 * x1 * x1) + &self.a4 * x1 + Rat::from(2) * &self.a6 - &self.a3 * y1;
            (&num / &denom, &nu_num / &denom)
        } else {
            let dx = x2 - x1;
            ((y2 - y1) / dx.clone(), (y1 * x2 - y2 * x1) / dx)
        };
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = -((&lambda + &self.a1) * &x3) - nu - &self.a3;
        EllPoint::affine(x3, y3)
    }

    pub fn double(&self, p: &EllPoint) -> EllPoint {
        self.add(p, p)
    }

    /// `n·P` by double-and-add; negative `n` multiplies the negation.
    pub fn mul(&self, p: &EllPoint, n: i64) -> EllPoint {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = EllPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            k >>= 1;
        }
        acc
    }

    /// The curve obtained by the change of variables `iso`.
    pub fn transform(&self, iso: &WeierstrassIso) -> EllCurve {
        let WeierstrassIso { u, r, s, t } = iso;
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let k = |n: i64| Rat::from(n);
        let na1 = a1 + &(k(2) * s);
        let na2 = a2 - &(s * a1) + k(3) * r - s * s;
        let na3 = a3 + &(r * a1) + k(2) * t;
        let na4 = a4 - &(s * a3) + k(2) * r * a2 - (t + &(r * s)) * a1.clone() + k(3) * r * r
            - k(2) * s * t;
        let na6 = a6 + &(r * a4) + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        EllCurve::new_unchecked([
            na1 / u.clone(),
            na2 / u.pow(2),
            na3 / u.pow(3),
            na4 / u.pow(4),
            na6 / u.pow(6),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Neg,
    Double,
    MulByN,
}

/// Group law entry point with on-curve validation. `Add` uses `q`, `MulByN`
/// uses `n`; the others ignore both.
pub fn ell_group(
    op: GroupOp,
    e: &EllCurve,
    p: &EllPoint,
    q: Option<&EllPoint>,
    n: i64,
) -> Result<EllPoint, Error> {
    e.check(p)?;
    Ok(match op {
        GroupOp::Add => {
            let q = q.ok_or_else(|| Error::NotOnCurve("missing second point".into()))?;
            e.check(q)?;
            e.add(p, q)
        }
        GroupOp::Neg => e.neg(p),
        GroupOp::Double => e.double(p),
        GroupOp::MulByN => e.mul(p, n),
    })
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EllPoint {
    Infinity,
    Affine { x: Rat, y: Rat },
}

impl EllPoint {
    pub fn affine(x: Rat, y: Rat) -> Self {
        EllPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        EllPoint::affine(Rat::from(x), Rat::from(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EllPoint::Infinity)
    }

    pub fn x(&self) -> Option<&Rat> {
        match self {
            EllPoint::Infinity => None,
            EllPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rat> {
        match self {
            EllPoint::Infinity => None,
            EllPoint::Affine { y, .. } => Some(y),
        }
    }
}

impl fmt::Display for EllPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllPoint::Infinity => write!(f, "inf"),
            EllPoint::Affine { x, y } => write!(f, "[{x}, {y}]"),
        }
    }
}

impl fmt::Debug for EllPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `"inf"` or `"[X, Y]"`.
impl Serialize for EllPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The change of variables `x = u²x' + r`, `y = u³y' + u²s·x' + t` taking a
/// curve in `(x, y)` to one in `(x', y')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassIso {
    pub u: Rat,
    pub r: Rat,
    pub s: Rat,
    pub t: Rat,
}

impl WeierstrassIso {
    pub fn new(u: Rat, r: Rat, s: Rat, t: Rat) -> Self {
        assert!(!u.is_zero(), "scaling factor must be nonzero");
        WeierstrassIso { u, r, s, t }
    }

    pub fn identity() -> Self {
        WeierstrassIso::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn translation(r: Rat, s: Rat, t: Rat) -> Self {
        WeierstrassIso::new(Rat::one(), r, s, t)
    }

    pub fn scaling(u: Rat) -> Self {
        WeierstrassIso::new(u, Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Image of a point of the source curve.
    pub fn apply(&self, p: &EllPoint) -> EllPoint {
        match p {
            EllPoint::Infinity => EllPoint::Infinity,
            EllPoint::Affine { x, y } => {
                let u2 = self.u.pow(2);
                let xp = (x - &self.r) / u2;
                let yp = (y - &(&self.s * &(x - &self.r)) - self.t.clone()) / self.u.pow(3);
                EllPoint::affine(xp, yp)
            }
        }
    }

    pub fn inverse(&self) -> WeierstrassIso {
        let WeierstrassIso { u, r, s, t } = self;
        let ui = u.recip().unwrap();
        WeierstrassIso::new(
            ui.clone(),
            -(r * &ui.pow(2)),
            -(s * &ui),
            (r * s - t.clone()) * ui.pow(3),
        )
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &WeierstrassIso) -> WeierstrassIso {
        let u1 = &self.u;
        let u1sq = u1.pow(2);
        WeierstrassIso::new(
            u1 * &next.u,
            &self.r + &(&u1sq * &next.r),
            &self.s + &(u1 * &next.s),
            &self.t + &(u1.pow(3) * &next.t) + &self.s * &u1sq * &next.r,
        )
    }
}

/// `x = 12²X − 816`, `y = 12³Y`, mapping `E₀` to `E`.
pub fn iso_e0_to_e() -> WeierstrassIso {
    WeierstrassIso::new(Rat::from(12), Rat::from(-816), Rat::zero(), Rat::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoDirection {
    E0ToE,
    EToE0,
}

/// Transport a point between `E₀` and `E`, rejecting points not on the
/// source curve.
pub fn iso_e0_e(p: &EllPoint, direction: IsoDirection) -> Result<EllPoint, Error> {
    let (source, iso) = match direction {
        IsoDirection::E0ToE => (EllCurve::e0_model(), iso_e0_to_e()),
        IsoDirection::EToE0 => (EllCurve::e_model(), iso_e0_to_e().inverse()),
    };
    source.check(p)?;
    Ok(iso.apply(p))
}

/// Integer coefficients of an integral curve.
pub(crate) fn integer_coeffs(e: &EllCurve) -> Result<[BigInt; 5], Error> {
    let mut out: [BigInt; 5] = Default::default();
    for (slot, a) in out.iter_mut().zip(e.coeffs()) {
        *slot = a.to_integer().ok_or(Error::NonIntegralModel)?;
    }
    Ok(out)
}

/// An integral model, with the isomorphism from `e` onto it.
pub fn integral_model(e: &EllCurve) -> (EllCurve, WeierstrassIso) {
    use num_integer::Integer;
    let d = e
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let iso = WeierstrassIso::scaling(Rat::from(d).recip().unwrap());
    (e.transform(&iso), iso)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn invariants_of_the_fixed_quartic() {
        let (i, j) = quartic_invariants(&QuarticModel::fixed());
        assert_eq!(i, Rat::from(18688));
        assert_eq!(j, Rat::from(-4874240));
        assert_eq!(
            quartic_invariants(&QuarticModel::new([1, 0, 0, 0, 1])),
            (r("12"), r("0"))
        );
        assert_eq!(
            quartic_invariants(&QuarticModel::new([0, 0, 1, 0, 0])),
            (r("1"), r("-2"))
        );
        assert!(!QuarticModel::fixed().discriminant().is_zero());
    }

    #[test]
    fn jacobian_models() {
        let e0 = jacobian_model(&r("18688"), &r("-4874240")).unwrap();
        assert_eq!(e0, EllCurve::e0_model());
        assert_eq!(
            jacobian_model(&r("0"), &r("-4")).unwrap(),
            EllCurve::from_ints([0, 0, 0, 0, 108]).unwrap()
        );
        assert_eq!(
            jacobian_model(&r("3"), &r("0")).unwrap(),
            EllCurve::from_ints([0, 0, 0, -81, 0]).unwrap()
        );
        // I = 0, J = 0 gives y² = x³
        assert_eq!(jacobian_model(&r("0"), &r("0")), Err(Error::SingularCurve));
    }

    #[test]
    fn j_invariants() {
        let expected = r("1556068/81");
        assert_eq!(EllCurve::e0_model().j_invariant().unwrap(), expected);
        assert_eq!(EllCurve::e_model().j_invariant().unwrap(), expected);
        assert_eq!(
            EllCurve::from_ints([0, 0, 0, 0, 1])
                .unwrap()
                .j_invariant()
                .unwrap(),
            Rat::zero()
        );
        let cusp = EllCurve::new_unchecked([0, 0, 0, 0, 0].map(Rat::from));
        assert_eq!(cusp.j_invariant(), Err(Error::SingularCurve));
    }

    #[test]
    fn discriminants() {
        // 16·(0−8)²(0−9)²(8−9)²
        assert_eq!(16 * 64 * 81, 82944);
        assert_eq!(EllCurve::e_model().discriminant(), Rat::from(82944));
        let ratio = EllCurve::e0_model().discriminant() / EllCurve::e_model().discriminant();
        assert_eq!(ratio, Rat::from(12).pow(12));
        let cusp = EllCurve::new_unchecked([0, 0, 0, 0, 0].map(Rat::from));
        assert_eq!(cusp.discriminant(), Rat::zero());
        assert_eq!(
            EllCurve::from_ints([0, 1, 0, -24, 36])
                .unwrap()
                .discriminant(),
            Rat::from(82944)
        );
    }

    #[test]
    fn explicit_isomorphism() {
        let e = EllCurve::e_model();
        let e0 = EllCurve::e0_model();
        assert_eq!(e0.transform(&iso_e0_to_e()), e);
        assert_eq!(e.transform(&iso_e0_to_e().inverse()), e0);

        // (−816)³ − 504576·(−816) + 131604480 = 0
        let x: i128 = -816;
        assert_eq!(x * x * x - 504576 * x + 131604480, 0);
        assert_eq!(
            iso_e0_e(&EllPoint::from_ints(0, 0), IsoDirection::EToE0).unwrap(),
            EllPoint::from_ints(-816, 0)
        );
        assert_eq!(
            iso_e0_e(&EllPoint::from_ints(6, 6), IsoDirection::EToE0).unwrap(),
            EllPoint::from_ints(48, 10368)
        );
        assert!(e0.contains(&EllPoint::from_ints(48, 10368)));
        assert_eq!(
            iso_e0_e(&EllPoint::Infinity, IsoDirection::E0ToE).unwrap(),
            EllPoint::Infinity
        );
        assert!(iso_e0_e(&EllPoint::from_ints(1, 1), IsoDirection::EToE0).is_err());
    }

    #[test]
    fn doubling_order_four_points() {
        let e = EllCurve::e_model();
        let nine = EllPoint::from_ints(9, 0);
        for p in [(6, 6), (12, 12), (6, -6), (12, -12)] {
            let p = e.point(p.0, p.1).unwrap();
            assert_eq!(ell_group(GroupOp::Double, &e, &p, None, 0).unwrap(), nine);
            assert_eq!(e.mul(&p, 4), EllPoint::Infinity);
            let minus = ell_group(GroupOp::Neg, &e, &p, None, 0).unwrap();
            assert_eq!(e.add(&p, &minus), EllPoint::Infinity);
        }
        assert!(ell_group(GroupOp::Double, &e, &EllPoint::from_ints(1, 1), None, 0).is_err());
    }

    #[test]
    fn iso_composition_and_inverse() {
        let iso = WeierstrassIso::new(r("2"), r("1/3"), r("-1"), r("5/2"));
        let e = EllCurve::from_ints([1, -1, 1, -5, 9]).unwrap();
        let back = e.transform(&iso).transform(&iso.inverse());
        assert_eq!(back, e);
        let other = WeierstrassIso::new(r("1/5"), r("2"), r("3"), r("-1"));
        assert_eq!(
            e.transform(&iso.then(&other)),
            e.transform(&iso).transform(&other)
        );
        let p = e.point(3, 2).unwrap();
        let q = iso.then(&other).apply(&p);
        assert!(e.transform(&iso.then(&other)).contains(&q));
        assert_eq!(other.apply(&iso.apply(&p)), q);
    }
}
