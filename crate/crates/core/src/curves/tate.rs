//! Tate's algorithm, conductors and global minimal models.
//!
//! The local loop follows the classical step sequence: move the singular
//! point of the reduction to the origin, test the multiplicative case, then
//! walk types II, III, IV, I0*, In*, IV*, III*, II*, and rescale when the
//! model turns out not to be minimal. Conductor exponents come from Ogg's
//! formula in the per-type form `f = v(Δ) + 1 − m`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{integer_coeffs, integral_model, EllCurve};
use crate::arith::Rat;
use crate::ntheory::{legendre, mod_inverse, modp, prime_divisors_u64, valuation};
use crate::Error;

/// Integral model with `BigInt` coefficients; all changes of variables
/// inside the local loop have `u = 1` and integer `r, s, t`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IntModel {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
    a4: BigInt,
    a6: BigInt,
}

impl IntModel {
    fn from_curve(e: &EllCurve) -> Result<Self, Error> {
        let [a1, a2, a3, a4, a6] = integer_coeffs(e)?;
        Ok(IntModel { a1, a2, a3, a4, a6 })
    }

    fn to_curve(&self) -> EllCurve {
        EllCurve::new_unchecked([&self.a1, &self.a2, &self.a3, &self.a4, &self.a6].map(Rat::from))
    }

    fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    fn b4(&self) -> BigInt {
        &self.a1 * &self.a3 + 2 * &self.a4
    }

    fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    fn b8(&self) -> BigInt {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }

    fn c6(&self) -> BigInt {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }

    fn disc(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// `x = x' + r`, `y = y' + s·x' + t`.
    fn translate(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> IntModel {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        IntModel {
            a1: a1 + 2 * s,
            a2: a2 - s * a1 + 3 * r - s * s,
            a3: a3 + r * a1 + 2 * t,
            a4: a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
            a6: a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1,
        }
    }

    /// `a_i ↦ a_i / p^i`; the caller guarantees divisibility.
    fn scale_down(&self, p: &BigInt) -> IntModel {
        let div = |a: &BigInt, k: u32| {
            let q = p.pow(k);
            debug_assert!(a.is_multiple_of(&q));
            a / q
        };
        IntModel {
            a1: div(&self.a1, 1),
            a2: div(&self.a2, 2),
            a3: div(&self.a3, 3),
            a4: div(&self.a4, 4),
            a6: div(&self.a6, 6),
        }
    }
}

fn divides(p: &BigInt, k: u32, n: &BigInt) -> bool {
    n.is_multiple_of(&p.pow(k))
}

/// Reduction data at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReduction {
    pub prime: u64,
    /// Kodaira symbol, e.g. `"I4"`, `"I1*"`, `"III"`.
    pub kodaira: String,
    /// `None` unless the reduction is multiplicative.
    pub split: Option<bool>,
    pub conductor_exponent: u32,
    /// Valuation of the minimal discriminant.
    pub disc_valuation: u32,
    /// How many times the model had to be rescaled by `p` to reach a
    /// minimal one.
    pub rescalings: u32,
}

/// Singular point of the reduction mod `p`, lifted to integers `(r, t)`.
fn singular_point(m: &IntModel, p: u64) -> (BigInt, BigInt) {
    if p <= 3 {
        // brute force over F_p × F_p: F = F_x = F_y = 0
        let pb = BigInt::from(p);
        let red = |a: &BigInt| modp(a, p) as i64;
        let (a1, a2, a3, a4, a6) = (red(&m.a1), red(&m.a2), red(&m.a3), red(&m.a4), red(&m.a6));
        let pi = p as i64;
        for x in 0..pi {
            for y in 0..pi {
                let f = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6;
                let fx = a1 * y - 3 * x * x - 2 * a2 * x - a4;
                let fy = 2 * y + a1 * x + a3;
                if f.rem_euclid(pi) == 0 && fx.rem_euclid(pi) == 0 && fy.rem_euclid(pi) == 0 {
                    return (BigInt::from(x), BigInt::from(y));
                }
            }
        }
        unreachable!("reduction mod {pb} is singular but no singular point found");
    }
    // p ≥ 5: the double root of 4x³ + b2x² + 2b4x + b6, expressed through c4, c6
    let c4 = modp(&m.c4(), p);
    let b2 = modp(&m.b2(), p);
    let inv = |a: u64| mod_inverse(a % p, p).expect("unit mod p");
    let r = if c4 == 0 {
        // cusp: triple root −b2/12
        (p - b2) % p * inv(12) % p
    } else {
        let c6 = modp(&m.c6(), p);
        let num = (c6 as u128 + b2 as u128 * c4 as u128) % p as u128;
        let num = (p as u128 - num) % p as u128;
        (num * inv(12 * c4 % p) as u128 % p as u128) as u64
    };
    let a1 = modp(&m.a1, p) as u128;
    let a3 = modp(&m.a3, p) as u128;
    let pp = p as u128;
    let t = (pp - (a1 * r as u128 + a3) % pp) % pp * inv(2) as u128 % pp;
    (BigInt::from(r), BigInt::from(t as u64))
}

/// Roots mod `p` of `a·X² + b·X + c` with `a` a unit: `Ok(())` if the two
/// roots are distinct, `Err(root)` with the double root otherwise.
fn quadratic_roots(a: &BigInt, b: &BigInt, c: &BigInt, p: u64) -> Result<(), BigInt> {
    if p == 2 {
        if b.is_odd() {
            return Ok(());
        }
        // a odd, b even: a·X² + c ≡ X + c, root X ≡ c
        return Err(BigInt::from(modp(c, 2)));
    }
    let disc = modp(&(b * b - 4 * a * c), p);
    if disc != 0 {
        return Ok(());
    }
    let inv2a = mod_inverse(modp(&(2 * a), p), p).expect("unit");
    let root = (p - modp(b, p)) % p;
    Err(BigInt::from(
        (root as u128 * inv2a as u128 % p as u128) as u64,
    ))
}

fn local_reduction(model: &IntModel, p: u64) -> (LocalReduction, IntModel) {
    let pb = BigInt::from(p);
    let mut m = model.clone();
    let mut rescalings = 0;
    loop {
        let n = valuation(&m.disc(), p).expect("nonsingular curve");
        let done = |kodaira: String, split: Option<bool>, f: u32, m: IntModel| {
            (
                LocalReduction {
                    prime: p,
                    kodaira,
                    split,
                    conductor_exponent: f,
                    disc_valuation: n,
                    rescalings,
                },
                m,
            )
        };
        if n == 0 {
            return done("I0".into(), None, 0, m);
        }

        let (r, t) = singular_point(&m, p);
        m = m.translate(&r, &BigInt::zero(), &t);
        debug_assert!(divides(&pb, 1, &m.a3) && divides(&pb, 1, &m.a4) && divides(&pb, 1, &m.a6));

        if !divides(&pb, 1, &m.b2()) {
            // tangent cone T² + a1·T − a2; splits iff its discriminant b2 is a square
            let split = if p == 2 {
                m.a2.is_even()
            } else {
                legendre(&m.b2(), p) == 1
            };
            return done(format!("I{n}"), Some(split), 1, m);
        }
        if !divides(&pb, 2, &m.a6) {
            return done("II".into(), None, n, m);
        }
        if !divides(&pb, 3, &m.b8()) {
            return done("III".into(), None, n - 1, m);
        }
        if !divides(&pb, 3, &m.b6()) {
            return done("IV".into(), None, n - 2, m);
        }

        // p | a1, a2; p² | a3, a4; p³ | a6
        let (s, t) = if p == 2 {
            let s = BigInt::from(modp(&m.a2, 2));
            let t = 2 * BigInt::from(modp(&(&m.a6 / 4), 2));
            (s, t)
        } else {
            let inv2 = mod_inverse(2, p).unwrap() as u128;
            let s = (p as u128 - modp(&m.a1, p) as u128) % p as u128 * inv2 % p as u128;
            let a3p = &m.a3 / &pb;
            let tq = (p as u128 - modp(&a3p, p) as u128) % p as u128 * inv2 % p as u128;
            (BigInt::from(s as u64), BigInt::from(tq as u64) * &pb)
        };
        m = m.translate(&BigInt::zero(), &s, &t);
        debug_assert!(divides(&pb, 1, &m.a1) && divides(&pb, 1, &m.a2));
        debug_assert!(divides(&pb, 2, &m.a3) && divides(&pb, 2, &m.a4) && divides(&pb, 3, &m.a6));

        // P(T) = T³ + b·T² + c·T + d
        let b = &m.a2 / &pb;
        let c = &m.a4 / pb.pow(2);
        let d = &m.a6 / pb.pow(3);
        let w = 27 * &d * &d - &b * &b * &c * &c + 4 * &b * &b * &b * &d - 18 * &b * &c * &d
            + 4 * &c * &c * &c;
        let x = 3 * &c - &b * &b;

        if !divides(&pb, 1, &w) {
            return done("I0*".into(), None, n - 4, m);
        }

        if !divides(&pb, 1, &x) {
            // one simple and one double root; move the double root to 0
            let alpha = match p {
                2 => BigInt::from(modp(&c, 2)),
                3 => BigInt::from(modp(&(&b * &c), 3)),
                _ => {
                    let num = modp(&(&b * &c - 9 * &d), p) as u128;
                    let inv = mod_inverse(modp(&(2 * &x), p), p).unwrap() as u128;
                    BigInt::from((num * inv % p as u128) as u64)
                }
            };
            m = m.translate(&(alpha * &pb), &BigInt::zero(), &BigInt::zero());

            // alternate quadratics in Y and X until one has distinct roots
            let mut k = 2u32;
            let mut steps = 1u32;
            loop {
                let qb = &m.a3 / pb.pow(k);
                let qc = -(&m.a6 / pb.pow(2 * k));
                match quadratic_roots(&BigInt::one(), &qb, &qc, p) {
                    Ok(()) => break,
                    Err(y0) => m = m.translate(&BigInt::zero(), &BigInt::zero(), &(y0 * pb.pow(k))),
                }
                steps += 1;

                let qa = &m.a2 / &pb;
                let qb = &m.a4 / pb.pow(k + 1);
                let qc = &m.a6 / pb.pow(2 * k + 1);
                match quadratic_roots(&qa, &qb, &qc, p) {
                    Ok(()) => break,
                    Err(x0) => {
                        m = m.translate(&(x0 * pb.pow(k + 1)), &BigInt::zero(), &BigInt::zero())
                    }
                }
                steps += 1;
                k += 1;
            }
            return done(format!("I{steps}*"), None, n - 4 - steps, m);
        }

        // triple root; move it to 0
        let alpha = if p == 3 {
            BigInt::from(modp(&(-&d), 3))
        } else {
            let inv3 = mod_inverse(3 % p, p).unwrap() as u128;
            BigInt::from(((p as u128 - modp(&b, p) as u128) % p as u128 * inv3 % p as u128) as u64)
        };
        m = m.translate(&(alpha * &pb), &BigInt::zero(), &BigInt::zero());
        debug_assert!(divides(&pb, 2, &m.a2) && divides(&pb, 3, &m.a4) && divides(&pb, 4, &m.a6));

        let qb = &m.a3 / pb.pow(2);
        let qc = -(&m.a6 / pb.pow(4));
        match quadratic_roots(&BigInt::one(), &qb, &qc, p) {
            Ok(()) => return done("IV*".into(), None, n - 6, m),
            Err(y0) => m = m.translate(&BigInt::zero(), &BigInt::zero(), &(y0 * pb.pow(2))),
        }
        if !divides(&pb, 4, &m.a4) {
            return done("III*".into(), None, n - 7, m);
        }
        if !divides(&pb, 6, &m.a6) {
            return done("II*".into(), None, n - 8, m);
        }
        m = m.scale_down(&pb);
        rescalings += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConductorReport {
    #[serde(serialize_with = "crate::arith::ser_bigint_number")]
    pub conductor: BigInt,
    #[serde(serialize_with = "crate::arith::ser_bigint_number")]
    pub minimal_discriminant: BigInt,
    pub local: Vec<LocalReduction>,
}

/// Conductor by Tate's algorithm at every prime dividing the discriminant
/// of an integral model.
pub fn conductor(e: &EllCurve) -> Result<ConductorReport, Error> {
    let disc = e.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let (integral, _) = integral_model(e);
    let model = IntModel::from_curve(&integral)?;
    let mut conductor = BigInt::one();
    let mut minimal_discriminant = model.disc();
    let mut local = Vec::new();
    for p in prime_divisors_u64(&model.disc()) {
        let (red, _) = local_reduction(&model, p);
        conductor *= BigInt::from(p).pow(red.conductor_exponent);
        minimal_discriminant /= BigInt::from(p).pow(12 * red.rescalings);
        local.push(red);
    }
    Ok(ConductorReport {
        conductor,
        minimal_discriminant,
        local,
    })
}

/// The reduced global minimal model (`a1, a3 ∈ {0, 1}`, `a2 ∈ {−1, 0, 1}`).
///
/// The scaling `u` is read off from the local rescalings; the model itself
/// is rebuilt from `c4/u⁴` and `c6/u⁶`.
pub fn minimal_model(e: &EllCurve) -> Result<EllCurve, Error> {
    let report = conductor(e)?;
    let (integral, _) = integral_model(e);
    let model = IntModel::from_curve(&integral)?;
    let u: BigInt = report
        .local
        .iter()
        .map(|l| BigInt::from(l.prime).pow(l.rescalings))
        .product();
    let c4 = model.c4() / u.pow(4);
    let c6 = model.c6() / u.pow(6);

    let mut b2 = (-&c6).mod_floor(&BigInt::from(12));
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    let exact = |num: BigInt, den: i64| -> Result<BigInt, Error> {
        let (q, r) = num.div_rem(&BigInt::from(den));
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonIntegralModel)
        }
    };
    let b4 = exact(&b2 * &b2 - &c4, 24)?;
    let b6 = exact(-(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - &c6, 216)?;
    let a1 = b2.mod_floor(&BigInt::from(2));
    let a3 = b6.mod_floor(&BigInt::from(2));
    let reduced = IntModel {
        a2: exact(&b2 - &a1, 4)?,
        a4: exact(&b4 - &a1 * &a3, 2)?,
        a6: exact(&b6 - &a3, 4)?,
        a1,
        a3,
    };
    if reduced.disc() != report.minimal_discriminant || reduced.c4() != c4 || reduced.c6() != c6 {
        return Err(Error::NonIntegralModel);
    }
    Ok(reduced.to_curve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::WeierstrassIso;
    use num_traits::ToPrimitive;

    fn curve(c: [i64; 5]) -> EllCurve {
        EllCurve::from_ints(c).unwrap()
    }

    fn cond(c: [i64; 5]) -> i64 {
        conductor(&curve(c)).unwrap().conductor.to_i64().unwrap()
    }

    #[test]
    fn conductor_of_e_and_its_minimal_model() {
        let report = conductor(&EllCurve::e_model()).unwrap();
        assert_eq!(report.conductor, BigInt::from(48));
        let at2 = &report.local[0];
        let at3 = &report.local[1];
        assert_eq!((at2.prime, at2.conductor_exponent), (2, 4));
        assert_eq!(
            (at3.prime, at3.conductor_exponent, at3.kodaira.as_str()),
            (3, 1, "I4")
        );
        assert_eq!(report.minimal_discriminant, BigInt::from(82944));
        assert_eq!(cond([0, 1, 0, -24, 36]), 48);
        assert_eq!(
            minimal_model(&EllCurve::e_model()).unwrap(),
            curve([0, 1, 0, -24, 36])
        );
        assert_eq!(cond([0, 0, 0, -504576, 131604480]), 48);
    }

    #[test]
    fn classical_conductors() {
        // Cremona table values
        assert_eq!(cond([0, 0, 0, -1, 0]), 32);
        assert_eq!(cond([0, -1, 1, -10, -20]), 11); // 11a1
        assert_eq!(cond([0, -1, 1, 0, 0]), 11); // 11a3
        assert_eq!(cond([0, 0, 1, -1, 0]), 37); // 37a1
        assert_eq!(cond([1, 0, 1, 4, -6]), 14); // 14a1
        assert_eq!(cond([1, 1, 1, -10, -10]), 15); // 15a1
        assert_eq!(cond([0, 1, 0, -1, 0]), 20); // 20a2
        assert_eq!(cond([0, -1, 0, -4, 4]), 24); // 24a1
        assert_eq!(cond([0, 0, 0, 0, 1]), 36); // 36a1
        assert_eq!(cond([0, 0, 0, 1, 0]), 64); // 64a4: y² = x³ + x
        assert_eq!(cond([0, 0, 0, 0, -432]), 27); // 27a1 in short form, non-minimal at 2 and 3
    }

    #[test]
    fn rescaling_reaches_minimal_model() {
        let e = curve([0, 0, 0, -1, 0]);
        let scaled = e.transform(&WeierstrassIso::scaling(Rat::new(1, 6).unwrap()));
        assert!(scaled.is_integral());
        let report = conductor(&scaled).unwrap();
        assert_eq!(report.conductor, BigInt::from(32));
        assert_eq!(report.minimal_discriminant, BigInt::from(64));
        assert_eq!(minimal_model(&scaled).unwrap(), e);
        let at3 = report.local.iter().find(|l| l.prime == 3).unwrap();
        assert_eq!((at3.rescalings, at3.conductor_exponent), (1, 0));
    }

    #[test]
    fn kodaira_symbols_at_two() {
        let report = conductor(&EllCurve::e_model()).unwrap();
        // v(Δ) = 10 and f = 4 at 2 force m = 7 in Ogg's formula
        assert_eq!(report.local[0].kodaira, "I2*");
        assert_eq!(report.local[1].split, Some(true));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn invariant_under_change_of_model(
            idx in 0usize..6,
            r in -6i64..=6,
            s in -3i64..=3,
            t in -6i64..=6,
            u in 1i64..=3,
        ) {
            let base = [
                [0, -17, 0, 72, 0],
                [0, 0, 0, -1, 0],
                [0, -1, 1, -10, -20],
                [1, 1, 1, -10, -10],
                [0, 0, 1, -1, 0],
                [0, 0, 0, 0, 1],
            ][idx];
            let e = curve(base);
            let iso = WeierstrassIso::new(
                Rat::new(1, u).unwrap(),
                Rat::from(r),
                Rat::from(s),
                Rat::from(t),
            );
            let moved = e.transform(&iso);
            proptest::prop_assert_eq!(conductor(&moved).unwrap().conductor, conductor(&e).unwrap().conductor);
            proptest::prop_assert_eq!(minimal_model(&moved).unwrap(), minimal_model(&e).unwrap());
        }
    }
}
