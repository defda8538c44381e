//! Rational torsion by Nagell–Lutz on an integral model `y² = f(x)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{integral_model, EllCurve, EllPoint, WeierstrassIso};
use crate::arith::Rat;
use crate::ntheory::{divisors, exact_sqrt, factorize};

/// Mazur: every rational torsion point has order at most 12.
const MAZUR_BOUND: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    /// `[n]` for cyclic `ℤ/n`, `[n1, n2]` with `n1 | n2` otherwise, `[]` when
    /// trivial.
    pub group_invariants: Vec<u64>,
    /// Sorted, starting with the point at infinity.
    pub points: Vec<EllPoint>,
    /// Order of each point of `points`, in the same position.
    pub point_orders: Vec<u64>,
    pub order: u64,
}

/// Order of `p` if it is at most the Mazur bound.
pub fn point_order(e: &EllCurve, p: &EllPoint) -> Option<u64> {
    let mut q = p.clone();
    for n in 1..=MAZUR_BOUND {
        if q.is_infinity() {
            return Some(n);
        }
        q = e.add(&q, p);
    }
    None
}

/// An integral model `y² = x³ + A·x² + B·x + C` together with the isomorphism
/// from `e`. Models with `a1 = a3 = 0` only get the integrality scaling;
/// otherwise the square is completed, giving `y² = x³ + b2·x² + 8b4·x + 16b6`.
pub(crate) fn monic_cubic_model(e: &EllCurve) -> (EllCurve, WeierstrassIso) {
    let (integral, to_integral) = integral_model(e);
    if integral.a1.is_zero() && integral.a3.is_zero() {
        return (integral, to_integral);
    }
    let half = Rat::new(1, 2).unwrap();
    let complete = WeierstrassIso::new(
        half.clone(),
        Rat::zero(),
        -(&integral.a1 * &half),
        -(&integral.a3 * &half),
    );
    (integral.transform(&complete), to_integral.then(&complete))
}

/// Integer roots of the monic cubic `x³ + a·x² + b·x + c`.
pub(crate) fn integer_roots_of_cubic(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| ((x + a) * x + b) * x + c;
    let mut roots = Vec::new();
    if c.is_zero() {
        roots.push(BigInt::zero());
        // remaining roots solve x² + a·x + b = 0
        let disc = a * a - BigInt::from(4) * b;
        if let Some(s) = exact_sqrt(&disc) {
            for num in [-a + &s, -a - &s] {
                if (&num % 2u32).is_zero() {
                    roots.push(num / 2);
                }
            }
        }
    } else {
        for d in divisors(c) {
            for x in [d.clone(), -d] {
                if f(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integers `y > 0` with `y² | n`.
fn square_divisor_roots(n: &BigInt) -> Vec<BigInt> {
    let mut ys = vec![BigInt::from(1)];
    for (p, e) in factorize(n) {
        let p = BigInt::from(p);
        let mut next = Vec::new();
        for y in &ys {
            let mut pk = y.clone();
            for _ in 0..=e / 2 {
                next.push(pk.clone());
                pk *= &p;
            }
        }
        ys = next;
    }
    ys.sort();
    ys
}

/// The rational torsion subgroup.
///
/// Candidates come from Nagell–Lutz on the model `y² = x³ + Ax² + Bx + C`:
/// integral points with `y = 0` or `y² | disc(x³ + Ax² + Bx + C)`. Each
/// candidate is kept only if some multiple up to Mazur's bound is the
/// identity, so the result does not lean on the divisibility criterion
/// alone.
pub fn torsion_subgroup(e: &EllCurve) -> TorsionReport {
    let (model, iso) = monic_cubic_model(e);
    let back = iso.inverse();
    let [_, a, _, b, c] = super::integer_coeffs(&model).expect("model is integral");

    let disc = &a * &a * &b * &b
        - BigInt::from(4) * &b * &b * &b
        - BigInt::from(4) * &a * &a * &a * &c
        - BigInt::from(27) * &c * &c
        + BigInt::from(18) * &a * &b * &c;

    let mut candidates = Vec::new();
    for x in integer_roots_of_cubic(&a, &b, &c) {
        candidates.push(EllPoint::affine(Rat::from(x), Rat::zero()));
    }
    for y in square_divisor_roots(&disc) {
        let y2 = &y * &y;
        for x in integer_roots_of_cubic(&a, &b, &(&c - &y2)) {
            for yy in [y.clone(), -y.clone()] {
                candidates.push(EllPoint::affine(Rat::from(x.clone()), Rat::from(yy)));
            }
        }
    }

    let mut points = vec![EllPoint::Infinity];
    for cand in candidates {
        debug_assert!(model.contains(&cand));
        if point_order(&model, &cand).is_some() {
            points.push(back.apply(&cand));
        }
    }
    points.sort();
    points.dedup();

    let point_orders: Vec<u64> = points
        .iter()
        .map(|p| point_order(e, p).expect("torsion point has bounded order"))
        .collect();
    let order = points.len() as u64;
    let exponent = point_orders.iter().copied().max().unwrap_or(1);
    let group_invariants = if order == 1 {
        Vec::new()
    } else if exponent == order {
        vec![order]
    } else {
        vec![order / exponent, exponent]
    };
    TorsionReport {
        group_invariants,
        points,
        point_orders,
        order,
    }
}

impl TorsionReport {
    pub fn order_of(&self, p: &EllPoint) -> Option<u64> {
        let i = self.points.iter().position(|q| q == p)?;
        Some(self.point_orders[i])
    }

    /// Number of points of exact order 2.
    pub fn two_torsion_count(&self) -> usize {
        self.point_orders.iter().filter(|&&n| n == 2).count()
    }
}
