use num_bigint::BigInt;

use super::{integer_coeffs, EllCurve, EllPoint};
use crate::arith::Rat;
use crate::ntheory::exact_sqrt;
use crate::Error;

/// Integral points with `|x| ≤ bound` on an integral model, sorted.
///
/// For each `x` the equation is a monic quadratic in `y` whose discriminant
/// `(a1·x + a3)² + 4(x³ + a2·x² + a4·x + a6)` must be a perfect square.
pub fn bounded_integral_points(e: &EllCurve, bound: u64) -> Result<Vec<EllPoint>, Error> {
    let [a1, a2, a3, a4, a6] = integer_coeffs(e)?;
    let bound = BigInt::from(bound);
    let mut points = Vec::new();
    let mut x = -bound.clone();
    while x <= bound {
        let lin = &a1 * &x + &a3;
        let cubic = ((&x + &a2) * &x + &a4) * &x + &a6;
        let disc = &lin * &lin + 4 * &cubic;
        if let Some(s) = exact_sqrt(&disc) {
            // y = (−lin ± s)/2; both have the parity of disc − lin², which is even
            for num in [-&lin + &s, -&lin - &s] {
                points.push(EllPoint::affine(Rat::from(&x), Rat::from(num / 2)));
            }
        }
        x += 1;
    }
    points.sort();
    points.dedup();
    debug_assert!(points.iter().all(|p| e.contains(p)));
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_points_of_e() {
        let pts = bounded_integral_points(&EllCurve::e_model(), 100).unwrap();
        let mut expected: Vec<EllPoint> =
            [(0, 0), (8, 0), (9, 0), (6, 6), (6, -6), (12, 12), (12, -12)]
                .into_iter()
                .map(|(x, y)| EllPoint::from_ints(x, y))
                .collect();
        expected.sort();
        assert_eq!(pts, expected);
    }

    #[test]
    fn long_form_curve() {
        // 11a3: y² + y = x³ − x², integral points (0,0), (0,−1), (1,0), (1,−1)
        let e = EllCurve::from_ints([0, -1, 1, 0, 0]).unwrap();
        let pts = bounded_integral_points(&e, 50).unwrap();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn rejects_non_integral() {
        let half = Rat::new(1, 2).unwrap();
        let e = EllCurve::new([Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(), half]).unwrap();
        assert_eq!(bounded_integral_points(&e, 5), Err(Error::NonIntegralModel));
    }
}
