//! Rational points on `𝒞: v² = 16y⁴ + 136y² + 1`, the map `𝒞 → E`, and the
//! values of `τ = y²` they allow.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{rat_is_square, Rat};
use crate::curves::{iso_e0_e, EllCurve, EllPoint, IsoDirection};
use crate::family::CuboidParams;
use crate::ntheory::exact_sqrt_u128;
use crate::Error;

/// A point `(X : Y : Z)` of `ℙ(1, 2, 1)` on `Y² = 16X⁴ + 136X²Z² + Z⁴`.
///
/// Normalized with `gcd(X, Z) = 1` and either `Z > 0`, or `Z = 0` and
/// `X = 1`. Ordered by `Z`, then `X`, then `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedPoint {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl WeightedPoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        WeightedPoint {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.z.is_zero()
    }

    pub fn on_curve(&self) -> bool {
        let (x2, z2) = (&self.x * &self.x, &self.z * &self.z);
        &self.y * &self.y == 16 * &x2 * &x2 + 136 * &x2 * &z2 + &z2 * &z2
    }

    /// `(X : Y : Z) ~ (λX : λ²Y : λZ)`: the representative described on the
    /// type.
    pub fn normalized(&self) -> Option<WeightedPoint> {
        let g = self.x.gcd(&self.z);
        if g.is_zero() {
            return None;
        }
        let lambda = if self.z.is_negative() || (self.z.is_zero() && self.x.is_negative()) {
            -g
        } else {
            g
        };
        Some(WeightedPoint {
            x: &self.x / &lambda,
            y: &self.y / (&lambda * &lambda),
            z: &self.z / &lambda,
        })
    }

    /// `(y, v) = (X/Z, Y/Z²)` on the affine chart.
    pub fn affine(&self) -> Option<(Rat, Rat)> {
        if self.z.is_zero() {
            return None;
        }
        let z = Rat::from(&self.z);
        Some((
            Rat::from(&self.x) / z.clone(),
            Rat::from(&self.y) / z.pow(2),
        ))
    }
}

impl Ord for WeightedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.z, &self.x, &self.y).cmp(&(&other.z, &other.x, &other.y))
    }
}

impl PartialOrd for WeightedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.x, self.y, self.z)
    }
}

impl Serialize for WeightedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The quartic at `y = p/q`, homogenized: `16p⁴ + 136p²q² + q⁴`.
fn quartic_value(p: u64, q: u64) -> u128 {
    let (p2, q2) = ((p as u128) * (p as u128), (q as u128) * (q as u128));
    16 * p2 * p2 + 136 * p2 * q2 + q2 * q2
}

/// Points with `y = p/q` in lowest terms and `max(|p|, q) ≤ height`, plus
/// the two points at infinity, sorted and deduplicated.
///
/// The value of the quartic at `y` is a rational square iff the integer
/// `16p⁴ + 136p²q² + q⁴` is a square, so the scan stays in `u128`.
pub fn search_quartic_points(height: u64) -> Result<Vec<WeightedPoint>, Error> {
    if height == 0 {
        return Err(Error::InvalidBound);
    }
    // 16p⁴ + 136p²q² + q⁴ ≤ 153·height⁴ must fit in a u128
    assert!(height < 1 << 30, "height bound too large");
    let affine: Vec<WeightedPoint> = (1..=height)
        .into_par_iter()
        .flat_map_iter(|q| {
            (0..=height)
                .filter(move |&p| p.gcd(&q) == 1)
                .filter_map(move |p| exact_sqrt_u128(quartic_value(p, q)).map(|s| (p, s, q)))
                .flat_map(|(p, s, q)| {
                    let xs: &[i64] = if p == 0 { &[1] } else { &[1, -1] };
                    xs.iter()
                        .flat_map(move |&sx| {
                            [1i64, -1].map(|sy| {
                                WeightedPoint::new(
                                    BigInt::from(p) * sx,
                                    BigInt::from(s) * sy,
                                    BigInt::from(q),
                                )
                            })
                        })
                        .collect::<Vec<_>>()
                })
        })
        .collect();
    let mut points: BTreeSet<WeightedPoint> = affine.into_iter().collect();
    // leading coefficient 16 = 4²: the branches v ≈ ±4y² give (1 : ±4 : 0)
    points.insert(WeightedPoint::new(1, 4, 0));
    points.insert(WeightedPoint::new(1, -4, 0));
    Ok(points.into_iter().collect())
}

/// The same scan through exact rationals and [`rat_is_square`]; slow, used
/// to cross-check the integer path at small heights.
pub fn search_quartic_points_rational(height: u64) -> Vec<WeightedPoint> {
    let quartic = crate::curves::QuarticModel::fixed();
    let mut points = BTreeSet::new();
    for q in 1..=height as i64 {
        for p in -(height as i64)..=height as i64 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let y = Rat::new(p, q).unwrap();
            if let Some(v) = rat_is_square(&quartic.eval(&y)) {
                let yy = (v * Rat::from(q * q)).to_integer().expect("integral");
                points.insert(WeightedPoint::new(p, yy.clone(), q));
                points.insert(WeightedPoint::new(p, -yy, q));
            }
        }
    }
    points.insert(WeightedPoint::new(1, 4, 0));
    points.insert(WeightedPoint::new(1, -4, 0));
    points.into_iter().collect()
}

/// `{y² : (y, v) affine}`.
pub fn tau_set(points: &[WeightedPoint]) -> BTreeSet<Rat> {
    points
        .iter()
        .filter_map(|p| p.affine())
        .map(|(y, _)| y.pow(2))
        .collect()
}

/// Why `τ = (au/Δ)²` avoids the two values left by the point search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauExclusion {
    pub tau: Rat,
    /// `τ = 0` needs `au = 0`.
    pub is_zero: bool,
    /// `τ = 1/4` needs `|u² − a²| = 2au`.
    pub is_quarter: bool,
    /// The identity `τ = 1/4` would force: `(u − a)² = 2a²` when `u > a`,
    /// `(a − u)² = 2u²` when `a > u`.
    pub required_identity: String,
    /// Either identity makes `2a²` or `2u²` a square, i.e. `√2 ∈ ℚ`.
    pub two_a_squared_is_square: bool,
    pub two_u_squared_is_square: bool,
    pub excluded: bool,
}

pub fn tau_excluded(params: &CuboidParams) -> TauExclusion {
    let tau = (params.a0_rat()) / params.delta_rat().pow(2);
    let is_zero = tau.is_zero();
    let is_quarter = tau == Rat::new(1, 4).unwrap();
    let a = Rat::from(&params.a);
    let u = Rat::from(&params.u);
    let two_a_squared_is_square = rat_is_square(&(Rat::from(2) * a.pow(2))).is_some();
    let two_u_squared_is_square = rat_is_square(&(Rat::from(2) * u.pow(2))).is_some();
    let required_identity = if params.u > params.a {
        "(u-a)^2 = 2a^2"
    } else {
        "(a-u)^2 = 2u^2"
    };
    TauExclusion {
        excluded: !is_zero && !is_quarter,
        tau,
        is_zero,
        is_quarter,
        required_identity: required_identity.into(),
        two_a_squared_is_square,
        two_u_squared_is_square,
    }
}

/// Coprime pairs `1 ≤ a, u ≤ limit` with `|u² − a²| = 2au`.
pub fn exclusion_scan(limit: u64) -> Vec<(u64, u64)> {
    let mut hits: Vec<(u64, u64)> = (1..=limit)
        .into_par_iter()
        .flat_map_iter(|a| {
            (1..=limit).filter_map(move |u| {
                let (a2, u2) = (a as u128 * a as u128, u as u128 * u as u128);
                let lhs = a2.abs_diff(u2);
                (lhs == 2 * a as u128 * u as u128 && a.gcd(&u) == 1).then_some((a, u))
            })
        })
        .collect();
    hits.sort();
    hits
}

/// The image of a point of `𝒞` on `E: y² = x³ − 17x² + 72x`.
///
/// On the branch `v ≈ 4y²` through `(1 : 4 : 0)` put
/// `k = (v + 4y² + 17)/2`; then `(X₀, Y₀) = (144k − 816, −1728·y·2k)` lies
/// on `E₀: Y² = X³ − 504576X + 131604480`, and `E₀ → E` is the fixed
/// isomorphism. `(1 : 4 : 0)` goes to the identity. At `(1 : −4 : 0)` the
/// formula is `0/0`; along the curve `v + 4y² → −17`, so `k → 0` and
/// `y·k → 0`, and the point is sent to the limit `(0, 0)`.
pub fn map_c_to_e(p: &WeightedPoint) -> Result<EllPoint, Error> {
    if !p.on_curve() {
        return Err(Error::NotOnCurve(p.to_string()));
    }
    let Some((y, v)) = p.affine() else {
        return Ok(if p.y.is_positive() == p.x.is_positive() {
            EllPoint::Infinity
        } else {
            EllPoint::affine(Rat::zero(), Rat::zero())
        });
    };
    let k = (v + Rat::from(4) * y.pow(2) + Rat::from(17)) / Rat::from(2);
    let x0 = Rat::from(144) * &k - Rat::from(816);
    let y0 = -(Rat::from(1728) * &y * (Rat::from(2) * &k));
    let on_e0 = EllPoint::affine(x0, y0);
    iso_e0_e(&on_e0, IsoDirection::E0ToE)
}

/// Checks that the map sends `points` injectively onto a subset of `E`.
pub fn map_is_injective(points: &[WeightedPoint]) -> Result<bool, Error> {
    let e = EllCurve::e_model();
    let mut images = BTreeSet::new();
    for p in points {
        let q = map_c_to_e(p)?;
        e.check(&q)?;
        if !images.insert(q) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The eight points of the reference transcript, in its order.
pub fn transcript_points() -> Vec<WeightedPoint> {
    [
        (1, -4, 0),
        (1, 4, 0),
        (0, -1, 1),
        (0, 1, 1),
        (-1, -24, 2),
        (-1, 24, 2),
        (1, -24, 2),
        (1, 24, 2),
    ]
    .into_iter()
    .map(|(x, y, z)| WeightedPoint::new(x, y, z))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_matches_transcript() {
        assert_eq!(search_quartic_points(1000).unwrap(), transcript_points());
        assert_eq!(search_quartic_points(2).unwrap(), transcript_points());
        let h1 = search_quartic_points(1).unwrap();
        assert_eq!(
            h1,
            vec![
                WeightedPoint::new(1, -4, 0),
                WeightedPoint::new(1, 4, 0),
                WeightedPoint::new(0, -1, 1),
                WeightedPoint::new(0, 1, 1),
            ]
        );
        assert_eq!(search_quartic_points(0), Err(Error::InvalidBound));
    }

    #[test]
    fn integer_and_rational_scans_agree() {
        for h in [1, 2, 5, 30] {
            assert_eq!(
                search_quartic_points(h).unwrap(),
                search_quartic_points_rational(h)
            );
        }
    }

    #[test]
    fn points_are_normalized_and_on_curve() {
        for p in search_quartic_points(50).unwrap() {
            assert!(p.on_curve());
            assert_eq!(p.normalized().unwrap(), p);
        }
        let p = WeightedPoint::new(-2, 96, -4);
        assert_eq!(p.normalized().unwrap(), WeightedPoint::new(1, 24, 2));
        assert_eq!(
            WeightedPoint::new(1, 24, 2).affine(),
            Some((Rat::new(1, 2).unwrap(), Rat::from(6)))
        );
    }

    #[test]
    fn tau_values() {
        let tau = tau_set(&transcript_points());
        let expected: BTreeSet<Rat> = [Rat::zero(), Rat::new(1, 4).unwrap()].into_iter().collect();
        assert_eq!(tau, expected);
        assert_eq!(
            tau_set(&[WeightedPoint::new(0, 1, 1)]),
            [Rat::zero()].into_iter().collect()
        );
        assert!(tau_set(&[WeightedPoint::new(1, 4, 0)]).is_empty());
    }

    #[test]
    fn exclusion() {
        let cert = tau_excluded(&CuboidParams::new(1, 2).unwrap());
        assert_eq!(cert.tau, Rat::new(4, 9).unwrap());
        assert!(cert.excluded);
        assert!(!cert.two_a_squared_is_square && !cert.two_u_squared_is_square);
        assert!(exclusion_scan(500).is_empty());
    }

    #[test]
    fn map_to_e() {
        let expected = [
            ((1, 4, 0), None),
            ((1, -4, 0), Some((0, 0))),
            ((0, 1, 1), Some((9, 0))),
            ((0, -1, 1), Some((8, 0))),
            ((1, 24, 2), Some((12, -12))),
            ((1, -24, 2), Some((6, -6))),
            ((-1, 24, 2), Some((12, 12))),
            ((-1, -24, 2), Some((6, 6))),
        ];
        for ((x, y, z), image) in expected {
            let q = map_c_to_e(&WeightedPoint::new(x, y, z)).unwrap();
            let want = image.map_or(EllPoint::Infinity, |(a, b)| EllPoint::from_ints(a, b));
            assert_eq!(q, want, "({x} : {y} : {z})");
        }
        assert!(map_is_injective(&transcript_points()).unwrap());
        assert!(map_c_to_e(&WeightedPoint::new(1, 1, 1)).is_err());
    }
}
