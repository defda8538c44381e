//! Complete 2-descent on curves with full rational 2-torsion.
//!
//! For `y² = (x − e1)(x − e2)(x − e3)` the map
//! `P ↦ (x − e1, x − e2) mod squares` embeds `E(ℚ)/2E(ℚ)` into
//! `(ℚ*/ℚ*²)²`. A pair `(d1, d2)` is in the image only if the torsor
//!
//! ```text
//! x − e1 = d1·z1²,   x − e2 = d2·z2²,   x − e3 = d1d2·z3²
//! ```
//!
//! has points everywhere locally. Candidates passing all local tests form the
//! 2-Selmer group; since `|E(ℚ)/2E(ℚ)| = 2^(r+2)` here, its size bounds the
//! rank.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{ser_bigint_number, squarefree_class, Rat};
use crate::curves::{
    integer_roots_of_cubic, monic_cubic_model, torsion_subgroup, EllCurve, EllPoint,
};
use crate::ntheory::{divisors, legendre, prime_divisors_u64, squarefree_part, valuation};
use crate::Error;

/// A pair of squarefree integers standing for a class in `(ℚ*/ℚ*²)²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassPair(pub BigInt, pub BigInt);

impl ClassPair {
    pub fn identity() -> Self {
        ClassPair(BigInt::one(), BigInt::one())
    }

    /// Componentwise product, reduced mod squares.
    pub fn mul(&self, other: &ClassPair) -> ClassPair {
        ClassPair(
            squarefree_part(&(&self.0 * &other.0)),
            squarefree_part(&(&self.1 * &other.1)),
        )
    }
}

impl fmt::Display for ClassPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl Serialize for ClassPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair<'a>(
            #[serde(serialize_with = "ser_bigint_number")] &'a BigInt,
            #[serde(serialize_with = "ser_bigint_number")] &'a BigInt,
        );
        Pair(&self.0, &self.1).serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceVerdict {
    pub place: Place,
    pub solvable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub class: ClassPair,
    /// Verdicts in test order; testing stops at the first failing place.
    pub places: Vec<PlaceVerdict>,
    pub locally_solvable: bool,
}

impl CandidateReport {
    pub fn failing_place(&self) -> Option<Place> {
        self.places.iter().find(|v| !v.solvable).map(|v| v.place)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    RankZeroProved,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImagePoint {
    pub point: EllPoint,
    pub class: ClassPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoDescentReport {
    /// `e1 < e2 < e3` on the model `y² = (x − e1)(x − e2)(x − e3)`.
    #[serde(serialize_with = "ser_roots")]
    pub roots: [BigInt; 3],
    /// Known points, given on the input curve, and their classes.
    pub image_points: Vec<ImagePoint>,
    pub image_classes: BTreeSet<ClassPair>,
    pub candidates: Vec<CandidateReport>,
    pub selmer_classes: BTreeSet<ClassPair>,
    pub selmer_is_group: bool,
    pub selmer_rank: u32,
    pub rank_upper: u32,
    pub rank_lower: u32,
    pub conclusion: Conclusion,
}

fn ser_roots<S: Serializer>(roots: &[BigInt; 3], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for r in roots {
        match num_traits::ToPrimitive::to_i64(r) {
            Some(v) => seq.serialize_element(&v)?,
            None => seq.serialize_element(&r.to_string())?,
        }
    }
    seq.end()
}

/// Signed squarefree divisors of `n`, ascending.
fn squarefree_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = divisors(n)
        .into_iter()
        .filter(|d| squarefree_part(d) == *d)
        .flat_map(|d| [-d.clone(), d])
        .collect();
    out.sort();
    out
}

/// The descent map on a point of `y² = (x − e1)(x − e2)(x − e3)`.
pub fn descent_class(p: &EllPoint, e: &[BigInt; 3]) -> ClassPair {
    let [e1, e2, e3] = e;
    let Some(x) = p.x() else {
        return ClassPair::identity();
    };
    let sq = |n: BigInt| squarefree_part(&n);
    if *x == Rat::from(e1) {
        ClassPair(sq((e1 - e2) * (e1 - e3)), sq(e1 - e2))
    } else if *x == Rat::from(e2) {
        ClassPair(sq(e2 - e1), sq((e2 - e1) * (e2 - e3)))
    } else {
        ClassPair(
            squarefree_class(&(x - &Rat::from(e1))),
            squarefree_class(&(x - &Rat::from(e2))),
        )
    }
}

/// Square class of a nonzero element of `ℚ_p`: valuation parity and the
/// class of the unit part (Legendre symbol for odd `p`, residue mod 8 for
/// `p = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LocalClass {
    odd_valuation: bool,
    unit: u64,
}

fn local_class(n: &BigInt, p: u64) -> LocalClass {
    let v = valuation(n, p).expect("nonzero");
    let unit = n / BigInt::from(p).pow(v);
    let unit = if p == 2 {
        unit.mod_floor(&BigInt::from(8)).try_into().unwrap()
    } else {
        (legendre(&unit, p) == 1) as u64
    };
    LocalClass {
        odd_valuation: v % 2 == 1,
        unit,
    }
}

/// Extra digits past the valuation that pin down the unit class.
fn unit_digits(p: u64) -> u32 {
    if p == 2 {
        3
    } else {
        1
    }
}

/// Does the ball `y ≡ r (mod p^k)` of `ℤ_p` contain `y` with
/// `y − f_i ∈ target_i·ℚ_p*²` for all `i`?
///
/// On the ball, `y − f_i` either has a known valuation `w < k`, in which case
/// its class is fixed once `k ≥ w + unit_digits`, or ranges over all of
/// `p^k ℤ_p`, which meets every class. A ball where at most one `y − f_i` is
/// free and the rest are fixed and correct therefore contains a solution.
fn ball_search(r: &BigInt, k: u32, f: &[BigInt; 3], target: &[LocalClass; 3], p: u64) -> bool {
    let pb = BigInt::from(p);
    let pk = pb.pow(k);
    let mut free = 0;
    let mut unresolved = false;
    for (fi, ti) in f.iter().zip(target) {
        let diff = r - fi;
        if diff.is_multiple_of(&pk) {
            free += 1;
            continue;
        }
        let w = valuation(&diff, p).unwrap();
        if k < w + unit_digits(p) {
            unresolved = true;
        } else if local_class(&diff, p) != *ti {
            return false;
        }
    }
    if !unresolved && free <= 1 {
        return true;
    }
    (0..p).any(|digit| ball_search(&(r + &pk * digit), k + 1, f, target, p))
}

/// Whether the torsor for `(d1, d2)` has a point over the given place.
pub fn local_solvable(class: &ClassPair, e: &[BigInt; 3], place: Place) -> bool {
    let ClassPair(d1, d2) = class;
    match place {
        // sign(x − e_i) runs through (−,−,−), (+,−,−), (+,+,−), (+,+,+) as x
        // crosses e1 < e2 < e3; the targets are (d1, d2, d1d2)
        Place::Real => d1.is_positive(),
        Place::Prime(p) => {
            let targets = [d1.clone(), d2.clone(), d1 * d2];
            let t = targets.clone().map(|d| local_class(&d, p));
            // |x| large: every x − e_i has the class of x
            if t.iter().all(|c| *c == t[0]) {
                return true;
            }
            // otherwise v(x) ≥ −m; write x = y/p^m with y ∈ ℤ_p
            let m = if p == 2 { 2 } else { 0 };
            let scale = BigInt::from(p).pow(m);
            let f = e.clone().map(|ei| ei * &scale);
            let t = targets.map(|d| local_class(&(d * &scale), p));
            ball_search(&BigInt::zero(), 0, &f, &t, p)
        }
    }
}

/// Places where a candidate can fail: the real place and the primes
/// dividing `2·d1·d2·(e1 − e2)(e1 − e3)(e2 − e3)`.
fn bad_places(class: &ClassPair, e: &[BigInt; 3]) -> Vec<Place> {
    let [e1, e2, e3] = e;
    let n = BigInt::from(2) * &class.0 * &class.1 * (e1 - e2) * (e1 - e3) * (e2 - e3);
    std::iter::once(Place::Real)
        .chain(prime_divisors_u64(&n).into_iter().map(Place::Prime))
        .collect()
}

fn test_candidate(class: ClassPair, e: &[BigInt; 3]) -> CandidateReport {
    let mut places = Vec::new();
    for place in bad_places(&class, e) {
        let solvable = local_solvable(&class, e, place);
        places.push(PlaceVerdict { place, solvable });
        if !solvable {
            break;
        }
    }
    let locally_solvable = places.iter().all(|v| v.solvable);
    CandidateReport {
        class,
        places,
        locally_solvable,
    }
}

fn is_subgroup(set: &BTreeSet<ClassPair>) -> bool {
    set.contains(&ClassPair::identity())
        && set
            .iter()
            .all(|a| set.iter().all(|b| set.contains(&a.mul(b))))
}

/// Complete 2-descent; errors if the 2-torsion is not fully rational.
pub fn two_descent(curve: &EllCurve) -> Result<TwoDescentReport, Error> {
    let (model, iso) = monic_cubic_model(curve);
    let a = model.a2.to_integer().ok_or(Error::NonIntegralModel)?;
    let b = model.a4.to_integer().ok_or(Error::NonIntegralModel)?;
    let c = model.a6.to_integer().ok_or(Error::NonIntegralModel)?;
    let roots = integer_roots_of_cubic(&a, &b, &c);
    let roots: [BigInt; 3] = roots.try_into().map_err(|_| Error::NoFullTwoTorsion)?;
    let [e1, e2, e3] = &roots;

    let image_points: Vec<ImagePoint> = torsion_subgroup(curve)
        .points
        .into_iter()
        .map(|point| {
            let class = descent_class(&iso.apply(&point), &roots);
            ImagePoint { point, class }
        })
        .collect();
    let image_classes: BTreeSet<ClassPair> =
        image_points.iter().map(|ip| ip.class.clone()).collect();

    let first = squarefree_divisors(&((e1 - e2) * (e1 - e3)));
    let second = squarefree_divisors(&((e2 - e1) * (e2 - e3)));
    let pairs: Vec<ClassPair> = first
        .iter()
        .flat_map(|d1| {
            second
                .iter()
                .map(move |d2| ClassPair(d1.clone(), d2.clone()))
        })
        .collect();
    let candidates: Vec<CandidateReport> = pairs
        .into_par_iter()
        .map(|class| test_candidate(class, &roots))
        .collect();

    let selmer_classes: BTreeSet<ClassPair> = candidates
        .iter()
        .filter(|c| c.locally_solvable)
        .map(|c| c.class.clone())
        .collect();
    let selmer_is_group = is_subgroup(&selmer_classes);
    let selmer_rank = selmer_classes.len().trailing_zeros();
    let image_rank = image_classes.len().trailing_zeros();
    let rank_upper = selmer_rank.saturating_sub(2);
    let rank_lower = image_rank.saturating_sub(2);
    let conclusion = if selmer_is_group
        && selmer_classes.len().is_power_of_two()
        && image_classes.is_subset(&selmer_classes)
        && rank_upper == 0
    {
        Conclusion::RankZeroProved
    } else {
        Conclusion::Inconclusive
    };
    log::debug!(
        "2-descent: {} candidates, Selmer size {}, image size {}",
        candidates.len(),
        selmer_classes.len(),
        image_classes.len()
    );

    Ok(TwoDescentReport {
        roots,
        image_points,
        image_classes,
        candidates,
        selmer_classes,
        selmer_is_group,
        selmer_rank,
        rank_upper,
        rank_lower,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: i64, b: i64) -> ClassPair {
        ClassPair(BigInt::from(a), BigInt::from(b))
    }

    fn e_roots() -> [BigInt; 3] {
        [0, 8, 9].map(BigInt::from)
    }

    #[test]
    fn descent_on_e() {
        let report = two_descent(&EllCurve::e_model()).unwrap();
        assert_eq!(report.roots, e_roots());
        assert_eq!(report.candidates.len(), 32);
        let expected: BTreeSet<ClassPair> = [pair(1, 1), pair(2, -2), pair(6, -2), pair(3, 1)]
            .into_iter()
            .collect();
        assert_eq!(report.image_classes, expected);
        assert_eq!(report.selmer_classes, expected);
        assert_eq!(
            (report.selmer_rank, report.rank_upper, report.rank_lower),
            (2, 0, 0)
        );
        assert_eq!(report.conclusion, Conclusion::RankZeroProved);
        assert!(report.selmer_is_group);
    }

    #[test]
    fn image_of_torsion() {
        let e = e_roots();
        assert_eq!(descent_class(&EllPoint::from_ints(0, 0), &e), pair(2, -2));
        assert_eq!(descent_class(&EllPoint::Infinity, &e), pair(1, 1));
        assert_eq!(descent_class(&EllPoint::from_ints(8, 0), &e), pair(2, -2));
        assert_eq!(descent_class(&EllPoint::from_ints(9, 0), &e), pair(1, 1));
        assert_eq!(descent_class(&EllPoint::from_ints(6, 6), &e), pair(6, -2));
        assert_eq!(descent_class(&EllPoint::from_ints(12, 12), &e), pair(3, 1));
    }

    #[test]
    fn local_examples() {
        let e = e_roots();
        assert!(!local_solvable(&pair(-1, 1), &e, Place::Real));
        for p in [2, 3, 5, 7] {
            assert!(local_solvable(&pair(1, 1), &e, Place::Prime(p)));
        }
        assert!(local_solvable(&pair(2, -2), &e, Place::Prime(3)));
        assert!(local_solvable(&pair(2, -2), &e, Place::Prime(2)));
    }

    #[test]
    fn image_classes_pass_every_place() {
        let report = two_descent(&EllCurve::e_model()).unwrap();
        for class in &report.image_classes {
            for place in [
                Place::Real,
                Place::Prime(2),
                Place::Prime(3),
                Place::Prime(5),
            ] {
                assert!(
                    local_solvable(class, &report.roots, place),
                    "{class} at {place}"
                );
            }
        }
    }

    #[test]
    fn every_failure_is_recorded() {
        let report = two_descent(&EllCurve::e_model()).unwrap();
        for c in &report.candidates {
            assert_eq!(c.locally_solvable, c.failing_place().is_none());
        }
    }

    #[test]
    fn positive_rank_is_not_overclaimed() {
        // y² = x³ − 36x = x(x − 6)(x + 6) is the congruent-number curve for 6,
        // rank 1 with the point (−3, 9)
        let report = two_descent(&EllCurve::from_ints([0, 0, 0, -36, 0]).unwrap()).unwrap();
        assert_eq!(report.roots, [-6, 0, 6].map(BigInt::from));
        assert_eq!(report.rank_upper, 1);
        assert_eq!(report.conclusion, Conclusion::Inconclusive);
        let p = EllPoint::from_ints(-3, 9);
        let class = descent_class(&p, &report.roots);
        assert!(report.selmer_classes.contains(&class));
        assert!(!report.image_classes.contains(&class));
    }

    #[test]
    fn rank_zero_curves() {
        // x³ − x (conductor 32) and E₀ have rank 0
        for e in [
            EllCurve::from_ints([0, 0, 0, -1, 0]).unwrap(),
            EllCurve::e0_model(),
        ] {
            let report = two_descent(&e).unwrap();
            assert_eq!(report.conclusion, Conclusion::RankZeroProved, "{e}");
        }
    }

    #[test]
    fn requires_full_two_torsion() {
        let e = EllCurve::from_ints([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(two_descent(&e), Err(Error::NoFullTwoTorsion));
    }
}
