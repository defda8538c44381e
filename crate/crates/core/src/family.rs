//! The octic family, its split over K = ℚ(√2), and the reduction chain.
//!
//! For a parameter pair the chain records the discriminant `Δ_S` of
//! `h₋(S) = S² + (3 − 2√2)ΔS − A₀` and of its conjugate, the norm
//! `Δ_T = Δ⁴ + 136Δ²A₀ + 16A₀²`, and the would-be point on the conic
//! `v² = 16τ² + 136τ + 1` with `τ = (au/Δ)²`. All fields are computed even
//! when `Δ_T` is not a square, so a trace doubles as a negative certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{quad_is_square, rat_is_square, QuadRat, Rat};
use crate::poly::{poly_gcd, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("a and u must be positive")]
    NonPositive,
    #[error("a and u must differ")]
    Equal,
    #[error("a and u must be coprime (gcd {0})")]
    NotCoprime(BigInt),
}

/// Which conjugate factor: `H₋` carries `3 − 2√2`, `H₊` carries `3 + 2√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// The unit `3 ∓ 2√2`.
    fn unit(self) -> QuadRat {
        match self {
            Sign::Minus => QuadRat::new(3, -2),
            Sign::Plus => QuadRat::new(3, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuboidParams {
    #[serde(serialize_with = "ser_int")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub u: BigInt,
    /// `u² − a²`
    #[serde(serialize_with = "ser_int")]
    pub delta: BigInt,
    /// `a²u²`
    #[serde(serialize_with = "ser_int")]
    pub a0: BigInt,
}

fn ser_int<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl CuboidParams {
    pub fn new(a: impl Into<BigInt>, u: impl Into<BigInt>) -> Result<Self, ParamError> {
        build_params(&a.into(), &u.into())
    }

    pub fn delta_rat(&self) -> Rat {
        Rat::from(&self.delta)
    }

    pub fn a0_rat(&self) -> Rat {
        Rat::from(&self.a0)
    }
}

pub fn build_params(a: &BigInt, u: &BigInt) -> Result<CuboidParams, ParamError> {
    if !a.is_positive() || !u.is_positive() {
        return Err(ParamError::NonPositive);
    }
    if a == u {
        return Err(ParamError::Equal);
    }
    let g = a.gcd(u);
    if !g.is_one() {
        return Err(ParamError::NotCoprime(g));
    }
    Ok(CuboidParams {
        a: a.clone(),
        u: u.clone(),
        delta: u * u - a * a,
        a0: a * a * u * u,
    })
}

/// `t⁸ + At⁶ + Bt⁴ + Ct² + D` with `A = 6Δ, B = Δ² − 2A₀, C = −6ΔA₀, D = A₀²`.
#[allow(non_snake_case)]
pub fn build_P(p: &CuboidParams) -> Poly<Rat> {
    let (d, a0) = (&p.delta, &p.a0);
    let coeffs = [
        a0 * a0,
        -BigInt::from(6) * d * a0,
        d * d - BigInt::from(2) * a0,
        BigInt::from(6) * d,
        BigInt::one(),
    ];
    Poly::new(coeffs.into_iter().map(Rat::from).collect::<Vec<_>>()).from_even_form()
}

/// `H±(t) = t⁴ + (3 ∓ 2√2)Δt² − A₀` over ℚ(√2).
#[allow(non_snake_case)]
pub fn build_H(p: &CuboidParams, sign: Sign) -> Poly<QuadRat> {
    even_depressed_form(p, sign).from_even_form()
}

/// `h±(S) = S² + (3 ∓ 2√2)ΔS − A₀`
pub fn even_depressed_form(p: &CuboidParams, sign: Sign) -> Poly<QuadRat> {
    let middle = &sign.unit() * &QuadRat::from_rat(p.delta_rat());
    Poly::new(vec![QuadRat::from_rat(-p.a0_rat()), middle, QuadRat::one()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitCheck {
    /// `H₋·H₊ = P` coefficientwise
    pub product_matches: bool,
    /// `gcd(H₋, H₊) = 1`
    pub coprime: bool,
}

impl SplitCheck {
    pub fn ok(&self) -> bool {
        self.product_matches && self.coprime
    }
}

pub fn verify_split(p: &CuboidParams) -> SplitCheck {
    check_split(
        &build_P(p),
        &build_H(p, Sign::Minus),
        &build_H(p, Sign::Plus),
    )
}

/// The split check on explicit factors; exposed so corrupted factors can be
/// fed through the same code path.
pub fn check_split(target: &Poly<Rat>, minus: &Poly<QuadRat>, plus: &Poly<QuadRat>) -> SplitCheck {
    let product_matches = (minus * plus) == target.embed();
    let coprime = poly_gcd(minus, plus).is_ok_and(|g| g == Poly::one());
    SplitCheck {
        product_matches,
        coprime,
    }
}

/// A solution `(r, s)` of `2rs = −12Δ²`, `r² + 2s² = 17Δ² + 4A₀`, recovered
/// from a root `T = s²` of `2T² − (17Δ² + 4A₀)T + 36Δ⁴ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackSolution {
    pub t: Rat,
    pub s: Option<Rat>,
    pub r: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    /// `(17 − 12√2)Δ² + 4A₀`, discriminant of `h₋`
    pub delta_s_minus: QuadRat,
    /// its conjugate, discriminant of `h₊`
    pub delta_s_plus: QuadRat,
    /// `Δ⁴ + 136Δ²A₀ + 16A₀²`, the norm of `Δ_S`
    pub delta_t: Rat,
    /// `Z` with `Z² = Δ_T`, when it exists
    pub z_root: Option<Rat>,
    /// `X = Δ²`
    pub x: Rat,
    /// `Y = A₀`
    pub y: Rat,
    /// `v = Z/X`, when `Z` exists
    pub v: Option<Rat>,
    /// `A₀/Δ² = (au/Δ)²`
    pub tau: Rat,
    /// `16τ² + 136τ + 1`
    pub conic_rhs: Rat,
    /// Roots `T` of the quadratic in `s²`, present only with `z_root`.
    pub back_solutions: Vec<BackSolution>,
    pub k_split_minus: bool,
    pub k_split_plus: bool,
}

pub fn reduction_chain(p: &CuboidParams) -> ReductionTrace {
    let delta = p.delta_rat();
    let a0 = p.a0_rat();
    let d2 = &delta * &delta;
    let d4 = &d2 * &d2;

    let delta_s_minus = &(&QuadRat::new(17, -12) * &QuadRat::from_rat(d2.clone()))
        + &QuadRat::from_rat(Rat::from(4) * &a0);
    let delta_s_plus = delta_s_minus.conj();

    let delta_t = &d4 + &(Rat::from(136) * &d2 * &a0) + Rat::from(16) * &a0 * &a0;
    let z_root = rat_is_square(&delta_t);

    let tau = &a0 / &d2;
    let conic_rhs = Rat::from(16) * &tau * &tau + Rat::from(136) * &tau + Rat::one();

    let mut back_solutions = Vec::new();
    if let Some(z) = &z_root {
        // 2T² − bT + 36Δ⁴ = 0 with b = 17Δ² + 4A₀ and discriminant b² − 288Δ⁴ = Z²
        let b = Rat::from(17) * &d2 + Rat::from(4) * &a0;
        for root in [&b + z, &b - z] {
            let t = &root / &Rat::from(4);
            let s = rat_is_square(&t);
            // 2rs = −12Δ² ≠ 0, so s = 0 cannot occur; guard the division anyway
            let r = s
                .as_ref()
                .filter(|s| !s.is_zero())
                .map(|s| -(Rat::from(6) * &d2) / s.clone());
            back_solutions.push(BackSolution { t, s, r });
        }
    }

    ReductionTrace {
        k_split_minus: quad_is_square(&delta_s_minus).is_some(),
        k_split_plus: quad_is_square(&delta_s_plus).is_some(),
        v: z_root.as_ref().map(|z| z / &d2),
        delta_s_minus,
        delta_s_plus,
        delta_t,
        z_root,
        x: d2,
        y: a0,
        tau,
        conic_rhs,
        back_solutions,
    }
}

/// Whether `t⁴ + αt² + β` is irreducible over K = ℚ(√2).
///
/// A factorization is either even, `(t² − S₁)(t² − S₂)` with `S₁, S₂` the
/// roots of `S² + αS + β`, or of the form `(t² + pt + q)(t² − pt + q)` with
/// `p ≠ 0`, forcing `q² = β` and `p² = 2q − α`. Linear factors `t ∓ √S₀`
/// are covered by the even case refined to a root `S₀` that is a square.
pub fn even_quartic_irreducible_over_k(alpha: &QuadRat, beta: &QuadRat) -> bool {
    let disc = &(alpha * alpha) - &(&QuadRat::from(4) * beta);
    if quad_is_square(&disc).is_some() {
        // h splits in K[S]: (t² − S₁)(t² − S₂) is already a factorization
        return false;
    }
    // h irreducible over K, so no root S₀ lies in K and there is no linear
    // factor; only the non-even quadratic split remains
    if let Some(q) = quad_is_square(beta) {
        for q in [q.clone(), -q] {
            let p2 = &(&QuadRat::from(2) * &q) - alpha;
            if !p2.is_zero() && quad_is_square(&p2).is_some() {
                return false;
            }
        }
    }
    true
}

/// Irreducibility of `H±` in K[t] for a family member.
#[allow(non_snake_case)]
pub fn h_irreducible_over_K(p: &CuboidParams, sign: Sign) -> bool {
    let h = even_depressed_form(p, sign);
    even_quartic_irreducible_over_k(&h.coeff(1), &h.coeff(0))
}

/// `Δ_T` from its closed form, for cross-checks against the norm of `Δ_S`.
pub fn delta_t_integer(p: &CuboidParams) -> BigInt {
    let d2 = &p.delta * &p.delta;
    &d2 * &d2 + BigInt::from(136) * &d2 * &p.a0 + BigInt::from(16) * &p.a0 * &p.a0
}

/// Coprime ordered pairs `a ≠ u` in `1..=limit`, sorted by `(a, u)`.
pub fn ordered_pairs(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=limit {
        for u in 1..=limit {
            if a != u && a.gcd(&u) == 1 {
                out.push((a, u));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn params(a: i64, u: i64) -> CuboidParams {
        CuboidParams::new(a, u).unwrap()
    }

    /// Expand `(S² + αS − A₀)(S² + ᾱS − A₀)` by hand over ℤ: with
    /// `α + ᾱ = 6Δ` and `αᾱ = Δ²` the coefficients are
    /// `[A₀², −6ΔA₀, Δ² − 2A₀, 6Δ, 1]`.
    fn expanded_octic(a: i64, u: i64) -> Vec<i64> {
        let d = u * u - a * a;
        let a0 = a * a * u * u;
        vec![a0 * a0, 0, -6 * d * a0, 0, d * d - 2 * a0, 0, 6 * d, 0, 1]
    }

    #[test]
    fn parameter_validation() {
        let p = params(1, 2);
        assert_eq!(
            (p.delta.clone(), p.a0.clone()),
            (BigInt::from(3), BigInt::from(4))
        );
        assert_eq!(
            CuboidParams::new(2, 4),
            Err(ParamError::NotCoprime(BigInt::from(2)))
        );
        assert_eq!(CuboidParams::new(3, 3), Err(ParamError::Equal));
        assert_eq!(CuboidParams::new(0, 3), Err(ParamError::NonPositive));
        assert_eq!(CuboidParams::new(-1, 3), Err(ParamError::NonPositive));
    }

    #[test]
    fn octic_coefficients() {
        assert_eq!(
            build_P(&params(1, 2)),
            Poly::from_ints(&expanded_octic(1, 2))
        );
        assert_eq!(
            build_P(&params(1, 2)),
            Poly::from_ints(&[16, 0, -72, 0, 1, 0, 18, 0, 1])
        );
        assert_eq!(
            build_P(&params(1, 3)),
            Poly::from_ints(&[81, 0, -432, 0, 46, 0, 48, 0, 1])
        );
        assert_eq!(
            build_P(&params(2, 3)),
            Poly::from_ints(&[1296, 0, -1080, 0, -47, 0, 30, 0, 1])
        );
        for (a, u) in [(5, 7), (7, 12), (9, 2)] {
            let p = params(a, u);
            assert_eq!(build_P(&p), Poly::from_ints(&expanded_octic(a, u)));
            assert_eq!(build_P(&p).coeff(0), Rat::from(&(&p.a0 * &p.a0)));
        }
    }

    #[test]
    fn quartic_factors() {
        let p = params(1, 2);
        let h = build_H(&p, Sign::Minus);
        let expected = Poly::new(vec![
            QuadRat::from(-4),
            QuadRat::zero(),
            QuadRat::new(9, -6),
            QuadRat::zero(),
            QuadRat::one(),
        ]);
        assert_eq!(h, expected);
        assert_eq!(h.conj(), build_H(&p, Sign::Plus));
        assert_eq!(
            h.to_even_form().unwrap(),
            even_depressed_form(&p, Sign::Minus)
        );
        assert_eq!(h.coeff(0), QuadRat::from_rat(-p.a0_rat()));
    }

    #[test]
    fn split_checks() {
        for (a, u) in [(1, 2), (7, 12), (12, 7)] {
            let check = verify_split(&params(a, u));
            assert!(check.product_matches && check.coprime, "{a} {u}");
        }
        let p = params(1, 2);
        let mut corrupted = build_H(&p, Sign::Minus).coeffs().to_vec();
        corrupted[0] = QuadRat::from_rat(p.a0_rat());
        let check = check_split(
            &build_P(&p),
            &Poly::new(corrupted),
            &build_H(&p, Sign::Plus),
        );
        assert!(!check.product_matches);
    }

    #[test]
    fn reduction_examples() {
        let t = reduction_chain(&params(1, 2));
        assert_eq!(81 + 4896 + 256, 5233);
        assert_eq!(t.delta_t, Rat::from(5233));
        assert_eq!(t.z_root, None);
        assert_eq!(t.tau, Rat::new(4, 9).unwrap());
        assert_eq!(t.conic_rhs, Rat::new(5233, 81).unwrap());
        assert!(!t.k_split_minus && !t.k_split_plus);
        assert!(t.back_solutions.is_empty());
        assert_eq!(t.delta_s_minus, QuadRat::new(17 * 9 + 16, -12 * 9));

        let t = reduction_chain(&params(1, 3));
        assert_eq!(4096 + 78336 + 1296, 83728);
        assert_eq!(t.delta_t, Rat::from(83728));
        assert_eq!((289 * 289, 290 * 290), (83521, 84100));
        assert_eq!(t.z_root, None);
    }

    #[test]
    fn reduction_identities() {
        for (a, u) in [(1, 2), (3, 8), (11, 4), (40, 39)] {
            let p = params(a, u);
            let t = reduction_chain(&p);
            assert_eq!(&t.conic_rhs * &(&t.x * &t.x), t.delta_t);
            assert_eq!(t.delta_s_minus.norm(), t.delta_t);
            assert_eq!(t.delta_t, Rat::from(delta_t_integer(&p)));
            let au = Rat::from(&(&p.a * &p.u));
            assert_eq!(t.tau, (&au / &p.delta_rat()).pow(2));
        }
    }

    #[test]
    fn back_solving_when_norm_is_square() {
        // Outside the family: pretend Δ = 1 and pick A₀ making 1 + 136A₀ + 16A₀²
        // a square; A₀ = 0 is the degenerate τ = 0 point and gives T ∈ {9/2, 4}.
        let fake = CuboidParams {
            a: BigInt::zero(),
            u: BigInt::one(),
            delta: BigInt::one(),
            a0: BigInt::zero(),
        };
        let t = reduction_chain(&fake);
        assert_eq!(t.z_root, Some(Rat::one()));
        let ts: Vec<_> = t.back_solutions.iter().map(|b| b.t.clone()).collect();
        assert_eq!(ts, vec![Rat::new(9, 2).unwrap(), Rat::from(4)]);
        // T = 4 gives s = 2, r = −3: (−3 + 2√2)² = 17 − 12√2
        let sol = &t.back_solutions[1];
        assert_eq!(sol.s, Some(Rat::from(2)));
        assert_eq!(sol.r, Some(Rat::from(-3)));
        assert!(t.k_split_minus);
    }

    #[test]
    fn irreducibility_over_k() {
        for (a, u) in [(1, 2), (5, 6)] {
            let p = params(a, u);
            assert!(h_irreducible_over_K(&p, Sign::Minus));
            assert!(h_irreducible_over_K(&p, Sign::Plus));
        }
        // (t² − 1)(t² − 4)
        assert!(!even_quartic_irreducible_over_k(
            &QuadRat::from(-5),
            &QuadRat::from(4)
        ));
        // t⁴ + 1 = (t² + √2t + 1)(t² − √2t + 1) over K
        assert!(!even_quartic_irreducible_over_k(
            &QuadRat::zero(),
            &QuadRat::one()
        ));
        // t⁴ − 2 = (t² − √2)(t² + √2)
        assert!(!even_quartic_irreducible_over_k(
            &QuadRat::zero(),
            &QuadRat::from(-2)
        ));
        // t⁴ − 3 stays irreducible
        assert!(even_quartic_irreducible_over_k(
            &QuadRat::zero(),
            &QuadRat::from(-3)
        ));
    }

    #[test]
    fn pair_enumeration() {
        assert_eq!(ordered_pairs(2), vec![(1, 2), (2, 1)]);
        assert_eq!(ordered_pairs(30).len(), 554);
    }
}
