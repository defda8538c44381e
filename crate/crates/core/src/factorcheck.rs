//! An irreducibility oracle over ℤ that does not use the structure of the
//! octic family.
//!
//! Stage 1 looks for rational roots. Stage 2 reads off factor degree
//! patterns modulo small primes; a proper factor over ℤ must have a degree
//! that is a subset sum of every pattern. Stage 3 settles the degrees that
//! survive: modulo one prime `p` larger than twice the Mignotte bound, every
//! integer factor of degree `k` is, up to the leading coefficient, the
//! symmetric lift of a product of irreducible factors mod `p` of total
//! degree `k`, so trying every such product is an exhaustive search.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::ntheory::{divisors, exact_sqrt, is_prime_u64, modp, mul_mod, next_prime_u64, pow_mod};
use crate::poly::Poly;
use crate::Error;

/// How many small primes stage 2 uses.
const PATTERN_PRIMES: usize = 8;

/// Stage 3 needs `p` with `p > 2B` and products mod `p` computed in `u128`.
const MAX_LIFT_PRIME: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Irreducible,
    Reducible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RationalRoot,
    /// `gcd(f, f′)` is a proper factor.
    RepeatedFactor,
    ModpPatterns,
    CoefficientSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreePattern {
    pub prime: u64,
    /// Degrees of the irreducible factors mod `prime`, ascending.
    pub factor_degrees: Vec<usize>,
    /// Proper subset sums of `factor_degrees`.
    pub feasible_degrees: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftSearch {
    pub prime: u64,
    /// Bound on the coefficients of `lead(f)·g` for a factor `g`.
    pub coefficient_bound: String,
    pub factor_degrees: Vec<usize>,
    /// Candidate degrees searched, at most half the degree of `f`.
    pub degrees: Vec<usize>,
    pub candidates_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    pub verdict: Verdict,
    pub method: Method,
    pub primes_used: Vec<u64>,
    pub feasible_degree_sets: Vec<DegreePattern>,
    /// Degrees allowed by every pattern.
    pub surviving_degrees: BTreeSet<usize>,
    pub search: Option<LiftSearch>,
    /// A primitive proper factor, when reducible.
    pub factor: Option<Poly<Rat>>,
}

impl IrreducibilityCertificate {
    fn new(verdict: Verdict, method: Method) -> Self {
        IrreducibilityCertificate {
            verdict,
            method,
            primes_used: Vec::new(),
            feasible_degree_sets: Vec::new(),
            surviving_degrees: BTreeSet::new(),
            search: None,
            factor: None,
        }
    }

    fn reducible(method: Method, factor: Poly<Rat>) -> Self {
        IrreducibilityCertificate {
            factor: Some(factor),
            ..Self::new(Verdict::Reducible, method)
        }
    }

    /// For a reducible verdict: the factor divides `f` exactly over ℤ.
    pub fn factor_divides(&self, f: &Poly<Rat>) -> bool {
        match &self.factor {
            Some(g) => integer_quotient(f, g).is_some(),
            None => false,
        }
    }
}

fn integer_coeffs(f: &Poly<Rat>) -> Result<Vec<BigInt>, Error> {
    f.coeffs()
        .iter()
        .map(|c| c.to_integer().ok_or(Error::NonPrimitive))
        .collect()
}

fn from_ints(c: &[BigInt]) -> Poly<Rat> {
    Poly::new(c.iter().map(Rat::from).collect())
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive_part(c: &[BigInt]) -> Vec<BigInt> {
    let g = content(c);
    let sign = if c.last().is_some_and(|l| l.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    c.iter().map(|x| x / &g * &sign).collect()
}

/// `f / g` when it has integer coefficients.
fn integer_quotient(f: &Poly<Rat>, g: &Poly<Rat>) -> Option<Poly<Rat>> {
    let (q, r) = f.div_rem(g).ok()?;
    (r.is_zero() && q.coeffs().iter().all(Rat::is_integer)).then_some(q)
}

/// Determinant by fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `res(f, g)` from the Sylvester matrix; both of positive degree.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// Polynomials over `F_p`, coefficients ascending, no trailing zeros.
mod fp {
    use super::*;

    pub type P = Vec<u64>;

    pub fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &P) -> usize {
        a.len().saturating_sub(1)
    }

    pub fn reduce(c: &[BigInt], p: u64) -> P {
        trim(c.iter().map(|x| modp(x, p)).collect())
    }

    pub fn sub(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn mul(a: &P, b: &P, p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn monic(a: &P, p: u64) -> P {
        let l = inv(*a.last().expect("nonzero"), p);
        a.iter().map(|&c| mul_mod(c, l, p)).collect()
    }

    pub fn div_rem(a: &P, b: &P, p: u64) -> (P, P) {
        let db = deg(b);
        let lb = inv(*b.last().expect("division by zero"), p);
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while !r.is_empty() && r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = mul_mod(*r.last().unwrap(), lb, p);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mul_mod(c, bc, p)) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &P, b: &P, p: u64) -> P {
        div_rem(a, b, p).1
    }

    pub fn gcd(a: &P, b: &P, p: u64) -> P {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(&a, p)
        }
    }

    pub fn pow_mod_poly(base: &P, exp: &BigUint, m: &P, p: u64) -> P {
        let mut result = vec![1u64];
        let base = rem(base, m, p);
        for i in (0..exp.bits()).rev() {
            result = rem(&mul(&result, &result, p), m, p);
            if exp.bit(i) {
                result = rem(&mul(&result, &base, p), m, p);
            }
        }
        result
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// pairs `(d, product of all irreducible factors of degree d)`.
    pub fn ddf(f: &P, p: u64) -> Vec<(usize, P)> {
        let x = vec![0, 1];
        let pb = BigUint::from(p);
        let mut out = Vec::new();
        let mut rest = f.clone();
        let mut h = x.clone();
        let mut d = 1;
        while deg(&rest) >= 2 * d {
            h = pow_mod_poly(&h, &pb, &rest, p);
            let g = gcd(&rest, &sub(&h, &x, p), p);
            if deg(&g) > 0 {
                rest = div_rem(&rest, &g, p).0;
                h = rem(&h, &rest, p);
                out.push((d, g));
            }
            d += 1;
        }
        if deg(&rest) > 0 {
            out.push((deg(&rest), rest));
        }
        out
    }

    /// Base-`p` digits of `n` as a polynomial; enumerates all of `F_p[t]`.
    fn nth_poly(mut n: u64, p: u64) -> P {
        let mut out = Vec::new();
        while n > 0 {
            out.push(n % p);
            n /= p;
        }
        out
    }

    /// Splits a product of distinct irreducibles of degree `d` (odd `p`).
    pub fn edf(f: &P, d: usize, p: u64) -> Vec<P> {
        if deg(f) == d {
            return vec![f.clone()];
        }
        let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        // start at t, then t + 1, …, running through every polynomial
        let mut n = p;
        loop {
            let a = nth_poly(n, p);
            n += 1;
            if deg(&a) >= deg(f) {
                continue;
            }
            let b = sub(&pow_mod_poly(&a, &exp, f, p), &vec![1], p);
            let g = gcd(f, &b, p);
            if deg(&g) > 0 && deg(&g) < deg(f) {
                let other = div_rem(f, &g, p).0;
                let mut out = edf(&g, d, p);
                out.extend(edf(&monic(&other, p), d, p));
                return out;
            }
        }
    }

    pub fn factor(f: &P, p: u64) -> Vec<P> {
        let mut out = Vec::new();
        for (d, g) in ddf(f, p) {
            out.extend(edf(&g, d, p));
        }
        out
    }
}

/// Every proper subset sum of `degrees`.
fn subset_sums(degrees: &[usize], total: usize) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0]);
    for &d in degrees {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums.into_iter().filter(|&s| s > 0 && s < total).collect()
}

/// `q·t − p` for a rational root `p/q`, if any.
fn rational_root_factor(c: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = c.len() - 1;
    if c[0].is_zero() {
        return Some(vec![BigInt::zero(), BigInt::one()]);
    }
    let lead = &c[d];
    let nums = divisors(&c[0]);
    let dens = divisors(lead);
    for q in &dens {
        for p in &nums {
            if !p.gcd(q).is_one() {
                continue;
            }
            for p in [p.clone(), -p.clone()] {
                // q^d·f(p/q) = Σ c_i p^i q^(d−i)
                let mut acc = BigInt::zero();
                for (i, ci) in c.iter().enumerate() {
                    acc += ci * p.pow(i as u32) * q.pow((d - i) as u32);
                }
                if acc.is_zero() {
                    return Some(vec![-p, q.clone()]);
                }
            }
        }
    }
    None
}

fn l2_norm_ceil(c: &[BigInt]) -> BigInt {
    let sum: BigInt = c.iter().map(|x| x * x).sum();
    match exact_sqrt(&sum) {
        Some(s) => s,
        None => sum.sqrt() + 1,
    }
}

/// Decide irreducibility of a primitive integer polynomial.
#[allow(non_snake_case)]
pub fn irreducible_over_Z(f: &Poly<Rat>) -> Result<IrreducibilityCertificate, Error> {
    let deg = f.degree().ok_or(Error::ConstantPolynomial)?;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let c = integer_coeffs(f)?;
    if !content(&c).is_one() {
        return Err(Error::NonPrimitive);
    }
    if deg == 1 {
        return Ok(IrreducibilityCertificate::new(
            Verdict::Irreducible,
            Method::RationalRoot,
        ));
    }

    // stage 1
    if let Some(lin) = rational_root_factor(&c) {
        return Ok(IrreducibilityCertificate::reducible(
            Method::RationalRoot,
            from_ints(&lin),
        ));
    }

    let lead = c[deg].clone();
    let res = resultant(&c, &integer_coeffs(&f.derivative())?);
    if res.is_zero() {
        // repeated factor: gcd(f, f′) is proper and nonconstant
        let g = crate::poly::poly_gcd(f, &f.derivative())?;
        let den = g
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let gi: Vec<BigInt> = g
            .coeffs()
            .iter()
            .map(|x| (x.clone() * Rat::from(&den)).to_integer().unwrap())
            .collect();
        return Ok(IrreducibilityCertificate::reducible(
            Method::RepeatedFactor,
            from_ints(&primitive_part(&gi)),
        ));
    }
    let bad = &lead * &res;

    // stage 2
    let mut cert = IrreducibilityCertificate::new(Verdict::Irreducible, Method::ModpPatterns);
    let mut surviving: BTreeSet<usize> = (1..deg).collect();
    let mut p = 2;
    while cert.primes_used.len() < PATTERN_PRIMES {
        p = next_prime_u64(p);
        if modp(&bad, p) == 0 {
            continue;
        }
        let fp = fp::monic(&fp::reduce(&c, p), p);
        let mut factor_degrees: Vec<usize> = fp::ddf(&fp, p)
            .into_iter()
            .flat_map(|(d, g)| std::iter::repeat_n(d, fp::deg(&g) / d))
            .collect();
        factor_degrees.sort();
        let feasible = subset_sums(&factor_degrees, deg);
        surviving = surviving.intersection(&feasible).copied().collect();
        cert.primes_used.push(p);
        cert.feasible_degree_sets.push(DegreePattern {
            prime: p,
            factor_degrees,
            feasible_degrees: feasible,
        });
    }
    cert.surviving_degrees = surviving.clone();
    if surviving.is_empty() {
        return Ok(cert);
    }

    // stage 3: a factor of degree k has a cofactor of degree deg − k
    let degrees: Vec<usize> = surviving.into_iter().filter(|&k| 2 * k <= deg).collect();
    let kmax = *degrees
        .iter()
        .max()
        .expect("surviving degrees are symmetric");
    let bound = lead.abs() * BigInt::from(2).pow(kmax as u32) * l2_norm_ceil(&c);
    let start = (BigInt::from(2) * &bound)
        .to_u64()
        .filter(|&s| s < MAX_LIFT_PRIME);
    let Some(start) = start else {
        cert.verdict = Verdict::Inconclusive;
        cert.method = Method::CoefficientSearch;
        return Ok(cert);
    };
    let mut q = next_prime_u64(start);
    while modp(&bad, q) == 0 {
        q = next_prime_u64(q);
    }
    debug_assert!(is_prime_u64(q));
    let factors = fp::factor(&fp::monic(&fp::reduce(&c, q), q), q);
    let lead_q = modp(&lead, q);
    let half = q / 2;
    let mut tried = 0;
    let mut found = None;
    'search: for &k in &degrees {
        for mask in 1u32..(1 << factors.len()) {
            let chosen: Vec<&fp::P> = (0..factors.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &factors[i])
                .collect();
            if chosen.iter().map(|g| fp::deg(g)).sum::<usize>() != k {
                continue;
            }
            tried += 1;
            let prod = chosen
                .iter()
                .fold(vec![lead_q], |acc, g| fp::mul(&acc, g, q));
            let lifted: Vec<BigInt> = prod
                .iter()
                .map(|&x| {
                    if x > half {
                        BigInt::from(x) - q
                    } else {
                        BigInt::from(x)
                    }
                })
                .collect();
            let g = from_ints(&primitive_part(&lifted));
            if integer_quotient(f, &g).is_some() {
                found = Some(g);
                break 'search;
            }
        }
    }
    cert.search = Some(LiftSearch {
        prime: q,
        coefficient_bound: bound.to_string(),
        factor_degrees: {
            let mut d: Vec<usize> = factors.iter().map(fp::deg).collect();
            d.sort();
            d
        },
        degrees,
        candidates_tried: tried,
    });
    cert.method = Method::CoefficientSearch;
    if let Some(g) = found {
        cert.verdict = Verdict::Reducible;
        cert.factor = Some(g);
    }
    Ok(cert)
}

/// Convenience wrapper for integer coefficients, constant term first.
#[allow(non_snake_case)]
pub fn irreducible_over_Z_ints(coeffs: &[BigInt]) -> Result<IrreducibilityCertificate, Error> {
    irreducible_over_Z(&from_ints(coeffs))
}
