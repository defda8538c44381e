//! The assembled certificate for one parameter pair, and the sweep.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::curves::{
    conductor, iso_e0_e, jacobian_model, quartic_invariants, torsion_subgroup, ConductorReport,
    EllCurve, EllPoint, IsoDirection, QuarticModel, TorsionReport,
};
use crate::descent::{two_descent, Conclusion, TwoDescentReport};
use crate::factorcheck::{irreducible_over_Z, IrreducibilityCertificate, Verdict};
use crate::family::{
    build_H, build_P, h_irreducible_over_K, ordered_pairs, reduction_chain, verify_split,
    CuboidParams, ReductionTrace, Sign,
};
use crate::points::{
    map_c_to_e, search_quartic_points, tau_excluded, tau_set, TauExclusion, WeightedPoint,
};
use crate::{Error, SCHEMA_VERSION};

/// Height used for the point search when none is given.
pub const DEFAULT_HEIGHT: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Split,
    Reduction,
    Curves,
    Descent,
    Points,
    Exclusion,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineVerdict {
    IrreducibleVerified,
    Failure(Stage),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveBlock {
    #[serde(rename = "I")]
    pub i: Rat,
    #[serde(rename = "J")]
    pub j: Rat,
    #[serde(rename = "E0")]
    pub e0: EllCurve,
    #[serde(rename = "E")]
    pub e: EllCurve,
    /// `j(E₀)`, equal to `j(E)` when `e0_e_isomorphic` holds.
    pub j_invariant: Rat,
    /// `Δ(E₀)/Δ(E)`, expected `12¹²`
    pub disc_ratio: Rat,
    /// The Jacobian of the quartic is `E₀`, and the fixed change of
    /// variables carries `E₀` onto `E` and its torsion onto `E`'s torsion.
    pub e0_e_isomorphic: bool,
    pub torsion: TorsionReport,
    pub conductor: ConductorReport,
}

impl CurveBlock {
    pub fn compute() -> Result<Self, Error> {
        let (i, j) = quartic_invariants(&QuarticModel::fixed());
        let jac = jacobian_model(&i, &j)?;
        let e0 = EllCurve::e0_model();
        let e = EllCurve::e_model();
        let j0 = e0.j_invariant()?;
        let torsion = torsion_subgroup(&e);
        let images: BTreeSet<EllPoint> = torsion_subgroup(&e0)
            .points
            .iter()
            .map(|p| iso_e0_e(p, IsoDirection::E0ToE))
            .collect::<Result<_, _>>()?;
        let e0_e_isomorphic = jac == e0
            && j0 == e.j_invariant()?
            && images == torsion.points.iter().cloned().collect::<BTreeSet<_>>();
        Ok(CurveBlock {
            disc_ratio: e0.discriminant() / e.discriminant(),
            conductor: conductor(&e)?,
            j_invariant: j0,
            e0_e_isomorphic,
            torsion,
            i,
            j,
            e0,
            e,
        })
    }

    pub fn passes(&self) -> bool {
        self.i == Rat::from(18688)
            && self.j == Rat::from(-4874240)
            && self.e0_e_isomorphic
            && self.disc_ratio == Rat::from(12).pow(12)
            && self.torsion.group_invariants == [2, 4]
            && self.conductor.conductor == BigInt::from(48)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointsBlock {
    pub height: u64,
    pub points: Vec<WeightedPoint>,
    /// Image of each point on `E`, in the same order.
    pub images: Vec<EllPoint>,
    pub tau_set: BTreeSet<Rat>,
}

impl PointsBlock {
    pub fn compute(height: u64) -> Result<Self, Error> {
        let points = search_quartic_points(height)?;
        let images = points.iter().map(map_c_to_e).collect::<Result<_, _>>()?;
        Ok(PointsBlock {
            height,
            tau_set: tau_set(&points),
            points,
            images,
        })
    }

    /// The points map bijectively onto the torsion of `E` and only
    /// `τ ∈ {0, 1/4}` occurs.
    pub fn passes(&self, torsion: &TorsionReport) -> bool {
        let images: BTreeSet<&EllPoint> = self.images.iter().collect();
        let allowed: BTreeSet<Rat> = [Rat::zero(), Rat::new(1, 4).unwrap()].into_iter().collect();
        images.len() == self.points.len()
            && images == torsion.points.iter().collect()
            && self.tau_set.is_subset(&allowed)
    }
}

/// The parts of the certificate that do not depend on `(a, u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveEvidence {
    pub curve_block: CurveBlock,
    pub descent: TwoDescentReport,
    pub points_block: PointsBlock,
}

impl CurveEvidence {
    pub fn compute(height: u64) -> Result<Self, Error> {
        Ok(CurveEvidence {
            curve_block: CurveBlock::compute()?,
            descent: two_descent(&EllCurve::e_model())?,
            points_block: PointsBlock::compute(height)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageResult {
    pub stage: Stage,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub schema_version: &'static str,
    pub params: CuboidParams,
    /// `(H₋H₊ = P, gcd(H₋, H₊) = 1)`
    pub split_ok: (bool, bool),
    pub trace: ReductionTrace,
    /// `(H₋, H₊)` irreducible in K[t]
    pub k_irreducible: (bool, bool),
    /// `(H₋, H₊)` have coefficients outside ℚ
    pub h_not_rational: (bool, bool),
    pub curve_block: CurveBlock,
    pub descent: TwoDescentReport,
    pub points_block: PointsBlock,
    pub exclusion: TauExclusion,
    pub oracle: IrreducibilityCertificate,
    pub stages: Vec<StageResult>,
    pub verdict: PipelineVerdict,
}

/// Runs every stage for `params`, reusing the curve-level evidence.
pub fn verify_with(
    params: &CuboidParams,
    evidence: &CurveEvidence,
) -> Result<PipelineReport, Error> {
    let split = verify_split(params);
    let trace = reduction_chain(params);
    let k_irreducible = (
        h_irreducible_over_K(params, Sign::Minus),
        h_irreducible_over_K(params, Sign::Plus),
    );
    let h_not_rational = (
        build_H(params, Sign::Minus).to_rational().is_none(),
        build_H(params, Sign::Plus).to_rational().is_none(),
    );
    let exclusion = tau_excluded(params);
    let oracle = irreducible_over_Z(&build_P(params))?;

    let stages = vec![
        (Stage::Split, split.ok()),
        (
            Stage::Reduction,
            !trace.k_split_minus
                && !trace.k_split_plus
                && k_irreducible == (true, true)
                && h_not_rational == (true, true),
        ),
        (Stage::Curves, evidence.curve_block.passes()),
        (
            Stage::Descent,
            evidence.descent.conclusion == Conclusion::RankZeroProved,
        ),
        (
            Stage::Points,
            evidence.points_block.passes(&evidence.curve_block.torsion),
        ),
        (
            Stage::Exclusion,
            exclusion.excluded
                && !exclusion.two_a_squared_is_square
                && !exclusion.two_u_squared_is_square,
        ),
        (Stage::Oracle, oracle.verdict == Verdict::Irreducible),
    ];
    let verdict = stages
        .iter()
        .find(|(_, ok)| !ok)
        .map_or(PipelineVerdict::IrreducibleVerified, |(stage, _)| {
            PipelineVerdict::Failure(*stage)
        });
    log::info!("verified a={} u={}: {verdict:?}", params.a, params.u);

    Ok(PipelineReport {
        schema_version: SCHEMA_VERSION,
        params: params.clone(),
        split_ok: (split.product_matches, split.coprime),
        trace,
        k_irreducible,
        h_not_rational,
        curve_block: evidence.curve_block.clone(),
        descent: evidence.descent.clone(),
        points_block: evidence.points_block.clone(),
        exclusion,
        oracle,
        stages: stages
            .into_iter()
            .map(|(stage, passed)| StageResult { stage, passed })
            .collect(),
        verdict,
    })
}

pub fn verify(params: &CuboidParams, height: u64) -> Result<PipelineReport, Error> {
    verify_with(params, &CurveEvidence::compute(height)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainChecks {
    pub split: bool,
    /// Neither `Δ_S` nor its conjugate is a square in K.
    pub delta_s_nonsquare: bool,
    pub h_irreducible_k: bool,
    pub tau_excluded: bool,
    pub oracle_irreducible: bool,
    /// The chain and the oracle reach the same verdict.
    pub agreement: bool,
    /// At every pattern prime `p ≡ ±1 (mod 8)`, where 2 is a square, the
    /// degree pattern allows a quartic factor.
    pub split_pattern: bool,
}

impl ChainChecks {
    pub fn all(&self) -> bool {
        self.split
            && self.delta_s_nonsquare
            && self.h_irreducible_k
            && self.tau_excluded
            && self.oracle_irreducible
            && self.agreement
            && self.split_pattern
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub a: u64,
    pub u: u64,
    pub verdict: Verdict,
    pub method: crate::factorcheck::Method,
    pub primes_used: Vec<u64>,
    pub chain_checks: ChainChecks,
    pub ok: bool,
}

pub fn sweep_pair(a: u64, u: u64) -> Result<SweepRecord, Error> {
    let params = CuboidParams::new(a, u)?;
    let split = verify_split(&params).ok();
    let trace = reduction_chain(&params);
    let delta_s_nonsquare = !trace.k_split_minus && !trace.k_split_plus;
    let h_irreducible_k =
        h_irreducible_over_K(&params, Sign::Minus) && h_irreducible_over_K(&params, Sign::Plus);
    let tau_ok = tau_excluded(&params).excluded;
    let oracle = irreducible_over_Z(&build_P(&params))?;
    let oracle_irreducible = oracle.verdict == Verdict::Irreducible;
    let chain_irreducible = split && delta_s_nonsquare && h_irreducible_k && tau_ok;
    let split_pattern = oracle
        .feasible_degree_sets
        .iter()
        .filter(|pat| matches!(pat.prime % 8, 1 | 7))
        .all(|pat| pat.feasible_degrees.contains(&4));
    let chain_checks = ChainChecks {
        split,
        delta_s_nonsquare,
        h_irreducible_k,
        tau_excluded: tau_ok,
        oracle_irreducible,
        agreement: chain_irreducible == oracle_irreducible,
        split_pattern,
    };
    Ok(SweepRecord {
        a,
        u,
        verdict: oracle.verdict,
        method: oracle.method,
        primes_used: oracle.primes_used,
        ok: chain_checks.all(),
        chain_checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub schema_version: &'static str,
    pub limit: u64,
    pub pairs: usize,
    pub verified: usize,
    pub failures: Vec<(u64, u64)>,
}

/// Every ordered coprime pair `a ≠ u ≤ limit`, in parallel; records come
/// back in `(a, u)` order.
pub fn sweep(limit: u64) -> Result<(Vec<SweepRecord>, SweepSummary), Error> {
    let records: Vec<SweepRecord> = ordered_pairs(limit)
        .into_par_iter()
        .map(|(a, u)| sweep_pair(a, u))
        .collect::<Result<_, _>>()?;
    let summary = summarize(limit, &records);
    Ok((records, summary))
}

pub fn summarize(limit: u64, records: &[SweepRecord]) -> SweepSummary {
    SweepSummary {
        schema_version: SCHEMA_VERSION,
        limit,
        pairs: records.len(),
        verified: records.iter().filter(|r| r.ok).count(),
        failures: records
            .iter()
            .filter(|r| !r.ok)
            .map(|r| (r.a, r.u))
            .collect(),
    }
}
