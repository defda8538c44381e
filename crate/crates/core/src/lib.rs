//! Exact certificates for the irreducibility of the even octics
//!
//! ```text
//! P_{a,u}(t) = t⁸ + 6Δt⁶ + (Δ² − 2A₀)t⁴ − 6ΔA₀t² + A₀²,   Δ = u² − a², A₀ = a²u²
//! ```
//!
//! for coprime `a ≠ u > 0`. The chain of checks runs:
//!
//! * [`family`]: the split `P = H₋H₊` over ℚ(√2) and the reduction of any
//!   further split to a rational point on `v² = 16y⁴ + 136y² + 1`;
//! * [`curves`]: the Jacobian of that quartic, its torsion, conductor and the
//!   explicit isomorphism to `Y² = X(X − 8)(X − 9)`;
//! * [`descent`]: an unconditional rank-zero proof by complete 2-descent;
//! * [`points`]: the eight rational points of the quartic and the values of
//!   `τ = y²` they allow;
//! * [`factorcheck`]: an independent irreducibility oracle over ℤ;
//! * [`pipeline`]: the assembled report and the parameter sweep.
//!
//! Everything is exact; there is no floating point on any decision path.

pub mod arith;
pub mod curves;
pub mod descent;
pub mod factorcheck;
pub mod family;
pub mod ntheory;
pub mod pipeline;
pub mod points;
pub mod poly;

pub use arith::{QuadRat, Rat};
pub use curves::{EllCurve, EllPoint, QuarticModel, TorsionReport};
pub use descent::TwoDescentReport;
pub use factorcheck::IrreducibilityCertificate;
pub use family::{CuboidParams, ReductionTrace, Sign};
pub use pipeline::{PipelineReport, SweepRecord};
pub use points::WeightedPoint;
pub use poly::Poly;

/// Version tag embedded in every JSON report.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    Params(#[from] family::ParamError),
    #[error("singular Weierstrass equation")]
    SingularCurve,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("curve does not have full rational 2-torsion")]
    NoFullTwoTorsion,
    #[error("curve is not given by an integral model")]
    NonIntegralModel,
    #[error("polynomial must be primitive with integer coefficients")]
    NonPrimitive,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("height bound must be at least 1")]
    InvalidBound,
}
