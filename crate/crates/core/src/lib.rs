//! Exact computation with linear partial differential operators.
//!
//! * [`coeffield`]: rational-function coefficient fields with a derivation table.
//! * [`ore`]: the operator ring K[δ₁,…,δ_m], term orders and right division.
//! * [`groebner`]: left Gröbner bases, ideal sums and intersections.
//! * [`gauge`]: staircases, Hilbert counts, dimension polynomials and gauges.
//! * [`series`]: chains of solution groups and their quotient gauges.

pub mod coeffield;
pub mod gauge;
pub mod groebner;
pub mod ore;
pub mod parse;
pub mod poly;
pub mod series;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use coeffield::{load_spec, FieldElement, FieldError, FieldSpec};
pub use gauge::{
    dimension_polynomial, dimension_polynomial_m2, gauge_of, gauge_of_ideal, hilbert_count,
    staircase_of, Gauge, GaugeError, GaugeReport, NumericalPolynomial, Staircase,
};
pub use groebner::{
    member, principal_generator, same_ideal, Engine, GroebnerBasis, GroebnerError, LeftIdeal,
};
pub use ore::{
    op_add, op_mul, parse_operator, right_reduce, verify_factorization, verify_intertwine,
    MultiIndex, OreError, OreOperator, OreRing, Reduction, TermOrder,
};
pub use series::{
    analyze, chain_from_right_factorization, compare_quotient_gauges, group_intersect, group_sum,
    refine, Chain, Comparison, Correspondence, QuotientGauge, Refinement, SeriesError,
    SeriesReport, StepPairing, Verdict,
};
