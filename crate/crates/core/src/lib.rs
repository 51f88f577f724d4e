//! Arithmetic of quaternionic Shimura surfaces admitting an involution of the
//! second kind.
//!
//! The crate works with exact rationals throughout. Floating point appears
//! only in the Dedekind zeta estimate for quartic fields, and every such value
//! is turned back into a fraction through [`recognize_rational`] with an
//! explicit error budget.

pub mod arith;
pub mod base;
pub mod error;
pub mod quadratic;
pub mod quartic;
pub mod quaternion;
pub mod search;
pub mod surface;
pub mod torsion;

pub use arith::{
    factorize, kronecker, poly_factor_mod_p, recognize_rational, square_part, PolyModP, Rational, RecognitionFailure,
};
pub use base::{BaseField, BasePrime};
pub use error::{Error, Result};
pub use quadratic::{ConjugateTag, QuadField, QuadPrime, ResidueField, Splitting};
pub use quartic::{zeta2_euler_product, PrimeShapes, QuarticField, QuarticPrime, ZetaEstimate};
pub use quaternion::{
    admissibility_report, admissibility_report_with, euler_number_general, euler_number_quadratic,
    invariant_order_exists, involution_exists, level_invariance_ok, subgroup_index, AdmissibilityReport, Check,
    EulerEstimate, EulerValue, QuaternionAlgebraData, SubgroupKind, SubgroupSpec,
};
pub use search::{
    compare_to_reference, enumerate_candidates, prune_by_torsion, run_search, CandidateRow, Comparison, RowStatus,
};
pub use surface::{
    fixed_curve_numbers, quotient_invariants, quotient_table, shimura_curve_genus, shimura_surface_invariants,
    quotient_for_pg, CurveData, CurveGenus, GeneralType, QuotientInvariants, SurfaceInvariants,
};
pub use torsion::{
    borel_torsion_verdict, cyclotomic_splitting, full_torsion_verdict, gamma1_torsion_orders, possible_torsion_orders,
    principal_torsion_verdict, unipotent_torsion_verdict, TorsionAssessment, TorsionOrder, TorsionVerdict,
};
