//! Numerical value distribution for canonical products.
//!
//! The crate evaluates Lindelof functions, the modified Anderson-Clunie
//! product and general canonical products in log-polar arithmetic, computes
//! Nevanlinna functionals and deficiency estimates, checks zero separation,
//! and rebuilds the coefficients `A`, `B` of `f'' + A f' + B f = 0` from the
//! zeros of `f` by Mittag-Leffler interpolation.

// `!(x > y)` checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy;
pub mod error;
pub mod interpolation;
pub mod logdomain;
pub mod nevanlinna;
pub mod products;
pub mod separation;
pub mod sequences;
pub mod special;

pub use cauchy::{cauchy_derivatives, CauchyOptions, Derivatives, Radius};
pub use error::{NevlabError, Result};
pub use interpolation::{
    build_coefficients, eval_h, interpolation_report, ml_exponents, ode_residual, target_sigma, InterpolationArtifacts,
    InterpolationReport, OdeResidual, Variant,
};
pub use logdomain::{lc_add, lc_mul, log_abs_one_minus, LogComplex};
pub use nevanlinna::{
    characteristic_sample, count_zeros, deficiency_scan, delta_n_lindelof_closed_form, integrated_counting,
    log_order_estimate, order_estimate, proximity, CharacteristicSample, DeficiencyScan, QuadOptions, Target,
};
pub use products::{
    derivative_at_zero, eval_poly_factor, eval_product, max_modulus_on_circle, weierstrass_factor, CanonicalProduct,
    Evaluator, MaxModulus,
};
pub use separation::{
    ac_min_chord, ac_separation_decomposition, separation_scan, separation_scan_range, witness_constant_search,
    witness_search_range, SeparationReport, Verdict, Weight, Witness,
};
pub use sequences::{
    ac_angles, ac_parameters, anderson_clunie_zeros, bank_zeros, check_power_inequalities, explicit_zeros,
    geometric_zeros, lindelof_zeros, paired_geometric_zeros, ACParameters, BankCap, ExplicitZero, Multiplicity,
    PairRule, SequenceKind, ZeroSequence,
};
