//! Exact symbolic toolkit for rational functions of two real variables.
//!
//! The crate decides continuity (regulousness), `C^k` class and the number of
//! point blow-up stages needed to make a planar rational function regular, and
//! builds verified sum-of-squares certificates for nonnegative functions that
//! become regular after a single blow-up.
//!
//! Everything is computed over the rationals; there is no floating point in
//! any decision path.
//!
//! Layout:
//!
//! - [`poly`]: bivariate and univariate polynomials over `Q`, gcd, resultants,
//!   homogeneous decompositions, four-square decomposition of rationals.
//! - [`realroots`]: Sturm sequences, real root isolation, definiteness of
//!   binary forms and a finite-zero-set decision procedure in the plane.
//! - [`ratfunc`]: reduced rational functions, derivatives, arcs, orders.
//! - [`resolve`]: blow-up charts, resolution trees and continuity decisions.
//! - [`classify`]: `C^k` classification and flattening powers.
//! - [`certify`]: sum-of-squares certificates and their exact verifier.

pub mod certify;
pub mod classify;
mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod realroots;
pub mod resolve;

pub use certify::{
    bad_point_step, bad_set, certify_nonnegative, find_sos_witness, flat_case_certificate, product_of_sos, scalar_absorb,
    verify_certificate, CertifyError, PipelineState, RatSosCertificate, SosRep, StepTrace, VerificationReport,
};
pub use classify::{flat_power, regularity_class, verify_k_flat, ClassificationReport, ClassifyError, PoleClass};
pub use poly::{
    four_squares, gcd_poly, parse_rat, rat, rat_to_string, ratio, resultant, squarefree_part, HomogDecomp, Mono, Point,
    Poly1, Poly2, PolyError, Rat, Var,
};
pub use ratfunc::{
    directional_derivative_at, expansion_criterion, order_at_rf, poles, reduce_fraction, restrict_to_arc, ArcRestriction,
    PoleSet, RatFunc, RatFuncError, UniRatFunc,
};
pub use realroots::{
    definiteness_of_form, is_isolated_zero, local_positive_definiteness, real_roots, sturm_count, zero_set_2d,
    Definiteness, DefinitenessVerdict, Interval, RootsError, Span, ZeroSet2D,
};
pub use resolve::{
    blowup_charts, continuity_at, one_blowup_criterion, resolve, Chart, Continuity, ResolutionReport, ResolveError,
    Verdict,
};
