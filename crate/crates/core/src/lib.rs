//! Nonlocal operational calculus for the one-dimensional Dunkl operator
//! `D_k f(x) = f'(x) + k (f(x) - f(-x)) / x`.
//!
//! Polynomial algebra and functionals are generic over the [`Scalar`] field
//! (exact [`BigRational`] or floating [`Complex64`]); sampled-function
//! numerics run on [`ParityGrid`]s of complex doubles.

pub mod calculus;
pub mod convolution;
pub mod error;
pub mod functional;
pub mod grid;
pub mod heaviside;
pub mod kernel;
pub mod poly;
pub mod quadrature;
pub mod resolvent;
pub mod scalar;
pub mod translation;

pub use num_complex::Complex64;
pub use num_rational::BigRational;

pub use calculus::{
    appell_sequence, dunkl_derivative_poly, lambda_k_poly, lk_poly, taylor_reconstruct, DunklParam,
    TaylorExpansion,
};
pub use convolution::{
    dunkl_conv_smallk, lambda_tilde, multiplier_apply, multiplier_check, tilde_conv, vk_forward,
    vk_forward_fn, vk_inverse_smallk, KernelFunction, TildeProblem,
};
pub use error::{Error, Result};
pub use functional::{Functional, IntervalAtom, PointAtom};
pub use grid::{Parity, ParityGrid};
pub use heaviside::{
    algebraize, boundary_polynomial, duhamel_solve, mean_periodic_solve, oracle_solve,
    partial_fractions, poly_roots, resonance_check, solve_nonlocal_cauchy, CauchyProblem,
    MeanPeriodicReport, PartialFractionForm, PartialFractionTerm, RationalOperator, SolutionReport,
};
pub use kernel::{
    bessel_j_normalized, indicatrix_eval, indicatrix_zeros, resolvent_kernel_eval, u_eval, Indicatrix,
    KernelSeries,
};
pub use poly::Polynomial;
pub use quadrature::{gauss_jacobi, gauss_legendre, integrate, QuadratureRule};
pub use resolvent::{
    dunkl_apply_grid, lk_grid, resolvent_apply, resolvent_power_apply, ResolventProblem,
};
pub use scalar::{RealScalar, Scalar};
pub use translation::{
    mp_defect, mp_sample, translate, translate_point, translation_property_check, TranslationDefects,
    TranslationKernel,
};

/// Polynomial with exact rational coefficients.
pub type RationalPolynomial = Polynomial<BigRational>;
/// Polynomial with complex floating coefficients.
pub type ComplexPolynomial = Polynomial<Complex64>;
/// Functional with exact rational atoms.
pub type RationalFunctional = Functional<BigRational>;
/// Functional with floating atoms.
pub type ComplexFunctional = Functional<Complex64>;
/// Exact deformation parameter.
pub type RationalParam = DunklParam<BigRational>;
/// Floating deformation parameter.
pub type FloatParam = DunklParam<f64>;
