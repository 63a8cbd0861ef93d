use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the calculus.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("non-finite sample at x = {node}")]
    Evaluation { node: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("functional is not normalized: Phi{{1}} = {value}")]
    UnnormalizedFunctional { value: Complex64 },

    #[error("point {x} lies outside the grid domain [-{xmax}, {xmax}]")]
    Domain { x: f64, xmax: f64 },

    #[error("translation argument {x} leaves the grid domain [0, {xmax}]")]
    DomainExceeded { x: f64, xmax: f64 },

    #[error("|lambda x| = {value} exceeds the series window {window}; rescale the problem")]
    Range { value: f64, window: f64 },

    #[error("argument principle counts {expected} zeros but {} were found", found.len())]
    IncompleteZeroSet { expected: usize, found: Vec<Complex64> },

    #[error("S_k - lambda is a divisor of zero at lambda = {lambda} (|E_k| = {modulus:e})")]
    DivisorOfZero { lambda: Complex64, modulus: f64 },

    #[error("residual {residual:e} exceeds tolerance {tolerance:e} ({context})")]
    Residual {
        context: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("root finder did not converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("resonance: indicatrix vanishes at roots {}", list(roots))]
    Resonance { roots: Vec<Complex64> },

    #[error("partial fraction reconstruction error {error:e}")]
    Reconstruction { error: f64 },

    #[error("boundary system is singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("right-hand side is not mean-periodic (defect {defect:e})")]
    NotMeanPeriodicInput { defect: f64 },

    #[error("intertwining round trip error {error:e} exceeds 1e-3")]
    RoundTrip { error: f64 },

    #[error("function is outside the supported kernel class: {0}")]
    KernelClass(String),
}

fn list(zs: &[Complex64]) -> String {
    let items: Vec<String> = zs.iter().map(|z| z.to_string()).collect();
    format!("[{}]", items.join(", "))
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
