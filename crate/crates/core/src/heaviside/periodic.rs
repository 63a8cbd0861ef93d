//! Mean-periodic solutions: the homogeneous nonlocal Cauchy problem, and
//! the Duhamel route through `H = (1/P(S)) {1}`.

use num_complex::Complex64;

use super::{
    apply_polynomial, dunkl_powers, factor, partial_fractions, poly_roots, resolvent_powers,
    Blocks, CauchyProblem, Combination, RationalOperator, SolutionReport, ROOT_TOLERANCE,
};
use crate::calculus::DunklParam;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::ParityGrid;
use crate::poly::Polynomial;
use crate::scalar::{RealScalar, Scalar};
use crate::translation::{mp_defect, mp_sample, TranslationKernel, MEAN_PERIODIC_TOLERANCE};

/// Sample points used for the mean-periodicity defect.
const DEFECT_SAMPLES: usize = 13;

/// Mean-periodicity defects of the input and of the solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanPeriodicReport {
    pub input_defect: f64,
    pub output_defect: f64,
    /// `sup |P(D_k) u - f|`.
    pub residual_sup: f64,
}

struct Setup {
    cp: CauchyProblem,
    tk: TranslationKernel,
    samples: Vec<f64>,
    input_defect: f64,
}

fn setup<R: RealScalar, T: Scalar, U: Scalar>(
    k: &DunklParam<R>,
    phi: &Functional<T>,
    p: &Polynomial<U>,
    f: ParityGrid,
) -> Result<Setup> {
    let m = p.degree().unwrap_or(0);
    let cp = CauchyProblem::new(k, phi, p, &vec![U::zero(); m], f)?;
    let tk = TranslationKernel::with_default_nodes(cp.k())?;
    let samples = mp_sample(cp.rhs(), phi, DEFECT_SAMPLES);
    let input_defect = mp_defect(cp.rhs(), phi, &tk, &samples)?;
    if !(input_defect < MEAN_PERIODIC_TOLERANCE) {
        return Err(Error::NotMeanPeriodicInput {
            defect: input_defect,
        });
    }
    Ok(Setup {
        cp,
        tk,
        samples,
        input_defect,
    })
}

fn finish(setup: &Setup, u: &ParityGrid, residual_sup: f64) -> Result<MeanPeriodicReport> {
    let phi = setup.cp.indicatrix().functional();
    let output_defect = mp_defect(u, phi, &setup.tk, &setup.samples)?;
    if !(output_defect < MEAN_PERIODIC_TOLERANCE) {
        return Err(Error::Residual {
            context: "mean-periodicity of the solution",
            residual: output_defect,
            tolerance: MEAN_PERIODIC_TOLERANCE,
        });
    }
    Ok(MeanPeriodicReport {
        input_defect: setup.input_defect,
        output_defect,
        residual_sup,
    })
}

/// Mean-periodic solution of `P(D_k) u = f` for mean-periodic `f`, as the
/// nonlocal Cauchy problem with zero data.
pub fn mean_periodic_solve<R: RealScalar, T: Scalar, U: Scalar>(
    k: &DunklParam<R>,
    phi: &Functional<T>,
    p: &Polynomial<U>,
    f: ParityGrid,
) -> Result<(ParityGrid, SolutionReport, MeanPeriodicReport)> {
    let setup = setup(k, phi, p, f)?;
    let (u, report) = super::solve_nonlocal_cauchy(&setup.cp)?;
    let mp = finish(&setup, &u, report.residual_sup)?;
    Ok((u, report, mp))
}

/// The same solution as `D_k (H * f)` with `H = (1/P(S)) {1}`. Since
/// `H * f = (1 / (S P(S))) f`, the fraction `1 / (lambda P(lambda))` is
/// expanded with the extra root `0` (where `R_0 = L_k`) and `D_k` is applied
/// to the expansion symbolically.
pub fn duhamel_solve<R: RealScalar, T: Scalar, U: Scalar>(
    k: &DunklParam<R>,
    phi: &Functional<T>,
    p: &Polynomial<U>,
    f: ParityGrid,
) -> Result<(ParityGrid, MeanPeriodicReport)> {
    let setup = setup(k, phi, p, f)?;
    let cp = &setup.cp;
    factor(cp)?;
    let one = Complex64::new(1.0, 0.0);
    let shifted = &cp.p * &Polynomial::monomial(one, 1);
    let roots = poly_roots(&shifted, ROOT_TOLERANCE)?;
    let fractions = partial_fractions(
        &RationalOperator::new(Polynomial::constant(one), shifted)?,
        &roots,
    )?;

    let m = cp.order();
    let mut convolution = Combination::zero(&roots, m + 1);
    let mut blocks = Blocks {
        f_derivs: dunkl_powers(&cp.f, cp.k(), m + 1),
        resolvents: Vec::with_capacity(roots.len()),
        kernels: Vec::with_capacity(roots.len()),
    };
    for (j, &(mu, kappa)) in roots.iter().enumerate() {
        blocks
            .resolvents
            .push(resolvent_powers(&cp.indicatrix, mu, kappa, &cp.f)?);
        blocks.kernels.push(vec![cp.f.zeros_like(); kappa]);
        for l in 1..=kappa {
            convolution.resolvents[j][l - 1] = fractions.coefficient(mu, l);
        }
    }
    let u_form = convolution.dunkl(&roots);
    let u = u_form.evaluate(&blocks);
    let (_, image) = apply_polynomial(cp, &roots, u_form);
    let residual_sup = image.evaluate(&blocks).sub(&cp.f).sup_norm();
    let tolerance = 1e-5 * (1.0 + cp.f.sup_norm());
    if residual_sup > tolerance {
        return Err(Error::Residual {
            context: "P(D_k) u - f (Duhamel)",
            residual: residual_sup,
            tolerance,
        });
    }
    let mp = finish(&setup, &u, residual_sup)?;
    Ok((u, mp))
}
