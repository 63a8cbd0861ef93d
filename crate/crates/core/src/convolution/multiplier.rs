//! Multipliers `A f = D_k(m * f)` for `m` in the span of Dunkl-Appell
//! polynomials and resolvent kernels `l_k(lambda, .)`.
//!
//! Both kinds convolve through compositions, `A_n * f = L_k^(n+1) f` and
//! `l_k(lambda, .) * f = L_(k,lambda) f`, and `D_k` acts on them through
//! `D_k(m * f) = (D_k m) * f + Phi{m} f`.

use num_complex::Complex64;

use super::dunkl_conv_smallk;
use crate::calculus::DunklParam;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::ParityGrid;
use crate::kernel::{Indicatrix, KernelSeries};
use crate::resolvent::{lk_grid, resolvent_apply, ResolventProblem};
use crate::scalar::Scalar;

/// Largest Appell degree accepted in a kernel function.
pub const MAX_APPELL_DEGREE: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `m = sum_n a_n A_(k,n) + sum_i c_i l_k(lambda_i, .)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KernelFunction {
    /// `appell[n]` is the coefficient of `A_(k,n)`.
    pub appell: Vec<Complex64>,
    /// `(lambda_i, c_i)`.
    pub resolvent: Vec<(Complex64, Complex64)>,
}

impl KernelFunction {
    /// `{1} = A_(k,0)`.
    pub fn one() -> Self {
        Self::appell(0)
    }

    pub fn appell(n: usize) -> Self {
        let mut appell = vec![ZERO; n + 1];
        appell[n] = Complex64::new(1.0, 0.0);
        KernelFunction {
            appell,
            resolvent: Vec::new(),
        }
    }

    pub fn resolvent_kernel(lambda: Complex64) -> Self {
        KernelFunction {
            appell: Vec::new(),
            resolvent: vec![(lambda, Complex64::new(1.0, 0.0))],
        }
    }

    fn check(&self, ind: &Indicatrix) -> Result<()> {
        if self.appell.len() > MAX_APPELL_DEGREE + 1 {
            return Err(Error::KernelClass(format!(
                "Appell degree {} exceeds {MAX_APPELL_DEGREE}",
                self.appell.len() - 1
            )));
        }
        for &(lambda, _) in &self.resolvent {
            if ind.eval(lambda, 0)?.norm() <= crate::kernel::DIVISOR_THRESHOLD {
                return Err(Error::KernelClass(format!(
                    "l_k({lambda}, .) does not exist: E_k vanishes there"
                )));
            }
        }
        Ok(())
    }

    /// `m` sampled on the nodes of `like`.
    pub fn sample<T: Scalar>(&self, k: f64, phi: &Functional<T>, like: &ParityGrid) -> Result<ParityGrid> {
        let param = DunklParam::new(k)?;
        let series = KernelSeries::new(&param);
        let ind = Indicatrix::new(&series, phi);
        self.check(&ind)?;
        let mut out = like.zeros_like();
        // A_n = L_k^n {1}
        let mut appell = ParityGrid::sample(|_| Complex64::new(1.0, 0.0), like.xmax(), like.n())?;
        for (n, a) in self.appell.iter().enumerate() {
            if n > 0 {
                appell = lk_grid(&appell, k, phi)?;
            }
            out = out.axpy(*a, &appell);
        }
        for &(lambda, c) in &self.resolvent {
            let e = ind.eval(lambda, 0)?;
            // the window is widest at the grid edge
            series.eval(lambda, like.xmax(), 0)?;
            let g = ParityGrid::sample(
                |x| series.eval(lambda, x, 0).unwrap_or(Complex64::new(f64::NAN, 0.0)) / e,
                like.xmax(),
                like.n(),
            )?;
            out = out.axpy(c, &g);
        }
        Ok(out)
    }

    /// `m * f` through `L_k` and resolvent compositions.
    pub fn convolve<T: Scalar>(&self, f: &ParityGrid, k: f64, phi: &Functional<T>) -> Result<ParityGrid> {
        let param = DunklParam::new(k)?;
        let ind = Indicatrix::new(&KernelSeries::new(&param), phi);
        self.check(&ind)?;
        let mut out = f.zeros_like();
        let mut power = f.clone();
        for a in &self.appell {
            power = lk_grid(&power, k, phi)?;
            out = out.axpy(*a, &power);
        }
        for &(lambda, c) in &self.resolvent {
            let r = resolvent_apply(&ResolventProblem::with_indicatrix(&ind, lambda, f.clone())?)?;
            out = out.axpy(c, &r);
        }
        Ok(out)
    }
}

/// `A f = D_k(m * f)`, with `D_k A_n = A_(n-1)`, `Phi{A_n} = [n = 0]`,
/// `D_k l_k(lambda, .) = lambda l_k(lambda, .)` and `Phi{l_k} = 1`.
pub fn multiplier_apply<T: Scalar>(
    m: &KernelFunction,
    f: &ParityGrid,
    k: f64,
    phi: &Functional<T>,
) -> Result<ParityGrid> {
    let param = DunklParam::new(k)?;
    let ind = Indicatrix::new(&KernelSeries::new(&param), phi);
    m.check(&ind)?;
    let mut out = f.scale(m.appell.first().copied().unwrap_or(ZERO));
    let mut power = f.clone();
    for a in m.appell.iter().skip(1) {
        power = lk_grid(&power, k, phi)?;
        out = out.axpy(*a, &power);
    }
    for &(lambda, c) in &m.resolvent {
        let r = resolvent_apply(&ResolventProblem::with_indicatrix(&ind, lambda, f.clone())?)?;
        out = out.axpy(c * lambda, &r).axpy(c, f);
    }
    Ok(out)
}

/// `sup |A(f * g) - (A f) * g|` with the convolution of `0 < k < 1`.
pub fn multiplier_check<T: Scalar>(
    operator: impl Fn(&ParityGrid) -> Result<ParityGrid>,
    f: &ParityGrid,
    g: &ParityGrid,
    k: f64,
    phi: &Functional<T>,
) -> Result<f64> {
    let lhs = operator(&dunkl_conv_smallk(f, g, k, phi)?)?;
    let rhs = dunkl_conv_smallk(&operator(f)?, g, k, phi)?;
    Ok(lhs.distance(&rhs))
}
