//! Extended Heaviside algorithm for the nonlocal Cauchy problem
//!
//! ```text
//! P(D_k) u = f,    Phi{D_k^j u} = alpha_j,   j < m = deg P,
//! ```
//!
//! with `P(S) = a_0 S^m + ... + a_m`. In operator form
//! `u = (1/P(S)) f + Q(S)/P(S)`; both fractions are split into partial
//! fractions over the roots of `P`, the `f` part is applied through resolvent
//! powers and the boundary part through lambda-jets of the resolvent kernel.

mod fractions;
mod periodic;
mod roots;

pub use fractions::{
    algebraize, boundary_polynomial, partial_fractions, PartialFractionForm, PartialFractionTerm,
    RationalOperator,
};
pub use periodic::{duhamel_solve, mean_periodic_solve, MeanPeriodicReport};
pub use roots::poly_roots;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::calculus::DunklParam;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::ParityGrid;
use crate::kernel::{resolvent_kernel_jets, Indicatrix, KernelSeries, DIVISOR_THRESHOLD};
use crate::poly::Polynomial;
use crate::resolvent::{dunkl_apply_grid, resolvent_apply, ParitySystem, ResolventProblem};
use crate::scalar::{RealScalar, Scalar};

/// Largest supported order of `P`.
pub const MAX_ORDER: usize = 8;
/// Largest order accepted by [`oracle_solve`].
pub const MAX_ORACLE_ORDER: usize = 6;
/// Indicatrix values below this at a root are reported as near-resonant.
pub const NEAR_RESONANCE: f64 = 1e-6;
/// Root residual tolerance relative to the Horner scale of `P`.
pub const ROOT_TOLERANCE: f64 = 1e-10;
/// Condition number above which the oracle's boundary system is singular.
pub const ORACLE_CONDITION_LIMIT: f64 = 1e6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `P(D_k) u = f` with `Phi{D_k^j u} = alpha_j`.
#[derive(Clone, Debug)]
pub struct CauchyProblem {
    indicatrix: Indicatrix,
    p: Polynomial<Complex64>,
    alpha: Vec<Complex64>,
    q: Polynomial<Complex64>,
    f: ParityGrid,
    real: bool,
}

impl CauchyProblem {
    /// `p` holds ascending coefficients; `alpha[j]` is the datum for `D_k^j u`.
    pub fn new<R: RealScalar, T: Scalar, U: Scalar>(
        k: &DunklParam<R>,
        phi: &Functional<T>,
        p: &Polynomial<U>,
        alpha: &[U],
        f: ParityGrid,
    ) -> Result<Self> {
        phi.require_normalized()?;
        let m = p.degree().unwrap_or(0);
        if m == 0 || m > MAX_ORDER {
            return Err(Error::Parameter(format!(
                "P must have degree 1..={MAX_ORDER}, got {m}"
            )));
        }
        // Q in the input field, so exact data gives an exact Q
        let q = boundary_polynomial(p, alpha)?.to_complex();
        let is_real = |z: Complex64| z.im == 0.0;
        let complex_phi = phi.to_complex();
        let real = p.to_complex().coeffs().iter().all(|c| is_real(*c))
            && alpha.iter().all(|a| is_real(a.to_complex()))
            && complex_phi.points().iter().all(|a| is_real(a.weight))
            && complex_phi.intervals().iter().all(|a| is_real(a.weight))
            && f.sup_imag() == 0.0;
        Ok(CauchyProblem {
            indicatrix: Indicatrix::new(&KernelSeries::new(k), phi),
            p: p.to_complex(),
            alpha: alpha.iter().map(Scalar::to_complex).collect(),
            q,
            f,
            real,
        })
    }

    pub fn order(&self) -> usize {
        self.p.degree().expect("validated degree")
    }

    pub fn k(&self) -> f64 {
        self.indicatrix.series().k()
    }

    pub fn indicatrix(&self) -> &Indicatrix {
        &self.indicatrix
    }

    pub fn polynomial(&self) -> &Polynomial<Complex64> {
        &self.p
    }

    pub fn boundary_data(&self) -> &[Complex64] {
        &self.alpha
    }

    /// `Q(S)` of the algebraized problem.
    pub fn boundary_polynomial(&self) -> &Polynomial<Complex64> {
        &self.q
    }

    pub fn rhs(&self) -> &ParityGrid {
        &self.f
    }

    /// Same problem with new boundary data and right-hand side.
    pub fn with_data(&self, alpha: &[Complex64], f: ParityGrid) -> Result<Self> {
        let q = boundary_polynomial(&self.p, alpha)?;
        Ok(CauchyProblem {
            alpha: alpha.to_vec(),
            q,
            real: self.real && alpha.iter().all(|a| a.im == 0.0) && f.sup_imag() == 0.0,
            f,
            ..self.clone()
        })
    }

    /// `a_nu`, the coefficient of `S^(m - nu)`.
    fn a(&self, nu: usize) -> Complex64 {
        self.p.coeff(self.order() - nu)
    }
}

/// Passes iff `|E_k(mu)| > 1e-10` at every root.
pub fn resonance_check(ind: &Indicatrix, roots: &[(Complex64, usize)]) -> Result<()> {
    let mut offending = Vec::new();
    for &(mu, _) in roots {
        if ind.eval(mu, 0)?.norm() <= DIVISOR_THRESHOLD {
            offending.push(mu);
        }
    }
    if offending.is_empty() {
        Ok(())
    } else {
        Err(Error::Resonance { roots: offending })
    }
}

/// Diagnostics of a Heaviside solve.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SolutionReport {
    pub roots: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub indicatrix_at_roots: Vec<Complex64>,
    /// Expansion of `1 / P(S)`.
    pub inverse_fractions: PartialFractionForm,
    /// Expansion of `Q(S) / P(S)`.
    pub boundary_fractions: PartialFractionForm,
    /// `sup |P(D_k) u - f|`.
    pub residual_sup: f64,
    /// `|Phi{D_k^j u} - alpha_j|` for `j < m`.
    pub bc_residuals: Vec<f64>,
    /// `sup |u - oracle|` when an oracle run was made.
    pub oracle_diff_sup: Option<f64>,
    pub warnings: Vec<String>,
}

/// Linear combination of the building blocks of a Heaviside solution:
/// `D_k^i f`, `R_mu^l f` (`l >= 1`) and kernel jets `K_(mu,n)`. `D_k` acts on
/// it exactly through
///
/// ```text
/// D R_mu^l f = mu R_mu^l f + R_mu^(l-1) f      (R_mu^0 f = f)
/// D K_(mu,n) = mu K_(mu,n) + K_(mu,n-1)         (K_(mu,-1) = 0)
/// ```
#[derive(Clone, Debug)]
struct Combination {
    f_derivs: Vec<Complex64>,
    /// `resolvents[j][l-1]`
    resolvents: Vec<Vec<Complex64>>,
    /// `kernels[j][n]`
    kernels: Vec<Vec<Complex64>>,
}

impl Combination {
    fn zero(roots: &[(Complex64, usize)], depth: usize) -> Self {
        Combination {
            f_derivs: vec![ZERO; depth + 1],
            resolvents: roots.iter().map(|r| vec![ZERO; r.1]).collect(),
            kernels: roots.iter().map(|r| vec![ZERO; r.1]).collect(),
        }
    }

    fn dunkl(&self, roots: &[(Complex64, usize)]) -> Self {
        let mut out = Combination::zero(roots, self.f_derivs.len() - 1);
        for i in 0..self.f_derivs.len() - 1 {
            out.f_derivs[i + 1] += self.f_derivs[i];
        }
        for (j, &(mu, kappa)) in roots.iter().enumerate() {
            for l in 0..kappa {
                let c = self.resolvents[j][l];
                out.resolvents[j][l] += mu * c;
                if l == 0 {
                    out.f_derivs[0] += c;
                } else {
                    out.resolvents[j][l - 1] += c;
                }
                let c = self.kernels[j][l];
                out.kernels[j][l] += mu * c;
                if l > 0 {
                    out.kernels[j][l - 1] += c;
                }
            }
        }
        out
    }

    fn axpy(&mut self, a: Complex64, other: &Combination) {
        for (x, y) in self.f_derivs.iter_mut().zip(&other.f_derivs) {
            *x += a * y;
        }
        for (xs, ys) in self.resolvents.iter_mut().zip(&other.resolvents) {
            for (x, y) in xs.iter_mut().zip(ys) {
                *x += a * y;
            }
        }
        for (xs, ys) in self.kernels.iter_mut().zip(&other.kernels) {
            for (x, y) in xs.iter_mut().zip(ys) {
                *x += a * y;
            }
        }
    }

    fn evaluate(&self, blocks: &Blocks) -> ParityGrid {
        let mut out = blocks.f_derivs[0].zeros_like();
        for (c, g) in self.f_derivs.iter().zip(&blocks.f_derivs) {
            if *c != ZERO {
                out = out.axpy(*c, g);
            }
        }
        for (cs, gs) in self.resolvents.iter().zip(&blocks.resolvents) {
            for (c, g) in cs.iter().zip(gs) {
                out = out.axpy(*c, g);
            }
        }
        for (cs, gs) in self.kernels.iter().zip(&blocks.kernels) {
            for (c, g) in cs.iter().zip(gs) {
                out = out.axpy(*c, g);
            }
        }
        out
    }
}

/// Sampled building blocks matching [`Combination`].
struct Blocks {
    f_derivs: Vec<ParityGrid>,
    resolvents: Vec<Vec<ParityGrid>>,
    kernels: Vec<Vec<ParityGrid>>,
}

/// Grids of `K_n(x) = (1/n!) d^n/dlambda^n [u_k(lambda x) / E_k(lambda)]` at
/// `lambda = mu`, `n < count`.
pub fn kernel_jet_grids(
    ind: &Indicatrix,
    mu: Complex64,
    count: usize,
    like: &ParityGrid,
) -> Result<Vec<ParityGrid>> {
    let n = like.n();
    let mut even = vec![Vec::with_capacity(n + 1); count];
    let mut odd = vec![Vec::with_capacity(n + 1); count];
    for i in 0..=n {
        let x = like.node(i);
        let plus = resolvent_kernel_jets(ind, mu, x, count - 1)?;
        let minus = resolvent_kernel_jets(ind, mu, -x, count - 1)?;
        for d in 0..count {
            even[d].push((plus[d] + minus[d]) * 0.5);
            odd[d].push((plus[d] - minus[d]) * 0.5);
        }
    }
    even.into_iter()
        .zip(odd)
        .map(|(e, o)| ParityGrid::from_parts(like.xmax(), e, o))
        .collect()
}

/// `R_mu^l f` for `l = 1..=count`.
fn resolvent_powers(
    ind: &Indicatrix,
    mu: Complex64,
    count: usize,
    f: &ParityGrid,
) -> Result<Vec<ParityGrid>> {
    if f.sup_norm() == 0.0 {
        return Ok(vec![f.clone(); count]);
    }
    let mut out: Vec<ParityGrid> = Vec::with_capacity(count);
    for _ in 0..count {
        let rhs = out.last().unwrap_or(f).clone();
        out.push(resolvent_apply(&ResolventProblem::with_indicatrix(ind, mu, rhs)?)?);
    }
    Ok(out)
}

fn dunkl_powers(f: &ParityGrid, k: f64, depth: usize) -> Vec<ParityGrid> {
    let mut out = vec![f.clone()];
    for i in 0..depth {
        let next = dunkl_apply_grid(&out[i], k);
        out.push(next);
    }
    out
}

/// Roots of `P`, resonance check and near-resonance warnings.
fn factor(cp: &CauchyProblem) -> Result<(Vec<(Complex64, usize)>, Vec<Complex64>, Vec<String>)> {
    let roots = poly_roots(&cp.p, ROOT_TOLERANCE)?;
    resonance_check(&cp.indicatrix, &roots)?;
    let mut values = Vec::with_capacity(roots.len());
    let mut warnings = Vec::new();
    for &(mu, _) in &roots {
        let e = cp.indicatrix.eval(mu, 0)?;
        if e.norm() < NEAR_RESONANCE {
            warnings.push(format!(
                "near resonance: |E_k({mu})| = {:.3e} is below {NEAR_RESONANCE:e}",
                e.norm()
            ));
        }
        values.push(e);
    }
    Ok((roots, values, warnings))
}

/// `D_k^i form` for `i = 0..=m`, and `P(D_k) form`, both symbolic.
fn apply_polynomial(
    cp: &CauchyProblem,
    roots: &[(Complex64, usize)],
    form: Combination,
) -> (Vec<Combination>, Combination) {
    let m = cp.order();
    let mut powers = vec![form];
    for i in 0..m {
        let next = powers[i].dunkl(roots);
        powers.push(next);
    }
    let mut image = Combination::zero(roots, powers[0].f_derivs.len() - 1);
    for nu in 0..=m {
        image.axpy(cp.a(nu), &powers[m - nu]);
    }
    (powers, image)
}

/// Closed-form solution of the nonlocal Cauchy problem.
pub fn solve_nonlocal_cauchy(cp: &CauchyProblem) -> Result<(ParityGrid, SolutionReport)> {
    let (roots, indicatrix_at_roots, mut warnings) = factor(cp)?;
    let m = cp.order();
    let (inverse, boundary) = (
        RationalOperator::new(Polynomial::constant(Complex64::new(1.0, 0.0)), cp.p.clone())?,
        RationalOperator::new(cp.q.clone(), cp.p.clone())?,
    );
    let inverse_fractions = partial_fractions(&inverse, &roots)?;
    let boundary_fractions = partial_fractions(&boundary, &roots)?;

    let mut blocks = Blocks {
        f_derivs: dunkl_powers(&cp.f, cp.k(), m),
        resolvents: Vec::with_capacity(roots.len()),
        kernels: Vec::with_capacity(roots.len()),
    };
    let mut u_form = Combination::zero(&roots, m);
    for (j, &(mu, kappa)) in roots.iter().enumerate() {
        blocks
            .resolvents
            .push(resolvent_powers(&cp.indicatrix, mu, kappa, &cp.f)?);
        blocks
            .kernels
            .push(kernel_jet_grids(&cp.indicatrix, mu, kappa, &cp.f)?);
        for l in 1..=kappa {
            u_form.resolvents[j][l - 1] = inverse_fractions.coefficient(mu, l);
            u_form.kernels[j][l - 1] = boundary_fractions.coefficient(mu, l);
        }
    }
    let u = u_form.evaluate(&blocks);

    let (powers, image) = apply_polynomial(cp, &roots, u_form);
    let residual_sup = image.evaluate(&blocks).sub(&cp.f).sup_norm();
    let phi = cp.indicatrix.functional();
    let mut bc_residuals = Vec::with_capacity(m);
    for (j, form) in powers.iter().take(m).enumerate() {
        bc_residuals.push((phi.apply_grid(&form.evaluate(&blocks))? - cp.alpha[j]).norm());
    }

    let tolerance = 1e-5 * (1.0 + cp.f.sup_norm());
    if residual_sup > tolerance {
        return Err(Error::Residual {
            context: "P(D_k) u - f",
            residual: residual_sup,
            tolerance,
        });
    }
    if let Some(worst) = bc_residuals.iter().copied().find(|r| *r >= 1e-6) {
        return Err(Error::Residual {
            context: "boundary data Phi{D_k^j u}",
            residual: worst,
            tolerance: 1e-6,
        });
    }
    if cp.real {
        let imag = u.sup_imag();
        if imag >= 1e-8 {
            return Err(Error::Residual {
                context: "imaginary part of a real problem",
                residual: imag,
                tolerance: 1e-8,
            });
        }
    }
    if u.sup_norm() > 1e12 {
        warnings.push("solution exceeds 1e12 in magnitude; consider a smaller xmax".into());
    }

    let report = SolutionReport {
        roots: roots.iter().map(|r| r.0).collect(),
        multiplicities: roots.iter().map(|r| r.1).collect(),
        indicatrix_at_roots,
        inverse_fractions,
        boundary_fractions,
        residual_sup,
        bc_residuals,
        oracle_diff_sup: None,
        warnings,
    };
    Ok((u, report))
}

/// `1 / sigma_min` of the shooting matrix. Its columns come from unit
/// initial vectors, so this is the amplification of boundary data.
fn condition_number(b: &DMatrix<Complex64>) -> f64 {
    1.0 / b.singular_values().min()
}

/// Brute-force solution: march `v_j = D_k^j u` as a first-order Dunkl system
/// with `D_k v_(m-1) = (f - sum_{i>=1} a_i v_(m-i)) / a_0`, then fix the `m`
/// free values `v_j(0)` from `Phi{v_j} = alpha_j` by superposition.
pub fn oracle_solve(cp: &CauchyProblem) -> Result<ParityGrid> {
    let m = cp.order();
    if m > MAX_ORACLE_ORDER {
        return Err(Error::Parameter(format!(
            "oracle supports order <= {MAX_ORACLE_ORDER}, got {m}"
        )));
    }
    let a0 = cp.a(0);
    let mut matrix = vec![vec![ZERO; m]; m];
    for (j, row) in matrix.iter_mut().enumerate().take(m - 1) {
        row[j + 1] = Complex64::new(1.0, 0.0);
    }
    for i in 1..=m {
        matrix[m - 1][m - i] = -cp.a(i) / a0;
    }
    let scaled_f = cp.f.scale(1.0 / a0);
    let mut forcing: Vec<Option<&ParityGrid>> = vec![None; m];
    forcing[m - 1] = Some(&scaled_f);
    let (xmax, n) = (cp.f.xmax(), cp.f.n());

    let particular = ParitySystem {
        k: cp.k(),
        matrix: &matrix,
        forcing: &forcing,
    }
    .march(&vec![ZERO; m], xmax, n);
    let free = vec![None; m];
    let homogeneous: Vec<Vec<ParityGrid>> = (0..m)
        .map(|i| {
            let mut init = vec![ZERO; m];
            init[i] = Complex64::new(1.0, 0.0);
            ParitySystem {
                k: cp.k(),
                matrix: &matrix,
                forcing: &free,
            }
            .march(&init, xmax, n)
        })
        .collect();

    let phi = cp.indicatrix.functional();
    let mut b = DMatrix::from_element(m, m, ZERO);
    let mut rhs = nalgebra::DVector::from_element(m, ZERO);
    for j in 0..m {
        for (i, run) in homogeneous.iter().enumerate() {
            b[(j, i)] = phi.apply_grid(&run[j])?;
        }
        rhs[j] = cp.alpha[j] - phi.apply_grid(&particular[j])?;
    }
    let condition = condition_number(&b);
    if !(condition <= ORACLE_CONDITION_LIMIT) {
        return Err(Error::SingularSystem { condition });
    }
    let c = b
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem { condition })?;
    let mut u = particular[0].clone();
    for (i, run) in homogeneous.iter().enumerate() {
        u = u.axpy(c[i], &run[0]);
    }
    Ok(u)
}

#[cfg(test)]
mod tests;
