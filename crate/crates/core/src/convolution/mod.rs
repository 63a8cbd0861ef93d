//! The intertwining operator `V_k`, its inverse for `0 < k < 1`, the
//! convolution `~*` of the classical right inverse `Lambda`, and the Dunkl
//! convolution `f * g = V_k[(V_k^-1 f) ~* (V_k^-1 g)]`.

mod multiplier;

pub use multiplier::{multiplier_apply, multiplier_check, KernelFunction, MAX_APPELL_DEGREE};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::{differentiate, Parity, ParityGrid};
use crate::quadrature::{gauss_jacobi, gauss_legendre, QuadratureRule};
use crate::scalar::Scalar;

/// Jacobi nodes used by `V_k` and its inverse.
pub const VK_NODES: usize = 64;
/// Jacobi nodes per atom in the composed functional `Phi o V_k`.
pub const TILDE_NODES: usize = 16;
/// Round-trip tolerance of [`vk_inverse_smallk`].
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Panel width of the inner convolution integral.
const PANEL: f64 = 0.5;

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `b_k = Gamma(2k+1) / (2^(2k) Gamma(k) Gamma(k+1))`.
fn vk_normalization(k: f64) -> f64 {
    (ln_gamma(2.0 * k + 1.0) - 2.0 * k * std::f64::consts::LN_2 - ln_gamma(k) - ln_gamma(k + 1.0)).exp()
}

fn vk_rule(k: f64, nodes: usize) -> Result<Vec<(f64, f64)>> {
    let rule = gauss_jacobi(nodes, k - 1.0, k)?;
    let b = vk_normalization(k);
    Ok(rule.nodes.iter().zip(&rule.weights).map(|(&y, &w)| (y, b * w)).collect())
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::Parameter(format!("k must be >= 0, got {k}")));
    }
    Ok(())
}

/// `V_k f(x) = b_k int_-1^1 f(x y) (1-y)^(k-1) (1+y)^k dy` at the nodes of
/// `f`; the identity for `k = 0`.
pub fn vk_forward(f: &ParityGrid, k: f64) -> Result<ParityGrid> {
    check_k(k)?;
    if k == 0.0 {
        return Ok(f.clone());
    }
    let rule = vk_rule(k, VK_NODES)?;
    let mut even = Vec::with_capacity(f.n() + 1);
    let mut odd = Vec::with_capacity(f.n() + 1);
    for i in 0..=f.n() {
        let x = f.node(i);
        let (mut e, mut o) = (ZERO, ZERO);
        for &(y, w) in &rule {
            e += f.eval_even(x * y)? * w;
            o += f.eval_odd(x * y)? * w;
        }
        even.push(e);
        odd.push(o);
    }
    ParityGrid::from_parts(f.xmax(), even, odd)
}

/// `V_k f` sampled on a grid, with `f` evaluated exactly at the quadrature
/// points.
pub fn vk_forward_fn(
    f: impl Fn(f64) -> Complex64,
    k: f64,
    xmax: f64,
    n: usize,
) -> Result<ParityGrid> {
    check_k(k)?;
    if k == 0.0 {
        return ParityGrid::sample(f, xmax, n);
    }
    let rule = vk_rule(k, VK_NODES)?;
    ParityGrid::sample(|x| rule.iter().map(|&(y, w)| f(x * y) * w).sum(), xmax, n)
}

fn unit_rule(nodes: usize, alpha: f64, beta: f64) -> Result<Vec<(f64, f64)>> {
    Ok(gauss_jacobi(nodes, alpha, beta)?.on_unit_interval())
}

/// `V_k^-1 f` for `0 < k < 1`. With `y = x sqrt(s)` the Abel integrals
/// become `(X/2) J_e(X)` and `(X^2/2) J_o(X)`, where
///
/// ```text
/// J_e(X) = int_0^1 (1-s)^(-k) s^(k-1/2) f_e(X sqrt s) ds
/// J_o(X) = int_0^1 (1-s)^(-k) s^k       f_o(X sqrt s) ds
/// ```
///
/// and `V_k^-1 f = (c_k / 4) [J_e + X J_e' + 2 J_o + X J_o']`.
pub fn vk_inverse_smallk(f: &ParityGrid, k: f64) -> Result<ParityGrid> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Parameter(format!("V_k inverse needs 0 < k < 1, got {k}")));
    }
    let even_rule = unit_rule(VK_NODES, -k, k - 0.5)?;
    let odd_rule = unit_rule(VK_NODES, -k, k)?;
    let n = f.n();
    let mut je = Vec::with_capacity(n + 1);
    let mut jo = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = f.node(i);
        let mut e = ZERO;
        for &(s, w) in &even_rule {
            e += f.eval_even(x * s.sqrt())? * w;
        }
        let mut o = ZERO;
        for &(s, w) in &odd_rule {
            o += f.eval_odd(x * s.sqrt())? * w;
        }
        je.push(e);
        jo.push(o);
    }
    let h = f.step();
    let dje = differentiate(&je, Parity::Even, h);
    let djo = differentiate(&jo, Parity::Odd, h);
    let c = 2.0 * std::f64::consts::PI.sqrt()
        / (ln_gamma(k + 0.5).exp() * ln_gamma(1.0 - k).exp())
        / 4.0;
    let even = (0..=n).map(|i| (je[i] + dje[i] * f.node(i)) * c).collect();
    let odd = (0..=n)
        .map(|i| (jo[i] * 2.0 + djo[i] * f.node(i)) * c)
        .collect();
    let inverse = ParityGrid::from_parts(f.xmax(), even, odd)?;

    let error = vk_forward(&inverse, k)?.distance(f);
    if !(error <= ROUND_TRIP_TOLERANCE) {
        return Err(Error::RoundTrip { error });
    }
    Ok(inverse)
}

/// The functional `Phi~ = Phi o V_k`, discretized as weighted atoms.
#[derive(Clone, Debug)]
pub struct TildeProblem {
    k: f64,
    phi: Functional<Complex64>,
    atoms: Vec<(f64, Complex64)>,
}

impl TildeProblem {
    pub fn new<T: Scalar>(k: f64, phi: &Functional<T>) -> Result<Self> {
        check_k(k)?;
        phi.require_normalized()?;
        let base = phi.discretize(2, 6);
        let atoms = if k == 0.0 {
            base
        } else {
            let rule = vk_rule(k, TILDE_NODES)?;
            base.iter()
                .flat_map(|&(a, w)| rule.iter().map(move |&(y, v)| (a * y, w * v)))
                .collect()
        };
        Ok(TildeProblem {
            k,
            phi: phi.to_complex(),
            atoms,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn functional(&self) -> &Functional<Complex64> {
        &self.phi
    }

    /// `Phi~{g}` for a pointwise evaluator.
    pub fn apply(&self, g: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
        self.atoms.iter().map(|&(t, w)| Ok(g(t)? * w)).sum()
    }

    fn reach(&self) -> f64 {
        self.atoms.iter().map(|a| a.0.abs()).fold(0.0, f64::max)
    }
}

/// `int_t^x f(x + t - tau) g(tau) dtau` by composite Gauss-Legendre.
fn inner_integral(
    f: &ParityGrid,
    g: &ParityGrid,
    x: f64,
    t: f64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let panels = ((x - t).abs() / PANEL).ceil().max(1.0) as usize;
    let width = (x - t) / panels as f64;
    let mut acc = ZERO;
    for p in 0..panels {
        let lo = t + p as f64 * width;
        for (&y, &w) in rule.nodes.iter().zip(&rule.weights) {
            let tau = lo + 0.5 * width * (y + 1.0);
            acc += f.eval(x + t - tau)? * g.eval(tau)? * (0.5 * width * w);
        }
    }
    Ok(acc)
}

/// `(f ~* g)(x) = Phi~_t{ int_t^x f(x + t - tau) g(tau) dtau }`.
pub fn tilde_conv(f: &ParityGrid, g: &ParityGrid, tp: &TildeProblem) -> Result<ParityGrid> {
    if !f.same_nodes(g) {
        return Err(Error::Parameter("convolution factors need the same grid".into()));
    }
    if tp.reach() > f.xmax() {
        return Err(Error::DomainExceeded {
            x: tp.reach(),
            xmax: f.xmax(),
        });
    }
    let rule = gauss_legendre(8);
    let value = |x: f64| tp.apply(|t| inner_integral(f, g, x, t, &rule));
    let pairs = (0..=f.n())
        .into_par_iter()
        .map(|i| Ok((value(f.node(i))?, value(-f.node(i))?)))
        .collect::<Result<Vec<_>>>()?;
    let even = pairs.iter().map(|(p, m)| (p + m) * 0.5).collect();
    let odd = pairs.iter().map(|(p, m)| (p - m) * 0.5).collect();
    ParityGrid::from_parts(f.xmax(), even, odd)
}

/// `Lambda f(x) = int_0^x f - Phi~_t{ int_0^t f }`, the right inverse of
/// `d/dx` annihilated by `Phi~`.
pub fn lambda_tilde(f: &ParityGrid, tp: &TildeProblem) -> Result<ParityGrid> {
    let shift = tp.apply(|t| f.integrate(0.0, t))?;
    let mut even = Vec::with_capacity(f.n() + 1);
    let mut odd = Vec::with_capacity(f.n() + 1);
    for i in 0..=f.n() {
        let x = f.node(i);
        let (plus, minus) = (f.integrate(0.0, x)?, f.integrate(0.0, -x)?);
        even.push((plus + minus) * 0.5 - shift);
        odd.push((plus - minus) * 0.5);
    }
    ParityGrid::from_parts(f.xmax(), even, odd)
}

/// `f * g = V_k[(V_k^-1 f) ~* (V_k^-1 g)]` for `0 < k < 1`.
pub fn dunkl_conv_smallk<T: Scalar>(
    f: &ParityGrid,
    g: &ParityGrid,
    k: f64,
    phi: &Functional<T>,
) -> Result<ParityGrid> {
    let tp = TildeProblem::new(k, phi)?;
    let (fi, gi) = (vk_inverse_smallk(f, k)?, vk_inverse_smallk(g, k)?);
    vk_forward(&tilde_conv(&fi, &gi, &tp)?, k)
}
