//! Gauss-Jacobi rules and weighted adaptive integration.
//!
//! Rules are built Golub-Welsch style: nodes are the eigenvalues of the
//! Jacobi matrix of the three-term recurrence, then polished by Newton on
//! the orthonormal recurrence; weights are Christoffel numbers
//! `1 / sum_j p_j(x)^2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RuleKind {
    Legendre,
    /// Weight `(1 - y)^alpha (1 + y)^beta` on [-1, 1].
    Jacobi { alpha: f64, beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exponents(&self) -> (f64, f64) {
        match self.kind {
            RuleKind::Legendre => (0.0, 0.0),
            RuleKind::Jacobi { alpha, beta } => (alpha, beta),
        }
    }

    /// Sum over the rule of `w_i g(y_i)` on the reference interval.
    pub fn apply(&self, g: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(y, w)| g(*y) * *w)
            .sum()
    }

    /// Nodes and weights mapped onto [0, 1], weight `(1-s)^alpha s^beta`.
    pub fn on_unit_interval(&self) -> Vec<(f64, f64)> {
        let (alpha, beta) = self.exponents();
        let scale = 0.5f64.powf(alpha + beta + 1.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(y, w)| (0.5 * (y + 1.0), w * scale))
            .collect()
    }
}

/// Total mass of the Jacobi weight, `2^(a+b+1) B(a+1, b+1)`.
pub fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + libm::lgamma(alpha + 1.0)
        + libm::lgamma(beta + 1.0)
        - libm::lgamma(alpha + beta + 2.0))
    .exp()
}

/// Recurrence coefficients (diagonal a_j, off-diagonal b_j for j >= 1) of
/// the monic Jacobi polynomials.
fn jacobi_recurrence(m: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let diag = (0..m)
        .map(|j| {
            if j == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let t = 2.0 * j as f64 + ab;
                (beta * beta - alpha * alpha) / (t * (t + 2.0))
            }
        })
        .collect();
    let off = (1..m)
        .map(|j| {
            let jf = j as f64;
            let t = 2.0 * jf + ab;
            let b2 = if j == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * jf * (jf + alpha) * (jf + beta) * (jf + ab)
                    / (t * t * (t + 1.0) * (t - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    (diag, off)
}

/// Orthonormal polynomials p_0..p_m and p_m' at x.
fn orthonormal_at(x: f64, diag: &[f64], off: &[f64], mass: f64) -> (f64, f64, f64) {
    let m = diag.len();
    let (mut p_prev, mut p) = (0.0, 1.0 / mass.sqrt());
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut sum_sq = p * p;
    for j in 0..m {
        // b_{j+1}: for j = m-1 we need the next off-diagonal, extend formula
        let b_next = if j + 1 < m { off[j] } else { 1.0 };
        let b_cur = if j == 0 { 0.0 } else { off[j - 1] };
        let p_next = ((x - diag[j]) * p - b_cur * p_prev) / b_next;
        let d_next = (p + (x - diag[j]) * d - b_cur * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if j + 1 < m {
            sum_sq += p * p;
        }
    }
    (p, d, sum_sq)
}

/// m-point Gauss-Jacobi rule for `(1 - y)^alpha (1 + y)^beta` on [-1, 1].
pub fn gauss_jacobi(m: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 nodes, got {m}")));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Parameter(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let (diag, off) = jacobi_recurrence(m, alpha, beta);
    let mut jm = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        jm[(j, j)] = diag[j];
        if j + 1 < m {
            jm[(j, j + 1)] = off[j];
            jm[(j + 1, j)] = off[j];
        }
    }
    let mut nodes: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mass = jacobi_mass(alpha, beta);
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d, _) = orthonormal_at(*x, &diag, &off, mass);
            if d == 0.0 {
                break;
            }
            let step = p / d;
            if step.abs() > 1e-8 {
                break;
            }
            *x -= step;
            if step.abs() <= 1e-14 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, _, sum_sq) = orthonormal_at(*x, &diag, &off, mass);
        weights.push(1.0 / sum_sq);
    }
    let kind = if alpha == 0.0 && beta == 0.0 {
        RuleKind::Legendre
    } else {
        RuleKind::Jacobi { alpha, beta }
    };
    Ok(QuadratureRule {
        nodes,
        weights,
        kind,
    })
}

/// m-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(m: usize) -> QuadratureRule {
    gauss_jacobi(m.max(2), 0.0, 0.0).expect("Legendre exponents are valid")
}

/// Raised when adaptive refinement stops on the panel budget.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceWarning {
    pub last_change: f64,
    pub panels: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub panels: usize,
    pub warning: Option<ToleranceWarning>,
}

/// Largest panel count tried by [`integrate`].
pub const PANEL_BUDGET: usize = 1 << 12;

/// Relative agreement between successive refinements that ends [`integrate`].
pub const REFINE_TOL: f64 = 1e-10;

/// `integral_a^b (b - x)^alpha (x - a)^beta g(x) dx`, with (alpha, beta) the
/// exponents of `rule` (zero for Legendre).
///
/// Panels are doubled until two successive estimates agree. The panel
/// touching `a` carries the `(x - a)^beta` singularity with a Jacobi(0, beta)
/// rule, the panel touching `b` carries `(b - x)^alpha`, interior panels use
/// Legendre nodes on the full weight.
pub fn integrate(
    g: impl Fn(f64) -> Complex64,
    rule: &QuadratureRule,
    a: f64,
    b: f64,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Parameter(format!("bad interval [{a}, {b}]")));
    }
    let (alpha, beta) = rule.exponents();
    let m = rule.len();
    let left = gauss_jacobi(m, 0.0, beta)?;
    let right = gauss_jacobi(m, alpha, 0.0)?;
    let mid = gauss_legendre(m);
    let weight = |x: f64| (b - x).max(0.0).powf(alpha) * (x - a).max(0.0).powf(beta);

    let estimate = |panels: usize| -> Complex64 {
        if panels == 1 {
            let half = 0.5 * (b - a);
            let scale = half.powf(alpha + beta + 1.0);
            return rule.apply(|y| g(a + half * (y + 1.0))) * scale;
        }
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let map = |y: f64| lo + half * (y + 1.0);
            acc += if p == 0 {
                left.apply(|y| {
                    let x = map(y);
                    g(x) * (b - x).powf(alpha)
                }) * half.powf(beta + 1.0)
            } else if p == panels - 1 {
                right.apply(|y| {
                    let x = map(y);
                    g(x) * (x - a).powf(beta)
                }) * half.powf(alpha + 1.0)
            } else {
                mid.apply(|y| {
                    let x = map(y);
                    g(x) * weight(x)
                }) * half
            };
        }
        acc
    };

    let mut panels = 1;
    let mut prev = estimate(panels);
    loop {
        let next_panels = panels * 2;
        let next = estimate(next_panels);
        let change = (next - prev).norm();
        if change <= REFINE_TOL * next.norm().max(f64::MIN_POSITIVE) {
            return Ok(Integral {
                value: next,
                panels: next_panels,
                warning: None,
            });
        }
        if next_panels >= PANEL_BUDGET {
            return Ok(Integral {
                value: next,
                panels: next_panels,
                warning: Some(ToleranceWarning {
                    last_change: change,
                    panels: next_panels,
                }),
            });
        }
        panels = next_panels;
        prev = next;
    }
}
