//! Rational functions of the algebraic Dunkl operator and their partial
//! fraction expansions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `numerator(S) / denominator(S)`, denominator monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalOperator<T> {
    pub numerator: Polynomial<T>,
    pub denominator: Polynomial<T>,
}

impl<T: Scalar> RationalOperator<T> {
    /// Normalizes the denominator to be monic.
    pub fn new(numerator: Polynomial<T>, denominator: Polynomial<T>) -> Result<Self> {
        let lead = denominator
            .leading()
            .cloned()
            .ok_or_else(|| Error::Parameter("denominator is the zero polynomial".into()))?;
        let inv = T::one() / lead;
        Ok(RationalOperator {
            numerator: numerator.scale(&inv),
            denominator: denominator.scale(&inv),
        })
    }

    /// `deg numerator < deg denominator`.
    pub fn is_proper(&self) -> bool {
        match (self.numerator.degree(), self.denominator.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n < d,
            (Some(_), None) => false,
        }
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.numerator.eval_complex(lambda) / self.denominator.eval_complex(lambda)
    }
}

/// `coefficient / (S - root)^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractionTerm {
    pub root: Complex64,
    pub order: usize,
    pub coefficient: Complex64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PartialFractionForm {
    pub terms: Vec<PartialFractionTerm>,
}

impl PartialFractionForm {
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coefficient / (lambda - t.root).powi(t.order as i32))
            .sum()
    }

    /// Coefficient of `1 / (S - root)^order`, zero when absent.
    pub fn coefficient(&self, root: Complex64, order: usize) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.order == order && t.root == root)
            .map(|t| t.coefficient)
            .sum()
    }
}

/// Boundary-data polynomial
/// `Q(S) = sum_mu (sum_{nu <= m-mu-1} a_nu alpha_{m-mu-nu-1}) S^mu`
/// for `P(S) = a_0 S^m + ... + a_m`.
pub fn boundary_polynomial<T: Scalar>(p: &Polynomial<T>, alpha: &[T]) -> Result<Polynomial<T>> {
    let m = p.degree().unwrap_or(0);
    if m == 0 {
        return Err(Error::Parameter("P must have degree >= 1".into()));
    }
    if alpha.len() != m {
        return Err(Error::Parameter(format!(
            "need {m} boundary values, got {}",
            alpha.len()
        )));
    }
    let a = |nu: usize| p.coeff(m - nu);
    Ok(Polynomial::new(
        (0..m)
            .map(|mu| {
                (0..m - mu).fold(T::zero(), |acc, nu| {
                    acc + a(nu) * alpha[m - mu - nu - 1].clone()
                })
            })
            .collect(),
    ))
}

/// `(1 / P(S), Q(S) / P(S))`.
pub fn algebraize<T: Scalar>(
    p: &Polynomial<T>,
    alpha: &[T],
) -> Result<(RationalOperator<T>, RationalOperator<T>)> {
    let q = boundary_polynomial(p, alpha)?;
    Ok((
        RationalOperator::new(Polynomial::constant(T::one()), p.clone())?,
        RationalOperator::new(q, p.clone())?,
    ))
}

/// Taylor coefficients of `a / b` from those of `a` and `b`, `b[0] != 0`.
fn series_quotient(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let at = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let mut q: Vec<Complex64> = Vec::with_capacity(len);
    for j in 0..len {
        let mut s = at(a, j);
        for i in 1..=j {
            s -= at(b, i) * q[j - i];
        }
        q.push(s / b[0]);
    }
    q
}

/// Points where the reconstruction identity is checked.
fn probe_points(roots: &[(Complex64, usize)]) -> Vec<Complex64> {
    let scale = 1.0 + roots.iter().map(|r| r.0.norm()).fold(0.0, f64::max);
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (1..)
        .map(|i| {
            let t = i as f64;
            let radius = scale * (0.3 + 1.5 * (t * std::f64::consts::SQRT_2).fract());
            Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (t * golden).fract())
        })
        .filter(|z| roots.iter().all(|r| (z - r.0).norm() > 0.05 * scale))
        .take(20)
        .collect()
}

/// Partial fractions of a proper rational operator whose denominator has the
/// given roots. For a root `mu` of multiplicity `kappa`, with
/// `g = numerator / (denominator / (S - mu)^kappa)` expanded at `mu`, the
/// coefficient of `1 / (S - mu)^l` is `g_(kappa - l)`.
pub fn partial_fractions(
    r: &RationalOperator<Complex64>,
    roots: &[(Complex64, usize)],
) -> Result<PartialFractionForm> {
    if !r.is_proper() {
        return Err(Error::Parameter("partial fractions need a proper fraction".into()));
    }
    let total: usize = roots.iter().map(|x| x.1).sum();
    if Some(total) != r.denominator.degree() {
        return Err(Error::Parameter("roots do not cover the denominator".into()));
    }
    let lead = *r.denominator.leading().expect("nonzero denominator");
    let mut terms = Vec::new();
    for (j, &(mu, kappa)) in roots.iter().enumerate() {
        let others: Vec<(Complex64, usize)> = roots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, x)| *x)
            .collect();
        let cofactor = Polynomial::from_roots(&others).scale(&lead);
        let g = series_quotient(&r.numerator.shift(&mu), &cofactor.shift(&mu), kappa);
        for l in 1..=kappa {
            terms.push(PartialFractionTerm {
                root: mu,
                order: l,
                coefficient: g[kappa - l],
            });
        }
    }
    let form = PartialFractionForm { terms };

    let error = probe_points(roots)
        .into_iter()
        .map(|z| {
            let exact = r.eval(z);
            (form.eval(z) - exact).norm() / (1.0 + exact.norm())
        })
        .fold(0.0, f64::max);
    if !(error < 1e-10) {
        return Err(Error::Reconstruction { error });
    }
    Ok(form)
}
