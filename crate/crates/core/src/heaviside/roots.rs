//! Polynomial roots with multiplicities by Aberth-Ehrlich iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Sweep budget for the simultaneous iteration.
pub const MAX_SWEEPS: usize = 200;
/// Approximations closer than this (relative to `1 + |z|`) are one root.
pub const CLUSTER_DISTANCE: f64 = 1e-6;
/// Approximations this close are tested as one multiple root.
const MERGE_REACH: f64 = 1e-3;

/// `sum |c_i| |z|^i`, the rounding scale of Horner evaluation at `z`.
fn horner_scale(p: &Polynomial<Complex64>, z: Complex64) -> f64 {
    let r = z.norm();
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.norm())
}

fn initial_guesses(p: &Polynomial<Complex64>) -> Vec<Complex64> {
    let m = p.degree().expect("degree checked");
    let lead = p.coeffs()[m];
    let center = -p.coeff(m - 1) / (lead * m as f64);
    let shifted = Polynomial::new(p.shift(&center));
    // geometric mean of the shifted root moduli, floored away from zero
    let radius = (shifted.coeff(0) / lead).norm().powf(1.0 / m as f64).max(1e-3);
    (0..m)
        .map(|j| {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / m as f64 + 0.4;
            center + Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(p: &Polynomial<Complex64>) -> Result<Vec<Complex64>> {
    let dp = p.derivative();
    let mut z = initial_guesses(p);
    let m = z.len();
    for _ in 0..MAX_SWEEPS {
        let mut settled = true;
        for j in 0..m {
            let pz = p.eval_complex(z[j]);
            // Horner rounding level: no further progress is possible
            if pz.norm() <= 4.0 * f64::EPSILON * m as f64 * horner_scale(p, z[j]) {
                continue;
            }
            let ratio = pz / dp.eval_complex(z[j]);
            let repulsion: Complex64 = (0..m)
                .filter(|&i| i != j)
                .map(|i| 1.0 / (z[j] - z[i]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[j] -= step;
            if step.norm() >= 1e-13 * (1.0 + z[j].norm()) {
                settled = false;
            }
        }
        if settled {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence { sweeps: MAX_SWEEPS })
}

/// Single-link clusters of `z` at the given relative distance.
fn clusters(z: &[Complex64], reach: f64) -> Vec<Vec<Complex64>> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &w in z {
        let touching: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|v| (v - w).norm() < reach * (1.0 + w.norm())))
            .map(|(i, _)| i)
            .collect();
        let mut merged = vec![w];
        for &i in touching.iter().rev() {
            merged.extend(groups.remove(i));
        }
        groups.push(merged);
    }
    groups
}

fn mean(z: &[Complex64]) -> Complex64 {
    z.iter().sum::<Complex64>() / z.len() as f64
}

/// True when `p, p', ..., p^(kappa-1)` all vanish at `c` to rounding level.
fn is_root_of_order(p: &Polynomial<Complex64>, c: Complex64, kappa: usize) -> bool {
    let mut d = p.clone();
    for order in 0..kappa {
        // a multiple root pins derivatives only to eps^((kappa-order)/kappa)
        let slack = f64::EPSILON.powf((kappa - order) as f64 / kappa as f64);
        if d.eval_complex(c).norm() > 1e3 * slack * horner_scale(&d, c) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// Newton on `p^(kappa-1)`, where the multiple root is simple.
fn polish(p: &Polynomial<Complex64>, mut c: Complex64, kappa: usize) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..kappa {
        d = d.derivative();
    }
    let dd = d.derivative();
    for _ in 0..8 {
        let den = dd.eval_complex(c);
        if den.norm() == 0.0 {
            break;
        }
        let step = d.eval_complex(c) / den;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        c -= step;
        if step.norm() <= 1e-16 * (1.0 + c.norm()) {
            break;
        }
    }
    c
}

/// Distinct roots of `p` with multiplicities, `sum kappa = deg p`. Each
/// root satisfies `|p(mu)| < tol * ||p||` with `||p||` the Horner scale.
pub fn poly_roots(p: &Polynomial<Complex64>, tol: f64) -> Result<Vec<(Complex64, usize)>> {
    let m = p
        .degree()
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::Parameter("root finding needs degree >= 1".into()))?;
    let z = if m == 1 {
        vec![-p.coeff(0) / p.coeff(1)]
    } else {
        aberth(p)?
    };

    let mut roots = Vec::new();
    for wide in clusters(&z, MERGE_REACH) {
        let groups = if wide.len() > 1 && is_root_of_order(p, mean(&wide), wide.len()) {
            vec![wide]
        } else {
            clusters(&wide, CLUSTER_DISTANCE)
        };
        for g in groups {
            let kappa = g.len();
            roots.push((polish(p, mean(&g), kappa), kappa));
        }
    }
    for (mu, _) in &roots {
        if p.eval_complex(*mu).norm() >= tol * horner_scale(p, *mu).max(f64::MIN_POSITIVE) {
            return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
        }
    }
    roots.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("roots are finite")
    });
    Ok(roots)
}
