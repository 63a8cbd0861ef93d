//! The Dunkl kernel `u_k(lambda x)`, normalized Bessel functions, the
//! indicatrix `E_k(lambda) = Phi_x{u_k(lambda x)}` and its zeros.
//!
//! `u_k` is the power series solving `D_k u = lambda u`, `u(0) = 1`:
//! `u_k(z) = sum_n c_n z^n` with `c_n = 1 / (b_1 b_2 ... b_n)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::calculus::DunklParam;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::scalar::{RealScalar, Scalar};

/// Hard cap on the number of series terms.
pub const N_MAX: usize = 400;
/// Largest admissible `|lambda x|`.
pub const SERIES_WINDOW: f64 = 50.0;
/// Relative size below which a past-peak term ends the summation.
const TRUNCATION: f64 = 1e-18;
/// `|E_k(lambda)|` at or below this makes `S_k - lambda` a divisor of zero.
pub const DIVISOR_THRESHOLD: f64 = 1e-10;

const SEED_GRID: usize = 40;
const DEDUP_DISTANCE: f64 = 1e-6;
const NEWTON_STEPS: usize = 100;
const CONTOUR_NODES: usize = 1024;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `n (n-1) ... (n-d+1)`.
fn falling(n: usize, d: usize) -> f64 {
    (n + 1 - d..=n).fold(1.0, |acc, j| acc * j as f64)
}

fn factorial(d: usize) -> f64 {
    falling(d, d)
}

/// `d`-th derivative of `sum_n coeffs[n] z^n`. `majorant[n]` bounds
/// `|coeffs[n]|` and decides truncation once past the peak of
/// `majorant[n] |z|^n`, so sparse series are not cut short.
fn series_jet(coeffs: &[Complex64], majorant: &[f64], z: Complex64, d: usize) -> Complex64 {
    let rz = z.norm();
    let peak = rz + d as f64 + 1.0;
    let mut acc = czero();
    let mut acc_abs = 0.0;
    let mut zp = Complex64::new(1.0, 0.0);
    let mut rp = 1.0;
    for n in d..coeffs.len() {
        let ff = falling(n, d);
        acc += coeffs[n] * ff * zp;
        let bound = majorant[n] * ff * rp;
        acc_abs += bound;
        if n as f64 > peak && bound <= TRUNCATION * acc_abs {
            break;
        }
        zp *= z;
        rp *= rz;
    }
    acc
}

/// Taylor coefficients `c_n` of `u_k`.
#[derive(Clone, Debug)]
pub struct KernelSeries {
    k: f64,
    coeffs: Vec<Complex64>,
    magnitudes: Vec<f64>,
}

impl KernelSeries {
    pub fn new<R: RealScalar>(k: &DunklParam<R>) -> Self {
        let k = k.to_f64();
        let mut magnitudes = Vec::with_capacity(N_MAX + 1);
        magnitudes.push(1.0);
        for n in 1..=N_MAX {
            let b = n as f64 + if n % 2 == 1 { 2.0 * k } else { 0.0 };
            magnitudes.push(magnitudes[n - 1] / b);
        }
        let coeffs = magnitudes.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        KernelSeries {
            k,
            coeffs,
            magnitudes,
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `c_n` for `n <= N_MAX`.
    pub fn coeff(&self, n: usize) -> f64 {
        self.magnitudes[n]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `d`-th lambda-derivative of `u_k(lambda x)`.
    pub fn eval(&self, lambda: Complex64, x: f64, d: usize) -> Result<Complex64> {
        let z = lambda * x;
        check_window(z.norm())?;
        Ok(series_jet(&self.coeffs, &self.magnitudes, z, d) * x.powi(d as i32))
    }
}

fn check_window(value: f64) -> Result<()> {
    if value > SERIES_WINDOW || !value.is_finite() {
        Err(Error::Range {
            value,
            window: SERIES_WINDOW,
        })
    } else {
        Ok(())
    }
}

/// `d/dlambda^d u_k(lambda x)`.
pub fn u_eval(ks: &KernelSeries, lambda: Complex64, x: f64, d: usize) -> Result<Complex64> {
    ks.eval(lambda, x, d)
}

/// Normalized Bessel function
/// `j_alpha(z) = sum_m (-z^2/4)^m / (m! (alpha+1)_m)`, `j_alpha(0) = 1`.
pub fn bessel_j_normalized(alpha: f64, z: Complex64) -> Result<Complex64> {
    if alpha.is_nan() || alpha <= -1.0 {
        return Err(Error::Parameter(format!("Bessel order must exceed -1, got {alpha}")));
    }
    check_window(z.norm())?;
    let w = -z * z / 4.0;
    let rw = w.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = term;
    let mut acc_abs = 1.0;
    for m in 1..=N_MAX {
        let m = m as f64;
        term *= w / (m * (alpha + m));
        acc += term;
        let size = term.norm();
        acc_abs += size;
        if m * m > rw && size <= TRUNCATION * acc_abs {
            break;
        }
    }
    Ok(acc)
}

/// `E_k(lambda) = sum_n Phi{x^n} c_n lambda^n`.
#[derive(Clone, Debug)]
pub struct Indicatrix {
    series: KernelSeries,
    phi: Functional<Complex64>,
    coeffs: Vec<Complex64>,
    majorant: Vec<f64>,
    radius: f64,
}

impl Indicatrix {
    pub fn new<T: Scalar>(series: &KernelSeries, phi: &Functional<T>) -> Self {
        let phi = phi.to_complex();
        let mut coeffs = vec![czero(); N_MAX + 1];
        let mut majorant = vec![0.0; N_MAX + 1];
        // running c_n a^n per atom endpoint, built multiplicatively to avoid overflow
        let mut accumulate = |a: f64, weight: Complex64, shift: usize| {
            let mut t = 1.0;
            for n in 0..=N_MAX {
                if n > 0 {
                    t *= a / (n as f64 + if n % 2 == 1 { 2.0 * series.k } else { 0.0 });
                }
                if shift == 0 {
                    coeffs[n] += weight * t;
                    majorant[n] += weight.norm() * t.abs();
                } else {
                    // integral of x^n: (b^(n+1) - a^(n+1)) / (n+1), signed per endpoint
                    coeffs[n] += weight * (a * t / (n as f64 + 1.0));
                    majorant[n] += weight.norm() * (a * t).abs() / (n as f64 + 1.0);
                }
            }
        };
        for p in phi.points() {
            accumulate(p.location.re, p.weight, 0);
        }
        for iv in phi.intervals() {
            accumulate(iv.b.re, iv.weight, 1);
            accumulate(iv.a.re, -iv.weight, 1);
        }
        let radius = phi.radius();
        Indicatrix {
            series: series.clone(),
            phi,
            coeffs,
            majorant,
            radius,
        }
    }

    pub fn series(&self) -> &KernelSeries {
        &self.series
    }

    pub fn functional(&self) -> &Functional<Complex64> {
        &self.phi
    }

    /// `e_n = Phi{x^n} c_n`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Largest atom location modulus.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `d`-th derivative of `E_k` at `lambda`.
    pub fn eval(&self, lambda: Complex64, d: usize) -> Result<Complex64> {
        check_window(lambda.norm() * self.radius)?;
        Ok(series_jet(&self.coeffs, &self.majorant, lambda, d))
    }

    /// Largest search radius inside the series window.
    pub fn max_search_radius(&self) -> f64 {
        if self.radius == 0.0 {
            f64::INFINITY
        } else {
            SERIES_WINDOW / self.radius
        }
    }
}

pub fn indicatrix_eval(ind: &Indicatrix, lambda: Complex64, d: usize) -> Result<Complex64> {
    ind.eval(lambda, d)
}

fn newton(ind: &Indicatrix, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..NEWTON_STEPS {
        let f = ind.eval(z, 0).ok()?;
        let df = ind.eval(z, 1).ok()?;
        if df.norm() == 0.0 {
            return None;
        }
        let step = f / df;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    Some(z)
}

/// `(1 / 2 pi i) \oint E'/E` over the circle `|lambda - center| = r` by the
/// trapezoid rule.
fn winding_number(ind: &Indicatrix, center: Complex64, r: f64, nodes: usize) -> Result<f64> {
    let mut acc = czero();
    for j in 0..nodes {
        let offset = Complex64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64);
        let lambda = center + offset;
        acc += offset * ind.eval(lambda, 1)? / ind.eval(lambda, 0)?;
    }
    Ok((acc / nodes as f64).re)
}

fn seed_search(ind: &Indicatrix, r: f64, tol: f64, side: usize, found: &mut Vec<Complex64>) {
    let step = 2.0 * r / (side - 1) as f64;
    for i in 0..side {
        for j in 0..side {
            let seed = Complex64::new(-r + i as f64 * step, -r + j as f64 * step);
            let Some(z) = newton(ind, seed) else { continue };
            if z.norm() > r {
                continue;
            }
            if !ind.eval(z, 0).is_ok_and(|v| v.norm() < tol) {
                continue;
            }
            if found.iter().all(|w| (w - z).norm() >= DEDUP_DISTANCE) {
                found.push(z);
            }
        }
    }
}

/// Total multiplicity of the listed zeros, each measured on a small circle.
fn multiplicity_sum(ind: &Indicatrix, zeros: &[Complex64]) -> Result<usize> {
    let mut total = 0;
    for (i, z) in zeros.iter().enumerate() {
        let gap = zeros
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, w)| (w - z).norm())
            .fold(f64::INFINITY, f64::min);
        let r = (0.25 * gap).min(1e-2);
        total += winding_number(ind, *z, r, 64)?.round().max(1.0) as usize;
    }
    Ok(total)
}

/// Zeros of `E_k` in `|lambda| <= r`, listed once each, sorted by modulus
/// then argument.
pub fn indicatrix_zeros(ind: &Indicatrix, r: f64, tol: f64) -> Result<Vec<Complex64>> {
    if !(tol >= 1e-12) {
        return Err(Error::Parameter(format!("zero tolerance {tol} is below 1e-12")));
    }
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("search radius must be positive, got {r}")));
    }
    check_window(r * ind.radius)?;
    let expected = winding_number(ind, czero(), r, CONTOUR_NODES)?.round().max(0.0) as usize;
    let mut found = Vec::new();
    if expected > 0 {
        seed_search(ind, r, tol, SEED_GRID, &mut found);
        if multiplicity_sum(ind, &found)? != expected {
            seed_search(ind, r, tol, 2 * SEED_GRID, &mut found);
        }
        if multiplicity_sum(ind, &found)? != expected {
            return Err(Error::IncompleteZeroSet { expected, found });
        }
    }
    found.sort_by(|a, b| {
        (a.norm(), a.arg())
            .partial_cmp(&(b.norm(), b.arg()))
            .expect("zeros are finite")
    });
    Ok(found)
}

/// Taylor coefficients `Q_0..=Q_d` of `u_k(lambda x) / E_k(lambda)` in lambda.
pub fn resolvent_kernel_jets(
    ind: &Indicatrix,
    lambda: Complex64,
    x: f64,
    d: usize,
) -> Result<Vec<Complex64>> {
    let e0 = ind.eval(lambda, 0)?;
    if e0.norm() <= DIVISOR_THRESHOLD {
        return Err(Error::DivisorOfZero {
            lambda,
            modulus: e0.norm(),
        });
    }
    let mut den = Vec::with_capacity(d + 1);
    let mut num = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let fj = factorial(j);
        den.push(if j == 0 { e0 } else { ind.eval(lambda, j)? / fj });
        num.push(ind.series.eval(lambda, x, j)? / fj);
    }
    let mut q: Vec<Complex64> = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut s = num[j];
        for i in 1..=j {
            s -= den[i] * q[j - i];
        }
        q.push(s / e0);
    }
    Ok(q)
}

/// `(1/d!) d/dlambda^d [u_k(lambda x) / E_k(lambda)]`; `d = 0` gives the
/// resolvent kernel `l_k(lambda, x)`.
pub fn resolvent_kernel_eval(ind: &Indicatrix, lambda: Complex64, x: f64, d: usize) -> Result<Complex64> {
    Ok(resolvent_kernel_jets(ind, lambda, x, d)?[d])
}
