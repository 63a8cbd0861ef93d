//! Sampled functions on a symmetric interval, stored by parity.
//!
//! A [`ParityGrid`] holds the even and odd parts of a function at the
//! nodes `x_i = i * xmax / n`, `i = 0..=n`. The negative half-axis is never
//! stored: `f(-x_i) = even[i] - odd[i]`. Point values between nodes come from
//! 4-point Lagrange interpolation of each part, reflecting the stencil
//! through the origin by parity.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible sample count.
pub const MIN_NODES: usize = 16;

/// Default sample count.
pub const DEFAULT_N: usize = 256;

/// Default half-width of the grid domain.
pub const DEFAULT_XMAX: f64 = 4.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which parity a half-axis sample list carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParityGrid {
    xmax: f64,
    n: usize,
    even: Vec<Complex64>,
    odd: Vec<Complex64>,
}

impl ParityGrid {
    /// Split `f` into even and odd parts at the grid nodes.
    pub fn sample(f: impl Fn(f64) -> Complex64, xmax: f64, n: usize) -> Result<Self> {
        check_shape(xmax, n)?;
        let h = xmax / n as f64;
        let mut even = Vec::with_capacity(n + 1);
        let mut odd = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = i as f64 * h;
            let (p, m) = (f(x), f(-x));
            for (v, node) in [(p, x), (m, -x)] {
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Evaluation { node });
                }
            }
            even.push((p + m) * 0.5);
            odd.push(if i == 0 { ZERO } else { (p - m) * 0.5 });
        }
        Ok(ParityGrid { xmax, n, even, odd })
    }

    /// Build from precomputed parts; `odd[0]` is forced to zero.
    pub fn from_parts(xmax: f64, even: Vec<Complex64>, mut odd: Vec<Complex64>) -> Result<Self> {
        let n = even.len().saturating_sub(1);
        check_shape(xmax, n)?;
        if odd.len() != even.len() {
            return Err(Error::Parameter("even and odd parts differ in length".into()));
        }
        odd[0] = ZERO;
        Ok(ParityGrid { xmax, n, even, odd })
    }

    pub fn zeros_like(&self) -> Self {
        ParityGrid {
            xmax: self.xmax,
            n: self.n,
            even: vec![ZERO; self.n + 1],
            odd: vec![ZERO; self.n + 1],
        }
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.xmax / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn even(&self) -> &[Complex64] {
        &self.even
    }

    pub fn odd(&self) -> &[Complex64] {
        &self.odd
    }

    pub fn part(&self, parity: Parity) -> &[Complex64] {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// Full function at node `i` (positive side) or `-i` (negative side).
    pub fn at_node(&self, i: usize, negative: bool) -> Complex64 {
        if negative {
            self.even[i] - self.odd[i]
        } else {
            self.even[i] + self.odd[i]
        }
    }

    /// Full function at the 2n+1 nodes, ordered from -xmax to xmax.
    pub fn full_nodes(&self) -> Vec<(f64, Complex64)> {
        let mut out = Vec::with_capacity(2 * self.n + 1);
        for i in (1..=self.n).rev() {
            out.push((-self.node(i), self.at_node(i, true)));
        }
        for i in 0..=self.n {
            out.push((self.node(i), self.at_node(i, false)));
        }
        out
    }

    /// True when both grids share the same nodes.
    pub fn same_nodes(&self, other: &ParityGrid) -> bool {
        self.n == other.n && (self.xmax - other.xmax).abs() <= 1e-12 * self.xmax
    }

    fn check_domain(&self, r: f64) -> Result<()> {
        if r.is_finite() && r.abs() <= self.xmax * (1.0 + 1e-12) {
            Ok(())
        } else {
            Err(Error::Domain {
                x: r,
                xmax: self.xmax,
            })
        }
    }

    /// Interpolated even part at `r`.
    pub fn eval_even(&self, r: f64) -> Result<Complex64> {
        self.check_domain(r)?;
        Ok(interpolate(&self.even, Parity::Even, r.abs() / self.step()))
    }

    /// Interpolated odd part at `r` (odd in `r`).
    pub fn eval_odd(&self, r: f64) -> Result<Complex64> {
        self.check_domain(r)?;
        let v = interpolate(&self.odd, Parity::Odd, r.abs() / self.step());
        Ok(if r < 0.0 { -v } else { v })
    }

    /// Interpolated full function at `x`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.eval_even(x)? + self.eval_odd(x)?)
    }

    /// Integral of the interpolant over [a, b]; each cell's cubic is
    /// integrated exactly by 2-point Gauss-Legendre.
    pub fn integrate(&self, a: f64, b: f64) -> Result<Complex64> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if a > b {
            return Ok(-self.integrate(b, a)?);
        }
        let h = self.step();
        let g = 0.5 / 3f64.sqrt();
        let mut breaks = vec![a];
        let first = (a / h).floor() as i64 + 1;
        let last = (b / h).ceil() as i64 - 1;
        for j in first..=last {
            let x = j as f64 * h;
            if x > a && x < b {
                breaks.push(x);
            }
        }
        breaks.push(b);
        let mut acc = ZERO;
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let len = hi - lo;
            if len <= 0.0 {
                continue;
            }
            // both Gauss points lie strictly inside one cell
            acc += (self.eval(mid - g * len)? + self.eval(mid + g * len)?) * (0.5 * len);
        }
        Ok(acc)
    }

    /// Node-wise first derivative of one part, 5-point stencils. Central
    /// stencils reach through the origin by parity; the far end uses
    /// one-sided stencils. The derivative has the opposite parity.
    pub fn derivative_of(&self, parity: Parity) -> Vec<Complex64> {
        differentiate(self.part(parity), parity, self.step())
    }

    pub fn sup_norm(&self) -> f64 {
        self.even
            .iter()
            .zip(&self.odd)
            .map(|(e, o)| (e + o).norm().max((e - o).norm()))
            .fold(0.0, f64::max)
    }

    /// sup |self - other| over the common nodes.
    pub fn distance(&self, other: &ParityGrid) -> f64 {
        let m = self.n.min(other.n);
        assert!(
            (self.step() - other.step()).abs() <= 1e-12 * self.step(),
            "grids have different steps"
        );
        (0..=m)
            .map(|i| {
                let dp = self.at_node(i, false) - other.at_node(i, false);
                let dm = self.at_node(i, true) - other.at_node(i, true);
                dp.norm().max(dm.norm())
            })
            .fold(0.0, f64::max)
    }

    /// sup of |imaginary part| over all nodes.
    pub fn sup_imag(&self) -> f64 {
        self.full_nodes()
            .iter()
            .map(|(_, v)| v.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_parts(|e, o| (e * c, o * c))
    }

    pub fn add(&self, other: &ParityGrid) -> Self {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &ParityGrid) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Complex64, other: &ParityGrid) -> Self {
        assert!(self.same_nodes(other), "grids are on different nodes");
        ParityGrid {
            xmax: self.xmax,
            n: self.n,
            even: self.even.iter().zip(&other.even).map(|(a, b)| a + c * b).collect(),
            odd: self.odd.iter().zip(&other.odd).map(|(a, b)| a + c * b).collect(),
        }
    }

    /// Pointwise product with a function of x, recomputing parities.
    pub fn multiply_by(&self, g: impl Fn(f64) -> Complex64) -> Self {
        let mut even = Vec::with_capacity(self.n + 1);
        let mut odd = Vec::with_capacity(self.n + 1);
        for i in 0..=self.n {
            let x = self.node(i);
            let p = self.at_node(i, false) * g(x);
            let m = self.at_node(i, true) * g(-x);
            even.push((p + m) * 0.5);
            odd.push(if i == 0 { ZERO } else { (p - m) * 0.5 });
        }
        ParityGrid {
            xmax: self.xmax,
            n: self.n,
            even,
            odd,
        }
    }

    fn map_parts(&self, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) -> Self {
        let (even, odd) = self
            .even
            .iter()
            .zip(&self.odd)
            .map(|(e, o)| f(*e, *o))
            .unzip();
        ParityGrid {
            xmax: self.xmax,
            n: self.n,
            even,
            odd,
        }
    }

    /// Keep only the first `m + 1` nodes.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::Parameter(format!("cannot restrict {} nodes to {m}", self.n)));
        }
        let xmax = m as f64 * self.step();
        check_shape(xmax, m)?;
        Ok(ParityGrid {
            xmax,
            n: m,
            even: self.even[..=m].to_vec(),
            odd: self.odd[..=m].to_vec(),
        })
    }
}

fn check_shape(xmax: f64, n: usize) -> Result<()> {
    if !(xmax.is_finite() && xmax > 0.0) {
        return Err(Error::Parameter(format!("xmax must be positive, got {xmax}")));
    }
    if n < MIN_NODES {
        return Err(Error::Parameter(format!(
            "grid needs at least {MIN_NODES} intervals, got {n}"
        )));
    }
    Ok(())
}

/// Value of a half-axis part at (possibly negative) index by parity reflection.
fn reflect(values: &[Complex64], parity: Parity, i: i64) -> Complex64 {
    if i >= 0 {
        values[i as usize]
    } else {
        values[(-i) as usize] * parity.sign()
    }
}

/// 4-point Lagrange interpolation at fractional index `t` (0 <= t <= n).
pub(crate) fn interpolate(values: &[Complex64], parity: Parity, t: f64) -> Complex64 {
    let n = values.len() as i64 - 1;
    let cell = (t.floor() as i64).clamp(0, n - 1);
    let start = (cell - 1).clamp(-1, n - 3);
    let s = t - start as f64;
    let w = [
        -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
        s * (s - 2.0) * (s - 3.0) / 2.0,
        -s * (s - 1.0) * (s - 3.0) / 2.0,
        s * (s - 1.0) * (s - 2.0) / 6.0,
    ];
    (0..4)
        .map(|j| reflect(values, parity, start + j) * w[j as usize])
        .sum()
}

pub(crate) fn differentiate(values: &[Complex64], parity: Parity, h: f64) -> Vec<Complex64> {
    let n = values.len() as i64 - 1;
    let f = |i: i64| reflect(values, parity, i);
    let d = 12.0 * h;
    (0..=n)
        .map(|i| {
            if i <= n - 2 {
                (f(i - 2) - f(i - 1) * 8.0 + f(i + 1) * 8.0 - f(i + 2)) / d
            } else if i == n - 1 {
                (f(n) * 3.0 + f(n - 1) * 10.0 - f(n - 2) * 18.0 + f(n - 3) * 6.0 - f(n - 4)) / d
            } else {
                (f(n) * 25.0 - f(n - 1) * 48.0 + f(n - 2) * 36.0 - f(n - 3) * 16.0
                    + f(n - 4) * 3.0)
                    / d
            }
        })
        .collect()
}
