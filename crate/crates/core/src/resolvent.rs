//! Grid actions of `D_k`, of its right inverse `L_k`, and of the resolvent
//! `(S_k - lambda)^-1` with `S_k = D_k` on `Phi{u} = 0`.
//!
//! With `f = f_e + f_o`:
//!
//! ```text
//! (D_k f)_e = f_o' + 2k f_o / x        (D_k f)_o = f_e'
//! ```

use num_complex::Complex64;

use crate::calculus::DunklParam;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::{differentiate, Parity, ParityGrid};
use crate::poly::Polynomial;
use crate::kernel::{Indicatrix, KernelSeries, DIVISOR_THRESHOLD};
use crate::quadrature::{gauss_jacobi, gauss_legendre};
use crate::scalar::{RealScalar, Scalar};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Nodes covered by the series start of [`ParitySystem::march`].
const SERIES_NODES: usize = 4;
const SERIES_TERMS: usize = 60;
const SUBSTEP_REACH: usize = 64;

/// Largest power accepted by [`resolvent_power_apply`].
pub const MAX_RESOLVENT_POWER: usize = 8;

/// `D_k f` by 5-point differences; the `2k f_o / x` term takes its limit
/// `2k f_o'(0)` at the origin.
pub fn dunkl_apply_grid(f: &ParityGrid, k: f64) -> ParityGrid {
    let h = f.step();
    let d_odd = differentiate(f.odd(), Parity::Odd, h);
    let d_even = differentiate(f.even(), Parity::Even, h);
    let even = (0..=f.n())
        .map(|i| {
            if i == 0 {
                d_odd[0] * (1.0 + 2.0 * k)
            } else {
                d_odd[i] + f.odd()[i] * (2.0 * k / f.node(i))
            }
        })
        .collect();
    ParityGrid::from_parts(f.xmax(), even, d_even).expect("shape is inherited")
}

/// `Lambda_k f(x) = integral_0^x f_o(t) + (t/x)^(2k) f_e(t) dt`, integrated
/// exactly on the cubic interpolant.
pub fn lambda_k_grid(f: &ParityGrid, k: f64) -> ParityGrid {
    let n = f.n();
    let h = f.step();
    let legendre = gauss_legendre(8).on_unit_interval();
    let head = gauss_jacobi(8, 0.0, 2.0 * k)
        .expect("2k > -1")
        .on_unit_interval();
    let eval_even = |t: f64| f.eval_even(t).expect("node inside grid");
    let eval_odd = |t: f64| f.eval_odd(t).expect("node inside grid");

    let mut even = Vec::with_capacity(n + 1);
    let mut odd = Vec::with_capacity(n + 1);
    even.push(ZERO);
    odd.push(ZERO);
    let (mut run_odd, mut run_even) = (ZERO, ZERO);
    for i in 1..=n {
        let lo = (i - 1) as f64 * h;
        run_odd += legendre
            .iter()
            .map(|(s, w)| eval_odd(lo + s * h) * (w * h))
            .sum::<Complex64>();
        // weighted running integral of t^(2k) f_e(t); Jacobi nodes absorb the
        // origin singularity of the weight
        run_even += if i == 1 {
            head.iter()
                .map(|(s, w)| eval_even(s * h) * (w * h.powf(2.0 * k + 1.0)))
                .sum::<Complex64>()
        } else {
            legendre
                .iter()
                .map(|(s, w)| {
                    let t = lo + s * h;
                    eval_even(t) * (w * h * t.powf(2.0 * k))
                })
                .sum::<Complex64>()
        };
        let x = i as f64 * h;
        even.push(run_odd);
        odd.push(run_even / x.powf(2.0 * k));
    }
    ParityGrid::from_parts(f.xmax(), even, odd).expect("shape is inherited")
}

/// `L_k f = Lambda_k f - Phi{Lambda_k f}`.
pub fn lk_grid<T: Scalar>(f: &ParityGrid, k: f64, phi: &Functional<T>) -> Result<ParityGrid> {
    phi.require_normalized()?;
    let lam = lambda_k_grid(f, k);
    let shift = phi.apply_grid(&lam)?;
    Ok(subtract_constant(&lam, shift))
}

fn subtract_constant(f: &ParityGrid, c: Complex64) -> ParityGrid {
    let even = f.even().iter().map(|v| v - c).collect();
    ParityGrid::from_parts(f.xmax(), even, f.odd().to_vec()).expect("shape is inherited")
}

/// Linear Dunkl system `D_k V = M V + F` for a vector of functions,
/// marched in parity form from `x = 0` with classical RK4 on the grid step:
///
/// ```text
/// V_e' = M V_o + F_o      V_o' = M V_e + F_e - 2k V_o / x
/// ```
///
/// The first nodes come from the power-series solution at the regular
/// singular point `x = 0`, where `V_o = 0`; RK4 takes over from there.
/// Forcing values between nodes come from cubic interpolation.
pub(crate) struct ParitySystem<'a> {
    pub k: f64,
    pub matrix: &'a [Vec<Complex64>],
    pub forcing: &'a [Option<&'a ParityGrid>],
}

impl ParitySystem<'_> {
    fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn forcing_at(&self, x: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        self.forcing
            .iter()
            .map(|g| match g {
                Some(g) => (
                    g.eval_even(x).expect("stage inside grid"),
                    g.eval_odd(x).expect("stage inside grid"),
                ),
                None => (ZERO, ZERO),
            })
            .unzip()
    }

    fn rhs(&self, x: f64, ve: &[Complex64], vo: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let (fe, fo) = self.forcing_at(x);
        let m = self.dim();
        let apply = |v: &[Complex64], r: usize| -> Complex64 {
            self.matrix[r].iter().zip(v).map(|(a, b)| a * b).sum()
        };
        let de = (0..m).map(|r| apply(vo, r) + fo[r]).collect();
        let d_o = (0..m)
            .map(|r| {
                let base = apply(ve, r) + fe[r];
                base - vo[r] * (2.0 * self.k / x)
            })
            .collect();
        (de, d_o)
    }

    /// Taylor coefficients of the forcing at the origin, fitted through the
    /// first `SERIES_NODES + 1` nodes of each part.
    fn forcing_series(&self, h: f64) -> Vec<Vec<Complex64>> {
        self.forcing
            .iter()
            .map(|g| {
                let mut coeffs = vec![ZERO; 2 * SERIES_NODES + 2];
                let Some(g) = g else { return coeffs };
                let t: Vec<Complex64> = (0..=SERIES_NODES)
                    .map(|i| Complex64::new((i as f64 * h).powi(2), 0.0))
                    .collect();
                let even = lagrange_fit(&t, &g.even()[..=SERIES_NODES]);
                let odd_over_x: Vec<Complex64> = (1..=SERIES_NODES)
                    .map(|i| g.odd()[i] / (i as f64 * h))
                    .collect();
                let odd = lagrange_fit(&t[1..], &odd_over_x);
                for (j, c) in even.coeffs().iter().enumerate() {
                    coeffs[2 * j] = *c;
                }
                for (j, c) in odd.coeffs().iter().enumerate() {
                    coeffs[2 * j + 1] = *c;
                }
                coeffs
            })
            .collect()
    }

    /// Power-series solution near the origin from `b_(n+1) v_(n+1) = M v_n + F_n`,
    /// evaluated at the first `SERIES_NODES` nodes.
    fn series_start(
        &self,
        init_even: &[Complex64],
        h: f64,
    ) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
        let m = self.dim();
        let forcing = self.forcing_series(h);
        let mut terms = vec![init_even.to_vec()];
        for n in 0..SERIES_TERMS {
            let b = (n + 1) as f64 + if n % 2 == 0 { 2.0 * self.k } else { 0.0 };
            let next = (0..m)
                .map(|r| {
                    let mv: Complex64 =
                        self.matrix[r].iter().zip(&terms[n]).map(|(a, v)| a * v).sum();
                    (mv + forcing[r].get(n).copied().unwrap_or(ZERO)) / b
                })
                .collect();
            terms.push(next);
        }
        (1..=SERIES_NODES)
            .map(|i| {
                let x = i as f64 * h;
                let mut ve = vec![ZERO; m];
                let mut vo = vec![ZERO; m];
                let mut xp = 1.0;
                for (n, t) in terms.iter().enumerate() {
                    let target = if n % 2 == 0 { &mut ve } else { &mut vo };
                    for r in 0..m {
                        target[r] += t[r] * xp;
                    }
                    xp *= x;
                }
                (ve, vo)
            })
            .collect()
    }

    fn rk4_step(
        &self,
        x: f64,
        h: f64,
        ve: &[Complex64],
        vo: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let shifted = |v: &[Complex64], d: &[Complex64], s: f64| -> Vec<Complex64> {
            v.iter().zip(d).map(|(a, b)| a + b * s).collect()
        };
        let (k1e, k1o) = self.rhs(x, ve, vo);
        let (k2e, k2o) = self.rhs(x + 0.5 * h, &shifted(ve, &k1e, 0.5 * h), &shifted(vo, &k1o, 0.5 * h));
        let (k3e, k3o) = self.rhs(x + 0.5 * h, &shifted(ve, &k2e, 0.5 * h), &shifted(vo, &k2o, 0.5 * h));
        let (k4e, k4o) = self.rhs(x + h, &shifted(ve, &k3e, h), &shifted(vo, &k3o, h));
        let combine = |v: &[Complex64], a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]| {
            (0..v.len())
                .map(|r| v[r] + (a[r] + b[r] * 2.0 + c[r] * 2.0 + d[r]) * (h / 6.0))
                .collect()
        };
        (
            combine(ve, &k1e, &k2e, &k3e, &k4e),
            combine(vo, &k1o, &k2o, &k3o, &k4o),
        )
    }

    /// March from the even initial values; returns one grid per component.
    pub fn march(&self, init_even: &[Complex64], xmax: f64, n: usize) -> Vec<ParityGrid> {
        let m = self.dim();
        let h = xmax / n as f64;
        let mut ve = init_even.to_vec();
        let mut vo = vec![ZERO; m];
        let mut even: Vec<Vec<Complex64>> = (0..m).map(|r| vec![ve[r]]).collect();
        let mut odd: Vec<Vec<Complex64>> = (0..m).map(|_| vec![ZERO]).collect();
        for (se, so) in self.series_start(init_even, h) {
            for r in 0..m {
                even[r].push(se[r]);
                odd[r].push(so[r]);
            }
            ve = se;
            vo = so;
        }
        for i in SERIES_NODES..n {
            // the 2k/x coefficient varies fastest near the origin; subdivide
            // early cells so each substep sees it as if SUBSTEP_REACH cells out
            let substeps = if self.k == 0.0 { 1 } else { SUBSTEP_REACH.div_ceil(i).max(1) };
            let dh = h / substeps as f64;
            for s in 0..substeps {
                let x = i as f64 * h + s as f64 * dh;
                (ve, vo) = self.rk4_step(x, dh, &ve, &vo);
            }
            for r in 0..m {
                even[r].push(ve[r]);
                odd[r].push(vo[r]);
            }
        }
        even.into_iter()
            .zip(odd)
            .map(|(e, o)| ParityGrid::from_parts(xmax, e, o).expect("valid march shape"))
            .collect()
    }
}

/// Interpolating polynomial through `(t_i, v_i)`.
fn lagrange_fit(t: &[Complex64], v: &[Complex64]) -> Polynomial<Complex64> {
    let mut out = Polynomial::zero();
    for (i, (ti, vi)) in t.iter().zip(v).enumerate() {
        let mut basis = Polynomial::constant(*vi);
        for (j, tj) in t.iter().enumerate() {
            if j != i {
                let factor = Polynomial::new(vec![-tj, Complex64::new(1.0, 0.0)]);
                basis = (&basis * &factor).scale(&(1.0 / (ti - tj)));
            }
        }
        out = &out + &basis;
    }
    out
}

/// `u_k(lambda x)` sampled on the nodes of `like`.
pub fn kernel_grid(series: &KernelSeries, lambda: Complex64, like: &ParityGrid) -> Result<ParityGrid> {
    // the far node has the largest |lambda x|
    series.eval(lambda, like.xmax(), 0)?;
    ParityGrid::sample(
        |x| series.eval(lambda, x, 0).expect("inside the series window"),
        like.xmax(),
        like.n(),
    )
}

/// `D_k u - lambda u = f`, `Phi{u} = 0`.
#[derive(Clone, Debug)]
pub struct ResolventProblem {
    indicatrix: Indicatrix,
    lambda: Complex64,
    f: ParityGrid,
    e_lambda: Complex64,
}

impl ResolventProblem {
    pub fn new<R: RealScalar, T: Scalar>(
        k: &DunklParam<R>,
        phi: &Functional<T>,
        lambda: Complex64,
        f: ParityGrid,
    ) -> Result<Self> {
        let ind = Indicatrix::new(&KernelSeries::new(k), phi);
        Self::with_indicatrix(&ind, lambda, f)
    }

    pub fn with_indicatrix(ind: &Indicatrix, lambda: Complex64, f: ParityGrid) -> Result<Self> {
        ind.functional().require_normalized()?;
        let e_lambda = ind.eval(lambda, 0)?;
        if e_lambda.norm() <= DIVISOR_THRESHOLD {
            return Err(Error::DivisorOfZero {
                lambda,
                modulus: e_lambda.norm(),
            });
        }
        Ok(ResolventProblem {
            indicatrix: ind.clone(),
            lambda,
            f,
            e_lambda,
        })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn rhs(&self) -> &ParityGrid {
        &self.f
    }

    pub fn indicatrix(&self) -> &Indicatrix {
        &self.indicatrix
    }

    /// Same problem with a new right-hand side.
    pub fn with_rhs(&self, f: ParityGrid) -> Self {
        ResolventProblem { f, ..self.clone() }
    }

    fn k(&self) -> f64 {
        self.indicatrix.series().k()
    }
}

/// Sup-norm of `D_k u - lambda u - f` on the grid.
pub fn resolvent_residual(u: &ParityGrid, k: f64, lambda: Complex64, f: &ParityGrid) -> f64 {
    dunkl_apply_grid(u, k)
        .axpy(-lambda, u)
        .sub(f)
        .sup_norm()
}

/// `(S_k - lambda)^-1 f`: particular solution by RK4 from the origin, then
/// the multiple of `u_k(lambda .)` that enforces `Phi{u} = 0`.
pub fn resolvent_apply(rp: &ResolventProblem) -> Result<ParityGrid> {
    let f = &rp.f;
    let k = rp.k();
    let matrix = [vec![rp.lambda]];
    let forcing = [Some(f)];
    let system = ParitySystem {
        k,
        matrix: &matrix,
        forcing: &forcing,
    };
    let w = system
        .march(&[ZERO], f.xmax(), f.n())
        .pop()
        .expect("one component");
    let phi = rp.indicatrix.functional();
    let kernel = kernel_grid(rp.indicatrix.series(), rp.lambda, f)?;
    let u = w.axpy(-phi.apply_grid(&w)? / rp.e_lambda, &kernel);

    let residual = resolvent_residual(&u, k, rp.lambda, f);
    let tolerance = 1e-6 * (1.0 + f.sup_norm());
    if residual >= tolerance {
        return Err(Error::Residual {
            context: "resolvent equation",
            residual,
            tolerance,
        });
    }
    let boundary = phi.apply_grid(&u)?.norm();
    if boundary >= 1e-8 {
        return Err(Error::Residual {
            context: "resolvent boundary condition",
            residual: boundary,
            tolerance: 1e-8,
        });
    }
    Ok(u)
}

/// `(S_k - lambda)^-l f` by `l` successive resolvent solves.
pub fn resolvent_power_apply(rp: &ResolventProblem, l: usize) -> Result<ParityGrid> {
    if l == 0 || l > MAX_RESOLVENT_POWER {
        return Err(Error::Parameter(format!(
            "resolvent power must lie in 1..={MAX_RESOLVENT_POWER}, got {l}"
        )));
    }
    let mut u = rp.f.clone();
    for _ in 0..l {
        u = resolvent_apply(&rp.with_rhs(u))?;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::appell_sequence;
    use crate::kernel::resolvent_kernel_jets;
    use crate::poly::Polynomial;
    use proptest::prelude::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn grid(f: impl Fn(f64) -> f64, xmax: f64, n: usize) -> ParityGrid {
        ParityGrid::sample(|x| re(f(x)), xmax, n).unwrap()
    }

    fn param(k: f64) -> DunklParam<f64> {
        DunklParam::new(k).unwrap()
    }

    fn phi_menu() -> Vec<Functional<f64>> {
        vec![
            Functional::dirac(0.0),
            Functional::dirac(1.0),
            Functional::symmetric_pair(1.0),
            Functional::mean(0.0, 1.0),
        ]
    }

    fn battery() -> Vec<(&'static str, Box<dyn Fn(f64) -> f64>)> {
        vec![
            ("1", Box::new(|_| 1.0)),
            ("x", Box::new(|x| x)),
            ("poly3", Box::new(|x| 1.0 - x + 0.5 * x * x - x.powi(3) / 6.0)),
            ("x^4", Box::new(|x: f64| x.powi(4))),
            ("poly6", Box::new(|x: f64| 0.2 * x.powi(6) - x.powi(5) / 3.0 + x * x)),
            ("cos", Box::new(f64::cos)),
            ("sinh", Box::new(f64::sinh)),
            ("gauss", Box::new(|x: f64| (-x * x).exp())),
        ]
    }

    #[test]
    fn dunkl_grid_examples() {
        let sq = grid(|x| x * x, 2.0, 256);
        let d = dunkl_apply_grid(&sq, 0.7);
        assert!(d.distance(&grid(|x| 2.0 * x, 2.0, 256)) < 1e-8);

        let lin = grid(|x| x, 2.0, 256);
        let d = dunkl_apply_grid(&lin, 0.5);
        assert!(d.distance(&grid(|_| 2.0, 2.0, 256)) < 1e-8);

        let ks = KernelSeries::new(&param(1.3));
        let l = Complex64::new(0.8, -0.4);
        let u = kernel_grid(&ks, l, &lin).unwrap();
        assert!(dunkl_apply_grid(&u, 1.3).distance(&u.scale(l)) < 1e-8);
    }

    #[test]
    fn lk_grid_examples() {
        let one = grid(|_| 1.0, 2.0, 256);
        let half = lk_grid(&one, 0.5, &Functional::dirac(0.0)).unwrap();
        assert!(half.distance(&grid(|x| x / 2.0, 2.0, 256)) < 1e-9);

        let cos = grid(f64::cos, 2.0, 256);
        let sin = lk_grid(&cos, 0.0, &Functional::dirac(0.0)).unwrap();
        assert!(sin.distance(&grid(f64::sin, 2.0, 256)) < 1e-9);

        for k in [0.0, 0.3, 1.0, 2.5] {
            let l = lk_grid(&cos, k, &Functional::mean(0.0, 1.0)).unwrap();
            assert!(dunkl_apply_grid(&l, k).distance(&cos) < 1e-7, "k={k}");
        }
    }

    #[test]
    fn lk_grid_matches_polynomial_calculus() {
        // Phi sees the interpolant of Lambda_k p, one degree above p
        let cubic = Polynomial::new(vec![1.0, -0.5, 2.0, 0.25]);
        let quartic = Polynomial::new(vec![1.0, -0.5, 2.0, 0.25, -0.75]);
        for (p, tol) in [(cubic, 1e-9), (quartic, 1e-8)] {
            let g = ParityGrid::sample(|x| re(p.eval(&x)), 2.0, 256).unwrap();
            for k in [0.0, 0.3, 1.0, 2.5] {
                for phi in phi_menu() {
                    let exact = crate::calculus::lk_poly(&p, &param(k), &phi).unwrap();
                    let num = lk_grid(&g, k, &phi).unwrap();
                    let oracle = ParityGrid::sample(|x| re(exact.eval(&x)), 2.0, 256).unwrap();
                    let err = num.distance(&oracle);
                    assert!(err < tol, "k={k}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn right_inverse_annihilation_and_basic_formula() {
        let (xmax, n) = (2.0, 512);
        for k in [0.0, 0.3, 1.0, 2.5] {
            for phi in phi_menu() {
                for (name, f) in battery() {
                    let g = grid(f, xmax, n);
                    let l = lk_grid(&g, k, &phi).unwrap();
                    let back = dunkl_apply_grid(&l, k).distance(&g);
                    assert!(back < 1e-7, "D L {name} k={k}: {back:e}");
                    assert!(phi.apply_grid(&l).unwrap().norm() < 1e-8);

                    let basic = lk_grid(&dunkl_apply_grid(&g, k), k, &phi).unwrap();
                    let target = subtract_constant(&g, phi.apply_grid(&g).unwrap());
                    let err = basic.distance(&target);
                    assert!(err < 1e-7, "L D {name} k={k}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn iterated_taylor_remainder() {
        let (xmax, n) = (2.0, 512);
        for k in [0.0, 0.3, 1.0, 2.5] {
            for phi in phi_menu() {
                let appell = appell_sequence(3, &param(k), &phi).unwrap();
                for (name, f) in battery() {
                    let g = grid(f, xmax, n);
                    let mut derivs = vec![g.clone()];
                    for j in 0..3 {
                        let next = dunkl_apply_grid(&derivs[j], k);
                        derivs.push(next);
                    }
                    for order in 1..=3 {
                        let mut lhs = derivs[order].clone();
                        for _ in 0..order {
                            lhs = lk_grid(&lhs, k, &phi).unwrap();
                        }
                        let mut rhs = g.clone();
                        for j in 0..order {
                            let c = phi.apply_grid(&derivs[j]).unwrap();
                            let a = &appell[j];
                            rhs = rhs.axpy(-c, &grid(|x| a.eval(&x), xmax, n));
                        }
                        let err = lhs.distance(&rhs);
                        assert!(err < 1e-6, "{name} k={k} N={order}: {err:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn resolvent_classical_exponential() {
        let f = grid(|_| 1.0, 3.0, 256);
        let rp = ResolventProblem::new(&param(0.0), &Functional::dirac(0.0), re(1.0), f).unwrap();
        let u = resolvent_apply(&rp).unwrap();
        assert!(u.distance(&grid(|x| x.exp() - 1.0, 3.0, 256)) < 1e-7);
    }

    #[test]
    fn resolvent_at_zero_is_lk() {
        for k in [0.0, 0.3, 1.0, 2.5] {
            for phi in phi_menu() {
                let f = grid(f64::cos, 3.0, 256);
                let rp = ResolventProblem::new(&param(k), &phi, re(0.0), f.clone()).unwrap();
                let u = resolvent_apply(&rp).unwrap();
                let l = lk_grid(&f, k, &phi).unwrap();
                assert!(u.distance(&l) < 1e-7, "k={k}: {:e}", u.distance(&l));
            }
        }
    }

    #[test]
    fn resolvent_of_eigenfunction() {
        for k in [0.0, 0.3, 1.0, 2.5] {
            let ks = KernelSeries::new(&param(k));
            let (lam, mu) = (Complex64::new(0.5, 0.3), re(-0.7));
            let like = grid(|_| 0.0, 3.0, 256);
            let f = kernel_grid(&ks, mu, &like).unwrap();
            let rp = ResolventProblem::new(&param(k), &Functional::dirac(0.0), lam, f.clone()).unwrap();
            let u = resolvent_apply(&rp).unwrap();
            let expect = f.sub(&kernel_grid(&ks, lam, &like).unwrap()).scale(1.0 / (mu - lam));
            assert!(u.distance(&expect) < 1e-6, "k={k}: {:e}", u.distance(&expect));
        }
    }

    #[test]
    fn triple_integration() {
        let f = grid(|_| 1.0, 2.0, 256);
        let rp = ResolventProblem::new(&param(0.0), &Functional::dirac(0.0), re(0.0), f).unwrap();
        let u = resolvent_power_apply(&rp, 3).unwrap();
        assert!(u.distance(&grid(|x| x.powi(3) / 6.0, 2.0, 256)) < 1e-7);
        assert_eq!(resolvent_power_apply(&rp, 1).unwrap(), resolvent_apply(&rp).unwrap());
        assert!(resolvent_power_apply(&rp, 9).is_err());
    }

    #[test]
    fn resonant_lambda_is_rejected() {
        let f = grid(|_| 1.0, 2.0, 64);
        let err = ResolventProblem::new(
            &param(0.0),
            &Functional::mean(0.0, 1.0),
            Complex64::new(0.0, 2.0 * std::f64::consts::PI),
            f,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DivisorOfZero { .. }));
    }

    /// `R^l u_mu = sum_{j<l} g_j / (mu - lambda)^(l-j)` with
    /// `g_0 = u_mu - E(mu) Q_0`, `g_j = -E(mu) Q_j`, `Q_j` the lambda-jets of
    /// `u_k(lambda x) / E_k(lambda)`.
    fn power_oracle(ind: &Indicatrix, lam: Complex64, mu: Complex64, l: usize, like: &ParityGrid) -> ParityGrid {
        let e_mu = ind.eval(mu, 0).unwrap();
        let ks = ind.series();
        ParityGrid::sample(
            |x| {
                let q = resolvent_kernel_jets(ind, lam, x, l - 1).unwrap();
                let u_mu = ks.eval(mu, x, 0).unwrap();
                (0..l)
                    .map(|j| {
                        let g = if j == 0 { u_mu - e_mu * q[0] } else { -e_mu * q[j] };
                        g / (mu - lam).powi((l - j) as i32)
                    })
                    .sum()
            },
            like.xmax(),
            like.n(),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn resolvent_powers_match_kernel_jets(
            k in 0.0f64..2.5,
            lam_re in -1.0f64..1.0,
            lam_im in -1.0f64..1.0,
            mu in -1.0f64..1.0,
            l in 1usize..4,
            which in 0usize..4,
        ) {
            let lam = Complex64::new(lam_re, lam_im);
            let mu = re(mu);
            prop_assume!((mu - lam).norm() > 0.3);
            let phi = &phi_menu()[which];
            let ind = Indicatrix::new(&KernelSeries::new(&param(k)), phi);
            let like = grid(|_| 0.0, 2.0, 256);
            let f = kernel_grid(ind.series(), mu, &like).unwrap();
            let rp = ResolventProblem::with_indicatrix(&ind, lam, f).unwrap();
            let u = resolvent_power_apply(&rp, l).unwrap();
            let oracle = power_oracle(&ind, lam, mu, l, &like);
            let err = u.distance(&oracle);
            prop_assert!(err < 1e-5 * (1.0 + oracle.sup_norm()), "err {err:e}");
        }
    }
}
