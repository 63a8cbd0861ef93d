use std::f64::consts::PI;

use super::*;
use num_rational::BigRational;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn re(v: f64) -> Complex64 {
    c(v, 0.0)
}

fn param(k: f64) -> DunklParam<f64> {
    DunklParam::new(k).unwrap()
}

fn grid(f: impl Fn(f64) -> f64, xmax: f64, n: usize) -> ParityGrid {
    ParityGrid::sample(|x| re(f(x)), xmax, n).unwrap()
}

/// Descending real coefficients.
fn poly(desc: &[f64]) -> Polynomial<f64> {
    Polynomial::from_descending(desc)
}

fn problem(k: f64, phi: &Functional<f64>, desc: &[f64], alpha: &[f64], f: ParityGrid) -> CauchyProblem {
    CauchyProblem::new(&param(k), phi, &poly(desc), alpha, f).unwrap()
}

#[test]
fn classical_cosh() {
    let cp = problem(0.0, &Functional::dirac(0.0), &[1.0, 0.0, -1.0], &[1.0, 0.0], grid(|_| 0.0, 3.0, 256));
    let (u, report) = solve_nonlocal_cauchy(&cp).unwrap();
    assert!(u.distance(&grid(f64::cosh, 3.0, 256)) < 1e-7);
    assert!(report.residual_sup < 1e-10);
    assert_eq!(report.multiplicities, vec![1, 1]);
    let oracle = oracle_solve(&cp).unwrap();
    assert!(oracle.distance(&grid(f64::cosh, 3.0, 256)) < 1e-7);
}

#[test]
fn eigenfunction_for_half_integer_k() {
    let cp = problem(0.5, &Functional::dirac(0.0), &[1.0, -1.0], &[1.0], grid(|_| 0.0, 3.0, 256));
    let (u, _) = solve_nonlocal_cauchy(&cp).unwrap();
    let ks = KernelSeries::new(&param(0.5));
    let oracle = ParityGrid::sample(|x| ks.eval(re(1.0), x, 0).unwrap(), 3.0, 256).unwrap();
    assert!(u.distance(&oracle) < 1e-8);
}

#[test]
fn classical_closed_forms() {
    let dirac = Functional::dirac(0.0);
    let zero = grid(|_| 0.0, 2.0, 256);
    let cp = problem(0.0, &dirac, &[1.0, -1.0], &[1.0], zero.clone());
    assert!(solve_nonlocal_cauchy(&cp).unwrap().0.distance(&grid(f64::exp, 2.0, 256)) < 1e-6);

    // double root: u = x e^x from u(0) = 0, u'(0) = 1
    let cp = problem(0.0, &dirac, &[1.0, -2.0, 1.0], &[0.0, 1.0], zero);
    let (u, report) = solve_nonlocal_cauchy(&cp).unwrap();
    assert_eq!(report.multiplicities, vec![2]);
    assert!(u.distance(&grid(|x| x * x.exp(), 2.0, 256)) < 1e-6);

    // forced: u' - u = 1, u(0) = 0 gives e^x - 1
    let cp = problem(0.0, &dirac, &[1.0, -1.0], &[0.0], grid(|_| 1.0, 2.0, 256));
    let (u, _) = solve_nonlocal_cauchy(&cp).unwrap();
    assert!(u.distance(&grid(|x| x.exp() - 1.0, 2.0, 256)) < 1e-6);

    // forced double root: u'' - 2u' + u = e^x, zero data gives x^2 e^x / 2
    let cp = problem(0.0, &dirac, &[1.0, -2.0, 1.0], &[0.0, 0.0], grid(f64::exp, 2.0, 256));
    let (u, _) = solve_nonlocal_cauchy(&cp).unwrap();
    assert!(u.distance(&grid(|x| 0.5 * x * x * x.exp(), 2.0, 256)) < 1e-6);
}

#[test]
fn simple_roots_follow_the_derivative_formula() {
    // A_j = 1 / P'(mu_j), B_j = Q(mu_j) / P'(mu_j)
    let cp = problem(
        0.7,
        &Functional::mean(0.0, 1.0),
        &[2.0, 1.0, -3.0, 0.5],
        &[1.0, -0.5, 2.0],
        grid(f64::cos, 2.0, 256),
    );
    let (_, report) = solve_nonlocal_cauchy(&cp).unwrap();
    let dp = cp.polynomial().derivative();
    let q = cp.boundary_polynomial();
    for &mu in &report.roots {
        let d = dp.eval_complex(mu);
        assert!((report.inverse_fractions.coefficient(mu, 1) - 1.0 / d).norm() < 1e-12);
        assert!((report.boundary_fractions.coefficient(mu, 1) - q.eval_complex(mu) / d).norm() < 1e-12);
    }
}

#[test]
fn resonance_detection() {
    let series = KernelSeries::new(&param(0.0));
    let mean = Indicatrix::new(&series, &Functional::mean(0.0, 1.0));
    let resonant = [(c(0.0, 2.0 * PI), 1)];
    assert!(matches!(resonance_check(&mean, &resonant), Err(Error::Resonance { .. })));
    assert!(resonance_check(&mean, &[(re(1.0), 1)]).is_ok());
    assert!((mean.eval(re(1.0), 0).unwrap() - (1f64.exp() - 1.0)).norm() < 1e-13);
    let dirac = Indicatrix::new(&series, &Functional::dirac(0.0));
    assert!(resonance_check(&dirac, &resonant).is_ok());
}

#[test]
fn resonance_is_witnessed_by_both_detectors() {
    let p = Polynomial::new(vec![c(0.0, -2.0 * PI), re(1.0)]);
    let cp = CauchyProblem::new(
        &param(0.0),
        &Functional::mean(0.0, 1.0),
        &p,
        &[re(1.0)],
        grid(|_| 0.0, 2.0, 256),
    )
    .unwrap();
    assert!(matches!(solve_nonlocal_cauchy(&cp), Err(Error::Resonance { .. })));
    assert!(matches!(oracle_solve(&cp), Err(Error::SingularSystem { .. })));

    let detuned = Polynomial::new(vec![c(0.0, -(2.0 * PI + 0.1)), re(1.0)]);
    let cp = CauchyProblem::new(
        &param(0.0),
        &Functional::mean(0.0, 1.0),
        &detuned,
        &[re(1.0)],
        grid(|_| 0.0, 2.0, 256),
    )
    .unwrap();
    let (u, report) = solve_nonlocal_cauchy(&cp).unwrap();
    assert!(report.warnings.is_empty());
    assert!(u.distance(&oracle_solve(&cp).unwrap()) < 1e-5 * (1.0 + u.sup_norm()));
}

#[test]
fn rational_data_gives_exact_boundary_polynomial() {
    let q = |p: i64, d: i64| BigRational::from_ratio(p, d);
    let p = Polynomial::from_descending(&[q(1, 1), q(1, 3), q(-2, 1)]);
    let cp = CauchyProblem::new(
        &DunklParam::new(q(1, 2)).unwrap(),
        &Functional::dirac(q(0, 1)),
        &p,
        &[q(1, 1), q(1, 2)],
        grid(|_| 0.0, 2.0, 64),
    )
    .unwrap();
    // alpha_0 S + (alpha_1 + p alpha_0)
    let q = cp.boundary_polynomial();
    assert_eq!(q.degree(), Some(1));
    assert!((q.coeff(0) - 5.0 / 6.0).norm() < 1e-15 && q.coeff(1) == re(1.0));
}

#[test]
fn invalid_problems_are_rejected() {
    let f = grid(|_| 0.0, 2.0, 64);
    let phi = Functional::dirac(0.0);
    assert!(CauchyProblem::new(&param(0.0), &phi, &poly(&[3.0]), &[], f.clone()).is_err());
    assert!(CauchyProblem::new(&param(0.0), &phi, &poly(&[1.0, 2.0]), &[1.0, 2.0], f.clone()).is_err());
    let heavy = Functional::new(
        vec![crate::functional::PointAtom {
            location: 0.0,
            weight: 2.0,
        }],
        vec![],
    )
    .unwrap();
    assert!(CauchyProblem::new(&param(0.0), &heavy, &poly(&[1.0, 2.0]), &[1.0], f).is_err());
}

struct Case {
    k: f64,
    phi: Functional<f64>,
    desc: Vec<f64>,
    alpha: Vec<f64>,
    f: fn(f64) -> f64,
}

fn battery() -> Vec<Case> {
    let phis = [
        Functional::dirac(0.0),
        Functional::dirac(1.0),
        Functional::symmetric_pair(1.0),
        Functional::mean(0.0, 1.0),
    ];
    let polys: [(&[f64], &[f64]); 4] = [
        (&[1.0, -1.0], &[0.5]),
        (&[1.0, 0.0, 1.0], &[1.0, -1.0]),
        (&[1.0, -1.0, -2.0], &[0.0, 1.0]),
        (&[2.0, -1.0, 0.25], &[1.0, 0.5]),
    ];
    let rhs: [fn(f64) -> f64; 2] = [f64::cos, |x| 1.0 + x - 0.5 * x * x];
    let mut out = Vec::new();
    for (i, k) in [0.0, 0.3, 1.0, 2.5].into_iter().enumerate() {
        for (j, phi) in phis.iter().enumerate() {
            let (desc, alpha) = polys[(i + j) % polys.len()];
            out.push(Case {
                k,
                phi: phi.clone(),
                desc: desc.to_vec(),
                alpha: alpha.to_vec(),
                f: rhs[(i * 3 + j) % 2],
            });
        }
    }
    out
}

#[test]
fn heaviside_agrees_with_oracle_on_battery() {
    for case in battery() {
        let f = grid(case.f, 2.0, 256);
        let cp = problem(case.k, &case.phi, &case.desc, &case.alpha, f.clone());
        let (u, report) = solve_nonlocal_cauchy(&cp).unwrap();
        let oracle = oracle_solve(&cp).unwrap();
        let diff = u.distance(&oracle);
        assert!(
            diff < 1e-5 * (1.0 + u.sup_norm()),
            "k={} P={:?}: {diff:e}",
            case.k,
            case.desc
        );
        assert!(report.residual_sup < 1e-5 * (1.0 + f.sup_norm()));
        assert!(report.bc_residuals.iter().all(|r| *r < 1e-6));
        assert!(u.sup_imag() < 1e-8);
    }
}

#[test]
fn complex_roots_give_real_solutions() {
    // lambda^2 + 1: roots +-i, real data
    let cp = problem(1.0, &Functional::symmetric_pair(0.5), &[1.0, 0.0, 1.0], &[1.0, 2.0], grid(f64::sinh, 2.0, 256));
    let (u, report) = solve_nonlocal_cauchy(&cp).unwrap();
    assert!(report.roots.iter().all(|r| r.im.abs() > 0.5));
    assert!(u.sup_imag() < 1e-8);
}

fn periodic_input(k: f64, phi: &Functional<f64>, n: usize) -> ParityGrid {
    let ks = KernelSeries::new(&param(k));
    let ind = Indicatrix::new(&ks, phi);
    let zero = crate::kernel::indicatrix_zeros(&ind, 8.0, 1e-10).unwrap()[0];
    ParityGrid::sample(|x| re(ks.eval(zero, x, 0).unwrap().re), 4.0, n).unwrap()
}

#[test]
fn mean_periodic_zero_input() {
    let phi = Functional::symmetric_pair(1.0);
    let (u, _, mp) = mean_periodic_solve(&param(0.5), &phi, &poly(&[1.0, -1.0]), grid(|_| 0.0, 4.0, 256)).unwrap();
    assert_eq!(u.sup_norm(), 0.0);
    assert_eq!(mp.output_defect, 0.0);
    let (u, _) = duhamel_solve(&param(0.5), &phi, &poly(&[1.0, -1.0]), grid(|_| 0.0, 4.0, 256)).unwrap();
    assert_eq!(u.sup_norm(), 0.0);
}

#[test]
fn mean_periodic_eigen_input() {
    let phi = Functional::symmetric_pair(1.0);
    for k in [0.5, 1.3] {
        let f = periodic_input(k, &phi, 256);
        let (u, report, mp) = mean_periodic_solve(&param(k), &phi, &poly(&[1.0, -1.0]), f).unwrap();
        assert!(mp.input_defect < 1e-3 && mp.output_defect < 1e-3, "{mp:?}");
        assert!(report.bc_residuals[0] < 1e-6);
        assert!(u.sup_imag() < 1e-8);
    }
}

#[test]
fn mean_periodic_solution_is_grid_independent() {
    let phi = Functional::symmetric_pair(1.0);
    let p = poly(&[1.0, 0.5, 2.0]);
    let coarse = mean_periodic_solve(&param(0.5), &phi, &p, periodic_input(0.5, &phi, 256)).unwrap().0;
    let fine = mean_periodic_solve(&param(0.5), &phi, &p, periodic_input(0.5, &phi, 512)).unwrap().0;
    let sample = ParityGrid::sample(|x| fine.eval(x).unwrap(), 4.0, 256).unwrap();
    assert!(coarse.distance(&sample) < 1e-4);
}

#[test]
fn non_periodic_input_is_refused() {
    let phi = Functional::symmetric_pair(1.0);
    let err = mean_periodic_solve(&param(0.5), &phi, &poly(&[1.0, -1.0]), grid(f64::exp, 4.0, 256)).unwrap_err();
    assert!(matches!(err, Error::NotMeanPeriodicInput { .. }));
}

#[test]
fn duhamel_matches_mean_periodic_route() {
    let phi = Functional::symmetric_pair(1.0);
    let polys: [&[f64]; 4] = [&[1.0, -1.0], &[1.0, 0.5, 2.0], &[1.0, -2.0, 1.0], &[1.0, 0.0, -1.0, 0.5]];
    for k in [0.5, 1.0] {
        let f = periodic_input(k, &phi, 256);
        for desc in polys {
            let (u, _, _) = mean_periodic_solve(&param(k), &phi, &poly(desc), f.clone()).unwrap();
            let (v, mp) = duhamel_solve(&param(k), &phi, &poly(desc), f.clone()).unwrap();
            assert!(u.distance(&v) < 1e-5, "k={k} P={desc:?}: {:e}", u.distance(&v));
            assert!(mp.output_defect < 1e-3);
        }
    }
}

#[test]
fn first_order_duhamel_is_the_right_inverse() {
    let phi = Functional::symmetric_pair(1.0);
    let k = 0.5;
    let f = periodic_input(k, &phi, 256);
    let (u, _) = duhamel_solve(&param(k), &phi, &poly(&[1.0, 0.0]), f.clone()).unwrap();
    let lk = crate::resolvent::lk_grid(&f, k, &phi).unwrap();
    assert!(u.distance(&lk) < 1e-6, "{:e}", u.distance(&lk));
}
