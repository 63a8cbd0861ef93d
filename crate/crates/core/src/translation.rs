//! Generalized translation `T_k^y` for the Dunkl operator and the
//! mean-periodicity defect `Phi_y{T_k^y f(x)}`.
//!
//! For `k > 0` the angular integral is taken over `c = cos t`, which turns
//! `sin^(2k-1) t dt` into the Jacobi weight `(1 - c^2)^(k-1) dc`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::grid::ParityGrid;
use crate::quadrature::{gauss_jacobi, QuadratureRule};
use crate::resolvent::dunkl_apply_grid;
use crate::scalar::Scalar;

/// Smallest admissible angular node count.
pub const MIN_ANGULAR_NODES: usize = 32;
/// Default angular node count.
pub const DEFAULT_ANGULAR_NODES: usize = 48;
/// Defect below which a function is accepted as mean-periodic.
pub const MEAN_PERIODIC_TOLERANCE: f64 = 1e-3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Angular rule and normalization of `T_k^y`; `k = 0` is the plain shift.
#[derive(Clone, Debug)]
pub struct TranslationKernel {
    k: f64,
    rule: Option<QuadratureRule>,
    normalization: f64,
}

impl TranslationKernel {
    pub fn new(k: f64, nodes: usize) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::Parameter(format!("k must be >= 0, got {k}")));
        }
        if nodes < MIN_ANGULAR_NODES {
            return Err(Error::Parameter(format!(
                "translation needs at least {MIN_ANGULAR_NODES} angular nodes, got {nodes}"
            )));
        }
        if k == 0.0 {
            return Ok(TranslationKernel {
                k,
                rule: None,
                normalization: 1.0,
            });
        }
        let normalization =
            (libm::lgamma(k + 0.5) - libm::lgamma(k) - libm::lgamma(0.5)).exp();
        Ok(TranslationKernel {
            k,
            rule: Some(gauss_jacobi(nodes, k - 1.0, k - 1.0)?),
            normalization,
        })
    }

    pub fn with_default_nodes(k: f64) -> Result<Self> {
        Self::new(k, DEFAULT_ANGULAR_NODES)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn nodes(&self) -> usize {
        self.rule.as_ref().map_or(0, QuadratureRule::len)
    }
}

fn exceeded(r: f64, f: &ParityGrid) -> Error {
    Error::DomainExceeded { x: r, xmax: f.xmax() }
}

/// `|x| + |y|` within the grid, up to rounding.
fn check_reach(f: &ParityGrid, x: f64, y: f64) -> Result<()> {
    let reach = x.abs() + y.abs();
    if reach > f.xmax() * (1.0 + 1e-12) {
        return Err(exceeded(reach, f));
    }
    Ok(())
}

/// `T_k^y f(x)` at a single point.
pub fn translate_point(f: &ParityGrid, x: f64, y: f64, tk: &TranslationKernel) -> Result<Complex64> {
    check_reach(f, x, y)?;
    // T^0 is the identity
    if y == 0.0 {
        return f.eval(x);
    }
    let rule = match &tk.rule {
        None => return f.eval((x + y).clamp(-f.xmax(), f.xmax())),
        Some(rule) => rule,
    };
    let sign = if x * y > 0.0 {
        1.0
    } else if x * y < 0.0 {
        -1.0
    } else {
        0.0
    };
    let cross = 2.0 * (x * y).abs();
    let base = x * x + y * y;
    let origin = x == 0.0 && y == 0.0;
    let mut acc = ZERO;
    for (&c, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = (base - cross * c).max(0.0).sqrt().min(f.xmax());
        let he = 1.0 - sign * c;
        let mut term = f.eval_even(r)? * he;
        if !origin && r > 0.0 {
            term += f.eval_odd(r)? * ((x + y) * he / r);
        }
        acc += term * w;
    }
    Ok(acc * tk.normalization)
}

/// `T_k^y f` on the nodes of `f` that satisfy `|x| + |y| <= xmax`.
pub fn translate(f: &ParityGrid, y: f64, tk: &TranslationKernel) -> Result<ParityGrid> {
    let h = f.step();
    let m = ((f.xmax() - y.abs()) / h + 1e-9).floor();
    if !(m >= 0.0) || (m as usize) < crate::grid::MIN_NODES {
        return Err(exceeded(y.abs(), f));
    }
    if y == 0.0 {
        return Ok(f.clone());
    }
    let domain = f.restrict(m as usize)?;
    let pairs = (0..=domain.n())
        .into_par_iter()
        .map(|i| {
            let x = domain.node(i);
            Ok((translate_point(f, x, y, tk)?, translate_point(f, -x, y, tk)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let even = pairs.iter().map(|(p, m)| (p + m) * 0.5).collect();
    let odd = pairs.iter().map(|(p, m)| (p - m) * 0.5).collect();
    ParityGrid::from_parts(domain.xmax(), even, odd)
}

/// Sup-norm defects of the three basic translation identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationDefects {
    /// `T^y f(x) - T^x f(y)` on a symmetric sample.
    pub symmetry: f64,
    /// `T^y T^z f - T^z T^y f` on the common grid.
    pub commutation: f64,
    /// `D_k T^y f - T^y D_k f` on the common grid.
    pub intertwining: f64,
}

impl TranslationDefects {
    pub fn max(&self) -> f64 {
        self.symmetry.max(self.commutation).max(self.intertwining)
    }
}

fn common_distance(a: &ParityGrid, b: &ParityGrid) -> Result<f64> {
    let m = a.n().min(b.n());
    Ok(a.restrict(m)?.distance(&b.restrict(m)?))
}

pub fn translation_property_check(
    f: &ParityGrid,
    y: f64,
    z: f64,
    tk: &TranslationKernel,
) -> Result<TranslationDefects> {
    let reach = f.xmax() - y.abs();
    let samples = 21;
    let mut symmetry: f64 = 0.0;
    for i in 0..samples {
        let x = reach * (2.0 * i as f64 / (samples - 1) as f64 - 1.0);
        let d = translate_point(f, x, y, tk)? - translate_point(f, y, x, tk)?;
        symmetry = symmetry.max(d.norm());
    }

    let yz = translate(&translate(f, z, tk)?, y, tk)?;
    let zy = translate(&translate(f, y, tk)?, z, tk)?;
    let commutation = common_distance(&yz, &zy)?;

    let shifted = translate(f, y, tk)?;
    let lhs = dunkl_apply_grid(&shifted, tk.k);
    let rhs = translate(&dunkl_apply_grid(f, tk.k), y, tk)?;
    let intertwining = common_distance(&lhs, &rhs)?;

    Ok(TranslationDefects {
        symmetry,
        commutation,
        intertwining,
    })
}

/// `max_x |Phi_y{T_k^y f(x)}|` over `sample_xs`.
pub fn mp_defect<T: Scalar>(
    f: &ParityGrid,
    phi: &Functional<T>,
    tk: &TranslationKernel,
    sample_xs: &[f64],
) -> Result<f64> {
    let atoms = phi.discretize(16, 12);
    let mut defect: f64 = 0.0;
    for &x in sample_xs {
        let mut acc = ZERO;
        for &(y, w) in &atoms {
            acc += w * translate_point(f, x, y, tk)?;
        }
        defect = defect.max(acc.norm());
    }
    Ok(defect)
}

/// Evenly spaced points in `[-reach, reach]` with `reach = xmax - radius(Phi)`.
pub fn mp_sample<T: Scalar>(f: &ParityGrid, phi: &Functional<T>, count: usize) -> Vec<f64> {
    let reach = (f.xmax() - phi.radius()).max(0.0);
    if count < 2 {
        return vec![0.0];
    }
    (0..count)
        .map(|i| reach * (2.0 * i as f64 / (count - 1) as f64 - 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::DunklParam;
    use crate::kernel::{indicatrix_zeros, Indicatrix, KernelSeries};
    use crate::resolvent::{lk_grid, resolvent_apply, ResolventProblem};

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn grid(f: impl Fn(f64) -> f64) -> ParityGrid {
        ParityGrid::sample(|x| re(f(x)), 4.0, 256).unwrap()
    }

    fn kernel(k: f64) -> TranslationKernel {
        TranslationKernel::with_default_nodes(k).unwrap()
    }

    fn smooth(x: f64) -> f64 {
        1.0 + x - 0.3 * x * x + 0.1 * x * x * x + (0.5 * x).sin()
    }

    fn eigen(k: f64, lambda: Complex64) -> (KernelSeries, ParityGrid) {
        let ks = KernelSeries::new(&DunklParam::new(k).unwrap());
        let g = ParityGrid::sample(|x| ks.eval(lambda, x, 0).unwrap(), 4.0, 256).unwrap();
        (ks, g)
    }

    #[test]
    fn kernel_validation() {
        assert!(TranslationKernel::new(0.5, 16).is_err());
        assert!(TranslationKernel::new(-0.5, 48).is_err());
        assert_eq!(kernel(0.0).nodes(), 0);
        assert_eq!(kernel(0.5).nodes(), DEFAULT_ANGULAR_NODES);
    }

    #[test]
    fn zero_shift_is_identity() {
        let f = grid(smooth);
        for k in [0.0, 0.25, 0.5, 2.5] {
            assert_eq!(translate(&f, 0.0, &kernel(k)).unwrap(), f, "k={k}");
            let x = f.node(17);
            assert_eq!(translate_point(&f, x, 0.0, &kernel(k)).unwrap(), f.eval(x).unwrap());
        }
    }

    #[test]
    fn constants_are_invariant() {
        let one = grid(|_| 1.0);
        for k in [0.25, 1.0, 2.5] {
            for y in [-1.3, 0.4, 2.0] {
                let t = translate(&one, y, &kernel(k)).unwrap();
                assert!(t.distance(&grid(|_| 1.0).restrict(t.n()).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn classical_shift_at_k_zero() {
        let f = grid(smooth);
        let t = translate(&f, 0.7, &kernel(0.0)).unwrap();
        let exact = grid(|x| smooth(x + 0.7)).restrict(t.n()).unwrap();
        assert!(t.distance(&exact) < 1e-7);
    }

    #[test]
    fn out_of_domain_is_refused() {
        let f = grid(smooth);
        assert!(matches!(
            translate_point(&f, 3.0, 1.5, &kernel(0.5)),
            Err(Error::DomainExceeded { .. })
        ));
        assert!(translate(&f, 3.95, &kernel(0.5)).is_err());
    }

    #[test]
    fn eigenfunctions_translate_multiplicatively() {
        for k in [0.25, 0.5, 1.0, 2.5] {
            let lambda = Complex64::new(0.8, 0.6);
            let (ks, f) = eigen(k, lambda);
            let y = 1.1;
            let t = translate(&f, y, &kernel(k)).unwrap();
            let uy = ks.eval(lambda, y, 0).unwrap();
            let product = ParityGrid::sample(|x| ks.eval(lambda, x, 0).unwrap() * uy, t.xmax(), t.n()).unwrap();
            assert!(t.distance(&product) < 1e-6, "k={k}: {:e}", t.distance(&product));

            // the defining problem: D_k v = lambda u(lambda y) u(lambda x), v(0) = u(lambda y)
            let dv = dunkl_apply_grid(&t, k);
            assert!(dv.distance(&product.scale(lambda)) < 1e-5);
            assert!((t.eval(0.0).unwrap() - uy).norm() < 1e-8, "{:e}", (t.eval(0.0).unwrap() - uy).norm());
        }
    }

    #[test]
    fn basic_identities_on_a_polynomial() {
        let f = grid(|x| 1.0 - 2.0 * x + 0.5 * x * x * x - 0.1 * x.powi(4));
        let defects = translation_property_check(&f, 0.3, 0.7, &kernel(0.5)).unwrap();
        assert!(defects.max() < 1e-5, "{defects:?}");
    }

    #[test]
    fn classical_shifts_commute_exactly() {
        let f = grid(|x| 1.0 - 2.0 * x + 0.5 * x * x * x);
        let defects = translation_property_check(&f, 0.3, 0.7, &kernel(0.0)).unwrap();
        assert!(defects.symmetry < 1e-12 && defects.commutation < 1e-12, "{defects:?}");
    }

    #[test]
    fn intertwining_on_eigenfunctions() {
        let (_, f) = eigen(0.5, re(0.9));
        let defects = translation_property_check(&f, 0.4, -0.6, &kernel(0.5)).unwrap();
        assert!(defects.intertwining < 1e-5, "{defects:?}");
    }

    #[test]
    fn basic_identities_across_k() {
        let battery: [fn(f64) -> f64; 3] = [smooth, f64::cos, |x| (0.3 * x).exp() * (1.0 - x)];
        for k in [0.25, 0.5, 1.0, 2.5] {
            for f in battery {
                let defects = translation_property_check(&grid(f), 0.5, -0.9, &kernel(k)).unwrap();
                assert!(defects.max() < 1e-4, "k={k}: {defects:?}");
            }
        }
    }

    #[test]
    fn dirac_at_origin_sees_the_function() {
        let f = grid(smooth);
        let xs = mp_sample(&f, &Functional::dirac(0.0), 9);
        let d = mp_defect(&f, &Functional::dirac(0.0), &kernel(0.5), &xs).unwrap();
        let sup = xs.iter().map(|&x| f.eval(x).unwrap().norm()).fold(0.0, f64::max);
        assert!((d - sup).abs() < 1e-10);
    }

    /// Real part of the kernel at the first indicatrix zero of the symmetric pair.
    fn periodic_input(k: f64, phi: &Functional<f64>) -> ParityGrid {
        let ks = KernelSeries::new(&DunklParam::new(k).unwrap());
        let ind = Indicatrix::new(&ks, phi);
        let zero = indicatrix_zeros(&ind, 8.0, 1e-10).unwrap()[0];
        ParityGrid::sample(|x| re(ks.eval(zero, x, 0).unwrap().re), 4.0, 256).unwrap()
    }

    #[test]
    fn eigen_combinations_are_mean_periodic() {
        let phi = Functional::symmetric_pair(1.0);
        for k in [0.5, 1.0] {
            let f = periodic_input(k, &phi);
            let xs = mp_sample(&f, &phi, 13);
            let d = mp_defect(&f, &phi, &kernel(k), &xs).unwrap();
            assert!(d < MEAN_PERIODIC_TOLERANCE, "k={k}: {d:e}");
            let not = grid(smooth);
            assert!(mp_defect(&not, &phi, &kernel(k), &xs).unwrap() > 0.1);
        }
    }

    #[test]
    fn right_inverse_preserves_mean_periodicity() {
        let phi = Functional::symmetric_pair(1.0);
        let k = 0.5;
        let g = periodic_input(k, &phi);
        let xs = mp_sample(&g, &phi, 13);
        let once = lk_grid(&g, k, &phi).unwrap();
        let twice = lk_grid(&once, k, &phi).unwrap();
        // Appell combination A_0 + 2 A_1 convolved with g
        let combo = once.axpy(re(2.0), &twice);
        for h in [&once, &combo] {
            let d = mp_defect(h, &phi, &kernel(k), &xs).unwrap();
            assert!(d < MEAN_PERIODIC_TOLERANCE, "{d:e}");
        }
    }

    #[test]
    fn resolvent_preserves_mean_periodicity() {
        let phi = Functional::symmetric_pair(1.0);
        let k = 1.0;
        let g = periodic_input(k, &phi);
        let xs = mp_sample(&g, &phi, 13);
        let rp = ResolventProblem::new(&DunklParam::new(k).unwrap(), &phi, re(0.7), g).unwrap();
        let u = resolvent_apply(&rp).unwrap();
        let d = mp_defect(&u, &phi, &kernel(k), &xs).unwrap();
        assert!(d < MEAN_PERIODIC_TOLERANCE, "{d:e}");
    }
}
