//! The nonlocal boundary functional Phi: point masses plus uniform-weight
//! interval integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::ParityGrid;
use crate::poly::Polynomial;
use crate::quadrature::gauss_legendre;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct PointAtom<T> {
    pub location: T,
    pub weight: T,
}

/// `weight * integral_a^b f(x) dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalAtom<T> {
    pub a: T,
    pub b: T,
    pub weight: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Functional<T> {
    points: Vec<PointAtom<T>>,
    intervals: Vec<IntervalAtom<T>>,
    normalized: bool,
}

impl<T: Scalar> Functional<T> {
    pub fn new(points: Vec<PointAtom<T>>, intervals: Vec<IntervalAtom<T>>) -> Result<Self> {
        if points.is_empty() && intervals.is_empty() {
            return Err(Error::Parameter("functional needs at least one atom".into()));
        }
        let finite = points
            .iter()
            .map(|p| p.location.to_complex())
            .chain(intervals.iter().flat_map(|i| [i.a.to_complex(), i.b.to_complex()]))
            .all(|z| z.re.is_finite() && z.im == 0.0);
        if !finite {
            return Err(Error::Parameter("atom locations must be finite reals".into()));
        }
        let mut phi = Functional {
            points,
            intervals,
            normalized: false,
        };
        let total = phi.moment(0);
        phi.normalized = if T::EXACT {
            total == T::one()
        } else {
            (total.to_complex() - 1.0).norm() < 1e-12
        };
        Ok(phi)
    }

    /// Dirac functional `f -> f(a)`.
    pub fn dirac(a: T) -> Self {
        Self::new(
            vec![PointAtom {
                location: a,
                weight: T::one(),
            }],
            vec![],
        )
        .expect("dirac atom is valid")
    }

    /// `f -> integral_a^b f / (b - a)`.
    pub fn mean(a: T, b: T) -> Self {
        let w = T::one() / (b.clone() - a.clone());
        Self::new(vec![], vec![IntervalAtom { a, b, weight: w }]).expect("interval atom is valid")
    }

    /// `f -> (f(c) + f(-c)) / 2`.
    pub fn symmetric_pair(c: T) -> Self {
        let half = T::from_ratio(1, 2);
        Self::new(
            vec![
                PointAtom {
                    location: c.clone(),
                    weight: half.clone(),
                },
                PointAtom {
                    location: -c,
                    weight: half,
                },
            ],
            vec![],
        )
        .expect("symmetric atoms are valid")
    }

    pub fn points(&self) -> &[PointAtom<T>] {
        &self.points
    }

    pub fn intervals(&self) -> &[IntervalAtom<T>] {
        &self.intervals
    }

    /// Phi{1} = 1.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::UnnormalizedFunctional {
                value: self.moment(0).to_complex(),
            })
        }
    }

    /// Phi{x^m}, exact in the scalar field.
    pub fn moment(&self, m: u32) -> T {
        let mut acc = T::zero();
        for p in &self.points {
            acc = acc + p.weight.clone() * p.location.powu(m);
        }
        for iv in &self.intervals {
            let num = iv.b.powu(m + 1) - iv.a.powu(m + 1);
            acc = acc + iv.weight.clone() * num / T::from_int(m as i64 + 1);
        }
        acc
    }

    /// Phi applied to a polynomial through its moments.
    pub fn apply_poly(&self, p: &Polynomial<T>) -> T {
        p.coeffs()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (m, c)| acc + c.clone() * self.moment(m as u32))
    }

    /// Largest |atom location|; sets the scale of the indicatrix series.
    pub fn radius(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.location.magnitude())
            .chain(self.intervals.iter().flat_map(|i| [i.a.magnitude(), i.b.magnitude()]))
            .fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> Functional<Complex64> {
        Functional {
            points: self
                .points
                .iter()
                .map(|p| PointAtom {
                    location: p.location.to_complex(),
                    weight: p.weight.to_complex(),
                })
                .collect(),
            intervals: self
                .intervals
                .iter()
                .map(|i| IntervalAtom {
                    a: i.a.to_complex(),
                    b: i.b.to_complex(),
                    weight: i.weight.to_complex(),
                })
                .collect(),
            normalized: self.normalized,
        }
    }

    /// Discretize Phi as a finite list of (location, weight) pairs: point atoms
    /// verbatim, interval atoms by composite Gauss-Legendre.
    pub fn discretize(&self, panels_per_unit: usize, order: usize) -> Vec<(f64, Complex64)> {
        let rule = gauss_legendre(order);
        let mut out: Vec<(f64, Complex64)> = self
            .points
            .iter()
            .map(|p| (p.location.to_complex().re, p.weight.to_complex()))
            .collect();
        for iv in &self.intervals {
            let (a, b) = (iv.a.to_complex().re, iv.b.to_complex().re);
            let c = iv.weight.to_complex();
            let panels = ((b - a).abs() * panels_per_unit as f64).ceil().max(1.0) as usize;
            let width = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + p as f64 * width;
                for (y, w) in rule.nodes.iter().zip(&rule.weights) {
                    out.push((lo + 0.5 * width * (y + 1.0), c * (0.5 * width * w)));
                }
            }
        }
        out
    }

    /// Phi applied to a sampled function. Point atoms use cubic parity
    /// interpolation; interval atoms integrate the interpolant cell by cell.
    pub fn apply_grid(&self, f: &ParityGrid) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.points {
            let a = p.location.to_complex().re;
            acc += p.weight.to_complex() * f.eval(a)?;
        }
        for iv in &self.intervals {
            let (a, b) = (iv.a.to_complex().re, iv.b.to_complex().re);
            acc += iv.weight.to_complex() * f.integrate(a, b)?;
        }
        Ok(acc)
    }

    /// Phi applied to a pointwise evaluator.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.discretize(16, 12)
            .into_iter()
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::from_ratio(p, d)
    }

    #[test]
    fn dirac_at_zero_moments() {
        let phi = Functional::dirac(q(0, 1));
        assert_eq!(phi.moment(0), q(1, 1));
        for m in 1..8 {
            assert_eq!(phi.moment(m), q(0, 1));
        }
    }

    #[test]
    fn unit_interval_moments_follow_power_rule() {
        let phi = Functional::mean(q(0, 1), q(1, 1));
        for m in 0..10 {
            assert_eq!(phi.moment(m), q(1, m as i64 + 1));
        }
        let x = Polynomial::monomial(q(1, 1), 1);
        assert_eq!(phi.apply_poly(&x), q(1, 2));
    }

    #[test]
    fn symmetric_pair_kills_odd_moments() {
        let phi = Functional::symmetric_pair(q(1, 1));
        for m in 0..10 {
            let expect = if m % 2 == 0 { q(1, 1) } else { q(0, 1) };
            assert_eq!(phi.moment(m), expect);
        }
        let cube = Polynomial::monomial(q(1, 1), 3);
        assert_eq!(phi.apply_poly(&cube), q(0, 1));
    }

    #[test]
    fn normalization_is_detected() {
        assert!(Functional::dirac(q(3, 1)).is_normalized());
        let phi = Functional::new(
            vec![PointAtom {
                location: q(0, 1),
                weight: q(2, 1),
            }],
            vec![],
        )
        .unwrap();
        assert!(!phi.is_normalized());
        assert!(matches!(
            phi.require_normalized(),
            Err(Error::UnnormalizedFunctional { .. })
        ));
        assert!(Functional::<BigRational>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn grid_application_matches_moments() {
        let f = ParityGrid::sample(|x| Complex64::new(x.cosh(), 0.0), 4.0, 256).unwrap();
        let phi = Functional::dirac(0.0_f64);
        assert!((phi.apply_grid(&f).unwrap() - 1.0).norm() < 1e-15);

        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0, -0.25, 0.125]);
        let g = ParityGrid::sample(|x| Complex64::new(p.eval(&x), 0.0), 4.0, 1024).unwrap();
        for phi in [
            Functional::dirac(0.3),
            Functional::mean(0.0, 1.0),
            Functional::symmetric_pair(1.0),
            Functional::mean(-0.7, 1.3),
        ] {
            let exact = phi.apply_poly(&p);
            let num = phi.apply_grid(&g).unwrap();
            assert!((num - exact).norm() < 1e-9, "{num} vs {exact}");
        }
    }

    #[test]
    fn atoms_outside_grid_are_rejected() {
        let f = ParityGrid::sample(|_| Complex64::new(1.0, 0.0), 1.0, 32).unwrap();
        let phi = Functional::dirac(2.0);
        assert!(matches!(phi.apply_grid(&f), Err(Error::Domain { .. })));
    }
}
