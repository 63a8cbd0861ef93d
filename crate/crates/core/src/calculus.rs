//! Exact Dunkl calculus on polynomials.
//!
//! On monomials the Dunkl operator acts as `x^m -> b_m x^(m-1)` with
//! `b_m = m + 2k [m odd]`. The right inverse `Lambda_k` fixed by
//! `Lambda_k f(0) = 0` integrates the odd part classically and the even part
//! against the weight `(t/x)^(2k)`:
//!
//! ```text
//! Lambda_k f(x) = integral_0^x [ f_o(t) + (t/x)^(2k) f_e(t) ] dt
//! ```
//!
//! so `x^m -> x^(m+1)/(m+1)` for odd `m` and `x^(m+1)/(m+2k+1)` for even `m`.
//! The nonlocal right inverse is `L_k = Lambda_k - Phi{Lambda_k .}`.

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::poly::Polynomial;
use crate::scalar::RealScalar;

/// Deformation parameter `k >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DunklParam<T> {
    k: T,
    n_int: i64,
    frac: T,
}

impl<T: RealScalar> DunklParam<T> {
    pub fn new(k: T) -> Result<Self> {
        if !(k >= T::zero()) {
            return Err(Error::Parameter(format!("k must be non-negative, got {k:?}")));
        }
        let n_int = k.floor_int();
        let frac = k.clone() - T::from_int(n_int);
        Ok(DunklParam { k, n_int, frac })
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    /// Integer part of k.
    pub fn integer_part(&self) -> i64 {
        self.n_int
    }

    pub fn fractional_part(&self) -> &T {
        &self.frac
    }

    pub fn to_f64(&self) -> f64 {
        self.k.to_f64()
    }

    /// `b_m = m + 2k [m odd]`, the monomial eigen-factor of D_k.
    pub fn b(&self, m: usize) -> T {
        let base = T::from_int(m as i64);
        if m % 2 == 1 {
            base + T::from_int(2) * self.k.clone()
        } else {
            base
        }
    }
}

/// `D_k p`.
pub fn dunkl_derivative_poly<T: RealScalar>(p: &Polynomial<T>, k: &DunklParam<T>) -> Polynomial<T> {
    Polynomial::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, c)| c.clone() * k.b(m))
            .collect(),
    )
}

/// `Lambda_k p`, the right inverse vanishing at the origin.
pub fn lambda_k_poly<T: RealScalar>(p: &Polynomial<T>, k: &DunklParam<T>) -> Polynomial<T> {
    if p.is_zero() {
        return Polynomial::zero();
    }
    let mut out = vec![T::zero()];
    out.extend(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(m, c)| c.clone() / k.b(m + 1)),
    );
    Polynomial::new(out)
}

/// `L_k p = Lambda_k p - Phi{Lambda_k p}`, the right inverse with `Phi{L_k p} = 0`.
pub fn lk_poly<T: RealScalar>(
    p: &Polynomial<T>,
    k: &DunklParam<T>,
    phi: &Functional<T>,
) -> Result<Polynomial<T>> {
    phi.require_normalized()?;
    let lam = lambda_k_poly(p, k);
    let shift = phi.apply_poly(&lam);
    Ok(&lam - &Polynomial::constant(shift))
}

/// Dunkl-Appell polynomials `A_{k,0..=n}`, `A_{k,j+1} = L_k A_{k,j}`.
pub fn appell_sequence<T: RealScalar>(
    n: usize,
    k: &DunklParam<T>,
    phi: &Functional<T>,
) -> Result<Vec<Polynomial<T>>> {
    phi.require_normalized()?;
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(Polynomial::constant(T::one()));
    for j in 0..n {
        let next = lk_poly(&seq[j], k, phi)?;
        seq.push(next);
    }
    Ok(seq)
}

/// Finite Taylor expansion in the Appell basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorExpansion<T> {
    /// `sum_{j<N} Phi{D_k^j f} A_{k,j}`.
    pub partial_sum: Polynomial<T>,
    /// `L_k^N (D_k^N f)`.
    pub remainder: Polynomial<T>,
    /// Remainder in convolution form, `A_{k,N-1} * D_k^N f`, assembled from
    /// `A_{k,N-1} * A_{k,i} = A_{k,N+i}` and the Appell expansion of
    /// `D_k^N f`.
    pub cauchy_remainder: Polynomial<T>,
}

pub fn taylor_reconstruct<T: RealScalar>(
    f: &Polynomial<T>,
    n: usize,
    k: &DunklParam<T>,
    phi: &Functional<T>,
) -> Result<TaylorExpansion<T>> {
    if n == 0 {
        return Err(Error::Parameter("Taylor order must be at least 1".into()));
    }
    phi.require_normalized()?;
    let deg = f.degree().unwrap_or(0);
    let appell = appell_sequence(n + deg + 1, k, phi)?;

    // D_k^j f for j = 0..=n
    let mut derivs = vec![f.clone()];
    for j in 0..n {
        let next = dunkl_derivative_poly(&derivs[j], k);
        derivs.push(next);
    }

    let mut partial_sum = Polynomial::zero();
    for (j, dj) in derivs.iter().take(n).enumerate() {
        let c = phi.apply_poly(dj);
        partial_sum = &partial_sum + &appell[j].scale(&c);
    }

    let mut remainder = derivs[n].clone();
    for _ in 0..n {
        remainder = lk_poly(&remainder, k, phi)?;
    }

    // D_k^N f = sum_i Phi{D_k^i D_k^N f} A_{k,i}, exact for polynomials
    let g = &derivs[n];
    let mut cauchy_remainder = Polynomial::zero();
    let mut gi = g.clone();
    let mut i = 0;
    while !gi.is_zero() {
        let c = phi.apply_poly(&gi);
        cauchy_remainder = &cauchy_remainder + &appell[n + i].scale(&c);
        gi = dunkl_derivative_poly(&gi, k);
        i += 1;
    }

    Ok(TaylorExpansion {
        partial_sum,
        remainder,
        cauchy_remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::from_ratio(p, d)
    }

    fn param(p: i64, d: i64) -> DunklParam<BigRational> {
        DunklParam::new(q(p, d)).unwrap()
    }

    fn x_pow(m: usize) -> Polynomial<BigRational> {
        Polynomial::monomial(q(1, 1), m)
    }

    #[test]
    fn parameter_parts() {
        let k = param(13, 10);
        assert_eq!(k.integer_part(), 1);
        assert_eq!(k.fractional_part(), &q(3, 10));
        assert!(DunklParam::new(q(-1, 2)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let k = param(1, 2);
        assert_eq!(dunkl_derivative_poly(&x_pow(1), &k), Polynomial::constant(q(2, 1)));
        for kk in [param(0, 1), param(3, 10), param(5, 2)] {
            assert_eq!(dunkl_derivative_poly(&x_pow(2), &kk), x_pow(1).scale(&q(2, 1)));
            assert!(dunkl_derivative_poly(&x_pow(0), &kk).is_zero());
        }
    }

    #[test]
    fn lambda_examples() {
        let k = param(1, 2);
        assert_eq!(lambda_k_poly(&x_pow(0), &k), x_pow(1).scale(&q(1, 2)));
        assert_eq!(lambda_k_poly(&x_pow(1), &k), x_pow(2).scale(&q(1, 2)));
        // k = 0 is the classical antiderivative
        let k0 = param(0, 1);
        let p = Polynomial::new(vec![q(3, 1), q(-2, 1), q(5, 7), q(1, 1)]);
        let expect = Polynomial::new(vec![q(0, 1), q(3, 1), q(-1, 1), q(5, 21), q(1, 4)]);
        assert_eq!(lambda_k_poly(&p, &k0), expect);
    }

    #[test]
    fn lk_examples() {
        let k = param(1, 2);
        let dirac0 = Functional::dirac(q(0, 1));
        assert_eq!(lk_poly(&x_pow(0), &k, &dirac0).unwrap(), x_pow(1).scale(&q(1, 2)));

        let mean = Functional::mean(q(0, 1), q(1, 1));
        let r = lk_poly(&x_pow(0), &param(0, 1), &mean).unwrap();
        assert_eq!(r, Polynomial::new(vec![q(-1, 2), q(1, 1)]));
        assert_eq!(mean.apply_poly(&r), q(0, 1));

        let bad = Functional::new(
            vec![crate::functional::PointAtom {
                location: q(0, 1),
                weight: q(1, 2),
            }],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            lk_poly(&x_pow(0), &k, &bad),
            Err(Error::UnnormalizedFunctional { .. })
        ));
    }

    #[test]
    fn appell_examples() {
        let dirac0 = Functional::dirac(q(0, 1));
        for (p, d) in [(0, 1), (1, 2), (3, 10), (5, 2)] {
            let k = param(p, d);
            let two_k1 = q(2 * p + d, d);
            let seq = appell_sequence(2, &k, &dirac0).unwrap();
            assert_eq!(seq[1], x_pow(1).scale(&(q(1, 1) / two_k1.clone())));
            assert_eq!(seq[2], x_pow(2).scale(&(q(1, 2) / two_k1)));
        }
        // classical Maclaurin basis
        let seq = appell_sequence(8, &param(0, 1), &dirac0).unwrap();
        let mut fact = 1i64;
        for (n, a) in seq.iter().enumerate() {
            if n > 0 {
                fact *= n as i64;
            }
            assert_eq!(*a, x_pow(n).scale(&q(1, fact)));
        }
        let mean = Functional::mean(q(0, 1), q(1, 1));
        let seq = appell_sequence(1, &param(0, 1), &mean).unwrap();
        assert_eq!(seq[1], Polynomial::new(vec![q(-1, 2), q(1, 1)]));
    }

    #[test]
    fn appell_recurrences_hold() {
        let k = param(3, 10);
        for phi in [
            Functional::dirac(q(0, 1)),
            Functional::dirac(q(1, 1)),
            Functional::symmetric_pair(q(1, 1)),
            Functional::mean(q(0, 1), q(1, 1)),
        ] {
            let seq = appell_sequence(10, &k, &phi).unwrap();
            for n in 0..10 {
                assert_eq!(seq[n].degree(), Some(n));
                assert_eq!(dunkl_derivative_poly(&seq[n + 1], &k), seq[n]);
                assert!(phi.apply_poly(&seq[n + 1]).is_zero());
            }
        }
    }

    #[test]
    fn taylor_examples() {
        let k = param(1, 2);
        let phi = Functional::mean(q(0, 1), q(1, 1));
        let a3 = appell_sequence(3, &k, &phi).unwrap().pop().unwrap();
        let t = taylor_reconstruct(&a3, 4, &k, &phi).unwrap();
        assert!(t.remainder.is_zero());
        assert_eq!(t.partial_sum, a3);

        let dirac0 = Functional::dirac(q(0, 1));
        let t = taylor_reconstruct(&x_pow(2), 1, &k, &dirac0).unwrap();
        assert!(t.partial_sum.is_zero());
        assert_eq!(t.remainder, x_pow(2));
        assert_eq!(t.cauchy_remainder, x_pow(2));

        let f = Polynomial::new(vec![q(1, 1), q(-2, 3), q(0, 1), q(4, 1), q(1, 5), q(-1, 1)]);
        let t = taylor_reconstruct(&f, 6, &k, &phi).unwrap();
        assert!(t.remainder.is_zero());
        assert_eq!(t.partial_sum, f);
        assert!(taylor_reconstruct(&f, 0, &k, &phi).is_err());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Polynomial<BigRational>> {
        prop::collection::vec((-20i64..=20, 1i64..=9), 0..=max_deg + 1)
            .prop_map(|c| Polynomial::new(c.into_iter().map(|(p, d)| q(p, d)).collect()))
    }

    fn arb_k() -> impl Strategy<Value = DunklParam<BigRational>> {
        (0i64..=30, 1i64..=10).prop_map(|(p, d)| param(p, d))
    }

    fn arb_phi() -> impl Strategy<Value = Functional<BigRational>> {
        prop_oneof![
            (-5i64..=5, 1i64..=4).prop_map(|(p, d)| Functional::dirac(q(p, d))),
            (1i64..=5, 1i64..=4).prop_map(|(p, d)| Functional::symmetric_pair(q(p, d))),
            (-3i64..=3, 1i64..=3).prop_map(|(a, w)| Functional::mean(q(a, 1), q(a + w, 1))),
        ]
    }

    proptest! {
        #[test]
        fn d_after_lambda_is_identity(p in arb_poly(40), k in arb_k()) {
            prop_assert_eq!(dunkl_derivative_poly(&lambda_k_poly(&p, &k), &k), p);
        }

        #[test]
        fn lk_is_annihilated_by_phi(p in arb_poly(25), k in arb_k(), phi in arb_phi()) {
            let r = lk_poly(&p, &k, &phi).unwrap();
            prop_assert!(phi.apply_poly(&r).is_zero());
            prop_assert_eq!(dunkl_derivative_poly(&r, &k), p);
        }

        #[test]
        fn taylor_identity_is_exact(f in arb_poly(12), n in 1usize..6, k in arb_k(), phi in arb_phi()) {
            let t = taylor_reconstruct(&f, n, &k, &phi).unwrap();
            prop_assert_eq!(&t.partial_sum + &t.remainder, f);
            prop_assert_eq!(t.remainder, t.cauchy_remainder);
        }

    }
}
