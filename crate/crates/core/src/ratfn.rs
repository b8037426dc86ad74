//! Exact rational functions in the variable w = 1 + z.
//!
//! The reduction identities behind the twisted product chains are rational
//! in (1+z), so they are decided here as exact polynomial identities after
//! clearing denominators - complete for each k, independent of any
//! truncation order.

use crate::poly::Poly;
use crate::scalar::Scalar;

/// num/den, both dense polynomials in w = 1 + z with exact rational
/// coefficients. Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFn { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        RationalFn::from_poly(Poly::zero())
    }

    /// w^e for any integer e; negative exponents go to the denominator.
    pub fn w_pow(e: i64) -> Self {
        if e >= 0 {
            RationalFn::from_poly(Poly::monomial(Scalar::one(), e as usize))
        } else {
            RationalFn::new(Poly::one(), Poly::monomial(Scalar::one(), (-e) as usize))
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFn {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFn {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

/// The kernel identity of the twisted circle-product reduction:
///
///   ( 1/((1+z)^k - 1)^2
///     + sum_{t=1}^{k-1} ( (t/k)(1+z)^{t-k} + (1 - t/k)(1+z)^t ) / ((1+z)^k - 1)^2
///   ) * k (1+z)^{k-1}  =  1/z^2
///
/// verified exactly after clearing denominators, for every k >= 1.
pub fn circ_kernel_identity(k: u32) -> bool {
    assert!(k >= 1);
    let ki = k as i64;
    // p = w^k - 1
    let p = Poly::monomial(Scalar::one(), k as usize).sub(&Poly::one());
    let p2 = RationalFn::new(Poly::one(), p.mul(&p));
    let mut sum = p2.clone();
    for t in 1..ki {
        let a = RationalFn::w_pow(t - ki).scale(&Scalar::new(t, ki));
        let b = RationalFn::w_pow(t).scale(&(Scalar::one() - Scalar::new(t, ki)));
        sum = sum.add(&a.add(&b).mul(&p2));
    }
    let lhs = sum
        .mul(&RationalFn::w_pow(ki - 1))
        .scale(&Scalar::from_int(ki));
    // z^2 = (w - 1)^2
    let z = Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::one()]);
    let rhs = RationalFn::new(Poly::one(), z.mul(&z));
    lhs.eq_exact(&rhs)
}

/// The geometric-sum step of the star-product reduction:
/// z * sum_{t=0}^{k-1} (1+z)^t = (1+z)^k - 1, as exact polynomials.
pub fn geometric_sum_identity(k: u32) -> bool {
    assert!(k >= 1);
    let mut sum = Poly::zero();
    for t in 0..k {
        sum = sum.add(&Poly::monomial(Scalar::one(), t as usize));
    }
    // z = w - 1
    let z = Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::one()]);
    let lhs = z.mul(&sum);
    let rhs = Poly::monomial(Scalar::one(), k as usize).sub(&Poly::one());
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_identity_degenerate_case() {
        // k = 1: the t-sums are empty and both sides are 1/z^2.
        assert!(circ_kernel_identity(1));
    }

    #[test]
    fn kernel_identity_k2_hand_check() {
        // For k = 2 clearing denominators by hand: with w = 1 + z the left
        // side collapses because (w^2-1)^2 = z^2 (2+z)^2, and the bracket
        // works out to (2+z)^2 / (z^2 (2+z)^2) * 2w / (2w) ... the identity
        // below is the machine form of that computation.
        assert!(circ_kernel_identity(2));
    }

    #[test]
    fn kernel_identity_small_range() {
        for k in 1..=8 {
            assert!(circ_kernel_identity(k), "k={k}");
        }
    }

    #[test]
    fn geometric_identity_trivial_and_small() {
        assert!(geometric_sum_identity(1));
        // k = 2: (1 + (1+z)) z = 2z + z^2 = (1+z)^2 - 1.
        assert!(geometric_sum_identity(2));
        for k in 1..=8 {
            assert!(geometric_sum_identity(k), "k={k}");
        }
    }

    #[test]
    fn rational_fn_cross_multiplication_equality() {
        // (w^2 - 1)/(w - 1) equals (w + 1)/1.
        let a = RationalFn::new(
            Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::zero(), Scalar::one()]),
            Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::one()]),
        );
        let b = RationalFn::from_poly(Poly::from_coeffs(vec![Scalar::one(), Scalar::one()]));
        assert!(a.eq_exact(&b));
    }
}
