//! The cyclotomic field Q(eta_k), eta_k = exp(2*pi*i/k).
//!
//! Elements are polynomials in eta_k reduced modulo the k-th cyclotomic
//! polynomial Phi_k, so the representation is canonical and zero-testing is
//! coefficient-wise. Rationals embed as constants; values of different
//! conductors only mix when one side is rational.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// The k-th cyclotomic polynomial Phi_k, computed by dividing x^k - 1 by
/// Phi_d for every proper divisor d of k.
pub fn cyclotomic_polynomial(k: u32) -> Poly {
    assert!(k >= 1);
    let mut p = Poly::monomial(Scalar::one(), k as usize).sub(&Poly::one());
    for d in 1..k {
        if k % d == 0 {
            p = p.div_exact(&cyclotomic_polynomial(d)).expect("Phi_d divides x^k - 1");
        }
    }
    p
}

/// Euler phi(k) = deg Phi_k.
pub fn euler_phi(k: u32) -> usize {
    cyclotomic_polynomial(k).degree().expect("Phi_k is nonzero")
}

/// An element of Q(eta_k): coeffs[i] is the coefficient of eta_k^i,
/// 0 <= i < phi(k).
#[derive(Clone, Eq)]
pub struct CycloScalar {
    k: u32,
    coeffs: Vec<Scalar>,
}

impl CycloScalar {
    pub fn from_poly(k: u32, p: &Poly) -> Self {
        let phi = cyclotomic_polynomial(k);
        let r = p.rem(&phi).expect("Phi_k is nonzero");
        let deg = phi.degree().unwrap();
        let mut coeffs = vec![Scalar::zero(); deg];
        for (i, c) in r.coeffs().iter().enumerate() {
            coeffs[i] = c.clone();
        }
        CycloScalar { k, coeffs }
    }

    pub fn from_rational(q: &Scalar) -> Self {
        CycloScalar {
            k: 1,
            coeffs: vec![q.clone()],
        }
    }

    pub fn conductor(&self) -> u32 {
        self.k
    }

    fn to_poly(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }

    /// True when the value lies in Q (all non-constant coefficients vanish).
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Scalar::is_zero)
    }

    pub fn as_rational(&self) -> Option<Scalar> {
        if self.is_rational() {
            Some(self.coeffs.first().cloned().unwrap_or_else(Scalar::zero))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Reinterpret the value inside Q(eta_m). Only defined when the value is
    /// rational or the conductors already agree.
    fn lift_to(&self, m: u32) -> CycloScalar {
        if self.k == m {
            return self.clone();
        }
        match self.as_rational() {
            Some(q) => {
                let deg = euler_phi(m);
                let mut coeffs = vec![Scalar::zero(); deg];
                coeffs[0] = q;
                CycloScalar { k: m, coeffs }
            }
            None => panic!(
                "cannot mix cyclotomic values of conductors {} and {}",
                self.k, m
            ),
        }
    }

    fn unify(a: &CycloScalar, b: &CycloScalar) -> (CycloScalar, CycloScalar) {
        if a.k == b.k {
            (a.clone(), b.clone())
        } else if a.is_rational() {
            (a.lift_to(b.k), b.clone())
        } else {
            (a.clone(), b.lift_to(a.k))
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_polynomial(self.k);
        let (g, s, _t) = self.to_poly().ext_gcd(&phi)?;
        // Phi_k is irreducible over Q, so any nonzero element is a unit.
        assert!(g == Poly::one(), "cyclotomic polynomial must be irreducible");
        Ok(CycloScalar::from_poly(self.k, &s))
    }

    pub fn zero() -> Self {
        CycloScalar::from_rational(&Scalar::zero())
    }

    pub fn one() -> Self {
        CycloScalar::from_rational(&Scalar::one())
    }
}

/// eta_k^e, reduced canonically; exponents are taken modulo k.
pub fn eta_power(k: u32, e: i64) -> CycloScalar {
    assert!(k >= 1);
    let e = e.rem_euclid(k as i64) as usize;
    CycloScalar::from_poly(k, &Poly::monomial(Scalar::one(), e))
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.k == other.k {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: CycloScalar) -> CycloScalar {
        &self + &rhs
    }
}

impl Add<&CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        &self + rhs
    }
}

impl Add<&CycloScalar> for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = CycloScalar::unify(self, rhs);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        CycloScalar { k: a.k, coeffs }
    }
}

impl Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: CycloScalar) -> CycloScalar {
        &self + &(-rhs)
    }
}

impl Sub<&CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        &self + &(-rhs.clone())
    }
}

impl Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: CycloScalar) -> CycloScalar {
        &self * &rhs
    }
}

impl Mul<&CycloScalar> for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        &self * rhs
    }
}

impl Mul<&CycloScalar> for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        let (a, b) = CycloScalar::unify(self, rhs);
        CycloScalar::from_poly(a.k, &a.to_poly().mul(&b.to_poly()))
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Zero for CycloScalar {
    fn zero() -> Self {
        CycloScalar::zero()
    }
    fn is_zero(&self) -> bool {
        CycloScalar::is_zero(self)
    }
}

impl One for CycloScalar {
    fn one() -> Self {
        CycloScalar::one()
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*eta{}", self.k)?,
                _ => write!(f, "({c})*eta{}^{i}", self.k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
