//! Coefficient traits and the generic linear-combination container.
//!
//! Every coefficient-carrying structure in the engine is generic over the
//! scalar type: purely rational flows run over [`Scalar`], flows that involve
//! roots of unity run over [`CycloScalar`]. Values are immutable and all
//! operations are pure, so everything here is safe to share across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};

use crate::cyclo::CycloScalar;
use crate::error::Result;
use crate::scalar::Scalar;

/// An exact coefficient field containing the rationals.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Self, Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Module<Self>
{
    fn from_rational(q: &Scalar) -> Self;

    /// Multiplicative inverse; a zero divisor is an error, never a panic.
    fn inv(&self) -> Result<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Scalar::from_int(n))
    }
}

impl Coeff for Scalar {
    fn from_rational(q: &Scalar) -> Self {
        q.clone()
    }
    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
}

impl Coeff for CycloScalar {
    fn from_rational(q: &Scalar) -> Self {
        CycloScalar::from_rational(q)
    }
    fn inv(&self) -> Result<Self> {
        CycloScalar::inv(self)
    }
}

/// Additive group with exact equality; satisfied by coefficient fields,
/// vectors and tensor vectors alike.
pub trait AddGroup:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + Neg<Output = Self>
    + Sub<Self, Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
{
}

impl<T> AddGroup for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + fmt::Display
        + Zero
        + Neg<Output = T>
        + Sub<T, Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
{
}

/// A module over the coefficient field `C`.
pub trait Module<C>: AddGroup {
    fn scale(&self, c: &C) -> Self;
}

impl Module<Scalar> for Scalar {
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
}

impl Module<CycloScalar> for CycloScalar {
    fn scale(&self, c: &CycloScalar) -> Self {
        self * c
    }
}

/// Basis labels of a graded space: totally ordered so linear combinations
/// have a canonical form, and carrying an integer weight.
pub trait BasisKey: Clone + Ord + Eq + fmt::Debug + fmt::Display {
    fn weight(&self) -> i64;
}

/// A finite linear combination of basis keys with exact coefficients.
/// Zero coefficients are never stored, so equality is syntactic equality of
/// canonical forms.
#[derive(Clone, PartialEq, Eq)]
pub struct GVector<K: BasisKey, C: Coeff> {
    terms: BTreeMap<K, C>,
}

impl<K: BasisKey, C: Coeff> GVector<K, C> {
    pub fn zero() -> Self {
        GVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(key: K, coeff: C) -> Self {
        let mut v = GVector::zero();
        v.add_term(key, coeff);
        v
    }

    pub fn basis(key: K) -> Self {
        GVector::term(key, C::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (K, C)>) -> Self {
        let mut v = GVector::zero();
        for (k, c) in it {
            v.add_term(k, c);
        }
        v
    }

    pub fn add_term(&mut self, key: K, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, coeff);
            }
            Some(old) => {
                let sum = old + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &C)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return GVector::zero();
        }
        GVector::from_terms(self.terms.iter().map(|(k, a)| (k.clone(), a.clone() * c)))
    }

    pub fn scale_rational(&self, q: &Scalar) -> Self {
        self.scale(&C::from_rational(q))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GVector<K, D> {
        GVector::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), f(c))))
    }

    /// Largest weight among the terms; zero for the zero vector.
    pub fn max_weight(&self) -> i64 {
        self.terms.keys().map(BasisKey::weight).max().unwrap_or(0)
    }

    /// `Some(w)` when every term has weight w (the zero vector counts as
    /// homogeneous of weight 0).
    pub fn homogeneous_weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(BasisKey::weight);
        match it.next() {
            None => Some(0),
            Some(w) => {
                if it.all(|x| x == w) {
                    Some(w)
                } else {
                    None
                }
            }
        }
    }

    /// Decomposition into homogeneous components, sorted by weight.
    pub fn weight_components(&self) -> Vec<(i64, Self)> {
        let mut by_weight: BTreeMap<i64, GVector<K, C>> = BTreeMap::new();
        for (k, c) in &self.terms {
            by_weight
                .entry(k.weight())
                .or_insert_with(GVector::zero)
                .add_term(k.clone(), c.clone());
        }
        by_weight.into_iter().collect()
    }
}

impl<K: BasisKey> GVector<K, Scalar> {
    /// Lift rational coefficients into a larger coefficient field.
    pub fn lift<D: Coeff>(&self) -> GVector<K, D> {
        self.map_coeffs(|c| D::from_rational(c))
    }
}

impl<K: BasisKey, C: Coeff> Add for GVector<K, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<K: BasisKey, C: Coeff> Add<&GVector<K, C>> for GVector<K, C> {
    type Output = Self;
    fn add(mut self, rhs: &Self) -> Self {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
        self
    }
}

impl<K: BasisKey, C: Coeff> Sub for GVector<K, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + &(-rhs)
    }
}

impl<K: BasisKey, C: Coeff> Sub<&GVector<K, C>> for GVector<K, C> {
    type Output = Self;
    fn sub(mut self, rhs: &Self) -> Self {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), -c.clone());
        }
        self
    }
}

impl<K: BasisKey, C: Coeff> Neg for GVector<K, C> {
    type Output = Self;
    fn neg(self) -> Self {
        GVector {
            terms: self
                .terms
                .into_iter()
                .map(|(k, c)| (k, -c))
                .collect(),
        }
    }
}

impl<K: BasisKey, C: Coeff> Zero for GVector<K, C> {
    fn zero() -> Self {
        GVector::zero()
    }
    fn is_zero(&self) -> bool {
        GVector::is_zero(self)
    }
}

impl<K: BasisKey, C: Coeff> Module<C> for GVector<K, C> {
    fn scale(&self, c: &C) -> Self {
        GVector::scale(self, c)
    }
}

impl<K: BasisKey, C: Coeff> fmt::Display for GVector<K, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let cs = c.to_string();
            let compound = cs.contains(['+', ' ']);
            let body = if first {
                write!(f, "")?;
                cs
            } else if !compound && cs.starts_with('-') {
                write!(f, " - ")?;
                cs[1..].to_string()
            } else {
                write!(f, " + ")?;
                cs
            };
            first = false;
            if body == "1" {
                write!(f, "{k}")?;
            } else if compound || body.contains('*') {
                write!(f, "({body})*{k}")?;
            } else {
                write!(f, "{body}*{k}")?;
            }
        }
        Ok(())
    }
}

impl<K: BasisKey, C: Coeff> fmt::Debug for GVector<K, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
