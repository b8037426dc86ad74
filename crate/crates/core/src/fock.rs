//! The rank-1 Heisenberg (free boson) model.
//!
//! Basis monomials are a(-n_1)...a(-n_r)|0> with n_1 >= ... >= n_r >= 1,
//! graded by weight sum(n_i). The generator modes satisfy
//! [a(m), a(n)] = m delta_{m+n,0} and a(m)|0> = 0 for m >= 0. The full mode
//! action u_n v is computed by structural recursion on u through the
//! standard iterate formula
//!
//!   (a(-m) w)_n = sum_{i>=0} (-1)^i binom(-m, i)
//!                 ( a(-m-i) w_{n+i}  -  (-1)^m w_{n-m-i} a(i) ).
//!
//! Both sums terminate: annihilators vanish above the weight of their
//! argument and the first sum is cut off by mode truncation.

use std::cmp::Ordering;
use std::fmt;

use crate::linear::{BasisKey, Coeff, GVector};
use crate::model::Model;
use crate::scalar::{rational_binomial, Scalar};

/// a(-n_1)...a(-n_r)|0> with parts weakly decreasing; the empty sequence is
/// the vacuum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FockMonomial {
    parts: Vec<u32>,
}

impl FockMonomial {
    pub fn vacuum() -> Self {
        FockMonomial { parts: Vec::new() }
    }

    pub fn from_parts(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        FockMonomial { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    /// Splits off the leading creation operator: a(-m) * rest.
    fn split_leading(&self) -> Option<(u32, FockMonomial)> {
        let (&first, rest) = self.parts.split_first()?;
        Some((
            first,
            FockMonomial {
                parts: rest.to_vec(),
            },
        ))
    }

    /// Prepend a creation operator a(-m).
    fn with_part(&self, m: u32) -> FockMonomial {
        let mut parts = self.parts.clone();
        let pos = parts.partition_point(|&p| p >= m);
        parts.insert(pos, m);
        FockMonomial { parts }
    }

    /// Remove one copy of the part m, if present.
    fn without_part(&self, m: u32) -> Option<FockMonomial> {
        let idx = self.parts.iter().position(|&p| p == m)?;
        let mut parts = self.parts.clone();
        parts.remove(idx);
        Some(FockMonomial { parts })
    }
}

impl BasisKey for FockMonomial {
    fn weight(&self) -> i64 {
        self.parts.iter().map(|&p| i64::from(p)).sum()
    }
}

impl PartialOrd for FockMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FockMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight(), &self.parts).cmp(&(other.weight(), &other.parts))
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut count = 0;
            while i < self.parts.len() && self.parts[i] == p {
                count += 1;
                i += 1;
            }
            if count == 1 {
                write!(f, "a(-{p})")?;
            } else {
                write!(f, "a(-{p})^{count}")?;
            }
        }
        write!(f, "|0>")
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Linear combinations of Fock monomials.
pub type Vector<C> = GVector<FockMonomial, C>;

/// The rank-1 Heisenberg model with conformal vector (1/2) a(-1)^2 |0> and
/// central charge 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct Heisenberg;

impl Heisenberg {
    /// a(m) on a basis monomial: at most one term.
    /// m < 0 creates, m > 0 contracts with multiplier m * multiplicity,
    /// m = 0 annihilates everything in the vacuum module.
    pub fn generator_mode_mon(m: i64, v: &FockMonomial) -> Option<(Scalar, FockMonomial)> {
        match m.cmp(&0) {
            Ordering::Equal => None,
            Ordering::Less => {
                let p = u32::try_from(-m).expect("part fits in u32");
                Some((Scalar::one(), v.with_part(p)))
            }
            Ordering::Greater => {
                let p = u32::try_from(m).expect("part fits in u32");
                let count = v.parts.iter().filter(|&&q| q == p).count() as i64;
                if count == 0 {
                    return None;
                }
                let reduced = v.without_part(p).expect("part present");
                Some((Scalar::from_int(m * count), reduced))
            }
        }
    }

    /// Linear extension of the generator mode a(m).
    pub fn generator_mode<C: Coeff>(m: i64, v: &Vector<C>) -> Vector<C> {
        let mut acc = Vector::zero();
        for (mv, cv) in v.terms() {
            if let Some((s, mon)) = Self::generator_mode_mon(m, mv) {
                acc.add_term(mon, cv.clone() * &C::from_rational(&s));
            }
        }
        acc
    }

    fn mode_mon_impl(&self, u: &FockMonomial, n: i64, v: &FockMonomial) -> Vector<Scalar> {
        let Some((m_u32, w)) = u.split_leading() else {
            // Vacuum state: Y(1, z) = Id.
            return if n == -1 {
                Vector::basis(v.clone())
            } else {
                Vector::zero()
            };
        };
        let m = i64::from(m_u32);
        let minus_m = Scalar::from_int(-m);
        let mut acc = Vector::zero();

        // sum_{i>=0} (-1)^i binom(-m, i) a(-m-i) (w_{n+i} v)
        let bound = w.weight() + v.weight() - 1 - n;
        for i in 0..=bound {
            let inner = self.mode_mon_impl(&w, n + i, v);
            if inner.is_zero() {
                continue;
            }
            let mut b = rational_binomial(&minus_m, i as u32);
            if i % 2 != 0 {
                b = -b;
            }
            let created = Heisenberg::generator_mode(-(m + i), &inner);
            acc = acc + &created.scale(&b);
        }

        // -(-1)^m sum_{i>=1} (-1)^i binom(-m, i) w_{n-m-i} (a(i) v)
        let outer_sign = if m % 2 == 0 { -1 } else { 1 };
        for i in 1..=v.weight() {
            let Some((c, v2)) = Heisenberg::generator_mode_mon(i, v) else {
                continue;
            };
            let inner = self.mode_mon_impl(&w, n - m - i, &v2);
            if inner.is_zero() {
                continue;
            }
            let mut b = rational_binomial(&minus_m, i as u32) * &c;
            if i % 2 != 0 {
                b = -b;
            }
            b = b * &Scalar::from_int(outer_sign);
            acc = acc + &inner.scale(&b);
        }
        acc
    }
}

impl Model for Heisenberg {
    type Mon = FockMonomial;

    fn vacuum(&self) -> FockMonomial {
        FockMonomial::vacuum()
    }

    fn central_charge(&self) -> Scalar {
        Scalar::one()
    }

    fn conformal(&self) -> Vector<Scalar> {
        Vector::term(FockMonomial::from_parts(vec![1, 1]), Scalar::new(1, 2))
    }

    fn basis(&self, weight: i64) -> Vec<FockMonomial> {
        fn partitions(remaining: i64, max_part: i64, acc: &mut Vec<u32>, out: &mut Vec<FockMonomial>) {
            if remaining == 0 {
                out.push(FockMonomial {
                    parts: acc.clone(),
                });
                return;
            }
            let top = remaining.min(max_part);
            for p in (1..=top).rev() {
                acc.push(p as u32);
                partitions(remaining - p, p, acc, out);
                acc.pop();
            }
        }
        assert!(weight >= 0);
        let mut out = Vec::new();
        partitions(weight, weight.max(1), &mut Vec::new(), &mut out);
        out
    }

    fn mode_mon(&self, u: &FockMonomial, n: i64, v: &FockMonomial) -> Vector<Scalar> {
        self.mode_mon_impl(u, n, v)
    }
}
