//! The k-fold tensor power of the free boson with the k-cycle automorphism.
//!
//! The cycle g moves the factor in slot a to slot a+1 (mod k); with this
//! convention sum_a eta^{-(a-1)s} u^a is an eta^s-eigenvector. Eigenspace
//! projectors, slot-wise tensor modes and the twisted products follow:
//!
//!   u o_g v = Res_z Y(u,z) v (1+z)^{wt u} / z^2                  (r = 0)
//!           = Res_z Y(u,z) v (1+z)^{wt u - 1 + r/k} / z          (r != 0)
//!   u *_g v = Res_z Y(u,z) v (1+z)^{wt u} / z                    (r = 0)
//!           = 0                                                  (r != 0)
//!
//! for u in the eigenspace of eta^r; mixed arguments are decomposed first.
//! The vertex operator of the tensor algebra acts slot-wise, so every
//! fractional exponent enters only through rational binomial coefficients.

use std::cmp::Ordering;
use std::fmt;

use crate::cyclo::{eta_power, CycloScalar};
use crate::error::{Error, Result};
use crate::fock::{FockMonomial, Heisenberg, Vector};
use crate::linear::{BasisKey, Coeff, GVector};
use crate::model::Model;
use crate::scalar::{rational_binomial, Scalar};

/// A pure tensor of k Fock monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorMonomial {
    slots: Vec<FockMonomial>,
}

impl TensorMonomial {
    pub fn new(slots: Vec<FockMonomial>) -> Self {
        assert!(!slots.is_empty(), "tensor must have at least one slot");
        TensorMonomial { slots }
    }

    pub fn vacuum(k: usize) -> Self {
        TensorMonomial::new(vec![FockMonomial::vacuum(); k])
    }

    pub fn slots(&self) -> &[FockMonomial] {
        &self.slots
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// g: slot a -> slot a+1 (cyclically).
    pub fn cycled(&self) -> Self {
        let mut slots = self.slots.clone();
        slots.rotate_right(1);
        TensorMonomial { slots }
    }
}

impl BasisKey for TensorMonomial {
    fn weight(&self) -> i64 {
        self.slots.iter().map(BasisKey::weight).sum()
    }
}

impl PartialOrd for TensorMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TensorMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight(), &self.slots).cmp(&(other.weight(), &other.slots))
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Linear combinations of tensor monomials.
pub type TensorVector<C> = GVector<TensorMonomial, C>;

/// The vacuum of the tensor algebra as a vector.
pub fn vacuum_tensor<C: Coeff>(k: usize) -> TensorVector<C> {
    TensorVector::basis(TensorMonomial::vacuum(k))
}

/// Linear extension of the cycle action.
pub fn cycle_apply<C: Coeff>(w: &TensorVector<C>) -> TensorVector<C> {
    GVector::from_terms(w.terms().map(|(m, c)| (m.cycled(), c.clone())))
}

/// u placed in slot a (1-based), vacuum elsewhere; linear in u.
pub fn one_tensor<C: Coeff>(u: &Vector<C>, a: usize, k: usize) -> Result<TensorVector<C>> {
    if a < 1 || a > k {
        return Err(Error::SlotOutOfRange { slot: a, k });
    }
    Ok(GVector::from_terms(u.terms().map(|(m, c)| {
        let mut slots = vec![FockMonomial::vacuum(); k];
        slots[a - 1] = m.clone();
        (TensorMonomial::new(slots), c.clone())
    })))
}

/// u in slot a and v in slot b (1-based, distinct), vacuum elsewhere;
/// bilinear in u and v.
pub fn two_tensor<C: Coeff>(
    u: &Vector<C>,
    a: usize,
    v: &Vector<C>,
    b: usize,
    k: usize,
) -> Result<TensorVector<C>> {
    if a < 1 || a > k {
        return Err(Error::SlotOutOfRange { slot: a, k });
    }
    if b < 1 || b > k {
        return Err(Error::SlotOutOfRange { slot: b, k });
    }
    assert!(a != b, "two-tensor slots must be distinct");
    let mut acc = TensorVector::zero();
    for (mu, cu) in u.terms() {
        for (mv, cv) in v.terms() {
            let mut slots = vec![FockMonomial::vacuum(); k];
            slots[a - 1] = mu.clone();
            slots[b - 1] = mv.clone();
            acc.add_term(TensorMonomial::new(slots), cu.clone() * cv);
        }
    }
    Ok(acc)
}

/// The orbit sum sum_{a=1}^k u^a, which is g-invariant.
pub fn orbit_sum<C: Coeff>(u: &Vector<C>, k: usize) -> TensorVector<C> {
    let mut acc = TensorVector::zero();
    for a in 1..=k {
        acc = acc + &one_tensor(u, a, k).expect("slot in range");
    }
    acc
}

/// The eigenvector sum_{a=1}^k eta^{-(a-1)s} u^a, which lies in the
/// eta^s-eigenspace of the cycle.
pub fn eigen_one_tensor(u: &Vector<Scalar>, s: i64, k: u32) -> TensorVector<CycloScalar> {
    let mut acc = TensorVector::zero();
    let uc: Vector<CycloScalar> = u.lift();
    for a in 1..=k as usize {
        let phase = eta_power(k, -(a as i64 - 1) * s);
        acc = acc + &one_tensor(&uc, a, k as usize).expect("slot in range").scale(&phase);
    }
    acc
}

/// The conformal vector of the tensor algebra, sum_a omega^a.
pub fn conformal_tensor<C: Coeff>(k: usize) -> TensorVector<C> {
    let omega: Vector<C> = Heisenberg.conformal().lift();
    orbit_sum(&omega, k)
}

/// Projector onto the eta^r-eigenspace:
/// P_r w = (1/k) sum_{m=0}^{k-1} eta^{-rm} g^m w.
pub fn eigencomponent(w: &TensorVector<CycloScalar>, r: i64, k: u32) -> TensorVector<CycloScalar> {
    let inv_k = CycloScalar::from_rational(&Scalar::new(1, k as i64));
    let mut acc = TensorVector::zero();
    let mut cur = w.clone();
    for m in 0..k as i64 {
        acc = acc + &cur.scale(&eta_power(k, -r * m));
        cur = cycle_apply(&cur);
    }
    acc.scale(&inv_k)
}

/// Mode of a pure tensor acting on a pure tensor: the z^{-n-1} coefficient of
/// the slot-wise vertex operator, i.e. the sum over mode tuples
/// m_1 + ... + m_k = n + 1 - k of the per-slot actions.
fn tensor_mode_mon(u: &TensorMonomial, n: i64, v: &TensorMonomial) -> TensorVector<Scalar> {
    let k = u.slot_count();
    assert_eq!(k, v.slot_count(), "slot counts must agree");
    let h = Heisenberg;
    let caps: Vec<i64> = (0..k)
        .map(|a| u.slots[a].weight() + v.slots[a].weight() - 1)
        .collect();
    let suffix_caps: Vec<i64> = {
        let mut s = vec![0i64; k + 1];
        for a in (0..k).rev() {
            s[a] = s[a + 1] + caps[a];
        }
        s
    };

    fn rec(
        h: &Heisenberg,
        u: &TensorMonomial,
        v: &TensorMonomial,
        caps: &[i64],
        suffix_caps: &[i64],
        a: usize,
        remaining: i64,
    ) -> Vec<(Vec<FockMonomial>, Scalar)> {
        let k = u.slot_count();
        if a == k {
            return if remaining == 0 {
                vec![(Vec::new(), Scalar::one())]
            } else {
                Vec::new()
            };
        }
        let floor = remaining - suffix_caps[a + 1];
        let mut out = Vec::new();
        for m in floor..=caps[a] {
            let slot_result = h.mode_mon(&u.slots[a], m, &v.slots[a]);
            if slot_result.is_zero() {
                continue;
            }
            let tails = rec(h, u, v, caps, suffix_caps, a + 1, remaining - m);
            for (mon, c) in slot_result.terms() {
                for (tail, ct) in &tails {
                    let mut slots = Vec::with_capacity(k - a);
                    slots.push(mon.clone());
                    slots.extend(tail.iter().cloned());
                    out.push((slots, c * ct));
                }
            }
        }
        out
    }

    let combos = rec(&h, u, v, &caps, &suffix_caps, 0, n + 1 - k as i64);
    let mut acc = TensorVector::zero();
    for (slots, c) in combos {
        acc.add_term(TensorMonomial::new(slots), c);
    }
    acc
}

/// Bilinear extension of the tensor mode action.
pub fn tensor_mode<C: Coeff>(
    u: &TensorVector<C>,
    n: i64,
    v: &TensorVector<C>,
) -> TensorVector<C> {
    let mut acc = TensorVector::zero();
    for (mu, cu) in u.terms() {
        for (mv, cv) in v.terms() {
            let base: TensorVector<C> = tensor_mode_mon(mu, n, mv).lift();
            acc = acc + &base.scale(&(cu.clone() * cv));
        }
    }
    acc
}

/// Res_z Y(u,z) v (1+z)^gamma z^{-p} on the tensor algebra, for a single
/// component u (already homogeneous in weight and eigenspace).
fn tensor_residue_product(
    u: &TensorVector<CycloScalar>,
    gamma: &Scalar,
    p: i64,
    v: &TensorVector<CycloScalar>,
) -> TensorVector<CycloScalar> {
    let mut acc = TensorVector::zero();
    let mode_cap = u.max_weight() + v.max_weight() - 1;
    let mut j: i64 = 0;
    loop {
        let n = j - p;
        if n > mode_cap {
            break;
        }
        let b = rational_binomial(gamma, j as u32);
        if !b.is_zero() {
            let term = tensor_mode(u, n, v);
            acc = acc + &term.scale(&CycloScalar::from_rational(&b));
        }
        j += 1;
    }
    acc
}

/// The twisted circle product u o_g v. The left argument is decomposed into
/// components homogeneous in both weight and eigenspace; the eta^r component
/// of weight w uses the kernel (1+z)^{w-1+r/k}/z for r != 0 and the untwisted
/// kernel (1+z)^w/z^2 for r = 0.
pub fn circ_g(
    u: &TensorVector<CycloScalar>,
    v: &TensorVector<CycloScalar>,
    k: u32,
) -> TensorVector<CycloScalar> {
    let mut acc = TensorVector::zero();
    for (w, uw) in u.weight_components() {
        for r in 0..k as i64 {
            let comp = eigencomponent(&uw, r, k);
            if comp.is_zero() {
                continue;
            }
            if r == 0 {
                acc = acc + &tensor_residue_product(&comp, &Scalar::from_int(w), 2, v);
            } else {
                let gamma = Scalar::from_int(w - 1) + Scalar::new(r, k as i64);
                acc = acc + &tensor_residue_product(&comp, &gamma, 1, v);
            }
        }
    }
    acc
}

/// The twisted star product u *_g v: the untwisted formula on the invariant
/// eigenspace, zero on every other eigenspace.
pub fn star_g(
    u: &TensorVector<CycloScalar>,
    v: &TensorVector<CycloScalar>,
    k: u32,
) -> TensorVector<CycloScalar> {
    let mut acc = TensorVector::zero();
    for (w, uw) in u.weight_components() {
        let comp = eigencomponent(&uw, 0, k);
        if comp.is_zero() {
            continue;
        }
        acc = acc + &tensor_residue_product(&comp, &Scalar::from_int(w), 1, v);
    }
    acc
}
