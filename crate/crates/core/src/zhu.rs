//! The untwisted Zhu products on a graded model.
//!
//! For homogeneous u:
//!   u o v = Res_z Y(u,z) v (1+z)^{wt u} / z^2 = sum_j binom(wt u, j) u_{j-2} v
//!   u * v = Res_z Y(u,z) v (1+z)^{wt u} / z   = sum_j binom(wt u, j) u_{j-1} v
//! both finite sums; inhomogeneous arguments extend componentwise, each
//! component using its own weight.
//!
//! O(V) is the span of all u o v. Membership is always certified
//! constructively by an [`OvWitness`] that re-evaluates to the claimed
//! vector - never decided by truncated linear algebra, which would be
//! unsound in both directions because O(V) is not weight-graded.

use crate::linear::{Coeff, GVector};
use crate::model::Model;
use crate::scalar::{rational_binomial, Scalar};

/// Res_z Y(u,z) v (1+z)^gamma z^{-p} for a single homogeneous component u of
/// weight w: sum_{j>=0} binom(gamma, j) u_{j-p} v. The sum is finite because
/// modes truncate above wt u + wt v - 1.
fn residue_product_component<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    gamma: &Scalar,
    p: i64,
    v: &GVector<M::Mon, C>,
) -> GVector<M::Mon, C> {
    let mut acc = GVector::zero();
    let mode_cap = u.max_weight() + v.max_weight() - 1;
    let mut j: i64 = 0;
    loop {
        let n = j - p;
        if n > mode_cap {
            break;
        }
        let b = rational_binomial(gamma, j as u32);
        if !b.is_zero() {
            let term = model.mode_action(u, n, v);
            acc = acc + &term.scale(&C::from_rational(&b));
        }
        j += 1;
    }
    acc
}

/// Componentwise residue product: each homogeneous component of u uses
/// exponent wt(component) + gamma_shift on (1+z).
pub fn residue_product<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    gamma_shift: &Scalar,
    p: i64,
    v: &GVector<M::Mon, C>,
) -> GVector<M::Mon, C> {
    let mut acc = GVector::zero();
    for (w, comp) in u.weight_components() {
        let gamma = Scalar::from_int(w) + gamma_shift;
        acc = acc + &residue_product_component(model, &comp, &gamma, p, v);
    }
    acc
}

/// u o v, the generator of O(V).
pub fn circ<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    v: &GVector<M::Mon, C>,
) -> GVector<M::Mon, C> {
    residue_product(model, u, &Scalar::zero(), 2, v)
}

/// u * v, the product descending to the Zhu algebra A(V).
pub fn star<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    v: &GVector<M::Mon, C>,
) -> GVector<M::Mon, C> {
    residue_product(model, u, &Scalar::zero(), 1, v)
}

/// An explicit certificate that a vector lies in O(V): a finite combination
/// sum_i coeff_i (left_i o right_i), re-checkable by evaluation. Each left_i
/// is homogeneous.
#[derive(Clone, Debug)]
pub struct OvWitness<M: Model, C: Coeff> {
    pub triples: Vec<(GVector<M::Mon, C>, GVector<M::Mon, C>, C)>,
}

impl<M: Model, C: Coeff> OvWitness<M, C> {
    pub fn empty() -> Self {
        OvWitness {
            triples: Vec::new(),
        }
    }

    pub fn push(&mut self, left: GVector<M::Mon, C>, right: GVector<M::Mon, C>, coeff: C) {
        assert!(
            left.homogeneous_weight().is_some(),
            "witness left factors must be homogeneous"
        );
        if !left.is_zero() && !coeff.is_zero() {
            self.triples.push((left, right, coeff));
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Evaluate sum_i coeff_i (left_i o right_i).
    pub fn eval(&self, model: &M) -> GVector<M::Mon, C> {
        let mut acc = GVector::zero();
        for (l, r, c) in &self.triples {
            acc = acc + &circ(model, l, r).scale(c);
        }
        acc
    }

    /// Scale every coefficient.
    pub fn scaled(&self, c: &C) -> Self {
        OvWitness {
            triples: self
                .triples
                .iter()
                .map(|(l, r, a)| (l.clone(), r.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn extend(&mut self, other: Self) {
        self.triples.extend(other.triples);
    }
}

/// Reduce L(-1)^power w (w homogeneous) modulo O(V) using the exact identity
/// L(-1) x = x o 1 - (wt x) x: returns the remaining multiple of w together
/// with the witness triples absorbing the difference, so that
/// L(-1)^power w = coeff * w + eval(witness) exactly.
fn reduce_l_power<M: Model, C: Coeff>(
    model: &M,
    w: &GVector<M::Mon, C>,
    power: u32,
) -> (C, OvWitness<M, C>) {
    let vac = GVector::basis(model.vacuum());
    let mut coeff = C::one();
    let mut witness = OvWitness::empty();
    // Peel from the outside: L^p w = (L^{p-1} w) o 1 - wt(L^{p-1} w) L^{p-1} w.
    for step in (1..=power).rev() {
        let mut x = w.clone();
        for _ in 0..(step - 1) {
            x = model.l_action(-1, &x);
        }
        let wt_x = x.homogeneous_weight().expect("L(-1) preserves homogeneity");
        witness.push(x, vac.clone(), coeff.clone());
        coeff = coeff * &C::from_int(-wt_x);
    }
    (coeff, witness)
}

/// Constructive witness that omega * v - v * omega lies in O(V) for
/// homogeneous v. Returns the witness when the construction closes exactly;
/// `None` signals that this case must be reported as skipped.
///
/// Construction: by skew-symmetry, v * omega expands as
/// sum_m (1/m!) L(-1)^m w_m with
/// w_m = sum_j binom(wt v, j) (-1)^{m+j} omega_{m+j-1} v; each L(-1)-power
/// is pushed into O(V) by the identity L(-1)x = x o 1 - (wt x) x, and the
/// leftover combination cancels against omega * v - v o 1.
pub fn omega_commutator_witness<M: Model, C: Coeff>(
    model: &M,
    v: &GVector<M::Mon, C>,
) -> Option<OvWitness<M, C>> {
    let wt_v = v.homogeneous_weight()?;
    let omega: GVector<M::Mon, C> = model.conformal().lift();
    let vac = GVector::basis(model.vacuum());

    let commutator = star(model, &omega, v) - &star(model, v, &omega);

    // Expansion of v * omega through skew-symmetry. The m-th term vanishes
    // once m - 1 exceeds the mode truncation bound.
    let mode_cap = omega.max_weight() + v.max_weight() - 1;
    let mut witness = OvWitness::empty();
    let mut reduced = GVector::zero();
    let mut m_factorial = Scalar::one();
    for m in 0..=(mode_cap + 1).max(0) {
        if m > 0 {
            m_factorial = m_factorial * Scalar::from_int(m);
        }
        let mut w_m = GVector::zero();
        for j in 0..=wt_v.max(0) {
            let n = m + j - 1;
            if n > mode_cap {
                continue;
            }
            let b = rational_binomial(&Scalar::from_int(wt_v), j as u32);
            if b.is_zero() {
                continue;
            }
            let sign = if (m + j) % 2 == 0 { b } else { -b };
            let term = model.mode_action(&omega, n, v);
            w_m = w_m + &term.scale(&C::from_rational(&sign));
        }
        if w_m.is_zero() {
            continue;
        }
        let inv_fact = C::from_rational(&m_factorial.inv().ok()?);
        for (_w, comp) in w_m.weight_components() {
            let (c, wit) = reduce_l_power(model, &comp, m as u32);
            witness.extend(wit.scaled(&inv_fact));
            reduced = reduced + &comp.scale(&(c * &inv_fact));
        }
    }

    // The expansion must reproduce v * omega exactly.
    if star(model, v, &omega) != reduced.clone() + &witness.eval(model) {
        return None;
    }

    // The commutator equals (omega * v - reduced) - eval(witness), and
    // omega * v - reduced must close as v o 1 = L(-1)v + (wt v) v.
    let mut total = witness.scaled(&-C::one());
    total.push(v.clone(), vac, C::one());
    if total.eval(model) == commutator {
        Some(total)
    } else {
        None
    }
}

/// Dual-route check for the circle product: the closed binomial sum against
/// the residue of the truncated vertex operator series.
pub fn circ_via_series<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    v: &GVector<M::Mon, C>,
) -> GVector<M::Mon, C> {
    let mut acc = GVector::zero();
    for (w, comp) in u.weight_components() {
        // (1+z)^w z^{-2} Y(u,z)v: expand the binomial and take the residue.
        let hi = w + 2;
        let series = model.vertex_series(&comp, v, hi);
        let kernel = crate::series::Series::<C>::binomial(&Scalar::from_int(w), w.max(0) as u32)
            .shift(-2);
        let product = series.scale_series(&kernel);
        acc = acc + &product.residue().expect("window covers the residue");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockMonomial, Heisenberg, Vector};
    use crate::model::Model;

    fn mon(parts: &[u32]) -> FockMonomial {
        FockMonomial::from_parts(parts.to_vec())
    }

    fn basis_vec(parts: &[u32]) -> Vector<Scalar> {
        Vector::basis(mon(parts))
    }

    #[test]
    fn vacuum_circ_is_zero() {
        let h = Heisenberg;
        for parts in [&[][..], &[1][..], &[2, 1][..]] {
            let v = basis_vec(parts);
            assert!(circ(&h, &basis_vec(&[]), &v).is_zero());
        }
    }

    #[test]
    fn circ_with_vacuum_gives_translation_plus_weight() {
        // u o 1 = L(-1)u + (wt u) u for u = a(-1)|0>.
        let h = Heisenberg;
        let u = basis_vec(&[1]);
        let expected = basis_vec(&[2]) + &basis_vec(&[1]);
        assert_eq!(circ(&h, &u, &basis_vec(&[])), expected);
    }

    #[test]
    fn circ_of_generators() {
        let h = Heisenberg;
        let a = basis_vec(&[1]);
        let expected = basis_vec(&[2, 1]) + &basis_vec(&[1, 1]);
        assert_eq!(circ(&h, &a, &a), expected);
    }

    #[test]
    fn vacuum_is_star_identity() {
        let h = Heisenberg;
        for parts in [&[][..], &[3][..], &[2, 2, 1][..]] {
            let v = basis_vec(parts);
            assert_eq!(star(&h, &basis_vec(&[]), &v), v);
        }
    }

    #[test]
    fn star_of_generators() {
        let h = Heisenberg;
        let a = basis_vec(&[1]);
        assert_eq!(star(&h, &a, &a), basis_vec(&[1, 1]));
    }

    #[test]
    fn omega_star_vacuum_is_omega() {
        let h = Heisenberg;
        let omega: Vector<Scalar> = h.conformal();
        assert_eq!(star(&h, &omega, &basis_vec(&[])), omega);
    }

    #[test]
    fn empty_witness_evaluates_to_zero() {
        let h = Heisenberg;
        let w: OvWitness<Heisenberg, Scalar> = OvWitness::empty();
        assert!(w.eval(&h).is_zero());
    }

    #[test]
    fn single_triple_witness_evaluates_to_circ() {
        let h = Heisenberg;
        let mut w: OvWitness<Heisenberg, Scalar> = OvWitness::empty();
        w.push(basis_vec(&[1]), basis_vec(&[]), Scalar::one());
        let expected = basis_vec(&[2]) + &basis_vec(&[1]);
        assert_eq!(w.eval(&h), expected);
    }

    #[test]
    fn cancelling_witness_evaluates_to_zero() {
        let h = Heisenberg;
        let mut w: OvWitness<Heisenberg, Scalar> = OvWitness::empty();
        w.push(basis_vec(&[1]), basis_vec(&[1]), Scalar::from_int(3));
        w.push(basis_vec(&[1]), basis_vec(&[1]), Scalar::from_int(-3));
        assert!(w.eval(&h).is_zero());
    }

    #[test]
    fn circ_closed_form_matches_series_residue() {
        let h = Heisenberg;
        for wu in 0..=4i64 {
            for wv in 0..=4i64 {
                for mu in h.basis(wu) {
                    for mv in h.basis(wv) {
                        let u = Vector::<Scalar>::basis(mu.clone());
                        let v = Vector::<Scalar>::basis(mv.clone());
                        assert_eq!(
                            circ(&h, &u, &v),
                            circ_via_series(&h, &u, &v),
                            "u={mu} v={mv}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn products_are_bilinear() {
        use crate::cyclo::{eta_power, CycloScalar};
        let h = Heisenberg;
        let a = basis_vec(&[2]).scale(&Scalar::new(2, 3)) + &basis_vec(&[1, 1]);
        let b = basis_vec(&[1]).scale(&Scalar::new(-1, 2));
        let c = basis_vec(&[2, 1]);
        // (a + b) * c = a * c + b * c over the rationals.
        assert_eq!(
            star(&h, &(a.clone() + &b), &c),
            star(&h, &a, &c) + &star(&h, &b, &c)
        );
        assert_eq!(
            circ(&h, &c, &(a.clone() + &b)),
            circ(&h, &c, &a) + &circ(&h, &c, &b)
        );
        // Same over the cyclotomic field with an eta coefficient.
        let eta = eta_power(3, 1);
        let ac: Vector<CycloScalar> = a.lift();
        let cc: Vector<CycloScalar> = c.lift();
        assert_eq!(
            star(&h, &ac.scale(&eta), &cc),
            star(&h, &ac, &cc).scale(&eta)
        );
    }

    #[test]
    fn omega_commutator_witnesses_up_to_weight_three() {
        let h = Heisenberg;
        let omega: Vector<Scalar> = h.conformal();
        for w in 0..=3i64 {
            for m in h.basis(w) {
                let v = Vector::<Scalar>::basis(m.clone());
                let witness = omega_commutator_witness(&h, &v)
                    .unwrap_or_else(|| panic!("witness construction failed for {m}"));
                let commutator = star(&h, &omega, &v) - &star(&h, &v, &omega);
                assert_eq!(witness.eval(&h), commutator, "monomial {m}");
            }
        }
    }
}
