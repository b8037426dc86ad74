//! The graded vertex-algebra model interface.
//!
//! A model supplies a basis of monomials with integer weights, a vacuum, a
//! conformal vector with its central charge, and the primitive mode action
//! u_n v on basis monomials (whose structure constants are rational). The
//! bilinear extension, Virasoro operators and truncated vertex operators are
//! provided generically, so any graded model that passes
//! [`check_model_contract`] can be plugged into the harness.


use crate::linear::{BasisKey, Coeff, GVector};
use crate::scalar::Scalar;
use crate::series::Series;

pub trait Model {
    type Mon: BasisKey;

    fn vacuum(&self) -> Self::Mon;

    fn central_charge(&self) -> Scalar;

    /// The conformal vector, as a rational linear combination of monomials.
    fn conformal(&self) -> GVector<Self::Mon, Scalar>;

    /// All basis monomials of the given weight.
    fn basis(&self, weight: i64) -> Vec<Self::Mon>;

    /// u_n v on basis monomials. Structure constants are rational; the
    /// coefficient-field generic operations lift them as needed.
    fn mode_mon(&self, u: &Self::Mon, n: i64, v: &Self::Mon) -> GVector<Self::Mon, Scalar>;

    /// Bilinear extension of the mode action to linear combinations.
    fn mode_action<C: Coeff>(
        &self,
        u: &GVector<Self::Mon, C>,
        n: i64,
        v: &GVector<Self::Mon, C>,
    ) -> GVector<Self::Mon, C> {
        let mut acc = GVector::zero();
        for (mu, cu) in u.terms() {
            for (mv, cv) in v.terms() {
                let base: GVector<Self::Mon, C> = self.mode_mon(mu, n, mv).lift();
                let c = cu.clone() * cv;
                acc = acc + &base.scale(&c);
            }
        }
        acc
    }

    /// L(n) v, where L(n) is the mode of the conformal vector in
    /// Y(omega, z) = sum_n L(n) z^{-n-2}.
    fn l_action<C: Coeff>(&self, n: i64, v: &GVector<Self::Mon, C>) -> GVector<Self::Mon, C> {
        let omega: GVector<Self::Mon, C> = self.conformal().lift();
        self.mode_action(&omega, n + 1, v)
    }

    /// Y(u, z) v as a vector-valued series, exact on [-(wt u + wt v), hi].
    fn vertex_series<C: Coeff>(
        &self,
        u: &GVector<Self::Mon, C>,
        v: &GVector<Self::Mon, C>,
        hi: i64,
    ) -> Series<GVector<Self::Mon, C>> {
        let lo = -(u.max_weight() + v.max_weight());
        let mut coeffs = Vec::new();
        for e in lo..=hi {
            let n = -e - 1;
            let c = self.mode_action(u, n, v);
            if !c.is_zero() {
                coeffs.push((e, c));
            }
        }
        Series::from_coeffs(coeffs, lo, Some(hi))
    }

    /// All basis monomials of weight 0..=max_weight, in weight order.
    fn basis_up_to(&self, max_weight: i64) -> Vec<Self::Mon> {
        (0..=max_weight).flat_map(|w| self.basis(w)).collect()
    }
}

/// The mode-calculus property suite every model must pass: grading,
/// truncation, the Virasoro bracket at the model's central charge, the
/// L(-1)-derivative property and the creation property. Returns the list of
/// violated identities.
pub fn check_model_contract<M: Model>(model: &M, max_weight: i64) -> Result<(), Vec<String>> {
    let mut failures = Vec::new();
    let basis = model.basis_up_to(max_weight);
    let vec_of = |m: &M::Mon| GVector::<M::Mon, Scalar>::basis(m.clone());

    // Grading: wt(u_n v) = wt u - n - 1 + wt v.
    for mu in &basis {
        for mv in &basis {
            for n in -(max_weight + 2)..=(max_weight + 2) {
                let r = model.mode_mon(mu, n, mv);
                if r.is_zero() {
                    continue;
                }
                let expected = mu.weight() - n - 1 + mv.weight();
                if r.homogeneous_weight() != Some(expected) {
                    failures.push(format!(
                        "grading violated: ({mu})_{n} ({mv}) has weights {:?}, expected {expected}",
                        r.weight_components().iter().map(|(w, _)| *w).collect::<Vec<_>>()
                    ));
                }
            }
        }
    }

    // Truncation: u_n v = 0 for n > wt u + wt v - 1.
    for mu in &basis {
        for mv in &basis {
            let bound = mu.weight() + mv.weight() - 1;
            for n in (bound + 1)..=(bound + 3) {
                let r = model.mode_mon(mu, n, mv);
                if !r.is_zero() {
                    failures.push(format!("truncation violated: ({mu})_{n} ({mv}) = {r}"));
                }
            }
        }
    }

    // Virasoro bracket: [L(m), L(n)] = (m-n) L(m+n) + delta_{m+n,0} (m^3-m)/12 c.
    let c = model.central_charge();
    for mv in &basis {
        if mv.weight() > 4 {
            continue;
        }
        let v = vec_of(mv);
        for m in -3i64..=3 {
            for n in -3i64..=3 {
                let lhs = model.l_action(m, &model.l_action(n, &v))
                    - model.l_action(n, &model.l_action(m, &v));
                let mut rhs = model.l_action(m + n, &v).scale(&Scalar::from_int(m - n));
                if m + n == 0 {
                    let central = Scalar::from_int(m * m * m - m) / Scalar::from_int(12);
                    rhs = rhs + &v.scale(&(central * &c));
                }
                if lhs != rhs {
                    failures.push(format!(
                        "Virasoro bracket violated on {mv} with m={m}, n={n}: {lhs} vs {rhs}"
                    ));
                }
            }
        }
    }

    // L(-1)-derivative: (L(-1)u)_n v = -n u_{n-1} v.
    for mu in &basis {
        for mv in &basis {
            let u = vec_of(mu);
            let v = vec_of(mv);
            let lu = model.l_action(-1, &u);
            for n in -(max_weight + 2)..=(max_weight + 2) {
                let lhs = model.mode_action(&lu, n, &v);
                let rhs = model.mode_action(&u, n - 1, &v).scale(&Scalar::from_int(-n));
                if lhs != rhs {
                    failures.push(format!(
                        "L(-1)-derivative violated: (L(-1){mu})_{n} {mv} != -n ({mu})_{} {mv}",
                        n - 1
                    ));
                }
            }
        }
    }

    // Creation: the z^m coefficient of Y(u, z) vacuum is L(-1)^m u / m!.
    let vac = vec_of(&model.vacuum());
    for mu in &basis {
        let u = vec_of(mu);
        let series = model.vertex_series(&u, &vac, 4);
        let mut expected = u.clone();
        let mut mfact = Scalar::one();
        for m in 0..=4i64 {
            if m > 0 {
                expected = model.l_action(-1, &expected);
                mfact = mfact * Scalar::from_int(m);
            }
            let got = series.coeff(m).expect("window covers m");
            if got != expected.scale(&mfact.inv().expect("m! nonzero")) {
                failures.push(format!(
                    "creation property violated for {mu} at order {m}: {got}"
                ));
            }
        }
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

/// Convenience: the identity-state check Y(1, z) v = v as a constant series.
pub fn vacuum_acts_as_identity<M: Model>(model: &M, max_weight: i64) -> bool {
    let one = GVector::<M::Mon, Scalar>::basis(model.vacuum());
    for mv in model.basis_up_to(max_weight) {
        let v = GVector::<M::Mon, Scalar>::term(mv, Scalar::one());
        for n in -4i64..=4 {
            let r = model.mode_action(&one, n, &v);
            let expected = if n == -1 { v.clone() } else { GVector::zero() };
            if r != expected {
                return false;
            }
        }
    }
    true
}
