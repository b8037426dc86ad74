//! The Delta_k operator machinery.
//!
//! Delta_k(z) = exp(sum_j a_j z^{-j/k} L(j)) k^{-L(0)} z^{(1/k - 1) L(0)},
//! where the coefficients a_j are determined by the change-of-coordinates
//! equation
//!
//!   exp(-sum_j a_j x^{j+1} d/dx) . x = ((1+x)^k - 1) / k.
//!
//! The solver matches coefficients order by order (the system is triangular:
//! a_m enters the x^{m+1} coefficient linearly with coefficient -1 and
//! otherwise only through lower indices) and validates its output by
//! recomposing the truncated operator exponential before returning.
//!
//! At z = 1 the operator specializes to Delta_k(1) = e^{sum a_j L(j)} k^{-L(0)},
//! which is invertible with inverse k^{L(0)} e^{-sum a_j L(j)}; note the
//! order: the weight operator is applied after the exponential, acting on
//! each homogeneous component of the (generally inhomogeneous) result.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linear::{Coeff, GVector};
use crate::model::Model;
use crate::scalar::Scalar;
use crate::series::Series;

/// The solved coefficients a_1..a_N for a fixed k.
#[derive(Clone, Debug)]
pub struct AjTable {
    k: u32,
    a: Vec<Scalar>,
}

impl AjTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// a_j, 1-based.
    pub fn coeff(&self, j: usize) -> &Scalar {
        &self.a[j - 1]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.a
    }

    /// Fault-injection hook for the verification harness: returns a table
    /// with a_j shifted by delta. A corrupted table makes the conjugation and
    /// chain checks fail, demonstrating they are not vacuous.
    pub fn corrupted(mut self, j: usize, delta: &Scalar) -> Self {
        assert!(j >= 1 && j <= self.a.len(), "index out of table range");
        self.a[j - 1] = self.a[j - 1].clone() + delta;
        self
    }

    /// Independent recomposition oracle: applies the truncated exponential of
    /// the derivation -sum_j a_j x^{j+1} d/dx to x and compares with
    /// ((1+x)^k - 1)/k through x^{order+1} exactly.
    pub fn recomposition_holds(&self) -> bool {
        let trunc = self.a.len() as i64 + 1;
        let lhs = exp_neg_derivation_on_x(&self.a, trunc);
        let rhs = coordinate_target(self.k, trunc);
        lhs.agree_through(&rhs, trunc).expect("windows cover trunc")
    }
}

/// ((1+x)^k - 1)/k as an exact polynomial, truncated to the given order.
fn coordinate_target(k: u32, trunc: i64) -> Series<Scalar> {
    Series::<Scalar>::binomial(&Scalar::from_int(i64::from(k)), k)
        .sub(&Series::one())
        .scale_all(&Scalar::new(1, i64::from(k)))
        .truncate(trunc)
}

/// e^{-D} x with D = sum_j a_j x^{j+1} d/dx, truncated to the given order.
/// Every application of D raises the valuation, so the sum is finite.
fn exp_neg_derivation_on_x(a: &[Scalar], trunc: i64) -> Series<Scalar> {
    let coeff_poly = Series::from_coeffs(
        a.iter()
            .enumerate()
            .map(|(i, c)| (i as i64 + 2, c.clone()))
            .filter(|(_, c)| !c.is_zero()),
        2,
        None,
    );
    let mut acc = Series::monomial(Scalar::one(), 1);
    let mut term = acc.clone();
    let mut m: i64 = 0;
    loop {
        m += 1;
        // term <- -D(term)/m
        term = coeff_poly
            .mul(&term.derivative())
            .truncate(trunc)
            .scale_all(&Scalar::new(-1, m));
        if term.is_known_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc.truncate(trunc)
}

/// Solve for a_1..a_order by triangular coefficient matching, then validate
/// by recomposition. A table that fails its own recomposition is an internal
/// error and is never returned.
pub fn solve_aj(k: u32, order: usize) -> AjTable {
    assert!(k >= 1, "k must be positive");
    assert!(order >= 1, "order must be positive");
    let mut a: Vec<Scalar> = Vec::with_capacity(order);
    for m in 1..=order as i64 {
        // With a_m = 0, the x^{m+1} coefficient of e^{-D}x differs from the
        // final value by exactly -a_m.
        let partial = exp_neg_derivation_on_x(&a, m + 1);
        let target = coordinate_target(k, m + 1);
        let e0 = partial.coeff(m + 1).expect("window covers m+1");
        let t = target.coeff(m + 1).expect("window covers m+1");
        a.push(e0 - t);
    }
    let table = AjTable { k, a };
    assert!(
        table.recomposition_holds(),
        "internal error: solved coefficients fail recomposition for k={k}"
    );
    table
}

fn check_table<M: Model, C: Coeff>(u: &GVector<M::Mon, C>, table: &AjTable) -> Result<()> {
    let needed = u.max_weight();
    if needed > table.order() as i64 {
        return Err(Error::TableTooShort {
            order: table.order(),
            needed,
        });
    }
    Ok(())
}

/// e^{sign * sum_j a_j L(j)} u. The exponent strictly lowers weight, hence is
/// nilpotent on each component and the sum is finite.
fn exp_l<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    table: &AjTable,
    negate: bool,
) -> GVector<M::Mon, C> {
    let mut acc = u.clone();
    let mut cur = u.clone();
    let mut m: i64 = 0;
    while !cur.is_zero() {
        m += 1;
        let mut next = GVector::zero();
        let top = cur.max_weight().min(table.order() as i64);
        for j in 1..=top {
            let aj = table.coeff(j as usize);
            if aj.is_zero() {
                continue;
            }
            next = next + &model.l_action(j, &cur).scale_rational(aj);
        }
        let mut factor = Scalar::new(1, m);
        if negate {
            factor = -factor;
        }
        next = next.scale_rational(&factor);
        acc = acc + &next;
        cur = next;
    }
    acc
}

/// Delta_k(1) u = e^{sum_j a_j L(j)} k^{-L(0)} u, componentwise on weights.
pub fn delta1<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    table: &AjTable,
) -> Result<GVector<M::Mon, C>> {
    check_table::<M, C>(u, table)?;
    let k = Scalar::from_int(i64::from(table.k()));
    let mut acc = GVector::zero();
    for (w, comp) in u.weight_components() {
        let scaled = comp.scale_rational(&k.pow_i64(-w)?);
        acc = acc + &exp_l(model, &scaled, table, false);
    }
    Ok(acc)
}

/// The two-sided inverse k^{L(0)} e^{-sum_j a_j L(j)}: the exponential first,
/// then the weight power on each component of the result.
pub fn delta1_inv<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    table: &AjTable,
) -> Result<GVector<M::Mon, C>> {
    check_table::<M, C>(u, table)?;
    let k = Scalar::from_int(i64::from(table.k()));
    let e = exp_l(model, u, table, true);
    let mut acc = GVector::zero();
    for (w, comp) in e.weight_components() {
        acc = acc + &comp.scale_rational(&k.pow_i64(w)?);
    }
    Ok(acc)
}

/// e^{sum_j a_j (1+z)^{-j} L(j)} u for homogeneous u, grouped by the total
/// weight drop: parts (vec_m, m) with vec_m the coefficient of (1+z)^{-m}
/// and wt(vec_m) = wt(u) - m.
#[derive(Clone, Debug)]
pub struct WeightedVector<M: Model, C: Coeff> {
    pub parts: Vec<(GVector<M::Mon, C>, i64)>,
}

pub fn exp_weighted_l<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    table: &AjTable,
) -> Result<WeightedVector<M, C>> {
    let wt = u.homogeneous_weight().ok_or_else(|| {
        Error::NotHomogeneous(u.weight_components().iter().map(|(w, _)| *w).collect())
    })?;
    if wt > table.order() as i64 {
        return Err(Error::TableTooShort {
            order: table.order(),
            needed: wt,
        });
    }
    let mut total: BTreeMap<i64, GVector<M::Mon, C>> = BTreeMap::new();
    total.insert(0, u.clone());
    let mut cur: BTreeMap<i64, GVector<M::Mon, C>> = total.clone();
    let mut m: i64 = 0;
    while !cur.is_empty() {
        m += 1;
        let mut next: BTreeMap<i64, GVector<M::Mon, C>> = BTreeMap::new();
        for (d, vec) in &cur {
            let top = vec.max_weight().min(table.order() as i64);
            for j in 1..=top {
                let aj = table.coeff(j as usize);
                if aj.is_zero() {
                    continue;
                }
                let term = model
                    .l_action(j, vec)
                    .scale_rational(&(aj.clone() * Scalar::new(1, m)));
                if term.is_zero() {
                    continue;
                }
                let entry = next.remove(&(d + j));
                let sum = match entry {
                    None => term,
                    Some(old) => old + &term,
                };
                if sum.is_zero() {
                    continue;
                }
                next.insert(d + j, sum);
            }
        }
        for (d, vec) in &next {
            let entry = total.remove(d);
            let sum = match entry {
                None => vec.clone(),
                Some(old) => old + vec,
            };
            total.insert(*d, sum);
        }
        cur = next;
    }
    let parts: Vec<(GVector<M::Mon, C>, i64)> = total
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(d, v)| (v, d))
        .collect();
    // Structural invariant: each part drops exactly its label in weight.
    for (vec, d) in &parts {
        debug_assert_eq!(vec.homogeneous_weight(), Some(wt - d));
    }
    Ok(WeightedVector { parts })
}

/// Delta_k(1+x) u as a vector-valued series in x with integer exponents:
/// every fractional power attaches to (1+x) and is expanded by the binomial
/// series through x^order.
pub fn delta_at_one_plus_x<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    table: &AjTable,
    order: u32,
) -> Result<Series<GVector<M::Mon, C>>> {
    let k = i64::from(table.k());
    let mut acc: Series<GVector<M::Mon, C>> = Series::zero().truncate(i64::from(order));
    for (w, comp) in u.weight_components() {
        let parts = exp_weighted_l(model, &comp, table)?;
        let kw = Scalar::from_int(k).pow_i64(-w)?;
        for (vec, d) in parts.parts {
            // exponent on (1+x): (1/k - 1) w - d/k = (w - d)/k - w
            let gamma = Scalar::new(w - d, k) - Scalar::from_int(w);
            let kernel = Series::<C>::binomial(&gamma, order);
            let term = Series::constant(vec.scale_rational(&kw)).scale_series(&kernel);
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// The conjugation identity at unit argument:
///
///   Delta_k(1) Y(u, x) Delta_k(1)^{-1} v  =  Y(Delta_k(1+x) u, (1+x)^{1/k} - 1) v
///
/// both sides computed as vector-valued series by independent expansion
/// paths, compared exactly through x^order.
pub fn delta_conjugation_check<M: Model, C: Coeff>(
    model: &M,
    u: &GVector<M::Mon, C>,
    v: &GVector<M::Mon, C>,
    table: &AjTable,
    order: i64,
) -> Result<bool> {
    let k = i64::from(table.k());

    // Left side: Delta(1) applied to every coefficient of Y(u, x) Delta(1)^{-1} v.
    let v_inv = delta1_inv(model, v, table)?;
    let raw = model.vertex_series(u, &v_inv, order);
    let mut mapped = Vec::new();
    for (e, vec) in raw.terms() {
        mapped.push((*e, delta1(model, vec, table)?));
    }
    let lhs = Series::from_coeffs(mapped, raw.window_lo(), raw.window_hi());

    // Right side: Y is linear in its state, so each weighted part of
    // Delta_k(1+x) u contributes (1+x)^gamma * (Y(vec, y) v with y = (1+x)^{1/k} - 1).
    let max_lo = u.max_weight() + v.max_weight();
    let forder = u32::try_from(order + max_lo + 2).expect("order fits");
    let f = Series::<C>::binomial(&Scalar::new(1, k), forder).sub(&Series::one());
    let mut rhs: Series<GVector<M::Mon, C>> = Series::zero().truncate(order);
    for (w, comp) in u.weight_components() {
        let parts = exp_weighted_l(model, &comp, table)?;
        let kw = Scalar::from_int(k).pow_i64(-w)?;
        for (vec, d) in parts.parts {
            let g = model.vertex_series(&vec, v, order);
            let composed = g.compose(&f, order)?;
            let gamma = Scalar::new(w - d, k) - Scalar::from_int(w);
            let border = u32::try_from(order - composed.window_lo()).expect("order fits");
            let kernel = Series::<C>::binomial(&gamma, border);
            rhs = rhs.add(&composed.scale_series(&kernel).scale_all(&C::from_rational(&kw)));
        }
    }

    lhs.agree_through(&rhs, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockMonomial, Heisenberg, Vector};

    fn mon(parts: &[u32]) -> FockMonomial {
        FockMonomial::from_parts(parts.to_vec())
    }

    fn basis_vec(parts: &[u32]) -> Vector<Scalar> {
        Vector::basis(mon(parts))
    }

    #[test]
    fn identity_coordinate_change_has_zero_table() {
        let t = solve_aj(1, 5);
        assert!(t.coeffs().iter().all(Scalar::is_zero));
    }

    #[test]
    fn low_order_coefficients_for_k2() {
        // Values pinned by the recomposition oracle: e^{-D}x must equal
        // ((1+x)^2 - 1)/2 = x + x^2/2 order by order.
        let t = solve_aj(2, 3);
        assert_eq!(t.coeff(1), &Scalar::new(-1, 2));
        assert_eq!(t.coeff(2), &Scalar::new(1, 4));
        assert_eq!(t.coeff(3), &Scalar::new(-3, 16));
    }

    #[test]
    fn leading_coefficients_for_general_k() {
        for k in 1..=8u32 {
            let t = solve_aj(k, 4);
            let ki = i64::from(k);
            assert_eq!(t.coeff(1), &Scalar::new(-(ki - 1), 2), "a_1 for k={k}");
            assert_eq!(
                t.coeff(2),
                &Scalar::new(ki * ki - 1, 12),
                "a_2 for k={k}"
            );
        }
    }

    #[test]
    fn recomposition_oracle_rejects_corruption() {
        let t = solve_aj(3, 6);
        assert!(t.recomposition_holds());
        let bad = t.corrupted(2, &Scalar::one());
        assert!(!bad.recomposition_holds());
    }

    #[test]
    fn delta1_fixes_the_vacuum() {
        let h = Heisenberg;
        let t = solve_aj(2, 6);
        let vac = basis_vec(&[]);
        assert_eq!(delta1(&h, &vac, &t).unwrap(), vac);
        assert_eq!(delta1_inv(&h, &vac, &t).unwrap(), vac);
    }

    #[test]
    fn delta1_on_weight_one_is_pure_scaling() {
        // All L(j), j >= 1, annihilate a(-1)|0>.
        let h = Heisenberg;
        for k in 2..=4u32 {
            let t = solve_aj(k, 6);
            let a = basis_vec(&[1]);
            assert_eq!(
                delta1(&h, &a, &t).unwrap(),
                a.scale(&Scalar::new(1, i64::from(k)))
            );
        }
    }

    #[test]
    fn delta1_on_conformal_vector() {
        // Delta_k(1) omega = k^{-2} (omega + a_2 (c/2) 1), using L(1)omega = 0
        // and L(2)omega = (c/2) 1.
        let h = Heisenberg;
        for k in 2..=3u32 {
            let t = solve_aj(k, 6);
            let omega: Vector<Scalar> = h.conformal();
            let expected = (omega.clone()
                + &basis_vec(&[]).scale(&(t.coeff(2).clone() * Scalar::new(1, 2))))
            .scale(&Scalar::from_int(i64::from(k)).pow_i64(-2).unwrap());
            assert_eq!(delta1(&h, &omega, &t).unwrap(), expected);
        }
    }

    #[test]
    fn delta1_inverse_roundtrip_on_low_weight_basis() {
        let h = Heisenberg;
        for k in 2..=4u32 {
            let t = solve_aj(k, 8);
            for w in 0..=4i64 {
                for m in h.basis(w) {
                    let v = Vector::<Scalar>::basis(m.clone());
                    let there = delta1(&h, &v, &t).unwrap();
                    assert_eq!(delta1_inv(&h, &there, &t).unwrap(), v, "k={k} {m}");
                    let back = delta1_inv(&h, &v, &t).unwrap();
                    assert_eq!(delta1(&h, &back, &t).unwrap(), v, "k={k} {m}");
                }
            }
        }
    }

    #[test]
    fn inverse_scaling_example() {
        let h = Heisenberg;
        let t = solve_aj(2, 6);
        let v = basis_vec(&[1]).scale(&Scalar::new(1, 2));
        assert_eq!(delta1_inv(&h, &v, &t).unwrap(), basis_vec(&[1]));
    }

    #[test]
    fn table_too_short_is_an_error() {
        let h = Heisenberg;
        let t = solve_aj(2, 1);
        let v = basis_vec(&[2, 1]);
        assert!(matches!(
            delta1(&h, &v, &t),
            Err(Error::TableTooShort { .. })
        ));
    }

    #[test]
    fn weighted_exponential_of_vacuum_and_generator() {
        let h = Heisenberg;
        let t = solve_aj(2, 6);
        let vac = basis_vec(&[]);
        let parts = exp_weighted_l(&h, &vac, &t).unwrap();
        assert_eq!(parts.parts.len(), 1);
        assert_eq!(parts.parts[0], (vac, 0));

        let a = basis_vec(&[1]);
        let parts = exp_weighted_l(&h, &a, &t).unwrap();
        assert_eq!(parts.parts.len(), 1);
        assert_eq!(parts.parts[0], (a, 0));
    }

    #[test]
    fn weighted_exponential_of_conformal_vector() {
        let h = Heisenberg;
        let t = solve_aj(2, 6);
        let omega: Vector<Scalar> = h.conformal();
        let parts = exp_weighted_l(&h, &omega, &t).unwrap();
        let expected_shift = basis_vec(&[]).scale(&(t.coeff(2).clone() * Scalar::new(1, 2)));
        assert_eq!(parts.parts.len(), 2);
        assert_eq!(parts.parts[0], (omega, 0));
        assert_eq!(parts.parts[1], (expected_shift, 2));
    }

    #[test]
    fn weighted_exponential_drops_match_weights() {
        let h = Heisenberg;
        let t = solve_aj(3, 8);
        for w in 0..=4i64 {
            for m in h.basis(w) {
                let v = Vector::<Scalar>::basis(m.clone());
                let parts = exp_weighted_l(&h, &v, &t).unwrap();
                for (vec, d) in parts.parts {
                    assert_eq!(vec.homogeneous_weight(), Some(w - d), "{m} drop {d}");
                }
            }
        }
    }

    #[test]
    fn delta_series_on_weight_one_state() {
        // Delta_2(1+x) a(-1)|0> = (1/2)(1+x)^{-1/2} a(-1)|0>
        //                       = (1/2)(1 - x/2 + 3x^2/8 - ...) a(-1)|0>.
        let h = Heisenberg;
        let t = solve_aj(2, 6);
        let a = basis_vec(&[1]);
        let s = delta_at_one_plus_x(&h, &a, &t, 2).unwrap();
        assert_eq!(s.coeff(0).unwrap(), a.scale(&Scalar::new(1, 2)));
        assert_eq!(s.coeff(1).unwrap(), a.scale(&Scalar::new(-1, 4)));
        assert_eq!(s.coeff(2).unwrap(), a.scale(&Scalar::new(3, 16)));
    }

    #[test]
    fn delta_series_constant_term_is_delta1() {
        let h = Heisenberg;
        for k in 2..=3u32 {
            let t = solve_aj(k, 8);
            for w in 0..=3i64 {
                for m in h.basis(w) {
                    let v = Vector::<Scalar>::basis(m.clone());
                    let s = delta_at_one_plus_x(&h, &v, &t, 3).unwrap();
                    assert_eq!(
                        s.coeff(0).unwrap(),
                        delta1(&h, &v, &t).unwrap(),
                        "k={k} {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn conjugation_check_trivial_cases() {
        let h = Heisenberg;
        let t = solve_aj(2, 8);
        let vac = basis_vec(&[]);
        let v = basis_vec(&[2, 1]);
        assert!(delta_conjugation_check(&h, &vac, &v, &t, 4).unwrap());
        assert!(delta_conjugation_check(&h, &vac, &vac, &t, 4).unwrap());
    }

    #[test]
    fn conjugation_check_generator_pair() {
        let h = Heisenberg;
        let t = solve_aj(2, 10);
        let a = basis_vec(&[1]);
        assert!(delta_conjugation_check(&h, &a, &a, &t, 4).unwrap());
    }
}
