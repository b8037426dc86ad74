//! Acceptance suite: one test per criterion, every comparison an exact
//! equality of canonical forms. Each test prints a single summary line;
//! run with `cargo test --test acceptance -- --nocapture` to see them.

use permzhu::delta::{delta_conjugation_check, solve_aj};
use permzhu::fock::{Heisenberg, Vector};
use permzhu::harness::{run_suite, CheckStatus, HarnessConfig, Suite};
use permzhu::iso::{
    eta_system_holds, phi, psi, psi_representative, solve_eta_system, verify_circ_chain,
    verify_star_chain,
};
use permzhu::model::Model;
use permzhu::ratfn::{circ_kernel_identity, geometric_sum_identity};
use permzhu::scalar::Scalar;
use permzhu::tensor::{circ_g, eigen_one_tensor, orbit_sum, vacuum_tensor};
use permzhu::{CycloScalar, FockMonomial};

fn report(n: u32, what: &str) {
    println!("ACCEPTANCE {n:02}: {what} ... PASS");
}

#[test]
fn criterion_01_coordinate_change_coefficients() {
    // Recomposition through x^13 for k = 1..6 at table order 12, and the
    // closed forms a_1 = -(k-1)/2, a_2 = (k^2-1)/12 for k <= 8.
    for k in 1..=6u32 {
        let table = solve_aj(k, 12);
        assert!(table.recomposition_holds(), "recomposition failed for k={k}");
    }
    for k in 1..=8u32 {
        let table = solve_aj(k, 12);
        let ki = i64::from(k);
        assert_eq!(table.coeff(1), &Scalar::new(-(ki - 1), 2), "a_1 for k={k}");
        assert_eq!(table.coeff(2), &Scalar::new(ki * ki - 1, 12), "a_2 for k={k}");
    }
    report(1, "coefficient solver recomposes the coordinate change exactly");
}

#[test]
fn criterion_02_circ_kernel_identity() {
    for k in 1..=8u32 {
        assert!(circ_kernel_identity(k), "kernel identity failed for k={k}");
    }
    report(2, "circle-product kernel identity holds for k = 1..8");
}

#[test]
fn criterion_03_geometric_sum_identity() {
    for k in 1..=8u32 {
        assert!(geometric_sum_identity(k), "geometric identity failed for k={k}");
    }
    report(3, "geometric-sum identity holds for k = 1..8");
}

#[test]
fn criterion_04_eta_linear_system() {
    // Symbolic right-hand sides: independent basis monomials over Q(eta_k).
    for k in 2..=7u32 {
        let rhs: Vec<Vector<CycloScalar>> = (1..k)
            .map(|t| Vector::basis(FockMonomial::from_parts(vec![t])).lift())
            .collect();
        let sol = solve_eta_system(&rhs, k);
        assert!(eta_system_holds(&sol, &rhs, k), "substitution failed for k={k}");
    }
    report(4, "root-of-unity linear system solved exactly for k = 2..7");
}

#[test]
fn criterion_05_change_of_variables_randomized() {
    let cfg = HarnessConfig {
        trials: 100,
        seed: 0,
        ..Default::default()
    };
    let records = run_suite(Suite::ChangeOfVar, &cfg);
    assert_eq!(records.len(), 1);
    assert_eq!(
        records[0].status,
        CheckStatus::Pass,
        "details: {}",
        records[0].details
    );
    report(5, "100 randomized change-of-variables cases at seed 0 agree exactly");
}

#[test]
fn criterion_06_conjugation_identity() {
    let h = Heisenberg;
    for k in 2..=3u32 {
        let table = solve_aj(k, 12);
        let basis = h.basis_up_to(3);
        for mu in &basis {
            for mv in &basis {
                let u = Vector::<Scalar>::basis(mu.clone());
                let v = Vector::<Scalar>::basis(mv.clone());
                let ok = delta_conjugation_check(&h, &u, &v, &table, 6)
                    .unwrap_or_else(|e| panic!("k={k} u={mu} v={mv}: {e}"));
                assert!(ok, "conjugation mismatch for k={k}, u={mu}, v={mv}");
            }
        }
    }
    report(6, "operator conjugation identity exact through order 6, weights <= 3, k in {2,3}");
}

#[test]
fn criterion_07_circ_chain_with_witnesses() {
    let h = Heisenberg;
    for k in 2..=3u32 {
        let table = solve_aj(k, 12);
        let basis = h.basis_up_to(3);
        for mu in &basis {
            for mv in &basis {
                let u = Vector::<Scalar>::basis(mu.clone());
                let v = Vector::<Scalar>::basis(mv.clone());
                let (outcome, witness) = verify_circ_chain(&h, &u, &v, &table)
                    .unwrap_or_else(|e| panic!("k={k} u={mu} v={mv}: {e}"));
                assert!(
                    outcome.pass,
                    "circle chain mismatch for k={k}, u={mu}, v={mv}: diff {}",
                    outcome.diff
                );
                assert_eq!(
                    witness.eval(&h),
                    outcome.lhs,
                    "witness does not re-evaluate for k={k}, u={mu}, v={mv}"
                );
            }
        }
    }
    report(7, "circle chain lands in O(V) with re-evaluating witnesses, weights <= 3, k in {2,3}");
}

#[test]
fn criterion_08_star_chain_and_conformal_shift() {
    let h = Heisenberg;
    for k in 2..=3u32 {
        let table = solve_aj(k, 12);
        let basis = h.basis_up_to(3);
        for mu in &basis {
            for mv in &basis {
                let u = Vector::<Scalar>::basis(mu.clone());
                let v = Vector::<Scalar>::basis(mv.clone());
                let outcome = verify_star_chain(&h, &u, &v, &table)
                    .unwrap_or_else(|e| panic!("k={k} u={mu} v={mv}: {e}"));
                assert!(
                    outcome.pass,
                    "star chain mismatch for k={k}, u={mu}, v={mv}: diff {}",
                    outcome.diff
                );
            }
        }
    }

    // Known-value cross-check: phi([sum_a omega^a]) = [omega/k + shift 1]
    // with shift = c (k^2 - 1)/(24 k): 1/16 at k = 2 and 1/9 at k = 3 for
    // c = 1. This also pins a_2 = (k^2-1)/12 through the shift formula.
    let omega: Vector<Scalar> = h.conformal();
    let vac = Vector::<Scalar>::basis(h.vacuum());
    for (k, shift) in [(2u32, Scalar::new(1, 16)), (3u32, Scalar::new(1, 9))] {
        let table = solve_aj(k, 12);
        let ki = i64::from(k);
        let got = phi(&h, &omega, &table).unwrap();
        let formula = h.central_charge() * Scalar::new(ki * ki - 1, 24 * ki);
        assert_eq!(shift, formula, "shift formula cross-check for k={k}");
        let expected = omega.scale(&Scalar::new(1, ki)) + &vac.scale(&shift);
        assert_eq!(got, expected, "conformal image for k={k}");
    }
    report(8, "star chain matches the product of images; conformal shift 1/16 (k=2), 1/9 (k=3)");
}

#[test]
fn criterion_09_inverse_maps_roundtrip() {
    let h = Heisenberg;
    for k in 2..=3u32 {
        let table = solve_aj(k, 12);
        for w in 0..=4i64 {
            for m in h.basis(w) {
                let u = Vector::<Scalar>::basis(m.clone());
                let rep = psi_representative(&h, &u, &table).unwrap();
                assert_eq!(
                    phi(&h, &rep, &table).unwrap(),
                    u,
                    "phi(psi(u)) != u for k={k}, u={m}"
                );
                let y = phi(&h, &u, &table).unwrap();
                assert_eq!(
                    psi(&y, &table).unwrap(),
                    orbit_sum(&u, k as usize),
                    "psi(phi(u)) != orbit sum for k={k}, u={m}"
                );
            }
        }
    }
    report(9, "phi and psi roundtrip exactly on all basis vectors of weight <= 4, k in {2,3}");
}

#[test]
fn criterion_10_twisted_eigenspace_vanishing() {
    let h = Heisenberg;
    for k in 2..=3u32 {
        let vac = vacuum_tensor(k as usize);
        for r in 1..i64::from(k) {
            for w in 0..=3i64 {
                for m in h.basis(w) {
                    let u = Vector::<Scalar>::basis(m.clone());
                    let e = eigen_one_tensor(&u, r, k);
                    assert_eq!(
                        circ_g(&e, &vac, k),
                        e,
                        "eigenvector witness failed for k={k}, r={r}, u={m}"
                    );
                }
            }
        }
    }
    report(10, "nonzero-eigenspace vectors certified inside O_g via u o_g 1 = u, weights <= 3");
}
