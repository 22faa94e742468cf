use wakimoto_core::characters::{solve_kk_for_chi, AffineRoot, RootDatum};
use wakimoto_core::fields::wakimoto_currents_a22;
use wakimoto_core::fock::Mode;
use wakimoto_core::scalar::{q, qr};
use wakimoto_core::singular::{contragredient_scan, find_singular, restricted_realization, RaisingSet};

#[test]
fn generic_critical_chi_is_vacuum_only_to_degree_two() {
    let cur = wakimoto_currents_a22();
    let real = restricted_realization(&cur, qr(7, 5), Mode::int(2), 2).unwrap();
    let rep = find_singular(&real, Mode::int(2), RaisingSet::Full, 10).unwrap();
    let cert = rep.certificate.as_ref().unwrap();
    assert!(cert.generic && !cert.vacuous && cert.bound == 10);
    assert!(rep.vacuum_only, "{:?}", rep.singular);
    assert!(rep.blocks_scanned > 20);
}

#[test]
fn kk_solutions_produce_kernels_at_the_predicted_weight() {
    let datum = RootDatum::a2_2();
    let cur = wakimoto_currents_a22();
    // (β, n, predicted shift, degree) of χ − nβ relative to χ
    for (beta, n) in [(AffineRoot::new(-1, Mode::new(1, 2)), 1u32), (AffineRoot::new(-2, Mode::new(1, 2)), 1)] {
        let c1 = solve_kk_for_chi(&beta, n, &q(-3), &datum).unwrap();
        let (ds, dd) = beta.lowering_grade();
        let (shift, deg) = (ds * i64::from(n), dd.times(i64::from(n)));
        let real = restricted_realization(&cur, c1.clone(), Mode::int(1), 1).unwrap();
        let rep = find_singular(&real, Mode::int(1), RaisingSet::Full, 4).unwrap();
        assert!(rep.singular.iter().any(|k| k.shift == shift && k.degree == deg && k.kernel_dim > 0), "c1 = {c1}: {:?}", rep.singular);
        assert!(!rep.certificate.unwrap().generic);
    }
}

#[test]
fn contragredient_generic_and_trivial() {
    let cur = wakimoto_currents_a22();
    let rep = contragredient_scan(vec![qr(7, 5)], &cur, Mode::int(1), 1, RaisingSet::Full, 10).unwrap();
    assert!(rep.vacuum_only);
    let rep0 = contragredient_scan(vec![qr(7, 5)], &cur, Mode::ZERO, 0, RaisingSet::Full, 0).unwrap();
    assert!(rep0.vacuum_only && rep0.singular.len() == 1);
}
