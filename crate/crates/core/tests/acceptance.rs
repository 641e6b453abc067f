//! One test per acceptance criterion; each prints a PASS or FAIL line.

use nlbench::acceptance::run;

const SEED: u64 = 20_241_018;

fn check(id: u8) {
    let outcome = run(id, SEED);
    println!("{outcome}");
    assert!(outcome.pass, "{outcome}");
}

#[test]
fn criterion_01_discriminant_of_rescaled_tensor_lattices() {
    check(1);
}

#[test]
fn criterion_02_signature_of_tensor_lattices() {
    check(2);
}

#[test]
fn criterion_03_norm_dictionary() {
    check(3);
}

#[test]
fn criterion_04_siegel_equivalence_identities() {
    check(4);
}

#[test]
fn criterion_05_theta_series() {
    check(5);
}

#[test]
fn criterion_06_siegel_weil_identity() {
    check(6);
}

#[test]
fn criterion_07_intertwining_integral() {
    check(7);
}

#[test]
fn criterion_08_whittaker_table() {
    check(8);
}

#[test]
fn criterion_09_zeta_factor() {
    check(9);
}

#[test]
fn criterion_10_star_theorem_range() {
    check(10);
}

#[test]
fn criterion_11_orbit_evidence() {
    check(11);
}

#[test]
fn criterion_12_probe_support() {
    check(12);
}
