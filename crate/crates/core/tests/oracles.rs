//! Closed forms against brute-force transfer-matrix products.

use std::f64::consts::PI;

use pbsi_core::cavity::{amplitude_sum, ordered_field, roundtrip_oracle, CavityParams};
use pbsi_core::interferometer::{block_d_matrix, ccd_matrix, ccd_output, PhaseSetting};
use pbsi_core::optics::{apply, beam_splitter, compose, phase_stage, TransferMatrix, TOLERANCE};
use pbsi_core::{Complex64, TwoPortField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5a6_4ac)
}

fn block_d_product(phi: f64, psi: f64) -> TransferMatrix {
    let bs = beam_splitter();
    compose(&[bs, phase_stage(psi, phi).unwrap(), bs]).unwrap()
}

fn ccd_product(phi: f64, psi: f64) -> TransferMatrix {
    let bs = beam_splitter();
    compose(&[
        bs,
        phase_stage(psi, phi).unwrap(),
        bs,
        bs,
        phase_stage(phi, psi).unwrap(),
        bs,
    ])
    .unwrap()
}

#[test]
fn block_d_closed_form_matches_three_matrix_product() {
    let mut rng = rng();
    for _ in 0..1000 {
        let (phi, psi) = (
            rng.gen_range(-2.0 * PI..2.0 * PI),
            rng.gen_range(-2.0 * PI..2.0 * PI),
        );
        let p = PhaseSetting::independent(phi, psi).unwrap();
        assert!(block_d_matrix(&p).max_abs_diff(&block_d_product(phi, psi)) < TOLERANCE);
    }
}

#[test]
fn ccd_closed_form_matches_six_matrix_product() {
    let mut rng = rng();
    let minus_one = Complex64::new(-1.0, 0.0);
    for _ in 0..1000 {
        let (phi, psi) = (
            rng.gen_range(-2.0 * PI..2.0 * PI),
            rng.gen_range(-2.0 * PI..2.0 * PI),
        );
        let p = PhaseSetting::independent(phi, psi).unwrap();
        let product = ccd_product(phi, psi);
        assert!(ccd_matrix(&p).max_abs_diff(&product.scale(minus_one)) < TOLERANCE);

        let input = TwoPortField::new(
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let closed = ccd_output(&p, input).unwrap();
        let brute = apply(&product, input);
        assert!((closed.i_upper - brute.intensity_upper()).abs() < TOLERANCE);
        assert!((closed.i_lower - brute.intensity_lower()).abs() < TOLERANCE);
    }
}

#[test]
fn ordered_fields_match_round_trip_propagation() {
    let mut rng = rng();
    for &r in &[0.5, 0.9, 0.999] {
        let params = CavityParams::new(r, PI, 5000, 1e-300).unwrap();
        for _ in 0..100 {
            let phi = rng.gen_range(-PI..PI);
            let oracle = roundtrip_oracle(phi, &params).unwrap();
            assert!(!oracle.is_empty());
            for f in &oracle {
                let closed = ordered_field(f.order, phi, &params).unwrap();
                assert!(
                    (closed.e_a - f.e_a).norm() < 1e-10,
                    "r={r} n={} phi={phi}",
                    f.order
                );
                assert!(
                    (closed.e_b - f.e_b).norm() < 1e-10,
                    "r={r} n={} phi={phi}",
                    f.order
                );
            }
        }
    }
}

#[test]
fn ordered_fields_match_matrix_powers_for_any_round_trip_phase() {
    let mut rng = rng();
    for _ in 0..50 {
        let phi = rng.gen_range(-PI..PI);
        let delta = rng.gen_range(0.0..2.0 * PI);
        let params = CavityParams::new(0.97, delta, 200, 1e-300).unwrap();
        let rotation = ccd_matrix(&PhaseSetting::antiphase(phi).unwrap());
        let big_t = params.t() * params.t();
        for n in 1..=200u32 {
            let factor = Complex64::cis(n as f64 * delta) * big_t * 0.97f64.powi(n as i32 - 1);
            let expected = apply(&rotation.pow(n), TwoPortField::unit_upper()).scale(factor);
            let closed = ordered_field(n as usize, phi, &params).unwrap();
            assert!((closed.e_a - expected.a).norm() < 1e-10);
            assert!((closed.e_b - expected.b).norm() < 1e-10);
        }
    }
}

#[test]
fn oracle_sum_matches_amplitude_sum() {
    let mut rng = rng();
    let params = CavityParams::new(0.99, PI, 1000, 1e-300).unwrap();
    for _ in 0..50 {
        let phi = rng.gen_range(-PI..PI);
        let (mut a, mut b) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for f in roundtrip_oracle(phi, &params).unwrap() {
            a += f.e_a;
            b += f.e_b;
        }
        let sum = amplitude_sum(phi, &params);
        assert!((sum.a - a).norm() < 1e-10);
        assert!((sum.b - b).norm() < 1e-10);
    }
}
