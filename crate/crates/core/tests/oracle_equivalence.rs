use jcm_core::entanglement::default_fock_dim;
use jcm_core::{
    evolution_matrix, evolve_bloch, oracle_reduced_state, projected_state, BlochVector,
    ModelParams, TruncationPolicy,
};

fn params(beta: f64, dw: f64) -> ModelParams {
    ModelParams::detuned(beta, 1.0, dw, 1.0, TruncationPolicy::default()).unwrap()
}

#[test]
fn series_matches_truncated_fock_grid() {
    let s0 = BlochVector::new(0.6, 0.2, -0.7);
    for &beta in &[0.5, 1.0, 2.0] {
        for &dw in &[0.0, 1.0] {
            let p = params(beta, dw);
            let dim = default_fock_dim(&p).unwrap();
            for &t in &[0.3, 1.0, 5.0] {
                let series = evolve_bloch(&s0, &evolution_matrix(t, &p).unwrap());
                let exact = oracle_reduced_state(&s0, t, &p, dim).unwrap().bloch;
                let dev = series.max_abs_diff(&exact);
                assert!(dev < 1e-10, "beta={beta} dw={dw} t={t}: {dev:e}");
            }
        }
    }
}

#[test]
fn detuned_low_temperature_point() {
    let p = params(10.0, 1.0);
    let s0 = BlochVector::new(1.0, 0.0, 0.0);
    let series = evolve_bloch(&s0, &evolution_matrix(1.0, &p).unwrap());
    let exact = oracle_reduced_state(&s0, 1.0, &p, 64).unwrap().bloch;
    assert!(series.max_abs_diff(&exact) < 1e-10);
    // detuning rotates the transverse component out of the xz plane
    assert!(series.sy.abs() > 1e-3);
}

#[test]
fn larger_fock_dimension_does_not_move_the_result() {
    let p = params(1.0, 0.0);
    let s0 = BlochVector::new(0.0, 0.0, 1.0);
    let a = oracle_reduced_state(&s0, 1.0, &p, 128).unwrap();
    let b = oracle_reduced_state(&s0, 1.0, &p, 40).unwrap();
    assert!(a.bloch.max_abs_diff(&b.bloch) < 1e-11);
    let series = evolve_bloch(&s0, &evolution_matrix(1.0, &p).unwrap());
    assert!(series.max_abs_diff(&a.bloch) < 1e-10);
}

#[test]
fn projected_state_matches_oracle_projection() {
    let s0 = BlochVector::new(1.0, 0.0, 0.0);
    for &(beta, t) in &[(10.0, 1.0), (1.0, 0.4), (2.0, 2.5), (0.5, 7.0)] {
        let p = params(beta, 0.0);
        let exact = oracle_reduced_state(&s0, t, &p, default_fock_dim(&p).unwrap()).unwrap();
        let closed = projected_state(t, beta).unwrap();
        let dev = closed.matrix.max_abs_diff(&exact.projection);
        assert!(dev < 1e-10, "beta={beta} t={t}: {dev:e}");
        assert!((exact.projection.trace().re - closed.weight).abs() < 1e-10);
    }
}

#[test]
fn oracle_rejects_small_dimension() {
    let p = params(0.1, 0.0);
    assert!(oracle_reduced_state(&BlochVector::ZERO, 1.0, &p, 4).is_err());
}
