use std::ffi::CStr;
use std::ptr;

use jcm_core::{evolution_matrix, ModelParams, TruncationPolicy};
use jcm_ffi::*;

fn adaptive() -> JcmTruncation {
    JcmTruncation {
        kind: JCM_TRUNCATION_ADAPTIVE,
        order: 0,
        epsilon: 1e-12,
    }
}

fn last_error() -> String {
    let p = jcm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Model(*mut JcmModel);

impl Model {
    fn new(beta: f64, omega: f64, omega0: f64, g: f64) -> Model {
        let mut handle = ptr::null_mut();
        let status = unsafe { jcm_model_new(beta, omega, omega0, g, &adaptive(), &mut handle) };
        assert_eq!(status, JcmStatus::Ok);
        Model(handle)
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { jcm_model_free(self.0) }
    }
}

#[test]
fn evolution_matches_core() {
    let model = Model::new(0.7, 1.5, 1.0, 0.8);
    let p = ModelParams::new(0.7, 1.5, 1.0, 0.8, TruncationPolicy::default()).unwrap();
    for &t in &[0.0, 0.4, 3.0, 17.0] {
        let mut out = JcmEvolutionMatrix::default();
        assert_eq!(
            unsafe { jcm_evolution_matrix(model.0, t, &mut out) },
            JcmStatus::Ok
        );
        let expected = evolution_matrix(t, &p).unwrap();
        assert_eq!(
            (out.l1, out.l2, out.l3, out.l4),
            (expected.l1, expected.l2, expected.l3, expected.l4)
        );
    }
}

#[test]
fn bloch_evolution_agrees_with_oracle() {
    let model = Model::new(1.0, 2.0, 1.0, 1.0);
    let s0 = JcmBloch {
        sx: 0.3,
        sy: -0.2,
        sz: 0.6,
    };
    let (mut series, mut exact) = (JcmBloch::default(), JcmBloch::default());
    unsafe {
        assert_eq!(
            jcm_evolve_bloch(model.0, &s0, 1.3, &mut series),
            JcmStatus::Ok
        );
        assert_eq!(
            jcm_oracle_bloch(model.0, &s0, 1.3, 64, &mut exact),
            JcmStatus::Ok
        );
    }
    assert!((series.sx - exact.sx).abs() < 1e-10);
    assert!((series.sy - exact.sy).abs() < 1e-10);
    assert!((series.sz - exact.sz).abs() < 1e-10);
}

#[test]
fn averages_and_samples() {
    let model = Model::new(1.0, 1.0, 1.0, 1.0);
    let mut avg = JcmTimeAverages::default();
    assert_eq!(
        unsafe { jcm_time_averages(model.0, &mut avg) },
        JcmStatus::Ok
    );
    assert!((avg.avg_l3 - 0.5 * (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    assert_eq!(avg.avg_l4, -avg.avg_l3);

    let (mut numeric, mut closed) = (JcmBloch::default(), JcmBloch::default());
    let zero = JcmBloch::default();
    let status =
        unsafe { jcm_time_average_numeric(model.0, &zero, 500.0, 0.05, &mut numeric, &mut closed) };
    assert_eq!(status, JcmStatus::Ok);
    assert!((numeric.sz - closed.sz).abs() < 1e-2);

    let mut buf = vec![0.0; 100];
    assert_eq!(
        unsafe { jcm_sample_series(model.0, 0.05, 100, buf.as_mut_ptr(), buf.len()) },
        JcmStatus::Ok
    );
    assert!(buf.iter().all(|v| (-1.0..=0.0).contains(v)));
    let mut m = JcmMoments::default();
    assert_eq!(
        unsafe { jcm_sample_moments(model.0, 0.05, 100, &mut m) },
        JcmStatus::Ok
    );
    let mean = buf.iter().sum::<f64>() / 100.0;
    assert!((m.mu - mean).abs() < 1e-12);

    assert_eq!(
        unsafe { jcm_sample_series(model.0, 0.05, 100, buf.as_mut_ptr(), 10) },
        JcmStatus::BufferTooSmall
    );
}

#[test]
fn entanglement_entry_points() {
    let mut e = JcmEntanglement::default();
    assert_eq!(
        unsafe { jcm_entanglement_lower_bound(0.0, 2.0, &mut e) },
        JcmStatus::Ok
    );
    assert_eq!(e.eof_lower_bound, 0.0);
    assert_eq!(
        unsafe { jcm_entanglement_lower_bound(1.0, 10.0, &mut e) },
        JcmStatus::Ok
    );
    assert!(e.eof_lower_bound > 0.0 && e.eof_lower_bound <= e.weight);
    let mut w = 0.0;
    assert_eq!(
        unsafe { jcm_projection_weight(1.0, 10.0, &mut w) },
        JcmStatus::Ok
    );
    assert_eq!(w, e.weight);

    // Werner state p = 1/2, real parts only
    let mut rho = [0.0f64; 32];
    for i in 0..4 {
        rho[2 * (4 * i + i)] = 0.125;
    }
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        rho[2 * (4 * i + j)] += 0.25;
    }
    let mut c = 0.0;
    assert_eq!(
        unsafe { jcm_concurrence(rho.as_ptr(), &mut c) },
        JcmStatus::Ok
    );
    assert!((c - 0.25).abs() < 1e-12);
    rho[3] = 0.3;
    assert_eq!(
        unsafe { jcm_concurrence(rho.as_ptr(), &mut c) },
        JcmStatus::InvalidArgument
    );
}

#[test]
fn errors_set_status_and_message() {
    let mut handle = ptr::null_mut();
    let status = unsafe { jcm_model_new(-1.0, 1.0, 1.0, 1.0, &adaptive(), &mut handle) };
    assert_eq!(status, JcmStatus::InvalidArgument);
    assert!(handle.is_null());
    assert!(last_error().contains("beta"));

    let status = unsafe { jcm_model_new_resonant(0.0, &adaptive(), &mut handle) };
    assert_eq!(status, JcmStatus::InvalidArgument);

    let bad_kind = JcmTruncation {
        kind: 9,
        order: 0,
        epsilon: 0.0,
    };
    assert_eq!(
        unsafe { jcm_model_new_resonant(1.0, &bad_kind, &mut handle) },
        JcmStatus::InvalidArgument
    );
    assert!(last_error().contains("truncation kind"));

    assert_eq!(
        unsafe { jcm_model_new_resonant(1.0, ptr::null(), &mut handle) },
        JcmStatus::NullPointer
    );
    assert_eq!(
        unsafe { jcm_model_new_resonant(1.0, &adaptive(), ptr::null_mut()) },
        JcmStatus::NullPointer
    );
    let mut out = JcmEvolutionMatrix::default();
    assert_eq!(
        unsafe { jcm_evolution_matrix(ptr::null(), 1.0, &mut out) },
        JcmStatus::NullPointer
    );

    let model = Model::new(1.0, 1.0, 1.0, 1.0);
    assert_eq!(
        unsafe { jcm_evolution_matrix(model.0, -1.0, &mut out) },
        JcmStatus::InvalidArgument
    );
    let outside = JcmBloch {
        sx: 1.0,
        sy: 1.0,
        sz: 0.0,
    };
    let mut s = JcmBloch::default();
    assert_eq!(
        unsafe { jcm_evolve_bloch(model.0, &outside, 1.0, &mut s) },
        JcmStatus::InvalidArgument
    );
    let mut m = JcmMoments::default();
    assert_eq!(
        unsafe { jcm_sample_moments(model.0, 0.05, 0, &mut m) },
        JcmStatus::InvalidArgument
    );
    let mut e = JcmEntanglement::default();
    assert_eq!(
        unsafe { jcm_entanglement_lower_bound(1.0, 0.0, &mut e) },
        JcmStatus::InvalidArgument
    );
    let small = Model::new(0.1, 1.0, 1.0, 1.0);
    let zero = JcmBloch::default();
    assert_eq!(
        unsafe { jcm_oracle_bloch(small.0, &zero, 1.0, 4, &mut s) },
        JcmStatus::InvalidArgument
    );
    assert!(last_error().contains("Fock"));
    unsafe { jcm_model_free(ptr::null_mut()) };
    assert!(!unsafe { CStr::from_ptr(jcm_version()) }
        .to_bytes()
        .is_empty());
}
