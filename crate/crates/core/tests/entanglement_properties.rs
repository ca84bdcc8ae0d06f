use jcm_core::entanglement::spin_flip_spectrum;
use jcm_core::{
    concurrence, entanglement_lower_bound, eof_from_concurrence, normalize, projected_state,
    projection_weight, ComplexMatrix4,
};
use nalgebra::{Complex, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_na(m: &ComplexMatrix4) -> Matrix4<Complex<f64>> {
    Matrix4::from_fn(|i, j| m[(i, j)])
}

fn from_na(m: &Matrix4<Complex<f64>>) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

/// Eigenvalues of the raw product `rho rho~` from a general complex Schur form.
fn product_eigenvalues(rho: &ComplexMatrix4) -> Vec<Complex64> {
    let sy = Matrix4::from_fn(|i, j| {
        let signs = [-1.0, 1.0, 1.0, -1.0];
        if i + j == 3 {
            Complex::new(signs[i], 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let r = to_na(rho);
    let tilde = sy * r.conjugate() * sy;
    let schur = nalgebra::Schur::new(r * tilde);
    let (_, t) = schur.unpack();
    let mut vals: Vec<Complex64> = (0..4).map(|i| t[(i, i)]).collect();
    vals.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
    vals
}

/// Wootters concurrence via nalgebra's Hermitian eigensolver.
fn reference_concurrence(rho: &ComplexMatrix4) -> f64 {
    let r = to_na(rho);
    let eig = r.symmetric_eigen();
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(
            &eig.eigenvalues
                .map(|v| Complex::new(v.max(0.0).sqrt(), 0.0)),
        )
        * eig.eigenvectors.adjoint();
    let tilde = to_na(&jcm_core::spin_flip(rho));
    let prod = root * tilde * root;
    let prod = (prod + prod.adjoint()) * Complex::new(0.5, 0.0);
    let mut l: Vec<f64> = prod
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn random_state(rng: &mut ChaCha8Rng) -> ComplexMatrix4 {
    let a =
        Matrix4::from_fn(|_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = a * a.adjoint();
    let tr = rho.trace();
    from_na(&(rho / tr))
}

fn werner(p: f64) -> ComplexMatrix4 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix4::projector([h, z, z, h]).scale(p)
        + ComplexMatrix4::identity().scale(0.25 * (1.0 - p))
}

#[test]
fn werner_concurrence_against_reference_solver() {
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let rho = werner(p);
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        let c = concurrence(&rho).unwrap().concurrence;
        assert!((c - expected).abs() < 1e-12, "p={p}: {c} vs {expected}");
        assert!((reference_concurrence(&rho) - expected).abs() < 1e-12);
    }
    assert!((concurrence(&werner(0.5)).unwrap().concurrence - 0.25).abs() < 1e-12);
}

#[test]
fn jacobi_spectrum_matches_direct_product_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rho = random_state(&mut rng);
        let ours = spin_flip_spectrum(&rho).unwrap();
        let direct = product_eigenvalues(&rho);
        for (a, b) in ours.iter().zip(&direct) {
            assert!(
                (a - b.re).abs() < 1e-10 && b.im.abs() < 1e-10,
                "{ours:?} vs {direct:?}"
            );
        }
        let c = concurrence(&rho).unwrap().concurrence;
        assert!((c - reference_concurrence(&rho)).abs() < 1e-10);
    }
}

#[test]
fn projected_states_are_positive_and_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let t = rng.gen_range(0.0..20.0);
        let beta = rng.gen_range(0.05..20.0);
        let ps = projected_state(t, beta).unwrap();
        assert!(ps.matrix.is_hermitian(1e-12));
        assert!((ps.matrix.trace().re - projection_weight(t, beta).unwrap()).abs() < 1e-12);
        let sigma = normalize(&ps).unwrap();
        let min = to_na(&sigma).symmetric_eigenvalues().min();
        assert!(min >= -1e-10, "t={t} beta={beta}: min eigenvalue {min}");
        assert!(sigma.hermitian_eigen().values[3] >= -1e-10);
        let r = entanglement_lower_bound(t, beta).unwrap();
        assert!((0.0..=1.0).contains(&r.concurrence));
        assert!(0.0 <= r.eof_lower_bound && r.eof_lower_bound <= r.weight && r.weight <= 1.0);
        assert!(r.eof_lower_bound <= r.eof_normalized);
        assert!(r.lambdas.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn eof_is_increasing_with_exact_endpoints() {
    assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
    assert_eq!(eof_from_concurrence(1.0).unwrap(), 1.0);
    let mut prev = 0.0;
    for k in 1..=1000 {
        let e = eof_from_concurrence(k as f64 / 1000.0).unwrap();
        assert!(e > prev);
        prev = e;
    }
    assert!(eof_from_concurrence(1.5).is_err());
}

#[test]
fn separable_at_time_zero() {
    for &beta in &[0.1, 1.0, 2.0, 10.0, 40.0] {
        assert_eq!(
            entanglement_lower_bound(0.0, beta).unwrap().eof_lower_bound,
            0.0
        );
    }
    assert!(projected_state(1.0, 0.0).is_err());
}
