//! Entanglement between the atom and the two lowest photon-number levels.
//!
//! The full atom-field state is projected onto the field subspace spanned by
//! `|0>_F, |1>_F`. The projection is local to the field, so the entanglement
//! of formation of the projected state is a lower bound for the full state.
//! Everything here uses reduced units: `beta` stands for `beta hbar omega` and
//! `t` for `g t`, with zero detuning and `g > 0`. The atom starts in
//! `(|0> + |1>) / sqrt(2)`, i.e. `S(0) = (1, 0, 0)`.

mod matrix;
mod oracle;

pub use matrix::{ComplexMatrix4, HermitianEigen};
pub use oracle::{default_fock_dim, oracle_reduced_state, OracleState};

use num_complex::Complex64;

use crate::error::{invalid, JcmError, Result};

/// Eigenvalues above this (negative) value are treated as rounding noise.
pub const EIGEN_CLAMP: f64 = -1e-10;
/// Eigenvalues below this are rejected as genuinely negative.
pub const EIGEN_REJECT: f64 = -1e-8;
const WEIGHT_FLOOR: f64 = 1e-14;

/// Unnormalized projection `R_AF(t)` and its trace `p_AF(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedState {
    pub matrix: ComplexMatrix4,
    pub weight: f64,
    pub t: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concurrence {
    /// Eigenvalues of `rho rho~`, descending.
    pub lambdas: [f64; 4],
    pub concurrence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub lambdas: [f64; 4],
    pub concurrence: f64,
    /// Entanglement of formation of the normalized projected state.
    pub eof_normalized: f64,
    /// `p_AF * eof_normalized`.
    pub eof_lower_bound: f64,
    pub weight: f64,
}

fn check_inputs(t: f64, beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid(
            "beta",
            format!("must be finite and > 0, got {beta}"),
        ));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// `p_AF(t) = (1/4)(1 - e^{-b})[4 + 3e^{-b} + e^{-2b} + e^{-b}(1 - e^{-b}) cos(2 sqrt2 t)]`.
pub fn projection_weight(t: f64, beta: f64) -> Result<f64> {
    check_inputs(t, beta)?;
    let e = (-beta).exp();
    let one_minus = -(-beta).exp_m1();
    Ok(0.25
        * one_minus
        * (4.0 + 3.0 * e + e * e + e * one_minus * (2.0 * std::f64::consts::SQRT_2 * t).cos()))
}

/// Closed-form `R_AF(t)`.
pub fn projected_state(t: f64, beta: f64) -> Result<ProjectedState> {
    check_inputs(t, beta)?;
    let e = (-beta).exp();
    let (s, c) = t.sin_cos();
    let (s2, c2) = (std::f64::consts::SQRT_2 * t).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);

    let mut r = ComplexMatrix4::zeros();
    r[(0, 0)] = re(c * c + e * s * s);
    r[(0, 1)] = im(e * s * c2);
    r[(0, 2)] = re(c);
    r[(0, 3)] = im(-s * c + e * s * c);
    r[(1, 1)] = re(e * c2 * c2 + e * e * s2 * s2);
    r[(1, 2)] = re(0.0);
    r[(1, 3)] = re(e * c * c2);
    r[(2, 2)] = re(1.0);
    r[(2, 3)] = im(-s);
    r[(3, 3)] = re(s * s + e * c * c);
    for i in 0..4 {
        for j in 0..i {
            r[(i, j)] = r[(j, i)].conj();
        }
    }

    Ok(ProjectedState {
        matrix: r.scale(-0.5 * (-beta).exp_m1()),
        weight: projection_weight(t, beta)?,
        t,
        beta,
    })
}

/// `sigma_AF = R_AF / Tr R_AF`.
pub fn normalize(ps: &ProjectedState) -> Result<ComplexMatrix4> {
    let trace = ps.matrix.trace().re;
    if !(ps.weight > WEIGHT_FLOOR) || !(trace > WEIGHT_FLOOR) {
        return Err(JcmError::Degenerate(format!(
            "projection weight {} too small to normalize",
            ps.weight
        )));
    }
    Ok(ps.matrix.scale(1.0 / trace))
}

/// `(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
pub fn spin_flip(rho: &ComplexMatrix4) -> ComplexMatrix4 {
    // sigma_y (x) sigma_y is real with antidiagonal (-1, 1, 1, -1)
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let conj = rho.conj();
    let mut out = ComplexMatrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = conj[(3 - i, 3 - j)] * (SIGN[i] * SIGN[j]);
        }
    }
    out
}

fn clamp_eigenvalue(x: f64) -> Result<f64> {
    if x < EIGEN_REJECT {
        Err(JcmError::NotPositiveSemidefinite(x))
    } else {
        Ok(x.max(0.0))
    }
}

/// Eigenvalues of `rho rho~`, computed as the spectrum of the Hermitian
/// `sqrt(rho) rho~ sqrt(rho)`.
pub fn spin_flip_spectrum(rho: &ComplexMatrix4) -> Result<[f64; 4]> {
    let herm = rho.hermitian_part();
    let eig = herm.hermitian_eigen();
    for &x in &eig.values {
        clamp_eigenvalue(x)?;
    }
    let root = eig.map_values(|x| x.max(0.0).sqrt());
    let product = root * spin_flip(&herm) * root;
    let values = product.hermitian_eigen().values;
    let mut out = [0.0; 4];
    for (o, &v) in out.iter_mut().zip(&values) {
        *o = clamp_eigenvalue(v)?;
    }
    Ok(out)
}

/// Wootters concurrence `max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))`.
pub fn concurrence(rho: &ComplexMatrix4) -> Result<Concurrence> {
    let lambdas = spin_flip_spectrum(rho)?;
    let r: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let c = (r[0] - r[1] - r[2] - r[3]).clamp(0.0, 1.0);
    Ok(Concurrence {
        lambdas,
        concurrence: c,
    })
}

/// Two-qubit entanglement of formation as a function of concurrence.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(JcmError::ConcurrenceOutOfRange(c));
    }
    let root = (1.0 - c * c).sqrt();
    let plus = 0.5 * (1.0 + root);
    let minus = 0.5 * (1.0 - root);
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    Ok(h(plus) + h(minus))
}

/// `p_AF(t) E(C(sigma_AF(t)))`.
pub fn entanglement_lower_bound(t: f64, beta: f64) -> Result<EntanglementResult> {
    let ps = projected_state(t, beta)?;
    let sigma = normalize(&ps)?;
    let c = concurrence(&sigma)?;
    let eof = eof_from_concurrence(c.concurrence)?;
    Ok(EntanglementResult {
        lambdas: c.lambdas,
        concurrence: c.concurrence,
        eof_normalized: eof,
        eof_lower_bound: ps.weight * eof,
        weight: ps.weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> ComplexMatrix4 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix4::projector([c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
    }

    #[test]
    fn spin_flip_examples() {
        let mixed = ComplexMatrix4::identity().scale(0.25);
        assert_eq!(spin_flip(&mixed), mixed);
        assert!(spin_flip(&bell()).max_abs_diff(&bell()) < 1e-15);
        let up = ComplexMatrix4::from_diagonal([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            spin_flip(&up),
            ComplexMatrix4::from_diagonal([0.0, 0.0, 0.0, 1.0])
        );
    }

    #[test]
    fn spin_flip_matches_kronecker_definition() {
        let sy = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        let mut yy = ComplexMatrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                yy[(i, j)] = sy[i / 2][j / 2] * sy[i % 2][j % 2];
            }
        }
        let rho = projected_state(1.3, 0.8).unwrap().matrix;
        let direct = yy * rho.conj() * yy;
        assert!(direct.max_abs_diff(&spin_flip(&rho)) < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(
            concurrence(&bell()).unwrap().concurrence,
            1.0,
            epsilon = 1e-7
        );
        let product =
            ComplexMatrix4::projector([c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_abs_diff_eq!(
            concurrence(&product).unwrap().concurrence,
            0.0,
            epsilon = 1e-7
        );
        let mixed = ComplexMatrix4::identity().scale(0.25);
        assert_eq!(concurrence(&mixed).unwrap().concurrence, 0.0);
    }

    #[test]
    fn concurrence_rejects_negative_matrix() {
        let m = ComplexMatrix4::from_diagonal([0.6, 0.6, -0.1, -0.1]);
        assert!(matches!(
            concurrence(&m),
            Err(JcmError::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
        assert_eq!(eof_from_concurrence(1.0).unwrap(), 1.0);
        // h = (1 + sqrt(3)/2)/2, E = -h log2 h - (1-h) log2(1-h)
        assert_abs_diff_eq!(
            eof_from_concurrence(0.5).unwrap(),
            0.354_578_902_665_27,
            epsilon = 1e-12
        );
        assert!(eof_from_concurrence(-0.1).is_err());
        assert!(eof_from_concurrence(1.1).is_err());
    }

    #[test]
    fn eof_is_increasing() {
        let mut prev = 0.0;
        for k in 1..=1000 {
            let e = eof_from_concurrence(k as f64 / 1000.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn projected_state_at_origin_is_separable() {
        let ps = projected_state(0.0, 1.0).unwrap();
        assert_eq!(ps.matrix[(0, 1)], c(0.0, 0.0));
        assert_eq!(ps.matrix[(0, 3)], c(0.0, 0.0));
        assert_eq!(ps.matrix[(2, 3)].norm(), 0.0);
        let r = entanglement_lower_bound(0.0, 1.0).unwrap();
        assert_eq!(r.concurrence, 0.0);
        assert_eq!(r.eof_lower_bound, 0.0);
    }

    #[test]
    fn weight_examples() {
        for &beta in &[0.3, 1.0, 4.0] {
            assert_abs_diff_eq!(
                projection_weight(0.0, beta).unwrap(),
                1.0 - (-2.0 * beta).exp(),
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(projection_weight(2.7, 60.0).unwrap(), 1.0, epsilon = 1e-15);
        let e = (-1.0f64).exp();
        let t = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);
        let expected = 0.25 * (1.0 - e) * (4.0 + 3.0 * e + e * e - e * (1.0 - e));
        assert_abs_diff_eq!(
            projection_weight(t, 1.0).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(expected, 0.791_166_745_230_346_8, epsilon = 1e-12);
    }

    #[test]
    fn trace_matches_weight_and_is_hermitian() {
        for k in 0..600 {
            let t = k as f64 * std::f64::consts::TAU / 599.0;
            for &beta in &[0.2, 1.0, 2.0, 10.0] {
                let ps = projected_state(t, beta).unwrap();
                assert_abs_diff_eq!(ps.matrix.trace().re, ps.weight, epsilon = 1e-12);
                assert!(ps.matrix.is_hermitian(1e-15));
                assert_eq!(ps.matrix[(1, 2)], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let ps = projected_state(2.1, 0.7).unwrap();
        let sigma = normalize(&ps).unwrap();
        assert_abs_diff_eq!(sigma.trace().re, 1.0, epsilon = 1e-12);
        let mut scaled = ps;
        scaled.matrix = ps.matrix.scale(3.5);
        scaled.weight *= 3.5;
        assert!(normalize(&scaled).unwrap().max_abs_diff(&sigma) < 1e-15);
        let mut empty = ps;
        empty.weight = 0.0;
        assert!(normalize(&empty).is_err());
    }

    #[test]
    fn rejects_nonpositive_beta() {
        assert!(projected_state(1.0, 0.0).is_err());
        assert!(projection_weight(1.0, -1.0).is_err());
        assert!(entanglement_lower_bound(1.0, 0.0).is_err());
        assert!(projected_state(-1.0, 1.0).is_err());
    }
}
