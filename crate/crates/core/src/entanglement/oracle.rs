//! Brute-force reference: exact evolution in a truncated Fock space.
//!
//! The generator `[[-dw/2, g a], [g a^dagger, dw/2]]` is built as a dense real
//! symmetric matrix and diagonalized numerically, so nothing here reuses the
//! closed-form series. The propagator is `exp(+i M t)`, the same sign
//! convention as the closed-form `u` elements of `U(t)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::ComplexMatrix4;
use crate::bloch::BlochVector;
use crate::error::{invalid, JcmError, Result};
use crate::params::ModelParams;

/// Thermal weight allowed beyond the last populated Fock level.
pub const ORACLE_TAIL: f64 = 1e-12;

/// Oracle output: the `n in {0, 1}` projection and the atom's Bloch vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub projection: ComplexMatrix4,
    pub bloch: BlochVector,
    pub fock_dim: usize,
}

/// Smallest `D` with thermal tail `e^{-D x} < 1e-12`, `x = beta omega`.
pub fn default_fock_dim(p: &ModelParams) -> Result<usize> {
    let x = p.reduced_beta();
    if !(x > 0.0) {
        return Err(invalid("beta", "the Fock-space oracle needs beta > 0"));
    }
    let mut d = (-ORACLE_TAIL.ln() / x).floor().max(0.0) as usize;
    while (-(d as f64) * x).exp() >= ORACLE_TAIL {
        d += 1;
    }
    while d > 0 && (-((d - 1) as f64) * x).exp() < ORACLE_TAIL {
        d -= 1;
    }
    Ok(d.max(2))
}

/// Evolves `rho_A(s0) (x) rho_F` exactly for time `t` (`hbar = 1`).
///
/// Photon numbers `0..fock_dim` are populated thermally; one extra level is
/// kept so every populated sector `{|0,n>, |1,n+1>}` is complete.
pub fn oracle_reduced_state(
    s0: &BlochVector,
    t: f64,
    p: &ModelParams,
    fock_dim: usize,
) -> Result<OracleState> {
    if fock_dim < 2 {
        return Err(invalid("fock_dim", format!("must be >= 2, got {fock_dim}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    let required = default_fock_dim(p)?;
    if fock_dim < required {
        return Err(JcmError::FockDimensionTooSmall {
            given: fock_dim,
            required,
        });
    }

    let levels = fock_dim + 1;
    let dim = 2 * levels;
    let excited = |n: usize| n;
    let ground = |n: usize| levels + n;

    let half_dw = 0.5 * p.delta_omega();
    let mut generator = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..levels {
        generator[(excited(n), excited(n))] = -half_dw;
        generator[(ground(n), ground(n))] = half_dw;
        if n + 1 < levels {
            // g a couples |1, n+1> to |0, n> with amplitude g sqrt(n+1)
            let amp = p.g() * ((n + 1) as f64).sqrt();
            generator[(excited(n), ground(n + 1))] = amp;
            generator[(ground(n + 1), excited(n))] = amp;
        }
    }

    let eig = SymmetricEigen::new(generator);
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|lam| Complex64::from_polar(1.0, lam * t)),
    );
    let propagator = &v * phases * v.transpose();

    let x = p.reduced_beta();
    let one_minus = -(-x).exp_m1();
    let populations: Vec<f64> = (0..levels)
        .map(|n| {
            if n < fock_dim {
                one_minus * (-(n as f64) * x).exp()
            } else {
                0.0
            }
        })
        .collect();
    let atom = [
        [
            Complex64::new(0.5 * (1.0 + s0.sz), 0.0),
            Complex64::new(0.5 * s0.sx, -0.5 * s0.sy),
        ],
        [
            Complex64::new(0.5 * s0.sx, 0.5 * s0.sy),
            Complex64::new(0.5 * (1.0 - s0.sz), 0.0),
        ],
    ];
    let mut rho0 = DMatrix::<Complex64>::zeros(dim, dim);
    for a in 0..2 {
        for b in 0..2 {
            for (n, &pn) in populations.iter().enumerate() {
                rho0[(a * levels + n, b * levels + n)] = atom[a][b] * pn;
            }
        }
    }
    let rho = &propagator * rho0 * propagator.adjoint();

    let mut reduced = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            reduced[a][b] = (0..levels)
                .map(|n| rho[(a * levels + n, b * levels + n)])
                .sum();
        }
    }
    let bloch = BlochVector::new(
        2.0 * reduced[0][1].re,
        -2.0 * reduced[0][1].im,
        (reduced[0][0] - reduced[1][1]).re,
    );

    let idx = [excited(0), excited(1), ground(0), ground(1)];
    let mut projection = ComplexMatrix4::zeros();
    for (i, &r) in idx.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            projection[(i, j)] = rho[(r, c)];
        }
    }

    Ok(OracleState {
        projection,
        bloch,
        fock_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::TruncationPolicy;

    #[test]
    fn recovers_initial_state_at_zero_time() {
        let p = ModelParams::resonant(1.0, TruncationPolicy::default()).unwrap();
        let s0 = BlochVector::new(0.3, -0.4, 0.5);
        let out = oracle_reduced_state(&s0, 0.0, &p, 64).unwrap();
        assert!(out.bloch.max_abs_diff(&s0) < 1e-12);
    }

    #[test]
    fn too_small_dimension_reports_requirement() {
        let p = ModelParams::resonant(0.1, TruncationPolicy::default()).unwrap();
        match oracle_reduced_state(&BlochVector::ZERO, 1.0, &p, 4) {
            Err(JcmError::FockDimensionTooSmall { given: 4, required }) => {
                assert_eq!(required, default_fock_dim(&p).unwrap());
                assert!((-(required as f64) * 0.1).exp() < ORACLE_TAIL);
                assert!((-((required - 1) as f64) * 0.1).exp() >= ORACLE_TAIL);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn vacuum_rabi_oscillation() {
        let p = ModelParams::resonant(60.0, TruncationPolicy::default()).unwrap();
        let s0 = BlochVector::new(0.0, 0.0, 1.0);
        for &t in &[0.4, 1.1, 2.9] {
            let out = oracle_reduced_state(&s0, t, &p, 2).unwrap();
            assert!((out.bloch.sz - (2.0 * t).cos()).abs() < 1e-12);
        }
    }
}
