//! Dense 4x4 complex matrices and a cyclic Jacobi eigensolver for the
//! Hermitian case.

use std::ops::{Add, Index, IndexMut, Mul};

use num_complex::Complex64;

const DIM: usize = 4;
const MAX_SWEEPS: usize = 64;

/// Row-major 4x4 complex matrix in the basis
/// `{|0>_A|0>_F, |0>_A|1>_F, |1>_A|0>_F, |1>_A|1>_F}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex64; DIM]; DIM]);

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        ComplexMatrix4::zeros()
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;

    fn mul(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut out = ComplexMatrix4::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[i][j] = (0..DIM).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;

    fn add(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut out = self;
        for i in 0..DIM {
            for j in 0..DIM {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl ComplexMatrix4 {
    pub fn zeros() -> Self {
        ComplexMatrix4([[Complex64::new(0.0, 0.0); DIM]; DIM])
    }

    pub fn identity() -> Self {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..DIM {
            m.0[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(d: [f64; DIM]) -> Self {
        let mut m = ComplexMatrix4::zeros();
        for (i, &v) in d.iter().enumerate() {
            m.0[i][i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|psi><psi|`.
    pub fn projector(psi: [Complex64; DIM]) -> Self {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= k);
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..DIM {
            for j in 0..DIM {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.0[i][i]).sum()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Only the upper triangle is trusted; the input is symmetrized first.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        let mut a = self.hermitian_part();
        let mut v = ComplexMatrix4::identity();

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..DIM)
                .flat_map(|i| (0..DIM).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a.0[i][j].norm_sqr())
                .sum();
            let scale: f64 = (0..DIM)
                .map(|i| a.0[i][i].re * a.0[i][i].re)
                .sum::<f64>()
                .max(f64::MIN_POSITIVE);
            if off <= 1e-32 * scale || off == 0.0 {
                break;
            }
            for p in 0..DIM - 1 {
                for q in p + 1..DIM {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..DIM).collect();
        order.sort_by(|&i, &j| a.0[j][j].re.total_cmp(&a.0[i][i].re));
        let mut values = [0.0; DIM];
        let mut vectors = ComplexMatrix4::zeros();
        for (col, &k) in order.iter().enumerate() {
            values[col] = a.0[k][k].re;
            for row in 0..DIM {
                vectors.0[row][col] = v.0[row][k];
            }
        }
        HermitianEigen { values, vectors }
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }
}

/// Eigenvalues sorted in descending order; `vectors` holds them column-wise.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; DIM],
    pub vectors: ComplexMatrix4,
}

impl HermitianEigen {
    /// `V f(Lambda) V^dagger`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix4 {
        let mut d = ComplexMatrix4::zeros();
        for i in 0..DIM {
            d.0[i][i] = Complex64::new(f(self.values[i]), 0.0);
        }
        self.vectors * d * self.vectors.adjoint()
    }
}

/// One unitary rotation zeroing `a[p][q]`; `v` accumulates the rotations.
fn rotate(a: &mut ComplexMatrix4, v: &mut ComplexMatrix4, p: usize, q: usize) {
    let apq = a.0[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // phase on q makes the pivot real, then a real Jacobi rotation
    let phase = apq / mag;
    let theta = (a.0[q][q].re - a.0[p][p].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let ph = phase.conj();
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -ph * s;
    let j_qq = ph * c;

    // A <- A J
    for k in 0..DIM {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * j_pp + akq * j_qp;
        a.0[k][q] = akp * j_pq + akq * j_qq;
    }
    // A <- J^dagger A
    for k in 0..DIM {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a.0[q][k] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a.0[p][q] = Complex64::new(0.0, 0.0);
    a.0[q][p] = Complex64::new(0.0, 0.0);
    a.0[p][p].im = 0.0;
    a.0[q][q].im = 0.0;
    // V <- V J
    for k in 0..DIM {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * j_pp + vkq * j_qp;
        v.0[k][q] = vkp * j_pq + vkq * j_qq;
    }
}
