//! Truncated photon-number series for the affine Bloch-vector map.
//!
//! At time `t` the Bloch vector evolves as
//!
//! ```text
//! S(t) = | l1  l2  0 |        | 0  |
//!        | -l2 l1  0 | S(0) + | 0  |
//!        | 0   0  l3 |        | l4 |
//! ```
//!
//! The map always starts from `t = 0`: it does not compose as a semigroup.

use crate::error::Result;
use crate::params::{dtilde_raw, ModelParams, TruncationPolicy};
use crate::summation::pairwise_sum;

/// Coefficients of the affine Bloch map at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionMatrix {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

impl EvolutionMatrix {
    pub const IDENTITY: EvolutionMatrix = EvolutionMatrix {
        l1: 1.0,
        l2: 0.0,
        l3: 1.0,
        l4: 0.0,
    };

    /// Full 3x4 augmented matrix `[M | offset]`.
    pub fn augmented(&self) -> [[f64; 4]; 3] {
        [
            [self.l1, self.l2, 0.0, 0.0],
            [-self.l2, self.l1, 0.0, 0.0],
            [0.0, 0.0, self.l3, self.l4],
        ]
    }

    /// `self` applied after `first`. The result is again of the block form.
    pub fn compose(&self, first: &EvolutionMatrix) -> EvolutionMatrix {
        EvolutionMatrix {
            l1: self.l1 * first.l1 - self.l2 * first.l2,
            l2: self.l1 * first.l2 + self.l2 * first.l1,
            l3: self.l3 * first.l3,
            l4: self.l3 * first.l4 + self.l4,
        }
    }

    /// Frobenius distance between the augmented matrices.
    pub fn distance(&self, other: &EvolutionMatrix) -> f64 {
        let a = self.augmented();
        let b = other.augmented();
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

/// Precomputed tables for the resonant map in reduced units.
#[derive(Debug, Clone)]
pub struct ResonantSeries {
    beta: f64,
    order: usize,
    sqrt_n: Vec<f64>,
    weights: Vec<f64>,
}

impl ResonantSeries {
    pub fn new(beta: f64, truncation: &TruncationPolicy) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(crate::error::invalid(
                "beta",
                format!("must be finite and >= 0, got {beta}"),
            ));
        }
        let order = truncation.order(beta)?;
        let sqrt_n = (0..=order + 1).map(|n| (n as f64).sqrt()).collect();
        let weights = (0..=order).map(|n| (-(n as f64) * beta).exp()).collect();
        Ok(ResonantSeries {
            beta,
            order,
            sqrt_n,
            weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Map coefficients at reduced time `t` (units of `|g|^-1`).
    pub fn at(&self, t: f64) -> EvolutionMatrix {
        let n_max = self.order;
        let (sin, cos): (Vec<f64>, Vec<f64>) =
            self.sqrt_n.iter().map(|r| (r * t).sin_cos()).unzip();
        let l1_terms: Vec<f64> = (0..=n_max)
            .map(|n| cos[n + 1] * cos[n] * self.weights[n])
            .collect();
        let (l3, l4) = self.z_coefficients(|n| sin[n]);
        EvolutionMatrix {
            l1: -(-self.beta).exp_m1() * pairwise_sum(&l1_terms),
            l2: 0.0,
            l3,
            l4,
        }
    }

    /// Only the `l4` coefficient, i.e. `S_z(t)` for `S(0) = 0`.
    pub fn l4(&self, t: f64) -> f64 {
        self.z_coefficients(|n| (self.sqrt_n[n] * t).sin()).1
    }

    // With cos(2x) = 1 - 2 sin^2 x and the finite geometric sum, the truncated
    // l4 becomes -(1/2)(1-e^-b) e^{-N b} - (1-e^-b)^2 sum sin^2(sqrt(n) t) e^{-(n-1) b},
    // a sum of non-positive terms.
    fn z_coefficients(&self, sin: impl Fn(usize) -> f64) -> (f64, f64) {
        let n_max = self.order;
        let sin2_terms: Vec<f64> = (1..=n_max)
            .map(|n| {
                let s = sin(n);
                s * s * self.weights[n - 1]
            })
            .collect();
        let sin2_sum = pairwise_sum(&sin2_terms);
        let geometric = pairwise_sum(&self.weights[..n_max]);
        let one_minus = -(-self.beta).exp_m1();
        let one_minus_2 = -(-2.0 * self.beta).exp_m1();
        let tail = (-(n_max as f64) * self.beta).exp();
        let l3 = 0.5 * one_minus + 0.5 * one_minus_2 * (geometric - 2.0 * sin2_sum);
        let l4 = -0.5 * one_minus * tail - one_minus * one_minus * sin2_sum;
        (l3, l4)
    }
}

/// Precomputed tables for the detuned map (`hbar = 1`, physical time).
#[derive(Debug, Clone)]
pub struct GeneralSeries {
    params: ModelParams,
    order: usize,
    dtilde: Vec<f64>,
    rabi: Vec<f64>,
    weights: Vec<f64>,
}

impl GeneralSeries {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let x = params.reduced_beta();
        let order = params.truncation().order(x)?;
        let dtilde: Vec<f64> = (0..=order + 1)
            .map(|n| dtilde_raw(n, params.delta_omega(), params.g()))
            .collect();
        let rabi = dtilde.iter().map(|d| d.sqrt()).collect();
        let weights = (0..=order).map(|n| (-(n as f64) * x).exp()).collect();
        Ok(GeneralSeries {
            params: *params,
            order,
            dtilde,
            rabi,
            weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn at(&self, t: f64) -> EvolutionMatrix {
        let n_max = self.order;
        let half_dw = 0.5 * self.params.delta_omega();
        let g2 = self.params.g() * self.params.g();

        let mut cos = Vec::with_capacity(n_max + 2);
        // sin(sqrt(D) t) / sqrt(D), with the D = 0 limit equal to t
        let mut sinc = Vec::with_capacity(n_max + 2);
        for &r in &self.rabi {
            if r == 0.0 {
                cos.push(1.0);
                sinc.push(t);
            } else {
                let (s, c) = (r * t).sin_cos();
                cos.push(c);
                sinc.push(s / r);
            }
        }

        let a00: Vec<f64> = (0..=n_max)
            .map(|n| {
                let c = cos[n + 1];
                (half_dw * half_dw + g2 * (n + 1) as f64 * c * c) / self.dtilde[n + 1]
                    * self.weights[n]
            })
            .collect();
        let a11: Vec<f64> = (1..=n_max)
            .map(|n| g2 * n as f64 * sinc[n] * sinc[n] * self.weights[n])
            .collect();
        // [c1 - i h s1][c0 - i h s0] = (c1 c0 - h^2 s1 s0) - i h (s1 c0 + c1 s0)
        let a01_re: Vec<f64> = (0..=n_max)
            .map(|n| {
                (cos[n + 1] * cos[n] - half_dw * half_dw * sinc[n + 1] * sinc[n]) * self.weights[n]
            })
            .collect();
        let a01_im: Vec<f64> = (0..=n_max)
            .map(|n| -half_dw * (sinc[n + 1] * cos[n] + cos[n + 1] * sinc[n]) * self.weights[n])
            .collect();

        let pref = -(-self.params.reduced_beta()).exp_m1();
        let a00 = pref * pairwise_sum(&a00);
        let a11 = pref * pairwise_sum(&a11);

        EvolutionMatrix {
            l1: pref * pairwise_sum(&a01_re),
            l2: pref * pairwise_sum(&a01_im),
            l3: a00 - a11,
            l4: a00 + a11 - 1.0,
        }
    }
}

/// Dispatches to the resonant tables when the detuning vanishes.
#[derive(Debug, Clone)]
pub enum MapEvaluator {
    Resonant { series: ResonantSeries, g_abs: f64 },
    General(GeneralSeries),
}

impl MapEvaluator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        if params.is_resonant() {
            Ok(MapEvaluator::Resonant {
                series: ResonantSeries::new(params.reduced_beta(), &params.truncation())?,
                g_abs: params.g().abs(),
            })
        } else {
            Ok(MapEvaluator::General(GeneralSeries::new(params)?))
        }
    }

    /// Map at physical time `t`.
    pub fn at(&self, t: f64) -> EvolutionMatrix {
        match self {
            MapEvaluator::Resonant { series, g_abs } => series.at(g_abs * t),
            MapEvaluator::General(series) => series.at(t),
        }
    }

    /// `S_z(t)` for a given initial `S_z(0)`.
    pub fn sz(&self, sz0: f64, t: f64) -> f64 {
        match self {
            MapEvaluator::Resonant { series, g_abs } if sz0 == 0.0 => series.l4(g_abs * t),
            _ => {
                let m = self.at(t);
                m.l3 * sz0 + m.l4
            }
        }
    }
}

/// Resonant map in reduced units: `t` in `|g|^-1`, `beta` in `(hbar omega_0)^-1`.
pub fn evolution_matrix_resonant(
    t: f64,
    beta: f64,
    truncation: &TruncationPolicy,
) -> Result<EvolutionMatrix> {
    Ok(ResonantSeries::new(beta, truncation)?.at(t))
}

/// Detuned map from the general photon-number sums, using `p.truncation()`.
pub fn evolution_matrix_general(t: f64, p: &ModelParams) -> Result<EvolutionMatrix> {
    Ok(GeneralSeries::new(p)?.at(t))
}

/// Map at physical time `t`, choosing the resonant tables when possible.
pub fn evolution_matrix(t: f64, p: &ModelParams) -> Result<EvolutionMatrix> {
    Ok(MapEvaluator::new(p)?.at(t))
}
