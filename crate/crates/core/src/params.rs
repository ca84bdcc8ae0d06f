//! Physical configuration and series truncation policy.
//!
//! Two unit systems are in use. The resonant routines work in reduced units:
//! time in `|g|^-1` and inverse temperature in `(hbar omega_0)^-1`. The general
//! routines set `hbar = 1` and carry `g`, `omega` and `omega_0` explicitly;
//! [`ModelParams::reduced_time`] and [`ModelParams::reduced_beta`] convert
//! between the two.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, JcmError, Result};

/// Largest series order the adaptive policy will hand out.
pub const MAX_ADAPTIVE_ORDER: u64 = 50_000_000;

/// Default tolerance of the adaptive policy.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// How far the photon-number sums are carried out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Sum every index `n <= N`.
    Fixed(usize),
    /// Pick the smallest `N` whose geometric tail bound is below `epsilon`.
    Adaptive(f64),
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::Adaptive(DEFAULT_EPSILON)
    }
}

impl TruncationPolicy {
    pub fn fixed(n: usize) -> Result<Self> {
        let policy = TruncationPolicy::Fixed(n);
        policy.validate()?;
        Ok(policy)
    }

    pub fn adaptive(epsilon: f64) -> Result<Self> {
        let policy = TruncationPolicy::Adaptive(epsilon);
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TruncationPolicy::Fixed(0) => Err(invalid("truncation", "fixed order must be >= 1")),
            TruncationPolicy::Fixed(_) => Ok(()),
            TruncationPolicy::Adaptive(eps) if eps > 0.0 && eps < 1.0 => Ok(()),
            TruncationPolicy::Adaptive(eps) => Err(invalid(
                "truncation",
                format!("adaptive epsilon must lie in (0, 1), got {eps}"),
            )),
        }
    }

    /// Highest photon-number index kept in the sums, given the Boltzmann
    /// exponent per photon `x = beta * hbar * omega`.
    ///
    /// The adaptive order is the smallest `N` with `e^{-N x} / (1 - e^{-x}) < epsilon`.
    pub fn order(&self, x: f64) -> Result<usize> {
        self.validate()?;
        match *self {
            TruncationPolicy::Fixed(n) => Ok(n),
            TruncationPolicy::Adaptive(eps) => {
                if !(x > 0.0) {
                    return Err(JcmError::AdaptiveAtInfiniteTemperature);
                }
                // e^{-N x} < eps (1 - e^{-x})  <=>  N > -ln(eps (1 - e^{-x})) / x
                let bound = -(eps.ln() + (-(-x).exp_m1()).ln()) / x;
                let mut n = if bound < 0.0 {
                    0
                } else {
                    bound.floor() as u64 + 1
                };
                // guard the floor against rounding right at the boundary
                while n > 0 && tail_bound(n - 1, x) < eps {
                    n -= 1;
                }
                while tail_bound(n, x) >= eps {
                    n += 1;
                }
                let n = n.max(1);
                if n > MAX_ADAPTIVE_ORDER {
                    return Err(JcmError::TruncationTooLarge {
                        required: n,
                        limit: MAX_ADAPTIVE_ORDER,
                    });
                }
                Ok(n as usize)
            }
        }
    }
}

/// Geometric tail `sum_{n >= N} e^{-n x} = e^{-N x} / (1 - e^{-x})`.
pub fn tail_bound(n: u64, x: f64) -> f64 {
    (-(n as f64) * x).exp() / -(-x).exp_m1()
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationPolicy::Fixed(n) => write!(f, "fixed:{n}"),
            TruncationPolicy::Adaptive(eps) => write!(f, "adaptive:{eps:e}"),
        }
    }
}

impl FromStr for TruncationPolicy {
    type Err = JcmError;

    /// Parses `fixed:<N>` or `adaptive:<epsilon>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s.split_once(':').ok_or_else(|| {
            invalid(
                "truncation",
                format!("expected `fixed:N` or `adaptive:EPS`, got `{s}`"),
            )
        })?;
        match kind.trim() {
            "fixed" => {
                let n = value
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| invalid("truncation", format!("bad order `{value}`: {e}")))?;
                TruncationPolicy::fixed(n)
            }
            "adaptive" => {
                let eps = value
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| invalid("truncation", format!("bad epsilon `{value}`: {e}")))?;
                TruncationPolicy::adaptive(eps)
            }
            other => Err(invalid("truncation", format!("unknown mode `{other}`"))),
        }
    }
}

/// Physical configuration of the atom-field system (`hbar = 1`).
///
/// The detuning is always derived as `omega - omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    beta: f64,
    omega: f64,
    omega0: f64,
    g: f64,
    truncation: TruncationPolicy,
}

impl ModelParams {
    pub fn new(
        beta: f64,
        omega: f64,
        omega0: f64,
        g: f64,
        truncation: TruncationPolicy,
    ) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(invalid(
                "beta",
                format!("must be finite and >= 0, got {beta}"),
            ));
        }
        if !omega.is_finite() || omega <= 0.0 {
            return Err(invalid(
                "omega",
                format!("field frequency must be finite and > 0, got {omega}"),
            ));
        }
        if !omega0.is_finite() {
            return Err(invalid("omega0", format!("must be finite, got {omega0}")));
        }
        if !g.is_finite() || g == 0.0 {
            return Err(invalid(
                "g",
                format!("coupling must be finite and nonzero, got {g}"),
            ));
        }
        truncation.validate()?;
        Ok(ModelParams {
            beta,
            omega,
            omega0,
            g,
            truncation,
        })
    }

    /// Resonant configuration in reduced units (`omega = omega0 = g = 1`), so
    /// `beta` is measured in `(hbar omega_0)^-1` and time in `|g|^-1`.
    pub fn resonant(beta: f64, truncation: TruncationPolicy) -> Result<Self> {
        ModelParams::new(beta, 1.0, 1.0, 1.0, truncation)
    }

    /// Configuration parameterized by detuning and coupling with `omega0` fixed.
    pub fn detuned(
        beta: f64,
        omega0: f64,
        delta_omega: f64,
        g: f64,
        truncation: TruncationPolicy,
    ) -> Result<Self> {
        ModelParams::new(beta, omega0 + delta_omega, omega0, g, truncation)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega - self.omega0
    }

    pub fn truncation(&self) -> TruncationPolicy {
        self.truncation
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        ModelParams::new(beta, self.omega, self.omega0, self.g, self.truncation)
    }

    pub fn with_truncation(&self, truncation: TruncationPolicy) -> Result<Self> {
        ModelParams::new(self.beta, self.omega, self.omega0, self.g, truncation)
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_omega() == 0.0
    }

    /// Boltzmann exponent per photon, `beta * omega`.
    pub fn reduced_beta(&self) -> f64 {
        self.beta * self.omega
    }

    /// Time in units of `|g|^-1`.
    pub fn reduced_time(&self, t: f64) -> f64 {
        self.g.abs() * t
    }

    /// Inverse of [`ModelParams::reduced_time`].
    pub fn physical_time(&self, reduced: f64) -> f64 {
        reduced / self.g.abs()
    }
}

/// Squared Rabi frequency of the `n`-photon sector, `(delta_omega / 2)^2 + g^2 n`.
pub fn dtilde(n: usize, p: &ModelParams) -> f64 {
    dtilde_raw(n, p.delta_omega(), p.g())
}

pub(crate) fn dtilde_raw(n: usize, delta_omega: f64, g: f64) -> f64 {
    let half = 0.5 * delta_omega;
    half * half + g * g * n as f64
}

/// Series order used for `p`.
pub fn truncation_order(p: &ModelParams) -> Result<usize> {
    p.truncation.order(p.reduced_beta())
}
