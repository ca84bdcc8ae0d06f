//! Long-time averages of the Bloch map.

use rayon::prelude::*;

use crate::bloch::BlochVector;
use crate::error::{invalid, Result};
use crate::evolution::MapEvaluator;
use crate::params::{dtilde_raw, ModelParams};
use crate::summation::pairwise_sum;

/// Time-averaged map coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAverages {
    pub avg_l1: f64,
    pub avg_l2: f64,
    pub avg_l3: f64,
    pub avg_l4: f64,
}

impl TimeAverages {
    pub const ZERO: TimeAverages = TimeAverages {
        avg_l1: 0.0,
        avg_l2: 0.0,
        avg_l3: 0.0,
        avg_l4: 0.0,
    };

    fn diagonal(avg_l3: f64, avg_l4: f64) -> Self {
        TimeAverages {
            avg_l1: 0.0,
            avg_l2: 0.0,
            avg_l3,
            avg_l4,
        }
    }
}

/// Resonant averages, `<L3> = (1 - e^{-beta}) / 2 = -<L4>`, reduced units.
pub fn time_average_closed_resonant(beta: f64) -> Result<TimeAverages> {
    if !(beta >= 0.0) {
        return Err(invalid("beta", format!("must be >= 0, got {beta}")));
    }
    if beta.is_infinite() {
        return Ok(TimeAverages::diagonal(0.5, -0.5));
    }
    let half = -0.5 * (-beta).exp_m1();
    Ok(TimeAverages::diagonal(half, -half))
}

/// Detuned averages from the truncated photon-number sums.
///
/// At `beta = 0` the exact limit (all zeros) is returned.
pub fn time_average_closed_general(p: &ModelParams) -> Result<TimeAverages> {
    let x = p.reduced_beta();
    if x == 0.0 {
        return Ok(TimeAverages::ZERO);
    }
    let order = p.truncation().order(x)?;
    let half_dw = 0.5 * p.delta_omega();
    let g2 = p.g() * p.g();
    let one_minus = -(-x).exp_m1();

    // (1 - e^{-x}) e^{x} e^{-n x} = (1 - e^{-x}) e^{-(n-1) x}
    // (1 - e^{-x}) (e^{x} -/+ 1) / 2 e^{-n x} = (1 - e^{-x}) (1 -/+ e^{-x}) / 2 e^{-(n-1) x}
    let mut l3_terms = Vec::with_capacity(order);
    let mut l4_terms = Vec::with_capacity(order);
    for n in 1..=order {
        let d = dtilde_raw(n, p.delta_omega(), p.g());
        let w = (-((n - 1) as f64) * x).exp();
        let detuning_part = half_dw * half_dw / d;
        let coupling_part = g2 * n as f64 / d;
        l3_terms.push((detuning_part + 0.5 * one_minus * coupling_part) * w);
        l4_terms.push((detuning_part + 0.5 * (2.0 - one_minus) * coupling_part) * w);
    }
    Ok(TimeAverages::diagonal(
        one_minus * pairwise_sum(&l3_terms),
        one_minus * pairwise_sum(&l4_terms) - 1.0,
    ))
}

/// `(beta -> 0, beta -> infinity)` limits of the averages.
pub fn time_average_limits(p: &ModelParams) -> (TimeAverages, TimeAverages) {
    let dw2 = p.delta_omega() * p.delta_omega();
    let g2 = p.g() * p.g();
    let denom = dw2 + 4.0 * g2;
    (
        TimeAverages::ZERO,
        TimeAverages::diagonal((dw2 + 2.0 * g2) / denom, -2.0 * g2 / denom),
    )
}

/// Averaged Bloch vector `diag(<L1>, <L1>, <L3>) S(0) + (0, 0, <L4>)`, with
/// the `<L2>` rotation included for completeness.
pub fn average_bloch(s0: &BlochVector, avgs: &TimeAverages) -> BlochVector {
    BlochVector {
        sx: avgs.avg_l1 * s0.sx + avgs.avg_l2 * s0.sy,
        sy: -avgs.avg_l2 * s0.sx + avgs.avg_l1 * s0.sy,
        sz: avgs.avg_l3 * s0.sz + avgs.avg_l4,
    }
}

/// Trapezoidal average of `S(t)` over `[0, t_max]`.
///
/// The grid has `ceil(t_max / step)` equal intervals. The error against the
/// infinite-time average decays like `1 / t_max`.
pub fn time_average_numeric(
    s0: &BlochVector,
    p: &ModelParams,
    t_max: f64,
    step: f64,
) -> Result<BlochVector> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(invalid("t_max", format!("must be > 0, got {t_max}")));
    }
    if !(step > 0.0) || step > t_max {
        return Err(invalid(
            "step",
            format!("must lie in (0, t_max], got {step}"),
        ));
    }
    let intervals = (t_max / step - 1e-9).ceil().max(1.0) as usize;
    let h = t_max / intervals as f64;
    let evaluator = MapEvaluator::new(p)?;
    let samples: Vec<[f64; 3]> = (0..=intervals)
        .into_par_iter()
        .map(|k| {
            let m = evaluator.at(k as f64 * h);
            let w = if k == 0 || k == intervals { 0.5 } else { 1.0 };
            [
                w * (m.l1 * s0.sx + m.l2 * s0.sy),
                w * (-m.l2 * s0.sx + m.l1 * s0.sy),
                w * (m.l3 * s0.sz + m.l4),
            ]
        })
        .collect();
    let component = |i: usize| {
        pairwise_sum(&samples.iter().map(|s| s[i]).collect::<Vec<_>>()) / intervals as f64
    };
    Ok(BlochVector::new(component(0), component(1), component(2)))
}
