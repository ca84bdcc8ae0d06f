//! Oracle-equivalence and invariant checks behind `jcm verify`.

use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::averages::{
    average_bloch, time_average_closed_resonant, time_average_limits, time_average_numeric,
};
use crate::bloch::{evolve_bloch, BlochVector};

use crate::entanglement::{
    concurrence, default_fock_dim, entanglement_lower_bound, eof_from_concurrence,
    oracle_reduced_state, projected_state, projection_weight, ComplexMatrix4,
};
use crate::error::Result;
use crate::evolution::{
    evolution_matrix, evolution_matrix_general, evolution_matrix_resonant, EvolutionMatrix,
};
use crate::params::{ModelParams, TruncationPolicy};
use crate::sampling::{arcsine_l1_distance, build_histogram, sample_series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CheckSet {
    pub oracle: bool,
    pub series: bool,
    pub averages: bool,
    pub sampling: bool,
    pub entanglement: bool,
}

impl CheckSet {
    pub const ALL: CheckSet = CheckSet {
        oracle: true,
        series: true,
        averages: true,
        sampling: true,
        entanglement: true,
    };
}

impl FromStr for CheckSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut set = CheckSet::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => set = CheckSet::ALL,
                "oracle" => set.oracle = true,
                "series" => set.series = true,
                "averages" => set.averages = true,
                "sampling" => set.sampling = true,
                "entanglement" => set.entanglement = true,
                other => return Err(format!("unknown check subset `{other}`")),
            }
        }
        if set == CheckSet::default() {
            return Err("no checks selected".into());
        }
        Ok(set)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub checks: CheckSet,
    pub fock_dim: Option<usize>,
    pub beta: Option<f64>,
    pub seed: u64,
    pub truncation: TruncationPolicy,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            checks: CheckSet::ALL,
            fock_dim: None,
            beta: None,
            seed: 2024,
            truncation: TruncationPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: &str, deviation: f64, tolerance: f64) -> Self {
        CheckOutcome {
            name: name.to_string(),
            deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation.is_finite() && self.deviation <= self.tolerance
    }
}

/// Runs the selected checks. Domain errors abort; tolerance misses are
/// reported as failed outcomes.
pub fn run_checks(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if opts.checks.oracle {
        oracle_checks(opts, &mut out)?;
    }
    if opts.checks.series {
        series_checks(opts, &mut rng, &mut out)?;
    }
    if opts.checks.averages {
        average_checks(opts, &mut out)?;
    }
    if opts.checks.sampling {
        sampling_checks(&mut out)?;
    }
    if opts.checks.entanglement {
        entanglement_checks(&mut out)?;
    }
    Ok(out)
}

fn oracle_checks(opts: &VerifyOptions, out: &mut Vec<CheckOutcome>) -> Result<()> {
    let betas = match opts.beta {
        Some(b) => vec![b],
        None => vec![0.5, 1.0, 2.0],
    };
    let s0 = BlochVector::new(0.3, -0.4, 0.5);
    let excited_x = BlochVector::new(1.0, 0.0, 0.0);
    let (mut bloch_dev, mut proj_dev) = (0.0f64, 0.0f64);
    for &beta in &betas {
        for &dw in &[0.0, 1.0] {
            let p = ModelParams::detuned(beta, 1.0, dw, 1.0, opts.truncation)?;
            let dim = match opts.fock_dim {
                Some(d) => d,
                None => default_fock_dim(&p)?,
            };
            for &t in &[0.3, 1.0, 5.0] {
                let m = evolution_matrix(t, &p)?;
                let exact = oracle_reduced_state(&s0, t, &p, dim)?;
                bloch_dev = bloch_dev.max(evolve_bloch(&s0, &m).max_abs_diff(&exact.bloch));
                if dw == 0.0 {
                    let exact = oracle_reduced_state(&excited_x, t, &p, dim)?;
                    let closed = projected_state(t, beta)?;
                    proj_dev = proj_dev.max(closed.matrix.max_abs_diff(&exact.projection));
                }
            }
        }
    }
    out.push(CheckOutcome::new("oracle.bloch_vector", bloch_dev, 1e-10));
    out.push(CheckOutcome::new("oracle.projected_state", proj_dev, 1e-10));
    Ok(())
}

fn series_checks(
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<CheckOutcome>,
) -> Result<()> {
    let mut identity = 0.0f64;
    for &beta in &[0.1, 1.0, 10.0] {
        let m = evolution_matrix_resonant(0.0, beta, &opts.truncation)?;
        identity = identity.max(m.distance(&EvolutionMatrix::IDENTITY));
    }
    out.push(CheckOutcome::new(
        "series.identity_at_zero",
        identity,
        1e-12,
    ));

    let mut special = 0.0f64;
    for &(beta, t) in &[(0.5, 0.7), (1.0, 3.0), (4.0, 11.0)] {
        let p = ModelParams::resonant(beta, opts.truncation)?;
        let a = evolution_matrix_resonant(t, beta, &opts.truncation)?;
        special = special.max(a.distance(&evolution_matrix_general(t, &p)?));
    }
    out.push(CheckOutcome::new(
        "series.general_matches_resonant",
        special,
        1e-12,
    ));

    let (mut ball, mut l4) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let beta = rng.gen_range(0.05..10.0);
        let dw = rng.gen_range(-2.0..2.0);
        let t = rng.gen_range(0.0..50.0);
        let p = ModelParams::detuned(beta, 3.0, dw, 1.0, opts.truncation)?;
        let m = evolution_matrix(t, &p)?;
        l4 = l4.max(m.l4.max(0.0)).max((-1.0 - m.l4).max(0.0));
        let s0 = random_ball_point(rng);
        ball = ball.max(evolve_bloch(&s0, &m).norm() - 1.0);
    }
    out.push(CheckOutcome::new(
        "series.ball_preservation",
        ball.max(0.0),
        1e-9,
    ));
    out.push(CheckOutcome::new("series.l4_bounds", l4, 1e-12));
    Ok(())
}

pub(crate) fn random_ball_point(rng: &mut ChaCha8Rng) -> BlochVector {
    loop {
        let v = BlochVector::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if v.norm_squared() <= 1.0 {
            return v;
        }
    }
}

fn average_checks(opts: &VerifyOptions, out: &mut Vec<CheckOutcome>) -> Result<()> {
    let p = ModelParams::resonant(1.0, opts.truncation)?;
    let s0 = BlochVector::ZERO;
    let numeric = time_average_numeric(&s0, &p, 2000.0, 0.05)?;
    let closed = average_bloch(&s0, &time_average_closed_resonant(1.0)?);
    out.push(CheckOutcome::new(
        "averages.numeric_matches_closed",
        numeric.max_abs_diff(&closed),
        1e-2,
    ));

    let mut limit = 0.0f64;
    for &(dw, g) in &[(1.0, 1.0), (2.0, 1.0)] {
        let p = ModelParams::detuned(50.0, 1.0, dw, g, opts.truncation)?;
        let (_, inf) = time_average_limits(&p);
        let closed = crate::averages::time_average_closed_general(&p)?;
        let d2 = dw * dw;
        let g2 = g * g;
        limit = limit
            .max((closed.avg_l3 - (d2 + 2.0 * g2) / (d2 + 4.0 * g2)).abs())
            .max((closed.avg_l4 + 2.0 * g2 / (d2 + 4.0 * g2)).abs())
            .max((inf.avg_l3 - closed.avg_l3).abs());
    }
    out.push(CheckOutcome::new(
        "averages.low_temperature_limit",
        limit,
        1e-6,
    ));
    Ok(())
}

fn sampling_checks(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let p = ModelParams::resonant(10.0, TruncationPolicy::Fixed(1000))?;
    let series = sample_series(&p, &BlochVector::ZERO, 0.05, 10_000)?;
    let h = build_histogram(&series, 0.005)?;
    out.push(CheckOutcome::new(
        "sampling.count_conservation",
        (h.total() as f64 - series.values.len() as f64).abs(),
        0.0,
    ));
    out.push(CheckOutcome::new(
        "sampling.arcsine_l1_distance",
        arcsine_l1_distance(&h)?,
        0.1,
    ));
    Ok(())
}

fn entanglement_checks(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let (mut trace, mut at_zero, mut bounds) = (0.0f64, 0.0f64, 0.0f64);
    for &beta in &[1.0, 2.0, 10.0] {
        at_zero = at_zero.max(entanglement_lower_bound(0.0, beta)?.eof_lower_bound.abs());
        for k in 0..600 {
            let t = std::f64::consts::TAU * k as f64 / 599.0;
            let ps = projected_state(t, beta)?;
            trace = trace.max((ps.matrix.trace().re - projection_weight(t, beta)?).abs());
            let r = entanglement_lower_bound(t, beta)?;
            let excess = [
                -r.concurrence,
                r.concurrence - 1.0,
                -r.eof_lower_bound,
                r.eof_lower_bound - r.weight,
                r.weight - 1.0,
            ];
            bounds = bounds.max(excess.into_iter().fold(0.0, f64::max));
        }
    }
    out.push(CheckOutcome::new(
        "entanglement.trace_identity",
        trace,
        1e-12,
    ));
    out.push(CheckOutcome::new("entanglement.zero_at_t0", at_zero, 0.0));
    out.push(CheckOutcome::new("entanglement.bounds", bounds, 0.0));

    let werner = werner_state(0.5);
    let c = concurrence(&werner)?.concurrence;
    out.push(CheckOutcome::new(
        "entanglement.werner_concurrence",
        (c - 0.25).abs(),
        1e-12,
    ));
    let endpoints = eof_from_concurrence(0.0)?.abs() + (eof_from_concurrence(1.0)? - 1.0).abs();
    out.push(CheckOutcome::new(
        "entanglement.eof_endpoints",
        endpoints,
        0.0,
    ));
    Ok(())
}

/// `p |Phi+><Phi+| + (1 - p) I / 4`.
pub fn werner_state(p: f64) -> ComplexMatrix4 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix4::projector([h, z, z, h]).scale(p)
        + ComplexMatrix4::identity().scale(0.25 * (1.0 - p))
}
