//! Bloch vectors and trajectories.

use rayon::prelude::*;

use crate::error::{invalid, JcmError, Result};
use crate::evolution::{EvolutionMatrix, MapEvaluator};
use crate::params::ModelParams;

/// Tolerance on `|S| <= 1` for vectors produced by the numerics.
pub const BALL_TOLERANCE: f64 = 1e-9;

/// Real 3-vector with `rho_A = (I + S . sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub const ZERO: BlochVector = BlochVector {
        sx: 0.0,
        sy: 0.0,
        sz: 0.0,
    };

    pub const fn new(sx: f64, sy: f64, sz: f64) -> Self {
        BlochVector { sx, sy, sz }
    }

    /// Like [`BlochVector::new`] but rejects vectors outside the unit ball.
    pub fn checked(sx: f64, sy: f64, sz: f64) -> Result<Self> {
        let s = BlochVector { sx, sy, sz };
        if !(sx.is_finite() && sy.is_finite() && sz.is_finite())
            || s.norm_squared() > 1.0 + BALL_TOLERANCE
        {
            return Err(invalid(
                "s0",
                format!("Bloch vector ({sx}, {sy}, {sz}) lies outside the unit ball"),
            ));
        }
        Ok(s)
    }

    pub fn norm_squared(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.sx - other.sx)
            .abs()
            .max((self.sy - other.sy).abs())
            .max((self.sz - other.sz).abs())
    }
}

/// Applies the affine map `m` to `s0`.
pub fn evolve_bloch(s0: &BlochVector, m: &EvolutionMatrix) -> BlochVector {
    BlochVector {
        sx: m.l1 * s0.sx + m.l2 * s0.sy,
        sy: -m.l2 * s0.sx + m.l1 * s0.sy,
        sz: m.l3 * s0.sz + m.l4,
    }
}

/// Time-indexed sequence of Bloch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    points: Vec<BlochVector>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[BlochVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &BlochVector)> {
        self.times.iter().copied().zip(self.points.iter())
    }

    /// Proper crossings of the polyline projected onto the (x, z) plane.
    ///
    /// Adjacent segments are skipped. The projection ignores `sy`.
    pub fn xz_crossings(&self) -> Vec<Crossing> {
        let pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.sx, p.sz)).collect();
        let segments = pts.len().saturating_sub(1);
        (0..segments)
            .into_par_iter()
            .flat_map_iter(|i| {
                let pts = &pts;
                (i + 2..segments).filter_map(move |j| {
                    segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]).map(|point| {
                        Crossing {
                            first: i,
                            second: j,
                            point,
                            angle: direction_angle(pts[i], pts[i + 1], pts[j], pts[j + 1]),
                        }
                    })
                })
            })
            .collect()
    }
}

/// A self-intersection between segments `first` and `second` (`first < second`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub first: usize,
    pub second: usize,
    pub point: (f64, f64),
    /// Unsigned angle in `[0, pi/2]` between the two segment directions.
    pub angle: f64,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segment_intersection(
    p1: (f64, f64),
    p2: (f64, f64),
    q1: (f64, f64),
    q2: (f64, f64),
) -> Option<(f64, f64)> {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let s = d1 / (d1 - d2);
        Some((p1.0 + s * (p2.0 - p1.0), p1.1 + s * (p2.1 - p1.1)))
    } else {
        None
    }
}

fn direction_angle(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> f64 {
    let u = (p2.0 - p1.0, p2.1 - p1.1);
    let v = (q2.0 - q1.0, q2.1 - q1.1);
    let cos = (u.0 * v.0 + u.1 * v.1).abs()
        / ((u.0 * u.0 + u.1 * u.1).sqrt() * (v.0 * v.0 + v.1 * v.1).sqrt());
    cos.min(1.0).acos()
}

/// Evaluates the map from `t = 0` at every grid time. Points are independent.
pub fn trajectory(s0: &BlochVector, t_grid: &[f64], p: &ModelParams) -> Result<Trajectory> {
    for (i, &t) in t_grid.iter().enumerate() {
        if !t.is_finite() || t < 0.0 || (i > 0 && t <= t_grid[i - 1]) {
            return Err(JcmError::NonMonotoneGrid { index: i });
        }
    }
    let evaluator = MapEvaluator::new(p)?;
    let points = t_grid
        .par_iter()
        .map(|&t| evolve_bloch(s0, &evaluator.at(t)))
        .collect();
    Ok(Trajectory {
        times: t_grid.to_vec(),
        points,
    })
}

/// `0, step, 2 step, ...` up to `t_max` (inclusive within rounding).
pub fn uniform_grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid("step", format!("must be > 0, got {step}")));
    }
    if !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(invalid("t_max", format!("must be >= 0, got {t_max}")));
    }
    let n = (t_max / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * step).collect())
}
