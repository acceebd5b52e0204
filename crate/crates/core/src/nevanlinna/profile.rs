//! `beta` sampled along a traced branch: monotonicity, range, end limits and
//! the points where `beta` passes through `0 = pi`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use super::{beta_distance, connection, ConnectionOptions};
use crate::error::{Error, Result};
use crate::qes::{eigenvector_at_big_lambda, QesSystem, SpectralPolynomial};
use crate::tracer::{BetaLimit, Branch, BranchLabel, Exit};

#[derive(Clone, Copy, Debug)]
pub struct ProfileOptions {
    /// Use every `stride`-th polyline vertex (the last vertex is always used).
    pub stride: usize,
    pub connection: ConnectionOptions,
    /// Neighboring samples further apart than this (mod pi) get a midpoint.
    pub max_gap: f64,
    pub max_depth: usize,
    /// Samples closer than this to `0 = pi` are not used for ordering checks.
    pub resolve_floor: f64,
    /// Crossing refinement stops once its bracket in `b` is this narrow.
    pub crossing_tol: f64,
    /// Samples within this of `0` or `pi` at an end set its limit tag.
    pub end_tol: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            stride: 8,
            connection: ConnectionOptions::default(),
            max_gap: 0.2,
            max_depth: 14,
            resolve_floor: 1e-8,
            crossing_tol: 1e-9,
            end_tol: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BetaSample {
    pub t: f64,
    pub b: f64,
    pub big_lambda: f64,
    pub beta: f64,
    pub error: f64,
}

impl BetaSample {
    /// Distance to `0 = pi`.
    pub fn margin(&self) -> f64 {
        self.beta.min(PI - self.beta)
    }

    /// Signed representative in `(-pi/2, pi/2]`.
    fn centered(&self) -> f64 {
        if self.beta > FRAC_PI_2 {
            self.beta - PI
        } else {
            self.beta
        }
    }

    fn resolvable(&self, floor: f64) -> bool {
        self.margin() > floor.max(100.0 * self.error)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// A point where `beta` passes through `0 = pi`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Crossing {
    pub b: f64,
    pub big_lambda: f64,
    pub t: f64,
    /// Final bracket in `b`.
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaProfile {
    pub label: BranchLabel,
    pub samples: Vec<BetaSample>,
    pub monotone: Option<Monotonicity>,
    /// Smallest and largest sampled `beta`.
    pub range: (f64, f64),
    pub end_limits: [Option<BetaLimit>; 2],
    pub crossings: Vec<Crossing>,
}

impl BetaProfile {
    pub fn is_chain(&self) -> bool {
        self.label.n.is_multiple_of(2) && self.label.m == self.label.n / 2
    }
}

/// Point on `branch` at arclength `t`, projected back onto the curve.
fn point_at(q: &SpectralPolynomial, branch: &Branch, t: f64) -> (f64, f64) {
    let pts = &branch.points;
    let k = pts.partition_point(|p| p.t <= t).clamp(1, pts.len() - 1);
    let (p0, p1) = (&pts[k - 1], &pts[k]);
    let s = if p1.t > p0.t { (t - p0.t) / (p1.t - p0.t) } else { 0.0 };
    let mut b = p0.b + s * (p1.b - p0.b);
    let mut l = p0.big_lambda + s * (p1.big_lambda - p0.big_lambda);
    // Minimum-norm Newton steps onto Q = 0.
    for _ in 0..20 {
        let e = q.eval_big(b, l);
        let g2 = e.d_b * e.d_b + e.d_lambda * e.d_lambda;
        if g2 == 0.0 {
            break;
        }
        let db = e.value * e.d_b / g2;
        let dl = e.value * e.d_lambda / g2;
        b -= db;
        l -= dl;
        if db.hypot(dl) <= 1e-15 * (1.0 + b.abs() + l.abs()) {
            break;
        }
    }
    (b, l)
}

fn sample(sys: &QesSystem, b: f64, big_lambda: f64, t: f64, opts: &ProfileOptions) -> Result<BetaSample> {
    let a = eigenvector_at_big_lambda(sys, b, big_lambda)?;
    let r = connection(&a.coeffs, b, big_lambda, &opts.connection)?;
    Ok(BetaSample {
        t,
        b,
        big_lambda,
        beta: r.beta,
        error: r.error_estimate,
    })
}

fn sample_at(
    q: &SpectralPolynomial,
    sys: &QesSystem,
    branch: &Branch,
    t: f64,
    opts: &ProfileOptions,
) -> Result<BetaSample> {
    let (b, l) = point_at(q, branch, t);
    sample(sys, b, l, t, opts)
}

/// Samples `beta` along `branch` and checks it against the expected shape:
/// strictly monotone for `m < n/2`, with `0 = pi` crossings located on the
/// `m = n/2` branch.
pub fn beta_along_branch(q: &SpectralPolynomial, branch: &Branch, opts: &ProfileOptions) -> Result<BetaProfile> {
    let sys = QesSystem::new(q.j())?;
    let n = branch.points.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty branch".into()));
    }
    let mut idx: Vec<usize> = (0..n).step_by(opts.stride.max(1)).collect();
    if *idx.last().unwrap() != n - 1 {
        idx.push(n - 1);
    }
    let coarse: Vec<Result<BetaSample>> = idx
        .par_iter()
        .map(|&i| {
            let p = &branch.points[i];
            sample(&sys, p.b, p.big_lambda, p.t, opts)
        })
        .collect();
    let coarse: Vec<BetaSample> = coarse.into_iter().collect::<Result<_>>()?;

    // Fill gaps where beta moves too fast to unwrap.
    let mut samples = Vec::with_capacity(coarse.len());
    for w in coarse.windows(2) {
        samples.push(w[0]);
        fill(q, &sys, branch, w[0], w[1], 0, opts, &mut samples)?;
    }
    samples.push(*coarse.last().unwrap());

    let label = branch.label;
    let chain = label.n.is_multiple_of(2) && label.m == label.n / 2;
    let mut monotone = None;
    let mut crossings = Vec::new();
    let resolvable: Vec<(usize, &BetaSample)> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.resolvable(opts.resolve_floor))
        .collect();
    let range = resolvable
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, s)| {
            (lo.min(s.beta), hi.max(s.beta))
        });
    if chain {
        for w in resolvable.windows(2) {
            let (s0, s1) = (w[0].1, w[1].1);
            let (c0, c1) = (s0.centered(), s1.centered());
            if c0.signum() != c1.signum() && (c0 - c1).abs() < FRAC_PI_2 {
                crossings.push(refine_crossing(q, &sys, branch, *s0, *s1, opts)?);
            }
        }
    } else {
        let mut dir = 0.0;
        for w in resolvable.windows(2) {
            let d = w[1].1.beta - w[0].1.beta;
            let s = if d > 0.0 {
                1.0
            } else if d < 0.0 {
                -1.0
            } else {
                0.0
            };
            if dir == 0.0 {
                dir = s;
            }
            if s == 0.0 || s != dir {
                return Err(Error::MonotonicityViolation { index: w[1].0 });
            }
        }
        monotone = Some(if dir >= 0.0 {
            Monotonicity::Increasing
        } else {
            Monotonicity::Decreasing
        });
    }

    // Far out on a branch beta sits within rounding of 0 = pi, so the side
    // it approaches from is read off the outermost resolvable sample.
    let tag = |end: usize| -> Option<BetaLimit> {
        let outer = if end == 0 { samples.first() } else { samples.last() }?;
        let inner = if end == 0 {
            resolvable.first()
        } else {
            resolvable.last()
        };
        if outer.margin() < opts.end_tol {
            let side = inner.map_or(outer.beta, |(_, s)| s.beta);
            Some(if side < FRAC_PI_2 {
                BetaLimit::Zero
            } else {
                BetaLimit::Pi
            })
        } else if chain && branch.ends[end].exit == Exit::Left {
            Some(BetaLimit::Oscillatory)
        } else {
            None
        }
    };
    let end_limits = [tag(0), tag(1)];

    Ok(BetaProfile {
        label,
        samples,
        monotone,
        range,
        end_limits,
        crossings,
    })
}

#[allow(clippy::too_many_arguments)]
fn fill(
    q: &SpectralPolynomial,
    sys: &QesSystem,
    branch: &Branch,
    a: BetaSample,
    b: BetaSample,
    depth: usize,
    opts: &ProfileOptions,
    out: &mut Vec<BetaSample>,
) -> Result<()> {
    if depth >= opts.max_depth || beta_distance(a.beta, b.beta) <= opts.max_gap {
        return Ok(());
    }
    let mid = sample_at(q, sys, branch, 0.5 * (a.t + b.t), opts)?;
    fill(q, sys, branch, a, mid, depth + 1, opts, out)?;
    out.push(mid);
    fill(q, sys, branch, mid, b, depth + 1, opts, out)
}

fn refine_crossing(
    q: &SpectralPolynomial,
    sys: &QesSystem,
    branch: &Branch,
    mut lo: BetaSample,
    mut hi: BetaSample,
    opts: &ProfileOptions,
) -> Result<Crossing> {
    for _ in 0..200 {
        if (hi.b - lo.b).abs() <= opts.crossing_tol {
            break;
        }
        let mid = sample_at(q, sys, branch, 0.5 * (lo.t + hi.t), opts)?;
        if mid.centered().signum() == lo.centered().signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi.t - lo.t).abs() <= f64::EPSILON * (1.0 + hi.t.abs()) {
            break;
        }
    }
    let t = 0.5 * (lo.t + hi.t);
    let (b, big_lambda) = point_at(q, branch, t);
    Ok(Crossing {
        b,
        big_lambda,
        t,
        bracket: (lo.b.min(hi.b), lo.b.max(hi.b)),
    })
}
