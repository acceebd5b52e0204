//! Pseudo-arclength continuation of the real curve `Q_J(b, lambda) = 0` and
//! its assembly into labeled connected components.
//!
//! Continuation runs in the sheared coordinates `(b, Lambda)` with
//! `Lambda = lambda + b^2`; the shear preserves components and vertical
//! tangents but keeps the fibers `O(sqrt b)` instead of `O(b^2)`.

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{rational_from_f64, RatPoly};
use crate::qes::{eigenvector_at_big_lambda, EigenCoefficients, QesSystem, SpectralPolynomial};
use crate::rootfind::{
    classify_zeros, complex_roots_exact, discriminant_b_values, real_big_lambda_roots, Precision, RootOptions,
    ZeroClassification,
};

/// A point of the real QES locus.
#[derive(Clone, Debug, Serialize)]
pub struct LocusPoint {
    pub b: f64,
    /// `lambda + b^2`.
    pub big_lambda: f64,
    pub lambda: f64,
    /// Physics-convention eigenvalue `-lambda`.
    pub lambda_phys: f64,
    #[serde(skip)]
    pub coefficients: EigenCoefficients,
    pub classification: ZeroClassification,
    pub beta: Option<f64>,
    /// Arclength in the `(b, Lambda)` plane.
    pub t: f64,
}

impl LocusPoint {
    pub fn new(sys: &QesSystem, b: f64, big_lambda: f64, t: f64) -> Result<Self> {
        let coefficients = eigenvector_at_big_lambda(sys, b, big_lambda)?;
        let zeros = exact_zeros(
            sys,
            &rational_from_f64(b),
            &rational_from_f64(big_lambda),
            RootOptions::default(),
        )?;
        let classification = classify_zeros(&zeros, 1.0)?;
        let lambda = big_lambda - b * b;
        Ok(Self {
            b,
            big_lambda,
            lambda,
            lambda_phys: -lambda,
            coefficients,
            classification,
            beta: None,
            t,
        })
    }

    pub fn m(&self) -> usize {
        self.classification.m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BranchLabel {
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exit {
    Left,
    Right,
    StepCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BetaLimit {
    Zero,
    Pi,
    Oscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EndDescriptor {
    pub exit: Exit,
    /// Sign of `db` when walking out through this end.
    pub b_direction: f64,
    pub fitted_ell: Option<usize>,
    pub beta_limit: Option<BetaLimit>,
}

/// Which end of a branch polyline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum End {
    First,
    Last,
}

impl End {
    pub fn index(self) -> usize {
        match self {
            End::First => 0,
            End::Last => 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub label: BranchLabel,
    pub component_id: usize,
    pub points: Vec<LocusPoint>,
    pub ends: [EndDescriptor; 2],
}

impl Branch {
    pub fn end(&self, end: End) -> &EndDescriptor {
        &self.ends[end.index()]
    }

    pub fn min_b(&self) -> f64 {
        self.points.iter().map(|p| p.b).fold(f64::INFINITY, f64::min)
    }

    /// `Lambda` where the monotone stretch starting at `end` crosses `b`.
    pub fn end_value_at(&self, q: &SpectralPolynomial, end: End, b: f64) -> Result<f64> {
        let pts: Vec<&LocusPoint> = match end {
            End::First => self.points.iter().collect(),
            End::Last => self.points.iter().rev().collect(),
        };
        if pts.len() < 2 {
            return Err(Error::BranchTooShort { b });
        }
        let dir = (pts[1].b - pts[0].b).signum();
        for w in pts.windows(2) {
            let (p0, p1) = (w[0], w[1]);
            if (p1.b - p0.b).signum() != dir && p1.b != p0.b {
                break;
            }
            let (lo, hi) = if p0.b <= p1.b { (p0.b, p1.b) } else { (p1.b, p0.b) };
            if b >= lo && b <= hi {
                let s = if hi > lo { (b - p0.b) / (p1.b - p0.b) } else { 0.0 };
                let guess = p0.big_lambda + s * (p1.big_lambda - p0.big_lambda);
                return solve_at_b(q, b, guess).ok_or(Error::BranchTooShort { b });
            }
        }
        Err(Error::BranchTooShort { b })
    }

    /// Every `Lambda` on the polyline at abscissa `b`.
    pub fn values_at(&self, q: &SpectralPolynomial, b: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for w in self.points.windows(2) {
            let (p0, p1) = (&w[0], &w[1]);
            let crosses = (p0.b - b) * (p1.b - b) < 0.0 || p1.b == b;
            if !crosses {
                continue;
            }
            let s = (b - p0.b) / (p1.b - p0.b);
            let guess = p0.big_lambda + s * (p1.big_lambda - p0.big_lambda);
            if let Some(v) = solve_at_b(q, b, guess) {
                if !out.iter().any(|o| (o - v).abs() <= 1e-9 * (1.0 + v.abs())) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Newton in `Lambda` at fixed `b`.
pub fn solve_at_b(q: &SpectralPolynomial, b: f64, guess: f64) -> Option<f64> {
    let mut x = guess;
    for _ in 0..50 {
        let e = q.eval_big(b, x);
        if e.d_lambda == 0.0 {
            return None;
        }
        let dx = e.value / e.d_lambda;
        x -= dx;
        if dx.abs() <= 1e-15 * (1.0 + x.abs()) {
            let e = q.eval_big(b, x);
            return (e.value.abs() <= 1e-10 * e.scale).then_some(x);
        }
    }
    let e = q.eval_big(b, x);
    (e.value.abs() <= 1e-10 * e.scale).then_some(x)
}

/// Step-size control for the continuation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StepPolicy {
    pub initial: f64,
    pub min: f64,
    pub max: f64,
    pub shrink: f64,
    pub grow: f64,
    pub grow_after: usize,
    pub max_steps: usize,
    /// Accepted points satisfy `|Q| <= locus_tol * scale`.
    pub locus_tol: f64,
    /// Largest tangent turn per accepted step, radians.
    pub max_turn: f64,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            initial: 0.05,
            min: 1e-6,
            max: 0.25,
            shrink: 0.5,
            grow: 1.3,
            grow_after: 4,
            max_steps: 400_000,
            locus_tol: 1e-10,
            max_turn: 0.2,
        }
    }
}

fn unit_tangent(q: &SpectralPolynomial, b: f64, big_lambda: f64) -> (f64, f64) {
    let e = q.eval_big(b, big_lambda);
    let norm = e.d_b.hypot(e.d_lambda);
    (-e.d_lambda / norm, e.d_b / norm)
}

/// Newton corrector on `{Q = 0, tangent . (x - predicted) = 0}`.
fn correct(q: &SpectralPolynomial, predicted: (f64, f64), tangent: (f64, f64), locus_tol: f64) -> Option<(f64, f64)> {
    let (mut b, mut l) = predicted;
    for _ in 0..12 {
        let e = q.eval_big(b, l);
        let r1 = e.value;
        let r2 = tangent.0 * (b - predicted.0) + tangent.1 * (l - predicted.1);
        let det = e.d_b * tangent.1 - e.d_lambda * tangent.0;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let db = (-r1 * tangent.1 + r2 * e.d_lambda) / det;
        let dl = (-r2 * e.d_b + r1 * tangent.0) / det;
        b += db;
        l += dl;
        let small = db.hypot(dl) <= 1e-13 * (1.0 + b.abs() + l.abs());
        if small {
            let e = q.eval_big(b, l);
            return (e.value.abs() <= locus_tol * e.scale).then_some((b, l));
        }
    }
    let e = q.eval_big(b, l);
    (e.value.abs() <= locus_tol * e.scale * 1e-2).then_some((b, l))
}

/// Real points of the fiber over `b`, one per distinct real root.
pub fn fiber_points(q: &SpectralPolynomial, b: f64) -> Result<Vec<LocusPoint>> {
    let sys = QesSystem::new(q.j())?;
    let br = rational_from_f64(b);
    real_big_lambda_roots(q, &br, Precision::default())
        .into_iter()
        .map(|r| LocusPoint::new(&sys, b, r.value, 0.0))
        .collect()
}

/// The `J` locus points over `b_seed`, where every fiber root is real.
pub fn seed_points(j: usize, b_seed: f64) -> Result<Vec<LocusPoint>> {
    let q = crate::qes::spectral_polynomial(j as i64)?;
    seed_points_for(&q, b_seed)
}

pub fn seed_points_for(q: &SpectralPolynomial, b_seed: f64) -> Result<Vec<LocusPoint>> {
    let br = rational_from_f64(b_seed);
    let roots = real_big_lambda_roots(q, &br, Precision::default());
    let simple = roots.iter().filter(|r| r.multiplicity == 1).count();
    if simple < q.j() {
        return Err(Error::SeedBelowThreshold {
            b: b_seed,
            found: simple,
            expected: q.j(),
        });
    }
    fiber_points(q, b_seed)
}

/// Result of a single continuation run.
#[derive(Clone, Debug)]
pub struct Trace {
    pub points: Vec<LocusPoint>,
    pub start_exit: Exit,
    pub end_exit: Exit,
}

/// Traces from `seed` into the window until the curve leaves it.
///
/// The initial direction points into the window: towards smaller `b` unless
/// the seed sits on the left edge.
pub fn trace_branch(
    q: &SpectralPolynomial,
    seed: &LocusPoint,
    window: (f64, f64),
    policy: &StepPolicy,
) -> Result<Branch> {
    let toward_right = seed.b <= window.0;
    let trace = trace_from(q, seed, window, policy, toward_right)?;
    let m = trace.points[0].m();
    let n = q.j() - 1;
    let start_dir = if toward_right { -1.0 } else { 1.0 };
    let end_dir = match trace.end_exit {
        Exit::Left => -1.0,
        _ => 1.0,
    };
    Ok(Branch {
        label: BranchLabel { n, m },
        component_id: 0,
        ends: [
            EndDescriptor {
                exit: trace.start_exit,
                b_direction: start_dir,
                fitted_ell: None,
                beta_limit: None,
            },
            EndDescriptor {
                exit: trace.end_exit,
                b_direction: end_dir,
                fitted_ell: None,
                beta_limit: None,
            },
        ],
        points: trace.points,
    })
}

fn trace_from(
    q: &SpectralPolynomial,
    seed: &LocusPoint,
    window: (f64, f64),
    policy: &StepPolicy,
    toward_right: bool,
) -> Result<Trace> {
    let sys = QesSystem::new(q.j())?;
    let m0 = seed.m();
    let mut tangent = unit_tangent(q, seed.b, seed.big_lambda);
    if (tangent.0 > 0.0) != toward_right {
        tangent = (-tangent.0, -tangent.1);
    }
    let start_exit = if seed.b >= window.1 {
        Exit::Right
    } else if seed.b <= window.0 {
        Exit::Left
    } else {
        Exit::StepCap
    };
    let mut points = vec![seed.clone()];
    let mut x = (seed.b, seed.big_lambda);
    let mut t = seed.t;
    let mut h = policy.initial;
    let mut streak = 0;
    let mut steps = 0;
    loop {
        if steps >= policy.max_steps {
            return Ok(Trace {
                points,
                start_exit,
                end_exit: Exit::StepCap,
            });
        }
        steps += 1;
        let predicted = (x.0 + h * tangent.0, x.1 + h * tangent.1);
        let accepted = correct(q, predicted, tangent, policy.locus_tol).and_then(|xc| {
            let mut tn = unit_tangent(q, xc.0, xc.1);
            if tn.0 * tangent.0 + tn.1 * tangent.1 < 0.0 {
                tn = (-tn.0, -tn.1);
            }
            let turn = (tn.0 * tangent.0 + tn.1 * tangent.1).clamp(-1.0, 1.0).acos();
            let drift = (xc.0 - predicted.0).hypot(xc.1 - predicted.1);
            (turn <= policy.max_turn && drift <= 0.5 * h && tn.0.is_finite()).then_some((xc, tn))
        });
        let Some((xc, tn)) = accepted else {
            h *= policy.shrink;
            streak = 0;
            if h < policy.min {
                return Err(Error::StepCollapse {
                    b: x.0,
                    big_lambda: x.1,
                });
            }
            continue;
        };

        let outside = xc.0 > window.1 || xc.0 < window.0;
        if outside {
            let edge = if xc.0 > window.1 { window.1 } else { window.0 };
            let s = (edge - x.0) / (xc.0 - x.0);
            let guess = x.1 + s * (xc.1 - x.1);
            let l = solve_at_b(q, edge, guess).ok_or(Error::StepCollapse {
                b: edge,
                big_lambda: guess,
            })?;
            t += (edge - x.0).hypot(l - x.1);
            let p = LocusPoint::new(&sys, edge, l, t)?;
            if p.m() != m0 {
                return Err(Error::ClassificationJump {
                    b: edge,
                    from: m0,
                    to: p.m(),
                });
            }
            points.push(p);
            let end_exit = if edge == window.1 { Exit::Right } else { Exit::Left };
            return Ok(Trace {
                points,
                start_exit,
                end_exit,
            });
        }

        let p = LocusPoint::new(&sys, xc.0, xc.1, t + (xc.0 - x.0).hypot(xc.1 - x.1))?;
        if p.m() != m0 {
            if h * policy.shrink >= policy.min {
                h *= policy.shrink;
                streak = 0;
                continue;
            }
            return Err(Error::ClassificationJump {
                b: xc.0,
                from: m0,
                to: p.m(),
            });
        }
        t = p.t;
        points.push(p);
        x = xc;
        tangent = tn;
        streak += 1;
        if streak >= policy.grow_after {
            h = (h * policy.grow).min(policy.max);
            streak = 0;
        }
    }
}

/// `(n, m)` label of a locus point given in the working convention.
pub fn classify_point(j: usize, b: f64, lambda: f64) -> Result<BranchLabel> {
    let sys = QesSystem::new(j)?;
    let p = LocusPoint::new(&sys, b, lambda + b * b, 0.0)?;
    Ok(BranchLabel { n: sys.n(), m: p.m() })
}

/// Reclassifies a point after refining `Lambda` exactly to `precision` bits
/// at the (exactly representable) abscissa `b`.
pub fn classify_point_precise(
    q: &SpectralPolynomial,
    b: f64,
    big_lambda: f64,
    precision: Precision,
) -> Result<ZeroClassification> {
    let sys = QesSystem::new(q.j())?;
    let br: BigRational = rational_from_f64(b);
    let roots = real_big_lambda_roots(q, &br, precision);
    let nearest = roots
        .iter()
        .min_by(|x, y| (x.value - big_lambda).abs().total_cmp(&(y.value - big_lambda).abs()))
        .ok_or(Error::NotOnLocus {
            b,
            lambda: big_lambda - b * b,
            residual: f64::INFINITY,
        })?;
    let zeros = exact_zeros(&sys, &br, &nearest.exact(), RootOptions::for_bits(precision.bits))?;
    classify_zeros(&zeros, 1.0)
}

/// Zeros of the eigen-polynomial at an exact `(b, Lambda)`.
fn exact_zeros(
    sys: &QesSystem,
    b: &BigRational,
    big_lambda: &BigRational,
    opts: RootOptions,
) -> Result<Vec<Complex64>> {
    let p = RatPoly::new(sys.back_substitute_exact(b, big_lambda));
    complex_roots_exact(&p, opts)
}

/// Components of the real locus inside `window`, traced from every real
/// fiber point on both window edges.
pub fn find_components(j: usize, window: (f64, f64)) -> Result<Vec<Branch>> {
    find_components_with(j, window, &StepPolicy::default())
}

pub fn find_components_with(j: usize, window: (f64, f64), policy: &StepPolicy) -> Result<Vec<Branch>> {
    let q = crate::qes::spectral_polynomial(j as i64)?;
    find_components_for(&q, window, policy)
}

pub fn find_components_for(q: &SpectralPolynomial, window: (f64, f64), policy: &StepPolicy) -> Result<Vec<Branch>> {
    if window.0 >= window.1 {
        return Err(Error::InvalidInput("empty b window".into()));
    }
    let disc = discriminant_b_values(q, (f64::NEG_INFINITY, f64::INFINITY));
    if let Some(r) = disc.iter().find(|r| r.value <= window.0 || r.value >= window.1) {
        return Err(Error::WindowTooSmall(format!(
            "turning point at b = {} lies outside [{}, {}]",
            r.value, window.0, window.1
        )));
    }
    let n = q.j() - 1;
    let right = seed_points_for(q, window.1)?;
    let left = fiber_points(q, window.0)?;
    let seeds: Vec<(Exit, LocusPoint)> = right
        .into_iter()
        .map(|p| (Exit::Right, p))
        .chain(left.into_iter().map(|p| (Exit::Left, p)))
        .collect();

    let traces: Vec<Result<Trace>> = seeds
        .par_iter()
        .map(|(side, seed)| trace_from(q, seed, window, policy, *side == Exit::Left))
        .collect();
    let traces: Vec<Trace> = traces.into_iter().collect::<Result<_>>()?;

    let match_seed = |exit: Exit, l: f64| -> Option<usize> {
        seeds
            .iter()
            .enumerate()
            .filter(|(_, (side, _))| *side == exit)
            .min_by(|a, b| (a.1 .1.big_lambda - l).abs().total_cmp(&(b.1 .1.big_lambda - l).abs()))
            .filter(|(_, (_, p))| (p.big_lambda - l).abs() <= 1e-6 * (1.0 + l.abs()))
            .map(|(i, _)| i)
    };

    let mut kept: Vec<(usize, usize)> = Vec::new();
    for (i, tr) in traces.iter().enumerate() {
        let last = tr.points.last().expect("trace has points");
        let Some(k) = match_seed(tr.end_exit, last.big_lambda) else {
            return Err(Error::WindowTooSmall(format!(
                "trace from seed {i} ends at b = {} without meeting a window edge seed",
                last.b
            )));
        };
        if k == i {
            return Err(Error::WindowTooSmall(format!("trace from seed {i} returned to itself")));
        }
        if i < k {
            kept.push((i, k));
        } else if !kept.contains(&(k, i)) {
            return Err(Error::WindowTooSmall(format!(
                "seed {i} reaches seed {k} but not conversely"
            )));
        }
    }

    for &(i, k) in &kept {
        let sagitta = policy.max * policy.max_turn;
        if !polylines_overlap(&traces[k].points, &traces[i].points, 2.0 * policy.max, sagitta) {
            return Err(Error::WindowTooSmall(format!(
                "traces between seeds {i} and {k} do not overlap"
            )));
        }
    }

    let mut branches: Vec<Branch> = kept
        .into_iter()
        .map(|(i, _)| {
            let tr = &traces[i];
            let m = tr.points[0].m();
            let dir = |e: Exit| if e == Exit::Left { -1.0 } else { 1.0 };
            Branch {
                label: BranchLabel { n, m },
                component_id: 0,
                ends: [
                    EndDescriptor {
                        exit: tr.start_exit,
                        b_direction: dir(tr.start_exit),
                        fitted_ell: None,
                        beta_limit: None,
                    },
                    EndDescriptor {
                        exit: tr.end_exit,
                        b_direction: dir(tr.end_exit),
                        fitted_ell: None,
                        beta_limit: None,
                    },
                ],
                points: tr.points.clone(),
            }
        })
        .collect();
    branches.sort_by(|a, b| a.label.m.cmp(&b.label.m).then(a.min_b().total_cmp(&b.min_b())));
    for (id, br) in branches.iter_mut().enumerate() {
        br.component_id = id;
    }
    Ok(branches)
}

type Cell = (i64, i64);

fn cell_of(b: f64, l: f64, size: f64) -> Cell {
    ((b / size).floor() as i64, (l / size).floor() as i64)
}

type Segment = ((f64, f64), (f64, f64));

/// Spatial hash of polyline segments keyed by the cells their bounding boxes touch.
struct SegmentHash {
    size: f64,
    cells: HashMap<Cell, Vec<Segment>>,
}

impl SegmentHash {
    fn new(points: &[LocusPoint], size: f64) -> Self {
        let mut cells: HashMap<Cell, Vec<_>> = HashMap::new();
        for w in points.windows(2) {
            let a = (w[0].b, w[0].big_lambda);
            let c = (w[1].b, w[1].big_lambda);
            let lo = cell_of(a.0.min(c.0), a.1.min(c.1), size);
            let hi = cell_of(a.0.max(c.0), a.1.max(c.1), size);
            for i in lo.0..=hi.0 {
                for k in lo.1..=hi.1 {
                    cells.entry((i, k)).or_default().push((a, c));
                }
            }
        }
        Self { size, cells }
    }

    /// Distance from `p` to the nearest hashed segment, if any lies within a cell.
    fn nearest(&self, p: (f64, f64)) -> Option<f64> {
        let c = cell_of(p.0, p.1, self.size);
        let mut best: Option<f64> = None;
        for i in c.0 - 1..=c.0 + 1 {
            for k in c.1 - 1..=c.1 + 1 {
                if let Some(segs) = self.cells.get(&(i, k)) {
                    for &(a, b) in segs {
                        let d = point_segment_distance(p, a, b);
                        best = Some(best.map_or(d, |x: f64| x.min(d)));
                    }
                }
            }
        }
        best
    }
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.0 - a.0 - s * dx).hypot(p.1 - a.1 - s * dy)
}

fn segment_distance(a0: (f64, f64), a1: (f64, f64), b0: (f64, f64), b1: (f64, f64)) -> f64 {
    let cross = |o: (f64, f64), p: (f64, f64), q: (f64, f64)| (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0);
    let d1 = cross(a0, a1, b0);
    let d2 = cross(a0, a1, b1);
    let d3 = cross(b0, b1, a0);
    let d4 = cross(b0, b1, a1);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

/// Every vertex of `a` lies within `tol` of the polyline `b`.
fn polylines_overlap(a: &[LocusPoint], b: &[LocusPoint], cell: f64, tol: f64) -> bool {
    let hash = SegmentHash::new(b, cell);
    a.iter()
        .all(|p| hash.nearest((p.b, p.big_lambda)).is_some_and(|d| d <= tol))
}

/// Smallest distance in the `(b, Lambda)` plane between polylines of distinct
/// branches; capped at the hash cell size when nothing is nearby.
pub fn min_component_distance(branches: &[Branch], cell: f64) -> f64 {
    let mut best = cell;
    for (i, bi) in branches.iter().enumerate() {
        let mut cells: HashMap<Cell, Vec<Segment>> = HashMap::new();
        for w in bi.points.windows(2) {
            let a = (w[0].b, w[0].big_lambda);
            let c = (w[1].b, w[1].big_lambda);
            let lo = cell_of(a.0.min(c.0), a.1.min(c.1), cell);
            let hi = cell_of(a.0.max(c.0), a.1.max(c.1), cell);
            for x in lo.0..=hi.0 {
                for y in lo.1..=hi.1 {
                    cells.entry((x, y)).or_default().push((a, c));
                }
            }
        }
        for bj in branches.iter().skip(i + 1) {
            for w in bj.points.windows(2) {
                let a = (w[0].b, w[0].big_lambda);
                let c = (w[1].b, w[1].big_lambda);
                let lo = cell_of(a.0.min(c.0), a.1.min(c.1), cell);
                let hi = cell_of(a.0.max(c.0), a.1.max(c.1), cell);
                for x in lo.0 - 1..=hi.0 + 1 {
                    for y in lo.1 - 1..=hi.1 + 1 {
                        if let Some(segs) = cells.get(&(x, y)) {
                            for &(s0, s1) in segs {
                                best = best.min(segment_distance(a, c, s0, s1));
                            }
                        }
                    }
                }
            }
        }
    }
    best
}
