//! The Nevanlinna parameter of a locus point.
//!
//! `y = p(z) exp(z^3/3 - b z)` is the elementary eigenfunction and `y1` the
//! solution decaying along the positive real axis. The ratio `f = y / y1`
//! tends to `c = e^{i beta}` (up to a real factor) in the sector around
//! `arg z = 2 pi / 3`; `beta` modulo `pi` is the reported parameter.

pub mod profile;
pub mod schwarzian;
pub mod taylor;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tracer::LocusPoint;
use taylor::{Integrator, Potential, State, TaylorOptions};

pub use profile::{beta_along_branch, BetaProfile, BetaSample, Crossing, ProfileOptions};
pub use schwarzian::{schwarzian_residual, DiskGrid, SchwarzianReport};

/// Limit of `f` in one of the six Stokes sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AsymptoticValue {
    Infinity,
    Zero,
    C,
    CConj,
}

/// The sectors `|arg z - pi j / 3| < pi / 6`, `j = 0..5`.
pub struct SectorFrame;

impl SectorFrame {
    pub const HALF_WIDTH: f64 = PI / 6.0;
    pub const PATTERN: [AsymptoticValue; 6] = [
        AsymptoticValue::Infinity,
        AsymptoticValue::Zero,
        AsymptoticValue::C,
        AsymptoticValue::Zero,
        AsymptoticValue::CConj,
        AsymptoticValue::Zero,
    ];

    pub fn direction(j: usize) -> Complex64 {
        Complex64::from_polar(1.0, PI * (j % 6) as f64 / 3.0)
    }

    /// Index of the sector whose closure contains `z` (ties go to the lower index).
    pub fn sector_of(z: Complex64) -> usize {
        let theta = z.arg().rem_euclid(2.0 * PI);
        ((theta + Self::HALF_WIDTH) / (PI / 3.0)).floor() as usize % 6
    }
}

/// Sector used to read off the asymptotic value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sector {
    /// `arg z = 2 pi / 3`, limit `c`.
    S2,
    /// `arg z = -2 pi / 3`, limit `conj(c)`.
    S4,
}

impl Sector {
    fn ray(self) -> Complex64 {
        match self {
            Sector::S2 => SectorFrame::direction(2),
            Sector::S4 => SectorFrame::direction(4),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConnectionOptions {
    /// Starting radius on the positive real axis; `None` picks [`default_radius`].
    pub radius: Option<f64>,
    pub sector: Sector,
    pub taylor: TaylorOptions,
    /// Stop once `beta` moves less than this over a doubling of the ray radius.
    pub stabilization: f64,
    pub first_ray_radius: f64,
    pub max_ray_radius: f64,
    /// Wronskian samples with cancellation factor above this are not trusted.
    pub max_cancellation: f64,
}

impl Default for ConnectionOptions {
    fn default() -> Self {
        Self {
            radius: None,
            sector: Sector::S2,
            taylor: TaylorOptions::default(),
            stabilization: 1e-8,
            first_ray_radius: 2.0,
            max_ray_radius: 256.0,
            max_cancellation: 1e3,
        }
    }
}

/// `max(6, 2 sqrt|b| + 6)`: past both real turning points of `V`.
pub fn default_radius(b: f64) -> f64 {
    (2.0 * b.abs().sqrt() + 6.0).max(6.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionResult {
    #[serde(serialize_with = "ser_complex")]
    pub c: Complex64,
    pub beta: f64,
    pub radius: f64,
    pub ray_radius: f64,
    pub steps: usize,
    pub renormalizations: usize,
    pub error_estimate: f64,
    pub wronskian_drift: f64,
    pub last_change: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Distance between two angles modulo `pi`.
pub fn beta_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// `y1` and `y1'` at `z = r` from the asymptotic series
/// `exp(-z^3/3 + b z) z^{-(J+1)} sum_k d_k z^{-k}`.
///
/// The returned state is scaled by the positive real `exp(log_scale)`.
pub fn recessive_init(j: usize, b: f64, big_lambda: f64, r: f64) -> Result<State> {
    let sigma = -(j as f64) - 1.0;
    let mut d = vec![1.0f64];
    let (mut q, mut dq) = (1.0f64, 0.0f64);
    // Optimal truncation: keep the partial sum ending at the smallest term.
    let mut best = (f64::INFINITY, 1.0f64, 0.0f64);
    for k in 1..200usize {
        let kf = k as f64;
        let mut t = -big_lambda * d[k - 1];
        if k >= 2 {
            t -= 2.0 * b * (sigma - kf + 2.0) * d[k - 2];
        }
        if k >= 3 {
            t -= (sigma - kf + 3.0) * (sigma - kf + 2.0) * d[k - 3];
        }
        let dk = t / (2.0 * kf);
        d.push(dk);
        let term = dk * r.powi(-(k as i32));
        q += term;
        dq += -kf * term / r;
        let mag = term.abs();
        if mag == 0.0 {
            continue;
        }
        if mag < best.0 {
            best = (mag, q, dq);
        }
        if mag <= 1e-17 * q.abs() || mag > 1e10 * best.0 {
            break;
        }
    }
    let (smallest, q, dq) = best;
    if smallest > 1e-15 * q.abs() || q <= 0.0 {
        return Err(Error::RTooSmall { radius: r });
    }
    let log_scale = -r.powi(3) / 3.0 + b * r + sigma * r.ln() + q.ln();
    let dlog = -(r * r - b) + sigma / r + dq / q;
    Ok(State {
        z: Complex64::new(r, 0.0),
        y: Complex64::new(1.0, 0.0),
        dy: Complex64::new(dlog, 0.0),
        log_scale,
    })
}

/// `(p, p')` for ascending real coefficients.
pub(crate) fn poly_eval(a: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `log W(y, y1)` at the current state, and the cancellation factor of the
/// difference that defines it.
fn log_wronskian(a: &[f64], b: f64, s: &State) -> (Complex64, f64) {
    let z = s.z;
    let (p, dp) = poly_eval(a, z);
    let h = z * z * z / 3.0 - b * z;
    let dh = z * z - b;
    let t1 = p * s.dy;
    let t2 = (dp + p * dh) * s.y;
    let w = t1 - t2;
    let kappa = (t1.norm() + t2.norm()) / w.norm();
    (w.ln() + h + s.log_scale, kappa)
}

/// `Im log f` modulo `pi` at the current state.
fn beta_at(a: &[f64], b: f64, s: &State) -> f64 {
    let z = s.z;
    let (p, _) = poly_eval(a, z);
    let h = z * z * z / 3.0 - b * z;
    (h.im + p.arg() - s.y.arg()).rem_euclid(PI)
}

/// Solves the connection problem at a locus point and returns `c = e^{i beta}`.
pub fn asymptotic_value(point: &LocusPoint, opts: &ConnectionOptions) -> Result<ConnectionResult> {
    connection(&point.coefficients.coeffs, point.b, point.big_lambda, opts)
}

/// Same as [`asymptotic_value`] from raw eigen-polynomial coefficients.
pub fn connection(a: &[f64], b: f64, big_lambda: f64, opts: &ConnectionOptions) -> Result<ConnectionResult> {
    let j = a.len();
    let radius = opts.radius.unwrap_or_else(|| default_radius(b));
    let mut state = recessive_init(j, b, big_lambda, radius)?;
    let mut it = Integrator::new(Potential::new(j, b, big_lambda), opts.taylor);

    let (w0, _) = log_wronskian(a, b, &state);
    let mut drift = 0.0f64;
    let mut track = |s: &State| {
        let (w, kappa) = log_wronskian(a, b, s);
        if kappa <= opts.max_cancellation {
            drift = drift.max(((w - w0).exp() - 1.0).norm());
        }
    };

    if !it.integrate_to(&mut state, Complex64::new(0.0, 0.0), &mut track) {
        return Err(Error::NoStabilization { last_change: f64::NAN });
    }
    let ray = opts.sector.ray();
    let mut r = opts.first_ray_radius;
    if !it.integrate_to(&mut state, ray * r, &mut track) {
        return Err(Error::NoStabilization { last_change: f64::NAN });
    }
    let mut beta = beta_at(a, b, &state);
    let mut last_change = f64::INFINITY;
    while r < opts.max_ray_radius {
        r *= 2.0;
        if !it.integrate_to(&mut state, ray * r, &mut track) {
            break;
        }
        let next = beta_at(a, b, &state);
        last_change = beta_distance(next, beta);
        beta = next;
        if last_change < opts.stabilization {
            break;
        }
    }
    if last_change >= opts.stabilization {
        return Err(Error::NoStabilization { last_change });
    }
    if opts.sector == Sector::S4 {
        beta = (PI - beta).rem_euclid(PI);
    }
    let error_estimate = (10.0 * drift).max(last_change).max(1e-12);
    Ok(ConnectionResult {
        c: Complex64::from_polar(1.0, beta),
        beta,
        radius,
        ray_radius: r,
        steps: it.stats.steps,
        renormalizations: it.stats.renormalizations,
        error_estimate,
        wronskian_drift: drift,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qes::QesSystem;

    fn point(j: usize, b: f64, big_lambda: f64) -> LocusPoint {
        LocusPoint::new(&QesSystem::new(j).unwrap(), b, big_lambda, 0.0).unwrap()
    }

    #[test]
    fn sectors() {
        assert_eq!(SectorFrame::sector_of(SectorFrame::direction(2)), 2);
        assert_eq!(SectorFrame::sector_of(Complex64::new(1.0, -0.1)), 0);
        for j in 0..6 {
            let a = SectorFrame::PATTERN[j];
            let b = SectorFrame::PATTERN[(6 - j) % 6];
            let conj = match a {
                AsymptoticValue::C => AsymptoticValue::CConj,
                AsymptoticValue::CConj => AsymptoticValue::C,
                v => v,
            };
            assert_eq!(conj, b);
        }
    }

    #[test]
    fn recessive_init_leading_term() {
        let s = recessive_init(1, 0.0, 0.0, 6.0).unwrap();
        let leading = -72.0 - 2.0 * 6f64.ln();
        assert!((s.log_scale - leading).abs() < 1e-2);
        // Series 1 - z^-3 + (5/2) z^-6 - 10 z^-9 + ...
        let series = 1.0 - 6f64.powi(-3) + 2.5 * 6f64.powi(-6);
        assert!((s.log_scale - leading - series.ln()).abs() < 3e-6);
    }

    #[test]
    fn recessive_init_rejects_small_radius() {
        assert!(matches!(
            recessive_init(3, 50.0, 40.0, 1.0),
            Err(Error::RTooSmall { .. })
        ));
    }

    #[test]
    fn rotation_symmetric_point() {
        // y'' = (z^4 + 2z) y is invariant under z -> e^{2 pi i/3} z, which
        // maps y1 to a multiple of itself and pins beta to pi/6.
        let r = asymptotic_value(&point(1, 0.0, 0.0), &ConnectionOptions::default()).unwrap();
        assert!((r.beta - PI / 6.0).abs() < 1e-9, "{}", r.beta);
    }

    #[test]
    fn conjugate_sector_gives_conjugate_value() {
        let p = point(2, 1.0, 2.0);
        let s2 = asymptotic_value(&p, &ConnectionOptions::default()).unwrap();
        let s4 = asymptotic_value(
            &p,
            &ConnectionOptions {
                sector: Sector::S4,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(beta_distance(s2.beta, s4.beta) < 1e-7);
        assert!(s2.wronskian_drift < 1e-8);
    }
}
