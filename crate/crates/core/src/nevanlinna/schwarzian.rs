//! Finite-difference check that `f = y / y1` satisfies
//! `S(f) = f'''/f' - (3/2)(f''/f')^2 = -2 (z^4 - 2 b z^2 + 2 J z - lambda)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::taylor::{Integrator, Potential, State};
use super::{default_radius, poly_eval, recessive_init, ConnectionOptions};
use crate::error::{Error, Result};
use crate::rootfind::complex_roots;
use crate::tracer::LocusPoint;

// Nine-point central stencils: eighth order for f' and f'', sixth for f'''.
const D1: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const D2: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];
const D3: [f64; 9] = [
    -7.0 / 240.0,
    3.0 / 10.0,
    -169.0 / 120.0,
    61.0 / 30.0,
    0.0,
    -61.0 / 30.0,
    169.0 / 120.0,
    -3.0 / 10.0,
    7.0 / 240.0,
];

/// Expected residual ratio when the spacing is halved.
pub const ORDER_FACTOR: f64 = 64.0;

/// Sample centers in a disk plus the finite-difference spacing.
#[derive(Clone, Debug, Serialize)]
pub struct DiskGrid {
    #[serde(skip)]
    pub centers: Vec<Complex64>,
    pub radius: f64,
    pub spacing: f64,
}

impl DiskGrid {
    /// `count` points on a golden-angle spiral filling `|z| <= radius`.
    pub fn spiral(radius: f64, count: usize, spacing: f64) -> Self {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let centers = (0..count)
            .map(|k| {
                let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
                Complex64::from_polar(r, golden * k as f64)
            })
            .collect();
        Self {
            centers,
            radius,
            spacing,
        }
    }

    /// Square lattice of pitch `pitch` clipped to the disk.
    pub fn lattice(radius: f64, pitch: f64, spacing: f64) -> Self {
        let m = (radius / pitch).floor() as i64;
        let centers = (-m..=m)
            .flat_map(|i| (-m..=m).map(move |k| Complex64::new(i as f64 * pitch, k as f64 * pitch)))
            .filter(|z| z.norm() <= radius)
            .collect();
        Self {
            centers,
            radius,
            spacing,
        }
    }

    /// `count` points uniform in the disk, reproducible from `seed`.
    pub fn random(radius: f64, count: usize, spacing: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centers = (0..count)
            .map(|_| {
                let r = radius * rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
            })
            .collect();
        Self {
            centers,
            radius,
            spacing,
        }
    }

    pub fn with_spacing(&self, spacing: f64) -> Self {
        Self {
            spacing,
            ..self.clone()
        }
    }

    /// Drops centers whose stencil comes within eight spacings of a zero of `y` or `y1`.
    pub fn avoiding(&self, point: &LocusPoint) -> Result<Self> {
        let ctx = Context::new(point)?;
        let mut centers = Vec::with_capacity(self.centers.len());
        for &z in &self.centers {
            let (state, _) = ctx.state_at(z)?;
            if ctx.near_singularity(z, &state, self.spacing).is_none() {
                centers.push(z);
            }
        }
        Ok(Self {
            centers,
            ..self.clone()
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchwarzianReport {
    pub max_residual: f64,
    pub points: usize,
    pub worst_at: (f64, f64),
    pub spacing: f64,
}

struct Context<'a> {
    point: &'a LocusPoint,
    potential: Potential,
    origin: State,
    zeros: Vec<Complex64>,
    opts: ConnectionOptions,
}

impl<'a> Context<'a> {
    fn new(point: &'a LocusPoint) -> Result<Self> {
        let a = &point.coefficients.coeffs;
        let j = a.len();
        let opts = ConnectionOptions::default();
        let potential = Potential::new(j, point.b, point.big_lambda);
        let mut origin = recessive_init(j, point.b, point.big_lambda, default_radius(point.b))?;
        let mut it = Integrator::new(potential, opts.taylor);
        if !it.integrate_to(&mut origin, Complex64::new(0.0, 0.0), |_| {}) {
            return Err(Error::NoStabilization { last_change: f64::NAN });
        }
        Ok(Self {
            point,
            potential,
            origin,
            zeros: complex_roots(a)?,
            opts,
        })
    }

    fn state_at(&self, z: Complex64) -> Result<(State, Integrator)> {
        let mut s = self.origin;
        let mut it = Integrator::new(self.potential, self.opts.taylor);
        if !it.integrate_to(&mut s, z, |_| {}) {
            return Err(Error::NoStabilization { last_change: f64::NAN });
        }
        Ok((s, it))
    }

    fn near_singularity(&self, z: Complex64, s: &State, h: f64) -> Option<Complex64> {
        let margin = 8.0 * h;
        if let Some(w) = self.zeros.iter().find(|w| (*w - z).norm() < margin) {
            return Some(*w);
        }
        // Newton distance to the nearest zero of y1.
        if s.y.norm() < margin * s.dy.norm() {
            return Some(z - s.y / s.dy);
        }
        None
    }

    fn residual_at(&self, z: Complex64, h: f64) -> Result<f64> {
        let (s, mut it) = self.state_at(z)?;
        if let Some(w) = self.near_singularity(z, &s, h) {
            return Err(Error::GridNearSingularity { re: w.re, im: w.im });
        }
        let offsets: Vec<Complex64> = (-4..=4).map(|k| Complex64::new(k as f64 * h, 0.0)).collect();
        let y1 = it.values_near(&s, &offsets);
        let b = self.point.b;
        // S is Mobius invariant: difference whichever of y/y1 and y1/y has
        // its nearest pole further from z.
        let to_y1_zero = s.y.norm() / s.dy.norm();
        let to_p_zero = self.zeros.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
        let invert = to_p_zero > to_y1_zero;
        let f: Vec<Complex64> = offsets
            .iter()
            .zip(&y1)
            .map(|(w, u)| {
                let zz = z + w;
                let (p, _) = poly_eval(&self.point.coefficients.coeffs, zz);
                let f = p * (zz * zz * zz / 3.0 - b * zz).exp() / u;
                if invert {
                    1.0 / f
                } else {
                    f
                }
            })
            .collect();
        let stencil = |c: &[f64; 9]| -> Complex64 { c.iter().zip(&f).map(|(c, f)| f * *c).sum() };
        let d1 = stencil(&D1) / h;
        let d2 = stencil(&D2) / (h * h);
        let d3 = stencil(&D3) / (h * h * h);
        let schwarzian = d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
        Ok((schwarzian + 2.0 * self.potential.eval(z)).norm())
    }
}

/// Largest `|S(f) + 2 V|` over the grid centers.
pub fn schwarzian_residual(point: &LocusPoint, grid: &DiskGrid) -> Result<SchwarzianReport> {
    let ctx = Context::new(point)?;
    let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
    for &z in &grid.centers {
        let r = ctx.residual_at(z, grid.spacing)?;
        if r > worst.0 {
            worst = (r, z);
        }
    }
    Ok(SchwarzianReport {
        max_residual: worst.0,
        points: grid.centers.len(),
        worst_at: (worst.1.re, worst.1.im),
        spacing: grid.spacing,
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
    fn j1_origin() {
        let p = point(1, 0.0, 0.0);
        let grid = DiskGrid::spiral(1.5, 12, 1e-2).avoiding(&p).unwrap();
        assert!(grid.centers.len() >= 10);
        let r = schwarzian_residual(&p, &grid).unwrap();
        assert!(r.max_residual <= 1e-4, "{}", r.max_residual);
    }

    #[test]
    fn j3_double_root_point() {
        let p = point(3, 0.75, 2.0);
        let grid = DiskGrid::spiral(1.5, 12, 1e-2).avoiding(&p).unwrap();
        let r = schwarzian_residual(&p, &grid).unwrap();
        assert!(r.max_residual <= 1e-4, "{}", r.max_residual);
    }

    #[test]
    fn random_grid_is_reproducible() {
        let a = DiskGrid::random(2.0, 20, 1e-2, 7);
        let b = DiskGrid::random(2.0, 20, 1e-2, 7);
        assert_eq!(a.centers, b.centers);
        assert!(a.centers.iter().all(|z| z.norm() <= 2.0));
        assert_ne!(a.centers, DiskGrid::random(2.0, 20, 1e-2, 8).centers);
    }

    #[test]
    fn rejects_stencil_on_a_zero() {
        // p = z^2 + z - 1/4 vanishes at (sqrt 2 - 1)/2.
        let p = point(3, 0.75, 2.0);
        let z0 = (2f64.sqrt() - 1.0) / 2.0;
        let grid = DiskGrid {
            centers: vec![Complex64::new(z0 + 0.01, 0.0)],
            radius: 1.5,
            spacing: 1e-2,
        };
        assert!(matches!(
            schwarzian_residual(&p, &grid),
            Err(Error::GridNearSingularity { .. })
        ));
    }
}
