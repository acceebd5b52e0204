//! Taylor-series integrator for `y'' = V(z) y` with polynomial `V`, along
//! straight segments in the complex plane.
//!
//! The state is kept as `(y, y')` scaled by a running positive factor
//! `exp(log_scale)`, so solutions growing like `exp(|z|^3 / 3)` never
//! overflow and the argument of `y` is never disturbed.

use num_complex::Complex64;

/// `V(z) = z^4 - 2 b z^2 + 2 J z - lambda`, held as
/// `(z^2 - b)^2 + 2 J z - Lambda` with `Lambda = lambda + b^2` so that
/// large `b` does not cancel.
#[derive(Clone, Copy, Debug)]
pub struct Potential {
    pub b: f64,
    pub j: f64,
    pub big_lambda: f64,
}

impl Potential {
    pub fn new(j: usize, b: f64, big_lambda: f64) -> Self {
        Self {
            b,
            j: j as f64,
            big_lambda,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z * z - self.b;
        w * w + 2.0 * self.j * z - self.big_lambda
    }

    /// Taylor coefficients of `V` about `z0`.
    fn taylor(&self, z0: Complex64) -> [Complex64; 5] {
        let z2 = z0 * z0;
        [
            self.eval(z0),
            4.0 * z0 * (z2 - self.b) + 2.0 * self.j,
            6.0 * z2 - 2.0 * self.b,
            4.0 * z0,
            Complex64::new(1.0, 0.0),
        ]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TaylorOptions {
    /// Relative local truncation tolerance.
    pub tol: f64,
    pub order: usize,
    /// Largest step measured in local WKB units `|sqrt V| h`.
    pub max_phase: f64,
    pub max_steps: usize,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            order: 28,
            max_phase: 3.0,
            max_steps: 5_000_000,
        }
    }
}

/// Scaled solution state: the true solution is `exp(log_scale) * (y, dy)`.
#[derive(Clone, Copy, Debug)]
pub struct State {
    pub z: Complex64,
    pub y: Complex64,
    pub dy: Complex64,
    pub log_scale: f64,
}

impl State {
    /// Divides `(y, dy)` by a positive real and records it.
    fn renormalize(&mut self) {
        let m = self.y.norm().max(self.dy.norm() / (1.0 + self.z.norm().powi(2)));
        if m > 0.0 && m.is_finite() {
            self.y /= m;
            self.dy /= m;
            self.log_scale += m.ln();
        }
    }

    /// `log y` of the unscaled solution, principal argument.
    pub fn log_y(&self) -> Complex64 {
        self.y.ln() + self.log_scale
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub steps: usize,
    pub renormalizations: usize,
}

pub struct Integrator {
    pub potential: Potential,
    pub opts: TaylorOptions,
    pub stats: Stats,
    coeffs: Vec<Complex64>,
}

impl Integrator {
    pub fn new(potential: Potential, opts: TaylorOptions) -> Self {
        Self {
            potential,
            opts,
            stats: Stats::default(),
            coeffs: vec![Complex64::new(0.0, 0.0); opts.order + 1],
        }
    }

    /// Fills `self.coeffs` with the Taylor coefficients of the solution at `s.z`.
    fn expand(&mut self, s: &State) {
        let v = self.potential.taylor(s.z);
        let c = &mut self.coeffs;
        c[0] = s.y;
        c[1] = s.dy;
        for k in 0..self.opts.order - 1 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (jj, vj) in v.iter().enumerate().take(k.min(4) + 1) {
                acc += vj * c[k - jj];
            }
            c[k + 2] = acc / ((k + 2) * (k + 1)) as f64;
        }
    }

    /// Evaluates the current expansion at offset `h`.
    fn sum(&self, h: Complex64) -> (Complex64, Complex64) {
        let mut y = Complex64::new(0.0, 0.0);
        let mut dy = Complex64::new(0.0, 0.0);
        for k in (0..=self.opts.order).rev() {
            y = y * h + self.coeffs[k];
            if k > 0 {
                dy = dy * h + self.coeffs[k] * k as f64;
            }
        }
        (y, dy)
    }

    fn step_length(&self, s: &State) -> f64 {
        let n = self.opts.order;
        let root_v = self.potential.eval(s.z).norm().sqrt();
        let size = s.y.norm() + s.dy.norm() / (1.0 + root_v);
        let mut h = self.opts.max_phase / (1.0 + root_v);
        for k in [n - 1, n] {
            let ck = self.coeffs[k].norm();
            if ck > 0.0 {
                h = h.min((self.opts.tol * size / ck).powf(1.0 / k as f64));
            }
        }
        0.9 * h
    }

    /// Scaled values of the solution at `s.z + w` for each offset `w`, from
    /// the local expansion; offsets must stay well inside one step length.
    pub fn values_near(&mut self, s: &State, offsets: &[Complex64]) -> Vec<Complex64> {
        self.expand(s);
        offsets.iter().map(|&w| self.sum(w).0).collect()
    }

    /// Advances `s` along the straight segment to `target`, calling `visit`
    /// after every step.
    pub fn integrate_to(&mut self, s: &mut State, target: Complex64, mut visit: impl FnMut(&State)) -> bool {
        loop {
            let remaining = target - s.z;
            let dist = remaining.norm();
            if dist == 0.0 {
                return true;
            }
            if self.stats.steps >= self.opts.max_steps {
                return false;
            }
            self.expand(s);
            let h_len = self.step_length(s);
            let h = if h_len >= dist {
                remaining
            } else {
                remaining * (h_len / dist)
            };
            let (y, dy) = self.sum(h);
            s.z = if h_len >= dist { target } else { s.z + h };
            s.y = y;
            s.dy = dy;
            s.renormalize();
            self.stats.steps += 1;
            self.stats.renormalizations += 1;
            visit(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_quartic_series() {
        // y'' = z^4 y with y(0) = 1, y'(0) = 0 is 1 + z^6/30 + z^12/(30*132) + ...
        let pot = Potential::new(0, 0.0, 0.0);
        let mut it = Integrator::new(pot, TaylorOptions::default());
        let mut s = State {
            z: Complex64::new(0.0, 0.0),
            y: Complex64::new(1.0, 0.0),
            dy: Complex64::new(0.0, 0.0),
            log_scale: 0.0,
        };
        it.integrate_to(&mut s, Complex64::new(0.5, 0.0), |_| {});
        let x: f64 = 0.5;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        for _ in 0..10 {
            term *= x.powi(6) / ((k + 6.0) * (k + 5.0));
            sum += term;
            k += 6.0;
        }
        let y = (s.y * s.log_scale.exp()).re;
        assert!((y - sum).abs() < 1e-13);
    }

    #[test]
    fn exponential_solution_along_a_ray() {
        // J = 1, b = 0, lambda = 0: y = exp(z^3 / 3) solves y'' = (z^4 + 2z) y.
        let pot = Potential::new(1, 0.0, 0.0);
        let mut it = Integrator::new(pot, TaylorOptions::default());
        let mut s = State {
            z: Complex64::new(0.0, 0.0),
            y: Complex64::new(1.0, 0.0),
            dy: Complex64::new(0.0, 0.0),
            log_scale: 0.0,
        };
        let end = Complex64::from_polar(5.0, 0.3);
        assert!(it.integrate_to(&mut s, end, |_| {}));
        let want = end.powi(3) / 3.0;
        let got = s.log_y();
        assert!((got.re - want.re).abs() < 1e-8 * want.re.abs());
        let dphase = (got.im - want.im).rem_euclid(2.0 * std::f64::consts::PI);
        assert!(dphase.min(2.0 * std::f64::consts::PI - dphase) < 1e-8);
    }
}
