//! Simultaneous complex root finding (Aberth-Ehrlich) for real polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative stopping tolerance on the Aberth correction.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_iter: 500,
        }
    }
}

impl RootOptions {
    /// Options derived from a working precision in bits.
    pub fn for_bits(bits: u32) -> Self {
        let eff = bits.min(52) as i32;
        Self {
            tol: 2f64.powi(-eff + 6).max(4.0 * f64::EPSILON),
            max_iter: 500 + 10 * bits as usize,
        }
    }
}

/// `(p(z), p'(z))` for ascending real coefficients.
fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Sum of `|a_k| |z|^k`, the rounding scale of `p(z)`.
pub fn eval_scale(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
}

pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    eval_with_derivative(coeffs, z).0
}

/// All complex roots (with multiplicity) of the polynomial with ascending
/// real coefficients `coeffs`.
pub fn complex_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    complex_roots_with(coeffs, RootOptions::default())
}

pub fn complex_roots_with(coeffs: &[f64], opts: RootOptions) -> Result<Vec<Complex64>> {
    let Some(&lead) = coeffs.last() else {
        return Err(Error::InvalidInput("empty polynomial".into()));
    };
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }

    // Fujiwara bound for the starting circle.
    let radius = (1..=n)
        .map(|k| {
            let c = monic[n - k].abs();
            if k == n {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();

    let active = vec![true; n];
    if !iterate(&monic, &mut z, &active, opts) {
        return Err(Error::NonConvergence(opts.max_iter));
    }
    Ok(enforce_conjugate_pairs(z, opts.tol.sqrt()))
}

/// Aberth sweeps on the roots flagged `active`; the others stay fixed and
/// only enter through the repulsion sum. Ends with a guarded Newton polish.
fn iterate(monic: &[f64], z: &mut [Complex64], active: &[bool], opts: RootOptions) -> bool {
    let n = z.len();
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let mut max_step = 0.0f64;
        for i in (0..n).filter(|&i| active[i]) {
            let (p, dp) = eval_with_derivative(monic, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        let at_noise_floor = (0..n)
            .filter(|&i| active[i])
            .all(|i| eval(monic, z[i]).norm() <= 64.0 * f64::EPSILON * eval_scale(monic, z[i]));
        if max_step <= opts.tol || at_noise_floor {
            converged = true;
            break;
        }
    }
    if !converged {
        return false;
    }

    // Newton polish, kept only when it lowers |p|.
    for i in (0..n).filter(|&i| active[i]) {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(monic, z[i]);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = z[i] - p / dp;
            if eval(monic, cand).norm() < p.norm() {
                z[i] = cand;
            } else {
                break;
            }
        }
    }
    true
}

/// Re-runs the iteration for the roots in `active` of the monic polynomial
/// `monic`, starting from `z`, with the remaining roots held fixed.
pub fn refine_subset(monic: &[f64], z: &mut [Complex64], active: &[bool], opts: RootOptions) -> Result<()> {
    if iterate(monic, z, active, opts) {
        Ok(())
    } else {
        Err(Error::NonConvergence(opts.max_iter))
    }
}

pub(crate) fn pair_conjugates(z: Vec<Complex64>, opts: RootOptions) -> Vec<Complex64> {
    enforce_conjugate_pairs(z, opts.tol.sqrt())
}

/// Pairs each root having a clearly nonzero imaginary part with its nearest
/// conjugate partner and symmetrizes the pair.
fn enforce_conjugate_pairs(mut z: Vec<Complex64>, im_tol: f64) -> Vec<Complex64> {
    let n = z.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || z[i].im.abs() <= im_tol * (1.0 + z[i].norm()) {
            continue;
        }
        let target = z[i].conj();
        let partner = (0..n)
            .filter(|&j| j != i && !used[j] && z[j].im * z[i].im < 0.0)
            .min_by(|&a, &b| (z[a] - target).norm().total_cmp(&(z[b] - target).norm()));
        if let Some(j) = partner {
            let avg = (z[i] + z[j].conj()) * 0.5;
            z[i] = avg;
            z[j] = avg.conj();
            used[i] = true;
            used[j] = true;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

/// Ascending coefficients of `prod (z - r)` (real parts only).
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c.into_iter().map(|v| v.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn linear() {
        assert_eq!(complex_roots(&[1.0, 1.0]).unwrap(), vec![Complex64::new(-1.0, 0.0)]);
    }

    #[test]
    fn complex_pair() {
        // z^2 - 2z + 5/4
        let r = sorted(complex_roots(&[1.25, -2.0, 1.0]).unwrap());
        assert!((r[0] - Complex64::new(1.0, -0.5)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(1.0, 0.5)).norm() < 1e-14);
        assert_eq!(r[0], r[1].conj());
    }

    #[test]
    fn real_pair() {
        // z^2 + z - 1/4
        let r = sorted(complex_roots(&[-0.25, 1.0, 1.0]).unwrap());
        let s = 2f64.sqrt();
        assert!((r[0].re - (-1.0 - s) / 2.0).abs() < 1e-14 && r[0].im.abs() < 1e-14);
        assert!((r[1].re - (-1.0 + s) / 2.0).abs() < 1e-14 && r[1].im.abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_leading_coefficient() {
        assert!(complex_roots(&[1.0, 0.0]).is_err());
        assert!(complex_roots(&[3.0]).unwrap().is_empty());
    }

    #[test]
    fn residuals_are_small() {
        let coeffs = [3.0, -1.0, 4.0, 1.0, -5.0, 9.0, 2.0];
        for z in complex_roots(&coeffs).unwrap() {
            assert!(eval(&coeffs, z).norm() <= 1e-12 * eval_scale(&coeffs, z));
        }
    }
}
