//! Large-`b` behavior of the locus: comparison with the harmonic oscillator
//! `-Y'' + 4 z^2 Y = mu Y`, fits of the branch ends, eigenvalue ordering
//! between branches, and a combined structural check of a traced locus.
//!
//! Everything here is in the physics convention `lambda_hat = -lambda`, where
//! each end behaves like `lambda_hat = b^2 + (mu_l - 2J) sqrt(b) + O(1)`.
//! Since `lambda_hat - b^2 = -Lambda`, fits are done on `-Lambda` directly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qes::{spectral_polynomial, QesSystem, SpectralPolynomial};
use crate::rootfind::{real_big_lambda_roots, Precision};
use crate::tracer::{
    classify_point_precise, find_components_for, min_component_distance, Branch, BranchLabel, End, Exit, LocusPoint,
    StepPolicy,
};

/// Default abscissae for end fits.
pub const DEFAULT_FIT_B: [f64; 3] = [100.0, 225.0, 400.0];

/// `mu_l = 2 (2 l + 1)`.
pub fn oscillator_eigenvalue(ell: usize) -> f64 {
    2.0 * (2 * ell + 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillatorLevel {
    pub ell: usize,
    pub mu: f64,
}

impl OscillatorLevel {
    pub fn new(ell: usize) -> Self {
        Self {
            ell,
            mu: oscillator_eigenvalue(ell),
        }
    }

    /// `Y_l` has `l` zeros on the imaginary axis, and one of them is `0` iff `l` is odd.
    pub fn has_real_zero(&self) -> bool {
        self.ell % 2 == 1
    }

    /// Predicted `sqrt(b)` coefficient of `lambda_hat - b^2`.
    pub fn slope(&self, j: usize) -> f64 {
        self.mu - 2.0 * j as f64
    }
}

/// How an end is identified when predicting its oscillator level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndKind {
    BetaToZero,
    BetaToPi,
    /// The end of the `m = n/2` curve that runs to `b -> +inf`.
    Rightmost,
}

/// Oscillator level an end of `Gamma_{n,m}` converges to.
pub fn predicted_end_ell(n: usize, m: usize, end: EndKind) -> Result<usize> {
    if 2 * m > n {
        return Err(Error::InvalidM { n, m });
    }
    let chain = n.is_multiple_of(2) && 2 * m == n;
    let bad = || Error::InvalidEnd {
        n,
        m,
        end: format!("{end:?}"),
    };
    match end {
        EndKind::BetaToZero => Ok(2 * m),
        EndKind::BetaToPi if !chain => Ok(2 * m + 1),
        EndKind::Rightmost if chain => Ok(n),
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EndFit {
    pub label: BranchLabel,
    pub end: End,
    /// `(b, lambda_hat)` pairs.
    pub samples: Vec<(f64, f64)>,
    /// Coefficient of `sqrt(b)`.
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of `1 / sqrt(b)`.
    pub inv_sqrt: f64,
    pub ell: usize,
    /// `mu_l - 2J` for the matched level.
    pub expected_slope: f64,
    /// Root-mean-square misfit of the model at the samples.
    pub residual: f64,
}

/// Least-squares fit of `lambda_hat - b^2` on `{sqrt b, 1, 1/sqrt b}` along
/// the monotone stretch at `end`, matched to the nearest oscillator level.
pub fn fit_end_coefficient(q: &SpectralPolynomial, branch: &Branch, end: End, b_samples: &[f64]) -> Result<EndFit> {
    if b_samples.len() < 3 {
        return Err(Error::InvalidInput("an end fit needs at least three abscissae".into()));
    }
    let j = q.j();
    let k = b_samples.len();
    let mut a = DMatrix::<f64>::zeros(k, 3);
    let mut rhs = DVector::<f64>::zeros(k);
    let mut samples = Vec::with_capacity(k);
    for (i, &b) in b_samples.iter().enumerate() {
        if b <= 0.0 {
            return Err(Error::InvalidInput(format!("fit abscissa {b} must be positive")));
        }
        let big_lambda = branch.end_value_at(q, end, b)?;
        let s = b.sqrt();
        a[(i, 0)] = s;
        a[(i, 1)] = 1.0;
        a[(i, 2)] = 1.0 / s;
        rhs[i] = -big_lambda;
        samples.push((b, b * b - big_lambda));
    }
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let misfit = &a * &coef - &rhs;
    let residual = (misfit.norm_squared() / k as f64).sqrt();
    let slope = coef[0];

    let ell = ((slope + 2.0 * j as f64 - 2.0) / 4.0).round().max(0.0) as usize;
    let level = OscillatorLevel::new(ell);
    let expected = level.slope(j);
    if (slope - expected).abs() > 0.2f64.max(0.05 * expected.abs()) {
        return Err(Error::NoMatch { slope });
    }
    Ok(EndFit {
        label: branch.label,
        end,
        samples,
        slope,
        intercept: coef[1],
        inv_sqrt: coef[2],
        ell,
        expected_slope: expected,
        residual,
    })
}

/// Fits every end that leaves through the right window edge and records the
/// matched level on the branch.
pub fn annotate_fitted_ends(q: &SpectralPolynomial, branches: &mut [Branch], b_samples: &[f64]) -> Result<Vec<EndFit>> {
    let mut fits = Vec::new();
    for br in branches.iter_mut() {
        for end in [End::First, End::Last] {
            if br.end(end).exit != Exit::Right {
                continue;
            }
            let fit = fit_end_coefficient(q, br, end, b_samples)?;
            br.ends[end.index()].fitted_ell = Some(fit.ell);
            fits.push(fit);
        }
    }
    Ok(fits)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelGroup {
    pub m: usize,
    pub lambda_phys: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderingReport {
    pub j: usize,
    pub b: f64,
    pub pass: bool,
    /// Fiber values grouped by `m`, ascending in `m`.
    pub groups: Vec<LevelGroup>,
    /// `min lambda_hat(m + 1) - max lambda_hat(m)` for consecutive groups.
    pub margins: Vec<f64>,
    /// In raw `lambda` the same groups come out in decreasing order.
    pub raw_lambda_reversed: bool,
}

/// Checks that at abscissa `b` every `lambda_hat` on `Gamma_{n,m}` lies
/// below every `lambda_hat` on `Gamma_{n,m+1}`.
pub fn ordering_check(q: &SpectralPolynomial, b: f64) -> Result<OrderingReport> {
    let sys = QesSystem::new(q.j())?;
    let roots = real_big_lambda_roots(q, &SpectralPolynomial::rational_b(b), Precision::default());
    let mut by_m: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in &roots {
        let p = LocusPoint::new(&sys, b, r.value, 0.0)?;
        by_m.entry(p.m()).or_default().push(p.lambda_phys);
    }
    let groups: Vec<LevelGroup> = by_m
        .into_iter()
        .map(|(m, mut v)| {
            v.sort_by(f64::total_cmp);
            LevelGroup { m, lambda_phys: v }
        })
        .collect();
    let margins: Vec<f64> = groups
        .windows(2)
        .map(|w| w[1].lambda_phys[0] - w[0].lambda_phys[w[0].lambda_phys.len() - 1])
        .collect();
    let pass = margins.iter().all(|&d| d > 0.0);
    // lambda = -lambda_hat, so the raw ordering is the mirror image.
    let raw_lambda_reversed = groups.windows(2).all(|w| {
        let hi_next = -w[1].lambda_phys[0];
        let lo_here = -w[0].lambda_phys[w[0].lambda_phys.len() - 1];
        hi_next < lo_here
    });
    Ok(OrderingReport {
        j: q.j(),
        b,
        pass,
        groups,
        margins,
        raw_lambda_reversed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub pass: bool,
    pub evidence: Vec<Value>,
}

impl Check {
    fn new() -> Self {
        Self {
            pass: true,
            evidence: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, evidence: Value) {
        self.pass &= ok;
        self.evidence.push(evidence);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub j: usize,
    pub window: (f64, f64),
    pub pass: bool,
    pub components: Check,
    pub zero_counts: Check,
    pub ends: Check,
    pub ordering: Check,
    #[serde(skip)]
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug)]
pub struct TheoremOptions {
    pub policy: StepPolicy,
    /// Points checked per branch (all points if the branch is shorter).
    pub samples_per_branch: usize,
    /// Of those, how many are re-classified at doubled precision.
    pub precision_checks: usize,
    pub fit_b: Vec<f64>,
    /// Base precision; the stability check runs at twice this.
    pub precision: Precision,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        Self {
            policy: StepPolicy::default(),
            samples_per_branch: 50,
            precision_checks: 6,
            fit_b: DEFAULT_FIT_B.to_vec(),
            precision: Precision::default(),
        }
    }
}

/// Evenly spaced indices into `0..len`, at most `count` of them.
fn spread(len: usize, count: usize) -> Vec<usize> {
    if len <= count {
        return (0..len).collect();
    }
    (0..count).map(|i| i * (len - 1) / (count - 1).max(1)).collect()
}

/// Traces the locus in `window` and checks component count, zero counts,
/// end behavior and ordering.
pub fn verify_theorem1(j: usize, window: (f64, f64)) -> Result<TheoremReport> {
    verify_theorem1_with(j, window, &TheoremOptions::default())
}

pub fn verify_theorem1_with(j: usize, window: (f64, f64), opts: &TheoremOptions) -> Result<TheoremReport> {
    let q = spectral_polynomial(j as i64)?;
    let mut branches = find_components_for(&q, window, &opts.policy)?;
    let n = j - 1;

    let mut components = Check::new();
    let ms: Vec<usize> = branches.iter().map(|b| b.label.m).collect();
    let expected: Vec<usize> = (0..=n / 2).collect();
    let mut sorted = ms.clone();
    sorted.sort_unstable();
    components.record(
        branches.len() == n / 2 + 1 && sorted == expected,
        json!({ "count": branches.len(), "expected": n / 2 + 1, "m": ms }),
    );
    let dist = min_component_distance(&branches, 0.5);
    components.record(dist > 1e-9, json!({ "min_distance": dist }));

    let mut zero_counts = Check::new();
    let precise = opts.precision.doubled();
    for br in &branches {
        let idx = spread(br.points.len(), opts.samples_per_branch);
        let mut bad = Vec::new();
        for &i in &idx {
            let c = &br.points[i].classification;
            if c.n() != n || c.m != br.label.m || c.n_real != n - 2 * br.label.m {
                bad.push(i);
            }
        }
        let mut unstable = Vec::new();
        for &i in &spread(idx.len(), opts.precision_checks) {
            let p = &br.points[idx[i]];
            let c = classify_point_precise(&q, p.b, p.big_lambda, precise)?;
            if c.m != p.m() || c.n_real != p.classification.n_real {
                unstable.push(idx[i]);
            }
        }
        zero_counts.record(
            bad.is_empty() && unstable.is_empty(),
            json!({
                "m": br.label.m,
                "n_real": n - 2 * br.label.m,
                "checked": idx.len(),
                "mismatched": bad,
                "precision_checked": opts.precision_checks.min(idx.len()),
                "unstable": unstable,
            }),
        );
    }

    let mut ends = Check::new();
    for br in &branches {
        let exits = [br.ends[0].exit, br.ends[1].exit];
        let two_sided = exits.contains(&Exit::Left) && exits.contains(&Exit::Right);
        let both_right = exits == [Exit::Right, Exit::Right];
        let chain = n.is_multiple_of(2) && 2 * br.label.m == n;
        let ok = if chain { two_sided } else { both_right };
        ends.record(ok, json!({ "m": br.label.m, "exits": exits }));
    }
    if window.1 >= opts.fit_b.iter().cloned().fold(0.0, f64::max) {
        match annotate_fitted_ends(&q, &mut branches, &opts.fit_b) {
            Ok(fits) => {
                let mut ells: Vec<usize> = fits.iter().map(|f| f.ell).collect();
                ells.sort_unstable();
                let ok = ells == (0..=n).collect::<Vec<_>>();
                let per: Vec<Value> = fits
                    .iter()
                    .map(|f| json!({ "m": f.label.m, "end": f.end, "slope": f.slope, "ell": f.ell }))
                    .collect();
                ends.record(ok, json!({ "fitted_ells": ells, "fits": per }));
            }
            Err(e) => ends.record(false, json!({ "fit_error": e.to_string() })),
        }
    }

    let mut ordering = Check::new();
    let rep = ordering_check(&q, window.1)?;
    ordering.record(rep.pass, serde_json::to_value(&rep)?);

    Ok(TheoremReport {
        j,
        window,
        pass: components.pass && zero_counts.pass && ends.pass && ordering.pass,
        components,
        zero_counts,
        ends,
        ordering,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracer::find_components;

    #[test]
    fn levels() {
        assert_eq!(oscillator_eigenvalue(0), 2.0);
        assert_eq!(oscillator_eigenvalue(1), 6.0);
        assert_eq!(oscillator_eigenvalue(3), 14.0);
        assert!(OscillatorLevel::new(3).has_real_zero());
        assert!(!OscillatorLevel::new(2).has_real_zero());
    }

    #[test]
    fn predicted_levels() {
        assert_eq!(predicted_end_ell(2, 0, EndKind::BetaToZero).unwrap(), 0);
        assert_eq!(predicted_end_ell(2, 0, EndKind::BetaToPi).unwrap(), 1);
        assert_eq!(predicted_end_ell(2, 1, EndKind::Rightmost).unwrap(), 2);
        assert!(matches!(
            predicted_end_ell(2, 1, EndKind::BetaToPi),
            Err(Error::InvalidEnd { .. })
        ));
        assert!(matches!(
            predicted_end_ell(3, 0, EndKind::Rightmost),
            Err(Error::InvalidEnd { .. })
        ));
        assert!(matches!(
            predicted_end_ell(2, 2, EndKind::BetaToZero),
            Err(Error::InvalidM { .. })
        ));
    }

    #[test]
    fn j2_fit_is_exact() {
        let q = spectral_polynomial(2).unwrap();
        let branches = find_components(2, (-10.0, 400.0)).unwrap();
        let br = &branches[0];
        for end in [End::First, End::Last] {
            let fit = fit_end_coefficient(&q, br, end, &DEFAULT_FIT_B).unwrap();
            // Lambda = +-2 sqrt(b) exactly.
            assert!((fit.slope - fit.expected_slope).abs() < 1e-9, "{fit:?}");
            assert!(fit.intercept.abs() < 1e-8 && fit.inv_sqrt.abs() < 1e-7);
            let want = if fit.slope < 0.0 { 0 } else { 1 };
            assert_eq!(fit.ell, want);
        }
    }

    #[test]
    fn ordering_j3_at_four() {
        let q = spectral_polynomial(3).unwrap();
        let r = ordering_check(&q, 4.0).unwrap();
        assert!(r.pass && r.raw_lambda_reversed);
        assert_eq!(r.groups.len(), 2);
        assert_eq!(r.groups[0].lambda_phys.len(), 2);
        assert_eq!(r.groups[1].m, 1);
    }

    #[test]
    fn ordering_single_branch_is_vacuous() {
        for j in [1, 2] {
            let q = spectral_polynomial(j).unwrap();
            let r = ordering_check(&q, 4.0).unwrap();
            assert!(r.pass && r.margins.is_empty());
        }
    }

    #[test]
    fn spread_indices() {
        assert_eq!(spread(3, 5), vec![0, 1, 2]);
        assert_eq!(spread(11, 3), vec![0, 5, 10]);
    }
}
