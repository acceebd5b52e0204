//! Tree-chart bookkeeping.
//!
//! Charts `X_{k,l}` label the cell decompositions that parametrize the real
//! locus. A chart with `k < 0` covers a whole component `Gamma_{n,l}` with
//! `n = 2l - k`; the charts `X_{k,n/2}`, `k >= 0`, are glued end to end
//! into the single curve `Gamma_{n,n/2}`, one gluing per point where the
//! Nevanlinna parameter passes through `0 = pi`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nevanlinna::BetaProfile;
use crate::tracer::{BetaLimit, Branch, BranchLabel, Exit};

/// Chain charts enumerated by default.
pub const DEFAULT_K_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ChartJson", try_from = "ChartJson")]
pub struct TreeChart {
    pub k: i64,
    pub l: usize,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct ChartJson {
    k: i64,
    l: usize,
    n: usize,
    #[serde(rename = "J")]
    j: usize,
    real_zeros: usize,
}

impl From<TreeChart> for ChartJson {
    fn from(c: TreeChart) -> Self {
        Self {
            k: c.k,
            l: c.l,
            n: c.n(),
            j: c.j(),
            real_zeros: c.real_zeros(),
        }
    }
}

impl TryFrom<ChartJson> for TreeChart {
    type Error = String;

    fn try_from(v: ChartJson) -> std::result::Result<Self, String> {
        let c = TreeChart { k: v.k, l: v.l };
        if c.n() != v.n || c.j() != v.j || c.real_zeros() != v.real_zeros {
            return Err(format!("inconsistent chart ({}, {})", v.k, v.l));
        }
        Ok(c)
    }
}

impl TreeChart {
    pub fn new(k: i64, l: usize) -> Self {
        Self { k, l }
    }

    /// `max(-k, 0)`.
    pub fn k_minus(&self) -> usize {
        (-self.k).max(0) as usize
    }

    pub fn n(&self) -> usize {
        2 * self.l + self.k_minus()
    }

    pub fn j(&self) -> usize {
        self.n() + 1
    }

    pub fn real_zeros(&self) -> usize {
        self.k_minus()
    }

    pub fn nonreal_zeros(&self) -> usize {
        2 * self.l
    }

    /// Levels at the `beta -> 0` and `beta -> pi` ends; only defined for `k < 0`.
    pub fn end_levels(&self) -> Option<(usize, usize)> {
        (self.k < 0).then_some((2 * self.l, 2 * self.l + 1))
    }
}

/// All charts with `n` zeros: the `k < 0` family plus, for even `n`, the
/// chain `X_{0,n/2} .. X_{k_max,n/2}`.
pub fn enumerate_charts(n: usize, k_max: usize) -> Vec<TreeChart> {
    let mut out: Vec<TreeChart> = (0..=n / 2)
        .map(|l| TreeChart::new(2 * l as i64 - n as i64, l))
        .filter(|c| c.k < 0)
        .collect();
    if n.is_multiple_of(2) {
        out.extend((0..=k_max as i64).map(|k| TreeChart::new(k, n / 2)));
    }
    out
}

/// Number of `k < 0` charts: `(n + 1) / 2` for odd `n`, `n / 2` for even.
pub fn chart_count_negative_k(n: usize) -> usize {
    if n % 2 == 1 {
        n.div_ceil(2)
    } else {
        n / 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ChartAssignment {
    Single(TreeChart),
    /// `X_{0,l}, X_{1,l}, ..`; the `beta -> pi` end of chart `k` is glued to
    /// the `beta -> 0` end of chart `k + 1`, and the `beta -> 0` end of
    /// `X_{0,l}` is the right end of the curve.
    Chain {
        l: usize,
        charts: Vec<TreeChart>,
    },
}

pub fn chart_for_branch(n: usize, m: usize) -> Result<ChartAssignment> {
    chart_for_branch_with(n, m, DEFAULT_K_MAX)
}

pub fn chart_for_branch_with(n: usize, m: usize, k_max: usize) -> Result<ChartAssignment> {
    if 2 * m > n {
        return Err(Error::InvalidM { n, m });
    }
    if 2 * m == n {
        return Ok(ChartAssignment::Chain {
            l: m,
            charts: (0..=k_max as i64).map(|k| TreeChart::new(k, m)).collect(),
        });
    }
    Ok(ChartAssignment::Single(TreeChart::new(2 * m as i64 - n as i64, m)))
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchMatch {
    pub label: BranchLabel,
    pub chart: ChartAssignment,
    pub zeros_match: bool,
    /// `None` when no end was both fitted and tagged.
    pub levels_match: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconcileReport {
    pub n: usize,
    pub pass: bool,
    pub single_charts: usize,
    pub branches: usize,
    pub count_match: bool,
    pub matches: Vec<BranchMatch>,
    pub crossings: usize,
    /// Chain charts `X_{0,l} .. X_{c,l}` needed to cover `c` detected crossings.
    pub chain_prefix: Vec<TreeChart>,
    pub chain_consistent: bool,
}

/// Checks traced branches (and, where given, their beta profiles) against
/// the chart enumeration for `n`.
pub fn reconcile(n: usize, branches: &[Branch], profiles: &[BetaProfile]) -> ReconcileReport {
    let single = chart_count_negative_k(n);
    let expected_branches = single + usize::from(n.is_multiple_of(2));
    let count_match =
        enumerate_charts(n, 0).iter().filter(|c| c.k < 0).count() == single && branches.len() == expected_branches;

    let mut matches = Vec::new();
    let mut crossings = 0;
    let mut chain_prefix = Vec::new();
    let mut chain_consistent = true;
    for br in branches {
        let Ok(chart) = chart_for_branch(n, br.label.m) else {
            matches.push(BranchMatch {
                label: br.label,
                chart: ChartAssignment::Chain { l: 0, charts: vec![] },
                zeros_match: false,
                levels_match: None,
            });
            continue;
        };
        let real = br.points.first().map_or(0, |p| p.classification.n_real);
        let profile = profiles.iter().find(|p| p.label == br.label);
        let (zeros_match, levels_match) = match &chart {
            ChartAssignment::Single(c) => {
                let zeros = br.label.n == n && real == c.real_zeros() && 2 * br.label.m == c.nonreal_zeros();
                (zeros, profile.and_then(|p| end_levels_match(br, p, c)))
            }
            ChartAssignment::Chain { l, .. } => {
                let zeros = br.label.n == n && real == 0 && 2 * l == n;
                let levels = profile.and_then(|p| chain_end_matches(br, p, n));
                if let Some(p) = profile {
                    crossings = p.crossings.len();
                    chain_prefix = (0..=crossings as i64).map(|k| TreeChart::new(k, *l)).collect();
                    // Gluing points are met in order along the curve.
                    let ts: Vec<f64> = p.crossings.iter().map(|c| c.t).collect();
                    chain_consistent = ts.windows(2).all(|w| w[0] != w[1])
                        && (ts.windows(2).all(|w| w[0] < w[1]) || ts.windows(2).all(|w| w[0] > w[1]));
                }
                (zeros, levels)
            }
        };
        matches.push(BranchMatch {
            label: br.label,
            chart,
            zeros_match,
            levels_match,
        });
    }
    let pass =
        count_match && chain_consistent && matches.iter().all(|m| m.zeros_match && m.levels_match != Some(false));
    ReconcileReport {
        n,
        pass,
        single_charts: single,
        branches: branches.len(),
        count_match,
        matches,
        crossings,
        chain_prefix,
        chain_consistent,
    }
}

fn end_levels_match(br: &Branch, p: &BetaProfile, c: &TreeChart) -> Option<bool> {
    let (zero, pi) = c.end_levels()?;
    let mut seen = None;
    for (e, limit) in br.ends.iter().zip(p.end_limits) {
        let (Some(ell), Some(limit)) = (e.fitted_ell, limit) else {
            continue;
        };
        let ok = match limit {
            BetaLimit::Zero => ell == zero,
            BetaLimit::Pi => ell == pi,
            BetaLimit::Oscillatory => false,
        };
        seen = Some(seen.unwrap_or(true) && ok);
    }
    seen
}

fn chain_end_matches(br: &Branch, p: &BetaProfile, n: usize) -> Option<bool> {
    let mut seen = None;
    for (e, limit) in br.ends.iter().zip(p.end_limits) {
        let ok = match (e.exit, limit) {
            (Exit::Right, Some(BetaLimit::Zero)) => e.fitted_ell.is_none_or(|ell| ell == n),
            (Exit::Left, Some(BetaLimit::Oscillatory)) => true,
            (_, None) => continue,
            _ => false,
        };
        seen = Some(seen.unwrap_or(true) && ok);
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumeration_examples() {
        let two = enumerate_charts(2, 2);
        assert_eq!(
            two,
            vec![
                TreeChart::new(-2, 0),
                TreeChart::new(0, 1),
                TreeChart::new(1, 1),
                TreeChart::new(2, 1)
            ]
        );
        assert_eq!(
            enumerate_charts(3, 8),
            vec![TreeChart::new(-3, 0), TreeChart::new(-1, 1)]
        );
        assert!(enumerate_charts(0, 3).iter().all(|c| c.k >= 0 && c.l == 0));
    }

    #[test]
    fn counts() {
        assert_eq!(chart_count_negative_k(1), 1);
        assert_eq!(chart_count_negative_k(4), 2);
        assert_eq!(chart_count_negative_k(5), 3);
    }

    #[test]
    fn branch_charts() {
        assert_eq!(
            chart_for_branch(2, 0).unwrap(),
            ChartAssignment::Single(TreeChart::new(-2, 0))
        );
        assert_eq!(
            chart_for_branch(3, 1).unwrap(),
            ChartAssignment::Single(TreeChart::new(-1, 1))
        );
        let ChartAssignment::Chain { l, charts } = chart_for_branch(2, 1).unwrap() else {
            panic!("expected a chain");
        };
        assert_eq!(l, 1);
        assert_eq!(
            &charts[..3],
            &[TreeChart::new(0, 1), TreeChart::new(1, 1), TreeChart::new(2, 1)]
        );
        assert!(matches!(chart_for_branch(3, 2), Err(Error::InvalidM { .. })));
    }

    #[test]
    fn one_real_two_nonreal() {
        let c = TreeChart::new(-1, 1);
        assert_eq!((c.real_zeros(), c.nonreal_zeros(), c.n(), c.j()), (1, 2, 3, 4));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&TreeChart::new(-1, 1)).unwrap();
        assert_eq!(s, r#"{"k":-1,"l":1,"n":3,"J":4,"real_zeros":1}"#);
        let back: TreeChart = serde_json::from_str(&s).unwrap();
        assert_eq!(back, TreeChart::new(-1, 1));
        assert!(serde_json::from_str::<TreeChart>(r#"{"k":-1,"l":1,"n":4,"J":5,"real_zeros":1}"#).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_matches_count(n in 0usize..=40, k_max in 0usize..10) {
            let charts = enumerate_charts(n, k_max);
            let negative = charts.iter().filter(|c| c.k < 0).count();
            prop_assert_eq!(negative, chart_count_negative_k(n));
            prop_assert_eq!(negative + usize::from(n % 2 == 0), n / 2 + 1);
            for c in &charts {
                prop_assert_eq!(c.n(), n);
                prop_assert_eq!(c.j(), 2 * c.l + c.k_minus() + 1);
                if c.k >= 0 {
                    prop_assert_eq!(2 * c.l, n);
                }
            }
        }

        #[test]
        fn json_round_trip(k in -40i64..10, l in 0usize..20) {
            let c = TreeChart::new(k, l);
            let back: TreeChart = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
