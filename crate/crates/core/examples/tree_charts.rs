//! Tree-chart enumeration and its reconciliation with a traced locus.

use qes_locus::asymptotics::{annotate_fitted_ends, DEFAULT_FIT_B};
use qes_locus::nevanlinna::{beta_along_branch, ProfileOptions};
use qes_locus::qes::spectral_polynomial;
use qes_locus::tracer::find_components;
use qes_locus::trees::{chart_count_negative_k, chart_for_branch, enumerate_charts, reconcile, ChartAssignment};

fn main() -> qes_locus::Result<()> {
    for n in 0..=6 {
        let charts = enumerate_charts(n, 2);
        let labels: Vec<String> = charts.iter().map(|c| format!("X({},{})", c.k, c.l)).collect();
        println!(
            "n = {n}: {} single charts; {}",
            chart_count_negative_k(n),
            labels.join(" ")
        );
    }
    if let ChartAssignment::Chain { charts, .. } = chart_for_branch(2, 1)? {
        println!("Gamma(2, 1) is glued from {} charts", charts.len());
    }

    let j = 3;
    let q = spectral_polynomial(j as i64)?;
    let mut branches = find_components(j, (-10.0, 400.0))?;
    annotate_fitted_ends(&q, &mut branches, &DEFAULT_FIT_B)?;
    let profiles = branches
        .iter()
        .map(|b| beta_along_branch(&q, b, &ProfileOptions::default()))
        .collect::<qes_locus::Result<Vec<_>>>()?;
    let report = reconcile(j - 1, &branches, &profiles);
    for m in &report.matches {
        let chart = match &m.chart {
            ChartAssignment::Single(c) => format!("X({}, {})", c.k, c.l),
            ChartAssignment::Chain { l, charts } => format!("chain X(k, {l}) for k = 0..{}", charts.len() - 1),
        };
        println!(
            "Gamma({}, {}) <-> {chart}: zeros {}, levels {:?}",
            m.label.n, m.label.m, m.zeros_match, m.levels_match
        );
    }
    println!("crossings along the chain: {:?}", report.crossings);
    println!("reconciled: {}", report.pass);
    Ok(())
}
