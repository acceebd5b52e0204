//! Traces J = 1..4 into one table and renders it as SVG.

use qes_locus::io::{read_plot_metadata, render_svg, rows_from_branches, PlotOptions};
use qes_locus::tracer::find_components;

fn main() -> qes_locus::Result<()> {
    let dir = std::env::temp_dir();
    for j in 1..=4 {
        let branches = find_components(j, (-4.0, 12.0))?;
        let rows = rows_from_branches(j, &branches);
        let svg = render_svg(&rows, &PlotOptions::default());
        let meta = read_plot_metadata(&svg)?;
        let path = dir.join(format!("qes_locus_j{j}.svg"));
        std::fs::write(&path, &svg)?;
        let counts: Vec<usize> = meta.components.iter().map(|c| c.points).collect();
        println!(
            "J = {j}: {} components, points {:?} -> {}",
            meta.components.len(),
            counts,
            path.display()
        );
    }
    Ok(())
}
