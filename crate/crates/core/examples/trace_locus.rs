//! Traces the real locus for one J and summarizes its components.
//!
//! ```text
//! cargo run --release --example trace_locus -- 5 -10 400
//! ```

use qes_locus::io::{rows_from_branches, write_rows};
use qes_locus::tracer::{find_components, min_component_distance, Exit};

fn main() -> qes_locus::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let j = args.first().map_or(3, |&x| x as usize);
    let window = (
        args.get(1).copied().unwrap_or(-10.0),
        args.get(2).copied().unwrap_or(40.0),
    );

    let started = std::time::Instant::now();
    let branches = find_components(j, window)?;
    println!(
        "J = {j} on b in [{}, {}]: {} components in {:.2?} (expected {})",
        window.0,
        window.1,
        branches.len(),
        started.elapsed(),
        (j - 1) / 2 + 1
    );
    for br in &branches {
        let exits: Vec<&str> = br
            .ends
            .iter()
            .map(|e| match e.exit {
                Exit::Left => "left",
                Exit::Right => "right",
                Exit::StepCap => "step cap",
            })
            .collect();
        println!(
            "  Gamma({}, {}): {} points, min b = {:.6}, exits {} / {}",
            br.label.n,
            br.label.m,
            br.points.len(),
            br.min_b(),
            exits[0],
            exits[1]
        );
    }
    println!(
        "  closest approach between components: {:.3e}",
        min_component_distance(&branches, 0.5)
    );

    let path = std::env::temp_dir().join(format!("qes_locus_j{j}.csv"));
    write_rows(std::fs::File::create(&path)?, &rows_from_branches(j, &branches))?;
    println!("  wrote {}", path.display());
    Ok(())
}
