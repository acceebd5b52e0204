//! Structural checks on the traced locus for several J.

use qes_locus::asymptotics::verify_theorem1;

fn main() -> qes_locus::Result<()> {
    let top: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for j in 1..=top {
        let r = verify_theorem1(j, (-10.0, 400.0))?;
        println!(
            "J = {j}: components {} zero counts {} ends {} ordering {} -> {}",
            r.components.pass,
            r.zero_counts.pass,
            r.ends.pass,
            r.ordering.pass,
            if r.pass { "pass" } else { "FAIL" }
        );
        if j == top {
            println!("{}", serde_json::to_string_pretty(&r)?);
        }
    }
    Ok(())
}
