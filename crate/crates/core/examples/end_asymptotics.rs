//! Large-b ends against the harmonic oscillator levels, and the ordering of
//! eigenvalues between components.

use qes_locus::asymptotics::{annotate_fitted_ends, ordering_check, DEFAULT_FIT_B};
use qes_locus::qes::spectral_polynomial;
use qes_locus::tracer::find_components;

fn main() -> qes_locus::Result<()> {
    for j in 2..=5usize {
        let q = spectral_polynomial(j as i64)?;
        let mut branches = find_components(j, (-10.0, 400.0))?;
        let fits = annotate_fitted_ends(&q, &mut branches, &DEFAULT_FIT_B)?;
        println!("J = {j}");
        for f in &fits {
            println!(
                "  Gamma({}, {}) {:?} end: slope {:+.6} vs mu_l - 2J = {:+} (l = {}), residual {:.1e}",
                f.label.n, f.label.m, f.end, f.slope, f.expected_slope, f.ell, f.residual
            );
        }
        let ord = ordering_check(&q, 400.0)?;
        println!("  ordering at b = 400: pass = {}, margins {:?}", ord.pass, ord.margins);
    }
    Ok(())
}
