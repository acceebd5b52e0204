//! Points where the real locus has a vertical tangent, from the exact
//! discriminant of `Q_J` in `lambda`, each certified by a Sturm interval.

use qes_locus::qes::spectral_polynomial;
use qes_locus::rootfind::{complex_roots_exact, discriminant_b_values, real_lambda_roots, Precision, RootOptions};

fn main() -> qes_locus::Result<()> {
    for j in 1..=5 {
        let q = spectral_polynomial(j)?;
        let roots = discriminant_b_values(&q, (f64::NEG_INFINITY, f64::INFINITY));
        println!("J = {j}: {} real turning abscissae", roots.len());
        for r in &roots {
            let b = r.exact();
            let fiber = real_lambda_roots(&q, &b, Precision::default());
            let meeting = match fiber.iter().find(|f| f.multiplicity > 1) {
                Some(f) => format!("lambda = {:.6} is a root of multiplicity {}", f.value, f.multiplicity),
                // Irrational b: the merging pair is split by the rounding of b
                // and may sit just off the real axis.
                None => {
                    let roots = complex_roots_exact(&q.specialize_lambda(&b), RootOptions::default())?;
                    let mut best = (f64::INFINITY, roots[0], roots[0]);
                    for (i, x) in roots.iter().enumerate() {
                        for y in &roots[i + 1..] {
                            if (x - y).norm() < best.0 {
                                best = ((x - y).norm(), *x, *y);
                            }
                        }
                    }
                    format!(
                        "lambda = {:.6} {:+.1e}i and {:.6} {:+.1e}i nearly coincide",
                        best.1.re, best.1.im, best.2.re, best.2.im
                    )
                }
            };
            println!("  b = {:.15}: {meeting}", r.value);
        }
    }
    Ok(())
}
