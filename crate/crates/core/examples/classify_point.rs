//! Eigen-polynomial of a locus point and the real/non-real split of its zeros.

use qes_locus::qes::{eigenvector_at, QesSystem};
use qes_locus::rootfind::{complex_roots, Precision};
use qes_locus::tracer::{classify_point, classify_point_precise};

fn main() -> qes_locus::Result<()> {
    // (J, b, rough lambda); b = 3/4, Lambda = -4 lies on the J = 3 locus exactly.
    let cases = [
        (3usize, 0.75, -73.0 / 16.0),
        (3, 2.0, -4.0),
        (1, 0.0, 0.0),
        (4, 10.0, -106.3),
    ];
    for (j, b, lambda) in cases {
        let sys = QesSystem::new(j)?;
        let q = qes_locus::qes::spectral_polynomial(j as i64)?;
        // Snap lambda onto the locus first.
        let Some(lambda) = qes_locus::tracer::solve_at_b(&q, b, lambda + b * b).map(|l| l - b * b) else {
            println!("J = {j}, b = {b}: no locus point near lambda = {lambda}");
            continue;
        };
        let a = eigenvector_at(&sys, b, lambda)?;
        let zeros = complex_roots(&a.coeffs)?;
        let label = classify_point(j, b, lambda)?;
        let precise = classify_point_precise(&q, b, lambda + b * b, Precision::default().doubled())?;
        println!("J = {j}, b = {b}, lambda = {lambda:.12}");
        println!("  p(z) coefficients (ascending): {:?}", a.coeffs);
        for z in &zeros {
            println!("  zero {:+.9} {:+.9}i", z.re, z.im);
        }
        println!(
            "  label (n, m) = ({}, {}); at 106 bits m = {}",
            label.n, label.m, precise.m
        );
    }
    Ok(())
}
