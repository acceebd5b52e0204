//! Exact spectral polynomials `Q_J(b, lambda)` and their determinant form.
//!
//! ```text
//! cargo run --example spectral_polynomial -- 4
//! ```

use qes_locus::qes::{spectral_polynomial, QesSystem};

fn main() -> qes_locus::Result<()> {
    let top: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for j in 1..=top {
        let q = spectral_polynomial(j)?;
        let sys = QesSystem::new(j as usize)?;
        println!(
            "J = {j}: degree {} in lambda, band offsets {:?}",
            q.degree_in_lambda(),
            sys.band_offsets()
        );
        // Terms as (power of b, power of lambda, integer coefficient).
        let terms: Vec<String> = q
            .to_json()
            .terms
            .into_iter()
            .map(|(i, k, c)| format!("{c}*b^{i}*lambda^{k}"))
            .collect();
        println!("  Q = {}", terms.join(" + "));
        // In Lambda = lambda + b^2 the polynomial is much sparser.
        let mut shifted = q.big_lambda_terms().into_iter().collect::<Vec<_>>();
        shifted.sort_by_key(|((i, k), _)| (std::cmp::Reverse(*k), *i));
        let shifted: Vec<String> = shifted
            .into_iter()
            .map(|((i, k), c)| format!("{c}*b^{i}*L^{k}"))
            .collect();
        println!("  Q = {}   (L = lambda + b^2)", shifted.join(" + "));
    }
    Ok(())
}
