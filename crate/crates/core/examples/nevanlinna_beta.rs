//! The Nevanlinna parameter beta: a single point, the conjugate sector, the
//! Schwarzian identity, and the profile of beta along each J = 3 component.

use qes_locus::nevanlinna::{
    asymptotic_value, beta_along_branch, schwarzian_residual, ConnectionOptions, DiskGrid, ProfileOptions, Sector,
};
use qes_locus::qes::{spectral_polynomial, QesSystem};
use qes_locus::tracer::{find_components, LocusPoint};

fn main() -> qes_locus::Result<()> {
    // b = 0, lambda = 0 for J = 1 is symmetric under z -> e^{2 pi i/3} z, so beta = pi/6.
    let p = LocusPoint::new(&QesSystem::new(1)?, 0.0, 0.0, 0.0)?;
    let r = asymptotic_value(&p, &ConnectionOptions::default())?;
    println!(
        "J = 1 at the origin: beta = {:.15} (pi/6 = {:.15})",
        r.beta,
        std::f64::consts::FRAC_PI_6
    );
    let conj = asymptotic_value(
        &p,
        &ConnectionOptions {
            sector: Sector::S4,
            ..ConnectionOptions::default()
        },
    )?;
    println!(
        "  from the conjugate sector: {:.15}, Wronskian drift {:.1e}",
        conj.beta, r.wronskian_drift
    );

    let p3 = LocusPoint::new(&QesSystem::new(3)?, 0.75, 2.0, 0.0)?;
    let grid = DiskGrid::spiral(1.5, 12, 1e-2).avoiding(&p3)?;
    let s = schwarzian_residual(&p3, &grid)?;
    println!(
        "J = 3 at (3/4, Lambda = 2): Schwarzian residual {:.2e} over {} points",
        s.max_residual, s.points
    );

    let q = spectral_polynomial(3)?;
    for br in find_components(3, (-10.0, 400.0))? {
        let prof = beta_along_branch(&q, &br, &ProfileOptions::default())?;
        println!(
            "Gamma({}, {}): {} samples, monotone {:?}, range ({:.2e}, {:.6}), ends {:?}",
            prof.label.n,
            prof.label.m,
            prof.samples.len(),
            prof.monotone,
            prof.range.0,
            prof.range.1,
            prof.end_limits
        );
        for c in prof.crossings.iter().take(4) {
            println!("  beta = 0 mod pi at b = {:.9}", c.b);
        }
    }
    Ok(())
}
