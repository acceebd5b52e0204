use qes_locus::qes::{eigenfunction_residual, eigenfunction_residual_relative, QesSystem};
use qes_locus::tracer::{find_components, find_components_with, min_component_distance, StepPolicy};

#[test]
fn branch_invariants_on_the_standard_window() {
    for j in 1..=6 {
        let sys = QesSystem::new(j).unwrap();
        let branches = find_components(j, (-10.0, 40.0)).unwrap();
        assert_eq!(branches.len(), (j - 1) / 2 + 1, "J = {j}");
        let tol = StepPolicy::default().locus_tol;
        assert!(min_component_distance(&branches, 0.5) > 10.0 * tol, "J = {j}");
        for br in &branches {
            for p in &br.points {
                assert_eq!(p.m(), br.label.m, "J = {j}: m changes at b = {}", p.b);
                let rel = eigenfunction_residual_relative(&sys, p.b, p.lambda, &p.coefficients.coeffs);
                assert!(rel <= 1e-10, "J = {j} at b = {}: {rel:e}", p.b);
                // The absolute form is only attainable in double precision while
                // the coefficients stay moderate.
                if j <= 4 {
                    let abs = eigenfunction_residual(&sys, p.b, p.lambda, &p.coefficients.coeffs);
                    assert!(abs <= 1e-9, "J = {j} at b = {}: {abs:e}", p.b);
                }
            }
            for w in br.points.windows(2) {
                assert!(w[1].t > w[0].t);
                let step = (w[1].b - w[0].b).hypot(w[1].big_lambda - w[0].big_lambda);
                assert!(step <= 0.25 * 1.01, "J = {j}: step {step}");
            }
        }
    }
}

#[test]
fn tracing_is_deterministic() {
    let a = find_components(4, (-5.0, 30.0)).unwrap();
    let b = find_components(4, (-5.0, 30.0)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.label, y.label);
        let xs: Vec<(f64, f64)> = x.points.iter().map(|p| (p.b, p.big_lambda)).collect();
        let ys: Vec<(f64, f64)> = y.points.iter().map(|p| (p.b, p.big_lambda)).collect();
        assert_eq!(xs, ys);
    }
}

#[test]
fn tighter_steps_find_the_same_components() {
    let coarse = find_components(5, (-10.0, 60.0)).unwrap();
    let policy = StepPolicy {
        max: 0.05,
        ..StepPolicy::default()
    };
    let fine = find_components_with(5, (-10.0, 60.0), &policy).unwrap();
    let labels = |v: &[qes_locus::tracer::Branch]| v.iter().map(|b| b.label).collect::<Vec<_>>();
    assert_eq!(labels(&coarse), labels(&fine));
    assert!(fine.iter().map(|b| b.points.len()).sum::<usize>() > coarse.iter().map(|b| b.points.len()).sum::<usize>());
}
