//! Oracles built from scratch in test code, independent of the library's
//! recurrence and determinant routines.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Polynomial in `(b, lambda)` keyed by `(power of b, power of lambda)`.
pub type Bivariate = BTreeMap<(usize, usize), BigInt>;

fn add_into(acc: &mut Bivariate, p: &Bivariate, sign: i64) {
    for (k, c) in p {
        let e = acc.entry(*k).or_insert_with(BigInt::zero);
        *e += c * sign;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul(p: &Bivariate, q: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((i1, k1), c1) in p {
        for ((i2, k2), c2) in q {
            *out.entry((i1 + i2, k1 + k2)).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn monomial(c: i64, b_pow: usize, l_pow: usize) -> Bivariate {
    let mut p = Bivariate::new();
    if c != 0 {
        p.insert((b_pow, l_pow), BigInt::from(c));
    }
    p
}

/// Coefficient equations obtained by substituting `y = p(z) exp(z^3/3 - b z)`
/// with monic `p` of degree `J - 1` into `-y'' + (z^4 - 2 b z^2 + 2 J z) y = lambda y`.
///
/// Writing `p = sum a_k z^k`, the coefficient of `z^k` in the residual is
/// `(k+2)(k+1) a_{k+2} - 2b(k+1) a_{k+1} + (lambda + b^2) a_k + 2(k - J) a_{k-1}`.
pub fn substitution_matrix(j: usize) -> Vec<Vec<Bivariate>> {
    let n = j - 1;
    let mut rows = vec![vec![Bivariate::new(); n + 1]; n + 1];
    for k in 0..=n {
        if k + 2 <= n {
            rows[k][k + 2] = monomial(((k + 2) * (k + 1)) as i64, 0, 0);
        }
        if k < n {
            rows[k][k + 1] = monomial(-2 * (k as i64 + 1), 1, 0);
        }
        let mut diag = monomial(1, 0, 1);
        add_into(&mut diag, &monomial(1, 2, 0), 1);
        rows[k][k] = diag;
        if k >= 1 {
            rows[k][k - 1] = monomial(2 * (k as i64 - j as i64), 0, 0);
        }
    }
    rows
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace_det(m: &[Vec<Bivariate>]) -> Bivariate {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut out = Bivariate::new();
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_empty() {
            continue;
        }
        let minor: Vec<Vec<Bivariate>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        add_into(
            &mut out,
            &mul(entry, &laplace_det(&minor)),
            if c % 2 == 0 { 1 } else { -1 },
        );
    }
    out
}

pub fn oracle_q(j: usize) -> Bivariate {
    laplace_det(&substitution_matrix(j))
}

/// `Lambda` is an eigenvalue of this matrix exactly when `b` and `lambda = Lambda - b^2` lie on the locus.
pub fn lambda_matrix(j: usize, b: f64) -> DMatrix<f64> {
    let n = j - 1;
    let mut a = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        if k + 2 <= n {
            a[(k, k + 2)] = -(((k + 2) * (k + 1)) as f64);
        }
        if k < n {
            a[(k, k + 1)] = 2.0 * b * (k + 1) as f64;
        }
        if k >= 1 {
            a[(k, k - 1)] = -2.0 * (k as f64 - j as f64);
        }
    }
    a
}

/// Real eigenvalues `Lambda` of [`lambda_matrix`], ascending.
pub fn real_big_lambdas(j: usize, b: f64) -> Vec<f64> {
    let ev = lambda_matrix(j, b).complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut v: Vec<f64> = ev.iter().filter(|z| z.im.abs() <= 1e-9 * scale).map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `p'' + 2(z^2 - b) p' + (2(1 - J) z + Lambda) p` at `z`, relative to the size of its terms.
pub fn ode_residual(coeffs: &[f64], j: usize, b: f64, big_lambda: f64, z: f64) -> f64 {
    let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
    for (k, &a) in coeffs.iter().enumerate() {
        let k_f = k as f64;
        p += a * z.powi(k as i32);
        if k >= 1 {
            dp += a * k_f * z.powi(k as i32 - 1);
        }
        if k >= 2 {
            d2p += a * k_f * (k_f - 1.0) * z.powi(k as i32 - 2);
        }
    }
    let terms = [
        d2p,
        2.0 * (z * z - b) * dp,
        (2.0 * (1.0 - j as f64) * z + big_lambda) * p,
    ];
    let size: f64 = terms.iter().map(|t| t.abs()).sum::<f64>().max(1e-300);
    terms.iter().sum::<f64>().abs() / size
}

pub fn as_string_terms(p: &Bivariate) -> Vec<String> {
    p.iter()
        .map(|((i, k), c)| format!("{}{c}*b^{i}*l^{k}", if c.is_negative() { "" } else { "+" }))
        .collect()
}
