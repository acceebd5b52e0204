//! The algebraic backbone: the banded recurrence whose eigenvectors are the
//! coefficients of the polynomial factor of an elementary eigenfunction, and
//! the exact spectral polynomial `Q_J(b, lambda)`.
//!
//! Substituting `y = p(z) exp(z^3/3 - b z)` into
//! `-y'' + (z^4 - 2 b z^2 + 2 J z) y = lambda y` leaves
//! `-p'' - 2 (z^2 - b) p' + 2 (J - 1) z p = (lambda + b^2) p`,
//! which for `p = sum a_m z^m` of degree `n = J - 1` reads
//!
//! ```text
//! 2 (n - m + 1) a_{m-1} + 2 b (m + 1) a_{m+1} - (m + 2)(m + 1) a_{m+2} = Lambda a_m
//! ```
//!
//! with `Lambda = lambda + b^2`. Internally everything is stored in the
//! working sign convention above; [`to_physics_convention`] maps to the sign
//! in which the large-b asymptotics read `lambda ~ b^2`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{berkowitz_charpoly, rational_from_f64, BiPoly, IntPoly, RatPoly};

/// Largest J for which the exact spectral polynomial is built by default.
pub const DEFAULT_MAX_J: usize = 16;

/// Relative tolerance used to decide that a floating point lies on the locus.
pub const LOCUS_TOL: f64 = 1e-8;

/// The QES problem for a fixed positive integer `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QesSystem {
    j: usize,
}

/// Validates `J` and returns the recurrence description.
pub fn build_recurrence(j: i64) -> Result<QesSystem> {
    if j < 1 {
        return Err(Error::InvalidJ(j));
    }
    Ok(QesSystem { j: j as usize })
}

impl QesSystem {
    pub fn new(j: usize) -> Result<Self> {
        build_recurrence(j as i64)
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Degree of the eigen-polynomial.
    pub fn n(&self) -> usize {
        self.j - 1
    }

    /// Coefficients of the exponent `h(z) = z^3/3 - b z` as `(cubic, linear)`,
    /// with the linear one given per unit `b`.
    pub fn exponent_coeffs(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(BigInt::from(1), BigInt::from(3)),
            BigRational::from_integer(BigInt::from(-1)),
        )
    }

    /// Entry `M[row][col]` as `(constant, coefficient of b)`.
    pub fn entry(&self, row: usize, col: usize) -> (i64, i64) {
        let n = self.n() as i64;
        let m = row as i64;
        if col + 1 == row {
            (2 * (n - m + 1), 0)
        } else if col == row + 1 {
            (0, 2 * (m + 1))
        } else if col == row + 2 {
            (-(m + 2) * (m + 1), 0)
        } else {
            (0, 0)
        }
    }

    /// `M(b)` with entries in `Z[b]`.
    pub fn matrix_int(&self) -> Vec<Vec<IntPoly>> {
        let size = self.n() + 1;
        (0..size)
            .map(|r| {
                (0..size)
                    .map(|c| {
                        let (k, kb) = self.entry(r, c);
                        IntPoly::from_i64s(&[k, kb])
                    })
                    .collect()
            })
            .collect()
    }

    pub fn matrix_f64(&self, b: f64) -> DMatrix<f64> {
        let size = self.n() + 1;
        DMatrix::from_fn(size, size, |r, c| {
            let (k, kb) = self.entry(r, c);
            k as f64 + kb as f64 * b
        })
    }

    /// Number of nonzero bands of `M(b)` for generic `b`.
    pub fn band_offsets(&self) -> Vec<i64> {
        let size = self.n() + 1;
        let mut offsets = std::collections::BTreeSet::new();
        for r in 0..size {
            for c in 0..size {
                if self.entry(r, c) != (0, 0) {
                    offsets.insert(c as i64 - r as i64);
                }
            }
        }
        offsets.into_iter().collect()
    }

    /// Back-substitution from `a_n = 1` through rows `n, n-1, ..., 1`.
    /// Row 0 is the consistency condition and is not used.
    pub fn back_substitute(&self, b: f64, big_lambda: f64) -> Vec<f64> {
        let n = self.n();
        let mut a = vec![0.0; n + 3];
        a[n] = 1.0;
        for m in (1..=n).rev() {
            let mf = m as f64;
            a[m - 1] = (big_lambda * a[m] - 2.0 * b * (mf + 1.0) * a[m + 1] + (mf + 2.0) * (mf + 1.0) * a[m + 2])
                / (2.0 * (n - m + 1) as f64);
        }
        a.truncate(n + 1);
        a
    }

    /// Exact back-substitution over the rationals.
    pub fn back_substitute_exact(&self, b: &BigRational, big_lambda: &BigRational) -> Vec<BigRational> {
        let n = self.n();
        let mut a = vec![BigRational::zero(); n + 3];
        a[n] = BigRational::from_integer(1.into());
        for m in (1..=n).rev() {
            let mi = BigInt::from(m as i64);
            let t1 = big_lambda * &a[m];
            let t2 = b * BigRational::from_integer(BigInt::from(2) * (&mi + 1)) * &a[m + 1];
            let t3 = BigRational::from_integer((&mi + 2) * (&mi + 1)) * &a[m + 2];
            a[m - 1] = (t1 - t2 + t3) / BigRational::from_integer(BigInt::from(2 * (n - m + 1) as i64));
        }
        a.truncate(n + 1);
        a
    }

    /// `(M(b) a)_0 - Lambda a_0`, the only row not enforced by back-substitution.
    fn row0_residual(&self, b: f64, big_lambda: f64, a: &[f64]) -> f64 {
        let a1 = a.get(1).copied().unwrap_or(0.0);
        let a2 = a.get(2).copied().unwrap_or(0.0);
        2.0 * b * a1 - 2.0 * a2 - big_lambda * a[0]
    }
}

/// Eigen-polynomial coefficients `a_0..a_n`, ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenCoefficients {
    pub coeffs: Vec<f64>,
    pub normalization: Normalization,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Leading coefficient `a_n = 1`.
    Monic,
    UnitNorm,
}

impl EigenCoefficients {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Rescaled to unit Euclidean norm.
    pub fn to_unit_norm(&self) -> Self {
        let norm = self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self {
            coeffs: self.coeffs.iter().map(|c| c / norm).collect(),
            normalization: Normalization::UnitNorm,
        }
    }
}

/// Nullspace vector of `M(b) - Lambda I` at a locus point given in `(b, lambda)`.
pub fn eigenvector_at(sys: &QesSystem, b: f64, lambda: f64) -> Result<EigenCoefficients> {
    eigenvector_at_big_lambda(sys, b, lambda + b * b)
}

/// Same as [`eigenvector_at`] with `Lambda = lambda + b^2` supplied directly,
/// which avoids cancellation for large `b`.
pub fn eigenvector_at_big_lambda(sys: &QesSystem, b: f64, big_lambda: f64) -> Result<EigenCoefficients> {
    if !b.is_finite() || !big_lambda.is_finite() {
        return Err(Error::InvalidInput("non-finite locus point".into()));
    }
    let a = sys.back_substitute(b, big_lambda);
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::Degenerate);
    }
    let m_norm = sys.matrix_f64(b).abs().max().max(big_lambda.abs()).max(1.0);
    let a_norm = a.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let residual = sys.row0_residual(b, big_lambda, &a).abs();
    if residual > LOCUS_TOL * m_norm * a_norm {
        return Err(Error::NotOnLocus {
            b,
            lambda: big_lambda - b * b,
            residual: residual / (m_norm * a_norm),
        });
    }
    Ok(EigenCoefficients {
        coeffs: a,
        normalization: Normalization::Monic,
    })
}

/// Exact eigenvector at a rational point; errors unless the point is exactly on the locus.
pub fn eigenvector_exact(sys: &QesSystem, b: &BigRational, lambda: &BigRational) -> Result<Vec<BigRational>> {
    let big_lambda = lambda + b * b;
    let a = sys.back_substitute_exact(b, &big_lambda);
    if !eigenfunction_residual_exact(sys, b, lambda, &a).is_zero() {
        return Err(Error::NotOnLocus {
            b: b.to_f64().unwrap_or(f64::NAN),
            lambda: lambda.to_f64().unwrap_or(f64::NAN),
            residual: f64::NAN,
        });
    }
    Ok(a)
}

/// Per power of `z`, the four terms of `-p'' - 2(z^2 - b) p' + 2(J-1) z p - (lambda + b^2) p`.
fn substituted_ode_terms(sys: &QesSystem, b: f64, lambda: f64, a: &[f64]) -> Vec<[f64; 4]> {
    let n = sys.n();
    let big_lambda = lambda + b * b;
    let at = |k: i64| -> f64 {
        if k < 0 {
            0.0
        } else {
            a.get(k as usize).copied().unwrap_or(0.0)
        }
    };
    (0..=n + 1)
        .map(|m| {
            let mi = m as i64;
            let mf = m as f64;
            [
                -(mf + 2.0) * (mf + 1.0) * at(mi + 2),
                2.0 * (n as f64 + 1.0 - mf) * at(mi - 1),
                2.0 * b * (mf + 1.0) * at(mi + 1),
                -big_lambda * at(mi),
            ]
        })
        .collect()
}

/// Largest coefficient magnitude of the substituted ODE; zero on the locus.
pub fn eigenfunction_residual(sys: &QesSystem, b: f64, lambda: f64, a: &[f64]) -> f64 {
    substituted_ode_terms(sys, b, lambda, a)
        .into_iter()
        .fold(0.0, |acc, t| acc.max(t.iter().sum::<f64>().abs()))
}

/// [`eigenfunction_residual`] divided by the largest term magnitude, so it
/// stays near machine precision at large `b`.
pub fn eigenfunction_residual_relative(sys: &QesSystem, b: f64, lambda: f64, a: &[f64]) -> f64 {
    let terms = substituted_ode_terms(sys, b, lambda, a);
    let size = terms.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if size == 0.0 {
        return 0.0;
    }
    terms.iter().fold(0.0f64, |acc, t| acc.max(t.iter().sum::<f64>().abs())) / size
}

/// Exact version of [`eigenfunction_residual`].
pub fn eigenfunction_residual_exact(
    sys: &QesSystem,
    b: &BigRational,
    lambda: &BigRational,
    a: &[BigRational],
) -> BigRational {
    let n = sys.n() as i64;
    let big_lambda = lambda + b * b;
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let at = |k: i64| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            a.get(k as usize).cloned().unwrap_or_else(BigRational::zero)
        }
    };
    (0..=n + 1)
        .map(|m| {
            -r((m + 2) * (m + 1)) * at(m + 2) - r(2 * (m - 1)) * at(m - 1)
                + b * r(2 * (m + 1)) * at(m + 1)
                + r(2 * n) * at(m - 1)
                - &big_lambda * at(m)
        })
        .fold(BigRational::zero(), |acc, c| if c.abs() > acc { c.abs() } else { acc })
}

/// Maps `(b, lambda)` to `(b, -lambda)`; an involution.
pub fn to_physics_convention(b: f64, lambda: f64) -> (f64, f64) {
    (b, -lambda)
}

/// Exact `Q_J` in both `(b, Lambda)` and `(b, lambda)` form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPolynomial {
    j: usize,
    /// Outer variable `Lambda`, inner `b`.
    big_lambda: BiPoly,
    /// Outer variable `lambda`, inner `b`.
    lambda: BiPoly,
    big_lambda_f64: Vec<Vec<f64>>,
    lambda_f64: Vec<Vec<f64>>,
}

pub fn spectral_polynomial(j: i64) -> Result<SpectralPolynomial> {
    spectral_polynomial_capped(j, DEFAULT_MAX_J)
}

/// `det(Lambda I - M(b))` by Berkowitz over `Z[b]`, then `Lambda -> lambda + b^2`.
pub fn spectral_polynomial_capped(j: i64, cap: usize) -> Result<SpectralPolynomial> {
    let sys = build_recurrence(j)?;
    if sys.j() > cap {
        return Err(Error::ResourceLimit { j: sys.j(), cap });
    }
    let charpoly = berkowitz_charpoly(&sys.matrix_int());
    Ok(SpectralPolynomial::from_big_lambda(sys.j(), BiPoly::new(charpoly)))
}

fn float_table(p: &BiPoly) -> Vec<Vec<f64>> {
    p.coeffs().iter().map(IntPoly::to_f64_coeffs).collect()
}

/// Value and the two partials of a float table at `(b, x)`.
fn eval_table(table: &[Vec<f64>], b: f64, x: f64) -> (f64, f64, f64, f64) {
    let mut value = 0.0;
    let mut d_b = 0.0;
    let mut d_x = 0.0;
    let mut scale = 0.0;
    let mut xp = 1.0;
    let mut dxp = 0.0;
    for (jj, row) in table.iter().enumerate() {
        let mut c = 0.0;
        let mut dc = 0.0;
        let mut abs_c = 0.0;
        for coeff in row.iter().rev() {
            dc = dc * b + c;
            c = c * b + coeff;
            abs_c = abs_c * b.abs() + coeff.abs();
        }
        value += c * xp;
        d_b += dc * xp;
        d_x += c * dxp;
        scale += abs_c * xp.abs();
        dxp = dxp * x + xp;
        xp *= x;
        let _ = jj;
    }
    (value, d_b, d_x, scale)
}

/// `(value, d/db, d/dlambda)` of a spectral polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QEval {
    pub value: f64,
    pub d_b: f64,
    pub d_lambda: f64,
    /// Sum of absolute values of the monomials; the natural error scale.
    pub scale: f64,
}

impl SpectralPolynomial {
    fn from_big_lambda(j: usize, big_lambda: BiPoly) -> Self {
        let shift = BiPoly::new(vec![IntPoly::monomial(BigInt::from(1), 2), IntPoly::from_i64s(&[1])]);
        let lambda = big_lambda.compose(&shift);
        Self {
            j,
            big_lambda_f64: float_table(&big_lambda),
            lambda_f64: float_table(&lambda),
            big_lambda,
            lambda,
        }
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Outer variable `Lambda`.
    pub fn big_lambda_poly(&self) -> &BiPoly {
        &self.big_lambda
    }

    /// Outer variable `lambda`.
    pub fn lambda_poly(&self) -> &BiPoly {
        &self.lambda
    }

    /// Map `(i, j) -> coefficient of b^i lambda^j`.
    pub fn terms(&self) -> BTreeMap<(usize, usize), BigInt> {
        table_terms(&self.lambda)
    }

    /// Map `(i, j) -> coefficient of b^i Lambda^j`.
    pub fn big_lambda_terms(&self) -> BTreeMap<(usize, usize), BigInt> {
        table_terms(&self.big_lambda)
    }

    pub fn degree_in_lambda(&self) -> usize {
        self.lambda.degree().unwrap_or(0)
    }

    /// `Q(b, .)` as a univariate polynomial in `Lambda` at a rational `b`.
    pub fn specialize_big_lambda(&self, b: &BigRational) -> RatPoly {
        RatPoly::new(self.big_lambda.coeffs().iter().map(|c| c.eval_rat(b)).collect())
    }

    /// `Q(b, .)` as a univariate polynomial in `lambda` at a rational `b`.
    pub fn specialize_lambda(&self, b: &BigRational) -> RatPoly {
        RatPoly::new(self.lambda.coeffs().iter().map(|c| c.eval_rat(b)).collect())
    }

    /// Floating evaluation in `(b, lambda)`.
    pub fn eval(&self, b: f64, lambda: f64) -> QEval {
        let (value, d_b, d_lambda, scale) = eval_table(&self.lambda_f64, b, lambda);
        QEval {
            value,
            d_b,
            d_lambda,
            scale,
        }
    }

    /// Floating evaluation in `(b, Lambda)`; `d_lambda` is the `Lambda` partial
    /// (equal to the `lambda` partial at fixed `b`).
    pub fn eval_big(&self, b: f64, big_lambda: f64) -> QEval {
        let (value, d_b, d_lambda, scale) = eval_table(&self.big_lambda_f64, b, big_lambda);
        QEval {
            value,
            d_b,
            d_lambda,
            scale,
        }
    }

    /// Exact evaluation in `(b, lambda)`: `(value, d/db, d/dlambda)`.
    pub fn eval_exact(&self, b: &BigRational, lambda: &BigRational) -> (BigRational, BigRational, BigRational) {
        let mut value = BigRational::zero();
        let mut d_b = BigRational::zero();
        let mut d_l = BigRational::zero();
        let rows = self.lambda.coeffs();
        for (jj, row) in rows.iter().enumerate().rev() {
            let _ = jj;
            let r = row.to_rat();
            d_l = d_l * lambda + &value;
            value = value * lambda + r.eval(b);
            d_b = d_b * lambda + r.derivative().eval(b);
        }
        (value, d_b, d_l)
    }

    /// JSON form with coefficients as decimal strings, terms sorted by
    /// `(j, i)` descending.
    pub fn to_json(&self) -> SpectralPolynomialJson {
        let mut terms: Vec<(usize, usize, String)> = self
            .terms()
            .into_iter()
            .map(|((i, j), c)| (i, j, c.to_string()))
            .collect();
        terms.sort_by_key(|t| std::cmp::Reverse((t.1, t.0)));
        SpectralPolynomialJson {
            j: self.j,
            vars: vec!["b".into(), "lambda".into()],
            terms,
        }
    }

    /// Rebuilds from JSON, re-deriving the `Lambda` table.
    pub fn from_json(json: &SpectralPolynomialJson) -> Result<Self> {
        let deg = json.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); deg + 1];
        for (i, j, c) in &json.terms {
            let c: BigInt = c
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {c}")))?;
            rows[*j].insert(*i, c);
        }
        let lambda = BiPoly::new(
            rows.into_iter()
                .map(|row| {
                    let d = row.keys().max().copied().unwrap_or(0);
                    let mut v = vec![BigInt::zero(); d + 1];
                    for (i, c) in row {
                        v[i] = c;
                    }
                    IntPoly::new(v)
                })
                .collect(),
        );
        let unshift = BiPoly::new(vec![-IntPoly::monomial(BigInt::from(1), 2), IntPoly::from_i64s(&[1])]);
        let big_lambda = lambda.compose(&unshift);
        let out = Self::from_big_lambda(json.j, big_lambda);
        if out.lambda != lambda {
            return Err(Error::InvalidInput("inconsistent spectral polynomial".into()));
        }
        Ok(out)
    }

    /// Convenience: exact `f64` of the leading `lambda` coefficient.
    pub fn is_monic_in_lambda(&self) -> bool {
        self.lambda.leading().is_some_and(|c| *c == IntPoly::from_i64s(&[1]))
    }

    pub fn rational_b(b: f64) -> BigRational {
        rational_from_f64(b)
    }
}

fn table_terms(p: &BiPoly) -> BTreeMap<(usize, usize), BigInt> {
    let mut out = BTreeMap::new();
    for (j, row) in p.coeffs().iter().enumerate() {
        for (i, c) in row.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.insert((i, j), c.clone());
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPolynomialJson {
    #[serde(rename = "J")]
    pub j: usize,
    pub vars: Vec<String>,
    pub terms: Vec<(usize, usize, String)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_nonpositive_j() {
        assert!(matches!(build_recurrence(0), Err(Error::InvalidJ(0))));
        assert!(matches!(build_recurrence(-3), Err(Error::InvalidJ(-3))));
    }

    #[test]
    fn small_recurrence_matrices() {
        let m1 = QesSystem::new(1).unwrap().matrix_f64(3.0);
        assert_eq!(m1, DMatrix::from_row_slice(1, 1, &[0.0]));
        let b = 1.5;
        let m2 = QesSystem::new(2).unwrap().matrix_f64(b);
        assert_eq!(m2, DMatrix::from_row_slice(2, 2, &[0.0, 2.0 * b, 2.0, 0.0]));
        let m3 = QesSystem::new(3).unwrap().matrix_f64(b);
        assert_eq!(
            m3,
            DMatrix::from_row_slice(3, 3, &[0.0, 2.0 * b, -2.0, 4.0, 0.0, 4.0 * b, 0.0, 2.0, 0.0])
        );
    }

    #[test]
    fn three_bands() {
        for j in 3..10 {
            assert_eq!(QesSystem::new(j).unwrap().band_offsets(), vec![-1, 1, 2]);
        }
    }

    #[test]
    fn eval_examples() {
        let q1 = spectral_polynomial(1).unwrap();
        let e = q1.eval(2.0, -4.0);
        assert_eq!((e.value, e.d_b, e.d_lambda), (0.0, 4.0, 1.0));
        let q2 = spectral_polynomial(2).unwrap();
        assert_eq!(q2.eval(0.0, 0.0).value, 0.0);
        let q3 = spectral_polynomial(3).unwrap();
        let (v, _, dl) = q3.eval_exact(&rat(3, 4), &rat(23, 16));
        assert!(v.is_zero() && dl.is_zero());
    }

    #[test]
    fn eigenvector_examples() {
        let s1 = QesSystem::new(1).unwrap();
        assert_eq!(eigenvector_at(&s1, 2.0, -4.0).unwrap().coeffs, vec![1.0]);
        let s2 = QesSystem::new(2).unwrap();
        assert_eq!(eigenvector_at(&s2, 1.0, 1.0).unwrap().coeffs, vec![1.0, 1.0]);
        let s3 = QesSystem::new(3).unwrap();
        let a = eigenvector_exact(&s3, &rat(3, 4), &rat(23, 16)).unwrap();
        assert_eq!(a, vec![rat(-1, 4), rat(1, 1), rat(1, 1)]);
        assert!(matches!(
            eigenvector_at(&s3, 3.0 / 4.0, 0.0),
            Err(Error::NotOnLocus { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let s2 = QesSystem::new(2).unwrap();
        assert_eq!(eigenfunction_residual(&s2, 1.0, 1.0, &[1.0, 1.0]), 0.0);
        let s1 = QesSystem::new(1).unwrap();
        assert_eq!(eigenfunction_residual(&s1, 5.0, -25.0, &[1.0]), 0.0);
        let s3 = QesSystem::new(3).unwrap();
        let a = [rat(-1, 4), rat(1, 1), rat(1, 1)];
        assert!(eigenfunction_residual_exact(&s3, &rat(3, 4), &rat(23, 16), &a).is_zero());
        assert!(!eigenfunction_residual_exact(&s3, &rat(3, 4), &rat(1, 1), &a).is_zero());
        // p = z^2 - 2z + 5/4 at b = 3/4, Lambda = -4, then off the locus.
        let p = [1.25, -2.0, 1.0];
        assert_eq!(eigenfunction_residual_relative(&s3, 0.75, -4.5625, &p), 0.0);
        let off = eigenfunction_residual_relative(&s3, 0.75, -4.5, &p);
        assert!((off - eigenfunction_residual(&s3, 0.75, -4.5, &p) / 7.875).abs() < 1e-15);
        assert!(off > 0.0);
    }

    #[test]
    fn physics_convention() {
        assert_eq!(to_physics_convention(2.0, -4.0), (2.0, 4.0));
        assert_eq!(to_physics_convention(0.0, 0.0), (0.0, -0.0));
        assert_eq!(to_physics_convention(1.0, 1.0), (1.0, -1.0));
    }

    #[test]
    fn resource_cap() {
        assert!(matches!(
            spectral_polynomial_capped(5, 4),
            Err(Error::ResourceLimit { j: 5, cap: 4 })
        ));
    }

    #[test]
    fn json_layout() {
        let q1 = spectral_polynomial(1).unwrap().to_json();
        assert_eq!(
            serde_json::to_string(&q1).unwrap(),
            r#"{"J":1,"vars":["b","lambda"],"terms":[[0,1,"1"],[2,0,"1"]]}"#
        );
        let q4 = spectral_polynomial(4).unwrap();
        assert_eq!(SpectralPolynomial::from_json(&q4.to_json()).unwrap(), q4);
    }
}
