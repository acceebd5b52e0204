//! Dense univariate polynomials over exact rings, plus the two determinant
//! routines the spectral polynomial and its discriminant are built from.
//!
//! Bivariate polynomials are nested: `Poly<IntPoly>` is a polynomial in the
//! outer variable whose coefficients are integer polynomials in the inner
//! one.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact ring element usable as a polynomial coefficient.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl<T: Coeff> Coeff for Poly<T> {
    fn from_i64(v: i64) -> Self {
        Poly::constant(T::from_i64(v))
    }
}

/// Exact division in an integral domain; `None` when the quotient does not exist.
pub trait ExactDiv: Sized {
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

impl ExactDiv for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

/// Polynomial with coefficients stored in ascending degree order, without
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;
/// Polynomial in an outer variable with integer-polynomial coefficients.
pub type BiPoly = Poly<IntPoly>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out * self.clone();
        }
        out
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * inner.clone() + Self::constant(c.clone()))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }
}

impl<T: Coeff> Zero for Poly<T> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Coeff> One for Poly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Coeff> Add for Poly<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<T: Coeff> Neg for Poly<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Coeff> Sub for Poly<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Coeff> Mul for Poly<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl ExactDiv for IntPoly {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let d = rhs.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = rhs.leading()?.clone();
        let mut rem = self.coeffs.clone();
        let n = self.degree()?;
        if n < d {
            return None;
        }
        let mut quot = vec![BigInt::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let top = rem[k + d].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.div_exact(&lead)?;
            for (j, c) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &q * c;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }
}

impl IntPoly {
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        self.to_rat().eval(x)
    }
}

impl RatPoly {
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Euclidean division over the rationals.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let d = rhs.degree().expect("division by the zero polynomial");
        let lead = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n < d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = &rem[k + d] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &q * c;
            }
            quot[k] = q;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic version (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Divide by the absolute value of the leading coefficient; preserves signs.
    pub fn sign_normalized(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.abs().recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Largest squarefree divisor, made monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sign of the polynomial at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Characteristic polynomial `det(x I - A)` by the division-free Berkowitz
/// algorithm. Returns coefficients in ascending degree order (monic, length n+1).
pub fn berkowitz_charpoly<T: Coeff>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    if n == 0 {
        return vec![T::one()];
    }
    // `v` holds the characteristic polynomial of the leading r x r block,
    // highest degree first.
    let mut v = vec![T::one(), -a[0][0].clone()];
    for r in 1..n {
        // q = [1, -a_rr, -R C, -R S C, ..., -R S^{r-1} C]
        let mut q = Vec::with_capacity(r + 2);
        q.push(T::one());
        q.push(-a[r][r].clone());
        let mut sc: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(T::zero(), |acc, j| acc + a[r][j].clone() * sc[j].clone());
            q.push(-rc);
            sc = (0..r)
                .map(|i| (0..r).fold(T::zero(), |acc, j| acc + a[i][j].clone() * sc[j].clone()))
                .collect();
        }
        // Lower-triangular Toeplitz (r+2) x (r+1) times v.
        let next: Vec<T> = (0..r + 2)
            .map(|i| (0..=r.min(i)).fold(T::zero(), |acc, j| acc + q[i - j].clone() * v[j].clone()))
            .collect();
        v = next;
    }
    v.reverse();
    v
}

/// Determinant by fraction-free Gaussian elimination (Bareiss), with row
/// pivoting on zero pivots.
pub fn bareiss_det<T: Coeff + ExactDiv>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    if n == 0 {
        return T::one();
    }
    let mut m: Vec<Vec<T>> = matrix.to_vec();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.div_exact(&prev).expect("Bareiss step must divide exactly");
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Sylvester matrix of two polynomials with coefficients in `T`.
pub fn sylvester_matrix<T: Coeff>(p: &Poly<T>, q: &Poly<T>) -> Vec<Vec<T>> {
    let dp = p.degree().unwrap_or(0);
    let dq = q.degree().unwrap_or(0);
    let size = dp + dq;
    let mut rows = Vec::with_capacity(size);
    for r in 0..dq {
        let mut row = vec![T::zero(); size];
        for (j, c) in p.coeffs().iter().rev().enumerate() {
            row[r + j] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..dp {
        let mut row = vec![T::zero(); size];
        for (j, c) in q.coeffs().iter().rev().enumerate() {
            row[r + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant in the outer variable of two bivariate polynomials.
pub fn resultant(p: &BiPoly, q: &BiPoly) -> IntPoly {
    match (p.degree(), q.degree()) {
        (None, _) | (_, None) => IntPoly::zero(),
        (Some(0), Some(dq)) => p.coeff(0).pow(dq),
        (Some(dp), Some(0)) => q.coeff(0).pow(dp),
        _ => bareiss_det(&sylvester_matrix(p, q)),
    }
}

/// Exact conversion of a finite double to a rational.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn laplace<T: Coeff>(m: &[Vec<T>]) -> T {
        let n = m.len();
        if n == 0 {
            return T::one();
        }
        let mut acc = T::zero();
        for col in 0..n {
            let minor: Vec<Vec<T>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = m[0][col].clone() * laplace(&minor);
            acc = if col % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn arithmetic_and_trimming() {
        let p = ip(&[1, 2, 3]);
        let q = ip(&[-1, -2, -3]);
        assert!((p.clone() + q).is_zero());
        assert_eq!((ip(&[1, 1]) * ip(&[-1, 1])), ip(&[-1, 0, 1]));
        assert_eq!(p.derivative(), ip(&[2, 6]));
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(17));
        assert_eq!(ip(&[0, 1]).compose(&ip(&[3, 0, 1])), ip(&[3, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = ip(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&ip(&[1, 1])), Some(ip(&[-1, 1])));
        assert_eq!(a.div_exact(&ip(&[2, 1])), None);
    }

    #[test]
    fn berkowitz_matches_laplace_on_integer_matrix() {
        let a: Vec<Vec<BigInt>> = [[2, -1, 0, 3], [1, 0, 4, -2], [0, 5, -3, 1], [7, 0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let cp = berkowitz_charpoly(&a);
        // det(xI - A) evaluated at several integers via Laplace
        for x in -3..=3 {
            let xi: Vec<Vec<BigInt>> = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let d = if i == j { BigInt::from(x) } else { BigInt::zero() };
                            d - a[i][j].clone()
                        })
                        .collect()
                })
                .collect();
            let expected = laplace(&xi);
            let got = IntPoly::new(cp.clone()).eval(&BigInt::from(x));
            assert_eq!(got, expected, "x = {x}");
        }
    }

    #[test]
    fn bareiss_matches_laplace_over_polynomials() {
        let m = vec![
            vec![ip(&[0, 1]), ip(&[2]), ip(&[1, 1])],
            vec![ip(&[3]), ip(&[0, 0, 1]), ip(&[-1])],
            vec![ip(&[1, -1]), ip(&[0]), ip(&[5, 2])],
        ];
        assert_eq!(bareiss_det(&m), laplace(&m));
        let with_zero_pivot = vec![vec![ip(&[0]), ip(&[1])], vec![ip(&[1]), ip(&[0, 1])]];
        assert_eq!(bareiss_det(&with_zero_pivot), ip(&[-1]));
    }

    #[test]
    fn resultant_of_quadratic_and_derivative() {
        // Lambda^2 - 4b and 2 Lambda: Res = 4 * (-4b) ... up to sign the discriminant 16b
        let q = BiPoly::new(vec![ip(&[0, -4]), ip(&[0]), ip(&[1])]);
        let r = resultant(&q, &q.derivative());
        assert_eq!(r, ip(&[0, -16]));
    }

    #[test]
    fn rational_gcd_and_squarefree() {
        let p = ip(&[-4, 0, 1]).to_rat() * ip(&[-2, 1]).to_rat(); // (x-2)^2 (x+2)
        let sf = p.squarefree_part();
        assert_eq!(sf, ip(&[-4, 0, 1]).to_rat());
        let g = p.gcd(&p.derivative());
        assert_eq!(g, ip(&[-2, 1]).to_rat());
    }
}
