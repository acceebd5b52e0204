//! Root machinery: exact real roots of `Q_J(b, .)`, complex zeros of
//! eigen-polynomials, real/non-real zero classification, and the
//! discriminant locus where fibers have multiple roots.

pub mod aberth;
pub mod sturm;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{rational_from_f64, resultant, IntPoly, Poly, RatPoly};
use crate::qes::SpectralPolynomial;

pub use aberth::{complex_roots, complex_roots_with, RootOptions};
pub use sturm::{IsolatingInterval, RealRoot, SturmSequence};

/// Default relative threshold below which a zero counts as real.
pub const EPS_REAL: f64 = 1e-6;

/// Working precision in bits for exact root refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Precision {
    pub bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self { bits: 53 }
    }
}

impl Precision {
    pub fn doubled(self) -> Self {
        Self { bits: self.bits * 2 }
    }

    /// Reads `QES_PRECISION` if set, otherwise returns `self`.
    pub fn from_env_or(self) -> Result<Self> {
        match std::env::var("QES_PRECISION") {
            Ok(v) => v
                .trim()
                .parse()
                .map(|bits| Self { bits })
                .map_err(|_| Error::InvalidInput(format!("QES_PRECISION must be a bit count, got {v:?}"))),
            Err(_) => Ok(self),
        }
    }
}

/// Real `lambda` roots of `Q(b, .)` at a rational `b`, with multiplicity.
pub fn real_lambda_roots(q: &SpectralPolynomial, b: &BigRational, precision: Precision) -> Vec<RealRoot> {
    let b2 = b * b;
    real_big_lambda_roots(q, b, precision)
        .into_iter()
        .map(|r| {
            let lo = &r.interval.lo - &b2;
            let hi = &r.interval.hi - &b2;
            let interval = IsolatingInterval {
                lo,
                hi,
                certificate: r.interval.certificate,
            };
            RealRoot {
                value: interval.midpoint().to_f64().unwrap_or(f64::NAN),
                multiplicity: r.multiplicity,
                interval,
            }
        })
        .collect()
}

/// Real `Lambda = lambda + b^2` roots at a rational `b`.
pub fn real_big_lambda_roots(q: &SpectralPolynomial, b: &BigRational, precision: Precision) -> Vec<RealRoot> {
    sturm::real_roots(&q.specialize_big_lambda(b), precision.bits.max(53))
}

/// Complex zeros of an exact rational polynomial, accurate for tight clusters.
///
/// Rough zeros from the rounded coefficients are grouped by real part. Each
/// group is then recomputed from the polynomial shifted exactly to the group
/// center, where the rounded coefficients no longer hide the cluster.
pub fn complex_roots_exact(p: &RatPoly, opts: RootOptions) -> Result<Vec<Complex64>> {
    let rough = complex_roots_with(&p.to_f64_coeffs(), opts)?;
    if rough.len() < 2 {
        return Ok(rough);
    }
    let reach = rough.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap = (0.1 * reach).max(1.0);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in &rough {
        match groups.last_mut() {
            Some(g) if z.re - g.last().map_or(z.re, |w| w.re) <= gap => g.push(*z),
            _ => groups.push(vec![*z]),
        }
    }
    let mut out = Vec::with_capacity(rough.len());
    for (gi, g) in groups.iter().enumerate() {
        let center = g.iter().map(|z| z.re).sum::<f64>() / g.len() as f64;
        let c = rational_from_f64(center);
        let shifted = p
            .compose(&Poly::new(vec![c, BigRational::from_integer(1.into())]))
            .monic()
            .to_f64_coeffs();
        let mut w: Vec<Complex64> = Vec::with_capacity(rough.len());
        let mut active = Vec::with_capacity(rough.len());
        for (gj, h) in groups.iter().enumerate() {
            for z in h {
                w.push(z - center);
                active.push(gi == gj);
            }
        }
        aberth::refine_subset(&shifted, &mut w, &active, opts)?;
        out.extend(w.iter().zip(&active).filter(|(_, &a)| a).map(|(w, _)| w + center));
    }
    let mut out = aberth::pair_conjugates(out, opts);
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// Real/non-real split of the zeros of an eigen-polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroClassification {
    #[serde(skip)]
    pub zeros: Vec<Complex64>,
    pub n_real: usize,
    /// Number of conjugate pairs.
    pub m: usize,
}

impl ZeroClassification {
    pub fn n(&self) -> usize {
        self.zeros.len()
    }
}

pub fn classify_zeros(zeros: &[Complex64], scale: f64) -> Result<ZeroClassification> {
    classify_zeros_with(zeros, scale, EPS_REAL)
}

/// A zero is real iff `|Im z| <= eps * (scale + |z|)`. Zeros within a decade
/// of the threshold on either side are ambiguous.
pub fn classify_zeros_with(zeros: &[Complex64], scale: f64, eps: f64) -> Result<ZeroClassification> {
    let mut n_real = 0;
    for z in zeros {
        let ratio = z.im.abs() / (eps * (scale + z.norm()));
        if ratio > 0.1 && ratio < 10.0 {
            return Err(Error::AmbiguousClassification { re: z.re, im: z.im });
        }
        if ratio <= 0.1 {
            n_real += 1;
        }
    }
    let n = zeros.len();
    if !(n - n_real).is_multiple_of(2) {
        let worst = zeros
            .iter()
            .filter(|z| z.im.abs() > eps * (scale + z.norm()))
            .min_by(|a, b| a.im.abs().total_cmp(&b.im.abs()))
            .copied()
            .unwrap_or_default();
        return Err(Error::AmbiguousClassification {
            re: worst.re,
            im: worst.im,
        });
    }
    Ok(ZeroClassification {
        zeros: zeros.to_vec(),
        n_real,
        m: (n - n_real) / 2,
    })
}

/// `Res_Lambda(Q, dQ/dLambda)` as a polynomial in `b`.
pub fn discriminant_poly(q: &SpectralPolynomial) -> IntPoly {
    let p = q.big_lambda_poly();
    resultant(p, &p.derivative())
}

/// Real `b` in `[lo, hi]` where `Q(b, .)` has a multiple root.
pub fn discriminant_b_values(q: &SpectralPolynomial, window: (f64, f64)) -> Vec<RealRoot> {
    let d = discriminant_poly(q);
    if d.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    sturm::real_roots(&d.to_rat(), 64)
        .into_iter()
        .filter(|r| r.value >= window.0 && r.value <= window.1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qes::spectral_polynomial;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn q2_fibers() {
        let q2 = spectral_polynomial(2).unwrap();
        let r = real_lambda_roots(&q2, &rat(4, 1), Precision::default());
        let v: Vec<f64> = r.iter().map(|r| r.value).collect();
        assert_eq!(v, vec![-20.0, -12.0]);
        assert!(real_lambda_roots(&q2, &rat(-1, 1), Precision::default()).is_empty());
    }

    #[test]
    fn q3_double_root_fiber() {
        let q3 = spectral_polynomial(3).unwrap();
        let r = real_lambda_roots(&q3, &rat(3, 4), Precision::default());
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].exact(), r[0].multiplicity), (rat(-73, 16), 1));
        assert_eq!((r[1].exact(), r[1].multiplicity), (rat(23, 16), 2));
    }

    #[test]
    fn classification_examples() {
        let c = classify_zeros(&[Complex64::new(-1.0, 0.0)], 1.0).unwrap();
        assert_eq!((c.n_real, c.m), (1, 0));
        let c = classify_zeros(&[Complex64::new(1.0, 0.5), Complex64::new(1.0, -0.5)], 1.0).unwrap();
        assert_eq!((c.n_real, c.m), (0, 1));
        let s = 2f64.sqrt();
        let c = classify_zeros(
            &[
                Complex64::new((-1.0 + s) / 2.0, 0.0),
                Complex64::new((-1.0 - s) / 2.0, 0.0),
            ],
            1.0,
        )
        .unwrap();
        assert_eq!((c.n_real, c.m), (2, 0));
        assert_eq!(classify_zeros(&[], 1.0).unwrap().m, 0);
    }

    #[test]
    fn ambiguity_band_is_loud() {
        let z = [Complex64::new(0.5, 2e-6), Complex64::new(0.5, -2e-6)];
        assert!(matches!(
            classify_zeros(&z, 1.0),
            Err(Error::AmbiguousClassification { .. })
        ));
    }

    #[test]
    fn clustered_zeros_resolve_after_shift() {
        // Four real zeros near -20 and a conjugate pair with imaginary part 0.01.
        let lin = |r: f64| Poly::new(vec![rational_from_f64(r), BigRational::from_integer(1.into())]);
        let pair = Poly::new(vec![
            rational_from_f64(20.05 * 20.05) + rat(1, 10000),
            rational_from_f64(40.1),
            BigRational::from_integer(1.into()),
        ]);
        let p = lin(20.2) * lin(19.9) * lin(19.7) * lin(20.4) * pair;
        let z = complex_roots_exact(&p, RootOptions::default()).unwrap();
        let c = classify_zeros(&z, 1.0).unwrap();
        assert_eq!((c.n_real, c.m), (4, 1));
        let pair_im = z.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!((pair_im - 0.01).abs() < 1e-9);
    }

    #[test]
    fn discriminants() {
        let w = (-100.0, 100.0);
        let d2 = discriminant_b_values(&spectral_polynomial(2).unwrap(), w);
        assert_eq!(d2.iter().map(|r| r.exact()).collect::<Vec<_>>(), vec![rat(0, 1)]);
        let d3 = discriminant_b_values(&spectral_polynomial(3).unwrap(), w);
        assert_eq!(d3.iter().map(|r| r.exact()).collect::<Vec<_>>(), vec![rat(3, 4)]);
        assert!(discriminant_b_values(&spectral_polynomial(1).unwrap(), w).is_empty());
    }

    #[test]
    fn q3_discriminant_polynomial() {
        let d = discriminant_poly(&spectral_polynomial(3).unwrap());
        // Res(Q, Q') = -disc for a monic cubic; disc = 16384 b^3 - 6912
        let expected = IntPoly::from_i64s(&[-6912, 0, 0, 16384]);
        assert!(d == expected || d == -expected);
    }
}
