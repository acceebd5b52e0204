//! Exact real-root isolation with Sturm sequences over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::poly::RatPoly;

#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<RatPoly>,
}

impl SturmSequence {
    /// Sturm chain of `p`; `p` should be squarefree for counts to be exact.
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.sign_normalized()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d.sign_normalized());
            loop {
                let len = chain.len();
                let (_, r) = chain[len - 2].div_rem(&chain[len - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push((-r).sign_normalized());
            }
        }
        Self { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Sign variations at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    /// Sign variations at `+infinity` (or `-infinity`).
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        count_variations(self.chain.iter().map(|p| {
            let deg = p.degree().unwrap_or(0);
            let lead = p.leading().map(|c| if c.is_positive() { 1 } else { -1 }).unwrap_or(0);
            if positive || deg % 2 == 0 {
                lead
            } else {
                -lead
            }
        }))
    }

    /// Number of distinct roots in `(lo, hi]`.
    pub fn count_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Interval `(lo, hi]` containing exactly one distinct real root; `lo == hi`
/// marks an exactly located root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatingInterval {
    #[serde(serialize_with = "ser_rat")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub hi: BigRational,
    /// Sturm variation counts at `lo` and `hi`; they differ by one.
    pub certificate: (usize, usize),
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl IsolatingInterval {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// A real root with its multiplicity.
#[derive(Clone, Debug, Serialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
    pub interval: IsolatingInterval,
}

impl RealRoot {
    pub fn exact(&self) -> BigRational {
        self.interval.midpoint()
    }
}

/// Power of two strictly exceeding every root's magnitude (Cauchy bound).
pub fn root_bound(p: &RatPoly) -> BigRational {
    let Some(lead) = p.leading() else {
        return BigRational::one();
    };
    let lead = lead.abs();
    let max_ratio = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |acc, r| if r > acc { r } else { acc });
    let bound = max_ratio + BigRational::one();
    let mut pow = BigRational::one();
    while pow <= bound {
        pow *= BigRational::from_integer(BigInt::from(2));
    }
    pow
}

/// Isolates the distinct real roots of `p`.
pub fn isolate(p: &RatPoly) -> Vec<IsolatingInterval> {
    let sqf = p.squarefree_part();
    if sqf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmSequence::new(&sqf);
    let bound = root_bound(&sqf);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((lo, hi)) = stack.pop() {
        let vlo = sturm.variations(&lo);
        let vhi = sturm.variations(&hi);
        let count = vlo.saturating_sub(vhi);
        match count {
            0 => {}
            1 => out.push(IsolatingInterval {
                lo,
                hi,
                certificate: (vlo, vhi),
            }),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Bisects an isolating interval of the squarefree polynomial `sqf` until its
/// width is below `2^-bits * max(1, |root|)`.
pub fn refine(sqf: &RatPoly, interval: &IsolatingInterval, bits: u32) -> IsolatingInterval {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut lo = interval.lo.clone();
    let mut hi = interval.hi.clone();
    if lo == hi {
        return interval.clone();
    }
    if sqf.sign_at(&hi) == 0 {
        return IsolatingInterval {
            lo: hi.clone(),
            hi,
            certificate: interval.certificate,
        };
    }
    // The interval is half open at `lo`, so a root sitting exactly there
    // belongs to a neighbour; use the sign just inside instead.
    let s_lo = match sqf.sign_at(&lo) {
        0 => -sqf.sign_at(&hi),
        s => s,
    };
    let tol_base = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    loop {
        let mag = lo.abs().max(hi.abs()).max(BigRational::one());
        if &hi - &lo <= &tol_base * mag {
            break;
        }
        let mid = (&lo + &hi) / &two;
        let s = sqf.sign_at(&mid);
        if s == 0 {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IsolatingInterval {
        lo,
        hi,
        certificate: interval.certificate,
    }
}

fn multiplicity(p: &RatPoly, interval: &IsolatingInterval) -> usize {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return 1;
    }
    let gs = g.squarefree_part();
    let inside = if interval.lo == interval.hi {
        g.sign_at(&interval.lo) == 0
    } else {
        SturmSequence::new(&gs).count_in(&interval.lo, &interval.hi) > 0
    };
    if inside {
        1 + multiplicity(&g, interval)
    } else {
        1
    }
}

/// All real roots of `p`, ascending, refined to `bits` relative bits.
pub fn real_roots(p: &RatPoly, bits: u32) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sqf = p.squarefree_part();
    isolate(p)
        .into_iter()
        .map(|iv| {
            let refined = refine(&sqf, &iv, bits);
            let mult = multiplicity(p, &refined);
            RealRoot {
                value: refined.midpoint().to_f64().unwrap_or(f64::NAN),
                multiplicity: mult,
                interval: refined,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    #[test]
    fn counts_match_known_roots() {
        // (x - 1)(x + 2)(x - 3)
        let p = IntPoly::from_i64s(&[6, -5, -2, 1]).to_rat();
        let s = SturmSequence::new(&p);
        assert_eq!(s.count_all(), 3);
        let r = real_roots(&p, 60);
        let v: Vec<f64> = r.iter().map(|r| r.value).collect();
        assert_eq!(v.len(), 3);
        for (got, want) in v.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn multiplicities_are_reported() {
        // (x - 2)^2 (x + 4)
        let p = IntPoly::from_i64s(&[16, -12, 0, 1]).to_rat();
        let r = real_roots(&p, 80);
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].value, r[0].multiplicity), (-4.0, 1));
        assert_eq!((r[1].value, r[1].multiplicity), (2.0, 2));
    }

    #[test]
    fn root_at_a_bisection_point_is_not_duplicated() {
        // x (x - 2^-70): the first split lands exactly on the root at 0.
        let tiny = BigRational::new(BigInt::one(), BigInt::one() << 70usize);
        let p = RatPoly::new(vec![BigRational::zero(), -tiny.clone(), BigRational::one()]);
        let r = real_roots(&p, 120);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].exact(), BigRational::zero());
        assert_eq!(r[1].exact(), tiny);
    }

    #[test]
    fn no_real_roots() {
        let p = IntPoly::from_i64s(&[4, 0, 1]).to_rat();
        assert!(real_roots(&p, 53).is_empty());
    }

    #[test]
    fn refinement_reaches_requested_width() {
        let p = IntPoly::from_i64s(&[-2, 0, 1]).to_rat();
        for bits in [53u32, 106] {
            let r = real_roots(&p, bits);
            let w = r[1].interval.width();
            let tol = BigRational::new(BigInt::from(4), BigInt::one() << bits as usize);
            assert!(w <= tol);
            assert!((r[1].value - 2f64.sqrt()).abs() < 1e-15);
        }
    }
}
