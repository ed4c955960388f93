//! Sign decisions for the critical-curve comparisons.
//!
//! Every threshold test in the classifier reduces to the sign of a polynomial
//! in `(p, q, a, b)` with integer coefficients. When all four inputs are
//! recognisably rational (a continued-fraction convergent with a modest
//! denominator reproduces the float), the sign is decided in exact arithmetic.
//! Otherwise the float value is compared against a relative band of `1e-12`,
//! and anything inside the band is reported as [`Side::Critical`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Relative width of the float fallback band.
pub const CRITICAL_BAND: f64 = 1e-12;

const MAX_DENOMINATOR: i64 = 1_000_000;

/// Outcome of comparing a quantity against a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Critical,
    Above,
}

/// Best rational reconstruction of `x`, if a convergent with denominator at
/// most one million reproduces it to within a few ulps.
pub fn recover_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let tol = 4.0 * f64::EPSILON * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DENOMINATOR as i128 {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

/// The four real exponents that enter every threshold polynomial.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Exponents {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
}

impl Exponents {
    fn exact(&self) -> Option<[BigRational; 4]> {
        Some([
            recover_rational(self.p)?,
            recover_rational(self.q)?,
            recover_rational(self.a)?,
            recover_rational(self.b)?,
        ])
    }

    /// Sign of `delta - c`, where `delta = (a+2+p(b+2))/(pq-1)`, assuming
    /// `pq > 1`.
    pub fn delta_vs(&self, c: i64) -> Side {
        scaled_sign(self, c)
    }

    /// Sign of `gamma - c`, the exchanged counterpart of [`Self::delta_vs`].
    pub fn gamma_vs(&self, c: i64) -> Side {
        let swapped = Exponents {
            p: self.q,
            q: self.p,
            a: self.b,
            b: self.a,
        };
        scaled_sign(&swapped, c)
    }
}

// sign of a + 2 + p(b + 2) - c(pq - 1)
fn scaled_sign(e: &Exponents, c: i64) -> Side {
    if let Some([p, q, a, b]) = e.exact() {
        let two = BigRational::from_integer(BigInt::from(2));
        let one = BigRational::from_integer(BigInt::from(1));
        let c = BigRational::from_integer(BigInt::from(c));
        let value = &a + &two + &p * (&b + &two) - c * (&p * &q - one);
        return if value.is_zero() {
            Side::Critical
        } else if value.is_positive() {
            Side::Above
        } else {
            Side::Below
        };
    }
    let c = c as f64;
    let terms = [e.a + 2.0, e.p * (e.b + 2.0), -c * e.p * e.q, c];
    let value: f64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
    if value.abs() <= CRITICAL_BAND * scale {
        Side::Critical
    } else if value > 0.0 {
        Side::Above
    } else {
        Side::Below
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn recovers_decimal_inputs() {
        assert_eq!(recover_rational(0.1), Some(ratio(1, 10)));
        assert_eq!(recover_rational(2.999), Some(ratio(2999, 1000)));
        assert_eq!(recover_rational(-1.5), Some(ratio(-3, 2)));
        assert_eq!(recover_rational(3.0), Some(ratio(3, 1)));
        assert_eq!(recover_rational(1.0 / 3.0), Some(ratio(1, 3)));
    }

    #[test]
    fn irrational_inputs_fall_back() {
        assert_eq!(recover_rational(std::f64::consts::PI), None);
        assert_eq!(recover_rational(2f64.sqrt()), None);
        assert_eq!(recover_rational(f64::NAN), None);
    }

    #[test]
    fn critical_curve_is_detected_exactly() {
        // p = q = 3, a = b = 0 gives delta = 1 = N - 2 at N = 3.
        let e = Exponents { p: 3.0, q: 3.0, a: 0.0, b: 0.0 };
        assert_eq!(e.delta_vs(1), Side::Critical);
        assert_eq!(e.delta_vs(0), Side::Above);
        assert_eq!(e.delta_vs(2), Side::Below);

        // p = q = 1.1, a = b = -1.7: delta = 0.3/0.1 = 3 exactly, although
        // the float evaluation is off by rounding.
        let e = Exponents { p: 1.1, q: 1.1, a: -1.7, b: -1.7 };
        assert_eq!(e.delta_vs(3), Side::Critical);
    }

    #[test]
    fn near_critical_irrational_lands_in_band() {
        let s = 3f64.sqrt();
        // delta = (a+2)/(p-1) with p = q, a = b; choose a so that delta = 1
        // at p = sqrt(3) up to rounding.
        let a = s - 3.0;
        let e = Exponents { p: s, q: s, a, b: a };
        assert_eq!(e.delta_vs(1), Side::Critical);
    }
}
