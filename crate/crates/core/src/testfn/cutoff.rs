//! The two fixed cutoff profiles and their analytic derivatives.
//!
//! * `ξ` is a smooth radial step: `1` on `|s| <= 1`, `0` on `|s| >= 2`, and
//!   `h(2-|s|) / (h(2-|s|) + h(|s|-1))` in between with `h(y) = exp(-1/y)`.
//! * `ϑ(t) = exp(-1/(t(1-t)))` on `(0, 1)` and `0` elsewhere.
//!
//! Both are `C^∞`. Besides plain values and derivatives, the profiles are
//! available as logarithmic ratios `(f, f'/f, f''/f)`, which stay finite up
//! to the edge of the support. Powers such as `ξ^k` and their derivatives are
//! assembled from those ratios without forming `0 · ∞`.

use serde::{Deserialize, Serialize};

/// A profile value with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Profile {
    const ZERO: Profile = Profile {
        value: 0.0,
        d1: 0.0,
        d2: 0.0,
    };
}

/// `(f, f'/f, f''/f)` at a point where `f > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub value: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Ratios {
    fn to_profile(self) -> Profile {
        Profile {
            value: self.value,
            d1: self.value * self.r1,
            d2: self.value * self.r2,
        }
    }

    /// Ratios of the `k`-th power: `(f^k, k f'/f, k(k-1)(f'/f)^2 + k f''/f)`.
    pub fn pow(self, k: u32) -> Ratios {
        let k = k as f64;
        Ratios {
            value: self.value.powf(k),
            r1: k * self.r1,
            r2: k * (k - 1.0) * self.r1 * self.r1 + k * self.r2,
        }
    }
}

// logistic 1/(1 + exp(x)), stable for large |x|
fn logistic_neg(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Ratios of the spatial cutoff at `|s|`, or `None` where `ξ = 0`.
///
/// For negative `s` the first ratio changes sign.
pub fn xi_ratios(s: f64) -> Option<Ratios> {
    let x = s.abs();
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    if x <= 1.0 {
        return Some(Ratios {
            value: 1.0,
            r1: 0.0,
            r2: 0.0,
        });
    }
    if x >= 2.0 {
        return None;
    }
    let u = 2.0 - x;
    let w = x - 1.0;
    // ln(A/B) with A = h(u), B = h(w)
    let log_ab = 1.0 / w - 1.0 / u;
    let alpha = logistic_neg(-log_ab); // A / (A + B)
    let beta = logistic_neg(log_ab); // B / (A + B)
    if alpha == 0.0 {
        return None;
    }
    let la1 = -1.0 / (u * u);
    let la2 = (1.0 - 2.0 * u) / u.powi(4);
    let lb1 = 1.0 / (w * w);
    let lb2 = (1.0 - 2.0 * w) / w.powi(4);
    let diff1 = la1 - lb1;
    let r1 = beta * diff1;
    let s1 = alpha * la1 + beta * lb1;
    let r2 = beta * (la2 - lb2) - 2.0 * beta * diff1 * s1;
    Some(Ratios {
        value: alpha,
        r1: sign * r1,
        r2,
    })
}

/// Ratios of the temporal cutoff, or `None` outside `(0, 1)` or where `ϑ`
/// underflows.
pub fn vartheta_ratios(t: f64) -> Option<Ratios> {
    if !(t > 0.0 && t < 1.0) {
        return None;
    }
    let g = t * (1.0 - t);
    let value = (-1.0 / g).exp();
    if value == 0.0 {
        return None;
    }
    let g1 = 1.0 - 2.0 * t;
    let g2 = -2.0;
    let r1 = g1 / (g * g);
    let r2 = g1 * g1 / g.powi(4) + g2 / (g * g) - 2.0 * g1 * g1 / g.powi(3);
    Some(Ratios { value, r1, r2 })
}

/// `ξ(s)` with derivatives.
pub fn xi(s: f64) -> Profile {
    xi_ratios(s).map_or(Profile::ZERO, Ratios::to_profile)
}

/// `ϑ(t)` with derivatives.
pub fn vartheta(t: f64) -> Profile {
    vartheta_ratios(t).map_or(Profile::ZERO, Ratios::to_profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
        ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
    }

    #[test]
    fn plateau_and_support() {
        let p = xi(0.5);
        assert_eq!((p.value, p.d1, p.d2), (1.0, 0.0, 0.0));
        let p = xi(3.0);
        assert_eq!((p.value, p.d1, p.d2), (0.0, 0.0, 0.0));
        assert_eq!(vartheta(-0.1).value, 0.0);
        assert!(vartheta(0.5).value > 0.0);
        assert_eq!(vartheta(1.0).value, 0.0);
    }

    #[test]
    fn xi_is_a_monotone_step() {
        let mut last = 1.0;
        for i in 0..=200 {
            let s = 1.0 + i as f64 / 200.0;
            let v = xi(s).value;
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= last);
            last = v;
        }
        assert!((xi(1.5).value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn xi_is_even() {
        for &s in &[0.3, 1.2, 1.7, 1.99] {
            let (p, m) = (xi(s), xi(-s));
            assert_eq!(p.value, m.value);
            assert_eq!(p.d1, -m.d1);
            assert_eq!(p.d2, m.d2);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for i in 1..40 {
            let s = 1.0 + i as f64 / 40.0;
            let (d1, d2) = fd(|x| xi(x).value, s, 1e-5);
            let p = xi(s);
            let scale = 1.0 + p.d1.abs();
            assert!((p.d1 - d1).abs() < 1e-7 * scale, "xi' at {s}");
            assert!((p.d2 - d2).abs() < 1e-4 * (1.0 + p.d2.abs()), "xi'' at {s}");
        }
        for i in 1..40 {
            let t = i as f64 / 40.0;
            let (d1, d2) = fd(|x| vartheta(x).value, t, 1e-6);
            let p = vartheta(t);
            assert!((p.d1 - d1).abs() < 1e-7 * (p.d1.abs() + 1e-6), "theta' at {t}");
            assert!((p.d2 - d2).abs() < 1e-4 * (p.d2.abs() + 1e-4), "theta'' at {t}");
        }
    }

    #[test]
    fn derivatives_vanish_at_transition_edges() {
        // C^2 matching with the constant pieces on both sides.
        for &s in &[1.0 + 1e-3, 2.0 - 1e-3] {
            let p = xi(s);
            assert!(p.d1.abs() < 1e-100 && p.d2.abs() < 1e-100, "{s}: {p:?}");
        }
    }

    #[test]
    fn powers_follow_chain_rule() {
        let s = 1.37;
        let k = 7;
        let (d1, d2) = fd(|x| xi(x).value.powi(k as i32), s, 1e-5);
        let r = xi_ratios(s).unwrap().pow(k);
        assert!((r.value * r.r1 - d1).abs() < 1e-8);
        assert!((r.value * r.r2 - d2).abs() < 1e-5);
    }
}
