//! Closed-form targets for the Rosen, regular and nearest-integer maps.

use crate::cf::Family;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Theoretical constants a run is compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsTarget {
    pub family: String,
    pub k: Option<u32>,
    pub lambda: f64,
    /// Positive root of R² + (2−λ)R − 1 = 0 (Rosen maps only).
    pub r: Option<f64>,
    /// Normalizing constant C of the entropy formula.
    pub c: f64,
    pub lenstra_target: f64,
    /// C·(k−2)π²/(2k). Simulation agrees for k = 3 and even k but not for odd k ≥ 5.
    pub entropy_target: f64,
    /// Slope λC of the Θ distribution on its linear part. Like the entropy, off for odd k ≥ 5.
    pub cdf_slope: f64,
    /// Coefficient κ with solution count ~ κ·t·ln N (Rosen maps only).
    pub count_coefficient: Option<f64>,
}

/// Positive root of R² + (2−λ)R − 1 = 0.
pub fn r_root(lambda: f64) -> f64 {
    let b = 2.0 - lambda;
    (-b + (b * b + 4.0).sqrt()) / 2.0
}

impl ConstantsTarget {
    pub fn rosen(k: u32) -> Self {
        let kf = k as f64;
        let lambda = 2.0 * (PI / kf).cos();
        let r = r_root(lambda);
        let (c, lenstra) = if k.is_multiple_of(2) {
            (1.0 / ((1.0 + (PI / kf).cos()) / (PI / kf).sin()).ln(), lambda / (lambda + 2.0))
        } else {
            (1.0 / (1.0 + r).ln(), r / (r + 1.0))
        };
        let entropy = c * (kf - 2.0) * PI * PI / (2.0 * kf);
        ConstantsTarget {
            family: format!("rosen(k={k})"),
            k: Some(k),
            lambda,
            r: Some(r),
            c,
            lenstra_target: lenstra,
            entropy_target: entropy,
            cdf_slope: lambda * c,
            count_coefficient: Some(4.0 * kf * lambda / ((kf - 2.0) * PI * PI)),
        }
    }

    /// Targets for a family; α-maps other than α ∈ {1, 1/2} have no closed forms here.
    pub fn for_family(f: &Family) -> Option<Self> {
        match f {
            Family::Rosen(r) => Some(Self::rosen(r.k().value())),
            Family::Alpha { num: 1, den: 1, .. } => Some(ConstantsTarget {
                family: "regular".into(),
                k: None,
                lambda: 1.0,
                r: None,
                c: 1.0 / LN_2,
                lenstra_target: 0.5,
                entropy_target: PI * PI / (6.0 * LN_2),
                cdf_slope: 1.0 / LN_2,
                count_coefficient: None,
            }),
            Family::Alpha { num: 1, den: 2, .. } => {
                let mut t = Self::rosen(3);
                t.family = f.tag();
                t.k = None;
                Some(t)
            }
            _ => None,
        }
    }

    /// Asymptotic slope of count/ln N at threshold t.
    pub fn count_slope(&self, t: f64) -> Option<f64> {
        self.count_coefficient.map(|c| c * t)
    }
}

/// Limit distribution of Θ_n for the regular continued fraction.
pub fn bjw_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t <= 0.5 {
        t / LN_2
    } else if t <= 1.0 {
        (1.0 - t + (2.0 * t).ln()) / LN_2
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_values() {
        let t = ConstantsTarget::rosen(3);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((t.r.unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((t.lenstra_target - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((t.entropy_target - PI * PI / (6.0 * golden.ln())).abs() < 1e-12);
        assert!((t.entropy_target - 3.41832).abs() < 1e-5);
        assert!((t.cdf_slope - 2.0781).abs() < 1e-4);
        assert!((t.count_slope(0.25).unwrap() - 0.30396).abs() < 1e-5);
    }

    #[test]
    fn k4_values() {
        let t = ConstantsTarget::rosen(4);
        assert!((t.lenstra_target - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((t.entropy_target - PI * PI / (4.0 * (1.0 + 2f64.sqrt()).ln())).abs() < 1e-12);
        assert!((t.entropy_target - 2.7995).abs() < 1e-4);
    }

    #[test]
    fn slope_chain_consistency() {
        // The Θ-CDF slope equals the counting coefficient times h/2.
        for k in 3..=20 {
            let t = ConstantsTarget::rosen(k);
            let chain = t.count_coefficient.unwrap() * t.entropy_target / 2.0;
            assert!((chain - t.cdf_slope).abs() < 1e-12 * t.cdf_slope, "k={k}");
        }
    }

    #[test]
    fn bjw_values() {
        assert!((bjw_cdf(0.25) - 0.36067).abs() < 1e-5);
        assert!((bjw_cdf(1.0) - 1.0).abs() < 1e-15);
        assert!((bjw_cdf(0.5) - 0.5 / LN_2).abs() < 1e-15);
        let f075 = (0.25 + 1.5f64.ln()) / LN_2;
        assert!((bjw_cdf(0.75) - f075).abs() < 1e-15);
        assert!((f075 - 0.94564).abs() < 1e-5);
    }

    #[test]
    fn regular_targets() {
        let t = ConstantsTarget::for_family(&Family::regular()).unwrap();
        assert_eq!(t.lenstra_target, 0.5);
        assert!(ConstantsTarget::for_family(&Family::alpha(1, 3).unwrap()).is_none());
    }
}
