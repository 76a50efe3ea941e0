//! Resonance structure of the coupled dispersion relations.
//!
//! For coupling `alpha` in `(0,1)` the three-wave modulation function of the
//! system factors through the roots `r1, r2` of
//! `z^2 - (3 alpha/(alpha-1)) z + 3 alpha/(alpha-1)`, so `r1 + r2 = r1 r2 =
//! 3 alpha / (alpha - 1)`. The bilinear estimates split frequency space into
//! windows around `xi = r1 xi_1` and `xi = r2 xi_1` (regions A and B) and
//! their complement C, where the modulation is coercive.

use crate::error::{CoreError, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResonanceRoots {
    pub alpha: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Closed-form roots `r_{1,2} = (3a -+ sqrt(3a(4-a))) / (2(a-1))`, with the
/// sign pattern and Vieta relations asserted.
pub fn resonance_roots(alpha: f64) -> Result<ResonanceRoots> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "coupling alpha = {alpha} outside (0, 1)"
        )));
    }
    let disc = (3.0 * alpha * (4.0 - alpha)).sqrt();
    let denom = 2.0 * (alpha - 1.0);
    let roots = ResonanceRoots {
        alpha,
        r1: (3.0 * alpha - disc) / denom,
        r2: (3.0 * alpha + disc) / denom,
    };
    debug_assert!(roots.r1 > 0.0 && roots.r1 < 1.0);
    debug_assert!(roots.r2 < 0.0);
    Ok(roots)
}

impl ResonanceRoots {
    /// `3 alpha / (alpha - 1)`, the shared value of `r1 + r2` and `r1 r2`.
    pub fn vieta_value(&self) -> f64 {
        3.0 * self.alpha / (self.alpha - 1.0)
    }

    pub fn vieta_residuals(&self) -> (f64, f64) {
        let v = self.vieta_value();
        ((self.r1 + self.r2 - v).abs(), (self.r1 * self.r2 - v).abs())
    }

    /// Largest admissible window ratio: `c` must satisfy
    /// `1 < c < sqrt(|r2 / r1|)` for the regions to stay disjoint.
    pub fn max_window_ratio(&self) -> f64 {
        (self.r2 / self.r1).abs().sqrt()
    }
}

/// Which algebraic identity to evaluate: the self-interaction one (the `v v`
/// product feeding the first equation) or the cross-interaction one (the
/// `u v` product feeding the second).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResonanceIdentity {
    SelfInteraction,
    CrossInteraction,
}

/// `|LHS - RHS|` of the chosen identity at `(xi_1, xi_2, tau_1, tau_2)`, with
/// `xi = xi_1 + xi_2` and `tau = tau_1 + tau_2` imposed internally. The
/// identities are exact, so the residual is pure round-off.
pub fn resonance_identity_residual(
    alpha: f64,
    xi1: f64,
    xi2: f64,
    tau1: f64,
    tau2: f64,
    variant: ResonanceIdentity,
) -> Result<f64> {
    let roots = resonance_roots(alpha)?;
    let xi = xi1 + xi2;
    let tau = tau1 + tau2;
    let res = match variant {
        ResonanceIdentity::SelfInteraction => {
            let lhs = tau - xi.powi(3) - tau1 + alpha * xi1.powi(3) - tau2 + alpha * xi2.powi(3);
            let rhs = (alpha - 1.0) * xi * (xi - roots.r1 * xi1) * (xi - roots.r2 * xi1);
            lhs - rhs
        }
        ResonanceIdentity::CrossInteraction => {
            let lhs = tau1 - xi1.powi(3) + tau2 - alpha * xi2.powi(3) - tau + alpha * xi.powi(3);
            let rhs = (alpha - 1.0)
                * roots.r1
                * roots.r2
                * xi1
                * (xi - xi1 / roots.r1)
                * (xi - xi1 / roots.r2);
            lhs - rhs
        }
    };
    Ok(res.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    A,
    B,
    C,
}

/// Classify `(xi, xi_1)` into the resonance windows
/// `A: c^{-1} |r1 xi_1| < |xi| < c |r1 xi_1|`, `B` (same with `r2`), or the
/// complement `C`. Requires an admissible ratio `1 < c < sqrt(|r2/r1|)`,
/// which makes A and B disjoint.
pub fn region_classify(xi: f64, xi1: f64, alpha: f64, c: f64) -> Result<Region> {
    let roots = resonance_roots(alpha)?;
    let c_max = roots.max_window_ratio();
    if !(c > 1.0 && c < c_max) {
        return Err(CoreError::InvalidArgument(format!(
            "window ratio c = {c} outside (1, {c_max:.6}) required at alpha = {alpha}"
        )));
    }
    let in_window = |r: f64| {
        let target = (r * xi1).abs();
        xi.abs() > target / c && xi.abs() < target * c
    };
    let in_a = in_window(roots.r1);
    let in_b = in_window(roots.r2);
    debug_assert!(!(in_a && in_b), "windows overlap at xi={xi}, xi1={xi1}");
    Ok(if in_a {
        Region::A
    } else if in_b {
        Region::B
    } else {
        Region::C
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn closed_form_roots_at_reference_couplings() {
        let r = resonance_roots(0.5).unwrap();
        assert!((r.r1 - 0.7912878474779199).abs() < 1e-14);
        assert!((r.r2 - -3.79128784747792).abs() < 1e-13);
        let r = resonance_roots(0.899).unwrap();
        assert!((r.r1 - 0.9651180089398647).abs() < 1e-13);
        assert!((r.r2 - -27.668088305969576).abs() < 1e-11);
        let r = resonance_roots(0.25).unwrap();
        // golden ratio pair at alpha = 1/4
        assert!((r.r1 - 0.6180339887498949).abs() < 1e-14);
        assert!((r.r2 - -1.618033988749895).abs() < 1e-14);
    }

    #[test]
    fn vieta_and_sign_pattern_across_coupling_range() {
        for i in 0..1000 {
            let alpha = 0.01 + 0.98 * (i as f64 + 0.5) / 1000.0;
            let r = resonance_roots(alpha).unwrap();
            assert!(r.r1 > 0.0 && r.r1 < 1.0, "r1 = {} at alpha = {alpha}", r.r1);
            assert!(r.r2 < 0.0, "r2 = {} at alpha = {alpha}", r.r2);
            let (v1, v2) = r.vieta_residuals();
            let scale = r.vieta_value().abs().max(1.0);
            assert!(v1 <= 1e-12 * scale && v2 <= 1e-12 * scale, "vieta at alpha = {alpha}");
        }
        assert!(resonance_roots(0.0).is_err());
        assert!(resonance_roots(1.0).is_err());
    }

    #[test]
    fn identity_special_points() {
        for alpha in [0.25, 0.5, 0.899] {
            // xi1 = 1, xi2 = 0: both sides equal alpha - 1 via (1-r1)(1-r2) = 1
            let res = resonance_identity_residual(
                alpha, 1.0, 0.0, 0.3, -0.7, ResonanceIdentity::SelfInteraction,
            )
            .unwrap();
            assert!(res < 1e-13, "self-interaction residual {res:.3e}");
            // xi1 = 0: the cross identity collapses to 0 = 0
            let res = resonance_identity_residual(
                alpha, 0.0, 2.0, 1.0, 0.5, ResonanceIdentity::CrossInteraction,
            )
            .unwrap();
            assert!(res < 1e-13, "cross-interaction residual {res:.3e}");
        }
    }

    #[test]
    fn identity_random_sweep() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for alpha in [0.25, 0.5, 0.899] {
            let mut worst: f64 = 0.0;
            for _ in 0..10_000 {
                let xi1 = 40.0 * (rng.gen::<f64>() - 0.5);
                let xi2 = 40.0 * (rng.gen::<f64>() - 0.5);
                let tau1 = 200.0 * (rng.gen::<f64>() - 0.5);
                let tau2 = 200.0 * (rng.gen::<f64>() - 0.5);
                for variant in
                    [ResonanceIdentity::SelfInteraction, ResonanceIdentity::CrossInteraction]
                {
                    let res = resonance_identity_residual(alpha, xi1, xi2, tau1, tau2, variant)
                        .unwrap();
                    let scale = (xi1 + xi2).abs().powi(3) + xi1.abs().powi(3) + 1.0;
                    worst = worst.max(res / scale);
                }
            }
            assert!(worst < 1e-9, "relative identity residual {worst:.3e} at alpha = {alpha}");
        }
    }

    #[test]
    fn region_examples_at_half() {
        // r1 ~ 0.7913, r2 ~ -3.7913
        assert_eq!(region_classify(0.79, 1.0, 0.5, 1.5).unwrap(), Region::A);
        assert_eq!(region_classify(-3.79, 1.0, 0.5, 1.5).unwrap(), Region::B);
        assert_eq!(region_classify(10.0, 1.0, 0.5, 1.5).unwrap(), Region::C);
        // inadmissible window ratios
        assert!(region_classify(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(region_classify(1.0, 1.0, 0.5, 2.2).is_err());
    }

    proptest! {
        #[test]
        fn windows_disjoint_for_admissible_ratio(
            alpha in 0.05f64..0.95,
            c_frac in 0.05f64..0.95,
            xi1 in -30.0f64..30.0,
        ) {
            let roots = resonance_roots(alpha).unwrap();
            let c = 1.0 + c_frac * (roots.max_window_ratio() - 1.0);
            if c <= 1.0 { return Ok(()); }
            // fine sweep in xi: classification never lands in both windows
            for i in 0..400 {
                let xi = -40.0 + 80.0 * (i as f64) / 399.0;
                let target1 = (roots.r1 * xi1).abs();
                let target2 = (roots.r2 * xi1).abs();
                let in_a = xi.abs() > target1 / c && xi.abs() < target1 * c;
                let in_b = xi.abs() > target2 / c && xi.abs() < target2 * c;
                prop_assert!(!(in_a && in_b));
                // classify agrees with the window definitions
                let region = region_classify(xi, xi1, alpha, c).unwrap();
                let expect = if in_a { Region::A } else if in_b { Region::B } else { Region::C };
                prop_assert_eq!(region, expect);
            }
        }
    }
}
