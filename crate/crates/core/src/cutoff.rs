//! Smooth cutoff functions built from the bump `psi(x) = exp(-1/x)`.
//!
//! `eta` is the canonical even time cutoff: identically 1 on `[-1, 1]`,
//! supported on `[-2, 2]`, C-infinity. `rho` is the one-sided spatial cutoff
//! for the boundary operator: 0 on `(-inf, -2]`, 1 on `[0, inf)`.

/// `exp(-1/x)` for `x > 0`, `0` otherwise.
#[inline]
pub fn psi(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step from the same bump: `0` for `x <= 0`, `1` for `x >= 1`,
/// strictly increasing in between.
#[inline]
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = psi(x);
        a / (a + psi(1.0 - x))
    }
}

/// Canonical time cutoff: `eta = 1` on `[-1, 1]`, `supp eta = [-2, 2]`.
#[inline]
pub fn eta(t: f64) -> f64 {
    smooth_step(2.0 - t.abs())
}

/// Rescaled cutoff `eta(t / scale)`.
#[inline]
pub fn eta_scaled(t: f64, scale: f64) -> f64 {
    debug_assert!(scale > 0.0);
    eta(t / scale)
}

/// Spatial cutoff for the boundary integral: supported in `(-2, inf)`,
/// identically 1 on `[0, inf)`.
#[inline]
pub fn rho(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        smooth_step((x + 2.0) / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_defining_properties() {
        for t in [-1.0, -0.5, 0.0, 0.3, 1.0] {
            assert_eq!(eta(t), 1.0);
        }
        for t in [-2.0, -3.0, 2.0, 2.5, 10.0] {
            assert_eq!(eta(t), 0.0);
        }
        let v = eta(1.5);
        assert!(v > 0.0 && v < 1.0, "eta(1.5) = {v}");
    }

    #[test]
    fn eta_transition_is_smooth() {
        // finite-difference derivatives up to order 4 stay bounded across the
        // transition, including the glue points t = 1 and t = 2
        let h = 1e-3;
        for order in 1..=4usize {
            let mut max_d: f64 = 0.0;
            let mut t = 0.5;
            while t < 2.5 {
                // central finite difference of given order
                let mut acc = 0.0;
                for i in 0..=order {
                    let sign = if (order - i) % 2 == 0 { 1.0 } else { -1.0 };
                    let binom = (0..order).fold(1.0, |p, j| p * (order - j) as f64)
                        / ((0..i).fold(1.0, |p, j| p * (i - j) as f64)
                            * (0..order - i).fold(1.0, |p, j| p * (order - i - j) as f64));
                    acc += sign * binom * eta(t + (i as f64 - order as f64 / 2.0) * h);
                }
                max_d = max_d.max((acc / h.powi(order as i32)).abs());
                t += 0.01;
            }
            assert!(max_d < 1e4, "order {order} difference quotient {max_d:.3e}");
        }
    }

    #[test]
    fn rho_defining_properties() {
        for x in [0.0, 0.1, 1.0, 100.0] {
            assert_eq!(rho(x), 1.0);
        }
        for x in [-2.0, -2.5, -10.0] {
            assert_eq!(rho(x), 0.0);
        }
        for x in [-1.5, -1.0, -0.5] {
            let v = rho(x);
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(rho(-1.0) > 0.0 && rho(-1.0) < 1.0);
    }

    #[test]
    fn eta_scaled_support() {
        assert_eq!(eta_scaled(0.21, 0.1), 0.0);
        assert_eq!(eta_scaled(0.05, 0.1), 1.0);
        assert!(eta_scaled(0.15, 0.1) > 0.0 && eta_scaled(0.15, 0.1) < 1.0);
    }
}
