//! Gaussian distribution functions and sine-power integrals.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::quad;

pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail `1 - Φ(x)` without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Standard normal quantile, polished by two Newton steps.
pub fn normal_quantile(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = -SQRT_2 * erfc_inv(2.0 * u);
    for _ in 0..2 {
        let r = if x > 0.0 {
            (1.0 - u) - normal_sf(x)
        } else {
            normal_cdf(x) - u
        };
        let d = normal_pdf(x);
        if d > 0.0 {
            x -= r / d;
        }
    }
    x
}

/// `∫_θ^{π/2} sin^k φ dφ` for `k > -1`.
pub fn sine_power_tail(k: f64, theta: f64) -> f64 {
    if theta >= FRAC_PI_2 {
        return 0.0;
    }
    quad::integrate(|phi| phi.sin().powf(k), theta.max(0.0), FRAC_PI_2, 1e-15, 1e-14)
}

/// `∫₀^{π/2} sin^k x dx` by quadrature.
pub fn sine_power_integral(k: f64) -> f64 {
    sine_power_tail(k, 0.0)
}

pub(crate) fn sqrt_half_pi() -> f64 {
    (0.5 * PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_power_known_values() {
        assert_relative_eq!(sine_power_integral(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(sine_power_integral(4.0), 3.0 * PI / 16.0, max_relative = 1e-13);
        assert_relative_eq!(sine_power_integral(0.0), FRAC_PI_2, max_relative = 1e-13);
        // Wallis / Beta-function form: √π Γ((k+1)/2) / (2 Γ(k/2+1)).
        let k = 0.5;
        let g = statrs::function::gamma::gamma;
        let oracle = PI.sqrt() * g((k + 1.0) / 2.0) / (2.0 * g(k / 2.0 + 1.0));
        assert_relative_eq!(sine_power_integral(k), oracle, max_relative = 1e-11);
    }

    #[test]
    fn normal_quantile_roundtrip() {
        for &u in &[1e-9, 1e-4, 0.1, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
            let x = normal_quantile(u);
            let back = if x > 0.0 { 1.0 - normal_sf(x) } else { normal_cdf(x) };
            assert_relative_eq!(back, u, max_relative = 1e-12);
        }
        assert_eq!(normal_quantile(0.5), 0.0);
    }
}
