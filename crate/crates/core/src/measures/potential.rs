//! Log-densities `V` with `e^{-V} dx` a probability measure.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::body::{dot, norm2, ConvexBody, Shape};
use crate::error::{param, Error, Result};
use crate::quad;
use crate::special::LN_SQRT_2PI;

/// Smooth bounded tilt `ψ(x) = slope·x + Σ amp_k sin(freq_k x + phase_k)` for 1D measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tilt {
    pub slope: f64,
    #[serde(default)]
    pub waves: Vec<[f64; 3]>,
}

impl Tilt {
    pub fn value(&self, x: f64) -> f64 {
        self.slope * x + self.waves.iter().map(|[a, w, p]| a * (w * x + p).sin()).sum::<f64>()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.slope + self.waves.iter().map(|[a, w, p]| a * w * (w * x + p).cos()).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `|x - mean|² / (2σ²)`.
    Gaussian { mean: Vec<f64>, sigma: f64 },
    /// `|x|^β` with the Euclidean norm, `β ≥ 1`.
    PowerLaw { dim: usize, beta: f64 },
    /// Product of the one-dimensional Huber potential `x²/2` (|x| ≤ 1), `|x| - 1/2` otherwise.
    Huber { dim: usize },
    /// `½ xᵀAx + ⟨b, x⟩ + κ|x|⁴ + λ Σ x_i⁴` with `A` symmetric positive semidefinite.
    Polynomial {
        quad: Vec<f64>,
        lin: Vec<f64>,
        radial_quartic: f64,
        coord_quartic: f64,
    },
    /// Uniform measure on a convex body.
    UniformBody { body: ConvexBody },
    /// One-dimensional `e^{ψ} · base`, renormalized.
    Tilted { base: Box<Potential>, tilt: Tilt },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct Potential {
    family: Family,
    dim: usize,
    log_normalizer: f64,
}

impl TryFrom<Family> for Potential {
    type Error = Error;
    fn try_from(f: Family) -> Result<Self> {
        Potential::new(f)
    }
}

impl From<Potential> for Family {
    fn from(p: Potential) -> Family {
        p.family
    }
}

fn huber(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        0.5 * x * x
    } else {
        a - 0.5
    }
}

fn huber_prime(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

impl Potential {
    pub fn new(family: Family) -> Result<Self> {
        let dim = match &family {
            Family::Gaussian { mean, sigma } => {
                if mean.is_empty() || !(*sigma > 0.0) {
                    return Err(param("gaussian", "need dim ≥ 1 and sigma > 0"));
                }
                mean.len()
            }
            Family::PowerLaw { dim, beta } => {
                if *dim == 0 || *dim > 3 || !(*beta >= 1.0) {
                    return Err(param("power_law", "need 1 ≤ dim ≤ 3 and beta ≥ 1"));
                }
                *dim
            }
            Family::Huber { dim } => {
                if *dim == 0 {
                    return Err(param("huber", "dim must be ≥ 1"));
                }
                *dim
            }
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic } => {
                let d = lin.len();
                if d == 0 || d > 3 || quad.len() != d * d {
                    return Err(param("polynomial", "need 1 ≤ dim ≤ 3 and a d×d quadratic form"));
                }
                if *radial_quartic < 0.0 || *coord_quartic < 0.0 {
                    return Err(param("polynomial", "quartic coefficients must be ≥ 0"));
                }
                if !is_psd(quad, d) {
                    return Err(param("polynomial", "quadratic form must be symmetric positive semidefinite"));
                }
                let strictly = *radial_quartic > 0.0 || *coord_quartic > 0.0 || is_pd(quad, d);
                if !strictly {
                    return Err(param("polynomial", "e^{-V} is not integrable"));
                }
                d
            }
            Family::UniformBody { body } => body.dim(),
            Family::Tilted { base, .. } => {
                if base.dim() != 1 {
                    return Err(Error::Unsupported("tilted measures are one-dimensional".into()));
                }
                1
            }
        };
        let mut pot = Self { family, dim, log_normalizer: 0.0 };
        pot.log_normalizer = pot.compute_log_normalizer()?;
        Ok(pot)
    }

    pub fn gaussian(dim: usize) -> Self {
        Self::new(Family::Gaussian { mean: vec![0.0; dim], sigma: 1.0 }).expect("valid gaussian")
    }

    pub fn gaussian_with(mean: Vec<f64>, sigma: f64) -> Result<Self> {
        Self::new(Family::Gaussian { mean, sigma })
    }

    pub fn power_law(dim: usize, beta: f64) -> Result<Self> {
        Self::new(Family::PowerLaw { dim, beta })
    }

    pub fn huber(dim: usize) -> Result<Self> {
        Self::new(Family::Huber { dim })
    }

    pub fn uniform(body: ConvexBody) -> Self {
        Self::new(Family::UniformBody { body }).expect("bodies have positive volume")
    }

    pub fn uniform_interval(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self::uniform(ConvexBody::boxed(vec![lo], vec![hi])?))
    }

    pub fn polynomial_1d(quadratic: f64, linear: f64, quartic: f64) -> Result<Self> {
        Self::new(Family::Polynomial {
            quad: vec![quadratic],
            lin: vec![linear],
            radial_quartic: quartic,
            coord_quartic: 0.0,
        })
    }

    pub fn tilted(base: Potential, tilt: Tilt) -> Result<Self> {
        Self::new(Family::Tilted { base: Box::new(base), tilt })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn body(&self) -> Option<&ConvexBody> {
        match &self.family {
            Family::UniformBody { body } => Some(body),
            _ => None,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// Unnormalized potential; `+∞` outside the support.
    pub(crate) fn raw(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::Gaussian { mean, sigma } => {
                let s: f64 = x.iter().zip(mean).map(|(a, m)| (a - m) * (a - m)).sum();
                0.5 * s / (sigma * sigma)
            }
            Family::PowerLaw { beta, .. } => norm2(x).powf(*beta),
            Family::Huber { .. } => x.iter().map(|&v| huber(v)).sum(),
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic } => {
                let d = lin.len();
                let mut q = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        q += x[i] * quad[i * d + j] * x[j];
                    }
                }
                let r2 = dot(x, x);
                0.5 * q + dot(lin, x) + radial_quartic * r2 * r2 + coord_quartic * x.iter().map(|v| v.powi(4)).sum::<f64>()
            }
            Family::UniformBody { body } => {
                if body.contains(x) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Family::Tilted { base, tilt } => base.raw(x) - tilt.value(x[0]),
        }
    }

    /// `V(x)` including the log-normalizer.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.raw(x) + self.log_normalizer)
    }

    /// Density `e^{-V(x)}`.
    pub fn density(&self, x: &[f64]) -> f64 {
        (-(self.raw(x) + self.log_normalizer)).exp()
    }

    pub(crate) fn density_1d(&self, x: f64) -> f64 {
        self.density(&[x])
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(self.gradient_unchecked(x))
    }

    pub(crate) fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::Gaussian { mean, sigma } => x.iter().zip(mean).map(|(a, m)| (a - m) / (sigma * sigma)).collect(),
            Family::PowerLaw { beta, .. } => {
                let r = norm2(x);
                if r == 0.0 {
                    return vec![0.0; x.len()];
                }
                let c = beta * r.powf(beta - 2.0);
                x.iter().map(|v| c * v).collect()
            }
            Family::Huber { .. } => x.iter().map(|&v| huber_prime(v)).collect(),
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic } => {
                let d = lin.len();
                let r2 = dot(x, x);
                (0..d)
                    .map(|i| {
                        let ax: f64 = (0..d).map(|j| 0.5 * (quad[i * d + j] + quad[j * d + i]) * x[j]).sum();
                        ax + lin[i] + 4.0 * radial_quartic * r2 * x[i] + 4.0 * coord_quartic * x[i].powi(3)
                    })
                    .collect()
            }
            Family::UniformBody { .. } => vec![0.0; x.len()],
            Family::Tilted { base, tilt } => {
                let g = base.gradient_unchecked(x);
                vec![g[0] - tilt.derivative(x[0])]
            }
        }
    }

    /// Second difference `V(x+y) + V(x-y) - 2V(x)`.
    pub fn second_quotient(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.second_quotient_unchecked(x, y))
    }

    pub(crate) fn second_quotient_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.family {
            Family::Gaussian { sigma, .. } => dot(y, y) / (sigma * sigma),
            Family::PowerLaw { beta, .. } if *beta == 2.0 => 2.0 * dot(y, y),
            Family::PowerLaw { beta, .. } if *beta == 4.0 => radial_quartic_second(x, y),
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic } => {
                let d = lin.len();
                let mut q = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        q += y[i] * quad[i * d + j] * y[j];
                    }
                }
                let coord: f64 = x.iter().zip(y).map(|(a, b)| 12.0 * a * a * b * b + 2.0 * b.powi(4)).sum();
                q + radial_quartic * radial_quartic_second(x, y) + coord_quartic * coord
            }
            _ => {
                let xp: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                let xm: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                self.raw(&xp) + self.raw(&xm) - 2.0 * self.raw(x)
            }
        }
    }

    /// Bregman divergence `V(x+y) - V(x) - ⟨∇V(x), y⟩`.
    pub fn bregman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bregman_unchecked(x, y))
    }

    pub(crate) fn bregman_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.family {
            Family::Gaussian { sigma, .. } => 0.5 * dot(y, y) / (sigma * sigma),
            Family::PowerLaw { beta, .. } if *beta == 2.0 => dot(y, y),
            Family::PowerLaw { beta, .. } if *beta == 4.0 => radial_quartic_bregman(x, y),
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic } => {
                let d = lin.len();
                let mut q = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        q += y[i] * quad[i * d + j] * y[j];
                    }
                }
                let coord: f64 = x
                    .iter()
                    .zip(y)
                    .map(|(a, b)| 6.0 * a * a * b * b + 4.0 * a * b.powi(3) + b.powi(4))
                    .sum();
                0.5 * q + radial_quartic * radial_quartic_bregman(x, y) + coord_quartic * coord
            }
            _ => {
                let xp: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                let g = self.gradient_unchecked(x);
                self.raw(&xp) - self.raw(x) - dot(&g, y)
            }
        }
    }

    /// Upper bound on `V_hh` along the unit direction `h`, when the family provides one.
    pub fn hessian_sup(&self, h: &[f64]) -> Option<f64> {
        match &self.family {
            Family::Gaussian { sigma, .. } => Some(1.0 / (sigma * sigma)),
            Family::Huber { .. } => Some(1.0),
            Family::PowerLaw { beta, .. } if *beta == 2.0 => Some(2.0),
            Family::Polynomial { quad, lin, radial_quartic, coord_quartic }
                if *radial_quartic == 0.0 && *coord_quartic == 0.0 =>
            {
                let d = lin.len();
                let mut q = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        q += h[i] * quad[i * d + j] * h[j];
                    }
                }
                Some(q)
            }
            _ => None,
        }
    }

    /// Upper bound on `|V_h|` along the unit direction `h`, when finite.
    pub fn gradient_sup(&self, h: &[f64]) -> Option<f64> {
        match &self.family {
            Family::Huber { .. } => Some(h.iter().map(|v| v.abs()).sum()),
            _ => None,
        }
    }

    /// Interval carrying all but ~e^{-50} of the mass (exact support for intervals).
    pub fn effective_support_1d(&self) -> Result<(f64, f64)> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.dim });
        }
        if let Family::UniformBody { body } = &self.family {
            let (lo, hi) = body.bounding_box();
            return Ok((lo[0], hi[0]));
        }
        if let Family::Gaussian { mean, sigma } = &self.family {
            return Ok((mean[0] - 10.5 * sigma, mean[0] + 10.5 * sigma));
        }
        Ok(level_interval(|x| self.raw(&[x]), 50.0))
    }

    fn compute_log_normalizer(&self) -> Result<f64> {
        let d = self.dim as f64;
        Ok(match &self.family {
            Family::Gaussian { sigma, .. } => d * (LN_SQRT_2PI + sigma.ln()),
            Family::PowerLaw { dim, beta } => {
                let sphere = match dim {
                    1 => 2.0,
                    2 => 2.0 * PI,
                    _ => 4.0 * PI,
                };
                let rmax = 60f64.powf(1.0 / beta);
                let radial = quad::adaptive_simpson(|r| r.powi(*dim as i32 - 1) * (-r.powf(*beta)).exp(), 0.0, rmax, 1e-12);
                (sphere * radial).ln()
            }
            Family::Huber { dim } => {
                let z1 = quad::adaptive_simpson(|x| (-huber(x)).exp(), -60.0, 60.0, 1e-12);
                *dim as f64 * z1.ln()
            }
            Family::UniformBody { body } => body.volume().ln(),
            Family::Polynomial { .. } | Family::Tilted { .. } => {
                if self.dim == 1 {
                    let (lo, hi) = level_interval(|x| self.raw(&[x]), 60.0);
                    let shift = self.raw_min_1d(lo, hi);
                    let z = quad::adaptive_simpson(|x| (shift - self.raw(&[x])).exp(), lo, hi, 1e-12);
                    z.ln() - shift
                } else {
                    self.nested_log_normalizer()
                }
            }
        })
    }

    fn raw_min_1d(&self, lo: f64, hi: f64) -> f64 {
        let n = 4000;
        (0..=n)
            .map(|i| self.raw(&[lo + (hi - lo) * i as f64 / n as f64]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Cube `center ± r` outside of which a convex `V` exceeds its minimum
    /// `vmin` by 60, for the multivariate polynomial family.
    pub(crate) fn mass_box(&self) -> (Vec<f64>, f64, f64) {
        let d = self.dim;
        let mut center = vec![0.0; d];
        let mut best = self.raw(&center);
        let mut step = 2.0;
        while step > 1e-6 {
            let mut improved = false;
            for k in 0..d {
                for s in [step, -step] {
                    let mut c = center.clone();
                    c[k] += s;
                    let v = self.raw(&c);
                    if v < best {
                        best = v;
                        center = c;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        let dirs = super::moduli::direction_set(d, 128);
        let mut r: f64 = 0.5;
        while dirs.iter().any(|u| {
            let p: Vec<f64> = center.iter().zip(u).map(|(c, v)| c + r * v).collect();
            self.raw(&p) - best < 60.0
        }) {
            r *= 1.25;
        }
        (center, 1.5 * r, best)
    }

    fn nested_log_normalizer(&self) -> f64 {
        let d = self.dim;
        let (center, r, best) = self.mass_box();
        let f = |x: &[f64]| (best - self.raw(x)).exp();
        let integral = match d {
            2 => quad::integrate(
                |a| quad::integrate(|b| f(&[a, b]), center[1] - r, center[1] + r, 1e-14, 1e-11),
                center[0] - r,
                center[0] + r,
                1e-14,
                1e-10,
            ),
            _ => quad::integrate(
                |a| {
                    quad::integrate(
                        |b| quad::integrate(|c| f(&[a, b, c]), center[2] - r, center[2] + r, 1e-14, 1e-10),
                        center[1] - r,
                        center[1] + r,
                        1e-14,
                        1e-10,
                    )
                },
                center[0] - r,
                center[0] + r,
                1e-14,
                1e-9,
            ),
        };
        integral.ln() - best
    }
}

impl Potential {
    /// Rebuild a body-uniform potential's support description.
    pub fn support_shape(&self) -> Option<&Shape> {
        self.body().map(|b| b.shape())
    }
}

fn radial_quartic_second(x: &[f64], y: &[f64]) -> f64 {
    let a = dot(x, x);
    let b = dot(y, y);
    let c = dot(x, y);
    4.0 * a * b + 2.0 * b * b + 8.0 * c * c
}

fn radial_quartic_bregman(x: &[f64], y: &[f64]) -> f64 {
    let a = dot(x, x);
    let b = dot(y, y);
    let c = dot(x, y);
    b * b + 4.0 * c * c + 2.0 * a * b + 4.0 * b * c
}

/// Interval around the grid minimizer of `v` on which `v - min < level`.
fn level_interval<F: Fn(f64) -> f64>(v: F, level: f64) -> (f64, f64) {
    let (lo, hi, n) = (-200.0, 200.0, 80_000);
    let h = (hi - lo) / n as f64;
    let vals: Vec<f64> = (0..=n).map(|i| v(lo + h * i as f64)).collect();
    let vmin = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let first = vals.iter().position(|&x| x - vmin < level).unwrap_or(0);
    let last = vals.iter().rposition(|&x| x - vmin < level).unwrap_or(n);
    (lo + h * first.saturating_sub(1) as f64, lo + h * (last + 1).min(n) as f64)
}

fn is_psd(a: &[f64], d: usize) -> bool {
    for i in 0..d {
        for j in 0..d {
            if (a[i * d + j] - a[j * d + i]).abs() > 1e-12 {
                return false;
            }
        }
    }
    match d {
        1 => a[0] >= 0.0,
        2 => a[0] >= 0.0 && a[3] >= 0.0 && a[0] * a[3] - a[1] * a[2] >= -1e-14,
        _ => {
            let m2 = |i: usize, j: usize| a[i * 3 + i] * a[j * 3 + j] - a[i * 3 + j] * a[j * 3 + i];
            let det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6]);
            (0..3).all(|i| a[i * 3 + i] >= 0.0) && m2(0, 1) >= -1e-14 && m2(0, 2) >= -1e-14 && m2(1, 2) >= -1e-14 && det >= -1e-14
        }
    }
}

fn is_pd(a: &[f64], d: usize) -> bool {
    match d {
        1 => a[0] > 0.0,
        2 => a[0] > 0.0 && a[0] * a[3] - a[1] * a[2] > 0.0,
        _ => {
            let det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6]);
            a[0] > 0.0 && a[0] * a[4] - a[1] * a[3] > 0.0 && det > 0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_examples() {
        let g = Potential::gaussian(1);
        assert_relative_eq!(g.eval(&[0.0]).unwrap(), 0.5 * (2.0 * PI).ln(), epsilon = 1e-15);

        // ∫ e^{-x⁴} = 2Γ(5/4)
        let p = Potential::power_law(1, 4.0).unwrap();
        let oracle = (2.0 * statrs::function::gamma::gamma(1.25)).ln();
        assert_relative_eq!(p.eval(&[0.0]).unwrap(), oracle, epsilon = 1e-10);
        assert_relative_eq!(oracle, 0.5949, epsilon = 1e-4);

        // Z₁ = √(2π)(2Φ(1) - 1) + 2e^{-1/2}
        let h = Potential::huber(2).unwrap();
        let z1 = (2.0 * PI).sqrt() * (2.0 * crate::special::normal_cdf(1.0) - 1.0) + 2.0 * (-0.5f64).exp();
        assert_relative_eq!(h.eval(&[0.0, 0.0]).unwrap(), 2.0 * z1.ln(), epsilon = 1e-10);

        assert!(matches!(g.eval(&[0.0, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn radial_normalizer_2d() {
        // ∫_{R²} e^{-|x|⁴} dx = 2π · Γ(1/2)/4 = π^{3/2}/2
        let p = Potential::power_law(2, 4.0).unwrap();
        assert_relative_eq!(p.log_normalizer(), (PI.powf(1.5) / 2.0).ln(), epsilon = 1e-10);
    }

    #[test]
    fn nested_normalizer_matches_gaussian() {
        let p = Potential::new(Family::Polynomial {
            quad: vec![2.0, 0.5, 0.5, 1.0],
            lin: vec![0.3, -0.2],
            radial_quartic: 0.0,
            coord_quartic: 0.0,
        })
        .unwrap();
        // Z = 2π/√det(A) · exp(½ bᵀA⁻¹b)
        let det: f64 = 2.0 * 1.0 - 0.25;
        let (b0, b1) = (0.3, -0.2);
        let quad_form = (1.0 * b0 * b0 - 2.0 * 0.5 * b0 * b1 + 2.0 * b1 * b1) / det;
        let oracle = (2.0 * PI / det.sqrt()).ln() + 0.5 * quad_form;
        assert_relative_eq!(p.log_normalizer(), oracle, epsilon = 1e-8);
    }

    #[test]
    fn second_quotient_examples() {
        let g = Potential::gaussian(3);
        assert_relative_eq!(g.second_quotient(&[1.0, -2.0, 0.3], &[0.6, 0.0, 0.8]).unwrap(), 1.0, epsilon = 1e-15);

        let p = Potential::power_law(1, 4.0).unwrap();
        for &(x, y) in &[(0.3f64, 0.7f64), (-1.2, 0.25), (2.0, -1.5)] {
            let oracle = 12.0 * x * x * y * y + 2.0 * y.powi(4);
            assert_relative_eq!(p.second_quotient(&[x], &[y]).unwrap(), oracle, max_relative = 1e-13);
        }

        let h = Potential::huber(1).unwrap();
        assert_eq!(h.second_quotient(&[10.0], &[0.5]).unwrap(), 0.0);
    }

    #[test]
    fn bregman_closed_forms_match_differences() {
        let p = Potential::new(Family::Polynomial {
            quad: vec![1.0, 0.2, 0.2, 0.5],
            lin: vec![0.1, 0.0],
            radial_quartic: 0.3,
            coord_quartic: 0.2,
        })
        .unwrap();
        let x = [0.4, -0.7];
        let y = [0.3, 0.5];
        let xp = [x[0] + y[0], x[1] + y[1]];
        let xm = [x[0] - y[0], x[1] - y[1]];
        let g = p.gradient(&x).unwrap();
        let direct = p.raw(&xp) - p.raw(&x) - dot(&g, &y);
        assert_relative_eq!(p.bregman(&x, &y).unwrap(), direct, epsilon = 1e-13);
        let direct2 = p.raw(&xp) + p.raw(&xm) - 2.0 * p.raw(&x);
        assert_relative_eq!(p.second_quotient(&x, &y).unwrap(), direct2, epsilon = 1e-13);
    }

    #[test]
    fn non_integrable_polynomial_rejected() {
        assert!(Potential::polynomial_1d(0.0, 1.0, 0.0).is_err());
        assert!(Potential::new(Family::Polynomial {
            quad: vec![1.0, 2.0, 2.0, 1.0],
            lin: vec![0.0, 0.0],
            radial_quartic: 0.0,
            coord_quartic: 0.0
        })
        .is_err());
    }

    #[test]
    fn tilted_normalizer() {
        // e^{εx}·γ renormalized is N(ε, 1)
        let eps = 0.3;
        let t = Potential::tilted(Potential::gaussian(1), Tilt { slope: eps, waves: vec![] }).unwrap();
        let shifted = Potential::gaussian_with(vec![eps], 1.0).unwrap();
        for &x in &[-1.0, 0.0, 0.7] {
            assert_relative_eq!(t.eval(&[x]).unwrap(), shifted.eval(&[x]).unwrap(), epsilon = 1e-10);
        }
    }
}
