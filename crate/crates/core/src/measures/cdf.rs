//! One-dimensional distribution and quantile functions.

use super::potential::{Family, Potential};
use crate::error::{Error, Result};
use crate::quad;
use crate::special::{normal_cdf, normal_quantile};

const CELLS: usize = 4096;

#[derive(Debug, Clone)]
enum Kind {
    Gaussian { mean: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
    /// Cumulative masses on a uniform grid over the effective support,
    /// one 10-point Gauss-Legendre rule per cell.
    Table { nodes: Vec<f64>, cum: Vec<f64>, scale: f64 },
}

/// Distribution function, quantile and density of a one-dimensional measure.
#[derive(Debug, Clone)]
pub struct Cdf1D {
    pot: Potential,
    kind: Kind,
}

impl Cdf1D {
    pub fn new(pot: &Potential) -> Result<Self> {
        if pot.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: pot.dim() });
        }
        let kind = match pot.family() {
            Family::Gaussian { mean, sigma } => Kind::Gaussian { mean: mean[0], sigma: *sigma },
            Family::UniformBody { .. } => {
                let (lo, hi) = pot.effective_support_1d()?;
                Kind::Uniform { lo, hi }
            }
            _ => {
                let (lo, hi) = pot.effective_support_1d()?;
                let h = (hi - lo) / CELLS as f64;
                let nodes: Vec<f64> = (0..=CELLS).map(|i| lo + h * i as f64).collect();
                let mut cum = Vec::with_capacity(CELLS + 1);
                let mut acc = 0.0;
                cum.push(0.0);
                for w in nodes.windows(2) {
                    acc += quad::gauss_legendre10(|x| pot.density_1d(x), w[0], w[1]);
                    cum.push(acc);
                }
                Kind::Table { nodes, cum, scale: 1.0 / acc }
            }
        };
        Ok(Self { pot: pot.clone(), kind })
    }

    pub fn potential(&self) -> &Potential {
        &self.pot
    }

    /// Support of the measure (infinite for full-line densities).
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Uniform { lo, hi } => (*lo, *hi),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Table { scale, .. } => self.pot.density_1d(x) * scale,
            _ => self.pot.density_1d(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Gaussian { mean, sigma } => normal_cdf((x - mean) / sigma),
            Kind::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Kind::Table { nodes, cum, scale } => {
                if x <= nodes[0] {
                    return 0.0;
                }
                if x >= nodes[CELLS] {
                    return 1.0;
                }
                let i = cell_of(nodes, x);
                let partial = quad::gauss_legendre10(|s| self.pot.density_1d(s), nodes[i], x);
                ((cum[i] + partial) * scale).min(1.0)
            }
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("quantile level {u} outside (0, 1)")));
        }
        Ok(match &self.kind {
            Kind::Gaussian { mean, sigma } => mean + sigma * normal_quantile(u),
            Kind::Uniform { lo, hi } => lo + u * (hi - lo),
            Kind::Table { nodes, cum, scale } => {
                let target = u / scale;
                let i = cum.partition_point(|&c| c <= target).clamp(1, CELLS) - 1;
                let (a, b) = (nodes[i], nodes[i + 1]);
                let frac = (target - cum[i]) / (cum[i + 1] - cum[i]).max(f64::MIN_POSITIVE);
                let x0 = a + frac.clamp(0.0, 1.0) * (b - a);
                quad::newton_bracketed(|x| self.cdf(x) - u, |x| self.density(x), a, b, x0, 1e-15)
            }
        })
    }
}

fn cell_of(nodes: &[f64], x: f64) -> usize {
    nodes.partition_point(|&n| n <= x).clamp(1, CELLS) - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_examples() {
        let g = Cdf1D::new(&Potential::gaussian(1)).unwrap();
        assert_eq!(g.cdf(0.0), 0.5);
        let a = 1.7;
        let u = Cdf1D::new(&Potential::uniform_interval(-a, a).unwrap()).unwrap();
        for &p in &[0.1, 0.5, 0.93] {
            assert_relative_eq!(u.quantile(p).unwrap(), a * (2.0 * p - 1.0), epsilon = 1e-15);
        }
        assert!(g.quantile(1.0).is_err());
        assert!(g.quantile(0.0).is_err());
    }

    #[test]
    fn quartic_quantile_matches_simpson_and_bisection() {
        let pot = Potential::power_law(1, 4.0).unwrap();
        let c = Cdf1D::new(&pot).unwrap();
        let z = 2.0 * statrs::function::gamma::gamma(1.25);
        let mass = |x: f64| 0.5 + quad::adaptive_simpson(|s| (-s.powi(4)).exp() / z, 0.0, x, 1e-13);
        let oracle = quad::bisect(|x| mass(x) - 0.975, 0.0, 3.0, 1e-14).unwrap();
        assert_relative_eq!(c.quantile(0.975).unwrap(), oracle, epsilon = 1e-8);
    }

    #[test]
    fn table_round_trip() {
        let pot = Potential::huber(1).unwrap();
        let c = Cdf1D::new(&pot).unwrap();
        for i in 1..200 {
            let x = -8.0 + 16.0 * i as f64 / 200.0;
            assert!((c.quantile(c.cdf(x)).unwrap() - x).abs() < 1e-9, "x = {x}");
        }
    }
}
