//! Seeded samplers: inverse transform in 1D, exact constructions for the
//! Gaussian, radial and product families, rejection for bodies.

use rand::Rng as _;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::cdf::Cdf1D;
use super::potential::{Family, Potential};
use crate::error::{Error, Result};
use crate::rng::{self, par_map, Rng};

const CHUNK: usize = 4096;
const MIN_ACCEPTANCE: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct Sampled {
    pub points: Vec<Vec<f64>>,
    /// Fraction of accepted proposals for rejection samplers.
    pub acceptance: Option<f64>,
}

pub fn sample(pot: &Potential, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    sample_with_acceptance(pot, n, seed).map(|s| s.points)
}

fn uniform_open(rng: &mut Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

enum Plan {
    Gaussian { mean: Vec<f64>, sigma: f64 },
    Quantile(Cdf1D),
    Product(Cdf1D, usize),
    Radial { dim: usize, beta: f64, gamma: Gamma<f64> },
    Rejection { lo: Vec<f64>, hi: Vec<f64>, shift: f64 },
}

pub fn sample_with_acceptance(pot: &Potential, n: usize, seed: u64) -> Result<Sampled> {
    if n == 0 {
        return Err(Error::Domain("sample count must be ≥ 1".into()));
    }
    let d = pot.dim();
    let plan = match pot.family() {
        Family::Gaussian { mean, sigma } => Plan::Gaussian { mean: mean.clone(), sigma: *sigma },
        _ if d == 1 && pot.body().is_none() => Plan::Quantile(Cdf1D::new(pot)?),
        Family::Huber { dim } => Plan::Product(Cdf1D::new(&Potential::huber(1)?)?, *dim),
        Family::PowerLaw { dim, beta } => Plan::Radial {
            dim: *dim,
            beta: *beta,
            gamma: Gamma::new(*dim as f64 / beta, 1.0).map_err(|e| Error::Domain(e.to_string()))?,
        },
        Family::UniformBody { body } => {
            let (lo, hi) = body.bounding_box();
            let boxvol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
            check_acceptance(body.volume() / boxvol)?;
            Plan::Rejection { lo, hi, shift: 0.0 }
        }
        Family::Polynomial { .. } | Family::Tilted { .. } => {
            let (center, r, vmin) = pot.mass_box();
            let lo: Vec<f64> = center.iter().map(|c| c - r).collect();
            let hi: Vec<f64> = center.iter().map(|c| c + r).collect();
            let expected = (-pot.log_normalizer() - vmin).exp() / (2.0 * r).powi(d as i32);
            check_acceptance(expected)?;
            Plan::Rejection { lo, hi, shift: vmin }
        }
    };

    let chunks = n.div_ceil(CHUNK);
    let parts = par_map(chunks, |c| {
        let count = CHUNK.min(n - c * CHUNK);
        let mut rng = rng::stream(seed, "sample", c as u64);
        let mut pts = Vec::with_capacity(count);
        let mut proposed = 0u64;
        while pts.len() < count {
            match &plan {
                Plan::Gaussian { mean, sigma } => {
                    pts.push(mean.iter().map(|m| m + sigma * rng.sample::<f64, _>(StandardNormal)).collect());
                }
                Plan::Quantile(cdf) => {
                    pts.push(vec![cdf.quantile(uniform_open(&mut rng)).expect("u in (0, 1)")]);
                }
                Plan::Product(cdf, k) => {
                    pts.push((0..*k).map(|_| cdf.quantile(uniform_open(&mut rng)).expect("u in (0, 1)")).collect());
                }
                Plan::Radial { dim, beta, gamma } => {
                    let r = gamma.sample(&mut rng).powf(1.0 / beta);
                    let mut z: Vec<f64> = (0..*dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if *dim == 1 {
                        z[0] = z[0].signum();
                    } else {
                        z.iter_mut().for_each(|v| *v /= norm);
                    }
                    pts.push(z.iter().map(|v| r * v).collect());
                }
                Plan::Rejection { lo, hi, shift } => {
                    proposed += 1;
                    let x: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| a + (b - a) * rng.random::<f64>()).collect();
                    let v = pot.raw(&x);
                    if v.is_finite() {
                        let accept = if *shift == 0.0 && v == 0.0 { true } else { rng.random::<f64>() < (shift - v).exp() };
                        if accept {
                            pts.push(x);
                        }
                    }
                }
            }
        }
        (pts, proposed)
    });

    let rejection = matches!(plan, Plan::Rejection { .. });
    let proposed: u64 = parts.iter().map(|p| p.1).sum();
    let points: Vec<Vec<f64>> = parts.into_iter().flat_map(|p| p.0).collect();
    let acceptance = rejection.then(|| points.len() as f64 / proposed as f64);
    Ok(Sampled { points, acceptance })
}

fn check_acceptance(expected: f64) -> Result<()> {
    if expected < MIN_ACCEPTANCE {
        return Err(Error::LowAcceptance { acceptance: expected });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ConvexBody;

    fn moments(pts: &[Vec<f64>], k: usize) -> (f64, f64) {
        let n = pts.len() as f64;
        let m = pts.iter().map(|p| p[k]).sum::<f64>() / n;
        let v = pts.iter().map(|p| (p[k] - m).powi(2)).sum::<f64>() / n;
        (m, v)
    }

    #[test]
    fn deterministic_given_seed() {
        let pot = Potential::power_law(2, 4.0).unwrap();
        let a = sample(&pot, 5000, 3).unwrap();
        let b = sample(&pot, 5000, 3).unwrap();
        let c = sample(&pot, 5000, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn moments_within_five_sigma() {
        let n = 100_000;
        let cases: Vec<(Potential, f64)> = vec![
            (Potential::gaussian_with(vec![1.0, -2.0], 2.0).unwrap(), 4.0),
            (Potential::uniform(ConvexBody::unit_box(2)), 1.0 / 3.0),
            // E x² for e^{-x⁴}: Γ(3/4)/Γ(1/4)
            (
                Potential::power_law(1, 4.0).unwrap(),
                statrs::function::gamma::gamma(0.75) / statrs::function::gamma::gamma(0.25),
            ),
            // E x₁² under e^{-|x|²} in 2D is 1/2
            (Potential::power_law(2, 2.0).unwrap(), 0.5),
        ];
        for (pot, var) in cases {
            let pts = sample(&pot, n, 11).unwrap();
            let mean = match pot.family() {
                Family::Gaussian { mean, .. } => mean[0],
                _ => 0.0,
            };
            let (m, v) = moments(&pts, 0);
            let se_mean = (var / n as f64).sqrt();
            assert!((m - mean).abs() < 5.0 * se_mean, "{:?}: mean {m}", pot.family());
            // variance of the sample variance is bounded by E x⁴ ≤ 9 var² for these families
            let se_var = (9.0 * var * var / n as f64).sqrt();
            assert!((v - var).abs() < 5.0 * se_var, "{:?}: var {v} vs {var}", pot.family());
        }
    }

    #[test]
    fn rejection_reports_acceptance() {
        let ball = Potential::uniform(ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap());
        let s = sample_with_acceptance(&ball, 20_000, 5).unwrap();
        let acc = s.acceptance.unwrap();
        assert!((acc - std::f64::consts::PI / 4.0).abs() < 0.02, "{acc}");
        assert!(s.points.iter().all(|p| p[0] * p[0] + p[1] * p[1] <= 1.0));
    }
}
