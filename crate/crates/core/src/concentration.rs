//! Concentration profiles and transport–entropy inequalities checked by
//! Monte Carlo and quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::measures::{dist2, dot, sample, Cdf1D, ConvexityModulus, Norm, Potential, Tilt};
use crate::quad;
use crate::rng::{derive_seed, par_map};
use crate::special::{normal_cdf, normal_quantile};
use crate::transport1d::TransportMap1D;
use crate::verify::VerificationReport;

/// Sets whose enlargements have closed-form distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum BaseSet {
    /// `{x : ⟨normal, x⟩ ≤ offset}`.
    HalfSpace { normal: Vec<f64>, offset: f64 },
    /// Ball of the query norm.
    Ball { center: Vec<f64>, radius: f64 },
}

impl BaseSet {
    pub fn dim(&self) -> usize {
        match self {
            BaseSet::HalfSpace { normal, .. } => normal.len(),
            BaseSet::Ball { center, .. } => center.len(),
        }
    }

    /// Distance from `x` to the set in `norm`.
    pub fn distance(&self, x: &[f64], norm: Norm) -> f64 {
        match self {
            BaseSet::HalfSpace { normal, offset } => (dot(normal, x) - offset).max(0.0) / norm.dual().of(normal),
            BaseSet::Ball { center, radius } => {
                let diff: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                (norm.of(&diff) - radius).max(0.0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            BaseSet::HalfSpace { normal, offset } => {
                if normal.iter().all(|v| *v == 0.0) || !offset.is_finite() {
                    return Err(param("base_set", "half-space needs a nonzero normal and finite offset"));
                }
            }
            BaseSet::Ball { radius, .. } => {
                if !(*radius >= 0.0) {
                    return Err(param("base_set", "ball radius must be ≥ 0"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnlargementQuery {
    pub base_set: BaseSet,
    pub r: f64,
    #[serde(default)]
    pub norm: Norm,
    pub sample_count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub ci_halfwidth: f64,
    pub count: u64,
    pub n: u64,
}

const Z95: f64 = 1.959_963_984_540_054;

impl Estimate {
    /// Normal-approximation interval, Wilson interval within 10 counts of 0 or n.
    pub fn from_counts(count: u64, n: u64) -> Self {
        let nf = n as f64;
        let p = count as f64 / nf;
        let ci = if count < 10 || n - count < 10 {
            let z2 = Z95 * Z95;
            let centre = (p + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
            let half = Z95 / (1.0 + z2 / nf) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
            (centre + half - p).max(p - (centre - half))
        } else {
            Z95 * (p * (1.0 - p) / nf).sqrt()
        };
        Self { value: p, ci_halfwidth: ci, count, n }
    }

    pub fn upper(&self) -> f64 {
        (self.value + self.ci_halfwidth).min(1.0)
    }

    pub fn lower(&self) -> f64 {
        (self.value - self.ci_halfwidth).max(0.0)
    }
}

const BLOCK: usize = 1 << 16;

/// `ν(A_r)` for several radii from one sample of `ν`.
pub fn enlargement_profile(pot: &Potential, base: &BaseSet, rs: &[f64], norm: Norm, n: usize, seed: u64) -> Result<Vec<Estimate>> {
    base.validate()?;
    if base.dim() != pot.dim() {
        return Err(Error::DimensionMismatch { expected: pot.dim(), got: base.dim() });
    }
    if rs.iter().any(|r| !(*r >= 0.0)) {
        return Err(param("r", "must be ≥ 0"));
    }
    if n == 0 {
        return Err(param("sample_count", "must be positive"));
    }
    let blocks = n.div_ceil(BLOCK);
    let counts = par_map(blocks, |b| -> Result<Vec<u64>> {
        let size = BLOCK.min(n - b * BLOCK);
        let pts = sample(pot, size, derive_seed(seed, "enlargement", b as u64))?;
        let mut c = vec![0u64; rs.len()];
        for p in &pts {
            let d = base.distance(p, norm);
            for (k, r) in rs.iter().enumerate() {
                if d <= *r {
                    c[k] += 1;
                }
            }
        }
        Ok(c)
    });
    let mut total = vec![0u64; rs.len()];
    for c in counts {
        for (t, v) in total.iter_mut().zip(c?) {
            *t += v;
        }
    }
    Ok(total.into_iter().map(|c| Estimate::from_counts(c, n as u64)).collect())
}

/// Fraction of `ν`-samples within distance `r` of the base set.
pub fn enlargement_probability(pot: &Potential, q: &EnlargementQuery) -> Result<Estimate> {
    Ok(enlargement_profile(pot, &q.base_set, &[q.r], q.norm, q.sample_count, q.seed)?[0])
}

/// `Φ(Φ⁻¹(ν(A)) + ½ √δ(r/8))`; δ is not extrapolated.
pub fn ms_profile_bound(nu_a: f64, r: f64, delta: &ConvexityModulus) -> Result<f64> {
    if !(nu_a > 0.0 && nu_a < 1.0) {
        return Err(param("nuA", "need 0 < ν(A) < 1"));
    }
    if !(r >= 0.0) {
        return Err(param("r", "must be ≥ 0"));
    }
    let d = delta.eval_within(r / 8.0)?;
    Ok(normal_cdf(normal_quantile(nu_a) + 0.5 * d.sqrt()))
}

/// `1 − ½ exp(−δ(r/8)/8)` for `ν(A) ≥ ½`.
pub fn ms_exp_bound(nu_a_ge_half: bool, r: f64, delta: &ConvexityModulus) -> Result<f64> {
    if !nu_a_ge_half {
        return Err(param("nuA_ge_half", "the bound assumes ν(A) ≥ 1/2"));
    }
    if !(r >= 0.0) {
        return Err(param("r", "must be ≥ 0"));
    }
    Ok(1.0 - 0.5 * (-delta.eval_within(r / 8.0)? / 8.0).exp())
}

/// `Φ(t) ≥ 1 − ½ e^{−t²/2}` on `n` points of `[0, t_max]`.
pub fn gaussian_tail_check(t_max: f64, n: usize) -> VerificationReport {
    let mut worst = (f64::NEG_INFINITY, 0.0);
    for i in 0..n.max(2) {
        let t = t_max * i as f64 / (n.max(2) - 1) as f64;
        let gap = (1.0 - 0.5 * (-0.5 * t * t).exp()) - normal_cdf(t);
        if gap > worst.0 {
            worst = (gap, t);
        }
    }
    VerificationReport::new("gaussian_tail", "Φ(t) ≥ 1 − ½ e^{−t²/2}", 0.0, worst.0, 1.0, 1e-12).witness("t", worst.1)
}

/// Integration interval covering both densities.
fn common_support(a: &Potential, b: &Potential) -> Result<(f64, f64)> {
    let (l1, h1) = a.effective_support_1d()?;
    let (l2, h2) = b.effective_support_1d()?;
    Ok((l1.min(l2), h1.max(h2)))
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    const PIECES: usize = 64;
    let h = (hi - lo) / PIECES as f64;
    (0..PIECES).map(|k| quad::integrate(&f, lo + k as f64 * h, lo + (k + 1) as f64 * h, 1e-16, 1e-12)).sum()
}

fn log_density(pot: &Potential, x: f64) -> f64 {
    pot.eval(&[x]).map(|v| -v).unwrap_or(f64::NEG_INFINITY)
}

fn check_1d(nu: &Potential) -> Result<()> {
    if nu.dim() != 1 || nu.body().is_some() {
        return Err(Error::Unsupported("transport–entropy checks need an unbounded 1D ν".into()));
    }
    Ok(())
}

/// `∫ f log f dν` for `f · ν = e^{ψ} ν / Z`.
pub fn relative_entropy(nu: &Potential, tilt: &Tilt) -> Result<f64> {
    check_1d(nu)?;
    let fnu = Potential::tilted(nu.clone(), tilt.clone())?;
    let (lo, hi) = common_support(nu, &fnu)?;
    Ok(integrate_pieces(
        |x| {
            let (lf, ln) = (log_density(&fnu, x), log_density(nu, x));
            if lf == f64::NEG_INFINITY {
                0.0
            } else {
                lf.exp() * (lf - ln)
            }
        },
        lo,
        hi,
    ))
}

/// `∫ b(|T(x) − x|) dν ≤ ∫ f log f dν` with `T` the monotone map from `ν` to `f · ν`.
pub fn talagrand_check(nu: &Potential, tilt: &Tilt, b: &ConvexityModulus) -> Result<VerificationReport> {
    check_1d(nu)?;
    let fnu = Potential::tilted(nu.clone(), tilt.clone())?;
    let map = TransportMap1D::new(nu, &fnu)?;
    let (lo, hi) = nu.effective_support_1d()?;
    // T is infinite only where the target table ends, far below e^{−50} mass
    let lhs = integrate_pieces(
        |x| {
            let v = b.eval((map.eval(x) - x).abs()) * log_density(nu, x).exp();
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        lo,
        hi,
    );
    let rhs = relative_entropy(nu, tilt)?;
    Ok(VerificationReport::new("talagrand", "∫ b(‖∇φ(x) − x‖) dν ≤ ∫ f log f dν", rhs, lhs, 1.0, 1e-4)
        .witness("tilt", tilt)
        .witness("support", [lo, hi]))
}

/// `∫ f log f dν ≤ ∫ b*(‖∇f/f‖_*) f dν`, with `∇f/f = ψ'`.
pub fn mlsi_check(nu: &Potential, tilt: &Tilt, b_conjugate: &ConvexityModulus) -> Result<VerificationReport> {
    check_1d(nu)?;
    let fnu = Potential::tilted(nu.clone(), tilt.clone())?;
    let (lo, hi) = common_support(nu, &fnu)?;
    let lhs = relative_entropy(nu, tilt)?;
    let rhs = integrate_pieces(|x| b_conjugate.eval(tilt.derivative(x).abs()) * log_density(&fnu, x).exp(), lo, hi);
    let mut r = VerificationReport::new("modified_log_sobolev", "∫ f log f dν ≤ ∫ b*(‖∇f/f‖_*) f dν", rhs, lhs, 1.0, 1e-4)
        .witness("tilt", tilt)
        .witness("support", [lo, hi]);
    if let Some(s) = b_conjugate.saturated_from() {
        r = r.note(format!("b* saturates at slope {s}: values beyond use the restricted supremum"));
    }
    Ok(r)
}

/// How `ν(A)` and `ν(A_r^c)` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Measurement {
    /// Distribution function of a 1D measure; half-spaces only.
    Exact,
    MonteCarlo { n: usize, seed: u64 },
}

/// `e^{2 b̃(r/2)} ≤ 1/(ν(A) ν(A_r^c))` with `A_r` the `r`-enlargement; the
/// displayed `e^{2 b̃(r)}` form is reported alongside. With Monte Carlo the
/// upper confidence limits of both measures are used.
pub fn marton_check(
    nu: &Potential,
    base: &BaseSet,
    r: f64,
    norm: Norm,
    b_tilde: &ConvexityModulus,
    how: Measurement,
) -> Result<VerificationReport> {
    base.validate()?;
    if !(r >= 0.0) {
        return Err(param("r", "must be ≥ 0"));
    }
    let (a, arc, ci_a, ci_arc, vacuous) = match how {
        Measurement::Exact => {
            let BaseSet::HalfSpace { normal, offset } = base else {
                return Err(Error::Unsupported("exact measurement needs a half-space".into()));
            };
            check_1d(nu)?;
            if normal.len() != 1 || normal[0] == 0.0 {
                return Err(param("base_set", "1D half-space needs a nonzero normal"));
            }
            let cdf = Cdf1D::new(nu)?;
            let edge = offset / normal[0];
            let shift = r / norm.dual().of(normal) * normal[0].abs() / normal[0].abs();
            let (a, arc) = if normal[0] > 0.0 {
                (cdf.cdf(edge), 1.0 - cdf.cdf(edge + shift))
            } else {
                (1.0 - cdf.cdf(edge), cdf.cdf(edge - shift))
            };
            (a, arc, 0.0, 0.0, arc <= 0.0)
        }
        Measurement::MonteCarlo { n, seed } => {
            let est = enlargement_profile(nu, base, &[0.0, r], norm, n, seed)?;
            let (ea, ear) = (est[0], est[1]);
            let arc = Estimate::from_counts(ear.n - ear.count, ear.n);
            (ea.upper(), arc.upper(), ea.ci_halfwidth, arc.ci_halfwidth, arc.lower() <= 0.0)
        }
    };
    let theoretical = -(a * arc).ln();
    let chain = 2.0 * b_tilde.eval(0.5 * r);
    let displayed = 2.0 * b_tilde.eval(r);
    let mut report = VerificationReport::new("marton", "e^{2 b̃(r/2)} ≤ 1/(ν(A) ν(A_r^c))", theoretical, chain, 1.0, 0.0)
        .witness("r", r)
        .witness("nu_a", a)
        .witness("nu_ar_complement", arc)
        .witness("ci_nu_a", ci_a)
        .witness("ci_nu_ar_complement", ci_arc)
        .witness("displayed_exponent", displayed)
        .witness("displayed_holds", displayed <= theoretical)
        .note("A_r is the r-enlargement {y : dist(y, A) ≤ r}; the printed {‖x−y‖ ≥ r} is read as its complement");
    if vacuous {
        report = report.vacuous("ν(A_r^c) is indistinguishable from 0");
    }
    Ok(report)
}

/// Mean of `|x − c|` over a fresh sample, used to scale radii.
pub fn mean_distance(pot: &Potential, c: &[f64], n: usize, seed: u64) -> Result<f64> {
    let pts = sample(pot, n, seed)?;
    Ok(pts.iter().map(|p| dist2(p, c)).sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::moduli::default_grid;
    use crate::measures::ModulusKind;
    use crate::special::normal_sf;

    fn square(kind: ModulusKind, coef: f64, exponent: f64) -> ConvexityModulus {
        ConvexityModulus::power(kind, Norm::L2, coef, exponent, default_grid(40.0, 64)).unwrap()
    }

    fn half_line() -> BaseSet {
        BaseSet::HalfSpace { normal: vec![1.0], offset: 0.0 }
    }

    #[test]
    fn distances() {
        let h = BaseSet::HalfSpace { normal: vec![1.0, 1.0], offset: 0.0 };
        assert!((h.distance(&[1.0, 1.0], Norm::L2) - 2f64.sqrt()).abs() < 1e-15);
        assert!((h.distance(&[1.0, 1.0], Norm::Linf) - 1.0).abs() < 1e-15);
        assert!((h.distance(&[1.0, 1.0], Norm::L1) - 2.0).abs() < 1e-15);
        assert_eq!(h.distance(&[-1.0, 0.0], Norm::L2), 0.0);
        let b = BaseSet::Ball { center: vec![0.0, 0.0], radius: 1.0 };
        assert!((b.distance(&[3.0, 4.0], Norm::L2) - 4.0).abs() < 1e-15);
        assert!((b.distance(&[3.0, 4.0], Norm::L1) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_enlargement_matches_cdf() {
        let g = Potential::gaussian(1);
        let rs = [0.0, 0.5, 1.0, 10.0];
        let est = enlargement_profile(&g, &half_line(), &rs, Norm::L2, 200_000, 7).unwrap();
        for (e, r) in est.iter().zip(rs) {
            let exact = normal_cdf(r);
            assert!((e.value - exact).abs() <= 1.5 * e.ci_halfwidth + 1e-12, "r = {r}: {e:?} vs {exact}");
        }
        assert_eq!(est[3].count, est[3].n);
        assert!(est[3].ci_halfwidth < 1e-4);
        let q = EnlargementQuery { base_set: half_line(), r: 0.5, norm: Norm::L2, sample_count: 200_000, seed: 7 };
        assert_eq!(enlargement_probability(&g, &q).unwrap(), est[1]);
    }

    #[test]
    fn profile_and_exp_bounds() {
        let d2 = square(ModulusKind::Delta, 1.0, 2.0);
        for &r in &[0.0, 1.0, 4.0, 8.0] {
            assert!((ms_profile_bound(0.5, r, &d2).unwrap() - normal_cdf(r / 16.0)).abs() < 1e-12);
        }
        assert!((ms_profile_bound(0.3, 0.0, &d2).unwrap() - 0.3).abs() < 1e-12);
        let d4 = square(ModulusKind::Delta, 2.0, 4.0);
        assert!((ms_profile_bound(0.5, 8.0, &d4).unwrap() - normal_cdf(0.5 * 2f64.sqrt())).abs() < 1e-12);
        assert!((ms_profile_bound(0.5, 8.0, &d4).unwrap() - 0.7602).abs() < 1e-4);
        assert!((ms_exp_bound(true, 8.0, &d2).unwrap() - (1.0 - 0.5 * (-0.125f64).exp())).abs() < 1e-12);
        assert!((ms_exp_bound(true, 8.0, &d2).unwrap() - 0.5588).abs() < 1e-4);
        assert_eq!(ms_exp_bound(true, 0.0, &d2).unwrap(), 0.5);
        assert!(ms_exp_bound(false, 1.0, &d2).is_err());
        assert!(ms_profile_bound(0.5, 1000.0, &d2).is_err());
        for &r in &[0.5, 2.0, 8.0, 30.0] {
            assert!(ms_exp_bound(true, r, &d2).unwrap() <= ms_profile_bound(0.5, r, &d2).unwrap() + 1e-15);
        }
        assert!(gaussian_tail_check(6.0, 601).passed);
    }

    #[test]
    fn talagrand_mlsi_gaussian_cases() {
        let g = Potential::gaussian(1);
        let b = square(ModulusKind::Bregman, 0.5, 2.0);
        let b_star = b.conjugate().unwrap();
        let none = Tilt { slope: 0.0, waves: vec![] };
        let r = talagrand_check(&g, &none, &b).unwrap();
        assert!(r.empirical.abs() < 1e-10 && r.theoretical.abs() < 1e-10, "{r:?}");
        assert!(mlsi_check(&g, &none, &b_star).unwrap().passed);
        let m = 0.7;
        let shift = Tilt { slope: m, waves: vec![] };
        let r = talagrand_check(&g, &shift, &b).unwrap();
        assert!((r.theoretical - m * m / 2.0).abs() < 1e-8, "{r:?}");
        assert!((r.empirical - m * m / 2.0).abs() < 1e-6, "{r:?}");
        let eps = 0.1;
        let r = mlsi_check(&g, &Tilt { slope: eps, waves: vec![] }, &b_star).unwrap();
        assert!((r.empirical - eps * eps / 2.0).abs() < 1e-8);
        assert!((r.theoretical - eps * eps / 2.0).abs() < 1e-6, "{r:?}");
        assert!(r.passed);
        // variance ½: f ∝ e^{−x²/2}, strict inequality
        let narrow = Potential::gaussian_with(vec![0.0], 0.5f64.sqrt()).unwrap();
        let map = TransportMap1D::new(&g, &narrow).unwrap();
        assert!((map.eval(1.0) - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn kl_oracle_for_waves() {
        // quadrature oracle on a uniform grid
        let g = Potential::gaussian(1);
        let tilt = Tilt { slope: 0.2, waves: vec![[0.3, 1.5, 0.4]] };
        let z: f64 = (0..40_001).map(|i| -20.0 + 1e-3 * i as f64).map(|x| (tilt.value(x) - 0.5 * x * x).exp()).sum::<f64>() * 1e-3;
        let kl: f64 = (0..40_001)
            .map(|i| -20.0 + 1e-3 * i as f64)
            .map(|x| {
                let f = tilt.value(x).exp() / z * (2.0 * std::f64::consts::PI).sqrt();
                f * f.ln() * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
            })
            .sum::<f64>()
            * 1e-3;
        assert!((relative_entropy(&g, &tilt).unwrap() - kl).abs() < 1e-9);
    }

    #[test]
    fn marton_gaussian_exact() {
        let g = Potential::gaussian(1);
        let bt = square(ModulusKind::BregmanConvexified, 0.5, 2.0);
        for &r in &[0.0, 0.5, 1.0, 2.0] {
            let rep = marton_check(&g, &half_line(), r, Norm::L2, &bt, Measurement::Exact).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!((rep.theoretical - (1.0 / (0.5 * normal_sf(r))).ln()).abs() < 1e-9);
        }
        // displayed form at r = 1: e¹ ≤ 1/(½(1 − Φ(1))) ≈ 12.6
        let rep = marton_check(&g, &half_line(), 1.0, Norm::L2, &bt, Measurement::Exact).unwrap();
        assert_eq!(rep.witness["displayed_holds"], serde_json::json!(true));
        assert!((rep.theoretical.exp() - 12.6).abs() < 0.05);
        let mc = marton_check(&g, &half_line(), 1.0, Norm::L2, &bt, Measurement::MonteCarlo { n: 100_000, seed: 1 }).unwrap();
        assert!(mc.passed);
        assert!((mc.witness["nu_a"].as_f64().unwrap() - 0.5).abs() < 0.01);
    }
}
