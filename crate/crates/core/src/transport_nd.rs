//! Entropic optimal transport in dimensions 2 and 3.
//!
//! The solver works with the cost `|x − y|²/2` and the plan
//! `π_ij = a_i b_j exp((f_i + g_j − c_ij)/ε)`. The source dual extends to
//! every `x` through the soft-min over the target samples, so
//! `φ(x) = |x|²/2 − f(x)` is a smooth convex surrogate for the Brenier
//! potential with `∇φ` the barycentric map and `D²φ = Cov_w(y)/ε`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::measures::{dist2, dot, sample, ConvexBody, Potential};
use crate::optim::nelder_mead;
use crate::rng::{derive_seed, par_map, stream};

/// What the source is transported onto.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Uniform measure on a convex body, discretized by a shifted Halton set.
    Body { body: ConvexBody },
    /// An unbounded log-concave measure, discretized by i.i.d. samples.
    Measure { potential: Potential },
}

impl Target {
    pub fn dim(&self) -> usize {
        match self {
            Target::Body { body } => body.dim(),
            Target::Measure { potential } => potential.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub n: usize,
    pub m: usize,
    /// `None` means `5e−3 · diam²` of the target discretization.
    pub epsilon: Option<f64>,
    /// L1 marginal error at which iteration stops.
    pub tol: f64,
    /// Sup-norm change of the duals below which iteration stops.
    pub dual_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self { n: 2000, m: 2000, epsilon: None, tol: 1e-6, dual_tol: 1e-8, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropicTransport {
    pub dim: usize,
    pub source_samples: Vec<Vec<f64>>,
    pub target_samples: Vec<Vec<f64>>,
    pub epsilon: f64,
    pub dual_f: Vec<f64>,
    pub dual_g: Vec<f64>,
    pub iterations_run: usize,
    pub marginal_error: f64,
    /// Sup-norm change of `f` in the last update.
    pub dual_change: f64,
    pub converged: bool,
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `m` points of `body`: a randomly shifted Halton sequence on the bounding
/// box, keeping those inside.
pub fn halton_in_body(body: &ConvexBody, m: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    const BASES: [u64; 3] = [2, 3, 5];
    let d = body.dim();
    if d > BASES.len() {
        return Err(Error::Unsupported(format!("Halton targets need d ≤ 3, got {d}")));
    }
    let (lo, hi) = body.bounding_box();
    let mut rng = stream(seed, "halton-shift", 0);
    let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let mut out = Vec::with_capacity(m);
    let mut i = 1u64;
    let limit = 10_000 * m as u64 + 10_000;
    while out.len() < m {
        if i > limit {
            return Err(Error::LowAcceptance { acceptance: out.len() as f64 / i as f64 });
        }
        let p: Vec<f64> = (0..d)
            .map(|k| {
                let u = (halton(i, BASES[k]) + shift[k]).fract();
                lo[k] + (hi[k] - lo[k]) * u
            })
            .collect();
        if body.contains(&p) {
            out.push(p);
        }
        i += 1;
    }
    Ok(out)
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return mx;
    }
    mx + v.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

fn half_sq_dist(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
}

fn cloud_diameter(pts: &[Vec<f64>]) -> f64 {
    let d = pts[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in pts {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
}

/// Sweep `dual ← −ε LSE(other − cost)/ε + ln w)` over the rows of `cost`
/// (row-major `rows × cols`). Returns the new dual.
fn sweep(cost: &[f64], rows: usize, cols: usize, other: &[f64], log_w: f64, eps: f64) -> Vec<f64> {
    par_map(rows, |i| {
        let row = &cost[i * cols..(i + 1) * cols];
        let mut buf: Vec<f64> = row.iter().zip(other).map(|(c, g)| (g - c) / eps).collect();
        buf.iter_mut().for_each(|v| *v += log_w);
        -eps * log_sum_exp(&buf)
    })
}

/// Log-domain Sinkhorn with ε-scaling from the squared diameter down to `ε`.
pub fn solve_entropic(source: &Potential, target: &Target, spec: &SolverSpec, seed: u64) -> Result<EntropicTransport> {
    let d = source.dim();
    if !(2..=3).contains(&d) {
        return Err(param("dim", "entropic transport supports d ∈ {2, 3}"));
    }
    if target.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: target.dim() });
    }
    if spec.n < 2 || spec.m < 2 {
        return Err(param("n, m", "need at least two points on each side"));
    }
    if let Some(e) = spec.epsilon {
        if !(e > 0.0) {
            return Err(param("epsilon", "must be positive"));
        }
    }
    if !(spec.tol > 0.0) || spec.max_iter == 0 {
        return Err(param("tol, max_iter", "must be positive"));
    }
    let xs = sample(source, spec.n, derive_seed(seed, "nd-source", 0))?;
    let ys = match target {
        Target::Body { body } => halton_in_body(body, spec.m, derive_seed(seed, "nd-target", 0))?,
        Target::Measure { potential } => sample(potential, spec.m, derive_seed(seed, "nd-target", 0))?,
    };
    let diam = cloud_diameter(&ys);
    let eps = spec.epsilon.unwrap_or(5e-3 * diam * diam);
    let (n, m) = (xs.len(), ys.len());
    let cost: Vec<f64> = par_map(n, |i| ys.iter().map(|y| half_sq_dist(&xs[i], y)).collect::<Vec<_>>()).concat();
    let cost_t: Vec<f64> = par_map(m, |j| (0..n).map(|i| cost[i * m + j]).collect::<Vec<_>>()).concat();
    let (log_a, log_b) = (-(n as f64).ln(), -(m as f64).ln());

    let mut f = vec![0.0; n];
    let mut g = vec![0.0; m];
    let mut stage_eps = (diam * diam).max(eps);
    let mut iterations = 0;
    let (mut err, mut change) = (f64::INFINITY, f64::INFINITY);
    loop {
        let last = stage_eps <= eps;
        let (stage_tol, stage_cap) = if last { (spec.tol, spec.max_iter) } else { (1e-3, 200) };
        let mut stage_iters = 0;
        while iterations < spec.max_iter && stage_iters < stage_cap {
            g = sweep(&cost_t, m, n, &f, log_a, stage_eps);
            let f_new = sweep(&cost, n, m, &g, log_b, stage_eps);
            // row marginal of the plan before this f-update
            let row_err: Vec<f64> = (0..n).map(|i| ((f[i] - f_new[i]) / stage_eps + log_a).exp() - log_a.exp()).collect();
            err = row_err.iter().map(|v| v.abs()).sum();
            change = f.iter().zip(&f_new).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            f = f_new;
            iterations += 1;
            stage_iters += 1;
            if err < stage_tol && (!last || change < spec.dual_tol) {
                break;
            }
        }
        if last || iterations >= spec.max_iter {
            break;
        }
        stage_eps = (0.5 * stage_eps).max(eps);
    }
    let converged = stage_eps <= eps && err < spec.tol && change < spec.dual_tol;
    Ok(EntropicTransport {
        dim: d,
        source_samples: xs,
        target_samples: ys,
        epsilon: eps,
        dual_f: f,
        dual_g: g,
        iterations_run: iterations,
        marginal_error: err,
        dual_change: change,
        converged,
    })
}

/// Value, map and Hessian of the surrogate potential at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPotential {
    pub phi: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
}

impl EntropicTransport {
    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite point".into()));
        }
        Ok(())
    }

    fn log_weights(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let log_b = -(self.target_samples.len() as f64).ln();
        let s: Vec<f64> = self
            .target_samples
            .iter()
            .zip(&self.dual_g)
            .map(|(y, g)| (g - half_sq_dist(x, y)) / self.epsilon + log_b)
            .collect();
        let lse = log_sum_exp(&s);
        (s, lse)
    }

    /// Out-of-sample source dual `f(x) = −ε LSE_j((g_j − |x − y_j|²/2)/ε + ln b_j)`.
    pub fn dual_source(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(-self.epsilon * self.log_weights(x).1)
    }

    /// `φ(x) = |x|²/2 − f(x)`.
    pub fn potential(&self, x: &[f64]) -> Result<f64> {
        Ok(0.5 * dot(x, x) - self.dual_source(x)?)
    }

    pub fn local(&self, x: &[f64]) -> Result<LocalPotential> {
        self.check_point(x)?;
        let d = self.dim;
        let (s, lse) = self.log_weights(x);
        let mut mean = vec![0.0; d];
        let mut second = vec![vec![0.0; d]; d];
        for (y, v) in self.target_samples.iter().zip(&s) {
            let w = (v - lse).exp();
            for a in 0..d {
                mean[a] += w * y[a];
                for b in 0..d {
                    second[a][b] += w * y[a] * y[b];
                }
            }
        }
        let mut hessian = vec![vec![0.0; d]; d];
        for a in 0..d {
            for b in 0..d {
                hessian[a][b] = (second[a][b] - mean[a] * mean[b]) / self.epsilon;
            }
            // rounding can push a tiny variance below zero
            hessian[a][a] = hessian[a][a].max(0.0);
        }
        Ok(LocalPotential { phi: 0.5 * dot(x, x) + self.epsilon * lse, gradient: mean, hessian })
    }

    /// Barycentric map `T(x) = Σ_j w_j(x) y_j`.
    pub fn map_eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let (s, lse) = self.log_weights(x);
        let mut out = vec![0.0; self.dim];
        for (y, v) in self.target_samples.iter().zip(&s) {
            let w = (v - lse).exp();
            for k in 0..self.dim {
                out[k] += w * y[k];
            }
        }
        Ok(out)
    }

    /// `(φ_h, φ_hh)` at `x` from the barycentre and weighted variance.
    pub fn directional(&self, x: &[f64], h: &[f64]) -> Result<(f64, f64)> {
        let loc = self.local(x)?;
        let first = dot(&loc.gradient, h);
        let second: f64 = (0..self.dim).map(|a| (0..self.dim).map(|b| h[a] * loc.hessian[a][b] * h[b]).sum::<f64>()).sum();
        Ok((first, second.max(0.0)))
    }

    /// `φ(x + th) + φ(x − th) − 2φ(x)`; needs `t > 2√ε`.
    pub fn potential_second_quotient(&self, x: &[f64], h: &[f64], t: f64) -> Result<f64> {
        self.check_point(x)?;
        if h.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: h.len() });
        }
        if !(t > 2.0 * self.epsilon.sqrt()) {
            return Err(Error::Domain(format!("t = {t} is below 2√ε = {}", 2.0 * self.epsilon.sqrt())));
        }
        let plus: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + t * b).collect();
        let minus: Vec<f64> = x.iter().zip(h).map(|(a, b)| a - t * b).collect();
        Ok(self.potential(&plus)? + self.potential(&minus)? - 2.0 * self.potential(x)?)
    }

    /// Largest `|x|` among the source samples, used to bound searches.
    pub fn source_radius(&self) -> f64 {
        self.source_samples.iter().map(|p| dot(p, p).sqrt()).fold(0.0, f64::max)
    }
}

/// Maximizing pair of a Hölder quotient in `ℝ^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderWitnessNd {
    pub value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn quotient<F, D>(map: &F, denom: &D, x: &[f64], y: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    D: Fn(f64) -> f64,
{
    let (tx, ty) = (map(x)?, map(y)?);
    Ok(dist2(&tx, &ty) / denom(dist2(x, y)))
}

fn unit_from_angles(angles: &[f64]) -> Vec<f64> {
    match angles.len() {
        1 => vec![angles[0].cos(), angles[0].sin()],
        _ => {
            let (a, b) = (angles[0], angles[1]);
            vec![b.sin() * a.cos(), b.sin() * a.sin(), b.cos()]
        }
    }
}

/// `sup |T(x) − T(y)| / |x − y|^α`; see [`pair_sup_nd`].
pub fn holder_sup_nd<F>(
    map: F,
    points: &[Vec<f64>],
    alpha: f64,
    min_sep: f64,
    radius: f64,
    pair_count: usize,
    seed: u64,
) -> Result<HolderWitnessNd>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(param("alpha", "need 0 < α ≤ 1"));
    }
    pair_sup_nd(map, |s| s.powf(alpha), points, min_sep, radius, pair_count, seed)
}

/// `sup |T(x) − T(y)| / denom(|x − y|)` over random pairs of `points` at
/// separation at least `min_sep`, followed by a local polish of the
/// incumbent over the midpoint, direction and log-separation. The polish
/// keeps both points inside the ball of radius `radius`.
pub fn pair_sup_nd<F, D>(
    map: F,
    denom: D,
    points: &[Vec<f64>],
    min_sep: f64,
    radius: f64,
    pair_count: usize,
    seed: u64,
) -> Result<HolderWitnessNd>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    if points.len() < 2 || pair_count == 0 {
        return Err(Error::Domain("need at least two points and one pair".into()));
    }
    let d = points[0].len();
    const CHUNK: usize = 1024;
    let chunks = pair_count.div_ceil(CHUNK);
    let found: Vec<Result<Option<HolderWitnessNd>>> = par_map(chunks, |c| {
        let mut rng = stream(seed, "nd-pairs", c as u64);
        let mut best: Option<HolderWitnessNd> = None;
        for _ in 0..CHUNK.min(pair_count - c * CHUNK) {
            let i = rng.random_range(0..points.len());
            let j = rng.random_range(0..points.len());
            let (x, y) = (&points[i], &points[j]);
            if dist2(x, y) < min_sep {
                continue;
            }
            let v = quotient(&map, &denom, x, y)?;
            if best.as_ref().is_none_or(|b| v > b.value) {
                best = Some(HolderWitnessNd { value: v, x: x.clone(), y: y.clone() });
            }
        }
        Ok(best)
    });
    let mut best: Option<HolderWitnessNd> = None;
    for r in found {
        if let Some(w) = r? {
            if best.as_ref().is_none_or(|b| w.value > b.value) {
                best = Some(w);
            }
        }
    }
    let mut best = best.ok_or_else(|| Error::Domain(format!("no pair with separation ≥ {min_sep}")))?;

    // polish over (midpoint, angles, ln(separation / min_sep))
    let decode = |p: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mid = &p[..d];
        let u = unit_from_angles(&p[d..2 * d - 1]);
        let half = 0.5 * min_sep * p[2 * d - 1].exp().max(1.0);
        let x: Vec<f64> = mid.iter().zip(&u).map(|(m, v)| m + half * v).collect();
        let y: Vec<f64> = mid.iter().zip(&u).map(|(m, v)| m - half * v).collect();
        (x, y)
    };
    let objective = |p: &[f64]| -> f64 {
        let (x, y) = decode(p);
        if dot(&x, &x).sqrt() > radius || dot(&y, &y).sqrt() > radius {
            return f64::INFINITY;
        }
        quotient(&map, &denom, &x, &y).map(|v| -v).unwrap_or(f64::INFINITY)
    };
    let mid: Vec<f64> = best.x.iter().zip(&best.y).map(|(a, b)| 0.5 * (a + b)).collect();
    let diff: Vec<f64> = best.x.iter().zip(&best.y).map(|(a, b)| a - b).collect();
    let sep = dot(&diff, &diff).sqrt();
    let mut start = mid;
    if d == 2 {
        start.push(diff[1].atan2(diff[0]));
    } else {
        start.push(diff[1].atan2(diff[0]));
        start.push((diff[2] / sep).clamp(-1.0, 1.0).acos());
    }
    start.push((sep / min_sep).ln());
    let mut step = vec![0.25 * sep.max(min_sep); d];
    step.extend(std::iter::repeat_n(0.3, d - 1));
    step.push(0.5);
    let (p, v) = nelder_mead(objective, &start, &step, 400 * (2 * d));
    if -v > best.value {
        let (x, y) = decode(&p);
        let value = quotient(&map, &denom, &x, &y)?;
        if value > best.value {
            best = HolderWitnessNd { value, x, y };
        }
    }
    Ok(best)
}

/// Lipschitz constant of the entropic map over source pairs separated by `4√ε`.
pub fn empirical_lipschitz_nd(tp: &EntropicTransport, pair_count: usize, seed: u64) -> Result<HolderWitnessNd> {
    empirical_holder_nd(tp, 1.0, pair_count, seed)
}

pub fn empirical_holder_nd(tp: &EntropicTransport, alpha: f64, pair_count: usize, seed: u64) -> Result<HolderWitnessNd> {
    holder_sup_nd(
        |x| tp.map_eval(x),
        &tp.source_samples,
        alpha,
        4.0 * tp.epsilon.sqrt(),
        tp.source_radius(),
        pair_count,
        seed,
    )
}

/// Smallest `⟨T(x) − T(y), x − y⟩` over random source pairs.
pub fn monotonicity_proxy(tp: &EntropicTransport, pair_count: usize, seed: u64) -> Result<f64> {
    let mut rng = stream(seed, "nd-monotone", 0);
    let n = tp.source_samples.len();
    let pairs: Vec<(usize, usize)> = (0..pair_count).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
    let maps: Vec<Vec<f64>> = par_map(n, |i| tp.map_eval(&tp.source_samples[i]).unwrap_or_default());
    let mut worst = f64::INFINITY;
    for (i, j) in pairs {
        let (x, y) = (&tp.source_samples[i], &tp.source_samples[j]);
        let v: f64 = (0..tp.dim).map(|k| (maps[i][k] - maps[j][k]) * (x[k] - y[k])).sum();
        worst = worst.min(v);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::supporting_slab;

    fn small() -> SolverSpec {
        SolverSpec { n: 400, m: 400, epsilon: Some(0.02), ..Default::default() }
    }

    #[test]
    fn halton_points_lie_in_body() {
        let ball = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let pts = halton_in_body(&ball, 500, 3).unwrap();
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|p| ball.contains(p)));
        assert_eq!(pts, halton_in_body(&ball, 500, 3).unwrap());
        // stratification: the mean is much closer to 0 than i.i.d. noise 1/(2√500)
        let mean: Vec<f64> = (0..2).map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / 500.0).collect();
        assert!(mean.iter().all(|m| m.abs() < 0.01), "{mean:?}");
    }

    #[test]
    fn converges_with_feasible_marginals() {
        let tp = solve_entropic(&Potential::gaussian(2), &Target::Body { body: ConvexBody::unit_box(2) }, &small(), 1).unwrap();
        assert!(tp.converged, "err {} change {}", tp.marginal_error, tp.dual_change);
        assert!(tp.marginal_error < 1e-6);
        // one more update leaves the duals in place
        let log_b = -(tp.target_samples.len() as f64).ln();
        let f1: Vec<f64> = tp
            .source_samples
            .iter()
            .map(|x| {
                let s: Vec<f64> = tp.target_samples.iter().zip(&tp.dual_g).map(|(y, g)| (g - half_sq_dist(x, y)) / tp.epsilon + log_b).collect();
                -tp.epsilon * log_sum_exp(&s)
            })
            .collect();
        let change = f1.iter().zip(&tp.dual_f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(change < 1e-8, "{change}");
    }

    #[test]
    fn map_properties_gaussian_to_box() {
        let body = ConvexBody::unit_box(2);
        let tp = solve_entropic(&Potential::gaussian(2), &Target::Body { body: body.clone() }, &small(), 2).unwrap();
        let se = tp.epsilon.sqrt();
        let t0 = tp.map_eval(&[0.0, 0.0]).unwrap();
        assert!(t0.iter().all(|v| v.abs() < 3.0 * se), "{t0:?}");
        let far = tp.map_eval(&[4.0, 0.0]).unwrap();
        assert!((far[0] - 1.0).abs() < se, "{far:?}");
        for x in tp.source_samples.iter().take(200) {
            assert!(body.outside_distance(&tp.map_eval(x).unwrap()) <= 3.0 * se);
        }
        assert!(monotonicity_proxy(&tp, 10_000, 5).unwrap() >= -5.0 * tp.epsilon);
        // the Hessian agrees with differences of the map
        let x = [0.3, -0.2];
        let loc = tp.local(&x).unwrap();
        let h = 1e-5;
        for a in 0..2 {
            let mut xp = x.to_vec();
            xp[a] += h;
            let mut xm = x.to_vec();
            xm[a] -= h;
            let (tp_, tm) = (tp.map_eval(&xp).unwrap(), tp.map_eval(&xm).unwrap());
            for b in 0..2 {
                assert!(((tp_[b] - tm[b]) / (2.0 * h) - loc.hessian[b][a]).abs() < 1e-6);
            }
            assert!(((tp.potential(&xp).unwrap() - tp.potential(&xm).unwrap()) / (2.0 * h) - loc.gradient[a]).abs() < 1e-7);
        }
        let (first, second) = tp.directional(&x, &[1.0, 0.0]).unwrap();
        assert_eq!(first, loc.gradient[0]);
        assert_eq!(second, loc.hessian[0][0]);
    }

    #[test]
    fn self_transport_is_near_identity() {
        let body = ConvexBody::unit_box(2);
        let tp = solve_entropic(&Potential::uniform(body.clone()), &Target::Body { body }, &small(), 4).unwrap();
        let se = tp.epsilon.sqrt();
        let disp: f64 = tp
            .source_samples
            .iter()
            .map(|x| {
                let t = tp.map_eval(x).unwrap();
                ((t[0] - x[0]).powi(2) + (t[1] - x[1]).powi(2)).sqrt()
            })
            .sum::<f64>()
            / tp.source_samples.len() as f64;
        assert!(disp < 3.0 * se, "{disp}");
        let x = [0.1, 0.2];
        for &t in &[0.4, 0.6] {
            let q = tp.potential_second_quotient(&x, &[1.0, 0.0], t).unwrap();
            assert!((q - t * t).abs() / (t * t) < 10.0 * se / t, "t = {t}: {q}");
        }
        assert!(tp.potential_second_quotient(&x, &[1.0, 0.0], 0.1).is_err());
        let lip = empirical_lipschitz_nd(&tp, 4000, 1).unwrap();
        assert!(lip.value <= 1.0 + 10.0 * se, "{lip:?}");
    }

    #[test]
    fn ball_target_and_lipschitz_witness() {
        let ball = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let tp = solve_entropic(&Potential::gaussian(2), &Target::Body { body: ball.clone() }, &small(), 6).unwrap();
        let se = tp.epsilon.sqrt();
        for x in tp.source_samples.iter().take(100) {
            assert!(ball.outside_distance(&tp.map_eval(x).unwrap()) <= se);
        }
        let w = empirical_lipschitz_nd(&tp, 4000, 9).unwrap();
        let again = quotient(&|x: &[f64]| tp.map_eval(x), &|s: f64| s, &w.x, &w.y).unwrap();
        assert!((again - w.value).abs() <= 1e-9);
        let (t0, a) = supporting_slab(&ball, &[1.0, 0.0]).unwrap();
        assert_eq!((t0, a), (0.0, 1.0));
    }

    #[test]
    fn quotient_scales_quadratically() {
        let spec = small();
        let tp1 = solve_entropic(&Potential::gaussian(2), &Target::Body { body: ConvexBody::unit_box(2) }, &spec, 8).unwrap();
        // scaling both measures by λ scales φ by λ² at scaled points
        let lam = 2.0;
        let mut tp2 = tp1.clone();
        tp2.epsilon *= lam * lam;
        tp2.source_samples.iter_mut().flatten().for_each(|v| *v *= lam);
        tp2.target_samples.iter_mut().flatten().for_each(|v| *v *= lam);
        tp2.dual_f.iter_mut().for_each(|v| *v *= lam * lam);
        tp2.dual_g.iter_mut().for_each(|v| *v *= lam * lam);
        let x = [0.2, 0.1];
        let q1 = tp1.potential_second_quotient(&x, &[1.0, 0.0], 0.5).unwrap();
        let q2 = tp2.potential_second_quotient(&[0.4, 0.2], &[1.0, 0.0], 1.0).unwrap();
        assert!((q2 - lam * lam * q1).abs() < 1e-10 * q2.abs().max(1.0));
    }

    #[test]
    fn deterministic_given_seed() {
        let t = Target::Body { body: ConvexBody::unit_box(2) };
        let a = solve_entropic(&Potential::gaussian(2), &t, &small(), 11).unwrap();
        let b = solve_entropic(&Potential::gaussian(2), &t, &small(), 11).unwrap();
        assert_eq!(a.dual_f, b.dual_f);
        assert_eq!(a.dual_g, b.dual_g);
    }
}
