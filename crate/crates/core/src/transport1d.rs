//! Exact one-dimensional optimal transport `T = Q_ν ∘ F_μ`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::measures::{Cdf1D, Family, Potential};
use crate::quad;
use crate::rng::{self, par_map};

/// Source quantile band on which the map is tabulated and searched.
pub const QUANTILE_BAND: (f64, f64) = (1e-6, 1.0 - 1e-6);
const NODES: usize = 4096;

/// Monotone map between two one-dimensional measures, tabulated on a
/// uniform grid over the source quantile band with exact slopes
/// `T' = ρ_μ / ρ_ν(T)` and monotone cubic Hermite interpolation.
#[derive(Debug, Clone)]
pub struct TransportMap1D {
    source: Cdf1D,
    target: Cdf1D,
    xs: Vec<f64>,
    ts: Vec<f64>,
    slopes: Vec<f64>,
}

impl TransportMap1D {
    pub fn new(source: &Potential, target: &Potential) -> Result<Self> {
        Self::with_resolution(source, target, NODES)
    }

    pub fn with_resolution(source: &Potential, target: &Potential, nodes: usize) -> Result<Self> {
        if source.dim() != 1 || target.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: source.dim().max(target.dim()) });
        }
        if nodes < 16 {
            return Err(param("resolution", "need at least 16 nodes"));
        }
        if let Family::UniformBody { body } = target.family() {
            // a one-dimensional convex body is always an interval
            debug_assert_eq!(body.dim(), 1);
        }
        let src = Cdf1D::new(source)?;
        let tgt = Cdf1D::new(target)?;
        let lo = src.quantile(QUANTILE_BAND.0)?;
        let hi = src.quantile(QUANTILE_BAND.1)?;
        let xs: Vec<f64> = (0..nodes).map(|i| lo + (hi - lo) * i as f64 / (nodes - 1) as f64).collect();
        let ts: Vec<f64> = par_map(nodes, |i| {
            let u = src.cdf(xs[i]).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
            tgt.quantile(u).expect("level inside (0, 1)")
        });
        let slopes: Vec<f64> = xs.iter().zip(&ts).map(|(&x, &t)| src.density(x) / tgt.density(t)).collect();
        let mut map = Self { source: src, target: tgt, xs, ts, slopes };
        map.limit_slopes();
        Ok(map)
    }

    // Fritsch–Carlson limiter; exact slopes only change where the cubic
    // would overshoot.
    fn limit_slopes(&mut self) {
        for i in 0..self.xs.len() - 1 {
            let h = self.xs[i + 1] - self.xs[i];
            let delta = (self.ts[i + 1] - self.ts[i]) / h;
            if delta == 0.0 {
                self.slopes[i] = 0.0;
                self.slopes[i + 1] = 0.0;
                continue;
            }
            let a = self.slopes[i] / delta;
            let b = self.slopes[i + 1] / delta;
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                self.slopes[i] = tau * a * delta;
                self.slopes[i + 1] = tau * b * delta;
            }
        }
    }

    pub fn source(&self) -> &Cdf1D {
        &self.source
    }

    pub fn target(&self) -> &Cdf1D {
        &self.target
    }

    /// Source interval covered by the table.
    pub fn band(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// `T(x) = φ'(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            let u = self.source.cdf(x);
            if u <= 0.0 {
                return self.target.support().0;
            }
            if u >= 1.0 {
                return self.target.support().1;
            }
            return self.target.quantile(u).unwrap_or(f64::NAN);
        }
        let h = self.xs[1] - self.xs[0];
        let i = (((x - self.xs[0]) / h) as usize).min(n - 2);
        let s = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ts[i], self.ts[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1
    }

    /// `T'(x) = φ''(x) = ρ_μ(x) / ρ_ν(T(x))`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        let t = self.eval(x);
        let (lo, hi) = self.target.support();
        let tol = 1e-12 * (1.0 + t.abs());
        if (t - lo).abs() <= tol || (t - hi).abs() <= tol || t < lo || t > hi {
            return Err(Error::TargetBoundary { value: t });
        }
        Ok(self.source.density(x) / self.target.density(t))
    }

    /// Largest `T'` over `n` equally spaced points of the band, refined by
    /// golden section around the best one; returns `(x, T'(x))`.
    pub fn max_derivative(&self, n: usize) -> Result<(f64, f64)> {
        let (lo, hi) = self.band();
        let n = n.max(3);
        let h = (hi - lo) / (n - 1) as f64;
        let mut best = (lo, f64::NEG_INFINITY);
        for i in 0..n {
            let x = lo + h * i as f64;
            if let Ok(d) = self.derivative(x) {
                if d > best.1 {
                    best = (x, d);
                }
            }
        }
        if !best.1.is_finite() {
            return Err(Error::Domain("T' is undefined on the whole band".into()));
        }
        let (x, neg) = quad::golden_min(
            |x| -self.derivative(x).unwrap_or(f64::NEG_INFINITY),
            (best.0 - h).max(lo),
            (best.0 + h).min(hi),
            1e-12,
        );
        Ok(if -neg > best.1 { (x, -neg) } else { best })
    }

    /// `T⁻¹(c) = Q_μ(F_ν(c))`.
    pub fn inverse(&self, c: f64) -> Result<f64> {
        self.source.quantile(self.target.cdf(c))
    }

    /// `φ(x+t) + φ(x−t) − 2φ(x) = ∫₀ᵗ T(x+s) − T(x−s) ds`.
    pub fn second_difference(&self, x: f64, t: f64) -> f64 {
        let t = t.abs();
        let pieces = ((t / (self.xs[1] - self.xs[0])).ceil() as usize).clamp(1, 512);
        let h = t / pieces as f64;
        (0..pieces)
            .map(|k| quad::gauss_legendre10(|s| self.eval(x + s) - self.eval(x - s), k as f64 * h, (k + 1) as f64 * h))
            .sum()
    }

    /// Rows `(x, T(x), T'(x))` on `n` equally spaced points of the band.
    pub fn table(&self, n: usize) -> Vec<[f64; 3]> {
        let (lo, hi) = self.band();
        (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (n.max(2) - 1) as f64;
                [x, self.eval(x), self.derivative(x).unwrap_or(0.0)]
            })
            .collect()
    }
}

/// `((q+1) C_p / ((p+1) C_q))^{1/(q+1)}` and the exponent `α = (p+1)/(q+1)`.
pub fn gradient_holder_constant(p: f64, q: f64, c_p: f64, c_q: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) || !(q >= 1.0) {
        return Err(param("p, q", "need 0 ≤ p ≤ 1 ≤ q"));
    }
    if !(c_p > 0.0 && c_q > 0.0) {
        return Err(param("C_p, C_q", "must be positive"));
    }
    let c = ((q + 1.0) * c_p / ((p + 1.0) * c_q)).powf(1.0 / (q + 1.0));
    Ok((c, (p + 1.0) / (q + 1.0)))
}

/// Pairs over which a Hölder quotient is maximized: a grid of base points
/// crossed with log-spaced separations, plus uniformly random pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairSpec {
    /// Interval for both points; `None` uses the map's quantile band.
    pub range: Option<(f64, f64)>,
    pub t_min: f64,
    pub t_max: f64,
    pub grid_x: usize,
    pub grid_t: usize,
    pub random_pairs: usize,
    pub refine_rounds: usize,
}

impl Default for PairSpec {
    fn default() -> Self {
        Self { range: None, t_min: 1e-3, t_max: 4.0, grid_x: 512, grid_t: 64, random_pairs: 8192, refine_rounds: 3 }
    }
}

impl PairSpec {
    fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min) {
            return Err(param("pair_spec", "need 0 < t_min < t_max"));
        }
        if self.grid_x < 2 || self.grid_t < 2 {
            return Err(param("pair_spec", "grids need at least two points"));
        }
        if let Some((lo, hi)) = self.range {
            if !(hi > lo) {
                return Err(param("pair_spec", "empty range"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub value: f64,
    pub x: f64,
    pub y: f64,
}

/// `sup |f(x) − f(y)| / |x − y|^α` over the pair spec, with the maximizing pair.
pub fn holder_sup_1d<F>(f: F, range: (f64, f64), alpha: f64, spec: &PairSpec, seed: u64) -> Result<HolderEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(param("alpha", "need 0 < α ≤ 1"));
    }
    pair_sup_1d(f, |t| t.powf(alpha), range, spec, seed)
}

/// `sup |f(x) − f(y)| / denom(|x − y|)` over the pair spec. `denom` must be
/// positive for positive separations.
pub fn pair_sup_1d<F, D>(f: F, denom: D, range: (f64, f64), spec: &PairSpec, seed: u64) -> Result<HolderEstimate>
where
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    let (lo, hi) = spec.range.unwrap_or(range);
    if !(hi - lo > spec.t_min) {
        return Err(param("pair_spec", "range shorter than the smallest separation"));
    }
    let t_hi = spec.t_max.min(hi - lo);
    let ratio = |x: f64, t: f64| -> f64 {
        if !(t > 0.0) || x < lo || x + t > hi {
            return f64::NEG_INFINITY;
        }
        (f(x + t) - f(x)).abs() / denom(t)
    };
    let lt = |k: usize| (spec.t_min.ln() + (t_hi / spec.t_min).ln() * k as f64 / (spec.grid_t - 1) as f64).exp();

    let better = |a: &HolderEstimate, b: &HolderEstimate| b.value > a.value;
    let empty = HolderEstimate { value: f64::NEG_INFINITY, x: lo, y: lo };

    // pairs are parametrized by their midpoint and separation
    let at = |m: f64, t: f64| HolderEstimate { value: ratio(m - 0.5 * t, t), x: m - 0.5 * t, y: m + 0.5 * t };
    let rows = par_map(spec.grid_x, |i| {
        let m = lo + (hi - lo) * i as f64 / (spec.grid_x - 1) as f64;
        let mut best = empty;
        for k in 0..spec.grid_t {
            let cand = at(m, lt(k));
            if better(&best, &cand) {
                best = cand;
            }
        }
        best
    });
    const CHUNK: usize = 1024;
    let randoms = par_map(spec.random_pairs.div_ceil(CHUNK), |c| {
        let mut rng = rng::stream(seed, "holder-pairs", c as u64);
        let mut best = empty;
        for _ in 0..CHUNK.min(spec.random_pairs - c * CHUNK) {
            let a = lo + (hi - lo) * rng.random::<f64>();
            let b = lo + (hi - lo) * rng.random::<f64>();
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            let cand = HolderEstimate { value: ratio(x, y - x), x, y };
            if y - x >= spec.t_min && better(&best, &cand) {
                best = cand;
            }
        }
        best
    });
    let mut best = empty;
    for c in rows.into_iter().chain(randoms) {
        if better(&best, &c) {
            best = c;
        }
    }

    let mut hm = (hi - lo) / (spec.grid_x - 1) as f64;
    let mut hl = (t_hi / spec.t_min).ln() / (spec.grid_t - 1) as f64;
    for _ in 0..spec.refine_rounds {
        let (m0, lt0) = (0.5 * (best.x + best.y), (best.y - best.x).ln());
        for i in -4i32..=4 {
            let m = m0 + hm * i as f64 / 4.0;
            let local = (-4i32..=4).map(|j| (lt0 + hl * j as f64 / 4.0).exp().clamp(spec.t_min, t_hi));
            for t in local.chain((0..spec.grid_t).map(lt)) {
                let cand = at(m, t);
                if better(&best, &cand) {
                    best = cand;
                }
            }
        }
        hm /= 8.0;
        hl /= 8.0;
    }
    if !best.value.is_finite() {
        return Err(param("pair_spec", "no admissible pair"));
    }
    Ok(best)
}

/// Hölder quotient of a transport map over its quantile band.
pub fn empirical_holder_1d(map: &TransportMap1D, alpha: f64, spec: &PairSpec, seed: u64) -> Result<HolderEstimate> {
    holder_sup_1d(|x| map.eval(x), map.band(), alpha, spec, seed)
}
