//! Convexity moduli `δ`, `b`, the convexified `b̃` and the conjugate `b*`.
//!
//! The infima run over `x` in a box and `y` on the sphere `‖y‖ = t`: a
//! coarse grid over positions and directions, zoom rounds around the
//! incumbent, then a Nelder–Mead polish over all continuous parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::potential::{Family, Potential};
use super::{dot, Norm};
use crate::error::{param, Error, Result};
use crate::optim::nelder_mead;
use crate::quad;
use crate::rng::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    Delta,
    Bregman,
    BregmanConvexified,
    BregmanConjugate,
}

impl ModulusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModulusKind::Delta => "delta",
            ModulusKind::Bregman => "bregman",
            ModulusKind::BregmanConvexified => "bregman_convexified",
            ModulusKind::BregmanConjugate => "bregman_conjugate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSpec {
    /// Positions range over `[-x_half_width, x_half_width]^d`.
    pub x_half_width: f64,
    pub grid_per_axis: usize,
    pub grid_per_axis_3d: usize,
    /// Number of directions on the circle in 2D.
    pub directions: usize,
    pub zoom_rounds: usize,
    pub polish: bool,
}

impl Default for SearchSpec {
    fn default() -> Self {
        Self {
            x_half_width: 10.0,
            grid_per_axis: 64,
            grid_per_axis_3d: 16,
            directions: 64,
            zoom_rounds: 2,
            polish: true,
        }
    }
}

impl SearchSpec {
    fn validate(&self) -> Result<()> {
        if !(self.x_half_width > 0.0) {
            return Err(Error::EmptySearch("x box has no interior"));
        }
        if self.grid_per_axis < 2 || self.grid_per_axis_3d < 2 {
            return Err(Error::EmptySearch("need at least two grid points per axis"));
        }
        if self.directions == 0 {
            return Err(Error::EmptySearch("no search directions"));
        }
        Ok(())
    }

    fn axis_count(&self, dim: usize) -> usize {
        if dim >= 3 {
            self.grid_per_axis_3d
        } else {
            self.grid_per_axis
        }
    }
}

/// Minimizing (or maximizing) configuration found by a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone)]
struct Candidate {
    params: Vec<f64>,
    orient: f64,
    value: f64,
}

struct Engine<'a, F> {
    dim: usize,
    norm: Norm,
    spec: &'a SearchSpec,
    /// `Some((lo, hi))` when `t` is searched over, else `t` is fixed.
    t_span: Option<(f64, f64)>,
    t_fixed: f64,
    obj: F,
}

fn angle_count(dim: usize) -> usize {
    dim.saturating_sub(1)
}

fn euclid_dir(dim: usize, angles: &[f64], orient: f64) -> Vec<f64> {
    match dim {
        1 => vec![orient],
        2 => vec![angles[0].cos(), angles[0].sin()],
        _ => {
            let (th, ph) = (angles[0], angles[1]);
            vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
        }
    }
}

/// Unit directions (Euclidean) used to seed searches: `±1` in 1D, `n`
/// equally spaced on the circle in 2D, axes and diagonals in 3D.
pub fn direction_set(dim: usize, n: usize) -> Vec<Vec<f64>> {
    seed_directions(dim, n).into_iter().map(|(o, a)| euclid_dir(dim, &a, o)).collect()
}

fn seed_directions(dim: usize, n: usize) -> Vec<(f64, Vec<f64>)> {
    match dim {
        1 => vec![(1.0, vec![]), (-1.0, vec![])],
        2 => (0..n).map(|k| (1.0, vec![2.0 * PI * k as f64 / n as f64])).collect(),
        _ => {
            let mut out = Vec::new();
            for a in -1i32..=1 {
                for b in -1i32..=1 {
                    for c in -1i32..=1 {
                        if a == 0 && b == 0 && c == 0 {
                            continue;
                        }
                        let r = ((a * a + b * b + c * c) as f64).sqrt();
                        let th = (c as f64 / r).acos();
                        let ph = (b as f64).atan2(a as f64);
                        out.push((1.0, vec![th, ph]));
                    }
                }
            }
            out
        }
    }
}

impl<'a, F> Engine<'a, F>
where
    F: Fn(&[f64], &[f64], f64) -> f64 + Sync,
{
    fn decode(&self, params: &[f64], orient: f64) -> (Vec<f64>, Vec<f64>, f64) {
        let d = self.dim;
        let w = self.spec.x_half_width;
        let x: Vec<f64> = params[..d].iter().map(|v| v.clamp(-w, w)).collect();
        let na = angle_count(d);
        let e = euclid_dir(d, &params[d..d + na], orient);
        let scale = self.norm.of(&e);
        let u: Vec<f64> = e.iter().map(|v| v / scale).collect();
        let t = match self.t_span {
            Some((lo, hi)) => params[d + na].clamp(lo.ln(), hi.ln()).exp(),
            None => self.t_fixed,
        };
        (x, u, t)
    }

    fn value(&self, params: &[f64], orient: f64) -> f64 {
        let (x, u, t) = self.decode(params, orient);
        let v = (self.obj)(&x, &u, t);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn run(&self) -> Witness {
        let d = self.dim;
        let n = self.spec.axis_count(d);
        let w = self.spec.x_half_width;
        let axis: Vec<f64> = (0..n).map(|k| -w + 2.0 * w * k as f64 / (n - 1) as f64).collect();
        let dirs = seed_directions(d, self.spec.directions);
        let ts: Vec<f64> = match self.t_span {
            Some((lo, hi)) => (0..16).map(|k| lo.ln() + (hi / lo).ln() * k as f64 / 15.0).collect(),
            None => vec![0.0],
        };
        let rest = n.pow(d as u32 - 1);

        let partial = par_map(n, |i0| {
            let mut best = Candidate { params: Vec::new(), orient: 1.0, value: f64::INFINITY };
            let mut params = vec![0.0; d + angle_count(d) + usize::from(self.t_span.is_some())];
            for r in 0..rest {
                params[0] = axis[i0];
                let mut rem = r;
                for k in 1..d {
                    params[k] = axis[rem % n];
                    rem /= n;
                }
                for (orient, angles) in &dirs {
                    params[d..d + angles.len()].copy_from_slice(angles);
                    for &lt in &ts {
                        if self.t_span.is_some() {
                            params[d + angles.len()] = lt;
                        }
                        let v = self.value(&params, *orient);
                        if v < best.value {
                            best = Candidate { params: params.clone(), orient: *orient, value: v };
                        }
                    }
                }
            }
            best
        });
        let mut best = partial
            .into_iter()
            .fold(None::<Candidate>, |acc, c| match acc {
                Some(a) if a.value <= c.value => Some(a),
                _ if c.params.is_empty() => acc,
                _ => Some(c),
            })
            .unwrap_or_else(|| Candidate { params: vec![0.0; d + angle_count(d)], orient: 1.0, value: f64::INFINITY });

        let na = angle_count(d);
        let mut half: Vec<f64> = vec![2.0 * w / (n - 1) as f64; d];
        let angle_step = if d == 2 { 2.0 * PI / self.spec.directions as f64 } else { PI / 4.0 };
        half.extend(std::iter::repeat(angle_step).take(na));
        if ts.len() > 1 {
            half.push(ts[1] - ts[0]);
        }
        let np = half.len();
        let k: i64 = if np <= 3 { 4 } else { 2 };
        for _ in 0..self.spec.zoom_rounds {
            let side = (2 * k + 1) as usize;
            let total = side.pow(np as u32);
            let center = best.params.clone();
            let orient = best.orient;
            let local = par_map(side, |first| {
                let mut loc = Candidate { params: Vec::new(), orient, value: f64::INFINITY };
                let mut p = center.clone();
                for r in 0..total / side {
                    let mut rem = r;
                    for (j, pj) in p.iter_mut().enumerate() {
                        let idx = if j == 0 {
                            first as i64
                        } else {
                            let v = (rem % side) as i64;
                            rem /= side;
                            v
                        };
                        *pj = center[j] + half[j] * (idx - k) as f64 / k as f64;
                    }
                    let v = self.value(&p, orient);
                    if v < loc.value {
                        loc = Candidate { params: p.clone(), orient, value: v };
                    }
                }
                loc
            });
            for c in local {
                if c.value < best.value {
                    best = c;
                }
            }
            for h in &mut half {
                *h /= 8.0;
            }
        }

        if self.spec.polish && np > 0 {
            let orient = best.orient;
            let step: Vec<f64> = half.iter().map(|h| h * 2.0).collect();
            let (p, v) = nelder_mead(|p| self.value(p, orient), &best.params, &step, 400 * (np + 1));
            if v < best.value {
                best = Candidate { params: p, orient, value: v };
            }
        }

        let (x, u, t) = self.decode(&best.params, best.orient);
        Witness { y: u.iter().map(|v| v * t).collect(), x, value: best.value }
    }
}

fn check_searchable(pot: &Potential) -> Result<()> {
    if matches!(pot.family(), Family::UniformBody { .. }) {
        return Err(Error::Unsupported("moduli of uniform measures are degenerate".into()));
    }
    if pot.dim() > 3 {
        return Err(Error::Unsupported("moduli search supports d ≤ 3".into()));
    }
    Ok(())
}

/// Infimum of the second difference (`Delta`) or Bregman divergence
/// (`Bregman`) over the search box and `‖y‖ = t`, with its minimizer.
pub fn modulus_witness(pot: &Potential, kind: ModulusKind, t: f64, norm: Norm, spec: &SearchSpec) -> Result<Witness> {
    check_searchable(pot)?;
    spec.validate()?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("modulus argument {t} must be ≥ 0")));
    }
    let d = pot.dim();
    if t == 0.0 {
        return Ok(Witness { x: vec![0.0; d], y: vec![0.0; d], value: 0.0 });
    }
    let scaled = |u: &[f64], t: f64| -> Vec<f64> { u.iter().map(|v| v * t).collect() };
    let w = match kind {
        ModulusKind::Delta => Engine {
            dim: d,
            norm,
            spec,
            t_span: None,
            t_fixed: t,
            obj: |x: &[f64], u: &[f64], t: f64| pot.second_quotient_unchecked(x, &scaled(u, t)),
        }
        .run(),
        ModulusKind::Bregman => Engine {
            dim: d,
            norm,
            spec,
            t_span: None,
            t_fixed: t,
            obj: |x: &[f64], u: &[f64], t: f64| pot.bregman_unchecked(x, &scaled(u, t)),
        }
        .run(),
        other => return Err(Error::Unsupported(format!("cannot search for a {} modulus", other.as_str()))),
    };
    Ok(Witness { value: w.value.max(0.0), ..w })
}

pub fn modulus_delta(pot: &Potential, t: f64, norm: Norm, spec: &SearchSpec) -> Result<f64> {
    modulus_witness(pot, ModulusKind::Delta, t, norm, spec).map(|w| w.value)
}

pub fn modulus_bregman(pot: &Potential, t: f64, norm: Norm, spec: &SearchSpec) -> Result<f64> {
    modulus_witness(pot, ModulusKind::Bregman, t, norm, spec).map(|w| w.value)
}

/// `0` followed by `n` logarithmically spaced points in `[1e-3, t_max]`.
pub fn default_grid(t_max: f64, n: usize) -> Vec<f64> {
    let lo: f64 = 1e-3;
    let mut g = vec![0.0];
    g.extend((0..n).map(|k| {
        if k + 1 == n {
            t_max
        } else {
            (lo.ln() + (t_max / lo).ln() * k as f64 / (n - 1) as f64).exp()
        }
    }));
    g
}

/// Tabulate `δ` or `b` on [`default_grid`] with 64 points up to `t_max`.
pub fn tabulate(pot: &Potential, kind: ModulusKind, norm: Norm, spec: &SearchSpec, t_max: f64) -> Result<ConvexityModulus> {
    if !(t_max > 1e-3) {
        return Err(param("t_max", "must exceed 1e-3"));
    }
    tabulate_on(pot, kind, norm, spec, &default_grid(t_max, 64))
}

pub fn tabulate_on(pot: &Potential, kind: ModulusKind, norm: Norm, spec: &SearchSpec, grid: &[f64]) -> Result<ConvexityModulus> {
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        values.push(modulus_witness(pot, kind, t, norm, spec)?.value);
    }
    // The infimum over ‖y‖ ≥ t is the suffix minimum of the sphere values.
    for i in (0..values.len().saturating_sub(1)).rev() {
        values[i] = values[i].min(values[i + 1]);
    }
    ConvexityModulus::from_table(kind, norm, grid.to_vec(), values)
}

/// Scalar quantities whose growth in `|y|` defines the smoothness and
/// convexity constants of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// `|∇V(x+y) − ∇V(x)|`
    GradientDifference,
    /// `⟨y, ∇V(x+y) − ∇V(x)⟩`
    GradientMonotonicity,
    /// `V(x+y) + V(x−y) − 2V(x)`
    SecondDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extreme {
    Sup,
    Inf,
}

/// Supremum or infimum of `growth(x, y) / |y|^exponent` over the search box
/// and `|y| ∈ [t_lo, t_hi]` (Euclidean).
pub fn growth_constant(
    pot: &Potential,
    growth: Growth,
    exponent: f64,
    extreme: Extreme,
    t_span: (f64, f64),
    spec: &SearchSpec,
) -> Result<Witness> {
    check_searchable(pot)?;
    spec.validate()?;
    if !(t_span.0 > 0.0 && t_span.1 > t_span.0) {
        return Err(param("t_span", "need 0 < t_lo < t_hi"));
    }
    let sign = match extreme {
        Extreme::Sup => -1.0,
        Extreme::Inf => 1.0,
    };
    let obj = |x: &[f64], u: &[f64], t: f64| {
        let y: Vec<f64> = u.iter().map(|v| v * t).collect();
        let g = match growth {
            Growth::GradientDifference | Growth::GradientMonotonicity => {
                let xp: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let diff: Vec<f64> = pot
                    .gradient_unchecked(&xp)
                    .iter()
                    .zip(pot.gradient_unchecked(x))
                    .map(|(a, b)| a - b)
                    .collect();
                if growth == Growth::GradientDifference {
                    dot(&diff, &diff).sqrt()
                } else {
                    dot(&y, &diff)
                }
            }
            Growth::SecondDifference => pot.second_quotient_unchecked(x, &y),
        };
        sign * g / t.powf(exponent)
    };
    let w = Engine { dim: pot.dim(), norm: Norm::L2, spec, t_span: Some(t_span), t_fixed: 0.0, obj }.run();
    Ok(Witness { value: sign * w.value, ..w })
}

/// A tabulated convexity modulus on a grid starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityModulus {
    kind: ModulusKind,
    norm: Norm,
    grid: Vec<f64>,
    values: Vec<f64>,
    /// First grid point whose conjugate supremum sits at the grid edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    saturated_from: Option<f64>,
}

impl ConvexityModulus {
    pub fn from_table(kind: ModulusKind, norm: Norm, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(param("grid", "need at least two points and matching values"));
        }
        if grid[0] != 0.0 || values[0] != 0.0 {
            return Err(param("grid", "table must start at (0, 0)"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[grid.len() - 1].is_finite() {
            return Err(param("grid", "must be strictly increasing and finite"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(param("values", "must be finite"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(param("values", "must be nondecreasing"));
        }
        Ok(Self { kind, norm, grid, values, saturated_from: None })
    }

    /// Tabulate `coef · t^exponent`.
    pub fn power(kind: ModulusKind, norm: Norm, coef: f64, exponent: f64, grid: Vec<f64>) -> Result<Self> {
        let values = grid.iter().map(|&t| if t == 0.0 { 0.0 } else { coef * t.powf(exponent) }).collect();
        Self::from_table(kind, norm, grid, values)
    }

    pub fn kind(&self) -> ModulusKind {
        self.kind
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn saturated_from(&self) -> Option<f64> {
        self.saturated_from
    }

    // Exponent of the power law through grid points i and j, if both positive.
    fn power_between(&self, i: usize, j: usize) -> Option<f64> {
        let (vi, vj) = (self.values[i], self.values[j]);
        if vi > 0.0 && vj > vi {
            Some((vj / vi).ln() / (self.grid[j] / self.grid[i]).ln())
        } else {
            None
        }
    }

    fn decade_below_end(&self) -> usize {
        let n = self.grid.len() - 1;
        let target = self.grid[n] / 10.0;
        let j = self.grid.partition_point(|&t| t <= target).saturating_sub(1);
        j.clamp(1, n.saturating_sub(1).max(1))
    }

    /// Exponent used beyond the last grid point.
    pub fn tail_exponent(&self) -> Option<f64> {
        let n = self.grid.len() - 1;
        if n < 2 {
            return None;
        }
        self.power_between(self.decade_below_end(), n)
    }

    /// Evaluate with log-log interpolation between positive nodes, power-law
    /// extrapolation from the first and last decades, linear otherwise.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        let n = self.grid.len() - 1;
        if t == 0.0 {
            return 0.0;
        }
        if t >= self.grid[n] {
            if t == self.grid[n] {
                return self.values[n];
            }
            return match self.tail_exponent() {
                Some(k) => self.values[n] * (t / self.grid[n]).powf(k),
                None => {
                    let slope = (self.values[n] - self.values[n - 1]) / (self.grid[n] - self.grid[n - 1]);
                    self.values[n] + slope * (t - self.grid[n])
                }
            };
        }
        let i = self.grid.partition_point(|&g| g <= t) - 1;
        let (t0, t1, v0, v1) = (self.grid[i], self.grid[i + 1], self.values[i], self.values[i + 1]);
        if i == 0 && n >= 2 {
            let target = 10.0 * t1;
            let j = self.grid.partition_point(|&g| g <= target).saturating_sub(1).clamp(2, n);
            if let Some(k) = self.power_between(1, j) {
                return v1 * (t / t1).powf(k);
            }
        }
        if v0 > 0.0 && v1 > 0.0 {
            v0 * (v1 / v0).powf((t / t0).ln() / (t1 / t0).ln())
        } else {
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        }
    }

    /// Evaluate without extrapolating past the last grid point.
    pub fn eval_within(&self, t: f64) -> Result<f64> {
        if t.abs() > self.t_max() * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("{} beyond the tabulated range [0, {}]", t, self.t_max())));
        }
        Ok(self.eval(t))
    }

    /// Smallest `t` with `eval(t) = u`; the flag reports extrapolation.
    pub fn inverse(&self, u: f64) -> Result<(f64, bool)> {
        if !(u >= 0.0) {
            return Err(Error::Domain(format!("cannot invert at {u}")));
        }
        if u == 0.0 {
            return Ok((0.0, false));
        }
        let n = self.grid.len() - 1;
        if u > self.values[n] {
            return match self.tail_exponent() {
                Some(k) => Ok((self.grid[n] * (u / self.values[n]).powf(1.0 / k), true)),
                None => Err(Error::Domain(format!("modulus is not invertible at {u}"))),
            };
        }
        let i = self.values.partition_point(|&v| v < u);
        let (lo, hi) = (self.grid[i - 1], self.grid[i]);
        let t = quad::bisect(|t| self.eval(t) - u, lo, hi, 1e-15 * hi).unwrap_or(hi);
        Ok((t, false))
    }

    /// Lower convex envelope of the tabulated points.
    pub fn convexify(&self) -> Result<Self> {
        if self.kind != ModulusKind::Bregman {
            return Err(Error::Unsupported(format!("convexify expects a bregman modulus, got {}", self.kind.as_str())));
        }
        if self.grid.len() < 3 {
            return Err(param("grid", "convexification needs at least three points"));
        }
        let (g, v) = (&self.grid, &self.values);
        let mut hull: Vec<usize> = Vec::new();
        for i in 0..g.len() {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let (l, r) = ((g[b] - g[a]) * (v[i] - v[a]), (v[b] - v[a]) * (g[i] - g[a]));
                // b lies strictly above the chord from a to i; near-collinear points stay
                if l - r < -1e-12 * (l.abs() + r.abs()) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        let mut values = v.clone();
        for w in hull.windows(2) {
            let (a, b) = (w[0], w[1]);
            for k in a + 1..b {
                values[k] = v[a] + (v[b] - v[a]) * (g[k] - g[a]) / (g[b] - g[a]);
            }
        }
        let mut out = Self::from_table(ModulusKind::BregmanConvexified, self.norm, g.clone(), values)?;
        out.saturated_from = self.saturated_from;
        Ok(out)
    }

    /// Legendre transform `sup_{0 ≤ s ≤ t_max} (ts − b(s))` on the same grid.
    pub fn conjugate(&self) -> Result<Self> {
        if self.kind == ModulusKind::Delta {
            return Err(Error::Unsupported("conjugate expects a bregman modulus".into()));
        }
        if self.values.windows(2).any(|w| w[1] < w[0]) {
            return Err(param("values", "conjugate needs a nondecreasing modulus"));
        }
        let g = &self.grid;
        let n = g.len() - 1;
        let mut values = Vec::with_capacity(g.len());
        let mut saturated_from = None;
        for &t in g {
            let h = |s: f64| t * s - self.eval(s);
            let mut k = 0;
            for (i, &s) in g.iter().enumerate() {
                if h(s) > h(g[k]) {
                    k = i;
                }
            }
            let (a, b) = (g[k.saturating_sub(1)], g[(k + 1).min(n)]);
            let (s_star, neg) = quad::golden_min(|s| -h(s), a, b, 1e-13 * (1.0 + b));
            let (s_best, best) = if -neg > h(g[k]) { (s_star, -neg) } else { (g[k], h(g[k])) };
            if s_best >= g[n] * (1.0 - 1e-9) && t > 0.0 && saturated_from.is_none() {
                saturated_from = Some(t);
            }
            values.push(best.max(0.0));
        }
        values[0] = 0.0;
        for i in 1..values.len() {
            values[i] = values[i].max(values[i - 1]);
        }
        let kind = if self.kind == ModulusKind::BregmanConjugate {
            ModulusKind::BregmanConvexified
        } else {
            ModulusKind::BregmanConjugate
        };
        let mut out = Self::from_table(kind, self.norm, g.clone(), values)?;
        out.saturated_from = saturated_from;
        Ok(out)
    }
}

pub fn convexify_modulus(m: &ConvexityModulus) -> Result<ConvexityModulus> {
    m.convexify()
}

pub fn conjugate_modulus(m: &ConvexityModulus) -> Result<ConvexityModulus> {
    m.conjugate()
}
