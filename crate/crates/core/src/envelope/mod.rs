//! The bound functions `f_{p,a}`: even solutions of `f f'' + p (f')² = −1`
//! on `[−a, a]` vanishing at `±a`.
//!
//! For `p ≠ 0` write `f = f(0) sin^{1/|p|} θ`; then `t` and `θ` are linked
//! by `∫_θ^{π/2} sin^k = √|p| t / f(0)` with `k = 1/p` for `p > 0` and
//! `k = −1 − 1/p` for `p < 0`, which is `Ψ` after `r = sin θ` (resp.
//! `r = 1/sin θ`). The case `p = 0` goes through `Φ`.

mod ode;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{param, Error, Result};
use crate::quad;
use crate::special::{sine_power_integral, sqrt_half_pi};

const TABLE_NODES: usize = 2048;

fn sine_exponent(p: f64) -> f64 {
    if p > 0.0 {
        1.0 / p
    } else {
        -1.0 - 1.0 / p
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(param("p", "need p > −1"));
    }
    Ok(())
}

/// `G_k(θ) = ∫_θ^{π/2} sin^k` tabulated on a uniform θ grid, inverted by
/// bracketing in the table and bisection.
#[derive(Debug, Clone)]
struct SineTail {
    k: f64,
    step: f64,
    tails: Vec<f64>,
}

impl SineTail {
    fn new(k: f64) -> Self {
        let step = FRAC_PI_2 / TABLE_NODES as f64;
        let mut tails = vec![0.0; TABLE_NODES + 1];
        for i in (0..TABLE_NODES).rev() {
            let a = i as f64 * step;
            tails[i] = tails[i + 1] + quad::integrate(|x| x.sin().powf(k), a, a + step, 1e-17, 1e-15);
        }
        Self { k, step, tails }
    }

    fn total(&self) -> f64 {
        self.tails[0]
    }

    fn eval(&self, theta: f64) -> f64 {
        let theta = theta.clamp(0.0, FRAC_PI_2);
        let i = ((theta / self.step) as usize).min(TABLE_NODES - 1);
        let hi = (i + 1) as f64 * self.step;
        self.tails[i + 1] + quad::integrate(|x| x.sin().powf(self.k), theta, hi, 1e-17, 1e-15)
    }

    fn inverse(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return FRAC_PI_2;
        }
        if s >= self.total() {
            return 0.0;
        }
        // tails decrease with the index
        let i = self.tails.partition_point(|&g| g > s).clamp(1, TABLE_NODES) - 1;
        let (lo, hi) = (i as f64 * self.step, (i + 1) as f64 * self.step);
        quad::bisect(|th| self.eval(th) - s, lo, hi, 0.0).unwrap_or(lo)
    }
}

/// `Ψ(t)`: `∫_t^1 r^{1/p}/√(1−r²) dr` for `p > 0`, `t ∈ [0, 1]`, and
/// `∫_1^t r^{1/p}/√(r²−1) dr` for `p < 0`, `t ≥ 1`.
pub fn psi(t: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Err(param("p", "Ψ is defined for p ≠ 0"));
    }
    let k = sine_exponent(p);
    let theta = if p > 0.0 {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("Ψ argument {t} outside [0, 1]")));
        }
        t.asin()
    } else {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("Ψ argument {t} outside [1, ∞)")));
        }
        (1.0 / t).asin()
    };
    if theta >= FRAC_PI_2 {
        return Ok(0.0);
    }
    Ok(quad::integrate(|x| x.sin().powf(k), theta, FRAC_PI_2, 1e-17, 1e-15))
}

/// Inverse of [`psi`] for the same `p`.
pub fn psi_inverse(s: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Err(param("p", "Ψ is defined for p ≠ 0"));
    }
    let table = SineTail::new(sine_exponent(p));
    if !(0.0..=table.total() * (1.0 + 1e-15)).contains(&s) {
        return Err(Error::Domain(format!("{s} outside the range [0, {}] of Ψ", table.total())));
    }
    let theta = table.inverse(s);
    Ok(if p > 0.0 { theta.sin() } else { 1.0 / theta.sin() })
}

/// `f(0)` of `f_{p,a}`: `a√|p| / ∫₀^{π/2} sin^k` for `p ≠ 0`, `a√(2/π)` for `p = 0`.
pub fn f0_from_a(a: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(a > 0.0) {
        return Err(param("a", "must be positive"));
    }
    if p == 0.0 {
        return Ok(a * (2.0 / PI).sqrt());
    }
    Ok(a * p.abs().sqrt() / sine_power_integral(sine_exponent(p)))
}

/// `Φ(x) = ∫₀ˣ ds/√(−2 ln s)`, computed after `s = e^{−u²/2}` as
/// `∫_{√(−2 ln x)}^∞ e^{−u²/2} du`.
pub fn phi_special(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Φ argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let z = (-2.0 * x.ln()).max(0.0).sqrt();
    Ok(quad::integrate(|u| (-0.5 * u * u).exp(), z, z + 40.0, 1e-17, 1e-15))
}

fn phi_closed(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    sqrt_half_pi() * erfc((-x.ln()).max(0.0).sqrt())
}

/// Inverse of [`phi_special`] on `[0, √(π/2)]`.
pub fn phi_special_inverse(s: f64) -> Result<f64> {
    let top = sqrt_half_pi();
    if !(0.0..=top * (1.0 + 1e-15)).contains(&s) {
        return Err(Error::Domain(format!("Φ⁻¹ argument {s} outside [0, √(π/2)]")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s >= top {
        return Ok(1.0);
    }
    let v = erfc_inv(s / top);
    let mut x = (-v * v).exp();
    for _ in 0..3 {
        let d = 1.0 / (-2.0 * x.ln()).sqrt();
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let next = x - (phi_closed(x) - s) / d;
        if !(next > 0.0 && next < 1.0) {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Closed-form `f_{p,a}`.
#[derive(Debug, Clone)]
pub struct EnvelopeFunction {
    p: f64,
    a: f64,
    f0: f64,
    table: Option<SineTail>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub p: f64,
    pub a: f64,
    pub f0: f64,
}

impl EnvelopeFunction {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        let f0 = f0_from_a(a, p)?;
        let table = (p != 0.0).then(|| SineTail::new(sine_exponent(p)));
        Ok(Self { p, a, f0, table })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn params(&self) -> EnvelopeParams {
        EnvelopeParams { p: self.p, a: self.a, f0: self.f0 }
    }

    fn check(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        if t > self.a * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("|t| = {t} exceeds a = {}", self.a)));
        }
        Ok(t.min(self.a))
    }

    /// `θ(t)` for `p ≠ 0`, or `Φ⁻¹((a − t)/f(0))` for `p = 0`.
    fn inner(&self, t: f64) -> f64 {
        match &self.table {
            Some(tab) => tab.inverse(self.p.abs().sqrt() * t / self.f0),
            None => phi_special_inverse((sqrt_half_pi() * self.f0 - t) / self.f0).unwrap_or(0.0),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        if t == self.a {
            return Ok(0.0);
        }
        let v = self.inner(t);
        Ok(match self.table {
            Some(_) => self.f0 * v.sin().powf(1.0 / self.p.abs()),
            None => self.f0 * v,
        })
    }

    /// `f'(t)`, odd in `t`; infinite at `±a` when `p ≥ 0`.
    pub fn slope(&self, t: f64) -> Result<f64> {
        let s = self.check(t)?;
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        let v = self.inner(s);
        let mag = match self.table {
            Some(_) if self.p > 0.0 => v.cos() / v.sin() / self.p.sqrt(),
            Some(_) => v.cos() / self.p.abs().sqrt(),
            None => {
                if v <= 0.0 {
                    f64::INFINITY
                } else {
                    (-2.0 * v.ln()).max(0.0).sqrt()
                }
            }
        };
        Ok(-sign * mag)
    }

    /// Rows `(t, f(t), −f'(t))` on `n` equally spaced points of `[−a, a]`.
    pub fn table(&self, n: usize) -> Vec<[f64; 3]> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let t = -self.a + 2.0 * self.a * i as f64 / (n - 1) as f64;
                [t, self.eval(t).unwrap_or(0.0), -self.slope(t).unwrap_or(f64::NAN)]
            })
            .collect()
    }
}

pub fn envelope_eval(env: &EnvelopeFunction, t: f64) -> Result<f64> {
    env.eval(t)
}

/// `G(x) = ∫₀ˣ ds / f_{0,a}(s) = −f'_{0,a}(x)`.
pub fn g_map(a: f64, x: f64) -> Result<f64> {
    EnvelopeFunction::new(0.0, a)?.slope(x).map(|s| -s)
}

/// `1/√K`.
pub fn caffarelli_refinement_bound(k_lower: f64) -> Result<f64> {
    if !(k_lower > 0.0) {
        return Err(param("K", "must be positive"));
    }
    Ok(1.0 / k_lower.sqrt())
}

/// `√(d−1) · diam / (4 ∫₀^{π/2} sin^{4/(d−1)})`, the value `f_{(d−1)/4, diam/2}(0)`.
pub fn measure_set_bound(d: usize, diam: f64) -> Result<f64> {
    if d < 2 {
        return Err(param("d", "need d ≥ 2"));
    }
    if !(diam > 0.0) {
        return Err(param("diam", "must be positive"));
    }
    let k = 4.0 / (d as f64 - 1.0);
    Ok((d as f64 - 1.0).sqrt() * diam / (4.0 * sine_power_integral(k)))
}

/// `√(−p (1 + d/(4(1+p)))) · diam / (2 ∫₀^{π/2} sin^{−1−1/p})` for `−1 < p < 0`.
pub fn measure_set_product_bound(d: usize, diam: f64, p: f64) -> Result<f64> {
    if d < 2 {
        return Err(param("d", "need d ≥ 2"));
    }
    if !(diam > 0.0) {
        return Err(param("diam", "must be positive"));
    }
    if !(p > -1.0 && p < 0.0) {
        return Err(param("p", "need −1 < p < 0"));
    }
    let factor = (-p * (1.0 + d as f64 / (4.0 * (1.0 + p)))).sqrt();
    Ok(factor * diam / (2.0 * sine_power_integral(-1.0 - 1.0 / p)))
}

/// Envelope obtained by shooting on `f(0)`, independent of the closed forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdeEnvelope {
    pub p: f64,
    pub a: f64,
    pub f0: f64,
    /// Rows `(t, f, f')` on `[0, 0.995 a]`.
    pub nodes: Vec<[f64; 3]>,
}

impl OdeEnvelope {
    /// Cubic Hermite interpolation of the node table, even in `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        let last = self.nodes[self.nodes.len() - 1][0];
        if t > last {
            return Err(Error::Domain(format!("|t| = {t} beyond the tabulated range {last}")));
        }
        let i = self.nodes.partition_point(|r| r[0] <= t).clamp(1, self.nodes.len() - 1) - 1;
        let ([t0, f0, d0], [t1, f1, d1]) = (self.nodes[i], self.nodes[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        Ok((2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * d1)
    }
}

const ODE_TOL: f64 = 1e-13;

fn curvature(p: f64, f: f64, w: f64) -> f64 {
    -(1.0 + p * w * w) / f
}

/// Position where the solution started at `f(0) = f0`, `f'(0) = 0` reaches zero.
fn zero_crossing(p: f64, f0: f64) -> Result<f64> {
    // integrate in t until the slope is clearly negative ...
    let run = ode::solve(
        |_, y: &[f64; 2]| [y[1], curvature(p, y[0], y[1])],
        0.0,
        [f0, 0.0],
        1e3 * f0,
        ODE_TOL,
        &[],
        |_, y| y[1] <= -0.5 || y[0] <= 0.5 * f0,
    )?;
    if !run.stopped {
        return Err(Error::NonConvergence { iterations: 0, residual: run.y[0] });
    }
    // ... then in u = ln f with state (t, f'), down to f = e^{-80} f(0)
    let tail = ode::solve(
        |u, y: &[f64; 2]| [u.exp() / y[1], -(1.0 + p * y[1] * y[1]) / y[1]],
        run.y[0].ln(),
        [run.x, run.y[1]],
        f0.ln() - 80.0,
        ODE_TOL,
        &[],
        |_, _| false,
    )?;
    Ok(tail.y[0])
}

/// Solve `f f'' + p (f')² = −1`, `f'(0) = 0`, `f(a) = 0` by bisection on `f(0)`.
pub fn envelope_ode_oracle(p: f64, a: f64, n_nodes: usize) -> Result<OdeEnvelope> {
    check_p(p)?;
    if !(a > 0.0) {
        return Err(param("a", "must be positive"));
    }
    if n_nodes < 2 {
        return Err(param("n_nodes", "need at least two nodes"));
    }
    let (mut lo, mut hi) = (0.05 * a, 20.0 * a);
    let (mut t_lo, mut t_hi) = (zero_crossing(p, lo)?, zero_crossing(p, hi)?);
    for _ in 0..20 {
        if t_lo <= a && t_hi >= a {
            break;
        }
        if t_lo > a {
            lo *= 0.5;
            t_lo = zero_crossing(p, lo)?;
        }
        if t_hi < a {
            hi *= 2.0;
            t_hi = zero_crossing(p, hi)?;
        }
    }
    if !(t_lo <= a && t_hi >= a) {
        return Err(Error::Bracket { lo, hi, t_lo, t_hi, target: a });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * hi || mid == lo || mid == hi {
            break;
        }
        if zero_crossing(p, mid)? < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let f0 = 0.5 * (lo + hi);
    let end = 0.995 * a;
    let ts: Vec<f64> = (0..n_nodes).map(|i| end * i as f64 / (n_nodes - 1) as f64).collect();
    let run = ode::solve(|_, y: &[f64; 2]| [y[1], curvature(p, y[0], y[1])], 0.0, [f0, 0.0], end, ODE_TOL, &ts, |_, _| false)?;
    let nodes = run.outputs.iter().map(|(t, y)| [*t, y[0], y[1]]).collect();
    Ok(OdeEnvelope { p, a, f0, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal_sf;
    use approx::assert_relative_eq;

    #[test]
    fn psi_examples() {
        assert_relative_eq!(psi(0.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(psi(1.0, 0.7).unwrap(), 0.0);
        assert_eq!(psi(1.0, -0.5).unwrap(), 0.0);
        assert!(psi(1.5, 1.0).is_err());
        assert!(psi(0.5, -0.5).is_err());
        // antiderivative −√(1−r²) at p = 1
        assert_relative_eq!(psi(0.6, 1.0).unwrap(), 0.8, epsilon = 1e-14);
    }

    #[test]
    fn psi_inverse_examples() {
        // G(θ) = cos θ is flat at 0, so rounding in s costs √ε in θ
        assert!(psi_inverse(1.0, 1.0).unwrap().abs() < 1e-6);
        assert_relative_eq!(psi_inverse(0.0, 0.3).unwrap(), 1.0);
        assert_relative_eq!(psi_inverse(0.0, -0.5).unwrap(), 1.0);
        for &(p, t) in &[(1.0, 0.3), (0.25, 0.8), (2.0, 0.05), (-0.5, 1.7), (-0.2, 3.0)] {
            let s = psi(t, p).unwrap();
            assert_relative_eq!(psi(psi_inverse(s, p).unwrap(), p).unwrap(), s, epsilon = 1e-10);
        }
        assert!(psi_inverse(1.5, 1.0).is_err());
    }

    #[test]
    fn f0_examples() {
        assert_relative_eq!(f0_from_a(1.0, 0.0).unwrap(), 0.797_884_560_802_865_4, epsilon = 1e-15);
        assert_relative_eq!(f0_from_a(1.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(f0_from_a(1.0, 0.25).unwrap(), 0.5 / (3.0 * PI / 16.0), epsilon = 1e-14);
        assert_relative_eq!(f0_from_a(1.0, 0.25).unwrap(), 0.8488, epsilon = 1e-4);
        assert!(f0_from_a(1.0, -1.0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_relative_eq!(phi_special(1.0).unwrap(), sqrt_half_pi(), epsilon = 1e-14);
        assert_eq!(phi_special(0.0).unwrap(), 0.0);
        // ∫₁^∞ e^{−s²/2} ds = √(2π) (1 − Φ_std(1))
        let oracle = (2.0 * PI).sqrt() * normal_sf(1.0);
        assert_relative_eq!(phi_special((-0.5f64).exp()).unwrap(), oracle, epsilon = 1e-14);
        assert_relative_eq!(oracle, 0.3977, epsilon = 1e-4);
        for i in 1..50 {
            let x = i as f64 / 50.0;
            assert_relative_eq!(phi_special(x).unwrap(), phi_closed(x), epsilon = 1e-14);
            assert_relative_eq!(phi_special_inverse(phi_special(x).unwrap()).unwrap(), x, epsilon = 1e-12);
        }
        // direct form ∫₀ˣ ds/√(−2 ln s) with s = x·e^{−v}, smooth away from s = 1
        let x = 0.4f64;
        let direct = quad::integrate(|v| x * (-v).exp() / (-2.0 * (x.ln() - v)).sqrt(), 0.0, 60.0, 1e-16, 1e-14);
        assert_relative_eq!(phi_special(x).unwrap(), direct, epsilon = 1e-12);
        assert!(phi_special(1.5).is_err());
    }

    #[test]
    fn envelope_boundary_and_center() {
        for &p in &[-0.5, 0.0, 0.25, 1.0, 2.0] {
            let e = EnvelopeFunction::new(p, 1.3).unwrap();
            assert_relative_eq!(e.eval(0.0).unwrap(), e.f0(), epsilon = 1e-12);
            assert!(e.eval(1.3).unwrap().abs() < 1e-8);
            assert!(e.eval(-1.3).unwrap().abs() < 1e-8);
            assert_eq!(e.eval(0.4).unwrap(), e.eval(-0.4).unwrap());
            assert!(e.eval(1.31).is_err());
        }
    }

    #[test]
    fn ode_residual_and_monotone() {
        for &p in &[-0.5, 0.0, 0.25, 1.0, 2.0] {
            let e = EnvelopeFunction::new(p, 1.0).unwrap();
            let h = 1e-5;
            let mut prev = f64::INFINITY;
            for i in 1..40 {
                let t = 0.9 * i as f64 / 40.0;
                let f = e.eval(t).unwrap();
                assert!(f < prev);
                prev = f;
                let fpp = (e.slope(t + h).unwrap() - e.slope(t - h).unwrap()) / (2.0 * h);
                let fp = e.slope(t).unwrap();
                let r = f * fpp + p * fp * fp + 1.0;
                assert!(r.abs() < 1e-5, "p = {p}, t = {t}: residual {r}");
            }
        }
    }

    #[test]
    fn closed_form_matches_shooting() {
        for &p in &[-0.5, 0.0, 0.25, 1.0, 2.0] {
            let e = EnvelopeFunction::new(p, 1.0).unwrap();
            let o = envelope_ode_oracle(p, 1.0, 199).unwrap();
            assert!((o.f0 - e.f0()).abs() < 1e-7, "p = {p}: {} vs {}", o.f0, e.f0());
            for r in &o.nodes {
                if r[0] <= 0.99 {
                    assert!((r[1] - e.eval(r[0]).unwrap()).abs() < 1e-6, "p = {p}, t = {}", r[0]);
                }
            }
        }
    }

    #[test]
    fn scaling() {
        let (lam, p) = (2.5, 0.25);
        let e1 = EnvelopeFunction::new(p, 1.0).unwrap();
        let e2 = EnvelopeFunction::new(p, lam).unwrap();
        for &t in &[0.0, 0.3, 0.77, 0.95] {
            assert_relative_eq!(e2.eval(lam * t).unwrap(), lam * e1.eval(t).unwrap(), epsilon = 1e-8);
        }
    }

    #[test]
    fn g_map_properties() {
        let a = 1.0;
        assert_eq!(g_map(a, 0.0).unwrap(), 0.0);
        assert_eq!(g_map(a, a).unwrap(), f64::INFINITY);
        let e = EnvelopeFunction::new(0.0, a).unwrap();
        for &x in &[0.1, 0.5, 0.9] {
            let g = g_map(a, x).unwrap();
            assert_eq!(g_map(a, -x).unwrap(), -g);
            let h = 1e-6;
            let fd = -(e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
            assert!((fd - g).abs() < 1e-6);
            let integral = quad::integrate(|s| 1.0 / e.eval(s).unwrap(), 0.0, x, 1e-14, 1e-12);
            assert!((integral - g).abs() < 1e-6, "{integral} vs {g}");
        }
        assert!(g_map(a, 1.1).is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(caffarelli_refinement_bound(1.0).unwrap(), 1.0);
        assert_eq!(caffarelli_refinement_bound(4.0).unwrap(), 0.5);
        assert_eq!(caffarelli_refinement_bound(0.25).unwrap(), 2.0);
        assert!(caffarelli_refinement_bound(0.0).is_err());
        assert_relative_eq!(measure_set_bound(5, 1.0).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(measure_set_bound(2, 2f64.sqrt()).unwrap(), 4.0 * 2f64.sqrt() / (3.0 * PI), epsilon = 1e-14);
        assert_relative_eq!(measure_set_bound(2, 2f64.sqrt()).unwrap(), 0.6002, epsilon = 1e-4);
        assert_relative_eq!(measure_set_product_bound(2, 1.0, -0.5).unwrap(), 0.5, epsilon = 1e-14);
        assert!(measure_set_bound(1, 1.0).is_err());
        assert!(measure_set_product_bound(2, 1.0, 0.5).is_err());
        // the dimensional bound is the envelope's centre value with a = diam/2
        assert_relative_eq!(
            measure_set_bound(3, 2.0).unwrap(),
            EnvelopeFunction::new(0.5, 1.0).unwrap().f0(),
            epsilon = 1e-14
        );
    }
}
