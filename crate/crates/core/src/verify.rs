//! Executable bound checks and their reports.
//!
//! A check computes a theoretical bound and an empirical quantity and
//! passes iff `empirical ≤ theoretical · slack + abs_tol`. Reports carry
//! the maximizing inputs so a result can be re-evaluated.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::envelope::EnvelopeFunction;
use crate::error::{param, Error, Result};
use crate::measures::moduli::direction_set;
use crate::measures::{dist2, supporting_slab, ConvexBody, ConvexityModulus};
use crate::quad::golden_min;
use crate::rng::{par_map, stream};
use crate::transport1d::{holder_sup_1d, pair_sup_1d, PairSpec, TransportMap1D};
use crate::transport_nd::{holder_sup_nd, pair_sup_nd, EntropicTransport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// The inequality holds for a trivial reason (e.g. an empty event).
    VacuousPass,
    Fail,
    /// The inputs could not be computed reliably (e.g. solver non-convergence).
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    /// The inequality being checked, in words.
    pub anchor: String,
    pub theoretical: f64,
    pub empirical: f64,
    pub slack: f64,
    pub abs_tol: f64,
    pub passed: bool,
    pub status: Status,
    pub witness: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub seed: u64,
    pub config_digest: String,
}

impl VerificationReport {
    pub fn new(check_id: &str, anchor: &str, theoretical: f64, empirical: f64, slack: f64, abs_tol: f64) -> Self {
        let passed = empirical <= theoretical * slack + abs_tol;
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            theoretical,
            empirical,
            slack,
            abs_tol,
            passed,
            status: if passed { Status::Pass } else { Status::Fail },
            witness: BTreeMap::new(),
            notes: Vec::new(),
            seed: 0,
            config_digest: String::new(),
        }
    }

    pub fn witness(mut self, key: &str, value: impl Serialize) -> Self {
        self.witness.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn provenance(mut self, seed: u64, config_digest: &str) -> Self {
        self.seed = seed;
        self.config_digest = config_digest.into();
        self
    }

    /// Mark a pass as vacuous; failures stay failures.
    pub fn vacuous(mut self, reason: &str) -> Self {
        if self.passed {
            self.status = Status::VacuousPass;
        }
        self.note(format!("vacuous: {reason}"))
    }

    pub fn inconclusive(mut self, reason: &str) -> Self {
        self.status = Status::Inconclusive;
        self.passed = false;
        self.note(format!("inconclusive: {reason}"))
    }

    /// `empirical − theoretical · slack`; negative when the check passes with room.
    pub fn margin(&self) -> f64 {
        self.empirical - self.theoretical * self.slack
    }
}

/// Hex SHA-256 of the JSON serialization.
pub fn config_digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).unwrap_or_default();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Points, unit directions and step lengths over which a second difference
/// is maximized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientSamples {
    pub points: Vec<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
    pub ts: Vec<f64>,
}

impl QuotientSamples {
    /// A 1D grid of `nx` points on `[lo, hi]` with `nt` log-spaced steps in `[t_min, t_max]`.
    pub fn grid_1d(lo: f64, hi: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Self {
        let points = (0..nx).map(|i| vec![lo + (hi - lo) * i as f64 / (nx.max(2) - 1) as f64]).collect();
        let ts = (0..nt).map(|k| t_min * (t_max / t_min).powf(k as f64 / (nt.max(2) - 1) as f64)).collect();
        Self { points, directions: vec![vec![1.0]], ts }
    }
}

fn sup_ratio<Q, B>(quotient: &Q, bound: &B, samples: &QuotientSamples) -> Result<(f64, Vec<f64>, Vec<f64>, f64, f64)>
where
    Q: Fn(&[f64], &[f64], f64) -> Result<f64> + Sync,
    B: Fn(f64) -> f64 + Sync,
{
    if samples.points.is_empty() || samples.directions.is_empty() || samples.ts.is_empty() {
        return Err(Error::EmptySearch("quotient samples"));
    }
    let rows = par_map(samples.points.len(), |i| -> Result<(f64, usize, usize, f64)> {
        let mut best = (f64::NEG_INFINITY, 0, 0, 0.0);
        for (k, h) in samples.directions.iter().enumerate() {
            for (l, &t) in samples.ts.iter().enumerate() {
                let q = quotient(&samples.points[i], h, t)?;
                let r = q / bound(t);
                if r > best.0 {
                    best = (r, k, l, q);
                }
            }
        }
        Ok(best)
    });
    let mut best = (f64::NEG_INFINITY, 0, 0, 0, 0.0);
    for (i, r) in rows.into_iter().enumerate() {
        let (v, k, l, q) = r?;
        if v > best.0 {
            best = (v, i, k, l, q);
        }
    }
    let (v, i, k, l, q) = best;
    Ok((v, samples.points[i].clone(), samples.directions[k].clone(), samples.ts[l], q))
}

/// `φ(x + th) + φ(x − th) − 2φ(x) ≤ 2 (A_p/A_q)^{1/(q+1)} t^{1+α}`, `α = (p+1)/(q+1)`,
/// reported as the largest ratio of the two sides.
pub fn check_theorem_hoelder<Q>(a_p: f64, p: f64, a_q: f64, q: f64, quotient: Q, samples: &QuotientSamples) -> Result<VerificationReport>
where
    Q: Fn(&[f64], &[f64], f64) -> Result<f64> + Sync,
{
    if !(0.0..=1.0).contains(&p) || !(q >= 1.0) {
        return Err(param("p, q", "need 0 ≤ p ≤ 1 ≤ q"));
    }
    if !(a_p > 0.0 && a_q > 0.0) {
        return Err(param("A_p, A_q", "must be positive"));
    }
    let alpha = (p + 1.0) / (q + 1.0);
    let c = 2.0 * (a_p / a_q).powf(1.0 / (q + 1.0));
    let bound = |t: f64| c * t.powf(1.0 + alpha);
    let (ratio, x, h, t, value) = sup_ratio(&quotient, &bound, samples)?;
    Ok(VerificationReport::new(
        "second_difference_hoelder",
        "φ(x+th) + φ(x−th) − 2φ(x) ≤ 2 (A_p/A_q)^{1/(q+1)} t^{1+α}",
        1.0,
        ratio,
        1.0,
        1e-3,
    )
    .witness("x", x)
    .witness("h", h)
    .witness("t", t)
    .witness("second_difference", value)
    .witness("bound", bound(t))
    .witness("constant", c)
    .witness("alpha", alpha))
}

/// Sharper quadratic case `φ(x + th) + φ(x − th) − 2φ(x) ≤ (A_p/A_q)^{1/2} t²`.
pub fn check_sharper_quadratic<Q>(a_p: f64, a_q: f64, quotient: Q, samples: &QuotientSamples) -> Result<VerificationReport>
where
    Q: Fn(&[f64], &[f64], f64) -> Result<f64> + Sync,
{
    if !(a_p > 0.0 && a_q > 0.0) {
        return Err(param("A_p, A_q", "must be positive"));
    }
    let c = (a_p / a_q).sqrt();
    let general = 2.0 * c;
    let bound = |t: f64| c * t * t;
    let (ratio, x, h, t, value) = sup_ratio(&quotient, &bound, samples)?;
    Ok(VerificationReport::new(
        "second_difference_quadratic_sharp",
        "φ(x+th) + φ(x−th) − 2φ(x) ≤ (A_p/A_q)^{1/2} t² when p = q = 1",
        1.0,
        ratio,
        1.0,
        1e-3,
    )
    .witness("x", x)
    .witness("h", h)
    .witness("t", t)
    .witness("second_difference", value)
    .witness("bound", bound(t))
    .witness("constant", c)
    .witness("general_constant", general)
    .note(format!("sharp constant {c} ≤ general constant {general}")))
}

/// `|T(x) − T(y)| ≤ C |x − y|^α` for a 1D map over a pair search.
pub fn check_gradient_holder_1d<F>(
    map: F,
    range: (f64, f64),
    alpha: f64,
    c: f64,
    spec: &PairSpec,
    seed: u64,
    slack: f64,
    abs_tol: f64,
) -> Result<VerificationReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    let est = holder_sup_1d(map, range, alpha, spec, seed)?;
    Ok(VerificationReport::new("gradient_hoelder_1d", "|∇φ(x) − ∇φ(y)| ≤ C |x − y|^α", c, est.value, slack, abs_tol)
        .witness("x", est.x)
        .witness("y", est.y)
        .witness("alpha", alpha)
        .provenance(seed, ""))
}

/// The same for an entropic map, over source pairs separated by at least `4√ε`.
pub fn check_gradient_holder_nd(tp: &EntropicTransport, alpha: f64, c: f64, pair_count: usize, seed: u64, slack: f64) -> Result<VerificationReport> {
    let w = holder_sup_nd(|x| tp.map_eval(x), &tp.source_samples, alpha, 4.0 * tp.epsilon.sqrt(), tp.source_radius(), pair_count, seed)?;
    let mut r = VerificationReport::new("gradient_hoelder_nd", "|∇φ(x) − ∇φ(y)| ≤ C |x − y|^α", c, w.value, slack, 0.0)
        .witness("x", &w.x)
        .witness("y", &w.y)
        .witness("alpha", alpha)
        .witness("epsilon", tp.epsilon)
        .provenance(seed, "");
    if !tp.converged {
        r = r.inconclusive("entropic solver did not converge");
    }
    Ok(r)
}

/// `|∇f(x + th) − ∇f(x)| ≤ (2/t) sup_{|v|=1} (f(x + 2tv) + f(x − 2tv) − 2f(x))`
/// for a convex `f`. The supremum runs over `direction_count` directions,
/// refined by golden search in 2D; midpoint convexity is tested on random
/// segments near `x` first.
pub fn sodin_bound_check<F, G>(
    f: F,
    grad: G,
    x: &[f64],
    t: f64,
    h: &[f64],
    direction_count: usize,
    slack: f64,
    seed: u64,
) -> Result<VerificationReport>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let d = x.len();
    if h.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: h.len() });
    }
    if !(t > 0.0) {
        return Err(param("t", "must be positive"));
    }
    if ((h.iter().map(|v| v * v).sum::<f64>()).sqrt() - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("h must be a unit vector".into()));
    }
    let mut rng = stream(seed, "sodin-convexity", 0);
    for _ in 0..256 {
        let a: Vec<f64> = x.iter().map(|v| v + 3.0 * t * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let b: Vec<f64> = x.iter().map(|v| v + 3.0 * t * (2.0 * rng.random::<f64>() - 1.0)).collect();
        let m: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 0.5 * (p + q)).collect();
        let (fa, fb, fm) = (f(&a), f(&b), f(&m));
        if fm > 0.5 * (fa + fb) + 1e-10 * (1.0 + fa.abs() + fb.abs()) {
            return Err(Error::Domain(format!("function is not convex on the segment {a:?} – {b:?}")));
        }
    }
    let fx = f(x);
    let second = |v: &[f64]| {
        let p: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + 2.0 * t * b).collect();
        let m: Vec<f64> = x.iter().zip(v).map(|(a, b)| a - 2.0 * t * b).collect();
        f(&p) + f(&m) - 2.0 * fx
    };
    let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
    for v in direction_set(d, direction_count.max(2)) {
        let s = second(&v);
        if s > best.0 {
            best = (s, v);
        }
    }
    if d == 2 {
        let th0 = best.1[1].atan2(best.1[0]);
        let w = std::f64::consts::PI / direction_count.max(2) as f64;
        let (th, neg) = golden_min(|th| -second(&[th.cos(), th.sin()]), th0 - w, th0 + w, 1e-10);
        if -neg > best.0 {
            best = (-neg, vec![th.cos(), th.sin()]);
        }
    }
    let shifted: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + t * b).collect();
    let lhs = dist2(&grad(&shifted), &grad(x));
    let rhs = 2.0 / t * best.0;
    Ok(VerificationReport::new(
        "sodin_gradient_increment",
        "|∇f(x+th) − ∇f(x)| ≤ (2/t) sup_v (f(x+2tv) + f(x−2tv) − 2f(x))",
        rhs,
        lhs,
        slack,
        1e-12,
    )
    .witness("x", x)
    .witness("h", h)
    .witness("t", t)
    .witness("v", &best.1)
    .provenance(seed, ""))
}

/// `8 δ⁻¹(4 s²)`, noting whether the inverse had to extrapolate.
fn ms_denominator<'a>(delta: &'a ConvexityModulus, extrapolated: &'a AtomicBool) -> impl Fn(f64) -> f64 + Sync + 'a {
    move |s: f64| match delta.inverse(4.0 * s * s) {
        Ok((v, ext)) => {
            if ext {
                extrapolated.store(true, Ordering::Relaxed);
            }
            8.0 * v
        }
        Err(_) => f64::NAN,
    }
}

fn ms_report(value: f64, slack: f64, extrapolated: bool) -> VerificationReport {
    let r = VerificationReport::new("ms_modulus_continuity", "|∇φ(x) − ∇φ(y)| ≤ 8 δ⁻¹(4|x−y|²)", 1.0, value, slack, 0.0);
    if extrapolated {
        r.note("δ⁻¹ extrapolated beyond the tabulated range by the fitted tail power")
    } else {
        r
    }
}

/// 1D map against `8 δ⁻¹(4|x − y|²)`, reported as the largest ratio.
pub fn ms_modulus_bound_check_1d<F>(
    map: F,
    range: (f64, f64),
    delta: &ConvexityModulus,
    spec: &PairSpec,
    seed: u64,
    slack: f64,
) -> Result<VerificationReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    let ext = AtomicBool::new(false);
    let est = pair_sup_1d(map, ms_denominator(delta, &ext), range, spec, seed)?;
    if !est.value.is_finite() {
        return Err(Error::Domain("δ is not invertible at the required values".into()));
    }
    Ok(ms_report(est.value, slack, ext.load(Ordering::Relaxed))
        .witness("x", est.x)
        .witness("y", est.y)
        .provenance(seed, ""))
}

pub fn ms_modulus_bound_check_nd(
    tp: &EntropicTransport,
    delta: &ConvexityModulus,
    pair_count: usize,
    seed: u64,
    slack: f64,
) -> Result<VerificationReport> {
    let ext = AtomicBool::new(false);
    let w = pair_sup_nd(
        |x| tp.map_eval(x),
        ms_denominator(delta, &ext),
        &tp.source_samples,
        4.0 * tp.epsilon.sqrt(),
        tp.source_radius(),
        pair_count,
        seed,
    )?;
    if !w.value.is_finite() {
        return Err(Error::Domain("δ is not invertible at the required values".into()));
    }
    let mut r = ms_report(w.value, slack, ext.load(Ordering::Relaxed))
        .witness("x", &w.x)
        .witness("y", &w.y)
        .witness("epsilon", tp.epsilon)
        .provenance(seed, "");
    if !tp.converged {
        r = r.inconclusive("entropic solver did not converge");
    }
    Ok(r)
}

/// Which bound on `φ_hh` is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EnvelopeVariant {
    /// `√Λ · f_{(d−1)/4, a}(φ_h − t₀)`.
    Dimensional,
    /// `√(Λ + M²/(4(1+p))) · f_{p, a}(φ_h − t₀)` for `|V_h| ≤ M`, `p > −1`.
    DimensionFree { m: f64, p: f64 },
}

/// Envelope of `φ_hh` for a given direction, source bounds and slab.
#[derive(Debug, Clone)]
pub struct EnvelopeBound {
    pub t0: f64,
    pub a: f64,
    pub factor: f64,
    pub envelope: EnvelopeFunction,
}

impl EnvelopeBound {
    pub fn new(dim: usize, lambda: f64, variant: EnvelopeVariant, t0: f64, a: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(param("Λ", "must be positive"));
        }
        let (p, factor) = match variant {
            EnvelopeVariant::Dimensional => ((dim as f64 - 1.0) / 4.0, lambda.sqrt()),
            EnvelopeVariant::DimensionFree { m, p } => {
                if !(p > -1.0) {
                    return Err(param("p", "need p > −1"));
                }
                if !(m >= 0.0) {
                    return Err(param("M", "must be ≥ 0"));
                }
                (p, (lambda + m * m / (4.0 * (1.0 + p))).sqrt())
            }
        };
        Ok(Self { t0, a, factor, envelope: EnvelopeFunction::new(p, a)? })
    }

    /// Bound at slope `s = φ_h`; `None` when `s − t₀` leaves `[−a, a]`.
    pub fn at(&self, s: f64) -> Option<f64> {
        let u = s - self.t0;
        if u.abs() > self.a * (1.0 + 1e-9) {
            return None;
        }
        self.envelope.eval(u.clamp(-self.a, self.a)).ok().map(|f| self.factor * f)
    }
}

struct Worst {
    excess: f64,
    x: Vec<f64>,
    slope: f64,
    second: f64,
    bound: f64,
}

fn envelope_report(
    worst: Worst,
    outside: usize,
    total: usize,
    bound: &EnvelopeBound,
    slack: f64,
    abs_tol: f64,
) -> VerificationReport {
    let mut r = VerificationReport::new(
        "second_derivative_envelope",
        "φ_hh ≤ c · f_{p,a}(φ_h − t₀)",
        worst.bound,
        worst.second,
        slack,
        abs_tol,
    )
    .witness("x", worst.x)
    .witness("slope", worst.slope)
    .witness("t0", bound.t0)
    .witness("a", bound.a)
    .witness("factor", bound.factor)
    .witness("p", bound.envelope.p())
    .witness("points", total);
    if outside > 0 {
        r = r
            .note(format!("{outside} of {total} points have φ_h − t₀ outside [−a, a]"))
            .inconclusive("slopes leave the supporting slab");
    }
    r
}

fn scan_envelope<E>(points: &[Vec<f64>], eval: E, bound: &EnvelopeBound, slack: f64, abs_tol: f64) -> (Worst, usize)
where
    E: Fn(&[f64]) -> Option<(f64, f64)> + Sync,
{
    let rows = par_map(points.len(), |i| {
        let (s, s2) = eval(&points[i])?;
        Some((s, s2, bound.at(s)))
    });
    let mut worst = Worst { excess: f64::NEG_INFINITY, x: vec![], slope: 0.0, second: 0.0, bound: 0.0 };
    let mut outside = 0;
    for (i, row) in rows.into_iter().enumerate() {
        let Some((s, s2, b)) = row else { continue };
        let Some(b) = b else {
            outside += 1;
            continue;
        };
        let excess = s2 - b * slack - abs_tol;
        if excess > worst.excess {
            worst = Worst { excess, x: points[i].clone(), slope: s, second: s2, bound: b };
        }
    }
    (worst, outside)
}

/// Pointwise `φ_hh ≤ bound(φ_h)` for an entropic transport onto `body`, at
/// the source samples; `φ_hh` is the exact second derivative of the
/// entropic potential.
pub fn second_order_envelope_check(
    tp: &EntropicTransport,
    body: &ConvexBody,
    h: &[f64],
    lambda: f64,
    variant: EnvelopeVariant,
    slack: f64,
) -> Result<VerificationReport> {
    let (t0, a) = supporting_slab(body, h)?;
    let bound = EnvelopeBound::new(tp.dim, lambda, variant, t0, a)?;
    let abs_tol = 1e-6;
    let (worst, outside) = scan_envelope(&tp.source_samples, |x| tp.directional(x, h).ok(), &bound, slack, abs_tol);
    let mut r = envelope_report(worst, outside, tp.source_samples.len(), &bound, slack, abs_tol)
        .witness("h", h)
        .witness("epsilon", tp.epsilon);
    if !tp.converged {
        r = r.inconclusive("entropic solver did not converge");
    }
    Ok(r)
}

/// The 1D case: `φ'' ≤ f_{0,a}(φ' − t₀)` on a grid of `n` points over the
/// map's quantile band, for a target interval `[t₀ − a, t₀ + a]`.
pub fn second_order_envelope_check_1d(map: &TransportMap1D, n: usize, lambda: f64, abs_tol: f64) -> Result<VerificationReport> {
    let (lo, hi) = map.target().support();
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("the target must be an interval".into()));
    }
    let bound = EnvelopeBound::new(1, lambda, EnvelopeVariant::Dimensional, 0.5 * (lo + hi), 0.5 * (hi - lo))?;
    let (x0, x1) = map.band();
    let points: Vec<Vec<f64>> = (0..n.max(2)).map(|i| vec![x0 + (x1 - x0) * i as f64 / (n.max(2) - 1) as f64]).collect();
    let (worst, outside) = scan_envelope(&points, |x| Some((map.eval(x[0]), map.derivative(x[0]).ok()?)), &bound, 1.0, abs_tol);
    Ok(envelope_report(worst, outside, points.len(), &bound, 1.0, abs_tol))
}

/// Largest `⟨T(x) − T(y), x − y⟩` deficit, as a report against `−5ε`.
pub fn monotonicity_check(tp: &EntropicTransport, pair_count: usize, seed: u64) -> Result<VerificationReport> {
    let worst = crate::transport_nd::monotonicity_proxy(tp, pair_count, seed)?;
    Ok(VerificationReport::new(
        "cyclical_monotonicity_proxy",
        "⟨T(x) − T(y), x − y⟩ ≥ −5ε",
        5.0 * tp.epsilon,
        -worst,
        1.0,
        0.0,
    )
    .witness("min_inner_product", worst)
    .provenance(seed, ""))
}

/// JSON helper for a list of reports.
pub fn reports_json(reports: &[VerificationReport]) -> Value {
    json!(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ModulusKind, Norm, Potential};
    use crate::special::normal_cdf;
    use crate::transport1d::TransportMap1D;

    #[test]
    fn report_pass_rule() {
        let r = VerificationReport::new("x", "y", 2.0, 2.1, 1.0, 0.1);
        assert!(r.passed);
        assert!(!VerificationReport::new("x", "y", 2.0, 2.3, 1.1, 0.0).passed);
        assert_eq!(VerificationReport::new("x", "y", 1.0, 0.5, 1.0, 0.0).vacuous("r").status, Status::VacuousPass);
        let bad = VerificationReport::new("x", "y", 1.0, 0.5, 1.0, 0.0).inconclusive("why");
        assert!(!bad.passed);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<VerificationReport>(&s).unwrap(), r);
        assert_eq!(config_digest(&r), config_digest(&r.clone()));
        assert_eq!(config_digest(&r).len(), 64);
    }

    #[test]
    fn hoelder_checks_on_gaussian_maps() {
        let g = Potential::gaussian(1);
        let id = TransportMap1D::new(&g, &g).unwrap();
        let samples = QuotientSamples::grid_1d(-3.0, 3.0, 41, 0.01, 2.0, 20);
        let q = |x: &[f64], _: &[f64], t: f64| Ok(id.second_difference(x[0], t));
        let r = check_theorem_hoelder(1.0, 1.0, 1.0, 1.0, q, &samples).unwrap();
        assert!(r.passed);
        assert!((r.empirical - 0.5).abs() < 1e-6);
        // variance-2 target: δ₂φ = √2 t² equals the sharp bound with A_q = 1/2
        let wide = Potential::gaussian_with(vec![0.0], 2f64.sqrt()).unwrap();
        let m = TransportMap1D::new(&g, &wide).unwrap();
        let q = |x: &[f64], _: &[f64], t: f64| Ok(m.second_difference(x[0], t));
        let sharp = check_sharper_quadratic(1.0, 0.5, q, &samples).unwrap();
        assert!(sharp.passed);
        assert!((sharp.empirical - 1.0).abs() < 1e-6, "{}", sharp.empirical);
        assert!(check_theorem_hoelder(1.0, 1.5, 1.0, 1.0, q, &samples).is_err());
    }

    #[test]
    fn gradient_holder_examples() {
        let spec = PairSpec { random_pairs: 1000, grid_x: 128, grid_t: 32, ..Default::default() };
        let r = check_gradient_holder_1d(|x| x, (-3.0, 3.0), 1.0, 1.0, &spec, 1, 1.0, 1e-12).unwrap();
        assert!(r.passed && (r.empirical - 1.0).abs() < 1e-12);
        let f = |x: f64| 2.0 * normal_cdf(x) - 1.0;
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let r = check_gradient_holder_1d(f, (-5.0, 5.0), 1.0, c, &spec, 1, 1.0, 1e-3).unwrap();
        assert!(r.passed);
        assert!(r.empirical > c - 1e-4);
    }

    #[test]
    fn sodin_examples() {
        let f = |x: &[f64]| 0.5 * (x[0] * x[0] + x[1] * x[1]);
        let g = |x: &[f64]| x.to_vec();
        let t = 0.3;
        let r = sodin_bound_check(f, g, &[0.2, -0.1], t, &[0.6, 0.8], 64, 1.0, 0).unwrap();
        assert!((r.empirical - t).abs() < 1e-12);
        assert!((r.theoretical - 8.0 * t).abs() < 1e-12);
        assert!(r.passed);
        let f = |x: &[f64]| x[0].max(0.0).powi(2);
        let g = |x: &[f64]| vec![2.0 * x[0].max(0.0), 0.0];
        let r = sodin_bound_check(f, g, &[0.0, 0.0], t, &[1.0, 0.0], 64, 1.0, 0).unwrap();
        assert!((r.empirical - 2.0 * t).abs() < 1e-12);
        assert!((r.theoretical - 8.0 * t).abs() < 1e-9);
        let concave = |x: &[f64]| -x[0] * x[0];
        assert!(sodin_bound_check(concave, |x: &[f64]| vec![-2.0 * x[0], 0.0], &[0.0, 0.0], t, &[1.0, 0.0], 8, 1.0, 0).is_err());
    }

    #[test]
    fn ms_check_gaussian_identity() {
        let grid = crate::measures::moduli::default_grid(20.0, 64);
        let delta = ConvexityModulus::power(ModulusKind::Delta, Norm::L2, 1.0, 2.0, grid).unwrap();
        let spec = PairSpec { random_pairs: 1000, grid_x: 64, grid_t: 32, ..Default::default() };
        let r = ms_modulus_bound_check_1d(|x| x, (-3.0, 3.0), &delta, &spec, 3, 1.0).unwrap();
        // δ(s) = s²: 8 δ⁻¹(4 s²) = 16 s
        assert!((r.empirical - 1.0 / 16.0).abs() < 1e-9);
        assert!(r.passed);
    }

    #[test]
    fn envelope_equality_in_1d() {
        let m = TransportMap1D::new(&Potential::gaussian(1), &Potential::uniform_interval(-1.0, 1.0).unwrap()).unwrap();
        let r = second_order_envelope_check_1d(&m, 2001, 1.0, 1e-4).unwrap();
        assert!(r.passed, "{r:?}");
        // equality holds, so the worst point sits on the bound
        assert!((r.empirical - r.theoretical).abs() < 1e-4);
    }

    #[test]
    fn envelope_bound_constants() {
        let b = EnvelopeBound::new(2, 1.0, EnvelopeVariant::DimensionFree { m: 1.0, p: -0.5 }, 0.0, 1.0).unwrap();
        assert!((b.factor - 1.5f64.sqrt()).abs() < 1e-15);
        // f_{−1/2,1}(0) = √(1/2) / ∫ sin = √(1/2)
        assert!((b.at(0.0).unwrap() - 1.5f64.sqrt() * 0.5f64.sqrt()).abs() < 1e-12);
        assert!(b.at(1.1).is_none());
        let b = EnvelopeBound::new(2, 4.0, EnvelopeVariant::Dimensional, 0.0, 1.0).unwrap();
        assert!((b.at(0.0).unwrap() - 2.0 * 0.5 / (3.0 * std::f64::consts::PI / 16.0)).abs() < 1e-12);
    }
}
