use std::path::PathBuf;

use brenier_core::concentration::{
    enlargement_profile, marton_check, mlsi_check, ms_exp_bound, ms_profile_bound, talagrand_check, BaseSet, Measurement,
};
use brenier_core::envelope::{envelope_ode_oracle, EnvelopeFunction};
use brenier_core::measures::moduli::{growth_constant, tabulate, Extreme, Growth};
use brenier_core::measures::{ModulusKind, Norm, Potential};
use brenier_core::rng::derive_seed;
use brenier_core::suite::{run_suite, suite_json, CriterionResult};
use brenier_core::transport1d::{gradient_holder_constant, TransportMap1D};
use brenier_core::transport_nd::{empirical_lipschitz_nd, solve_entropic, Target};
use brenier_core::verify::{
    check_gradient_holder_1d, check_sharper_quadratic, check_theorem_hoelder, monotonicity_check, ms_modulus_bound_check_nd,
    second_order_envelope_check, second_order_envelope_check_1d, EnvelopeBound, EnvelopeVariant, QuotientSamples, Status,
    VerificationReport,
};
use serde_json::{json, Value};

use crate::config::{parse_measure, parse_target, ConfigError, ExperimentConfig};
use crate::output::Artifacts;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    /// A solver or root finder did not converge.
    Numerical(String),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<brenier_core::Error> for Failure {
    fn from(e: brenier_core::Error) -> Self {
        use brenier_core::Error as E;
        match e {
            E::NonConvergence { .. } | E::Bracket { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

/// Reports produced by a command, for the exit code.
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    /// Failures that are not individual reports, such as a criterion that errored.
    pub extra_failures: usize,
}

fn stamp(mut reports: Vec<VerificationReport>, seed: u64, digest: &str) -> Vec<VerificationReport> {
    for r in &mut reports {
        if r.seed == 0 {
            r.seed = seed;
        }
        r.config_digest = digest.to_string();
    }
    reports
}

fn write_reports(art: &mut Artifacts, command: &str, cfg: &ExperimentConfig, section: Value, reports: &[VerificationReport]) -> std::io::Result<PathBuf> {
    art.json(
        "reports.json",
        &json!({
            "command": command,
            "seed": cfg.seed,
            "config_digest": art.digest(),
            "config": section,
            "reports": reports,
        }),
    )
}

pub fn envelope(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let c = &cfg.envelope;
    let env = EnvelopeFunction::new(c.p, c.a)?;
    let ode = envelope_ode_oracle(c.p, c.a, c.oracle_nodes)?;
    let mut rows = Vec::with_capacity(c.rows);
    let (mut worst, mut at) = (0.0f64, 0.0);
    for [t, f, neg_slope] in env.table(c.rows) {
        let (o, d) = match ode.eval(t) {
            Ok(o) => (o, (o - f).abs()),
            Err(_) => (f64::NAN, f64::NAN),
        };
        if t.abs() <= 0.99 * c.a && d > worst {
            worst = d;
            at = t;
        }
        rows.push(vec![t, f, neg_slope, o, d]);
    }
    let f0_diff = (env.f0() - ode.f0).abs();
    let report = VerificationReport::new("envelope_oracle", "closed-form f_{p,a} equals the shooting solution of the envelope ODE", 0.0, worst.max(f0_diff), 1.0, 1e-6 * c.a)
        .witness("p", c.p)
        .witness("a", c.a)
        .witness("max_abs_diff", worst)
        .witness("at_t", at)
        .witness("f0_closed", env.f0())
        .witness("f0_shooting", ode.f0);
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("envelope"))?;
    art.csv("envelope.csv", &["t", "f", "neg_slope", "f_ode", "abs_diff"], &rows)?;
    if cfg.svg {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let title = format!("f_(p,a), p = {}, a = {}", c.p, c.a);
        art.svg("envelope.svg", &title, &xs, &[("closed form", rows.iter().map(|r| r[1]).collect()), ("shooting", rows.iter().map(|r| r[3]).collect())])?;
    }
    let reports = stamp(vec![report], cfg.seed, art.digest());
    write_reports(&mut art, "envelope", cfg, serde_json::to_value(c).unwrap_or_default(), &reports)?;
    Ok(Outcome { reports, extra_failures: 0 })
}

fn source_lambda(pot: &Potential, dim: usize, given: Option<f64>) -> Result<f64, Failure> {
    if let Some(l) = given {
        return Ok(l);
    }
    let mut best: f64 = 0.0;
    for i in 0..dim {
        let mut h = vec![0.0; dim];
        h[i] = 1.0;
        match pot.hessian_sup(&h) {
            Some(v) => best = best.max(v),
            None => return Err(Failure::Config("the source Hessian bound is not known in closed form; set `transportnd.lambda`".into())),
        }
    }
    Ok(best)
}

pub fn transport1d(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let c = &cfg.transport1d;
    let source = parse_measure("transport1d.source", &c.source, 1)?;
    let target = parse_measure("transport1d.target", &c.target, 1)?;
    let map = TransportMap1D::new(&source, &target)?;
    let seed = cfg.seed;
    let lambda = source.hessian_sup(&[1.0]);
    let mut reports = Vec::new();

    let (x_max, d_max) = map.max_derivative(4001)?;
    let mut peak = VerificationReport::new("max_hessian", "largest φ'' on the band", d_max, d_max, 1.0, 0.0)
        .witness("argmax", x_max)
        .witness("phi_prime_at_argmax", map.eval(x_max));
    if let Some(body) = target.body() {
        let (lo, hi) = body.bounding_box();
        let (t0, a) = (0.5 * (lo[0] + hi[0]), 0.5 * (hi[0] - lo[0]));
        if let Some(l) = lambda {
            let bound = EnvelopeBound::new(1, l, EnvelopeVariant::Dimensional, t0, a)?.at(t0).unwrap_or(f64::NAN);
            peak = VerificationReport::new("max_hessian", "max φ'' ≤ √Λ f_{0,a}(0) for an interval target", bound, d_max, 1.0, 1e-4)
                .witness("argmax", x_max)
                .witness("phi_prime_at_argmax", map.eval(x_max))
                .witness("lambda", l);
            reports.push(peak);
            reports.push(second_order_envelope_check_1d(&map, c.rows.max(2001), l, 1e-4)?);
        } else {
            reports.push(peak.note("no closed-form Hessian bound for the source; reported for information"));
        }
    } else {
        let k = growth_constant(&target, Growth::SecondDifference, 2.0, Extreme::Inf, (1e-4, 4.0), &c.search)?.value;
        match lambda {
            Some(l) if k > 1e-6 => {
                reports.push(
                    VerificationReport::new("caffarelli_refinement", "φ'' ≤ √(Λ/K) when W'' ≥ K", (l / k).sqrt(), d_max, 1.0, 1e-3)
                        .witness("k", k)
                        .witness("lambda", l)
                        .witness("argmax", x_max),
                );
            }
            _ => reports.push(peak.note("the target is not uniformly convex or Λ is unknown; reported for information")),
        }
        let search = &c.search;
        let c_p = growth_constant(&source, Growth::GradientDifference, c.p, Extreme::Sup, (1e-2, 4.0), search)?.value;
        let c_q = growth_constant(&target, Growth::GradientMonotonicity, c.q + 1.0, Extreme::Inf, (1e-2, 4.0), search)?.value;
        if !(c_q > 1e-12) {
            return Err(Failure::Config(format!("`transport1d.q`: the target has no growth of order {} (C_q ≈ 0)", c.q)));
        }
        let (constant, alpha) = gradient_holder_constant(c.p, c.q, c_p, c_q)?;
        reports.push(
            check_gradient_holder_1d(|x| map.eval(x), map.band(), alpha, constant, &c.pairs, derive_seed(seed, "holder", 0), 1.0, 1e-3)?
                .witness("c_p", c_p)
                .witness("c_q", c_q),
        );
        let a_p = growth_constant(&source, Growth::SecondDifference, c.p + 1.0, Extreme::Sup, (1e-2, 4.0), search)?.value;
        let a_q = growth_constant(&target, Growth::SecondDifference, c.q + 1.0, Extreme::Inf, (1e-2, 4.0), search)?.value;
        let (lo, hi) = map.band();
        let reach = (0.25 * (hi - lo)).min(4.0);
        let samples = QuotientSamples::grid_1d(lo + reach, hi - reach, 401, 1e-2, reach, 40);
        let quotient = |x: &[f64], _: &[f64], t: f64| Ok(map.second_difference(x[0], t));
        reports.push(check_theorem_hoelder(a_p, c.p, a_q, c.q, quotient, &samples)?.witness("a_p", a_p).witness("a_q", a_q));
        if c.p == 1.0 && c.q == 1.0 {
            reports.push(check_sharper_quadratic(a_p, a_q, quotient, &samples)?);
        }
    }

    let table = map.table(c.rows);
    let rows: Vec<Vec<f64>> = table.iter().map(|r| r.to_vec()).collect();
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("transport1d"))?;
    art.csv("transport1d.csv", &["x", "map", "map_derivative"], &rows)?;
    if cfg.svg {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        art.svg("transport1d.svg", "T = φ' and T' = φ''", &xs, &[("T", rows.iter().map(|r| r[1]).collect()), ("T'", rows.iter().map(|r| r[2]).collect())])?;
    }
    let reports = stamp(reports, cfg.seed, art.digest());
    write_reports(&mut art, "transport1d", cfg, serde_json::to_value(c).unwrap_or_default(), &reports)?;
    Ok(Outcome { reports, extra_failures: 0 })
}

pub fn transportnd(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let c = &cfg.transportnd;
    let source = parse_measure("transportnd.source", &c.source, c.dim)?;
    let target = parse_target("transportnd.target", &c.target, c.dim)?;
    let seed = cfg.seed;
    let tp = solve_entropic(&source, &target, &c.solver, derive_seed(seed, "solve", 0))?;
    let mut conv = VerificationReport::new("entropic_convergence", "L1 marginal error of the entropic plan", c.solver.tol, tp.marginal_error, 1.0, 0.0)
        .witness("iterations", tp.iterations_run)
        .witness("dual_change", tp.dual_change)
        .witness("epsilon", tp.epsilon);
    if !tp.converged {
        conv = conv.inconclusive("entropic solver did not converge");
    }
    let mut reports = vec![conv];
    let units: Vec<Vec<f64>> = (0..c.dim)
        .map(|i| {
            let mut h = vec![0.0; c.dim];
            h[i] = 1.0;
            h
        })
        .collect();
    match &target {
        Target::Body { body } => {
            let lambda = source_lambda(&source, c.dim, c.lambda)?;
            let center = EnvelopeBound::new(c.dim, lambda, c.variant, 0.0, 0.5 * body.diameter())?;
            let bound = center.at(0.0).unwrap_or(f64::NAN);
            let w = empirical_lipschitz_nd(&tp, c.pair_count, derive_seed(seed, "lipschitz", 0))?;
            let mut lip = VerificationReport::new("measure_set_lipschitz", "|∇φ(x) − ∇φ(y)| ≤ L |x − y|, L the envelope at the centre of a diameter slab", bound, w.value, c.lipschitz_slack, 0.0)
                .witness("x", &w.x)
                .witness("y", &w.y)
                .witness("lambda", lambda)
                .witness("diameter", body.diameter());
            if !tp.converged {
                lip = lip.inconclusive("entropic solver did not converge");
            }
            reports.push(lip);
            for h in &units {
                reports.push(second_order_envelope_check(&tp, body, h, lambda, c.variant, c.envelope_slack)?);
            }
        }
        Target::Measure { potential } => {
            let delta = tabulate(potential, ModulusKind::Delta, Norm::L2, &c.search, 6.0)?;
            reports.push(ms_modulus_bound_check_nd(&tp, &delta, c.pair_count, derive_seed(seed, "pairs", 0), c.envelope_slack)?);
        }
    }
    reports.push(monotonicity_check(&tp, c.pair_count, derive_seed(seed, "monotone", 0))?);

    let mut rows = Vec::with_capacity(tp.source_samples.len());
    for x in &tp.source_samples {
        let mut row = x.clone();
        row.extend(tp.map_eval(x)?);
        let (ph, phh) = tp.directional(x, &units[0])?;
        row.extend([ph, phh]);
        rows.push(row);
    }
    let mut header: Vec<String> = (1..=c.dim).map(|i| format!("x{i}")).collect();
    header.extend((1..=c.dim).map(|i| format!("map{i}")));
    header.extend(["phi_h".to_string(), "phi_hh".to_string()]);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("transportnd"))?;
    art.csv("transportnd.csv", &header, &rows)?;
    let reports = stamp(reports, cfg.seed, art.digest());
    write_reports(&mut art, "transportnd", cfg, serde_json::to_value(c).unwrap_or_default(), &reports)?;
    Ok(Outcome { reports, extra_failures: 0 })
}

pub fn concentrate(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let c = &cfg.concentrate;
    let pot = parse_measure("concentrate.measure", &c.measure, c.dim)?;
    if c.base.dim() != c.dim {
        return Err(Failure::Config(format!("`concentrate.base`: dimension {} does not match `concentrate.dim` = {}", c.base.dim(), c.dim)));
    }
    if c.radii.is_empty() || c.radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Failure::Config("`concentrate.radii` must be a nonempty list of nonnegative numbers".into()));
    }
    let seed = cfg.seed;
    let r_max = c.radii.iter().cloned().fold(0.0, f64::max);
    let delta = tabulate(&pot, ModulusKind::Delta, Norm::L2, &c.search, (r_max / 8.0).max(1e-2))?;
    let mut rs = vec![0.0];
    rs.extend(&c.radii);
    let est = enlargement_profile(&pot, &c.base, &rs, c.norm, c.samples, derive_seed(seed, "profile", 0))?;
    let nu_a = est[0];
    if !(nu_a.value > 0.0 && nu_a.value < 1.0) {
        return Err(Failure::Config(format!("`concentrate.base`: estimated ν(A) = {} leaves no room for a bound", nu_a.value)));
    }
    let half = nu_a.upper() >= 0.5;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (r, e) in c.radii.iter().zip(&est[1..]) {
        let profile = ms_profile_bound(nu_a.value, *r, &delta)?;
        let exp = if half { ms_exp_bound(true, *r, &delta)? } else { f64::NAN };
        rows.push(vec![*r, e.value, profile, exp, e.ci_halfwidth]);
        let mk = |id: &str, anchor: &str, bound: f64| {
            VerificationReport::new(id, anchor, e.value + e.ci_halfwidth, bound, 1.0, 0.0)
                .witness("r", r)
                .witness("nu_a", nu_a.value)
                .witness("nu_ar", e.value)
                .witness("ci", e.ci_halfwidth)
        };
        reports.push(mk("ms_profile", "ν(A_r) ≥ Φ(Φ⁻¹(ν(A)) + ½ √δ(r/8))", profile));
        if half {
            reports.push(mk("ms_exp", "ν(A_r) ≥ 1 − ½ exp(−δ(r/8)/8) when ν(A) ≥ ½", exp).note("printed with exp(+δ/8); implemented with the negative exponent"));
        }
    }
    if c.marton {
        let b_tilde = tabulate(&pot, ModulusKind::Bregman, c.norm, &c.search, r_max.max(1e-2))?.convexify()?;
        for (i, r) in c.radii.iter().enumerate() {
            let how = match (&c.base, c.dim) {
                (BaseSet::HalfSpace { .. }, 1) => Measurement::Exact,
                _ => Measurement::MonteCarlo { n: c.samples, seed: derive_seed(seed, "marton", i as u64) },
            };
            reports.push(marton_check(&pot, &c.base, *r, c.norm, &b_tilde, how)?);
        }
    }
    if let Some(tilt) = &c.tilt {
        if c.dim != 1 {
            return Err(Failure::Config("`concentrate.tilt` needs `concentrate.dim` = 1".into()));
        }
        let b = tabulate(&pot, ModulusKind::Bregman, Norm::L2, &c.search, 10.0)?;
        reports.push(talagrand_check(&pot, tilt, &b)?);
        reports.push(mlsi_check(&pot, tilt, &b.conjugate()?)?);
    }
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("concentrate"))?;
    art.csv("profile.csv", &["r", "empirical", "profile_bound", "exp_bound", "ci"], &rows)?;
    if cfg.svg {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let mut series = vec![("empirical", rows.iter().map(|r| r[1]).collect()), ("profile bound", rows.iter().map(|r| r[2]).collect())];
        if half {
            series.push(("exp bound", rows.iter().map(|r| r[3]).collect()));
        }
        art.svg("profile.svg", "enlargement probability", &xs, &series)?;
    }
    let reports = stamp(reports, cfg.seed, art.digest());
    write_reports(&mut art, "concentrate", cfg, serde_json::to_value(c).unwrap_or_default(), &reports)?;
    Ok(Outcome { reports, extra_failures: 0 })
}

pub fn suite(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    let mut battery = cfg.suite.battery.clone();
    battery.seed = cfg.seed;
    let results = run_suite(&battery, &cfg.suite.criteria, cfg.jobs)?;
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("suite"))?;
    let mut text = suite_json(&results);
    text.push('\n');
    art.write("suite.json", text.as_bytes())?;
    for r in &results {
        println!("{} criterion {:>2} {}{}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.error.as_deref().map(|e| format!(": {e}")).unwrap_or_default());
    }
    let extra = results.iter().filter(|r: &&CriterionResult| r.error.is_some()).count();
    Ok(Outcome { reports: results.into_iter().flat_map(|r| r.reports).collect(), extra_failures: extra })
}

fn collect_reports(v: &Value, out: &mut Vec<VerificationReport>) -> Result<(), String> {
    match v {
        Value::Array(items) => {
            for it in items {
                collect_reports(it, out)?;
            }
            Ok(())
        }
        Value::Object(map) if map.contains_key("check_id") => {
            out.push(serde_json::from_value(v.clone()).map_err(|e| e.to_string())?);
            Ok(())
        }
        Value::Object(map) => match map.get("reports") {
            Some(r) => collect_reports(r, out),
            None => Err("no `reports` field".into()),
        },
        _ => Err("expected a report, a list of reports, or an object with `reports`".into()),
    }
}

pub fn report(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    if cfg.report.inputs.is_empty() {
        return Err(Failure::Config("`report.inputs`: no report files given".into()));
    }
    let mut all = Vec::new();
    let mut lines = vec![format!("{:<28} {:<36} {:<12} {:>14} {:>14} {:>6}", "file", "check", "status", "empirical", "theoretical", "slack")];
    for path in &cfg.report.inputs {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("`report.inputs`: {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("`report.inputs`: {}: {e}", path.display())))?;
        let mut reports = Vec::new();
        collect_reports(&v, &mut reports).map_err(|e| Failure::Config(format!("`report.inputs`: {}: {e}", path.display())))?;
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for r in &reports {
            let status = match r.status {
                Status::Pass => "pass",
                Status::VacuousPass => "vacuous-pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            lines.push(format!("{:<28} {:<36} {:<12} {:>14.6e} {:>14.6e} {:>6}", name, r.check_id, status, r.empirical, r.theoretical, r.slack));
        }
        all.extend(reports);
    }
    let passed = all.iter().filter(|r| r.passed).count();
    lines.push(format!("{passed} of {} checks passed", all.len()));
    let text = lines.join("\n") + "\n";
    print!("{text}");
    let mut art = Artifacts::new(cfg.out_dir(), cfg.seed, cfg.digest("report"))?;
    art.write("summary.txt", text.as_bytes())?;
    Ok(Outcome { reports: all, extra_failures: 0 })
}
