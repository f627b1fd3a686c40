//! Browser bindings: envelope tables, one-dimensional transport maps and
//! concentration profile bounds. Tables come back as flat row-major arrays.

use brenier_core::concentration::ms_profile_bound;
use brenier_core::envelope::EnvelopeFunction;
use brenier_core::measures::moduli::tabulate;
use brenier_core::measures::{ModulusKind, Norm, Potential, SearchSpec};
use brenier_core::transport1d::TransportMap1D;
use wasm_bindgen::prelude::*;

fn js(e: brenier_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Rows `(t, f(t), −f'(t))` of `f_{p,a}` on `n` points of `[−a, a]`.
#[wasm_bindgen]
pub fn envelope_table(p: f64, a: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    let env = EnvelopeFunction::new(p, a).map_err(js)?;
    Ok(env.table(n.max(2)).into_iter().flatten().collect())
}

/// `f_{p,a}(0)`.
#[wasm_bindgen]
pub fn envelope_peak(p: f64, a: f64) -> Result<f64, JsValue> {
    Ok(EnvelopeFunction::new(p, a).map_err(js)?.f0())
}

fn target_1d(kind: &str, param: f64) -> brenier_core::Result<Potential> {
    match kind {
        "uniform" => Potential::uniform_interval(-param, param),
        "gaussian" => Potential::gaussian_with(vec![0.0], param),
        "power" => Potential::power_law(1, param),
        other => Err(brenier_core::Error::Unsupported(format!("target `{other}`"))),
    }
}

/// Monotone map from the standard Gaussian to `uniform` on `[−param, param]`,
/// a `gaussian` with standard deviation `param`, or `power` `e^{−|x|^param}`.
/// Rows `(x, T(x), T'(x))`; the last row holds `(argmax, max T', bound)`,
/// with `bound` the envelope value at the centre for uniform targets and NaN otherwise.
#[wasm_bindgen]
pub fn transport_1d(kind: &str, param: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    let target = target_1d(kind, param).map_err(js)?;
    let map = TransportMap1D::new(&Potential::gaussian(1), &target).map_err(js)?;
    let mut out: Vec<f64> = map.table(n.max(2)).into_iter().flatten().collect();
    let (x, d) = map.max_derivative(2001).map_err(js)?;
    let bound = if kind == "uniform" { EnvelopeFunction::new(0.0, param).map_err(js)?.f0() } else { f64::NAN };
    out.extend([x, d, bound]);
    Ok(out)
}

/// Rows `(r, Φ(Φ⁻¹(ν(A)) + ½√δ(r/8)))` for `ν ∝ e^{−|x|^β}` on the line.
#[wasm_bindgen]
pub fn concentration_profile(beta: f64, nu_a: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    let pot = Potential::power_law(1, beta).map_err(js)?;
    let spec = SearchSpec { grid_per_axis: 32, ..SearchSpec::default() };
    let delta = tabulate(&pot, ModulusKind::Delta, Norm::L2, &spec, (r_max / 8.0).max(1e-2)).map_err(js)?;
    let n = n.max(2);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let r = r_max * i as f64 / (n - 1) as f64;
        out.extend([r, ms_profile_bound(nu_a, r, &delta).map_err(js)?]);
    }
    Ok(out)
}
