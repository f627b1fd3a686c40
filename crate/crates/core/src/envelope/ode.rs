//! Dormand–Prince 5(4) with adaptive steps, exact landing on requested
//! output abscissae, and a stopping predicate checked after each step.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct Run<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    pub outputs: Vec<(f64, [f64; N])>,
    pub stopped: bool,
}

/// Integrate `y' = rhs(x, y)` from `x0` towards `x_end` (either direction).
pub(crate) fn solve<const N: usize, F, S>(
    rhs: F,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    tol: f64,
    outputs: &[f64],
    stop: S,
) -> Result<Run<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: Fn(f64, &[f64; N]) -> bool,
{
    let dir = if x_end >= x0 { 1.0 } else { -1.0 };
    let span = (x_end - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut h = (span * 1e-3).max(1e-12);
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && (outputs[next_out] - x0) * dir <= 0.0 {
        out.push((outputs[next_out], y));
        next_out += 1;
    }
    let mut k = [[0.0; N]; 7];
    k[0] = rhs(x, &y);
    let mut steps = 0usize;
    while (x_end - x) * dir > 0.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::NonConvergence { iterations: steps, residual: (x_end - x).abs() });
        }
        let mut limit = (x_end - x).abs();
        if next_out < outputs.len() {
            limit = limit.min((outputs[next_out] - x).abs());
        }
        let landing = h >= limit;
        let step = if landing { limit } else { h };
        let hs = step * dir;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += hs * a * kj[i];
                    }
                }
            }
            k[s] = rhs(x + C[s] * hs, &ys);
        }
        let mut y_new = y;
        for i in 0..N {
            y_new[i] += hs * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
        }
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = hs * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            h *= 0.1;
            if h < 1e-300 {
                return Err(Error::NonConvergence { iterations: steps, residual: f64::NAN });
            }
            continue;
        }
        if err <= 1.0 {
            x = if landing { x + limit * dir } else { x + hs };
            y = y_new;
            // first-same-as-last: the seventh stage is the derivative at the new point
            k[0] = k[6];
            if next_out < outputs.len() && landing && (outputs[next_out] - x).abs() <= 1e-15 * (1.0 + x.abs()) {
                x = outputs[next_out];
                out.push((x, y));
                next_out += 1;
            }
            if stop(x, &y) {
                return Ok(Run { x, y, outputs: out, stopped: true });
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if !landing || err > 1.0 {
            h = step * factor;
        } else {
            h = h.max(step * factor);
        }
    }
    Ok(Run { x, y, outputs: out, stopped: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let run = solve(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, 1e-12, &[1.0, 5.0], |_, _| false).unwrap();
        assert!((run.y[0] - 10f64.sin()).abs() < 1e-9);
        assert_eq!(run.outputs.len(), 2);
        assert!((run.outputs[1].1[0] - 5f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn backwards_and_stopping() {
        let run = solve(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], -5.0, 1e-12, &[], |_, y| y[0] < 0.5).unwrap();
        assert!(run.stopped);
        assert!(run.y[0] < 0.5 && run.x < -0.69);
    }
}
