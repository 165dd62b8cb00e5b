//! Two-component one-dimensional Gaussian mixture fitted by EM.
//!
//! The fit is deterministic: the centers start at `c ± √(2λ/π)` (the 1-D
//! analogue of splitting along the principal axis), both standard deviations
//! start at `√λ` and both weights at 1/2.

use std::f64::consts::{LN_2, PI};

use thiserror::Error;

/// Smallest responsibility mass a component may carry before the fit is
/// declared degenerate.
pub const MIN_COMPONENT_MASS: f64 = 1e-8;

/// Variances are floored at this fraction of the squared data range.
pub const VARIANCE_FLOOR_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GmmError {
    #[error("at least 4 values are required, got {n}")]
    TooFewPoints { n: usize },
    #[error("values have zero variance")]
    ZeroVariance,
    #[error("a mixture component lost all responsibility mass")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmmOptions {
    /// Convergence threshold on the absolute change of the log-likelihood.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GmmOptions {
    fn default() -> Self {
        GmmOptions {
            tol: 1e-6,
            max_iter: 200,
        }
    }
}

/// Fitted mixture, components ordered so that `m1 <= m2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gmm2Fit {
    pub m1: f64,
    pub m2: f64,
    pub s1: f64,
    pub s2: f64,
    pub w1: f64,
    pub w2: f64,
    pub log_likelihood: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy)]
struct Params {
    mean: [f64; 2],
    var: [f64; 2],
    weight: [f64; 2],
}

/// Fits the mixture with default options.
pub fn fit_gmm2(values: &[f64]) -> Result<Gmm2Fit, GmmError> {
    fit_gmm2_with(values, GmmOptions::default())
}

pub fn fit_gmm2_with(values: &[f64], opts: GmmOptions) -> Result<Gmm2Fit, GmmError> {
    fit_gmm2_traced(values, opts, |_| {})
}

/// Runs EM, calling `on_iteration` with the log-likelihood of the
/// parameters at the start of every iteration and once more for the
/// returned parameters.
pub fn fit_gmm2_traced<F>(values: &[f64], opts: GmmOptions, mut on_iteration: F) -> Result<Gmm2Fit, GmmError>
where
    F: FnMut(f64),
{
    let n = values.len();
    if n < 4 {
        return Err(GmmError::TooFewPoints { n });
    }
    let nf = n as f64;
    let center = values.iter().sum::<f64>() / nf;
    let lambda = values.iter().map(|&x| (x - center).powi(2)).sum::<f64>() / (nf - 1.0);
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let range = hi - lo;
    if !(lambda > 0.0) || !(range > 0.0) {
        return Err(GmmError::ZeroVariance);
    }
    let floor = VARIANCE_FLOOR_FRACTION * range * range;
    let offset = (2.0 * lambda / PI).sqrt();
    let mut params = Params {
        mean: [center - offset, center + offset],
        var: [lambda.max(floor); 2],
        weight: [0.5, 0.5],
    };

    let mut resp = vec![0.0; n];
    let mut log_likelihood = e_step(values, &params, &mut resp);
    let mut iterations = 0;
    #[cfg(debug_assertions)]
    let mut previous = f64::NEG_INFINITY;
    while iterations < opts.max_iter {
        on_iteration(log_likelihood);
        #[cfg(debug_assertions)]
        {
            debug_assert!(
                log_likelihood >= previous - 1e-9 * (1.0 + previous.abs()),
                "EM log-likelihood decreased: {previous} -> {log_likelihood}"
            );
            previous = log_likelihood;
        }
        params = m_step(values, &resp, floor)?;
        iterations += 1;
        let next = e_step(values, &params, &mut resp);
        let delta = (next - log_likelihood).abs();
        log_likelihood = next;
        if delta < opts.tol {
            break;
        }
    }
    on_iteration(log_likelihood);

    let (a, b) = if params.mean[0] <= params.mean[1] { (0, 1) } else { (1, 0) };
    Ok(Gmm2Fit {
        m1: params.mean[a],
        m2: params.mean[b],
        s1: params.var[a].sqrt(),
        s2: params.var[b].sqrt(),
        w1: params.weight[a],
        w2: params.weight[b],
        log_likelihood,
        iterations,
    })
}

/// Fills `resp` with the responsibility of component 0 for every value and
/// returns the total log-likelihood.
fn e_step(values: &[f64], p: &Params, resp: &mut [f64]) -> f64 {
    let log_norm = [
        p.weight[0].ln() - 0.5 * (LN_2 + PI.ln() + p.var[0].ln()),
        p.weight[1].ln() - 0.5 * (LN_2 + PI.ln() + p.var[1].ln()),
    ];
    let inv_two_var = [0.5 / p.var[0], 0.5 / p.var[1]];
    let mut total = 0.0;
    for (r, &x) in resp.iter_mut().zip(values) {
        let l0 = log_norm[0] - (x - p.mean[0]).powi(2) * inv_two_var[0];
        let l1 = log_norm[1] - (x - p.mean[1]).powi(2) * inv_two_var[1];
        let m = l0.max(l1);
        let e0 = (l0 - m).exp();
        let e1 = (l1 - m).exp();
        let s = e0 + e1;
        total += m + s.ln();
        *r = e0 / s;
    }
    total
}

fn m_step(values: &[f64], resp: &[f64], floor: f64) -> Result<Params, GmmError> {
    let n = values.len() as f64;
    let mut mass = [0.0; 2];
    let mut sum = [0.0; 2];
    for (&r, &x) in resp.iter().zip(values) {
        mass[0] += r;
        mass[1] += 1.0 - r;
        sum[0] += r * x;
        sum[1] += (1.0 - r) * x;
    }
    if mass[0] < MIN_COMPONENT_MASS || mass[1] < MIN_COMPONENT_MASS {
        return Err(GmmError::Degenerate);
    }
    let mean = [sum[0] / mass[0], sum[1] / mass[1]];
    let mut sq = [0.0; 2];
    for (&r, &x) in resp.iter().zip(values) {
        sq[0] += r * (x - mean[0]).powi(2);
        sq[1] += (1.0 - r) * (x - mean[1]).powi(2);
    }
    let w0 = mass[0] / n;
    Ok(Params {
        mean,
        var: [(sq[0] / mass[0]).max(floor), (sq[1] / mass[1]).max(floor)],
        weight: [w0, 1.0 - w0],
    })
}
