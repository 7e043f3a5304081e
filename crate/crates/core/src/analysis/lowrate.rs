//! Failure rates at small `p` by stratifying over the error weight.
//!
//! `P_fail(p) = sum_w C(n,w) p^w (1-p)^(n-w) f_w`, where `f_w` is the
//! failure probability of a uniformly random weight-`w` error. Weights below
//! `d/2` never fail. Small strata are enumerated exhaustively; larger ones are
//! sampled.

use rand::seq::index::sample;
use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{binomial, count_failures, Combinations, ENUMERATION_LIMIT};
use crate::decoders::{check_failure, Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::lattice::{Color, ColorCodeLattice};
use crate::noise::{syndrome, ShotRng};

pub const ESTIMATOR: &str = "fixed-weight stratification";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowRateOptions {
    /// Largest weight included; heavier errors are bounded, not estimated.
    pub w_max: usize,
    /// Samples per sampled stratum; strata with at most this many
    /// configurations are enumerated instead.
    pub shots_per_weight: u64,
    /// Tie-break seeds per configuration in enumerated strata.
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stratum {
    pub weight: usize,
    pub configurations: u64,
    pub exhaustive: bool,
    pub trials: u64,
    /// Estimated conditional failure probability.
    pub f_hat: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowRatePoint {
    pub p: f64,
    pub p_fail: f64,
    pub std_error: f64,
    /// Probability of any error heavier than `w_max`, an upper bound on
    /// what the truncation leaves out.
    pub truncation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowRateEstimate {
    pub estimator: &'static str,
    pub d: usize,
    pub logical: Color,
    pub strata: Vec<Stratum>,
    pub points: Vec<LowRatePoint>,
}

impl LowRateEstimate {
    /// Least-squares slope of `log P_fail` against `log p` over the points
    /// with `p <= p_max`.
    pub fn loglog_slope(&self, p_max: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|pt| pt.p <= p_max && pt.p_fail > 0.0)
            .map(|pt| (pt.p.ln(), pt.p_fail.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let (mx, my) = (
            pts.iter().map(|p| p.0).sum::<f64>() / n,
            pts.iter().map(|p| p.1).sum::<f64>() / n,
        );
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}

/// `C(n,w) p^w (1-p)^(n-w)`.
pub fn binomial_pmf(n: usize, w: usize, p: f64) -> f64 {
    if w > n {
        return 0.0;
    }
    if p == 0.0 {
        return if w == 0 { 1.0 } else { 0.0 };
    }
    let ln_c: f64 = (0..w)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum();
    (ln_c + w as f64 * p.ln() + (n - w) as f64 * (-p).ln_1p()).exp()
}

/// Stratified failure-rate estimate of the logical targeted by `cfg.order`.
pub fn lowrate_estimate(
    lat: &ColorCodeLattice,
    cfg: &DecoderConfig,
    ps: &[f64],
    opts: LowRateOptions,
) -> Result<LowRateEstimate> {
    let n = lat.num_qubits();
    let w_min = lat.distance / 2;
    if opts.w_max < w_min || opts.w_max > n {
        return Err(Error::InvalidParameter(format!(
            "w_max={} outside [{w_min}, {n}]",
            opts.w_max
        )));
    }
    if opts.shots_per_weight == 0 || opts.repeats == 0 {
        return Err(Error::InvalidParameter(
            "shots and repeats must be positive".into(),
        ));
    }
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("p={p} outside [0, 1]")));
    }
    let dec = Decoder::new(lat, *cfg)?;
    let mut strata = Vec::new();
    for w in w_min..=opts.w_max {
        let stream = super::stream_seed(opts.seed, w as u64);
        strata.push(stratum(lat, &dec, w, opts, stream)?);
    }
    let points = ps
        .iter()
        .map(|&p| {
            let mut p_fail = 0.0;
            let mut var = 0.0;
            for s in &strata {
                let weight = binomial_pmf(n, s.weight, p);
                p_fail += weight * s.f_hat;
                var += (weight * s.std_error).powi(2);
            }
            let kept: f64 = (0..=opts.w_max).map(|w| binomial_pmf(n, w, p)).sum();
            LowRatePoint {
                p,
                p_fail,
                std_error: var.sqrt(),
                truncation: (1.0 - kept).max(0.0),
            }
        })
        .collect();
    Ok(LowRateEstimate {
        estimator: ESTIMATOR,
        d: lat.distance,
        logical: cfg.order.logical(),
        strata,
        points,
    })
}

fn stratum(
    lat: &ColorCodeLattice,
    dec: &Decoder,
    w: usize,
    opts: LowRateOptions,
    seed: u64,
) -> Result<Stratum> {
    let n = lat.num_qubits();
    let total = binomial(n, w);
    if total <= opts.shots_per_weight && total <= ENUMERATION_LIMIT {
        let configs: Vec<Vec<usize>> = Combinations::new(n, w).collect();
        let counts = count_failures(lat, dec, &configs, opts.repeats, seed)?;
        let r = opts.repeats as f64;
        let mut f_sum = 0.0;
        let mut var = 0.0;
        for &k in &counts {
            let f = k as f64 / r;
            f_sum += f;
            if opts.repeats > 1 {
                var += f * (1.0 - f) / (r - 1.0);
            }
        }
        let t = total as f64;
        return Ok(Stratum {
            weight: w,
            configurations: total,
            exhaustive: true,
            trials: total * opts.repeats as u64,
            f_hat: f_sum / t,
            std_error: var.sqrt() / t,
        });
    }
    let logical = dec.config().order.logical();
    let fails: Result<Vec<bool>> = (0..opts.shots_per_weight)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ShotRng::for_shot(seed, shot);
            let mut qubits = sample(&mut rng, n, w).into_vec();
            qubits.sort_unstable();
            let corr = dec.decode(&syndrome(lat, &qubits), Some(rng.next_u64()))?;
            Ok(check_failure(&qubits, &corr, lat)?.get(logical))
        })
        .collect();
    let k = fails?.iter().filter(|&&f| f).count() as f64;
    let s = opts.shots_per_weight as f64;
    let f_hat = k / s;
    Ok(Stratum {
        weight: w,
        configurations: total,
        exhaustive: false,
        trials: opts.shots_per_weight,
        f_hat,
        std_error: (f_hat * (1.0 - f_hat) / s).sqrt(),
    })
}
