//! Finite-size scaling fits of logical failure rates.
//!
//! Near threshold `P_fail = A x^2 + B x + C` with `x = (p - p_th) d^(1/nu)`.
//! For each `(p_th, nu)` the coefficients follow from weighted linear least
//! squares; `(p_th, nu)` itself is found by a grid search refined around the
//! best cell. Confidence intervals come from a parametric bootstrap over the
//! shots of every point.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::sample::SampleRecord;
use crate::error::{Error, Result};

/// Which failure tally is fitted.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FitTarget {
    #[default]
    Any,
    Green,
    Blue,
}

impl FitTarget {
    fn failures(self, r: &SampleRecord) -> u64 {
        match self {
            FitTarget::Any => r.fail_any,
            FitTarget::Green => r.fail_g,
            FitTarget::Blue => r.fail_b,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub target: FitTarget,
    pub bootstrap: usize,
    pub seed: u64,
    pub nu_range: (f64, f64),
    /// Two-sided confidence level of the intervals.
    pub confidence: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            target: FitTarget::Any,
            bootstrap: 200,
            seed: 0,
            nu_range: (0.5, 3.0),
            confidence: 0.95,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub p_th: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p_th_ci: (f64, f64),
    pub nu_ci: (f64, f64),
    pub a_ci: (f64, f64),
    pub b_ci: (f64, f64),
    pub c_ci: (f64, f64),
    /// Euclidean norm of the unweighted residuals.
    pub residual_norm: f64,
    pub target: FitTarget,
    pub distances: Vec<usize>,
    pub p_window: (f64, f64),
    pub points: usize,
    pub bootstrap: usize,
}

#[derive(Clone, Copy)]
struct Point {
    d: f64,
    p: f64,
    y: f64,
    w: f64,
}

#[derive(Clone, Copy)]
struct Estimate {
    p_th: f64,
    nu: f64,
    coef: [f64; 3],
    cost: f64,
}

/// Fits the scaling ansatz to records that share a code family and decoder.
pub fn fit_threshold(records: &[SampleRecord], opts: &FitOptions) -> Result<FitResult> {
    check_domain(records, opts.target)?;
    let (nu_lo, nu_hi) = opts.nu_range;
    if !(nu_lo > 0.0 && nu_lo < nu_hi) {
        return Err(Error::InvalidParameter(format!(
            "nu range ({nu_lo}, {nu_hi}) is empty"
        )));
    }
    let counts: Vec<u64> = records.iter().map(|r| opts.target.failures(r)).collect();
    let p_window = (
        records.iter().map(|r| r.p).fold(f64::INFINITY, f64::min),
        records
            .iter()
            .map(|r| r.p)
            .fold(f64::NEG_INFINITY, f64::max),
    );
    let best = search(&points(records, &counts), p_window, opts.nu_range);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples: Vec<Estimate> = Vec::with_capacity(opts.bootstrap);
    for _ in 0..opts.bootstrap {
        let resampled: Vec<u64> = records
            .iter()
            .zip(&counts)
            .map(|(r, &k)| {
                let q = k as f64 / r.shots as f64;
                Binomial::new(r.shots, q)
                    .map(|b| b.sample(&mut rng))
                    .unwrap_or(k)
            })
            .collect();
        samples.push(search(
            &points(records, &resampled),
            p_window,
            opts.nu_range,
        ));
    }
    let alpha = (1.0 - opts.confidence).clamp(0.0, 1.0) / 2.0;
    let ci =
        |f: &dyn Fn(&Estimate) -> f64| interval(samples.iter().map(f).collect(), f(&best), alpha);

    let pts = points(records, &counts);
    let residual_norm = pts
        .iter()
        .map(|pt| (pt.y - model(&best, pt)).powi(2))
        .sum::<f64>()
        .sqrt();
    let distances: BTreeSet<usize> = records.iter().map(|r| r.d).collect();
    Ok(FitResult {
        p_th: best.p_th,
        nu: best.nu,
        a: best.coef[0],
        b: best.coef[1],
        c: best.coef[2],
        p_th_ci: ci(&|e| e.p_th),
        nu_ci: ci(&|e| e.nu),
        a_ci: ci(&|e| e.coef[0]),
        b_ci: ci(&|e| e.coef[1]),
        c_ci: ci(&|e| e.coef[2]),
        residual_norm,
        target: opts.target,
        distances: distances.into_iter().collect(),
        p_window,
        points: records.len(),
        bootstrap: opts.bootstrap,
    })
}

fn check_domain(records: &[SampleRecord], target: FitTarget) -> Result<()> {
    for r in records {
        r.validate()?;
        if r.shots == 0 {
            return Err(Error::FitDomain(format!(
                "record d={} p={} has no shots",
                r.d, r.p
            )));
        }
    }
    if let Some(r) = records
        .iter()
        .find(|r| r.family != records[0].family || r.decoder != records[0].decoder)
    {
        return Err(Error::FitDomain(format!(
            "records mix {:?}/{} with {:?}/{}",
            records[0].family, records[0].decoder, r.family, r.decoder
        )));
    }
    let ds: BTreeSet<usize> = records.iter().map(|r| r.d).collect();
    let ps: BTreeSet<u64> = records.iter().map(|r| r.p.to_bits()).collect();
    if ds.len() < 3 {
        return Err(Error::FitDomain(format!(
            "need at least 3 distances, got {}",
            ds.len()
        )));
    }
    if ps.len() < 5 {
        return Err(Error::FitDomain(format!(
            "need at least 5 error rates, got {}",
            ps.len()
        )));
    }
    // the smallest and largest distance must swap order across the window
    let (d_lo, d_hi) = (*ds.first().unwrap(), *ds.last().unwrap());
    let rate = |d: usize, p: f64| {
        records
            .iter()
            .find(|r| r.d == d && r.p == p)
            .map(|r| target.failures(r) as f64 / r.shots as f64)
    };
    let shared: Vec<f64> = records
        .iter()
        .filter(|r| r.d == d_lo)
        .map(|r| r.p)
        .filter(|&p| rate(d_hi, p).is_some())
        .collect();
    let p_min = shared.iter().copied().fold(f64::INFINITY, f64::min);
    let p_max = shared.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if shared.len() < 2 {
        return Err(Error::FitDomain(
            "smallest and largest distance share fewer than 2 error rates".into(),
        ));
    }
    let below = rate(d_hi, p_min).unwrap() < rate(d_lo, p_min).unwrap();
    let above = rate(d_hi, p_max).unwrap() > rate(d_lo, p_max).unwrap();
    if !(below && above) {
        return Err(Error::FitDomain(format!(
            "curves for d={d_lo} and d={d_hi} do not cross inside [{p_min}, {p_max}]"
        )));
    }
    Ok(())
}

fn points(records: &[SampleRecord], counts: &[u64]) -> Vec<Point> {
    records
        .iter()
        .zip(counts)
        .map(|(r, &k)| {
            let n = r.shots as f64;
            let y = k as f64 / n;
            // binomial variance, floored so that empty or full tallies keep a finite weight
            let var = (y * (1.0 - y)).max(1.0 / n) / n;
            Point {
                d: r.d as f64,
                p: r.p,
                y,
                w: 1.0 / var,
            }
        })
        .collect()
}

fn model(e: &Estimate, pt: &Point) -> f64 {
    let x = scaled(pt, e.p_th, e.nu);
    e.coef[0] * x * x + e.coef[1] * x + e.coef[2]
}

fn scaled(pt: &Point, p_th: f64, nu: f64) -> f64 {
    (pt.p - p_th) * pt.d.powf(1.0 / nu)
}

/// Weighted quadratic least squares at fixed `(p_th, nu)`.
fn solve(pts: &[Point], p_th: f64, nu: f64) -> Estimate {
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for pt in pts {
        let x = scaled(pt, p_th, nu);
        let basis = [x * x, x, 1.0];
        for i in 0..3 {
            v[i] += pt.w * basis[i] * pt.y;
            for j in 0..3 {
                m[i][j] += pt.w * basis[i] * basis[j];
            }
        }
    }
    let coef = solve3(m, v).unwrap_or([0.0, 0.0, 0.0]);
    let cost = pts
        .iter()
        .map(|pt| {
            let x = scaled(pt, p_th, nu);
            pt.w * (pt.y - (coef[0] * x * x + coef[1] * x + coef[2])).powi(2)
        })
        .sum();
    Estimate {
        p_th,
        nu,
        coef,
        cost,
    }
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (v[i] - s) / m[i][i];
    }
    Some(x)
}

const GRID: usize = 24;
const REFINEMENTS: usize = 6;

fn search(pts: &[Point], p_window: (f64, f64), nu_range: (f64, f64)) -> Estimate {
    let (mut p_lo, mut p_hi) = p_window;
    let (mut n_lo, mut n_hi) = nu_range;
    let mut best: Option<Estimate> = None;
    for _ in 0..=REFINEMENTS {
        for i in 0..=GRID {
            for j in 0..=GRID {
                let p_th = p_lo + (p_hi - p_lo) * i as f64 / GRID as f64;
                let nu = n_lo + (n_hi - n_lo) * j as f64 / GRID as f64;
                let e = solve(pts, p_th, nu);
                if best.is_none_or(|b| e.cost < b.cost) {
                    best = Some(e);
                }
            }
        }
        let b = best.unwrap();
        let (dp, dn) = (
            2.0 * (p_hi - p_lo) / GRID as f64,
            2.0 * (n_hi - n_lo) / GRID as f64,
        );
        (p_lo, p_hi) = ((b.p_th - dp).max(p_window.0), (b.p_th + dp).min(p_window.1));
        (n_lo, n_hi) = ((b.nu - dn).max(nu_range.0), (b.nu + dn).min(nu_range.1));
    }
    best.unwrap()
}

/// Percentile interval, widened if needed to contain the point estimate.
fn interval(mut xs: Vec<f64>, estimate: f64, alpha: f64) -> (f64, f64) {
    if xs.is_empty() {
        return (estimate, estimate);
    }
    xs.sort_by(f64::total_cmp);
    let at = |q: f64| xs[((q * (xs.len() - 1) as f64).round() as usize).min(xs.len() - 1)];
    (at(alpha).min(estimate), at(1.0 - alpha).max(estimate))
}
