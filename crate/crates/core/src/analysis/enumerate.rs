//! Exhaustive enumeration of fixed-weight X errors.

use rayon::prelude::*;
use serde::Serialize;

use crate::decoders::{check_failure, derive_seed, Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::lattice::{Color, ColorCodeLattice};
use crate::noise::syndrome;

/// Largest number of configurations a single enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

const BATCH: usize = 4096;

/// `C(n, k)` saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().unwrap();
        let k = c.len();
        match (0..k).rev().find(|&i| c[i] < self.n - k + i) {
            Some(i) => {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationOptions {
    pub weight: usize,
    /// Decodes per configuration, each with its own tie-break seed.
    pub repeats: usize,
    pub seed: u64,
}

/// A configuration that failed at least once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingConfig {
    pub qubits: Vec<usize>,
    /// Failures out of `repeats` decodes.
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationResult {
    pub d: usize,
    pub weight: usize,
    pub repeats: usize,
    pub configurations: u64,
    /// Logical whose flips are counted: the one the decoder order targets.
    pub logical: Color,
    /// Sum over configurations of the observed failure fraction.
    pub expected: f64,
    /// Standard error of `expected` from the tie-break sampling.
    pub std_error: f64,
    pub failing: Vec<FailingConfig>,
    /// Failing configurations whose qubits span more than one block row.
    pub off_row: Vec<Vec<usize>>,
}

impl EnumerationResult {
    /// Configurations that failed on every decode.
    pub fn always_failing(&self) -> usize {
        self.failing
            .iter()
            .filter(|f| f.failures == self.repeats)
            .count()
    }
}

/// Decodes every weight-`w` X error `repeats` times and counts flips of the
/// logical targeted by `cfg.order`.
pub fn enumerate_failures(
    lat: &ColorCodeLattice,
    cfg: &DecoderConfig,
    opts: EnumerationOptions,
) -> Result<EnumerationResult> {
    let n = lat.num_qubits();
    let total = binomial(n, opts.weight);
    if total > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "C({n}, {}) = {total} configurations exceeds the limit of {ENUMERATION_LIMIT}",
            opts.weight
        )));
    }
    if opts.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let dec = Decoder::new(lat, *cfg)?;
    let configs: Vec<Vec<usize>> = Combinations::new(n, opts.weight).collect();
    let counts = count_failures(lat, &dec, &configs, opts.repeats, opts.seed)?;
    Ok(summarize(lat, cfg, opts, configs, counts))
}

/// Failures out of `repeats` for each configuration, in order. Seeds depend
/// only on the configuration index, so the schedule does not matter.
pub(crate) fn count_failures(
    lat: &ColorCodeLattice,
    dec: &Decoder,
    configs: &[Vec<usize>],
    repeats: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let logical = dec.config().order.logical();
    let mut out = Vec::with_capacity(configs.len());
    for (b, batch) in configs.chunks(BATCH).enumerate() {
        let part: Result<Vec<usize>> = batch
            .par_iter()
            .enumerate()
            .map(|(i, qubits)| {
                let index = (b * BATCH + i) as u64;
                let syn = syndrome(lat, qubits);
                let mut fails = 0;
                for r in 0..repeats {
                    let tie = derive_seed(seed, index * repeats as u64 + r as u64);
                    let corr = dec.decode(&syn, Some(tie))?;
                    if check_failure(qubits, &corr, lat)?.get(logical) {
                        fails += 1;
                    }
                }
                Ok(fails)
            })
            .collect();
        out.extend(part?);
    }
    Ok(out)
}

fn summarize(
    lat: &ColorCodeLattice,
    cfg: &DecoderConfig,
    opts: EnumerationOptions,
    configs: Vec<Vec<usize>>,
    counts: Vec<usize>,
) -> EnumerationResult {
    let r = opts.repeats as f64;
    let mut expected = 0.0;
    let mut var = 0.0;
    let mut failing = Vec::new();
    let mut off_row = Vec::new();
    for (qubits, fails) in configs.into_iter().zip(counts) {
        if fails == 0 {
            continue;
        }
        let f = fails as f64 / r;
        expected += f;
        if opts.repeats > 1 {
            var += f * (1.0 - f) / (r - 1.0);
        }
        if !single_block_row(lat, &qubits) {
            off_row.push(qubits.clone());
        }
        failing.push(FailingConfig {
            qubits,
            failures: fails,
        });
    }
    EnumerationResult {
        d: lat.distance,
        weight: opts.weight,
        repeats: opts.repeats,
        configurations: binomial(lat.num_qubits(), opts.weight),
        logical: cfg.order.logical(),
        expected,
        std_error: var.sqrt(),
        failing,
        off_row,
    }
}

/// All qubits lie in blocks of one block row.
pub fn single_block_row(lat: &ColorCodeLattice, qubits: &[usize]) -> bool {
    let mut rows = qubits.iter().map(|&q| lat.block_of_qubit(q).row);
    match rows.next() {
        Some(first) => rows.all(|r| r == first),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::DecoderKind;

    #[test]
    fn combinations_are_complete_and_ordered() {
        for (n, k) in [(5, 0), (5, 2), (6, 3), (7, 7), (3, 4)] {
            let all: Vec<Vec<usize>> = Combinations::new(n, k).collect();
            assert_eq!(all.len() as u64, binomial(n, k));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert!(all
                .iter()
                .all(|c| c.windows(2).all(|p| p[0] < p[1]) && c.iter().all(|&x| x < n)));
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(50, 3), 19600);
        assert_eq!(binomial(98, 4), 3_612_280);
        assert_eq!(binomial(10, 11), 0);
        assert_eq!(binomial(1000, 500), u64::MAX);
    }

    #[test]
    fn weight_one_never_fails() {
        let lat = ColorCodeLattice::new(4).unwrap();
        for kind in [DecoderKind::Restricted, DecoderKind::Correlated] {
            let r = enumerate_failures(
                &lat,
                &kind.config(),
                EnumerationOptions {
                    weight: 1,
                    repeats: 4,
                    seed: 1,
                },
            )
            .unwrap();
            assert_eq!(r.configurations, 20);
            assert_eq!(r.expected, 0.0);
            assert!(r.failing.is_empty());
        }
    }

    #[test]
    fn capacity_guard() {
        let lat = ColorCodeLattice::new(10).unwrap();
        let err = enumerate_failures(
            &lat,
            &DecoderConfig::correlated(),
            EnumerationOptions {
                weight: 5,
                repeats: 1,
                seed: 0,
            },
        );
        assert!(matches!(err, Err(Error::Capacity(_))));
    }

    #[test]
    fn restricted_d4_is_half_of_every_row_pattern() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let r = enumerate_failures(
            &lat,
            &DecoderConfig::restricted(),
            EnumerationOptions {
                weight: 2,
                repeats: 32,
                seed: 7,
            },
        )
        .unwrap();
        // 48 single-row weight-2 patterns, each a fair coin
        assert_eq!(r.failing.len(), 48);
        assert!(r.off_row.is_empty());
        assert!(
            (r.expected - 24.0).abs() <= 3.0 * r.std_error + 1e-9,
            "{} +- {}",
            r.expected,
            r.std_error
        );
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let opts = EnumerationOptions {
            weight: 2,
            repeats: 3,
            seed: 11,
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate_failures(&lat, &DecoderConfig::correlated(), opts).unwrap())
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.failing, b.failing);
        assert_eq!(a.expected, b.expected);
    }
}
