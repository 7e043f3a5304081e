//! First-row weight-`d/2` errors grouped by the error type on each red
//! square.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::counts::n_boundary_term;
use super::enumerate::count_failures;
use crate::decoders::{Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::lattice::{Block, ColorCodeLattice};

/// What a single red square carries.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SquareError {
    /// Two opposite corners.
    D,
    /// Two corners on the top or bottom side.
    E,
    /// One corner.
    S,
    /// Nothing.
    N,
}

impl SquareError {
    pub fn weight(self) -> usize {
        match self {
            SquareError::D | SquareError::E => 2,
            SquareError::S => 1,
            SquareError::N => 0,
        }
    }

    /// Every qubit set of this type on `block`.
    fn variants(self, lat: &ColorCodeLattice, block: &Block) -> Vec<Vec<usize>> {
        let c = block.corners;
        let row = |q: usize| lat.qubits[q].row;
        let pairs = || (0..4).flat_map(move |i| (i + 1..4).map(move |j| (c[i], c[j])));
        match self {
            SquareError::N => vec![vec![]],
            SquareError::S => c.iter().map(|&q| vec![q]).collect(),
            SquareError::E => pairs()
                .filter(|&(a, b)| row(a) == row(b))
                .map(|(a, b)| vec![a, b])
                .collect(),
            SquareError::D => pairs()
                .filter(|&(a, b)| row(a) != row(b) && lat.qubits[a].col != lat.qubits[b].col)
                .map(|(a, b)| vec![a, b])
                .collect(),
        }
    }
}

/// A multiset of square errors, one per square of a row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pattern {
    pub d: usize,
    pub e: usize,
    pub s: usize,
    pub n: usize,
}

impl Pattern {
    fn of(types: &[SquareError]) -> Self {
        let count = |t| types.iter().filter(|&&x| x == t).count();
        Pattern {
            d: count(SquareError::D),
            e: count(SquareError::E),
            s: count(SquareError::S),
            n: count(SquareError::N),
        }
    }

    /// Per-row boundary failures predicted for this pattern: nonzero only
    /// for an even number `2i >= 2` of diagonals with `j` edge pairs.
    pub fn predicted(&self) -> u64 {
        let m = self.d + self.e + self.s + self.n;
        if self.d == 0 || self.d % 2 == 1 {
            return 0;
        }
        let (i, j) = (self.d / 2, self.e);
        if 4 * i + 2 * j > m || self.s != m - 4 * i - 2 * j {
            return 0;
        }
        let per_row: num::BigInt = n_boundary_term(m, i, j) / 2u32;
        u64::try_from(per_row).unwrap_or(u64::MAX)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<&str> = [("D", self.d), ("E", self.e), ("S", self.s), ("N", self.n)]
            .iter()
            .flat_map(|&(l, k)| std::iter::repeat_n(l, k))
            .collect();
        write!(f, "{{{}}}", letters.join(","))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryOptions {
    /// Discounted boundary weight for the primed columns.
    pub w_b: f64,
    /// Tie-break seeds per configuration for the expected counts.
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions {
            w_b: 0.999,
            repeats: 32,
            seed: 0,
        }
    }
}

/// Failures of one pattern, undiscounted (`n`) and discounted (`n_prime`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternCount {
    pub pattern: Pattern,
    pub configurations: usize,
    /// Expected failures under random tie-breaking, boundary weight 1.
    pub n: f64,
    /// Same with the discounted boundary weight.
    pub n_prime: f64,
    pub n_std_error: f64,
    pub n_prime_std_error: f64,
    /// Failures with ties broken by node order instead of at random.
    pub n_deterministic: usize,
    pub n_prime_deterministic: usize,
    /// Per-row prediction of the closed-form boundary count.
    pub predicted: u64,
}

/// Enumerates every weight-`d/2` error confined to the first block row,
/// decodes each with the correlated decoder at boundary weights 1 and
/// `opts.w_b`, and tallies flips of the targeted logical by pattern.
pub fn enumerate_boundary_patterns(
    lat: &ColorCodeLattice,
    opts: BoundaryOptions,
) -> Result<Vec<PatternCount>> {
    let d = lat.distance;
    if !(6..=14).contains(&d) {
        return Err(Error::InvalidDistance {
            distance: d,
            reason: "boundary patterns are tabulated for 6 <= d <= 14",
        });
    }
    if opts.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    let mut row: Vec<&Block> = lat.blocks.iter().filter(|b| b.row == 0).collect();
    row.sort_by_key(|b| b.col);
    let m = d / 2;
    if row.len() != m {
        return Err(Error::Internal(format!(
            "first row has {} squares, expected {m}",
            row.len()
        )));
    }

    let mut configs = Vec::new();
    let mut patterns = Vec::new();
    let mut types = Vec::with_capacity(m);
    let mut qubits = Vec::new();
    expand(
        lat,
        &row,
        m,
        &mut types,
        &mut qubits,
        &mut configs,
        &mut patterns,
    );

    let plain = Decoder::new(lat, DecoderConfig::correlated().with_w_b(1.0))?;
    let discounted = Decoder::new(lat, DecoderConfig::correlated().with_w_b(opts.w_b))?;
    let random_n = count_failures(lat, &plain, &configs, opts.repeats, opts.seed)?;
    let random_np = count_failures(lat, &discounted, &configs, opts.repeats, opts.seed)?;
    let det_n = deterministic_failures(lat, &plain, &configs)?;
    let det_np = deterministic_failures(lat, &discounted, &configs)?;

    let r = opts.repeats as f64;
    let var = |k: usize| {
        let f = k as f64 / r;
        if opts.repeats > 1 {
            f * (1.0 - f) / (r - 1.0)
        } else {
            0.0
        }
    };
    let mut table: BTreeMap<Pattern, PatternCount> = BTreeMap::new();
    for (i, p) in patterns.into_iter().enumerate() {
        let entry = table.entry(p).or_insert_with(|| PatternCount {
            pattern: p,
            configurations: 0,
            n: 0.0,
            n_prime: 0.0,
            n_std_error: 0.0,
            n_prime_std_error: 0.0,
            n_deterministic: 0,
            n_prime_deterministic: 0,
            predicted: p.predicted(),
        });
        entry.configurations += 1;
        entry.n += random_n[i] as f64 / r;
        entry.n_prime += random_np[i] as f64 / r;
        entry.n_std_error += var(random_n[i]);
        entry.n_prime_std_error += var(random_np[i]);
        entry.n_deterministic += det_n[i];
        entry.n_prime_deterministic += det_np[i];
    }
    let mut out: Vec<PatternCount> = table.into_values().collect();
    for c in &mut out {
        c.n_std_error = c.n_std_error.sqrt();
        c.n_prime_std_error = c.n_prime_std_error.sqrt();
    }
    out.sort_by(|a, b| {
        b.pattern
            .d
            .cmp(&a.pattern.d)
            .then(a.pattern.cmp(&b.pattern))
            .reverse()
    });
    Ok(out)
}

fn expand(
    lat: &ColorCodeLattice,
    row: &[&Block],
    budget: usize,
    types: &mut Vec<SquareError>,
    qubits: &mut Vec<usize>,
    configs: &mut Vec<Vec<usize>>,
    patterns: &mut Vec<Pattern>,
) {
    let k = types.len();
    if k == row.len() {
        if budget == 0 {
            let mut q = qubits.clone();
            q.sort_unstable();
            configs.push(q);
            patterns.push(Pattern::of(types));
        }
        return;
    }
    // the remaining squares can carry at most two each
    if budget > 2 * (row.len() - k) {
        return;
    }
    for t in [
        SquareError::D,
        SquareError::E,
        SquareError::S,
        SquareError::N,
    ] {
        if t.weight() > budget {
            continue;
        }
        for v in t.variants(lat, row[k]) {
            types.push(t);
            qubits.extend(&v);
            expand(
                lat,
                row,
                budget - t.weight(),
                types,
                qubits,
                configs,
                patterns,
            );
            qubits.truncate(qubits.len() - v.len());
            types.pop();
        }
    }
}

fn deterministic_failures(
    lat: &ColorCodeLattice,
    dec: &Decoder,
    configs: &[Vec<usize>],
) -> Result<Vec<usize>> {
    use rayon::prelude::*;
    let logical = dec.config().order.logical();
    configs
        .par_iter()
        .map(|qubits| {
            let corr = dec.decode(&crate::noise::syndrome(lat, qubits), None)?;
            Ok(crate::decoders::check_failure(qubits, &corr, lat)?.get(logical) as usize)
        })
        .collect()
}
