//! Restricted and correlated matching decoders for X errors, on single-round
//! and space-time graphs.

mod lift;
mod pipeline;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoundaryDiscount, Color, ColorCodeLattice};

pub use lift::{check_failure, lift_correction};
pub use pipeline::{
    build_spacetime_graph, decode_correlated, decode_correlated_spacetime, decode_restricted,
    mark_traversed, DecodeTrace, Decoder, Marked, SpacetimeOptions, StageTrace,
};

/// Which restricted lattice is matched first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    /// `R_b` then `R_g`; tuned for the blue-boundary logical.
    #[default]
    RbThenRg,
    /// `R_g` then `R_b`; tuned for the green-boundary logical.
    RgThenRb,
}

impl Order {
    /// Colors removed by the first and second stage graphs.
    pub fn removed(self) -> [Color; 2] {
        match self {
            Order::RbThenRg => [Color::Blue, Color::Green],
            Order::RgThenRb => [Color::Green, Color::Blue],
        }
    }

    /// Logical whose failures this order is tuned against.
    pub fn logical(self) -> Color {
        self.removed()[0]
    }

    pub fn for_logical(color: Color) -> Self {
        if color == Color::Green {
            Order::RgThenRb
        } else {
            Order::RbThenRg
        }
    }
}

/// The two decoders: independent restricted matchings, or the two-stage
/// correlated matching.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    Restricted,
    Correlated,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Restricted => "restricted",
            DecoderKind::Correlated => "correlated",
        }
    }

    /// Default configuration of this decoder.
    pub fn config(self) -> DecoderConfig {
        match self {
            DecoderKind::Restricted => DecoderConfig::restricted(),
            DecoderKind::Correlated => DecoderConfig::correlated(),
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" => Ok(DecoderKind::Restricted),
            "correlated" => Ok(DecoderKind::Correlated),
            _ => Err(Error::InvalidParameter(format!("unknown decoder {s:?}"))),
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub order: Order,
    /// Weight of the discounted boundary edges, in `(0, 1]`.
    pub w_b: f64,
    /// Zero second-stage edges at red checks the first stage crossed.
    pub zero_weight_enabled: bool,
    pub discount: BoundaryDiscount,
    /// Tie-break seed for the free decode functions.
    pub seed: Option<u64>,
    /// In space-time decoding, also zero red measurement edges used by the
    /// first stage.
    pub zero_measurement_edges: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig::correlated()
    }
}

impl DecoderConfig {
    pub fn correlated() -> Self {
        DecoderConfig {
            order: Order::RbThenRg,
            w_b: 0.999,
            zero_weight_enabled: true,
            discount: BoundaryDiscount::BoundaryRedChecks,
            seed: None,
            zero_measurement_edges: true,
        }
    }

    pub fn restricted() -> Self {
        DecoderConfig {
            w_b: 1.0,
            zero_weight_enabled: false,
            ..DecoderConfig::correlated()
        }
    }

    pub fn with_order(self, order: Order) -> Self {
        DecoderConfig { order, ..self }
    }

    pub fn with_seed(self, seed: Option<u64>) -> Self {
        DecoderConfig { seed, ..self }
    }

    pub fn with_w_b(self, w_b: f64) -> Self {
        DecoderConfig { w_b, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w_b > 0.0 && self.w_b <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "w_b={} outside (0, 1]",
                self.w_b
            )));
        }
        if self.discount == BoundaryDiscount::GreenBoundaryChecks && self.order != Order::RbThenRg {
            return Err(Error::InvalidParameter(
                "the green-boundary discount is defined for the rb-then-rg order".into(),
            ));
        }
        Ok(())
    }
}

/// One bit per check (Z-type, detecting X errors), indexed by check id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syndrome {
    pub bits: Vec<bool>,
}

impl Syndrome {
    pub fn zeros(num_checks: usize) -> Self {
        Syndrome {
            bits: vec![false; num_checks],
        }
    }

    /// Violated checks in id order.
    pub fn defects(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(c, _)| c)
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }
}

/// Differences between consecutive rounds of check outcomes; round 0 is
/// compared against the all-zero outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacetimeSyndrome {
    pub rounds: Vec<Vec<bool>>,
}

impl SpacetimeSyndrome {
    pub fn single(s: &Syndrome) -> Self {
        SpacetimeSyndrome {
            rounds: vec![s.bits.clone()],
        }
    }

    /// `(check, round)` pairs of every defect, by round then check.
    pub fn defects(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rounds.iter().enumerate().flat_map(|(t, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(c, _)| (c, t))
        })
    }

    /// Sum of all differences: the outcome of the final round.
    pub fn accumulated(&self) -> Syndrome {
        let n = self.rounds.first().map_or(0, Vec::len);
        let mut bits = vec![false; n];
        for r in &self.rounds {
            for (b, &x) in bits.iter_mut().zip(r) {
                *b ^= x;
            }
        }
        Syndrome { bits }
    }
}

/// A data correction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    /// Sorted qubit ids.
    pub flips: Vec<usize>,
    /// The correction reproduces the decoded syndrome exactly.
    pub residual_zero: bool,
    /// Parity of the correction on each logical support.
    pub logical: LogicalFlags,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LogicalFlags {
    pub green: bool,
    pub blue: bool,
}

impl LogicalFlags {
    pub fn get(&self, color: Color) -> bool {
        match color {
            Color::Green => self.green,
            Color::Blue => self.blue,
            Color::Red => false,
        }
    }

    pub fn any(&self) -> bool {
        self.green || self.blue
    }

    pub(crate) fn of(lat: &ColorCodeLattice, mask: &[bool]) -> Self {
        let parity = |support: &[usize]| support.iter().filter(|&&q| mask[q]).count() % 2 == 1;
        LogicalFlags {
            green: parity(&lat.logicals.green),
            blue: parity(&lat.logicals.blue),
        }
    }
}

/// Independent sub-seed `k` of `seed`.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng.next_u64()
}
