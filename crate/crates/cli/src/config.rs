//! Experiment configuration and the parsers behind the command-line flags.

use std::fmt;
use std::str::FromStr;

use color488::decoders::{DecoderKind, Order};
use color488::noise::NoiseModel;
use color488::Error;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest distance accepted on the command line.
pub const MAX_DISTANCE: usize = 1000;

/// Exit status for a failure, by cause.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Config = 2,
    Capacity = 3,
    Internal = 4,
}

impl ExitKind {
    pub fn of(err: &Error) -> Self {
        match err {
            Error::Capacity(_) => ExitKind::Capacity,
            Error::Internal(_)
            | Error::InconsistentSyndrome(_)
            | Error::OddNodeCount(_)
            | Error::NoPerfectMatching => ExitKind::Internal,
            _ => ExitKind::Config,
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Code {
    /// Color code under bit-flip noise.
    ColorBitflip,
    /// Color code decoding the surface-mapped depolarizing model.
    SurfaceDepol,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    /// Perfect syndrome measurements.
    Capacity,
    /// Noisy measurements repeated over several rounds.
    Phenom,
}

pub fn noise_model(code: Code, noise: Noise) -> NoiseModel {
    match (code, noise) {
        (Code::ColorBitflip, Noise::Capacity) => NoiseModel::BitflipColor,
        (Code::SurfaceDepol, Noise::Capacity) => NoiseModel::DepolarizingSurfaceMapped,
        (Code::ColorBitflip, Noise::Phenom) => NoiseModel::PhenomenologicalColor,
        (Code::SurfaceDepol, Noise::Phenom) => NoiseModel::PhenomenologicalSurfaceMapped,
    }
}

/// Measurement rounds for phenomenological noise.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rounds {
    Fixed(usize),
    /// As many rounds as the distance.
    Distance,
}

impl Rounds {
    pub fn fixed(self) -> Option<usize> {
        match self {
            Rounds::Fixed(r) => Some(r),
            Rounds::Distance => None,
        }
    }
}

impl FromStr for Rounds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "d" => Ok(Rounds::Distance),
            t => match t.parse::<usize>() {
                Ok(r) if r >= 1 => Ok(Rounds::Fixed(r)),
                _ => Err(format!(
                    "rounds must be a positive integer or `d`, got `{s}`"
                )),
            },
        }
    }
}

impl fmt::Display for Rounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rounds::Fixed(r) => write!(f, "{r}"),
            Rounds::Distance => f.write_str("d"),
        }
    }
}

impl Serialize for Rounds {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rounds {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A single even distance of at least 4.
pub fn parse_distance(s: &str) -> Result<usize, String> {
    let d: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a distance"))?;
    if d < 4 || d % 2 == 1 {
        return Err(format!("distance must be even and at least 4, got {d}"));
    }
    if d > MAX_DISTANCE {
        return Err(format!("distance {d} exceeds {MAX_DISTANCE}"));
    }
    Ok(d)
}

/// Comma-separated distances, or a range `lo:hi` over even values.
pub fn parse_distances(s: &str) -> Result<Vec<usize>, String> {
    let out = if s.contains(':') {
        parse_d_range(s)?
    } else {
        s.split(',')
            .map(parse_distance)
            .collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err("no distances given".into());
    }
    Ok(out)
}

/// `lo:hi` or `lo:hi:step`, inclusive, over even distances.
pub fn parse_d_range(s: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let (lo, hi, step) = match parts.as_slice() {
        [lo, hi] => (parse_distance(lo)?, parse_distance(hi)?, 2),
        [lo, hi, step] => {
            let step: usize = step
                .trim()
                .parse()
                .map_err(|_| format!("`{step}` is not a step"))?;
            if step == 0 || step % 2 == 1 {
                return Err(format!("range step must be even and positive, got {step}"));
            }
            (parse_distance(lo)?, parse_distance(hi)?, step)
        }
        _ => return Err(format!("expected `lo:hi` or `lo:hi:step`, got `{s}`")),
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo..=hi).step_by(step).collect())
}

/// Comma-separated probabilities in `[0, 1]`.
pub fn parse_probabilities(s: &str) -> Result<Vec<f64>, String> {
    let ps = s
        .split(',')
        .map(|t| {
            let p: f64 = t
                .trim()
                .parse()
                .map_err(|_| format!("`{t}` is not a number"))?;
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(format!("probability {p} outside [0, 1]"))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ps.is_empty() {
        return Err("no probabilities given".into());
    }
    Ok(ps)
}

pub fn parse_order(s: &str) -> Result<Order, String> {
    match s {
        "rb-then-rg" => Ok(Order::RbThenRg),
        "rg-then-rb" => Ok(Order::RgThenRb),
        _ => Err(format!(
            "order must be `rb-then-rg` or `rg-then-rb`, got `{s}`"
        )),
    }
}

pub fn parse_decoder(s: &str) -> Result<DecoderKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Everything a run depends on. Written verbatim into every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub code: Code,
    pub noise: Noise,
    pub decoder: DecoderKind,
    pub distances: Vec<usize>,
    pub ps: Vec<f64>,
    pub rounds: Rounds,
    pub shots: u64,
    pub seed: u64,
    pub w_b: Option<f64>,
    pub order: Option<Order>,
    pub out: Option<String>,
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(command: &str) -> Self {
        ExperimentConfig {
            command: command.into(),
            code: Code::ColorBitflip,
            noise: Noise::Capacity,
            decoder: DecoderKind::Correlated,
            distances: Vec::new(),
            ps: Vec::new(),
            rounds: Rounds::Distance,
            shots: 0,
            seed: 0,
            w_b: None,
            order: None,
            out: None,
            workers: None,
        }
    }

    pub fn family(&self) -> NoiseModel {
        noise_model(self.code, self.noise)
    }

    pub fn validate(&self) -> color488::Result<()> {
        for &d in &self.distances {
            parse_distance(&d.to_string()).map_err(Error::InvalidParameter)?;
        }
        for &p in &self.ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
        }
        if let Some(w) = self.w_b {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "w_b must lie in (0, 1], got {w}"
                )));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter("workers must be positive".into()));
        }
        if self.rounds != Rounds::Distance && self.noise == Noise::Capacity {
            return Err(Error::InvalidParameter(
                "rounds only apply to phenomenological noise".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn parse(text: &str) -> color488::Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
