//! Monte Carlo logical failure rates.

use std::io::{Read, Write};

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stream_seed;
use crate::decoders::{
    check_failure, Decoder, DecoderConfig, DecoderKind, Order, SpacetimeOptions, SpacetimeSyndrome,
    Syndrome,
};
use crate::error::{Error, Result};
use crate::lattice::{Color, ColorCodeLattice};
use crate::noise::{
    sample_bitflip, sample_depolarizing_mapped, sample_phenomenological, syndrome, NoiseModel,
    NoiseSpec, ShotRng,
};

/// One `(family, decoder, d, p)` point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub family: NoiseModel,
    pub decoder: DecoderKind,
    pub d: usize,
    pub p: f64,
    pub rounds: usize,
    pub shots: u64,
    pub fail_g: u64,
    pub fail_b: u64,
    pub fail_any: u64,
    pub seed: u64,
}

impl SampleRecord {
    pub fn validate(&self) -> Result<()> {
        if self.fail_g > self.shots || self.fail_b > self.shots || self.fail_any > self.shots {
            return Err(Error::InvalidParameter(format!(
                "record d={} p={} has more failures than shots",
                self.d, self.p
            )));
        }
        if self.fail_any < self.fail_g.max(self.fail_b) || self.fail_any > self.fail_g + self.fail_b
        {
            return Err(Error::InvalidParameter(format!(
                "record d={} p={} has inconsistent tallies",
                self.d, self.p
            )));
        }
        Ok(())
    }

    pub fn rate_any(&self) -> f64 {
        self.fail_any as f64 / self.shots as f64
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleJob {
    pub family: NoiseModel,
    pub decoder: DecoderKind,
    pub d: usize,
    pub p: f64,
    /// Rounds for phenomenological noise; `None` means `d`.
    pub rounds: Option<usize>,
    pub shots: u64,
    pub seed: u64,
    /// Overrides the decoder's boundary weight.
    pub w_b: Option<f64>,
    /// Decode both logicals with one order. By default each logical is
    /// decoded with the order tuned for it.
    pub order: Option<Order>,
}

impl SampleJob {
    pub fn new(
        family: NoiseModel,
        decoder: DecoderKind,
        d: usize,
        p: f64,
        shots: u64,
        seed: u64,
    ) -> Self {
        SampleJob {
            family,
            decoder,
            d,
            p,
            rounds: None,
            shots,
            seed,
            w_b: None,
            order: None,
        }
    }

    fn config(&self, order: Order) -> DecoderConfig {
        let cfg = self.decoder.config().with_order(order);
        match self.w_b {
            Some(w) => cfg.with_w_b(w),
            None => cfg,
        }
    }
}

/// Runs `job.shots` shots. Tallies depend only on the job, not on the
/// number of threads; `workers` sets a dedicated pool size.
pub fn run_samples(job: &SampleJob, workers: Option<usize>) -> Result<SampleRecord> {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| run(job)),
        None => run(job),
    }
}

fn run(job: &SampleJob) -> Result<SampleRecord> {
    let lat = ColorCodeLattice::new(job.d)?;
    let spec = match job.rounds {
        Some(r) => NoiseSpec::new(job.family, job.p)?.with_rounds(r)?,
        None => NoiseSpec::new(job.family, job.p)?,
    };
    let rounds = spec.rounds_for(job.d);
    let build = |order| -> Result<Decoder> {
        let cfg = job.config(order);
        if job.family.is_phenomenological() {
            let opts = SpacetimeOptions {
                rounds,
                p: job.p,
                q: spec.q,
                red_measurements: !job.family.is_surface_mapped(),
            };
            Decoder::spacetime(&lat, cfg, opts)
        } else {
            Decoder::new(&lat, cfg)
        }
    };
    // Without zeroing or a discount the two matchings are independent, so
    // one decode serves both logicals.
    let plain = {
        let cfg = job.config(Order::RbThenRg);
        !cfg.zero_weight_enabled && cfg.w_b == 1.0
    };
    let decoders: Vec<(Decoder, Vec<Color>)> = match job.order {
        Some(o) => vec![(build(o)?, vec![Color::Green, Color::Blue])],
        None if plain => vec![(build(Order::RbThenRg)?, vec![Color::Green, Color::Blue])],
        None => vec![
            (build(Order::RgThenRb)?, vec![Color::Green]),
            (build(Order::RbThenRg)?, vec![Color::Blue]),
        ],
    };
    let point = point_seed(job.seed, job.d, job.p, rounds);
    let (fail_g, fail_b, fail_any) = (0..job.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ShotRng::for_shot(point, shot);
            let (error, syn) = draw(&lat, &spec, &mut rng);
            let tie = rng.next_u64();
            let (mut g, mut b) = (false, false);
            for (dec, colors) in &decoders {
                let corr = dec.decode_rounds(&syn, Some(tie))?;
                let flags = check_failure(&error, &corr, &lat)?;
                for c in colors {
                    match c {
                        Color::Green => g = flags.green,
                        _ => b = flags.blue,
                    }
                }
            }
            Ok::<_, Error>((g as u64, b as u64, (g || b) as u64))
        })
        .try_reduce(|| (0, 0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1, x.2 + y.2)))?;
    Ok(SampleRecord {
        family: job.family,
        decoder: job.decoder,
        d: job.d,
        p: job.p,
        rounds,
        shots: job.shots,
        fail_g,
        fail_b,
        fail_any,
        seed: job.seed,
    })
}

/// Error stream of one sweep point. The decoder is left out so that
/// different decoders see the same errors.
pub fn point_seed(seed: u64, d: usize, p: f64, rounds: usize) -> u64 {
    stream_seed(
        stream_seed(stream_seed(seed, d as u64), p.to_bits()),
        rounds as u64,
    )
}

/// Final data error and the syndrome the decoder sees.
pub fn draw<R: rand::Rng>(
    lat: &ColorCodeLattice,
    spec: &NoiseSpec,
    rng: &mut R,
) -> (Vec<usize>, SpacetimeSyndrome) {
    match spec.model {
        NoiseModel::BitflipColor => {
            let e = sample_bitflip(lat, spec.p, rng);
            let s = syndrome(lat, &e);
            (e, SpacetimeSyndrome::single(&s))
        }
        NoiseModel::DepolarizingSurfaceMapped => {
            let e = sample_depolarizing_mapped(lat, spec.p, rng);
            let s: Syndrome = syndrome(lat, &e);
            (e, SpacetimeSyndrome::single(&s))
        }
        _ => {
            let s = sample_phenomenological(lat, spec, rng);
            (s.final_error, s.syndrome)
        }
    }
}

/// Writes records as CSV, preceded by `#`-prefixed provenance lines.
pub fn write_samples_csv<W: Write>(
    mut out: W,
    records: &[SampleRecord],
    preamble: &[String],
) -> Result<()> {
    for line in preamble {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_samples_csv`], skipping `#` lines.
pub fn read_samples_csv<R: Read>(input: R) -> Result<Vec<SampleRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let r: SampleRecord = row?;
        r.validate()?;
        out.push(r);
    }
    Ok(out)
}
