//! Error models and syndrome extraction.
//!
//! Every shot draws from its own ChaCha8 stream, selected by the shot index
//! under a master seed, so results never depend on how shots are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decoders::{SpacetimeSyndrome, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::{BlockOperator, Color, ColorCodeLattice};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    /// Independent bit flips on color-code qubits, perfect measurements.
    BitflipColor,
    /// Surface-code depolarizing noise carried to the color code block by block.
    DepolarizingSurfaceMapped,
    /// Bit flips each round plus faulty check measurements.
    PhenomenologicalColor,
    /// Mapped depolarizing noise each round plus faulty octagon measurements.
    PhenomenologicalSurfaceMapped,
}

impl NoiseModel {
    pub fn is_phenomenological(self) -> bool {
        matches!(
            self,
            NoiseModel::PhenomenologicalColor | NoiseModel::PhenomenologicalSurfaceMapped
        )
    }

    pub fn is_surface_mapped(self) -> bool {
        matches!(
            self,
            NoiseModel::DepolarizingSurfaceMapped | NoiseModel::PhenomenologicalSurfaceMapped
        )
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub p: f64,
    /// Measurement error rate; equal to `p` unless set.
    pub q: f64,
    /// Measurement rounds; `None` means one round per unit of distance.
    pub rounds: Option<usize>,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, p: f64) -> Result<Self> {
        NoiseSpec {
            model,
            p,
            q: p,
            rounds: None,
        }
        .validated()
    }

    pub fn with_q(self, q: f64) -> Result<Self> {
        NoiseSpec { q, ..self }.validated()
    }

    pub fn with_rounds(self, rounds: usize) -> Result<Self> {
        NoiseSpec {
            rounds: Some(rounds),
            ..self
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        for (name, x) in [("p", self.p), ("q", self.q)] {
            if !(0.0..0.5).contains(&x) {
                return Err(Error::InvalidParameter(format!(
                    "{name}={x} outside [0, 0.5)"
                )));
            }
        }
        if self.rounds == Some(0) {
            return Err(Error::InvalidParameter("rounds must be at least 1".into()));
        }
        Ok(self)
    }

    /// Rounds used at distance `d`: one for code capacity, otherwise the
    /// configured count or `d`.
    pub fn rounds_for(&self, d: usize) -> usize {
        if self.model.is_phenomenological() {
            self.rounds.unwrap_or(d)
        } else {
            1
        }
    }
}

/// Generator for shot `shot` under `master`.
pub struct ShotRng;

impl ShotRng {
    pub fn for_shot(master: u64, shot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        rng.set_stream(shot);
        rng
    }
}

/// Flips each qubit independently with probability `p`. Sorted qubit ids.
pub fn sample_bitflip<R: Rng + ?Sized>(lat: &ColorCodeLattice, p: f64, rng: &mut R) -> Vec<usize> {
    (0..lat.num_qubits())
        .filter(|_| rng.random_bool(p))
        .collect()
}

/// Draws a Pauli per block (X, Y, Z each with probability `p/3`) and applies
/// its image: X flips both green sides (`L1`), Z both blue sides (`L2`), Y
/// the diagonal.
pub fn sample_depolarizing_mapped<R: Rng + ?Sized>(
    lat: &ColorCodeLattice,
    p: f64,
    rng: &mut R,
) -> Vec<usize> {
    let mut flips = Vec::new();
    for block in &lat.blocks {
        if !rng.random_bool(p) {
            continue;
        }
        let op = match rng.random_range(0..3) {
            0 => BlockOperator::L1,
            1 => BlockOperator::Diag,
            _ => BlockOperator::L2,
        };
        flips.extend(block.support(op));
    }
    flips.sort_unstable();
    flips
}

/// One shot of a multi-round experiment.
#[derive(Clone, Debug)]
pub struct PhenomenologicalSample {
    /// New data flips in each round.
    pub data_flips: Vec<Vec<usize>>,
    /// Checks misread in each round (always empty in the last round).
    pub measurement_flips: Vec<Vec<usize>>,
    /// Accumulated data error after the last round.
    pub final_error: Vec<usize>,
    pub syndrome: SpacetimeSyndrome,
}

/// Runs `spec.rounds_for(d)` rounds. Data errors accumulate; each round's
/// outcomes are misread with probability `q` except in the final round.
/// Under the surface-mapped model only octagon outcomes are misread.
pub fn sample_phenomenological<R: Rng + ?Sized>(
    lat: &ColorCodeLattice,
    spec: &NoiseSpec,
    rng: &mut R,
) -> PhenomenologicalSample {
    let rounds = spec.rounds_for(lat.distance);
    let mut error = vec![false; lat.num_qubits()];
    let mut previous = vec![false; lat.num_checks()];
    let mut data_flips = Vec::with_capacity(rounds);
    let mut measurement_flips = Vec::with_capacity(rounds);
    let mut differences = Vec::with_capacity(rounds);
    for t in 0..rounds {
        let flips = if spec.model.is_surface_mapped() {
            sample_depolarizing_mapped(lat, spec.p, rng)
        } else {
            sample_bitflip(lat, spec.p, rng)
        };
        for &q in &flips {
            error[q] ^= true;
        }
        let mut measured = syndrome_of_mask(lat, &error);
        let mut misread = Vec::new();
        if t + 1 < rounds {
            for c in &lat.checks {
                if spec.model.is_surface_mapped() && c.color == Color::Red {
                    continue;
                }
                if rng.random_bool(spec.q) {
                    measured[c.id] ^= true;
                    misread.push(c.id);
                }
            }
        }
        differences.push(measured.iter().zip(&previous).map(|(a, b)| a ^ b).collect());
        previous = measured;
        data_flips.push(flips);
        measurement_flips.push(misread);
    }
    let final_error = error
        .iter()
        .enumerate()
        .filter(|(_, &e)| e)
        .map(|(q, _)| q)
        .collect();
    PhenomenologicalSample {
        data_flips,
        measurement_flips,
        final_error,
        syndrome: SpacetimeSyndrome {
            rounds: differences,
        },
    }
}

fn syndrome_of_mask(lat: &ColorCodeLattice, error: &[bool]) -> Vec<bool> {
    lat.checks
        .iter()
        .map(|c| c.support.iter().filter(|&&q| error[q]).count() % 2 == 1)
        .collect()
}

/// Parity of every check over the flipped qubits (repeats cancel).
pub fn syndrome(lat: &ColorCodeLattice, flips: &[usize]) -> Syndrome {
    let mut bits = vec![false; lat.num_checks()];
    for &q in flips {
        let qc = lat.qubit_checks(q);
        bits[qc.red] ^= true;
        for c in [qc.green, qc.blue].into_iter().flatten() {
            bits[c] ^= true;
        }
    }
    Syndrome { bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn zero_rate_is_silent() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let mut rng = ShotRng::for_shot(1, 0);
        assert!(sample_bitflip(&lat, 0.0, &mut rng).is_empty());
        assert!(sample_depolarizing_mapped(&lat, 0.0, &mut rng).is_empty());
        let spec = NoiseSpec::new(NoiseModel::PhenomenologicalColor, 0.0).unwrap();
        let s = sample_phenomenological(&lat, &spec, &mut rng);
        assert_eq!(s.syndrome.rounds.len(), 6);
        assert!(s.syndrome.rounds.iter().flatten().all(|&b| !b));
    }

    #[test]
    fn spec_validation() {
        assert!(NoiseSpec::new(NoiseModel::BitflipColor, 0.5).is_err());
        assert!(NoiseSpec::new(NoiseModel::BitflipColor, -0.1).is_err());
        let s = NoiseSpec::new(NoiseModel::PhenomenologicalColor, 0.03).unwrap();
        assert_eq!(s.q, 0.03);
        assert_eq!(s.rounds_for(8), 8);
        assert_eq!(s.with_rounds(3).unwrap().rounds_for(8), 3);
        assert!(s.with_rounds(0).is_err());
        assert!(s.with_q(0.7).is_err());
        assert_eq!(
            NoiseSpec::new(NoiseModel::BitflipColor, 0.1)
                .unwrap()
                .rounds_for(8),
            1
        );
    }

    #[test]
    fn shot_streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| ShotRng::for_shot(9, 3).random()).collect();
        assert!(a.iter().all(|&x| x == a[0]));
        let mut r1 = ShotRng::for_shot(9, 3);
        let mut r2 = ShotRng::for_shot(9, 4);
        let mut r3 = ShotRng::for_shot(10, 3);
        let x: u64 = r1.random();
        assert_ne!(x, r2.random::<u64>());
        assert_ne!(x, r3.random::<u64>());
    }

    #[test]
    fn bitflip_mean_weight() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let shots = 200_000u64;
        let total: usize = (0..shots)
            .map(|s| sample_bitflip(&lat, 0.1, &mut ShotRng::for_shot(5, s)).len())
            .sum();
        let mean = total as f64 / shots as f64;
        let sigma = (20.0 * 0.1 * 0.9 / shots as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn depolarizing_pair_marginal() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let block = &lat.blocks[2];
        let shots = 100_000u64;
        let p = 0.15;
        let mut hits = [0u64; 3];
        for s in 0..shots {
            let flips = sample_depolarizing_mapped(&lat, p, &mut ShotRng::for_shot(2, s));
            let mine: Vec<usize> = flips
                .into_iter()
                .filter(|q| block.corners.contains(q))
                .collect();
            for (i, op) in [BlockOperator::L1, BlockOperator::L2, BlockOperator::Diag]
                .into_iter()
                .enumerate()
            {
                if mine == block.support(op) {
                    hits[i] += 1;
                }
            }
        }
        // each pair operator alone occurs with probability p/3; any fixed
        // side is flipped by two of the three Paulis, 2p/3
        for h in hits {
            let f = h as f64 / shots as f64;
            let sigma = (p / 3.0 * (1.0 - p / 3.0) / shots as f64).sqrt();
            assert!((f - p / 3.0).abs() < 4.0 * sigma, "{f}");
        }
    }

    #[test]
    fn y_on_interior_block_hits_two_of_each_octagon() {
        let lat = ColorCodeLattice::new(8).unwrap();
        let block = lat
            .blocks
            .iter()
            .find(|b| b.green.iter().chain(&b.blue).all(Option::is_some))
            .unwrap();
        let syn = syndrome(&lat, &block.support(BlockOperator::Diag));
        let flipped: Vec<Color> = syn
            .bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(c, _)| lat.checks[c].color)
            .collect();
        assert_eq!(flipped.iter().filter(|&&c| c == Color::Green).count(), 2);
        assert_eq!(flipped.iter().filter(|&&c| c == Color::Blue).count(), 2);
        assert_eq!(flipped.len(), 4);
    }

    #[test]
    fn syndrome_basics() {
        let lat = ColorCodeLattice::new(6).unwrap();
        assert!(syndrome(&lat, &[]).bits.iter().all(|&b| !b));
        for b in &lat.blocks {
            assert!(syndrome(&lat, &b.corners).bits.iter().all(|&b| !b));
        }
        for q in 0..lat.num_qubits() {
            let syn = syndrome(&lat, &[q]);
            let qc = lat.qubit_checks(q);
            let mut expected = vec![qc.red];
            expected.extend(qc.green);
            expected.extend(qc.blue);
            expected.sort_unstable();
            let got: Vec<usize> = syn
                .bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(c, _)| c)
                .collect();
            assert_eq!(got, expected);
            // agrees with the check supports
            let direct: Vec<usize> = lat
                .checks
                .iter()
                .filter(|c| c.support.contains(&q))
                .map(|c| c.id)
                .collect();
            assert_eq!(got, direct);
        }
    }

    #[test]
    fn single_measurement_error_makes_two_defects() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let spec = NoiseSpec::new(NoiseModel::PhenomenologicalColor, 0.05).unwrap();
        let mut found = 0;
        for s in 0..2000 {
            let sample = sample_phenomenological(&lat, &spec, &mut ShotRng::for_shot(8, s));
            let data: usize = sample.data_flips.iter().map(Vec::len).sum();
            let meas: Vec<(usize, usize)> = sample
                .measurement_flips
                .iter()
                .enumerate()
                .flat_map(|(t, m)| m.iter().map(move |&c| (c, t)))
                .collect();
            if data == 0 && meas.len() == 1 {
                let (c, t) = meas[0];
                let defects: Vec<(usize, usize)> = sample.syndrome.defects().collect();
                assert_eq!(defects, vec![(c, t), (c, t + 1)]);
                found += 1;
            }
            assert!(sample.measurement_flips.last().unwrap().is_empty());
        }
        assert!(found > 0);
    }

    #[test]
    fn single_data_error_appears_once() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let spec = NoiseSpec::new(NoiseModel::PhenomenologicalColor, 0.02)
            .unwrap()
            .with_q(0.0)
            .unwrap();
        let mut found = 0;
        for s in 0..2000 {
            let sample = sample_phenomenological(&lat, &spec, &mut ShotRng::for_shot(4, s));
            let flips: Vec<(usize, usize)> = sample
                .data_flips
                .iter()
                .enumerate()
                .flat_map(|(t, f)| f.iter().map(move |&q| (q, t)))
                .collect();
            if flips.len() == 1 {
                let (q, t) = flips[0];
                let expected: Vec<(usize, usize)> =
                    syndrome(&lat, &[q]).defects().map(|c| (c, t)).collect();
                assert_eq!(sample.syndrome.defects().collect::<Vec<_>>(), expected);
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn surface_mapped_measurements_skip_red() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let spec = NoiseSpec::new(NoiseModel::PhenomenologicalSurfaceMapped, 0.3).unwrap();
        for s in 0..200 {
            let sample = sample_phenomenological(&lat, &spec, &mut ShotRng::for_shot(6, s));
            for m in sample.measurement_flips.iter().flatten() {
                assert_ne!(lat.checks[*m].color, Color::Red);
            }
        }
    }

    proptest! {
        #[test]
        fn syndrome_is_linear(a in proptest::collection::vec(0usize..50, 0..12), b in proptest::collection::vec(0usize..50, 0..12)) {
            let lat = ColorCodeLattice::new(6).unwrap();
            let both: Vec<usize> = a.iter().chain(&b).copied().collect();
            let sa = syndrome(&lat, &a);
            let sb = syndrome(&lat, &b);
            let sab = syndrome(&lat, &both);
            for c in 0..lat.num_checks() {
                prop_assert_eq!(sab.bits[c], sa.bits[c] ^ sb.bits[c]);
            }
        }

        #[test]
        fn mapped_noise_keeps_red_checks_quiet(seed in any::<u64>()) {
            let lat = ColorCodeLattice::new(8).unwrap();
            let flips = sample_depolarizing_mapped(&lat, 0.3, &mut ShotRng::for_shot(seed, 0));
            let syn = syndrome(&lat, &flips);
            for c in lat.checks_of(Color::Red) {
                prop_assert!(!syn.bits[c.id]);
            }
        }
    }
}
