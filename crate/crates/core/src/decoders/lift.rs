//! From the two matchings to a qubit correction.

use super::{Correction, LogicalFlags, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::ColorCodeLattice;
use crate::noise::syndrome;

/// Combines the qubit edges of the `R_b` matching (which fix the green side
/// parities of every block) with those of the `R_g` matching (blue sides).
///
/// Each block then has two corner subsets with the required parities, a set
/// and its complement; the smaller one is taken, and on a two-two tie the
/// one whose sorted qubit list is smaller.
pub fn lift_correction(
    paths_b: &[usize],
    paths_g: &[usize],
    lat: &ColorCodeLattice,
) -> Result<Correction> {
    let n = lat.num_qubits();
    let mut tb = vec![false; n];
    let mut tg = vec![false; n];
    for &q in paths_b {
        tb[q] ^= true;
    }
    for &q in paths_g {
        tg[q] ^= true;
    }
    let mut mask = vec![false; n];
    for block in &lat.blocks {
        let side_g = |g: usize| tb[block.corner(g, 0)] ^ tb[block.corner(g, 1)];
        let side_b = |b: usize| tg[block.corner(0, b)] ^ tg[block.corner(1, b)];
        let (g0, g1, b0, b1) = (side_g(0), side_g(1), side_b(0), side_b(1));
        if g0 ^ g1 != b0 ^ b1 {
            return Err(Error::Internal(format!(
                "block {} gets different red parities from the two matchings",
                block.id
            )));
        }
        let pick = |a: bool| {
            [
                (0, 0, a),
                (0, 1, g0 ^ a),
                (1, 0, b0 ^ a),
                (1, 1, g1 ^ b0 ^ a),
            ]
        };
        let subset = |a: bool| {
            let mut qs: Vec<usize> = pick(a)
                .iter()
                .filter(|&&(_, _, x)| x)
                .map(|&(g, b, _)| block.corner(g, b))
                .collect();
            qs.sort_unstable();
            qs
        };
        let (s0, s1) = (subset(false), subset(true));
        let chosen = if (s0.len(), &s0) <= (s1.len(), &s1) {
            s0
        } else {
            s1
        };
        for q in chosen {
            mask[q] = true;
        }
    }
    let flips: Vec<usize> = (0..n).filter(|&q| mask[q]).collect();
    Ok(Correction {
        residual_zero: true,
        logical: LogicalFlags::of(lat, &mask),
        flips,
    })
}

/// Confirms that `corr` reproduces `target` and records the result.
pub(crate) fn verify_residual(
    lat: &ColorCodeLattice,
    corr: &mut Correction,
    target: &Syndrome,
) -> Result<()> {
    corr.residual_zero = syndrome(lat, &corr.flips) == *target;
    if corr.residual_zero {
        Ok(())
    } else {
        Err(Error::Internal(
            "correction leaves a nonzero residual syndrome".into(),
        ))
    }
}

/// Logical flips of the residual `error + correction`.
pub fn check_failure(
    error: &[usize],
    corr: &Correction,
    lat: &ColorCodeLattice,
) -> Result<LogicalFlags> {
    let mut mask = vec![false; lat.num_qubits()];
    for &q in error.iter().chain(&corr.flips) {
        mask[q] ^= true;
    }
    let residual: Vec<usize> = (0..mask.len()).filter(|&q| mask[q]).collect();
    if !syndrome(lat, &residual).is_zero() {
        return Err(Error::InconsistentSyndrome(
            "residual error is not a logical or stabilizer".into(),
        ));
    }
    Ok(LogicalFlags::of(lat, &mask))
}
