//! Invariant checks for a constructed color lattice.

use serde::Serialize;

use super::color::{Color, ColorCodeLattice};
use crate::gf2::BitMatrix;

/// Distances up to this value get the exhaustive minimum-weight logical search.
pub const EXHAUSTIVE_DISTANCE_LIMIT: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub distance: usize,
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn validate(lat: &ColorCodeLattice) -> ValidationReport {
    let d = lat.distance;
    let n = lat.num_qubits();
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(InvariantCheck {
            name,
            passed,
            detail,
        })
    };

    let expected_n = 2 * (d - 1) * (d - 1) + 2;
    push(
        "qubit_count",
        n == expected_n,
        format!("{n} qubits, expected {expected_n}"),
    );

    let m = d / 2;
    let expected_blocks = 2 * m * m - 2 * m + 1;
    let blocks = lat.blocks.len();
    push(
        "block_count",
        blocks == expected_blocks,
        format!("{blocks} blocks, expected {expected_blocks}"),
    );

    let expected_faces = expected_blocks + 2 * m * (m - 1);
    push(
        "face_count",
        lat.num_checks() == expected_faces,
        format!("{} faces, expected {expected_faces}", lat.num_checks()),
    );

    let mut bad_pairs = 0usize;
    for (i, a) in lat.checks.iter().enumerate() {
        for b in &lat.checks[i + 1..] {
            let overlap = a
                .support
                .iter()
                .filter(|q| b.support.binary_search(q).is_ok())
                .count();
            if overlap % 2 == 1 {
                bad_pairs += 1;
            }
        }
    }
    push(
        "commutation",
        bad_pairs == 0,
        format!("{bad_pairs} face pairs with odd overlap"),
    );

    // X and Z checks share supports, so the symplectic rank is twice the face rank.
    let mut h = BitMatrix::new(n);
    for c in &lat.checks {
        h.push_row(c.support.iter().copied());
    }
    let rank = 2 * h.rank();
    push(
        "independent_checks",
        rank + 2 == n,
        format!("rank {rank}, expected {}", n - 2),
    );

    let mut owner = vec![0usize; n];
    for b in &lat.blocks {
        for &q in &b.corners {
            owner[q] += 1;
        }
    }
    let partition = owner.iter().all(|&k| k == 1);
    push(
        "blocks_partition_qubits",
        partition,
        format!(
            "{} qubits not covered exactly once",
            owner.iter().filter(|&&k| k != 1).count()
        ),
    );

    let mut single_ok = true;
    for q in 0..n {
        let touching: Vec<Color> = lat
            .checks
            .iter()
            .filter(|c| c.support.binary_search(&q).is_ok())
            .map(|c| c.color)
            .collect();
        let reds = touching.iter().filter(|&&c| c == Color::Red).count();
        let greens = touching.iter().filter(|&&c| c == Color::Green).count();
        let blues = touching.iter().filter(|&&c| c == Color::Blue).count();
        if reds != 1 || greens > 1 || blues > 1 {
            single_ok = false;
        }
    }
    push(
        "single_qubit_flips",
        single_ok,
        "one red, at most one green and one blue per qubit".into(),
    );

    if d <= EXHAUSTIVE_DISTANCE_LIMIT {
        let found = min_logical_weight(lat, d);
        let ok = found == Some(d);
        push(
            "distance",
            ok,
            format!("minimum logical X weight {found:?}, expected {d}"),
        );
    }

    ValidationReport {
        distance: d,
        checks,
    }
}

/// Smallest weight `w <= max_weight` of an X operator that commutes with every
/// face and anticommutes with a logical Z representative, by exhaustive search.
pub fn min_logical_weight(lat: &ColorCodeLattice, max_weight: usize) -> Option<usize> {
    let n = lat.num_qubits();
    assert!(lat.num_checks() <= 128, "syndrome must fit in 128 bits");
    let mut syndrome = vec![0u128; n];
    for c in &lat.checks {
        for &q in &c.support {
            syndrome[q] ^= 1 << c.id;
        }
    }
    let mut logical = vec![0u8; n];
    for &q in &lat.logicals.green {
        logical[q] ^= 1;
    }
    for &q in &lat.logicals.blue {
        logical[q] ^= 2;
    }

    fn search(
        start: usize,
        left: usize,
        syn: u128,
        log: u8,
        syndrome: &[u128],
        logical: &[u8],
    ) -> bool {
        if left == 0 {
            return syn == 0 && log != 0;
        }
        (start..syndrome.len() - left + 1).any(|q| {
            search(
                q + 1,
                left - 1,
                syn ^ syndrome[q],
                log ^ logical[q],
                syndrome,
                logical,
            )
        })
    }

    (1..=max_weight.min(n)).find(|&w| search(0, w, 0, 0, &syndrome, &logical))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_passes_everything() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let report = validate(&lat);
        assert!(report.passed(), "{report:#?}");
        assert!(report.get("distance").unwrap().passed);
    }

    #[test]
    fn d6_rank() {
        let lat = ColorCodeLattice::new(6).unwrap();
        let report = validate(&lat);
        assert!(report.get("independent_checks").unwrap().passed);
        assert_eq!(
            report.get("independent_checks").unwrap().detail,
            "rank 50, expected 50"
        );
    }

    #[test]
    fn broken_support_is_flagged() {
        let mut lat = ColorCodeLattice::new(4).unwrap();
        let octagon = lat
            .checks
            .iter()
            .position(|c| c.color == Color::Green)
            .unwrap();
        lat.checks[octagon].support.pop();
        let report = validate(&lat);
        assert!(!report.get("commutation").unwrap().passed);
        assert!(!report.passed());
    }

    #[test]
    fn d4_minimum_logical_weight() {
        let lat = ColorCodeLattice::new(4).unwrap();
        assert_eq!(min_logical_weight(&lat, 3), None);
        assert_eq!(min_logical_weight(&lat, 4), Some(4));
    }
}
