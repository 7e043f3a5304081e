//! Lattice geometry: the unrotated surface code, the 4.8.8 color code built
//! from it, and the restricted matching graphs.

mod color;
mod dump;
mod restricted;
mod surface;
mod validate;

pub use color::{
    Block, BlockOperator, BoundaryColors, Color, ColorCheck, ColorCodeLattice, ColorQubit,
    LogicalSupports, Orientation, QubitChecks,
};
pub use dump::{CheckDump, LatticeDump, PauliKind};
pub use restricted::{
    restricted_graph, BoundaryDiscount, EdgeKind, GraphEdge, GraphNode, RestrictedGraph,
};
pub use surface::{
    BoundaryKind, EdgeOrientation, SurfaceBoundaries, SurfaceCheck, SurfaceCodeLattice,
    SurfaceQubit,
};
pub use validate::{
    min_logical_weight, validate, InvariantCheck, ValidationReport, EXHAUSTIVE_DISTANCE_LIMIT,
};

/// Builds the surface code of distance `d`.
pub fn build_surface_lattice(d: usize) -> crate::Result<SurfaceCodeLattice> {
    SurfaceCodeLattice::new(d)
}

/// Builds the 4.8.8 color code of even distance `d >= 4`.
pub fn build_color_lattice(d: usize) -> crate::Result<ColorCodeLattice> {
    ColorCodeLattice::new(d)
}

/// Two-qubit support of a block operator.
pub fn block_error_support(block: &Block, op: BlockOperator) -> [usize; 2] {
    block.support(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flipped(lat: &ColorCodeLattice, qubits: &[usize]) -> Vec<usize> {
        lat.checks
            .iter()
            .filter(|c| qubits.iter().filter(|q| c.support.contains(q)).count() % 2 == 1)
            .map(|c| c.id)
            .collect()
    }

    #[test]
    fn block_operators_flip_the_right_octagons() {
        for d in [4, 6, 8] {
            let lat = build_color_lattice(d).unwrap();
            for block in &lat.blocks {
                let greens: Vec<usize> = block.green.iter().flatten().copied().collect();
                let blues: Vec<usize> = block.blue.iter().flatten().copied().collect();

                let l1 = flipped(&lat, &block_error_support(block, BlockOperator::L1));
                assert_eq!(l1, greens, "L1 on block {}", block.id);

                let l2 = flipped(&lat, &block_error_support(block, BlockOperator::L2));
                assert_eq!(l2, blues, "L2 on block {}", block.id);

                let mut both: Vec<usize> = greens.iter().chain(&blues).copied().collect();
                both.sort_unstable();
                let diag = flipped(&lat, &block_error_support(block, BlockOperator::Diag));
                assert_eq!(diag, both, "Diag on block {}", block.id);

                let s1 = block.support(BlockOperator::L1);
                let s2 = block.support(BlockOperator::L2);
                let mut sym: Vec<usize> = s1
                    .iter()
                    .chain(&s2)
                    .copied()
                    .filter(|q| !(s1.contains(q) && s2.contains(q)))
                    .collect();
                sym.sort_unstable();
                assert_eq!(sym, block.support(BlockOperator::Diag).to_vec());
            }
        }
    }

    #[test]
    fn interior_block_flip_counts() {
        let lat = build_color_lattice(8).unwrap();
        let interior = lat
            .blocks
            .iter()
            .find(|b| b.green.iter().chain(&b.blue).all(Option::is_some))
            .unwrap();
        let l2 = flipped(&lat, &interior.support(BlockOperator::L2));
        assert_eq!(l2.len(), 2);
        assert!(l2.iter().all(|&c| lat.checks[c].color == Color::Blue));
        let diag = flipped(&lat, &interior.support(BlockOperator::Diag));
        assert_eq!(
            diag.iter()
                .filter(|&&c| lat.checks[c].color == Color::Blue)
                .count(),
            2
        );
        assert_eq!(
            diag.iter()
                .filter(|&&c| lat.checks[c].color == Color::Green)
                .count(),
            2
        );
    }
}
