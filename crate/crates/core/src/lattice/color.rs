//! The 4.8.8 color code, assembled from a distance-`d/2` surface code.
//!
//! Every surface qubit becomes a red square (a [[4,2,2]] block) of four color
//! qubits. Surface X checks become blue octagons and surface Z checks become
//! green octagons; each octagon takes the two corners of every incident block
//! that face it. Blocks on horizontal surface edges keep the upright
//! orientation, blocks on vertical edges are rotated by 90 degrees, which is
//! what makes the corner assignment consistent across the lattice.
//!
//! Color qubit `(row, col)` coordinates are `(2r + a, 2c + b)` for a block at
//! surface site `(r, c)` and geometric corner `(a, b)`. Top and bottom
//! boundaries are green, left and right boundaries are blue.

use serde::{Deserialize, Serialize};

use super::surface::{EdgeOrientation, SurfaceCodeLattice};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "0")]
    Upright,
    #[serde(rename = "90")]
    Rotated,
}

/// The three nontrivial two-qubit operators of a block.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockOperator {
    /// Flips the two adjacent green octagons.
    L1,
    /// Flips the two adjacent blue octagons.
    L2,
    /// Flips two green and two blue octagons.
    Diag,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorQubit {
    pub id: usize,
    pub row: usize,
    pub col: usize,
    pub block: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColorCheck {
    pub id: usize,
    pub color: Color,
    /// Surface-grid site the face was derived from.
    pub row: usize,
    pub col: usize,
    pub support: Vec<usize>,
}

/// Checks touching a single qubit; `None` means the qubit sits on a boundary of that color.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitChecks {
    pub red: usize,
    pub green: Option<usize>,
    pub blue: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Block {
    pub id: usize,
    pub surface_qubit: usize,
    /// Surface-grid site of the block.
    pub row: usize,
    pub col: usize,
    pub orientation: Orientation,
    pub red_check: usize,
    /// `corners[2 * g + b]` touches green side `g` and blue side `b`.
    pub corners: [usize; 4],
    /// Green octagon on each green side (`None` = boundary).
    pub green: [Option<usize>; 2],
    /// Blue octagon on each blue side (`None` = boundary).
    pub blue: [Option<usize>; 2],
}

impl Block {
    pub fn corner(&self, green_side: usize, blue_side: usize) -> usize {
        self.corners[2 * green_side + blue_side]
    }

    /// Position `0..4` of a qubit among the block corners.
    pub fn corner_index(&self, qubit: usize) -> Option<usize> {
        self.corners.iter().position(|&q| q == qubit)
    }

    /// Representative two-qubit support of a block operator.
    pub fn support(&self, op: BlockOperator) -> [usize; 2] {
        match op {
            BlockOperator::L1 => [self.corner(0, 0), self.corner(1, 0)],
            BlockOperator::L2 => [self.corner(0, 0), self.corner(0, 1)],
            BlockOperator::Diag => {
                let mut s = [self.corner(1, 0), self.corner(0, 1)];
                s.sort_unstable();
                s
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogicalSupports {
    /// Qubits on the top green boundary.
    pub green: Vec<usize>,
    /// Qubits on the left blue boundary.
    pub blue: Vec<usize>,
}

impl LogicalSupports {
    pub fn get(&self, color: Color) -> &[usize] {
        match color {
            Color::Green => &self.green,
            Color::Blue => &self.blue,
            Color::Red => &[],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryColors {
    pub top: Color,
    pub bottom: Color,
    pub left: Color,
    pub right: Color,
}

#[derive(Clone, Debug)]
pub struct ColorCodeLattice {
    pub distance: usize,
    pub qubits: Vec<ColorQubit>,
    pub checks: Vec<ColorCheck>,
    pub blocks: Vec<Block>,
    pub boundaries: BoundaryColors,
    pub logicals: LogicalSupports,
    qubit_checks: Vec<QubitChecks>,
    block_of_check: Vec<Option<usize>>,
    surface_distance: usize,
}

impl ColorCodeLattice {
    pub fn new(distance: usize) -> Result<Self> {
        if distance % 2 != 0 || distance < 4 {
            return Err(Error::InvalidDistance {
                distance,
                reason: "color code distance must be even and at least 4",
            });
        }
        let surface = SurfaceCodeLattice::new(distance / 2)?;
        let side = surface.side();

        // Faces in row-major order of their surface site.
        let mut checks = Vec::new();
        let mut face_at = vec![None; side * side];
        for row in 0..side {
            for col in 0..side {
                let color = match (row % 2, col % 2) {
                    (0, 0) | (1, 1) => Color::Red,
                    (0, 1) => Color::Blue,
                    _ => Color::Green,
                };
                face_at[row * side + col] = Some(checks.len());
                checks.push(ColorCheck {
                    id: checks.len(),
                    color,
                    row,
                    col,
                    support: Vec::new(),
                });
            }
        }
        let face = |row: isize, col: isize| -> Option<usize> {
            if row < 0 || col < 0 || row >= side as isize || col >= side as isize {
                None
            } else {
                face_at[row as usize * side + col as usize]
            }
        };

        // Color qubits, row-major by coordinate.
        let mut sites: Vec<(usize, usize, usize, usize, usize)> = Vec::new(); // (row, col, block, a, b)
        for (block, sq) in surface.qubits.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    sites.push((2 * sq.row + a, 2 * sq.col + b, block, a, b));
                }
            }
        }
        sites.sort_unstable();
        let mut geometric = vec![[0usize; 4]; surface.qubits.len()];
        let qubits: Vec<ColorQubit> = sites
            .iter()
            .enumerate()
            .map(|(id, &(row, col, block, a, b))| {
                geometric[block][2 * a + b] = id;
                ColorQubit {
                    id,
                    row,
                    col,
                    block,
                }
            })
            .collect();

        let mut blocks = Vec::with_capacity(surface.qubits.len());
        for (id, sq) in surface.qubits.iter().enumerate() {
            let (r, c) = (sq.row as isize, sq.col as isize);
            let red_check = face(r, c).expect("block site holds a face");
            let geo = geometric[id];
            let (orientation, corners, green, blue) = match sq.orientation {
                // green octagons above/below, blue octagons left/right
                EdgeOrientation::Horizontal => (
                    Orientation::Upright,
                    [geo[0], geo[1], geo[2], geo[3]],
                    [face(r - 1, c), face(r + 1, c)],
                    [face(r, c - 1), face(r, c + 1)],
                ),
                // green octagons left/right, blue octagons above/below
                EdgeOrientation::Vertical => (
                    Orientation::Rotated,
                    [geo[0], geo[2], geo[1], geo[3]],
                    [face(r, c - 1), face(r, c + 1)],
                    [face(r - 1, c), face(r + 1, c)],
                ),
            };
            blocks.push(Block {
                id,
                surface_qubit: sq.id,
                row: sq.row,
                col: sq.col,
                orientation,
                red_check,
                corners,
                green,
                blue,
            });
        }

        let mut qubit_checks = vec![
            QubitChecks {
                red: 0,
                green: None,
                blue: None
            };
            qubits.len()
        ];
        for block in &blocks {
            checks[block.red_check]
                .support
                .extend_from_slice(&block.corners);
            for g in 0..2 {
                for b in 0..2 {
                    let q = block.corner(g, b);
                    qubit_checks[q] = QubitChecks {
                        red: block.red_check,
                        green: block.green[g],
                        blue: block.blue[b],
                    };
                    if let Some(f) = block.green[g] {
                        checks[f].support.push(q);
                    }
                    if let Some(f) = block.blue[b] {
                        checks[f].support.push(q);
                    }
                }
            }
        }
        for check in &mut checks {
            check.support.sort_unstable();
        }
        let mut block_of_check = vec![None; checks.len()];
        for block in &blocks {
            block_of_check[block.red_check] = Some(block.id);
        }

        let logicals = LogicalSupports {
            green: qubits.iter().filter(|q| q.row == 0).map(|q| q.id).collect(),
            blue: qubits.iter().filter(|q| q.col == 0).map(|q| q.id).collect(),
        };

        Ok(ColorCodeLattice {
            distance,
            qubits,
            checks,
            blocks,
            boundaries: BoundaryColors {
                top: Color::Green,
                bottom: Color::Green,
                left: Color::Blue,
                right: Color::Blue,
            },
            logicals,
            qubit_checks,
            block_of_check,
            surface_distance: surface.distance,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Distance of the underlying surface code, `d/2`.
    pub fn surface_distance(&self) -> usize {
        self.surface_distance
    }

    /// Number of surface-grid rows (and columns) of faces.
    pub fn face_grid_side(&self) -> usize {
        2 * self.surface_distance - 1
    }

    pub fn qubit_checks(&self, qubit: usize) -> QubitChecks {
        self.qubit_checks[qubit]
    }

    pub fn block_of_check(&self, check: usize) -> Option<usize> {
        self.block_of_check[check]
    }

    pub fn block_of_qubit(&self, qubit: usize) -> &Block {
        &self.blocks[self.qubits[qubit].block]
    }

    /// Checks of a single color, in id order.
    pub fn checks_of(&self, color: Color) -> impl Iterator<Item = &ColorCheck> {
        self.checks.iter().filter(move |c| c.color == color)
    }

    /// Blocks in the first and last block rows (they touch the green boundaries).
    pub fn is_top_or_bottom_block(&self, block: usize) -> bool {
        let row = self.blocks[block].row;
        row == 0 || row + 1 == self.face_grid_side()
    }

    /// Blocks in the first and last block columns (they touch the blue boundaries).
    pub fn is_left_or_right_block(&self, block: usize) -> bool {
        let col = self.blocks[block].col;
        col == 0 || col + 1 == self.face_grid_side()
    }

    /// Blocks in the `index`-th row that carries `d/2` squares, left to right.
    pub fn long_row(&self, index: usize) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| b.row == 2 * index)
            .map(|b| b.id)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_distances() {
        let lat = ColorCodeLattice::new(4).unwrap();
        assert_eq!(lat.num_qubits(), 20);
        assert_eq!(lat.blocks.len(), 5);
        assert_eq!(
            lat.checks_of(Color::Green).count() + lat.checks_of(Color::Blue).count(),
            4
        );
        assert_eq!(lat.num_checks(), 9);

        let lat = ColorCodeLattice::new(8).unwrap();
        assert_eq!(lat.num_qubits(), 100);
        assert_eq!(lat.blocks.len(), 25);
    }

    #[test]
    fn rejects_bad_distances() {
        for d in [0, 1, 2, 3, 5, 7] {
            assert!(ColorCodeLattice::new(d).is_err(), "d={d}");
        }
    }

    #[test]
    fn corner_labels_exhaust_side_pairs() {
        let lat = ColorCodeLattice::new(8).unwrap();
        for block in &lat.blocks {
            let mut seen = std::collections::HashSet::new();
            for g in 0..2 {
                for b in 0..2 {
                    let q = block.corner(g, b);
                    let qc = lat.qubit_checks(q);
                    assert_eq!(qc.red, block.red_check);
                    assert_eq!(qc.green, block.green[g]);
                    assert_eq!(qc.blue, block.blue[b]);
                    assert!(seen.insert((g, b)));
                }
            }
            assert!(block.green[0] != block.green[1] || block.green[0].is_none());
            assert!(block.blue[0] != block.blue[1] || block.blue[0].is_none());
        }
    }

    #[test]
    fn orientations_alternate_between_rows() {
        let lat = ColorCodeLattice::new(6).unwrap();
        for block in &lat.blocks {
            let expected = if block.row % 2 == 0 {
                Orientation::Upright
            } else {
                Orientation::Rotated
            };
            assert_eq!(block.orientation, expected);
        }
    }

    #[test]
    fn octagons_have_eight_or_six_qubits() {
        let lat = ColorCodeLattice::new(8).unwrap();
        for check in &lat.checks {
            let w = check.support.len();
            match check.color {
                Color::Red => assert_eq!(w, 4),
                _ => assert!(w == 8 || w == 6, "octagon {} has weight {w}", check.id),
            }
        }
    }

    #[test]
    fn logical_supports_lie_on_boundaries() {
        let lat = ColorCodeLattice::new(6).unwrap();
        assert_eq!(lat.logicals.green.len(), 6);
        assert_eq!(lat.logicals.blue.len(), 6);
        for &q in &lat.logicals.green {
            assert_eq!(lat.qubit_checks(q).green, None);
        }
        for &q in &lat.logicals.blue {
            assert_eq!(lat.qubit_checks(q).blue, None);
        }
    }

    #[test]
    fn long_rows_hold_half_distance_blocks() {
        let lat = ColorCodeLattice::new(10).unwrap();
        for i in 0..5 {
            assert_eq!(lat.long_row(i).len(), 5);
        }
    }
}
