//! Unrotated planar surface code.
//!
//! Sites live on a `(2d-1) x (2d-1)` grid. Data qubits sit where `row + col`
//! is even; X checks (lattice vertices) at even row / odd column and Z checks
//! (faces) at odd row / even column. Top and bottom boundaries are smooth,
//! left and right are rough.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrientation {
    /// Joins two X checks to its left and right.
    Horizontal,
    /// Joins two X checks above and below.
    Vertical,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Smooth,
    Rough,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceQubit {
    pub id: usize,
    pub row: usize,
    pub col: usize,
    pub orientation: EdgeOrientation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceCheck {
    pub id: usize,
    pub row: usize,
    pub col: usize,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceBoundaries {
    pub top: BoundaryKind,
    pub bottom: BoundaryKind,
    pub left: BoundaryKind,
    pub right: BoundaryKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceCodeLattice {
    pub distance: usize,
    pub qubits: Vec<SurfaceQubit>,
    pub x_checks: Vec<SurfaceCheck>,
    pub z_checks: Vec<SurfaceCheck>,
    pub boundaries: SurfaceBoundaries,
    /// grid site -> qubit id, row-major over the `(2d-1)^2` grid
    qubit_at: Vec<Option<usize>>,
}

impl SurfaceCodeLattice {
    pub fn new(distance: usize) -> Result<Self> {
        if distance < 2 {
            return Err(Error::InvalidDistance {
                distance,
                reason: "surface code distance must be at least 2",
            });
        }
        let side = 2 * distance - 1;
        let mut qubits = Vec::new();
        let mut qubit_at = vec![None; side * side];
        for row in 0..side {
            for col in 0..side {
                if (row + col) % 2 == 0 {
                    let orientation = if row % 2 == 0 {
                        EdgeOrientation::Horizontal
                    } else {
                        EdgeOrientation::Vertical
                    };
                    qubit_at[row * side + col] = Some(qubits.len());
                    qubits.push(SurfaceQubit {
                        id: qubits.len(),
                        row,
                        col,
                        orientation,
                    });
                }
            }
        }

        let neighbours = |row: usize, col: usize| -> Vec<usize> {
            let mut out = Vec::with_capacity(4);
            let (r, c) = (row as isize, col as isize);
            for (dr, dc) in [(-1, 0), (0, -1), (0, 1), (1, 0)] {
                let (nr, nc) = (r + dr, c + dc);
                if nr >= 0 && nc >= 0 && (nr as usize) < side && (nc as usize) < side {
                    if let Some(q) = qubit_at[nr as usize * side + nc as usize] {
                        out.push(q);
                    }
                }
            }
            out
        };

        let mut x_checks = Vec::new();
        let mut z_checks = Vec::new();
        for row in 0..side {
            for col in 0..side {
                if row % 2 == 0 && col % 2 == 1 {
                    x_checks.push(SurfaceCheck {
                        id: x_checks.len(),
                        row,
                        col,
                        support: neighbours(row, col),
                    });
                } else if row % 2 == 1 && col % 2 == 0 {
                    z_checks.push(SurfaceCheck {
                        id: z_checks.len(),
                        row,
                        col,
                        support: neighbours(row, col),
                    });
                }
            }
        }

        Ok(SurfaceCodeLattice {
            distance,
            qubits,
            x_checks,
            z_checks,
            boundaries: SurfaceBoundaries {
                top: BoundaryKind::Smooth,
                bottom: BoundaryKind::Smooth,
                left: BoundaryKind::Rough,
                right: BoundaryKind::Rough,
            },
            qubit_at,
        })
    }

    /// Side length of the site grid.
    pub fn side(&self) -> usize {
        2 * self.distance - 1
    }

    pub fn qubit_at(&self, row: isize, col: isize) -> Option<usize> {
        let side = self.side() as isize;
        if row < 0 || col < 0 || row >= side || col >= side {
            return None;
        }
        self.qubit_at[(row * side + col) as usize]
    }

    /// X check id at a grid site, if the site holds one.
    pub fn x_check_at(&self, row: isize, col: isize) -> Option<usize> {
        let side = self.side() as isize;
        if row < 0 || col < 0 || row >= side || col >= side || row % 2 != 0 || col % 2 != 1 {
            return None;
        }
        // row-major over (even row, odd col): distance - 1 per row
        Some((row as usize / 2) * (self.distance - 1) + col as usize / 2)
    }

    /// Z check id at a grid site, if the site holds one.
    pub fn z_check_at(&self, row: isize, col: isize) -> Option<usize> {
        let side = self.side() as isize;
        if row < 0 || col < 0 || row >= side || col >= side || row % 2 != 1 || col % 2 != 0 {
            return None;
        }
        Some((row as usize / 2) * self.distance + col as usize / 2)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_checks(&self) -> usize {
        self.x_checks.len() + self.z_checks.len()
    }
}
