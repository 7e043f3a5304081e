//! Fixed-point matching weights.
//!
//! A [`Weight`] stores the nominal weight in millionths in its high 64 bits
//! and a tie-breaking perturbation in its low 64 bits. Comparisons are
//! therefore lexicographic: the perturbation only decides between paths or
//! matchings whose nominal weights are exactly equal.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

/// Nominal units per unit of weight.
pub const UNITS: i64 = 1_000_000;

const SHIFT: u32 = 64;

#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(i128);

impl Weight {
    pub const ZERO: Weight = Weight(0);
    /// Larger than any path weight that can occur on a lattice graph.
    pub const INFINITY: Weight = Weight(i128::MAX / 8);

    /// Converts a real weight, rounding to the nearest millionth.
    pub fn from_f64(w: f64) -> Weight {
        Weight::from_units((w * UNITS as f64).round() as i64)
    }

    pub fn from_units(units: i64) -> Weight {
        Weight((units as i128) << SHIFT)
    }

    pub fn from_raw(raw: i128) -> Weight {
        Weight(raw)
    }

    pub fn raw(self) -> i128 {
        self.0
    }

    /// Adds a tie-break perturbation below the resolution of nominal weights.
    pub fn perturbed(self, jitter: u32) -> Weight {
        Weight(self.0 + jitter as i128)
    }

    /// Same perturbation, nominal part replaced by zero.
    pub fn zeroed(self) -> Weight {
        Weight(self.0 & ((1i128 << SHIFT) - 1))
    }

    /// Nominal part in millionths; sums of perturbations never reach a full unit.
    pub fn units(self) -> i64 {
        (self.0 >> SHIFT) as i64
    }

    pub fn to_f64(self) -> f64 {
        self.units() as f64 / UNITS as f64
    }

    pub fn is_finite(self) -> bool {
        self < Weight::INFINITY
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_finite() {
            return write!(f, "Weight(inf)");
        }
        let jitter = self.0 & ((1i128 << SHIFT) - 1);
        write!(f, "Weight({}+{}e)", self.to_f64(), jitter)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
