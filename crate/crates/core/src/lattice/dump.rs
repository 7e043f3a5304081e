//! JSON dump of a color lattice.

use serde::{Deserialize, Serialize};

use super::color::{Block, Color, ColorCodeLattice, ColorQubit, LogicalSupports};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PauliKind {
    X,
    Z,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckDump {
    pub id: usize,
    pub color: Color,
    pub kind: PauliKind,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeDump {
    pub distance: usize,
    pub qubits: Vec<ColorQubit>,
    /// Every face twice: its X check, then its Z check.
    pub checks: Vec<CheckDump>,
    pub blocks: Vec<Block>,
    pub logicals: LogicalSupports,
}

impl LatticeDump {
    pub fn new(lat: &ColorCodeLattice) -> Self {
        let checks = lat
            .checks
            .iter()
            .flat_map(|c| {
                [PauliKind::X, PauliKind::Z].map(|kind| CheckDump {
                    id: c.id,
                    color: c.color,
                    kind,
                    support: c.support.clone(),
                })
            })
            .collect();
        LatticeDump {
            distance: lat.distance,
            qubits: lat.qubits.clone(),
            checks,
            blocks: lat.blocks.clone(),
            logicals: lat.logicals.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a dump and checks that it describes the canonical lattice of its distance.
    pub fn parse(text: &str) -> Result<Self> {
        let dump: LatticeDump = serde_json::from_str(text)?;
        if dump.distance > 64 {
            return Err(Error::Capacity(format!(
                "distance {} too large to rebuild",
                dump.distance
            )));
        }
        let reference = LatticeDump::new(&ColorCodeLattice::new(dump.distance)?);
        let same = dump.qubits.len() == reference.qubits.len()
            && dump.checks.len() == reference.checks.len()
            && dump.checks.iter().zip(&reference.checks).all(|(a, b)| {
                a.id == b.id && a.color == b.color && a.kind == b.kind && a.support == b.support
            })
            && dump.logicals.green == reference.logicals.green
            && dump.logicals.blue == reference.logicals.blue;
        if !same {
            return Err(Error::InvalidParameter(
                "lattice dump does not match its distance".into(),
            ));
        }
        Ok(dump)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_roundtrip_is_stable() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let text = LatticeDump::new(&lat).to_json().unwrap();
        let parsed = LatticeDump::parse(&text).unwrap();
        assert_eq!(parsed.to_json().unwrap(), text);
        assert_eq!(parsed.checks.len(), 18);
    }

    #[test]
    fn tampered_dump_rejected() {
        let lat = ColorCodeLattice::new(4).unwrap();
        let mut dump = LatticeDump::new(&lat);
        dump.checks[0].support.pop();
        let text = dump.to_json().unwrap();
        assert!(LatticeDump::parse(&text).is_err());
        assert!(LatticeDump::parse("{").is_err());
    }
}
