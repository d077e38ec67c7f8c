//! Fault injection, sweeps, sampling and table regeneration.

pub mod crosscheck;
pub mod gadget;
pub mod montecarlo;
pub mod sweep;
pub mod tables;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{QecError, Result};
use crate::lattice::{Block, Dimension, Lattice1D, Lattice2D, SchemeId};
use crate::qec1d::{self, ErrorLocation1D, Options1D, Payload};
use crate::qec2d::{self, Assignment2D, ErrorLocation2D, Payload2D};
use crate::schedule::{Detector, Round};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultPauli {
    X,
    Y,
    Z,
}

impl FaultPauli {
    pub const ALL: [FaultPauli; 3] = [FaultPauli::X, FaultPauli::Y, FaultPauli::Z];

    pub fn has_x(self) -> bool {
        self != FaultPauli::Z
    }

    pub fn has_z(self) -> bool {
        self != FaultPauli::X
    }
}

/// A single-qubit Pauli inserted before gate `position` (equal to the
/// circuit length to append).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultSpec {
    pub qubit: usize,
    pub pauli: FaultPauli,
    pub position: usize,
}

impl fmt::Display for FaultSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(q{})@{}", self.pauli, self.qubit, self.position)
    }
}

/// Gates realising `pauli` up to a global phase (Y as X then Z).
pub fn fault_gates(qubit: usize, pauli: FaultPauli) -> Vec<Gate> {
    let mut v = Vec::new();
    if pauli.has_x() {
        v.push(Gate::X(qubit));
    }
    if pauli.has_z() {
        v.push(Gate::Z(qubit));
    }
    v
}

/// Inserts the fault. Labels at the insertion point stay in front of it.
pub fn inject(circuit: &Circuit, fault: &FaultSpec) -> Result<Circuit> {
    if fault.position > circuit.len() {
        return Err(QecError::InvalidFault(format!("position {} beyond circuit length {}", fault.position, circuit.len())));
    }
    if fault.qubit >= circuit.n {
        return Err(QecError::InvalidFault(format!("qubit {} outside {} qubits", fault.qubit, circuit.n)));
    }
    let gates = fault_gates(fault.qubit, fault.pauli);
    let k = gates.len();
    let mut out = circuit.clone();
    out.gates.splice(fault.position..fault.position, gates);
    for (at, _) in out.labels.iter_mut() {
        if *at > fault.position {
            *at += k;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Location {
    One(ErrorLocation1D),
    Two(ErrorLocation2D),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::One(l) => l.fmt(f),
            Location::Two(l) => l.fmt(f),
        }
    }
}

/// A data register the sweeps may corrupt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataBlock {
    pub label: String,
    pub block: Block,
    pub location: Location,
}

/// A scheme instance: state preparation, one correction cycle with its
/// detectors, and the data registers.
#[derive(Clone, Debug)]
pub struct Protocol {
    pub scheme: SchemeId,
    pub dims: Vec<usize>,
    pub prep: Circuit,
    pub cycle: Round<Location>,
    pub data: Vec<DataBlock>,
}

fn map_round<L>(r: Round<L>, f: impl Fn(L) -> Location) -> Round<Location> {
    Round {
        circuit: r.circuit,
        detectors: r.detectors.into_iter().map(|d| Detector { cond: d.cond, location: f(d.location) }).collect(),
        flags: r.flags,
    }
}

impl Protocol {
    /// 1D instance on the reference assignment with both payload
    /// superpositions.
    pub fn one_d(lat: &Lattice1D, opts: Options1D) -> Result<Self> {
        let (flux, occ) = qec1d::reference_assignment(lat);
        let prep = qec1d::build_physical_state_1d(lat, &flux, &occ, Payload::FULL)?;
        let cycle = map_round(qec1d::correction_cycle(lat, &occ, opts), Location::One);
        let data = lat
            .data_roles()
            .into_iter()
            .map(|(role, block)| DataBlock {
                label: role.to_string(),
                block,
                location: Location::One(ErrorLocation1D::of_role_in(lat, role)),
            })
            .collect();
        Ok(Self { scheme: lat.scheme, dims: vec![lat.n], prep, cycle, data })
    }

    /// 2D instance on the vacuum with both payload superpositions.
    pub fn two_d(lat: &Lattice2D) -> Result<Self> {
        let a = Assignment2D::vacuum(lat);
        let prep = qec2d::build_physical_state_2d(lat, &a, Payload2D::FULL)?;
        let cycle = map_round(qec2d::correction_cycle(lat, &a.static_charges), Location::Two);
        let data = qec2d::data_blocks(lat)
            .into_iter()
            .map(|(role, block)| DataBlock {
                label: role.to_string(),
                block,
                location: Location::Two(ErrorLocation2D::of_role(role)),
            })
            .collect();
        Ok(Self { scheme: lat.scheme, dims: vec![lat.nx, lat.ny], prep, cycle, data })
    }

    pub fn build(scheme: SchemeId, dims: &[usize]) -> Result<Self> {
        match (scheme.dimension, dims) {
            (Dimension::One, [n]) => Self::one_d(&Lattice1D::build(*n, scheme)?, Options1D::default()),
            (Dimension::Two, [nx, ny]) => Self::two_d(&Lattice2D::build(*nx, *ny, scheme)?),
            _ => Err(QecError::Config(format!("wrong number of dimensions for {scheme}"))),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.prep.n.max(self.cycle.circuit.n)
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        self.data.iter().flat_map(|d| d.block.qubits()).collect()
    }

    /// Preparation followed by the cycle.
    pub fn full_circuit(&self) -> Circuit {
        Circuit::compose([&self.prep, &self.cycle.circuit])
    }

    /// Gate index where idle faults land (between preparation and cycle).
    pub fn fault_position(&self) -> usize {
        self.prep.len()
    }

    /// Data block containing `qubit`.
    pub fn block_of(&self, qubit: usize) -> Option<&DataBlock> {
        self.data.iter().find(|d| d.block.qubits().contains(&qubit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{run_dense, run_tableau, CircuitBuilder};

    #[test]
    fn inject_positions() {
        let mut b = CircuitBuilder::new(2);
        b.label("a").h(0).label("b").cnot(0, 1);
        let c = b.finish();
        let f = FaultSpec { qubit: 1, pauli: FaultPauli::Y, position: 1 };
        let out = inject(&c, &f).unwrap();
        assert_eq!(out.gates, vec![Gate::H(0), Gate::X(1), Gate::Z(1), Gate::Cnot(0, 1)]);
        assert_eq!(out.labels, vec![(0, "a".to_string()), (1, "b".to_string())]);
        assert!(inject(&c, &FaultSpec { position: 3, ..f }).is_err());
        assert!(inject(&c, &FaultSpec { position: 2, ..f }).is_ok());
    }

    #[test]
    fn y_equals_x_then_z_in_syndromes() {
        let mut b = CircuitBuilder::new(5);
        crate::codes::encode_phaseflip(&mut b, [0, 1, 2]);
        let pos = b.circuit().len();
        crate::codes::phase_correct(&mut b, [0, 1, 2], [3, 4]);
        crate::codes::bitflip_correct(&mut b, [0, 1, 2], [3, 4]);
        let c = b.finish();
        for q in 0..3 {
            let y = inject(&c, &FaultSpec { qubit: q, pauli: FaultPauli::Y, position: pos }).unwrap();
            let xz = inject(&inject(&c, &FaultSpec { qubit: q, pauli: FaultPauli::Z, position: pos }).unwrap(), &FaultSpec { qubit: q, pauli: FaultPauli::X, position: pos }).unwrap();
            assert_eq!(run_tableau(&y, 3).unwrap().1.bits, run_tableau(&xz, 3).unwrap().1.bits);
            assert_eq!(run_dense(&y, 3).unwrap().1.bits, run_dense(&xz, 3).unwrap().1.bits);
        }
    }
}
