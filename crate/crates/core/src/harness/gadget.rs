//! Exhaustive single-fault analysis of the flag-protected parity gadget.
//!
//! Faults are pushed through the gadget as a Pauli frame. Every frame
//! prediction is replayed on the dense engine from an encoded payload.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{inject, FaultPauli, FaultSpec};
use crate::circuit::{execute, Circuit, CircuitBuilder, Gate};
use crate::codes::{encode_phaseflip, flagged_parity, Operand};
use crate::dense::{fidelity, DenseState};
use crate::engine::SeededOutcomes;
use crate::error::Result;
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    /// Logical-to-physical CNOT from one block.
    Cnot,
    /// Parity of two blocks onto one target.
    Parity2,
}

/// The gadget plus where its pieces live.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub blocks: Vec<[usize; 3]>,
    pub target: usize,
    pub flag: usize,
    /// Encoding of the input blocks, not subject to faults.
    pub prep: Circuit,
    pub circuit: Circuit,
    pub flag_bit: usize,
}

impl Gadget {
    pub fn build(kind: GadgetKind) -> Self {
        let blocks: Vec<[usize; 3]> = match kind {
            GadgetKind::Cnot => vec![[0, 1, 2]],
            GadgetKind::Parity2 => vec![[0, 1, 2], [3, 4, 5]],
        };
        let target = 3 * blocks.len();
        let flag = target + 1;
        let mut p = CircuitBuilder::new(flag + 1);
        for (i, blk) in blocks.iter().enumerate() {
            if i > 0 {
                p.h(blk[0]);
            }
            encode_phaseflip(&mut p, *blk);
        }
        let mut b = CircuitBuilder::new(flag + 1);
        let ops: Vec<Operand> = blocks.iter().map(|&q| Operand::Block(q)).collect();
        let flag_bit = flagged_parity(&mut b, &ops, target, flag);
        Gadget { kind, blocks, target, flag, prep: p.finish(), circuit: b.finish(), flag_bit }
    }

    pub fn num_qubits(&self) -> usize {
        self.flag + 1
    }
}

/// One or two simultaneous single-qubit faults at a circuit position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetFault {
    pub position: usize,
    pub terms: Vec<(usize, FaultPauli)>,
}

/// Every single-qubit Pauli at every position, plus every two-qubit Pauli
/// on the pair right after each CNOT.
pub fn gadget_faults(g: &Gadget) -> Vec<GadgetFault> {
    let mut out = Vec::new();
    for position in 0..=g.circuit.len() {
        for q in 0..g.num_qubits() {
            for p in FaultPauli::ALL {
                out.push(GadgetFault { position, terms: vec![(q, p)] });
            }
        }
    }
    for (i, gate) in g.circuit.gates.iter().enumerate() {
        if let Gate::Cnot(c, t) = *gate {
            for pc in FaultPauli::ALL {
                for pt in FaultPauli::ALL {
                    out.push(GadgetFault { position: i + 1, terms: vec![(c, pc), (t, pt)] });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetRow {
    pub fault: GadgetFault,
    pub flagged: bool,
    /// Frame left on the data blocks and target.
    pub residual: String,
    /// Lightest equivalent of the residual on the clean output.
    pub reduced: String,
    /// Data weight of `reduced` per block.
    pub block_weights: Vec<usize>,
    /// Whether the dense replay matches the frame prediction.
    pub dense_agrees: bool,
}

impl GadgetRow {
    pub fn undetected_failure(&self) -> bool {
        !self.flagged && self.block_weights.iter().any(|&w| w >= 2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetReport {
    pub kind: GadgetKind,
    pub rows: Vec<GadgetRow>,
}

impl GadgetReport {
    pub fn undetected(&self) -> Vec<&GadgetRow> {
        self.rows.iter().filter(|r| r.undetected_failure()).collect()
    }

    pub fn disagreements(&self) -> Vec<&GadgetRow> {
        self.rows.iter().filter(|r| !r.dense_agrees).collect()
    }

    pub fn passed(&self) -> bool {
        self.undetected().is_empty() && self.disagreements().is_empty()
    }
}

/// Propagates the frame from `fault.position` to the end. Returns the
/// residual frame and whether the flag outcome flips.
pub fn propagate(g: &Gadget, fault: &GadgetFault) -> (Vec<(bool, bool)>, bool) {
    let mut f = vec![(false, false); g.num_qubits()];
    let mut flipped = false;
    for &(q, p) in &fault.terms {
        f[q].0 ^= p.has_x();
        f[q].1 ^= p.has_z();
    }
    for gate in &g.circuit.gates[fault.position..] {
        match *gate {
            Gate::H(q) => f[q] = (f[q].1, f[q].0),
            Gate::Cnot(c, t) => {
                f[t].0 ^= f[c].0;
                f[c].1 ^= f[t].1;
            }
            Gate::MeasureZ { qubit, bit } => {
                if bit == g.flag_bit {
                    flipped = f[qubit].0;
                }
                f[qubit].1 = false;
            }
            Gate::Reset(q) => f[q] = (false, false),
            Gate::X(_) | Gate::Z(_) => {}
            ref other => unreachable!("gate {other:?} not used by the gadget"),
        }
    }
    (f, flipped)
}

/// Data weights per block of the lighter of `frame` and `frame` times the
/// output stabilizer `Z_t` times every logical Z (the target enters in `|0>`).
pub fn reduced_weights(g: &Gadget, frame: &[(bool, bool)]) -> (Vec<(bool, bool)>, Vec<usize>) {
    let weights = |f: &[(bool, bool)]| -> Vec<usize> {
        g.blocks.iter().map(|blk| blk.iter().filter(|&&q| f[q].0 || f[q].1).count()).collect()
    };
    let mut other = frame.to_vec();
    other[g.target].1 ^= true;
    for blk in &g.blocks {
        for &q in blk {
            other[q].1 ^= true;
        }
    }
    let (a, b) = (weights(frame), weights(&other));
    let key = |w: &[usize]| (w.iter().copied().max().unwrap_or(0), w.iter().sum::<usize>());
    if key(&b) < key(&a) {
        (other, b)
    } else {
        (frame.to_vec(), a)
    }
}

fn frame_pauli(frame: &[(bool, bool)], skip: usize) -> PauliString {
    let terms: Vec<(usize, Pauli)> = frame
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != skip)
        .filter_map(|(q, &(x, z))| match (x, z) {
            (false, false) => None,
            (true, false) => Some((q, Pauli::X)),
            (false, true) => Some((q, Pauli::Z)),
            (true, true) => Some((q, Pauli::Y)),
        })
        .collect();
    PauliString::from_sparse(frame.len(), &terms)
}

fn run_dense(g: &Gadget, circuit: &Circuit) -> Result<(DenseState, Vec<bool>)> {
    let mut s = DenseState::with_payload(g.num_qubits(), Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    execute(&g.prep, &mut s, &mut SeededOutcomes::new(0))?;
    let rec = execute(circuit, &mut s, &mut SeededOutcomes::new(0))?;
    Ok((s, rec.bits))
}

pub fn analyse(kind: GadgetKind) -> Result<GadgetReport> {
    let g = Gadget::build(kind);
    let (clean, clean_bits) = run_dense(&g, &g.circuit)?;
    let rows = gadget_faults(&g)
        .into_par_iter()
        .map(|fault| {
            let (frame, flagged) = propagate(&g, &fault);
            let (reduced, block_weights) = reduced_weights(&g, &frame);
            let mut c = g.circuit.clone();
            for &(qubit, pauli) in &fault.terms {
                c = inject(&c, &FaultSpec { qubit, pauli, position: fault.position })?;
            }
            let (faulty, bits) = run_dense(&g, &c)?;
            let mut expect = clean.clone();
            let mut residual = frame_pauli(&frame, g.flag);
            expect.apply_pauli(&residual);
            if frame[g.flag].0 {
                expect.apply_pauli(&PauliString::single(g.num_qubits(), g.flag, Pauli::X));
            }
            let flag_ok = bits[g.flag_bit] == (clean_bits[g.flag_bit] ^ flagged);
            let dense_agrees = flag_ok && fidelity(&expect, &faulty)? >= 1.0 - 1e-9;
            let keep: Vec<usize> = (0..g.flag).collect();
            residual = residual.restrict(&keep);
            let reduced = frame_pauli(&reduced, g.flag).restrict(&keep).to_string();
            Ok(GadgetRow { fault, flagged, residual: residual.to_string(), reduced, block_weights, dense_agrees })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GadgetReport { kind, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadgets_are_safe() {
        for kind in [GadgetKind::Cnot, GadgetKind::Parity2] {
            let r = analyse(kind).unwrap();
            assert!(r.passed(), "{:?} {:?}", r.undetected(), r.disagreements());
        }
    }

    #[test]
    fn hook_needs_the_flag() {
        // Z on the target between the two blocks: weight 2 on the first
        // block whichever representative is taken.
        let mut g = Gadget::build(GadgetKind::Parity2);
        assert_eq!(g.circuit.gates[4], Gate::Cnot(1, g.target));
        let fault = GadgetFault { position: 5, terms: vec![(g.target, FaultPauli::Z)] };
        let (frame, flagged) = propagate(&g, &fault);
        assert!(flagged);
        assert_eq!(reduced_weights(&g, &frame).1, vec![2, 0]);
        g.flag_bit = usize::MAX;
        assert!(!propagate(&g, &fault).1);

        // A single block tolerates the same fault: Z1 Z2 Z_t ~ Z0.
        let g = Gadget::build(GadgetKind::Cnot);
        let (frame, _) = propagate(&g, &GadgetFault { position: 4, terms: vec![(g.target, FaultPauli::Z)] });
        assert_eq!(reduced_weights(&g, &frame).1, vec![1]);
    }
}
