//! Three-qubit repetition codes and the gadgets built from them.
//!
//! Phase-flip block convention: `|0>_L = (|+++> + |--->)/sqrt2`. Logical Z
//! is `ZZZ`, logical X is `X` on any one qubit (equivalently `XXX`), and the
//! stabilizers are `X0X1`, `X1X2`.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitBuilder, Condition};

/// Outcomes of the two parity checks; `true` is eigenvalue -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitFlipSyndrome {
    pub s1: bool,
    pub s2: bool,
}

impl BitFlipSyndrome {
    pub fn new(s1: bool, s2: bool) -> Self {
        Self { s1, s2 }
    }

    pub fn all() -> [BitFlipSyndrome; 4] {
        [(false, false), (false, true), (true, false), (true, true)].map(|(a, b)| Self::new(a, b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrectionPauli {
    X,
    Z,
}

/// `target` is the 0-based member to flip, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectionOp {
    pub target: Option<usize>,
    pub pauli: CorrectionPauli,
}

/// Member implicated by a syndrome over checks (0,1) and (1,2).
pub fn syndrome_member(s: BitFlipSyndrome) -> Option<usize> {
    match (s.s1, s.s2) {
        (false, false) => None,
        (true, false) => Some(0),
        (true, true) => Some(1),
        (false, true) => Some(2),
    }
}

pub fn decode_bitflip(s: BitFlipSyndrome) -> CorrectionOp {
    CorrectionOp { target: syndrome_member(s), pauli: CorrectionPauli::X }
}

pub fn decode_phaseflip(s: BitFlipSyndrome) -> CorrectionOp {
    CorrectionOp { target: syndrome_member(s), pauli: CorrectionPauli::Z }
}

/// The syndrome pattern that flags `member` (0, 1 or 2).
pub fn member_pattern(member: usize) -> [bool; 2] {
    match member {
        0 => [true, false],
        1 => [true, true],
        2 => [false, true],
        _ => panic!("member {member} out of range"),
    }
}

/// Condition firing exactly when syndrome bits `(s1, s2)` implicate `member`.
pub fn member_condition(s1: usize, s2: usize, member: usize) -> Condition {
    Condition::pattern(&[s1, s2], &member_pattern(member))
}

pub fn encode_bitflip(b: &mut CircuitBuilder, q: [usize; 3]) {
    b.cnot(q[0], q[1]).cnot(q[0], q[2]);
}

/// Maps `a|0> + b|1>` on `q[0]` to `a|0>_L + b|1>_L`. The leading H puts the
/// payload in the X basis so that logical Z is the block parity `ZZZ`.
pub fn encode_phaseflip(b: &mut CircuitBuilder, q: [usize; 3]) {
    b.h(q[0]);
    encode_bitflip(b, q);
    for &x in &q {
        b.h(x);
    }
}

/// Encoder on qubits 0..3 with the payload on qubit 0.
pub fn encode_bitflip_block() -> Circuit {
    let mut b = CircuitBuilder::new(3);
    encode_bitflip(&mut b, [0, 1, 2]);
    b.finish()
}

pub fn encode_phaseflip_block() -> Circuit {
    let mut b = CircuitBuilder::new(3);
    encode_phaseflip(&mut b, [0, 1, 2]);
    b.finish()
}

/// Bit-flip cycle: measures `Z0Z1`, `Z1Z2` into fresh bits via ancillas and
/// applies the X recovery. Returns the two syndrome bits.
pub fn bitflip_correct(b: &mut CircuitBuilder, q: [usize; 3], anc: [usize; 2]) -> [usize; 2] {
    let mut bits = [0; 2];
    for (i, (a, pair)) in anc.iter().zip([[q[0], q[1]], [q[1], q[2]]]).enumerate() {
        b.reset(*a);
        b.cnot(pair[0], *a).cnot(pair[1], *a);
        bits[i] = b.measure_z(*a);
    }
    for (m, &qq) in q.iter().enumerate() {
        b.cond_x(qq, member_condition(bits[0], bits[1], m));
    }
    bits
}

/// Phase-flip cycle: measures `X0X1`, `X1X2` and applies the Z recovery.
pub fn phase_correct(b: &mut CircuitBuilder, q: [usize; 3], anc: [usize; 2]) -> [usize; 2] {
    let mut bits = [0; 2];
    for (i, (a, pair)) in anc.iter().zip([[q[0], q[1]], [q[1], q[2]]]).enumerate() {
        b.reset(*a).h(*a);
        b.cnot(*a, pair[0]).cnot(*a, pair[1]);
        b.h(*a);
        bits[i] = b.measure_z(*a);
    }
    for (m, &qq) in q.iter().enumerate() {
        b.cond_z(qq, member_condition(bits[0], bits[1], m));
    }
    bits
}

/// A standalone phase-correction circuit: block on 0..3, ancillas 3 and 4.
pub fn phase_correct_block() -> Circuit {
    let mut b = CircuitBuilder::new(5);
    phase_correct(&mut b, [0, 1, 2], [3, 4]);
    b.finish()
}

/// One side of a parity coupling: a phase-flip block (coupled through its
/// logical Z, three CNOTs) or a bare qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operand {
    Block([usize; 3]),
    Qubit(usize),
}

impl Operand {
    pub fn from_block(b: crate::lattice::Block) -> Self {
        assert_eq!(b.len, 3);
        Operand::Block([b.start, b.start + 1, b.start + 2])
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Operand::Block(q) => q.to_vec(),
            Operand::Qubit(q) => vec![*q],
        }
    }
}

/// XORs the logical Z value of every operand into `target`.
pub fn parity_couple(b: &mut CircuitBuilder, operands: &[Operand], target: usize) {
    for op in operands {
        for q in op.qubits() {
            b.cnot(q, target);
        }
    }
}

/// Adds the Z-parity of `a` and `b` into `ancilla`. Self-inverse.
pub fn parity_extract(bld: &mut CircuitBuilder, a: Operand, b: Operand, ancilla: usize) {
    parity_couple(bld, &[a, b], ancilla);
}

/// [`parity_couple`] wrapped in a flag: the flag is prepared in `|+>`,
/// coupled onto `target` before the first and after the last data CNOT, and
/// read in the X basis. Returns the flag bit (1 signals a fault that may
/// have spread to two or more data qubits).
pub fn flagged_parity(b: &mut CircuitBuilder, operands: &[Operand], target: usize, flag: usize) -> usize {
    b.reset(flag).h(flag);
    b.cnot(flag, target);
    parity_couple(b, operands, target);
    b.cnot(flag, target);
    b.h(flag);
    b.measure_z(flag)
}

/// Flag-protected logical-to-physical CNOT from a block onto `target`.
pub fn ft_logical_to_physical_cnot(b: &mut CircuitBuilder, control: [usize; 3], target: usize, flag: usize) -> usize {
    flagged_parity(b, &[Operand::Block(control)], target, flag)
}

/// Measures the logical Z-parity of `operands` onto `syndrome` with a flag.
/// Returns `(syndrome bit, flag bit)`.
pub fn measure_parity(b: &mut CircuitBuilder, operands: &[Operand], syndrome: usize, flag: usize) -> (usize, usize) {
    b.reset(syndrome);
    let f = flagged_parity(b, operands, syndrome, flag);
    let s = b.measure_z(syndrome);
    (s, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{run_dense, Circuit};
    use crate::dense::{fidelity, DenseState};
    use crate::engine::{Engine, SeededOutcomes};
    use crate::pauli::PauliString;
    use num_complex::Complex64;

    fn payload() -> (Complex64, Complex64) {
        (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))
    }

    fn run_from(init: &DenseState, c: &Circuit) -> (DenseState, Vec<bool>) {
        let mut d = init.clone();
        let rec = crate::circuit::execute(c, &mut d, &mut SeededOutcomes::new(1)).unwrap();
        (d, rec.outcomes)
    }

    #[test]
    fn bitflip_encoder_on_payload() {
        let (a, b) = payload();
        let init = DenseState::with_payload(3, a, b).unwrap();
        let (d, _) = run_from(&init, &encode_bitflip_block());
        assert!((d.amplitude(0) - a).norm() < 1e-12);
        assert!((d.amplitude(7) - b).norm() < 1e-12);
    }

    #[test]
    fn phaseflip_stabilizers() {
        let (d, _) = run_dense(&encode_phaseflip_block(), 0).unwrap();
        for s in ["+XX_", "+_XX", "+ZZZ"] {
            assert!((d.expectation(&s.parse::<PauliString>().unwrap()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_x_is_logical_on_phase_block() {
        let (mut d, _) = run_dense(&encode_phaseflip_block(), 0).unwrap();
        let zl: PauliString = "+ZZZ".parse().unwrap();
        for q in 0..3 {
            let mut e = d.clone();
            e.x(q);
            assert!((e.expectation(&zl) + 1.0).abs() < 1e-12);
        }
        d.x(0);
        d.x(2);
        assert!((d.expectation(&zl) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoders_are_bijective() {
        let mut seen = std::collections::HashSet::new();
        for s in BitFlipSyndrome::all() {
            seen.insert(decode_bitflip(s).target);
        }
        assert_eq!(seen.len(), 4);
        assert_eq!(decode_bitflip(BitFlipSyndrome::new(true, true)).target, Some(1));
        assert_eq!(decode_bitflip(BitFlipSyndrome::new(false, true)).target, Some(2));
    }

    fn bit_then_correct(err: Option<usize>, phase: bool) -> (f64, Vec<bool>) {
        let (a, b) = payload();
        let init = DenseState::with_payload(5, a, b).unwrap();
        let mut enc = CircuitBuilder::new(5);
        if phase {
            encode_phaseflip(&mut enc, [0, 1, 2]);
        } else {
            encode_bitflip(&mut enc, [0, 1, 2]);
        }
        let (reference, _) = run_from(&init, enc.circuit());
        let mut full = CircuitBuilder::from_circuit(enc.finish());
        if let Some(q) = err {
            if phase {
                full.z(q);
            } else {
                full.x(q);
            }
        }
        if phase {
            phase_correct(&mut full, [0, 1, 2], [3, 4]);
        } else {
            bitflip_correct(&mut full, [0, 1, 2], [3, 4]);
        }
        full.reset(3).reset(4);
        let (out, outcomes) = run_from(&init, &full.finish());
        (fidelity(&out, &reference).unwrap(), outcomes)
    }

    #[test]
    fn repetition_codes_correct_single_errors() {
        for phase in [false, true] {
            for err in [None, Some(0), Some(1), Some(2)] {
                let (f, outcomes) = bit_then_correct(err, phase);
                assert!((f - 1.0).abs() < 1e-10, "phase={phase} err={err:?}");
                let expect = err.map_or([false, false], member_pattern);
                assert_eq!(outcomes, expect.to_vec());
            }
        }
    }

    #[test]
    fn parity_extract_basis_states() {
        for (la, lb) in [(false, false), (true, false), (false, true), (true, true)] {
            let mut b = CircuitBuilder::new(7);
            if la {
                b.x(0);
            }
            if lb {
                b.x(3);
            }
            encode_phaseflip(&mut b, [0, 1, 2]);
            encode_phaseflip(&mut b, [3, 4, 5]);
            parity_extract(&mut b, Operand::Block([0, 1, 2]), Operand::Block([3, 4, 5]), 6);
            let mut twice = CircuitBuilder::from_circuit(b.circuit().clone());
            let bit = b.measure_z(6);
            let (_, rec) = run_dense(&b.finish(), 0).unwrap();
            assert_eq!(rec.bits[bit], la ^ lb);
            parity_extract(&mut twice, Operand::Block([0, 1, 2]), Operand::Block([3, 4, 5]), 6);
            let bit = twice.measure_z(6);
            let (_, rec) = run_dense(&twice.finish(), 0).unwrap();
            assert!(!rec.bits[bit]);
        }
    }

    #[test]
    fn ft_cnot_flips_target_on_logical_one() {
        for one in [false, true] {
            let mut b = CircuitBuilder::new(5);
            if one {
                b.x(0);
            }
            encode_phaseflip(&mut b, [0, 1, 2]);
            let flag = ft_logical_to_physical_cnot(&mut b, [0, 1, 2], 3, 4);
            let t = b.measure_z(3);
            let (_, rec) = run_dense(&b.finish(), 9).unwrap();
            assert_eq!((rec.bits[t], rec.bits[flag]), (one, false));
        }
    }
}
