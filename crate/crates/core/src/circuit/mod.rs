//! Gate sequences with classical control, shared by every scheme builder.

mod run;
mod text;

pub use run::{execute, run, run_dense, run_dense_forced, run_tableau, EngineKind, ExecutionRecord, RunOutput};
pub use text::{emit_text, parse_text};

use crate::error::{QecError, Result};

/// A literal `c<bit> == value` in a classical condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub bit: usize,
    pub value: bool,
}

/// Conjunction of classical literals. Most conditions name a single bit;
/// lookup-table recoveries match a full syndrome pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Condition(pub Vec<Literal>);

impl Condition {
    pub fn bit(bit: usize) -> Self {
        Self(vec![Literal { bit, value: true }])
    }

    /// Matches the exact pattern `values` on `bits`.
    pub fn pattern(bits: &[usize], values: &[bool]) -> Self {
        assert_eq!(bits.len(), values.len());
        Self(bits.iter().zip(values).map(|(&bit, &value)| Literal { bit, value }).collect())
    }

    pub fn holds(&self, bits: &[bool]) -> bool {
        self.0.iter().all(|l| bits[l.bit] == l.value)
    }

    pub fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|l| l.bit)
    }

    /// A condition with contradictory literals can never fire.
    pub fn is_satisfiable(&self) -> bool {
        self.0.iter().all(|a| self.0.iter().all(|b| a.bit != b.bit || a.value == b.value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot(usize, usize),
    MeasureZ { qubit: usize, bit: usize },
    /// Sugar for `H; MeasureZ; H`.
    MeasureX { qubit: usize, bit: usize },
    Reset(usize),
    ClassicallyControlledX { qubit: usize, cond: Condition },
    ClassicallyControlledZ { qubit: usize, cond: Condition },
    /// `c[bit] ^= 1`, optionally only when `cond` holds.
    ClassicalFlip { bit: usize, cond: Option<Condition> },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Reset(q) => vec![*q],
            Gate::Cnot(c, t) => vec![*c, *t],
            Gate::MeasureZ { qubit, .. }
            | Gate::MeasureX { qubit, .. }
            | Gate::ClassicallyControlledX { qubit, .. }
            | Gate::ClassicallyControlledZ { qubit, .. } => vec![*qubit],
            Gate::ClassicalFlip { .. } => vec![],
        }
    }

    pub fn written_bit(&self) -> Option<usize> {
        match self {
            Gate::MeasureZ { bit, .. } | Gate::MeasureX { bit, .. } | Gate::ClassicalFlip { bit, .. } => Some(*bit),
            _ => None,
        }
    }

    pub fn condition(&self) -> Option<&Condition> {
        match self {
            Gate::ClassicallyControlledX { cond, .. } | Gate::ClassicallyControlledZ { cond, .. } => Some(cond),
            Gate::ClassicalFlip { cond, .. } => cond.as_ref(),
            _ => None,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasureZ { .. } | Gate::MeasureX { .. })
    }
}

/// An ordered gate list on `n` qubits and `m` classical bits.
///
/// Classical bits start at 0. A bit that some measurement writes may not be
/// read before that measurement; other bits are plain registers driven by
/// [`Gate::ClassicalFlip`] (static occupancies, for instance).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub m: usize,
    pub gates: Vec<Gate>,
    /// `(gate index, text)`: the label precedes the gate at that index.
    pub labels: Vec<(usize, String)>,
}

impl Circuit {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m, gates: Vec::new(), labels: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn label(&mut self, text: impl Into<String>) -> &mut Self {
        self.labels.push((self.gates.len(), text.into()));
        self
    }

    pub fn measurement_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_measurement()).count()
    }

    /// Concatenation; widths widen to the maximum over the parts.
    pub fn compose<'a>(parts: impl IntoIterator<Item = &'a Circuit>) -> Circuit {
        let mut out = Circuit::default();
        for p in parts {
            out.append(p);
        }
        out
    }

    pub fn append(&mut self, other: &Circuit) {
        self.n = self.n.max(other.n);
        self.m = self.m.max(other.m);
        let offset = self.gates.len();
        self.labels.extend(other.labels.iter().map(|(i, t)| (i + offset, t.clone())));
        self.gates.extend(other.gates.iter().cloned());
    }

    /// Same gates with every qubit `q` replaced by `map[q]`.
    pub fn remap_qubits(&self, map: &[usize], n: usize) -> Circuit {
        let r = |q: usize| map[q];
        let gates = self
            .gates
            .iter()
            .map(|g| match g.clone() {
                Gate::H(q) => Gate::H(r(q)),
                Gate::X(q) => Gate::X(r(q)),
                Gate::Z(q) => Gate::Z(r(q)),
                Gate::Cnot(c, t) => Gate::Cnot(r(c), r(t)),
                Gate::MeasureZ { qubit, bit } => Gate::MeasureZ { qubit: r(qubit), bit },
                Gate::MeasureX { qubit, bit } => Gate::MeasureX { qubit: r(qubit), bit },
                Gate::Reset(q) => Gate::Reset(r(q)),
                Gate::ClassicallyControlledX { qubit, cond } => Gate::ClassicallyControlledX { qubit: r(qubit), cond },
                Gate::ClassicallyControlledZ { qubit, cond } => Gate::ClassicallyControlledZ { qubit: r(qubit), cond },
                f @ Gate::ClassicalFlip { .. } => f,
            })
            .collect();
        Circuit { n, m: self.m, gates, labels: self.labels.clone() }
    }

    /// Static checks: operand ranges, distinct CNOT operands, and classical
    /// bits read only after the measurement that writes them.
    pub fn validate(&self) -> Result<()> {
        let measured: std::collections::HashSet<usize> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::MeasureZ { bit, .. } | Gate::MeasureX { bit, .. } => Some(*bit),
                _ => None,
            })
            .collect();
        let mut written = vec![false; self.m];
        for (i, g) in self.gates.iter().enumerate() {
            for q in g.qubits() {
                if q >= self.n {
                    return Err(QecError::QubitOutOfRange { qubit: q, n: self.n });
                }
            }
            if let Gate::Cnot(c, t) = g {
                if c == t {
                    return Err(QecError::DuplicateTarget(*c));
                }
            }
            if let Some(cond) = g.condition() {
                for b in cond.bits() {
                    if b >= self.m {
                        return Err(QecError::BitOutOfRange { bit: b, m: self.m });
                    }
                    if measured.contains(&b) && !written[b] {
                        return Err(QecError::ClassicalOrder { gate: i, bit: b });
                    }
                }
            }
            if let Some(b) = g.written_bit() {
                if b >= self.m {
                    return Err(QecError::BitOutOfRange { bit: b, m: self.m });
                }
                if g.is_measurement() {
                    written[b] = true;
                }
            }
        }
        Ok(())
    }
}

/// Incremental construction with classical-bit allocation.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    circuit: Circuit,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        Self { circuit: Circuit::new(n, 0) }
    }

    /// Continues an existing circuit (its bits stay allocated).
    pub fn from_circuit(circuit: Circuit) -> Self {
        Self { circuit }
    }

    pub fn alloc_bit(&mut self) -> usize {
        self.circuit.m += 1;
        self.circuit.m - 1
    }

    pub fn alloc_bits(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.alloc_bit()).collect()
    }

    pub fn label(&mut self, text: impl Into<String>) -> &mut Self {
        self.circuit.label(text);
        self
    }

    pub fn gate(&mut self, g: Gate) -> &mut Self {
        self.circuit.push(g);
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::H(q))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::X(q))
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Z(q))
    }

    pub fn cnot(&mut self, c: usize, t: usize) -> &mut Self {
        self.gate(Gate::Cnot(c, t))
    }

    pub fn reset(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::Reset(q))
    }

    pub fn measure_z(&mut self, qubit: usize) -> usize {
        let bit = self.alloc_bit();
        self.gate(Gate::MeasureZ { qubit, bit });
        bit
    }

    pub fn measure_x(&mut self, qubit: usize) -> usize {
        let bit = self.alloc_bit();
        self.gate(Gate::MeasureX { qubit, bit });
        bit
    }

    pub fn cond_x(&mut self, qubit: usize, cond: Condition) -> &mut Self {
        self.gate(Gate::ClassicallyControlledX { qubit, cond })
    }

    pub fn cond_z(&mut self, qubit: usize, cond: Condition) -> &mut Self {
        self.gate(Gate::ClassicallyControlledZ { qubit, cond })
    }

    pub fn flip(&mut self, bit: usize, cond: Option<Condition>) -> &mut Self {
        self.gate(Gate::ClassicalFlip { bit, cond })
    }

    pub fn append(&mut self, other: &Circuit) -> &mut Self {
        self.circuit.append(other);
        self
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn finish(self) -> Circuit {
        self.circuit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_with_empty() {
        let mut c = Circuit::new(2, 1);
        c.label("x").push(Gate::Cnot(0, 1));
        assert_eq!(Circuit::compose([&Circuit::default(), &c]), c);
        let double = Circuit::compose([&c, &c]);
        assert_eq!(double.labels, vec![(0, "x".to_string()), (1, "x".to_string())]);
    }

    #[test]
    fn classical_order_violation() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::ClassicallyControlledX { qubit: 0, cond: Condition::bit(0) });
        c.push(Gate::MeasureZ { qubit: 0, bit: 0 });
        assert_eq!(c.validate(), Err(QecError::ClassicalOrder { gate: 0, bit: 0 }));
    }

    #[test]
    fn register_bits_may_be_read() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::ClassicalFlip { bit: 0, cond: None });
        c.push(Gate::ClassicallyControlledX { qubit: 0, cond: Condition::bit(0) });
        assert!(c.validate().is_ok());
    }

    #[test]
    fn range_checks() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::Cnot(0, 1));
        assert!(matches!(c.validate(), Err(QecError::QubitOutOfRange { .. })));
        let mut c = Circuit::new(2, 0);
        c.push(Gate::Cnot(1, 1));
        assert_eq!(c.validate(), Err(QecError::DuplicateTarget(1)));
    }

    #[test]
    fn contradictory_condition() {
        let c = Condition(vec![Literal { bit: 0, value: true }, Literal { bit: 0, value: false }]);
        assert!(!c.is_satisfiable());
        assert!(Condition::pattern(&[0, 1], &[true, false]).holds(&[true, false]));
    }
}
