use super::{Circuit, Gate};
use crate::dense::{DenseState, MAX_DENSE_QUBITS};
use crate::engine::{Engine, ForcedOutcomes, OutcomeSource, SeededOutcomes};
use crate::error::Result;
use crate::tableau::StabilizerTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Tableau,
    Dense,
}

impl EngineKind {
    /// Dense when it fits, tableau otherwise.
    pub fn auto(n: usize) -> Self {
        if n <= MAX_DENSE_QUBITS {
            EngineKind::Dense
        } else {
            EngineKind::Tableau
        }
    }
}

/// Classical side effects of one execution.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExecutionRecord {
    /// Final classical register.
    pub bits: Vec<bool>,
    /// One entry per measurement gate, in order.
    pub outcomes: Vec<bool>,
    /// Every collapse outcome including those inside resets.
    pub trace: Vec<bool>,
}

#[derive(Clone, Debug)]
pub enum RunOutput {
    Tableau(StabilizerTableau),
    Dense(DenseState),
}

/// Runs `circuit` on `engine`, which must already hold `circuit.n` qubits.
pub fn execute<E: Engine + ?Sized>(
    circuit: &Circuit,
    engine: &mut E,
    src: &mut dyn OutcomeSource,
) -> Result<ExecutionRecord> {
    circuit.validate()?;
    let mut rec = ExecutionRecord { bits: vec![false; circuit.m], ..Default::default() };
    let mut tracer = Tracer { inner: src, trace: &mut rec.trace };
    for g in &circuit.gates {
        match g {
            Gate::H(q) => engine.h(*q),
            Gate::X(q) => engine.x(*q),
            Gate::Z(q) => engine.z(*q),
            Gate::Cnot(c, t) => engine.cnot(*c, *t),
            Gate::MeasureZ { qubit, bit } => {
                let b = engine.measure_z(*qubit, &mut tracer)?;
                rec.bits[*bit] = b;
                rec.outcomes.push(b);
            }
            Gate::MeasureX { qubit, bit } => {
                engine.h(*qubit);
                let b = engine.measure_z(*qubit, &mut tracer)?;
                engine.h(*qubit);
                rec.bits[*bit] = b;
                rec.outcomes.push(b);
            }
            Gate::Reset(q) => engine.reset(*q, &mut tracer)?,
            Gate::ClassicallyControlledX { qubit, cond } => {
                if cond.holds(&rec.bits) {
                    engine.x(*qubit);
                }
            }
            Gate::ClassicallyControlledZ { qubit, cond } => {
                if cond.holds(&rec.bits) {
                    engine.z(*qubit);
                }
            }
            Gate::ClassicalFlip { bit, cond } => {
                if cond.as_ref().map_or(true, |c| c.holds(&rec.bits)) {
                    rec.bits[*bit] ^= true;
                }
            }
        }
    }
    Ok(rec)
}

struct Tracer<'a> {
    inner: &'a mut dyn OutcomeSource,
    trace: &'a mut Vec<bool>,
}

impl OutcomeSource for Tracer<'_> {
    fn resolve(&mut self, collapse: crate::engine::Collapse) -> Result<bool> {
        let b = self.inner.resolve(collapse)?;
        self.trace.push(b);
        Ok(b)
    }
}

pub fn run_tableau(circuit: &Circuit, seed: u64) -> Result<(StabilizerTableau, ExecutionRecord)> {
    let mut t = StabilizerTableau::new(circuit.n);
    let rec = execute(circuit, &mut t, &mut SeededOutcomes::new(seed))?;
    Ok((t, rec))
}

pub fn run_dense(circuit: &Circuit, seed: u64) -> Result<(DenseState, ExecutionRecord)> {
    let mut d = DenseState::zero(circuit.n)?;
    let rec = execute(circuit, &mut d, &mut SeededOutcomes::new(seed))?;
    Ok((d, rec))
}

/// Replays `trace` on the dense engine; also returns each branch probability.
pub fn run_dense_forced(circuit: &Circuit, trace: &[bool]) -> Result<(DenseState, ExecutionRecord, Vec<f64>)> {
    let mut d = DenseState::zero(circuit.n)?;
    let mut src = ForcedOutcomes::new(trace.to_vec());
    let rec = execute(circuit, &mut d, &mut src)?;
    Ok((d, rec, src.probabilities().to_vec()))
}

pub fn run(circuit: &Circuit, kind: EngineKind, seed: u64) -> Result<(RunOutput, ExecutionRecord)> {
    Ok(match kind {
        EngineKind::Tableau => {
            let (t, r) = run_tableau(circuit, seed)?;
            (RunOutput::Tableau(t), r)
        }
        EngineKind::Dense => {
            let (d, r) = run_dense(circuit, seed)?;
            (RunOutput::Dense(d), r)
        }
    })
}
