//! Exhaustive fault sweeps against a clean reference run.

use rayon::prelude::*;
use serde::Serialize;

use super::{FaultPauli, FaultSpec, Location, Protocol};
use crate::circuit::{execute, EngineKind};
use crate::dense::{fidelity, DenseState};
use crate::engine::{Engine, SeededOutcomes};
use crate::error::Result;
use crate::tableau::StabilizerTableau;

/// Fidelity tolerance for the dense comparison.
pub const FIDELITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// Logical X (XXX) on each data register.
    LogicalData,
    /// Every X, Y, Z on every data qubit.
    PhysicalData,
    /// Logical X on every pair of data registers. Reported, not required.
    LogicalPairs,
}

/// One injected configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaultCase {
    pub label: String,
    pub faults: Vec<FaultSpec>,
    pub expected: Vec<Location>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub case: FaultCase,
    pub decoded: Vec<Location>,
    pub flagged: bool,
    pub recovered: bool,
    /// Present when the dense engine was used.
    pub fidelity: Option<f64>,
}

impl SweepRow {
    pub fn located(&self) -> bool {
        sorted(&self.decoded) == sorted(&self.case.expected)
    }

    pub fn passed(&self) -> bool {
        self.located() && self.recovered
    }
}

fn sorted(v: &[Location]) -> Vec<Location> {
    let mut v = v.to_vec();
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub scheme: String,
    pub dims: Vec<usize>,
    pub domain: Domain,
    pub engine: EngineKind,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn failures(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| !r.passed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(SweepRow::passed)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {:?} {:?}: {}/{} corrected",
            self.scheme,
            self.dims,
            self.domain,
            self.rows.len() - self.failures().len(),
            self.rows.len()
        )
    }
}

fn logical_x(p: &Protocol, i: usize) -> Vec<FaultSpec> {
    let pos = p.fault_position();
    p.data[i].block.qubits().into_iter().map(|qubit| FaultSpec { qubit, pauli: FaultPauli::X, position: pos }).collect()
}

/// The fault configurations of `domain`.
pub fn cases(p: &Protocol, domain: Domain) -> Vec<FaultCase> {
    let pos = p.fault_position();
    match domain {
        Domain::LogicalData => (0..p.data.len())
            .map(|i| FaultCase { label: format!("XL({})", p.data[i].label), faults: logical_x(p, i), expected: vec![p.data[i].location] })
            .collect(),
        Domain::PhysicalData => p
            .data
            .iter()
            .flat_map(|d| {
                d.block.qubits().into_iter().flat_map(move |qubit| {
                    FaultPauli::ALL.into_iter().map(move |pauli| FaultCase {
                        label: format!("{pauli:?}(q{qubit} in {})", d.label),
                        faults: vec![FaultSpec { qubit, pauli, position: pos }],
                        expected: if pauli.has_x() { vec![d.location] } else { vec![] },
                    })
                })
            })
            .collect(),
        Domain::LogicalPairs => {
            let mut out = Vec::new();
            for i in 0..p.data.len() {
                for j in i + 1..p.data.len() {
                    let mut faults = logical_x(p, i);
                    faults.extend(logical_x(p, j));
                    out.push(FaultCase {
                        label: format!("XL({})XL({})", p.data[i].label, p.data[j].label),
                        faults,
                        expected: vec![p.data[i].location, p.data[j].location],
                    });
                }
            }
            out
        }
    }
}

fn apply<E: Engine + ?Sized>(e: &mut E, faults: &[FaultSpec]) {
    for f in faults {
        if f.pauli.has_x() {
            e.x(f.qubit);
        }
        if f.pauli.has_z() {
            e.z(f.qubit);
        }
    }
}

pub(crate) enum Prepared {
    Dense(DenseState),
    Tableau(StabilizerTableau),
}

pub(crate) struct Outcome {
    pub bits: Vec<bool>,
    pub state: Prepared,
}

pub(crate) fn run_case(p: &Protocol, start: &Prepared, faults: &[FaultSpec], seed: u64) -> Result<Outcome> {
    let mut src = SeededOutcomes::new(seed);
    Ok(match start {
        Prepared::Dense(s) => {
            let mut s = s.clone();
            apply(&mut s, faults);
            let rec = execute(&p.cycle.circuit, &mut s, &mut src)?;
            Outcome { bits: rec.bits, state: Prepared::Dense(s) }
        }
        Prepared::Tableau(t) => {
            let mut t = t.clone();
            apply(&mut t, faults);
            let rec = execute(&p.cycle.circuit, &mut t, &mut src)?;
            Outcome { bits: rec.bits, state: Prepared::Tableau(t) }
        }
    })
}

pub(crate) fn prepare(p: &Protocol, engine: EngineKind, seed: u64) -> Result<Prepared> {
    let mut src = SeededOutcomes::new(seed);
    let mut prep = p.prep.clone();
    prep.n = p.num_qubits();
    Ok(match engine {
        EngineKind::Dense => {
            let mut s = DenseState::zero(prep.n)?;
            execute(&prep, &mut s, &mut src)?;
            Prepared::Dense(s)
        }
        EngineKind::Tableau => {
            let mut t = StabilizerTableau::new(prep.n);
            execute(&prep, &mut t, &mut src)?;
            Prepared::Tableau(t)
        }
    })
}

/// Runs every case of `domain`; the final state of each faulty run is
/// compared with the clean run.
pub fn sweep(p: &Protocol, domain: Domain, engine: Option<EngineKind>, seed: u64) -> Result<SweepReport> {
    let engine = engine.unwrap_or_else(|| EngineKind::auto(p.num_qubits()));
    let start = prepare(p, engine, seed)?;
    let clean = run_case(p, &start, &[], seed)?;
    let rows = cases(p, domain)
        .into_par_iter()
        .map(|case| {
            let out = run_case(p, &start, &case.faults, seed)?;
            let (recovered, fid) = match (&out.state, &clean.state) {
                (Prepared::Dense(a), Prepared::Dense(b)) => {
                    let f = fidelity(a, b)?;
                    (f >= 1.0 - FIDELITY_TOL, Some(f))
                }
                (Prepared::Tableau(a), Prepared::Tableau(b)) => (a.same_state(b), None),
                _ => unreachable!(),
            };
            Ok(SweepRow {
                decoded: p.cycle.decoded(&out.bits),
                flagged: p.cycle.flagged(&out.bits),
                recovered,
                fidelity: fid,
                case,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { scheme: p.scheme.to_string(), dims: p.dims.clone(), domain, engine, rows })
}

/// Whether a clean cycle leaves the prepared state untouched and decodes
/// nothing.
pub fn clean_cycle_is_trivial(p: &Protocol, engine: Option<EngineKind>, seed: u64) -> Result<bool> {
    let engine = engine.unwrap_or_else(|| EngineKind::auto(p.num_qubits()));
    let start = prepare(p, engine, seed)?;
    let out = run_case(p, &start, &[], seed)?;
    let same = match (&out.state, &start) {
        (Prepared::Dense(a), Prepared::Dense(b)) => fidelity(a, b)? >= 1.0 - FIDELITY_TOL,
        (Prepared::Tableau(a), Prepared::Tableau(b)) => a.same_state(b),
        _ => unreachable!(),
    };
    Ok(same && p.cycle.decoded(&out.bits).is_empty() && !p.cycle.flagged(&out.bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Dimension, Matter, SchemeId, Variant};

    #[test]
    fn dynamical_doubled_n1_logical_sweep() {
        let p = Protocol::build(SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Doubled), &[1]).unwrap();
        assert!(clean_cycle_is_trivial(&p, None, 1).unwrap());
        let r = sweep(&p, Domain::LogicalData, Some(EngineKind::Tableau), 1).unwrap();
        assert!(r.all_passed(), "{:#?}", r.failures());
    }

    #[test]
    fn engines_agree_on_pure_gauge() {
        let p = Protocol::build(SchemeId::new(Dimension::One, Matter::Pure, Variant::Doubled), &[1]).unwrap();
        let a = sweep(&p, Domain::PhysicalData, Some(EngineKind::Tableau), 5).unwrap();
        let b = sweep(&p, Domain::PhysicalData, Some(EngineKind::Dense), 5).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.decoded, y.decoded);
            assert_eq!(x.recovered, y.recovered);
        }
        assert!(a.all_passed());
    }
}
