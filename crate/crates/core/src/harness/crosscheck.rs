//! Random Clifford circuits run on both engines.
//!
//! The tableau run fixes every random collapse; the dense engine replays
//! the same branch and must agree on probabilities, classical bits and the
//! final stabilizers.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{execute, run_dense_forced, Circuit, CircuitBuilder, Condition};
use crate::engine::SeededOutcomes;
use crate::error::Result;
use crate::rng::SplitMix64;
use crate::tableau::StabilizerTableau;

pub const MAX_QUBITS: usize = 10;
const TOL: f64 = 1e-9;

/// A random circuit on at most [`MAX_QUBITS`] qubits drawing from every
/// gate kind, classically controlled ones included.
pub fn random_clifford(rng: &mut SplitMix64) -> Circuit {
    let n = 1 + rng.below(MAX_QUBITS as u64) as usize;
    let len = 5 + rng.below(60) as usize;
    let mut b = CircuitBuilder::new(n);
    let mut bits: Vec<usize> = Vec::new();
    let q = |rng: &mut SplitMix64| rng.below(n as u64) as usize;
    for _ in 0..len {
        match rng.below(10) {
            0 | 1 => {
                b.h(q(rng));
            }
            2 => {
                b.x(q(rng));
            }
            3 => {
                b.z(q(rng));
            }
            4 | 5 if n > 1 => {
                let c = q(rng);
                let t = (c + 1 + rng.below(n as u64 - 1) as usize) % n;
                b.cnot(c, t);
            }
            6 => bits.push(b.measure_z(q(rng))),
            7 => bits.push(b.measure_x(q(rng))),
            8 => {
                b.reset(q(rng));
            }
            9 if !bits.is_empty() => {
                let bit = bits[rng.below(bits.len() as u64) as usize];
                let cond = Condition::pattern(&[bit], &[rng.next_bool()]);
                match rng.below(3) {
                    0 => b.cond_x(q(rng), cond),
                    1 => b.cond_z(q(rng), cond),
                    _ => b.flip(bit, Some(cond)),
                };
            }
            _ => {
                b.h(q(rng));
            }
        }
    }
    b.finish()
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossRow {
    pub index: u64,
    pub qubits: usize,
    pub gates: usize,
    pub random_collapses: usize,
    pub probabilities_match: bool,
    pub records_match: bool,
    pub stabilizers_match: bool,
}

impl CrossRow {
    pub fn agrees(&self) -> bool {
        self.probabilities_match && self.records_match && self.stabilizers_match
    }
}

pub fn check_circuit(c: &Circuit, seed: u64, index: u64) -> Result<CrossRow> {
    let mut t = StabilizerTableau::new(c.n);
    let mut src = SeededOutcomes::new(seed);
    let rec = execute(c, &mut t, &mut src)?;
    let (dense, drec, probs) = run_dense_forced(c, src.trace())?;
    let probabilities_match = probs.len() == src.random_mask().len()
        && probs.iter().zip(src.random_mask()).all(|(&p, &r)| (p - if r { 0.5 } else { 1.0 }).abs() < TOL);
    let records_match = rec.bits == drec.bits && rec.outcomes == drec.outcomes && rec.trace == drec.trace;
    let stabilizers_match = t.stabilizers().iter().all(|s| (dense.expectation(s) - 1.0).abs() < TOL);
    Ok(CrossRow {
        index,
        qubits: c.n,
        gates: c.len(),
        random_collapses: src.random_mask().iter().filter(|&&r| r).count(),
        probabilities_match,
        records_match,
        stabilizers_match,
    })
}

/// `count` circuits, circuit `i` drawn from substream `i` of `seed`.
pub fn crosscheck(count: u64, seed: u64) -> Result<Vec<CrossRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::substream(seed, i);
            let c = random_clifford(&mut rng);
            check_circuit(&c, rng.next_u64(), i)
        })
        .collect()
}
