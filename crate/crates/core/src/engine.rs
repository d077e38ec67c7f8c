//! The interface shared by the stabilizer tableau and the dense statevector.

use crate::error::{QecError, Result};
use crate::rng::SplitMix64;

/// What an engine knows about a Z measurement before it collapses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Collapse {
    Deterministic(bool),
    /// Both outcomes possible; `p_one` is the probability of reading 1.
    Random { p_one: f64 },
}

/// Decides measurement outcomes. `true` means outcome bit 1 (eigenvalue -1).
pub trait OutcomeSource {
    fn resolve(&mut self, collapse: Collapse) -> Result<bool>;
}

/// One draw from the seeded generator per random collapse, in circuit order.
#[derive(Clone, Debug)]
pub struct SeededOutcomes {
    rng: SplitMix64,
    trace: Vec<bool>,
    random: Vec<bool>,
}

impl SeededOutcomes {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::new(seed), trace: Vec::new(), random: Vec::new() }
    }

    /// Every collapse outcome in order (measurements and resets).
    pub fn trace(&self) -> &[bool] {
        &self.trace
    }

    /// For each collapse, whether it was random.
    pub fn random_mask(&self) -> &[bool] {
        &self.random
    }

    pub fn draws(&self) -> u64 {
        self.rng.draws()
    }
}

impl OutcomeSource for SeededOutcomes {
    fn resolve(&mut self, collapse: Collapse) -> Result<bool> {
        let (bit, random) = match collapse {
            Collapse::Deterministic(b) => (b, false),
            Collapse::Random { .. } => (self.rng.next_bool(), true),
        };
        self.trace.push(bit);
        self.random.push(random);
        Ok(bit)
    }
}

/// Replays a recorded collapse trace, post-selecting each branch.
#[derive(Clone, Debug)]
pub struct ForcedOutcomes {
    forced: Vec<bool>,
    next: usize,
    probabilities: Vec<f64>,
}

/// Probabilities below this are treated as an impossible branch.
pub const BRANCH_EPS: f64 = 1e-12;

impl ForcedOutcomes {
    pub fn new(forced: Vec<bool>) -> Self {
        Self { forced, next: 0, probabilities: Vec::new() }
    }

    /// Probability of each forced branch, in order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn consumed(&self) -> usize {
        self.next
    }
}

impl OutcomeSource for ForcedOutcomes {
    fn resolve(&mut self, collapse: Collapse) -> Result<bool> {
        let index = self.next;
        let bit = *self.forced.get(index).ok_or(QecError::ForcedExhausted(index))?;
        let p = match collapse {
            Collapse::Deterministic(b) => {
                if b == bit {
                    1.0
                } else {
                    0.0
                }
            }
            Collapse::Random { p_one } => {
                if bit {
                    p_one
                } else {
                    1.0 - p_one
                }
            }
        };
        if p < BRANCH_EPS {
            return Err(QecError::InfeasibleBranch { index, outcome: bit });
        }
        self.next += 1;
        self.probabilities.push(p);
        Ok(bit)
    }
}

pub trait Engine {
    fn num_qubits(&self) -> usize;
    fn h(&mut self, q: usize);
    fn x(&mut self, q: usize);
    fn z(&mut self, q: usize);
    fn cnot(&mut self, control: usize, target: usize);
    /// Projective Z measurement; returns the outcome bit.
    fn measure_z(&mut self, q: usize, src: &mut dyn OutcomeSource) -> Result<bool>;

    fn reset(&mut self, q: usize, src: &mut dyn OutcomeSource) -> Result<()> {
        if self.measure_z(q, src)? {
            self.x(q);
        }
        Ok(())
    }
}
