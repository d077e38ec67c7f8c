//! Circuits annotated with the detectors that read their syndromes.

use crate::circuit::{Circuit, Condition};

/// A decoded location tied to the classical condition that reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detector<L> {
    pub cond: Condition,
    pub location: L,
}

/// A circuit plus the detectors and flag bits it defines.
#[derive(Clone, Debug, Default)]
pub struct Round<L> {
    pub circuit: Circuit,
    pub detectors: Vec<Detector<L>>,
    pub flags: Vec<usize>,
}

impl<L: Clone> Round<L> {
    /// Locations whose detector fired on the final classical register.
    pub fn decoded(&self, bits: &[bool]) -> Vec<L> {
        self.detectors.iter().filter(|d| d.cond.holds(bits)).map(|d| d.location.clone()).collect()
    }

    pub fn flagged(&self, bits: &[bool]) -> bool {
        self.flags.iter().any(|&f| bits[f])
    }
}
