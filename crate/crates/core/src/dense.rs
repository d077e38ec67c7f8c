//! Exact statevector simulation, used as an independent oracle for the
//! tableau engine on small registers. Qubit `q` is bit `q` of the basis index.

use num_complex::Complex64;

use crate::engine::{Collapse, Engine, OutcomeSource, BRANCH_EPS};
use crate::error::{QecError, Result};
use crate::pauli::{Pauli, PauliString};

pub const MAX_DENSE_QUBITS: usize = 20;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(QecError::EngineLimit { n, max: MAX_DENSE_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Arbitrary state from amplitudes (normalized on construction).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(QecError::Dimension { expected: 1 << n, got: amps.len() });
        }
        if n > MAX_DENSE_QUBITS {
            return Err(QecError::EngineLimit { n, max: MAX_DENSE_QUBITS });
        }
        let mut s = Self { n, amps };
        s.normalize();
        Ok(s)
    }

    /// Single-qubit state `a|0> + b|1>` embedded at qubit 0 of an `n`-qubit
    /// register whose other qubits are `|0>`.
    pub fn with_payload(n: usize, a: Complex64, b: Complex64) -> Result<Self> {
        let mut s = Self::zero(n)?;
        s.amps[0] = a;
        s.amps[1] = b;
        s.normalize();
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        for a in &mut self.amps {
            *a /= norm;
        }
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Probability that measuring `q` yields 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let m = 1usize << q;
        self.amps.iter().enumerate().filter(|(i, _)| i & m != 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Applies a Pauli operator (including its sign) to the state.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.num_qubits(), self.n);
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        let mut ycount = 0u32;
        for q in 0..self.n {
            match p.get(q) {
                Pauli::I => {}
                Pauli::X => xmask |= 1 << q,
                Pauli::Z => zmask |= 1 << q,
                Pauli::Y => {
                    xmask |= 1 << q;
                    zmask |= 1 << q;
                    ycount += 1;
                }
            }
        }
        // Y = i X Z, so the operator is i^ycount * X^xmask Z^zmask (times sign).
        let phase = Complex64::new(0.0, 1.0).powu(ycount) * if p.is_negative() { -1.0 } else { 1.0 };
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let s = if (i & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[i ^ xmask] = a * s * phase;
        }
        self.amps = out;
    }

    /// `<psi|P|psi>` (real for Hermitian `P`).
    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut moved = self.clone();
        moved.apply_pauli(p);
        self.inner(&moved).re
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(format!("squared norm {n} differs from 1"));
        }
        Ok(())
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64> {
    if a.n != b.n {
        return Err(QecError::Dimension { expected: a.n, got: b.n });
    }
    Ok(a.inner(b).norm_sqr().min(1.0))
}

impl Engine for DenseState {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn h(&mut self, q: usize) {
        let m = 1usize << q;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a, b) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = (a + b) * r;
                self.amps[i | m] = (a - b) * r;
            }
        }
    }

    fn x(&mut self, q: usize) {
        let m = 1usize << q;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
    }

    fn z(&mut self, q: usize) {
        let m = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *a = -*a;
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        assert_ne!(c, t, "CNOT control and target must differ");
        let (mc, mt) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
    }

    fn measure_z(&mut self, q: usize, src: &mut dyn OutcomeSource) -> Result<bool> {
        if q >= self.n {
            return Err(QecError::QubitOutOfRange { qubit: q, n: self.n });
        }
        let p1 = self.prob_one(q);
        let collapse = if p1 < BRANCH_EPS {
            Collapse::Deterministic(false)
        } else if p1 > 1.0 - BRANCH_EPS {
            Collapse::Deterministic(true)
        } else {
            Collapse::Random { p_one: p1 }
        };
        let bit = src.resolve(collapse)?;
        let m = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & m != 0) != bit {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        self.normalize();
        Ok(bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{ForcedOutcomes, SeededOutcomes};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fidelity_basics() {
        let zero = DenseState::zero(1).unwrap();
        let mut one = zero.clone();
        one.x(0);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-15);
        assert!(fidelity(&zero, &DenseState::zero(2).unwrap()).is_err());
    }

    #[test]
    fn limit_enforced() {
        assert!(matches!(DenseState::zero(21), Err(QecError::EngineLimit { .. })));
        assert!(DenseState::zero(20).is_ok());
    }

    #[test]
    fn two_by_two_anticommutation_oracle() {
        // (Z0 Z1) X0 = - X0 (Z0 Z1) checked on explicit matrices via a state
        let mut s = DenseState::from_amplitudes(vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        s.h(1);
        let zz: PauliString = "ZZ".parse().unwrap();
        let x0: PauliString = "X_".parse().unwrap();
        let mut a = s.clone();
        a.apply_pauli(&x0);
        a.apply_pauli(&zz);
        let mut b = s.clone();
        b.apply_pauli(&zz);
        b.apply_pauli(&x0);
        let overlap = a.inner(&b).re;
        assert!((overlap + 1.0).abs() < 1e-12, "ZZ and X0 should anticommute");
    }

    #[test]
    fn y_matches_ixz() {
        let s = DenseState::from_amplitudes(vec![c(0.6), c(0.8)]).unwrap();
        let mut y = s.clone();
        y.apply_pauli(&"Y".parse().unwrap());
        let mut xz = s.clone();
        xz.z(0);
        xz.x(0);
        let i = Complex64::new(0.0, 1.0);
        for k in 0..2 {
            assert!((y.amplitude(k) - i * xz.amplitude(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn forced_infeasible_branch() {
        let mut s = DenseState::zero(1).unwrap();
        let mut src = ForcedOutcomes::new(vec![true]);
        assert!(matches!(s.measure_z(0, &mut src), Err(QecError::InfeasibleBranch { .. })));
    }

    #[test]
    fn measurement_collapses() {
        let mut s = DenseState::zero(2).unwrap();
        s.h(0);
        s.cnot(0, 1);
        let mut src = SeededOutcomes::new(5);
        let b = s.measure_z(0, &mut src).unwrap();
        assert_eq!(s.prob_one(1) > 0.5, b);
        s.validate().unwrap();
    }
}
