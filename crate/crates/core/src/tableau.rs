//! Gottesman-Knill stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. X and Z parts are
//! bit-packed row-major, so a single-qubit gate touches one word per row and
//! commutation checks reduce to popcounts.

use crate::engine::{Collapse, Engine, OutcomeSource};
use crate::error::{QecError, Result};
use crate::pauli::{anticommute_words, product_phase, words_for, PauliString};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl StabilizerTableau {
    /// The all-zero computational basis state.
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        let mut t = Self { n, w, xs: vec![0; 2 * n * w], zs: vec![0; 2 * n * w], signs: vec![false; 2 * n] };
        for q in 0..n {
            t.xs[q * w + q / 64] |= 1 << (q % 64);
            t.zs[(n + q) * w + q / 64] |= 1 << (q % 64);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn row_x(&self, r: usize) -> &[u64] {
        &self.xs[r * self.w..(r + 1) * self.w]
    }

    fn row_z(&self, r: usize) -> &[u64] {
        &self.zs[r * self.w..(r + 1) * self.w]
    }

    fn row(&self, r: usize) -> PauliString {
        PauliString::from_parts(self.n, self.row_x(r).to_vec(), self.row_z(r).to_vec(), if self.signs[r] { 2 } else { 0 })
    }

    fn set_row(&mut self, r: usize, p: &PauliString) {
        let w = self.w;
        self.xs[r * w..(r + 1) * w].copy_from_slice(p.x_words());
        self.zs[r * w..(r + 1) * w].copy_from_slice(p.z_words());
        self.signs[r] = p.phase() == 2;
    }

    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.row(self.n + i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        self.row(i)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    /// row[h] <- row[h] * row[i]
    fn rowmul(&mut self, h: usize, i: usize) {
        let w = self.w;
        let g = product_phase(self.row_x(h), self.row_z(h), self.row_x(i), self.row_z(i));
        let phase = (g + 2 * self.signs[h] as u8 + 2 * self.signs[i] as u8) & 3;
        // Destabilizer rows may pick up an imaginary phase; their sign is irrelevant.
        self.signs[h] = phase >= 2;
        for k in 0..w {
            self.xs[h * w + k] ^= self.xs[i * w + k];
            self.zs[h * w + k] ^= self.zs[i * w + k];
        }
    }

    fn check(&self, q: usize) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
    }

    /// Classifies the measurement of `p` without changing the state:
    /// `Some(bit)` if deterministic, `None` if random.
    pub fn peek_pauli(&self, p: &PauliString) -> Option<bool> {
        assert_eq!(p.num_qubits(), self.n);
        let n = self.n;
        if (n..2 * n).any(|r| anticommute_words(self.row_x(r), self.row_z(r), p.x_words(), p.z_words())) {
            return None;
        }
        let mut acc = PauliString::identity(n);
        for i in 0..n {
            if anticommute_words(self.row_x(i), self.row_z(i), p.x_words(), p.z_words()) {
                acc = acc.product(&self.row(n + i));
            }
        }
        Some(acc.phase() != p.phase())
    }

    /// Expectation value of a Hermitian Pauli: ±1 if determined, 0 otherwise.
    pub fn expectation(&self, p: &PauliString) -> i8 {
        match self.peek_pauli(p) {
            Some(false) => 1,
            Some(true) => -1,
            None => 0,
        }
    }

    /// Projective measurement of an arbitrary Hermitian Pauli observable.
    pub fn measure_pauli(&mut self, p: &PauliString, src: &mut dyn OutcomeSource) -> Result<bool> {
        if p.num_qubits() != self.n {
            return Err(QecError::Dimension { expected: self.n, got: p.num_qubits() });
        }
        p.sign()?;
        let n = self.n;
        let anti = |t: &Self, r: usize| anticommute_words(t.row_x(r), t.row_z(r), p.x_words(), p.z_words());
        let Some(pivot) = (n..2 * n).find(|&r| anti(self, r)) else {
            let bit = self.peek_pauli(p).expect("commutes with every stabilizer");
            return src.resolve(Collapse::Deterministic(bit));
        };
        for r in 0..2 * n {
            if r != pivot && anti(self, r) {
                self.rowmul(r, pivot);
            }
        }
        let bit = src.resolve(Collapse::Random { p_one: 0.5 })?;
        let old = self.row(pivot);
        self.set_row(pivot - n, &old);
        let new = if bit { p.negated() } else { p.clone() };
        self.set_row(pivot, &new);
        Ok(bit)
    }

    /// Verifies the symplectic structure: stabilizers commute, and stabilizer
    /// `i` anticommutes with destabilizer `j` exactly when `i == j`.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let s = n + i;
                if i != j && anticommute_words(self.row_x(s), self.row_z(s), self.row_x(n + j), self.row_z(n + j)) {
                    return Err(format!("stabilizers {i} and {j} anticommute"));
                }
                let a = anticommute_words(self.row_x(s), self.row_z(s), self.row_x(j), self.row_z(j));
                if a != (i == j) {
                    return Err(format!("stabilizer {i} / destabilizer {j} commutation is wrong"));
                }
            }
        }
        Ok(())
    }

    /// Reduced row echelon form of the stabilizer group (X block first, then Z).
    /// Two tableaux describe the same state iff their canonical forms are equal.
    pub fn canonical_stabilizers(&self) -> Vec<PauliString> {
        let n = self.n;
        let mut rows = self.stabilizers();
        let mut rank = 0;
        for pass in 0..2 {
            for q in 0..n {
                let has = |p: &PauliString| if pass == 0 { p.x_bit(q) } else { p.z_bit(q) && (0..n).all(|k| !p.x_bit(k)) };
                let Some(i) = (rank..n).find(|&i| has(&rows[i])) else { continue };
                rows.swap(rank, i);
                let piv = rows[rank].clone();
                for (j, row) in rows.iter_mut().enumerate() {
                    let bit = if pass == 0 { row.x_bit(q) } else { row.z_bit(q) };
                    if j != rank && bit {
                        *row = row.product(&piv);
                    }
                }
                rank += 1;
            }
        }
        rows
    }

    pub fn same_state(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_stabilizers() == other.canonical_stabilizers()
    }

    /// Whether the state is a +1 eigenstate of every listed operator.
    pub fn stabilized_by(&self, ops: &[PauliString]) -> bool {
        ops.iter().all(|p| self.expectation(p) == 1)
    }
}

impl Engine for StabilizerTableau {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn h(&mut self, q: usize) {
        self.check(q);
        let (wd, m) = (q / 64, 1u64 << (q % 64));
        for r in 0..2 * self.n {
            let i = r * self.w + wd;
            let (x, z) = (self.xs[i] & m, self.zs[i] & m);
            if x != 0 && z != 0 {
                self.signs[r] ^= true;
            }
            self.xs[i] = (self.xs[i] & !m) | z;
            self.zs[i] = (self.zs[i] & !m) | x;
        }
    }

    fn x(&mut self, q: usize) {
        self.check(q);
        let (wd, m) = (q / 64, 1u64 << (q % 64));
        for r in 0..2 * self.n {
            if self.zs[r * self.w + wd] & m != 0 {
                self.signs[r] ^= true;
            }
        }
    }

    fn z(&mut self, q: usize) {
        self.check(q);
        let (wd, m) = (q / 64, 1u64 << (q % 64));
        for r in 0..2 * self.n {
            if self.xs[r * self.w + wd] & m != 0 {
                self.signs[r] ^= true;
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        self.check(c);
        self.check(t);
        assert_ne!(c, t, "CNOT control and target must differ");
        let (wc, mc, sc) = (c / 64, 1u64 << (c % 64), c % 64);
        let (wt, mt, st) = (t / 64, 1u64 << (t % 64), t % 64);
        for r in 0..2 * self.n {
            let base = r * self.w;
            let xc = (self.xs[base + wc] >> sc) & 1;
            let zc = (self.zs[base + wc] >> sc) & 1;
            let xt = (self.xs[base + wt] >> st) & 1;
            let zt = (self.zs[base + wt] >> st) & 1;
            if xc & zt & (xt ^ zc ^ 1) == 1 {
                self.signs[r] ^= true;
            }
            if xc == 1 {
                self.xs[base + wt] ^= mt;
            }
            if zt == 1 {
                self.zs[base + wc] ^= mc;
            }
        }
    }

    fn measure_z(&mut self, q: usize, src: &mut dyn OutcomeSource) -> Result<bool> {
        if q >= self.n {
            return Err(QecError::QubitOutOfRange { qubit: q, n: self.n });
        }
        let zq = PauliString::z_on(self.n, [q]);
        self.measure_pauli(&zq, src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SeededOutcomes;
    use crate::pauli::Pauli;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_then_x_measurement() {
        let mut t = StabilizerTableau::new(1);
        t.h(0);
        assert_eq!(t.peek_pauli(&ps("X")), Some(false));
        let mut src = SeededOutcomes::new(1);
        assert!(!t.measure_pauli(&ps("X"), &mut src).unwrap());
        assert_eq!(src.draws(), 0);
    }

    #[test]
    fn cnot_propagation() {
        let mut t = StabilizerTableau::new(2);
        t.cnot(0, 1);
        let canon = t.canonical_stabilizers();
        let mut expect = StabilizerTableau::new(2);
        expect.set_row(2, &ps("Z_"));
        expect.set_row(3, &ps("ZZ"));
        assert_eq!(canon, expect.canonical_stabilizers());
        assert!(t.stabilized_by(&[ps("Z_"), ps("ZZ")]));
    }

    #[test]
    fn zero_state_parity_is_deterministic() {
        let mut t = StabilizerTableau::new(3);
        let mut src = SeededOutcomes::new(0);
        assert!(!t.measure_pauli(&ps("_ZZ"), &mut src).unwrap());
        assert_eq!(src.draws(), 0);
    }

    #[test]
    fn ghz_with_bit_flip() {
        // (|000> + |111>)/sqrt2 with X on qubit 2 (1-based) gives (-1, -1).
        let mut t = StabilizerTableau::new(3);
        t.h(0);
        t.cnot(0, 1);
        t.cnot(0, 2);
        t.x(1);
        let mut src = SeededOutcomes::new(0);
        assert!(t.measure_pauli(&ps("ZZ_"), &mut src).unwrap());
        assert!(t.measure_pauli(&ps("_ZZ"), &mut src).unwrap());
        t.validate().unwrap();
    }

    #[test]
    fn random_measurement_updates_state() {
        let mut t = StabilizerTableau::new(2);
        t.h(0);
        let mut src = SeededOutcomes::new(11);
        let b = t.measure_pauli(&ps("ZZ"), &mut src).unwrap();
        assert_eq!(src.draws(), 1);
        t.validate().unwrap();
        // repeated measurement is deterministic and idempotent
        assert_eq!(t.peek_pauli(&ps("ZZ")), Some(b));
        let before = t.clone();
        assert_eq!(t.measure_pauli(&ps("ZZ"), &mut src).unwrap(), b);
        assert!(t.same_state(&before));
    }

    #[test]
    fn sign_tracking_through_gates() {
        let mut t = StabilizerTableau::new(2);
        t.x(0);
        t.h(0);
        assert_eq!(t.expectation(&ps("X_")), -1);
        t.cnot(0, 1);
        assert_eq!(t.expectation(&ps("XX")), -1);
        let _ = Pauli::I;
    }

    #[test]
    fn out_of_range_measurement() {
        let mut t = StabilizerTableau::new(2);
        let mut src = SeededOutcomes::new(0);
        assert!(matches!(t.measure_z(5, &mut src), Err(QecError::QubitOutOfRange { .. })));
    }
}
