//! Pauli operators in symplectic form, packed 64 qubits per word.

use std::fmt;

use crate::error::{QecError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Exponent (mod 4) of `i` picked up when multiplying the packed Paulis
/// `(x1, z1) * (x2, z2)` word by word, each factor taken in Hermitian form.
#[inline]
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut pos = 0u32;
    let mut neg = 0u32;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        // Y*Z, X*Y, Z*X contribute +i; Y*X, X*Z, Z*Y contribute -i.
        let p = (a & b & d & !c) | (a & !b & c & d) | (!a & b & c & !d);
        let m = (a & b & c & !d) | (a & !b & !c & d) | (!a & b & c & d);
        pos += p.count_ones();
        neg += m.count_ones();
    }
    ((pos as i64 - neg as i64).rem_euclid(4)) as u8
}

#[inline]
pub(crate) fn anticommute_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u64;
    for w in 0..x1.len() {
        acc ^= (x1[w] & z2[w]) ^ (z1[w] & x2[w]);
    }
    acc.count_ones() & 1 == 1
}

/// An `n`-qubit Pauli operator `i^phase * P_0 ⊗ ... ⊗ P_{n-1}`.
///
/// Every operator the schemes measure or inject is Hermitian, so the public
/// surface exposes a ±1 sign; the quarter phase is kept internally so that
/// intermediate products stay exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self { n, xs: vec![0; w], zs: vec![0; w], phase: 0 }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(qubit, p);
        s
    }

    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in terms {
            s.set(q, p);
        }
        s
    }

    /// Tensor product of `Z` on every listed qubit.
    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(n);
        for q in qubits {
            s.set(q, Pauli::Z);
        }
        s
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(n);
        for q in qubits {
            s.set(q, Pauli::X);
        }
        s
    }

    pub(crate) fn from_parts(n: usize, xs: Vec<u64>, zs: Vec<u64>, phase: u8) -> Self {
        Self { n, xs, zs, phase: phase & 3 }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub(crate) fn x_words(&self) -> &[u64] {
        &self.xs
    }

    pub(crate) fn z_words(&self) -> &[u64] {
        &self.zs
    }

    pub(crate) fn phase(&self) -> u8 {
        self.phase
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.xs[w] >> b) & 1 == 1, (self.zs[w] >> b) & 1 == 1)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.xs[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.zs[q / 64] >> (q % 64)) & 1 == 1
    }

    /// Overwrites the factor on `q`; the sign is left unchanged.
    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        let (x, z) = p.bits();
        self.xs[w] = (self.xs[w] & !(1 << b)) | ((x as u64) << b);
        self.zs[w] = (self.zs[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn weight(&self) -> usize {
        self.xs.iter().zip(&self.zs).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    /// `+1` or `-1`; errors if the operator carries an imaginary phase.
    pub fn sign(&self) -> Result<i8> {
        match self.phase {
            0 => Ok(1),
            2 => Ok(-1),
            _ => Err(QecError::NonHermitian),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    pub fn negated(&self) -> Self {
        let mut s = self.clone();
        s.phase = (s.phase + 2) & 3;
        s
    }

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.phase = if negative { 2 } else { 0 };
        self
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        !anticommute_words(&self.xs, &self.zs, &other.xs, &other.zs)
    }

    /// Full product `self * other` keeping the quarter phase.
    pub(crate) fn product(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let g = product_phase(&self.xs, &self.zs, &other.xs, &other.zs);
        let xs = self.xs.iter().zip(&other.xs).map(|(a, b)| a ^ b).collect();
        let zs = self.zs.iter().zip(&other.zs).map(|(a, b)| a ^ b).collect();
        Self { n: self.n, xs, zs, phase: (self.phase + other.phase + g) & 3 }
    }

    /// `self * other`, required to be Hermitian (real sign).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(QecError::Dimension { expected: self.n, got: other.n });
        }
        let p = self.product(other);
        p.sign()?;
        Ok(p)
    }

    /// Restriction to the listed qubits, in order (sign kept).
    pub fn restrict(&self, qubits: &[usize]) -> Self {
        let mut s = Self::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            s.set(i, self.get(q));
        }
        s.phase = self.phase;
        s
    }

    /// Same operator embedded into a larger register.
    pub fn widen(&self, n: usize) -> Self {
        assert!(n >= self.n);
        let mut s = Self::identity(n);
        for q in 0..self.n {
            s.set(q, self.get(q));
        }
        s.phase = self.phase;
        s
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            let c = match self.get(q) {
                Pauli::I => '_',
                p => p.symbol(),
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl std::str::FromStr for PauliString {
    type Err = QecError;

    /// Parses `+XZ_Y`, `-ZZI` style strings (`_` and `I` both mean identity).
    fn from_str(s: &str) -> Result<Self> {
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut p = Self::identity(body.chars().count());
        for (q, c) in body.chars().enumerate() {
            let pauli = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(QecError::Parse { line: 0, msg: format!("bad Pauli symbol {c:?}") }),
            };
            p.set(q, pauli);
        }
        Ok(p.with_sign(neg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn involution() {
        let x0 = PauliString::single(3, 0, Pauli::X);
        let id = x0.compose(&x0).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.sign().unwrap(), 1);
    }

    #[test]
    fn z_type_product() {
        let p = ps("ZZ_").compose(&ps("_ZZ")).unwrap();
        assert_eq!(p, ps("Z_Z"));
    }

    #[test]
    fn y_phases() {
        // X*Z = -iY, Z*X = iY, XZ * ZX = (-iY)(iY) = Y^2 = I
        let x = ps("X");
        let z = ps("Z");
        assert_eq!(x.product(&z).phase(), 3);
        assert_eq!(z.product(&x).phase(), 1);
        assert!(x.compose(&z).is_err());
        // (XX)(ZZ) = (XZ)(XZ) = (-iY)(-iY) = -YY
        assert_eq!(ps("XX").compose(&ps("ZZ")).unwrap(), ps("-YY"));
    }

    #[test]
    fn anticommutation() {
        assert!(!ps("ZZ").commutes_with(&ps("X_")));
        assert!(ps("ZZ").commutes_with(&ps("XX")));
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            ps("ZZ").compose(&ps("Z")).unwrap_err(),
            QecError::Dimension { expected: 2, got: 1 }
        );
    }

    #[test]
    fn weight_and_words() {
        let mut p = PauliString::identity(130);
        p.set(0, Pauli::X);
        p.set(64, Pauli::Y);
        p.set(129, Pauli::Z);
        assert_eq!(p.weight(), 3);
        assert_eq!(p.support(), vec![0, 64, 129]);
        assert_eq!(p.to_string().len(), 131);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (proptest::collection::vec(0u8..4, n), any::<bool>()).prop_map(move |(v, neg)| {
            let mut p = PauliString::identity(n);
            for (q, k) in v.into_iter().enumerate() {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize]);
            }
            p.with_sign(neg)
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_pauli(70), b in arb_pauli(70), c in arb_pauli(70)) {
            prop_assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
        }

        #[test]
        fn commuting_products_are_hermitian(a in arb_pauli(9), b in arb_pauli(9)) {
            let hermitian = a.product(&b).sign().is_ok();
            prop_assert_eq!(hermitian, a.commutes_with(&b));
            prop_assert!(a.product(&a).is_identity());
            prop_assert_eq!(a.product(&a).sign().unwrap(), 1);
        }

        #[test]
        fn weight_zero_iff_identity(a in arb_pauli(12)) {
            prop_assert_eq!(a.weight() == 0, a.support().is_empty());
        }
    }
}
