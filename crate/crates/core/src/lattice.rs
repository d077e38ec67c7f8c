//! Lattice layouts: which physical qubits hold which lattice role.
//!
//! Every link or site register is a three-qubit phase-flip block; syndrome,
//! flag and proxy ancillas are bare qubits. Indices are assigned in a fixed
//! order (link blocks by ascending link then copy, site blocks, parity
//! blocks, bare ancillas) so emitted circuits stay stable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};
use crate::pauli::PauliString;

/// Qubits per phase-flip block.
pub const BLOCK: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    #[serde(rename = "1d")]
    One,
    #[serde(rename = "2d")]
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matter {
    Pure,
    NonDynamical,
    Dynamical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Even links carry two registers.
    Doubled,
    /// One register per link; checks overlap instead.
    Compressed,
    /// One parity block per site.
    FullAncilla,
    /// Parity blocks on half the sites. Reserved; not built.
    HalfAncilla,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeId {
    pub dimension: Dimension,
    pub matter: Matter,
    pub variant: Variant,
}

impl SchemeId {
    pub const fn new(dimension: Dimension, matter: Matter, variant: Variant) -> Self {
        Self { dimension, matter, variant }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.dimension {
            Dimension::One => matches!(self.variant, Variant::Doubled | Variant::Compressed),
            Dimension::Two => self.variant == Variant::FullAncilla && self.matter != Matter::NonDynamical,
        };
        if ok {
            Ok(())
        } else {
            Err(QecError::UnsupportedScheme(self.to_string()))
        }
    }

    pub fn all_1d() -> Vec<SchemeId> {
        let mut v = Vec::new();
        for variant in [Variant::Doubled, Variant::Compressed] {
            for matter in [Matter::Pure, Matter::NonDynamical, Matter::Dynamical] {
                v.push(SchemeId::new(Dimension::One, matter, variant));
            }
        }
        v
    }

    pub fn all_2d() -> Vec<SchemeId> {
        [Matter::Pure, Matter::Dynamical]
            .into_iter()
            .map(|m| SchemeId::new(Dimension::Two, m, Variant::FullAncilla))
            .collect()
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dimension {
            Dimension::One => "1d",
            Dimension::Two => "2d",
        };
        let m = match self.matter {
            Matter::Pure => "pure",
            Matter::NonDynamical => "nondynamical",
            Matter::Dynamical => "dynamical",
        };
        let v = match self.variant {
            Variant::Doubled => "doubled",
            Variant::Compressed => "compressed",
            Variant::FullAncilla => "full-ancilla",
            Variant::HalfAncilla => "half-ancilla",
        };
        write!(f, "{d}/{m}/{v}")
    }
}

/// A contiguous run of physical qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    pub fn first(&self) -> usize {
        self.start
    }
}

struct Alloc<R> {
    registry: Vec<(R, Block)>,
    next: usize,
}

impl<R> Default for Alloc<R> {
    fn default() -> Self {
        Self { registry: Vec::new(), next: 0 }
    }
}

impl<R> Alloc<R> {
    fn push(&mut self, role: R, len: usize) {
        self.registry.push((role, Block { start: self.next, len }));
        self.next += len;
    }
}

/// Roles in a 1D layout. `copy` is 1 or 2 for the doubled even links and 0
/// for a single register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role1D {
    Link { l: usize, copy: u8 },
    Site(usize),
    /// Bare qubit holding the parity of a site and a link.
    Proxy,
    Syndrome(usize),
    Flag(usize),
}

impl fmt::Display for Role1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role1D::Link { l, copy: 0 } => write!(f, "L{l}"),
            Role1D::Link { l, copy } => write!(f, "L{l}.{copy}"),
            Role1D::Site(s) => write!(f, "S{s}"),
            Role1D::Proxy => write!(f, "proxy"),
            Role1D::Syndrome(i) => write!(f, "syn{i}"),
            Role1D::Flag(i) => write!(f, "flag{i}"),
        }
    }
}

/// Periodic chain with `2N` sites and `2N` links. Site `s` sits between
/// link `s` (left) and link `s + 1` (right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice1D {
    pub n: usize,
    pub scheme: SchemeId,
    registry: Vec<(Role1D, Block)>,
    data_qubits: usize,
    total: usize,
}

impl Lattice1D {
    pub fn build(n: usize, scheme: SchemeId) -> Result<Self> {
        scheme.validate()?;
        if scheme.dimension != Dimension::One {
            return Err(QecError::UnsupportedScheme(scheme.to_string()));
        }
        if n == 0 {
            return Err(QecError::Config("N must be at least 1".into()));
        }
        let mut a = Alloc::default();
        let doubled = scheme.variant == Variant::Doubled;
        for l in 0..2 * n {
            if doubled && l % 2 == 0 {
                a.push(Role1D::Link { l, copy: 1 }, BLOCK);
                a.push(Role1D::Link { l, copy: 2 }, BLOCK);
            } else {
                a.push(Role1D::Link { l, copy: 0 }, BLOCK);
            }
        }
        if scheme.matter == Matter::Dynamical {
            for s in 0..2 * n {
                a.push(Role1D::Site(s), BLOCK);
            }
        }
        let data = a.next;
        if scheme.matter == Matter::Dynamical && doubled {
            a.push(Role1D::Proxy, 1);
        }
        let syndromes = if scheme.matter == Matter::Dynamical && !doubled { 3 } else { 2 };
        for i in 0..syndromes {
            a.push(Role1D::Syndrome(i), 1);
        }
        a.push(Role1D::Flag(0), 1);
        Ok(Self { n, scheme, registry: a.registry, data_qubits: data, total: a.next })
    }

    pub fn num_sites(&self) -> usize {
        2 * self.n
    }

    pub fn num_links(&self) -> usize {
        2 * self.n
    }

    pub fn num_qubits(&self) -> usize {
        self.total
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn registry(&self) -> &[(Role1D, Block)] {
        &self.registry
    }

    pub fn block(&self, role: Role1D) -> Option<Block> {
        self.registry.iter().find(|(r, _)| *r == role).map(|(_, b)| *b)
    }

    fn must(&self, role: Role1D) -> Block {
        self.block(role).unwrap_or_else(|| panic!("{role} not present in {}", self.scheme))
    }

    pub fn is_doubled(&self) -> bool {
        self.scheme.variant == Variant::Doubled
    }

    pub fn has_sites(&self) -> bool {
        self.scheme.matter == Matter::Dynamical
    }

    pub fn link_index(&self, l: isize) -> usize {
        l.rem_euclid(2 * self.n as isize) as usize
    }

    /// All registers of link `l` (two for doubled even links).
    pub fn link_blocks(&self, l: usize) -> Vec<Block> {
        let l = l % (2 * self.n);
        if self.is_doubled() && l % 2 == 0 {
            vec![self.must(Role1D::Link { l, copy: 1 }), self.must(Role1D::Link { l, copy: 2 })]
        } else {
            vec![self.must(Role1D::Link { l, copy: 0 })]
        }
    }

    /// The register used when a single representative of link `l` is needed.
    pub fn link_block(&self, l: usize) -> Block {
        self.link_blocks(l)[0]
    }

    pub fn site_block(&self, s: usize) -> Block {
        self.must(Role1D::Site(s % (2 * self.n)))
    }

    pub fn proxy(&self) -> usize {
        self.must(Role1D::Proxy).start
    }

    pub fn syndrome(&self, i: usize) -> usize {
        self.must(Role1D::Syndrome(i)).start
    }

    pub fn flag(&self) -> usize {
        self.must(Role1D::Flag(0)).start
    }

    pub fn data_roles(&self) -> Vec<(Role1D, Block)> {
        self.registry.iter().copied().filter(|(r, _)| matches!(r, Role1D::Link { .. } | Role1D::Site(_))).collect()
    }

    /// Charge of site `s`: +1 on even (fermion) sites, -1 on odd.
    pub fn charge(s: usize) -> i8 {
        if s % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Logical Z on a block.
    pub fn logical_z(&self, b: Block) -> PauliString {
        PauliString::z_on(self.total, b.qubits())
    }

    /// The Gauss check at site `s` and its no-error eigenvalue. Without
    /// dynamical matter the site factor is omitted and, for static charges,
    /// the eigenvalue is `-1` on occupied sites.
    pub fn gauss_check_operator(&self, s: usize, occupied: bool) -> (PauliString, i8) {
        let s = s % self.num_sites();
        let mut qs: Vec<usize> = self.link_block(s).qubits().chain(self.link_block(s + 1).qubits()).collect();
        if self.has_sites() {
            qs.extend(self.site_block(s).qubits());
        }
        let sign = if self.scheme.matter == Matter::NonDynamical && occupied { -1 } else { 1 };
        (parity_operator(self.total, &qs), sign)
    }

    pub fn resources(&self) -> ResourceReport {
        let mut breakdown = Vec::new();
        let count = |f: &dyn Fn(&Role1D) -> bool| {
            self.registry.iter().filter(|(r, _)| f(r)).map(|(_, b)| b.len).sum::<usize>()
        };
        breakdown.push(("link".to_string(), count(&|r| matches!(r, Role1D::Link { .. }))));
        if self.has_sites() {
            breakdown.push(("site".to_string(), count(&|r| matches!(r, Role1D::Site(_)))));
        }
        let ancilla = self.total - self.data_qubits;
        ResourceReport {
            scheme: self.scheme,
            dims: vec![self.n],
            data: self.data_qubits,
            ancilla,
            breakdown,
            baseline_513: baseline_513(self.scheme, &[self.n]),
        }
    }
}

/// Z on each listed qubit. A qubit listed twice cancels.
pub fn parity_operator(n: usize, qubits: &[usize]) -> PauliString {
    let mut p = PauliString::identity(n);
    for &q in qubits {
        let z = p.z_bit(q);
        p.set(q, if z { crate::pauli::Pauli::I } else { crate::pauli::Pauli::Z });
    }
    p
}

/// Roles in a 2D layout, addressed by site coordinate `(x, y)`.
///
/// `LinkX(x, y)` joins `(x, y)` to `(x, y - 1)`; `LinkY(x, y)` joins `(x, y)`
/// to `(x - 1, y)`. Each site therefore touches `LinkX(s)`, `LinkY(s)`,
/// `LinkX(s + y)` and `LinkY(s + x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role2D {
    LinkX(usize, usize),
    LinkY(usize, usize),
    Site(usize, usize),
    Ancilla(usize, usize),
    Syndrome,
    Flag,
}

impl fmt::Display for Role2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role2D::LinkX(x, y) => write!(f, "Lx{x}{y}"),
            Role2D::LinkY(x, y) => write!(f, "Ly{x}{y}"),
            Role2D::Site(x, y) => write!(f, "s{x}{y}"),
            Role2D::Ancilla(x, y) => write!(f, "A{x}{y}"),
            Role2D::Syndrome => write!(f, "syn"),
            Role2D::Flag => write!(f, "flag"),
        }
    }
}

/// Which side of a site a link lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Down,
    Left,
    Up,
    Right,
}

/// The two links whose parity the ancilla at a site stores, indexed by the
/// site's parity class `(x % 2, y % 2)`. Every link belongs to exactly one
/// pair.
pub const ANCILLA_PAIRING: [[[Side; 2]; 2]; 2] = [
    // x even: y even, y odd
    [[Side::Left, Side::Up], [Side::Up, Side::Right]],
    // x odd: y even, y odd
    [[Side::Down, Side::Left], [Side::Right, Side::Down]],
];

/// Periodic `2Nx x 2Ny` grid of sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice2D {
    pub nx: usize,
    pub ny: usize,
    pub scheme: SchemeId,
    registry: Vec<(Role2D, Block)>,
    index: std::collections::HashMap<Role2D, Block>,
    data_qubits: usize,
    total: usize,
}

impl Lattice2D {
    pub fn build(nx: usize, ny: usize, scheme: SchemeId) -> Result<Self> {
        scheme.validate()?;
        if scheme.dimension != Dimension::Two {
            return Err(QecError::UnsupportedScheme(scheme.to_string()));
        }
        if nx == 0 || ny == 0 {
            return Err(QecError::Config("Nx and Ny must be at least 1".into()));
        }
        let (w, h) = (2 * nx, 2 * ny);
        let mut a = Alloc::default();
        for make in [Role2D::LinkX as fn(usize, usize) -> Role2D, Role2D::LinkY] {
            for x in 0..w {
                for y in 0..h {
                    a.push(make(x, y), BLOCK);
                }
            }
        }
        if scheme.matter == Matter::Dynamical {
            for x in 0..w {
                for y in 0..h {
                    a.push(Role2D::Site(x, y), BLOCK);
                }
            }
        }
        for x in 0..w {
            for y in 0..h {
                a.push(Role2D::Ancilla(x, y), BLOCK);
            }
        }
        let data = a.next;
        a.push(Role2D::Syndrome, 1);
        a.push(Role2D::Flag, 1);
        let index = a.registry.iter().copied().collect();
        Ok(Self { nx, ny, scheme, registry: a.registry, index, data_qubits: data, total: a.next })
    }

    pub fn width(&self) -> usize {
        2 * self.nx
    }

    pub fn height(&self) -> usize {
        2 * self.ny
    }

    pub fn num_qubits(&self) -> usize {
        self.total
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn has_sites(&self) -> bool {
        self.scheme.matter == Matter::Dynamical
    }

    pub fn registry(&self) -> &[(Role2D, Block)] {
        &self.registry
    }

    pub fn block(&self, role: Role2D) -> Option<Block> {
        let role = match role {
            Role2D::LinkX(x, y) => Role2D::LinkX(x % self.width(), y % self.height()),
            Role2D::LinkY(x, y) => Role2D::LinkY(x % self.width(), y % self.height()),
            Role2D::Site(x, y) => Role2D::Site(x % self.width(), y % self.height()),
            Role2D::Ancilla(x, y) => Role2D::Ancilla(x % self.width(), y % self.height()),
            r => r,
        };
        self.index.get(&role).copied()
    }

    pub fn must(&self, role: Role2D) -> Block {
        self.block(role).unwrap_or_else(|| panic!("{role} not present in {}", self.scheme))
    }

    pub fn sites(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for x in 0..self.width() {
            for y in 0..self.height() {
                v.push((x, y));
            }
        }
        v
    }

    /// The link on `side` of site `(x, y)`.
    pub fn link(&self, (x, y): (usize, usize), side: Side) -> Role2D {
        let (w, h) = (self.width(), self.height());
        match side {
            Side::Down => Role2D::LinkX(x, y),
            Side::Left => Role2D::LinkY(x, y),
            Side::Up => Role2D::LinkX(x, (y + 1) % h),
            Side::Right => Role2D::LinkY((x + 1) % w, y),
        }
    }

    /// Links paired with the ancilla at `s`, then the other two.
    pub fn ancilla_links(&self, s: (usize, usize)) -> ([Role2D; 2], [Role2D; 2]) {
        let pair = ANCILLA_PAIRING[s.0 % 2][s.1 % 2];
        let others: Vec<Side> =
            [Side::Down, Side::Left, Side::Up, Side::Right].into_iter().filter(|d| !pair.contains(d)).collect();
        (
            [self.link(s, pair[0]), self.link(s, pair[1])],
            [self.link(s, others[0]), self.link(s, others[1])],
        )
    }

    /// Fermion sites are those with `x + y` even.
    pub fn site_sign(s: (usize, usize)) -> i8 {
        if (s.0 + s.1) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn block_qubits(&self, roles: &[Role2D]) -> Vec<usize> {
        roles.iter().flat_map(|r| self.must(*r).qubits()).collect()
    }

    /// The weight-five Gauss operator at `s` (four links and the site) and its
    /// eigenvalue on the empty, flux-free state shifted by the static charge.
    pub fn gauss_check_operator(&self, s: (usize, usize), static_charge: bool) -> (PauliString, i8) {
        let mut roles: Vec<Role2D> =
            [Side::Down, Side::Left, Side::Up, Side::Right].into_iter().map(|d| self.link(s, d)).collect();
        if self.has_sites() {
            roles.push(Role2D::Site(s.0, s.1));
        }
        let mut sign = if self.has_sites() { Self::site_sign(s) } else { 1 };
        if static_charge {
            sign = -sign;
        }
        (parity_operator(self.total, &self.block_qubits(&roles)), sign)
    }

    pub fn resources(&self) -> ResourceReport {
        let count = |f: &dyn Fn(&Role2D) -> bool| {
            self.registry.iter().filter(|(r, _)| f(r)).map(|(_, b)| b.len).sum::<usize>()
        };
        let mut breakdown = vec![("link".to_string(), count(&|r| matches!(r, Role2D::LinkX(..) | Role2D::LinkY(..))))];
        if self.has_sites() {
            breakdown.push(("site".to_string(), count(&|r| matches!(r, Role2D::Site(..)))));
        }
        breakdown.push(("parity".to_string(), count(&|r| matches!(r, Role2D::Ancilla(..)))));
        ResourceReport {
            scheme: self.scheme,
            dims: vec![self.nx, self.ny],
            data: self.data_qubits,
            ancilla: self.total - self.data_qubits,
            breakdown,
            baseline_513: baseline_513(self.scheme, &[self.nx, self.ny]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub scheme: SchemeId,
    pub dims: Vec<usize>,
    pub data: usize,
    pub ancilla: usize,
    pub breakdown: Vec<(String, usize)>,
    /// Five qubits per link and site register.
    pub baseline_513: usize,
}

fn baseline_513(scheme: SchemeId, dims: &[usize]) -> usize {
    let registers = match scheme.dimension {
        Dimension::One => {
            let n = dims[0];
            if scheme.matter == Matter::Dynamical {
                4 * n
            } else {
                2 * n
            }
        }
        Dimension::Two => {
            let cells = dims[0] * dims[1];
            if scheme.matter == Matter::Dynamical {
                12 * cells
            } else {
                8 * cells
            }
        }
    };
    5 * registers
}

/// Builds the layout for `scheme` and reports its qubit counts.
pub fn resource_counts(scheme: SchemeId, dims: &[usize]) -> Result<ResourceReport> {
    match (scheme.dimension, dims) {
        (Dimension::One, [n]) => Ok(Lattice1D::build(*n, scheme)?.resources()),
        (Dimension::Two, [nx, ny]) => Ok(Lattice2D::build(*nx, *ny, scheme)?.resources()),
        _ => Err(QecError::Config(format!("{scheme} expects {} dimension(s)", if scheme.dimension == Dimension::One { 1 } else { 2 }))),
    }
}
