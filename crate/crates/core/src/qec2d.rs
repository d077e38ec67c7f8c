//! Plaquette-based correction on the 2D torus.
//!
//! Each site carries three Z-type checks: `Pa` (its parity block and the two
//! links stored there), `Pb` (the Gauss operator: four links and the site)
//! and `Pc` (parity block, the other two links and the site). A plaquette is
//! a 2x2 group of sites; its twelve checks plus the `Pa` checks of four
//! neighbouring sites locate any single logical bit flip in the plaquette,
//! its parity blocks, or the eight links leaving it.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitBuilder, Condition};
use crate::codes::{self, Operand};
use crate::error::{QecError, Result};
use crate::lattice::{parity_operator, Block, Lattice2D, Matter, Role2D, Side};
use crate::pauli::PauliString;
pub use crate::schedule::{Detector, Round};

pub type Site = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorLocation2D {
    None,
    Ancilla(Site),
    LinkX(Site),
    LinkY(Site),
    SiteQ(Site),
    /// The twelve plaquette checks cannot tell the site from the link
    /// leaving it on the side away from its parity block.
    AmbiguousSiteOrLink(Site, Role2DKey),
    MultiError,
}

/// Orderable stand-in for a link role inside [`ErrorLocation2D`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role2DKey {
    X(Site),
    Y(Site),
}

impl ErrorLocation2D {
    pub fn of_role(role: Role2D) -> Self {
        match role {
            Role2D::LinkX(x, y) => ErrorLocation2D::LinkX((x, y)),
            Role2D::LinkY(x, y) => ErrorLocation2D::LinkY((x, y)),
            Role2D::Site(x, y) => ErrorLocation2D::SiteQ((x, y)),
            Role2D::Ancilla(x, y) => ErrorLocation2D::Ancilla((x, y)),
            _ => ErrorLocation2D::MultiError,
        }
    }
}

impl fmt::Display for ErrorLocation2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorLocation2D::None => write!(f, "none"),
            ErrorLocation2D::Ancilla((x, y)) => write!(f, "A{x}{y}"),
            ErrorLocation2D::LinkX((x, y)) => write!(f, "Lx{x}{y}"),
            ErrorLocation2D::LinkY((x, y)) => write!(f, "Ly{x}{y}"),
            ErrorLocation2D::SiteQ((x, y)) => write!(f, "s{x}{y}"),
            ErrorLocation2D::AmbiguousSiteOrLink((x, y), Role2DKey::X((a, b))) => write!(f, "s{x}{y}|Lx{a}{b}"),
            ErrorLocation2D::AmbiguousSiteOrLink((x, y), Role2DKey::Y((a, b))) => write!(f, "s{x}{y}|Ly{a}{b}"),
            ErrorLocation2D::MultiError => write!(f, "2+"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    Pa,
    Pb,
    Pc,
}

/// One Z-type check: the blocks it spans and its no-error eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub site: Site,
    pub kind: CheckKind,
    pub roles: Vec<Role2D>,
    pub sign: i8,
}

impl Check {
    pub fn operator(&self, lat: &Lattice2D) -> PauliString {
        let qs: Vec<usize> = self.roles.iter().flat_map(|r| lat.must(*r).qubits()).collect();
        parity_operator(lat.num_qubits(), &qs)
    }

    /// The outcome bit expected without errors.
    pub fn baseline(&self) -> bool {
        self.sign == -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteStabilizerTriple {
    pub pa: PauliString,
    pub pb: PauliString,
    pub pc: PauliString,
    pub signs: [i8; 3],
}

fn wrap(lat: &Lattice2D, base: Site, dx: isize, dy: isize) -> Site {
    let (w, h) = (lat.width() as isize, lat.height() as isize);
    (((base.0 as isize + dx).rem_euclid(w)) as usize, ((base.1 as isize + dy).rem_euclid(h)) as usize)
}

fn canonical(lat: &Lattice2D, r: Role2D) -> Role2D {
    let (w, h) = (lat.width(), lat.height());
    match r {
        Role2D::LinkX(x, y) => Role2D::LinkX(x % w, y % h),
        Role2D::LinkY(x, y) => Role2D::LinkY(x % w, y % h),
        Role2D::Site(x, y) => Role2D::Site(x % w, y % h),
        Role2D::Ancilla(x, y) => Role2D::Ancilla(x % w, y % h),
        r => r,
    }
}

/// The three checks at `s`. `static_charge` flips the Gauss eigenvalue.
pub fn site_checks(lat: &Lattice2D, s: Site, static_charge: bool) -> [Check; 3] {
    let (paired, others) = lat.ancilla_links(s);
    let anc = Role2D::Ancilla(s.0, s.1);
    let mut pb: Vec<Role2D> =
        [Side::Down, Side::Left, Side::Up, Side::Right].into_iter().map(|d| lat.link(s, d)).collect();
    let mut pc = vec![anc, others[0], others[1]];
    if lat.has_sites() {
        pb.push(Role2D::Site(s.0, s.1));
        pc.push(Role2D::Site(s.0, s.1));
    }
    let (_, sign) = lat.gauss_check_operator(s, static_charge);
    [
        Check { site: s, kind: CheckKind::Pa, roles: vec![anc, paired[0], paired[1]], sign: 1 },
        Check { site: s, kind: CheckKind::Pb, roles: pb, sign },
        Check { site: s, kind: CheckKind::Pc, roles: pc, sign },
    ]
}

pub fn site_stabilizers(lat: &Lattice2D, s: Site, static_charge: bool) -> SiteStabilizerTriple {
    let [a, b, c] = site_checks(lat, s, static_charge);
    SiteStabilizerTriple {
        pa: a.operator(lat),
        pb: b.operator(lat),
        pc: c.operator(lat),
        signs: [a.sign, b.sign, c.sign],
    }
}

/// The site whose parity block stores `link`.
pub fn ancilla_of_link(lat: &Lattice2D, link: Role2D) -> Site {
    let link = canonical(lat, link);
    let ends = match link {
        Role2D::LinkX(x, y) => [(x, y), wrap(lat, (x, y), 0, -1)],
        Role2D::LinkY(x, y) => [(x, y), wrap(lat, (x, y), -1, 0)],
        r => panic!("{r} is not a link"),
    };
    for s in ends {
        if lat.ancilla_links(s).0.contains(&link) {
            return s;
        }
    }
    unreachable!("every link is paired with one of its ends")
}

/// Transversal CNOT from `link` onto the parity block storing it; keeps the
/// stored parity current after the link is changed.
pub fn ancilla_update(lat: &Lattice2D, b: &mut CircuitBuilder, link: Role2D) {
    let s = ancilla_of_link(lat, link);
    let (l, a) = (lat.must(link), lat.must(Role2D::Ancilla(s.0, s.1)));
    for (c, t) in l.qubits().zip(a.qubits()) {
        b.cnot(c, t);
    }
}

/// Computational-basis content of a 2D state before encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment2D {
    /// Links holding flux.
    pub flux: Vec<Role2D>,
    /// Site qubit values, indexed like [`Lattice2D::sites`].
    pub occupancy: Vec<bool>,
    pub static_charges: Vec<bool>,
}

impl Assignment2D {
    /// No flux; site qubits set so that every Gauss check holds (odd sites
    /// read 1).
    pub fn vacuum(lat: &Lattice2D) -> Self {
        let sites = lat.sites();
        let occupancy = sites.iter().map(|&s| lat.has_sites() && Lattice2D::site_sign(s) == -1).collect();
        Self { flux: Vec::new(), occupancy, static_charges: vec![false; sites.len()] }
    }

    pub fn validate(&self, lat: &Lattice2D) -> Result<()> {
        let sites = lat.sites();
        if self.occupancy.len() != sites.len() || self.static_charges.len() != sites.len() {
            return Err(QecError::Dimension { expected: sites.len(), got: self.occupancy.len() });
        }
        let flux: std::collections::HashSet<Role2D> = self.flux.iter().map(|r| canonical(lat, *r)).collect();
        for (i, &s) in sites.iter().enumerate() {
            let mut parity = [Side::Down, Side::Left, Side::Up, Side::Right]
                .into_iter()
                .filter(|d| flux.contains(&lat.link(s, *d)))
                .count()
                % 2
                == 1;
            if lat.has_sites() {
                parity ^= self.occupancy[i];
            } else if self.occupancy[i] {
                return Err(QecError::Config("pure gauge lattice with occupied sites".into()));
            }
            let (_, sign) = lat.gauss_check_operator(s, self.static_charges[i]);
            if parity != (sign == -1) {
                return Err(QecError::GaugeViolation { site: i });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload2D {
    /// Superpose with the flux loop around the plaquette at the origin.
    pub wilson: bool,
    /// Superpose with a hop between sites (0,0) and (1,0).
    pub hopping: bool,
}

impl Payload2D {
    pub const FULL: Payload2D = Payload2D { wilson: true, hopping: true };
}

/// Prepares the encoded state: basis content and payloads on the bare first
/// qubits, parity blocks loaded from their links, then every data block
/// phase-flip encoded.
pub fn build_physical_state_2d(lat: &Lattice2D, a: &Assignment2D, payload: Payload2D) -> Result<Circuit> {
    a.validate(lat)?;
    let mut b = CircuitBuilder::new(lat.num_qubits());
    b.label("state preparation");
    let first = |r: Role2D| lat.must(r).first();
    let loop_links = [Role2D::LinkY(1, 0), Role2D::LinkX(1, 1), Role2D::LinkY(1, 1), Role2D::LinkX(0, 1)];
    if payload.wilson {
        b.h(first(loop_links[0]));
        for l in &loop_links[1..] {
            b.cnot(first(loop_links[0]), first(*l));
        }
    }
    if payload.hopping && lat.has_sites() {
        let s0 = first(Role2D::Site(0, 0));
        b.h(s0).cnot(s0, first(Role2D::Site(1, 0))).cnot(s0, first(Role2D::LinkY(1, 0)));
    }
    for l in &a.flux {
        b.x(first(*l));
    }
    if lat.has_sites() {
        for (s, &occ) in lat.sites().iter().zip(&a.occupancy) {
            if occ {
                b.x(first(Role2D::Site(s.0, s.1)));
            }
        }
    }
    for s in lat.sites() {
        let anc = first(Role2D::Ancilla(s.0, s.1));
        for l in lat.ancilla_links(s).0 {
            b.cnot(first(l), anc);
        }
    }
    for (_, blk) in data_blocks(lat) {
        codes::encode_phaseflip(&mut b, qubits3(blk));
    }
    Ok(b.finish())
}

fn qubits3(b: Block) -> [usize; 3] {
    [b.start, b.start + 1, b.start + 2]
}

pub fn data_blocks(lat: &Lattice2D) -> Vec<(Role2D, Block)> {
    lat.registry().iter().copied().filter(|(r, _)| !matches!(r, Role2D::Syndrome | Role2D::Flag)).collect()
}

/// Sites of a plaquette relative to its corner, in table column order.
pub const PLAQUETTE_SITES: [(isize, isize); 4] = [(0, 0), (0, 1), (1, 1), (1, 0)];
/// Neighbouring sites whose `Pa` check completes the plaquette syndrome.
pub const NEIGHBOR_PA: [(isize, isize); 4] = [(0, -1), (-1, 1), (1, 2), (2, 0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Plaquette {
    pub corner: Site,
    pub round: u8,
}

/// Round 1 takes the plaquettes with even corners, which tile the sites;
/// round 2 the plaquettes with odd corners, whose edges are the links
/// between round-1 plaquettes.
pub fn plaquettes(lat: &Lattice2D, round: u8) -> Vec<Plaquette> {
    let off = if round == 1 { 0 } else { 1 };
    let mut v = Vec::new();
    for i in 0..lat.nx {
        for j in 0..lat.ny {
            v.push(Plaquette { corner: (2 * i + off, 2 * j + off), round });
        }
    }
    v
}

impl Plaquette {
    pub fn sites(&self, lat: &Lattice2D) -> [Site; 4] {
        PLAQUETTE_SITES.map(|(dx, dy)| wrap(lat, self.corner, dx, dy))
    }

    /// For each plaquette site, the outside site storing the plaquette's
    /// external link on that site's unpaired side.
    pub fn neighbors(&self, lat: &Lattice2D) -> [Site; 4] {
        let sites = self.sites(lat);
        let interior = self.interior(lat);
        let local: Vec<Role2D> = sites.iter().flat_map(|&s| lat.ancilla_links(s).0).collect();
        sites.map(|s| {
            let ext = [Side::Down, Side::Left, Side::Up, Side::Right]
                .into_iter()
                .map(|d| lat.link(s, d))
                .find(|l| !interior.contains(l) && !local.contains(l));
            match ext {
                Some(l) => ancilla_of_link(lat, l),
                None => s,
            }
        })
    }

    /// The twelve site checks followed by the four neighbour `Pa` checks.
    pub fn checks(&self, lat: &Lattice2D, static_charges: &[bool]) -> Vec<Check> {
        let charge = |s: Site| static_charges.get(site_index(lat, s)).copied().unwrap_or(false);
        let mut v: Vec<Check> = self.sites(lat).iter().flat_map(|&s| site_checks(lat, s, charge(s))).collect();
        for s in self.neighbors(lat) {
            let [pa, _, _] = site_checks(lat, s, charge(s));
            v.push(pa);
        }
        v
    }

    /// Blocks inside the plaquette proper: sites, parity blocks and the
    /// four internal links.
    pub fn interior(&self, lat: &Lattice2D) -> Vec<Role2D> {
        let s = self.sites(lat);
        let mut v = Vec::new();
        for &(x, y) in &s {
            if lat.has_sites() {
                v.push(Role2D::Site(x, y));
            }
            v.push(Role2D::Ancilla(x, y));
        }
        v.push(lat.link(s[0], Side::Up));
        v.push(lat.link(s[1], Side::Right));
        v.push(lat.link(s[2], Side::Down));
        v.push(lat.link(s[3], Side::Left));
        v
    }
}

pub fn site_index(lat: &Lattice2D, s: Site) -> usize {
    s.0 * lat.height() + s.1
}

/// Bit-pattern of checks flipped by a logical X on `role`.
pub fn flip_pattern(checks: &[Check], role: Role2D) -> u32 {
    checks.iter().enumerate().filter(|(_, c)| c.roles.contains(&role)).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Lookup decoder generated by enumerating every single logical X that
/// disturbs a plaquette's own twelve checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaquetteTable {
    pub plaquette: Plaquette,
    pub checks: Vec<Check>,
    /// Pattern over all sixteen checks, and the blocks producing it.
    pub entries: BTreeMap<u32, Vec<Role2D>>,
}

pub const LOCAL_MASK: u32 = 0xfff;

impl PlaquetteTable {
    pub fn build(lat: &Lattice2D, p: Plaquette, static_charges: &[bool]) -> Self {
        let checks = p.checks(lat, static_charges);
        let mut entries: BTreeMap<u32, Vec<Role2D>> = BTreeMap::new();
        for (role, _) in data_blocks(lat) {
            let pat = flip_pattern(&checks, role);
            if pat & LOCAL_MASK != 0 {
                entries.entry(pat).or_default().push(role);
            }
        }
        Self { plaquette: p, checks, entries }
    }

    fn location(roles: &[Role2D]) -> ErrorLocation2D {
        match roles {
            [r] => ErrorLocation2D::of_role(*r),
            [a, b] => {
                let (site, link) = match (a, b) {
                    (Role2D::Site(x, y), l) | (l, Role2D::Site(x, y)) => ((*x, *y), *l),
                    _ => return ErrorLocation2D::MultiError,
                };
                match link {
                    Role2D::LinkX(x, y) => ErrorLocation2D::AmbiguousSiteOrLink(site, Role2DKey::X((x, y))),
                    Role2D::LinkY(x, y) => ErrorLocation2D::AmbiguousSiteOrLink(site, Role2DKey::Y((x, y))),
                    _ => ErrorLocation2D::MultiError,
                }
            }
            _ => ErrorLocation2D::MultiError,
        }
    }

    /// Decodes the twelve local checks (pattern relative to baseline).
    pub fn decode12(&self, pattern: u32) -> ErrorLocation2D {
        let pattern = pattern & LOCAL_MASK;
        if pattern == 0 {
            return ErrorLocation2D::None;
        }
        let roles: Vec<Role2D> = self
            .entries
            .iter()
            .filter(|(p, _)| *p & LOCAL_MASK == pattern)
            .flat_map(|(_, r)| r.iter().copied())
            .collect();
        if roles.is_empty() {
            ErrorLocation2D::MultiError
        } else {
            Self::location(&roles)
        }
    }

    /// Decodes all sixteen checks.
    pub fn decode16(&self, pattern: u32) -> ErrorLocation2D {
        if pattern & LOCAL_MASK == 0 {
            return ErrorLocation2D::None;
        }
        match self.entries.get(&pattern) {
            Some(roles) => Self::location(roles),
            None => ErrorLocation2D::MultiError,
        }
    }

    /// True when every block in the table has its own sixteen-bit pattern.
    pub fn is_injective(&self) -> bool {
        self.entries.values().all(|r| r.len() == 1)
    }
}

/// Candidate set for one site's `(Pa, Pb, Pc)` deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiteCandidates {
    None,
    Candidates(Vec<Role2D>),
    MultiError,
}

/// Single-site decoding: which blocks touching `s` explain the deviation
/// `(pa, pb, pc)` (`true` = flipped relative to baseline).
pub fn decode_site(lat: &Lattice2D, s: Site, flipped: [bool; 3]) -> SiteCandidates {
    if flipped == [false; 3] {
        return SiteCandidates::None;
    }
    let checks = site_checks(lat, s, false);
    let mut touching: Vec<Role2D> = Vec::new();
    for c in &checks {
        for r in &c.roles {
            if !touching.contains(r) {
                touching.push(*r);
            }
        }
    }
    let want = flipped.iter().enumerate().fold(0u32, |acc, (i, &f)| acc | (f as u32) << i);
    let hits: Vec<Role2D> = touching.into_iter().filter(|r| flip_pattern(&checks, *r) == want).collect();
    if hits.is_empty() {
        SiteCandidates::MultiError
    } else {
        SiteCandidates::Candidates(hits)
    }
}

/// Accumulates a 2D round.
pub struct RoundBuilder2D<'a> {
    pub lat: &'a Lattice2D,
    pub b: CircuitBuilder,
    pub detectors: Vec<Detector<ErrorLocation2D>>,
    pub flags: Vec<usize>,
}

impl<'a> RoundBuilder2D<'a> {
    pub fn new(lat: &'a Lattice2D) -> Self {
        Self { lat, b: CircuitBuilder::new(lat.num_qubits()), detectors: Vec::new(), flags: Vec::new() }
    }

    pub fn finish(self) -> Round<ErrorLocation2D> {
        Round { circuit: self.b.finish(), detectors: self.detectors, flags: self.flags }
    }

    fn syndrome(&self) -> usize {
        self.lat.must(Role2D::Syndrome).start
    }

    fn flag(&self) -> usize {
        self.lat.must(Role2D::Flag).start
    }

    /// Measures `checks` in order; returns their bits.
    pub fn measure(&mut self, checks: &[Check]) -> Vec<usize> {
        let (syn, flag) = (self.syndrome(), self.flag());
        checks
            .iter()
            .map(|c| {
                let ops: Vec<Operand> = c.roles.iter().map(|r| Operand::from_block(self.lat.must(*r))).collect();
                let (s, f) = codes::measure_parity(&mut self.b, &ops, syn, flag);
                self.flags.push(f);
                s
            })
            .collect()
    }
}

/// Measures a plaquette's sixteen checks and applies the table recovery.
/// Blocks sharing a pattern are reported as ambiguous and left alone.
pub fn plaquette_round(r: &mut RoundBuilder2D, p: Plaquette, static_charges: &[bool]) -> Vec<usize> {
    let lat = r.lat;
    r.b.label(format!("plaquette round={} corner=({},{})", p.round, p.corner.0, p.corner.1));
    let table = PlaquetteTable::build(lat, p, static_charges);
    let bits = r.measure(&table.checks);
    let baseline: Vec<bool> = table.checks.iter().map(Check::baseline).collect();
    for (&pattern, roles) in &table.entries {
        let values: Vec<bool> = (0..bits.len()).map(|i| baseline[i] ^ (pattern >> i & 1 == 1)).collect();
        let cond = Condition::pattern(&bits, &values);
        if let [role] = roles.as_slice() {
            for q in lat.must(*role).qubits() {
                r.b.cond_x(q, cond.clone());
            }
        }
        r.detectors.push(Detector { cond, location: PlaquetteTable::location(roles) });
    }
    bits
}

pub fn phase_pass(r: &mut RoundBuilder2D) {
    r.b.label("phase pass");
    let anc = [r.syndrome(), r.flag()];
    for (_, blk) in data_blocks(r.lat) {
        codes::phase_correct(&mut r.b, qubits3(blk), anc);
    }
}

/// Phase pass, both plaquette rounds, ancilla reset.
pub fn correction_cycle(lat: &Lattice2D, static_charges: &[bool]) -> Round<ErrorLocation2D> {
    let mut r = RoundBuilder2D::new(lat);
    phase_pass(&mut r);
    for round in [1, 2] {
        for p in plaquettes(lat, round) {
            plaquette_round(&mut r, p, static_charges);
        }
    }
    let (syn, flag) = (r.syndrome(), r.flag());
    r.b.reset(syn).reset(flag);
    r.finish()
}

/// Pure gauge and dynamical matter are the supported 2D settings.
pub fn supports(lat: &Lattice2D) -> bool {
    matches!(lat.scheme.matter, Matter::Pure | Matter::Dynamical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run_tableau;
    use crate::lattice::{Dimension, SchemeId, Variant};

    fn lat(m: Matter, n: usize) -> Lattice2D {
        Lattice2D::build(n, n, SchemeId::new(Dimension::Two, m, Variant::FullAncilla)).unwrap()
    }

    #[test]
    fn triple_product_identity() {
        for m in [Matter::Pure, Matter::Dynamical] {
            let lat = lat(m, 2);
            for s in lat.sites() {
                let t = site_stabilizers(&lat, s, false);
                assert_eq!(t.pa.compose(&t.pc).unwrap(), t.pb);
                assert_eq!(t.signs[0] * t.signs[2], t.signs[1]);
            }
        }
    }

    #[test]
    fn vacuum_satisfies_all_checks() {
        for m in [Matter::Pure, Matter::Dynamical] {
            let lat = lat(m, 1);
            let prep = build_physical_state_2d(&lat, &Assignment2D::vacuum(&lat), Payload2D::FULL).unwrap();
            let (t, _) = run_tableau(&prep, 0).unwrap();
            for s in lat.sites() {
                for c in site_checks(&lat, s, false) {
                    assert_eq!(t.expectation(&c.operator(&lat)), c.sign, "{s:?} {:?}", c.kind);
                }
            }
        }
    }

    #[test]
    fn ancilla_errors_touch_only_their_site() {
        let lat = lat(Matter::Dynamical, 2);
        for s in lat.sites() {
            let checks: Vec<Check> = lat.sites().iter().flat_map(|&t| site_checks(&lat, t, false)).collect();
            let hit: Vec<(Site, CheckKind)> = checks
                .iter()
                .filter(|c| c.roles.contains(&Role2D::Ancilla(s.0, s.1)))
                .map(|c| (c.site, c.kind))
                .collect();
            assert_eq!(hit, vec![(s, CheckKind::Pa), (s, CheckKind::Pc)]);
        }
    }

    #[test]
    fn extended_tables_are_injective() {
        for m in [Matter::Pure, Matter::Dynamical] {
            for n in [1, 2] {
                let lat = lat(m, n);
                for round in [1, 2] {
                    for p in plaquettes(&lat, round) {
                        let t = PlaquetteTable::build(&lat, p, &[]);
                        assert!(t.is_injective(), "{m:?} n={n} {p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn round_one_neighbors_match_offsets() {
        let lat = lat(Matter::Dynamical, 2);
        for p in plaquettes(&lat, 1) {
            assert_eq!(p.neighbors(&lat), NEIGHBOR_PA.map(|(dx, dy)| wrap(&lat, p.corner, dx, dy)));
        }
    }

    #[test]
    fn single_site_table() {
        let lat = lat(Matter::Dynamical, 2);
        assert_eq!(
            decode_site(&lat, (0, 0), [true, false, true]),
            SiteCandidates::Candidates(vec![Role2D::Ancilla(0, 0)])
        );
        assert_eq!(decode_site(&lat, (0, 0), [false, false, true]), SiteCandidates::MultiError);
        let SiteCandidates::Candidates(c) = decode_site(&lat, (0, 0), [false, true, true]) else { panic!() };
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn update_restores_parity() {
        let lat = lat(Matter::Pure, 1);
        let prep = build_physical_state_2d(&lat, &Assignment2D::vacuum(&lat), Payload2D::default()).unwrap();
        let mut b = CircuitBuilder::from_circuit(prep);
        let link = Role2D::LinkX(1, 0);
        for q in lat.must(link).qubits() {
            b.x(q);
        }
        ancilla_update(&lat, &mut b, link);
        let (t, _) = run_tableau(b.circuit(), 0).unwrap();
        let s = ancilla_of_link(&lat, link);
        let [pa, _, _] = site_checks(&lat, s, false);
        assert_eq!(t.expectation(&pa.operator(&lat)), 1);
    }
}
