//! Gauss-law correction rounds on the periodic 1D chain.
//!
//! Every lattice register is a phase-flip block, so each round has two
//! layers: a phase pass that fixes Z errors block by block, then a Gauss
//! round whose parity checks fix logical bit flips. Data blocks are coupled
//! to syndrome ancillas only through flagged parity gadgets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitBuilder, Condition, Literal};
use crate::codes::{self, Operand};
use crate::error::{QecError, Result};
use crate::lattice::{Block, Lattice1D, Matter, Role1D, Variant};
pub use crate::schedule::{Detector, Round};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorLocation1D {
    None,
    EvenLinkCopy(usize, u8),
    OddLink(usize),
    /// A single-register link of the compressed layout.
    Link(usize),
    Site(usize),
    ParityAncilla,
    MultiError,
}

impl ErrorLocation1D {
    /// The location naming the register `role`.
    pub fn of_role(role: Role1D) -> Self {
        match role {
            Role1D::Link { l, copy: 0 } if l % 2 == 1 => ErrorLocation1D::OddLink(l),
            Role1D::Link { l, copy: 0 } => ErrorLocation1D::Link(l),
            Role1D::Link { l, copy } => ErrorLocation1D::EvenLinkCopy(l, copy),
            Role1D::Site(s) => ErrorLocation1D::Site(s),
            _ => ErrorLocation1D::ParityAncilla,
        }
    }

    /// Same as [`of_role`](Self::of_role) but aware that compressed layouts
    /// call every link a plain `Link`.
    pub fn of_role_in(lat: &Lattice1D, role: Role1D) -> Self {
        match role {
            Role1D::Link { l, copy: 0 } if !lat.is_doubled() => ErrorLocation1D::Link(l),
            r => Self::of_role(r),
        }
    }

    fn link_in(lat: &Lattice1D, l: usize) -> Self {
        let l = l % lat.num_links();
        if lat.is_doubled() {
            ErrorLocation1D::OddLink(l)
        } else {
            ErrorLocation1D::Link(l)
        }
    }
}

impl fmt::Display for ErrorLocation1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorLocation1D::None => write!(f, "none"),
            ErrorLocation1D::EvenLinkCopy(l, c) => write!(f, "L{l}.{c}"),
            ErrorLocation1D::OddLink(l) | ErrorLocation1D::Link(l) => write!(f, "L{l}"),
            ErrorLocation1D::Site(s) => write!(f, "S{s}"),
            ErrorLocation1D::ParityAncilla => write!(f, "proxy"),
            ErrorLocation1D::MultiError => write!(f, "multi"),
        }
    }
}

/// Resolves a `11` outcome of the odd-site check with the even-site check
/// of the same pair `k`.
pub fn decode_dynamical(k: usize, syn_odd: [bool; 2], syn_even: [bool; 2]) -> ErrorLocation1D {
    match (syn_odd, syn_even) {
        ([false, false], [false, false]) => ErrorLocation1D::None,
        ([false, false], [true, true]) => ErrorLocation1D::Site(2 * k),
        ([true, true], [false, false]) => ErrorLocation1D::Site(2 * k + 1),
        ([true, true], [true, true]) => ErrorLocation1D::OddLink(2 * k + 1),
        _ => ErrorLocation1D::MultiError,
    }
}

/// Three overlapping checks `(G_{s-1}, G_s, G_{s+1})` centred at site `s`
/// of a chain with `sites` sites.
pub fn decode_compressed(s: usize, sites: usize, g: [bool; 3]) -> ErrorLocation1D {
    match g {
        [false, false, false] => ErrorLocation1D::None,
        [false, true, true] => ErrorLocation1D::Link((s + 1) % sites),
        [false, true, false] => ErrorLocation1D::Site(s),
        [true, true, false] => ErrorLocation1D::Link(s),
        _ => ErrorLocation1D::MultiError,
    }
}

/// Superpositions mixed into the prepared state. Both keep every Gauss
/// check deterministic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    /// Equal superposition with every link flipped.
    pub wilson: bool,
    /// Equal superposition with sites 0, 1 and link 1 flipped.
    pub hopping: bool,
}

impl Payload {
    pub const BASIS: Payload = Payload { wilson: false, hopping: false };
    pub const FULL: Payload = Payload { wilson: true, hopping: true };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options1D {
    /// Replace the conditioned link flips of the static-charge round by a
    /// conditioned flip of the last syndrome bit.
    pub simplified_static: bool,
}

impl Default for Options1D {
    fn default() -> Self {
        Self { simplified_static: true }
    }
}

/// Checks `flux[s] ^ flux[s + 1] ^ occupancy[s] == 0` at every site.
pub fn check_gauss_law(flux: &[bool], occupancy: &[bool]) -> Result<()> {
    let n = flux.len();
    if occupancy.len() != n {
        return Err(QecError::Dimension { expected: n, got: occupancy.len() });
    }
    for s in 0..n {
        if flux[s] ^ flux[(s + 1) % n] ^ occupancy[s] {
            return Err(QecError::GaugeViolation { site: s });
        }
    }
    Ok(())
}

/// Prepares the encoded gauge-invariant state for the flux and occupancy
/// assignment: every register of a link gets the link's value, sites get
/// the occupancy, then each block is phase-flip encoded.
pub fn build_physical_state_1d(lat: &Lattice1D, flux: &[bool], occupancy: &[bool], payload: Payload) -> Result<Circuit> {
    if flux.len() != lat.num_links() {
        return Err(QecError::Dimension { expected: lat.num_links(), got: flux.len() });
    }
    check_gauss_law(flux, occupancy)?;
    if lat.scheme.matter == Matter::Pure && occupancy.iter().any(|&o| o) {
        return Err(QecError::Config("pure gauge lattice with occupied sites".into()));
    }
    let mut b = CircuitBuilder::new(lat.num_qubits());
    b.label("state preparation");
    let links: Vec<Block> = (0..lat.num_links()).flat_map(|l| lat.link_blocks(l)).collect();
    if payload.wilson {
        b.h(links[0].first());
        for blk in &links[1..] {
            b.cnot(links[0].first(), blk.first());
        }
    }
    if payload.hopping && lat.has_sites() {
        let s0 = lat.site_block(0).first();
        b.h(s0).cnot(s0, lat.site_block(1).first());
        for blk in lat.link_blocks(1) {
            b.cnot(s0, blk.first());
        }
    }
    for l in 0..lat.num_links() {
        if flux[l] {
            for blk in lat.link_blocks(l) {
                b.x(blk.first());
            }
        }
    }
    if lat.has_sites() {
        for (s, &occ) in occupancy.iter().enumerate() {
            if occ {
                b.x(lat.site_block(s).first());
            }
        }
    }
    for (_, blk) in lat.data_roles() {
        codes::encode_phaseflip(&mut b, qubits3(blk));
    }
    Ok(b.finish())
}

fn qubits3(b: Block) -> [usize; 3] {
    [b.start, b.start + 1, b.start + 2]
}

/// Accumulates a round.
pub struct RoundBuilder<'a, L> {
    pub lat: &'a Lattice1D,
    pub b: CircuitBuilder,
    pub detectors: Vec<Detector<L>>,
    pub flags: Vec<usize>,
}

impl<'a> RoundBuilder<'a, ErrorLocation1D> {
    pub fn new(lat: &'a Lattice1D) -> Self {
        Self { lat, b: CircuitBuilder::new(lat.num_qubits()), detectors: Vec::new(), flags: Vec::new() }
    }

    pub fn finish(self) -> Round<ErrorLocation1D> {
        Round { circuit: self.b.finish(), detectors: self.detectors, flags: self.flags }
    }

    fn logical_x(&mut self, blk: Block, cond: &Condition) {
        for q in blk.qubits() {
            self.b.cond_x(q, cond.clone());
        }
    }

    fn detect(&mut self, cond: Condition, location: ErrorLocation1D) {
        self.detectors.push(Detector { cond, location });
    }

    fn parity(&mut self, operands: &[Operand], syndrome: usize) -> usize {
        let (s, f) = codes::measure_parity(&mut self.b, operands, syndrome, self.lat.flag());
        self.flags.push(f);
        s
    }

    /// Table-II round over a three-member repetition code of link blocks.
    /// `flips` are classical bits XORed into the two syndromes first.
    fn triple_round(&mut self, members: [Block; 3], locations: [ErrorLocation1D; 3], flips: [Option<usize>; 2]) {
        let s1 = self.parity(&[Operand::from_block(members[0]), Operand::from_block(members[1])], self.lat.syndrome(0));
        let s2 = self.parity(&[Operand::from_block(members[1]), Operand::from_block(members[2])], self.lat.syndrome(1));
        for (bit, flip) in [s1, s2].into_iter().zip(flips) {
            if let Some(f) = flip {
                self.b.flip(bit, Some(Condition::bit(f)));
            }
        }
        for m in 0..3 {
            let cond = codes::member_condition(s1, s2, m);
            self.logical_x(members[m], &cond);
            self.detect(cond, locations[m]);
        }
    }
}

/// Allocates one classical bit per site holding the static occupancy.
pub fn occupancy_register(b: &mut CircuitBuilder, occupancy: &[bool]) -> Vec<usize> {
    let bits = b.alloc_bits(occupancy.len());
    for (&bit, &occ) in bits.iter().zip(occupancy) {
        if occ {
            b.flip(bit, None);
        }
    }
    bits
}

/// Bit-flip round over `(L_{2k} copy 1, L_{2k} copy 2, L_{2k+1})`.
pub fn pure_gauge_round(r: &mut RoundBuilder<ErrorLocation1D>, k: usize) {
    r.b.label(format!("pure-gauge round k={k}"));
    let lat = r.lat;
    let (e, o) = (2 * k, 2 * k + 1);
    let even = lat.link_blocks(e);
    r.triple_round(
        [even[0], even[1], lat.link_block(o)],
        [ErrorLocation1D::EvenLinkCopy(e, 1), ErrorLocation1D::EvenLinkCopy(e, 2), ErrorLocation1D::OddLink(o)],
        [None, None],
    );
}

/// Overlapping round over the bare links `(L_{2k}, L_{2k+1}, L_{2k+2})`.
/// With static charges the syndromes are shifted by the occupancy of sites
/// `2k` and `2k+1`.
pub fn pure_gauge_overlap_round(r: &mut RoundBuilder<ErrorLocation1D>, k: usize, occupancy_bits: Option<&[usize]>) {
    r.b.label(format!("overlap round k={k}"));
    let lat = r.lat;
    let ls = [2 * k, 2 * k + 1, 2 * k + 2];
    let flips = match occupancy_bits {
        Some(occ) => [Some(occ[ls[0] % occ.len()]), Some(occ[ls[1] % occ.len()])],
        None => [None, None],
    };
    r.triple_round(ls.map(|l| lat.link_block(l)), ls.map(|l| ErrorLocation1D::Link(l % lat.num_links())), flips);
}

/// Static-charge round at even site `2k`: the occupancy bit stands in for
/// the site register.
pub fn nondynamical_round(r: &mut RoundBuilder<ErrorLocation1D>, k: usize, occupancy_bit: usize, opts: Options1D) {
    r.b.label(format!("static-charge round k={k}"));
    let lat = r.lat;
    let (e, o) = (2 * k, 2 * k + 1);
    let even = lat.link_blocks(e);
    let odd = lat.link_block(o);
    let occ = Condition::bit(occupancy_bit);
    let locations =
        [ErrorLocation1D::EvenLinkCopy(e, 1), ErrorLocation1D::EvenLinkCopy(e, 2), ErrorLocation1D::OddLink(o)];
    if opts.simplified_static {
        r.triple_round([even[0], even[1], odd], locations, [None, Some(occupancy_bit)]);
    } else {
        r.logical_x(odd, &occ);
        r.triple_round([even[0], even[1], odd], locations, [None, None]);
        r.logical_x(odd, &occ);
    }
}

/// Transversal CNOT from the site block onto every register of its right
/// link: the cutoff-1 site-controlled link lowering. Self-inverse.
pub fn w_s(lat: &Lattice1D, b: &mut CircuitBuilder, s: usize) {
    let site = lat.site_block(s);
    for link in lat.link_blocks(s + 1) {
        for (c, t) in site.qubits().zip(link.qubits()) {
            b.cnot(c, t);
        }
    }
}

/// Syndrome bits of one doubled dynamical check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckBits {
    pub site: usize,
    pub bits: [usize; 2],
}

/// Gauss check at site `j` of the doubled dynamical layout. The proxy holds
/// the parity of the site and the adjacent odd link, which equals the even
/// link on the other side; it is compared against both copies of that even
/// link. Copy errors are corrected here; the `11` outcome is left for
/// [`dynamical_deferred`].
pub fn dynamical_check(r: &mut RoundBuilder<ErrorLocation1D>, j: usize) -> CheckBits {
    r.b.label(format!("gauss check site={j}"));
    let lat = r.lat;
    let (odd, even) = if j % 2 == 1 { (j, j + 1) } else { (j + 1, j) };
    let even = even % lat.num_links();
    let proxy = lat.proxy();
    let sources = [Operand::from_block(lat.site_block(j)), Operand::from_block(lat.link_block(odd))];
    r.b.reset(proxy);
    let f = codes::flagged_parity(&mut r.b, &sources, proxy, lat.flag());
    r.flags.push(f);
    let copies = lat.link_blocks(even);
    let b1 = r.parity(&[Operand::Qubit(proxy), Operand::from_block(copies[0])], lat.syndrome(0));
    let b2 = r.parity(&[Operand::Qubit(proxy), Operand::from_block(copies[1])], lat.syndrome(1));
    for (c, pattern) in [(1u8, [true, false]), (2u8, [false, true])] {
        let cond = Condition::pattern(&[b1, b2], &pattern);
        r.logical_x(copies[c as usize - 1], &cond);
        r.detect(cond, ErrorLocation1D::EvenLinkCopy(even, c));
    }
    let f = codes::flagged_parity(&mut r.b, &sources, proxy, lat.flag());
    r.flags.push(f);
    r.b.reset(proxy);
    CheckBits { site: j, bits: [b1, b2] }
}

/// Resolves the pair `(G_{2k+1}, G_{2k})` once both checks are recorded.
pub fn dynamical_deferred(r: &mut RoundBuilder<ErrorLocation1D>, k: usize, odd: CheckBits, even: CheckBits) {
    r.b.label(format!("deferred decode k={k}"));
    let lat = r.lat;
    let all = [odd.bits[0], odd.bits[1], even.bits[0], even.bits[1]];
    let cases = [
        ([false, false, true, true], lat.site_block(2 * k), ErrorLocation1D::Site(2 * k)),
        ([true, true, false, false], lat.site_block(2 * k + 1), ErrorLocation1D::Site(2 * k + 1)),
        ([true, true, true, true], lat.link_block(2 * k + 1), ErrorLocation1D::OddLink(2 * k + 1)),
    ];
    for (pattern, blk, loc) in cases {
        let cond = Condition::pattern(&all, &pattern);
        r.logical_x(blk, &cond);
        r.detect(cond, loc);
    }
}

/// Fresh measurement of `G_s` for the compressed dynamical layout.
fn compressed_check(r: &mut RoundBuilder<ErrorLocation1D>, s: usize, syndrome: usize) -> usize {
    let lat = r.lat;
    let ops = [
        Operand::from_block(lat.link_block(s)),
        Operand::from_block(lat.link_block(s + 1)),
        Operand::from_block(lat.site_block(s)),
    ];
    r.parity(&ops, syndrome)
}

/// Three overlapping checks centred at site `s`, decoded and corrected at
/// once. The patterns `100` and `001` point outside the window and are left
/// to the neighbouring windows.
pub fn compressed_window(r: &mut RoundBuilder<ErrorLocation1D>, s: usize) -> [usize; 3] {
    r.b.label(format!("overlap window site={s}"));
    let lat = r.lat;
    let sites = lat.num_sites();
    let g: Vec<usize> =
        (0..3).map(|i| compressed_check(r, (s + sites - 1 + i) % sites, lat.syndrome(i))).collect();
    for pattern in [[false, true, true], [false, true, false], [true, true, false], [true, false, true], [true, true, true]] {
        let cond = Condition::pattern(&g, &pattern);
        let loc = decode_compressed(s, sites, pattern);
        match loc {
            ErrorLocation1D::Link(l) => {
                let blk = lat.link_block(l);
                r.logical_x(blk, &cond);
                r.detect(cond, ErrorLocation1D::link_in(lat, l));
            }
            ErrorLocation1D::Site(j) => {
                let blk = lat.site_block(j);
                r.logical_x(blk, &cond);
                r.detect(cond, loc);
            }
            _ => r.detect(cond, loc),
        }
    }
    [g[0], g[1], g[2]]
}

/// Phase-correction pass over every data block.
pub fn phase_pass(r: &mut RoundBuilder<ErrorLocation1D>) {
    r.b.label("phase pass");
    let lat = r.lat;
    let anc = [lat.syndrome(0), lat.syndrome(1)];
    for (_, blk) in lat.data_roles() {
        codes::phase_correct(&mut r.b, qubits3(blk), anc);
    }
}

/// The Gauss layer of one correction round for the lattice's scheme.
pub fn gauss_round(r: &mut RoundBuilder<ErrorLocation1D>, occupancy: &[bool], opts: Options1D) {
    let lat = r.lat;
    let n = lat.n;
    match (lat.scheme.matter, lat.scheme.variant) {
        (Matter::Pure, Variant::Doubled) => (0..n).for_each(|k| pure_gauge_round(r, k)),
        (Matter::NonDynamical, Variant::Doubled) => {
            let occ = occupancy_register(&mut r.b, occupancy);
            (0..n).for_each(|k| nondynamical_round(r, k, occ[2 * k], opts));
        }
        (Matter::Pure, Variant::Compressed) => (0..n).for_each(|k| pure_gauge_overlap_round(r, k, None)),
        (Matter::NonDynamical, Variant::Compressed) => {
            let occ = occupancy_register(&mut r.b, occupancy);
            (0..n).for_each(|k| pure_gauge_overlap_round(r, k, Some(&occ)));
        }
        (Matter::Dynamical, Variant::Doubled) => {
            let checks: Vec<CheckBits> = (0..lat.num_sites()).map(|j| dynamical_check(r, j)).collect();
            for k in 0..n {
                dynamical_deferred(r, k, checks[2 * k + 1], checks[2 * k]);
            }
        }
        (Matter::Dynamical, Variant::Compressed) => (0..lat.num_sites()).for_each(|s| {
            compressed_window(r, s);
        }),
        _ => unreachable!("layout validated at build"),
    }
}

/// Bare ancillas back to `|0>`.
pub fn reset_ancillas(lat: &Lattice1D, b: &mut CircuitBuilder) {
    for (_, blk) in &lat.registry()[lat.data_roles().len()..] {
        b.reset(blk.start);
    }
}

/// Phase pass, Gauss round, ancilla reset.
pub fn correction_cycle(lat: &Lattice1D, occupancy: &[bool], opts: Options1D) -> Round<ErrorLocation1D> {
    let mut r = RoundBuilder::new(lat);
    phase_pass(&mut r);
    gauss_round(&mut r, occupancy, opts);
    reset_ancillas(lat, &mut r.b);
    r.finish()
}

/// Gauss round only (no phase pass), followed by the ancilla reset.
pub fn gauss_cycle(lat: &Lattice1D, occupancy: &[bool], opts: Options1D) -> Round<ErrorLocation1D> {
    let mut r = RoundBuilder::new(lat);
    gauss_round(&mut r, occupancy, opts);
    reset_ancillas(lat, &mut r.b);
    r.finish()
}

/// A fixed gauge-invariant assignment used by tests and sweeps: with
/// dynamical matter sites 0 and 1 are occupied and link 1 carries flux; with
/// static charges the same occupancy is used; pure gauge is flux-free.
pub fn reference_assignment(lat: &Lattice1D) -> (Vec<bool>, Vec<bool>) {
    let sites = lat.num_sites();
    let mut flux = vec![false; sites];
    let mut occ = vec![false; sites];
    if lat.scheme.matter != Matter::Pure {
        occ[0] = true;
        occ[1] = true;
        flux[1] = true;
    }
    (flux, occ)
}

/// Literal helper for callers assembling their own conditions.
pub fn lit(bit: usize, value: bool) -> Literal {
    Literal { bit, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run_tableau;
    use crate::lattice::{Dimension, SchemeId};

    fn lat(m: Matter, v: Variant, n: usize) -> Lattice1D {
        Lattice1D::build(n, SchemeId::new(Dimension::One, m, v)).unwrap()
    }

    #[test]
    fn gauss_law_validation() {
        assert!(check_gauss_law(&[false, true], &[true, true]).is_ok());
        assert_eq!(check_gauss_law(&[false, true], &[false, false]), Err(QecError::GaugeViolation { site: 0 }));
    }

    #[test]
    fn prepared_state_satisfies_every_check() {
        for scheme in SchemeId::all_1d() {
            for n in [1, 2] {
                let lat = Lattice1D::build(n, scheme).unwrap();
                let (flux, occ) = reference_assignment(&lat);
                let c = build_physical_state_1d(&lat, &flux, &occ, Payload::FULL).unwrap();
                let (t, _) = run_tableau(&c, 0).unwrap();
                for s in 0..lat.num_sites() {
                    let (g, sign) = lat.gauss_check_operator(s, occ[s]);
                    assert_eq!(t.expectation(&g), sign, "{scheme} N={n} site {s}");
                }
            }
        }
    }

    #[test]
    fn decoder_tables() {
        assert_eq!(decode_dynamical(0, [false, false], [true, true]), ErrorLocation1D::Site(0));
        assert_eq!(decode_dynamical(1, [true, true], [false, false]), ErrorLocation1D::Site(3));
        assert_eq!(decode_dynamical(1, [true, true], [true, true]), ErrorLocation1D::OddLink(3));
        assert_eq!(decode_compressed(1, 4, [false, true, true]), ErrorLocation1D::Link(2));
        assert_eq!(decode_compressed(1, 4, [true, false, true]), ErrorLocation1D::MultiError);
    }

    #[test]
    fn w_s_is_an_involution_on_basis_states() {
        let lat = lat(Matter::Dynamical, Variant::Doubled, 1);
        for bits in 0..8u8 {
            let (site, left, right) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
            let mut b = CircuitBuilder::new(lat.num_qubits());
            if site {
                b.x(lat.site_block(0).first());
            }
            for (l, v) in [(0, left), (1, right)] {
                if v {
                    for blk in lat.link_blocks(l) {
                        b.x(blk.first());
                    }
                }
            }
            for (_, blk) in lat.data_roles() {
                codes::encode_phaseflip(&mut b, qubits3(blk));
            }
            let before = run_tableau(b.circuit(), 0).unwrap().0;
            w_s(&lat, &mut b, 0);
            let once = run_tableau(b.circuit(), 0).unwrap().0;
            let z = lat.logical_z(lat.link_block(1));
            assert_eq!(once.expectation(&z) == -1, right ^ site);
            w_s(&lat, &mut b, 0);
            assert!(run_tableau(b.circuit(), 0).unwrap().0.same_state(&before));
        }
    }

    #[test]
    fn clean_cycle_is_trivial() {
        for scheme in SchemeId::all_1d() {
            let lat = Lattice1D::build(2, scheme).unwrap();
            let (flux, occ) = reference_assignment(&lat);
            let prep = build_physical_state_1d(&lat, &flux, &occ, Payload::FULL).unwrap();
            let cycle = correction_cycle(&lat, &occ, Options1D::default());
            let (before, _) = run_tableau(&prep, 0).unwrap();
            let (after, rec) = run_tableau(&Circuit::compose([&prep, &cycle.circuit]), 0).unwrap();
            assert!(cycle.decoded(&rec.bits).is_empty(), "{scheme}");
            assert!(!cycle.flagged(&rec.bits));
            assert!(after.same_state(&before), "{scheme}");
        }
    }
}
