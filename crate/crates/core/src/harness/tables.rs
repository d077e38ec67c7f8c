//! Syndrome lookups regenerated by simulation and compared with the
//! reference transcriptions below.
//!
//! Every lookup maps a row of check outcomes to the set of single-register
//! errors producing it. Sign cells read `+`/`-` (eigenvalue of the bare Z
//! product), bit cells read `0`/`1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::{execute, Circuit, CircuitBuilder};
use crate::codes::{bitflip_correct, decode_bitflip, encode_bitflip, BitFlipSyndrome};
use crate::dense::{fidelity, DenseState};
use crate::engine::{Engine, SeededOutcomes};
use crate::error::Result;
use crate::lattice::{Block, Dimension, Lattice1D, Lattice2D, Matter, Role1D, SchemeId, Variant};
use crate::qec1d::{self, ErrorLocation1D, Payload, RoundBuilder};
use crate::qec2d::{self, Assignment2D, Payload2D, Plaquette, PlaquetteTable, RoundBuilder2D, LOCAL_MASK};
use crate::tableau::StabilizerTableau;

/// Whether a lookup is compared cell for cell or as flips against its
/// clean row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    Exact,
    RelativeToClean,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lookup {
    pub name: &'static str,
    pub columns: Vec<String>,
    /// Row key (cells joined by spaces) to locations.
    pub rows: BTreeMap<String, BTreeSet<String>>,
}

pub const CLEAN: &str = "none";
pub const MULTI: &str = "2+";

impl Lookup {
    fn new(name: &'static str, columns: &[&str]) -> Self {
        Self { name, columns: columns.iter().map(|s| s.to_string()).collect(), rows: BTreeMap::new() }
    }

    /// Parses `cells | loc, loc` lines; blank lines are skipped.
    pub fn parse(name: &'static str, columns: &[&str], text: &str) -> Self {
        let mut t = Self::new(name, columns);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (cells, locs) = line.split_once('|').expect("row needs a '|'");
            let cells: Vec<String> = cells.split_whitespace().map(String::from).collect();
            assert_eq!(cells.len(), columns.len(), "row width in {name}: {line}");
            t.insert(&cells, locs.split(',').map(|s| s.trim().to_string()));
        }
        t
    }

    fn insert(&mut self, cells: &[String], locs: impl IntoIterator<Item = String>) {
        self.rows.entry(cells.join(" ")).or_default().extend(locs);
    }

    /// Rewrites every key as `.`/`*` (same/flipped) against the clean row.
    pub fn relative(&self) -> Self {
        let clean: Vec<&str> = self
            .rows
            .iter()
            .find(|(_, v)| v.len() == 1 && v.contains(CLEAN))
            .map(|(k, _)| k.split(' ').collect())
            .unwrap_or_default();
        let mut t = Self::new(self.name, &[]);
        t.columns = self.columns.clone();
        for (k, v) in &self.rows {
            let cells: Vec<String> = k
                .split(' ')
                .enumerate()
                .map(|(i, c)| if clean.get(i) == Some(&c) { ".".into() } else { "*".into() })
                .collect();
            t.insert(&cells, v.iter().cloned());
        }
        t
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}\n  {}\n", self.name, self.columns.join(" "));
        for (k, v) in &self.rows {
            let _ = writeln!(s, "  {k} | {}", v.iter().cloned().collect::<Vec<_>>().join(", "));
        }
        s
    }
}

/// Row-level differences, `-` for the reference and `+` for the
/// regenerated lookup.
pub fn diff(reference: &Lookup, generated: &Lookup) -> Vec<String> {
    let keys: BTreeSet<&String> = reference.rows.keys().chain(generated.rows.keys()).collect();
    let mut out = Vec::new();
    let show = |v: Option<&BTreeSet<String>>| match v {
        Some(v) => v.iter().cloned().collect::<Vec<_>>().join(", "),
        None => "(absent)".to_string(),
    };
    for k in keys {
        let (a, b) = (reference.rows.get(k), generated.rows.get(k));
        if a != b {
            out.push(format!("- {k} | {}", show(a)));
            out.push(format!("+ {k} | {}", show(b)));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LookupComparison {
    pub comparison: Comparison,
    pub reference: Lookup,
    pub generated: Lookup,
    pub diff: Vec<String>,
}

impl LookupComparison {
    fn new(comparison: Comparison, reference: Lookup, generated: Lookup) -> Self {
        let diff = match comparison {
            Comparison::Exact => diff(&reference, &generated),
            Comparison::RelativeToClean => diff(&reference.relative(), &generated.relative()),
        };
        Self { comparison, reference, generated, diff }
    }

    pub fn matches(&self) -> bool {
        self.diff.is_empty()
    }
}

// Reference transcriptions.

const BITFLIP_COLUMNS: [&str; 2] = ["Z1Z2", "Z2Z3"];
const BITFLIP_REFERENCE: &str = "
    + + | III
    + - | IIX
    - + | XII
    - - | IXI
";

const CHECK_PAIR_COLUMNS: [&str; 2] = ["G2k+1", "G2k"];
const CHECK_PAIR_REFERENCE: &str = "
    00 00 | none
    00 11 | S2k
    11 00 | S2k+1
    11 11 | L2k+1
";

const WINDOW_COLUMNS: [&str; 3] = ["G2k", "G2k+1", "G2k+2"];
const WINDOW_REFERENCE: &str = "
    0 0 0 | none
    0 1 1 | L2k+2
    0 1 0 | S2k+1
    1 1 0 | L2k+1
";

const SITE_COLUMNS: [&str; 3] = ["Pa00", "Pb00", "Pc00"];
const SITE_REFERENCE: &str = "
    + + + | none
    + + - | 2+
    + - + | 2+
    + - - | s00, Lx00, Ly10
    - + + | 2+
    - + - | A00
    - - + | Ly00, Lx01
    - - - | 2+
";

const PLAQUETTE_COLUMNS: [&str; 12] =
    ["Pa00", "Pb00", "Pc00", "Pa01", "Pb01", "Pc01", "Pa11", "Pb11", "Pc11", "Pa10", "Pb10", "Pc10"];
const PLAQUETTE_REFERENCE: &str = "
    + + + + - - + + + + - - | none
    + + + + - - + + + - - + | A10
    + + + + - - - + + + - - | A11
    + + + - - + + + + + - - | A01
    - + - + - - + + + + - - | A00
    + + + + - - + + + - + - | Lx10
    + + + + - - - - + + - - | Ly21
    + + + - + - + + + + - - | Lx02
    - - + + - - + + + + - - | Ly00
    + - - + - - + + + - + - | Ly10
    + + + + - - - - + + + + | Lx11
    + + + - + - - - + + - - | Ly11
    - - + + + + + + + + - - | Lx01
    + + + + - - + + + + + + | s10, Ly20
    + + + + - - + - - + - - | s11, Lx12
    + + + + + + + + + + - - | s01, Ly01
    + - - + - - + + + + - - | s00, Lx00
";

const EXTENDED_COLUMNS: [&str; 16] = [
    "Pa00", "Pb00", "Pc00", "Pa01", "Pb01", "Pc01", "Pa11", "Pb11", "Pc11", "Pa10", "Pb10", "Pc10", "Pa0-1", "Pa-11",
    "Pa12", "Pa20",
];
const EXTENDED_REFERENCE: &str = "
    + + + + - - + + + + + + + + + + | s10
    + + + + - - + - - + - - + + + + | s11
    + + + + + + + + + + - - + + + + | s01
    + - - + - - + + + + - - + + + + | s00
    + + + + - - + + + + + + + + + - | Ly20
    + + + + - - + - - + - - + + - + | Lx12
    + + + + + + + + + + - - + - + + | Ly01
    + - - + - - + + + + - - - + + + | Lx00
";

pub fn reference_bitflip() -> Lookup {
    Lookup::parse("bitflip-syndromes", &BITFLIP_COLUMNS, BITFLIP_REFERENCE)
}

pub fn reference_check_pair() -> Lookup {
    Lookup::parse("dynamical-check-pair", &CHECK_PAIR_COLUMNS, CHECK_PAIR_REFERENCE)
}

pub fn reference_window() -> Lookup {
    Lookup::parse("overlap-window", &WINDOW_COLUMNS, WINDOW_REFERENCE)
}

pub fn reference_site() -> Lookup {
    Lookup::parse("site-checks", &SITE_COLUMNS, SITE_REFERENCE)
}

pub fn reference_plaquette() -> Lookup {
    Lookup::parse("plaquette", &PLAQUETTE_COLUMNS, PLAQUETTE_REFERENCE)
}

pub fn reference_extended() -> Lookup {
    Lookup::parse("plaquette-extended", &EXTENDED_COLUMNS, EXTENDED_REFERENCE)
}

// Regeneration.

fn sign(bit: bool) -> String {
    if bit { "-" } else { "+" }.to_string()
}

fn digit(bit: bool) -> String {
    if bit { "1" } else { "0" }.to_string()
}

fn x_block<E: Engine + ?Sized>(e: &mut E, blk: Block) {
    for q in blk.qubits() {
        e.x(q);
    }
}

/// Three-qubit bit-flip code: every single X plus the clean run, each
/// decoded and checked to return the encoded payload.
pub fn generate_bitflip() -> Result<Lookup> {
    let mut prep = CircuitBuilder::new(5);
    prep.h(0);
    encode_bitflip(&mut prep, [0, 1, 2]);
    let prep = prep.finish();
    let mut round = CircuitBuilder::new(5);
    let bits = bitflip_correct(&mut round, [0, 1, 2], [3, 4]);
    round.reset(3).reset(4);
    let round = round.finish();

    let mut clean = DenseState::zero(5)?;
    execute(&prep, &mut clean, &mut SeededOutcomes::new(0))?;
    let mut t = Lookup::new("bitflip-syndromes", &BITFLIP_COLUMNS);
    for err in [None, Some(0), Some(1), Some(2)] {
        let mut s = clean.clone();
        if let Some(q) = err {
            s.x(q);
        }
        let rec = execute(&round, &mut s, &mut SeededOutcomes::new(0))?;
        let syn = BitFlipSyndrome::new(rec.bits[bits[0]], rec.bits[bits[1]]);
        let target = decode_bitflip(syn).target;
        let mut label: String = (0..3).map(|q| if Some(q) == target { 'X' } else { 'I' }).collect();
        if fidelity(&s, &clean)? < 1.0 - 1e-9 {
            label.push_str(" (unrecovered)");
        }
        t.insert(&[sign(syn.s1), sign(syn.s2)], [label]);
    }
    Ok(t)
}

/// Names relative to `k = 0`: index `i` prints as `2k` or `2k+i`.
fn symbolic(prefix: &str, i: usize) -> String {
    if i == 0 {
        format!("{prefix}2k")
    } else {
        format!("{prefix}2k+{i}")
    }
}

fn symbolic_1d(loc: ErrorLocation1D) -> String {
    match loc {
        ErrorLocation1D::Site(s) => symbolic("S", s),
        ErrorLocation1D::OddLink(l) | ErrorLocation1D::Link(l) => symbolic("L", l),
        other => other.to_string(),
    }
}

/// Runs `round` after a logical X on each listed register of the reference
/// state; returns `(location, bits)` per register, clean run first.
fn sweep_1d(lat: &Lattice1D, round: &Circuit, registers: &[(Role1D, Block)]) -> Result<Vec<(String, Vec<bool>)>> {
    let (flux, occ) = qec1d::reference_assignment(lat);
    let prep = qec1d::build_physical_state_1d(lat, &flux, &occ, Payload::FULL)?;
    let mut start = StabilizerTableau::new(lat.num_qubits());
    execute(&prep, &mut start, &mut SeededOutcomes::new(0))?;
    let mut out = Vec::new();
    let runs = std::iter::once(None).chain(registers.iter().map(Some));
    for reg in runs {
        let mut t = start.clone();
        if let Some(&(_, blk)) = reg {
            x_block(&mut t, blk);
        }
        let rec = execute(round, &mut t, &mut SeededOutcomes::new(0))?;
        let name = match reg {
            None => CLEAN.to_string(),
            Some(&(role, _)) => symbolic_1d(ErrorLocation1D::of_role_in(lat, role)),
        };
        out.push((name, rec.bits));
    }
    Ok(out)
}

/// The two doubled-layout checks at sites 0 and 1 for every site and odd
/// link, on the `N = 2` chain.
pub fn generate_check_pair() -> Result<Lookup> {
    let lat = Lattice1D::build(2, SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Doubled))?;
    let mut r = RoundBuilder::<ErrorLocation1D>::new(&lat);
    let g0 = qec1d::dynamical_check(&mut r, 0);
    let g1 = qec1d::dynamical_check(&mut r, 1);
    let round = r.finish().circuit;
    let registers: Vec<(Role1D, Block)> = lat
        .data_roles()
        .into_iter()
        .filter(|(role, _)| matches!(role, Role1D::Site(_) | Role1D::Link { copy: 0, .. }))
        .collect();
    let mut t = Lookup::new("dynamical-check-pair", &CHECK_PAIR_COLUMNS);
    for (name, bits) in sweep_1d(&lat, &round, &registers)? {
        let pair = |c: qec1d::CheckBits| format!("{}{}", digit(bits[c.bits[0]]), digit(bits[c.bits[1]]));
        let cells = [pair(g1), pair(g0)];
        if name == CLEAN || cells.iter().any(|c| c != "00") {
            t.insert(&cells, [name]);
        }
    }
    Ok(t)
}

/// The compressed window centred on site 1 for the site and its two links.
pub fn generate_window() -> Result<Lookup> {
    let lat = Lattice1D::build(2, SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Compressed))?;
    let mut r = RoundBuilder::<ErrorLocation1D>::new(&lat);
    let g = qec1d::compressed_window(&mut r, 1);
    let round = r.finish().circuit;
    let registers: Vec<(Role1D, Block)> = lat
        .data_roles()
        .into_iter()
        .filter(|(role, _)| matches!(role, Role1D::Site(1) | Role1D::Link { l: 1 | 2, .. }))
        .collect();
    let mut t = Lookup::new("overlap-window", &WINDOW_COLUMNS);
    for (name, bits) in sweep_1d(&lat, &round, &registers)? {
        t.insert(&g.map(|b| digit(bits[b])), [name]);
    }
    Ok(t)
}

/// Outcomes of the sixteen plaquette checks at corner `(0,0)` of the
/// dynamical `2x2` lattice after a logical X on each data register.
pub struct PlaquetteSweep {
    pub clean: Vec<bool>,
    pub registers: Vec<(String, Vec<bool>)>,
}

pub fn sweep_plaquette() -> Result<PlaquetteSweep> {
    let lat = Lattice2D::build(2, 2, SchemeId::new(Dimension::Two, Matter::Dynamical, Variant::FullAncilla))?;
    let a = Assignment2D::vacuum(&lat);
    let prep = qec2d::build_physical_state_2d(&lat, &a, Payload2D::FULL)?;
    let p = Plaquette { corner: (0, 0), round: 1 };
    let checks = PlaquetteTable::build(&lat, p, &a.static_charges).checks;
    let mut r = RoundBuilder2D::new(&lat);
    let bits = r.measure(&checks);
    let round = r.finish().circuit;
    let mut start = StabilizerTableau::new(lat.num_qubits());
    execute(&prep, &mut start, &mut SeededOutcomes::new(0))?;
    let run = |blk: Option<Block>| -> Result<Vec<bool>> {
        let mut t = start.clone();
        if let Some(blk) = blk {
            x_block(&mut t, blk);
        }
        let rec = execute(&round, &mut t, &mut SeededOutcomes::new(0))?;
        Ok(bits.iter().map(|&b| rec.bits[b]).collect())
    };
    let clean = run(None)?;
    let mut registers = Vec::new();
    for (role, blk) in qec2d::data_blocks(&lat) {
        let out = run(Some(blk))?;
        if out != clean {
            registers.push((role.to_string(), out));
        }
    }
    Ok(PlaquetteSweep { clean, registers })
}

fn signs(bits: &[bool]) -> Vec<String> {
    bits.iter().map(|&b| sign(b)).collect()
}

fn pattern(bits: &[bool], clean: &[bool], mask: u32) -> u32 {
    bits.iter().zip(clean).enumerate().filter(|&(i, (a, b))| a != b && mask >> i & 1 == 1).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Single-site lookup at `(0,0)`, every outcome listed.
pub fn generate_site(s: &PlaquetteSweep) -> Lookup {
    let mut t = Lookup::new("site-checks", &SITE_COLUMNS);
    for (name, bits) in &s.registers {
        if pattern(bits, &s.clean, 0b111) != 0 {
            t.insert(&signs(&bits[..3]), [name.clone()]);
        }
    }
    for m in 0..8u32 {
        let bits: Vec<bool> = (0..3).map(|i| s.clean[i] ^ (m >> i & 1 == 1)).collect();
        let key = signs(&bits);
        if !t.rows.contains_key(&key.join(" ")) {
            t.insert(&key, [if m == 0 { CLEAN } else { MULTI }.to_string()]);
        }
    }
    t
}

/// Twelve-check plaquette lookup over single errors.
pub fn generate_plaquette(s: &PlaquetteSweep) -> Lookup {
    let mut t = Lookup::new("plaquette", &PLAQUETTE_COLUMNS);
    t.insert(&signs(&s.clean[..12]), [CLEAN.to_string()]);
    for (name, bits) in &s.registers {
        if pattern(bits, &s.clean, LOCAL_MASK) != 0 {
            t.insert(&signs(&bits[..12]), [name.clone()]);
        }
    }
    t
}

/// Sixteen-check rows for every register left ambiguous by the twelve.
pub fn generate_extended(s: &PlaquetteSweep, plaquette: &Lookup) -> Lookup {
    let mut t = Lookup::new("plaquette-extended", &EXTENDED_COLUMNS);
    let ambiguous: BTreeSet<&String> = plaquette.rows.values().filter(|v| v.len() > 1).flatten().collect();
    for (name, bits) in &s.registers {
        if ambiguous.contains(name) {
            t.insert(&signs(bits), [name.clone()]);
        }
    }
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct TablesReport {
    pub lookups: Vec<LookupComparison>,
}

impl TablesReport {
    /// Lookups compared cell for cell all match.
    pub fn exact_match(&self) -> bool {
        self.lookups.iter().filter(|c| c.comparison == Comparison::Exact).all(LookupComparison::matches)
    }

    /// Text of every difference; stable across runs.
    pub fn diff_text(&self) -> String {
        let mut s = String::new();
        for c in &self.lookups {
            let mode = match c.comparison {
                Comparison::Exact => "exact",
                Comparison::RelativeToClean => "relative to the clean row",
            };
            let _ = writeln!(s, "[{}] compared {mode}: {}", c.reference.name, if c.matches() { "match" } else { "differs" });
            for line in &c.diff {
                let _ = writeln!(s, "{line}");
            }
        }
        s
    }
}

pub fn regenerate() -> Result<TablesReport> {
    let sweep = sweep_plaquette()?;
    let plaquette = generate_plaquette(&sweep);
    let extended = generate_extended(&sweep, &plaquette);
    let lookups = vec![
        LookupComparison::new(Comparison::Exact, reference_bitflip(), generate_bitflip()?),
        LookupComparison::new(Comparison::Exact, reference_check_pair(), generate_check_pair()?),
        LookupComparison::new(Comparison::Exact, reference_window(), generate_window()?),
        LookupComparison::new(Comparison::Exact, reference_site(), generate_site(&sweep)),
        LookupComparison::new(Comparison::RelativeToClean, reference_plaquette(), plaquette),
        LookupComparison::new(Comparison::RelativeToClean, reference_extended(), extended),
    ];
    Ok(TablesReport { lookups })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_relative() {
        let t = Lookup::parse("t", &["a", "b"], "+ - | none\n - - | x, y\n");
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows["- -"].len(), 2);
        let r = t.relative();
        assert!(r.rows.contains_key(". ."));
        assert!(r.rows.contains_key("* ."));
    }

    #[test]
    fn diff_reports_both_sides() {
        let a = Lookup::parse("t", &["a"], "+ | none\n- | x\n");
        let b = Lookup::parse("t", &["a"], "+ | none\n- | y\n");
        assert_eq!(diff(&a, &b), vec!["- - | x".to_string(), "+ - | y".to_string()]);
        assert!(diff(&a, &a).is_empty());
    }

    #[test]
    fn one_dimensional_lookups_regenerate() {
        assert_eq!(generate_bitflip().unwrap(), reference_bitflip());
        assert_eq!(generate_check_pair().unwrap(), reference_check_pair());
        assert_eq!(generate_window().unwrap(), reference_window());
    }
}
