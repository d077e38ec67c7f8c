//! Line-oriented text form. `parse_text(&emit_text(c)) == c` for every valid
//! circuit.
//!
//! ```text
//! #! qubits 4 bits 2
//! # label text
//! H q0
//! CNOT q0 q1
//! MZ q1 -> c0
//! MX q2 -> c1
//! RESET q3
//! IF_X q0 ?c0&!c1
//! IF_Z q0 ?c1
//! FLIP -> c1 ?c0
//! ```

use std::fmt::Write;

use super::{Circuit, Condition, Gate, Literal};
use crate::error::{QecError, Result};

fn cond_text(c: &Condition) -> String {
    let parts: Vec<String> = c.0.iter().map(|l| format!("{}c{}", if l.value { "" } else { "!" }, l.bit)).collect();
    format!("?{}", parts.join("&"))
}

pub fn emit_text(c: &Circuit) -> String {
    let mut out = String::new();
    if c.n == 0 && c.m == 0 && c.gates.is_empty() && c.labels.is_empty() {
        return out;
    }
    let _ = writeln!(out, "#! qubits {} bits {}", c.n, c.m);
    let mut labels = c.labels.iter().peekable();
    for i in 0..=c.gates.len() {
        while let Some((_, text)) = labels.next_if(|(at, _)| *at == i) {
            let _ = writeln!(out, "# {text}");
        }
        let Some(g) = c.gates.get(i) else { break };
        let _ = match g {
            Gate::H(q) => writeln!(out, "H q{q}"),
            Gate::X(q) => writeln!(out, "X q{q}"),
            Gate::Z(q) => writeln!(out, "Z q{q}"),
            Gate::Cnot(a, b) => writeln!(out, "CNOT q{a} q{b}"),
            Gate::MeasureZ { qubit, bit } => writeln!(out, "MZ q{qubit} -> c{bit}"),
            Gate::MeasureX { qubit, bit } => writeln!(out, "MX q{qubit} -> c{bit}"),
            Gate::Reset(q) => writeln!(out, "RESET q{q}"),
            Gate::ClassicallyControlledX { qubit, cond } => writeln!(out, "IF_X q{qubit} {}", cond_text(cond)),
            Gate::ClassicallyControlledZ { qubit, cond } => writeln!(out, "IF_Z q{qubit} {}", cond_text(cond)),
            Gate::ClassicalFlip { bit, cond: None } => writeln!(out, "FLIP -> c{bit}"),
            Gate::ClassicalFlip { bit, cond: Some(cnd) } => writeln!(out, "FLIP -> c{bit} {}", cond_text(cnd)),
        };
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> QecError {
    QecError::Parse { line, msg: msg.into() }
}

fn index(tok: Option<&str>, prefix: char, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| err(line, "missing operand"))?;
    tok.strip_prefix(prefix)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(line, format!("expected {prefix}<index>, got {tok:?}")))
}

fn parse_cond(tok: Option<&str>, line: usize) -> Result<Condition> {
    let tok = tok.ok_or_else(|| err(line, "missing condition"))?;
    let body = tok.strip_prefix('?').ok_or_else(|| err(line, format!("bad condition {tok:?}")))?;
    let mut lits = Vec::new();
    for part in body.split('&') {
        let (value, rest) = match part.strip_prefix('!') {
            Some(r) => (false, r),
            None => (true, part),
        };
        lits.push(Literal { bit: index(Some(rest), 'c', line)?, value });
    }
    Ok(Condition(lits))
}

fn arrow(tok: Option<&str>, line: usize) -> Result<()> {
    match tok {
        Some("->") => Ok(()),
        other => Err(err(line, format!("expected '->', got {other:?}"))),
    }
}

/// Parses the text form. Without a header, widths are inferred from the
/// largest index used.
pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut c = Circuit::default();
    let mut header: Option<(usize, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if let Some(h) = raw.strip_prefix("#!") {
            let t: Vec<&str> = h.split_whitespace().collect();
            match t.as_slice() {
                ["qubits", n, "bits", m] => {
                    let n = n.parse().map_err(|_| err(line, "bad qubit count"))?;
                    let m = m.parse().map_err(|_| err(line, "bad bit count"))?;
                    header = Some((n, m));
                }
                _ => return Err(err(line, "bad header")),
            }
            continue;
        }
        if let Some(l) = raw.strip_prefix('#') {
            c.labels.push((c.gates.len(), l.strip_prefix(' ').unwrap_or(l).to_string()));
            continue;
        }
        let mut t = raw.split_whitespace();
        let Some(op) = t.next() else { continue };
        let g = match op {
            "H" => Gate::H(index(t.next(), 'q', line)?),
            "X" => Gate::X(index(t.next(), 'q', line)?),
            "Z" => Gate::Z(index(t.next(), 'q', line)?),
            "CNOT" => Gate::Cnot(index(t.next(), 'q', line)?, index(t.next(), 'q', line)?),
            "MZ" | "MX" => {
                let qubit = index(t.next(), 'q', line)?;
                arrow(t.next(), line)?;
                let bit = index(t.next(), 'c', line)?;
                if op == "MZ" {
                    Gate::MeasureZ { qubit, bit }
                } else {
                    Gate::MeasureX { qubit, bit }
                }
            }
            "RESET" => Gate::Reset(index(t.next(), 'q', line)?),
            "IF_X" => Gate::ClassicallyControlledX { qubit: index(t.next(), 'q', line)?, cond: parse_cond(t.next(), line)? },
            "IF_Z" => Gate::ClassicallyControlledZ { qubit: index(t.next(), 'q', line)?, cond: parse_cond(t.next(), line)? },
            "FLIP" => {
                arrow(t.next(), line)?;
                let bit = index(t.next(), 'c', line)?;
                let cond = match t.next() {
                    Some(tok) => Some(parse_cond(Some(tok), line)?),
                    None => None,
                };
                Gate::ClassicalFlip { bit, cond }
            }
            other => return Err(err(line, format!("unknown gate {other:?}"))),
        };
        if let Some(extra) = t.next() {
            return Err(err(line, format!("trailing token {extra:?}")));
        }
        c.gates.push(g);
    }
    match header {
        Some((n, m)) => {
            c.n = n;
            c.m = m;
        }
        None => {
            c.n = c.gates.iter().flat_map(|g| g.qubits()).max().map_or(0, |q| q + 1);
            let bits = c.gates.iter().flat_map(|g| {
                g.written_bit().into_iter().chain(g.condition().into_iter().flat_map(|k| k.bits().collect::<Vec<_>>()))
            });
            c.m = bits.max().map_or(0, |b| b + 1);
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_round_trip() {
        assert_eq!(emit_text(&Circuit::default()), "");
        assert_eq!(parse_text("").unwrap(), Circuit::default());
    }

    #[test]
    fn sample_round_trip() {
        let text = "#! qubits 4 bits 2\n# label text\nH q0\nCNOT q0 q1\nMZ q1 -> c0\nMX q2 -> c1\nRESET q3\nIF_X q0 ?c0&!c1\nIF_Z q0 ?c1\nFLIP -> c1 ?c0\nFLIP -> c0\n# trailing\n";
        let c = parse_text(text).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(emit_text(&c), text);
    }

    #[test]
    fn errors_carry_line() {
        assert_eq!(parse_text("H q0\nFOO q1").unwrap_err(), QecError::Parse { line: 2, msg: "unknown gate \"FOO\"".into() });
        assert!(parse_text("MZ q0 c1").is_err());
        assert!(parse_text("H q0 q1").is_err());
    }
}
