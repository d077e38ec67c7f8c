use gaussqec::circuit::{emit_text, execute, parse_text, run_dense, run_tableau, Circuit};
use gaussqec::dense::MAX_DENSE_QUBITS;
use gaussqec::engine::SeededOutcomes;
use gaussqec::harness::Protocol;
use gaussqec::lattice::{Dimension, Matter, SchemeId, Variant};

fn protocols() -> Vec<Protocol> {
    let mut v: Vec<Protocol> = SchemeId::all_1d()
        .into_iter()
        .flat_map(|s| [1, 2].map(|n| Protocol::build(s, &[n]).unwrap()))
        .collect();
    v.extend(SchemeId::all_2d().into_iter().map(|s| Protocol::build(s, &[1, 1]).unwrap()));
    v
}

#[test]
fn pure_gauge_cycle_golden_prefix() {
    let p = Protocol::build(SchemeId::new(Dimension::One, Matter::Pure, Variant::Doubled), &[1]).unwrap();
    let text = emit_text(&p.cycle.circuit);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "#! qubits 12 bits 10");
    assert_eq!(&lines[1..7], ["# phase pass", "RESET q9", "H q9", "CNOT q9 q0", "CNOT q9 q1", "H q9"]);
    assert!(lines.contains(&"# pure-gauge round k=0"));
    let round = lines.iter().position(|l| *l == "# pure-gauge round k=0").unwrap();
    assert!(lines[round + 1..].iter().any(|l| l.starts_with("IF_X q")));
}

#[test]
fn every_scheme_round_trips_through_text() {
    for p in protocols() {
        for c in [&p.prep, &p.cycle.circuit] {
            let back = parse_text(&emit_text(c)).unwrap();
            assert_eq!(&back, c, "{}", p.scheme);
        }
    }
}

#[test]
fn text_round_trip_preserves_behaviour() {
    let p = Protocol::build(SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Doubled), &[1]).unwrap();
    let c = p.full_circuit();
    let back: Circuit = parse_text(&emit_text(&c)).unwrap();
    assert_eq!(run_tableau(&c, 3).unwrap().1, run_tableau(&back, 3).unwrap().1);
}

#[test]
fn engines_agree_on_every_small_scheme() {
    for p in protocols().into_iter().filter(|p| p.num_qubits() <= MAX_DENSE_QUBITS) {
        let c = p.full_circuit();
        let (t, trec) = run_tableau(&c, 9).unwrap();
        let (d, drec) = run_dense(&c, 9).unwrap();
        assert_eq!(trec.bits, drec.bits, "{}", p.scheme);
        for s in t.stabilizers() {
            assert!((d.expectation(&s) - 1.0).abs() < 1e-9, "{} {s}", p.scheme);
        }
    }
}

#[test]
fn cycles_are_idempotent_on_clean_states() {
    for p in protocols() {
        let (mut t, _) = run_tableau(&p.prep, 0).unwrap();
        let before = t.clone();
        for _ in 0..2 {
            let rec = execute(&p.cycle.circuit, &mut t, &mut SeededOutcomes::new(4)).unwrap();
            assert!(p.cycle.decoded(&rec.bits).is_empty(), "{}", p.scheme);
        }
        assert!(t.same_state(&before), "{}", p.scheme);
    }
}
