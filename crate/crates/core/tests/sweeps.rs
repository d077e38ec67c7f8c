use std::collections::BTreeSet;

use gaussqec::circuit::{run_dense, run_tableau, EngineKind};
use gaussqec::harness::montecarlo::{sample, two_fault_census, two_fault_prediction, SampleConfig};
use gaussqec::harness::sweep::{cases, sweep, Domain};
use gaussqec::harness::{inject, FaultPauli, FaultSpec, Protocol};
use gaussqec::lattice::{Dimension, Matter, SchemeId, Variant};

fn dyn_doubled() -> Protocol {
    Protocol::build(SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Doubled), &[1]).unwrap()
}

#[test]
fn physical_domain_is_complete() {
    for p in [dyn_doubled(), Protocol::build(SchemeId::new(Dimension::Two, Matter::Pure, Variant::FullAncilla), &[1, 1]).unwrap()] {
        let all = cases(&p, Domain::PhysicalData);
        let seen: BTreeSet<(usize, String)> =
            all.iter().map(|c| (c.faults[0].qubit, format!("{:?}", c.faults[0].pauli))).collect();
        assert_eq!(seen.len(), all.len());
        assert_eq!(all.len(), 3 * p.data_qubits().len());
    }
}

#[test]
fn injected_x_gives_nontrivial_syndrome() {
    let p = dyn_doubled();
    let c = p.full_circuit();
    let clean = run_tableau(&c, 0).unwrap().1.bits;
    let q = p.data[0].block.start;
    let faulty = inject(&c, &FaultSpec { qubit: q, pauli: FaultPauli::X, position: p.fault_position() }).unwrap();
    assert_ne!(run_tableau(&faulty, 0).unwrap().1.bits, clean);
}

#[test]
fn y_matches_x_then_z_on_both_engines() {
    let p = dyn_doubled();
    let c = p.full_circuit();
    let at = p.fault_position();
    for q in p.data_qubits() {
        let y = inject(&c, &FaultSpec { qubit: q, pauli: FaultPauli::Y, position: at }).unwrap();
        let x = inject(&c, &FaultSpec { qubit: q, pauli: FaultPauli::X, position: at }).unwrap();
        let xz = inject(&x, &FaultSpec { qubit: q, pauli: FaultPauli::Z, position: at + 1 }).unwrap();
        assert_eq!(run_tableau(&y, 2).unwrap().1.bits, run_tableau(&xz, 2).unwrap().1.bits);
        assert_eq!(run_dense(&y, 2).unwrap().1.bits, run_dense(&xz, 2).unwrap().1.bits);
    }
}

#[test]
fn two_faults_in_one_window_miscorrect() {
    let p = Protocol::build(SchemeId::new(Dimension::One, Matter::Dynamical, Variant::Compressed), &[2]).unwrap();
    let r = sweep(&p, Domain::LogicalPairs, Some(EngineKind::Tableau), 0).unwrap();
    assert!(r.rows.iter().any(|row| !row.recovered));
}

#[test]
fn physical_sweep_engines_agree() {
    let p = dyn_doubled();
    let a = sweep(&p, Domain::PhysicalData, Some(EngineKind::Tableau), 0).unwrap();
    let b = sweep(&p, Domain::PhysicalData, Some(EngineKind::Dense), 0).unwrap();
    assert!(a.all_passed() && b.all_passed());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.decoded, y.decoded, "{}", x.case.label);
        assert!(y.fidelity.unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn sampling_is_deterministic_and_silent_at_zero() {
    let p = dyn_doubled();
    let cfg = SampleConfig { rates: vec![0.0, 0.02], shots: 2000, seed: 17 };
    let a = sample(&p, &cfg).unwrap();
    let b = sample(&p, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!((a.points[0].failures, a.points[0].nontrivial), (0, 0));
}

#[test]
fn sampled_rate_matches_two_fault_census() {
    let p = dyn_doubled();
    let (failing, total) = two_fault_census(&p, 0).unwrap();
    assert!(failing > 0 && failing < total);
    let rate = 1e-2;
    let shots = 100_000;
    let r = sample(&p, &SampleConfig { rates: vec![rate], shots, seed: 5 }).unwrap();
    let expected = two_fault_prediction(failing, p.data_qubits().len(), rate) * shots as f64;
    let observed = r.points[0].failures as f64;
    assert!((observed - expected).abs() <= 3.0 * expected.sqrt() + 3.0, "{observed} vs {expected}");
}
