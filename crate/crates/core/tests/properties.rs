use gaussqec::circuit::{emit_text, execute, parse_text};
use gaussqec::engine::SeededOutcomes;
use gaussqec::harness::crosscheck::{check_circuit, random_clifford};
use gaussqec::lattice::{Dimension, Lattice1D, Lattice2D, Matter, SchemeId, Variant};
use gaussqec::qec1d::{build_physical_state_1d, Payload};
use gaussqec::qec2d::{plaquettes, site_index, PlaquetteTable};
use gaussqec::rng::SplitMix64;
use gaussqec::tableau::StabilizerTableau;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_circuits_keep_a_valid_tableau(seed in any::<u64>()) {
        let c = random_clifford(&mut SplitMix64::new(seed));
        let mut t = StabilizerTableau::new(c.n);
        execute(&c, &mut t, &mut SeededOutcomes::new(seed ^ 1)).unwrap();
        prop_assert!(t.validate().is_ok());
    }

    #[test]
    fn random_circuits_agree_across_engines(seed in any::<u64>()) {
        let c = random_clifford(&mut SplitMix64::new(seed));
        prop_assert!(check_circuit(&c, seed, 0).unwrap().agrees());
    }

    #[test]
    fn random_circuits_round_trip_through_text(seed in any::<u64>()) {
        let c = random_clifford(&mut SplitMix64::new(seed));
        prop_assert_eq!(parse_text(&emit_text(&c)).unwrap(), c);
    }

    #[test]
    fn gauge_invariant_states_pass_every_check(
        n in 1usize..=3,
        flux_bits in any::<u8>(),
        wilson in any::<bool>(),
        hopping in any::<bool>(),
        variant in prop_oneof![Just(Variant::Doubled), Just(Variant::Compressed)],
    ) {
        // Flux is free; occupancy follows from it.
        let lat = Lattice1D::build(n, SchemeId::new(Dimension::One, Matter::Dynamical, variant)).unwrap();
        let sites = lat.num_sites();
        let flux: Vec<bool> = (0..sites).map(|i| flux_bits >> i & 1 == 1).collect();
        let occ: Vec<bool> = (0..sites).map(|s| flux[s] ^ flux[(s + 1) % sites]).collect();
        let prep = build_physical_state_1d(&lat, &flux, &occ, Payload { wilson, hopping }).unwrap();
        let mut t = StabilizerTableau::new(lat.num_qubits());
        execute(&prep, &mut t, &mut SeededOutcomes::new(0)).unwrap();
        for s in 0..sites {
            let (op, sign) = lat.gauss_check_operator(s, occ[s]);
            prop_assert_eq!(t.expectation(&op), sign);
        }
    }

    #[test]
    fn static_charges_only_shift_baselines(charges in any::<u16>(), round in 1u8..=2) {
        let lat = Lattice2D::build(2, 2, SchemeId::new(Dimension::Two, Matter::Dynamical, Variant::FullAncilla)).unwrap();
        let none = vec![false; 16];
        let some: Vec<bool> = (0..16).map(|i| charges >> i & 1 == 1).collect();
        for p in plaquettes(&lat, round) {
            let a = PlaquetteTable::build(&lat, p, &none);
            let b = PlaquetteTable::build(&lat, p, &some);
            prop_assert_eq!(&a.entries, &b.entries);
            prop_assert!(b.is_injective());
            for (ca, cb) in a.checks.iter().zip(&b.checks) {
                let flipped = some[site_index(&lat, cb.site)] && cb.kind != gaussqec::qec2d::CheckKind::Pa;
                prop_assert_eq!(ca.sign != cb.sign, flipped);
            }
        }
    }
}
