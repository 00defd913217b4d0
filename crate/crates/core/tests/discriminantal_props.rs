mod common;

use common::*;
use num_bigint::BigInt;
use rand::Rng;
use toricos::arrangement::{PhaseQZ, ToricArrangement};
use toricos::discriminantal::*;
use toricos::layers::build_poset;

fn translate(d: &ToricArrangement, t: &[PhaseQZ]) -> Vec<PhaseQZ> {
    d.hypertori().iter().map(|h| h.phase.add(&PhaseQZ::combination(&h.chi, t))).collect()
}

#[test]
fn nearly_generic_families_are_connected() {
    let mut rng = rng(71);
    let mut seen = [0; 3];
    for case in 0..60 {
        let r = rng.gen_range(2..=3);
        let n = rng.gen_range(r + 1..=5);
        let c = random_centred(&mut rng, r, n, 3);
        let d = with_random_phases(&mut rng, &c, if case % 2 == 0 { 101 } else { 4 });
        let s = build_poset(&d);
        let x = d.character_matrix();
        assert!(l_membership(&d.phases(), &x, &s));
        let g = is_nearly_generic(&s);
        seen[g as usize] += 1;
        if g == Genericity::Neither {
            continue;
        }
        assert_eq!(count_components(&x, &s).unwrap(), 1, "{:?}", chars_i64(&d));
        let comps = ambient_components(&x, &s);
        let inv = component_invariant(&d.phases(), &x, &s).unwrap();
        assert!(comps.iter().any(|c| c.invariant == inv && !c.forbidden));
    }
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
}

#[test]
fn invariant_survives_torus_translation() {
    let mut rng = rng(72);
    for _ in 0..30 {
        let r = rng.gen_range(2..=3);
        let n = rng.gen_range(r + 1..=5);
        let c = random_centred(&mut rng, r, n, 3);
        let d = with_random_phases(&mut rng, &c, 12);
        let s = build_poset(&d);
        let x = d.character_matrix();
        let inv = component_invariant(&d.phases(), &x, &s).unwrap();
        let t: Vec<PhaseQZ> = (0..r).map(|_| PhaseQZ::new(rng.gen_range(0..50), 53)).collect();
        let moved = translate(&d, &t);
        assert!(l_membership(&moved, &x, &s));
        assert_eq!(component_invariant(&moved, &x, &s).unwrap(), inv);
        assert!(same_component(&d.phases(), &moved, &x, &s).unwrap());
        let k = BigInt::from(rng.gen_range(1..=6));
        let scaled: Vec<PhaseQZ> = moved.iter().map(|p| p.scale(&k)).collect();
        if l_membership(&scaled, &x, &s) {
            let si = component_invariant(&scaled, &x, &s).unwrap();
            assert_eq!(si, inv.iter().map(|p| p.scale(&k)).collect::<Vec<_>>());
        }
    }
}
