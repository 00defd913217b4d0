mod common;

use common::*;
use num_bigint::BigInt;
use toricos::exactlin::{determinant_divisor, IntMatrix};
use toricos::layers::*;

fn mobius_from_bottom(p: &LayerPoset) -> Vec<i64> {
    let mut mu = vec![0i64; p.len()];
    for j in p.by_rank().iter().flatten().copied() {
        mu[j] = if j == 0 { 1 } else { -p.below(j).iter().filter(|&&i| i != j).map(|&i| mu[i]).sum::<i64>() };
    }
    mu
}

#[test]
fn layer_counts_match_torsion_point_scan() {
    let mut g = rng(11);
    let mut checked = 0;
    for case in 0..60 {
        let r = if case % 2 == 0 { 2 } else { 3 };
        let n = 2 + case % 4;
        let d = random_centred(&mut g, r, n, 5);
        let d = if case % 3 == 0 { with_random_phases(&mut g, &d, 2 + (case as i64 % 3)) } else { d };
        if let Some(counts) = brute_layer_counts(&d, 60) {
            assert_eq!(build_poset(&d).rank_counts(), counts, "{}", d.to_json());
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} arrangements within the scan budget");
}

#[test]
fn multiplicity_is_determinant_divisor() {
    let mut g = rng(12);
    for case in 0..40 {
        let r = 2 + case % 2;
        let d = random_centred(&mut g, r, 4, 10);
        let m = d.character_matrix();
        for mask in 1u64..1 << d.len() {
            let s = indices_of(mask);
            if rank_of(&d, mask) != s.len() {
                continue;
            }
            let sub: IntMatrix = m.select_columns(&s);
            assert_eq!(multiplicity(&d, &s), determinant_divisor(&sub, s.len()).unwrap());
            assert_eq!(BigInt::from(components_of_intersection(&d, &s).len()), multiplicity(&d, &s));
        }
    }
}

#[test]
fn nbc_counts_are_mobius_values() {
    let mut g = rng(13);
    for case in 0..30 {
        let r = 2 + case % 2;
        let d = random_centred(&mut g, r, 3 + case % 3, 4);
        let d = if case % 2 == 0 { with_random_phases(&mut g, &d, 3) } else { d };
        let p = build_poset(&d);
        let mu = mobius_from_bottom(&p);
        let mut per_layer = vec![0i64; p.len()];
        for q in 0..=r {
            for pair in nbc_pairs(&p, q) {
                assert_eq!(pair.layer.rank(), q);
                per_layer[pair.index] += 1;
            }
        }
        for i in 0..p.len() {
            assert_eq!(per_layer[i], mu[i].abs(), "layer {i} of {}", d.to_json());
        }
        let n = nbc_counts(&p);
        let at_one: BigInt = poincare_polynomial(&p).iter().sum();
        let expect: usize = (0..=r).map(|q| n[q] << (r - q)).sum();
        assert_eq!(at_one, BigInt::from(expect));
    }
}

#[test]
fn poset_is_ranked_with_unique_bottom() {
    let mut g = rng(14);
    for _ in 0..20 {
        let d = random_centred(&mut g, 3, 5, 3);
        let p = build_poset(&d);
        assert_eq!(p.by_rank()[0], vec![0]);
        for j in 0..p.len() {
            assert!(p.le(0, j));
            for &i in p.below(j) {
                assert!(p.layer(i).rank() <= p.layer(j).rank());
                assert!(p.layer(i).is_below(p.layer(j)));
            }
        }
        assert_eq!(p.by_rank()[1].len(), d.len());
        assert_eq!(posets_isomorphic(&p, &p, true).unwrap(), (0..p.len()).collect::<Vec<_>>());
    }
}
