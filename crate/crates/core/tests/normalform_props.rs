mod common;

use common::*;
use num_traits::Signed;
use toricos::exactlin::subsets_of_size;
use toricos::layers::{mask_of, ArithmeticMatroid};
use toricos::normalform::*;

#[test]
fn matroid_round_trip_recovers_the_representation() {
    let mut g = rng(21);
    for case in 0..60 {
        let r = 2 + case % 2;
        let n = r + 1 + case % 3;
        let x = random_surjective(&mut g, r, n, 6);
        let m = ArithmeticMatroid::of_matrix(&x).unwrap();
        let y = reconstruct_representation(&m).unwrap();
        let (gm, d) = representations_equivalent(&x, &y).unwrap_or_else(|| panic!("no witness for {x} vs {y}"));
        assert!(gm.determinant().abs() == 1.into());
        assert_eq!(gm.mul(&negate_columns(&y, &d)), x);
    }
}

#[test]
fn minors_match_multiplicity_ratios() {
    let mut g = rng(22);
    for case in 0..40 {
        let r = 2 + case % 2;
        let x = random_surjective(&mut g, r, r + 2, 7);
        let m = ArithmeticMatroid::of_matrix(&x).unwrap();
        let (_, c) = normal_form_signs(&x).unwrap();
        for k in 1..=r.min(c.nonbasis.len()) {
            for rows in subsets_of_size(r, k) {
                for cols in subsets_of_size(c.nonbasis.len(), k) {
                    let sub: Vec<Vec<_>> = rows.iter().map(|&i| cols.iter().map(|&j| c.a[i][j].clone()).collect()).collect();
                    let det = toricos::exactlin::rational_determinant(&sub).abs();
                    let i: Vec<usize> = rows.iter().map(|&t| c.basis[t]).collect();
                    let j: Vec<usize> = cols.iter().map(|&t| c.nonbasis[t]).collect();
                    assert_eq!(det, abs_minor_from_multiplicity(&m, &c.basis, &i, &j).unwrap());
                }
            }
        }
        assert!(m.is_independent(mask_of(&c.basis)));
    }
}

#[test]
fn relations_vanish_and_normal_form_is_idempotent() {
    let mut g = rng(23);
    for _ in 0..40 {
        let d = random_centred(&mut g, 3, 5, 4);
        let (nf, _) = to_normal_form(&d).unwrap();
        let (again, signs) = to_normal_form(&nf).unwrap();
        assert_eq!(again, nf);
        assert!(signs.iter().all(|&s| s == 1));
        let x = nf.character_matrix();
        for rel in character_relations(&nf) {
            let mut sum = vec![num_bigint::BigInt::from(0); 3];
            for (t, &e) in rel.support.iter().enumerate() {
                for (k, s) in sum.iter_mut().enumerate() {
                    *s += x.get(k, e) * &rel.coefficients[t] * rel.signs[t] as i64;
                }
            }
            assert!(sum.iter().all(|v| v == &0.into()));
            assert_eq!(rel.signs[0], 1);
        }
    }
}
