use super::*;
use crate::layers::{arithmetic_matroid, build_poset, posets_isomorphic};
use crate::samples;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn table(n: usize, r: usize, entries: &[(&[usize], i64)]) -> ArithmeticMatroid {
    let mut rank = vec![0; 1 << n];
    let mut mult = vec![big(0); 1 << n];
    for &(s, v) in entries {
        mult[mask_of(s) as usize] = big(v);
    }
    for (m, rk) in rank.iter_mut().enumerate() {
        *rk = (m as u64).count_ones().min(r as u32) as usize;
    }
    ArithmeticMatroid::from_tables(n, rank, mult).unwrap()
}

fn three_lines_table() -> ArithmeticMatroid {
    table(3, 2, &[(&[], 1), (&[0], 1), (&[1], 1), (&[2], 1), (&[0, 1], 10), (&[0, 2], 15), (&[1, 2], 25), (&[0, 1, 2], 5)])
}

fn surjective_table() -> ArithmeticMatroid {
    table(3, 2, &[(&[], 1), (&[0], 1), (&[1], 1), (&[2], 1), (&[0, 1], 2), (&[0, 2], 3), (&[1, 2], 5), (&[0, 1, 2], 1)])
}

#[test]
fn coordinates_in_a_basis() {
    let c = coordinate_matrix(&samples::three_lines(), &[0, 1]).unwrap();
    assert_eq!(c.a, vec![vec![q(-5, 2)], vec![q(3, 2)]]);
    let c = coordinate_matrix(&samples::triangle(), &[0, 1]).unwrap();
    assert_eq!(c.a, vec![vec![q(1, 1)], vec![q(1, 1)]]);
    assert!(coordinate_matrix(&samples::triangle(), &[0, 0]).is_err());
    let id = ToricArrangement::centred(&IntMatrix::identity(2)).unwrap();
    assert!(coordinate_matrix(&id, &[0, 1]).unwrap().a.iter().all(Vec::is_empty));
}

#[test]
fn forests() {
    let f = maximal_forest(&[vec![true], vec![true]]);
    assert_eq!(f.forest, vec![(0, 0), (1, 0)]);
    assert!(maximal_forest(&[]).forest.is_empty());
    let f = maximal_forest(&[vec![true, true], vec![true, true]]);
    assert_eq!(f.forest, vec![(0, 0), (0, 1), (1, 0)]);
    assert_eq!(f.edges.len(), 4);
}

#[test]
fn three_lines_normal_form() {
    let (nf, signs) = to_normal_form(&samples::three_lines()).unwrap();
    assert_eq!(signs, vec![-1, 1, 1]);
    assert_eq!(nf.character_matrix(), IntMatrix::from_i64(&[[2, -32, -43], [-1, 21, 29]]));
    let (again, s2) = to_normal_form(&nf).unwrap();
    assert_eq!(s2, vec![1, 1, 1]);
    assert_eq!(again, nf);
    let p = build_poset(&samples::three_lines());
    assert!(posets_isomorphic(&p, &build_poset(&nf), true).is_some());
    let t = samples::triangle().with_negations(&[1, 1, -1]);
    assert_eq!(to_normal_form(&t).unwrap().1, vec![1, 1, -1]);
}

#[test]
fn minors_from_multiplicities() {
    let m = three_lines_table();
    assert_eq!(abs_minor_from_multiplicity(&m, &[0, 1], &[0], &[2]).unwrap(), q(5, 2));
    assert_eq!(abs_minor_from_multiplicity(&m, &[0, 1], &[1], &[2]).unwrap(), q(3, 2));
    assert!(abs_minor_from_multiplicity(&m, &[0, 1], &[0, 1], &[2]).is_err());
    let t = ArithmeticMatroid::of_matrix(&IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 0]])).unwrap();
    assert_eq!(abs_minor_from_multiplicity(&t, &[0, 1], &[1], &[2]).unwrap(), q(0, 1));
}

#[test]
fn reconstructs_normal_form_matrix() {
    let c = reconstruct_matrix(&three_lines_table()).unwrap();
    assert_eq!(c.a, vec![vec![q(5, 2)], vec![q(3, 2)]]);
    let c = reconstruct_matrix(&arithmetic_matroid(&samples::triangle()).unwrap()).unwrap();
    assert_eq!(c.a, vec![vec![q(1, 1)], vec![q(1, 1)]]);
    let mut bad = three_lines_table();
    bad = ArithmeticMatroid::from_tables(3, (0..8).map(|m| bad.rank(m)).collect(), (0..8u64).map(|m| if m == 0 { big(2) } else { bad.mult(m).clone() }).collect()).unwrap();
    assert!(reconstruct_matrix(&bad).is_err());
}

#[test]
fn reconstructs_representation() {
    let x = reconstruct_representation(&surjective_table()).unwrap();
    let expect = IntMatrix::from_i64(&[[2, 0, 5], [-1, 1, -1]]);
    assert_eq!(ArithmeticMatroid::of_matrix(&expect).unwrap(), surjective_table());
    assert!(representations_equivalent(&x, &expect).is_some(), "{x}");
    let id = ArithmeticMatroid::of_matrix(&IntMatrix::identity(3)).unwrap();
    assert_eq!(reconstruct_representation(&id).unwrap(), IntMatrix::identity(3));
    let tri = reconstruct_representation(&arithmetic_matroid(&samples::triangle()).unwrap()).unwrap();
    assert!(representations_equivalent(&tri, &IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]])).is_some());
    let x = reconstruct_representation(&three_lines_table()).unwrap();
    assert!(representations_equivalent(&samples::three_lines_matrix(), &x).is_some(), "{x}");
    let all = crate::coverings::representations(&three_lines_table(), 1000).unwrap();
    assert_eq!(all.len(), 4);
}

#[test]
fn three_lines_is_c2() {
    let x = samples::three_lines_matrix();
    let (g, d) = representations_equivalent(&x, &samples::c_a(2)).unwrap();
    assert_eq!(g, IntMatrix::from_i64(&[[2, -3], [-1, 2]]));
    assert_eq!(d, vec![-1, 1, 1]);
    let (g, d) = representations_equivalent(&x, &x).unwrap();
    assert_eq!(g, IntMatrix::identity(2));
    assert_eq!(d, vec![1, 1, 1]);
    for a in 1..=4 {
        for b in 1..=4 {
            assert_eq!(representations_equivalent(&samples::c_a(a), &samples::c_a(b)).is_some(), a == b, "C{a} vs C{b}");
        }
    }
}

#[test]
fn relations() {
    let (nf, _) = to_normal_form(&samples::three_lines()).unwrap();
    let rel = character_relations(&nf);
    assert_eq!(rel.len(), 1);
    assert_eq!(rel[0].support, vec![0, 1, 2]);
    assert_eq!(rel[0].signs, vec![1, 1, -1]);
    assert_eq!(rel[0].coefficients, vec![big(5), big(3), big(2)]);
    let rel = character_relations(&samples::triangle());
    assert_eq!((rel[0].signs.clone(), rel[0].coefficients.clone()), (vec![1, 1, -1], vec![big(1), big(1), big(1)]));
    assert!(character_relations(&ToricArrangement::centred(&IntMatrix::identity(2)).unwrap()).is_empty());
}
