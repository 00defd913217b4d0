use super::*;
use crate::samples;

fn v(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&t| BigInt::from(t)).collect()
}

fn family_poset() -> LayerPoset {
    build_poset(&samples::parallel_translate(1))
}

#[test]
fn circuit_tori() {
    let x = samples::parallel_characters();
    assert_eq!(circuit_torus(&x, &[2, 3]).unwrap().generators(), vec![v(&[0, 0, 1, -1])]);
    assert_eq!(circuit_torus(&x, &[0, 1, 2]).unwrap().generators(), vec![v(&[1, -1, 7, 0])]);
    assert!(circuit_torus(&x, &[0, 2]).is_err());
    assert!(circuit_torus(&x, &[0, 1, 2, 3]).is_err());
    let t = IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]]);
    assert_eq!(circuit_torus(&t, &[0, 1, 2]).unwrap().generators(), vec![v(&[1, 1, -1])]);
    let all: Vec<Vec<usize>> = discriminantal_circuits(&x).unwrap().into_iter().map(|(j, _)| j).collect();
    assert_eq!(all, vec![vec![2, 3], vec![0, 1, 2], vec![0, 1, 3]]);
}

#[test]
fn ambient_torus_of_the_family() {
    let x = samples::parallel_characters();
    let amb = ambient_intersection(&x, &family_poset());
    let want = Lattice::from_generators(4, &[v(&[1, -1, 7, 0]), v(&[1, -1, 0, 7])]);
    assert_eq!(amb.relations, want);
    let t = IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]]);
    let tri = build_poset(&samples::triangle());
    assert_eq!(ambient_intersection(&t, &tri).relations.rank(), 1);
    let boolean = IntMatrix::from_i64(&[[1, 0], [0, 1]]);
    let b = build_poset(&ToricArrangement::centred(&boolean).unwrap());
    assert_eq!(ambient_intersection(&boolean, &b).relations.rank(), 0);
}

#[test]
fn membership() {
    let x = samples::parallel_characters();
    let s = family_poset();
    assert!(l_membership(&phase_point(&[0, 0, 0, 1], 7), &x, &s));
    assert!(l_membership(&phase_point(&[0, 0, 0, 2], 7), &x, &s));
    assert!(!l_membership(&phase_point(&[0, 0, 0, 0], 7), &x, &s));
    assert!(!l_membership(&phase_point(&[0, 0, 0, 1], 2), &x, &s));
}

#[test]
fn six_components() {
    let x = samples::parallel_characters();
    let s = family_poset();
    assert_eq!(count_components(&x, &s).unwrap(), 6);
    assert_eq!(ambient_components(&x, &s).len(), 7);
    let a = phase_point(&[0, 0, 0, 1], 7);
    let b = phase_point(&[0, 0, 0, 2], 7);
    assert_ne!(component_invariant(&a, &x, &s).unwrap(), component_invariant(&b, &x, &s).unwrap());
    assert!(!same_component(&a, &b, &x, &s).unwrap());
    // Moving a_1 and a_2 together keeps a_1^-1 a_2 and the component.
    let c = vec![PhaseQZ::new(3, 11), PhaseQZ::new(3, 11), PhaseQZ::zero(), PhaseQZ::new(1, 7)];
    assert!(same_component(&a, &c, &x, &s).unwrap());
    assert!(component_invariant(&phase_point(&[0, 0, 0, 0], 1), &x, &s).is_err());
    assert_eq!(is_nearly_generic(&s), Genericity::Neither);
}

#[test]
fn genericity() {
    let boolean = ToricArrangement::centred(&IntMatrix::from_i64(&[[1, 0], [0, 1]])).unwrap();
    assert_eq!(is_nearly_generic(&build_poset(&boolean)), Genericity::Generic);
    let tri = build_poset(&samples::triangle());
    assert_eq!(is_nearly_generic(&tri), Genericity::NearlyGeneric);
    let t = IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]]);
    assert_eq!(count_components(&t, &tri).unwrap(), 1);
    let centred = phase_point(&[0, 0, 0], 1);
    assert!(component_invariant(&centred, &t, &tri).unwrap().iter().all(PhaseQZ::is_zero));
}
