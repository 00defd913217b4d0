use super::*;
use crate::samples;

fn key(w: usize, s: &[usize]) -> TermKey {
    (w, s.to_vec())
}

fn point(g: &Gos, y: (i64, i64), x: (i64, i64)) -> usize {
    use crate::arrangement::PhaseQZ;
    (0..g.poset().len())
        .find(|&w| {
            let l = g.poset().layer(w);
            l.rank() == 2
                && l.value_on(&[BigInt::from(1), BigInt::from(0)]) == Some(PhaseQZ::new(x.0, x.1))
                && l.value_on(&[BigInt::from(0), BigInt::from(1)]) == Some(PhaseQZ::new(y.0, y.1))
        })
        .unwrap()
}

fn unit_term() -> Wedge {
    wedge::unit()
}

#[test]
fn four_hypertori_dimensions() {
    let g = Gos::new(&samples::four_hypertori(), Ring::Z).unwrap();
    let rows = g.hilbert_rows();
    let as_i: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.try_into().unwrap()).collect()).collect();
    assert_eq!(as_i, vec![vec![1], vec![2, 4], vec![1, 4, 7]]);
    assert_eq!(g.basis().len(), 19);
}

#[test]
fn products_of_generators() {
    let g = Gos::new(&samples::four_hypertori(), Ring::Z).unwrap();
    let p = point(&g, (0, 1), (0, 1));
    let q = point(&g, (2, 3), (0, 1));
    let r = point(&g, (1, 3), (0, 1));
    let y13 = g.multiply(&g.y(0), &g.y(2)).unwrap();
    let mut want = BTreeMap::new();
    want.insert(key(p, &[0, 2]), unit_term());
    want.insert(key(q, &[0, 3]), unit_term());
    want.insert(key(q, &[2, 3]), wedge::scale(&unit_term(), &BigRational::from_integer((-1).into())));
    want.insert(key(r, &[0, 2]), unit_term());
    assert_eq!(y13.terms(), &want);

    let y23 = g.multiply(&g.y(1), &g.y(2)).unwrap();
    let mut want = BTreeMap::new();
    want.insert(key(p, &[1, 2]), unit_term());
    assert_eq!(y23.terms(), &want);
}

#[test]
fn straightening_at_a_point() {
    let g = Gos::new(&samples::four_hypertori(), Ring::Z).unwrap();
    let p = point(&g, (0, 1), (0, 1));
    assert_eq!(g.local_algebra(p).nbc_basis(2), vec![vec![0, 2], vec![1, 2]]);
    let x = g.straighten_term(p, &[0, 1], &[]).unwrap();
    let mut want = BTreeMap::new();
    want.insert(key(p, &[0, 2]), unit_term());
    want.insert(key(p, &[1, 2]), wedge::scale(&unit_term(), &BigRational::from_integer((-1).into())));
    assert_eq!(x.terms(), &want);
}

#[test]
fn triangle_table() {
    let g = Gos::new(&samples::triangle(), Ring::Q).unwrap();
    let t = g.hilbert_table();
    assert_eq!(t[0], vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)]);
    assert_eq!(t[1][0], BigInt::from(2));
    assert_eq!(t[2][0], BigInt::from(1));
    assert_eq!(t[0][2], BigInt::from(2));
}

#[test]
fn wedge_part_and_signs() {
    let g = Gos::new(&samples::four_hypertori(), Ring::Z).unwrap();
    let e0 = g.e(0);
    assert!(g.multiply(&e0, &e0).unwrap().is_zero());
    let a = g.multiply(&g.e(0), &g.y(1)).unwrap();
    let b = g.multiply(&g.y(1), &g.e(0)).unwrap();
    assert_eq!(a.scale(&BigRational::from_integer((-1).into())), b);
    // Repeated hypertorus in S.
    assert!(g.multiply(&g.y(0), &g.y(0)).unwrap().is_zero());
}

#[test]
fn not_essential_is_refused() {
    let d = crate::arrangement::ToricArrangement::centred(&IntMatrix::from_i64(&[[1], [0]])).unwrap();
    assert!(Gos::new(&d, Ring::Z).is_err());
}

#[test]
fn element_json() {
    let g = Gos::new(&samples::triangle(), Ring::Z).unwrap();
    let v = g.multiply(&g.e(0), &g.y(1)).unwrap().to_json();
    assert_eq!(v["terms"][0]["wedge"][0]["coeff"], "1");
    assert_eq!(v["terms"][0]["s"], json!([1]));
}
