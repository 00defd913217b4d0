//! Exact integer and rational linear algebra: Smith and Hermite normal forms,
//! kernels, saturation, determinant divisors and lattice quotients.

mod lattice;
mod matrix;
mod rational;
mod smith;

pub use lattice::{
    cokernel_torsion_order, hermite_rows, kernel_lattice, quotient_invariants, saturate, FinAbGroup, Lattice,
    QuotientInvariants,
};
pub use matrix::{common_denominator, dot, int_vec, to_rational_vec, vec_content, IntMatrix};
pub use rational::{rat_mat_vec, rational_determinant, rational_inverse, rational_rank, RatMatrix};
pub use smith::{determinant_divisor, smith_decomposition, SmithDecomposition};

/// Iterates over all k-element subsets of 0..n in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    // Oracle: gcd of all k x k minors by explicit enumeration.
    fn minors_gcd(m: &IntMatrix, k: usize) -> BigInt {
        let mut g = BigInt::zero();
        for rows in subsets_of_size(m.rows(), k) {
            for cols in subsets_of_size(m.cols(), k) {
                g = g.gcd(&m.submatrix(&rows, &cols).determinant());
            }
        }
        g
    }

    fn check_smith(m: &IntMatrix) {
        let s = smith_decomposition(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv) == IntMatrix::identity(m.rows()));
        assert!(s.v.mul(&s.v_inv) == IntMatrix::identity(m.cols()));
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), *m);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.invariant_factors.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]), "chain broken: {:?}", s.invariant_factors);
        }
    }

    #[test]
    fn smith_small_cases() {
        let id = IntMatrix::identity(2);
        assert_eq!(smith_decomposition(&id).invariant_factors, vec![big(1), big(1)]);
        let d = IntMatrix::from_i64(&[[2, 0], [0, 3]]);
        check_smith(&d);
        assert_eq!(smith_decomposition(&d).invariant_factors, vec![big(1), big(6)]);
        let m = IntMatrix::from_i64(&[[-2, -32, -43], [1, 21, 29]]);
        check_smith(&m);
        assert_eq!(smith_decomposition(&m).invariant_factors, vec![big(1), big(5)]);
    }

    #[test]
    fn determinant_divisor_examples() {
        let m = IntMatrix::from_i64(&[[-2, -32, -43], [1, 21, 29]]);
        let minors: Vec<BigInt> = subsets_of_size(3, 2)
            .iter()
            .map(|c| m.select_columns(c).determinant())
            .collect();
        assert_eq!(minors, vec![big(-10), big(-15), big(-25)]);
        assert_eq!(determinant_divisor(&m, 2).unwrap(), big(5));
        assert_eq!(determinant_divisor(&m, 1).unwrap(), big(1));
        assert_eq!(determinant_divisor(&IntMatrix::zeros(2, 2), 1).unwrap(), big(0));
        assert!(determinant_divisor(&m, 3).is_err());
        assert!(determinant_divisor(&m, 0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_lattice(&IntMatrix::from_i64(&[[1, 0, 1], [0, 1, 1]]));
        assert_eq!(k.integer_basis(), vec![int_vec(&[1, 1, -1])]);
        let k = kernel_lattice(&IntMatrix::from_i64(&[[2, -32, -43], [-1, 21, 29]]));
        assert_eq!(k.integer_basis(), vec![int_vec(&[5, 3, -2])]);
        let k = kernel_lattice(&IntMatrix::from_i64(&[[2, 1], [1, 1]]));
        assert_eq!(k.rank(), 0);
    }

    #[test]
    fn saturation_examples() {
        let l = Lattice::from_generators(2, &[int_vec(&[2, 0])]);
        assert_eq!(saturate(&l), Lattice::from_generators(2, &[int_vec(&[1, 0])]));
        let l = Lattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[0, 3])]);
        assert_eq!(saturate(&l), Lattice::full(2));
        let l = Lattice::from_generators(3, &[int_vec(&[1, 2, 3])]);
        assert_eq!(saturate(&l), l);
    }

    #[test]
    fn quotient_examples() {
        let z2 = Lattice::full(2);
        let q = quotient_invariants(&z2, &z2).unwrap();
        assert!(q.torsion.is_trivial());
        assert_eq!(q.free_rank, 0);
        let sub = Lattice::from_generators(2, &[int_vec(&[1, 0]), int_vec(&[0, 7])]);
        let q = quotient_invariants(&sub, &z2).unwrap();
        assert_eq!(q.torsion, FinAbGroup::cyclic(7));
        assert_eq!(q.free_rank, 0);
        let sub = Lattice::from_generators(2, &[int_vec(&[1, 0])]);
        let q = quotient_invariants(&sub, &z2).unwrap();
        assert!(q.torsion.is_trivial());
        assert_eq!(q.free_rank, 1);
        assert!(quotient_invariants(&z2, &sub).is_err());
    }

    #[test]
    fn rational_lattices_are_canonical() {
        let half = BigRational::new(big(1), big(2));
        let one = BigRational::one();
        let zero = BigRational::zero();
        let a = Lattice::from_rational_generators(
            2,
            &[vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()], vec![&half * big(5), &half * big(3)]],
        );
        let b = Lattice::from_rational_generators(2, &[vec![half.clone(), half.clone()], vec![zero.clone(), one.clone()]]);
        assert_eq!(a, b);
        assert_eq!(a.denominator(), &big(2));
        let c = Lattice::from_rational_generators(2, &[vec![&one * big(2), zero.clone()]]);
        assert!(c.is_integral());
        assert_eq!(c.hnf_basis(), &IntMatrix::from_i64(&[[2, 0]]));
    }

    #[test]
    fn fin_ab_group_normalises() {
        let g = FinAbGroup::from_orders(&[big(2), big(3), big(1)]);
        assert_eq!(g.factors(), &[big(6)]);
        let g = FinAbGroup::from_orders(&[big(4), big(2)]);
        assert_eq!(g.factors(), &[big(2), big(4)]);
        assert_eq!(g.order(), big(8));
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-50i64..=50, r * c)
                .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn smith_reconstructs(m in small_matrix()) {
            check_smith(&m);
        }

        #[test]
        fn divisors_match_minors(m in small_matrix()) {
            let rank = m.rank();
            for k in 1..=m.rows().min(m.cols()) {
                let d = determinant_divisor(&m, k).unwrap();
                prop_assert_eq!(&d, &minors_gcd(&m, k));
                prop_assert_eq!(d.is_zero(), k > rank);
            }
        }

        #[test]
        fn saturation_is_idempotent_and_finite(m in small_matrix()) {
            let l = Lattice::from_rows(&m);
            let s = saturate(&l);
            prop_assert_eq!(&saturate(&s), &s);
            prop_assert!(s.contains_lattice(&l));
            prop_assert_eq!(s.rank(), l.rank());
            let q = quotient_invariants(&l, &s).unwrap();
            prop_assert_eq!(q.free_rank, 0);
        }

        #[test]
        fn kernels_are_saturated(m in small_matrix()) {
            let k = kernel_lattice(&m);
            prop_assert_eq!(&saturate(&k), &k);
            prop_assert_eq!(k.rank() + m.rank(), m.cols());
            for b in k.integer_basis() {
                prop_assert!(m.mul_vec(&b).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn hnf_is_basis_independent(m in small_matrix(), seed in 0u64..1000) {
            // Mixing rows by a unimodular transform must not change the canonical form.
            let n = m.rows();
            let mut u = IntMatrix::identity(n);
            let mut s = seed;
            for _ in 0..6 {
                if n < 2 { break; }
                let i = (s % n as u64) as usize;
                let j = ((s / 7) % n as u64) as usize;
                if i != j {
                    u.add_row_multiple(i, j, &BigInt::from((s % 5) as i64 - 2));
                }
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 3;
            }
            prop_assert_eq!(Lattice::from_rows(&u.mul(&m)), Lattice::from_rows(&m));
        }
    }
}
