//! Exterior algebra on a free module with a fixed basis; monomials are bitmasks.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactlin::IntMatrix;

pub type Wedge = BTreeMap<u32, BigRational>;

/// Sign of `e_a ^ e_b` relative to the sorted monomial `e_(a|b)`.
pub fn merge_sign(a: u32, b: u32) -> i32 {
    let mut inversions = 0;
    for j in 0..32 {
        if b >> j & 1 == 1 {
            inversions += (a >> (j + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn add_term(w: &mut Wedge, mono: u32, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = w.entry(mono).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        w.remove(&mono);
    }
}

pub fn unit() -> Wedge {
    Wedge::from([(0, BigRational::one())])
}

pub fn mul(a: &Wedge, b: &Wedge) -> Wedge {
    let mut out = Wedge::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if ma & mb != 0 {
                continue;
            }
            let c = ca * cb;
            add_term(&mut out, ma | mb, if merge_sign(ma, mb) < 0 { -c } else { c });
        }
    }
    out
}

pub fn scale(a: &Wedge, k: &BigRational) -> Wedge {
    let mut out = Wedge::new();
    for (&m, c) in a {
        add_term(&mut out, m, c * k);
    }
    out
}

pub fn vector(v: &[num_bigint::BigInt]) -> Wedge {
    let r: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    rational_vector(&r)
}

pub fn rational_vector(v: &[BigRational]) -> Wedge {
    let mut out = Wedge::new();
    for (i, x) in v.iter().enumerate() {
        add_term(&mut out, 1 << i, x.clone());
    }
    out
}

/// Image under the linear map whose columns are the images of the basis vectors.
pub fn transfer_columns(a: &Wedge, columns: &[Vec<BigRational>]) -> Wedge {
    let images: Vec<Wedge> = columns.iter().map(|c| rational_vector(c)).collect();
    let mut out = Wedge::new();
    for (&m, c) in a {
        let mut img = unit();
        for (j, image) in images.iter().enumerate() {
            if m >> j & 1 == 1 {
                img = mul(&img, image);
            }
        }
        for (mm, cc) in img {
            add_term(&mut out, mm, cc * c);
        }
    }
    out
}

pub fn transfer(a: &Wedge, t: &IntMatrix) -> Wedge {
    let cols: Vec<Vec<BigRational>> = (0..t.cols())
        .map(|j| t.column(j).into_iter().map(BigRational::from_integer).collect())
        .collect();
    transfer_columns(a, &cols)
}

pub fn degree(m: u32) -> usize {
    m.count_ones() as usize
}

/// Monomials of `dim` generators, by degree and then numerically.
pub fn monomials(dim: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..1u32 << dim).collect();
    all.sort_by_key(|&m| (m.count_ones(), m));
    all
}
