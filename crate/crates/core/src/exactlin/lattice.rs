use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{common_denominator, IntMatrix};
use super::smith::smith_decomposition;
use crate::error::{Error, Result};

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
/// Zero rows are dropped; pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                let x = a.get(i, c);
                if !x.is_zero() && best.is_none_or(|b| x.abs() < a.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                let q = a.get(i, c).div_floor(a.get(r, c));
                a.add_row_multiple(i, r, &-q);
                if !a.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, c).div_floor(a.get(r, c));
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    a.select_rows(&(0..r).collect::<Vec<_>>())
}

/// A lattice in Q^n stored as `hnf_basis / denominator`, canonical so that equal lattices
/// compare equal field by field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient_rank: usize,
    denominator: BigInt,
    hnf_basis: IntMatrix,
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        Lattice { ambient_rank: n, denominator: BigInt::one(), hnf_basis: IntMatrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Lattice { ambient_rank: n, denominator: BigInt::one(), hnf_basis: IntMatrix::identity(n) }
    }

    /// Lattice spanned by the rows of `m`.
    pub fn from_rows(m: &IntMatrix) -> Self {
        Lattice { ambient_rank: m.cols(), denominator: BigInt::one(), hnf_basis: hermite_rows(m) }
    }

    pub fn from_generators(n: usize, gens: &[Vec<BigInt>]) -> Self {
        Self::from_rows(&IntMatrix::from_rows(n, gens))
    }

    pub fn from_rational_generators(n: usize, gens: &[Vec<BigRational>]) -> Self {
        let den = gens.iter().fold(BigInt::one(), |l, g| l.lcm(&common_denominator(g)));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        Self::scaled(den, hermite_rows(&IntMatrix::from_rows(n, &rows)))
    }

    fn scaled(den: BigInt, hnf: IntMatrix) -> Self {
        let g = hnf.content().gcd(&den);
        if g.is_one() || hnf.rows() == 0 {
            let den = if hnf.rows() == 0 { BigInt::one() } else { den };
            return Lattice { ambient_rank: hnf.cols(), denominator: den, hnf_basis: hnf };
        }
        let data = hnf.entries().iter().map(|x| x / &g).collect();
        Lattice {
            ambient_rank: hnf.cols(),
            denominator: den / &g,
            hnf_basis: IntMatrix::from_vec(hnf.rows(), hnf.cols(), data),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.hnf_basis.rows()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn hnf_basis(&self) -> &IntMatrix {
        &self.hnf_basis
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    /// Basis vectors as rational rows.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        (0..self.rank())
            .map(|i| {
                self.hnf_basis
                    .row(i)
                    .iter()
                    .map(|x| BigRational::new(x.clone(), self.denominator.clone()))
                    .collect()
            })
            .collect()
    }

    /// Integral basis rows; panics for lattices with a denominator.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        assert!(self.is_integral(), "lattice is not contained in Z^n");
        self.hnf_basis.row_vecs()
    }

    fn pivots(&self) -> Vec<usize> {
        (0..self.rank())
            .map(|i| self.hnf_basis.row(i).iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }

    /// Coordinates of `v` in the HNF basis, or `None` when `v` is outside the rational span.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.ambient_rank);
        let den = BigRational::from_integer(self.denominator.clone());
        let mut w: Vec<BigRational> = v.iter().map(|x| x * &den).collect();
        let mut c = Vec::with_capacity(self.rank());
        for (i, p) in self.pivots().into_iter().enumerate() {
            let row = self.hnf_basis.row(i);
            let ci = &w[p] / BigRational::from_integer(row[p].clone());
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    w[j] -= &ci * BigRational::from_integer(x.clone());
                }
            }
            c.push(ci);
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(c)
        } else {
            None
        }
    }

    pub fn coordinates_of_int(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let r: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.coordinates(&r)
    }

    /// Integral coordinates of a lattice member.
    pub fn integer_coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let c = self.coordinates(v)?;
        if c.iter().all(|x| x.is_integer()) {
            Some(c.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.integer_coordinates(v).is_some()
    }

    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        let r: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.contains(&r)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// Whether `v` lies in the rational span.
    pub fn spans(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        let mut gens = self.basis();
        gens.extend(other.basis());
        Lattice::from_rational_generators(self.ambient_rank, &gens)
    }

    pub fn is_saturated(&self) -> bool {
        self.is_integral() && saturate(self) == *self
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "<{}>", self.hnf_basis)
        } else {
            write!(f, "<{}>/{}", self.hnf_basis, self.denominator)
        }
    }
}

/// Smallest saturated lattice containing `l`: its rational span intersected with Z^n.
pub fn saturate(l: &Lattice) -> Lattice {
    assert!(l.is_integral(), "saturation expects a sublattice of Z^n");
    let k = l.rank();
    if k == 0 {
        return l.clone();
    }
    let s = smith_decomposition(l.hnf_basis());
    let rows: Vec<usize> = (0..k).collect();
    Lattice::from_rows(&s.v_inv.select_rows(&rows))
}

/// Integer kernel {c : m c = 0}; always saturated.
pub fn kernel_lattice(m: &IntMatrix) -> Lattice {
    let n = m.cols();
    let s = smith_decomposition(m);
    let rank = s.rank();
    let gens: Vec<Vec<BigInt>> = (rank..n).map(|j| s.v.column(j)).collect();
    Lattice::from_generators(n, &gens)
}

/// Finite abelian group as a chain of invariant factors d_1 | d_2 | ... with every d_i >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    invariant_factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { invariant_factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[BigInt::from(n)])
    }

    /// Group ⊕ Z/n_i for arbitrary positive orders, normalised to a divisibility chain.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        assert!(orders.iter().all(|x| x.is_positive()), "cyclic orders must be positive");
        let n = orders.len();
        let mut d = IntMatrix::zeros(n, n);
        for (i, x) in orders.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        let s = smith_decomposition(&d);
        FinAbGroup { invariant_factors: s.torsion() }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structure of `sup / sub`: torsion part plus free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub torsion: FinAbGroup,
    pub free_rank: usize,
}

pub fn quotient_invariants(sub: &Lattice, sup: &Lattice) -> Result<QuotientInvariants> {
    if sub.ambient_rank() != sup.ambient_rank() {
        return Err(Error::invalid("lattices live in different ambient spaces"));
    }
    let mut rows = Vec::with_capacity(sub.rank());
    for b in sub.basis() {
        match sup.integer_coordinates(&b) {
            Some(c) => rows.push(c),
            None => return Err(Error::invalid("first lattice is not contained in the second")),
        }
    }
    let c = IntMatrix::from_rows(sup.rank(), &rows);
    let s = smith_decomposition(&c);
    Ok(QuotientInvariants {
        torsion: FinAbGroup::from_orders(&s.torsion()),
        free_rank: sup.rank() - s.rank(),
    })
}

/// Order of the torsion subgroup of Z^n / span(rows of m).
pub fn cokernel_torsion_order(m: &IntMatrix) -> BigInt {
    let s = smith_decomposition(m);
    s.invariant_factors.iter().filter(|x| !x.is_zero()).product()
}
