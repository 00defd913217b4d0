//! Generation of the graded Orlik–Solomon model in degree one: the matrices `R^k` whose
//! columns expand `y_S = y_{s_1} ... y_{s_k}` in the NBC basis of bidegree `(0, k)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arrangement::{big_to_json, classify};
use crate::error::{Error, Result};
use crate::exactlin::{smith_decomposition, subsets_of_size, IntMatrix, Lattice};
use crate::gos::{Gos, GosElement, Ring, TermKey};
use crate::layers::mask_of;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    pub k: usize,
    /// NBC pairs `(layer, S)` of bidegree `(0, k)`, in basis order.
    pub rows: Vec<TermKey>,
    /// Independent increasing `k`-lists, lexicographic.
    pub cols: Vec<Vec<usize>>,
    pub entries: IntMatrix,
}

impl RMatrix {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "rows": self.rows.iter().map(|(w, s)| json!({"layer": w, "s": s})).collect::<Vec<_>>(),
            "cols": self.cols,
            "matrix": (0..self.entries.rows())
                .map(|i| self.entries.row(i).iter().map(big_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// `y_S` as the sum over the components `W` of `H_{s_1} ∩ ... ∩ H_{s_k}` of the straightened
/// local classes `y_{W,S}`.
pub fn y_power_expansion(g: &Gos, s: &[usize]) -> Result<GosElement> {
    if s.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::invalid("the index list must be strictly increasing"));
    }
    let p = g.poset();
    if s.iter().any(|&i| i >= p.arrangement().len()) {
        return Err(Error::invalid("hypertorus index out of range"));
    }
    let x = p.arrangement().character_matrix();
    let mut out = GosElement::zero(g.ring());
    if x.select_columns(s).rank() < s.len() {
        return Ok(out);
    }
    let m = mask_of(s);
    for w in 0..p.len() {
        if p.layer(w).rank() == s.len() && p.hyps(w) & m == m {
            out = out.add(&g.straighten_term(w, s, &[])?)?;
        }
    }
    Ok(out)
}

fn rows_of(g: &Gos, k: usize) -> Vec<(usize, TermKey)> {
    g.basis()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.bidegree() == (0, k))
        .map(|(i, b)| (i, (b.layer, b.s.clone())))
        .collect()
}

pub fn r_matrix(g: &Gos, k: usize) -> Result<RMatrix> {
    let p = g.poset();
    let n = p.arrangement().len();
    if k == 0 || k > p.arrangement().rank() {
        return Err(Error::invalid(format!("degree {k} outside 1..={}", p.arrangement().rank())));
    }
    let x = p.arrangement().character_matrix();
    let rows = rows_of(g, k);
    let cols: Vec<Vec<usize>> = subsets_of_size(n, k).into_iter().filter(|s| x.select_columns(s).rank() == k).collect();
    let mut entries = IntMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        let c = g.coordinates(&y_power_expansion(g, s)?);
        for (i, (b, _)) in rows.iter().enumerate() {
            assert!(c[*b].is_integer(), "non-integral entry in R^{k}");
            entries.set(i, j, c[*b].to_integer());
        }
    }
    Ok(RMatrix { k, rows: rows.into_iter().map(|(_, t)| t).collect(), cols, entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVerdict {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// The `rows`-th determinant divisor, zero when the rank is too small.
    pub divisor: BigInt,
    pub over_q: bool,
    pub over_z: bool,
}

impl LevelVerdict {
    pub fn holds(&self, ring: Ring) -> bool {
        match ring {
            Ring::Q => self.over_q,
            Ring::Z => self.over_z,
        }
    }
}

pub fn level_verdict(r: &RMatrix) -> LevelVerdict {
    let (rows, cols) = (r.entries.rows(), r.entries.cols());
    let (rank, divisor) = if rows == 0 {
        (0, BigInt::one())
    } else if cols == 0 {
        (0, BigInt::zero())
    } else {
        let sm = smith_decomposition(&r.entries);
        let rank = sm.rank();
        let d = if rank < rows { BigInt::zero() } else { sm.invariant_factors[..rows].iter().product() };
        (rank, d)
    };
    let over_q = rank == rows;
    let over_z = divisor.is_one();
    assert!(!over_z || over_q);
    LevelVerdict { k: r.k, rows, cols, rank, divisor, over_q, over_z }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeOneReport {
    pub levels: Vec<LevelVerdict>,
}

impl DegreeOneReport {
    pub fn generated(&self, ring: Ring) -> bool {
        self.levels.iter().all(|l| l.holds(ring))
    }

    pub fn to_json(&self, matrices: &[RMatrix]) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .zip(matrices)
            .map(|(l, m)| {
                json!({
                    "k": l.k,
                    "rows": l.rows,
                    "cols": l.cols,
                    "rank": l.rank,
                    "divisor": big_to_json(&l.divisor),
                    "generated_q": l.over_q,
                    "generated_z": l.over_z,
                    "r_matrix": m.to_json(),
                })
            })
            .collect();
        json!({
            "generated_q": self.generated(Ring::Q),
            "generated_z": self.generated(Ring::Z),
            "levels": levels,
        })
    }
}

pub fn degree_one_matrices(g: &Gos) -> Result<Vec<RMatrix>> {
    let c = classify(g.poset().arrangement());
    if !c.primitive || !c.essential {
        return Err(Error::invalid("degree-one generation needs a primitive essential arrangement"));
    }
    (1..=g.poset().arrangement().rank()).map(|k| r_matrix(g, k)).collect()
}

pub fn generated_degree_one(g: &Gos) -> Result<DegreeOneReport> {
    Ok(DegreeOneReport { levels: degree_one_matrices(g)?.iter().map(level_verdict).collect() })
}

/// Direct check: do products of `k` degree-(0,1) basis elements span bidegree `(0, k)`?
/// Returns the verdicts over Q and over Z.
pub fn span_oracle(g: &Gos, k: usize) -> Result<(bool, bool)> {
    let rows = rows_of(g, k);
    let gens: Vec<GosElement> =
        (0..g.basis().len()).filter(|&i| g.basis()[i].bidegree() == (0, 1)).map(|i| g.basis_element(i)).collect();
    let mut vectors = Vec::new();
    let mut stack: Vec<(usize, GosElement)> = vec![(0, g.one())];
    while let Some((depth, x)) = stack.pop() {
        if depth == k {
            let c = g.coordinates(&x);
            vectors.push(rows.iter().map(|(b, _)| c[*b].to_integer()).collect::<Vec<BigInt>>());
            continue;
        }
        for y in &gens {
            let z = g.multiply(&x, y)?;
            if !z.is_zero() {
                stack.push((depth + 1, z));
            }
        }
    }
    let l = Lattice::from_generators(rows.len(), &vectors);
    Ok((l.rank() == rows.len(), l == Lattice::full(rows.len())))
}
