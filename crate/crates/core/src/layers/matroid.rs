use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{indices_of, mask_of, multiplicity, rank_of, Layer, LayerPoset, Mask};
use crate::arrangement::{big_to_json, json_to_big, ToricArrangement};
use crate::error::{Error, Result};
use crate::exactlin::{cokernel_torsion_order, IntMatrix};

/// Largest ground set for which dense rank and multiplicity tables are built.
pub const DENSE_LIMIT: usize = 20;

/// Rank and multiplicity functions tabulated over every subset of E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticMatroid {
    n: usize,
    rank: Vec<usize>,
    mult: Vec<BigInt>,
}

impl ArithmeticMatroid {
    pub fn from_tables(n: usize, rank: Vec<usize>, mult: Vec<BigInt>) -> Result<Self> {
        if n > DENSE_LIMIT {
            return Err(Error::budget(format!("dense matroid tables need at most {DENSE_LIMIT} elements, got {n}")));
        }
        if rank.len() != 1 << n || mult.len() != 1 << n {
            return Err(Error::invalid("table length must be 2^n"));
        }
        Ok(ArithmeticMatroid { n, rank, mult })
    }

    /// Matroid of the columns of `x` taken as centred characters.
    pub fn of_matrix(x: &IntMatrix) -> Result<Self> {
        let n = x.cols();
        if n > DENSE_LIMIT {
            return Err(Error::budget(format!("dense matroid tables need at most {DENSE_LIMIT} elements, got {n}")));
        }
        let mut rank = Vec::with_capacity(1 << n);
        let mut mult = Vec::with_capacity(1 << n);
        for m in 0..1u64 << n {
            let sub = x.select_columns(&indices_of(m));
            rank.push(if m == 0 { 0 } else { sub.rank() });
            mult.push(if m == 0 { BigInt::from(1) } else { cokernel_torsion_order(&sub) });
        }
        Self::from_tables(n, rank, mult)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self, mask: Mask) -> usize {
        self.rank[mask as usize]
    }

    pub fn mult(&self, mask: Mask) -> &BigInt {
        &self.mult[mask as usize]
    }

    pub fn full_rank(&self) -> usize {
        self.rank[(1usize << self.n) - 1]
    }

    pub fn is_independent(&self, mask: Mask) -> bool {
        self.rank(mask) == mask.count_ones() as usize
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let r = self.full_rank();
        crate::exactlin::subsets_of_size(self.n, r)
            .into_iter()
            .filter(|b| self.is_independent(mask_of(b)))
            .collect()
    }

    /// `{"n": .., "rank": {"<mask>": ..}, "m": {"<mask>": ..}}` with decimal bitmask keys.
    pub fn to_json(&self) -> Value {
        let mut rank = serde_json::Map::new();
        let mut m = serde_json::Map::new();
        for s in 0..1u64 << self.n {
            rank.insert(s.to_string(), json!(self.rank(s)));
            m.insert(s.to_string(), big_to_json(self.mult(s)));
        }
        json!({"n": self.n, "rank": rank, "m": m})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::invalid(format!("matroid: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        if n > DENSE_LIMIT {
            return Err(Error::budget(format!("dense matroid tables need at most {DENSE_LIMIT} elements, got {n}")));
        }
        let read = |key: &str| -> Result<Vec<Value>> {
            let obj = v.get(key).and_then(Value::as_object).ok_or_else(|| bad(&format!("missing {key}")))?;
            let mut out = vec![Value::Null; 1 << n];
            for (k, x) in obj {
                let s: usize = k.parse().map_err(|_| bad("keys must be decimal bitmasks"))?;
                if s >= 1 << n {
                    return Err(bad("bitmask outside the ground set"));
                }
                out[s] = x.clone();
            }
            if out.iter().any(Value::is_null) {
                return Err(bad(&format!("{key} must list every subset")));
            }
            Ok(out)
        };
        let rank = read("rank")?
            .iter()
            .map(|x| x.as_u64().map(|r| r as usize).ok_or_else(|| bad("ranks must be nonnegative integers")))
            .collect::<Result<Vec<_>>>()?;
        let mult = read("m")?.iter().map(json_to_big).collect::<Result<Vec<_>>>()?;
        if mult.iter().any(|x| x < &BigInt::from(0)) {
            return Err(bad("multiplicities must be nonnegative"));
        }
        Self::from_tables(n, rank, mult)
    }
}

/// Component counts of every subset of hypertori, phases included.
pub fn multiplicity_table(delta: &ToricArrangement) -> Result<ArithmeticMatroid> {
    let n = delta.len();
    if n > DENSE_LIMIT {
        return Err(Error::budget(format!("dense matroid tables need at most {DENSE_LIMIT} elements, got {n}")));
    }
    let mut rank = Vec::with_capacity(1 << n);
    let mut mult = Vec::with_capacity(1 << n);
    for m in 0..1u64 << n {
        rank.push(rank_of(delta, m));
        mult.push(multiplicity(delta, &indices_of(m)));
    }
    ArithmeticMatroid::from_tables(n, rank, mult)
}

/// Arithmetic matroid of a centred arrangement.
pub fn arithmetic_matroid(delta: &ToricArrangement) -> Result<ArithmeticMatroid> {
    if delta.hypertori().iter().any(|h| !h.phase.is_zero()) {
        return Err(Error::invalid("the arithmetic matroid is defined for centred arrangements"));
    }
    multiplicity_table(delta)
}

/// Minimal dependent subsets, sorted by size and then lexicographically.
pub fn circuits(delta: &ToricArrangement) -> Vec<Vec<usize>> {
    let ind = super::independent_sets(delta);
    let mut out: Vec<Vec<usize>> = circuit_masks(delta.len(), &ind).into_iter().map(indices_of).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

pub(crate) fn circuit_masks(n: usize, independent: &std::collections::BTreeSet<Mask>) -> Vec<Mask> {
    let mut out = Vec::new();
    for &i in independent {
        // Each circuit is listed once, from its largest element.
        let start = if i == 0 { 0 } else { 64 - i.leading_zeros() as usize };
        for e in start..n {
            let c = i | 1 << e;
            if independent.contains(&c) {
                continue;
            }
            if indices_of(i).iter().all(|&x| independent.contains(&(c & !(1 << x)))) {
                out.push(c);
            }
        }
    }
    out
}

/// A pair `(W, S)`: a layer of rank `|S|` and an NBC basis `S` of its local arrangement.
/// `index` is the position of the layer in its poset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NbcPair {
    pub index: usize,
    pub layer: Layer,
    pub s: Vec<usize>,
}

/// All NBC pairs of rank `q`, ordered by layer and then lexicographically in `S`.
pub fn nbc_pairs(poset: &LayerPoset, q: usize) -> Vec<NbcPair> {
    let n = poset.arrangement().len();
    let circuits = circuit_masks(n, poset.independent_sets());
    let mut out = Vec::new();
    let Some(layers) = poset.by_rank().get(q) else { return out };
    for &w in layers {
        let a = poset.hyps(w);
        let broken: Vec<Mask> = circuits
            .iter()
            .filter(|&&c| c & !a == 0)
            .map(|&c| c & !(1 << (63 - c.leading_zeros())))
            .collect();
        let local = indices_of(a);
        for pick in crate::exactlin::subsets_of_size(local.len(), q) {
            let s: Vec<usize> = pick.iter().map(|&i| local[i]).collect();
            let m = mask_of(&s);
            if !poset.is_independent(m) {
                continue;
            }
            if broken.iter().any(|&b| b & !m == 0) {
                continue;
            }
            out.push(NbcPair { index: w, layer: poset.layer(w).clone(), s });
        }
    }
    out
}

/// The counts `|N_0|, ..., |N_r|`.
pub fn nbc_counts(poset: &LayerPoset) -> Vec<usize> {
    (0..=poset.torus_rank()).map(|q| nbc_pairs(poset, q).len()).collect()
}

/// Coefficients of `P(t) = sum_q |N_q| (1+t)^(r-q) t^q`, constant term first.
pub fn poincare_polynomial(poset: &LayerPoset) -> Vec<BigInt> {
    let r = poset.torus_rank();
    let mut p = vec![BigInt::from(0); r + 1];
    for (q, n) in nbc_counts(poset).into_iter().enumerate() {
        for j in 0..=r - q {
            p[q + j] += BigInt::from(n) * binomial(r - q, j);
        }
    }
    p
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}
