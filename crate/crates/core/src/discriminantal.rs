//! Translation families of a fixed list of characters: the discriminantal subtori
//! `B_j = {a : the hypertori in j meet}`, the locus `L(S)` of phase points with a prescribed
//! layer poset, and certificates separating its connected components.
//!
//! Phase points are torsion points `a = (e(q_1), ..., e(q_n))`, stored as the `q_i`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arrangement::{PhaseQZ, ToricArrangement};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_lattice, saturate, smith_decomposition, IntMatrix, Lattice};
use crate::layers::{build_poset, indices_of, posets_isomorphic, LayerPoset, Mask};

/// A coset of a subtorus of phase space: `{q : u . q = t_u mod 1}` for the Hermite basis
/// vectors `u` of `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtorusWithTargets {
    pub relations: Lattice,
    pub targets: Vec<PhaseQZ>,
}

impl SubtorusWithTargets {
    fn centred(relations: Lattice) -> Self {
        let targets = vec![PhaseQZ::zero(); relations.rank()];
        SubtorusWithTargets { relations, targets }
    }

    pub fn contains(&self, a: &[PhaseQZ]) -> bool {
        self.relations
            .integer_basis()
            .iter()
            .zip(&self.targets)
            .all(|(u, t)| &PhaseQZ::combination(u, a) == t)
    }

    /// Generators of the relation lattice as exponent vectors.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.relations.integer_basis()
    }
}

/// Integer relations among the characters indexed by `j`, as vectors in `Z^n`.
fn relations_of(chars: &IntMatrix, j: &[usize]) -> Vec<Vec<BigInt>> {
    let n = chars.cols();
    if j.is_empty() {
        return Vec::new();
    }
    kernel_lattice(&chars.select_columns(j))
        .integer_basis()
        .into_iter()
        .map(|k| {
            let mut v = vec![BigInt::zero(); n];
            for (x, &i) in k.into_iter().zip(j) {
                v[i] = x;
            }
            v
        })
        .collect()
}

/// `B_j` as a subtorus; the relation lattice is always saturated, so `B_j` is connected.
pub fn intersection_torus(chars: &IntMatrix, j: &[usize]) -> SubtorusWithTargets {
    SubtorusWithTargets::centred(Lattice::from_generators(chars.cols(), &relations_of(chars, j)))
}

/// `B_j` for a circuit `j`: a single primitive relation, first nonzero entry positive.
pub fn circuit_torus(chars: &IntMatrix, j: &[usize]) -> Result<SubtorusWithTargets> {
    let sub = chars.select_columns(j);
    let rels = relations_of(chars, j);
    let is_circuit = rels.len() == 1 && j.iter().all(|&i| !rels[0][i].is_zero()) && sub.rank() + 1 == j.len();
    if !is_circuit {
        return Err(Error::invalid("the index list is not a circuit"));
    }
    Ok(intersection_torus(chars, j))
}

/// Relation lattice of the intersection of `B_{j(W)}` over all layers `W` of `s`.
pub fn ambient_intersection(chars: &IntMatrix, s: &LayerPoset) -> SubtorusWithTargets {
    let mut gens = Vec::new();
    let mut seen = BTreeSet::new();
    for w in 0..s.len() {
        if seen.insert(s.hyps(w)) {
            gens.extend(relations_of(chars, &indices_of(s.hyps(w))));
        }
    }
    SubtorusWithTargets::centred(Lattice::from_generators(chars.cols(), &gens))
}

/// Whether the translated arrangement `{(chi_i, a_i)}` has layer poset `s` over E.
pub fn l_membership(a: &[PhaseQZ], chars: &IntMatrix, s: &LayerPoset) -> bool {
    if a.len() != chars.cols() || s.arrangement().len() != chars.cols() {
        return false;
    }
    let Ok(delta) = ToricArrangement::with_phases(chars, a) else { return false };
    posets_isomorphic(&build_poset(&delta), s, true).is_some()
}

/// Values `u . a mod 1` for the Hermite basis `u` of the saturated ambient relation lattice.
/// They label the component of the ambient intersection torus that contains `a`.
pub fn component_invariant(a: &[PhaseQZ], chars: &IntMatrix, s: &LayerPoset) -> Result<Vec<PhaseQZ>> {
    if !l_membership(a, chars, s) {
        return Err(Error::invalid("the phase point does not realise the poset"));
    }
    Ok(raw_invariant(a, &saturate(&ambient_intersection(chars, s).relations)))
}

fn raw_invariant(a: &[PhaseQZ], sat: &Lattice) -> Vec<PhaseQZ> {
    sat.integer_basis().iter().map(|u| PhaseQZ::combination(u, a)).collect()
}

/// Minimal index sets `j` with `j` not inside `j(W)` for any layer `W` of `s`.
pub fn forbidden_sets(s: &LayerPoset) -> Vec<Mask> {
    let n = s.arrangement().len();
    let allowed: BTreeSet<Mask> = (0..s.len()).map(|w| s.hyps(w)).collect();
    let fits = |j: Mask| allowed.iter().any(|&h| j & !h == 0);
    let mut out: Vec<Mask> = Vec::new();
    let mut masks: Vec<Mask> = (0..1u64 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for j in masks {
        if !fits(j) && !out.iter().any(|&f| f & !j == 0) {
            out.push(j);
        }
    }
    out
}

/// A component of the ambient intersection torus: its label and a rational point in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientComponent {
    pub invariant: Vec<PhaseQZ>,
    pub representative: Vec<PhaseQZ>,
    /// Whether the component lies inside some forbidden `B_j`.
    pub forbidden: bool,
}

/// All components of `{q : u . q = 0 mod 1, u in L}`.
pub fn ambient_components(chars: &IntMatrix, s: &LayerPoset) -> Vec<AmbientComponent> {
    let n = chars.cols();
    let l = ambient_intersection(chars, s).relations;
    let sat = saturate(&l);
    let k = sat.rank();
    let u = sat.hnf_basis().clone();
    // Rows of l in coordinates of the basis of sat.
    let rows: Vec<Vec<BigInt>> =
        l.integer_basis().iter().map(|v| sat.coordinates_of_int(v).unwrap().into_iter().map(|x| x.to_integer()).collect()).collect();
    let forbidden: Vec<Lattice> =
        forbidden_sets(s).into_iter().map(|j| intersection_torus(chars, &indices_of(j)).relations).collect();
    if k == 0 {
        let zero = vec![PhaseQZ::zero(); n];
        let bad = forbidden.iter().any(|f| f.rank() == 0);
        return vec![AmbientComponent { invariant: Vec::new(), representative: zero, forbidden: bad }];
    }
    let nm = IntMatrix::from_rows(k, &rows);
    let sm = smith_decomposition(&nm);
    // A right inverse of u: u is saturated, so its Smith form is (I | 0).
    let su = smith_decomposition(&u);
    let lift = su.v.select_columns(&(0..k).collect::<Vec<_>>()).mul(&su.u);
    let d = sm.invariant_factors.clone();
    let mut out = Vec::new();
    let mut t = vec![BigInt::zero(); k];
    loop {
        // N v in Z^k with v = V w and w_i = t_i / d_i.
        let w: Vec<BigRational> = (0..k).map(|i| BigRational::new(t[i].clone(), d[i].clone())).collect();
        let v: Vec<BigRational> = (0..k)
            .map(|i| (0..k).map(|j| BigRational::from_integer(sm.v.get(i, j).clone()) * &w[j]).sum())
            .collect();
        let q: Vec<PhaseQZ> = (0..n)
            .map(|i| PhaseQZ::from_rational((0..k).map(|j| BigRational::from_integer(lift.get(i, j).clone()) * &v[j]).sum()))
            .collect();
        let invariant = raw_invariant(&q, &sat);
        let bad = forbidden.iter().any(|f| {
            f.integer_basis().iter().all(|g| sat.contains_int(g)) && f.integer_basis().iter().all(|g| PhaseQZ::combination(g, &q).is_zero())
        });
        out.push(AmbientComponent { invariant, representative: q, forbidden: bad });
        let mut pos = 0;
        loop {
            if pos == k {
                out.sort_by(|a, b| a.invariant.cmp(&b.invariant));
                return out;
            }
            t[pos] += 1;
            if t[pos] < d[pos] {
                break;
            }
            t[pos] = BigInt::zero();
            pos += 1;
        }
    }
}

const WITNESS_PRIMES: [i64; 6] = [101, 103, 107, 109, 113, 127];

/// Searches a point of `L(s)` on the component through `base`, moving along the connected
/// directions `{q : sat . q = 0}` by rational steps.
pub fn find_witness(base: &[PhaseQZ], chars: &IntMatrix, s: &LayerPoset, budget: usize) -> Option<Vec<PhaseQZ>> {
    let n = chars.cols();
    let sat = saturate(&ambient_intersection(chars, s).relations);
    let dirs = if sat.rank() == 0 { IntMatrix::identity(n).row_vecs() } else { kernel_lattice(sat.hnf_basis()).integer_basis() };
    for attempt in 0..budget {
        let p = WITNESS_PRIMES[attempt % WITNESS_PRIMES.len()];
        let q: Vec<PhaseQZ> = (0..n)
            .map(|i| {
                let mut x = base[i].value().clone();
                for (k, dv) in dirs.iter().enumerate() {
                    let step = ((attempt as i64 + 1) * (k as i64 + 3) * 7919 + (k as i64) * 31) % p;
                    x += BigRational::new(BigInt::from(step), BigInt::from(p)) * BigRational::from_integer(dv[i].clone());
                }
                PhaseQZ::from_rational(x)
            })
            .collect();
        if l_membership(&q, chars, s) {
            return Some(q);
        }
    }
    None
}

/// Number of connected components of `L(s)`.
///
/// Components of the ambient torus lying inside a forbidden `B_j` are dropped; on the others
/// `L(s)` is the complement of finitely many proper closed subtori, hence connected. Each
/// surviving component must show a rational witness.
pub fn count_components(chars: &IntMatrix, s: &LayerPoset) -> Result<usize> {
    let comps: Vec<AmbientComponent> = ambient_components(chars, s).into_iter().filter(|c| !c.forbidden).collect();
    for c in &comps {
        if find_witness(&c.representative, chars, s, 60).is_none() {
            return Err(Error::infeasible("no rational witness found within the denominator budget"));
        }
    }
    Ok(comps.len())
}

/// Whether two phase points of `L(s)` lie in the same connected component.
pub fn same_component(a: &[PhaseQZ], b: &[PhaseQZ], chars: &IntMatrix, s: &LayerPoset) -> Result<bool> {
    Ok(component_invariant(a, chars, s)? == component_invariant(b, chars, s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    NearlyGeneric,
    Neither,
}

impl Genericity {
    pub fn as_str(self) -> &'static str {
        match self {
            Genericity::Generic => "generic",
            Genericity::NearlyGeneric => "nearly_generic",
            Genericity::Neither => "neither",
        }
    }
}

/// A layer is generic when exactly rank-many hypertori contain it; the poset is nearly
/// generic when some layer lies in every non-generic layer.
pub fn is_nearly_generic(s: &LayerPoset) -> Genericity {
    let bad: Vec<usize> = (0..s.len()).filter(|&w| s.hyps(w).count_ones() as usize != s.layer(w).rank()).collect();
    if bad.is_empty() {
        return Genericity::Generic;
    }
    if (0..s.len()).any(|top| bad.iter().all(|&w| s.le(w, top))) {
        Genericity::NearlyGeneric
    } else {
        Genericity::Neither
    }
}

/// Phase vector from integer numerators over a common denominator.
pub fn phase_point(nums: &[i64], den: i64) -> Vec<PhaseQZ> {
    nums.iter().map(|&x| PhaseQZ::new(x, den)).collect()
}

/// Index sets of all circuits of the character columns.
pub fn discriminantal_circuits(chars: &IntMatrix) -> Result<Vec<(Vec<usize>, SubtorusWithTargets)>> {
    let n = chars.cols();
    if n > 20 {
        return Err(Error::budget("circuit enumeration is limited to 20 characters"));
    }
    let mut out = Vec::new();
    let rank = |m: Mask| if m == 0 { 0 } else { chars.select_columns(&indices_of(m)).rank() };
    for m in 1..1u64 << n {
        let k = m.count_ones() as usize;
        if rank(m) + 1 == k && indices_of(m).iter().all(|&i| rank(m & !(1 << i)) == k - 1) {
            let j = indices_of(m);
            let b = circuit_torus(chars, &j)?;
            out.push((j, b));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
    Ok(out)
}

#[cfg(test)]
mod tests;
