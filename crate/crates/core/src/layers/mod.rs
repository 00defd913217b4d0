//! Layers (connected components of intersections of hypertori), the poset they form,
//! the arithmetic matroid, circuits and no-broken-circuit data.

mod iso;
mod matroid;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use serde_json::{json, Value};

use crate::arrangement::{big_to_json, PhaseQZ, ToricArrangement};
use crate::error::{Error, Result};
use crate::exactlin::{saturate, smith_decomposition, IntMatrix, Lattice};

pub use iso::posets_isomorphic;
pub(crate) use matroid::circuit_masks;
pub use matroid::{
    arithmetic_matroid, binomial, circuits, multiplicity_table, nbc_counts, nbc_pairs, poincare_polynomial, ArithmeticMatroid, NbcPair,
};

/// A subset mask over the ground set E.
pub type Mask = u64;

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// A layer: the saturated lattice `I_W` of characters constant on it, in Hermite form,
/// and the value of those characters on the layer, one phase per basis row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Layer {
    pub gamma_w: Lattice,
    pub phi: Vec<PhaseQZ>,
}

impl Layer {
    pub fn torus(r: usize) -> Self {
        Layer { gamma_w: Lattice::zero(r), phi: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.gamma_w.rank()
    }

    pub fn ambient_rank(&self) -> usize {
        self.gamma_w.ambient_rank()
    }

    /// Value of `chi` on the layer, if `chi` is constant there.
    pub fn value_on(&self, chi: &[BigInt]) -> Option<PhaseQZ> {
        let c = self.gamma_w.coordinates_of_int(chi)?;
        if !c.iter().all(|x| x.is_integer()) {
            return None;
        }
        let c: Vec<BigInt> = c.into_iter().map(|x| x.to_integer()).collect();
        Some(PhaseQZ::combination(&c, &self.phi))
    }

    pub fn lies_in(&self, chi: &[BigInt], phase: &PhaseQZ) -> bool {
        self.value_on(chi).as_ref() == Some(phase)
    }

    /// Poset order: `self <= other` when `other` is contained in `self`.
    pub fn is_below(&self, other: &Layer) -> bool {
        if self.rank() > other.rank() {
            return false;
        }
        self.constraints().iter().all(|(b, q)| other.lies_in(b, q))
    }

    /// Defining equations `b(t) = e(q)` over the Hermite basis.
    pub fn constraints(&self) -> Vec<(Vec<BigInt>, PhaseQZ)> {
        self.gamma_w.integer_basis().into_iter().zip(self.phi.iter().cloned()).collect()
    }

    /// Connected components of the intersection with `other`.
    pub fn meet(&self, other: &Layer) -> Vec<Layer> {
        let mut cs = self.constraints();
        cs.extend(other.constraints());
        components_of_constraints(self.ambient_rank(), &cs)
    }
}

/// Smith data for a system `chi_j(t) = e(q_j)`: the saturation of the span, the
/// character coordinates in it, and either the solution count or inconsistency.
struct System {
    sat: Lattice,
    coords: IntMatrix,
    consistent: bool,
    rhs: Vec<PhaseQZ>,
}

fn analyse(r: usize, constraints: &[(Vec<BigInt>, PhaseQZ)]) -> System {
    let chars: Vec<Vec<BigInt>> = constraints.iter().map(|(c, _)| c.clone()).collect();
    let sat = saturate(&Lattice::from_generators(r, &chars));
    let k = sat.rank();
    let rows: Vec<Vec<BigInt>> = chars
        .iter()
        .map(|c| {
            sat.coordinates_of_int(c)
                .expect("character outside its own saturation")
                .into_iter()
                .map(|x| x.to_integer())
                .collect()
        })
        .collect();
    let coords = IntMatrix::from_rows(k, &rows);
    let phases: Vec<PhaseQZ> = constraints.iter().map(|(_, q)| q.clone()).collect();
    let s = smith_decomposition(&coords);
    let rhs: Vec<PhaseQZ> = (0..coords.rows()).map(|i| PhaseQZ::combination(s.u.row(i), &phases)).collect();
    let consistent = rhs[k.min(rhs.len())..].iter().all(|q| q.is_zero());
    System { sat, coords, consistent, rhs }
}

/// Number of connected components of `{t : chi_j(t) = e(q_j)}`; zero when empty.
pub fn count_components(r: usize, constraints: &[(Vec<BigInt>, PhaseQZ)]) -> BigInt {
    if constraints.is_empty() {
        return BigInt::one();
    }
    let sys = analyse(r, constraints);
    if !sys.consistent {
        return BigInt::zero();
    }
    let s = smith_decomposition(&sys.coords);
    s.invariant_factors.iter().filter(|d| !d.is_zero()).product()
}

/// All connected components of `{t : chi_j(t) = e(q_j) for all j}` as canonical layers.
///
/// The phase map on the span of the characters is checked for consistency against the
/// integer relations among them, then extended in every possible way to the saturation.
pub fn components_of_constraints(r: usize, constraints: &[(Vec<BigInt>, PhaseQZ)]) -> Vec<Layer> {
    if constraints.is_empty() {
        return vec![Layer::torus(r)];
    }
    let sys = analyse(r, constraints);
    if !sys.consistent {
        return Vec::new();
    }
    let k = sys.sat.rank();
    let s = smith_decomposition(&sys.coords);
    // Solutions are eta_j = (rhs_j + t_j) / d_j, pulled back by V.
    let choices: Vec<Vec<PhaseQZ>> = (0..k)
        .map(|j| {
            let d = &s.invariant_factors[j];
            let mut out = Vec::new();
            let mut t = BigInt::zero();
            while &t < d {
                let v = (sys.rhs[j].value() + num_rational::BigRational::from_integer(t.clone()))
                    / num_rational::BigRational::from_integer(d.clone());
                out.push(PhaseQZ::from_rational(v));
                t += 1;
            }
            out
        })
        .collect();
    let mut layers = BTreeSet::new();
    let mut idx = vec![0usize; k];
    loop {
        let eta: Vec<&PhaseQZ> = (0..k).map(|j| &choices[j][idx[j]]).collect();
        let eta: Vec<PhaseQZ> = eta.into_iter().cloned().collect();
        let phi: Vec<PhaseQZ> = (0..k).map(|i| PhaseQZ::combination(s.v.row(i), &eta)).collect();
        layers.insert(Layer { gamma_w: sys.sat.clone(), phi });
        let mut pos = 0;
        loop {
            if pos == k {
                return layers.into_iter().collect();
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn hypertorus_constraints(delta: &ToricArrangement, s: &[usize]) -> Vec<(Vec<BigInt>, PhaseQZ)> {
    s.iter().map(|&i| (delta.hypertori()[i].chi.clone(), delta.hypertori()[i].phase.clone())).collect()
}

pub fn components_of_intersection(delta: &ToricArrangement, s: &[usize]) -> Vec<Layer> {
    components_of_constraints(delta.rank(), &hypertorus_constraints(delta, s))
}

/// Number of connected components of the intersection of the hypertori in `s`.
pub fn multiplicity(delta: &ToricArrangement, s: &[usize]) -> BigInt {
    count_components(delta.rank(), &hypertorus_constraints(delta, s))
}

/// Rank over Q of the characters indexed by `mask`.
pub fn rank_of(delta: &ToricArrangement, mask: Mask) -> usize {
    let cols: Vec<Vec<BigInt>> = indices_of(mask).into_iter().map(|i| delta.hypertori()[i].chi.clone()).collect();
    if cols.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(delta.rank(), &cols).rank()
}

/// All independent subsets of E, as masks.
pub fn independent_sets(delta: &ToricArrangement) -> BTreeSet<Mask> {
    let n = delta.len();
    let mut out = BTreeSet::new();
    let mut stack: Vec<(Mask, usize)> = vec![(0, 0)];
    while let Some((mask, start)) = stack.pop() {
        out.insert(mask);
        let size = mask.count_ones() as usize;
        if size == delta.rank() {
            continue;
        }
        for i in start..n {
            let m = mask | 1 << i;
            if rank_of(delta, m) == size + 1 {
                stack.push((m, i + 1));
            }
        }
    }
    out
}

/// The ranked poset of layers, with canonical layer order (rank, Hermite basis, phases).
#[derive(Clone, Debug)]
pub struct LayerPoset {
    arrangement: ToricArrangement,
    layers: Vec<Layer>,
    by_rank: Vec<Vec<usize>>,
    /// `below[j]` lists every `i` with `layers[i] <= layers[j]`, including `j`.
    below: Vec<BTreeSet<usize>>,
    hyps: Vec<Mask>,
    atom_map: Vec<Vec<usize>>,
    index: BTreeMap<Layer, usize>,
    independent: BTreeSet<Mask>,
    lattice_of: Vec<usize>,
    chi_coords: Vec<Vec<Option<Vec<BigInt>>>>,
}

impl LayerPoset {
    pub fn arrangement(&self) -> &ToricArrangement {
        &self.arrangement
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &Layer {
        &self.layers[i]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Layer indices grouped by rank `0..=r`.
    pub fn by_rank(&self) -> &[Vec<usize>] {
        &self.by_rank
    }

    pub fn rank_counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(&i)
    }

    pub fn below(&self, j: usize) -> &BTreeSet<usize> {
        &self.below[j]
    }

    /// Hypertori containing layer `i`, as a mask over E.
    pub fn hyps(&self, i: usize) -> Mask {
        self.hyps[i]
    }

    /// Rank-one layers that each hypertorus index maps to.
    pub fn atom_map(&self) -> &[Vec<usize>] {
        &self.atom_map
    }

    pub fn index_of(&self, w: &Layer) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn independent_sets(&self) -> &BTreeSet<Mask> {
        &self.independent
    }

    pub fn is_independent(&self, mask: Mask) -> bool {
        self.independent.contains(&mask)
    }

    /// Class of the lattice `I_W` of layer `i`; layers in one class are translates.
    pub fn lattice_class(&self, i: usize) -> usize {
        self.lattice_of[i]
    }

    /// Coordinates of every character through layer `i` in the Hermite basis of `I_W`.
    pub fn local_coordinates(&self, i: usize) -> Vec<(usize, Vec<BigInt>)> {
        indices_of(self.hyps[i])
            .into_iter()
            .map(|e| (e, self.chi_coords[self.lattice_of[i]][e].clone().expect("character through the layer")))
            .collect()
    }

    pub fn torus_rank(&self) -> usize {
        self.arrangement.rank()
    }

    /// Canonical labelling for reports: every layer with the hypertori through it.
    pub fn fingerprint(&self) -> Vec<(usize, Vec<usize>)> {
        let mut f: Vec<(usize, Vec<usize>)> =
            (0..self.len()).map(|i| (self.layers[i].rank(), indices_of(self.hyps[i]))).collect();
        f.sort();
        f
    }

    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = (0..self.len())
            .map(|i| {
                let w = &self.layers[i];
                json!({
                    "id": i,
                    "rank": w.rank(),
                    "hypertori": indices_of(self.hyps[i]),
                    "lattice": w.gamma_w.integer_basis().iter().map(|b| b.iter().map(big_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "values": w.phi.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "below": self.below[i].iter().filter(|&&j| j != i).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "rank": self.arrangement.rank(),
            "rank_counts": self.rank_counts(),
            "layers": layers,
        })
    }
}

/// Integral coordinates of `v` in a saturated lattice, if `v` lies in it.
fn int_coords(l: &Lattice, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = l.coordinates_of_int(v)?;
    c.iter().all(|x| x.is_integer()).then(|| c.into_iter().map(|x| x.to_integer()).collect())
}

pub fn build_poset(delta: &ToricArrangement) -> LayerPoset {
    let r = delta.rank();
    let independent = independent_sets(delta);
    let mut set = BTreeSet::new();
    for &mask in &independent {
        for w in components_of_intersection(delta, &indices_of(mask)) {
            set.insert(w);
        }
    }
    let layers: Vec<Layer> = set.into_iter().collect();
    let mut by_rank = vec![Vec::new(); r + 1];
    for (i, w) in layers.iter().enumerate() {
        by_rank[w.rank()].push(i);
    }
    // Layers sharing I_W are translates; comparisons go through their lattices once.
    let mut lattices: Vec<Lattice> = Vec::new();
    let mut lattice_of = Vec::with_capacity(layers.len());
    for w in &layers {
        let g = match lattices.iter().position(|l| l == &w.gamma_w) {
            Some(g) => g,
            None => {
                lattices.push(w.gamma_w.clone());
                lattices.len() - 1
            }
        };
        lattice_of.push(g);
    }
    let chi_coords: Vec<Vec<Option<Vec<BigInt>>>> = lattices
        .iter()
        .map(|l| delta.hypertori().iter().map(|h| int_coords(l, &h.chi)).collect())
        .collect();
    let hyps: Vec<Mask> = layers
        .iter()
        .enumerate()
        .map(|(j, w)| {
            delta.hypertori().iter().enumerate().fold(0, |m, (i, h)| match &chi_coords[lattice_of[j]][i] {
                Some(c) if PhaseQZ::combination(c, &w.phi) == h.phase => m | 1 << i,
                _ => m,
            })
        })
        .collect();
    // containment[a][b]: coordinates of the basis of lattice a in lattice b.
    let containment: Vec<Vec<Option<Vec<Vec<BigInt>>>>> = lattices
        .iter()
        .map(|a| {
            lattices
                .iter()
                .map(|b| {
                    if a.rank() > b.rank() {
                        return None;
                    }
                    a.integer_basis().iter().map(|v| int_coords(b, v)).collect()
                })
                .collect()
        })
        .collect();
    let mut below = vec![BTreeSet::new(); layers.len()];
    for j in 0..layers.len() {
        below[j].insert(j);
        for i in 0..layers.len() {
            if layers[i].rank() >= layers[j].rank() {
                break;
            }
            if hyps[i] & !hyps[j] != 0 {
                continue;
            }
            let Some(c) = &containment[lattice_of[i]][lattice_of[j]] else { continue };
            if c.iter().zip(&layers[i].phi).all(|(row, q)| &PhaseQZ::combination(row, &layers[j].phi) == q) {
                below[j].insert(i);
            }
        }
    }
    let index: BTreeMap<Layer, usize> = layers.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let atom_map = (0..delta.len())
        .map(|e| {
            components_of_intersection(delta, &[e]).iter().map(|w| index[w]).collect()
        })
        .collect();
    LayerPoset {
        arrangement: delta.clone(),
        layers,
        by_rank,
        below,
        hyps,
        atom_map,
        index,
        independent,
        lattice_of,
        chi_coords,
    }
}

/// Characters of the hypertori through `w`, in coordinates of the Hermite basis of `I_W`.
/// These span the normal directions of `w`; their matroid is the local hyperplane arrangement.
pub fn local_arrangement(delta: &ToricArrangement, w: &Layer) -> Result<Vec<(usize, Vec<BigInt>)>> {
    let through: Vec<usize> = (0..delta.len())
        .filter(|&i| w.lies_in(&delta.hypertori()[i].chi, &delta.hypertori()[i].phase))
        .collect();
    let not_layer = || Error::invalid("the given layer is not a layer of this arrangement");
    if w.rank() > 0 {
        if rank_of(delta, mask_of(&through)) != w.rank() {
            return Err(not_layer());
        }
        if !components_of_intersection(delta, &through).contains(w) {
            return Err(not_layer());
        }
    } else if *w != Layer::torus(delta.rank()) {
        return Err(not_layer());
    }
    Ok(through
        .into_iter()
        .map(|i| {
            let c = w.gamma_w.coordinates_of_int(&delta.hypertori()[i].chi).unwrap();
            (i, c.into_iter().map(|x| x.to_integer()).collect())
        })
        .collect())
}
