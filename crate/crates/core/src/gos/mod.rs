//! The bigraded Orlik–Solomon model of a toric arrangement over Z and over Q.
//!
//! A basis element is `omega * y_{W,S}` with `(W, S)` an NBC pair and `omega` a wedge
//! monomial in the Hermite basis of `Lambda / I_W`. Products follow the layer rule
//! `y_{W,S} y_{W',S'} = sum_{W''} y_{W'',SS'}` over components of `W n W'`, with wedge
//! factors moved to the left.

mod os;
pub mod wedge;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arrangement::ToricArrangement;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_lattice, rational_inverse, smith_decomposition, IntMatrix};
use crate::layers::{binomial, build_poset, indices_of, LayerPoset, Mask};

pub use os::{sort_sign, OsAlgebra};
pub use wedge::Wedge;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Q,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Z => "Z",
            Ring::Q => "Q",
        })
    }
}

/// Key of a term: layer index and NBC set.
pub type TermKey = (usize, Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GosElement {
    ring: Ring,
    terms: BTreeMap<TermKey, Wedge>,
}

impl GosElement {
    pub fn zero(ring: Ring) -> Self {
        GosElement { ring, terms: BTreeMap::new() }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Wedge> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_wedge(&mut self, key: TermKey, w: &Wedge, k: &BigRational) {
        let slot = self.terms.entry(key.clone()).or_default();
        for (&m, c) in w {
            wedge::add_term(slot, m, c * k);
        }
        if slot.is_empty() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &GosElement) -> Result<GosElement> {
        if self.ring != other.ring {
            return Err(Error::invalid("elements live over different rings"));
        }
        let mut out = self.clone();
        for (k, w) in &other.terms {
            out.add_wedge(k.clone(), w, &BigRational::one());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigRational) -> GosElement {
        let mut out = GosElement::zero(self.ring);
        for (key, w) in &self.terms {
            out.add_wedge(key.clone(), w, k);
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|w| w.values().all(|c| c.is_integer()))
    }

    /// Same element over another ring; passing to Z needs integral coefficients.
    pub fn to_ring(&self, ring: Ring) -> Result<GosElement> {
        if ring == Ring::Z && !self.is_integral() {
            return Err(Error::invalid("element has non-integral coefficients"));
        }
        Ok(GosElement { ring, terms: self.terms.clone() })
    }

    /// Bidegrees `(p, q)` present.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .terms
            .iter()
            .flat_map(|((_, s), w)| w.keys().map(move |&m| (wedge::degree(m), s.len())))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((layer, s), w)| {
                let wedge: Vec<Value> = w
                    .iter()
                    .map(|(&m, c)| json!({"monomial": indices_of(m as Mask), "coeff": c.to_string()}))
                    .collect();
                json!({"layer": layer, "s": s, "wedge": wedge})
            })
            .collect();
        json!({"ring": self.ring.to_string(), "terms": terms})
    }
}

/// `monomial * y_{layer, s}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub layer: usize,
    pub s: Vec<usize>,
    pub monomial: u32,
}

impl BasisElement {
    pub fn bidegree(&self) -> (usize, usize) {
        (wedge::degree(self.monomial), self.s.len())
    }
}

/// Characters chosen to span `Lambda / I_W` rationally, and the index of the lattice they
/// generate there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BwView {
    pub chars: Vec<usize>,
    pub index: BigInt,
}

struct LayerData {
    /// Rows: Hermite basis of the cocharacters of W; applies `Lambda -> Lambda / I_W`.
    u: IntMatrix,
    /// A right inverse of `u`.
    lift: IntMatrix,
    os: OsAlgebra,
}

pub struct Gos {
    ring: Ring,
    poset: LayerPoset,
    data: Vec<LayerData>,
    slot: Vec<usize>,
    basis: Vec<BasisElement>,
    index: HashMap<BasisElement, usize>,
    meets: Mutex<HashMap<(usize, usize), Vec<usize>>>,
}

fn quotient_map(poset: &LayerPoset, w: usize) -> (IntMatrix, IntMatrix) {
    let r = poset.torus_rank();
    let layer = poset.layer(w);
    if layer.rank() == 0 {
        return (IntMatrix::identity(r), IntMatrix::identity(r));
    }
    let u = kernel_lattice(layer.gamma_w.hnf_basis()).hnf_basis().clone();
    if u.rows() == 0 {
        return (u, IntMatrix::zeros(r, 0));
    }
    // u is saturated, so its Smith form is (I | 0) and the lift is V (I; 0) U.
    let s = smith_decomposition(&u);
    let k = u.rows();
    let cols: Vec<usize> = (0..k).collect();
    let lift = s.v.select_columns(&cols).mul(&s.u);
    debug_assert_eq!(u.mul(&lift), IntMatrix::identity(k));
    (u, lift)
}

impl Gos {
    pub fn new(delta: &ToricArrangement, ring: Ring) -> Result<Self> {
        if delta.character_matrix().rank() != delta.rank() {
            return Err(Error::invalid("the graded Orlik–Solomon model needs an essential arrangement"));
        }
        Ok(Self::from_poset(build_poset(delta), ring))
    }

    /// Also accepts non-essential arrangements; the empty arrangement gives the exterior
    /// algebra of the character lattice.
    pub fn from_poset(poset: LayerPoset, ring: Ring) -> Self {
        let r = poset.torus_rank();
        let mut data = Vec::new();
        let mut slot = Vec::with_capacity(poset.len());
        let mut seen: HashMap<(usize, Mask), usize> = HashMap::new();
        let mut maps: HashMap<usize, (IntMatrix, IntMatrix)> = HashMap::new();
        for w in 0..poset.len() {
            let class = poset.lattice_class(w);
            let k = *seen.entry((class, poset.hyps(w))).or_insert_with(|| {
                let (u, lift) = maps.entry(class).or_insert_with(|| quotient_map(&poset, w)).clone();
                let (labels, vectors): (Vec<usize>, Vec<Vec<BigInt>>) = poset.local_coordinates(w).into_iter().unzip();
                data.push(LayerData { u, lift, os: OsAlgebra::new(labels, vectors) });
                data.len() - 1
            });
            slot.push(k);
        }
        let mut basis = Vec::new();
        for q in 0..=r {
            for &w in &poset.by_rank()[q] {
                for s in data[slot[w]].os.nbc_basis(q) {
                    for m in wedge::monomials(r - q) {
                        basis.push(BasisElement { layer: w, s: s.clone(), monomial: m });
                    }
                }
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Gos { ring, poset, data, slot, basis, index, meets: Mutex::new(HashMap::new()) }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    fn at(&self, w: usize) -> &LayerData {
        &self.data[self.slot[w]]
    }

    pub fn poset(&self) -> &LayerPoset {
        &self.poset
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn local_algebra(&self, w: usize) -> &OsAlgebra {
        &self.at(w).os
    }

    /// Projection `Lambda -> Lambda / I_W` in Hermite coordinates.
    pub fn quotient_matrix(&self, w: usize) -> &IntMatrix {
        &self.at(w).u
    }

    fn torus(&self) -> usize {
        self.poset.by_rank()[0][0]
    }

    pub fn one(&self) -> GosElement {
        let mut x = GosElement::zero(self.ring);
        x.terms.insert((self.torus(), Vec::new()), wedge::unit());
        x
    }

    /// A character as a degree (1,0) element.
    pub fn lambda(&self, v: &[BigInt]) -> GosElement {
        let mut x = GosElement::zero(self.ring);
        let w = wedge::vector(v);
        if !w.is_empty() {
            x.terms.insert((self.torus(), Vec::new()), w);
        }
        x
    }

    /// `e_i`, the class of the character of hypertorus `i`.
    pub fn e(&self, i: usize) -> GosElement {
        self.lambda(&self.poset.arrangement().hypertori()[i].chi)
    }

    /// `y_i`: the sum of `y_{W,{i}}` over the components `W` of hypertorus `i`.
    pub fn y(&self, i: usize) -> GosElement {
        let mut x = GosElement::zero(self.ring);
        for &w in &self.poset.atom_map()[i] {
            x.terms.insert((w, vec![i]), wedge::unit());
        }
        x
    }

    pub fn basis_element(&self, k: usize) -> GosElement {
        let b = &self.basis[k];
        let mut x = GosElement::zero(self.ring);
        x.terms.insert((b.layer, b.s.clone()), Wedge::from([(b.monomial, BigRational::one())]));
        x
    }

    pub fn index_of(&self, b: &BasisElement) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Coordinates in the basis order of `basis()`.
    pub fn coordinates(&self, x: &GosElement) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.basis.len()];
        for ((w, s), wd) in &x.terms {
            for (&m, c) in wd {
                let k = self.index[&BasisElement { layer: *w, s: s.clone(), monomial: m }];
                out[k] = c.clone();
            }
        }
        out
    }

    fn check_ring(&self, x: &GosElement) -> Result<()> {
        if x.ring != self.ring {
            return Err(Error::invalid(format!("element over {} used in an algebra over {}", x.ring, self.ring)));
        }
        Ok(())
    }

    /// Components of `W n W'` as layer indices.
    pub fn meet(&self, a: usize, b: usize) -> Vec<usize> {
        let key = (a.min(b), a.max(b));
        if let Some(hit) = self.meets.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let ws = self.poset.layer(a).meet(self.poset.layer(b));
        let out: Vec<usize> = ws
            .iter()
            .map(|w| self.poset.index_of(w).expect("components of a meet of layers are layers"))
            .collect();
        self.meets.lock().unwrap().insert(key, out.clone());
        out
    }

    fn transfer(&self, w: &Wedge, from: usize, to: usize) -> Wedge {
        if from == to {
            return w.clone();
        }
        let t = self.at(to).u.mul(&self.at(from).lift);
        wedge::transfer(w, &t)
    }

    /// Straightens `omega * y_{W,S}` where `S` is any independent list through `W` and the
    /// wedge factor is a word of characters.
    pub fn straighten_term(&self, w: usize, s: &[usize], word: &[Vec<BigInt>]) -> Result<GosElement> {
        let layer = self.poset.layer(w);
        let through = self.poset.hyps(w);
        if s.iter().any(|&i| i >= 64 || through >> i & 1 == 0) {
            return Err(Error::invalid("a hypertorus of S does not contain the layer"));
        }
        if s.len() != layer.rank() || !self.at(w).os.is_independent(&{
            let mut t = s.to_vec();
            t.sort();
            t
        }) {
            return Err(Error::invalid("S must be an independent set of size rank W"));
        }
        let mut omega = wedge::unit();
        for v in word {
            let img = self.at(w).u.mul_vec(v);
            omega = wedge::mul(&omega, &wedge::vector(&img));
        }
        let mut out = GosElement::zero(self.ring);
        for (t, c) in self.at(w).os.straighten(s) {
            out.add_wedge((w, t), &omega, &BigRational::from_integer(c));
        }
        Ok(out)
    }

    pub fn multiply(&self, x: &GosElement, y: &GosElement) -> Result<GosElement> {
        self.check_ring(x)?;
        self.check_ring(y)?;
        let mut out = GosElement::zero(self.ring);
        for ((w1, s1), o1) in &x.terms {
            for ((w2, s2), o2) in &y.terms {
                let mut joined = s1.clone();
                joined.extend_from_slice(s2);
                if sort_sign(&joined).is_none() {
                    continue;
                }
                for w3 in self.meet(*w1, *w2) {
                    let local = &self.at(w3).os;
                    let ys = local.straighten(&joined);
                    if ys.is_empty() {
                        continue;
                    }
                    let a = self.transfer(o1, *w1, w3);
                    let mut b = self.transfer(o2, *w2, w3);
                    // Moving the wedge factor of the right operand past y_{W,S}.
                    if s1.len() % 2 == 1 {
                        b = b.into_iter().map(|(m, c)| if wedge::degree(m) % 2 == 1 { (m, -c) } else { (m, c) }).collect();
                    }
                    let omega = wedge::mul(&a, &b);
                    if omega.is_empty() {
                        continue;
                    }
                    for (t, c) in ys {
                        out.add_wedge((w3, t), &omega, &BigRational::from_integer(c));
                    }
                }
            }
        }
        if self.ring == Ring::Z {
            assert!(out.is_integral(), "straightening over Z produced a denominator");
        }
        Ok(out)
    }

    pub fn product(&self, xs: &[GosElement]) -> Result<GosElement> {
        let mut acc = self.one();
        for x in xs {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// `dims[p][q] = binom(r - q, p) |N_q|`.
    pub fn hilbert_table(&self) -> Vec<Vec<BigInt>> {
        let r = self.poset.torus_rank();
        let n: Vec<usize> = (0..=r)
            .map(|q| self.poset.by_rank()[q].iter().map(|&w| self.at(w).os.nbc_basis(q).len()).sum())
            .collect();
        (0..=r)
            .map(|p| (0..=r).map(|q| if p + q <= r { binomial(r - q, p) * BigInt::from(n[q]) } else { BigInt::zero() }).collect())
            .collect()
    }

    /// Dimensions grouped by total degree `k`, listing `p = k, ..., 0`.
    pub fn hilbert_rows(&self) -> Vec<Vec<BigInt>> {
        let t = self.hilbert_table();
        let r = self.poset.torus_rank();
        (0..=r).map(|k| (0..=k).rev().map(|p| t[p][k - p].clone()).collect()).collect()
    }

    /// Lexicographically least set of characters spanning `Lambda / I_W` over Q.
    pub fn bw_view(&self, w: usize) -> BwView {
        let u = &self.at(w).u;
        let delta = self.poset.arrangement();
        let images: Vec<Vec<BigInt>> = delta.hypertori().iter().map(|h| u.mul_vec(&h.chi)).collect();
        let dim = u.rows();
        let chars = crate::normalform::lex_first_basis(images.len(), dim, |s| {
            let cols: Vec<Vec<BigInt>> = s.iter().map(|&i| images[i].clone()).collect();
            IntMatrix::from_columns(dim, &cols).rank() == s.len()
        })
        .unwrap_or_default();
        let index = if dim == 0 {
            BigInt::one()
        } else {
            let cols: Vec<Vec<BigInt>> = chars.iter().map(|&i| images[i].clone()).collect();
            IntMatrix::from_columns(dim, &cols).determinant().abs()
        };
        BwView { chars, index }
    }

    /// Layers whose chosen characters generate a proper sublattice of `Lambda / I_W`.
    pub fn bw_flagged(&self) -> Vec<usize> {
        (0..self.poset.len()).filter(|&w| !self.bw_view(w).index.is_one()).collect()
    }

    /// Coordinates over the monomials `e_T`, `T` a subset of the chosen characters of each layer.
    pub fn bw_coordinates(&self, x: &GosElement) -> BTreeMap<(usize, Vec<usize>, Vec<usize>), BigRational> {
        let mut out = BTreeMap::new();
        for ((w, s), wd) in &x.terms {
            let view = self.bw_view(*w);
            let dim = self.at(*w).u.rows();
            let cols: Vec<Vec<BigRational>> = view
                .chars
                .iter()
                .map(|&i| {
                    self.at(*w)
                        .u
                        .mul_vec(&self.poset.arrangement().hypertori()[i].chi)
                        .into_iter()
                        .map(BigRational::from_integer)
                        .collect()
                })
                .collect();
            // Columns of the inverse send Hermite coordinates to chosen-character coordinates.
            let m: Vec<Vec<BigRational>> = (0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect();
            let inv = rational_inverse(&m).expect("chosen characters span the quotient");
            let inv_cols: Vec<Vec<BigRational>> = (0..dim).map(|j| (0..dim).map(|i| inv[i][j].clone()).collect()).collect();
            for (mono, c) in wedge::transfer_columns(wd, &inv_cols) {
                let t: Vec<usize> = indices_of(mono as Mask).into_iter().map(|i| view.chars[i]).collect();
                out.insert((*w, s.clone(), t), c);
            }
        }
        out
    }
}

/// Each `e_i` as its character vector, the degree-one wedge coordinates at the torus.
pub fn rational_generator_map(delta: &ToricArrangement) -> Vec<Vec<BigRational>> {
    delta
        .hypertori()
        .iter()
        .map(|h| h.chi.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests;
