//! Finite coverings of tori: the group `G = Lambda / Gamma` read off a multiplicity
//! function, extension classes in `Ext^1(G, Gamma)`, coherence with an arithmetic matroid,
//! the `Aut(G)` action and the resulting invariant of a centred arrangement.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arrangement::{big_to_json, ToricArrangement};
use crate::error::{Error, Result};
use crate::exactlin::{
    quotient_invariants, rational_inverse, saturate, smith_decomposition, FinAbGroup, IntMatrix, Lattice,
};
use crate::layers::{build_poset, indices_of, ArithmeticMatroid, Mask};
use crate::normalform::{normal_form_signs, reconstruct_matrix, CoordMatrix};

/// Default cap on `|Ext^1(G, Gamma)|` for enumeration.
pub const EXT_BUDGET: u64 = 1_000_000;
/// Cap on `|G|` for the brute-force automorphism group.
pub const AUT_BUDGET: u64 = 10_000;

/// `d_i = e_i / e_{i-1}` with `e_i` the gcd of `m(S)` over independent `S` of size `i`.
pub fn group_from_multiplicity(m: &ArithmeticMatroid) -> Result<FinAbGroup> {
    let r = m.full_rank();
    let mut e = vec![BigInt::zero(); r + 1];
    for s in 0..1u64 << m.n() {
        if m.is_independent(s) {
            let k = s.count_ones() as usize;
            e[k] = e[k].gcd(m.mult(s));
        }
    }
    if e.iter().any(Zero::is_zero) {
        return Err(Error::invalid("multiplicity vanishes on an independent set"));
    }
    let d: Vec<BigInt> = (1..=r).map(|i| &e[i] / &e[i - 1]).collect();
    Ok(FinAbGroup::from_orders(&d))
}

/// An element of `Ext^1(G, Gamma) = ⊕ Gamma / d_i Gamma`: one vector of `Gamma`-coordinates
/// per invariant factor, reduced into `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtensionClass {
    pub factors: Vec<BigInt>,
    pub components: Vec<Vec<BigInt>>,
}

impl ExtensionClass {
    pub fn new(group: &FinAbGroup, components: Vec<Vec<BigInt>>) -> Result<Self> {
        if components.len() != group.factors().len() {
            return Err(Error::invalid("one component per invariant factor"));
        }
        let components = components
            .into_iter()
            .zip(group.factors())
            .map(|(v, d)| v.into_iter().map(|x| x.mod_floor(d)).collect())
            .collect();
        Ok(ExtensionClass { factors: group.factors().to_vec(), components })
    }

    pub fn zero(group: &FinAbGroup, k: usize) -> Self {
        ExtensionClass { factors: group.factors().to_vec(), components: vec![vec![BigInt::zero(); k]; group.factors().len()] }
    }

    /// The class of a tuple of elements of `Gamma` given in ambient coordinates.
    pub fn from_ambient(gamma: &Lattice, group: &FinAbGroup, vectors: &[Vec<BigRational>]) -> Result<Self> {
        let comps = vectors
            .iter()
            .map(|v| gamma.integer_coordinates(v).ok_or_else(|| Error::invalid("vector outside Gamma")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, comps)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.factors.iter().map(big_to_json).collect::<Vec<_>>(),
            "class": self.components.iter().map(|v| v.iter().map(big_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Every class of `Ext^1(G, Gamma)` for `Gamma` of rank `k`, in lexicographic order.
pub fn ext_elements(group: &FinAbGroup, k: usize, budget: u64) -> Result<Vec<ExtensionClass>> {
    let size = group.factors().iter().fold(BigInt::one(), |a, d| a * d.pow(k as u32));
    if size > BigInt::from(budget) {
        return Err(Error::budget(format!("Ext group has {size} elements, budget is {budget}")));
    }
    let slots: Vec<BigInt> = group.factors().iter().flat_map(|d| std::iter::repeat_n(d.clone(), k)).collect();
    let mut out = Vec::new();
    let mut cur = vec![BigInt::zero(); slots.len()];
    loop {
        let comps = cur.chunks(k.max(1)).map(<[BigInt]>::to_vec).collect::<Vec<_>>();
        let comps = if k == 0 { vec![Vec::new(); group.factors().len()] } else { comps };
        out.push(ExtensionClass { factors: group.factors().to_vec(), components: comps });
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < slots[pos] {
                break;
            }
            cur[pos] = BigInt::zero();
        }
    }
}

fn ambient(gamma: &Lattice, coords: &[BigInt]) -> Vec<BigRational> {
    let basis = gamma.basis();
    let mut v = vec![BigRational::zero(); gamma.ambient_rank()];
    for (c, b) in coords.iter().zip(&basis) {
        for (x, y) in v.iter_mut().zip(b) {
            *x += BigRational::from_integer(c.clone()) * y;
        }
    }
    v
}

fn raw_extension(gamma: &Lattice, x: &ExtensionClass) -> Lattice {
    let mut gens = gamma.basis();
    for (v, d) in x.components.iter().zip(&x.factors) {
        let d = BigRational::from_integer(d.clone());
        gens.push(ambient(gamma, v).into_iter().map(|t| t / &d).collect());
    }
    Lattice::from_rational_generators(gamma.ambient_rank(), &gens)
}

/// `Lambda_x = Gamma + sum Z v_i / d_i`; fails unless `Lambda_x / Gamma` has order `|G|`.
pub fn extension_lattice(gamma: &Lattice, x: &ExtensionClass) -> Result<Lattice> {
    if x.components.iter().any(|v| v.len() != gamma.rank()) {
        return Err(Error::invalid("component vectors must have the rank of Gamma"));
    }
    let l = raw_extension(gamma, x);
    let q = quotient_invariants(gamma, &l)?;
    let order: BigInt = x.factors.iter().product();
    if q.torsion.order() != order {
        return Err(Error::invalid("non-faithful class: the extension has torsion"));
    }
    Ok(l)
}

/// `L n span(chars)`.
fn radical(l: &Lattice, chars: &[Vec<BigRational>]) -> Lattice {
    let coords: Vec<Vec<BigInt>> =
        chars.iter().map(|c| l.integer_coordinates(c).expect("character outside the lattice")).collect();
    let k = l.rank();
    let sat = saturate(&Lattice::from_generators(k, &coords));
    let gens: Vec<Vec<BigRational>> = sat.integer_basis().iter().map(|c| ambient(l, c)).collect();
    Lattice::from_rational_generators(l.ambient_rank(), &gens)
}

/// `|H_S(x)| = |Tor(Lambda_x / Rad_Gamma Gamma_S)|`.
pub fn h_s_order(gamma: &Lattice, x: &ExtensionClass, chars: &[Vec<BigRational>], s: &[usize]) -> Result<BigInt> {
    let l = extension_lattice(gamma, x)?;
    Ok(h_s_order_in(gamma, &l, chars, s))
}

fn h_s_order_in(gamma: &Lattice, l: &Lattice, chars: &[Vec<BigRational>], s: &[usize]) -> BigInt {
    let picked: Vec<Vec<BigRational>> = s.iter().map(|&i| chars[i].clone()).collect();
    let rad = radical(gamma, &picked);
    quotient_invariants(&rad, l).expect("Gamma lies in its extension").torsion.order()
}

/// The arrangement `Delta_U`: characters spanning `Q^r`, the lattice they generate and its
/// multiplicity function.
#[derive(Clone, Debug)]
pub struct CoveringData {
    pub gamma: Lattice,
    pub chars: Vec<Vec<BigRational>>,
    pub m_u: ArithmeticMatroid,
}

impl CoveringData {
    pub fn from_characters(r: usize, chars: Vec<Vec<BigRational>>) -> Result<Self> {
        if chars.iter().any(|c| c.len() != r) {
            return Err(Error::invalid("characters must have length r"));
        }
        let gamma = Lattice::from_rational_generators(r, &chars);
        if gamma.rank() != r {
            return Err(Error::invalid("characters must span"));
        }
        let cols: Vec<Vec<BigInt>> = chars.iter().map(|c| gamma.integer_coordinates(c).unwrap()).collect();
        let m_u = ArithmeticMatroid::of_matrix(&IntMatrix::from_columns(r, &cols))?;
        Ok(CoveringData { gamma, chars, m_u })
    }

    fn from_coordinates(c: &CoordMatrix) -> Result<Self> {
        let n = c.basis.len() + c.nonbasis.len();
        Self::from_characters(c.basis.len(), (0..n).map(|e| c.column_of(e)).collect())
    }

    /// `Delta_U` given by the normal-form coordinate matrix reconstructed from `m`.
    pub fn from_matroid(m: &ArithmeticMatroid) -> Result<Self> {
        Self::from_coordinates(&reconstruct_matrix(m)?)
    }

    /// Integer matrix of the characters in the basis of `Lambda_x`.
    pub fn representation(&self, x: &ExtensionClass) -> Result<IntMatrix> {
        let l = extension_lattice(&self.gamma, x)?;
        let cols: Vec<Vec<BigInt>> = self.chars.iter().map(|c| l.integer_coordinates(c).unwrap()).collect();
        Ok(IntMatrix::from_columns(l.rank(), &cols))
    }
}

/// Classes `x` with `|H_S(x)| = m_T(S) / m_U(S)` for every `S`.
pub fn coherent_elements(data: &CoveringData, m_t: &ArithmeticMatroid, budget: u64) -> Result<Vec<ExtensionClass>> {
    let n = data.chars.len();
    if m_t.n() != n {
        return Err(Error::invalid("matroid and arrangement have different ground sets"));
    }
    let mut ratio = Vec::with_capacity(1 << n);
    for s in 0..1u64 << n {
        let (q, rem) = m_t.mult(s).div_rem(data.m_u.mult(s));
        if !rem.is_zero() || data.m_u.mult(s).is_zero() {
            return Ok(Vec::new());
        }
        ratio.push(q);
    }
    let group = group_from_multiplicity(m_t)?;
    let mut out = Vec::new();
    for x in ext_elements(&group, data.gamma.rank(), budget)? {
        // Non-faithful classes have H_empty = Tor(X) nonzero.
        let Ok(l) = extension_lattice(&data.gamma, &x) else { continue };
        if (0..1u64 << n).all(|s| h_s_order_in(&data.gamma, &l, &data.chars, &indices_of(s as Mask)) == ratio[s as usize]) {
            out.push(x);
        }
    }
    Ok(out)
}

/// An endomorphism of `⊕ Z/d_i`: `a[i][j]` is the `i`-th coordinate of the image of `g_j`.
pub type GroupMap = Vec<Vec<BigInt>>;

fn primes_of(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn apply(a: &GroupMap, d: &[u64], g: &[u64]) -> Vec<u64> {
    (0..d.len())
        .map(|i| {
            let s: BigInt = (0..d.len()).map(|j| &a[i][j] * BigInt::from(g[j])).sum();
            s.mod_floor(&BigInt::from(d[i])).to_u64().unwrap()
        })
        .collect()
}

/// `Aut(G)` by enumerating endomorphisms and testing injectivity on elements of prime order.
pub fn automorphisms(group: &FinAbGroup) -> Result<Vec<GroupMap>> {
    if group.order() > BigInt::from(AUT_BUDGET) {
        return Err(Error::budget(format!("|G| = {} exceeds the automorphism budget {AUT_BUDGET}", group.order())));
    }
    let d: Vec<u64> = group.factors().iter().map(|x| x.to_u64().unwrap()).collect();
    let k = d.len();
    // a[i][j] must be a multiple of d_i / gcd(d_i, d_j).
    let mut slots = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let g = d[i].gcd(&d[j]);
            slots.push((d[i] / g, g));
        }
    }
    let count: f64 = slots.iter().map(|&(_, g)| g as f64).product();
    if count > EXT_BUDGET as f64 {
        return Err(Error::budget("too many endomorphisms to enumerate"));
    }
    let order: u64 = d.iter().product();
    let socles: Vec<Vec<Vec<u64>>> = primes_of(order)
        .into_iter()
        .map(|p| {
            // Elements of order p: coordinates multiples of d_i / p where p | d_i.
            let steps: Vec<u64> = d.iter().map(|&di| if di % p == 0 { p } else { 1 }).collect();
            let mut out = Vec::new();
            let mut cur = vec![0u64; k];
            loop {
                if cur.iter().any(|&c| c != 0) {
                    out.push((0..k).map(|i| cur[i] * (d[i] / steps[i].max(1)) % d[i]).collect());
                }
                let mut pos = 0;
                loop {
                    if pos == k {
                        return out;
                    }
                    cur[pos] += 1;
                    if cur[pos] < steps[pos] {
                        break;
                    }
                    cur[pos] = 0;
                    pos += 1;
                }
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut t = vec![0u64; slots.len()];
    loop {
        let a: GroupMap = (0..k).map(|i| (0..k).map(|j| BigInt::from(t[i * k + j] * slots[i * k + j].0)).collect()).collect();
        if socles.iter().flatten().all(|g| apply(&a, &d, g).iter().any(|&c| c != 0)) {
            out.push(a);
        }
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return Ok(out);
            }
            t[pos] += 1;
            if t[pos] < slots[pos].1 {
                break;
            }
            t[pos] = 0;
            pos += 1;
        }
    }
}

/// Right action of `phi` on `x`: the pull-back of the extension along `phi`.
pub fn act(x: &ExtensionClass, phi: &GroupMap) -> ExtensionClass {
    let k = x.components.first().map_or(0, Vec::len);
    let comps = (0..x.factors.len())
        .map(|j| {
            let dj = &x.factors[j];
            let mut w = vec![BigInt::zero(); k];
            for (i, vi) in x.components.iter().enumerate() {
                let c = &phi[i][j] * dj / &x.factors[i];
                for (a, b) in w.iter_mut().zip(vi) {
                    *a += &c * b;
                }
            }
            w.into_iter().map(|t| t.mod_floor(dj)).collect()
        })
        .collect();
    ExtensionClass { factors: x.factors.clone(), components: comps }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Lexicographically least member.
    pub representative: ExtensionClass,
    pub size: usize,
}

/// Orbits of an `Aut(G)`-stable set, sorted by representative.
pub fn aut_orbits(set: &[ExtensionClass], group: &FinAbGroup) -> Result<Vec<Orbit>> {
    let auts = automorphisms(group)?;
    let mut left: BTreeSet<ExtensionClass> = set.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(x) = left.pop_first() {
        let orbit: BTreeSet<ExtensionClass> = auts.iter().map(|a| act(&x, a)).collect();
        for y in &orbit {
            left.remove(y);
        }
        out.push(Orbit { representative: orbit.first().unwrap().clone(), size: orbit.len() });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// Canonical representative of the orbit of `x`.
pub fn canonical_class(x: &ExtensionClass, group: &FinAbGroup) -> Result<ExtensionClass> {
    Ok(automorphisms(group)?.iter().map(|a| act(x, a)).min().unwrap())
}

/// The layer poset (as its fingerprint) together with the `Aut(G)`-orbit of the extension
/// `Gamma -> Lambda` read in normal-form coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementInvariant {
    pub fingerprint: Vec<(usize, Vec<usize>)>,
    pub group: FinAbGroup,
    pub class: ExtensionClass,
}

impl ArrangementInvariant {
    pub fn to_json(&self) -> Value {
        let mut v = self.class.to_json();
        v["poset"] = json!(self.fingerprint.iter().map(|(r, h)| json!({"rank": r, "hypertori": h})).collect::<Vec<_>>());
        v
    }
}

/// Normal-form data of a centred essential arrangement and its own extension class.
pub fn extract_class(delta: &ToricArrangement) -> Result<(CoveringData, FinAbGroup, ExtensionClass)> {
    if delta.hypertori().iter().any(|h| !h.phase.is_zero()) {
        return Err(Error::invalid("the invariant is defined for centred arrangements"));
    }
    let x = delta.character_matrix();
    let r = delta.rank();
    if x.rank() != r {
        return Err(Error::invalid("the invariant needs an essential arrangement"));
    }
    let (signs, coords) = normal_form_signs(&x)?;
    let data = CoveringData::from_coordinates(&coords)?;
    // psi sends the k-th unit vector to the signed k-th basis character.
    let psi: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            coords
                .basis
                .iter()
                .map(|&b| BigRational::from_integer(x.get(i, b) * BigInt::from(signs[b])))
                .collect()
        })
        .collect();
    let inv = rational_inverse(&psi).ok_or_else(|| Error::invalid("basis characters are dependent"))?;
    let lambda_rows: Vec<Vec<BigRational>> = (0..r).map(|j| (0..r).map(|i| inv[i][j].clone()).collect()).collect();
    let lambda = Lattice::from_rational_generators(r, &lambda_rows);
    // Rows of n: the Hermite basis of Gamma in coordinates of the basis of Lambda.
    let rows: Vec<Vec<BigInt>> = data.gamma.basis().iter().map(|b| lambda.integer_coordinates(b).unwrap()).collect();
    let n = IntMatrix::from_rows(r, &rows);
    let s = smith_decomposition(&n);
    let mut factors = Vec::new();
    let mut comps = Vec::new();
    for (i, d) in s.invariant_factors.iter().enumerate() {
        if d.abs() > BigInt::one() {
            factors.push(d.abs());
            comps.push(s.u.row(i).to_vec());
        }
    }
    let group = FinAbGroup::from_orders(&factors);
    if group.factors() != factors.as_slice() {
        return Err(Error::invalid("Smith factors are not in divisibility order"));
    }
    let class = ExtensionClass::new(&group, comps)?;
    Ok((data, group, class))
}

pub fn arrangement_invariant(delta: &ToricArrangement) -> Result<ArrangementInvariant> {
    let (_, group, class) = extract_class(delta)?;
    let class = canonical_class(&class, &group)?;
    Ok(ArrangementInvariant { fingerprint: build_poset(delta).fingerprint(), group, class })
}

/// One representation per `Aut(G)`-orbit of coherent classes, ordered by orbit
/// representative. These are all representations of `m` up to equivalence.
pub fn representations(m: &ArithmeticMatroid, budget: u64) -> Result<Vec<(Orbit, IntMatrix)>> {
    let group = group_from_multiplicity(m)?;
    let data = CoveringData::from_matroid(m)?;
    let set = coherent_elements(&data, m, budget)?;
    let mut out = Vec::new();
    for o in aut_orbits(&set, &group)? {
        let x = data.representation(&o.representative)?;
        if ArithmeticMatroid::of_matrix(&x)? != *m {
            return Err(Error::infeasible("a coherent class does not realise the matroid"));
        }
        out.push((o, x));
    }
    Ok(out)
}
