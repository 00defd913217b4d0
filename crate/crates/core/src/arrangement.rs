//! Toric arrangements with rational phases.
//!
//! A hypertorus `{t : chi(t) = e(q)}` with `e(q) = exp(2 pi i q)` is stored as `(chi, q)`.
//! In the `V(1 - a chi)` notation this is `a = e(-q)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{smith_decomposition, vec_content, IntMatrix, Lattice};

/// An element of Q/Z, kept as a reduced fraction in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseQZ(BigRational);

impl PhaseQZ {
    pub fn zero() -> Self {
        PhaseQZ(BigRational::zero())
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let f = q.floor();
        PhaseQZ(q - f)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &PhaseQZ) -> PhaseQZ {
        Self::from_rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &PhaseQZ) -> PhaseQZ {
        Self::from_rational(&self.0 - &other.0)
    }

    pub fn neg(&self) -> PhaseQZ {
        Self::from_rational(-&self.0)
    }

    pub fn scale(&self, k: &BigInt) -> PhaseQZ {
        Self::from_rational(&self.0 * BigRational::from_integer(k.clone()))
    }

    /// Sum of `c_i * q_i` in Q/Z.
    pub fn combination(coeffs: &[BigInt], phases: &[PhaseQZ]) -> PhaseQZ {
        let s = coeffs
            .iter()
            .zip(phases)
            .fold(BigRational::zero(), |s, (c, q)| s + BigRational::from_integer(c.clone()) * &q.0);
        Self::from_rational(s)
    }
}

impl Ord for PhaseQZ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for PhaseQZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PhaseQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for PhaseQZ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("phase {s:?} is not an exact fraction p/q"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_rational(BigRational::new(n, d)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypertorus {
    pub chi: Vec<BigInt>,
    pub phase: PhaseQZ,
}

impl Hypertorus {
    pub fn new(chi: Vec<BigInt>, phase: PhaseQZ) -> Self {
        Hypertorus { chi, phase }
    }

    pub fn from_i64(chi: &[i64], phase: PhaseQZ) -> Self {
        Hypertorus { chi: chi.iter().map(|&x| BigInt::from(x)).collect(), phase }
    }

    /// Same hypertorus with the first nonzero entry of the character made positive.
    pub fn canonical(&self) -> Hypertorus {
        match self.chi.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.negated(),
            _ => self.clone(),
        }
    }

    /// `(-chi, -q)`, which describes the same subset of the torus.
    pub fn negated(&self) -> Hypertorus {
        Hypertorus { chi: self.chi.iter().map(|x| -x).collect(), phase: self.phase.neg() }
    }

    pub fn content(&self) -> BigInt {
        vec_content(&self.chi)
    }
}

/// Ordered list of hypertori in a torus of dimension `rank`; index order is the order on E.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricArrangement {
    rank: usize,
    hypertori: Vec<Hypertorus>,
}

impl ToricArrangement {
    /// Validates shape, nonzero characters and absence of repeated hypertori.
    /// Orientation of each character is kept as given.
    pub fn new(rank: usize, hypertori: Vec<Hypertorus>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("torus rank must be at least 1"));
        }
        let mut seen = BTreeSet::new();
        for (i, h) in hypertori.iter().enumerate() {
            if h.chi.len() != rank {
                return Err(Error::invalid(format!("character {i} has length {} instead of {rank}", h.chi.len())));
            }
            if h.chi.iter().all(|x| x.is_zero()) {
                return Err(Error::invalid(format!("character {i} is zero")));
            }
            let c = h.canonical();
            if !seen.insert((c.chi, c.phase)) {
                return Err(Error::invalid(format!("hypertorus {i} repeats an earlier one")));
            }
        }
        Ok(ToricArrangement { rank, hypertori })
    }

    /// Centred arrangement from the columns of `m`.
    pub fn centred(m: &IntMatrix) -> Result<Self> {
        Self::with_phases(m, &vec![PhaseQZ::zero(); m.cols()])
    }

    pub fn with_phases(m: &IntMatrix, phases: &[PhaseQZ]) -> Result<Self> {
        if phases.len() != m.cols() {
            return Err(Error::invalid("one phase per column expected"));
        }
        let hs = (0..m.cols()).map(|j| Hypertorus::new(m.column(j), phases[j].clone())).collect();
        Self::new(m.rows(), hs)
    }

    /// Essential part of rank zero, only produced by `essentialize` on an empty arrangement.
    fn empty_rank_zero() -> Self {
        ToricArrangement { rank: 0, hypertori: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.hypertori.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypertori.is_empty()
    }

    pub fn hypertori(&self) -> &[Hypertorus] {
        &self.hypertori
    }

    pub fn characters(&self) -> Vec<Vec<BigInt>> {
        self.hypertori.iter().map(|h| h.chi.clone()).collect()
    }

    pub fn phases(&self) -> Vec<PhaseQZ> {
        self.hypertori.iter().map(|h| h.phase.clone()).collect()
    }

    /// Characters as the columns of an `rank x n` matrix.
    pub fn character_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank, &self.characters())
    }

    /// Lattice Gamma spanned by the characters.
    pub fn character_lattice(&self) -> Lattice {
        Lattice::from_generators(self.rank, &self.characters())
    }

    pub fn with_negations(&self, signs: &[i8]) -> ToricArrangement {
        let hs = self
            .hypertori
            .iter()
            .zip(signs)
            .map(|(h, &s)| if s < 0 { h.negated() } else { h.clone() })
            .collect();
        ToricArrangement { rank: self.rank, hypertori: hs }
    }

    pub fn to_json(&self) -> Value {
        let hs: Vec<Value> = self
            .hypertori
            .iter()
            .map(|h| {
                json!({
                    "chi": h.chi.iter().map(big_to_json).collect::<Vec<_>>(),
                    "phase": h.phase.to_string(),
                })
            })
            .collect();
        json!({ "rank": self.rank, "hypertori": hs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::invalid("missing integer field \"rank\""))? as usize;
        let list = v
            .get("hypertori")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::invalid("missing array field \"hypertori\""))?;
        let mut hs = Vec::with_capacity(list.len());
        for (i, h) in list.iter().enumerate() {
            let chi = h
                .get("chi")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::invalid(format!("hypertorus {i}: missing \"chi\"")))?
                .iter()
                .map(json_to_big)
                .collect::<Result<Vec<_>>>()?;
            let phase = match h.get("phase") {
                None => PhaseQZ::zero(),
                Some(Value::String(s)) => s.parse()?,
                Some(Value::Number(n)) if n.is_i64() => PhaseQZ::new(n.as_i64().unwrap(), 1),
                Some(_) => return Err(Error::invalid(format!("hypertorus {i}: phase must be a \"p/q\" string"))),
            };
            hs.push(Hypertorus::new(chi, phase));
        }
        Self::new(rank, hs)
    }
}

pub fn big_to_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        Value::String(s) => s.trim().parse().map_err(|_| Error::invalid(format!("{s:?} is not an integer"))),
        _ => Err(Error::invalid(format!("{v} is not an integer"))),
    }
}

/// Replaces every non-primitive `(d chi0, q)` by the `d` hypertori `(chi0, (q + k)/d)`.
pub fn primitivize(delta: &ToricArrangement) -> ToricArrangement {
    let mut out: Vec<Hypertorus> = Vec::new();
    let mut seen = BTreeSet::new();
    for h in delta.hypertori() {
        let d = h.content();
        let chi0: Vec<BigInt> = h.chi.iter().map(|x| x / &d).collect();
        let mut k = BigInt::zero();
        while k < d {
            let q = PhaseQZ::from_rational((h.phase.value() + BigRational::from_integer(k.clone())) / BigRational::from_integer(d.clone()));
            let nh = Hypertorus::new(chi0.clone(), q);
            let c = nh.canonical();
            if seen.insert((c.chi, c.phase)) {
                out.push(nh);
            }
            k += 1;
        }
    }
    ToricArrangement { rank: delta.rank(), hypertori: out }
}

/// Splits off the directions on which no character depends.
/// Returns the essential arrangement and the dimension of the split factor.
pub fn essentialize(delta: &ToricArrangement) -> (ToricArrangement, usize) {
    let r = delta.rank();
    let c = IntMatrix::from_rows(r, &delta.characters());
    let s = smith_decomposition(&c);
    let k = s.rank();
    if k == 0 {
        return (ToricArrangement::empty_rank_zero(), r);
    }
    if k == r {
        return (delta.clone(), 0);
    }
    // Rows of chi * V vanish beyond column k; the first k columns are coordinates
    // with respect to the basis of Z^r given by the rows of V^{-1}.
    let cv = c.mul(&s.v);
    let cols: Vec<usize> = (0..k).collect();
    let reduced = cv.select_columns(&cols);
    let hs = delta
        .hypertori()
        .iter()
        .enumerate()
        .map(|(i, h)| Hypertorus::new(reduced.row(i).to_vec(), h.phase.clone()))
        .collect();
    (ToricArrangement { rank: k, hypertori: hs }, r - k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub centred: bool,
    pub primitive: bool,
    pub essential: bool,
    pub surjective: bool,
}

pub fn classify(delta: &ToricArrangement) -> Classification {
    let centred = delta.hypertori().iter().all(|h| h.phase.is_zero());
    let primitive = delta.hypertori().iter().all(|h| h.content().is_one());
    let gamma = delta.character_lattice();
    let essential = gamma.rank() == delta.rank();
    let surjective = gamma == Lattice::full(delta.rank());
    Classification { centred, primitive, essential, surjective }
}

/// Least common multiple of the phase denominators.
pub fn phase_denominator(phases: &[PhaseQZ]) -> BigInt {
    phases.iter().fold(BigInt::one(), |l, q| l.lcm(q.denominator()))
}
