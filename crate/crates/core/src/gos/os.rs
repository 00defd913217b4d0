use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactlin::{subsets_of_size, IntMatrix};
use crate::layers::{indices_of, Mask};

/// Orlik–Solomon algebra of a central arrangement given by normal vectors, with the
/// no-broken-circuit basis in the order of the labels.
#[derive(Debug)]
pub struct OsAlgebra {
    labels: Vec<usize>,
    vectors: Vec<Vec<BigInt>>,
    rank: usize,
    independent: BTreeSet<Mask>,
    circuits: Vec<Mask>,
    memo: Mutex<HashMap<Mask, Vec<(Mask, BigInt)>>>,
}

impl Clone for OsAlgebra {
    fn clone(&self) -> Self {
        OsAlgebra {
            labels: self.labels.clone(),
            vectors: self.vectors.clone(),
            rank: self.rank,
            independent: self.independent.clone(),
            circuits: self.circuits.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl OsAlgebra {
    /// `labels` must be increasing; they name the hyperplanes in every public result.
    pub fn new(labels: Vec<usize>, vectors: Vec<Vec<BigInt>>) -> Self {
        assert!(labels.windows(2).all(|w| w[0] < w[1]), "labels must increase");
        assert_eq!(labels.len(), vectors.len());
        let dim = vectors.first().map_or(0, Vec::len);
        let rank_of = |m: Mask| -> usize {
            if m == 0 {
                return 0;
            }
            let cols: Vec<Vec<BigInt>> = indices_of(m).into_iter().map(|i| vectors[i].clone()).collect();
            IntMatrix::from_rows(dim, &cols).rank()
        };
        let n = vectors.len();
        let mut independent = BTreeSet::new();
        let mut stack = vec![(0 as Mask, 0usize)];
        while let Some((m, start)) = stack.pop() {
            independent.insert(m);
            for i in start..n {
                let next = m | 1 << i;
                if rank_of(next) == m.count_ones() as usize + 1 {
                    stack.push((next, i + 1));
                }
            }
        }
        let rank = independent.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
        let circuits = crate::layers::circuit_masks(n, &independent);
        OsAlgebra { labels, vectors, rank, independent, circuits, memo: Mutex::new(HashMap::new()) }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn local(&self, s: &[usize]) -> Option<Vec<usize>> {
        s.iter().map(|x| self.labels.binary_search(x).ok()).collect()
    }

    fn global(&self, m: Mask) -> Vec<usize> {
        indices_of(m).into_iter().map(|i| self.labels[i]).collect()
    }

    pub fn is_independent(&self, s: &[usize]) -> bool {
        match self.local(s) {
            Some(l) => {
                let m = crate::layers::mask_of(&l);
                m.count_ones() as usize == l.len() && self.independent.contains(&m)
            }
            None => false,
        }
    }

    fn broken_circuits(&self) -> impl Iterator<Item = (Mask, Mask)> + '_ {
        self.circuits.iter().map(|&c| (c & !(1 << (63 - c.leading_zeros())), c))
    }

    fn is_nbc(&self, m: Mask) -> bool {
        self.independent.contains(&m) && self.broken_circuits().all(|(b, _)| b & !m != 0)
    }

    /// NBC sets of size `q`, lexicographic in labels.
    pub fn nbc_basis(&self, q: usize) -> Vec<Vec<usize>> {
        subsets_of_size(self.labels.len(), q)
            .into_iter()
            .map(|s| crate::layers::mask_of(&s))
            .filter(|&m| self.is_nbc(m))
            .map(|m| self.global(m))
            .collect()
    }

    /// `e_S` for a list of labels in the given order, in the NBC basis.
    pub fn straighten(&self, s: &[usize]) -> Vec<(Vec<usize>, BigInt)> {
        let Some(local) = self.local(s) else { return Vec::new() };
        let Some((sign, m)) = sort_sign(&local) else { return Vec::new() };
        self.straighten_mask(m)
            .into_iter()
            .map(|(k, c)| (self.global(k), c * sign))
            .collect()
    }

    fn straighten_mask(&self, m: Mask) -> Vec<(Mask, BigInt)> {
        if !self.independent.contains(&m) {
            return Vec::new();
        }
        if let Some(hit) = self.memo.lock().unwrap().get(&m) {
            return hit.clone();
        }
        let found = self.broken_circuits().find(|&(b, _)| b & !m == 0);
        let out = match found {
            None => vec![(m, BigInt::from(1))],
            Some((b, c)) => {
                let rest = m & !b;
                let sign_b = merge_sign(b, rest);
                let circuit = indices_of(c);
                let k = circuit.len() - 1;
                let mut acc: BTreeMap<Mask, BigInt> = BTreeMap::new();
                // e_B = sum_{i<k} (-1)^(k+i+1) e_{C - c_i}
                for (i, &ci) in circuit[..k].iter().enumerate() {
                    let part = c & !(1 << ci);
                    if part & rest != 0 {
                        continue;
                    }
                    let sign = if (k + i + 1).is_multiple_of(2) { 1 } else { -1 } * sign_b * merge_sign(part, rest);
                    for (t, coef) in self.straighten_mask(part | rest) {
                        *acc.entry(t).or_insert_with(BigInt::zero) += coef * sign;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            }
        };
        self.memo.lock().unwrap().insert(m, out.clone());
        out
    }

    /// Product `e_a e_b` in the NBC basis.
    pub fn multiply(&self, a: &[usize], b: &[usize]) -> Vec<(Vec<usize>, BigInt)> {
        let mut s = a.to_vec();
        s.extend_from_slice(b);
        self.straighten(&s)
    }
}

fn merge_sign(a: Mask, b: Mask) -> i64 {
    let inversions: u32 = (0..63).filter(|j| b >> j & 1 == 1).map(|j| (a >> (j + 1)).count_ones()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the permutation sorting `s`, and the sorted set; `None` on repeats.
pub fn sort_sign(s: &[usize]) -> Option<(i64, Mask)> {
    let mut inversions = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i] == s[j] {
                return None;
            }
            if s[i] > s[j] {
                inversions += 1;
            }
        }
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, crate::layers::mask_of(s)))
}
