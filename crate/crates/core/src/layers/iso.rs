use std::collections::BTreeMap;

use super::{LayerPoset, Mask};

/// Searches for an order isomorphism between two layer posets. With `over_atoms` the map
/// must also keep, for every layer, the set of hypertori indices containing it.
/// Returns the image of each layer of `a`.
pub fn posets_isomorphic(a: &LayerPoset, b: &LayerPoset, over_atoms: bool) -> Option<Vec<usize>> {
    if a.rank_counts() != b.rank_counts() {
        return None;
    }
    if over_atoms && a.arrangement().len() != b.arrangement().len() {
        return None;
    }
    let mut palette = BTreeMap::new();
    let ca = fingerprints(a, over_atoms).into_iter().map(|x| intern(&mut palette, x)).collect();
    let cb = fingerprints(b, over_atoms).into_iter().map(|x| intern(&mut palette, x)).collect();
    let ctx = Ctx { a, b, ua: above_lists(a), ub: above_lists(b) };
    ctx.search(ca, cb)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Print {
    rank: usize,
    hyps: Option<Mask>,
    below: usize,
    above: usize,
}

fn fingerprints(p: &LayerPoset, over_atoms: bool) -> Vec<Print> {
    let mut above = vec![0; p.len()];
    for j in 0..p.len() {
        for &i in p.below(j) {
            above[i] += 1;
        }
    }
    (0..p.len())
        .map(|i| Print {
            rank: p.layer(i).rank(),
            hyps: over_atoms.then(|| p.hyps(i)),
            below: p.below(i).len(),
            above: above[i],
        })
        .collect()
}

fn above_lists(p: &LayerPoset) -> Vec<Vec<usize>> {
    let mut above = vec![Vec::new(); p.len()];
    for j in 0..p.len() {
        for &i in p.below(j) {
            above[i].push(j);
        }
    }
    above
}

fn intern<K: Ord>(palette: &mut BTreeMap<K, usize>, key: K) -> usize {
    let next = palette.len();
    *palette.entry(key).or_insert(next)
}

fn histogram(c: &[usize]) -> Vec<usize> {
    let mut s = c.to_vec();
    s.sort_unstable();
    s
}

struct Ctx<'a> {
    a: &'a LayerPoset,
    b: &'a LayerPoset,
    ua: Vec<Vec<usize>>,
    ub: Vec<Vec<usize>>,
}

impl Ctx<'_> {
    /// Colour refinement on both posets with a shared palette, so equal colours are
    /// comparable across them.
    fn refine(&self, mut ca: Vec<usize>, mut cb: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
        let step = |p: &LayerPoset, up: &[Vec<usize>], c: &[usize], palette: &mut BTreeMap<_, usize>| -> Vec<usize> {
            (0..p.len())
                .map(|i| {
                    let mut down: Vec<usize> = p.below(i).iter().map(|&k| c[k]).collect();
                    let mut over: Vec<usize> = up[i].iter().map(|&k| c[k]).collect();
                    down.sort_unstable();
                    over.sort_unstable();
                    intern(palette, (c[i], down, over))
                })
                .collect()
        };
        let mut classes = usize::MAX;
        loop {
            let mut palette = BTreeMap::new();
            let na = step(self.a, &self.ua, &ca, &mut palette);
            let nb = step(self.b, &self.ub, &cb, &mut palette);
            let done = palette.len() == classes;
            classes = palette.len();
            ca = na;
            cb = nb;
            if done {
                return (ca, cb);
            }
        }
    }

    /// Individualisation and refinement: fix one layer of the smallest ambiguous colour
    /// class against each candidate in turn.
    fn search(&self, ca: Vec<usize>, cb: Vec<usize>) -> Option<Vec<usize>> {
        let (ca, cb) = self.refine(ca, cb);
        if histogram(&ca) != histogram(&cb) {
            return None;
        }
        let mut size: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &ca {
            *size.entry(c).or_default() += 1;
        }
        let Some((&colour, _)) = size.iter().filter(|(_, &s)| s > 1).min_by_key(|(_, &s)| s) else {
            return self.discrete(&ca, &cb);
        };
        let x = ca.iter().position(|&c| c == colour).unwrap();
        let fresh = ca.len() + cb.len() + 1;
        for y in (0..cb.len()).filter(|&y| cb[y] == colour) {
            let mut na = ca.clone();
            let mut nb = cb.clone();
            na[x] = fresh;
            nb[y] = fresh;
            if let Some(m) = self.search(na, nb) {
                return Some(m);
            }
        }
        None
    }

    fn discrete(&self, ca: &[usize], cb: &[usize]) -> Option<Vec<usize>> {
        let pos: BTreeMap<usize, usize> = cb.iter().enumerate().map(|(y, &c)| (c, y)).collect();
        let map: Vec<usize> = ca.iter().map(|c| pos[c]).collect();
        let n = self.a.len();
        let ok = (0..n).all(|j| {
            self.a.below(j).len() == self.b.below(map[j]).len() && self.a.below(j).iter().all(|&i| self.b.le(map[i], map[j]))
        });
        ok.then_some(map)
    }
}
