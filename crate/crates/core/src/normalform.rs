//! Coordinate matrices, sign normal forms, and reconstruction of a representation from
//! its arithmetic matroid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arrangement::ToricArrangement;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_lattice, rational_inverse, subsets_of_size, IntMatrix, Lattice};
use crate::layers::{mask_of, ArithmeticMatroid};

/// Coordinates of every character in the basis `{chi_b : b in basis}`: the matrix `(id | a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordMatrix {
    pub basis: Vec<usize>,
    pub nonbasis: Vec<usize>,
    /// `basis.len()` rows, `nonbasis.len()` columns.
    pub a: Vec<Vec<BigRational>>,
}

impl CoordMatrix {
    pub fn to_json(&self) -> Value {
        let a: Vec<Vec<String>> = self.a.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
        json!({"basis": self.basis, "nonbasis": self.nonbasis, "a": a})
    }

    /// Column of `(id | a)` belonging to element `e`.
    pub fn column_of(&self, e: usize) -> Vec<BigRational> {
        let r = self.basis.len();
        if let Some(i) = self.basis.iter().position(|&b| b == e) {
            return (0..r).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }).collect();
        }
        let j = self.nonbasis.iter().position(|&x| x == e).expect("element outside the ground set");
        (0..r).map(|k| self.a[k][j].clone()).collect()
    }

    pub fn pattern(&self) -> Vec<Vec<bool>> {
        self.a.iter().map(|row| row.iter().map(|x| !x.is_zero()).collect()).collect()
    }
}

/// Lexicographically first subset of `0..n` of size `r` accepted by `independent`.
pub fn lex_first_basis(n: usize, r: usize, independent: impl Fn(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut basis = Vec::new();
    for e in 0..n {
        basis.push(e);
        if !independent(&basis) {
            basis.pop();
        }
        if basis.len() == r {
            break;
        }
    }
    (basis.len() == r).then_some(basis)
}

pub fn coordinate_matrix_of(x: &IntMatrix, basis: &[usize]) -> Result<CoordMatrix> {
    let r = x.rows();
    if basis.len() != r {
        return Err(Error::invalid(format!("a basis needs {r} elements")));
    }
    let inv = rational_inverse(&x.select_columns(basis).to_rational())
        .ok_or_else(|| Error::invalid("the chosen characters are dependent"))?;
    let nonbasis: Vec<usize> = (0..x.cols()).filter(|e| !basis.contains(e)).collect();
    let cols = x.select_columns(&nonbasis).to_rational();
    let a = (0..r)
        .map(|i| {
            (0..nonbasis.len())
                .map(|j| (0..r).fold(BigRational::zero(), |s, k| s + &inv[i][k] * &cols[k][j]))
                .collect()
        })
        .collect();
    Ok(CoordMatrix { basis: basis.to_vec(), nonbasis, a })
}

pub fn coordinate_matrix(delta: &ToricArrangement, basis: &[usize]) -> Result<CoordMatrix> {
    coordinate_matrix_of(&delta.character_matrix(), basis)
}

/// Edges of the bipartite support graph and a maximal forest in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportForest {
    pub edges: Vec<(usize, usize)>,
    pub forest: Vec<(usize, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.0[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Greedy forest over the edges in (row, column) order.
pub fn maximal_forest(pattern: &[Vec<bool>]) -> SupportForest {
    let rows = pattern.len();
    let cols = pattern.first().map_or(0, Vec::len);
    let mut uf = UnionFind((0..rows + cols).collect());
    let mut edges = Vec::new();
    let mut forest = Vec::new();
    for (i, row) in pattern.iter().enumerate() {
        for (j, &on) in row.iter().enumerate() {
            if on {
                edges.push((i, j));
                if uf.union(i, rows + j) {
                    forest.push((i, j));
                }
            }
        }
    }
    SupportForest { edges, forest }
}

/// Signs for rows and columns making every forest entry positive. Within each tree the
/// fewer flips win; on a tie the first column node of the tree keeps its sign.
fn forest_signs(rows: usize, cols: usize, forest: &[(usize, usize)], sign_of: impl Fn(usize, usize) -> i8) -> Vec<i8> {
    let mut sign = vec![0i8; rows + cols];
    let mut adj = vec![Vec::new(); rows + cols];
    for &(i, j) in forest {
        adj[i].push((rows + j, sign_of(i, j)));
        adj[rows + j].push((i, sign_of(i, j)));
    }
    let order: Vec<usize> = (rows..rows + cols).chain(0..rows).collect();
    for start in order {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut tree = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(v, s) in &adj[u] {
                if sign[v] == 0 {
                    sign[v] = sign[u] * s;
                    tree.push(v);
                    stack.push(v);
                }
            }
        }
        let flips = tree.iter().filter(|&&v| sign[v] < 0).count();
        if 2 * flips > tree.len() {
            tree.iter().for_each(|&v| sign[v] = -sign[v]);
        }
    }
    sign
}

/// Normal-form signs of a representation, indexed by E, with the normalised coordinate matrix.
pub fn normal_form_signs(x: &IntMatrix) -> Result<(Vec<i8>, CoordMatrix)> {
    let r = x.rows();
    if x.rank() != r {
        return Err(Error::invalid("normal forms need characters spanning the full rank"));
    }
    let basis = lex_first_basis(x.cols(), r, |s| x.select_columns(s).rank() == s.len()).unwrap();
    let mut c = coordinate_matrix_of(x, &basis)?;
    let f = maximal_forest(&c.pattern());
    let s = forest_signs(r, c.nonbasis.len(), &f.forest, |i, j| if c.a[i][j].is_positive() { 1 } else { -1 });
    let mut signs = vec![1i8; x.cols()];
    for (i, &b) in c.basis.iter().enumerate() {
        signs[b] = s[i];
    }
    for (j, &e) in c.nonbasis.iter().enumerate() {
        signs[e] = s[r + j];
    }
    for i in 0..r {
        for j in 0..c.nonbasis.len() {
            if s[i] * s[r + j] < 0 {
                c.a[i][j] = -c.a[i][j].clone();
            }
        }
    }
    Ok((signs, c))
}

/// Flips characters (and their phases) so the coordinate matrix is positive on the forest.
pub fn to_normal_form(delta: &ToricArrangement) -> Result<(ToricArrangement, Vec<i8>)> {
    let (signs, _) = normal_form_signs(&delta.character_matrix())?;
    Ok((delta.with_negations(&signs), signs))
}

pub fn negate_columns(x: &IntMatrix, signs: &[i8]) -> IntMatrix {
    let mut y = x.clone();
    for (j, &s) in signs.iter().enumerate() {
        if s < 0 {
            y.negate_col(j);
        }
    }
    y
}

/// `|det A_{I,J}| = m(B \ I u J) / m(B)`, or zero when that set is not a basis.
pub fn abs_minor_from_multiplicity(m: &ArithmeticMatroid, basis: &[usize], i: &[usize], j: &[usize]) -> Result<BigRational> {
    if i.len() != j.len() {
        return Err(Error::invalid("row and column sets must have the same size"));
    }
    if i.iter().any(|x| !basis.contains(x)) || j.iter().any(|x| basis.contains(x)) {
        return Err(Error::invalid("rows must come from the basis and columns from outside it"));
    }
    let mut s: Vec<usize> = basis.iter().copied().filter(|b| !i.contains(b)).collect();
    s.extend_from_slice(j);
    let mb = m.mult(mask_of(basis));
    let ms = mask_of(&s);
    if s.len() != m.full_rank() || !m.is_independent(ms) || mb.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(m.mult(ms).clone(), mb.clone()))
}

fn rat_det(m: &[Vec<BigRational>]) -> BigRational {
    crate::exactlin::rational_determinant(&m.to_vec())
}

fn sub(a: &[Vec<BigRational>], rows: &[usize], cols: &[usize]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// Every square minor of `a` has the absolute value the matroid prescribes.
fn minors_match(m: &ArithmeticMatroid, c: &CoordMatrix) -> Result<bool> {
    let (r, k) = (c.basis.len(), c.nonbasis.len());
    for size in 1..=r.min(k) {
        for rows in subsets_of_size(r, size) {
            for cols in subsets_of_size(k, size) {
                let i: Vec<usize> = rows.iter().map(|&x| c.basis[x]).collect();
                let j: Vec<usize> = cols.iter().map(|&x| c.nonbasis[x]).collect();
                let want = abs_minor_from_multiplicity(m, &c.basis, &i, &j)?;
                if rat_det(&sub(&c.a, &rows, &cols)).abs() != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Shortest path from row `i` to column `j` through known nonzero entries, as the rows and
/// columns it visits.
fn known_path(known: &[Vec<bool>], i: usize, j: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let rows = known.len();
    let cols = known.first().map_or(0, Vec::len);
    let mut prev = vec![usize::MAX; rows + cols];
    prev[i] = i;
    let mut queue = std::collections::VecDeque::from([i]);
    while let Some(u) = queue.pop_front() {
        let next: Vec<usize> = if u < rows {
            (0..cols).filter(|&c| known[u][c]).map(|c| rows + c).collect()
        } else {
            (0..rows).filter(|&r| known[r][u - rows]).collect()
        };
        for v in next {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    if prev[rows + j] == usize::MAX {
        return None;
    }
    let (mut rs, mut cs) = (Vec::new(), Vec::new());
    let mut u = rows + j;
    loop {
        if u < rows {
            rs.push(u);
        } else {
            cs.push(u - rows);
        }
        if u == i {
            break;
        }
        u = prev[u];
    }
    rs.sort();
    cs.sort();
    Some((rs, cs))
}

const SIGN_SEARCH_LIMIT: usize = 16;

/// The normal-form coordinate matrix determined by a torsion-free arithmetic matroid.
///
/// Magnitudes come from basis exchanges; forest entries are positive; every other sign is
/// read off a minor linking it to entries already known, falling back to a search over the
/// few that stay ambiguous. All square minors are checked at the end.
pub fn reconstruct_matrix(m: &ArithmeticMatroid) -> Result<CoordMatrix> {
    if !m.mult(0).is_one() {
        return Err(Error::invalid("reconstruction needs m(empty set) = 1"));
    }
    let r = m.full_rank();
    let n = m.n();
    let basis = lex_first_basis(n, r, |s| m.is_independent(mask_of(s))).unwrap();
    let nonbasis: Vec<usize> = (0..n).filter(|e| !basis.contains(e)).collect();
    let k = nonbasis.len();
    let mut a = vec![vec![BigRational::zero(); k]; r];
    for i in 0..r {
        for j in 0..k {
            a[i][j] = abs_minor_from_multiplicity(m, &basis, &[basis[i]], &[nonbasis[j]])?;
        }
    }
    let mut c = CoordMatrix { basis, nonbasis, a };
    let pattern = c.pattern();
    let forest = maximal_forest(&pattern);
    let mut known: Vec<Vec<bool>> = vec![vec![false; k]; r];
    for &(i, j) in &forest.forest {
        known[i][j] = true;
    }
    let mut pending: Vec<(usize, usize)> = forest.edges.iter().copied().filter(|e| !forest.forest.contains(e)).collect();
    let not_representable = || Error::infeasible("not representable with this data");
    loop {
        let mut progress = false;
        let mut still = Vec::new();
        for &(i, j) in &pending {
            let decided = (|| {
                let (rows, cols) = known_path(&known, i, j)?;
                // Entries off the path must already be settled for the minor to be usable.
                let settled = rows.iter().all(|&x| cols.iter().all(|&y| !pattern[x][y] || known[x][y] || (x, y) == (i, j)));
                if !settled {
                    return None;
                }
                let mut s = sub(&c.a, &rows, &cols);
                let (pi, pj) = (rows.iter().position(|&x| x == i)?, cols.iter().position(|&y| y == j)?);
                let mag = c.a[i][j].clone();
                s[pi][pj] = mag.clone();
                let plus = rat_det(&s).abs();
                s[pi][pj] = -mag;
                let minus = rat_det(&s).abs();
                let ri: Vec<usize> = rows.iter().map(|&x| c.basis[x]).collect();
                let cj: Vec<usize> = cols.iter().map(|&y| c.nonbasis[y]).collect();
                let want = abs_minor_from_multiplicity(m, &c.basis, &ri, &cj).ok()?;
                match (plus == want, minus == want) {
                    (true, false) => Some(Ok(1)),
                    (false, true) => Some(Ok(-1)),
                    (false, false) => Some(Err(())),
                    (true, true) => None,
                }
            })();
            match decided {
                Some(Ok(s)) => {
                    if s < 0 {
                        c.a[i][j] = -c.a[i][j].clone();
                    }
                    known[i][j] = true;
                    progress = true;
                }
                Some(Err(())) => return Err(not_representable()),
                None => still.push((i, j)),
            }
        }
        pending = still;
        if pending.is_empty() || !progress {
            break;
        }
    }
    if !pending.is_empty() {
        if pending.len() > SIGN_SEARCH_LIMIT {
            return Err(Error::budget("too many undetermined signs"));
        }
        for bits in 0u32..1 << pending.len() {
            let mut trial = c.clone();
            for (t, &(i, j)) in pending.iter().enumerate() {
                if bits >> t & 1 == 1 {
                    trial.a[i][j] = -trial.a[i][j].clone();
                }
            }
            if minors_match(m, &trial)? {
                return Ok(trial);
            }
        }
        return Err(not_representable());
    }
    if !minors_match(m, &c)? {
        return Err(not_representable());
    }
    Ok(c)
}

/// Integer representation of a torsion-free arithmetic matroid. A surjective matroid has a
/// unique one up to equivalence; otherwise the representation of the least coherent orbit
/// is returned (see [`crate::coverings::representations`] for all of them).
pub fn reconstruct_representation(m: &ArithmeticMatroid) -> Result<IntMatrix> {
    let full = mask_of(&(0..m.n()).collect::<Vec<_>>());
    if !m.mult(full).is_one() {
        return crate::coverings::representations(m, crate::coverings::EXT_BUDGET)?
            .into_iter()
            .next()
            .map(|(_, x)| x)
            .ok_or_else(|| Error::infeasible("no coherent extension realises the matroid"));
    }
    let c = reconstruct_matrix(m)?;
    let r = c.basis.len();
    let cols: Vec<Vec<BigRational>> = (0..m.n()).map(|e| c.column_of(e)).collect();
    let gamma = Lattice::from_rational_generators(r, &cols);
    let coords: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|v| gamma.integer_coordinates(v).expect("generator outside its own lattice"))
        .collect();
    let x = IntMatrix::from_columns(r, &coords);
    if ArithmeticMatroid::of_matrix(&x)? != *m {
        return Err(Error::infeasible("not representable with this data"));
    }
    Ok(x)
}

/// A circuit relation `sum_i c_i m_i chi_i = 0` with `m_i > 0` coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterRelation {
    pub support: Vec<usize>,
    pub signs: Vec<i8>,
    pub coefficients: Vec<BigInt>,
}

impl CharacterRelation {
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coefficients.iter().map(crate::arrangement::big_to_json).collect();
        json!({"support": self.support, "signs": self.signs, "coefficients": coeffs})
    }
}

/// One relation per circuit, with a positive sign on the smallest index.
pub fn character_relations(delta: &ToricArrangement) -> Vec<CharacterRelation> {
    let x = delta.character_matrix();
    crate::layers::circuits(delta)
        .into_iter()
        .map(|c| {
            let k = kernel_lattice(&x.select_columns(&c));
            let mut v = k.integer_basis().remove(0);
            if v[0].is_negative() {
                v.iter_mut().for_each(|t| *t = -t.clone());
            }
            CharacterRelation {
                signs: v.iter().map(|t| if t.is_negative() { -1 } else { 1 }).collect(),
                coefficients: v.iter().map(|t| t.abs()).collect(),
                support: c,
            }
        })
        .collect()
}

/// Finds `g` unimodular and `d` a diagonal sign vector with `x = g * y * diag(d)`.
pub fn representations_equivalent(x: &IntMatrix, y: &IntMatrix) -> Option<(IntMatrix, Vec<i8>)> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return None;
    }
    let (sx, cx) = normal_form_signs(x).ok()?;
    let (sy, cy) = normal_form_signs(y).ok()?;
    if cx != cy {
        return None;
    }
    let d: Vec<i8> = sx.iter().zip(&sy).map(|(a, b)| a * b).collect();
    let xb = negate_columns(x, &sx).select_columns(&cx.basis);
    let yb = negate_columns(y, &sy).select_columns(&cy.basis);
    let inv = rational_inverse(&yb.to_rational())?;
    let xr = xb.to_rational();
    let r = x.rows();
    let mut g = IntMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let v = (0..r).fold(BigRational::zero(), |s, k| s + &xr[i][k] * &inv[k][j]);
            if !v.is_integer() {
                return None;
            }
            g.set(i, j, v.to_integer());
        }
    }
    if !g.determinant().abs().is_one() {
        return None;
    }
    (g.mul(&negate_columns(y, &d)) == *x).then_some((g, d))
}

#[cfg(test)]
mod tests;
