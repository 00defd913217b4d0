//! Small dense routines over Q, used where coordinates stop being integral.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

fn echelon(mut a: RatMatrix, cols: usize) -> (RatMatrix, Vec<usize>, bool) {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut odd_swaps = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        let piv = a[r][c].clone();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                for j in c..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots, odd_swaps)
}

pub fn rational_rank(a: &RatMatrix) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    echelon(a.clone(), cols).1.len()
}

pub fn rational_determinant(a: &RatMatrix) -> BigRational {
    let n = a.len();
    if n == 0 {
        return BigRational::one();
    }
    let (e, pivots, odd) = echelon(a.clone(), n);
    if pivots.len() < n {
        return BigRational::zero();
    }
    let mut d = BigRational::one();
    for i in 0..n {
        d *= &e[i][i];
    }
    if odd {
        -d
    } else {
        d
    }
}

pub fn rational_inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let (e, pivots, _) = echelon(std::mem::take(&mut aug), 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(
        e.into_iter()
            .map(|row| {
                let p = row[..n].iter().find(|x| !x.is_zero()).cloned().unwrap();
                row[n..].iter().map(|x| x / &p).collect()
            })
            .collect(),
    )
}

pub fn rat_mat_vec(a: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigRational::zero(), |s, (x, y)| s + x * y))
        .collect()
}
