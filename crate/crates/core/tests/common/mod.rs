#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use toricos::arrangement::{Hypertorus, PhaseQZ, ToricArrangement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Rank over Q of a list of integer vectors, by fraction-free elimination.
pub fn rank_i64(vs: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = vs.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let (a, b) = (m[r][c], m[i][c]);
            for j in 0..cols {
                m[i][j] = m[i][j] * a - m[r][j] * b;
            }
            let g = m[i].iter().fold(0i128, |g, &x| {
                let (mut a, mut b) = (g.abs(), x.abs());
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            });
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i64(&minor)
        })
        .sum()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

/// Gcd of all maximal minors of the given columns, which must be independent.
pub fn index_i64(cols: &[Vec<i64>], r: usize) -> i64 {
    let k = cols.len();
    subsets(r, k).iter().fold(0, |g, rows| {
        let m: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|c| c[i]).collect()).collect();
        gcd(g, det_i64(&m))
    })
}

pub fn chars_i64(d: &ToricArrangement) -> Vec<Vec<i64>> {
    d.characters().iter().map(|c| c.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

pub fn phases_i64(d: &ToricArrangement) -> Vec<(i64, i64)> {
    d.phases().iter().map(|q| (q.numerator().to_i64().unwrap(), q.denominator().to_i64().unwrap())).collect()
}

/// Number of layers of each rank, found by scanning all N-torsion points of the torus.
///
/// Layers of rank k whose hypertori span the flat F are disjoint cosets of one subtorus,
/// each holding N^(r-k) torsion points once N clears every index and phase denominator.
/// Returns None when that N exceeds `limit`.
pub fn brute_layer_counts(d: &ToricArrangement, limit: i64) -> Option<Vec<usize>> {
    let r = d.rank();
    let n = d.len();
    let chars = chars_i64(d);
    let phases = phases_i64(d);
    let pick = |m: usize| -> Vec<Vec<i64>> { (0..n).filter(|&i| m >> i & 1 == 1).map(|i| chars[i].clone()).collect() };
    let rank: Vec<usize> = (0..1usize << n).map(|m| rank_i64(&pick(m))).collect();
    let den = phases.iter().fold(1, |l, &(_, q)| lcm(l, q));
    let mut big_n = den;
    for m in 0..1usize << n {
        if rank[m] == m.count_ones() as usize && m != 0 {
            big_n = lcm(big_n, den * index_i64(&pick(m), r));
            if big_n > limit {
                return None;
            }
        }
    }
    let closure = |m: usize| (0..n).filter(|&i| rank[m | 1 << i] == rank[m]).fold(0usize, |a, i| a | 1 << i);
    let mut flats: Vec<usize> = (0..1usize << n).map(closure).collect();
    flats.sort();
    flats.dedup();
    // Tally points by the set of hypertori through them; values are updated incrementally.
    let mut by_mask = vec![0u64; 1 << n];
    let target: Vec<i64> = phases.iter().map(|&(p, q)| (p * (big_n / q)).rem_euclid(big_n)).collect();
    let mut theta = vec![0i64; r];
    let mut value = vec![0i64; n];
    loop {
        let sat = (0..n).filter(|&i| value[i] == target[i]).fold(0usize, |a, i| a | 1 << i);
        by_mask[sat] += 1;
        let mut pos = 0;
        while pos < r {
            theta[pos] += 1;
            for i in 0..n {
                value[i] = (value[i] + chars[i][pos]).rem_euclid(big_n);
            }
            if theta[pos] < big_n {
                break;
            }
            theta[pos] = 0;
            pos += 1;
        }
        if pos == r {
            break;
        }
    }
    let counts: Vec<u64> = flats
        .iter()
        .map(|&flat| (0..1usize << n).filter(|&m| rank[m & flat] == rank[flat]).map(|m| by_mask[m]).sum())
        .collect();
    let mut out = vec![0usize; r + 1];
    for (f, &flat) in flats.iter().enumerate() {
        let k = rank[flat];
        let per = (big_n as u64).pow((r - k) as u32);
        assert_eq!(counts[f] % per, 0, "torsion points of flat {flat:b} do not fill whole cosets");
        out[k] += (counts[f] / per) as usize;
    }
    Some(out)
}

/// Random centred arrangement of full rank with distinct primitive characters.
pub fn random_centred(rng: &mut ChaCha8Rng, r: usize, n: usize, bound: i64) -> ToricArrangement {
    loop {
        let mut hs: Vec<Hypertorus> = Vec::new();
        let mut tries = 0;
        while hs.len() < n && tries < 200 {
            tries += 1;
            let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-bound..=bound)).collect();
            let g = v.iter().fold(0, |g, &x| gcd(g, x));
            if g != 1 {
                continue;
            }
            let h = Hypertorus::from_i64(&v, PhaseQZ::zero());
            if hs.iter().any(|o| o.canonical().chi == h.canonical().chi) {
                continue;
            }
            hs.push(h);
        }
        let vs: Vec<Vec<i64>> = hs.iter().map(|h| h.chi.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        if hs.len() == n && rank_i64(&vs) == r {
            return ToricArrangement::new(r, hs).unwrap();
        }
    }
}

/// The same characters with random phases of denominator dividing `den`.
pub fn with_random_phases(rng: &mut ChaCha8Rng, d: &ToricArrangement, den: i64) -> ToricArrangement {
    let hs = d
        .hypertori()
        .iter()
        .map(|h| Hypertorus::new(h.chi.clone(), PhaseQZ::new(rng.gen_range(0..den), den)))
        .collect();
    ToricArrangement::new(d.rank(), hs).unwrap()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Random r x n integer matrix of full rank with primitive columns generating Z^r.
pub fn random_surjective(rng: &mut ChaCha8Rng, r: usize, n: usize, bound: i64) -> toricos::exactlin::IntMatrix {
    use toricos::exactlin::{cokernel_torsion_order, IntMatrix};
    loop {
        let mut cols = Vec::new();
        while cols.len() < n {
            let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-bound..=bound)).collect();
            if v.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
                cols.push(v.into_iter().map(BigInt::from).collect::<Vec<_>>());
            }
        }
        let x = IntMatrix::from_columns(r, &cols);
        if x.rank() == r && cokernel_torsion_order(&x) == BigInt::from(1) {
            return x;
        }
    }
}

/// Random n-element arrangement of rank 2 or 3 with characters in [-5, 5], n between r and 6.
pub fn random_small(rng: &mut ChaCha8Rng) -> ToricArrangement {
    let r = rng.gen_range(2..=3);
    let n = rng.gen_range(r..=6);
    random_centred(rng, r, n, 5)
}

fn total_degree(g: &toricos::gos::Gos, k: usize) -> usize {
    let (p, q) = g.basis()[k].bidegree();
    p + q
}

/// Checks the algebra laws of the graded Orlik–Solomon model on `triples` random basis
/// triples. Returns a description of the first failure.
pub fn check_gos(d: &ToricArrangement, rng: &mut ChaCha8Rng, triples: usize) -> Result<(), String> {
    use num_rational::BigRational;
    use toricos::gos::{Gos, Ring};
    use toricos::layers::poincare_polynomial;

    let gz = Gos::new(d, Ring::Z).map_err(|e| e.to_string())?;
    let gq = Gos::new(d, Ring::Q).map_err(|e| e.to_string())?;
    let p = poincare_polynomial(gz.poset());
    let p1: BigInt = p.iter().sum();
    if BigInt::from(gz.basis().len()) != p1 {
        return Err(format!("basis size {} but P(1) = {p1}", gz.basis().len()));
    }
    let rows = gz.hilbert_rows();
    for (k, row) in rows.iter().enumerate() {
        if row.iter().sum::<BigInt>() != p[k] {
            return Err(format!("degree {k} dimensions do not sum to the coefficient of P"));
        }
    }
    if gz.basis() != gq.basis() {
        return Err("Z and Q bases differ".into());
    }
    let len = gz.basis().len();
    let one = gz.one();
    for _ in 0..triples {
        let (i, j, k) = (rng.gen_range(0..len), rng.gen_range(0..len), rng.gen_range(0..len));
        let (x, y, z) = (gz.basis_element(i), gz.basis_element(j), gz.basis_element(k));
        let xy = gz.multiply(&x, &y).map_err(|e| e.to_string())?;
        let yz = gz.multiply(&y, &z).map_err(|e| e.to_string())?;
        for v in [&xy, &yz] {
            if !v.is_integral() {
                return Err("denominator over Z".into());
            }
        }
        if gz.multiply(&xy, &z).unwrap() != gz.multiply(&x, &yz).unwrap() {
            return Err(format!("associativity fails on basis triple {i} {j} {k}"));
        }
        let yx = gz.multiply(&y, &x).unwrap();
        let sign = if total_degree(&gz, i) * total_degree(&gz, j) % 2 == 1 { -1 } else { 1 };
        if xy != yx.scale(&BigRational::from_integer(sign.into())) {
            return Err(format!("graded commutativity fails on basis pair {i} {j}"));
        }
        let xyq = gq.multiply(&gq.basis_element(i), &gq.basis_element(j)).unwrap();
        if xyq != xy.to_ring(Ring::Q).unwrap() {
            return Err(format!("Z and Q structure constants differ on pair {i} {j}"));
        }
        if gz.multiply(&x, &one).unwrap() != x || gz.multiply(&one, &x).unwrap() != x {
            return Err("unit fails".into());
        }
        // A random odd element squares to zero.
        let odd: Vec<usize> = (0..len).filter(|&t| total_degree(&gz, t) % 2 == 1).collect();
        if !odd.is_empty() {
            let mut s = gz.basis_element(odd[rng.gen_range(0..odd.len())]);
            for _ in 0..2 {
                let t = odd[rng.gen_range(0..odd.len())];
                let c = BigRational::from_integer(rng.gen_range(-3i64..=3).into());
                s = s.add(&gz.basis_element(t).scale(&c)).unwrap();
            }
            if !gz.multiply(&s, &s).unwrap().is_zero() {
                return Err("odd element does not square to zero".into());
            }
        }
    }
    // Products of y's over a dependent set vanish.
    let n = d.len();
    for c in toricos::layers::circuits(d) {
        let ys: Vec<_> = c.iter().map(|&i| gz.y(i)).collect();
        if !gz.product(&ys).unwrap().is_zero() {
            return Err(format!("product over dependent set {c:?} is nonzero"));
        }
    }
    for i in 0..n {
        if !gz.multiply(&gz.y(i), &gz.y(i)).unwrap().is_zero() {
            return Err(format!("y_{i} squared is nonzero"));
        }
    }
    Ok(())
}
