//! Independent oracles for the integration suites.
//!
//! Nothing here calls into the engine's linear algebra: chains are found by
//! brute force over subsets, integer matrices are diagonalized in `i128`
//! with extended-gcd eliminations, and cohomology of a constant sheaf comes
//! from simplicial homology of the order complex through the universal
//! coefficient theorem.

#![allow(dead_code)]

use finsheaf::abgroup::{CanonicalForm, IntMatrix};
use finsheaf::finspace::FinitePoset;
use num_bigint::BigInt;
use rand::Rng;

pub type Mat = Vec<Vec<i128>>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Nonzero invariant factors of an integer matrix.
///
/// Diagonalizes by moving the smallest entry of the remaining block to the
/// corner and reducing its row and column by Euclidean division, then turns
/// the diagonal into a divisibility chain by gcd/lcm exchange.
pub fn invariant_factors(m: &Mat) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
            else {
                break;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            let cross_clear = (t + 1..rows).all(|i| a[i][t] == 0) && (t + 1..cols).all(|j| a[t][j] == 0);
            if cross_clear {
                break;
            }
        }
        if a[t][t] == 0 {
            break;
        }
        diag.push(a[t][t].abs());
    }
    // gcd/lcm exchange until every entry divides the next.
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            let l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

fn det_i128(m: &Mat) -> i128 {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        a[n - 1][n - 1] * sign
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors as ratios of determinantal divisors `d_k / d_{k-1}`,
/// where `d_k` is the gcd of all `k × k` minors. Meant for small matrices.
pub fn determinantal_invariant_factors(m: &Mat) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        'outer: for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Mat = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det_i128(&minor));
                if g == 1 {
                    break 'outer;
                }
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

pub fn rank(m: &Mat) -> usize {
    invariant_factors(m).len()
}

/// Strict chains of the poset as ascending index lists, by dimension,
/// grown one element at a time from every start point.
pub fn order_complex(p: &FinitePoset) -> Vec<Vec<Vec<usize>>> {
    let n = p.len();
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for b in 0..n {
            if b != top && p.leq(top, b) {
                let mut longer = chain.clone();
                longer.push(b);
                stack.push(longer);
            }
        }
        let d = chain.len() - 1;
        if by_dim.len() <= d {
            by_dim.resize(d + 1, Vec::new());
        }
        by_dim[d].push(chain);
    }
    for level in &mut by_dim {
        level.sort();
    }
    by_dim
}

/// Simplicial boundary `C_k → C_{k-1}` of the order complex.
fn boundary(simplices: &[Vec<Vec<usize>>], k: usize) -> Mat {
    let rows = &simplices[k - 1];
    let cols = &simplices[k];
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            let r = rows.binary_search(&face).expect("faces of chains are chains");
            m[r][j] += if i % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// `(betti, torsion factors)` of `H_k` for `k = 0..=dim`.
pub fn simplicial_homology(p: &FinitePoset) -> Vec<(usize, Vec<i128>)> {
    let s = order_complex(p);
    let top = s.len();
    let mut out = Vec::with_capacity(top);
    for k in 0..top {
        let n_k = s[k].len();
        let rank_out = if k == 0 { 0 } else { rank(&boundary(&s, k)) };
        let (rank_in, torsion) = if k + 1 < top {
            let f = invariant_factors(&boundary(&s, k + 1));
            let t: Vec<i128> = f.iter().copied().filter(|&d| d > 1).collect();
            (f.len(), t)
        } else {
            (0, Vec::new())
        };
        out.push((n_k - rank_out - rank_in, torsion));
    }
    out
}

/// `H^k(order complex; ℤ)` for `k = 0..=dim + 1`: free part of rank
/// `b_k`, torsion that of `H_{k-1}`.
pub fn constant_cohomology(p: &FinitePoset) -> Vec<CanonicalForm> {
    let h = simplicial_homology(p);
    (0..=h.len())
        .map(|k| {
            let rank = h.get(k).map_or(0, |x| x.0);
            let torsion = if k == 0 { Vec::new() } else { h[k - 1].1.clone() };
            CanonicalForm {
                rank,
                invariant_factors: torsion.into_iter().map(BigInt::from).collect(),
            }
        })
        .collect()
}

/// Layered random poset, independent of the engine's generator.
pub fn layered_poset<R: Rng>(rng: &mut R, n: usize) -> FinitePoset {
    let levels = rng.gen_range(2..=4);
    let level: Vec<usize> = (0..n).map(|_| rng.gen_range(0..levels)).collect();
    let density = rng.gen_range(0.25..0.7);
    let mut rel = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if level[a] < level[b] && rng.gen_bool(density) {
                rel.push((a, b));
            }
        }
    }
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    FinitePoset::from_indices(labels, &rel).expect("level-increasing relations are acyclic")
}

pub fn to_i128(m: &IntMatrix) -> Mat {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| i128::try_from(m.get(i, j)).expect("fits"))
                .collect()
        })
        .collect()
}

pub fn big_mul(a: &IntMatrix, b: &IntMatrix) -> Vec<Vec<BigInt>> {
    assert_eq!(a.cols(), b.rows());
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
                .collect()
        })
        .collect()
}

/// Determinant by cofactor-free Bareiss elimination over `BigInt`.
pub fn big_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k] == BigInt::from(0) {
            match (k + 1..n).find(|&i| a[i][k] != BigInt::from(0)) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::from(1)
    } else {
        &a[n - 1][n - 1] * sign
    }
}

pub fn random_small_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

/// A random sheaf of one of the standard shapes: constant `ℤ` or
/// `ℤ ⊕ ℤ/2`, extension by zero from a random open, or pushforward from a
/// random closed set.
pub fn random_sheaf<R: Rng>(rng: &mut R, p: &FinitePoset) -> finsheaf::sheaf::PosetSheaf {
    use finsheaf::abgroup::PresentedAbGroup;
    use finsheaf::finspace::random_open;
    use finsheaf::sheaf::{closed_pushforward, constant_sheaf, extension_by_zero};
    let g = if rng.gen_bool(0.5) {
        PresentedAbGroup::integers()
    } else {
        PresentedAbGroup::new(2, IntMatrix::from_rows(&[vec![0], vec![2]])).unwrap()
    };
    match rng.gen_range(0..3) {
        0 => constant_sheaf(p, &g),
        1 => extension_by_zero(p, &random_open(rng, p, 0.4), &g).unwrap(),
        _ => closed_pushforward(p, &random_open(rng, p, 0.4).complement(), &g).unwrap(),
    }
}
