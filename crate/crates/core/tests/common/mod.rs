//! Independent oracles and random generators shared by the integration tests.
//! Nothing here calls the Smith normal form code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mbs_homology::chain::ChainComplex;
use mbs_homology::exactalg::IntMatrix;
use mbs_homology::simplicial::{SimplicialComplexData, SimplicialMap};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEEDS: u64 = 100;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| m.row(r)).collect()
}

/// Determinant by fraction-free (Bareiss) elimination on plain vectors.
pub fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over `Q` by fraction-free elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a = to_rows(m);
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let (x, y) = (a[rank][c].clone(), a[r][c].clone());
                let pivot = a[rank].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot) {
                    *v = &*v * &x - p * &y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `k x k` minors (the `k`-th determinantal divisor).
pub fn minors_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let rows = to_rows(m);
    let mut g = BigInt::zero();
    for rs in combinations(m.rows(), k) {
        for cs in combinations(m.cols(), k) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect())
                .collect();
            g = g.gcd(&det(sub));
        }
    }
    g
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let dk = minors_gcd(m, k);
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

/// `(betti, torsion)` of `H_k` from ranks and determinantal divisors.
pub fn homology_oracle(c: &ChainComplex, k: i64) -> (usize, Vec<BigInt>) {
    let dk = c.boundary(k);
    let dk1 = c.boundary(k + 1);
    let betti = c.rank(k) - rational_rank(&dk) - rational_rank(&dk1);
    let torsion = invariant_factors_by_minors(&dk1)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    (betti, torsion)
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(r.gen_range(-bound..=bound))).collect();
    IntMatrix::from_row_major(rows, cols, data).unwrap()
}

/// A random unimodular matrix and its inverse, as products of elementary operations.
pub fn random_unimodular(r: &mut ChaCha8Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && r.gen_bool(0.5) {
            p = p.scale(&BigInt::from(-1));
            inv = inv.scale(&BigInt::from(-1));
        }
        return (p, inv);
    }
    for _ in 0..3 * n {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let q: i64 = r.gen_range(-2..=2);
        // E = I + q e_ij, E^{-1} = I - q e_ij
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(q));
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, BigInt::from(-q));
        p = &e * &p;
        inv = &inv * &e_inv;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let mut s = IntMatrix::zeros(n, n);
    for (a, &b) in perm.iter().enumerate() {
        s.set(a, b, BigInt::one());
    }
    (&s * &p, &inv * &s.transpose())
}

/// A random complex in degrees `0..=3` built from elementary pieces (free
/// summands and `Z --t--> Z`) and conjugated by random unimodular bases.
/// Returns the complex and its known homology per degree.
pub fn random_complex(r: &mut ChaCha8Rng, max_total: usize) -> (ChainComplex, Vec<(usize, Vec<BigInt>)>) {
    let top = 3usize;
    let mut ranks = vec![0usize; top + 1];
    // pieces: (degree, None) free, or (degree, Some(t)) for Z_{deg} -> Z_{deg-1}
    let mut pieces: Vec<(usize, Option<i64>)> = Vec::new();
    let target = r.gen_range(1..=max_total);
    while ranks.iter().sum::<usize>() < target {
        let deg = r.gen_range(0..=top);
        let left = target - ranks.iter().sum::<usize>();
        if deg > 0 && left >= 2 && r.gen_bool(0.6) {
            let t = r.gen_range(1..=6) * if r.gen_bool(0.5) { 1 } else { -1 };
            pieces.push((deg, Some(t)));
            ranks[deg] += 1;
            ranks[deg - 1] += 1;
        } else {
            pieces.push((deg, None));
            ranks[deg] += 1;
        }
    }
    let mut pos = vec![0usize; top + 1];
    let mut boundaries: Vec<IntMatrix> = (1..=top).map(|k| IntMatrix::zeros(ranks[k - 1], ranks[k])).collect();
    let mut betti = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for (deg, piece) in pieces {
        match piece {
            None => {
                pos[deg] += 1;
                betti[deg] += 1;
            }
            Some(t) => {
                boundaries[deg - 1].set(pos[deg - 1], pos[deg], BigInt::from(t));
                pos[deg] += 1;
                pos[deg - 1] += 1;
                if t.abs() > 1 {
                    torsion[deg - 1].push(BigInt::from(t.abs()));
                }
            }
        }
    }
    let plain = ChainComplex::new(0, ranks.clone(), boundaries).unwrap();
    let bases: BTreeMap<i64, (IntMatrix, IntMatrix)> = (0..=top)
        .map(|k| (k as i64, random_unimodular(r, ranks[k])))
        .collect();
    let c = plain.change_basis(&bases).unwrap();
    let known = (0..=top)
        .map(|k| (betti[k], canonical_torsion(&torsion[k])))
        .collect();
    (c, known)
}

/// Invariant-factor form of a list of cyclic orders.
pub fn canonical_torsion(orders: &[BigInt]) -> Vec<BigInt> {
    let diag = IntMatrix::from_row_major(
        orders.len(),
        orders.len(),
        (0..orders.len() * orders.len())
            .map(|n| {
                let (r, c) = (n / orders.len(), n % orders.len());
                if r == c {
                    orders[r].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect(),
    )
    .unwrap();
    invariant_factors_by_minors(&diag)
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.abs())
        .collect()
}

/// Closure of random facets on `n` vertices, every vertex used.
pub fn random_simplicial(r: &mut ChaCha8Rng, n: usize, max_dim: usize) -> SimplicialComplexData {
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for _ in 0..r.gen_range(1..=5) {
        let size = r.gen_range(1..=(max_dim + 1).min(n));
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(r);
        let mut f: Vec<usize> = vs[..size].to_vec();
        f.sort_unstable();
        facets.push(f);
    }
    facets.extend((0..n).map(|v| vec![v]));
    SimplicialComplexData::from_facets(n, &facets).unwrap()
}

/// A random vertex map into the complex spanned by the images.
pub fn random_image_map(r: &mut ChaCha8Rng, k: &SimplicialComplexData, m: usize) -> SimplicialMap {
    let image: Vec<usize> = (0..k.vertex_count()).map(|_| r.gen_range(0..m)).collect();
    let mut facets: Vec<Vec<usize>> = k
        .facets()
        .iter()
        .map(|f| {
            let mut s: Vec<usize> = f.iter().map(|&v| image[v]).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    facets.extend((0..m).map(|v| vec![v]));
    let target = SimplicialComplexData::from_facets(m, &facets).unwrap();
    SimplicialMap::new(k.clone(), target, image).unwrap()
}

/// A `k`-sheeted cyclic cover of a random simple graph with random voltages.
pub fn random_graph_cover(r: &mut ChaCha8Rng) -> (SimplicialMap, usize) {
    let n = r.gen_range(2..=5);
    let sheets = r.gen_range(1..=3);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(0.5) {
                edges.push((a, b, r.gen_range(0..sheets)));
            }
        }
    }
    let base_facets: Vec<Vec<usize>> = edges.iter().map(|&(a, b, _)| vec![a, b]).collect();
    let base = SimplicialComplexData::from_facets(n, &base_facets).unwrap();
    let lift = |v: usize, s: usize| v * sheets + s;
    let mut cover_facets = Vec::new();
    for &(a, b, volt) in &edges {
        for s in 0..sheets {
            let (x, y) = (lift(a, s), lift(b, (s + volt) % sheets));
            cover_facets.push(vec![x.min(y), x.max(y)]);
        }
    }
    let cover = SimplicialComplexData::from_facets(n * sheets, &cover_facets).unwrap();
    let image = (0..n * sheets).map(|v| v / sheets).collect();
    (SimplicialMap::new(cover, base, image).unwrap(), sheets)
}

/// `k` disjoint copies of a random complex with shuffled vertex labels,
/// mapping onto the original.
pub fn random_trivial_cover(r: &mut ChaCha8Rng) -> (SimplicialMap, usize) {
    let n = r.gen_range(3..=5);
    let base = random_simplicial(r, n, 2);
    let sheets = r.gen_range(1..=3);
    let mut labels: Vec<usize> = (0..n * sheets).collect();
    labels.shuffle(r);
    let mut facets = Vec::new();
    let mut image = vec![0; n * sheets];
    for s in 0..sheets {
        for v in 0..n {
            image[labels[s * n + v]] = v;
        }
        for f in base.facets() {
            let mut g: Vec<usize> = f.iter().map(|&v| labels[s * n + v]).collect();
            g.sort_unstable();
            facets.push(g);
        }
    }
    let cover = SimplicialComplexData::from_facets(n * sheets, &facets).unwrap();
    (SimplicialMap::new(cover, base, image).unwrap(), sheets)
}
