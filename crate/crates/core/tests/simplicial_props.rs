mod common;

use common::*;
use mbs_homology::exactalg::IntMatrix;
use mbs_homology::simplicial::{
    chain_complex_of, covering_pullback, fundamental_cycle, pushforward, Chain, SimplicialComplexData,
    SimplicialMap,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

fn top(k: &SimplicialComplexData) -> usize {
    k.top_dim().unwrap_or(0)
}

#[test]
fn pushforward_is_a_chain_map() {
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let k = random_simplicial(&mut r, n, 3);
        let m = r.gen_range(1..=5);
        let f = random_image_map(&mut r, &k, m);
        assert!(chain_complex_of(&k).validate().is_valid());
        for p in 1..=top(&k) {
            let left = &f.target().boundary_matrix(p) * &f.pushforward_matrix(p);
            let right = &f.pushforward_matrix(p - 1) * &k.boundary_matrix(p);
            assert_eq!(left, right, "seed {seed}, dim {p}");
        }
    }
}

fn check_cover(f: &SimplicialMap, sheets: usize, seed: u64) {
    assert_eq!(f.covering_sheets().unwrap(), sheets, "seed {seed}");
    let base = f.target();
    for p in 0..=top(base) {
        let pull = f.pullback_matrix(p).unwrap();
        if p > 0 {
            let left = &f.source().boundary_matrix(p) * &pull;
            let right = &f.pullback_matrix(p - 1).unwrap() * &base.boundary_matrix(p);
            assert_eq!(left, right, "seed {seed}, dim {p}");
        }
        // pushing the lifts back down counts the sheets
        let round = &f.pushforward_matrix(p) * &pull;
        assert_eq!(round, IntMatrix::identity(base.count(p)).scale(&BigInt::from(sheets)));
    }
}

#[test]
fn pullback_along_graph_covers() {
    for seed in 0..SEEDS {
        let mut r = rng(100 + seed);
        let (f, sheets) = random_graph_cover(&mut r);
        check_cover(&f, sheets, seed);
    }
}

#[test]
fn pullback_along_trivial_covers() {
    for seed in 0..SEEDS {
        let mut r = rng(200 + seed);
        let (f, sheets) = random_trivial_cover(&mut r);
        check_cover(&f, sheets, seed);
    }
}

#[test]
fn folding_maps_are_not_coverings() {
    for seed in 0..SEEDS {
        let mut r = rng(300 + seed);
        let n = r.gen_range(3..=6);
        let path = SimplicialComplexData::path(n).unwrap();
        // fold the path back and forth over one edge
        let image: Vec<usize> = (0..n).map(|v| v % 2).collect();
        let f = SimplicialMap::new(path, SimplicialComplexData::simplex(1), image).unwrap();
        let c = Chain::simplex(f.target(), &[0, 1]).unwrap();
        assert!(covering_pullback(&f, &c).is_err());
    }
}

/// Cone over a circle of `n` vertices, a triangulated disk with boundary the circle.
fn disk(n: usize) -> SimplicialComplexData {
    let mut facets: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1, n]).collect();
    facets.push(vec![0, n - 1, n]);
    SimplicialComplexData::from_facets(n + 1, &facets).unwrap()
}

fn annulus(n: usize) -> SimplicialComplexData {
    // inner ring 0..n, outer ring n..2n
    let mut facets = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let mut a = vec![i, j, n + i];
        let mut b = vec![j, n + i, n + j];
        a.sort_unstable();
        b.sort_unstable();
        facets.push(a);
        facets.push(b);
    }
    SimplicialComplexData::from_facets(2 * n, &facets).unwrap()
}

/// The boundary of the fundamental cycle is, on each boundary component, plus
/// or minus that component's own fundamental cycle.
fn check_relative(k: &SimplicialComplexData) {
    let z = fundamental_cycle(k).unwrap();
    assert!(z.chain.coeffs.iter().all(|c| c.is_one() || *c == -BigInt::one()));
    let b = z.chain.boundary(k);
    let faces = k.simplices(b.dim);
    for (idx, f) in faces.iter().enumerate() {
        let on_boundary = z.boundary_faces.contains(f);
        assert_eq!(!b.coeffs[idx].is_zero(), on_boundary, "{f:?}");
    }
    if b.dim == 0 {
        return;
    }
    let bd = SimplicialComplexData::from_facets(k.vertex_count(), &z.boundary_faces).unwrap();
    let comps = bd.vertex_components();
    let mut roots: Vec<usize> = z.boundary_faces.iter().map(|f| comps[f[0]]).collect();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let faces: Vec<Vec<usize>> =
            z.boundary_faces.iter().filter(|f| comps[f[0]] == root).cloned().collect();
        // drop the isolated vertices by relabelling onto the used ones
        let used: Vec<usize> = (0..k.vertex_count()).filter(|&v| faces.iter().any(|f| f.contains(&v))).collect();
        let relabel: Vec<Vec<usize>> =
            faces.iter().map(|f| f.iter().map(|v| used.iter().position(|u| u == v).unwrap()).collect()).collect();
        let compact = SimplicialComplexData::from_facets(used.len(), &relabel).unwrap();
        let zc = fundamental_cycle(&compact).unwrap();
        assert!(zc.is_closed());
        let coeff = |face: &Vec<usize>| b.coeffs[k.index_of(face).unwrap()].clone();
        let first = &faces[0];
        let sign = coeff(first) * &zc.chain.coeffs[compact.index_of(&relabel[0]).unwrap()];
        for (f, g) in faces.iter().zip(&relabel) {
            assert_eq!(coeff(f), &sign * &zc.chain.coeffs[compact.index_of(g).unwrap()]);
        }
    }
}

#[test]
fn relative_fundamental_cycles() {
    for n in 3..=7 {
        check_relative(&SimplicialComplexData::path(n).unwrap());
        check_relative(&disk(n));
        check_relative(&annulus(n));
        check_relative(&SimplicialComplexData::cycle(n).unwrap());
    }
    check_relative(&SimplicialComplexData::simplex_boundary(3));
    check_relative(&SimplicialComplexData::simplex(3));
}

#[test]
fn closed_cycles_are_killed_by_the_boundary() {
    for k in [
        SimplicialComplexData::simplex_boundary(2),
        SimplicialComplexData::simplex_boundary(3),
        SimplicialComplexData::simplex_boundary(4),
        SimplicialComplexData::cycle(9).unwrap(),
    ] {
        let z = fundamental_cycle(&k).unwrap();
        assert!(z.is_closed());
        assert!(z.chain.boundary(&k).is_zero());
        assert!(z.chain.coeffs[0].is_one());
    }
}

#[test]
fn circle_maps_multiply_by_degree() {
    let tri = SimplicialComplexData::simplex_boundary(2);
    let zt = fundamental_cycle(&tri).unwrap().chain;
    for d in 1..=4usize {
        let big = SimplicialComplexData::cycle(3 * d).unwrap();
        let f = SimplicialMap::new(big.clone(), tri.clone(), (0..3 * d).map(|v| v % 3).collect()).unwrap();
        let z = fundamental_cycle(&big).unwrap().chain;
        assert_eq!(pushforward(&f, &z), zt.scaled(&BigInt::from(d)));
    }
    // reflection reverses orientation
    let flip = SimplicialMap::new(tri.clone(), tri.clone(), vec![0, 2, 1]).unwrap();
    assert_eq!(pushforward(&flip, &zt), zt.scaled(&BigInt::from(-1)));
    // a constant map has degree zero
    let flat = SimplicialMap::new(tri.clone(), tri.clone(), vec![1, 1, 1]).unwrap();
    assert!(pushforward(&flat, &zt).is_zero());
}
