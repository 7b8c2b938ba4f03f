mod common;

use std::collections::BTreeMap;

use common::*;
use mbs_homology::chain::{
    homology_at, homology_basis, induced_is_isomorphism, mapping_cone, quasi_iso, ChainComplex, ChainMap,
};
use mbs_homology::exactalg::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

#[test]
fn homology_matches_oracles() {
    for seed in 0..SEEDS {
        let mut r = rng(seed);
        let (c, known) = random_complex(&mut r, 12);
        assert!(c.total_rank() <= 12);
        assert!(c.validate().is_valid());
        for k in c.degrees() {
            let h = homology_at(&c, k).unwrap();
            let (betti, torsion) = homology_oracle(&c, k);
            assert_eq!((h.betti, h.torsion.clone()), (betti, torsion), "seed {seed} degree {k}");
            assert_eq!((h.betti, h.torsion.clone()), known[k as usize].clone(), "seed {seed} degree {k}");
        }
    }
}

#[test]
fn generators_are_cycles_with_stated_orders() {
    for seed in 0..SEEDS {
        let mut r = rng(500 + seed);
        let (c, _) = random_complex(&mut r, 12);
        for k in c.degrees() {
            let basis = homology_basis(&c, k).unwrap();
            let gens = basis.group.generators.clone().unwrap();
            let orders = basis.generator_orders();
            let d = c.boundary(k);
            for (g, order) in gens.iter().zip(&orders) {
                assert!(d.mul_vec(g).iter().all(Zero::is_zero));
                if !order.is_zero() {
                    // order * g is a boundary
                    let target: Vec<BigInt> = g.iter().map(|x| x * order).collect();
                    let sol = mbs_homology::exactalg::solve_integer(&c.boundary(k + 1), &target).unwrap();
                    assert!(sol.is_some(), "seed {seed}: torsion generator is not torsion");
                }
            }
        }
    }
}

fn scalar_map(c: &ChainComplex, n: i64) -> ChainMap {
    let comps: BTreeMap<i64, IntMatrix> = c
        .degrees()
        .map(|k| (k, IntMatrix::identity(c.rank(k)).scale(&BigInt::from(n))))
        .collect();
    ChainMap::new(c.clone(), c.clone(), comps)
}

#[test]
fn quasi_iso_agrees_with_induced_maps() {
    for seed in 0..SEEDS {
        let mut r = rng(700 + seed);
        let (c, _) = random_complex(&mut r, 8);
        let n = r.gen_range(-3..=3);
        let f = scalar_map(&c, n);
        let by_degree = c.degrees().all(|k| induced_is_isomorphism(&f, k).unwrap());
        assert_eq!(quasi_iso(&f).unwrap(), by_degree, "seed {seed}, scalar {n}");
        let cone = mapping_cone(&f).unwrap();
        assert!(cone.validate().is_valid());

        // inclusion of a summand is a quasi-isomorphism iff the other summand is acyclic
        let (d, _) = random_complex(&mut r, 6);
        let sum = c.direct_sum(&d);
        let comps: BTreeMap<i64, IntMatrix> = c
            .degrees()
            .map(|k| {
                let mut m = IntMatrix::zeros(sum.rank(k), c.rank(k));
                m.set_block(0, 0, &IntMatrix::identity(c.rank(k)));
                (k, m)
            })
            .collect();
        let inc = ChainMap::new(c.clone(), sum, comps);
        let acyclic = d.degrees().all(|k| homology_at(&d, k).unwrap().is_trivial());
        assert_eq!(quasi_iso(&inc).unwrap(), acyclic, "seed {seed}");
    }
}

#[test]
fn homology_invariant_under_basis_change() {
    for seed in 0..SEEDS {
        let mut r = rng(900 + seed);
        let (c, _) = random_complex(&mut r, 12);
        let bases: BTreeMap<i64, (IntMatrix, IntMatrix)> =
            c.degrees().map(|k| (k, random_unimodular(&mut r, c.rank(k)))).collect();
        let c2 = c.change_basis(&bases).unwrap();
        for k in c.degrees() {
            assert!(homology_at(&c, k).unwrap().is_isomorphic(&homology_at(&c2, k).unwrap()));
        }
        // the basis change itself is a chain isomorphism
        let comps = bases.iter().map(|(k, (p, _))| (*k, p.clone())).collect();
        let f = ChainMap::new(c.clone(), c2, comps);
        assert!(f.is_chain_map().unwrap());
        assert!(quasi_iso(&f).unwrap());
    }
}
