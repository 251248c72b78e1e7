//! Property suite for homomorphisms: fiber atomicity, the counting
//! identity, witness soundness, injectivity equivalence, and quotient
//! well-definedness, all driven by brute-force enumeration over small
//! catalog pairs.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use atomicity_core::{
    catalog, enumerate_homomorphisms, fiber, first_isomorphism_witness, image, is_injective,
    kernel, left_cosets, quotient_group, subgroup_generated, FiniteGroup, Homomorphism,
};

const SMALL_CATALOG: &[(&str, i64)] = &[
    ("cyclic", 1),
    ("cyclic", 2),
    ("cyclic", 3),
    ("cyclic", 4),
    ("cyclic", 6),
    ("symmetric", 3),
    ("dihedral", 3),
    ("dihedral", 4),
    ("klein4", 0),
    ("quaternion8", 0),
];

fn group_pair() -> impl Strategy<Value = (Arc<FiniteGroup>, Arc<FiniteGroup>)> {
    ((0..SMALL_CATALOG.len()), (0..SMALL_CATALOG.len())).prop_map(|(i, j)| {
        let (n1, p1) = SMALL_CATALOG[i];
        let (n2, p2) = SMALL_CATALOG[j];
        (catalog(n1, p1).unwrap(), catalog(n2, p2).unwrap())
    })
}

/// Every image-point fiber has kernel cardinality and the fiber family is
/// exactly the left-coset partition by the kernel.
fn assert_fiber_atomicity(hom: &Homomorphism) {
    let ker = kernel(hom).unwrap();
    let img = image(hom).unwrap();
    let domain = hom.domain();

    let mut fiber_family = BTreeSet::new();
    for &h in img.members() {
        let f = fiber(hom, h).unwrap();
        assert_eq!(f.len(), ker.order(), "fiber over {h} has wrong size");
        fiber_family.insert(f);
    }
    let partition = left_cosets(domain, &ker).unwrap();
    let blocks: BTreeSet<Vec<usize>> = partition.blocks().iter().cloned().collect();
    assert_eq!(fiber_family, blocks, "fiber family differs from coset blocks");

    // Off-image fibers are empty, not errors.
    for h in 0..hom.codomain().order() {
        if !img.contains(h) {
            assert!(fiber(hom, h).unwrap().is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn atomicity_and_counting((g, h) in group_pair()) {
        for hom in enumerate_homomorphisms(&g, &h).unwrap() {
            assert_fiber_atomicity(&hom);
            let k = kernel(&hom).unwrap().order();
            let i = image(&hom).unwrap().order();
            prop_assert_eq!(g.order(), k * i);
        }
    }

    #[test]
    fn witness_always_sound((g, h) in group_pair()) {
        for hom in enumerate_homomorphisms(&g, &h).unwrap() {
            let w = first_isomorphism_witness(&hom).unwrap();
            let img = image(&hom).unwrap();
            prop_assert_eq!(w.quotient.order(), img.order());
            // forward is a bijection onto the image respecting products.
            let mut targets: Vec<usize> = w.forward.clone();
            targets.sort_unstable();
            prop_assert_eq!(&targets, img.members());
            for a in 0..w.forward.len() {
                prop_assert_eq!(w.backward[w.forward[a]], Some(a));
                for b in 0..w.forward.len() {
                    let lhs = w.forward[w.quotient.op(a, b).unwrap()];
                    let rhs = hom.codomain().op(w.forward[a], w.forward[b]).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn injectivity_iff_duplicate_free((g, h) in group_pair()) {
        for hom in enumerate_homomorphisms(&g, &h).unwrap() {
            let injective = is_injective(&hom).unwrap();
            let mut sorted = hom.map().to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            let duplicate_free = sorted.len() == hom.map().len();
            // Both directions, asserted separately.
            if injective {
                prop_assert!(duplicate_free);
            }
            if duplicate_free {
                prop_assert!(injective);
            }
        }
    }

    #[test]
    fn quotients_by_kernels_are_well_defined((g, h) in group_pair()) {
        for hom in enumerate_homomorphisms(&g, &h).unwrap() {
            let ker = kernel(&hom).unwrap();
            let q = quotient_group(&g, &ker).unwrap();
            // Recompute every product with all representative pairs.
            let partition = &q.partition;
            for (a, block_a) in partition.blocks().iter().enumerate() {
                for (b, block_b) in partition.blocks().iter().enumerate() {
                    let expect = q.group.op(a, b).unwrap();
                    for &x in block_a {
                        for &y in block_b {
                            let prod = g.op(x, y).unwrap();
                            prop_assert_eq!(partition.block_of(prod).unwrap(), expect);
                        }
                    }
                }
            }
            // The projection is the block map.
            for x in 0..g.order() {
                prop_assert_eq!(
                    q.projection.apply(x).unwrap(),
                    partition.block_of(x).unwrap()
                );
            }
        }
    }
}

#[test]
fn hom_counts_against_independent_formulas() {
    // |Hom(Z_m, Z_n)| = gcd(m, n): an independent number-theoretic oracle
    // for the enumerator.
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    for m in 1..=8usize {
        for n in 1..=8usize {
            let zm = catalog("cyclic", m as i64).unwrap();
            let zn = catalog("cyclic", n as i64).unwrap();
            let homs = enumerate_homomorphisms(&zm, &zn).unwrap();
            assert_eq!(homs.len(), gcd(m, n), "|Hom(Z{m}, Z{n})|");
        }
    }
}

#[test]
fn enumeration_is_sorted_and_deduplicated() {
    let s3 = catalog("symmetric", 3).unwrap();
    let z2 = catalog("cyclic", 2).unwrap();
    let homs = enumerate_homomorphisms(&s3, &z2).unwrap();
    // Exactly the trivial map and the sign map.
    assert_eq!(homs.len(), 2);
    let maps: Vec<&[usize]> = homs.iter().map(|h| h.map()).collect();
    let mut sorted = maps.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(maps, sorted);
}

#[test]
fn kernels_are_normal_subgroups() {
    let s3 = catalog("symmetric", 3).unwrap();
    let z2 = catalog("cyclic", 2).unwrap();
    for hom in enumerate_homomorphisms(&s3, &z2).unwrap() {
        let ker = kernel(&hom).unwrap();
        for g in 0..s3.order() {
            let ginv = s3.inverse(g).unwrap();
            for &k in ker.members() {
                let conj = s3.op(s3.op(g, k).unwrap(), ginv).unwrap();
                assert!(ker.contains(conj));
            }
        }
    }
}

#[test]
fn non_normal_subgroups_exist_and_are_caught() {
    let s3 = catalog("symmetric", 3).unwrap();
    let mut caught = 0;
    for g in 1..s3.order() {
        let k = subgroup_generated(&s3, &[g]).unwrap();
        if k.order() == 2 && quotient_group(&s3, &k).is_err() {
            caught += 1;
        }
    }
    // All three transposition subgroups of S3 are non-normal.
    assert_eq!(caught, 3);
}
