//! Validated homomorphisms between finite groups: kernels, images, fibers,
//! quotient groups, and the explicit quotient-to-image isomorphism witness.
//!
//! A `Homomorphism` is only handed out after the structure-preservation
//! identity has been checked on every pair of domain elements (or, above the
//! validation cap, on an explicit sampled basis that downstream theorem
//! checks refuse by default). Everything downstream therefore works with
//! verified structure, not caller claims.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{
    left_cosets, right_cosets, CosetPartition, FiniteGroup, GroupConfig, GroupError, Subgroup,
};
use crate::sample::SplitMix64;

/// Default cap on exhaustive O(|G|^2) map validation.
pub const VALIDATION_CAP_DEFAULT: usize = 2048;

/// Cap on candidate assignments in homomorphism enumeration.
pub const ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    /// First violating pair in lexicographic order:
    /// map[xy] != map[x] map[y].
    #[error("not a homomorphism: violated at pair ({x}, {y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("domain order {order} exceeds the exhaustive validation cap {cap}; use sampled validation explicitly")]
    ValidationCapExceeded { order: usize, cap: usize },
    #[error("map has {got} entries but the domain has order {expected}")]
    MapLengthMismatch { expected: usize, got: usize },
    #[error("map entry {value} at index {index} is out of range for codomain of order {order}")]
    MapEntryOutOfRange { index: usize, value: usize, order: usize },
    #[error("expected {expected} generator images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error("domain group does not carry generator words (needs a permutation backend)")]
    WrongBackend,
    #[error("subgroup is not normal: witness element {witness}")]
    NotNormal { witness: usize },
    #[error("isomorphism witness check failed at quotient pair ({a}, {b})")]
    WitnessCheckFailed { a: usize, b: usize },
    #[error("{candidates} candidate assignments exceed the enumeration cap {cap}")]
    EnumerationCapExceeded { candidates: u128, cap: u128 },
    #[error("group axioms were only sampled, not verified; pass the explicit override to proceed")]
    SampledAxiomsRejected,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How the homomorphism identity was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomValidation {
    /// Every pair (x, y) checked.
    Exhaustive,
    /// Only sampled pairs checked; theorem entry points reject this unless
    /// explicitly overridden.
    Sampled { samples: usize, seed: u64 },
}

/// Options for theorem-verification entry points.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOpts {
    /// Accept groups and homomorphisms whose axioms were only sampled.
    pub allow_sampled: bool,
}

/// A structure-preserving map between two finite groups, stored as a dense
/// array over domain indices.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<usize>,
    validation: HomValidation,
}

impl Homomorphism {
    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> Result<usize, HomError> {
        self.domain.check_index(x)?;
        Ok(self.map[x])
    }

    pub fn validation(&self) -> HomValidation {
        self.validation
    }

    pub fn is_fully_verified(&self) -> bool {
        self.validation == HomValidation::Exhaustive
            && !self.domain.is_assoc_sampled()
            && !self.codomain.is_assoc_sampled()
    }
}

fn check_map_shape(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    map: &[usize],
) -> Result<(), HomError> {
    if map.len() != domain.order() {
        return Err(HomError::MapLengthMismatch { expected: domain.order(), got: map.len() });
    }
    for (index, &value) in map.iter().enumerate() {
        if value >= codomain.order() {
            return Err(HomError::MapEntryOutOfRange {
                index,
                value,
                order: codomain.order(),
            });
        }
    }
    Ok(())
}

/// Validates `map` as a homomorphism by checking the identity
/// `map[xy] = map[x] map[y]` on every pair, in lexicographic order.
pub fn hom_from_table(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    map: Vec<usize>,
) -> Result<Homomorphism, HomError> {
    hom_from_table_with_cap(domain, codomain, map, VALIDATION_CAP_DEFAULT)
}

pub fn hom_from_table_with_cap(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    map: Vec<usize>,
    cap: usize,
) -> Result<Homomorphism, HomError> {
    check_map_shape(domain, codomain, &map)?;
    let n = domain.order();
    if n > cap {
        return Err(HomError::ValidationCapExceeded { order: n, cap });
    }
    for x in 0..n {
        for y in 0..n {
            let lhs = map[domain.op_unchecked(x, y)];
            let rhs = codomain.op_unchecked(map[x], map[y]);
            if lhs != rhs {
                return Err(HomError::NotAHomomorphism { x, y });
            }
        }
    }
    // Implied by the pairwise identity, checked directly as a self-check.
    debug_assert_eq!(map[0], 0, "identity must map to identity");
    Ok(Homomorphism {
        domain: Arc::clone(domain),
        codomain: Arc::clone(codomain),
        map,
        validation: HomValidation::Exhaustive,
    })
}

/// Sampled validation for domains above the exhaustive cap. The result is
/// marked [`HomValidation::Sampled`] and refused by theorem entry points
/// unless explicitly allowed.
pub fn hom_from_table_sampled(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    map: Vec<usize>,
    samples: usize,
    seed: u64,
) -> Result<Homomorphism, HomError> {
    check_map_shape(domain, codomain, &map)?;
    let n = domain.order();
    if map[0] != 0 {
        return Err(HomError::NotAHomomorphism { x: 0, y: 0 });
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..samples {
        let x = rng.next_index(n);
        let y = rng.next_index(n);
        if map[domain.op_unchecked(x, y)] != codomain.op_unchecked(map[x], map[y]) {
            return Err(HomError::NotAHomomorphism { x, y });
        }
    }
    Ok(Homomorphism {
        domain: Arc::clone(domain),
        codomain: Arc::clone(codomain),
        map,
        validation: HomValidation::Sampled { samples, seed },
    })
}

/// Extends generator images along the generator words recorded at
/// enumeration time, then validates the extension exhaustively. The full
/// pairwise check is what proves the assignment was well defined.
pub fn hom_from_generator_images(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    images: &[usize],
) -> Result<Homomorphism, HomError> {
    let map = extend_generator_images(domain, codomain, images)?;
    hom_from_table(domain, codomain, map)
}

fn extend_generator_images(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
    images: &[usize],
) -> Result<Vec<usize>, HomError> {
    let words = domain.words().ok_or(HomError::WrongBackend)?;
    let expected = domain.generator_count().unwrap_or(0);
    if images.len() != expected {
        return Err(HomError::ImageCountMismatch { expected, got: images.len() });
    }
    for &img in images {
        codomain.check_index(img)?;
    }
    let map = words
        .iter()
        .map(|word| {
            word.iter()
                .fold(0usize, |acc, &gi| codomain.op_unchecked(acc, images[gi as usize]))
        })
        .collect();
    Ok(map)
}

/// The subgroup of domain elements mapped to the codomain identity.
pub fn kernel(hom: &Homomorphism) -> Result<Subgroup, HomError> {
    let members: Vec<usize> =
        (0..hom.domain.order()).filter(|&x| hom.map[x] == 0).collect();
    Ok(Subgroup::from_members(&hom.domain, &members)?)
}

/// The subgroup of attained codomain indices.
pub fn image(hom: &Homomorphism) -> Result<Subgroup, HomError> {
    let mut members: Vec<usize> = hom.map.clone();
    members.sort_unstable();
    members.dedup();
    Ok(Subgroup::from_members(&hom.codomain, &members)?)
}

/// Full preimage of a codomain index; empty when the point is not attained.
pub fn fiber(hom: &Homomorphism, h: usize) -> Result<Vec<usize>, HomError> {
    hom.codomain.check_index(h)?;
    Ok((0..hom.domain.order()).filter(|&x| hom.map[x] == h).collect())
}

/// True iff the kernel is trivial. The pairwise-distinctness reading is
/// cross-checked in debug builds; the two are asserted equivalent in the
/// property suite.
pub fn is_injective(hom: &Homomorphism) -> Result<bool, HomError> {
    let trivial_kernel = kernel(hom)?.order() == 1;
    #[cfg(debug_assertions)]
    {
        let mut seen = vec![false; hom.codomain.order()];
        let mut duplicate_free = true;
        for &v in &hom.map {
            if seen[v] {
                duplicate_free = false;
                break;
            }
            seen[v] = true;
        }
        debug_assert_eq!(trivial_kernel, duplicate_free);
    }
    Ok(trivial_kernel)
}

/// A quotient group together with its coset partition and the verified
/// projection homomorphism.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Arc<FiniteGroup>,
    pub projection: Homomorphism,
    pub partition: CosetPartition,
}

/// Builds `G/K` for a normal subgroup. Normality is verified element by
/// element (witness on failure), and the coset product table is recomputed
/// with every representative pair to prove well-definedness.
pub fn quotient_group(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
) -> Result<Quotient, HomError> {
    quotient_group_with(group, subgroup, &GroupConfig::default())
}

pub fn quotient_group_with(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
    config: &GroupConfig,
) -> Result<Quotient, HomError> {
    // gK = Kg for every g, compared as sorted sets.
    let left = left_cosets(group, subgroup)?;
    let right = right_cosets(group, subgroup)?;
    for g in 0..group.order() {
        let lb = &left.blocks()[left.block_of_unchecked(g)];
        let rb = &right.blocks()[right.block_of_unchecked(g)];
        if lb != rb {
            return Err(HomError::NotNormal { witness: g });
        }
    }

    let q = left.block_count();
    let mut table = vec![vec![0usize; q]; q];
    for a in 0..q {
        for b in 0..q {
            let rep_product =
                group.op_unchecked(left.representatives()[a], left.representatives()[b]);
            let c = left.block_of_unchecked(rep_product);
            // Recompute with every member pair; any disagreement means the
            // coset product is ill-defined.
            for &x in &left.blocks()[a] {
                for &y in &left.blocks()[b] {
                    if left.block_of_unchecked(group.op_unchecked(x, y)) != c {
                        return Err(HomError::NotNormal { witness: x });
                    }
                }
            }
            table[a][b] = c;
        }
    }

    let labels = left
        .representatives()
        .iter()
        .map(|&r| format!("{}K", group.label(r)))
        .collect();
    let quotient = FiniteGroup::from_cayley_table_labeled(&table, labels, config)?;
    let projection_map: Vec<usize> =
        (0..group.order()).map(|g| left.block_of_unchecked(g)).collect();
    let projection = hom_from_table_with_cap(
        group,
        &quotient,
        projection_map,
        group.order().max(VALIDATION_CAP_DEFAULT),
    )?;
    Ok(Quotient { group: quotient, projection, partition: left })
}

/// Explicit isomorphism between `G/Ker` and the image subgroup: the forward
/// array, its inverse, and the exhaustive checks that make it a witness.
#[derive(Debug, Clone)]
pub struct IsomorphismWitness {
    pub quotient: Arc<FiniteGroup>,
    pub image: Subgroup,
    /// Quotient index -> codomain element index.
    pub forward: Vec<usize>,
    /// Codomain element index -> quotient index, `None` off the image.
    pub backward: Vec<Option<usize>>,
}

/// Constructs and fully checks the quotient-to-image isomorphism induced by
/// a validated homomorphism. Kernel normality is verified rather than
/// assumed (a failure would expose a backend bug), the forward map is
/// checked bijective onto the image, and operation preservation is checked
/// on every quotient pair.
pub fn first_isomorphism_witness(hom: &Homomorphism) -> Result<IsomorphismWitness, HomError> {
    first_isomorphism_witness_with(hom, VerifyOpts::default())
}

pub fn first_isomorphism_witness_with(
    hom: &Homomorphism,
    opts: VerifyOpts,
) -> Result<IsomorphismWitness, HomError> {
    if !opts.allow_sampled && !hom.is_fully_verified() {
        return Err(HomError::SampledAxiomsRejected);
    }
    let ker = kernel(hom)?;
    let quotient = quotient_group(hom.domain(), &ker)?;
    let img = image(hom)?;

    let forward: Vec<usize> = quotient
        .partition
        .representatives()
        .iter()
        .map(|&rep| hom.map[rep])
        .collect();

    // Bijectivity onto the image.
    let mut backward: Vec<Option<usize>> = vec![None; hom.codomain.order()];
    for (a, &h) in forward.iter().enumerate() {
        if let Some(b) = backward[h] {
            return Err(HomError::WitnessCheckFailed { a, b });
        }
        backward[h] = Some(a);
    }
    for (a, &h) in forward.iter().enumerate() {
        if !img.contains(h) {
            return Err(HomError::WitnessCheckFailed { a, b: a });
        }
    }
    if forward.len() != img.order() {
        return Err(HomError::WitnessCheckFailed { a: forward.len(), b: img.order() });
    }

    // Operation preservation on every quotient pair.
    for a in 0..forward.len() {
        for b in 0..forward.len() {
            let lhs = forward[quotient.group.op_unchecked(a, b)];
            let rhs = hom.codomain.op_unchecked(forward[a], forward[b]);
            if lhs != rhs {
                return Err(HomError::WitnessCheckFailed { a, b });
            }
        }
    }

    // backward o forward is the identity by construction of backward.
    debug_assert!((0..forward.len()).all(|a| backward[forward[a]] == Some(a)));

    Ok(IsomorphismWitness { quotient: quotient.group, image: img, forward, backward })
}

/// Enumerates every homomorphism from `domain` to `codomain` by brute
/// force, deduplicated and sorted lexicographically by map array.
///
/// Permutation-backed domains are enumerated over generator-image
/// assignments (|H|^generators candidates, each fully validated, which is
/// also the well-definedness proof). Cayley-backed domains fall back to all
/// |H|^|G| candidate arrays. Either way the candidate count is capped.
pub fn enumerate_homomorphisms(
    domain: &Arc<FiniteGroup>,
    codomain: &Arc<FiniteGroup>,
) -> Result<Vec<Homomorphism>, HomError> {
    let nh = codomain.order() as u128;
    let mut maps = BTreeSet::new();

    if domain.words().is_some() {
        let gens = domain.generator_count().unwrap_or(0);
        let candidates = nh.checked_pow(gens as u32).unwrap_or(u128::MAX);
        if candidates > ENUMERATION_CAP {
            return Err(HomError::EnumerationCapExceeded { candidates, cap: ENUMERATION_CAP });
        }
        let mut assignment = vec![0usize; gens];
        loop {
            if let Ok(map) = extend_generator_images(domain, codomain, &assignment) {
                if hom_from_table(domain, codomain, map.clone()).is_ok() {
                    maps.insert(map);
                }
            }
            if !advance_odometer(&mut assignment, codomain.order()) {
                break;
            }
        }
    } else {
        let n = domain.order();
        let candidates = nh.checked_pow(n as u32).unwrap_or(u128::MAX);
        if candidates > ENUMERATION_CAP {
            return Err(HomError::EnumerationCapExceeded { candidates, cap: ENUMERATION_CAP });
        }
        let mut map = vec![0usize; n];
        loop {
            if hom_from_table(domain, codomain, map.clone()).is_ok() {
                maps.insert(map.clone());
            }
            if !advance_odometer(&mut map, codomain.order()) {
                break;
            }
        }
    }

    maps.into_iter()
        .map(|map| hom_from_table(domain, codomain, map))
        .collect()
}

/// Advances a little-endian-from-the-right odometer; false when wrapped.
fn advance_odometer(digits: &mut [usize], base: usize) -> bool {
    if base == 0 {
        return false;
    }
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, direct_product};

    /// Parity of a permutation given as an image array (0 even, 1 odd).
    fn parity(perm: &[usize]) -> usize {
        let mut seen = vec![false; perm.len()];
        let mut transpositions = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2
    }

    fn sign_map_s3() -> (Arc<FiniteGroup>, Arc<FiniteGroup>, Vec<usize>) {
        let s3 = catalog("symmetric", 3).unwrap();
        let z2 = catalog("cyclic", 2).unwrap();
        let map: Vec<usize> =
            s3.permutations().unwrap().iter().map(|p| parity(p)).collect();
        (s3, z2, map)
    }

    #[test]
    fn identity_map_is_valid_with_trivial_kernel() {
        let g = catalog("symmetric", 3).unwrap();
        let map: Vec<usize> = (0..g.order()).collect();
        let hom = hom_from_table(&g, &g, map).unwrap();
        assert_eq!(kernel(&hom).unwrap().members(), &[0]);
        assert!(is_injective(&hom).unwrap());
    }

    #[test]
    fn sign_map_is_valid() {
        let (s3, z2, map) = sign_map_s3();
        let hom = hom_from_table(&s3, &z2, map).unwrap();
        let ker = kernel(&hom).unwrap();
        assert_eq!(ker.order(), 3);
        // Kernel is A3: the identity and the two 3-cycles.
        for &m in ker.members() {
            assert_eq!(parity(&s3.permutations().unwrap()[m]), 0);
        }
        let odd = fiber(&hom, 1).unwrap();
        assert_eq!(odd.len(), 3);
        assert!(!is_injective(&hom).unwrap());
    }

    #[test]
    fn image_subgroups() {
        let (s3, z2, map) = sign_map_s3();
        let hom = hom_from_table(&s3, &z2, map).unwrap();
        assert_eq!(image(&hom).unwrap().members(), &[0, 1]);

        let trivial = hom_from_table(&s3, &z2, vec![0; 6]).unwrap();
        assert_eq!(image(&trivial).unwrap().members(), &[0]);
    }

    #[test]
    fn constant_map_is_trivial_homomorphism() {
        let g = catalog("dihedral", 4).unwrap();
        let h = catalog("cyclic", 3).unwrap();
        let hom = hom_from_table(&g, &h, vec![0; g.order()]).unwrap();
        assert_eq!(kernel(&hom).unwrap().order(), g.order());
        assert_eq!(fiber(&hom, 1).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn corrupted_map_reports_first_violating_pair() {
        let (s3, z2, mut map) = sign_map_s3();
        map[3] ^= 1;
        let err = hom_from_table(&s3, &z2, map).unwrap_err();
        match err {
            HomError::NotAHomomorphism { x, y } => {
                // x is the first row whose products involve index 3.
                assert!(x <= 3);
                let _ = y;
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn identity_fiber_is_singleton() {
        let g = catalog("cyclic", 5).unwrap();
        let map: Vec<usize> = (0..5).collect();
        let hom = hom_from_table(&g, &g, map).unwrap();
        for h in 0..5 {
            assert_eq!(fiber(&hom, h).unwrap(), vec![h]);
        }
    }

    #[test]
    fn generator_images_extend_to_mod2_reduction() {
        let z4 = catalog("cyclic", 4).unwrap();
        let z2 = catalog("cyclic", 2).unwrap();
        let hom = hom_from_generator_images(&z4, &z2, &[1]).unwrap();
        assert_eq!(hom.map(), &[0, 1, 0, 1]);
        assert_eq!(kernel(&hom).unwrap().members(), &[0, 2]);
        assert!(!is_injective(&hom).unwrap());
    }

    #[test]
    fn generator_images_build_sign_map() {
        let (s3, z2, expected) = sign_map_s3();
        // Catalog S3 generators: a transposition (odd) and a 3-cycle (even).
        let hom = hom_from_generator_images(&s3, &z2, &[1, 0]).unwrap();
        assert_eq!(hom.map(), &expected[..]);
    }

    #[test]
    fn trivial_generator_images() {
        let s3 = catalog("symmetric", 3).unwrap();
        let z2 = catalog("cyclic", 2).unwrap();
        let hom = hom_from_generator_images(&s3, &z2, &[0, 0]).unwrap();
        assert!(hom.map().iter().all(|&v| v == 0));
    }

    #[test]
    fn inconsistent_generator_images_rejected() {
        let z4 = catalog("cyclic", 4).unwrap();
        let z3 = catalog("cyclic", 3).unwrap();
        // A 4-cycle cannot map to an element of order 3.
        let err = hom_from_generator_images(&z4, &z3, &[1]).unwrap_err();
        assert!(matches!(err, HomError::NotAHomomorphism { .. }));
    }

    #[test]
    fn quotient_by_trivial_subgroup() {
        let g = catalog("dihedral", 3).unwrap();
        let k = crate::group::subgroup_generated(&g, &[]).unwrap();
        let q = quotient_group(&g, &k).unwrap();
        assert_eq!(q.group.order(), g.order());
        assert!(is_injective(&q.projection).unwrap());
    }

    #[test]
    fn quotient_z6_by_multiples_of_two() {
        let z6 = catalog("cyclic", 6).unwrap();
        let k = crate::group::subgroup_generated(&z6, &[2]).unwrap();
        let q = quotient_group(&z6, &k).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection.map(), &[0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn non_normal_subgroup_rejected_with_witness() {
        let s3 = catalog("symmetric", 3).unwrap();
        // A transposition generates a non-normal order-2 subgroup.
        let transposition = s3
            .permutations()
            .unwrap()
            .iter()
            .position(|p| p == &vec![1, 0, 2])
            .unwrap();
        let k = crate::group::subgroup_generated(&s3, &[transposition]).unwrap();
        let err = quotient_group(&s3, &k).unwrap_err();
        match err {
            HomError::NotNormal { witness } => {
                // Verify the witness: conjugating K by it moves some member out.
                let winv = s3.inverse(witness).unwrap();
                let conjugated: Vec<usize> = k
                    .members()
                    .iter()
                    .map(|&m| {
                        s3.op(s3.op(witness, m).unwrap(), winv).unwrap()
                    })
                    .collect();
                assert!(conjugated.iter().any(|c| !k.contains(*c)));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn witness_for_identity_map() {
        let g = catalog("dihedral", 4).unwrap();
        let map: Vec<usize> = (0..g.order()).collect();
        let hom = hom_from_table(&g, &g, map).unwrap();
        let w = first_isomorphism_witness(&hom).unwrap();
        assert_eq!(w.quotient.order(), g.order());
        assert_eq!(w.image.order(), g.order());
    }

    #[test]
    fn witness_for_sign_map() {
        let (s3, z2, map) = sign_map_s3();
        let hom = hom_from_table(&s3, &z2, map).unwrap();
        let w = first_isomorphism_witness(&hom).unwrap();
        assert_eq!(w.quotient.order(), 2);
        assert_eq!(w.image.order(), 2);
        assert_eq!(w.forward.len(), 2);
        for (a, &h) in w.forward.iter().enumerate() {
            assert_eq!(w.backward[h], Some(a));
        }
    }

    #[test]
    fn witness_for_mod2_reduction() {
        let z4 = catalog("cyclic", 4).unwrap();
        let z2 = catalog("cyclic", 2).unwrap();
        let hom = hom_from_generator_images(&z4, &z2, &[1]).unwrap();
        let w = first_isomorphism_witness(&hom).unwrap();
        assert_eq!(w.quotient.order(), 2);
        assert_eq!(w.image.order(), 2);
    }

    #[test]
    fn enumeration_counts() {
        let z2 = catalog("cyclic", 2).unwrap();
        let z3 = catalog("cyclic", 3).unwrap();
        let trivial = catalog("cyclic", 1).unwrap();
        assert_eq!(enumerate_homomorphisms(&z2, &z2).unwrap().len(), 2);
        assert_eq!(enumerate_homomorphisms(&z3, &z2).unwrap().len(), 1);
        for g in [&z2, &z3] {
            assert_eq!(enumerate_homomorphisms(g, &trivial).unwrap().len(), 1);
        }
    }

    #[test]
    fn enumeration_matches_between_backends() {
        // The generator-word route and the brute-force route must agree.
        let z4_perm = catalog("cyclic", 4).unwrap();
        let table: Vec<Vec<usize>> =
            (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        let z4_cayley = FiniteGroup::from_cayley_table(&table).unwrap();
        let z2 = catalog("cyclic", 2).unwrap();
        let via_words: Vec<Vec<usize>> = enumerate_homomorphisms(&z4_perm, &z2)
            .unwrap()
            .iter()
            .map(|h| h.map().to_vec())
            .collect();
        let via_tables: Vec<Vec<usize>> = enumerate_homomorphisms(&z4_cayley, &z2)
            .unwrap()
            .iter()
            .map(|h| h.map().to_vec())
            .collect();
        assert_eq!(via_words, via_tables);
    }

    #[test]
    fn counting_identity_on_product_group() {
        let z2 = catalog("cyclic", 2).unwrap();
        let z3 = catalog("cyclic", 3).unwrap();
        let z6 = direct_product(&z2, &z3).unwrap();
        for hom in enumerate_homomorphisms(&z6, &z6).unwrap() {
            let k = kernel(&hom).unwrap().order();
            let i = image(&hom).unwrap().order();
            assert_eq!(z6.order(), k * i);
        }
    }

    #[test]
    fn enumeration_cap() {
        // A table-backed domain of order 6 against a codomain of order 24
        // needs 24^6 candidate maps, far beyond the cap.
        let table: Vec<Vec<usize>> =
            (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        let z6_cayley = FiniteGroup::from_cayley_table(&table).unwrap();
        let s4 = catalog("symmetric", 4).unwrap();
        let err = enumerate_homomorphisms(&z6_cayley, &s4).unwrap_err();
        assert!(matches!(err, HomError::EnumerationCapExceeded { .. }));
    }

    #[test]
    fn validation_cap() {
        let g = catalog("symmetric", 4).unwrap();
        let map: Vec<usize> = (0..g.order()).collect();
        let err = hom_from_table_with_cap(&g, &g, map, 10).unwrap_err();
        assert!(matches!(err, HomError::ValidationCapExceeded { .. }));
    }

    #[test]
    fn sampled_hom_rejected_by_witness() {
        let z4 = catalog("cyclic", 4).unwrap();
        let hom =
            hom_from_table_sampled(&z4, &z4, (0..4).collect(), 100, 0).unwrap();
        assert!(matches!(
            first_isomorphism_witness(&hom),
            Err(HomError::SampledAxiomsRejected)
        ));
        assert!(first_isomorphism_witness_with(
            &hom,
            VerifyOpts { allow_sampled: true }
        )
        .is_ok());
    }
}
