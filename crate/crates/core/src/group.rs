//! Finite groups over dense element indices, with subgroups and coset
//! partitions.
//!
//! Elements are indices `0..order`, identity pinned at index 0. Two backends
//! exist: an explicit Cayley table, and a permutation group enumerated by
//! breadth-first closure from its generators. Every constructor verifies the
//! group axioms before returning; associativity is exhaustive up to a
//! configurable order cap and sampled (and flagged) above it.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::sample::SplitMix64;

/// Order threshold below which a dense op table is materialized for
/// permutation-backed groups. Above it, products are computed by composing
/// permutations and looking the result up.
const OP_TABLE_MAX_ORDER: usize = 2048;

/// Construction-time limits. Defaults match the documented desk-scale caps.
#[derive(Debug, Clone)]
pub struct GroupConfig {
    /// Exhaustive associativity checking up to this order; sampled above.
    pub assoc_exhaustive_cap: usize,
    /// Number of sampled triples when above the exhaustive cap.
    pub assoc_samples: usize,
    /// Hard cap on group order for enumeration and products.
    pub order_cap: usize,
    /// Seed for the sampled-associativity triple stream.
    pub seed: u64,
}

impl Default for GroupConfig {
    fn default() -> Self {
        Self {
            assoc_exhaustive_cap: 512,
            assoc_samples: 10_000,
            order_cap: 10_000,
            seed: 0,
        }
    }
}

/// Which group axiom a failed construction violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupAxiom {
    Closure,
    Identity,
    Inverses,
    Associativity,
}

impl fmt::Display for GroupAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GroupAxiom::Closure => "closure",
            GroupAxiom::Identity => "identity",
            GroupAxiom::Inverses => "inverses",
            GroupAxiom::Associativity => "associativity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    /// A group axiom failed; `witness` holds the offending indices
    /// (a pair for closure, a single element for inverses, a triple for
    /// associativity).
    #[error("not a group: {axiom} axiom fails at witness {witness:?}")]
    NotAGroup { axiom: GroupAxiom, witness: Vec<usize> },
    #[error("generator {generator} is not a permutation of 0..{degree}")]
    NotAPermutation { generator: usize, degree: usize },
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("not a subgroup: {reason}")]
    NotASubgroup { reason: String },
    #[error("unknown catalog entry {name:?} with parameter {parameter}")]
    UnknownCatalogEntry { name: String, parameter: i64 },
}

/// How thoroughly associativity was verified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocCheck {
    Exhaustive,
    /// Too large for the exhaustive cap: only `samples` random triples were
    /// checked. Theorem-verification entry points reject such groups unless
    /// explicitly overridden.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug)]
enum Backend {
    Cayley,
    Permutation(PermData),
}

#[derive(Debug)]
struct PermData {
    degree: usize,
    generators: Vec<Vec<u32>>,
    /// Element index -> image array of the permutation.
    perms: Vec<Vec<u32>>,
    index_of: HashMap<Vec<u32>, u32>,
    /// Element index -> word in generator indices whose left-to-right
    /// product is the element. Identity has the empty word.
    words: Vec<Vec<u32>>,
}

/// A finite group with a total, verified multiplication on indices
/// `0..order`, identity at index 0.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major order x order product table, when materialized.
    op_table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    backend: Backend,
    labels: Vec<String>,
    assoc_check: AssocCheck,
}

impl FiniteGroup {
    /// Builds a group from an explicit Cayley table, relabeling the identity
    /// to index 0 if needed. All four axioms are verified.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Arc<Self>, GroupError> {
        Self::from_cayley_table_with(table, &GroupConfig::default())
    }

    pub fn from_cayley_table_with(
        table: &[Vec<usize>],
        config: &GroupConfig,
    ) -> Result<Arc<Self>, GroupError> {
        Self::from_cayley_impl(table, labels_from_indices(table.len()), config)
    }

    pub(crate) fn from_cayley_table_labeled(
        table: &[Vec<usize>],
        labels: Vec<String>,
        config: &GroupConfig,
    ) -> Result<Arc<Self>, GroupError> {
        Self::from_cayley_impl(table, labels, config)
    }

    fn from_cayley_impl(
        table: &[Vec<usize>],
        labels: Vec<String>,
        config: &GroupConfig,
    ) -> Result<Arc<Self>, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotAGroup {
                axiom: GroupAxiom::Identity,
                witness: vec![],
            });
        }
        if n > config.order_cap {
            return Err(GroupError::OrderCapExceeded { cap: config.order_cap });
        }
        // Closure: square shape and entries in range.
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotAGroup {
                    axiom: GroupAxiom::Closure,
                    witness: vec![g, row.len()],
                });
            }
            for (h, &e) in row.iter().enumerate() {
                if e >= n {
                    return Err(GroupError::NotAGroup {
                        axiom: GroupAxiom::Closure,
                        witness: vec![g, h, e],
                    });
                }
            }
        }
        // Locate the two-sided identity.
        let identity = (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g));
        let Some(identity) = identity else {
            return Err(GroupError::NotAGroup {
                axiom: GroupAxiom::Identity,
                witness: vec![],
            });
        };
        // Relabel so the identity sits at index 0 (swap 0 <-> identity).
        let mut flat = vec![0u32; n * n];
        let relabel = |x: usize| -> usize {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut new_labels = labels;
        if identity != 0 {
            new_labels.swap(0, identity);
        }
        for a in 0..n {
            for b in 0..n {
                // relabel is an involution, so it is its own inverse.
                flat[a * n + b] = relabel(table[relabel(a)][relabel(b)]) as u32;
            }
        }
        let group = Self::finalize(n, Some(flat), Backend::Cayley, new_labels, config)?;
        Ok(Arc::new(group))
    }

    /// Enumerates the group generated by permutations of `0..degree`.
    ///
    /// Elements are discovered breadth-first from the identity, applying
    /// generators in input order, so the element table is deterministic for
    /// a fixed input. Each element records the generator word that produced
    /// it.
    pub fn from_permutation_generators(
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<Arc<Self>, GroupError> {
        Self::from_permutation_generators_with(degree, generators, &GroupConfig::default())
    }

    pub fn from_permutation_generators_with(
        degree: usize,
        generators: &[Vec<usize>],
        config: &GroupConfig,
    ) -> Result<Arc<Self>, GroupError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::NotAPermutation { generator: i, degree });
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(GroupError::NotAPermutation { generator: i, degree });
                }
                seen[img] = true;
            }
            gens.push(g.iter().map(|&x| x as u32).collect::<Vec<u32>>());
        }

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut perms = vec![identity.clone()];
        let mut words: Vec<Vec<u32>> = vec![vec![]];
        let mut index_of = HashMap::new();
        index_of.insert(identity, 0u32);

        let mut cursor = 0;
        while cursor < perms.len() {
            for (gi, gen) in gens.iter().enumerate() {
                // Right-multiply: apply the generator first, the element after.
                let candidate: Vec<u32> =
                    (0..degree).map(|x| perms[cursor][gen[x] as usize]).collect();
                if !index_of.contains_key(&candidate) {
                    if perms.len() >= config.order_cap {
                        return Err(GroupError::OrderCapExceeded { cap: config.order_cap });
                    }
                    let idx = perms.len() as u32;
                    index_of.insert(candidate.clone(), idx);
                    let mut word = words[cursor].clone();
                    word.push(gi as u32);
                    words.push(word);
                    perms.push(candidate);
                }
            }
            cursor += 1;
        }

        let data = PermData { degree, generators: gens, perms, index_of, words };
        Self::finalize_perm(data, config).map(Arc::new)
    }

    fn finalize_perm(data: PermData, config: &GroupConfig) -> Result<Self, GroupError> {
        let n = data.perms.len();
        let labels = data.perms.iter().map(|p| cycle_notation(p)).collect();
        let op_table = if n <= OP_TABLE_MAX_ORDER {
            let mut flat = vec![0u32; n * n];
            for g in 0..n {
                for h in 0..n {
                    flat[g * n + h] = compose_index(&data, g, h);
                }
            }
            Some(flat)
        } else {
            None
        };
        Self::finalize(n, op_table, Backend::Permutation(data), labels, config)
    }

    /// Shared tail of every constructor: inverse table, identity row/column,
    /// and the associativity check (exhaustive or sampled per config).
    fn finalize(
        order: usize,
        op_table: Option<Vec<u32>>,
        backend: Backend,
        labels: Vec<String>,
        config: &GroupConfig,
    ) -> Result<Self, GroupError> {
        let mut group = Self {
            order,
            op_table,
            inverse: vec![],
            backend,
            labels,
            assoc_check: AssocCheck::Exhaustive,
        };

        // Identity law at index 0.
        for g in 0..order {
            if group.op_unchecked(0, g) != g || group.op_unchecked(g, 0) != g {
                return Err(GroupError::NotAGroup {
                    axiom: GroupAxiom::Identity,
                    witness: vec![g],
                });
            }
        }

        // Two-sided inverses. Permutation backends invert the image array
        // directly; table backends scan the row.
        let mut inverse = vec![u32::MAX; order];
        for g in 0..order {
            let candidate = match &group.backend {
                Backend::Permutation(data) if group.op_table.is_none() => {
                    let perm = &data.perms[g];
                    let mut inverted = vec![0u32; data.degree];
                    for (x, &y) in perm.iter().enumerate() {
                        inverted[y as usize] = x as u32;
                    }
                    data.index_of.get(&inverted).map(|&i| i as usize)
                }
                _ => (0..order).find(|&h| group.op_unchecked(g, h) == 0),
            };
            match candidate {
                Some(h) if group.op_unchecked(g, h) == 0 && group.op_unchecked(h, g) == 0 => {
                    inverse[g] = h as u32;
                }
                _ => {
                    return Err(GroupError::NotAGroup {
                        axiom: GroupAxiom::Inverses,
                        witness: vec![g],
                    })
                }
            }
        }
        group.inverse = inverse;

        // Associativity: exhaustive up to the cap, sampled and flagged above.
        if order <= config.assoc_exhaustive_cap {
            for a in 0..order {
                for b in 0..order {
                    let ab = group.op_unchecked(a, b);
                    for c in 0..order {
                        if group.op_unchecked(ab, c)
                            != group.op_unchecked(a, group.op_unchecked(b, c))
                        {
                            return Err(GroupError::NotAGroup {
                                axiom: GroupAxiom::Associativity,
                                witness: vec![a, b, c],
                            });
                        }
                    }
                }
            }
            group.assoc_check = AssocCheck::Exhaustive;
        } else {
            let mut rng = SplitMix64::new(config.seed);
            for _ in 0..config.assoc_samples {
                let a = rng.next_index(order);
                let b = rng.next_index(order);
                let c = rng.next_index(order);
                let ab = group.op_unchecked(a, b);
                if group.op_unchecked(ab, c) != group.op_unchecked(a, group.op_unchecked(b, c)) {
                    return Err(GroupError::NotAGroup {
                        axiom: GroupAxiom::Associativity,
                        witness: vec![a, b, c],
                    });
                }
            }
            group.assoc_check =
                AssocCheck::Sampled { samples: config.assoc_samples, seed: config.seed };
        }

        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// True when associativity was only sampled, not proven exhaustively.
    pub fn is_assoc_sampled(&self) -> bool {
        matches!(self.assoc_check, AssocCheck::Sampled { .. })
    }

    pub fn assoc_check(&self) -> AssocCheck {
        self.assoc_check
    }

    /// Group product of two element indices.
    pub fn op(&self, g: usize, h: usize) -> Result<usize, GroupError> {
        self.check_index(g)?;
        self.check_index(h)?;
        Ok(self.op_unchecked(g, h))
    }

    /// Inverse of an element index.
    pub fn inverse(&self, g: usize) -> Result<usize, GroupError> {
        self.check_index(g)?;
        Ok(self.inverse[g] as usize)
    }

    pub(crate) fn check_index(&self, g: usize) -> Result<(), GroupError> {
        if g >= self.order {
            return Err(GroupError::IndexOutOfRange { index: g, order: self.order });
        }
        Ok(())
    }

    pub(crate) fn op_unchecked(&self, g: usize, h: usize) -> usize {
        if let Some(table) = &self.op_table {
            return table[g * self.order + h] as usize;
        }
        match &self.backend {
            Backend::Cayley => unreachable!("cayley backend always has a table"),
            Backend::Permutation(data) => compose_index(data, g, h) as usize,
        }
    }

    pub(crate) fn inverse_unchecked(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, g: usize) -> Result<usize, GroupError> {
        self.check_index(g)?;
        let mut acc = g;
        let mut k = 1;
        while acc != 0 {
            acc = self.op_unchecked(acc, g);
            k += 1;
        }
        Ok(k)
    }

    /// Display label for an element (cycle notation for permutation-backed
    /// groups, plain indices otherwise).
    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    /// Degree of the underlying permutation representation, if any.
    pub fn permutation_degree(&self) -> Option<usize> {
        match &self.backend {
            Backend::Cayley => None,
            Backend::Permutation(data) => Some(data.degree),
        }
    }

    /// Image arrays of all elements for permutation-backed groups.
    pub fn permutations(&self) -> Option<Vec<Vec<usize>>> {
        match &self.backend {
            Backend::Cayley => None,
            Backend::Permutation(data) => Some(
                data.perms
                    .iter()
                    .map(|p| p.iter().map(|&x| x as usize).collect())
                    .collect(),
            ),
        }
    }

    /// Number of generators for permutation-backed groups.
    pub fn generator_count(&self) -> Option<usize> {
        match &self.backend {
            Backend::Cayley => None,
            Backend::Permutation(data) => Some(data.generators.len()),
        }
    }

    /// Generator words for all elements, when the backend recorded them
    /// during enumeration.
    pub(crate) fn words(&self) -> Option<&[Vec<u32>]> {
        match &self.backend {
            Backend::Cayley => None,
            Backend::Permutation(data) => Some(&data.words),
        }
    }

    /// Full product table row for an element, used by natural actions.
    pub(crate) fn perm_of(&self, g: usize) -> Option<&[u32]> {
        match &self.backend {
            Backend::Cayley => None,
            Backend::Permutation(data) => Some(&data.perms[g]),
        }
    }
}

fn labels_from_indices(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn compose_index(data: &PermData, g: usize, h: usize) -> u32 {
    let degree = data.degree;
    let pg = &data.perms[g];
    let ph = &data.perms[h];
    // (g.h)(x) = g(h(x)): apply h first.
    let composed: Vec<u32> = (0..degree).map(|x| pg[ph[x] as usize]).collect();
    *data
        .index_of
        .get(&composed)
        .expect("closure is complete: products of enumerated elements are enumerated")
}

/// Cycle notation for an image array, fixed points omitted; "()" is the
/// identity.
pub fn cycle_notation(perm: &[u32]) -> String {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut next = perm[start] as usize;
        while next != start {
            seen[next] = true;
            cycle.push(next);
            next = perm[next] as usize;
        }
        out.push('(');
        out.push_str(
            &cycle.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A verified subgroup: contains the identity, closed under the parent's
/// product and inverse.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    /// Verifies the subgroup axioms for an explicit member set.
    pub fn from_members(
        parent: &Arc<FiniteGroup>,
        members: &[usize],
    ) -> Result<Self, GroupError> {
        let mut sorted: Vec<usize> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &m in &sorted {
            parent.check_index(m)?;
        }
        if sorted.binary_search(&0).is_err() {
            return Err(GroupError::NotASubgroup {
                reason: "missing the identity element".into(),
            });
        }
        for &a in &sorted {
            let inv = parent.inverse_unchecked(a);
            if sorted.binary_search(&inv).is_err() {
                return Err(GroupError::NotASubgroup {
                    reason: format!("inverse of {a} is {inv}, which is not a member"),
                });
            }
            for &b in &sorted {
                let ab = parent.op_unchecked(a, b);
                if sorted.binary_search(&ab).is_err() {
                    return Err(GroupError::NotASubgroup {
                        reason: format!("product of {a} and {b} is {ab}, which is not a member"),
                    });
                }
            }
        }
        if parent.order() % sorted.len() != 0 {
            // Unreachable once closure holds; kept as a cheap self-check.
            return Err(GroupError::NotASubgroup {
                reason: format!(
                    "order {} does not divide parent order {}",
                    sorted.len(),
                    parent.order()
                ),
            });
        }
        Ok(Self { parent: Arc::clone(parent), members: sorted })
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn is_subgroup_of(&self, group: &Arc<FiniteGroup>) -> bool {
        Arc::ptr_eq(&self.parent, group)
    }
}

/// Smallest subgroup containing the seed elements, computed by closure
/// iteration under product and inverse.
pub fn subgroup_generated(
    group: &Arc<FiniteGroup>,
    seeds: &[usize],
) -> Result<Subgroup, GroupError> {
    for &s in seeds {
        group.check_index(s)?;
    }
    let mut members = vec![false; group.order()];
    members[0] = true;
    let mut worklist: Vec<usize> = vec![0];
    for &s in seeds {
        if !members[s] {
            members[s] = true;
            worklist.push(s);
        }
    }
    let mut cursor = 0;
    while cursor < worklist.len() {
        let a = worklist[cursor];
        cursor += 1;
        let inv = group.inverse_unchecked(a);
        if !members[inv] {
            members[inv] = true;
            worklist.push(inv);
        }
        // Snapshot length: products with elements added later are reached
        // when those elements come up in the worklist themselves.
        for i in 0..worklist.len() {
            let b = worklist[i];
            for (x, y) in [(a, b), (b, a)] {
                let p = group.op_unchecked(x, y);
                if !members[p] {
                    members[p] = true;
                    worklist.push(p);
                }
            }
        }
    }
    let member_indices: Vec<usize> =
        (0..group.order()).filter(|&g| members[g]).collect();
    Subgroup::from_members(group, &member_indices)
}

/// Which side the coset representatives multiply on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
}

/// A partition of a group into cosets of a subgroup. Blocks are discovered
/// in ascending order of their least element, so block 0 is the subgroup
/// itself and representatives are block minima.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    parent: Arc<FiniteGroup>,
    subgroup: Subgroup,
    blocks: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    block_of: Vec<usize>,
    side: CosetSide,
}

impl CosetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn block_of(&self, g: usize) -> Result<usize, GroupError> {
        self.parent.check_index(g)?;
        Ok(self.block_of[g])
    }

    pub(crate) fn block_of_unchecked(&self, g: usize) -> usize {
        self.block_of[g]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn side(&self) -> CosetSide {
        self.side
    }
}

/// Partition of `group` into left cosets `gK`.
pub fn left_cosets(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
) -> Result<CosetPartition, GroupError> {
    cosets(group, subgroup, CosetSide::Left)
}

/// Partition of `group` into right cosets `Kg`.
pub fn right_cosets(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
) -> Result<CosetPartition, GroupError> {
    cosets(group, subgroup, CosetSide::Right)
}

pub fn cosets(
    group: &Arc<FiniteGroup>,
    subgroup: &Subgroup,
    side: CosetSide,
) -> Result<CosetPartition, GroupError> {
    if !subgroup.is_subgroup_of(group) {
        return Err(GroupError::NotASubgroup {
            reason: "subgroup was built over a different parent group".into(),
        });
    }
    // Re-verify closure against the parent rather than trusting the caller.
    let subgroup = Subgroup::from_members(group, subgroup.members())?;

    let n = group.order();
    let k = subgroup.order();
    let mut block_of = vec![usize::MAX; n];
    let mut blocks = Vec::with_capacity(n / k);
    let mut representatives = Vec::with_capacity(n / k);
    for g in 0..n {
        if block_of[g] != usize::MAX {
            continue;
        }
        let mut block: Vec<usize> = subgroup
            .members()
            .iter()
            .map(|&s| match side {
                CosetSide::Left => group.op_unchecked(g, s),
                CosetSide::Right => group.op_unchecked(s, g),
            })
            .collect();
        block.sort_unstable();
        block.dedup();
        debug_assert_eq!(block.len(), k, "cosets of a verified subgroup have size |K|");
        let id = blocks.len();
        for &m in &block {
            debug_assert_eq!(block_of[m], usize::MAX, "cosets are disjoint");
            block_of[m] = id;
        }
        representatives.push(block[0]);
        blocks.push(block);
    }
    debug_assert_eq!(blocks.len() * k, n, "Lagrange counting identity");
    Ok(CosetPartition {
        parent: Arc::clone(group),
        subgroup,
        blocks,
        representatives,
        block_of,
        side,
    })
}

/// Direct product with pairs flattened row-major: `(g, h)` becomes index
/// `g * |H| + h`. When both factors are permutation-backed the product is
/// too (acting on the disjoint union of the two point sets), which keeps
/// generator words available for homomorphism enumeration.
pub fn direct_product(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
) -> Result<Arc<FiniteGroup>, GroupError> {
    direct_product_with(g, h, &GroupConfig::default())
}

pub fn direct_product_with(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    config: &GroupConfig,
) -> Result<Arc<FiniteGroup>, GroupError> {
    let ng = g.order();
    let nh = h.order();
    let order = ng.checked_mul(nh).filter(|&o| o <= config.order_cap);
    let Some(order) = order else {
        return Err(GroupError::OrderCapExceeded { cap: config.order_cap });
    };

    match (&g.backend, &h.backend) {
        (Backend::Permutation(pg), Backend::Permutation(ph)) => {
            let degree = pg.degree + ph.degree;
            let lift_g = |p: &[u32]| -> Vec<u32> {
                p.iter()
                    .copied()
                    .chain(pg.degree as u32..degree as u32)
                    .collect()
            };
            let lift_h = |p: &[u32]| -> Vec<u32> {
                (0..pg.degree as u32)
                    .chain(p.iter().map(|&x| x + pg.degree as u32))
                    .collect()
            };
            let mut generators: Vec<Vec<u32>> =
                pg.generators.iter().map(|p| lift_g(p)).collect();
            generators.extend(ph.generators.iter().map(|p| lift_h(p)));

            let mut perms = Vec::with_capacity(order);
            let mut words = Vec::with_capacity(order);
            let mut index_of = HashMap::with_capacity(order);
            for a in 0..ng {
                for b in 0..nh {
                    let mut perm = Vec::with_capacity(degree);
                    perm.extend_from_slice(&pg.perms[a]);
                    perm.extend(ph.perms[b].iter().map(|&x| x + pg.degree as u32));
                    index_of.insert(perm.clone(), (a * nh + b) as u32);
                    perms.push(perm);
                    // Factor words commute across the disjoint union, so the
                    // concatenation multiplies out to exactly (a, b).
                    let mut word = pg.words[a].clone();
                    word.extend(ph.words[b].iter().map(|&w| w + pg.generators.len() as u32));
                    words.push(word);
                }
            }
            let data = PermData { degree, generators, perms, index_of, words };
            FiniteGroup::finalize_perm(data, config).map(Arc::new)
        }
        _ => {
            let mut table = vec![vec![0usize; order]; order];
            for a1 in 0..ng {
                for b1 in 0..nh {
                    for a2 in 0..ng {
                        for b2 in 0..nh {
                            let x = a1 * nh + b1;
                            let y = a2 * nh + b2;
                            table[x][y] =
                                g.op_unchecked(a1, a2) * nh + h.op_unchecked(b1, b2);
                        }
                    }
                }
            }
            let labels = (0..ng)
                .flat_map(|a| {
                    (0..nh).map(move |b| (a, b))
                })
                .map(|(a, b)| format!("({},{})", g.label(a), h.label(b)))
                .collect();
            FiniteGroup::from_cayley_impl(&table, labels, config)
        }
    }
}

/// Named groups with documented canonical element ordering. All entries are
/// permutation-backed and enumerated breadth-first from their generators:
///
/// - `cyclic(n)`: generated by the n-cycle, so index i is rotation by i;
/// - `symmetric(n)`: generated by the transposition (0 1) and the n-cycle;
/// - `dihedral(n)`, n >= 3: rotation and reflection on n vertices (order 2n);
///   `dihedral(1)` and `dihedral(2)` are the degenerate groups of order 2
///   and 4 realized faithfully on 2 and 4 points;
/// - `klein4`: the two double transpositions on 4 points;
/// - `quaternion8`: left translations on the 8 unit quaternions (parameter
///   ignored, as for klein4).
pub fn catalog(name: &str, parameter: i64) -> Result<Arc<FiniteGroup>, GroupError> {
    catalog_with(name, parameter, &GroupConfig::default())
}

pub fn catalog_with(
    name: &str,
    parameter: i64,
    config: &GroupConfig,
) -> Result<Arc<FiniteGroup>, GroupError> {
    let bad = || GroupError::UnknownCatalogEntry { name: name.to_string(), parameter };
    match name {
        "cyclic" => {
            let n = usize::try_from(parameter).map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            if n == 1 {
                return FiniteGroup::from_permutation_generators_with(1, &[], config);
            }
            let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            FiniteGroup::from_permutation_generators_with(n, &[cycle], config)
        }
        "symmetric" => {
            let n = usize::try_from(parameter).map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            let mut factorial: usize = 1;
            for k in 2..=n {
                factorial = factorial
                    .checked_mul(k)
                    .ok_or(GroupError::OrderCapExceeded { cap: config.order_cap })?;
                if factorial > config.order_cap {
                    return Err(GroupError::OrderCapExceeded { cap: config.order_cap });
                }
            }
            match n {
                1 => FiniteGroup::from_permutation_generators_with(1, &[], config),
                2 => FiniteGroup::from_permutation_generators_with(2, &[vec![1, 0]], config),
                _ => {
                    let mut swap: Vec<usize> = (0..n).collect();
                    swap.swap(0, 1);
                    let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
                    FiniteGroup::from_permutation_generators_with(n, &[swap, cycle], config)
                }
            }
        }
        "dihedral" => {
            let n = usize::try_from(parameter).map_err(|_| bad())?;
            match n {
                0 => Err(bad()),
                1 => FiniteGroup::from_permutation_generators_with(2, &[vec![1, 0]], config),
                2 => FiniteGroup::from_permutation_generators_with(
                    4,
                    &[vec![1, 0, 2, 3], vec![0, 1, 3, 2]],
                    config,
                ),
                _ => {
                    let rotation: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
                    let reflection: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
                    FiniteGroup::from_permutation_generators_with(
                        n,
                        &[rotation, reflection],
                        config,
                    )
                }
            }
        }
        "klein4" => FiniteGroup::from_permutation_generators_with(
            4,
            &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
            config,
        ),
        "quaternion8" => {
            // Unit quaternions {1, i, j, k, -1, -i, -j, -k} as indices 0..8;
            // generators are left translation by i and by j.
            let left_i = vec![1, 4, 3, 6, 5, 0, 7, 2];
            let left_j = vec![2, 7, 4, 1, 6, 3, 0, 5];
            FiniteGroup::from_permutation_generators_with(8, &[left_i, left_j], config)
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_cayley_group() {
        let g = FiniteGroup::from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.op(0, 0).unwrap(), 0);
    }

    #[test]
    fn z4_from_table() {
        let g = FiniteGroup::from_cayley_table(&z_table(4)).unwrap();
        assert_eq!(g.order(), 4);
        for a in 0..4 {
            let inv = g.inverse(a).unwrap();
            assert_eq!(g.op(a, inv).unwrap(), 0);
            assert_eq!(g.op(inv, a).unwrap(), 0);
        }
        assert_eq!(g.op(3, 2).unwrap(), 1);
    }

    #[test]
    fn missing_inverse_is_rejected() {
        let err = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        match err {
            GroupError::NotAGroup { axiom, witness } => {
                assert_eq!(axiom, GroupAxiom::Inverses);
                assert_eq!(witness, vec![1]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry_is_a_closure_failure() {
        let err = FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 7]]).unwrap_err();
        match err {
            GroupError::NotAGroup { axiom, .. } => assert_eq!(axiom, GroupAxiom::Closure),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nonassociative_table_is_rejected() {
        // Z5 addition with one corrupted cell away from the identity row and
        // the inverse pairs: identity and inverses still hold, associativity
        // does not.
        let mut table = z_table(5);
        table[2][4] = 3;
        let err = FiniteGroup::from_cayley_table(&table).unwrap_err();
        match err {
            GroupError::NotAGroup { axiom, witness } => {
                assert_eq!(axiom, GroupAxiom::Associativity);
                assert_eq!(witness.len(), 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn identity_relabeled_to_index_zero() {
        // Z2 with the identity at index 1.
        let table = [[0, 1], [1, 0]];
        let swapped = vec![vec![table[1][1], table[1][0]], vec![table[0][1], table[0][0]]];
        // swapped is op(a,b) with labels 0<->1 exchanged: identity is "1".
        let g = FiniteGroup::from_cayley_table(&swapped).unwrap();
        assert_eq!(g.op(0, 0).unwrap(), 0);
        assert_eq!(g.op(1, 1).unwrap(), 0);
    }

    #[test]
    fn s3_from_transpositions() {
        let g =
            FiniteGroup::from_permutation_generators(3, &[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(g.order(), 6);
        // Transpositions are involutions.
        let perms = g.permutations().unwrap();
        for (i, p) in perms.iter().enumerate() {
            let moved = p.iter().enumerate().filter(|(x, &y)| *x != y).count();
            if moved == 2 {
                assert_eq!(g.inverse(i).unwrap(), i);
            }
        }
    }

    #[test]
    fn four_cycle_generates_z4() {
        let g = FiniteGroup::from_permutation_generators(4, &[vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(1).unwrap(), 4);
    }

    #[test]
    fn no_generators_is_trivial() {
        let g = FiniteGroup::from_permutation_generators(2, &[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn repeated_image_rejected() {
        let err = FiniteGroup::from_permutation_generators(3, &[vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NotAPermutation { generator: 0, .. }));
    }

    #[test]
    fn order_cap_enforced() {
        let config = GroupConfig { order_cap: 5, ..GroupConfig::default() };
        let err = FiniteGroup::from_permutation_generators_with(
            3,
            &[vec![1, 0, 2], vec![0, 2, 1]],
            &config,
        )
        .unwrap_err();
        assert!(matches!(err, GroupError::OrderCapExceeded { cap: 5 }));
    }

    #[test]
    fn subgroup_generated_examples() {
        let z6 = catalog("cyclic", 6).unwrap();
        let trivial = subgroup_generated(&z6, &[]).unwrap();
        assert_eq!(trivial.members(), &[0]);

        let by_two = subgroup_generated(&z6, &[2]).unwrap();
        assert_eq!(by_two.members(), &[0, 2, 4]);

        let s3 = catalog("symmetric", 3).unwrap();
        let three_cycle = s3
            .permutations()
            .unwrap()
            .iter()
            .position(|p| p == &vec![1, 2, 0])
            .unwrap();
        let a3 = subgroup_generated(&s3, &[three_cycle]).unwrap();
        assert_eq!(a3.order(), 3);
    }

    #[test]
    fn coset_partitions() {
        let z6 = catalog("cyclic", 6).unwrap();
        let whole = subgroup_generated(&z6, &[1]).unwrap();
        let p = left_cosets(&z6, &whole).unwrap();
        assert_eq!(p.block_count(), 1);
        assert_eq!(p.blocks()[0].len(), 6);

        let trivial = subgroup_generated(&z6, &[]).unwrap();
        let p = left_cosets(&z6, &trivial).unwrap();
        assert_eq!(p.block_count(), 6);

        let by_two = subgroup_generated(&z6, &[2]).unwrap();
        let p = left_cosets(&z6, &by_two).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2, 4], vec![1, 3, 5]]);
        assert_eq!(p.representatives(), &[0, 1]);
    }

    #[test]
    fn subgroup_from_wrong_parent_rejected() {
        let z6 = catalog("cyclic", 6).unwrap();
        let other = catalog("cyclic", 6).unwrap();
        let k = subgroup_generated(&other, &[2]).unwrap();
        assert!(left_cosets(&z6, &k).is_err());
    }

    #[test]
    fn direct_product_trivial_factor() {
        let trivial = catalog("cyclic", 1).unwrap();
        let z5 = catalog("cyclic", 5).unwrap();
        let p = direct_product(&trivial, &z5).unwrap();
        assert_eq!(p.order(), 5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(p.op(a, b).unwrap(), z5.op(a, b).unwrap());
            }
        }
    }

    #[test]
    fn z2_z2_is_klein() {
        let z2 = catalog("cyclic", 2).unwrap();
        let p = direct_product(&z2, &z2).unwrap();
        assert_eq!(p.order(), 4);
        for g in 1..4 {
            assert_eq!(p.inverse(g).unwrap(), g);
        }
    }

    #[test]
    fn z2_z3_has_order_six_element() {
        let z2 = catalog("cyclic", 2).unwrap();
        let z3 = catalog("cyclic", 3).unwrap();
        let p = direct_product(&z2, &z3).unwrap();
        assert_eq!(p.order(), 6);
        // (1,1) sits at index 1*3+1 = 4 and has order lcm(2,3) = 6.
        assert_eq!(p.element_order(4).unwrap(), 6);
    }

    #[test]
    fn product_pairs_are_row_major() {
        let z2 = catalog("cyclic", 2).unwrap();
        let z3 = catalog("cyclic", 3).unwrap();
        let p = direct_product(&z2, &z3).unwrap();
        for a1 in 0..2 {
            for b1 in 0..3 {
                for a2 in 0..2 {
                    for b2 in 0..3 {
                        let x = a1 * 3 + b1;
                        let y = a2 * 3 + b2;
                        let expect =
                            z2.op(a1, a2).unwrap() * 3 + z3.op(b1, b2).unwrap();
                        assert_eq!(p.op(x, y).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(catalog("cyclic", 1).unwrap().order(), 1);
        assert_eq!(catalog("symmetric", 3).unwrap().order(), 6);
        assert_eq!(catalog("symmetric", 4).unwrap().order(), 24);
        assert_eq!(catalog("dihedral", 4).unwrap().order(), 8);
        assert_eq!(catalog("dihedral", 1).unwrap().order(), 2);
        assert_eq!(catalog("dihedral", 2).unwrap().order(), 4);
        assert_eq!(catalog("klein4", 0).unwrap().order(), 4);
        assert_eq!(catalog("quaternion8", 0).unwrap().order(), 8);
    }

    #[test]
    fn quaternion8_has_unique_involution() {
        let q8 = catalog("quaternion8", 0).unwrap();
        let involutions: Vec<usize> =
            (0..8).filter(|&g| g != 0 && q8.element_order(g).unwrap() == 2).collect();
        assert_eq!(involutions.len(), 1);
    }

    #[test]
    fn unknown_catalog_entry() {
        assert!(matches!(
            catalog("alternating", 4),
            Err(GroupError::UnknownCatalogEntry { .. })
        ));
        assert!(matches!(catalog("cyclic", 0), Err(GroupError::UnknownCatalogEntry { .. })));
    }

    #[test]
    fn deterministic_enumeration() {
        let a = catalog("symmetric", 4).unwrap();
        let b = catalog("symmetric", 4).unwrap();
        assert_eq!(a.permutations().unwrap(), b.permutations().unwrap());
        for g in 0..a.order() {
            for h in 0..a.order() {
                assert_eq!(a.op(g, h).unwrap(), b.op(g, h).unwrap());
            }
        }
    }

    #[test]
    fn cycle_notation_format() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0, 2]), "(0 1)");
        assert_eq!(cycle_notation(&[1, 2, 0, 4, 3]), "(0 1 2)(3 4)");
    }

    #[test]
    fn index_out_of_range() {
        let g = catalog("cyclic", 3).unwrap();
        assert!(matches!(g.op(0, 3), Err(GroupError::IndexOutOfRange { .. })));
        assert!(matches!(g.inverse(9), Err(GroupError::IndexOutOfRange { .. })));
    }
}
