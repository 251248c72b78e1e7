//! Group actions on finite point sets: orbits, stabilizers, point fibers,
//! and the orbit-stabilizer counting report.
//!
//! An action is stored as a dense |G| x |X| table and validated in full at
//! construction: every row must be a bijection and the left-action law
//! `(gh).x = g.(h.x)` must hold on every triple. The per-point report then
//! checks that the evaluation-map fibers over the orbit are exactly the
//! left cosets of the stabilizer, all of the same size.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{left_cosets, FiniteGroup, GroupError, Subgroup};
use crate::hom::VerifyOpts;

/// Default cap on the |G|^2 * |X| validation loop.
pub const ACTION_VALIDATION_CAP_DEFAULT: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("row {g} of the action table is not a bijection of the point set")]
    NotABijection { g: usize },
    /// First violating triple in lexicographic order:
    /// table[gh][x] != table[g][table[h][x]].
    #[error("not an action: law fails at (g={g}, h={h}, x={x})")]
    NotAnAction { g: usize, h: usize, x: usize },
    #[error("validation work {work} exceeds the cap {cap}")]
    ValidationCapExceeded { work: u128, cap: u128 },
    #[error("natural actions need a permutation-backed group")]
    WrongBackend,
    #[error("point {point} out of range for set of size {set_size}")]
    PointOutOfRange { point: usize, set_size: usize },
    #[error("action table has {got} rows, expected {expected}")]
    RowCountMismatch { expected: usize, got: usize },
    #[error("row {g} has {got} entries, expected {expected}")]
    RowLengthMismatch { g: usize, expected: usize, got: usize },
    #[error("group axioms were only sampled, not verified; pass the explicit override to proceed")]
    SampledAxiomsRejected,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A validated left action of a finite group on points `0..set_size`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    set_size: usize,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn apply(&self, g: usize, x: usize) -> Result<usize, ActionError> {
        self.group.check_index(g)?;
        self.check_point(x)?;
        Ok(self.table[g][x])
    }

    fn check_point(&self, x: usize) -> Result<(), ActionError> {
        if x >= self.set_size {
            return Err(ActionError::PointOutOfRange { point: x, set_size: self.set_size });
        }
        Ok(())
    }
}

/// Validates a dense action table against all three action invariants.
pub fn action_from_table(
    group: &Arc<FiniteGroup>,
    set_size: usize,
    table: Vec<Vec<usize>>,
) -> Result<GroupAction, ActionError> {
    action_from_table_with_cap(group, set_size, table, ACTION_VALIDATION_CAP_DEFAULT)
}

pub fn action_from_table_with_cap(
    group: &Arc<FiniteGroup>,
    set_size: usize,
    table: Vec<Vec<usize>>,
    cap: u128,
) -> Result<GroupAction, ActionError> {
    let n = group.order();
    if table.len() != n {
        return Err(ActionError::RowCountMismatch { expected: n, got: table.len() });
    }
    for (g, row) in table.iter().enumerate() {
        if row.len() != set_size {
            return Err(ActionError::RowLengthMismatch {
                g,
                expected: set_size,
                got: row.len(),
            });
        }
        let mut seen = vec![false; set_size];
        for &y in row {
            if y >= set_size || seen[y] {
                return Err(ActionError::NotABijection { g });
            }
            seen[y] = true;
        }
    }

    let work = (n as u128) * (n as u128) * (set_size as u128);
    if work > cap {
        return Err(ActionError::ValidationCapExceeded { work, cap });
    }
    // Identity row first (also implied by the law on (0, 0, x)).
    for x in 0..set_size {
        if table[0][x] != x {
            return Err(ActionError::NotAnAction { g: 0, h: 0, x });
        }
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.op_unchecked(g, h);
            for x in 0..set_size {
                if table[gh][x] != table[g][table[h][x]] {
                    return Err(ActionError::NotAnAction { g, h, x });
                }
            }
        }
    }

    Ok(GroupAction { group: Arc::clone(group), set_size, table })
}

/// The defining action of a permutation-backed group on its own points.
pub fn natural_action(group: &Arc<FiniteGroup>) -> Result<GroupAction, ActionError> {
    let degree = group.permutation_degree().ok_or(ActionError::WrongBackend)?;
    let table: Vec<Vec<usize>> = (0..group.order())
        .map(|g| {
            group
                .perm_of(g)
                .expect("permutation backend")
                .iter()
                .map(|&x| x as usize)
                .collect()
        })
        .collect();
    action_from_table(group, degree, table)
}

/// All images of a point, deduplicated and sorted.
pub fn orbit(action: &GroupAction, x: usize) -> Result<Vec<usize>, ActionError> {
    action.check_point(x)?;
    let mut points: Vec<usize> =
        (0..action.group.order()).map(|g| action.table[g][x]).collect();
    points.sort_unstable();
    points.dedup();
    Ok(points)
}

/// The subgroup of elements fixing a point; this is the kernel of the
/// evaluation map `g -> g.x` in the fiber-over-basepoint sense.
pub fn stabilizer(action: &GroupAction, x: usize) -> Result<Subgroup, ActionError> {
    action.check_point(x)?;
    let members: Vec<usize> =
        (0..action.group.order()).filter(|&g| action.table[g][x] == x).collect();
    Ok(Subgroup::from_members(&action.group, &members)?)
}

/// The set of group elements sending `x` to `y`; empty iff `y` is outside
/// the orbit of `x`. A nonempty fiber is verified to be the left coset
/// `g0.Stab(x)` of its first member.
pub fn action_fiber(
    action: &GroupAction,
    x: usize,
    y: usize,
) -> Result<Vec<usize>, ActionError> {
    action.check_point(x)?;
    action.check_point(y)?;
    let members: Vec<usize> =
        (0..action.group.order()).filter(|&g| action.table[g][x] == y).collect();
    if let Some(&g0) = members.first() {
        let stab = stabilizer(action, x)?;
        let mut coset: Vec<usize> = stab
            .members()
            .iter()
            .map(|&s| action.group.op_unchecked(g0, s))
            .collect();
        coset.sort_unstable();
        debug_assert_eq!(members, coset, "fiber must equal a stabilizer coset");
    }
    Ok(members)
}

/// Per-point orbit-stabilizer verification: the counting identity, equal
/// fiber sizes, and the fiber-family-equals-coset-blocks statement.
#[derive(Debug, Clone)]
pub struct OrbitStabilizerReport {
    pub point: usize,
    pub orbit: Vec<usize>,
    pub stabilizer: Subgroup,
    /// Orbit point -> the group elements sending the base point there.
    pub fibers: BTreeMap<usize, Vec<usize>>,
    pub counting_identity_holds: bool,
    /// Human-readable descriptions of any failed checks; empty on success.
    /// A nonempty list indicates a library bug, not a caller error.
    pub failures: Vec<String>,
}

pub fn verify_orbit_stabilizer(
    action: &GroupAction,
    x: usize,
) -> Result<OrbitStabilizerReport, ActionError> {
    verify_orbit_stabilizer_with(action, x, VerifyOpts::default())
}

pub fn verify_orbit_stabilizer_with(
    action: &GroupAction,
    x: usize,
    opts: VerifyOpts,
) -> Result<OrbitStabilizerReport, ActionError> {
    if !opts.allow_sampled && action.group.is_assoc_sampled() {
        return Err(ActionError::SampledAxiomsRejected);
    }
    let orbit_points = orbit(action, x)?;
    let stab = stabilizer(action, x)?;
    let mut fibers = BTreeMap::new();
    for &y in &orbit_points {
        fibers.insert(y, action_fiber(action, x, y)?);
    }

    let mut failures = Vec::new();
    let group_order = action.group.order();
    if orbit_points.len() * stab.order() != group_order {
        failures.push(format!(
            "counting identity fails at point {x}: |orbit| {} * |stabilizer| {} != |G| {group_order}",
            orbit_points.len(),
            stab.order(),
        ));
    }
    for (&y, fiber) in &fibers {
        if fiber.len() != stab.order() {
            failures.push(format!(
                "fiber over {y} has size {} != |stabilizer| {}",
                fiber.len(),
                stab.order(),
            ));
        }
    }
    match fibers.get(&x) {
        Some(f) if f.as_slice() == stab.members() => {}
        _ => failures.push(format!(
            "fiber over the base point {x} does not equal the stabilizer member set"
        )),
    }
    match left_cosets(&action.group, &stab) {
        Ok(partition) => {
            let mut fiber_family: Vec<Vec<usize>> = fibers.values().cloned().collect();
            fiber_family.sort();
            let mut blocks: Vec<Vec<usize>> = partition.blocks().to_vec();
            blocks.sort();
            if fiber_family != blocks {
                failures.push(format!(
                    "fiber family at point {x} does not match the left-coset blocks of the stabilizer"
                ));
            }
        }
        Err(e) => failures.push(format!("coset partition of the stabilizer failed: {e}")),
    }

    Ok(OrbitStabilizerReport {
        point: x,
        orbit: orbit_points,
        stabilizer: stab,
        fibers,
        counting_identity_holds: failures.is_empty(),
        failures,
    })
}
