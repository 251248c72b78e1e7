//! Computational verification that kernels partition their domains.
//!
//! The library makes one structural fact executable across three settings:
//! a structure-preserving map chops its domain into fibers that are exactly
//! the cosets of its kernel, all of the same size. The pieces:
//!
//! - [`group`]: finite groups (Cayley table or permutation backend),
//!   subgroups, coset partitions, direct products, and a small catalog of
//!   named groups;
//! - [`hom`]: validated homomorphisms, kernels, images, fibers, quotient
//!   groups, the quotient-to-image isomorphism witness, and brute-force
//!   homomorphism enumeration;
//! - [`action`]: validated group actions, orbits, stabilizers, and the
//!   orbit-stabilizer counting report;
//! - [`linear`]: exact linear algebra over Q and GF(p) - rref, null
//!   spaces, affine solution families, and fiber cardinality with
//!   brute-force cross-checks;
//! - [`specfile`]: parsing for the structured spec files consumed by the
//!   CLI.
//!
//! Everything is verified at construction: groups check their axioms,
//! homomorphisms check the pairwise identity, actions check the action law,
//! and solution sets re-check `My = b` before they are handed out.

pub mod action;
pub mod group;
pub mod hom;
pub mod linear;
mod sample;
pub mod specfile;

pub use action::{
    action_fiber, action_from_table, natural_action, orbit, stabilizer,
    verify_orbit_stabilizer, ActionError, GroupAction, OrbitStabilizerReport,
};
pub use group::{
    catalog, cycle_notation, direct_product, left_cosets, right_cosets, subgroup_generated,
    AssocCheck, CosetPartition, CosetSide, FiniteGroup, GroupAxiom, GroupConfig, GroupError,
    Subgroup,
};
pub use hom::{
    enumerate_homomorphisms, fiber, first_isomorphism_witness, hom_from_generator_images,
    hom_from_table, image, is_injective, kernel, quotient_group, HomError, HomValidation,
    Homomorphism, IsomorphismWitness, Quotient, VerifyOpts,
};
pub use linear::{
    brute_force_fiber, fiber_cardinality, null_space_basis, rref, solve_affine,
    verify_translation_family, AffineSolutionSet, ExactMatrix, ExactScalar, FiberCardinality,
    FieldTag, LinearError, Rref, SolveOutcome,
};
pub use specfile::{
    parse_spec_file, parse_spec_str, ActionSpec, GroupSpec, HomBody, HomSpec, LinearSystemSpec,
    ParsedSpec, SpecError,
};

#[cfg(test)]
mod concurrency_contract {
    //! Shared-reader guarantees: everything handed out after construction
    //! is immutable and freely shareable across threads.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::FiniteGroup>();
        assert_send_sync::<crate::Subgroup>();
        assert_send_sync::<crate::CosetPartition>();
        assert_send_sync::<crate::Homomorphism>();
        assert_send_sync::<crate::IsomorphismWitness>();
        assert_send_sync::<crate::GroupAction>();
        assert_send_sync::<crate::OrbitStabilizerReport>();
        assert_send_sync::<crate::ExactMatrix>();
        assert_send_sync::<crate::ExactScalar>();
        assert_send_sync::<crate::AffineSolutionSet>();
    }
}
