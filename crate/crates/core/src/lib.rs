//! Exact-arithmetic toolkit for multiple recurrence of two commuting
//! measure-preserving maps on finite probability spaces.
//!
//! Every quantity is a `BigRational`. Systems are commuting permutations of
//! a weighted point set, σ-algebras are partitions, and the box seminorm is
//! computed from an explicit four-fold coupling of the space.

pub mod box_seminorm;
pub mod corpus;
pub mod cyclotomic;
pub mod dynamics;
pub mod error;
pub mod measure;
pub mod rational;
pub mod recurrence;
pub mod symbolic;

pub use box_seminorm::{
    box_measure, g_algebra, invariant_join, is_magic, magic_extension, seminorm4, seminorm4_by_averages,
    MagicExtension, MagicVerdict, QuadMeasure, SeminormValue,
};
pub use dynamics::{
    ergodic_components, group_orbit_partition, invariant_partition, is_ergodic, lift_observable, validate_system,
    CommutingSystem, FactorMap, Transformation, Which,
};
pub use error::{Error, Result};
pub use measure::{cond_exp, holder_product_bound, integrate, join_partitions, Observable, Partition, WeightedSpace};
pub use rational::Q;
pub use recurrence::{
    cesaro_bound_check, diff_bound_check, j0_lower_bound_check, multi_corr, pairwise_projections,
    product_rotation_khintchine3, recurrence_set, Exponent, RecurrenceReport, ScanOptions,
};
