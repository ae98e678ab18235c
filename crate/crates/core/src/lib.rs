//! Subgroup lattices of finite permutation groups and the chain invariants
//! `minmaxl`, `chiefl` and `modl`, with a harness that checks the theorems
//! relating them over a catalog of groups.
//!
//! ```
//! use std::sync::Arc;
//! use latcheck_core::{invariant_report, GroupOptions, GroupSpec, LatticeOptions, SubgroupLattice};
//!
//! let spec: GroupSpec = "alt:5".parse().unwrap();
//! let group = Arc::new(spec.build(GroupOptions::default()).unwrap());
//! let lat = SubgroupLattice::enumerate(group, LatticeOptions::default()).unwrap();
//! let report = invariant_report("alt:5", &lat).unwrap();
//! assert_eq!((report.minmaxl, report.chiefl, report.modl), (3, 1, 1));
//! ```

pub mod bitset;
pub mod cache;
pub mod catalog;
pub mod error;
pub mod export;
pub mod group;
pub mod harness;
pub mod invariants;
pub mod lattice;
pub mod perm;
pub mod spec;

pub use bitset::BitSet;
pub use cache::{Cache, CacheOutcome, CacheRecord};
pub use catalog::{CatalogEntry, Tier};
pub use error::{Error, Result};
pub use group::{direct_product, ElemId, FiniteGroup, GroupOptions, SubgroupSet};
pub use harness::{run_suite, verify_group, HarnessOptions, Status, Suite, SuiteReport, Verdict, VerdictReport};
pub use invariants::{invariant_report, InvariantReport};
pub use lattice::{Chain, LatticeOptions, SubgroupId, SubgroupLattice};
pub use perm::Permutation;
pub use spec::GroupSpec;
