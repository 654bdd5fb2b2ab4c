//! Search engine for Steiner systems S(2,k,v) with a prescribed permutation
//! group action: base-block candidates over pair orbits, exact cover via
//! dancing links, design verification and fingerprinting, and the
//! transversal-design product lift to larger orders.

pub mod candidates;
pub mod constructions;
pub mod design;
pub mod dlx;
pub mod error;
pub mod group;
pub mod invariants;
pub mod perm;
pub mod search;

pub use candidates::{candidate_blocks, covered_orbit_multiplicity, BlockCandidate};
pub use design::{admissible, parse, serialize, verify_design, Design, DesignParams};
pub use group::{OrbitPartition, OrbitStructure, PairOrbitIndex, PermGroup};
pub use invariants::{are_isomorphic, automorphism_count, fingerprint};
pub use perm::Permutation;
pub use search::{search, SearchConfig, SearchLimits, SearchOutcome, SearchSolution};
