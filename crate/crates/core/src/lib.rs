//! Maniplexes as edge-coloured flag graphs.
//!
//! The crate builds cross-covers of maniplexes by `Z_k`-weighted flag graphs,
//! colour-coded extensions, symmetry-type graphs and stability verdicts, and
//! assembles them into a pipeline that produces families of unstable
//! two-orbit fully transitive maniplexes of every rank from a non-orientable
//! regular map.
//!
//! Flags are dense ids; every product construction uses a fixed index
//! formula, so outputs are bit-for-bit reproducible:
//!
//! | construction | flag index |
//! |---|---|
//! | [`Maniplex::double_cover`] | `2u + j` |
//! | [`cross_cover`] | `u*k + i` |
//! | [`extension`] | `u*2^l + x` |

pub mod catalog;
pub mod error;
pub mod extend;
pub mod io;
pub mod maniplex;
pub mod pipeline;
pub mod symmetry;
pub mod walk;
pub mod weights;

pub use catalog::{
    build_seed, vartheta, vartheta_prime, verify_proper_pair, ProperPairReport, Seed,
};
pub use error::{Error, Result};
pub use extend::{antipodal_colouring, extension, total_colouring, Colouring, ColouringKind};
pub use maniplex::{Flag, Maniplex, MapType, ValidationReport};
pub use symmetry::{
    are_isomorphic, automorphism_group, stability, symmetry_type_graph, AutGroup, Automorphism,
    StabilityVerdict, SymmetryTypeGraph,
};
pub use walk::Walk;
pub use weights::{cross_cover, WeightFunction};
