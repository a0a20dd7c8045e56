//! Finite projective planes and the distribution of secant sizes of their point
//! sets.
//!
//! The crate builds PG(2,q) over any prime-power field, computes secant-size
//! spectra with exact double-counting checks, constructs structured point sets
//! (parabola regions, parabola families, an elliptic-curve region, seeded
//! random sets) and ships the number theory these need: Legendre character
//! walks, elliptic-curve point counts and a legitimate 2-coloring algorithm for
//! linear hypergraphs. `search` and `sweep` drive exhaustive and randomized
//! experiments with deterministic parallel reductions.

pub mod charwalk;
pub mod construct;
pub mod ecurve;
pub mod error;
pub mod field;
pub mod legit;
pub mod plane;
pub mod search;
pub mod spectrum;
pub mod sweep;

pub use charwalk::{
    projection_profile, psi_walk, verify_projection_laws, LawReport, ProjectionProfile, Walk,
};
pub use construct::{
    ec_region, parabola_family, parabola_region, random_set, ConstructionSpec, Density,
    FamilyParams, ParabolaParams, SetFile,
};
pub use ecurve::{curve_count, ec_spectrum_scan, Curve, EcScanReport};
pub use error::{Error, Result};
pub use field::{Elem, Field, Legendre, QuadraticCharacter};
pub use legit::{
    generate_linear_hypergraph, two_phase_coloring, verify_legitimate, Color, GeneratorMode,
    LegitColoring, LinearHypergraph,
};
pub use plane::{AffineFrame, AffineLine, ProjectivePlane};
pub use search::{exhaustive_minmax, local_search, LocalSearchConfig, SearchMethod, SearchResult};
pub use spectrum::{
    bounds_report, compute_spectrum, cor_ceiling, max_frequency, verify_counting_identities,
    BoundsReport, IdentityCheck, PointSet, SecantSpectrum,
};
pub use sweep::{run_sweep, SweepRow};
