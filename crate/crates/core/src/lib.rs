//! Exact-arithmetic singularity calculus for two-dimensional log surfaces.
//!
//! The crate computes, over the rationals and with no floating point:
//!
//! - Hirzebruch-Jung resolutions of cyclic quotient singularities and the
//!   crepant coefficient systems of their chains ([`cyclic`]);
//! - log discrepancies of lattice valuations and complete enumeration of
//!   the "deep" valuations below a discrepancy threshold ([`cyclic`],
//!   [`germ`]);
//! - classification and minimal discrepancies of local boundary germs, and
//!   the Diophantine weight systems of weighted blow-ups ([`germ`],
//!   [`weights`]);
//! - intersection theory on weighted projective planes and on surfaces
//!   described by a resolution graph, crepant thresholds, adjunction along
//!   a boundary curve, and minimal complementary indices ([`surface`]);
//! - the global count of divisors with discrepancy at most `-6/7`
//!   ([`delta`]);
//! - a machine-readable catalog of the fifty-six rank-one families with a
//!   boundary parameter, and a verifier replaying every numeric claim the
//!   catalog records ([`catalog`]).

pub mod affine;
pub mod catalog;
pub mod cyclic;
pub mod delta;
pub mod excgraph;
pub mod germ;
pub mod linalg;
pub mod rat;
pub mod surface;
pub mod weights;

pub use affine::{AffineForm, ZeroSolution};
pub use cyclic::{
    chain_discrepancies, enumerate_deep_valuations, hj_expand, hj_reconstruct, toric_log_discrepancy,
    CyclicQuot, LatticeValuation, ResolutionChain,
};
pub use delta::{delta, delta_sweep, DeltaReport};
pub use germ::{classify_germ, count_deep_divisors, min_discrepancy_germ, Branch, BranchShape, Germ};
pub use rat::Rat;
pub use surface::{adjunction, complement_index, graph_intersect, wps_intersect, LogSurface};
pub use weights::{solve_blowup_weights, BlowupWeights, WeightConstraints};
