//! Construction engine and verifier for magic rectangle sets over finite
//! abelian groups.
//!
//! A *magic rectangle set* `MRS_G(a, b; c)` over an abelian group `G` of
//! order `a·b·c` is a collection of `c` arrays of shape `a×b` whose entries
//! cover every element of `G` exactly once, such that every row of every
//! array sums to one constant `γ` and every column sums to another constant
//! `δ`. The starred variant `MRS*` requires `γ = δ = 0`. An *incomplete* set
//! (`IMRS`) covers `G` minus a union of subgroups (the "hole") instead; holes
//! are later filled by sets over the hole subgroups.
//!
//! The crate is organised in layers:
//!
//! * [`abelian`] — exact arithmetic and structure theory for finite abelian
//!   groups presented as direct sums of cyclic groups.
//! * [`model`] — the data model for (incomplete) rectangle sets and the
//!   independent verifier that gates every construction.
//! * [`atlas`] — explicit base arrays and parametric array families,
//!   reproduced verbatim and extended to full height by deterministic
//!   filler-row schemes.
//! * [`search`] — a backtracking synthesizer for small base cases and an
//!   exhaustive oracle that proves existence or nonexistence on small groups.
//! * [`combinators`] — composable transformations: hole filling, doubling,
//!   six-fold column expansion, and direct-sum / odd-index lifting.
//! * [`engine`] — the feasibility classifier and the recursive build
//!   dispatcher that assembles full rectangle sets from the layers above.
//! * [`cache`] — a small JSON file cache for search results and lift plans.
//!
//! Every constructor output is checked by [`model::RectSet::verify`] before
//! it leaves the engine; nothing is trusted by construction alone.

pub mod abelian;
pub mod atlas;
pub mod cache;
pub mod combinators;
pub mod engine;
mod error;
pub mod model;
pub mod search;

pub use error::{Error, Result};
