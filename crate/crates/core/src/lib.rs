//! Milnor numbers of bottom tangles and clover links.
//!
//! A bottom tangle is presented by its longitudes as words in the meridians
//! (`TanglePresentation`). From those the crate computes Milnor numbers via
//! the Magnus expansion, their indeterminacy gcds, the action of SL-moves on
//! the nilpotent peripheral data, the affine lattices `H_c(2k+2, j)`, and the
//! edge-homotopy classification of 4-clover links.

pub mod classify;
pub mod error;
pub mod hset;
pub mod io;
pub mod magnus;
pub mod milnor;
pub mod realize;
pub mod slmove;
pub mod verify;
pub mod word;
pub mod zlattice;

pub use error::{Error, Result};
pub use magnus::{expand, MagnusSeries, Monomial};
pub use word::{GroupWord, Letter};
