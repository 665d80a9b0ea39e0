//! Artin presentations of the trivial group from integral fillings of the
//! hexatangle, and hyperbolicity of closed pure 3-braids.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`]: reduced words in free groups.
//! - [`free_product`]: words in `Z2 * Z3` and the map from the braid group.
//! - [`braid`]: pure 3-braids and their classification.
//! - [`hexatangle`]: fillings, symmetries and the filling tables.
//! - [`artin`]: presentation generation and the Artin identities.
//! - [`triviality`]: abelian invariants and the Tietze simplifier.
//! - [`harness`]: the batch pipeline.

pub mod artin;
pub mod braid;
pub mod data;
pub mod error;
pub mod expr;
pub mod free_product;
pub mod harness;
pub mod hexatangle;
mod lex;
#[cfg(test)]
mod proptests;
pub mod triviality;
pub mod word;

pub use artin::{
    gen_from_hex, gen_from_params, rat_group, verify_artin, ArtinCheck, Presentation, SurgeryParams,
};
pub use braid::{classify, BraidClass, BraidTag, PureBraid};
pub use error::{Error, Result};
pub use free_product::{even_power_form, rho, three_part_split, BraidWord, EvenPowerForm, FpWord};
pub use hexatangle::{apply_symmetry, orbit, HexFilling, Param};
pub use triviality::{
    abelian_invariants, simplify, AbelianInvariants, TrivialityTag, TrivialityVerdict,
};
pub use word::Word;
