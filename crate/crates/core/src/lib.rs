//! Exact q-series and cyclotomic arithmetic for genus-one quasimap and
//! Vafa-Witten generating series of Higgs moduli, with checkers for the
//! identities relating them.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod mirrorcheck;
pub mod mmseries;
pub mod modforms;
pub mod numerictau;
pub mod qminv;
pub mod swlattice;
pub mod wallcross;

pub use error::{Error, Result};
