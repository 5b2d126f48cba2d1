//! Exact symbolic toolkit for the cluster-algebra structure on Grothendieck
//! rings of finite-dimensional representations of quantum affine algebras.
//!
//! The crate builds the infinite quiver attached to a Cartan matrix,
//! truncates it to finite seeds, mutates them, solves T-systems to obtain
//! q-characters of Kirillov-Reshetikhin modules, evaluates the geometric
//! (quiver-Grassmannian) q-character formula, and decomposes sl2 tensor
//! products via string combinatorics. All arithmetic is exact: coefficients
//! are arbitrary-precision integers and every identity is checked by exact
//! polynomial equality.

pub mod cartan;
pub mod cluster;
pub mod error;
pub mod laurent;
pub mod quiver;
pub mod quivrep;
pub mod sl2;
pub mod tsystem;

pub use error::{Error, Result};
