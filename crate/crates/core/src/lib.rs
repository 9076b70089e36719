//! Exact computations around the Klein bottle group `K = <a, b | a^b = a^-1>`
//! sitting inside `G = (V4 × <b>) ⋉ Z^3`: normal forms, the homomorphisms
//! to `D∞` and `Z`, the index-two retraction, and engines that check, ball
//! by ball, that K is verbally closed in G without being a retract.

pub mod closure;
pub mod error;
pub mod freewords;
pub mod groups;
pub mod maps;
pub mod parse;
pub mod selfcheck;

pub use error::{Error, Result};
