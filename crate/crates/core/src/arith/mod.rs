//! Exact arithmetic over Z and Q.

pub mod bipoly;
pub mod factor_q;
pub mod integer;
pub mod numfield;
pub mod rat_serde;
pub mod resultant;
pub mod unipoly;

pub type Rat = num_rational::BigRational;

pub use bipoly::{disc_y, BiPoly};
pub use resultant::resultant;
pub use unipoly::{squarefree_decomposition, squarefree_part, UniPoly};
pub use factor_q::{factor_q, is_irreducible_q, rational_roots};
pub use numfield::{Embedding, NfElem, NfPoly, NumberField};
