//! Arithmetic in O_K = Z_p[x]/(u)[π]/(E) truncated at π^N.

mod fp_poly;
pub mod literal;
mod residue;
mod ring;
mod value;

pub use residue::ResidueValue;
pub use ring::{make_ring, Elem, Ring, RingDescriptor, RingSpec, MAX_DIM, MODULUS_LIMIT};
pub use value::{Coeff, KValue, OKValue, Valuation};
