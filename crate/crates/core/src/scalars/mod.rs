//! Exact scalars, frequency vectors, resonance forms and the small
//! denominator ring `SD_alpha`.

mod field;
mod frequency;
mod poly;
mod sd;
mod text;

pub use field::ExactScalar;
pub use frequency::{FrequencyVector, LinearForm, NonResonance};
pub use poly::OmegaPoly;
pub use sd::{SdElement, POLE_TOLERANCE};
pub use text::{parse_scalar, parse_sd};
