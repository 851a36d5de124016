//! Hochschild cochains, the convolution product, the differential, and nc-vector fields.

pub mod cochain;
pub mod convolve;
pub mod euler;
pub mod purity;
pub mod pushforward;
pub mod search;

pub use cochain::Cochain;
pub use convolve::{convolve, differential};
pub use euler::{euler_field, euler_map};
pub use purity::{purity_check, require_pure, PurityFailure};
pub use pushforward::pushforward;
pub use search::{certify_field, find_nc_field, FieldConstraints, NcVectorField, SearchMode, SearchReport};
