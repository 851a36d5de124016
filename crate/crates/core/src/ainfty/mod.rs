//! A∞-structures, formal diffeomorphisms and the functor equation.

pub mod check;
pub mod diffeo;
pub mod random;
pub mod structure;
pub mod transport;

pub use check::{check_ainfty, check_functor};
pub use diffeo::{compose_fd, invert_fd, FormalDiffeomorphism};
pub use random::{random_diffeo, RandomDiffeoOptions};
pub use structure::{default_max_arity, AInftyStructure};
pub use transport::transport;
