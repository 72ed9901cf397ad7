pub mod lattice;
pub mod algebra;
pub mod classify;
pub mod cli;
pub mod cone;
pub mod hilbert;
pub mod roots;
pub mod semigroup;
