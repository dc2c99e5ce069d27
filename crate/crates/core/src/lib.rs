pub mod cli;
pub mod constructions;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod rational;
pub mod semigroup;
pub mod symmetric;
pub mod verify;
