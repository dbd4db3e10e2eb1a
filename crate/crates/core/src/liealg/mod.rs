//! Root systems, Chevalley bases and parabolic data.

mod chevalley;
mod parabolic;
mod rootsys;

pub use chevalley::{ChevalleyBasis, Generator};
pub use parabolic::{LeviDatum, ParabolicDatum};
pub use rootsys::RootSystem;
