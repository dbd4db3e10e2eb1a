//! Classical oracles for `F_λ = S(g)/I_λ`: orbit evaluation, weight multiplicities,
//! Levi branching and the KKS bracket.

mod kks;
mod orbit;
mod weights;

pub use kks::{kks_bracket, SymPolyElement};
pub use orbit::{monomials_up_to, orbit_filtered_dim, orbit_weight_ranks, OrbitSample};
pub use weights::{
    decompose_character, levi_invariant_dim, levi_invariant_from, levi_weyl_group, table_to_csv,
    weight_mult_table, weight_multiplicities, weyl_dimension, WeightMultEntry, WeightMultiplicities,
};
