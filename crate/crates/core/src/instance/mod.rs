//! Problem instances, seeded generators, and their file formats.

mod dnf;
mod generate;
mod gkp;
mod graph;
mod table;

pub use dnf::{Clause, Dnf3Formula, Literal};
pub use generate::{
    gen_onehot_weights, gen_random_dnf, gen_random_gkp, gen_random_graph, gen_random_round, gen_uniform_weights,
};
pub use gkp::{GkpRound, GkpSet, GkpStatic};
pub use graph::Graph;
pub use table::{ProcTimeMatrix, WeightSequence};
