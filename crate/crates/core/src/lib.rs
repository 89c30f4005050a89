pub mod algebra;
pub mod error;
pub mod series;
pub mod germ;
pub mod doublepoint;
pub mod invariants;
pub mod classifier;
pub mod oracle;
pub mod unfolding;
pub mod generate;
