#![allow(clippy::needless_range_loop)]

pub mod building_blocks;
pub mod circle_match;
pub mod cli;
pub mod eigen_lift;
pub mod error;
pub mod exact_arith;
pub mod hom_calculus;
pub mod k_invariants;
pub mod oracles;
pub mod realize;
