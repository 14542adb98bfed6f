//! Compiler from existential sentences over the integers to polynomial
//! equations over `Q(z1, z2)`, in stages.

pub mod ast;
pub mod parser;
pub mod stage1;
pub mod stage2;
pub mod stage3;
pub mod stage4;
pub mod system;
pub mod stage5;
pub mod combine;
pub mod config;
pub mod emit;
pub mod pipeline;
