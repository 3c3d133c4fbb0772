pub mod brst;
pub mod config;
pub mod fock;
pub mod hl;
pub mod hodge;
pub mod lie;
pub mod linalg;
pub mod ops;
pub mod scalar;
pub mod suite;
pub mod unitarity;
pub mod workbench;
