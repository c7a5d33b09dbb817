//! Independent numerical references for the closed-form results.

pub mod fock;
pub mod quadrature;
pub mod rk4;
pub mod suite;
