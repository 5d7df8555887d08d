pub mod analysis;
pub mod cli;
pub mod config;
pub mod emit;
pub mod fresnel;
pub mod gain;
pub mod geometry;
pub mod quadrature;
pub mod validation;
