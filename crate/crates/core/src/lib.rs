pub mod error;
pub mod quad;
pub mod specfun;
pub mod line;
pub mod harmonic;
pub mod sim;
pub mod pseudo;
pub mod bm;
pub mod fractional;
pub mod kernels;
pub mod validation;
