//! Numerical realization of generic tropical data.

pub mod certify;
pub mod cloud;
pub mod glue;
pub mod immersed;
pub mod model;
pub mod outer;
pub mod pipeline;
pub mod poly;
pub mod rho;
pub mod smooth;
pub mod zeros;
