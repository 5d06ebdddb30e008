//! Mean first passage times for narrow-escape problems: closed-form
//! asymptotics, dual series solvers for the annulus and rectangle, and the
//! conformal maps that relate the canonical geometries.

pub mod geometry;
pub mod legendre;
pub mod quadrature;
pub mod asymptotics;
pub mod dualseries;
