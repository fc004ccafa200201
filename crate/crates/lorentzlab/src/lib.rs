//! Exact decision procedures for Lorentzian and hereditary Lorentzian
//! polynomials, with matroid, polytope and fan pipelines built on top.

pub mod cones;
pub mod fanchow;
pub mod hereditary;
pub mod inertia;
pub mod linalg;
pub mod lorentzian;
pub mod lp;
pub mod matroid;
pub mod par;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod simplicial;
pub mod subdivision;

pub use hereditary::{check_hereditary, from_weights, HereditaryPoly};
pub use linalg::LinSubspace;
pub use poly::{Direction, HomPoly, Monomial, VarSet};
pub use rational::Q;
pub use simplicial::SimComplex;
