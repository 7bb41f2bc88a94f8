//! Exact computation of unified Apostol type truncated exponential
//! Gould-Hopper polynomials, their special cases, and machine checks of the
//! identities they satisfy.
//!
//! Everything is built on two layers: sparse multivariate polynomials over
//! exact rationals ([`poly`]) and truncated Laurent series in `t` whose
//! coefficients are such polynomials ([`series`]).

pub mod auxiliary;
pub mod cli;
pub mod families;
pub mod identities;
pub mod monomiality;
pub mod poly;
pub mod rational;
pub mod series;

pub use poly::{MultiPoly, Var, VarSet};
pub use rational::Rational;
pub use series::{LaurentSeries, SeriesError};
