//! Placeholder.
use super::{CardinalError, PiecewisePoly};
use crate::syntax::Formula;
pub fn family_cardinality(_a: &Formula, _p: &str, _z: &[String]) -> Result<PiecewisePoly, CardinalError> { unimplemented!() }
pub fn leading_term() {}
pub fn successor_difference() {}
