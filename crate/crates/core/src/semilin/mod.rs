//! Geometric normal forms for definable sets: disjoint fundamental lattices,
//! dimension, definable bijections, and piecewise linear functions recovered
//! from their graphs.

mod bijection;
mod decompose;

pub use bijection::{construct_bijection, piecewise_linear_from_graph, AffineMap, PiecewiseLinearMap};
pub use decompose::to_semilinear_with_order;

use crate::linalg::{rank, rat, solve, Rat};
use crate::solve::qf::SplitOrder;
use crate::syntax::{fresh_var, Formula, LinearForm};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemilinError {
    #[error("ambient dimension must be at least 1")]
    ZeroAmbient,
    #[error("vector length {got} does not match ambient dimension {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("lattice data must be nonnegative")]
    NegativeEntry,
    #[error("period vectors must be nonzero")]
    ZeroPeriod,
    #[error("period vectors must be linearly independent")]
    DependentPeriods,
    #[error("the empty set has no dimension")]
    EmptySet,
    #[error("the set is {0}; a definable bijection with some N^m needs an infinite set")]
    NotInfinite(&'static str),
    #[error("formula has free variables {extra:?} outside the coordinate list")]
    ExtraVariables { extra: Vec<String> },
    #[error("the graph formula is not {property}: the sentence `{sentence}` is false")]
    NotAFunction { property: &'static str, sentence: String },
}

/// A set `{base + k_1*p_1 + ... + k_r*p_r : k_i in N}` with linearly
/// independent period vectors, all data in the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FundamentalLattice {
    ambient_dim: usize,
    base: Vec<BigInt>,
    periods: Vec<Vec<BigInt>>,
}

impl FundamentalLattice {
    pub fn new(
        base: Vec<BigInt>,
        periods: Vec<Vec<BigInt>>,
    ) -> Result<FundamentalLattice, SemilinError> {
        let ambient_dim = base.len();
        if ambient_dim == 0 {
            return Err(SemilinError::ZeroAmbient);
        }
        let lat = FundamentalLattice {
            ambient_dim,
            base,
            periods,
        };
        lat.validate()?;
        Ok(lat)
    }

    /// Internal constructor for recursive machinery that works in derived
    /// coordinate spaces (where ambient dimension 0 is meaningful).
    pub(crate) fn new_unchecked(base: Vec<BigInt>, periods: Vec<Vec<BigInt>>) -> Self {
        let lat = FundamentalLattice {
            ambient_dim: base.len(),
            base,
            periods,
        };
        debug_assert!(lat.validate().is_ok() || lat.ambient_dim == 0);
        lat
    }

    fn validate(&self) -> Result<(), SemilinError> {
        for p in std::iter::once(&self.base).chain(&self.periods) {
            if p.len() != self.ambient_dim {
                return Err(SemilinError::DimensionMismatch {
                    want: self.ambient_dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| x.is_negative()) {
                return Err(SemilinError::NegativeEntry);
            }
        }
        for p in &self.periods {
            if p.iter().all(|x| x.is_zero()) {
                return Err(SemilinError::ZeroPeriod);
            }
        }
        let rows: Vec<Vec<Rat>> = self
            .periods
            .iter()
            .map(|p| p.iter().map(|x| rat(x.clone())).collect())
            .collect();
        if rank(&rows) != self.periods.len() {
            return Err(SemilinError::DependentPeriods);
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn base(&self) -> &[BigInt] {
        &self.base
    }

    pub fn periods(&self) -> &[Vec<BigInt>] {
        &self.periods
    }

    /// Number of period vectors; the dimension of the lattice.
    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    /// Solve `base + sum k_i p_i = point` over the rationals; the periods
    /// are independent so the solution is unique when it exists.
    pub fn coordinates_of(&self, point: &[BigInt]) -> Option<Vec<BigInt>> {
        if point.len() != self.ambient_dim {
            return None;
        }
        let cols: Vec<Vec<Rat>> = self
            .periods
            .iter()
            .map(|p| p.iter().map(|x| rat(x.clone())).collect())
            .collect();
        let b: Vec<Rat> = point
            .iter()
            .zip(&self.base)
            .map(|(x, c)| rat(x - c))
            .collect();
        let ks = solve(&cols, &b)?;
        // verify (solve returns one solution of the consistent system; with
        // independent columns it is exact, but the system may be inconsistent
        // only approximately detected when there are more rows than pivots)
        let mut recon: Vec<Rat> = self.base.iter().map(|c| rat(c.clone())).collect();
        for (k, p) in ks.iter().zip(&self.periods) {
            for (r, x) in recon.iter_mut().zip(p) {
                *r = &*r + &(k * &rat(x.clone()));
            }
        }
        let target: Vec<Rat> = point.iter().map(|x| rat(x.clone())).collect();
        if recon != target {
            return None;
        }
        let mut out = Vec::with_capacity(ks.len());
        for k in ks {
            if !k.is_integer() || k.numer().is_negative() {
                return None;
            }
            out.push(k.to_integer());
        }
        Some(out)
    }

    pub fn contains(&self, point: &[BigInt]) -> bool {
        self.coordinates_of(point).is_some()
    }

    /// The defining formula over the given coordinate variables:
    /// `E k_1 ... k_r. x = base + sum k_i p_i`, quantifier-eliminated.
    pub fn to_formula(&self, vars: &[String]) -> Formula {
        crate::solve::eliminate_quantifiers(&self.membership_formula(vars))
    }

    /// Same as [`Self::to_formula`] but with the coordinate existentials
    /// still in place (cheap to build, useful as input to other operations).
    pub fn membership_formula(&self, vars: &[String]) -> Formula {
        assert_eq!(vars.len(), self.ambient_dim);
        let mut taken: BTreeSet<String> = vars.iter().cloned().collect();
        let ks: Vec<String> = (0..self.periods.len())
            .map(|i| {
                let k = fresh_var(&format!("k{i}"), &taken);
                taken.insert(k.clone());
                k
            })
            .collect();
        let mut eqs = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            let mut form = LinearForm::var(v).add_constant(-self.base[i].clone());
            for (k, p) in ks.iter().zip(&self.periods) {
                form = form.sub(&LinearForm::term(p[i].clone(), k));
            }
            eqs.push(Formula::atom_eq(form));
        }
        let mut f = Formula::and(eqs);
        for k in ks.into_iter().rev() {
            f = Formula::exists(k, f);
        }
        f
    }

    /// Points with sup-norm at most `bound`, in lexicographic order.
    /// Periods are nonnegative and nonzero, so each coordinate direction is
    /// exhausted after finitely many steps.
    pub fn enumerate(&self, bound: &BigInt) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        self.enum_rec(0, self.base.clone(), bound, &mut out);
        out.sort();
        out
    }

    fn enum_rec(&self, i: usize, point: Vec<BigInt>, bound: &BigInt, out: &mut Vec<Vec<BigInt>>) {
        if point.iter().any(|x| x > bound) {
            return;
        }
        if i == self.periods.len() {
            out.push(point);
            return;
        }
        let mut cur = point;
        loop {
            if cur.iter().any(|x| x > bound) {
                break;
            }
            self.enum_rec(i + 1, cur.clone(), bound, out);
            for (x, p) in cur.iter_mut().zip(&self.periods[i]) {
                *x += p;
            }
        }
    }
}

/// A finite disjoint union of fundamental lattices in a common ambient
/// space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    ambient_dim: usize,
    lattices: Vec<FundamentalLattice>,
}

impl SemilinearSet {
    pub fn new(
        ambient_dim: usize,
        lattices: Vec<FundamentalLattice>,
    ) -> Result<SemilinearSet, SemilinError> {
        if ambient_dim == 0 {
            return Err(SemilinError::ZeroAmbient);
        }
        for l in &lattices {
            if l.ambient_dim() != ambient_dim {
                return Err(SemilinError::DimensionMismatch {
                    want: ambient_dim,
                    got: l.ambient_dim(),
                });
            }
        }
        Ok(SemilinearSet {
            ambient_dim,
            lattices,
        })
    }

    pub fn empty(ambient_dim: usize) -> SemilinearSet {
        SemilinearSet {
            ambient_dim,
            lattices: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn lattices(&self) -> &[FundamentalLattice] {
        &self.lattices
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.lattices.iter().all(|l| l.dim() == 0)
    }

    pub fn member(&self, point: &[BigInt]) -> Result<bool, SemilinError> {
        if point.len() != self.ambient_dim {
            return Err(SemilinError::DimensionMismatch {
                want: self.ambient_dim,
                got: point.len(),
            });
        }
        Ok(self.lattices.iter().any(|l| l.contains(point)))
    }

    /// The maximal lattice dimension: the unique `m` with a definable
    /// bijection onto `N^m` for infinite sets, `0` for finite nonempty sets,
    /// and an error for the empty set.
    pub fn dimension(&self) -> Result<usize, SemilinError> {
        if self.lattices.is_empty() {
            return Err(SemilinError::EmptySet);
        }
        Ok(self.lattices.iter().map(|l| l.dim()).max().unwrap())
    }

    /// Quantifier-free defining formula over the given coordinate names.
    pub fn to_formula(&self, vars: &[String]) -> Formula {
        crate::solve::eliminate_quantifiers(&Formula::or(
            self.lattices
                .iter()
                .map(|l| l.membership_formula(vars))
                .collect(),
        ))
    }

    /// All points with sup-norm at most `bound`, in lexicographic order.
    pub fn enumerate(&self, bound: &BigInt) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self
            .lattices
            .iter()
            .flat_map(|l| l.enumerate(bound))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Canonical coordinate names `x1..xn`.
pub fn coord_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Decompose the set defined by `f` over the coordinates `vars` into a
/// disjoint union of fundamental lattices.
pub fn to_semilinear(f: &Formula, vars: &[String]) -> Result<SemilinearSet, SemilinError> {
    to_semilinear_with_order(f, vars, SplitOrder::Forward)
}

#[cfg(test)]
mod tests;
