//! Cardinality functions of definable families as piecewise polynomials.

mod family;
mod phi;
mod poly;

pub use family::{family_cardinality, leading_term, successor_difference};
pub use phi::{phi_count, phi_function, Count, CountMatrix};
pub use poly::Poly;

use crate::linalg::Rat;
use crate::semilin::FundamentalLattice;
use crate::syntax::Formula;
use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CardinalError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("solution count is infinite: kernel witness {witness:?}")]
    InfiniteCount { witness: Vec<BigInt> },
    #[error("a section of the family is infinite on the parameter region `{region}`")]
    SectionInfinite { region: Formula },
    #[error("piecewise polynomial is not total on the naturals")]
    NotTotal,
    #[error("function is not monotone: decreases at x = {witness}")]
    NotMonotone { witness: BigInt },
    #[error("infinite pieces have different leading terms; not a monotone function")]
    LeadingMismatch,
    #[error("degree must be at least 1 for a leading-term split")]
    DegreeZero,
    #[error(transparent)]
    Semilin(#[from] crate::semilin::SemilinError),
    #[error("interpolation failed to stabilize (internal refinement bug)")]
    Interpolation,
}

/// A polynomial attached to a lattice, expressed in the lattice coordinates
/// `k_1..k_r`. The optional sign flips embed pieces of functions on integer
/// tuples: a flipped coordinate `i` represents points with `u_i <= -1` via
/// `u_i = -(lattice point)_i`.
#[derive(Debug, Clone)]
pub struct LatticePolynomial {
    lattice: FundamentalLattice,
    signs: Vec<i8>,
    poly: Poly,
}

impl LatticePolynomial {
    pub fn new(lattice: FundamentalLattice, poly: Poly) -> LatticePolynomial {
        let signs = vec![1; lattice.ambient_dim()];
        LatticePolynomial::with_signs(lattice, signs, poly)
    }

    pub fn with_signs(lattice: FundamentalLattice, signs: Vec<i8>, poly: Poly) -> LatticePolynomial {
        assert_eq!(poly.nvars(), lattice.dim());
        assert_eq!(signs.len(), lattice.ambient_dim());
        LatticePolynomial {
            lattice,
            signs,
            poly,
        }
    }

    pub fn lattice(&self) -> &FundamentalLattice {
        &self.lattice
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn degree(&self) -> u32 {
        self.poly.total_degree()
    }

    /// Whether the piece covers `point` (in the possibly signed ambient
    /// space), and the value there.
    pub fn eval(&self, point: &[BigInt]) -> Option<Rat> {
        if point.len() != self.lattice.ambient_dim() {
            return None;
        }
        let mut unsigned = Vec::with_capacity(point.len());
        for (x, &s) in point.iter().zip(&self.signs) {
            if s < 0 {
                if !x.is_negative() {
                    return None;
                }
                unsigned.push(-x);
            } else {
                if x.is_negative() {
                    return None;
                }
                unsigned.push(x.clone());
            }
        }
        let coords = self.lattice.coordinates_of(&unsigned)?;
        Some(self.poly.eval_int(&coords))
    }
}

/// A function given by polynomials on the disjoint lattices of a
/// decomposition of its domain.
#[derive(Debug, Clone)]
pub struct PiecewisePoly {
    ambient_dim: usize,
    pieces: Vec<LatticePolynomial>,
}

impl PiecewisePoly {
    pub fn new(ambient_dim: usize, pieces: Vec<LatticePolynomial>) -> PiecewisePoly {
        for p in &pieces {
            assert_eq!(p.lattice.ambient_dim(), ambient_dim);
        }
        PiecewisePoly {
            ambient_dim,
            pieces,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[LatticePolynomial] {
        &self.pieces
    }

    /// Maximum total degree over the pieces.
    pub fn degree(&self) -> u32 {
        self.pieces.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Value at a (possibly signed) integer point; `None` off the domain.
    pub fn eval(&self, point: &[BigInt]) -> Option<Rat> {
        self.pieces.iter().find_map(|p| p.eval(point))
    }

    /// The domain as a semilinear set; only meaningful when no piece uses
    /// sign flips (one-parameter cardinality functions never do).
    pub fn domain(&self) -> Result<crate::semilin::SemilinearSet, crate::semilin::SemilinError> {
        crate::semilin::SemilinearSet::new(
            self.ambient_dim,
            self.pieces.iter().map(|p| p.lattice.clone()).collect(),
        )
    }
}
