//! Definable bijections between semilinear sets and full spaces `N^m`, and
//! recovery of piecewise linear functions from definable graphs.
//!
//! The bijection construction allocates a region of `N^m` to every lattice of
//! the domain decomposition: full-dimensional pieces interleave along the
//! first coordinate (even/odd splitting), lower-dimensional pieces receive a
//! coordinate slice, with donor pieces split as needed so every region of
//! the codomain is covered exactly once.

use super::{FundamentalLattice, SemilinError, SemilinearSet};
use crate::solve::decide;
use crate::syntax::{fresh_var, Formula, LinearForm};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Affine map from the lattice coordinates of a piece into `N^cod`:
/// `k -> offset + matrix * k` with natural-number entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    offset: Vec<BigInt>,
    /// `codomain_dim` rows, one column per lattice coordinate
    matrix: Vec<Vec<BigInt>>,
}

impl AffineMap {
    pub fn offset(&self) -> &[BigInt] {
        &self.offset
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn apply(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.offset.clone();
        for (row, o) in self.matrix.iter().zip(out.iter_mut()) {
            for (m, k) in row.iter().zip(coords) {
                *o += m * k;
            }
        }
        out
    }
}

/// A map defined piecewise: linear (in lattice coordinates) on each lattice
/// of a disjoint decomposition of its domain.
#[derive(Debug, Clone)]
pub struct PiecewiseLinearMap {
    domain: SemilinearSet,
    codomain_dim: usize,
    pieces: Vec<(FundamentalLattice, AffineMap)>,
}

impl PiecewiseLinearMap {
    pub fn domain(&self) -> &SemilinearSet {
        &self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn pieces(&self) -> &[(FundamentalLattice, AffineMap)] {
        &self.pieces
    }

    /// Image of a domain point, `None` outside the domain.
    pub fn apply(&self, point: &[BigInt]) -> Option<Vec<BigInt>> {
        for (lat, map) in &self.pieces {
            if let Some(coords) = lat.coordinates_of(point) {
                return Some(map.apply(&coords));
            }
        }
        None
    }

    /// The graph as a formula over the given input/output variable names.
    pub fn graph_formula(&self, x_vars: &[String], y_vars: &[String]) -> Formula {
        assert_eq!(x_vars.len(), self.domain.ambient_dim());
        assert_eq!(y_vars.len(), self.codomain_dim);
        let mut taken: BTreeSet<String> =
            x_vars.iter().chain(y_vars.iter()).cloned().collect();
        let mut parts = Vec::new();
        for (lat, map) in &self.pieces {
            let ks: Vec<String> = (0..lat.dim())
                .map(|i| {
                    let k = fresh_var(&format!("k{i}"), &taken);
                    taken.insert(k.clone());
                    k
                })
                .collect();
            let mut eqs = Vec::new();
            for (i, xv) in x_vars.iter().enumerate() {
                let mut form = LinearForm::var(xv).add_constant(-lat.base()[i].clone());
                for (k, p) in ks.iter().zip(lat.periods()) {
                    form = form.sub(&LinearForm::term(p[i].clone(), k));
                }
                eqs.push(Formula::atom_eq(form));
            }
            for (i, yv) in y_vars.iter().enumerate() {
                let mut form = LinearForm::var(yv).add_constant(-map.offset[i].clone());
                for (j, k) in ks.iter().enumerate() {
                    form = form.sub(&LinearForm::term(map.matrix[i][j].clone(), k));
                }
                eqs.push(Formula::atom_eq(form));
            }
            let mut piece = Formula::and(eqs);
            for k in ks.into_iter().rev() {
                piece = Formula::exists(k, piece);
            }
            parts.push(piece);
        }
        Formula::or(parts)
    }
}

/// A bijectivity check: the sentence and its decision.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub sentence: Formula,
    pub holds: bool,
}

/// A piecewise linear bijection together with its decided verification
/// sentences.
#[derive(Debug, Clone)]
pub struct VerifiedBijection {
    pub map: PiecewiseLinearMap,
    pub checks: Vec<Check>,
}

impl VerifiedBijection {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// A piecewise linear bijection from an infinite semilinear set onto
/// `N^dimension(s)`, verified symbolically.
pub fn construct_bijection(s: &SemilinearSet) -> Result<VerifiedBijection, SemilinError> {
    if s.is_empty() {
        return Err(SemilinError::NotInfinite("empty"));
    }
    if s.is_finite() {
        return Err(SemilinError::NotInfinite("finite"));
    }
    let m = s.dimension().expect("nonempty");
    let full = FundamentalLattice::new(
        vec![BigInt::zero(); m],
        (0..m)
            .map(|i| {
                let mut e = vec![BigInt::zero(); m];
                e[i] = BigInt::one();
                e
            })
            .collect(),
    )?;
    let pieces = fit(s.lattices().to_vec(), full);
    let map = PiecewiseLinearMap {
        domain: s.clone(),
        codomain_dim: m,
        pieces,
    };
    let checks = verify_bijection(&map);
    Ok(VerifiedBijection { map, checks })
}

/// Allocate codomain region `w` to the domain pieces `ds`.
/// Invariant: `max(dim of ds) == dim(w)` and `ds` is nonempty.
fn fit(ds: Vec<FundamentalLattice>, w: FundamentalLattice) -> Vec<(FundamentalLattice, AffineMap)> {
    let u = w.dim();
    debug_assert_eq!(ds.iter().map(|d| d.dim()).max(), Some(u));
    if ds.len() == 1 && ds[0].dim() == u {
        let map = AffineMap {
            offset: w.base().to_vec(),
            matrix: (0..w.ambient_dim())
                .map(|i| w.periods().iter().map(|p| p[i].clone()).collect())
                .collect(),
        };
        return vec![(ds.into_iter().next().unwrap(), map)];
    }
    if ds.iter().all(|d| d.dim() == u) {
        // interleave along the first codomain period
        debug_assert!(u >= 1, "several pieces cannot share a single point");
        let mut rest = ds;
        let first = rest.remove(0);
        let mut out = fit(vec![first], stretch_first(&w, 0));
        out.extend(fit(rest, stretch_first(&w, 1)));
        return out;
    }
    // a piece of minimal dimension d < u goes into the first-coordinate slice
    let i0 = (0..ds.len())
        .min_by_key(|&i| ds[i].dim())
        .expect("nonempty");
    let d = ds[i0].dim();
    let mut s1: Vec<FundamentalLattice> = ds;
    let low = s1.remove(i0);
    let mut s0 = vec![low];
    if d < u - 1 {
        // top up the slice with a donor split off a full-dimensional piece
        let donor_idx = (0..s1.len())
            .find(|&i| s1[i].dim() == u)
            .expect("a full-dimensional piece exists");
        let donor = s1.remove(donor_idx);
        s0.push(slice_zero(&donor));
        s1.push(slice_positive(&donor));
    }
    let mut out = fit(s0, slice_zero(&w));
    out.extend(fit(s1, slice_positive(&w)));
    out
}

/// Sublattice with the first lattice coordinate fixed to 0.
fn slice_zero(l: &FundamentalLattice) -> FundamentalLattice {
    FundamentalLattice::new(l.base().to_vec(), l.periods()[1..].to_vec())
        .expect("sublattice of a fundamental lattice")
}

/// Sublattice with the first lattice coordinate at least 1.
fn slice_positive(l: &FundamentalLattice) -> FundamentalLattice {
    let base = l
        .base()
        .iter()
        .zip(&l.periods()[0])
        .map(|(b, p)| b + p)
        .collect();
    FundamentalLattice::new(base, l.periods().to_vec())
        .expect("sublattice of a fundamental lattice")
}

/// Sublattice with the first lattice coordinate in a residue class mod 2.
fn stretch_first(l: &FundamentalLattice, parity: u8) -> FundamentalLattice {
    let mut base = l.base().to_vec();
    let mut periods = l.periods().to_vec();
    if parity == 1 {
        for (b, p) in base.iter_mut().zip(&periods[0]) {
            *b += p;
        }
    }
    for x in periods[0].iter_mut() {
        *x = &*x * 2;
    }
    FundamentalLattice::new(base, periods).expect("sublattice of a fundamental lattice")
}

fn verify_bijection(map: &PiecewiseLinearMap) -> Vec<Check> {
    let n = map.domain.ambient_dim();
    let m = map.codomain_dim;
    let x: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let x2: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    let y: Vec<String> = (1..=m).map(|i| format!("v{i}")).collect();
    let y2: Vec<String> = (1..=m).map(|i| format!("t{i}")).collect();
    let domain_f = map.domain.to_formula(&x);
    let g = map.graph_formula(&x, &y);
    let g_x2 = map.graph_formula(&x2, &y);
    let g_y2 = map.graph_formula(&x, &y2);

    let tuple_eq = |a: &[String], b: &[String]| {
        Formula::and(
            a.iter()
                .zip(b)
                .map(|(p, q)| Formula::eq(LinearForm::var(p), LinearForm::var(q)))
                .collect(),
        )
    };
    let close = |vars: &[&[String]], f: Formula| {
        let mut out = f;
        for vs in vars {
            for v in vs.iter().rev() {
                out = Formula::forall(v.clone(), out);
            }
        }
        out
    };
    let exists_tuple = |vs: &[String], f: Formula| {
        let mut out = f;
        for v in vs.iter().rev() {
            out = Formula::exists(v.clone(), out);
        }
        out
    };

    let totality = close(
        &[&x],
        Formula::implies(domain_f.clone(), exists_tuple(&y, g.clone())),
    );
    let functionality = close(
        &[&x, &y, &y2],
        Formula::implies(
            Formula::and(vec![g.clone(), g_y2.clone()]),
            tuple_eq(&y, &y2),
        ),
    );
    let injectivity = close(
        &[&x, &x2, &y],
        Formula::implies(
            Formula::and(vec![g.clone(), g_x2.clone()]),
            tuple_eq(&x, &x2),
        ),
    );
    let surjectivity = close(&[&y], exists_tuple(&x, g.clone()));
    // the graph stays inside the domain
    let domain_bound = close(
        &[&x, &y],
        Formula::implies(g.clone(), domain_f.clone()),
    );

    [
        ("totality", totality),
        ("functionality", functionality),
        ("injectivity", injectivity),
        ("surjectivity", surjectivity),
        ("domain-closure", domain_bound),
    ]
    .into_iter()
    .map(|(name, sentence)| {
        let holds = decide(&sentence).expect("closed sentence");
        Check {
            name,
            sentence,
            holds,
        }
    })
    .collect()
}

/// Recover a piecewise linear function from the definable graph of a total
/// function `N^n -> N`: decompose the graph, project each lattice along the
/// last coordinate, and read the linear map off the dropped coordinates.
pub fn piecewise_linear_from_graph(
    g: &Formula,
    x_vars: &[String],
    y_var: &str,
) -> Result<PiecewiseLinearMap, SemilinError> {
    let n = x_vars.len();
    let mut taken = g.all_vars();
    taken.extend(x_vars.iter().cloned());
    taken.insert(y_var.to_string());
    let y2 = fresh_var("yy", &taken);

    // totality: A x. E y. g
    let mut total = Formula::exists(y_var, g.clone());
    for v in x_vars.iter().rev() {
        total = Formula::forall(v.clone(), total);
    }
    if !decide(&total).expect("closed") {
        return Err(SemilinError::NotAFunction {
            property: "total",
            sentence: total.to_string(),
        });
    }
    // functionality: A x y y'. g & g[y'] -> y = y'
    let g2 = crate::syntax::substitute(g, y_var, &LinearForm::var(&y2))
        .expect("fresh variable substitution");
    let mut fun = Formula::implies(
        Formula::and(vec![g.clone(), g2]),
        Formula::eq(LinearForm::var(y_var), LinearForm::var(&y2)),
    );
    for v in [y2.as_str(), y_var]
        .into_iter()
        .chain(x_vars.iter().rev().map(|s| s.as_str()))
    {
        fun = Formula::forall(v, fun);
    }
    if !decide(&fun).expect("closed") {
        return Err(SemilinError::NotAFunction {
            property: "functional",
            sentence: fun.to_string(),
        });
    }

    let mut graph_vars: Vec<String> = x_vars.to_vec();
    graph_vars.push(y_var.to_string());
    let graph = super::to_semilinear(g, &graph_vars)?;

    let mut proj_lats = Vec::new();
    let mut pieces = Vec::new();
    for lat in graph.lattices() {
        let base = lat.base()[..n].to_vec();
        let periods: Vec<Vec<BigInt>> = lat.periods().iter().map(|p| p[..n].to_vec()).collect();
        let proj = FundamentalLattice::new(base, periods)?;
        let map = AffineMap {
            offset: vec![lat.base()[n].clone()],
            matrix: vec![lat.periods().iter().map(|p| p[n].clone()).collect()],
        };
        proj_lats.push(proj.clone());
        pieces.push((proj, map));
    }
    let domain = SemilinearSet::new(n, proj_lats)?;
    Ok(PiecewiseLinearMap {
        domain,
        codomain_dim: 1,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilin::{coord_vars, to_semilinear};
    use crate::syntax::parse;

    fn set(formula: &str, n: usize) -> SemilinearSet {
        to_semilinear(&parse(formula).unwrap(), &coord_vars(n)).unwrap()
    }

    fn big(points: &[i64]) -> Vec<BigInt> {
        points.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn evens_halve() {
        let s = set("x1 = 0 mod 2", 1);
        let vb = construct_bijection(&s).unwrap();
        assert!(vb.all_hold(), "{:?}", vb.checks);
        for k in 0..20i64 {
            assert_eq!(vb.map.apply(&big(&[2 * k])), Some(big(&[k])));
            assert_eq!(vb.map.apply(&big(&[2 * k + 1])), None);
        }
    }

    #[test]
    fn identity_on_full_plane() {
        let s = set("0 <= x1", 2);
        let vb = construct_bijection(&s).unwrap();
        assert!(vb.all_hold());
        assert_eq!(vb.map.apply(&big(&[3, 5])), Some(big(&[3, 5])));
    }

    #[test]
    fn two_lines_interleave() {
        // two disjoint lines in N^2 map onto N with images on evens/odds
        let s = set("x2 = 2*x1 | (x2 = 3*x1 + 1 & 0 <= x1)", 2);
        assert_eq!(s.dimension().unwrap(), 1);
        let vb = construct_bijection(&s).unwrap();
        assert!(vb.all_hold(), "{:?}", vb.checks.iter().map(|c| (c.name, c.holds)).collect::<Vec<_>>());
        // pointwise: images must be pairwise distinct over the first points
        let mut seen = std::collections::BTreeSet::new();
        let pts = s.enumerate(&BigInt::from(100));
        for p in pts.iter().take(100) {
            let img = vb.map.apply(p).expect("domain point");
            assert!(seen.insert(img.clone()), "duplicate image {img:?}");
        }
    }

    #[test]
    fn mixed_dimensions() {
        // a full quadrant plus an isolated point off it
        let s = set("(2 <= x1 & 2 <= x2) | (x1 = 0 & x2 = 0)", 2);
        let vb = construct_bijection(&s).unwrap();
        assert!(vb.all_hold());
    }

    #[test]
    fn finite_or_empty_rejected() {
        let s = set("x1 + x2 = 2", 2);
        assert!(matches!(
            construct_bijection(&s),
            Err(SemilinError::NotInfinite("finite"))
        ));
        let s = set("x1 < x1", 1);
        assert!(matches!(
            construct_bijection(&s),
            Err(SemilinError::NotInfinite("empty"))
        ));
    }

    #[test]
    fn graph_of_shift() {
        let g = parse("y = x1 + 3").unwrap();
        let m = piecewise_linear_from_graph(&g, &coord_vars(1), "y").unwrap();
        for x in 0..10i64 {
            assert_eq!(m.apply(&big(&[x])), Some(big(&[x + 3])));
        }
    }

    #[test]
    fn graph_of_halving() {
        // y = floor(x/2) via x = 2y | x = 2y + 1
        let g = parse("x1 = 2*y | x1 = 2*y + 1").unwrap();
        let m = piecewise_linear_from_graph(&g, &coord_vars(1), "y").unwrap();
        for x in 0..101i64 {
            assert_eq!(m.apply(&big(&[x])), Some(big(&[x / 2])), "x = {x}");
        }
    }

    #[test]
    fn non_function_graphs_rejected() {
        let g = parse("y <= x1").unwrap();
        assert!(matches!(
            piecewise_linear_from_graph(&g, &coord_vars(1), "y"),
            Err(SemilinError::NotAFunction {
                property: "functional",
                ..
            })
        ));
        let g = parse("y + y = x1").unwrap();
        assert!(matches!(
            piecewise_linear_from_graph(&g, &coord_vars(1), "y"),
            Err(SemilinError::NotAFunction {
                property: "total",
                ..
            })
        ));
    }
}
