//! The solution-counting function of an integer matrix:
//! `phi_M(u) = |{a in N^n : M a = u}|`, its exact evaluation, and its
//! reconstruction as a piecewise polynomial of degree at most
//! `n - rank(M)` over the attainable right-hand sides.

use super::poly::tensor_points;
use super::{CardinalError, LatticePolynomial, PiecewisePoly, Poly};
use crate::linalg::{rank, rat, Rat};
use crate::semilin::{to_semilinear, FundamentalLattice};
use crate::solve::decide;
use crate::syntax::{Formula, LinearForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// An integer matrix whose columns index the counted unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

/// Result of a solution count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Count {
    Finite(BigInt),
    Infinite,
}

impl CountMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<CountMatrix, CardinalError> {
        let rows = entries.len();
        if rows == 0 {
            return Err(CardinalError::DimensionMismatch(
                "matrix needs at least one row".into(),
            ));
        }
        let cols = entries[0].len();
        if cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(CardinalError::DimensionMismatch(
                "rows must be nonempty and of equal length".into(),
            ));
        }
        Ok(CountMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(entries: &[&[i64]]) -> CountMatrix {
        CountMatrix::new(
            entries
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("nonempty matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        let m: Vec<Vec<Rat>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| rat(x.clone())).collect())
            .collect();
        rank(&m)
    }

    /// `M a = u` as equations over variables `a1..an`.
    fn system(&self, avars: &[String], u: &[BigInt]) -> Formula {
        Formula::and(
            self.entries
                .iter()
                .zip(u)
                .map(|(row, ur)| {
                    let mut form = LinearForm::constant(-ur.clone());
                    for (c, a) in row.iter().zip(avars) {
                        form = form.add(&LinearForm::term(c.clone(), a));
                    }
                    Formula::atom_eq(form)
                })
                .collect(),
        )
    }

    fn avars(&self) -> Vec<String> {
        (1..=self.cols).map(|j| format!("a{j}")).collect()
    }

    /// Does the kernel contain a nonzero nonnegative vector? Decided
    /// symbolically.
    pub fn has_positive_kernel(&self) -> bool {
        let avars = self.avars();
        let zero = vec![BigInt::zero(); self.rows];
        let mut sum = LinearForm::constant(-1);
        for a in &avars {
            sum = sum.add(&LinearForm::var(a));
        }
        // E a. M a = 0 & sum a >= 1
        let mut f = Formula::and(vec![
            self.system(&avars, &zero),
            Formula::atom_le(sum.neg()),
        ]);
        for a in avars.into_iter().rev() {
            f = Formula::exists(a, f);
        }
        decide(&f).expect("closed sentence")
    }

    /// A nonzero nonnegative kernel vector, by enumeration over growing
    /// boxes (exists exactly when [`Self::has_positive_kernel`]).
    pub fn kernel_witness(&self) -> Option<Vec<BigInt>> {
        if !self.has_positive_kernel() {
            return None;
        }
        let mut bound = 1i64;
        loop {
            let mut a = vec![0i64; self.cols];
            loop {
                if a.iter().any(|&x| x > 0) {
                    let v: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
                    if self.mul(&v).iter().all(|x| x.is_zero()) {
                        return Some(v);
                    }
                }
                let mut i = 0;
                loop {
                    if i == self.cols {
                        break;
                    }
                    a[i] += 1;
                    if a[i] <= bound {
                        break;
                    }
                    a[i] = 0;
                    i += 1;
                }
                if i == self.cols {
                    break;
                }
            }
            bound *= 2;
        }
    }

    pub fn mul(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(a).fold(BigInt::zero(), |s, (c, x)| s + c * x))
            .collect()
    }

    /// Is `u` attainable, i.e. is `{a : M a = u}` nonempty? Decided
    /// symbolically.
    pub fn attainable(&self, u: &[BigInt]) -> bool {
        let avars = self.avars();
        let mut f = self.system(&avars, u);
        for a in avars.into_iter().rev() {
            f = Formula::exists(a, f);
        }
        decide(&f).expect("closed sentence")
    }

    /// A reusable exact counter: the kernel condition and the dual bounding
    /// vector are computed once, counts are memoized across calls.
    pub fn evaluator(&self) -> PhiEvaluator<'_> {
        let finite = !self.has_positive_kernel();
        let lambda = finite.then(|| self.bounding_functional());
        PhiEvaluator {
            matrix: self,
            lambda,
            memo: HashMap::new(),
        }
    }

    /// An integer row vector `lambda` with `lambda^T M >= 1` componentwise;
    /// exists precisely when the kernel meets the nonnegative orthant only
    /// in 0 (Gordan), found by enumeration over growing boxes.
    fn bounding_functional(&self) -> Vec<BigInt> {
        let mut bound = 1i64;
        loop {
            let mut lam = vec![-bound; self.rows];
            loop {
                let ok = (0..self.cols).all(|j| {
                    let g: i64 = (0..self.rows)
                        .map(|i| {
                            let e: i64 = (&self.entries[i][j]).try_into().unwrap_or(0);
                            lam[i] * e
                        })
                        .sum();
                    g >= 1
                });
                if ok {
                    return lam.iter().map(|&x| BigInt::from(x)).collect();
                }
                let mut i = 0;
                loop {
                    if i == self.rows {
                        break;
                    }
                    lam[i] += 1;
                    if lam[i] <= bound {
                        break;
                    }
                    lam[i] = -bound;
                    i += 1;
                }
                if i == self.rows {
                    break;
                }
            }
            bound *= 2;
        }
    }
}

/// Exact counting via recursive elimination of one column at a time with
/// memoization; the dual functional bounds the feasible range of each
/// unknown.
pub struct PhiEvaluator<'a> {
    matrix: &'a CountMatrix,
    /// present when all counts are finite
    lambda: Option<Vec<BigInt>>,
    memo: HashMap<(usize, Vec<BigInt>), BigInt>,
}

impl PhiEvaluator<'_> {
    pub fn is_always_finite(&self) -> bool {
        self.lambda.is_some()
    }

    pub fn count(&mut self, u: &[BigInt]) -> Count {
        assert_eq!(u.len(), self.matrix.rows);
        if self.lambda.is_none() {
            return if self.matrix.attainable(u) {
                Count::Infinite
            } else {
                Count::Finite(BigInt::zero())
            };
        }
        Count::Finite(self.count_from(0, u.to_vec()))
    }

    fn count_from(&mut self, j: usize, residual: Vec<BigInt>) -> BigInt {
        if j == self.matrix.cols {
            return if residual.iter().all(|x| x.is_zero()) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if let Some(c) = self.memo.get(&(j, residual.clone())) {
            return c.clone();
        }
        let lambda = self.lambda.as_ref().expect("finite mode");
        // every remaining unknown is bounded by lambda^T residual
        let s: BigInt = lambda
            .iter()
            .zip(&residual)
            .fold(BigInt::zero(), |acc, (l, r)| acc + l * r);
        let mut total = BigInt::zero();
        if !s.is_negative() {
            let mut v = BigInt::zero();
            while v <= s {
                let next: Vec<BigInt> = residual
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r - &self.matrix.entries[i][j] * &v)
                    .collect();
                total += self.count_from(j + 1, next);
                v += 1;
            }
        }
        self.memo.insert((j, residual), total.clone());
        total
    }
}

/// `|{a in N^n : M a = u}|`, or `Infinite` when the kernel meets the
/// nonnegative orthant nontrivially and `u` is attainable.
pub fn phi_count(m: &CountMatrix, u: &[BigInt]) -> Result<Count, CardinalError> {
    if u.len() != m.rows {
        return Err(CardinalError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            u.len(),
            m.rows
        )));
    }
    Ok(m.evaluator().count(u))
}

/// Reconstruct `phi_M` as a piecewise polynomial over the attainable set,
/// with degree at most `cols - rank(M)`.
///
/// The attainable set is split by sign orthant and by the conic walls
/// spanned by column subsets, decomposed into fundamental lattices, and the
/// polynomial on each lattice is recovered by exact interpolation under the
/// known degree bound. A verification grid guards against quasi-polynomial
/// period mismatches; on failure the lattice is refined by residues until
/// the piece is genuinely polynomial.
pub fn phi_function(m: &CountMatrix) -> Result<PiecewisePoly, CardinalError> {
    if m.has_positive_kernel() {
        let witness = m.kernel_witness().expect("kernel is nontrivial");
        return Err(CardinalError::InfiniteCount { witness });
    }
    let mut eval = m.evaluator();
    let d = (m.cols - m.rank()) as u32;
    let dmax = quasi_period_bound(m);
    let divisors = divisors_of(&dmax);

    let mut pieces = Vec::new();
    let uvars: Vec<String> = (1..=m.rows).map(|i| format!("u{i}")).collect();
    let walls = wall_normals(m);

    for signs in sign_patterns(m.rows) {
        let formula = attainable_orthant_formula(m, &uvars, &signs, &walls);
        let set = to_semilinear(&formula, &uvars)?;
        for lat in set.lattices() {
            let refined = interpolate_on_lattice(&mut eval, lat, &signs, d, &divisors)
                .ok_or(CardinalError::Interpolation)?;
            for (sublat, poly) in refined {
                pieces.push(LatticePolynomial::with_signs(
                    sublat,
                    signs.clone(),
                    poly,
                ));
            }
        }
    }
    Ok(PiecewisePoly::new(m.rows, pieces))
}

fn sign_patterns(mrows: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![]];
    for _ in 0..mrows {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i8>| {
                [1i8, -1].into_iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    out
}

/// `E a >= 0. M a = sigma * u` over nonnegative `u`-variables, where flipped
/// coordinates additionally require `u_i >= 1`, intersected with sign-split
/// tautologies for every wall normal (so cubes never straddle a wall).
fn attainable_orthant_formula(
    m: &CountMatrix,
    uvars: &[String],
    signs: &[i8],
    walls: &[Vec<BigInt>],
) -> Formula {
    let avars: Vec<String> = (1..=m.cols).map(|j| format!("a{j}")).collect();
    let mut eqs = Vec::new();
    for (i, row) in m.entries.iter().enumerate() {
        let mut form = LinearForm::term(-BigInt::from(signs[i]), &uvars[i]);
        for (c, a) in row.iter().zip(&avars) {
            form = form.add(&LinearForm::term(c.clone(), a));
        }
        eqs.push(Formula::atom_eq(form));
    }
    for (i, &s) in signs.iter().enumerate() {
        if s < 0 {
            // represents u_i <= -1
            eqs.push(Formula::atom_le(
                LinearForm::term(-1, &uvars[i]).add_constant(1),
            ));
        }
    }
    let mut f = Formula::and(eqs);
    for a in avars.into_iter().rev() {
        f = Formula::exists(a, f);
    }
    // wall splits: conjoin (w*u < 0 | w*u = 0 | w*u > 0) per wall, in the
    // flipped coordinates
    let mut parts = vec![f];
    for w in walls {
        let mut form = LinearForm::constant(0);
        for ((wi, &s), v) in w.iter().zip(signs).zip(uvars) {
            form = form.add(&LinearForm::term(wi * BigInt::from(s), v));
        }
        parts.push(Formula::or(vec![
            Formula::atom_le(form.add_constant(1)),
            Formula::atom_eq(form.clone()),
            Formula::atom_le(form.neg().add_constant(1)),
        ]));
    }
    Formula::and(parts)
}

/// Integer normals of hyperplanes spanned by column subsets of size
/// `rank - 1`: the candidate chamber walls.
fn wall_normals(m: &CountMatrix) -> Vec<Vec<BigInt>> {
    let rho = m.rank();
    if rho == 0 {
        return Vec::new();
    }
    let cols: Vec<Vec<Rat>> = (0..m.cols)
        .map(|j| (0..m.rows).map(|i| rat(m.entries[i][j].clone())).collect())
        .collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for subset in subsets(m.cols, rho - 1) {
        // integer basis of the orthogonal complement of the chosen columns
        let normals = orthogonal_complement(&subset.iter().map(|&j| cols[j].clone()).collect::<Vec<_>>(), m.rows);
        for n in normals {
            // skip normals orthogonal to the whole column space
            let relevant = cols.iter().any(|c| {
                !c.iter()
                    .zip(&n)
                    .fold(Rat::zero(), |acc, (x, y)| acc + x * &rat(y.clone()))
                    .is_zero()
            });
            if !relevant {
                continue;
            }
            let canon = canonical_primitive(&n);
            if !out.contains(&canon) {
                out.push(canon);
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Integer spanning vectors of `{w : w . v = 0 for all given v}`.
fn orthogonal_complement(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<BigInt>> {
    // kernel of the matrix whose rows are the vectors: append identity and
    // row-reduce the transpose trick; small dims, do it directly
    let mut out = Vec::new();
    // solve w . v_k = 0: treat w as unknowns
    // build rows of the system: one row per vector
    for basis_idx in 0..dim {
        let _ = basis_idx;
    }
    // Gaussian: find kernel basis of the vectors-as-rows matrix
    let mut rows: Vec<Vec<Rat>> = vectors.to_vec();
    for r in rows.iter_mut() {
        debug_assert_eq!(r.len(), dim);
    }
    // reduce
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rr = 0usize;
    for c in 0..dim {
        if let Some(p) = (rr..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            rows.swap(rr, p);
            let inv = rows[rr][c].clone();
            for x in rows[rr].iter_mut() {
                *x = &*x / &inv;
            }
            for i in 0..rows.len() {
                if i != rr && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    let src = rows[rr].clone();
                    for (d, s) in rows[i].iter_mut().zip(&src) {
                        *d = &*d - &(&f * s);
                    }
                }
            }
            pivots.push((rr, c));
            rr += 1;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    for free in (0..dim).filter(|c| !pivot_cols.contains(c)) {
        let mut w = vec![Rat::zero(); dim];
        w[free] = rat(1);
        for &(r, c) in &pivots {
            w[c] = -rows[r][free].clone();
        }
        // clear denominators
        let mut scale = BigInt::one();
        for x in &w {
            scale = scale.lcm(x.denom());
        }
        out.push(
            w.iter()
                .map(|x| (x * &rat(scale.clone())).to_integer())
                .collect(),
        );
    }
    out
}

/// Primitive vector with canonical sign (first nonzero entry positive).
fn canonical_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -&*x;
            }
        }
    }
    out
}

fn quasi_period_bound(m: &CountMatrix) -> BigInt {
    let rho = m.rank();
    let mut d = BigInt::one();
    if rho == 0 {
        return d;
    }
    for cols in subsets(m.cols, rho) {
        for rows in subsets(m.rows, rho) {
            let det = determinant(&rows, &cols, m);
            if !det.is_zero() {
                d = d.lcm(&det.abs());
            }
        }
    }
    d
}

fn determinant(rows: &[usize], cols: &[usize], m: &CountMatrix) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    // Laplace expansion; n <= 3 in practice
    if n == 1 {
        return m.entries[rows[0]][cols[0]].clone();
    }
    let mut det = BigInt::zero();
    for (k, &c) in cols.iter().enumerate() {
        let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = determinant(&rows[1..], &minor_cols, m);
        let term = &m.entries[rows[0]][c] * sub;
        if k % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn divisors_of(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Interpolate the counting function on a lattice, refining by residues
/// until an independent verification grid matches.
fn interpolate_on_lattice(
    eval: &mut PhiEvaluator<'_>,
    lat: &FundamentalLattice,
    signs: &[i8],
    d: u32,
    divisors: &[BigInt],
) -> Option<Vec<(FundamentalLattice, Poly)>> {
    for step in divisors {
        let sublats = refine_lattice(lat, step);
        let mut out = Vec::new();
        let mut ok = true;
        for sub in &sublats {
            match try_interpolate(eval, sub, signs, d) {
                Some(poly) => out.push((sub.clone(), poly)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(out);
        }
    }
    None
}

/// Split every period into `step` copies: the sublattices with coefficient
/// offsets in `[0, step)^r` and periods scaled by `step`.
fn refine_lattice(lat: &FundamentalLattice, step: &BigInt) -> Vec<FundamentalLattice> {
    if step.is_one() || lat.dim() == 0 {
        return vec![lat.clone()];
    }
    let r = lat.dim();
    let mut offsets = vec![BigInt::zero(); r];
    let mut out = Vec::new();
    loop {
        let mut base = lat.base().to_vec();
        for (o, p) in offsets.iter().zip(lat.periods()) {
            for (b, x) in base.iter_mut().zip(p) {
                *b += o * x;
            }
        }
        let periods: Vec<Vec<BigInt>> = lat
            .periods()
            .iter()
            .map(|p| p.iter().map(|x| x * step).collect())
            .collect();
        out.push(FundamentalLattice::new(base, periods).expect("refinement stays fundamental"));
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            offsets[i] += 1;
            if offsets[i] < *step {
                break;
            }
            offsets[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Interpolate on the tensor grid `[0..d]^r` and verify on the shifted grid
/// `[d+1..2d+2]^r`; `None` when the lattice does not carry a single
/// polynomial of the required degree.
fn try_interpolate(
    eval: &mut PhiEvaluator<'_>,
    lat: &FundamentalLattice,
    signs: &[i8],
    d: u32,
) -> Option<Poly> {
    let r = lat.dim();
    let phi_at = |eval: &mut PhiEvaluator<'_>, coords: &[BigInt]| -> Rat {
        // ambient (unsigned) point, then signed right-hand side
        let mut pt = lat.base().to_vec();
        for (k, p) in coords.iter().zip(lat.periods()) {
            for (x, y) in pt.iter_mut().zip(p) {
                *x += k * y;
            }
        }
        let u: Vec<BigInt> = pt
            .iter()
            .zip(signs)
            .map(|(x, &s)| if s < 0 { -x } else { x.clone() })
            .collect();
        match eval.count(&u) {
            Count::Finite(c) => rat(c),
            Count::Infinite => unreachable!("finite mode"),
        }
    };

    let grid: Vec<BigInt> = (0..=d as i64).map(BigInt::from).collect();
    let pts = tensor_points(r, &grid);
    let values: Vec<Rat> = pts
        .iter()
        .map(|p| {
            let coords: Vec<BigInt> = p.iter().map(|x| x.to_integer()).collect();
            phi_at(eval, &coords)
        })
        .collect();
    let poly = Poly::interpolate(r, d, &grid, &values)?;
    if poly.total_degree() > d {
        return None;
    }
    // independent verification grid
    let check: Vec<BigInt> = ((d as i64 + 1)..=(2 * d as i64 + 2)).map(BigInt::from).collect();
    for p in tensor_points(r, &check) {
        let coords: Vec<BigInt> = p.iter().map(|x| x.to_integer()).collect();
        if poly.eval_int(&coords) != phi_at(eval, &coords) {
            return None;
        }
    }
    Some(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn count_pairs_summing() {
        let m = CountMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(phi_count(&m, &big(&[5])).unwrap(), Count::Finite(BigInt::from(6)));
    }

    #[test]
    fn count_weighted() {
        // a + 2b = 7: b in {0..3} -> 4 solutions
        let m = CountMatrix::from_i64(&[&[1, 2]]);
        assert_eq!(phi_count(&m, &big(&[7])).unwrap(), Count::Finite(BigInt::from(4)));
    }

    #[test]
    fn count_infinite_kernel() {
        let m = CountMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(phi_count(&m, &big(&[0])).unwrap(), Count::Infinite);
        // unattainable right-hand side counts zero even with a kernel
        let m2 = CountMatrix::from_i64(&[&[2, -2]]);
        assert_eq!(phi_count(&m2, &big(&[1])).unwrap(), Count::Finite(BigInt::zero()));
    }

    #[test]
    fn count_matches_brute_force() {
        let m = CountMatrix::from_i64(&[&[1, 2, 1], &[0, 1, 3]]);
        let mut eval = m.evaluator();
        for u1 in 0..8i64 {
            for u2 in 0..8i64 {
                let mut brute = 0;
                for a in 0..=u1 {
                    for b in 0..=u1 {
                        for c in 0..=u2.max(u1) {
                            if a + 2 * b + c == u1 && b + 3 * c == u2 {
                                brute += 1;
                            }
                        }
                    }
                }
                assert_eq!(
                    eval.count(&big(&[u1, u2])),
                    Count::Finite(BigInt::from(brute)),
                    "u = ({u1}, {u2})"
                );
            }
        }
    }

    #[test]
    fn phi_function_pairs() {
        let m = CountMatrix::from_i64(&[&[1, 1]]);
        let f = phi_function(&m).unwrap();
        assert!(f.degree() <= 1);
        let mut eval = m.evaluator();
        for u in 0..50i64 {
            let want = match eval.count(&big(&[u])) {
                Count::Finite(c) => rat(c),
                _ => unreachable!(),
            };
            assert_eq!(f.eval(&big(&[u])), Some(want), "u = {u}");
        }
    }

    #[test]
    fn phi_function_identity() {
        let m = CountMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let f = phi_function(&m).unwrap();
        assert_eq!(f.degree(), 0);
        assert_eq!(f.eval(&big(&[3, 4])), Some(rat(1)));
        assert_eq!(f.eval(&big(&[-1, 2])), None);
    }

    #[test]
    fn phi_function_even_only() {
        let m = CountMatrix::from_i64(&[&[2]]);
        let f = phi_function(&m).unwrap();
        assert_eq!(f.degree(), 0);
        assert_eq!(f.eval(&big(&[4])), Some(rat(1)));
        assert_eq!(f.eval(&big(&[3])), None);
    }

    #[test]
    fn phi_function_quasi_period() {
        // denumerant of {1, 2}: floor(u/2) + 1, split by parity
        let m = CountMatrix::from_i64(&[&[1, 2]]);
        let f = phi_function(&m).unwrap();
        assert!(f.degree() <= 1);
        let mut eval = m.evaluator();
        for u in 0..60i64 {
            let want = match eval.count(&big(&[u])) {
                Count::Finite(c) => rat(c),
                _ => unreachable!(),
            };
            assert_eq!(f.eval(&big(&[u])), Some(want), "u = {u}");
        }
    }

    #[test]
    fn phi_function_negative_entries() {
        // a - b = u with b bounded through the second row: kernel-free
        let m = CountMatrix::from_i64(&[&[1, -1], &[0, 1]]);
        assert!(!m.has_positive_kernel());
        let f = phi_function(&m).unwrap();
        let mut eval = m.evaluator();
        for u1 in -6..7i64 {
            for u2 in 0..7i64 {
                let want = match eval.count(&big(&[u1, u2])) {
                    Count::Finite(c) => rat(c),
                    _ => unreachable!(),
                };
                let got = f.eval(&big(&[u1, u2])).unwrap_or_else(Rat::zero);
                assert_eq!(got, want, "u = ({u1}, {u2})");
            }
        }
    }

    #[test]
    fn phi_function_infinite_is_error() {
        let m = CountMatrix::from_i64(&[&[1, -1]]);
        match phi_function(&m) {
            Err(CardinalError::InfiniteCount { witness }) => {
                assert_eq!(m.mul(&witness), big(&[0]));
                assert!(witness.iter().any(|x| x.is_positive()));
            }
            other => panic!("expected infinite-count error, got {other:?}"),
        }
    }
}
