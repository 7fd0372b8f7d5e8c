//! Decomposition of a definable set into disjoint fundamental lattices.
//!
//! The pipeline: quantifier elimination, disjoint path-DNF into cubes, then a
//! recursion on the last coordinate `z`. Within a cube the constraints on
//! `z` (scaled to `zeta = delta*z`) are interval bounds with parametric
//! endpoints plus congruences. Case splits on which lower bound is maximal,
//! which upper bound is minimal, the residue class of `zeta` and the residue
//! of the active lower bound turn each case into a region (a definable set in
//! the remaining coordinates, decomposed recursively) carrying a fiber
//! `zeta = alpha + M*q` with `alpha` linear on the region. Unbounded fibers
//! lift region lattices directly; bounded fibers reduce to staircase sets
//! `{(k, q) : M*q <= V0 + sum gamma_j k_j}` decomposed by explicit
//! combinatorics below.

use super::{FundamentalLattice, SemilinError, SemilinearSet};
use crate::solve::qf::{analyze_cube, expand_eq, from_formula, path_dnf, Lit, SplitOrder};
use crate::solve::{eliminate_quantifiers, satisfiable};
use crate::syntax::{evaluate, Assignment, Formula, LinearForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A lattice under construction: no invariant checks, ambient dimension is
/// the base length (0 allowed during recursion).
#[derive(Debug, Clone)]
struct RawLat {
    base: Vec<BigInt>,
    periods: Vec<Vec<BigInt>>,
}

impl RawLat {
    fn point() -> RawLat {
        RawLat {
            base: Vec::new(),
            periods: Vec::new(),
        }
    }
}

/// Decompose the set `{x in N^n : f(x)}` into disjoint fundamental lattices,
/// splitting cubes in the given order.
pub fn to_semilinear_with_order(
    f: &Formula,
    vars: &[String],
    order: SplitOrder,
) -> Result<SemilinearSet, SemilinError> {
    if vars.is_empty() {
        return Err(SemilinError::ZeroAmbient);
    }
    let extra: Vec<String> = f
        .free_vars()
        .into_iter()
        .filter(|v| !vars.contains(v))
        .collect();
    if !extra.is_empty() {
        return Err(SemilinError::ExtraVariables { extra });
    }
    let f = eliminate_quantifiers(f);
    let raw = decompose(&f, vars, order);
    let lattices = raw
        .into_iter()
        .map(|r| FundamentalLattice::new(r.base, r.periods))
        .collect::<Result<Vec<_>, _>>()?;
    SemilinearSet::new(vars.len(), lattices)
}

fn decompose(f: &Formula, vars: &[String], order: SplitOrder) -> Vec<RawLat> {
    if vars.is_empty() {
        let truth = evaluate(f, &Assignment::new()).expect("ground formula");
        return if truth { vec![RawLat::point()] } else { Vec::new() };
    }
    if !satisfiable(f) {
        return Vec::new();
    }
    let qf = expand_eq(&from_formula(f));
    let mut out = Vec::new();
    for cube in path_dnf(&qf, order) {
        out.extend(decompose_cube(&cube, vars, order));
    }
    out
}

fn decompose_cube(cube: &[Lit], vars: &[String], order: SplitOrder) -> Vec<RawLat> {
    let (rest_vars, z) = (&vars[..vars.len() - 1], vars.last().unwrap());
    let shape = analyze_cube(z, cube);
    let guard_f = Formula::and(shape.guard.iter().map(|l| l.to_formula()).collect());

    if !shape.has_z {
        // z is unconstrained: region x N
        return decompose(&guard_f, rest_vars, order)
            .into_iter()
            .map(|j| lift_free(&j))
            .collect();
    }

    let m = shape.modulus();
    let delta = &shape.delta;
    let mut lowers = shape.lowers.clone();
    lowers.push(LinearForm::constant(0));
    lowers.sort();
    lowers.dedup();
    let mut uppers = shape.uppers.clone();
    uppers.sort();
    uppers.dedup();

    let mut out = Vec::new();
    let mut rho = BigInt::zero();
    while rho < m {
        let mut cong = Vec::new();
        for (n, e) in &shape.divs {
            cong.push(Formula::atom_mod(e.add_constant(rho.clone()), n.clone()));
        }
        for (n, e) in &shape.notdivs {
            cong.push(Formula::not(Formula::atom_mod(
                e.add_constant(rho.clone()),
                n.clone(),
            )));
        }
        let cong_guard = Formula::and(cong);
        if cong_guard == Formula::False {
            rho += 1;
            continue;
        }
        for (i_star, l_term) in lowers.iter().enumerate() {
            let max_guard = Formula::and(
                lowers
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != i_star)
                    .map(|(i, l)| {
                        if i < i_star {
                            Formula::lt(l.clone(), l_term.clone())
                        } else {
                            Formula::le(l.clone(), l_term.clone())
                        }
                    })
                    .collect(),
            );
            let mut lambda = BigInt::zero();
            while lambda < m {
                let align = Formula::atom_mod(l_term.add_constant(-lambda.clone()), m.clone());
                if align == Formula::False {
                    lambda += 1;
                    continue;
                }
                let offset = (&rho - &lambda).mod_floor(&m);
                let alpha = l_term.add_constant(offset);
                let base_guard = Formula::and(vec![
                    guard_f.clone(),
                    cong_guard.clone(),
                    max_guard.clone(),
                    align,
                ]);
                if uppers.is_empty() {
                    for j in decompose(&base_guard, rest_vars, order) {
                        out.push(lift_unbounded(&j, &alpha, &m, delta, rest_vars));
                    }
                } else {
                    for (j_star, u_term) in uppers.iter().enumerate() {
                        let min_guard = Formula::and(
                            uppers
                                .iter()
                                .enumerate()
                                .filter(|(j, _)| *j != j_star)
                                .map(|(j, u)| {
                                    if j < j_star {
                                        Formula::lt(u_term.clone(), u.clone())
                                    } else {
                                        Formula::le(u_term.clone(), u.clone())
                                    }
                                })
                                .collect(),
                        );
                        let region = Formula::and(vec![
                            base_guard.clone(),
                            min_guard,
                            Formula::le(alpha.clone(), u_term.clone()),
                        ]);
                        if !satisfiable(&region) {
                            continue;
                        }
                        let v_form = u_term.sub(&alpha);
                        for j in decompose(&region, rest_vars, order) {
                            out.extend(lift_bounded(&j, &alpha, &v_form, &m, delta, rest_vars));
                        }
                    }
                }
                lambda += 1;
            }
        }
        rho += 1;
    }
    out
}

/// Value of a linear form at a point of the region coordinate space.
fn value_at(form: &LinearForm, point: &[BigInt], vars: &[String]) -> BigInt {
    let mut acc = form.constant_part().clone();
    for (v, p) in vars.iter().zip(point) {
        acc += form.coeff(v) * p;
    }
    acc
}

/// Increment of a linear form along each period of a region lattice.
fn increments(form: &LinearForm, j: &RawLat, vars: &[String]) -> Vec<BigInt> {
    j.periods
        .iter()
        .map(|p| {
            let mut acc = BigInt::zero();
            for (v, x) in vars.iter().zip(p) {
                acc += form.coeff(v) * x;
            }
            acc
        })
        .collect()
}

/// Region lattice with a fully unconstrained last coordinate.
fn lift_free(j: &RawLat) -> RawLat {
    let mut base = j.base.clone();
    base.push(BigInt::zero());
    let mut periods: Vec<Vec<BigInt>> = j
        .periods
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(BigInt::zero());
            q
        })
        .collect();
    let mut e = vec![BigInt::zero(); j.base.len()];
    e.push(BigInt::one());
    periods.push(e);
    RawLat { base, periods }
}

/// Fiber `zeta = alpha + M*q`, `q >= 0` over a region lattice; `alpha` is
/// divisible by `delta` and nonnegative pointwise on the region, hence its
/// base value and increments along region periods are too.
fn lift_unbounded(
    j: &RawLat,
    alpha: &LinearForm,
    m: &BigInt,
    delta: &BigInt,
    vars: &[String],
) -> RawLat {
    let a0 = value_at(alpha, &j.base, vars);
    debug_assert!(!a0.is_negative() && (&a0 % delta).is_zero());
    let incs = increments(alpha, j, vars);
    let mut base = j.base.clone();
    base.push(&a0 / delta);
    let mut periods: Vec<Vec<BigInt>> = Vec::new();
    for (p, inc) in j.periods.iter().zip(&incs) {
        debug_assert!(!inc.is_negative() && (inc % delta).is_zero());
        let mut q = p.clone();
        q.push(inc / delta);
        periods.push(q);
    }
    let mut e = vec![BigInt::zero(); j.base.len()];
    debug_assert!((m % delta).is_zero());
    e.push(m / delta);
    periods.push(e);
    RawLat { base, periods }
}

/// Fiber `zeta = alpha + M*q`, `0 <= M*q <= V` over a region lattice: the
/// index set `{(k, q) : M*q <= V0 + sum gamma_j k_j}` is decomposed into
/// staircase lattices and mapped into the ambient space.
fn lift_bounded(
    j: &RawLat,
    alpha: &LinearForm,
    v_form: &LinearForm,
    m: &BigInt,
    delta: &BigInt,
    vars: &[String],
) -> Vec<RawLat> {
    let v0 = value_at(v_form, &j.base, vars);
    debug_assert!(!v0.is_negative());
    let gammas = increments(v_form, j, vars);
    debug_assert!(gammas.iter().all(|g| !g.is_negative()));
    let alpha_incs = increments(alpha, j, vars);
    let r = j.periods.len();

    let mut out = Vec::new();
    for s in simplex_decompose(m, &v0, &gammas) {
        // ambient base
        let mut base_x = j.base.clone();
        for (kj, p) in s.base[..r].iter().zip(&j.periods) {
            for (b, x) in base_x.iter_mut().zip(p) {
                *b += kj * x;
            }
        }
        let zeta = value_at(alpha, &base_x, vars) + m * &s.base[r];
        debug_assert!(!zeta.is_negative() && (&zeta % delta).is_zero());
        let mut base = base_x;
        base.push(&zeta / delta);
        // ambient periods
        let mut periods = Vec::new();
        for p in &s.periods {
            let mut dx = vec![BigInt::zero(); j.base.len()];
            let mut dzeta = m * &p[r];
            for (kj, (jp, inc)) in p[..r].iter().zip(j.periods.iter().zip(&alpha_incs)) {
                for (d, x) in dx.iter_mut().zip(jp) {
                    *d += kj * x;
                }
                dzeta += kj * inc;
            }
            debug_assert!(!dzeta.is_negative() && (&dzeta % delta).is_zero());
            dx.push(&dzeta / delta);
            periods.push(dx);
        }
        out.push(RawLat {
            base,
            periods,
        });
    }
    out
}

/// Disjoint fundamental decomposition of
/// `{(k_1..k_r, q) in N^{r+1} : M*q <= V0 + sum gamma_j k_j}`.
fn simplex_decompose(m: &BigInt, v0: &BigInt, gammas: &[BigInt]) -> Vec<RawLat> {
    let r = gammas.len();
    let pos: Vec<usize> = (0..r).filter(|&j| gammas[j].is_positive()).collect();
    let pos_gammas: Vec<BigInt> = pos.iter().map(|&j| gammas[j].clone()).collect();

    // core decomposition over (u_pos..., q)
    let mut core: Vec<RawLat> = Vec::new();
    if m.is_one() {
        core.extend(budget_decompose(v0, &pos_gammas));
    } else {
        // split the contributing coordinates by residue mod M; on each class
        // the floor of the budget is constant and the slope divides by M
        let mut residues = vec![BigInt::zero(); pos.len()];
        loop {
            let val = v0
                + pos_gammas
                    .iter()
                    .zip(&residues)
                    .fold(BigInt::zero(), |acc, (g, r)| acc + g * r);
            let f0 = val.div_floor(m);
            for lat in budget_decompose(&f0, &pos_gammas) {
                // map back u_j -> residue_j + M*u_j
                let mut base = lat.base.clone();
                for (b, rj) in base[..pos.len()].iter_mut().zip(&residues) {
                    *b = rj + m * &*b;
                }
                let periods = lat
                    .periods
                    .iter()
                    .map(|p| {
                        let mut q = p.clone();
                        for x in q[..pos.len()].iter_mut() {
                            *x = m * &*x;
                        }
                        q
                    })
                    .collect();
                core.push(RawLat { base, periods });
            }
            // advance the residue odometer
            let mut i = 0;
            loop {
                if i == residues.len() {
                    break;
                }
                residues[i] += 1;
                if residues[i] < *m {
                    break;
                }
                residues[i] = BigInt::zero();
                i += 1;
            }
            if i == residues.len() {
                break;
            }
        }
    }

    // reinsert the zero-slope coordinates as free directions
    core.into_iter()
        .map(|lat| embed_free(&lat, &pos, r))
        .collect()
}

/// Map a lattice over coordinates (u_pos..., q) into (k_1..k_r, q), adding a
/// free unit period for every coordinate not in `pos`.
fn embed_free(lat: &RawLat, pos: &[usize], r: usize) -> RawLat {
    let expand = |v: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); r + 1];
        for (i, &j) in pos.iter().enumerate() {
            out[j] = v[i].clone();
        }
        out[r] = v[pos.len()].clone();
        out
    };
    let base = expand(&lat.base);
    let mut periods: Vec<Vec<BigInt>> = lat.periods.iter().map(|p| expand(p)).collect();
    for j in 0..r {
        if !pos.contains(&j) {
            let mut e = vec![BigInt::zero(); r + 1];
            e[j] = BigInt::one();
            periods.push(e);
        }
    }
    RawLat { base, periods }
}

/// `{(u_1..u_r, q) : q <= f0 + sum g_j u_j}` with `f0 >= 0` and every
/// `g_j >= 1`, coordinates `(u..., q)`.
fn budget_decompose(f0: &BigInt, gammas: &[BigInt]) -> Vec<RawLat> {
    if f0.is_negative() {
        return shortfall_decompose(&-f0, gammas);
    }
    let r = gammas.len();
    if r == 0 {
        let mut out = Vec::new();
        let mut q0 = BigInt::zero();
        while q0 <= *f0 {
            out.push(RawLat {
                base: vec![q0.clone()],
                periods: vec![],
            });
            q0 += 1;
        }
        return out;
    }
    let g1 = &gammas[0];
    let rest = &gammas[1..];
    let mut out = Vec::new();

    // D0: q <= f0 + g1*u1, remaining budget coordinates free
    for lat in staircase(f0, g1) {
        // embed (u, q) -> (u_1, u_2..u_r, q)
        let embed = |v: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); r + 1];
            out[0] = v[0].clone();
            out[r] = v[1].clone();
            out
        };
        let base = embed(&lat.base);
        let mut periods: Vec<Vec<BigInt>> = lat.periods.iter().map(|p| embed(p)).collect();
        for j in 1..r {
            let mut e = vec![BigInt::zero(); r + 1];
            e[j] = BigInt::one();
            periods.push(e);
        }
        out.push(RawLat { base, periods });
    }

    // D1: q = f0 + g1*u1 + 1 + s with s + 1 <= sum_{j>=2} g_j u_j;
    // u1 becomes a diagonal direction raising q by g1
    for lat in shortfall_decompose(&BigInt::one(), rest) {
        // lat is over (u_2..u_r, s)
        let mut base = vec![BigInt::zero(); r + 1];
        for (i, b) in lat.base[..r - 1].iter().enumerate() {
            base[1 + i] = b.clone();
        }
        base[r] = f0 + BigInt::one() + &lat.base[r - 1];
        let mut periods = Vec::new();
        let mut diag = vec![BigInt::zero(); r + 1];
        diag[0] = BigInt::one();
        diag[r] = g1.clone();
        periods.push(diag);
        for p in &lat.periods {
            let mut q = vec![BigInt::zero(); r + 1];
            for (i, x) in p[..r - 1].iter().enumerate() {
                q[1 + i] = x.clone();
            }
            q[r] = p[r - 1].clone();
            periods.push(q);
        }
        out.push(RawLat { base, periods });
    }
    out
}

/// `{(u_1..u_r, s) : s + c <= sum g_j u_j}` with `c >= 1`, `g_j >= 1`.
fn shortfall_decompose(c: &BigInt, gammas: &[BigInt]) -> Vec<RawLat> {
    debug_assert!(c.is_positive());
    let r = gammas.len();
    if r == 0 {
        return Vec::new(); // s + c <= 0 is impossible
    }
    let g1 = &gammas[0];
    let m1 = c.div_ceil(g1);
    let mut out = Vec::new();

    // u1 >= m1: budget becomes nonnegative
    let f0 = g1 * &m1 - c;
    for lat in budget_decompose(&f0, gammas) {
        let mut base = lat.base.clone();
        base[0] += &m1;
        out.push(RawLat {
            base,
            periods: lat.periods.clone(),
        });
    }

    // u1 = v < m1: recurse on the remaining coordinates
    let mut v = BigInt::zero();
    while v < m1 {
        let c2 = c - g1 * &v;
        debug_assert!(c2.is_positive());
        for lat in shortfall_decompose(&c2, &gammas[1..]) {
            // lat is over (u_2..u_r, s): prepend the fixed u_1 = v
            let mut base = vec![v.clone()];
            base.extend(lat.base.iter().cloned());
            let periods = lat
                .periods
                .iter()
                .map(|p| {
                    let mut q = vec![BigInt::zero()];
                    q.extend(p.iter().cloned());
                    q
                })
                .collect();
            out.push(RawLat { base, periods });
        }
        v += 1;
    }
    out
}

/// `{(u, q) in N^2 : q <= f0 + g*u}` with `f0 >= 0`, `g >= 1`.
fn staircase(f0: &BigInt, g: &BigInt) -> Vec<RawLat> {
    let mut out = Vec::new();
    // rows q = q0 <= f0, u free
    let mut q0 = BigInt::zero();
    while q0 <= *f0 {
        out.push(RawLat {
            base: vec![BigInt::zero(), q0.clone()],
            periods: vec![vec![BigInt::one(), BigInt::zero()]],
        });
        q0 += 1;
    }
    // the strip f0 < q <= f0 + g*u: for each offset into a diagonal block
    let mut ell = BigInt::zero();
    while ell < *g {
        out.push(RawLat {
            base: vec![BigInt::one(), f0 + BigInt::one() + &ell],
            periods: vec![
                vec![BigInt::one(), g.clone()],
                vec![BigInt::one(), BigInt::zero()],
            ],
        });
        ell += 1;
    }
    out
}

#[cfg(test)]
mod staircase_tests {
    use super::*;

    /// Oracle: membership of (k..., q) in a raw lattice by brute force over
    /// small coefficient vectors.
    fn lattice_points(lats: &[RawLat], bound: i64) -> Vec<Vec<i64>> {
        let mut all = Vec::new();
        for lat in lats {
            let dim = lat.base.len();
            let r = lat.periods.len();
            let mut coeffs = vec![0i64; r];
            loop {
                let mut pt: Vec<BigInt> = lat.base.clone();
                for (c, p) in coeffs.iter().zip(&lat.periods) {
                    for (x, y) in pt.iter_mut().zip(p) {
                        *x += BigInt::from(*c) * y;
                    }
                }
                let small: Option<Vec<i64>> = pt
                    .iter()
                    .map(|x| {
                        let v: i64 = x.try_into().ok()?;
                        (v <= bound).then_some(v)
                    })
                    .collect();
                if let Some(v) = small {
                    assert_eq!(v.len(), dim);
                    all.push(v);
                }
                // odometer over coefficients up to bound (periods are
                // nonzero so larger coefficients leave the box)
                let mut i = 0;
                loop {
                    if i == r {
                        break;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] <= bound {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
                if r == 0 || i == r {
                    break;
                }
            }
        }
        all
    }

    fn check_simplex(m: i64, v0: i64, gammas: &[i64], bound: i64) {
        let gs: Vec<BigInt> = gammas.iter().map(|&g| BigInt::from(g)).collect();
        let lats = simplex_decompose(&BigInt::from(m), &BigInt::from(v0), &gs);
        let pts = lattice_points(&lats, bound);
        // disjointness: no duplicates
        let mut sorted = pts.clone();
        sorted.sort();
        let n0 = sorted.len();
        sorted.dedup();
        assert_eq!(n0, sorted.len(), "overlap for m={m} v0={v0} gammas={gammas:?}");
        // coverage vs the defining inequality
        let r = gammas.len();
        let mut point = vec![0i64; r + 1];
        loop {
            let lhs = m * point[r];
            let rhs = v0 + gammas.iter().zip(&point[..r]).map(|(g, k)| g * k).sum::<i64>();
            let want = lhs <= rhs;
            let got = sorted.binary_search(&point).is_ok();
            assert_eq!(
                got, want,
                "m={m} v0={v0} gammas={gammas:?} at {point:?}"
            );
            let mut i = 0;
            loop {
                if i == r + 1 {
                    return;
                }
                point[i] += 1;
                if point[i] <= bound {
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn staircase_small() {
        check_simplex(1, 0, &[1], 12);
        check_simplex(1, 0, &[3], 12);
        check_simplex(1, 2, &[2], 12);
        check_simplex(2, 3, &[3], 12);
        check_simplex(3, 0, &[2], 12);
    }

    #[test]
    fn simplex_two_budgets() {
        check_simplex(1, 0, &[1, 1], 8);
        check_simplex(1, 1, &[2, 3], 8);
        check_simplex(2, 0, &[1, 2], 8);
        check_simplex(2, 5, &[3, 1], 8);
    }

    #[test]
    fn simplex_with_zero_slopes() {
        check_simplex(1, 2, &[0], 10);
        check_simplex(1, 0, &[0, 2], 8);
        check_simplex(2, 1, &[2, 0], 8);
        check_simplex(1, 3, &[], 10);
        check_simplex(2, 0, &[], 10);
    }

    #[test]
    fn simplex_three_budgets() {
        check_simplex(1, 0, &[1, 2, 1], 5);
        check_simplex(2, 1, &[1, 0, 3], 5);
    }
}
