//! Elimination of a counting quantifier over a single bound variable.
//!
//! With the body already quantifier-free, the solution set in the counted
//! variable decomposes (per disjoint cube of the path-DNF) into an interval
//! with parametric endpoints intersected with an arithmetic progression. Each
//! cube without an upper bound makes the solution set infinite whenever it is
//! nonempty, and a counting quantifier over an infinite set is false for
//! every count value. For the bounded cubes the cardinality is expressed
//! through the least element `a` and greatest element `b` of the progression
//! within the bounds: `M*w = b - a + M` elements.

use super::qf::{analyze_cube, expand_eq, from_formula, path_dnf, CubeShape, SplitOrder};
use crate::syntax::{fresh_var, Formula, LinearForm};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeSet;

/// The elimination result for `# z = y . body`: a quantifier-free formula in
/// the free variables of the count node, true exactly when the solution set
/// is finite with cardinality `y`.
pub fn count_to_formula(z: &str, y: &str, body: &Formula) -> Formula {
    debug_assert!(!body.has_quantifiers(), "body must be quantifier-free");
    let mut taken = body.all_vars();
    taken.insert(z.to_string());
    taken.insert(y.to_string());

    let cubes = path_dnf(&expand_eq(&from_formula(body)), SplitOrder::Forward);

    let mut finiteness = Vec::new();
    let mut cube_counts = Vec::new();
    for cube in &cubes {
        let a = analyze_cube(z, cube);
        if a.uppers.is_empty() && a.has_z {
            // nonempty would mean infinitely many solutions
            let cube_f = Formula::and(cube.iter().map(|l| l.to_formula()).collect());
            finiteness.push(Formula::not(Formula::exists(z, cube_f)));
        } else if !a.has_z {
            // the counted variable is unconstrained: any satisfying
            // assignment of the guard yields an infinite solution set
            let guard = Formula::and(a.guard.iter().map(|l| l.to_formula()).collect());
            finiteness.push(Formula::not(guard));
        } else {
            cube_counts.push(a);
        }
    }

    // E w_i. (each w_i counts its cube) & y = sum of w_i
    let mut ws = Vec::new();
    let mut parts = Vec::new();
    for (i, a) in cube_counts.iter().enumerate() {
        let w = fresh_var(&format!("w{i}"), &taken);
        taken.insert(w.clone());
        parts.push(cube_count(a, &w, &mut taken));
        ws.push(w);
    }
    let mut sum = LinearForm::var(y);
    for w in &ws {
        sum = sum.sub(&LinearForm::var(w));
    }
    parts.push(Formula::atom_eq(sum));
    let mut counted = Formula::and(parts);
    for w in ws.into_iter().rev() {
        counted = Formula::exists(w, counted);
    }
    finiteness.push(counted);
    let out = Formula::and(finiteness);
    super::eliminate_quantifiers(&out)
}

/// `w` equals the number of solutions of the cube. The scaled variable zeta
/// ranges over the naturals; for each residue class mod `M` the solutions
/// form a progression segment counted via its least and greatest elements.
fn cube_count(shape: &CubeShape, w: &str, taken: &mut BTreeSet<String>) -> Formula {
    let m = shape.modulus();

    let guard0 = Formula::and(shape.guard.iter().map(|l| l.to_formula()).collect());

    let mut residue_vars = Vec::new();
    let mut residue_parts = Vec::new();
    let mut rho = BigInt::zero();
    while rho < m {
        // congruence guards for this residue class
        let mut guards = Vec::new();
        for (n, e) in &shape.divs {
            guards.push(Formula::atom_mod(e.add_constant(rho.clone()), n.clone()));
        }
        for (n, e) in &shape.notdivs {
            guards.push(Formula::not(Formula::atom_mod(
                e.add_constant(rho.clone()),
                n.clone(),
            )));
        }
        let guard = Formula::and(guards);
        if guard == Formula::False {
            rho += 1;
            continue;
        }
        let wr = fresh_var(&format!("{w}r{rho}"), taken);
        taken.insert(wr.clone());
        residue_parts.push(residue_count(shape, &m, &rho, &guard, &wr, taken));
        residue_vars.push(wr);
        rho += 1;
    }

    let mut sum = LinearForm::var(w);
    for wr in &residue_vars {
        sum = sum.sub(&LinearForm::var(wr));
    }
    residue_parts.push(Formula::atom_eq(sum));
    let mut counted = Formula::and(residue_parts);
    for wr in residue_vars.into_iter().rev() {
        counted = Formula::exists(wr, counted);
    }

    // cube guard: when it fails the cube contributes zero
    Formula::or(vec![
        Formula::and(vec![guard0.clone(), counted]),
        Formula::and(vec![
            Formula::not(guard0),
            Formula::atom_eq(LinearForm::var(w)),
        ]),
    ])
}

/// `wr = |{zeta : zeta = rho (mod M), zeta >= lowers, zeta <= uppers}|`,
/// guarded by the residue-class congruence conditions on the parameters.
fn residue_count(
    shape: &CubeShape,
    m: &BigInt,
    rho: &BigInt,
    guard: &Formula,
    wr: &str,
    taken: &mut BTreeSet<String>,
) -> Formula {
    let alpha = fresh_var("qa", taken);
    taken.insert(alpha.clone());
    let beta = fresh_var("qb", taken);
    taken.insert(beta.clone());
    let gamma = fresh_var("qc", taken);
    taken.insert(gamma.clone());
    let prime = fresh_var("qp", taken);
    taken.insert(prime.clone());

    let in_class = |v: &str| {
        Formula::atom_mod(LinearForm::var(v).add_constant(-rho.clone()), m.clone())
    };
    let above_lowers = |v: &str| {
        Formula::and(
            shape
                .lowers
                .iter()
                .map(|l| Formula::le(l.clone(), LinearForm::var(v)))
                .collect(),
        )
    };
    let below_uppers = |v: &str| {
        Formula::and(
            shape
                .uppers
                .iter()
                .map(|u| Formula::le(LinearForm::var(v), u.clone()))
                .collect(),
        )
    };

    // least class element above the lower bounds
    let least = Formula::and(vec![
        above_lowers(&alpha),
        in_class(&alpha),
        Formula::forall(
            prime.clone(),
            Formula::implies(
                Formula::and(vec![above_lowers(&prime), in_class(&prime)]),
                Formula::le(LinearForm::var(&alpha), LinearForm::var(&prime)),
            ),
        ),
    ]);
    // greatest class element below the upper bounds
    let greatest = Formula::and(vec![
        below_uppers(&beta),
        in_class(&beta),
        Formula::forall(
            prime.clone(),
            Formula::implies(
                Formula::and(vec![below_uppers(&prime), in_class(&prime)]),
                Formula::le(LinearForm::var(&prime), LinearForm::var(&beta)),
            ),
        ),
    ]);
    // M * wr = beta - alpha + M
    let count_eq = Formula::atom_eq(
        LinearForm::term(m.clone(), wr)
            .sub(&LinearForm::var(&beta))
            .add(&LinearForm::var(&alpha))
            .add_constant(-m.clone()),
    );
    let nonempty_case = Formula::exists(
        alpha.clone(),
        Formula::exists(
            beta.clone(),
            Formula::and(vec![
                least,
                greatest,
                Formula::le(LinearForm::var(&alpha), LinearForm::var(&beta)),
                count_eq,
            ]),
        ),
    );
    let empty_case = Formula::and(vec![
        Formula::atom_eq(LinearForm::var(wr)),
        Formula::not(Formula::exists(
            gamma.clone(),
            Formula::and(vec![
                above_lowers(&gamma),
                below_uppers(&gamma),
                in_class(&gamma),
            ]),
        )),
    ]);

    Formula::or(vec![
        Formula::and(vec![
            guard.clone(),
            Formula::or(vec![nonempty_case, empty_case]),
        ]),
        Formula::and(vec![
            Formula::not(guard.clone()),
            Formula::atom_eq(LinearForm::var(wr)),
        ]),
    ])
}

#[cfg(test)]
mod tests {
    use crate::solve::{decide, eliminate_counting, equivalent};
    use crate::syntax::{evaluate, parse, Assignment, Formula};

    fn elim(s: &str) -> Formula {
        eliminate_counting(&parse(s).unwrap())
    }

    #[test]
    fn count_below_x() {
        let e = elim("# z = y . z < x");
        assert!(!e.has_count() && !e.has_quantifiers());
        assert!(equivalent(&e, &parse("y = x").unwrap()), "{e}");
    }

    #[test]
    fn count_even_below_x() {
        let e = elim("# z = y . (z < x & z = 0 mod 2)");
        // |{even z < x}| = ceil(x/2)
        assert!(
            equivalent(&e, &parse("(x = 2*y | x + 1 = 2*y)").unwrap()),
            "{e}"
        );
    }

    #[test]
    fn count_infinite_always_false() {
        let e = elim("# z = y . z = z");
        assert!(equivalent(&e, &Formula::False), "{e}");
        let e = elim("# z = y . z = 1 mod 3");
        assert!(equivalent(&e, &Formula::False), "{e}");
    }

    #[test]
    fn count_agrees_with_evaluator() {
        for s in [
            "# z = y . z < x",
            "# z = y . (z <= x & z = 1 mod 3)",
            "# z = y . (z < x & ~(z = 2))",
            "# z = y . (3 <= z & z + z <= x)",
        ] {
            let f = parse(s).unwrap();
            let e = eliminate_counting(&f);
            assert!(!e.has_count());
            for x in 0i64..25 {
                for y in 0i64..15 {
                    let a: Assignment = [("x", x), ("y", y)].into_iter().collect();
                    let want = evaluate(&f, &a).unwrap();
                    let got = evaluate(&e, &a).unwrap();
                    assert_eq!(got, want, "{s} at x={x}, y={y}: {e}");
                }
            }
        }
    }

    #[test]
    fn nested_counts() {
        // |{z : z < x}| = u  and  |{v : v < u}| = y  composes to y = x
        let f = parse("E u. (# z = u . z < x) & (# v = y . v < u)").unwrap();
        let e = eliminate_counting(&f);
        assert!(!e.has_count());
        let closed = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::and(vec![
                    Formula::implies(e.clone(), parse("y = x").unwrap()),
                    Formula::implies(parse("y = x").unwrap(), e.clone()),
                ]),
            ),
        );
        assert!(decide(&crate::solve::eliminate_quantifiers(&closed)).unwrap_or(false)
            || decide(&closed).unwrap());
    }

    #[test]
    fn decide_with_counts() {
        assert!(decide(&parse("A x. # z = x . z < x").unwrap()).unwrap());
        assert!(!decide(&parse("E x. # z = x . z = z").unwrap()).unwrap());
    }
}
