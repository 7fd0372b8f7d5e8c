//! Quantifier elimination, sentence decision, counting-quantifier
//! elimination and definable finiteness tests.

pub mod cooper;
pub mod counting;
pub mod qf;

use crate::syntax::{Assignment, Formula};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("sentence expected, but free variables remain: {0:?}")]
    FreeVariables(Vec<String>),
}

/// Eliminate all quantifiers (including counting quantifiers), returning an
/// equivalent quantifier-free formula with the same free variables.
pub fn eliminate_quantifiers(f: &Formula) -> Formula {
    let f = if f.has_count() { eliminate_counting(f) } else { f.clone() };
    elim_fo(&f)
}

fn elim_fo(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(elim_fo(g)),
        Formula::And(gs) => Formula::and(gs.iter().map(elim_fo).collect()),
        Formula::Or(gs) => Formula::or(gs.iter().map(elim_fo).collect()),
        Formula::Implies(a, b) => Formula::implies(elim_fo(a), elim_fo(b)),
        Formula::Exists(v, g) => {
            let body = qf::from_formula(&elim_fo(g));
            cooper::eliminate_exists(v, &body).to_formula()
        }
        Formula::Forall(v, g) => {
            // A v. g  ==  ~E v. ~g
            let body = qf::from_formula(&elim_fo(g)).negate();
            Formula::not(cooper::eliminate_exists(v, &body).to_formula())
        }
        Formula::Count { .. } => {
            let g = eliminate_counting(f);
            elim_fo(&g)
        }
    }
}

/// Eliminate every counting quantifier, innermost first, producing an
/// equivalent first-order formula without `Count` nodes. The result here is
/// additionally quantifier-eliminated, so it is quantifier-free.
pub fn eliminate_counting(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(eliminate_counting(g)),
        Formula::And(gs) => Formula::and(gs.iter().map(eliminate_counting).collect()),
        Formula::Or(gs) => Formula::or(gs.iter().map(eliminate_counting).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(eliminate_counting(a), eliminate_counting(b))
        }
        Formula::Exists(v, g) => Formula::exists(v.clone(), eliminate_counting(g)),
        Formula::Forall(v, g) => Formula::forall(v.clone(), eliminate_counting(g)),
        Formula::Count { bound, count, body } => {
            let body = eliminate_counting(body);
            let body = eliminate_quantifiers(&body);
            counting::count_to_formula(bound, count, &body)
        }
    }
}

/// Decide a sentence of the extended language (counting quantifiers
/// allowed).
pub fn decide(s: &Formula) -> Result<bool, SolveError> {
    let fv = s.free_vars();
    if !fv.is_empty() {
        return Err(SolveError::FreeVariables(fv.into_iter().collect()));
    }
    let qf = eliminate_quantifiers(s);
    // the eliminated sentence is ground; evaluation cannot fail
    Ok(crate::syntax::evaluate(&qf, &Assignment::new()).expect("ground formula"))
}

/// Convenience: is the formula satisfiable over the naturals? Existentially
/// closes all free variables and decides.
pub fn satisfiable(f: &Formula) -> bool {
    let mut s = f.clone();
    for v in f.free_vars() {
        s = Formula::exists(v, s);
    }
    decide(&s).expect("closed after quantification")
}

/// Two formulas define the same set: decides the universal closure of their
/// equivalence.
pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    let mut fv: BTreeSet<String> = f.free_vars();
    fv.extend(g.free_vars());
    let mut s = Formula::and(vec![
        Formula::implies(f.clone(), g.clone()),
        Formula::implies(g.clone(), f.clone()),
    ]);
    for v in fv {
        s = Formula::forall(v, s);
    }
    decide(&s).expect("closed after quantification")
}

/// The finiteness formula: with `phi(params, bounded)` defining a family of
/// sections over the bounded variables, returns a quantifier-free
/// `psi(params)` that holds exactly when the section is finite, i.e.
/// `E w. A bounded. (phi -> bounded <= w)`.
pub fn finiteness_formula(phi: &Formula, bounded_vars: &BTreeSet<String>) -> Formula {
    let phi = if phi.has_count() {
        eliminate_counting(phi)
    } else {
        phi.clone()
    };
    let mut taken = phi.all_vars();
    taken.extend(bounded_vars.iter().cloned());
    let w = crate::syntax::fresh_var("w", &taken);
    let cap = Formula::and(
        bounded_vars
            .iter()
            .map(|v| Formula::le(crate::syntax::LinearForm::var(v), crate::syntax::LinearForm::var(&w)))
            .collect(),
    );
    let mut body = Formula::implies(phi, cap);
    for v in bounded_vars {
        body = Formula::forall(v.clone(), body);
    }
    let psi = Formula::exists(w, body);
    eliminate_quantifiers(&psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{evaluate, parse, Assignment};

    fn qe(s: &str) -> Formula {
        eliminate_quantifiers(&parse(s).unwrap())
    }

    fn dec(s: &str) -> bool {
        decide(&parse(s).unwrap()).unwrap()
    }

    /// Oracle: compare the eliminated formula against direct evaluation of
    /// the original on a grid of assignments.
    fn check_equiv(s: &str, range: i64) {
        let f = parse(s).unwrap();
        let e = eliminate_quantifiers(&f);
        assert!(!e.has_quantifiers(), "{e}");
        let vars: Vec<String> = f.free_vars().into_iter().collect();
        let mut idx = vec![0i64; vars.len()];
        loop {
            let a: Assignment = vars.iter().cloned().zip(idx.iter().copied()).collect();
            let want = evaluate(&f, &a);
            let got = evaluate(&e, &a);
            if let Ok(want) = want {
                assert_eq!(got, Ok(want), "{s} at {idx:?} gave {e}");
            }
            // advance odometer
            let mut i = 0;
            loop {
                if i == vars.len() {
                    return;
                }
                idx[i] += 1;
                if idx[i] <= range {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if vars.is_empty() {
                return;
            }
        }
    }

    #[test]
    fn doubling_is_parity() {
        check_equiv("E y. x = y + y", 50);
        let e = qe("E y. x = y + y");
        // should be (equivalent to) x = 0 mod 2
        assert!(equivalent(&e, &parse("x = 0 mod 2").unwrap()));
    }

    #[test]
    fn witness_true() {
        assert_eq!(qe("E y. (y <= x & x <= y)"), Formula::True);
    }

    #[test]
    fn thirds() {
        check_equiv("E y. (x <= 3*y & 3*y <= x + 1)", 50);
        let e = qe("E y. (x <= 3*y & 3*y <= x + 1)");
        assert!(equivalent(
            &e,
            &parse("x = 0 mod 3 | x = 2 mod 3").unwrap()
        ));
    }

    #[test]
    fn decide_sentences() {
        assert!(dec("A x. E y. y = x + x"));
        assert!(!dec("E x. x + x = 1"));
        assert!(dec("A x. E y. (x = 2*y | x = 2*y + 1)"));
        assert!(dec("A x y. x + y = y + x"));
        assert!(!dec("A x. E y. x = y + y"));
    }

    #[test]
    fn forall_elimination() {
        check_equiv("A z. z < x -> z < 5", 12);
        check_equiv("A z. z <= x -> (E w. (z = w + w | z = w + w + 1))", 8);
    }

    #[test]
    fn nested_quantifiers() {
        check_equiv("E y. A z. (z <= y -> z <= x)", 10);
    }

    #[test]
    fn double_negation_decide() {
        for s in ["A x. E y. y = x + x", "E x. x + x = 1", "E x. 5 <= x"] {
            let f = parse(s).unwrap();
            let neg = Formula::not(f.clone());
            assert_eq!(decide(&f).unwrap(), !decide(&neg).unwrap(), "{s}");
        }
    }

    #[test]
    fn decide_rejects_free_vars() {
        assert!(matches!(
            decide(&parse("x = 0").unwrap()),
            Err(SolveError::FreeVariables(_))
        ));
    }

    #[test]
    fn finiteness_examples() {
        // {z : z < p} is finite for every p
        let phi = parse("z < p").unwrap();
        let psi = finiteness_formula(&phi, &["z".to_string()].into_iter().collect());
        let all = Formula::forall("p", psi);
        assert!(decide(&all).unwrap());

        // {z : p < z} is cofinite, never finite
        let phi = parse("p < z").unwrap();
        let psi = finiteness_formula(&phi, &["z".to_string()].into_iter().collect());
        let none = Formula::forall("p", Formula::not(psi));
        assert!(decide(&none).unwrap());

        // {(z, q) : z = 2q & z < p} is finite for every p
        let phi = parse("z = 2*q & z < p").unwrap();
        let psi = finiteness_formula(
            &phi,
            &["z".to_string(), "q".to_string()].into_iter().collect(),
        );
        assert!(decide(&Formula::forall("p", psi)).unwrap());
    }

    #[test]
    fn equivalence_helper() {
        assert!(equivalent(
            &parse("x < y").unwrap(),
            &parse("x + 1 <= y").unwrap()
        ));
        assert!(!equivalent(&parse("x <= y").unwrap(), &parse("x < y").unwrap()));
    }
}
