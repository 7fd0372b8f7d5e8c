//! Capture-avoiding substitution of linear forms for free variables.

use super::{fresh_var, Formula, LinearForm};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("variable `{0}` is bound in the formula; substitution is rejected")]
    BoundVariable(String),
    #[error("cannot substitute a non-variable term for count variable `{0}`")]
    CountPosition(String),
}

/// Substitute `t` for every free occurrence of `var` in `f`. Bound variables
/// are renamed as needed so no variable of `t` is captured. Substituting for
/// a variable that is bound anywhere in `f` is rejected.
pub fn substitute(f: &Formula, var: &str, t: &LinearForm) -> Result<Formula, SubstError> {
    if f.bound_vars().contains(var) {
        return Err(SubstError::BoundVariable(var.to_string()));
    }
    let mut taken: BTreeSet<String> = f.all_vars();
    taken.extend(t.vars().map(|s| s.to_string()));
    taken.insert(var.to_string());
    go(f, var, t, &mut taken)
}

fn go(
    f: &Formula,
    var: &str,
    t: &LinearForm,
    taken: &mut BTreeSet<String>,
) -> Result<Formula, SubstError> {
    Ok(match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(a) => {
            let form = a.form().subst_var(var, t);
            match a {
                super::Atom::Le(_) => Formula::atom_le(form),
                super::Atom::Eq(_) => Formula::atom_eq(form),
                super::Atom::Mod(_, n) => Formula::atom_mod(form, n.clone()),
            }
        }
        Formula::Not(g) => Formula::not(go(g, var, t, taken)?),
        Formula::And(gs) => Formula::and(
            gs.iter()
                .map(|g| go(g, var, t, taken))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Or(gs) => Formula::or(
            gs.iter()
                .map(|g| go(g, var, t, taken))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Implies(a, b) => {
            Formula::implies(go(a, var, t, taken)?, go(b, var, t, taken)?)
        }
        Formula::Exists(v, g) => {
            let (v, g) = rename_if_captured(v, g, var, t, taken)?;
            Formula::exists(v.clone(), go(&g, var, t, taken)?)
        }
        Formula::Forall(v, g) => {
            let (v, g) = rename_if_captured(v, g, var, t, taken)?;
            Formula::forall(v.clone(), go(&g, var, t, taken)?)
        }
        Formula::Count { bound, count, body } => {
            let new_count = if count == var {
                match as_plain_var(t) {
                    Some(w) => w.to_string(),
                    None => return Err(SubstError::CountPosition(count.clone())),
                }
            } else {
                count.clone()
            };
            let (bound, body) = rename_if_captured(bound, body, var, t, taken)?;
            Formula::count(bound, new_count, go(&body, var, t, taken)?)
        }
    })
}

fn as_plain_var(t: &LinearForm) -> Option<&str> {
    if !t.constant_part().is_zero() {
        return None;
    }
    let mut terms = t.terms();
    match (terms.next(), terms.next()) {
        (Some((v, c)), None) if *c == num_bigint::BigInt::from(1) => Some(v),
        _ => None,
    }
}

use num_traits::Zero;

/// Rename a binder when it would capture a variable of the substituted term.
fn rename_if_captured(
    v: &str,
    body: &Formula,
    _var: &str,
    t: &LinearForm,
    taken: &mut BTreeSet<String>,
) -> Result<(String, Formula), SubstError> {
    let captures = t.vars().any(|w| w == v);
    if !captures {
        return Ok((v.to_string(), body.clone()));
    }
    let fresh = fresh_var(v, taken);
    taken.insert(fresh.clone());
    // rename the binder: substitute the fresh variable for v inside the body
    let renamed = go(body, v, &LinearForm::var(&fresh), taken)?;
    Ok((fresh, renamed))
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn simple_substitution() {
        let f = parse("x <= y").unwrap();
        let t = LinearForm::term(2, "z").add_constant(1);
        let got = substitute(&f, "x", &t).unwrap();
        assert_eq!(got, parse("2*z + 1 <= y").unwrap());
    }

    #[test]
    fn bound_variable_rejected() {
        let f = parse("E x. x <= y").unwrap();
        let e = substitute(&f, "x", &LinearForm::constant(0)).unwrap_err();
        assert_eq!(e, SubstError::BoundVariable("x".into()));
    }

    #[test]
    fn capture_avoided() {
        // substitute(E x. x <= y, y, x) renames the binder
        let f = parse("E x. x <= y").unwrap();
        let got = substitute(&f, "y", &LinearForm::var("x")).unwrap();
        match &got {
            Formula::Exists(v, body) => {
                assert_ne!(v, "x");
                let body_str = format!("{body}");
                assert!(body_str.contains('x'), "outer x must appear: {body_str}");
            }
            other => panic!("unexpected {other:?}"),
        }
        // semantically: E x'. x' <= x
        assert_eq!(got, parse("E x0. x0 <= x").unwrap());
    }

    #[test]
    fn atoms_stay_linear() {
        let f = parse("3*x = y mod 5").unwrap();
        let t = LinearForm::term(2, "u").add_constant(4);
        let got = substitute(&f, "x", &t).unwrap();
        assert_eq!(got, parse("6*u + 12 = y mod 5").unwrap());
    }
}
