//! Direct evaluation over the naturals.
//!
//! Quantifiers are evaluated by finite enumeration. Two bounding analyses
//! make that possible:
//!
//! 1. *Threshold/period analysis*: when the quantified variable occurs only
//!    in atoms (not under an inner quantifier), the truth value of the body
//!    as a function of that variable is eventually periodic with a computable
//!    threshold and period, so a finite window decides everything, including
//!    whether a counting quantifier's solution set is infinite.
//! 2. *Syntactic upper bounds*: a conjunctively required atom `v <= t` with
//!    `t` evaluable under the current assignment bounds the search.
//!
//! Anything else is rejected with [`EvalError::NeedsSymbolic`]; the `solve`
//! module handles those formulas symbolically.

use super::{Assignment, Atom, Formula};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not covered by the assignment")]
    UnboundVariable(String),
    #[error("cannot bound quantifier on `{0}`: needs symbolic decision")]
    NeedsSymbolic(String),
}

type Env = BTreeMap<String, BigInt>;

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    let mut env: Env = a.vars().map(|v| (v.to_string(), a.get(v).unwrap().clone())).collect();
    for v in f.free_vars() {
        if !env.contains_key(&v) {
            return Err(EvalError::UnboundVariable(v));
        }
    }
    eval(f, &mut env)
}

fn eval(f: &Formula, env: &mut Env) -> Result<bool, EvalError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(a) => a
            .holds(|v| env.get(v).cloned())
            .ok_or_else(|| EvalError::UnboundVariable(format!("{a:?}"))),
        Formula::Not(g) => Ok(!eval(g, env)?),
        Formula::And(gs) => {
            for g in gs {
                if !eval(g, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval(g, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => Ok(!eval(a, env)? || eval(b, env)?),
        Formula::Exists(v, body) => {
            let window = solution_window(body, v, env)?;
            for z in window.iter() {
                let old = env.insert(v.clone(), z.clone());
                let hit = eval(body, env)?;
                restore(env, v, old);
                if hit {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(v, body) => {
            let window = solution_window(&Formula::not(body.as_ref().clone()), v, env)?;
            for z in window.iter() {
                let old = env.insert(v.clone(), z.clone());
                let hit = eval(body, env)?;
                restore(env, v, old);
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Count { bound, count, body } => {
            let want = env
                .get(count)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(count.clone()))?;
            match solution_window(body, bound, env)? {
                Window::Exact { threshold, period } => {
                    // beyond the threshold truth is periodic: any solution in
                    // [threshold, threshold+period) means infinitely many.
                    let mut z = threshold.clone();
                    let end = &threshold + &period;
                    while z < end {
                        let old = env.insert(bound.clone(), z.clone());
                        let hit = eval(body, env)?;
                        restore(env, bound, old);
                        if hit {
                            return Ok(false); // infinite solution set
                        }
                        z += 1;
                    }
                    let mut n = BigInt::zero();
                    let mut z = BigInt::zero();
                    while z < threshold {
                        let old = env.insert(bound.clone(), z.clone());
                        let hit = eval(body, env)?;
                        restore(env, bound, old);
                        if hit {
                            n += 1;
                        }
                        z += 1;
                    }
                    Ok(n == want)
                }
                Window::UpTo(b) => {
                    let mut n = BigInt::zero();
                    let mut z = BigInt::zero();
                    while z <= b {
                        let old = env.insert(bound.clone(), z.clone());
                        let hit = eval(body, env)?;
                        restore(env, bound, old);
                        if hit {
                            n += 1;
                        }
                        z += 1;
                    }
                    Ok(n == want)
                }
            }
        }
    }
}

fn restore(env: &mut Env, v: &str, old: Option<BigInt>) {
    match old {
        Some(x) => {
            env.insert(v.to_string(), x);
        }
        None => {
            env.remove(v);
        }
    }
}

/// A finite window of candidate values for a quantified variable.
enum Window {
    /// Truth is constant for `z >= threshold` up to periodicity with the
    /// given period; solutions are decided exactly.
    Exact { threshold: BigInt, period: BigInt },
    /// Every solution satisfies `z <= bound`; values beyond never satisfy
    /// the body.
    UpTo(BigInt),
}

impl Window {
    fn iter(&self) -> Box<dyn Iterator<Item = BigInt>> {
        match self {
            Window::Exact { threshold, period } => {
                let end = threshold + period;
                Box::new(iter_range(BigInt::zero(), end))
            }
            Window::UpTo(b) => Box::new(iter_range(BigInt::zero(), b + 1)),
        }
    }
}

fn iter_range(from: BigInt, to: BigInt) -> impl Iterator<Item = BigInt> {
    let mut cur = from;
    std::iter::from_fn(move || {
        if cur < to {
            let out = cur.clone();
            cur += 1;
            Some(out)
        } else {
            None
        }
    })
}

fn solution_window(body: &Formula, v: &str, env: &Env) -> Result<Window, EvalError> {
    if let Some((threshold, period)) = threshold_period(body, v, env) {
        return Ok(Window::Exact { threshold, period });
    }
    if let Some(b) = upper_bound(body, v, env, true) {
        return Ok(Window::UpTo(b.max(BigInt::from(-1))));
    }
    Err(EvalError::NeedsSymbolic(v.to_string()))
}

/// Threshold `T` and period `P` such that for fixed values of all other
/// variables, the truth of `f` at `v = z` equals the truth at `v = z + P`
/// whenever `z >= T`. Returns `None` when `v` occurs under an inner
/// quantifier, where no finite analysis is attempted.
fn threshold_period(f: &Formula, v: &str, env: &Env) -> Option<(BigInt, BigInt)> {
    match f {
        Formula::True | Formula::False => Some((BigInt::zero(), BigInt::one())),
        Formula::Atom(a) => {
            let c = a.form().coeff(v);
            if c.is_zero() {
                return Some((BigInt::zero(), BigInt::one()));
            }
            // value of the rest of the form under env
            let mut rest = a.form().clone();
            rest = rest.subst_var(v, &super::LinearForm::constant(0));
            let r = rest.eval(|x| env.get(x).cloned())?;
            match a {
                Atom::Le(_) | Atom::Eq(_) => {
                    // c*z + r: truth changes at most once past |r/c| + 1
                    let breakpoint = r.abs().div_floor(&c.abs()) + 2;
                    Some((breakpoint, BigInt::one()))
                }
                Atom::Mod(_, n) => Some((BigInt::zero(), n.clone())),
            }
        }
        Formula::Not(g) => threshold_period(g, v, env),
        Formula::And(gs) | Formula::Or(gs) => {
            let mut t = BigInt::zero();
            let mut p = BigInt::one();
            for g in gs {
                let (gt, gp) = threshold_period(g, v, env)?;
                t = t.max(gt);
                p = p.lcm(&gp);
            }
            Some((t, p))
        }
        Formula::Implies(a, b) => {
            let (ta, pa) = threshold_period(a, v, env)?;
            let (tb, pb) = threshold_period(b, v, env)?;
            Some((ta.max(tb), pa.lcm(&pb)))
        }
        Formula::Exists(_, g) | Formula::Forall(_, g) | Formula::Count { body: g, .. } => {
            if g.free_vars().contains(v) || matches!(f, Formula::Count{count, ..} if count == v) {
                None
            } else {
                Some((BigInt::zero(), BigInt::one()))
            }
        }
    }
}

/// Largest value of `v` that can satisfy `f`, derived from conjunctively
/// required upper-bound atoms whose remaining variables are covered by the
/// environment. `positive` tracks the polarity of the context. Returns
/// `None` when no bound is found; a negative bound means `f` is
/// unsatisfiable in `v`.
fn upper_bound(f: &Formula, v: &str, env: &Env, positive: bool) -> Option<BigInt> {
    match f {
        Formula::True | Formula::False => None,
        Formula::Atom(a) => {
            let c = a.form().coeff(v);
            if c.is_zero() {
                return None;
            }
            let mut rest = a.form().clone();
            rest = rest.subst_var(v, &super::LinearForm::constant(0));
            let r = rest.eval(|x| env.get(x).cloned())?;
            match (a, positive) {
                // c*v + r <= 0 with c > 0: v <= floor(-r/c)
                (Atom::Le(_), true) if c.is_positive() => Some((-&r).div_floor(&c)),
                // negated: c*v + r >= 1 with c < 0: v <= floor((r-1)/(-c))
                (Atom::Le(_), false) if c.is_negative() => Some((r - BigInt::one()).div_floor(&-&c)),
                // c*v + r = 0: v = -r/c when integral and nonnegative
                (Atom::Eq(_), true) => {
                    let (q, rem) = (-&r).div_rem(&c);
                    if rem.is_zero() && !q.is_negative() {
                        Some(q)
                    } else {
                        Some(BigInt::from(-1))
                    }
                }
                _ => None,
            }
        }
        Formula::Not(g) => upper_bound(g, v, env, !positive),
        Formula::And(gs) if positive => gs.iter().filter_map(|g| upper_bound(g, v, env, true)).min(),
        Formula::Or(gs) if positive => {
            let bounds: Vec<BigInt> = gs
                .iter()
                .map(|g| upper_bound(g, v, env, true))
                .collect::<Option<_>>()?;
            bounds.into_iter().max()
        }
        Formula::And(gs) => {
            // negative context: ~(A & B) = ~A | ~B
            let bounds: Vec<BigInt> = gs
                .iter()
                .map(|g| upper_bound(g, v, env, false))
                .collect::<Option<_>>()?;
            bounds.into_iter().max()
        }
        Formula::Or(gs) => gs.iter().filter_map(|g| upper_bound(g, v, env, false)).min(),
        Formula::Implies(a, b) => {
            if positive {
                // a -> b == ~a | b
                let ba = upper_bound(a, v, env, false)?;
                let bb = upper_bound(b, v, env, true)?;
                Some(ba.max(bb))
            } else {
                // ~(a -> b) == a & ~b
                let xs = [upper_bound(a, v, env, true), upper_bound(b, v, env, false)];
                xs.into_iter().flatten().min()
            }
        }
        Formula::Exists(w, g) | Formula::Forall(w, g) => {
            if w == v {
                return None;
            }
            // sound: a bound required inside the body (not involving the
            // inner variable) is required of the whole
            if positive && matches!(f, Formula::Exists(..)) {
                upper_bound(g, v, env, true)
            } else if !positive && matches!(f, Formula::Forall(..)) {
                // ~(A w. g) = E w. ~g
                upper_bound(g, v, env, false)
            } else {
                None
            }
        }
        // counts can be true with an empty solution set, so bounds inside
        // the counted body say nothing about the count's truth
        Formula::Count { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn ev(s: &str, pairs: &[(&str, i64)]) -> Result<bool, EvalError> {
        let f = parse(s).unwrap();
        let a: Assignment = pairs.iter().map(|(k, v)| (*k, *v)).collect();
        evaluate(&f, &a)
    }

    #[test]
    fn count_examples() {
        assert_eq!(ev("# z = y . z < x", &[("x", 5), ("y", 5)]), Ok(true));
        assert_eq!(ev("# z = y . z < x", &[("x", 5), ("y", 4)]), Ok(false));
        // infinite solution set: false for every count value
        assert_eq!(ev("# z = y . z = z", &[("y", 0)]), Ok(false));
        assert_eq!(ev("# z = y . z = 0 mod 2", &[("y", 7)]), Ok(false));
    }

    #[test]
    fn quantifier_windows() {
        assert_eq!(ev("E y. x = y + y", &[("x", 10)]), Ok(true));
        assert_eq!(ev("E y. x = y + y", &[("x", 7)]), Ok(false));
        assert_eq!(ev("A z. z < x -> z < 10", &[("x", 10)]), Ok(true));
        assert_eq!(ev("A z. z < x -> z < 10", &[("x", 12)]), Ok(false));
    }

    #[test]
    fn nested_bounded_quantifiers() {
        // inner quantifier bounded by an outer variable
        assert_eq!(ev("A x. x <= 5 -> (E y. y <= x & y + y = x)", &[]), Ok(false));
        assert_eq!(
            ev("A x. x <= 5 -> (E y. y <= x & (y + y = x | y + y = x + 1))", &[]),
            Ok(true)
        );
    }

    #[test]
    fn unbounded_quantifier_free_body_is_exact() {
        // the threshold/period analysis is total on quantifier-free bodies
        assert_eq!(ev("E y. x <= y", &[("x", 3)]), Ok(true));
        assert_eq!(ev("A y. y < x | x <= y", &[("x", 3)]), Ok(true));
    }

    #[test]
    fn unbounded_rejected() {
        assert!(matches!(
            ev("E y. E w. y = w + x", &[("x", 3)]),
            Err(EvalError::NeedsSymbolic(_))
        ));
        assert!(matches!(
            ev("A x. E y. y = x + x", &[]),
            Err(EvalError::NeedsSymbolic(_))
        ));
    }

    #[test]
    fn missing_variable_reported() {
        assert!(matches!(
            ev("x = y", &[("x", 1)]),
            Err(EvalError::UnboundVariable(_))
        ));
    }

    #[test]
    fn count_via_syntactic_bound() {
        // solution set bounded by a parameter: |{z : z <= x & z = 0 mod 2}|
        assert_eq!(ev("# z = y . (z <= x & z = 0 mod 2)", &[("x", 6), ("y", 4)]), Ok(true));
    }

    #[test]
    fn mixed_threshold_period() {
        // solutions {z : 3 <= z <= 20, z = 1 mod 3}: {4,7,10,13,16,19} = 6
        assert_eq!(
            ev("# z = y . (3 <= z & z <= 20 & z = 1 mod 3)", &[("y", 6)]),
            Ok(true)
        );
    }
}
