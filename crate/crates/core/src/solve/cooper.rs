//! Cooper-style elimination of a single existential quantifier over the
//! naturals.
//!
//! Every quantifier is relativized with `v >= 0` before elimination. Over the
//! naturals the "minus infinity" branch of the classical procedure is vacuous
//! (the relativization literal is a lower bound that fails for arbitrarily
//! small values), so the eliminated formula is a disjunction over lower
//! boundary terms `l` and offsets `j < m`:
//!
//! ```text
//! E v. phi(v)  <=>  OR_{l in lowers} OR_{j=0}^{m-1} phi[v := l + j]
//! ```
//!
//! where `m` is the lcm of the moduli of all divisibility literals involving
//! `v` after coefficients on `v` have been scaled to one.

use super::qf::{simplify, Lit, Qf};
use crate::syntax::LinearForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Eliminate `E var. body` where `var` ranges over the naturals and `body`
/// is quantifier-free.
pub fn eliminate_exists(var: &str, body: &Qf) -> Qf {
    let body = simplify(body);
    if !body.contains_var(var) {
        // E v. phi  <=>  phi when v does not occur (the domain is nonempty)
        return body;
    }
    match body {
        // E v. (A | B)  <=>  (E v. A) | (E v. B)
        Qf::Or(parts) => Qf::or(parts.iter().map(|p| eliminate_exists(var, p)).collect()),
        Qf::And(parts) => {
            // pull out conjuncts not involving the variable
            let (with, without): (Vec<Qf>, Vec<Qf>) =
                parts.into_iter().partition(|p| p.contains_var(var));
            if !without.is_empty() {
                let mut out = without;
                out.push(eliminate_exists(var, &Qf::and(with)));
                return simplify(&Qf::and(out));
            }
            let inner = Qf::and(with);
            // re-distribute if a disjunction bubbled up
            if let Qf::Or(_) = inner {
                return eliminate_exists(var, &inner);
            }
            simplify(&cooper(var, &inner))
        }
        other => simplify(&cooper(var, &other)),
    }
}

fn cooper(var: &str, body: &Qf) -> Qf {
    // relativize to the naturals
    let body = Qf::and(vec![
        body.clone(),
        Qf::Lit(Lit::Le(LinearForm::term(-1, var))),
    ]);

    // equality fast path: E v. (a*v + r = 0 & rest)  <=>  |a| [div] r & rest[v := -r/a]
    if let Some(q) = equality_substitution(var, &body) {
        return q;
    }

    // scale every literal so the coefficient of `var` is +-delta, then
    // reinterpret delta*var as a unit variable constrained by Div(delta, var)
    let mut delta = BigInt::one();
    body.for_each_lit(&mut |l| {
        let c = l.form().coeff(var);
        if !c.is_zero() {
            delta = delta.lcm(&c.abs());
        }
    });
    let scaled = body.map_lits(&|l| scale_literal(l, var, &delta));
    let scaled = Qf::and(vec![
        scaled,
        if delta.is_one() {
            Qf::True
        } else {
            Qf::Lit(Lit::Div(delta.clone(), LinearForm::var(var)))
        },
    ]);

    // lcm of moduli of divisibility literals involving the variable
    let mut m = BigInt::one();
    scaled.for_each_lit(&mut |l| {
        if let Lit::Div(n, f) | Lit::NotDiv(n, f) = l {
            if !f.coeff(var).is_zero() {
                m = m.lcm(n);
            }
        }
    });

    // lower boundary terms: v >= t
    let mut lowers: BTreeSet<LinearForm> = BTreeSet::new();
    scaled.for_each_lit(&mut |l| {
        let c = l.form().coeff(var);
        if c.is_zero() {
            return;
        }
        debug_assert!(c.abs().is_one(), "scaling failed");
        let rest = l.form().subst_var(var, &LinearForm::constant(0));
        match l {
            // -v + rest <= 0  =>  v >= rest
            Lit::Le(_) if c.is_negative() => {
                lowers.insert(rest);
            }
            // +-v + rest = 0  =>  v = -+rest
            Lit::Eq(_) => {
                lowers.insert(if c.is_positive() { rest.neg() } else { rest });
            }
            _ => {}
        }
    });

    let mut disjuncts = Vec::new();
    for l in &lowers {
        let mut j = BigInt::zero();
        while j < m {
            let t = l.add_constant(j.clone());
            disjuncts.push(simplify(&scaled.subst(var, &t)));
            j += 1;
        }
    }
    Qf::or(disjuncts)
}

/// Multiply a literal so the coefficient on `var` becomes +-delta, then
/// replace that coefficient by +-1 (the unit-variable reinterpretation).
fn scale_literal(l: &Lit, var: &str, delta: &BigInt) -> Qf {
    let c = l.form().coeff(var);
    if c.is_zero() {
        return Qf::Lit(l.clone());
    }
    let lambda = delta / c.abs();
    let unit = if c.is_positive() {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let rescale = |f: &LinearForm| -> LinearForm {
        let scaled = f.scale(&lambda);
        // drop the +-delta coefficient down to +-1
        scaled
            .subst_var(var, &LinearForm::constant(0))
            .add(&LinearForm::term(unit.clone(), var))
    };
    match l {
        Lit::Le(f) => Qf::Lit(Lit::Le(rescale(f))),
        Lit::Eq(f) => Qf::Lit(Lit::Eq(rescale(f))),
        Lit::Div(n, f) => Qf::Lit(Lit::Div(n * &lambda, rescale(f))),
        Lit::NotDiv(n, f) => Qf::Lit(Lit::NotDiv(n * &lambda, rescale(f))),
    }
}

/// When the body is a conjunction containing an equality on `var`, substitute
/// it away: much cheaper than the full procedure and very common in practice.
fn equality_substitution(var: &str, body: &Qf) -> Option<Qf> {
    let children: Vec<Qf> = match body {
        Qf::And(kids) => kids.clone(),
        Qf::Lit(Lit::Eq(_)) => vec![body.clone()],
        _ => return None,
    };
    // pick the equality with the smallest coefficient magnitude on var
    let mut best: Option<(BigInt, usize, LinearForm)> = None;
    for (i, k) in children.iter().enumerate() {
        if let Qf::Lit(Lit::Eq(f)) = k {
            let c = f.coeff(var);
            if !c.is_zero() {
                let a = c.abs();
                if best.as_ref().map_or(true, |(b, _, _)| a < *b) {
                    best = Some((a, i, f.clone()));
                }
            }
        }
    }
    let (a, idx, eq_form) = best?;
    let c = eq_form.coeff(var);
    let rest = eq_form.subst_var(var, &LinearForm::constant(0));
    // c*v + rest = 0  =>  v = -rest/c; require a | rest
    let mut parts = vec![Qf::div(a.clone(), rest.clone())];
    // the substituted value of v, scaled: v = -rest/c, so a*v = -sign(c)*rest
    let signed_rest = if c.is_positive() { rest.neg() } else { rest };
    for (i, k) in children.iter().enumerate() {
        if i == idx {
            continue;
        }
        parts.push(k.map_lits(&|l| subst_scaled(l, var, &a, &signed_rest)));
    }
    Some(simplify(&Qf::and(parts)))
}

/// Substitute `v := value/a` into a literal by scaling it with `a > 0`;
/// `value` is the linear form equal to `a*v`.
fn subst_scaled(l: &Lit, var: &str, a: &BigInt, value: &LinearForm) -> Qf {
    let c = l.form().coeff(var);
    if c.is_zero() {
        return Qf::Lit(l.clone());
    }
    let scaled = |f: &LinearForm| -> LinearForm {
        // a*f = a*c*v + a*rest = c*value + a*rest
        let rest = f.subst_var(var, &LinearForm::constant(0));
        value.scale(&c).add(&rest.scale(a))
    };
    match l {
        Lit::Le(f) => Qf::le(scaled(f)),
        Lit::Eq(f) => Qf::eq(scaled(f)),
        Lit::Div(n, f) => Qf::div(n * a, scaled(f)),
        Lit::NotDiv(n, f) => Qf::not_div(n * a, scaled(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::qf::from_formula;
    use crate::syntax::{evaluate, parse, Assignment};

    fn elim(formula: &str, var: &str) -> crate::syntax::Formula {
        let f = parse(formula).unwrap();
        let q = from_formula(&f);
        eliminate_exists(var, &q).to_formula()
    }

    fn check_equiv(original: &str, var: &str, xs: std::ops::Range<i64>) {
        let f = parse(original).unwrap();
        let eliminated = elim(original, var);
        assert!(!eliminated.free_vars().contains(var));
        for x in xs {
            let a: Assignment = [("x", x)].into_iter().collect();
            let want = evaluate(&Formula_exists(var, &f), &a).unwrap();
            let got = evaluate(&eliminated, &a).unwrap();
            assert_eq!(got, want, "x = {x}: {eliminated}");
        }
    }

    #[allow(non_snake_case)]
    fn Formula_exists(var: &str, f: &crate::syntax::Formula) -> crate::syntax::Formula {
        crate::syntax::Formula::exists(var, f.clone())
    }

    #[test]
    fn doubling_becomes_parity() {
        check_equiv("x = y + y", "y", 0..50);
    }

    #[test]
    fn witness_equality() {
        // E y. (y <= x & x <= y) is always true
        let e = elim("y <= x & x <= y", "y");
        for x in 0..20 {
            let a: Assignment = [("x", x)].into_iter().collect();
            assert!(evaluate(&e, &a).unwrap());
        }
    }

    #[test]
    fn thirds_window() {
        check_equiv("x <= 3*y & 3*y <= x + 1", "y", 0..50);
    }

    #[test]
    fn congruence_body() {
        check_equiv("x <= y & y <= x + 4 & y = 2 mod 3", "y", 0..40);
    }

    #[test]
    fn strict_bounds_empty() {
        // E y. (y < x & x < y) is false
        let e = elim("y < x & x < y", "y");
        for x in 0..10 {
            let a: Assignment = [("x", x)].into_iter().collect();
            assert!(!evaluate(&e, &a).unwrap());
        }
    }
}
