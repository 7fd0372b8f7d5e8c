//! Terms and formulas of the extended Presburger language.
//!
//! Atoms are kept in a single canonical shape: a [`LinearForm`] compared to
//! zero, either `t <= 0`, `t = 0` or `t = 0 (mod n)`. The surface syntax
//! (`=`, `<=`, `<`, `t1 = t2 mod n`) is desugared by the parser. All integer
//! arithmetic is arbitrary precision.

mod eval;
mod parser;
mod printer;
mod subst;

pub use eval::EvalError;
pub use parser::{parse, ParseError};
pub use subst::{substitute, SubstError};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// An integer linear combination of variables plus a constant.
///
/// Variable keys are kept in canonical (sorted) order and zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<String, BigInt>,
    constant: BigInt,
}

impl LinearForm {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        LinearForm {
            coeffs: BTreeMap::new(),
            constant: c.into(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::term(1, name)
    }

    pub fn term(coeff: impl Into<BigInt>, name: impl Into<String>) -> Self {
        let mut coeffs = BTreeMap::new();
        let c: BigInt = coeff.into();
        if !c.is_zero() {
            coeffs.insert(name.into(), c);
        }
        LinearForm {
            coeffs,
            constant: BigInt::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    /// Coefficient of `name` (zero when absent).
    pub fn coeff(&self, name: &str) -> BigInt {
        self.coeffs.get(name).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(|s| s.as_str())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> LinearForm {
        if k.is_zero() {
            return LinearForm::default();
        }
        LinearForm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_constant(&self, k: impl Into<BigInt>) -> LinearForm {
        let mut out = self.clone();
        out.constant += k.into();
        out
    }

    /// Replace `name` by the form `t` (used by capture-avoiding substitution
    /// and by quantifier elimination when substituting boundary terms).
    pub fn subst_var(&self, name: &str, t: &LinearForm) -> LinearForm {
        let c = self.coeff(name);
        if c.is_zero() {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.coeffs.remove(name);
        rest.add(&t.scale(&c))
    }

    /// Evaluate under a total integer assignment of all variables.
    pub fn eval<F>(&self, lookup: F) -> Option<BigInt>
    where
        F: Fn(&str) -> Option<BigInt>,
    {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * lookup(v)?;
        }
        Some(acc)
    }

    /// Exact division of every coefficient and the constant; panics if not
    /// exactly divisible. Used internally once divisibility is established.
    fn div_exact(&self, d: &BigInt) -> LinearForm {
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| {
                    debug_assert!((c % d).is_zero());
                    (v.clone(), c / d)
                })
                .collect(),
            constant: {
                debug_assert!((&self.constant % d).is_zero());
                &self.constant / d
            },
        }
    }

    /// Gcd of the variable coefficients, zero when there are none.
    fn coeff_gcd(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = g.gcd(c);
        }
        g
    }

    fn map_constant(&self, f: impl FnOnce(&BigInt) -> BigInt) -> LinearForm {
        let mut out = self.clone();
        out.constant = f(&self.constant);
        out
    }
}

/// An atomic formula: a linear form compared to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `form <= 0`
    Le(LinearForm),
    /// `form = 0`
    Eq(LinearForm),
    /// `form = 0 (mod modulus)`, modulus >= 1
    Mod(LinearForm, BigInt),
}

impl Atom {
    pub fn form(&self) -> &LinearForm {
        match self {
            Atom::Le(f) | Atom::Eq(f) | Atom::Mod(f, _) => f,
        }
    }

    pub fn holds<F>(&self, lookup: F) -> Option<bool>
    where
        F: Fn(&str) -> Option<BigInt>,
    {
        let v = self.form().eval(&lookup)?;
        Some(match self {
            Atom::Le(_) => !v.is_positive(),
            Atom::Eq(_) => v.is_zero(),
            Atom::Mod(_, n) => v.mod_floor(n).is_zero(),
        })
    }
}

/// Formulas over the extended language of natural-number addition.
///
/// `Count { bound: z, count: y, body }` is the counting quantifier: it holds
/// under an assignment when the solution set of `body` in `z` is finite and
/// has exactly `y` elements; when the solution set is infinite it is false
/// for every value of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Count {
        bound: String,
        count: String,
        body: Box<Formula>,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WellFormedError {
    #[error("congruence modulus must be at least 1")]
    BadModulus,
    #[error("counting quantifier binds `{0}` as both solution and count variable")]
    CountVarClash(String),
    #[error("count variable `{0}` is bound inside the counted body")]
    CountVarBound(String),
    #[error("variable `{0}` is rebound by a nested quantifier")]
    Shadowed(String),
}

impl Formula {
    /// `form <= 0`, normalized: constants fold to `True`/`False`, variable
    /// coefficients are reduced by their gcd (with floor rounding of the
    /// constant), and atoms that are vacuous over the naturals fold away.
    pub fn atom_le(form: LinearForm) -> Formula {
        if form.is_constant() {
            return if form.constant.is_positive() {
                Formula::False
            } else {
                Formula::True
            };
        }
        let g = form.coeff_gcd();
        let form = if g > BigInt::one() {
            // g*s + c <= 0  <=>  s <= floor(-c/g)  <=>  s - floor(-c/g) <= 0
            let bound = (-&form.constant).div_floor(&g);
            let mut s = form.map_constant(|_| BigInt::zero()).div_exact(&g);
            s.constant = -bound;
            s
        } else {
            form
        };
        // variables range over the naturals
        if form.coeffs.values().all(|c| c.is_negative()) && !form.constant.is_positive() {
            return Formula::True;
        }
        if form.coeffs.values().all(|c| c.is_positive()) && form.constant.is_positive() {
            return Formula::False;
        }
        Formula::Atom(Atom::Le(form))
    }

    /// `form = 0`, normalized: gcd reduction (unsatisfiable when the gcd does
    /// not divide the constant) and a positive leading coefficient.
    pub fn atom_eq(form: LinearForm) -> Formula {
        if form.is_constant() {
            return if form.constant.is_zero() {
                Formula::True
            } else {
                Formula::False
            };
        }
        let g = form.coeff_gcd();
        let form = if g > BigInt::one() {
            if !(&form.constant % &g).is_zero() {
                return Formula::False;
            }
            form.div_exact(&g)
        } else {
            form
        };
        // Canonical sign: the first variable's coefficient is positive.
        let form = match form.coeffs.values().next() {
            Some(c) if c.is_negative() => form.neg(),
            _ => form,
        };
        // a positive combination of naturals plus a positive constant is never 0
        if form.coeffs.values().all(|c| c.is_positive()) && form.constant.is_positive() {
            return Formula::False;
        }
        Formula::Atom(Atom::Eq(form))
    }

    /// `form = 0 (mod n)`, normalized: coefficients and constant reduced into
    /// `[0, n)`, common factors with the modulus cancelled, `n = 1` folds to
    /// `True`.
    pub fn atom_mod(form: LinearForm, n: impl Into<BigInt>) -> Formula {
        let mut n: BigInt = n.into();
        assert!(n >= BigInt::one(), "congruence modulus must be >= 1");
        let mut form = form;
        loop {
            if n.is_one() {
                return Formula::True;
            }
            form = LinearForm {
                coeffs: form
                    .coeffs
                    .iter()
                    .filter_map(|(v, c)| {
                        let r = c.mod_floor(&n);
                        if r.is_zero() {
                            None
                        } else {
                            Some((v.clone(), r))
                        }
                    })
                    .collect(),
                constant: form.constant.mod_floor(&n),
            };
            if form.is_constant() {
                return if form.constant.is_zero() {
                    Formula::True
                } else {
                    Formula::False
                };
            }
            let mut g = form.coeff_gcd().gcd(&form.constant);
            g = g.gcd(&n);
            if g > BigInt::one() {
                form = form.div_exact(&g);
                n = &n / &g;
            } else {
                return Formula::Atom(Atom::Mod(form, n));
            }
        }
    }

    /// Negation with double-negation and constant folding.
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(g) => *g,
            g => Formula::Not(Box::new(g)),
        }
    }

    /// N-ary conjunction; flattens nested conjunctions and folds constants.
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// N-ary disjunction; flattens nested disjunctions and folds constants.
    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::True, b) => b,
            (Formula::False, _) => Formula::True,
            (_, Formula::True) => Formula::True,
            (a, Formula::False) => Formula::not(a),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        match body {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            body => Formula::Exists(var.into(), Box::new(body)),
        }
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        match body {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            body => Formula::Forall(var.into(), Box::new(body)),
        }
    }

    pub fn count(bound: impl Into<String>, count: impl Into<String>, body: Formula) -> Formula {
        Formula::Count {
            bound: bound.into(),
            count: count.into(),
            body: Box::new(body),
        }
    }

    /// Convenience: `a = b` for two linear forms.
    pub fn eq(a: LinearForm, b: LinearForm) -> Formula {
        Formula::atom_eq(a.sub(&b))
    }

    /// Convenience: `a <= b`.
    pub fn le(a: LinearForm, b: LinearForm) -> Formula {
        Formula::atom_le(a.sub(&b))
    }

    /// Convenience: `a < b`.
    pub fn lt(a: LinearForm, b: LinearForm) -> Formula {
        Formula::atom_le(a.sub(&b).add_constant(1))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for v in a.form().vars() {
                    if !bound.contains(v) {
                        out.insert(v.to_string());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
            Formula::Count { bound: z, count, body } => {
                if !bound.contains(count) {
                    out.insert(count.clone());
                }
                let fresh = bound.insert(z.clone());
                body.collect_free(bound, out);
                if fresh {
                    bound.remove(z);
                }
            }
        }
    }

    /// All variable names occurring anywhere (free or bound).
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => out.extend(a.form().vars().map(|s| s.to_string())),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::Count { bound, count, .. } => {
                out.insert(bound.clone());
                out.insert(count.clone());
            }
            _ => {}
        });
        out
    }

    /// Variables bound by some quantifier in the formula.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::Count { bound, .. } => {
                out.insert(bound.clone());
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => {
                for g in gs {
                    g.visit(f);
                }
            }
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) | Formula::Count { body: g, .. } => {
                g.visit(f)
            }
            _ => {}
        }
    }

    pub fn has_quantifiers(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::Exists(..) | Formula::Forall(..) | Formula::Count { .. }
            ) {
                found = true;
            }
        });
        found
    }

    pub fn has_count(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Count { .. }) {
                found = true;
            }
        });
        found
    }

    /// Structural well-formedness: modulus bounds, counting-quantifier
    /// variable constraints, and no nested rebinding of a variable.
    pub fn well_formed(&self) -> Result<(), WellFormedError> {
        self.wf(&mut BTreeSet::new())
    }

    fn wf(&self, in_scope: &mut BTreeSet<String>) -> Result<(), WellFormedError> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(Atom::Mod(_, n)) => {
                if *n < BigInt::one() {
                    Err(WellFormedError::BadModulus)
                } else {
                    Ok(())
                }
            }
            Formula::Atom(_) => Ok(()),
            Formula::Not(f) => f.wf(in_scope),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.wf(in_scope)),
            Formula::Implies(a, b) => {
                a.wf(in_scope)?;
                b.wf(in_scope)
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                if !in_scope.insert(v.clone()) {
                    return Err(WellFormedError::Shadowed(v.clone()));
                }
                let r = f.wf(in_scope);
                in_scope.remove(v);
                r
            }
            Formula::Count { bound, count, body } => {
                if bound == count {
                    return Err(WellFormedError::CountVarClash(bound.clone()));
                }
                if body.bound_vars().contains(count) {
                    return Err(WellFormedError::CountVarBound(count.clone()));
                }
                if !in_scope.insert(bound.clone()) {
                    return Err(WellFormedError::Shadowed(bound.clone()));
                }
                let r = body.wf(in_scope);
                in_scope.remove(bound);
                r
            }
        }
    }

    /// Canonical form: sorted, deduplicated connective children on top of the
    /// atom normalization performed by the smart constructors.
    pub fn canon(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.canon()),
            Formula::And(fs) => {
                let mut parts: Vec<Formula> = fs.iter().map(|f| f.canon()).collect();
                let folded = Formula::and(parts.drain(..).collect());
                match folded {
                    Formula::And(mut kids) => {
                        kids.sort();
                        kids.dedup();
                        Formula::and(kids)
                    }
                    other => other,
                }
            }
            Formula::Or(fs) => {
                let mut parts: Vec<Formula> = fs.iter().map(|f| f.canon()).collect();
                let folded = Formula::or(parts.drain(..).collect());
                match folded {
                    Formula::Or(mut kids) => {
                        kids.sort();
                        kids.dedup();
                        Formula::or(kids)
                    }
                    other => other,
                }
            }
            Formula::Implies(a, b) => Formula::implies(a.canon(), b.canon()),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.canon()),
            Formula::Forall(v, f) => Formula::forall(v.clone(), f.canon()),
            Formula::Count { bound, count, body } => {
                Formula::count(bound.clone(), count.clone(), body.canon())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", printer::render(self))
    }
}

/// Total assignment of natural numbers to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, BigInt>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    /// Insert a natural-number value. Panics on negative values: assignments
    /// range over the naturals.
    pub fn set(&mut self, name: impl Into<String>, value: impl Into<BigInt>) {
        let v: BigInt = value.into();
        assert!(!v.is_negative(), "assignments take natural-number values");
        self.0.insert(name.into(), v);
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<BigInt>) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.0.get(name)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(|s| s.as_str())
    }
}

impl<K: Into<String>, V: Into<BigInt>> FromIterator<(K, V)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut a = Assignment::new();
        for (k, v) in iter {
            a.set(k, v);
        }
        a
    }
}

/// Render a formula in the surface grammar. `parse(render(f))` is
/// structurally equal to `f.canon()`.
pub fn render(f: &Formula) -> String {
    printer::render(f)
}

/// Evaluate a formula under an assignment covering its free variables.
pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    eval::evaluate(f, a)
}

/// A fresh variable name based on `hint` avoiding every name in `taken`.
pub fn fresh_var(hint: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(hint) {
        return hint.to_string();
    }
    for i in 0u64.. {
        let cand = format!("{hint}{i}");
        if !taken.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(pairs: &[(&str, i64)], c: i64) -> LinearForm {
        let mut f = LinearForm::constant(c);
        for (v, k) in pairs {
            f = f.add(&LinearForm::term(*k, *v));
        }
        f
    }

    #[test]
    fn linear_form_zero_coeffs_dropped() {
        let f = lf(&[("x", 2), ("y", -2)], 0).add(&lf(&[("x", -2)], 5));
        assert_eq!(f.coeff("x"), BigInt::zero());
        assert_eq!(f.vars().count(), 1);
        assert_eq!(*f.constant_part(), BigInt::from(5));
    }

    #[test]
    fn atom_le_gcd_reduction_floors() {
        // 2x + 1 <= 0  <=>  x <= -1/2  <=>  x + 1 <= 0
        let a = Formula::atom_le(lf(&[("x", 2)], 1));
        assert_eq!(a, Formula::atom_le(lf(&[("x", 1)], 1)));
    }

    #[test]
    fn atom_eq_unsat_gcd() {
        assert_eq!(Formula::atom_eq(lf(&[("x", 2)], 1)), Formula::False);
        assert_eq!(
            Formula::atom_eq(lf(&[("x", -1), ("y", 2)], 0)),
            Formula::atom_eq(lf(&[("x", 1), ("y", -2)], 0))
        );
    }

    #[test]
    fn atom_mod_normalization() {
        // 2x + 2 = 0 mod 4  <=>  x + 1 = 0 mod 2
        assert_eq!(
            Formula::atom_mod(lf(&[("x", 2)], 2), 4),
            Formula::atom_mod(lf(&[("x", 1)], 1), 2)
        );
        assert_eq!(Formula::atom_mod(lf(&[("x", 5)], 0), 1), Formula::True);
        assert_eq!(Formula::atom_mod(lf(&[], 3), 6), Formula::False);
        // negative data reduced into [0, n)
        assert_eq!(
            Formula::atom_mod(lf(&[("x", -1)], -1), 3),
            Formula::atom_mod(lf(&[("x", 2)], 2), 3)
        );
    }

    #[test]
    fn connective_folding() {
        let t = Formula::True;
        let x = Formula::atom_le(lf(&[("x", 1)], -5));
        assert_eq!(Formula::and(vec![t.clone(), x.clone()]), x);
        assert_eq!(Formula::or(vec![Formula::False, x.clone()]), x);
        assert_eq!(Formula::and(vec![Formula::False, x.clone()]), Formula::False);
        assert_eq!(Formula::not(Formula::not(x.clone())), x);
        assert_eq!(Formula::exists("y", Formula::True), Formula::True);
    }

    #[test]
    fn free_vars_of_count() {
        // # z = y . z < x  has free vars {x, y}
        let body = Formula::lt(LinearForm::var("z"), LinearForm::var("x"));
        let f = Formula::count("z", "y", body);
        let fv = f.free_vars();
        assert!(fv.contains("x") && fv.contains("y") && !fv.contains("z"));
    }

    #[test]
    fn well_formed_rejects_count_clash() {
        let f = Formula::count("z", "z", Formula::True);
        assert_eq!(
            f.well_formed(),
            Err(WellFormedError::CountVarClash("z".into()))
        );
        let g = Formula::count(
            "z",
            "y",
            Formula::exists("y", Formula::atom_eq(LinearForm::var("y"))),
        );
        assert!(matches!(
            g.well_formed(),
            Err(WellFormedError::CountVarBound(_)) | Err(WellFormedError::Shadowed(_))
        ));
    }

    #[test]
    fn fresh_var_avoids_taken() {
        let taken: BTreeSet<String> = ["x".to_string(), "x0".to_string()].into_iter().collect();
        assert_eq!(fresh_var("x", &taken), "x1");
        assert_eq!(fresh_var("y", &taken), "y");
    }
}
