//! Negation-normal quantifier-free formulas over four literal kinds, the
//! shared simplifier, and disjoint path-DNF decomposition.

use crate::syntax::{Atom, Formula, LinearForm};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A literal: negations are pushed into the literal kinds, so `Qf` needs no
/// negation node. `Le(t)` is `t <= 0`, `Eq(t)` is `t = 0`, `Div(n, t)` is
/// `n | t` and `NotDiv(n, t)` its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lit {
    Le(LinearForm),
    Eq(LinearForm),
    Div(BigInt, LinearForm),
    NotDiv(BigInt, LinearForm),
}

impl Lit {
    pub fn form(&self) -> &LinearForm {
        match self {
            Lit::Le(f) | Lit::Eq(f) | Lit::Div(_, f) | Lit::NotDiv(_, f) => f,
        }
    }

    /// The complementary literal (`Eq` has no single complement and panics;
    /// callers expand equalities first).
    pub fn complement(&self) -> Lit {
        match self {
            Lit::Le(f) => Lit::Le(f.neg().add_constant(1)),
            Lit::Div(n, f) => Lit::NotDiv(n.clone(), f.clone()),
            Lit::NotDiv(n, f) => Lit::Div(n.clone(), f.clone()),
            Lit::Eq(_) => panic!("equality literals have no literal complement"),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Lit::Le(f) => Formula::atom_le(f.clone()),
            Lit::Eq(f) => Formula::atom_eq(f.clone()),
            Lit::Div(n, f) => Formula::atom_mod(f.clone(), n.clone()),
            Lit::NotDiv(n, f) => Formula::not(Formula::atom_mod(f.clone(), n.clone())),
        }
    }
}

/// Quantifier-free negation-normal formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qf {
    True,
    False,
    Lit(Lit),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

impl Qf {
    /// Normalized `form <= 0`.
    pub fn le(form: LinearForm) -> Qf {
        match Formula::atom_le(form) {
            Formula::True => Qf::True,
            Formula::False => Qf::False,
            Formula::Atom(Atom::Le(f)) => Qf::Lit(Lit::Le(f)),
            _ => unreachable!(),
        }
    }

    /// Normalized `form = 0`.
    pub fn eq(form: LinearForm) -> Qf {
        match Formula::atom_eq(form) {
            Formula::True => Qf::True,
            Formula::False => Qf::False,
            Formula::Atom(Atom::Eq(f)) => Qf::Lit(Lit::Eq(f)),
            _ => unreachable!(),
        }
    }

    /// Normalized `n | form`.
    pub fn div(n: BigInt, form: LinearForm) -> Qf {
        match Formula::atom_mod(form, n) {
            Formula::True => Qf::True,
            Formula::False => Qf::False,
            Formula::Atom(Atom::Mod(f, n)) => Qf::Lit(Lit::Div(n, f)),
            _ => unreachable!(),
        }
    }

    /// Normalized `n` does not divide `form`.
    pub fn not_div(n: BigInt, form: LinearForm) -> Qf {
        match Qf::div(n, form) {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Lit(Lit::Div(n, f)) => Qf::Lit(Lit::NotDiv(n, f)),
            _ => unreachable!(),
        }
    }

    pub fn and(parts: Vec<Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::True => {}
                Qf::False => return Qf::False,
                Qf::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qf::True,
            1 => out.pop().unwrap(),
            _ => Qf::And(out),
        }
    }

    pub fn or(parts: Vec<Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::False => {}
                Qf::True => return Qf::True,
                Qf::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qf::False,
            1 => out.pop().unwrap(),
            _ => Qf::Or(out),
        }
    }

    pub fn negate(&self) -> Qf {
        match self {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Lit(Lit::Le(f)) => Qf::le(f.neg().add_constant(1)),
            Qf::Lit(Lit::Eq(f)) => Qf::or(vec![
                Qf::le(f.add_constant(1)),
                Qf::le(f.neg().add_constant(1)),
            ]),
            Qf::Lit(Lit::Div(n, f)) => Qf::not_div(n.clone(), f.clone()),
            Qf::Lit(Lit::NotDiv(n, f)) => Qf::div(n.clone(), f.clone()),
            Qf::And(ps) => Qf::or(ps.iter().map(|p| p.negate()).collect()),
            Qf::Or(ps) => Qf::and(ps.iter().map(|p| p.negate()).collect()),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Qf::True => Formula::True,
            Qf::False => Formula::False,
            Qf::Lit(l) => l.to_formula(),
            Qf::And(ps) => Formula::and(ps.iter().map(|p| p.to_formula()).collect()),
            Qf::Or(ps) => Formula::or(ps.iter().map(|p| p.to_formula()).collect()),
        }
    }

    pub fn for_each_lit(&self, f: &mut impl FnMut(&Lit)) {
        match self {
            Qf::True | Qf::False => {}
            Qf::Lit(l) => f(l),
            Qf::And(ps) | Qf::Or(ps) => {
                for p in ps {
                    p.for_each_lit(f);
                }
            }
        }
    }

    /// Rebuild with a literal-wise transformation, re-normalizing on the way.
    pub fn map_lits(&self, f: &impl Fn(&Lit) -> Qf) -> Qf {
        match self {
            Qf::True => Qf::True,
            Qf::False => Qf::False,
            Qf::Lit(l) => f(l),
            Qf::And(ps) => Qf::and(ps.iter().map(|p| p.map_lits(f)).collect()),
            Qf::Or(ps) => Qf::or(ps.iter().map(|p| p.map_lits(f)).collect()),
        }
    }

    /// Substitute a linear form for a variable in every literal.
    pub fn subst(&self, var: &str, t: &LinearForm) -> Qf {
        self.map_lits(&|l| match l {
            Lit::Le(f) => Qf::le(f.subst_var(var, t)),
            Lit::Eq(f) => Qf::eq(f.subst_var(var, t)),
            Lit::Div(n, f) => Qf::div(n.clone(), f.subst_var(var, t)),
            Lit::NotDiv(n, f) => Qf::not_div(n.clone(), f.subst_var(var, t)),
        })
    }

    /// Replace every occurrence of `lit` (or its complement, negated) by a
    /// truth constant.
    pub fn assume(&self, lit: &Lit, value: bool) -> Qf {
        let comp = matches!(lit, Lit::Le(_) | Lit::Div(_, _) | Lit::NotDiv(_, _))
            .then(|| lit.complement());
        self.map_lits(&|l| {
            if l == lit {
                if value {
                    Qf::True
                } else {
                    Qf::False
                }
            } else if comp.as_ref() == Some(l) {
                if value {
                    Qf::False
                } else {
                    Qf::True
                }
            } else {
                Qf::Lit(l.clone())
            }
        })
    }

    pub fn contains_var(&self, var: &str) -> bool {
        let mut found = false;
        self.for_each_lit(&mut |l| {
            if !l.form().coeff(var).is_zero() {
                found = true;
            }
        });
        found
    }
}

/// Convert a quantifier-free [`Formula`] into negation-normal form.
/// Panics on quantifiers: callers eliminate those first.
pub fn from_formula(f: &Formula) -> Qf {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Qf {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Qf::True,
        (Formula::True, false) | (Formula::False, true) => Qf::False,
        (Formula::Atom(a), true) => atom_qf(a),
        (Formula::Atom(a), false) => atom_qf(a).negate(),
        (Formula::Not(g), pos) => nnf(g, !pos),
        (Formula::And(gs), true) => Qf::and(gs.iter().map(|g| nnf(g, true)).collect()),
        (Formula::And(gs), false) => Qf::or(gs.iter().map(|g| nnf(g, false)).collect()),
        (Formula::Or(gs), true) => Qf::or(gs.iter().map(|g| nnf(g, true)).collect()),
        (Formula::Or(gs), false) => Qf::and(gs.iter().map(|g| nnf(g, false)).collect()),
        (Formula::Implies(a, b), true) => Qf::or(vec![nnf(a, false), nnf(b, true)]),
        (Formula::Implies(a, b), false) => Qf::and(vec![nnf(a, true), nnf(b, false)]),
        _ => panic!("from_formula requires a quantifier-free formula"),
    }
}

fn atom_qf(a: &Atom) -> Qf {
    match a {
        Atom::Le(f) => Qf::le(f.clone()),
        Atom::Eq(f) => Qf::eq(f.clone()),
        Atom::Mod(f, n) => Qf::div(n.clone(), f.clone()),
    }
}

/// Bottom-up simplification: flattening, sorting, deduplication, absorption,
/// complementary-literal detection, inequality subsumption and congruence
/// contradiction detection.
pub fn simplify(q: &Qf) -> Qf {
    match q {
        Qf::True | Qf::False | Qf::Lit(_) => q.clone(),
        Qf::And(ps) => {
            let kids: Vec<Qf> = ps.iter().map(simplify).collect();
            let folded = Qf::and(kids);
            match folded {
                Qf::And(mut kids) => {
                    kids.sort();
                    kids.dedup();
                    if has_conjunctive_clash(&kids) {
                        return Qf::False;
                    }
                    let kids = subsume_le(kids, true);
                    let kids = absorb(kids, true);
                    Qf::and(kids)
                }
                other => other,
            }
        }
        Qf::Or(ps) => {
            let kids: Vec<Qf> = ps.iter().map(simplify).collect();
            let folded = Qf::or(kids);
            match folded {
                Qf::Or(mut kids) => {
                    kids.sort();
                    kids.dedup();
                    if has_disjunctive_clash(&kids) {
                        return Qf::True;
                    }
                    let kids = subsume_le(kids, false);
                    let kids = absorb(kids, false);
                    Qf::or(kids)
                }
                other => other,
            }
        }
    }
}

/// A conjunction is false when it contains a literal and its complement, two
/// congruences on the same form with different residues... (for equal
/// moduli), or an equality together with an incompatible congruence constant.
fn has_conjunctive_clash(kids: &[Qf]) -> bool {
    let lits: Vec<&Lit> = kids
        .iter()
        .filter_map(|k| if let Qf::Lit(l) = k { Some(l) } else { None })
        .collect();
    // literal vs complement
    for l in &lits {
        if !matches!(l, Lit::Eq(_)) {
            let c = l.complement();
            if lits.iter().any(|m| **m == c) {
                return true;
            }
        }
    }
    // Div(n, t + c1) & Div(n, t + c2) with c1 != c2 is unsatisfiable
    let mut seen: BTreeMap<(BigInt, Vec<(String, BigInt)>), BigInt> = BTreeMap::new();
    for l in &lits {
        if let Lit::Div(n, f) = l {
            let key = (
                n.clone(),
                f.terms().map(|(v, c)| (v.to_string(), c.clone())).collect(),
            );
            let c = f.constant_part().clone();
            if let Some(prev) = seen.get(&key) {
                if *prev != c {
                    return true;
                }
            } else {
                seen.insert(key, c);
            }
        }
    }
    false
}

fn has_disjunctive_clash(kids: &[Qf]) -> bool {
    let lits: Vec<&Lit> = kids
        .iter()
        .filter_map(|k| if let Qf::Lit(l) = k { Some(l) } else { None })
        .collect();
    for l in &lits {
        if !matches!(l, Lit::Eq(_)) {
            let c = l.complement();
            if lits.iter().any(|m| **m == c) {
                return true;
            }
        }
    }
    false
}

/// Keep only the strongest (in a conjunction) or weakest (in a disjunction)
/// inequality among those sharing a variable part.
fn subsume_le(kids: Vec<Qf>, conjunctive: bool) -> Vec<Qf> {
    let mut best: BTreeMap<Vec<(String, BigInt)>, BigInt> = BTreeMap::new();
    for k in &kids {
        if let Qf::Lit(Lit::Le(f)) = k {
            let key: Vec<(String, BigInt)> =
                f.terms().map(|(v, c)| (v.to_string(), c.clone())).collect();
            let c = f.constant_part().clone();
            best.entry(key)
                .and_modify(|prev| {
                    // form + c <= 0: larger constant is stronger
                    if (conjunctive && c > *prev) || (!conjunctive && c < *prev) {
                        *prev = c.clone();
                    }
                })
                .or_insert(c);
        }
    }
    kids.into_iter()
        .filter(|k| {
            if let Qf::Lit(Lit::Le(f)) = k {
                let key: Vec<(String, BigInt)> =
                    f.terms().map(|(v, c)| (v.to_string(), c.clone())).collect();
                best.get(&key) == Some(f.constant_part())
            } else {
                true
            }
        })
        .collect()
}

/// `x & (x | y) -> x` and dually.
fn absorb(kids: Vec<Qf>, conjunctive: bool) -> Vec<Qf> {
    let singles: Vec<Qf> = kids
        .iter()
        .filter(|k| !matches!(k, Qf::And(_) | Qf::Or(_)))
        .cloned()
        .collect();
    kids.into_iter()
        .filter(|k| match (k, conjunctive) {
            (Qf::Or(inner), true) => !inner.iter().any(|i| singles.contains(i)),
            (Qf::And(inner), false) => !inner.iter().any(|i| singles.contains(i)),
            _ => true,
        })
        .collect()
}

/// Expand equality literals into pairs of inequalities so that every literal
/// has a literal complement (needed by the disjoint path decomposition).
pub fn expand_eq(q: &Qf) -> Qf {
    q.map_lits(&|l| match l {
        Lit::Eq(f) => Qf::and(vec![Qf::le(f.clone()), Qf::le(f.neg())]),
        other => Qf::Lit(other.clone()),
    })
}

/// The shape of a cube's constraints on one distinguished variable `z`,
/// after scaling all coefficients on `z` to a common magnitude `delta` and
/// reinterpreting `zeta = delta * z` as a unit-coefficient variable.
/// The cube's solution set in `z` maps bijectively to the solutions of
/// `zeta >= lowers, zeta <= uppers, n | zeta + e, ...` in `zeta`.
pub struct CubeShape {
    /// terms `t` with `zeta >= t`
    pub lowers: Vec<LinearForm>,
    /// terms `u` with `zeta <= u`
    pub uppers: Vec<LinearForm>,
    /// pairs `(n, e)` meaning `n | zeta + e` (includes `(delta, 0)` when
    /// `delta > 1`)
    pub divs: Vec<(BigInt, LinearForm)>,
    /// pairs `(n, e)` meaning `n` does not divide `zeta + e`
    pub notdivs: Vec<(BigInt, LinearForm)>,
    /// literals not involving `z`
    pub guard: Vec<Lit>,
    pub delta: BigInt,
    pub has_z: bool,
}

impl CubeShape {
    /// lcm of all congruence moduli (at least 1); the solution set in each
    /// residue class mod this value is a plain interval.
    pub fn modulus(&self) -> BigInt {
        use num_integer::Integer;
        let mut m = BigInt::from(1);
        for (n, _) in self.divs.iter().chain(&self.notdivs) {
            m = m.lcm(n);
        }
        m
    }
}

/// Analyze a cube's literals with respect to the variable `z`. Equality
/// literals must have been expanded away.
pub fn analyze_cube(z: &str, cube: &[Lit]) -> CubeShape {
    use num_integer::Integer;
    use num_traits::{One, Signed};
    let mut delta = BigInt::one();
    let mut has_z = false;
    for l in cube {
        let c = l.form().coeff(z);
        if !c.is_zero() {
            has_z = true;
            delta = delta.lcm(&c.abs());
        }
    }
    let mut shape = CubeShape {
        lowers: Vec::new(),
        uppers: Vec::new(),
        divs: Vec::new(),
        notdivs: Vec::new(),
        guard: Vec::new(),
        delta: delta.clone(),
        has_z,
    };
    for l in cube {
        let c = l.form().coeff(z);
        if c.is_zero() {
            shape.guard.push(l.clone());
            continue;
        }
        let lambda = &delta / c.abs();
        let rest = l
            .form()
            .subst_var(z, &LinearForm::constant(0))
            .scale(&lambda);
        match l {
            Lit::Le(_) if c.is_positive() => shape.uppers.push(rest.neg()),
            Lit::Le(_) => shape.lowers.push(rest),
            Lit::Div(n, _) => {
                let e = if c.is_positive() { rest } else { rest.neg() };
                shape.divs.push((n * &lambda, e));
            }
            Lit::NotDiv(n, _) => {
                let e = if c.is_positive() { rest } else { rest.neg() };
                shape.notdivs.push((n * &lambda, e));
            }
            Lit::Eq(_) => unreachable!("equalities are expanded before cube analysis"),
        }
    }
    if delta > BigInt::one() {
        shape.divs.push((delta, LinearForm::constant(0)));
    }
    shape
}

/// Atom ordering strategy for the path decomposition. `Reversed` exists so
/// independent decompositions of the same set can be compared in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitOrder {
    #[default]
    Forward,
    Reversed,
}

/// Decompose into *disjoint* cubes of literals by Shannon expansion on the
/// literals of `q` (equalities must have been expanded away). Cubes whose
/// literal set is propositionally contradictory are dropped by the
/// simplifier, but cubes may still be arithmetically empty.
pub fn path_dnf(q: &Qf, order: SplitOrder) -> Vec<Vec<Lit>> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    split(&simplify(q), &mut path, &mut out, order);
    out
}

fn split(q: &Qf, path: &mut Vec<Lit>, out: &mut Vec<Vec<Lit>>, order: SplitOrder) {
    match q {
        Qf::False => {}
        Qf::True => out.push(path.clone()),
        _ => {
            let mut lits = Vec::new();
            q.for_each_lit(&mut |l| {
                if !lits.contains(l) {
                    lits.push(l.clone());
                }
            });
            lits.sort();
            let lit = match order {
                SplitOrder::Forward => lits.first().cloned(),
                SplitOrder::Reversed => lits.last().cloned(),
            };
            let Some(lit) = lit else {
                // no literals left but not constant-folded: cannot happen
                unreachable!("non-constant Qf without literals");
            };
            debug_assert!(!matches!(lit, Lit::Eq(_)), "expand equalities first");
            let pos = simplify(&q.assume(&lit, true));
            path.push(lit.clone());
            split(&pos, path, out, order);
            path.pop();
            let neg = simplify(&q.assume(&lit, false));
            path.push(lit.complement());
            split(&neg, path, out, order);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn qf(s: &str) -> Qf {
        from_formula(&parse(s).unwrap())
    }

    #[test]
    fn nnf_pushes_negation() {
        let q = qf("~(x <= 3 & x = 0 mod 2)");
        // ~(x-3<=0) | ~(2|x)  ==  (4-x<=0) | NotDiv
        match q {
            Qf::Or(ps) => assert_eq!(ps.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn simplify_detects_clash() {
        let q = simplify(&qf("x <= 3 & ~(x <= 3)"));
        assert_eq!(q, Qf::False);
        let q = simplify(&qf("x = 0 mod 2 & x = 1 mod 2"));
        assert_eq!(q, Qf::False);
        let q = simplify(&qf("x <= 3 | ~(x <= 3)"));
        assert_eq!(q, Qf::True);
    }

    #[test]
    fn simplify_subsumes_bounds() {
        // x <= 3 & x <= 5 -> x <= 3
        let q = simplify(&qf("x <= 3 & x <= 5"));
        assert_eq!(q, qf("x <= 3"));
        let q = simplify(&qf("x <= 3 | x <= 5"));
        assert_eq!(q, qf("x <= 5"));
    }

    #[test]
    fn path_dnf_disjoint_cover() {
        use crate::syntax::{evaluate, Assignment};
        let f = parse("(x <= 5 | x = 0 mod 2) & ~(x = 3)").unwrap();
        let q = expand_eq(&from_formula(&f));
        let cubes = path_dnf(&q, SplitOrder::Forward);
        for x in 0i64..30 {
            let a: Assignment = [("x", x)].into_iter().collect();
            let want = evaluate(&f, &a).unwrap();
            let hits = cubes
                .iter()
                .filter(|cube| {
                    cube.iter()
                        .all(|l| evaluate(&l.to_formula(), &a).unwrap())
                })
                .count();
            assert_eq!(hits, usize::from(want), "x = {x}");
        }
    }
}
