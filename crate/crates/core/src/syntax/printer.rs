//! Precedence-aware rendering back into the surface grammar.

use super::{Atom, Formula};
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Binding strength of the context a subformula is printed into.
/// Quantifier bodies extend to the end of the formula, so quantifiers and
/// counting quantifiers need parentheses anywhere a tighter operator expects
/// an operand.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Formula = 0,
    Impl = 1,
    Disj = 2,
    Conj = 3,
    Unary = 4,
}

pub fn render(f: &Formula) -> String {
    let mut s = String::new();
    go(f, Level::Formula, &mut s);
    s
}

fn go(f: &Formula, level: Level, out: &mut String) {
    match f {
        Formula::True => out.push_str("0 = 0"),
        Formula::False => out.push_str("0 < 0"),
        Formula::Atom(a) => render_atom(a, out),
        Formula::Not(g) => {
            out.push('~');
            go(g, Level::Unary, out);
        }
        Formula::And(fs) => paren(level > Level::Conj, out, |out| {
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                go(g, Level::Unary, out);
            }
        }),
        Formula::Or(fs) => paren(level > Level::Disj, out, |out| {
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                go(g, Level::Conj, out);
            }
        }),
        Formula::Implies(a, b) => paren(level > Level::Impl, out, |out| {
            go(a, Level::Disj, out);
            out.push_str(" -> ");
            go(b, Level::Impl, out);
        }),
        Formula::Exists(v, g) => paren(level > Level::Formula, out, |out| {
            out.push_str("E ");
            out.push_str(v);
            out.push_str(". ");
            go(g, Level::Formula, out);
        }),
        Formula::Forall(v, g) => paren(level > Level::Formula, out, |out| {
            out.push_str("A ");
            out.push_str(v);
            out.push_str(". ");
            go(g, Level::Formula, out);
        }),
        Formula::Count { bound, count, body } => paren(level > Level::Formula, out, |out| {
            out.push_str("# ");
            out.push_str(bound);
            out.push_str(" = ");
            out.push_str(count);
            out.push_str(" . ");
            go(body, Level::Formula, out);
        }),
    }
}

fn paren(needed: bool, out: &mut String, inner: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
        inner(out);
        out.push(')');
    } else {
        inner(out);
    }
}

/// Print `form (rel) 0` as `pos (rel) neg` where `pos` collects the positive
/// terms and `neg` the negated negative ones, so no subtraction is needed.
fn render_atom(a: &Atom, out: &mut String) {
    let (form, rel, modulus) = match a {
        Atom::Le(f) => (f, "<=", None),
        Atom::Eq(f) => (f, "=", None),
        Atom::Mod(f, n) => (f, "=", Some(n)),
    };
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (v, c) in form.terms() {
        if c.is_positive() {
            pos.push((c.clone(), v));
        } else {
            neg.push((-c, v));
        }
    }
    let c = form.constant_part();
    let (pc, nc) = if c.is_positive() {
        (Some(c.clone()), None)
    } else if c.is_negative() {
        (None, Some(-c))
    } else {
        (None, None)
    };
    render_side(&pos, pc, out);
    out.push(' ');
    out.push_str(rel);
    out.push(' ');
    render_side(&neg, nc, out);
    if let Some(n) = modulus {
        out.push_str(" mod ");
        out.push_str(&n.to_string());
    }
}

fn render_side(terms: &[(BigInt, &str)], constant: Option<BigInt>, out: &mut String) {
    let mut first = true;
    for (c, v) in terms {
        if !first {
            out.push_str(" + ");
        }
        first = false;
        if !c.is_one() {
            out.push_str(&c.to_string());
            out.push('*');
        }
        out.push_str(v);
    }
    match constant {
        Some(c) => {
            if !first {
                out.push_str(" + ");
            }
            out.push_str(&c.to_string());
        }
        None => {
            if first {
                out.push('0');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn roundtrip(s: &str) {
        let f = parse(s).unwrap().canon();
        let printed = render(&f);
        let back = parse(&printed).unwrap_or_else(|e| panic!("reparse `{printed}`: {e}"));
        assert_eq!(back, f, "{s} -> {printed}");
    }

    #[test]
    fn atom_moves_negative_terms() {
        let f = parse("x = 2*y").unwrap();
        assert_eq!(render(&f), "x = 2*y");
        let g = parse("x < y").unwrap();
        assert_eq!(render(&g), "x + 1 <= y");
    }

    #[test]
    fn count_rendering() {
        let f = parse("# z = y . z < x").unwrap();
        assert_eq!(render(&f), "# z = y . z + 1 <= x");
    }

    #[test]
    fn roundtrips() {
        for s in [
            "E y. x = y + y",
            "A x. E y. (x = 2*y | x = 2*y + 1)",
            "x = 1 mod 2 & (y <= 3 -> x <= y)",
            "~(x = 0) | ~(y = 0 mod 3)",
            "# z = y . (z < x & z = 0 mod 2)",
            "(x <= y -> y <= x) -> x = y",
            "E a b. a + 2*b = 7 & ~(a = b)",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn constants_render() {
        assert_eq!(render(&Formula::True), "0 = 0");
        assert_eq!(render(&Formula::False), "0 < 0");
        assert_eq!(parse("0 = 0").unwrap(), Formula::True);
        assert_eq!(parse("0 < 0").unwrap(), Formula::False);
    }
}
