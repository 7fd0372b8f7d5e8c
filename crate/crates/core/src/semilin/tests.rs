use super::*;
use crate::solve::{decide, equivalent};
use crate::syntax::{evaluate, parse, Assignment};

fn set(formula: &str, n: usize) -> SemilinearSet {
    to_semilinear(&parse(formula).unwrap(), &coord_vars(n)).unwrap()
}

/// Membership in the decomposition must match direct evaluation on a grid,
/// and the lattices must be pairwise disjoint pointwise.
fn check_set(formula: &str, n: usize, bound: i64) -> SemilinearSet {
    let f = parse(formula).unwrap();
    let s = set(formula, n);
    let vars = coord_vars(n);
    let mut point = vec![0i64; n];
    loop {
        let a: Assignment = vars.iter().cloned().zip(point.iter().copied()).collect();
        let want = evaluate(&f, &a).unwrap();
        let pt: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        let hits = s.lattices().iter().filter(|l| l.contains(&pt)).count();
        assert_eq!(hits > 0, want, "{formula} at {point:?}");
        assert!(hits <= 1, "{formula}: overlap at {point:?}");
        let mut i = 0;
        loop {
            if i == n {
                return s;
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
fn odd_numbers() {
    let s = check_set("x1 = 1 mod 2", 1, 30);
    assert_eq!(s.lattices().len(), 1);
    let l = &s.lattices()[0];
    assert_eq!(l.base(), &[BigInt::from(1)]);
    assert_eq!(l.periods(), &[vec![BigInt::from(2)]]);
}

#[test]
fn finite_line_segment() {
    // x + y = 2: three isolated points
    let s = check_set("x1 + x2 = 2", 2, 10);
    assert_eq!(s.dimension().unwrap(), 0);
    assert_eq!(s.lattices().len(), 3);
    let pts = s.enumerate(&BigInt::from(5));
    assert_eq!(
        pts,
        vec![
            vec![BigInt::from(0), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(2), BigInt::from(0)],
        ]
    );
}

#[test]
fn half_plane_triangle() {
    let s = check_set("x1 <= x2", 2, 16);
    assert_eq!(s.dimension().unwrap(), 2);
    let expected = parse("x1 <= x2").unwrap();
    assert!(equivalent(&s.to_formula(&coord_vars(2)), &expected));
}

#[test]
fn full_plane_single_lattice() {
    let s = check_set("0 <= x1", 2, 8);
    assert_eq!(s.lattices().len(), 1);
    assert_eq!(s.dimension().unwrap(), 2);
}

#[test]
fn empty_set() {
    let s = set("x1 < x1", 1);
    assert!(s.is_empty());
    assert_eq!(s.dimension(), Err(SemilinError::EmptySet));
    assert_eq!(s.to_formula(&coord_vars(1)), Formula::False);
}

#[test]
fn congruence_and_bounds() {
    check_set("x1 = 1 mod 2 & 3 <= x1", 1, 40);
    check_set("x1 = x2 mod 3 & x2 < x1", 2, 12);
    check_set("2*x1 <= 3*x2 & x2 <= 10", 2, 14);
}

#[test]
fn disjunctions_and_negation() {
    check_set("x1 = 0 mod 2 | x1 = 0 mod 3", 1, 36);
    check_set("~(x1 = x2)", 2, 10);
    check_set("x1 + x2 <= 7 | (x1 = x2 & 5 <= x1)", 2, 12);
}

#[test]
fn diagonal_line() {
    let s = check_set("x2 = 2*x1", 2, 14);
    assert_eq!(s.dimension().unwrap(), 1);
}

#[test]
fn three_dimensional() {
    check_set("x1 + x2 + x3 <= 4", 3, 6);
    check_set("x1 = x2 mod 2 & x3 <= x1", 3, 5);
}

#[test]
fn round_trip_formulas() {
    for formula in [
        "x1 = 1 mod 2",
        "x1 <= x2",
        "x1 + x2 = 2",
        "x1 = 0 mod 2 | x1 = 0 mod 3",
        "~(x1 = x2) & x1 <= 2*x2",
        "x1 < x1",
    ] {
        let f = parse(formula).unwrap();
        let n = 2.min(f.free_vars().len().max(1));
        let s = to_semilinear(&f, &coord_vars(n.max(f.free_vars().len()))).unwrap();
        let back = s.to_formula(&coord_vars(s.ambient_dim()));
        assert!(equivalent(&f, &back), "{formula} -> {back}");
    }
}

#[test]
fn symbolic_disjointness_and_membership() {
    let s = set("x1 <= x2", 2);
    let vars = coord_vars(2);
    for (i, a) in s.lattices().iter().enumerate() {
        for b in &s.lattices()[i + 1..] {
            let both = Formula::and(vec![a.membership_formula(&vars), b.membership_formula(&vars)]);
            let mut closed = both;
            for v in vars.iter().rev() {
                closed = Formula::exists(v.clone(), closed);
            }
            assert!(!decide(&closed).unwrap(), "lattices intersect");
        }
    }
    // spec examples for member
    let tri = &s;
    assert!(tri.member(&[BigInt::from(3), BigInt::from(5)]).unwrap());
    assert!(!tri.member(&[BigInt::from(5), BigInt::from(3)]).unwrap());
}

#[test]
fn member_dimension_mismatch() {
    let s = set("0 <= x1", 1);
    assert!(matches!(
        s.member(&[BigInt::from(1), BigInt::from(2)]),
        Err(SemilinError::DimensionMismatch { .. })
    ));
}

#[test]
fn decomposition_strategies_agree_on_dimension() {
    use crate::solve::qf::SplitOrder;
    for formula in [
        "x1 <= x2",
        "x1 = 0 mod 2 | x2 = 1 mod 3",
        "x1 + x2 <= 9 & x1 = x2 mod 2",
        "x2 = 2*x1",
        "x1 + x2 = 2",
    ] {
        let f = parse(formula).unwrap();
        let a = to_semilinear_with_order(&f, &coord_vars(2), SplitOrder::Forward).unwrap();
        let b = to_semilinear_with_order(&f, &coord_vars(2), SplitOrder::Reversed).unwrap();
        assert_eq!(a.dimension().ok(), b.dimension().ok(), "{formula}");
    }
}

#[test]
fn enumerate_examples() {
    // odd numbers up to 6
    let s = set("x1 = 1 mod 2", 1);
    let pts = s.enumerate(&BigInt::from(6));
    let want: Vec<Vec<BigInt>> = [1, 3, 5].iter().map(|&x| vec![BigInt::from(x)]).collect();
    assert_eq!(pts, want);
    // x1 <= x2 up to 2, lex order
    let s = set("x1 <= x2", 2);
    let pts = s.enumerate(&BigInt::from(2));
    let want: Vec<Vec<BigInt>> = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
        .iter()
        .map(|&(a, b)| vec![BigInt::from(a), BigInt::from(b)])
        .collect();
    assert_eq!(pts, want);
}

#[test]
fn rejects_extra_variables() {
    let f = parse("x1 <= y").unwrap();
    assert!(matches!(
        to_semilinear(&f, &coord_vars(1)),
        Err(SemilinError::ExtraVariables { .. })
    ));
}

#[test]
fn quantified_input_is_eliminated_first() {
    let s = check_set("E y. x1 = y + y", 1, 20);
    assert_eq!(s.dimension().unwrap(), 1);
}

#[test]
fn lattice_validation() {
    assert!(matches!(
        FundamentalLattice::new(vec![BigInt::from(0)], vec![vec![BigInt::from(0)]]),
        Err(SemilinError::ZeroPeriod)
    ));
    assert!(matches!(
        FundamentalLattice::new(
            vec![BigInt::from(0), BigInt::from(0)],
            vec![
                vec![BigInt::from(1), BigInt::from(2)],
                vec![BigInt::from(2), BigInt::from(4)]
            ]
        ),
        Err(SemilinError::DependentPeriods)
    ));
    assert!(FundamentalLattice::new(
        vec![BigInt::from(1)],
        vec![vec![BigInt::from(2)]]
    )
    .is_ok());
}
