//! Sparse multivariate polynomials with rational coefficients.

use crate::linalg::{rat, solve, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector -> coefficient; the number of variables is fixed per
/// polynomial and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, rat(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
                *entry = &*entry + &(c1 * c2);
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, rat(1));
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term = &term * x;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn eval_int(&self, point: &[BigInt]) -> Rat {
        let pt: Vec<Rat> = point.iter().map(|x| rat(x.clone())).collect();
        self.eval(&pt)
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Substitute an affine expression `a0 + a1*x` for the single variable of
    /// a univariate polynomial.
    pub fn compose_affine(&self, a0: &Rat, a1: &Rat) -> Poly {
        assert_eq!(self.nvars, 1);
        let lin = Poly::constant(1, a0.clone()).add(&Poly::var(1, 0).scale(a1));
        let mut out = Poly::zero(1);
        for (e, c) in &self.terms {
            out = out.add(&lin.pow(e[0]).scale(c));
        }
        out
    }

    /// Interpolate a polynomial with per-variable degree at most `d` from
    /// its values on the tensor grid `grid^nvars`; `values` must follow the
    /// odometer order of the grid (first coordinate fastest).
    pub fn interpolate(
        nvars: usize,
        d: u32,
        grid: &[BigInt],
        values: &[Rat],
    ) -> Option<Poly> {
        // monomials with each exponent <= d
        let mut monomials: Vec<Vec<u32>> = vec![vec![]];
        for _ in 0..nvars {
            monomials = monomials
                .into_iter()
                .flat_map(|m| {
                    (0..=d).map(move |k| {
                        let mut e = m.clone();
                        e.push(k);
                        e
                    })
                })
                .collect();
        }
        let points: Vec<Vec<Rat>> = tensor_points(nvars, grid);
        assert_eq!(points.len(), values.len());
        let columns: Vec<Vec<Rat>> = monomials
            .iter()
            .map(|e| {
                points
                    .iter()
                    .map(|pt| {
                        let mut v = Rat::one();
                        for (x, &k) in pt.iter().zip(e) {
                            for _ in 0..k {
                                v = &v * x;
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let coeffs = solve(&columns, values)?;
        let mut p = Poly::zero(nvars);
        for (e, c) in monomials.into_iter().zip(coeffs) {
            if !c.is_zero() {
                p.terms.insert(e, c);
            }
        }
        Some(p)
    }
}

/// Grid points in odometer order, first coordinate fastest.
pub fn tensor_points(nvars: usize, grid: &[BigInt]) -> Vec<Vec<Rat>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rat>| {
                grid.iter().map(move |g| {
                    let mut q = p.clone();
                    q.push(rat(g.clone()));
                    q
                })
            })
            .collect();
    }
    // reorder so the first coordinate varies fastest
    out.iter_mut().for_each(|p| p.reverse());
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*k{}", i + 1)?;
                } else if k > 1 {
                    write!(f, "*k{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Poly::var(1, 0);
        let p = x.mul(&x).add(&x.scale(&rat(3))).add(&Poly::constant(1, rat(2)));
        assert_eq!(p.eval(&[rat(5)]), rat(42));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn compose_affine_shift() {
        // p(x) = x^2; p(x+1) = x^2 + 2x + 1
        let p = Poly::var(1, 0).pow(2);
        let q = p.compose_affine(&rat(1), &rat(1));
        assert_eq!(q.eval(&[rat(3)]), rat(16));
        assert_eq!(q.coeff(&[1]), rat(2));
    }

    #[test]
    fn interpolation_recovers() {
        // f(a, b) = a*b + 2a + 1 on grid {0,1,2}^2
        let truth = |a: i64, b: i64| a * b + 2 * a + 1;
        let grid: Vec<BigInt> = (0..3).map(BigInt::from).collect();
        let pts = tensor_points(2, &grid);
        let values: Vec<Rat> = pts
            .iter()
            .map(|p| {
                let a: i64 = p[0].to_integer().try_into().unwrap();
                let b: i64 = p[1].to_integer().try_into().unwrap();
                rat(truth(a, b))
            })
            .collect();
        let p = Poly::interpolate(2, 2, &grid, &values).unwrap();
        assert_eq!(p.eval(&[rat(7), rat(5)]), rat(truth(7, 5)));
        assert_eq!(p.total_degree(), 2);
    }
}
