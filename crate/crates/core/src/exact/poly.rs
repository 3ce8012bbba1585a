//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, to_f64, Rational};
use crate::error::Error;

/// Exponent vector. Ordered graded-lexicographically: total degree first, then
/// lexicographic with `x0 > x1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Polynomial in `nvars` variables. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    left: nvars,
                    right: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Constant term if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(&Monomial::one(self.nvars))),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Checked ring operation; the operator impls panic on arity mismatch, this reports it.
    pub fn arith(&self, other: &MultiPoly, op: PolyOp) -> Result<MultiPoly, Error> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(match op {
            PolyOp::Add => self + other,
            PolyOp::Sub => self - other,
            PolyOp::Mul => self * other,
        })
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly, Error> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: var,
                len: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[var] -= 1;
            out.add_term(Monomial(d), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(to_f64(c), |acc, (&e, x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    /// Write the polynomial using the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                let name = names.get(i).copied().unwrap_or("?");
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{}*{}", format_rational(&mag), factors.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("s{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expect = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, expect);
        assert_eq!(p.to_string(), "s0^2 - s1^2");
    }

    #[test]
    fn annihilator_and_doubling() {
        let p = &(&x() * &y()) + &MultiPoly::one(2);
        assert!((&p * &MultiPoly::zero(2)).is_zero());
        assert_eq!(&x() + &x(), x().scale(&rat(2)));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = MultiPoly::var(2, 0);
        let b = MultiPoly::var(3, 0);
        assert!(matches!(
            a.arith(&b, PolyOp::Mul),
            Err(Error::ArityMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn partials() {
        let x2y = &(&x() * &x()) * &y();
        assert_eq!(
            x2y.partial_derivative(0).unwrap(),
            (&x() * &y()).scale(&rat(2))
        );
        assert!((&x() * &x()).partial_derivative(1).unwrap().is_zero());
        let r2 = &(&x() * &x()) + &(&y() * &y());
        assert_eq!(r2.partial_derivative(0).unwrap(), x().scale(&rat(2)));
        assert!(matches!(
            r2.partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::from_exponents(vec![0, 2]);
        let b = Monomial::from_exponents(vec![1, 1]);
        let c = Monomial::from_exponents(vec![3, 0]);
        assert!(a < b && b < c);
        assert!(Monomial::var(2, 1) < Monomial::var(2, 0));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6), 0..6).prop_map(|ts| {
            MultiPoly::from_terms(
                3,
                ts.into_iter().map(|((a, b, c), k)| (vec![a, b, c], rat(k))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(p in small_poly(), i in 0usize..3, j in 0usize..3) {
            let a = p.partial_derivative(i).unwrap().partial_derivative(j).unwrap();
            let b = p.partial_derivative(j).unwrap().partial_derivative(i).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn add_then_sub_is_identity(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn product_evaluates_pointwise(a in small_poly(), b in small_poly(),
                                       pt in prop::collection::vec(-4i64..5, 3)) {
            let pt: Vec<Rational> = pt.into_iter().map(rat).collect();
            prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        }
    }
}
