//! Exact inertia of symmetric matrices by congruence elimination over an ordered field.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::RationalMatrix;
use super::rational::{sign, Rational};

/// Field operations needed by the elimination, plus an exact sign.
pub trait OrderedField: Clone {
    fn is_zero(&self) -> bool;
    fn sign(&self) -> i32;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl OrderedField for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign(&self) -> i32 {
        sign(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// `a + b sqrt(q)` with a fixed positive, non-square rational `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    a: Rational,
    b: Rational,
    q: Rational,
}

impl Surd {
    /// Panics unless `q` is positive and not the square of a rational.
    pub fn new(a: Rational, b: Rational, q: Rational) -> Self {
        assert!(q.is_positive(), "radicand must be positive");
        assert!(rational_sqrt(&q).is_none(), "radicand must not be a square");
        Surd { a, b, q }
    }

    fn with(&self, a: Rational, b: Rational) -> Self {
        Surd {
            a,
            b,
            q: self.q.clone(),
        }
    }
}

impl OrderedField for Surd {
    fn is_zero(&self) -> bool {
        // sqrt(q) is irrational, so a + b sqrt(q) = 0 only when both vanish
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    fn sign(&self) -> i32 {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2q = &self.b * &self.b * &self.q;
        if a2 > b2q {
            sa
        } else {
            sb
        }
    }

    fn add(&self, o: &Self) -> Self {
        self.with(&self.a + &o.a, &self.b + &o.b)
    }

    fn sub(&self, o: &Self) -> Self {
        self.with(&self.a - &o.a, &self.b - &o.b)
    }

    fn mul(&self, o: &Self) -> Self {
        self.with(
            &self.a * &o.a + &self.b * &o.b * &self.q,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    fn div(&self, o: &Self) -> Self {
        let norm = &o.a * &o.a - &o.b * &o.b * &self.q;
        let conj = o.with(o.a.clone(), -o.b.clone());
        let num = self.mul(&conj);
        self.with(num.a / &norm, num.b / norm)
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let root = |x: &BigInt| {
        let s = x.sqrt();
        (&s * &s == *x).then_some(s)
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn as_triple(&self) -> [usize; 3] {
        [self.positive, self.negative, self.zero]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Inertia of the symmetric matrix `m` (given as rows). Only the upper triangle is
/// read. Works by symmetric Gaussian elimination: diagonal pivots when available,
/// otherwise `row_i += row_j` (and the same on columns) turns an off-diagonal entry
/// into a nonzero pivot.
pub fn signature<F: OrderedField>(m: Vec<Vec<F>>) -> Signature {
    let n = m.len();
    let mut a = m;
    for i in 0..n {
        for j in 0..i {
            a[i][j] = a[j][i].clone();
        }
    }
    let (mut pos, mut neg) = (0, 0);
    while !a.is_empty() {
        let k = a.len();
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            a.swap(0, p);
            for row in a.iter_mut() {
                row.swap(0, p);
            }
            let piv = a[0][0].clone();
            if piv.sign() > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            let head: Vec<F> = a[0][1..].to_vec();
            let mut rest: Vec<Vec<F>> = a.drain(1..).map(|r| r[1..].to_vec()).collect();
            for (r, row) in rest.iter_mut().enumerate() {
                if head[r].is_zero() {
                    continue;
                }
                let f = head[r].div(&piv);
                for (c, x) in row.iter_mut().enumerate() {
                    if !head[c].is_zero() {
                        *x = x.sub(&f.mul(&head[c]));
                    }
                }
            }
            a = rest;
            continue;
        }
        let Some((i, j)) = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            break;
        };
        // diagonal is zero, so the new a[i][i] is 2 a[i][j]
        for c in 0..k {
            let v = a[i][c].add(&a[j][c]);
            a[i][c] = v;
        }
        for r in 0..k {
            let v = a[r][i].add(&a[r][j]);
            a[r][i] = v;
        }
    }
    Signature {
        positive: pos,
        negative: neg,
        zero: n - pos - neg,
    }
}

pub fn rational_signature(m: &RationalMatrix) -> Signature {
    signature(m.to_rows())
}

/// Inertia of `sqrt(q) * base + t * dir`, computed exactly in `Q(sqrt(q))`.
pub fn surd_combination_signature(
    base: &RationalMatrix,
    q: &Rational,
    dir: &RationalMatrix,
    t: &Rational,
) -> Signature {
    if let Some(r) = rational_sqrt(q) {
        let m = base.scale(&r).add(&dir.scale(t)).expect("same shape");
        return rational_signature(&m);
    }
    let rows = (0..base.rows())
        .map(|i| {
            (0..base.cols())
                .map(|j| Surd::new(dir.get(i, j) * t, base.get(i, j).clone(), q.clone()))
                .collect()
        })
        .collect();
    signature(rows)
}
