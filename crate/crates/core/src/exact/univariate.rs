//! Dense univariate polynomials over the rationals: square-free parts and Sturm root counting.

use num_traits::{One, Zero};

use super::rational::{sign, Rational};

/// Coefficients from the constant term upward, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.coeffs
            .last()
            .expect("zero polynomial has no leading coefficient")
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let lead = d.lead().clone();
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        UniPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each with multiplicity one.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Multiplicity of the root at zero.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(UniPoly::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        chain
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let nz: Vec<i32> = signs.filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn sign_at_pos_inf(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            sign(self.lead())
        }
    }

    fn sign_at_neg_inf(&self) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => sign(self.lead()) * if d % 2 == 0 { 1 } else { -1 },
        }
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        let lo = Self::variations(chain.iter().map(UniPoly::sign_at_neg_inf));
        let hi = Self::variations(chain.iter().map(UniPoly::sign_at_pos_inf));
        lo - hi
    }

    /// Number of distinct real roots in the open half-line `(0, inf)`.
    pub fn count_positive_roots(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let k = self.zero_root_multiplicity();
        let p = UniPoly::new(self.coeffs[k..].to_vec());
        if p.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = p.sturm_chain();
        let at0 = Self::variations(chain.iter().map(|q| sign(&q.eval(&Rational::zero()))));
        let hi = Self::variations(chain.iter().map(UniPoly::sign_at_pos_inf));
        at0 - hi
    }

    /// Number of distinct real roots in `(-inf, 0)`.
    pub fn count_negative_roots(&self) -> usize {
        self.reflect().count_positive_roots()
    }

    pub fn one() -> Self {
        UniPoly::new(vec![Rational::one()])
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

/// Rank of a matrix over `Q[x]` and the monic gcd of its maximal nonvanishing minors,
/// found by diagonalizing with unimodular row and column operations. The rank drops
/// exactly at the roots of the returned polynomial.
pub fn determinantal_divisor(mut m: Vec<Vec<UniPoly>>) -> (usize, UniPoly) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut product = UniPoly::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].degree());
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        let mut clean = true;
        for i in k + 1..rows {
            if m[i][k].is_zero() {
                continue;
            }
            let (q, _) = m[i][k].div_rem(&m[k][k]);
            for j in k..cols {
                let t = m[i][j].sub(&q.mul(&m[k][j]));
                m[i][j] = t;
            }
            clean &= m[i][k].is_zero();
        }
        for j in k + 1..cols {
            if m[k][j].is_zero() {
                continue;
            }
            let (q, _) = m[k][j].div_rem(&m[k][k]);
            for row in m.iter_mut().skip(k) {
                let t = row[j].sub(&q.mul(&row[k]));
                row[j] = t;
            }
            clean &= m[k][j].is_zero();
        }
        if clean {
            product = product.mul(&m[k][k]);
            k += 1;
        }
    }
    (k, product.monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&k| rat(k)).collect())
    }

    #[test]
    fn determinantal_divisor_of_pencils() {
        // [[x, 0], [0, x - 1]] has rank 2 and divisor x (x - 1)
        let m = vec![vec![p(&[0, 1]), p(&[])], vec![p(&[]), p(&[-1, 1])]];
        assert_eq!(determinantal_divisor(m), (2, p(&[0, -1, 1])));
        // [[1, x], [x, x^2]] has rank 1 everywhere
        let m = vec![vec![p(&[1]), p(&[0, 1])], vec![p(&[0, 1]), p(&[0, 0, 1])]];
        assert_eq!(determinantal_divisor(m), (1, p(&[1])));
        // [[x, 1], [1, 0]] is invertible for every x
        let m = vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[1]), p(&[])]];
        assert_eq!(determinantal_divisor(m), (2, p(&[1])));
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let q = p(&[6, -7, 0, 1]);
        assert_eq!(q.count_real_roots(), 3);
        assert_eq!(q.count_positive_roots(), 2);
        assert_eq!(q.count_negative_roots(), 1);
        // x^2 + 1
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
        // x^2 (x - 1): root at zero is not positive
        assert_eq!(p(&[0, 0, -1, 1]).count_positive_roots(), 1);
        assert_eq!(p(&[0, 0, -1, 1]).count_real_roots(), 2);
    }

    #[test]
    fn squarefree_part() {
        // (x-1)^2 (x^2+1)
        let q = &[1, -2, 2, -2, 1];
        let sf = p(q).squarefree();
        assert_eq!(sf, p(&[-1, 1, -1, 1]));
        assert_eq!(sf.count_real_roots(), 1);
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, 0, -2, 5, 1]);
        let b = p(&[1, 2, 1]);
        let (q, r) = a.div_rem(&b);
        let back: Vec<Rational> = {
            let mut prod = vec![rat(0); q.coeffs().len() + b.coeffs().len() - 1];
            for (i, x) in q.coeffs().iter().enumerate() {
                for (j, y) in b.coeffs().iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            for (i, x) in r.coeffs().iter().enumerate() {
                prod[i] += x;
            }
            prod
        };
        assert_eq!(UniPoly::new(back), a);
    }
}
