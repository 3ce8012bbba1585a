//! Dense exact matrices: rational elimination and polynomial-entry Faddeev–LeVerrier.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::{format_rational, Rational};
use super::univariate::UniPoly;
use crate::error::Error;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(RationalMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for tests and builtins.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc += a * rhs.get(k, j);
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, Error> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn add(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, Error> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, Error> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &RationalMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RationalMatrix, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, returned as the rows of a matrix in reduced row echelon
    /// form so the output does not depend on elimination order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect();
        canonical_basis(raw, self.cols)
    }

    pub fn determinant(&self) -> Result<Rational, Error> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix, Error> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Moore–Penrose pseudoinverse, exactly, from the full-rank factorization
    /// `A = F G` with `F` the pivot columns and `G` the nonzero rows of the RREF:
    /// `A^+ = G^T (G G^T)^{-1} (F^T F)^{-1} F^T`.
    pub fn pseudoinverse(&self) -> RationalMatrix {
        let (r, pivots) = self.rref();
        let k = pivots.len();
        if k == 0 {
            return Self::zeros(self.cols, self.rows);
        }
        let f = Self::from_fn(self.rows, k, |i, j| self.get(i, pivots[j]).clone());
        let g = Self::from_fn(k, self.cols, |i, j| r.get(i, j).clone());
        let (ft, gt) = (f.transpose(), g.transpose());
        let ggt_inv = g.mul(&gt).and_then(|m| m.inverse()).expect("full row rank");
        let ftf_inv = ft
            .mul(&f)
            .and_then(|m| m.inverse())
            .expect("full column rank");
        gt.mul(&ggt_inv)
            .and_then(|m| m.mul(&ftf_inv))
            .and_then(|m| m.mul(&ft))
            .expect("compatible shapes")
    }

    /// Characteristic polynomial `det(x I - A)`.
    pub fn char_poly(&self) -> Result<UniPoly, Error> {
        let pm = PolyMatrix::from_rational(self, 0);
        let coeffs = pm.faddeev_leverrier()?.char_coeffs;
        Ok(UniPoly::new(
            coeffs
                .iter()
                .map(|c| c.as_constant().expect("constant coefficients"))
                .collect(),
        ))
    }
}

/// Rows of a spanning set brought to reduced row echelon form, zero rows dropped.
pub(crate) fn canonical_basis(vectors: Vec<Vec<Rational>>, width: usize) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = RationalMatrix::from_rows(vectors).expect("equal-length vectors");
    debug_assert_eq!(m.cols(), width);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Solution {
        particular: Vec<Rational>,
        homogeneous: Vec<Vec<Rational>>,
    },
    Inconsistent,
}

/// Exact solution set of `A x = b`. The particular solution has every free variable
/// of the RREF set to zero.
pub fn affine_solve(a: &RationalMatrix, b: &[Rational]) -> Result<AffineSolution, Error> {
    if a.rows() != b.len() {
        return Err(Error::Shape(format!(
            "{} equations but {} right-hand sides",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let aug = RationalMatrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = vec![Rational::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(row, n).clone();
    }
    Ok(AffineSolution::Solution {
        particular,
        homogeneous: a.nullspace(),
    })
}

/// Matrix whose entries are polynomials over a common set of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<MultiPoly>,
}

/// Output of the Faddeev–LeVerrier recurrence.
#[derive(Clone, Debug)]
pub struct FaddeevLeverrier {
    /// `det(x I - A) = sum_k char_coeffs[k] x^k`.
    pub char_coeffs: Vec<MultiPoly>,
    pub det: MultiPoly,
    pub adjugate: PolyMatrix,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            data: vec![MultiPoly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.data[i * n + i] = MultiPoly::one(nvars);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        nvars: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.nvars(), nvars, "entry arity mismatch");
                data.push(p);
            }
        }
        PolyMatrix {
            rows,
            cols,
            nvars,
            data,
        }
    }

    pub fn from_rational(m: &RationalMatrix, nvars: usize) -> Self {
        Self::from_fn(m.rows(), m.cols(), nvars, |i, j| {
            MultiPoly::constant(nvars, m.get(i, j).clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(MultiPoly::is_zero)
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix, Error> {
        if self.cols != rhs.rows || self.nvars != rhs.nvars {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, self.nvars, |i, j| {
            let mut acc = MultiPoly::zero(self.nvars);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[MultiPoly]) -> Result<Vec<MultiPoly>, Error> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(MultiPoly::zero(self.nvars), |acc, k| {
                    &acc + &(self.get(i, k) * &v[k])
                })
            })
            .collect())
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix, Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols || self.nvars != rhs.nvars {
            return Err(Error::Shape("polynomial matrix shape mismatch".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, self.nvars, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        }))
    }

    pub fn scale(&self, p: &MultiPoly) -> PolyMatrix {
        Self::from_fn(self.rows, self.cols, self.nvars, |i, j| self.get(i, j) * p)
    }

    pub fn trace(&self) -> MultiPoly {
        (0..self.rows.min(self.cols))
            .fold(MultiPoly::zero(self.nvars), |acc, i| &acc + self.get(i, i))
    }

    pub fn eval(&self, point: &[Rational]) -> RationalMatrix {
        RationalMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(point))
    }

    /// Faddeev–LeVerrier over the polynomial ring: `n` matrix products yield the
    /// characteristic polynomial, the determinant and the adjugate at once.
    pub fn faddeev_leverrier(&self) -> Result<FaddeevLeverrier, Error> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let nv = self.nvars;
        let mut c = vec![MultiPoly::zero(nv); n + 1];
        c[n] = MultiPoly::one(nv);
        let mut m = PolyMatrix::zeros(n, n, nv);
        let mut am = PolyMatrix::zeros(n, n, nv);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = am.clone();
            for i in 0..n {
                let d = &m.data[i * n + i] + &c[n - k + 1];
                m.data[i * n + i] = d;
            }
            am = self.mul(&m)?;
            let kinv = -Rational::from_integer(k.into()).recip();
            c[n - k] = am.trace().scale(&kinv);
        }
        let sign = |e: usize| {
            if e.is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            }
        };
        let det = c[0].scale(&sign(n));
        let adjugate = if n == 0 {
            m
        } else {
            let s = MultiPoly::constant(nv, sign(n - 1));
            m.scale(&s)
        };
        Ok(FaddeevLeverrier {
            char_coeffs: c,
            det,
            adjugate,
        })
    }

    /// `(det M, adj M)` with `M adj M = adj M M = det M * I`.
    pub fn det_and_adjugate(&self) -> Result<(MultiPoly, PolyMatrix), Error> {
        let fl = self.faddeev_leverrier()?;
        Ok((fl.det, fl.adjugate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn xy() -> (MultiPoly, MultiPoly) {
        (MultiPoly::var(2, 0), MultiPoly::var(2, 1))
    }

    #[test]
    fn det_adj_diagonal() {
        let (x, y) = xy();
        let z = MultiPoly::zero(2);
        let m = PolyMatrix::from_fn(2, 2, 2, |i, j| match (i, j) {
            (0, 0) => x.clone(),
            (1, 1) => y.clone(),
            _ => z.clone(),
        });
        let (d, a) = m.det_and_adjugate().unwrap();
        assert_eq!(d, &x * &y);
        assert_eq!(a.get(0, 0), &y);
        assert_eq!(a.get(1, 1), &x);
        assert!(a.get(0, 1).is_zero() && a.get(1, 0).is_zero());
    }

    #[test]
    fn det_adj_rotation_block() {
        // hand cofactor expansion of [[x,-y],[y,x]]
        let (x, y) = xy();
        let m = PolyMatrix::from_fn(2, 2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => x.clone(),
            (0, 1) => -&y,
            _ => y.clone(),
        });
        let (d, a) = m.det_and_adjugate().unwrap();
        assert_eq!(d, &(&x * &x) + &(&y * &y));
        assert_eq!(a.get(0, 0), &x);
        assert_eq!(a.get(0, 1), &y);
        assert_eq!(a.get(1, 0), &-&y);
        assert_eq!(a.get(1, 1), &x);
    }

    #[test]
    fn det_adj_identity() {
        let id = PolyMatrix::identity(3, 2);
        let (d, a) = id.det_and_adjugate().unwrap();
        assert_eq!(d, MultiPoly::one(2));
        assert_eq!(a, id);
    }

    #[test]
    fn nullspace_examples() {
        let z = RationalMatrix::zeros(2, 2);
        assert_eq!(z.nullspace(), vec![v(&[1, 0]), v(&[0, 1])]);
        assert!(RationalMatrix::identity(3).nullspace().is_empty());
        let one_row = RationalMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(one_row.nullspace(), vec![v(&[1, -1])]);
    }

    #[test]
    fn affine_examples() {
        let a = RationalMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(
            affine_solve(&a, &v(&[2])).unwrap(),
            AffineSolution::Solution {
                particular: v(&[2, 0]),
                homogeneous: vec![v(&[1, -1])]
            }
        );
        let col = RationalMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(
            affine_solve(&col, &v(&[1, 2])).unwrap(),
            AffineSolution::Inconsistent
        );
        let target = vec![ratio(1, 3), rat(-2), rat(7)];
        assert_eq!(
            affine_solve(&RationalMatrix::identity(3), &target).unwrap(),
            AffineSolution::Solution {
                particular: target.clone(),
                homogeneous: vec![]
            }
        );
    }

    #[test]
    fn inverse_and_determinant() {
        let a = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant().unwrap(), rat(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        let s = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(s.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn char_poly_matches_trace_and_det() {
        let a = RationalMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let cp = a.char_poly().unwrap();
        assert_eq!(cp.coeffs()[3], rat(1));
        assert_eq!(cp.coeffs()[2], rat(-9));
        assert_eq!(cp.coeffs()[0], -a.determinant().unwrap());
    }

    #[test]
    fn pseudoinverse_of_degenerate_metric() {
        let l = RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert_eq!(l.pseudoinverse(), l);
        let l = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(l.pseudoinverse(), l.scale(&ratio(1, 4)));
        let a = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.pseudoinverse(), a.inverse().unwrap());
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec(-3i64..4, n * n)
            .prop_map(move |xs| RationalMatrix::from_fn(n, n, |i, j| rat(xs[i * n + j])))
    }

    fn rect_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(-2i64..3, r * c)
                .prop_map(move |xs| RationalMatrix::from_fn(r, c, |i, j| rat(xs[i * c + j])))
        })
    }

    proptest! {
        #[test]
        fn nullspace_is_annihilated(a in rect_matrix()) {
            let ns = a.nullspace();
            prop_assert_eq!(ns.len(), a.cols() - a.rank());
            for v in &ns {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn adjugate_identity_on_linear_forms(coeffs in prop::collection::vec(-2i64..3, 27)) {
            // 3x3 matrix whose entries are linear forms in 3 variables
            let m = PolyMatrix::from_fn(3, 3, 3, |i, j| {
                let base = (i * 3 + j) * 3;
                MultiPoly::linear(&[rat(coeffs[base]), rat(coeffs[base + 1]), rat(coeffs[base + 2])])
            });
            let (d, a) = m.det_and_adjugate().unwrap();
            let di = PolyMatrix::identity(3, 3).scale(&d);
            prop_assert!(m.mul(&a).unwrap().sub(&di).unwrap().is_zero());
            prop_assert!(a.mul(&m).unwrap().sub(&di).unwrap().is_zero());
        }

        #[test]
        fn penrose_conditions(a in rect_matrix()) {
            let p = a.pseudoinverse();
            let apa = a.mul(&p).unwrap().mul(&a).unwrap();
            prop_assert_eq!(&apa, &a);
            let pap = p.mul(&a).unwrap().mul(&p).unwrap();
            prop_assert_eq!(&pap, &p);
            prop_assert!(a.mul(&p).unwrap().is_symmetric());
            prop_assert!(p.mul(&a).unwrap().is_symmetric());
        }

        #[test]
        fn fl_determinant_matches_elimination(a in small_matrix(4)) {
            let (d, _) = PolyMatrix::from_rational(&a, 0).det_and_adjugate().unwrap();
            prop_assert_eq!(d.as_constant().unwrap(), a.determinant().unwrap());
        }
    }
}
