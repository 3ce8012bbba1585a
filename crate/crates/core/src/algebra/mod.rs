//! Finite-dimensional unital associative algebras given by structure constants.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exact::rational::{format_rational, to_f64};
use crate::exact::{affine_solve, AffineSolution, MultiPoly, PolyMatrix, Rational, RationalMatrix};

pub mod builtin;
pub mod io;

pub use builtin::builtin;

/// The tensor `c[i][j][k]` with `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    c: Vec<Rational>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        StructureConstants {
            n,
            c: vec![Rational::zero(); n * n * n],
        }
    }

    pub fn from_nested(table: Vec<Vec<Vec<Rational>>>) -> Result<Self, Error> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        let mut c = Vec::with_capacity(n * n * n);
        for (i, plane) in table.into_iter().enumerate() {
            if plane.len() != n {
                return Err(Error::Shape(format!(
                    "table[{i}] has {} rows, expected {n}",
                    plane.len()
                )));
            }
            for (j, row) in plane.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Shape(format!(
                        "table[{i}][{j}] has {} entries, expected {n}",
                        row.len()
                    )));
                }
                c.extend(row);
            }
        }
        Ok(StructureConstants { n, c })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let n = self.n;
        self.c[(i * n + j) * n + k] = v;
    }

    /// Exact product of two coordinate vectors.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.n;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let xy = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// First `(i,j,k,l)` in lexicographic order where `(e_i e_j) e_k` and
    /// `e_i (e_j e_k)` differ in coordinate `l`.
    pub fn associativity_witness(&self) -> Option<[usize; 4]> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut lhs = Rational::zero();
                        let mut rhs = Rational::zero();
                        for m in 0..n {
                            lhs += self.get(i, j, m) * self.get(m, k, l);
                            rhs += self.get(j, k, m) * self.get(i, m, l);
                        }
                        if lhs != rhs {
                            return Some([i, j, k, l]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Solves `u e_j = e_j u = e_j` for all `j`.
    pub fn find_unit(&self) -> Option<Vec<Rational>> {
        let n = self.n;
        let mut rows = Vec::with_capacity(2 * n * n);
        let mut rhs = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for k in 0..n {
                let delta = if j == k {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                rows.push((0..n).map(|i| self.get(i, j, k).clone()).collect());
                rhs.push(delta.clone());
                rows.push((0..n).map(|i| self.get(j, i, k).clone()).collect());
                rhs.push(delta);
            }
        }
        let a = RationalMatrix::from_rows(rows).expect("rectangular");
        match affine_solve(&a, &rhs).expect("shapes agree") {
            AffineSolution::Solution { particular, .. } => Some(particular),
            AffineSolution::Inconsistent => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub associativity_witness: Option<[usize; 4]>,
    pub unit: Option<Vec<Rational>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.associativity_witness.is_none() && self.unit.is_some()
    }
}

pub fn validate(c: &StructureConstants) -> ValidationReport {
    ValidationReport {
        dim: c.dim(),
        associativity_witness: c.associativity_witness(),
        unit: c.find_unit(),
    }
}

/// `s^{-1} = P(s) / D(s)` with `P = adj R(s) * unit` and `D = det R(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicInverse {
    pub numerator: Vec<MultiPoly>,
    pub denominator: MultiPoly,
}

/// A validated unital associative algebra. Derived symbolic objects are computed
/// once on first use.
#[derive(Clone, Debug)]
pub struct Algebra {
    name: String,
    c: StructureConstants,
    unit: Vec<Rational>,
    c_f64: Vec<f64>,
    left_regular: OnceLock<PolyMatrix>,
    inverse: OnceLock<SymbolicInverse>,
    unit_norm_squared: OnceLock<usize>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, c: StructureConstants) -> Result<Self, Error> {
        if c.dim() == 0 {
            return Err(Error::InvalidAlgebra("dimension must be at least 1".into()));
        }
        if let Some([i, j, k, l]) = c.associativity_witness() {
            return Err(Error::InvalidAlgebra(format!(
                "not associative: (e{i} e{j}) e{k} and e{i} (e{j} e{k}) differ in coordinate {l}"
            )));
        }
        let unit = c.find_unit().ok_or(Error::NoUnit)?;
        let c_f64 = c.c.iter().map(to_f64).collect();
        Ok(Algebra {
            name: name.into(),
            c,
            unit,
            c_f64,
            left_regular: OnceLock::new(),
            inverse: OnceLock::new(),
            unit_norm_squared: OnceLock::new(),
        })
    }

    /// Like [`Algebra::new`] but also requires the computed unit to equal `unit`.
    pub fn with_unit(
        name: impl Into<String>,
        c: StructureConstants,
        unit: &[Rational],
    ) -> Result<Self, Error> {
        let a = Self::new(name, c)?;
        if a.unit != unit {
            let show =
                |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
            return Err(Error::InvalidAlgebra(format!(
                "supplied unit ({}) differs from computed unit ({})",
                show(unit),
                show(&a.unit)
            )));
        }
        Ok(a)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.c
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn unit_f64(&self) -> Vec<f64> {
        self.unit.iter().map(to_f64).collect()
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.c.mul(x, y)
    }

    /// `R(s)[k][j] = sum_i s_i c[i][j][k]`, the matrix of `x -> s x`.
    pub fn left_regular(&self) -> &PolyMatrix {
        self.left_regular.get_or_init(|| {
            let n = self.dim();
            PolyMatrix::from_fn(n, n, n, |k, j| {
                MultiPoly::linear(
                    &(0..n)
                        .map(|i| self.c.get(i, j, k).clone())
                        .collect::<Vec<_>>(),
                )
            })
        })
    }

    pub fn left_regular_at(&self, s: &[Rational]) -> RationalMatrix {
        let n = self.dim();
        RationalMatrix::from_fn(n, n, |k, j| {
            s.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| v * self.c.get(i, j, k))
                .sum()
        })
    }

    pub fn left_regular_f64(&self, s: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, j| {
            (0..n).map(|i| s[i] * self.c_f64[(i * n + j) * n + k]).sum()
        })
    }

    pub fn symbolic_inverse(&self) -> &SymbolicInverse {
        self.inverse.get_or_init(|| {
            let (det, adj) = self
                .left_regular()
                .det_and_adjugate()
                .expect("left regular matrix is square");
            let n = self.dim();
            let unit: Vec<MultiPoly> = self
                .unit
                .iter()
                .map(|u| MultiPoly::constant(n, u.clone()))
                .collect();
            SymbolicInverse {
                numerator: adj.mul_vec(&unit).expect("square"),
                denominator: det,
            }
        })
    }

    /// `det R(s)`.
    pub fn usual_norm_poly(&self) -> &MultiPoly {
        &self.symbolic_inverse().denominator
    }

    /// `|det R(s)|` below `1e-10 * max(1, |s|_inf^n)` counts as a non-unit.
    pub fn is_numeric_unit(&self, s: &[f64]) -> bool {
        let det = self.left_regular_f64(s).determinant();
        det.abs() >= self.non_unit_threshold(s)
    }

    pub fn non_unit_threshold(&self, s: &[f64]) -> f64 {
        let norm = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        1e-10 * norm.powi(self.dim() as i32).max(1.0)
    }

    pub fn numeric_inverse(&self, s: &[f64]) -> Result<Vec<f64>, Error> {
        let r = self.left_regular_f64(s);
        let lu = r.clone().lu();
        let det = lu.determinant();
        if det.abs() < self.non_unit_threshold(s) {
            return Err(Error::NonUnit { det });
        }
        let u = DVector::from_vec(self.unit_f64());
        let x = lu.solve(&u).ok_or(Error::NonUnit { det })?;
        Ok(x.iter().copied().collect())
    }

    /// Rank of the span of the diagonal entries of `R(s)` as linear forms. Depends
    /// on the basis; reported for reference next to [`Algebra::unit_norm_squared`].
    pub fn diagonal_form_rank(&self) -> usize {
        let n = self.dim();
        RationalMatrix::from_fn(n, n, |k, i| self.c.get(i, k, k).clone()).rank()
    }

    /// Number of independent diagonal entries of the left regular representation,
    /// counted in a basis adapted to the algebra: the largest number of distinct
    /// eigenvalue classes of `R(s)` (each real eigenvalue and each conjugate pair
    /// counts once), taken over a fixed set of probe points. This is the number of
    /// primitive idempotents of the semisimple quotient and does not depend on the
    /// chosen basis.
    pub fn unit_norm_squared(&self) -> usize {
        *self.unit_norm_squared.get_or_init(|| {
            let n = self.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(0x756e_6974);
            let mut best = 0;
            for _ in 0..PROBES {
                let s: Vec<Rational> = (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-1000i64..=1000).into()))
                    .collect();
                let chi = self
                    .left_regular_at(&s)
                    .char_poly()
                    .expect("square")
                    .squarefree();
                let d = chi.degree().unwrap_or(0);
                best = best.max((d + chi.count_real_roots()) / 2);
                if best == n {
                    break;
                }
            }
            best
        })
    }

    /// `x -> T x` applied to the structure: the result multiplies as
    /// `x *_B y = T (T^{-1} x *_A T^{-1} y)`.
    pub fn change_of_basis(&self, t: &RationalMatrix) -> Result<Algebra, Error> {
        let n = self.dim();
        if t.rows() != n || t.cols() != n {
            return Err(Error::Shape(format!(
                "change of basis must be {n}x{n}, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        let ti = t.inverse().map_err(|_| Error::SingularTransform)?;
        // images of the new basis vectors in old coordinates are the columns of T^{-1}
        let cols: Vec<Vec<Rational>> = (0..n).map(|i| ti.column(i)).collect();
        let mut c = StructureConstants::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(&cols[i], &cols[j]);
                let image = t.mul_vec(&prod)?;
                for (k, v) in image.into_iter().enumerate() {
                    c.set(i, j, k, v);
                }
            }
        }
        let b = Algebra::new(format!("{}'", self.name), c)?;
        debug_assert_eq!(b.unit, t.mul_vec(&self.unit).expect("square"));
        Ok(b)
    }
}

const PROBES: usize = 32;

/// Random invertible matrix with small integer entries, for basis-change tests.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> RationalMatrix {
    loop {
        let t = RationalMatrix::from_fn(n, n, |_, _| {
            Rational::from_integer(rng.gen_range(-3i64..=3).into())
        });
        if !t.determinant().expect("square").is_zero() {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn lin(c: &[i64]) -> MultiPoly {
        MultiPoly::linear(&v(c))
    }

    fn poly(n: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
    }

    #[test]
    fn validation_reports() {
        let r2 = builtin("reals(2)").unwrap();
        let rep = validate(r2.structure_constants());
        assert!(rep.is_valid());
        assert_eq!(rep.unit, Some(v(&[1, 1])));
        let c = builtin("complex").unwrap();
        assert_eq!(validate(c.structure_constants()).unit, Some(v(&[1, 0])));

        // quaternions with i*i = j: (ii)i = ji = -k but i(ii) = ij = k
        let mut broken = builtin("quaternion").unwrap().structure_constants().clone();
        broken.set(1, 1, 0, rat(0));
        broken.set(1, 1, 2, rat(1));
        let rep = validate(&broken);
        assert_eq!(rep.associativity_witness, Some([1, 1, 1, 3]));
        assert!(!rep.is_valid());
    }

    #[test]
    fn zero_multiplication_has_no_unit() {
        let c = StructureConstants::zeros(1);
        assert_eq!(c.find_unit(), None);
        assert!(matches!(Algebra::new("zero", c), Err(Error::NoUnit)));
    }

    #[test]
    fn left_regular_examples() {
        let r2 = builtin("reals(2)").unwrap();
        let r = r2.left_regular();
        assert_eq!(r.get(0, 0), &lin(&[1, 0]));
        assert_eq!(r.get(1, 1), &lin(&[0, 1]));
        assert!(r.get(0, 1).is_zero() && r.get(1, 0).is_zero());

        let c = builtin("complex").unwrap();
        let r = c.left_regular();
        assert_eq!(r.get(0, 0), &lin(&[1, 0]));
        assert_eq!(r.get(0, 1), &lin(&[0, -1]));
        assert_eq!(r.get(1, 0), &lin(&[0, 1]));
        assert_eq!(r.get(1, 1), &lin(&[1, 0]));

        let d = builtin("dual").unwrap();
        let r = d.left_regular();
        assert_eq!(r.get(0, 1), &MultiPoly::zero(2));
        assert_eq!(r.get(1, 0), &lin(&[0, 1]));
    }

    #[test]
    fn unit_norm_squared_examples() {
        assert_eq!(builtin("reals(2)").unwrap().unit_norm_squared(), 2);
        assert_eq!(builtin("complex").unwrap().unit_norm_squared(), 1);
        assert_eq!(builtin("dual").unwrap().unit_norm_squared(), 1);
        assert_eq!(builtin("reals(3)").unwrap().unit_norm_squared(), 3);
        assert_eq!(builtin("quaternion").unwrap().unit_norm_squared(), 1);
        assert_eq!(builtin("matrix(2)").unwrap().unit_norm_squared(), 2);
        assert_eq!(
            builtin("upper_triangular(2)").unwrap().unit_norm_squared(),
            2
        );
    }

    #[test]
    fn diagonal_rank_in_natural_basis() {
        assert_eq!(builtin("reals(2)").unwrap().diagonal_form_rank(), 2);
        assert_eq!(builtin("complex").unwrap().diagonal_form_rank(), 1);
        assert_eq!(builtin("dual").unwrap().diagonal_form_rank(), 1);
    }

    #[test]
    fn usual_norm_examples() {
        let x2 = |n| poly(n, &[(&[2, 0], 1)]);
        assert_eq!(
            builtin("reals(2)").unwrap().usual_norm_poly(),
            &poly(2, &[(&[1, 1], 1)])
        );
        assert_eq!(
            builtin("complex").unwrap().usual_norm_poly(),
            &poly(2, &[(&[2, 0], 1), (&[0, 2], 1)])
        );
        assert_eq!(builtin("dual").unwrap().usual_norm_poly(), &x2(2));
    }

    #[test]
    fn symbolic_inverse_examples() {
        let si = builtin("reals(2)").unwrap().symbolic_inverse().clone();
        assert_eq!(si.numerator, vec![lin(&[0, 1]), lin(&[1, 0])]);
        let si = builtin("complex").unwrap().symbolic_inverse().clone();
        assert_eq!(si.numerator, vec![lin(&[1, 0]), lin(&[0, -1])]);
        let si = builtin("dual").unwrap().symbolic_inverse().clone();
        assert_eq!(si.numerator, vec![lin(&[1, 0]), lin(&[0, -1])]);
        assert_eq!(si.denominator, poly(2, &[(&[2, 0], 1)]));
    }

    #[test]
    fn numeric_inverse_examples() {
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14);
        let r2 = builtin("reals(2)").unwrap();
        assert!(close(
            &r2.numeric_inverse(&[2.0, 4.0]).unwrap(),
            &[0.5, 0.25]
        ));
        let c = builtin("complex").unwrap();
        assert!(close(
            &c.numeric_inverse(&[0.6, 0.8]).unwrap(),
            &[0.6, -0.8]
        ));
        let d = builtin("dual").unwrap();
        assert!(close(
            &d.numeric_inverse(&[2.0, 1.0]).unwrap(),
            &[0.5, -0.25]
        ));
        assert!(matches!(
            d.numeric_inverse(&[0.0, 1.0]),
            Err(Error::NonUnit { .. })
        ));
    }

    #[test]
    fn change_of_basis_examples() {
        let r2 = builtin("reals(2)").unwrap();
        let same = r2.change_of_basis(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(same.structure_constants(), r2.structure_constants());
        let t = RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let b = r2.change_of_basis(&t).unwrap();
        assert_eq!(b.unit(), v(&[2, 1]).as_slice());
        let sing = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            r2.change_of_basis(&sing),
            Err(Error::SingularTransform)
        ));
    }

    #[test]
    fn rebased_product_is_transported() {
        let q = builtin("quaternion").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_invertible(4, &mut rng);
        let b = q.change_of_basis(&t).unwrap();
        let x = vec![rat(1), ratio(-1, 2), rat(3), rat(0)];
        let y = vec![rat(0), rat(2), ratio(1, 3), rat(-1)];
        let lhs = b.mul(&t.mul_vec(&x).unwrap(), &t.mul_vec(&y).unwrap());
        assert_eq!(lhs, t.mul_vec(&q.mul(&x, &y)).unwrap());
    }

    #[test]
    fn corpus_identities() {
        for name in builtin::CORPUS {
            let a = builtin(name).unwrap();
            let n = a.dim();
            let unit = a.unit().to_vec();
            assert_eq!(
                a.left_regular().eval(&unit),
                RationalMatrix::identity(n),
                "{name}"
            );
            assert_eq!(a.usual_norm_poly().eval(&unit), rat(1), "{name}");
            assert_eq!(a.usual_norm_poly().degree(), Some(n as u32), "{name}");
            let si = a.symbolic_inverse();
            let lhs = a.left_regular().mul_vec(&si.numerator).unwrap();
            for (k, p) in lhs.iter().enumerate() {
                let rhs = si.denominator.scale(&unit[k]);
                assert!((p - &rhs).is_zero(), "{name}: R P - D u nonzero in row {k}");
            }
        }
    }

    #[test]
    fn numeric_inverse_is_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in builtin::CORPUS {
            let a = builtin(name).unwrap();
            let u = a.unit_f64();
            for _ in 0..20 {
                let s: Vec<f64> = u.iter().map(|x| x + rng.gen_range(-0.3..0.3)).collect();
                let Ok(si) = a.numeric_inverse(&s) else {
                    continue;
                };
                let back = a.numeric_inverse(&si).unwrap();
                let err = back
                    .iter()
                    .zip(&s)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                assert!(err < 1e-9, "{name}: {err}");
            }
        }
    }

    #[test]
    fn unit_norm_squared_survives_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in [
            "reals(3)",
            "complex",
            "cyclic_group_algebra(3)",
            "upper_triangular(2)",
        ] {
            let a = builtin(name).unwrap();
            for _ in 0..5 {
                let t = random_invertible(a.dim(), &mut rng);
                let b = a.change_of_basis(&t).unwrap();
                assert_eq!(b.unit_norm_squared(), a.unit_norm_squared(), "{name}");
            }
        }
    }
}
