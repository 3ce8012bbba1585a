//! Uncurling metrics: symmetric `L` for which `s -> L s^{-1}` is a gradient field,
//! their normalized subfamily, and invariants derived from both.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::exact::matrix::canonical_basis;
use crate::exact::rational::rat;
use crate::exact::signature::{rational_signature, surd_combination_signature};
use crate::exact::{
    affine_solve, determinantal_divisor, AffineSolution, Monomial, MultiPoly, PolyMatrix, Rational,
    RationalMatrix, Signature, UniPoly,
};

/// Symmetric rational matrix. Its free coordinates are the upper-triangle entries
/// `l_ab`, `a <= b`, in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMetric(RationalMatrix);

pub fn unknown_count(n: usize) -> usize {
    n * (n + 1) / 2
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a..n).map(move |b| (a, b)))
}

impl SymMetric {
    pub fn new(m: RationalMatrix) -> Result<Self, Error> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_symmetric() {
            return Err(Error::Shape("metric must be symmetric".into()));
        }
        Ok(SymMetric(m))
    }

    pub fn from_unknowns(n: usize, x: &[Rational]) -> Self {
        assert_eq!(x.len(), unknown_count(n));
        let mut m = RationalMatrix::zeros(n, n);
        for ((a, b), v) in upper_pairs(n).zip(x) {
            m.set(a, b, v.clone());
            m.set(b, a, v.clone());
        }
        SymMetric(m)
    }

    pub fn unknowns(&self) -> Vec<Rational> {
        upper_pairs(self.dim())
            .map(|(a, b)| self.0.get(a, b).clone())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn signature(&self) -> Signature {
        rational_signature(&self.0)
    }

    /// `(T^{-1})^T L T^{-1}`: the metric seen in the basis `x -> T x`.
    pub fn transport(&self, t: &RationalMatrix) -> Result<SymMetric, Error> {
        let ti = t.inverse().map_err(|_| Error::SingularTransform)?;
        Ok(SymMetric(ti.transpose().mul(&self.0)?.mul(&ti)?))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.0
            .to_rows()
            .iter()
            .map(|r| r.iter().map(crate::exact::rational::to_f64).collect())
            .collect()
    }
}

impl fmt::Display for SymMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `D d_j P_b - P_b d_j D` for all `j, b`: the cleared-denominator derivative of the
/// components of `s^{-1}`. Every curl row is a linear combination of these.
struct InverseDerivatives {
    q: Vec<Vec<MultiPoly>>,
}

impl InverseDerivatives {
    fn new(a: &Algebra) -> Self {
        let n = a.dim();
        let si = a.symbolic_inverse();
        let d = &si.denominator;
        let dd: Vec<MultiPoly> = (0..n)
            .map(|j| d.partial_derivative(j).expect("index in range"))
            .collect();
        let q = (0..n)
            .map(|j| {
                si.numerator
                    .iter()
                    .map(|p| {
                        let dp = p.partial_derivative(j).expect("index in range");
                        &(d * &dp) - &(p * &dd[j])
                    })
                    .collect()
            })
            .collect();
        InverseDerivatives { q }
    }

    /// Cleared curl component `(i, j)` of `E_ab s^{-1}`, where `E_ab` is the symmetric
    /// unit matrix of unknown `(a, b)`.
    fn curl_of_unknown(
        &self,
        (a, b): (usize, usize),
        i: usize,
        j: usize,
        nvars: usize,
    ) -> MultiPoly {
        // (E_ab P)_k = [k == a] P_b + [k == b, a != b] P_a
        let g = |k: usize, wrt: usize| {
            let mut out = MultiPoly::zero(nvars);
            if k == a {
                out = &out + &self.q[wrt][b];
            }
            if k == b && a != b {
                out = &out + &self.q[wrt][a];
            }
            out
        };
        &g(i, j) - &g(j, i)
    }
}

/// Rows are coefficient matches, one per `(pair, monomial)`; pairs `i < j` in
/// lexicographic order, monomials in graded-lex order.
fn coefficient_rows(columns: &[MultiPoly]) -> Vec<Vec<Rational>> {
    let mut monos: Vec<&Monomial> = columns
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect();
    monos.sort();
    monos.dedup();
    monos
        .into_iter()
        .map(|m| columns.iter().map(|p| p.coeff(m)).collect())
        .collect()
}

/// The exterior-derivative condition as a linear system in the upper-triangle
/// unknowns of `L`.
pub fn curl_constraints(a: &Algebra) -> RationalMatrix {
    let n = a.dim();
    let inv = InverseDerivatives::new(a);
    let unknowns: Vec<(usize, usize)> = upper_pairs(n).collect();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let cols: Vec<MultiPoly> = unknowns
                .iter()
                .map(|&u| inv.curl_of_unknown(u, i, j, n))
                .collect();
            rows.extend(coefficient_rows(&cols));
        }
    }
    if rows.is_empty() {
        return RationalMatrix::zeros(0, unknowns.len());
    }
    RationalMatrix::from_rows(rows).expect("rectangular")
}

/// Diagnostic variant without the symmetry assumption: unknowns are all `n^2`
/// entries of `L` in row-major order.
pub fn general_curl_constraints(a: &Algebra) -> RationalMatrix {
    let n = a.dim();
    let inv = InverseDerivatives::new(a);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // (E_ab P)_k = [k == a] P_b
            let cols: Vec<MultiPoly> = (0..n * n)
                .map(|u| {
                    let (ra, cb) = (u / n, u % n);
                    let part = |k: usize, wrt: usize| {
                        if k == ra {
                            inv.q[wrt][cb].clone()
                        } else {
                            MultiPoly::zero(n)
                        }
                    };
                    &part(i, j) - &part(j, i)
                })
                .collect();
            rows.extend(coefficient_rows(&cols));
        }
    }
    if rows.is_empty() {
        return RationalMatrix::zeros(0, n * n);
    }
    RationalMatrix::from_rows(rows).expect("rectangular")
}

/// Basis of all (not necessarily symmetric) `L` with `L s^{-1}` curl-free.
pub fn general_uncurling_space(a: &Algebra) -> Vec<RationalMatrix> {
    let n = a.dim();
    general_curl_constraints(a)
        .nullspace()
        .into_iter()
        .map(|v| RationalMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncurlingSpace {
    pub basis: Vec<SymMetric>,
}

impl UncurlingSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn uncurling_space(a: &Algebra) -> UncurlingSpace {
    let n = a.dim();
    let basis = curl_constraints(a)
        .nullspace()
        .into_iter()
        .map(|v| SymMetric::from_unknowns(n, &v))
        .collect();
    UncurlingSpace { basis }
}

/// Coefficient match of `sum_i s_i (L P)_i = |1|^2 D` in the upper-triangle
/// unknowns of `L`.
pub fn normalization_constraints(a: &Algebra) -> (RationalMatrix, Vec<Rational>) {
    let n = a.dim();
    let si = a.symbolic_inverse();
    let s = |k: usize| MultiPoly::var(n, k);
    let mut cols: Vec<MultiPoly> = upper_pairs(n)
        .map(|(p, q)| {
            let mut out = &s(p) * &si.numerator[q];
            if p != q {
                out = &out + &(&s(q) * &si.numerator[p]);
            }
            out
        })
        .collect();
    let rhs_poly = si.denominator.scale(&rat(a.unit_norm_squared() as i64));
    cols.push(rhs_poly);
    let mut rows = coefficient_rows(&cols);
    let rhs = rows
        .iter_mut()
        .map(|r| r.pop().expect("nonempty"))
        .collect();
    let m = RationalMatrix::from_rows(rows).expect("rectangular");
    (m, rhs)
}

/// `(|1|^2 / n) [tr R(e_i e_j)]`, the trace-form metric. It equals
/// `|1|^2 * grad log |det R(s)|^(1/n)` applied through `s^{-1}`, so it is always a
/// normalized uncurling metric, and it transforms by congruence under any change
/// of basis.
pub fn trace_form_metric(a: &Algebra) -> SymMetric {
    let n = a.dim();
    let c = a.structure_constants();
    // tr R(x) = sum_i x_i sum_k c[i][k][k]
    let tr: Vec<Rational> = (0..n)
        .map(|i| (0..n).map(|k| c.get(i, k, k).clone()).sum())
        .collect();
    let scale = Rational::new((a.unit_norm_squared() as i64).into(), (n as i64).into());
    let m = RationalMatrix::from_fn(n, n, |i, j| {
        let e_ij: Rational = (0..n).map(|k| c.get(i, j, k) * &tr[k]).sum();
        e_ij * &scale
    });
    SymMetric(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizedFamily {
    Family {
        particular: SymMetric,
        directions: Vec<SymMetric>,
    },
    Inconsistent,
}

impl NormalizedFamily {
    /// Number of free directions, `-1` when inconsistent.
    pub fn dimension(&self) -> i64 {
        match self {
            NormalizedFamily::Family { directions, .. } => directions.len() as i64,
            NormalizedFamily::Inconsistent => -1,
        }
    }
}

/// Affine solution of the normalization condition inside the uncurling space. The
/// particular member is the trace-form metric; directions are in reduced row
/// echelon form over the upper-triangle coordinates.
pub fn normalized_family(a: &Algebra) -> NormalizedFamily {
    normalized_family_in(a, &uncurling_space(a))
}

pub fn normalized_family_in(a: &Algebra, space: &UncurlingSpace) -> NormalizedFamily {
    let n = a.dim();
    let (m, rhs) = normalization_constraints(a);
    let k = space.dimension();
    let basis: Vec<Vec<Rational>> = space.basis.iter().map(SymMetric::unknowns).collect();
    let restricted = RationalMatrix::from_fn(m.rows(), k, |r, c| {
        m.row(r).iter().zip(&basis[c]).map(|(x, y)| x * y).sum()
    });
    let combine = |alpha: &[Rational]| -> Vec<Rational> {
        (0..unknown_count(n))
            .map(|u| alpha.iter().zip(&basis).map(|(w, b)| w * &b[u]).sum())
            .collect()
    };
    match affine_solve(&restricted, &rhs).expect("shapes agree") {
        AffineSolution::Inconsistent => NormalizedFamily::Inconsistent,
        AffineSolution::Solution {
            particular,
            homogeneous,
        } => {
            let dirs: Vec<Vec<Rational>> = homogeneous.iter().map(|h| combine(h)).collect();
            let directions = canonical_basis(dirs, unknown_count(n))
                .into_iter()
                .map(|v| SymMetric::from_unknowns(n, &v))
                .collect();
            let p0 = trace_form_metric(a);
            let particular =
                if m.mul_vec(&p0.unknowns()).expect("shape") == rhs && is_uncurling(a, &p0) {
                    p0
                } else {
                    SymMetric::from_unknowns(n, &combine(&particular))
                };
            NormalizedFamily::Family {
                particular,
                directions,
            }
        }
    }
}

/// Components of `L P`, i.e. `D * L s^{-1}`.
fn metric_times_numerator(a: &Algebra, l: &SymMetric) -> Vec<MultiPoly> {
    let n = a.dim();
    let lp = PolyMatrix::from_rational(l.matrix(), n);
    lp.mul_vec(&a.symbolic_inverse().numerator).expect("square")
}

/// Exact check that the cleared curl of `L s^{-1}` vanishes identically.
pub fn is_uncurling(a: &Algebra, l: &SymMetric) -> bool {
    curl_polynomials(a, l).iter().all(MultiPoly::is_zero)
}

/// `D d_j F_i - F_i d_j D - D d_i F_j + F_j d_i D` for `F = L P`, pairs `i < j`.
pub fn curl_polynomials(a: &Algebra, l: &SymMetric) -> Vec<MultiPoly> {
    let n = a.dim();
    let f = metric_times_numerator(a, l);
    let d = a.usual_norm_poly();
    let der = |p: &MultiPoly, k: usize| p.partial_derivative(k).expect("index in range");
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = &(d * &der(&f[i], j)) - &(&f[i] * &der(d, j));
            let rhs = &(d * &der(&f[j], i)) - &(&f[j] * &der(d, i));
            out.push(&lhs - &rhs);
        }
    }
    out
}

/// `sum_i s_i (L P)_i - |1|^2 D`.
pub fn normalization_residual(a: &Algebra, l: &SymMetric) -> MultiPoly {
    let n = a.dim();
    let f = metric_times_numerator(a, l);
    let lhs = f
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(n), |acc, (i, fi)| {
            &acc + &(&MultiPoly::var(n, i) * fi)
        });
    &lhs - &a
        .usual_norm_poly()
        .scale(&rat(a.unit_norm_squared() as i64))
}

pub fn is_normalized(a: &Algebra, l: &SymMetric) -> bool {
    l.dim() == a.dim() && is_uncurling(a, l) && normalization_residual(a, l).is_zero()
}

/// Largest finite-difference curl of `L s^{-1}` over random units in the box
/// `unit +- 0.3`.
pub fn verify_uncurling(
    a: &Algebra,
    l: &SymMetric,
    trials: usize,
    seed: u64,
) -> Result<f64, Error> {
    const H: f64 = 1e-5;
    let n = a.dim();
    let lf = l.to_f64_rows();
    let field = |s: &[f64]| -> Result<Vec<f64>, Error> {
        let inv = a.numeric_inverse(s)?;
        Ok(lf
            .iter()
            .map(|row| row.iter().zip(&inv).map(|(x, y)| x * y).sum())
            .collect())
    };
    let unit = a.unit_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut accepted = 0;
    let mut rejected = 0;
    while accepted < trials {
        let s: Vec<f64> = unit.iter().map(|u| u + rng.gen_range(-0.3..=0.3)).collect();
        // jac[j][i] = d_j F_i
        let jac: Result<Vec<Vec<f64>>, Error> = (0..n)
            .map(|j| {
                let mut hi = s.clone();
                let mut lo = s.clone();
                hi[j] += H;
                lo[j] -= H;
                let (fh, fl) = (field(&hi)?, field(&lo)?);
                Ok(fh
                    .iter()
                    .zip(&fl)
                    .map(|(p, m)| (p - m) / (2.0 * H))
                    .collect())
            })
            .collect();
        let Ok(jac) = jac.and_then(|j| field(&s).map(|_| j)) else {
            rejected += 1;
            if rejected >= 100 * trials.max(1) {
                return Err(Error::SamplingExhausted { attempts: rejected });
            }
            continue;
        };
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((jac[j][i] - jac[i][j]).abs());
            }
        }
        accepted += 1;
    }
    Ok(worst)
}

/// One point of the canonical signature sample set: the trace-form metric moved
/// `step` units along `direction` (`None` for the trace-form metric itself).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureSample {
    pub direction: Option<usize>,
    pub step: i64,
    pub signature: Signature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tristate {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Tristate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tristate::Yes => "yes",
            Tristate::No => "no",
            Tristate::Unknown => "unknown",
        })
    }
}

/// How a one-dimensional family direction was scaled before sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectionScale {
    /// `d / sqrt(q)` with `q = |tr((P^{-1} d)^2)|` on the quotient by `ker P`.
    Intrinsic(Rational),
    /// The signature along the line is constant on each side of the particular
    /// metric, so the raw direction is used.
    ScaleFree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub dim: usize,
    pub unit_norm_squared: usize,
    pub dim_uncurling: usize,
    pub dim_normalized_family: i64,
    pub signature_samples: Vec<SignatureSample>,
    pub direction_scale: Option<DirectionScale>,
    pub admits_positive_definite_normalized: Tristate,
}

impl InvariantReport {
    pub fn signature_multiset(&self) -> Vec<Signature> {
        let mut v: Vec<Signature> = self.signature_samples.iter().map(|s| s.signature).collect();
        v.sort();
        v
    }
}

pub fn invariant_report(a: &Algebra) -> InvariantReport {
    let space = uncurling_space(a);
    let family = normalized_family_in(a, &space);
    let mut samples = Vec::new();
    let mut direction_scale = None;
    if let NormalizedFamily::Family {
        particular,
        directions,
    } = &family
    {
        samples.push(SignatureSample {
            direction: None,
            step: 0,
            signature: particular.signature(),
        });
        if let [d] = directions.as_slice() {
            let p = particular.matrix();
            let d = d.matrix();
            let scale = intrinsic_scale(p, d)
                .map(DirectionScale::Intrinsic)
                .or_else(|| scale_free_along(p, d).then_some(DirectionScale::ScaleFree));
            if let Some(scale) = &scale {
                for step in [1i64, -1, 2, -2] {
                    let t = rat(step);
                    let signature = match scale {
                        DirectionScale::Intrinsic(q) => surd_combination_signature(p, q, d, &t),
                        DirectionScale::ScaleFree => {
                            rational_signature(&p.add(&d.scale(&t)).expect("same shape"))
                        }
                    };
                    samples.push(SignatureSample {
                        direction: Some(0),
                        step,
                        signature,
                    });
                }
            }
            direction_scale = scale;
        }
    }
    let dim_normalized_family = family.dimension();
    let admits = if samples.iter().any(|s| s.signature.is_positive_definite()) {
        Tristate::Yes
    } else if dim_normalized_family >= 1 {
        Tristate::Unknown
    } else {
        Tristate::No
    };
    InvariantReport {
        dim: a.dim(),
        unit_norm_squared: a.unit_norm_squared(),
        dim_uncurling: space.dimension(),
        dim_normalized_family,
        signature_samples: samples,
        direction_scale,
        admits_positive_definite_normalized: admits,
    }
}

/// `|tr((P^{-1} d)^2)|` computed on `V / ker P`, if `d` vanishes on `ker P` and the
/// value is nonzero. Invariant under simultaneous congruence of `(P, d)` and
/// quadratic in the scale of `d`.
fn intrinsic_scale(p: &RationalMatrix, d: &RationalMatrix) -> Option<Rational> {
    let n = p.rows();
    let kernel = p.nullspace();
    if kernel
        .iter()
        .any(|k| d.mul_vec(k).expect("shape").iter().any(|x| !x.is_zero()))
    {
        return None;
    }
    let range = canonical_basis(p.to_rows(), n);
    let c = RationalMatrix::from_fn(n, range.len(), |i, j| range[j][i].clone());
    let ct = c.transpose();
    let pb = ct.mul(p).ok()?.mul(&c).ok()?;
    let db = ct.mul(d).ok()?.mul(&c).ok()?;
    let m = pb.inverse().ok()?.mul(&db).ok()?;
    let g: Rational = (0..m.rows())
        .map(|i| {
            (0..m.rows())
                .map(|k| m.get(i, k) * m.get(k, i))
                .sum::<Rational>()
        })
        .sum();
    let q = if g < Rational::zero() { -g } else { g };
    (!q.is_zero()).then_some(q)
}

/// True when the rank of `P + x d` is constant on `x > 0` and on `x < 0`. Eigenvalues
/// move continuously with `x` and can only change sign through zero, so the inertia
/// is then constant on each half-line. Rank is a congruence invariant, which keeps
/// the certificate independent of the basis.
fn scale_free_along(p: &RationalMatrix, d: &RationalMatrix) -> bool {
    let n = p.rows();
    let pencil = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| UniPoly::new(vec![p.get(i, j).clone(), d.get(i, j).clone()]))
                .collect()
        })
        .collect();
    let (_, divisor) = determinantal_divisor(pencil);
    divisor.count_positive_roots() == 0 && divisor.count_negative_roots() == 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Distinguishable(String),
    Inconclusive,
}

fn show_multiset(v: &[Signature]) -> String {
    let parts: Vec<String> = v.iter().map(Signature::to_string).collect();
    format!("[{}]", parts.join(" "))
}

/// Compares the invariants in a fixed order and reports the first difference.
/// Never claims the algebras are isomorphic.
pub fn distinguish_reports(a: &InvariantReport, b: &InvariantReport) -> Comparison {
    let checks: [(&str, i64, i64); 4] = [
        ("dim", a.dim as i64, b.dim as i64),
        (
            "unit_norm_squared",
            a.unit_norm_squared as i64,
            b.unit_norm_squared as i64,
        ),
        (
            "dim_uncurling",
            a.dim_uncurling as i64,
            b.dim_uncurling as i64,
        ),
        (
            "dim_normalized_family",
            a.dim_normalized_family,
            b.dim_normalized_family,
        ),
    ];
    for (name, x, y) in checks {
        if x != y {
            return Comparison::Distinguishable(format!("{name}: {x} vs {y}"));
        }
    }
    let (ma, mb) = (a.signature_multiset(), b.signature_multiset());
    if ma != mb {
        return Comparison::Distinguishable(format!(
            "signature sample multiset: {} vs {}",
            show_multiset(&ma),
            show_multiset(&mb)
        ));
    }
    Comparison::Inconclusive
}

pub fn distinguish(a: &Algebra, b: &Algebra) -> Comparison {
    distinguish_reports(&invariant_report(a), &invariant_report(b))
}

/// Coordinates of `l` in the span of `basis`, if it lies there.
pub fn coordinates_in(basis: &[SymMetric], l: &SymMetric) -> Option<Vec<Rational>> {
    if basis.is_empty() {
        return l.matrix().is_zero().then(Vec::new);
    }
    let n = l.dim();
    let cols: Vec<Vec<Rational>> = basis.iter().map(SymMetric::unknowns).collect();
    let m = RationalMatrix::from_fn(unknown_count(n), basis.len(), |r, c| cols[c][r].clone());
    match affine_solve(&m, &l.unknowns()).ok()? {
        AffineSolution::Solution { particular, .. } => Some(particular),
        AffineSolution::Inconsistent => None,
    }
}

/// Identity matrix as a metric, handy for tests and the CLI.
pub fn identity_metric(n: usize) -> SymMetric {
    SymMetric(RationalMatrix::identity(n))
}
