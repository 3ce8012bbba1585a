//! The Euclidean plane as the simplest case: length recovered from the field
//! `grad(l^2 / 2) = (x, y)`, quadratic-form lengths, and linearity of the
//! directional derivative.

use std::convert::Infallible;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::quadrature::{integrate, GaussLegendre, QuadError, Refinement};

pub fn length(s: [f64; 2]) -> f64 {
    s[0].hypot(s[1])
}

fn central_gradient(f: impl Fn(&[f64]) -> f64, s: &[f64], h: f64) -> Vec<f64> {
    (0..s.len())
        .map(|j| {
            let mut hi = s.to_vec();
            let mut lo = s.to_vec();
            hi[j] += h;
            lo[j] -= h;
            (f(&hi) - f(&lo)) / (2.0 * h)
        })
        .collect()
}

/// Line integral of `2 (x, y) . dg` along a polyline that starts at the origin.
pub fn reconstruct_length_squared(path: &[[f64; 2]]) -> Result<f64, Error> {
    if path.first() != Some(&[0.0, 0.0]) {
        return Err(Error::InvalidParams("path must start at the origin".into()));
    }
    let rule = GaussLegendre::new(16);
    let cfg = Refinement {
        tolerance: 1e-12,
        max_depth: 20,
    };
    let mut total = 0.0;
    for (seg, w) in path.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        let d = [q[0] - p[0], q[1] - p[1]];
        let v = integrate(&rule, 0.0, 1.0, cfg, |t| {
            let g = [p[0] + t * d[0], p[1] + t * d[1]];
            Ok::<_, Infallible>(2.0 * (g[0] * d[0] + g[1] * d[1]))
        })
        .map_err(|e| match e {
            QuadError::NotConverged { diff } => {
                Error::QuadratureNotConverged { segment: seg, diff }
            }
            QuadError::Integrand(never) => match never {},
        })?;
        total += v;
    }
    Ok(total)
}

/// `(|s - l grad l|_inf, |l(grad l) - 1|)` with `grad l` by central differences.
pub fn length_identity_residuals(s: [f64; 2], h: f64) -> (f64, f64) {
    let l = length(s);
    let g = central_gradient(|p| length([p[0], p[1]]), &s, h);
    let r1 = (s[0] - l * g[0]).abs().max((s[1] - l * g[1]).abs());
    let r2 = (length([g[0], g[1]]) - 1.0).abs();
    (r1, r2)
}

/// Symmetric positive semi-definite matrix defining `l(s)^2 = s^T L s`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    l: DMatrix<f64>,
}

impl QuadraticForm {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        let l = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        if (0..n).any(|i| (0..i).any(|j| l[(i, j)] != l[(j, i)])) {
            return Err(Error::Shape("quadratic form must be symmetric".into()));
        }
        let eig = SymmetricEigen::new(l.clone());
        if let Some(&e) = eig.eigenvalues.iter().find(|&&e| e < -1e-12) {
            return Err(Error::NotSemidefinite { eigenvalue: e });
        }
        Ok(QuadraticForm { l })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    fn form(&self, s: &[f64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(s);
        v.dot(&(&self.l * &v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticNorm {
    pub value: f64,
    /// `|L s - l(s) grad l(s)|_inf`, central differences with step `1e-5`.
    pub euler_residual: f64,
}

pub fn quadratic_norm(q: &QuadraticForm, s: &[f64]) -> Result<QuadraticNorm, Error> {
    if s.len() != q.dim() {
        return Err(Error::Shape(format!(
            "point has {} coordinates, expected {}",
            s.len(),
            q.dim()
        )));
    }
    let v = q.form(s);
    if v < -1e-12 {
        return Err(Error::NegativeForm { value: v });
    }
    let value = v.max(0.0).sqrt();
    let ell = |p: &[f64]| q.form(p).max(0.0).sqrt();
    let g = central_gradient(ell, s, 1e-5);
    let ls = &q.l * nalgebra::DVector::from_column_slice(s);
    let euler_residual = (0..s.len()).fold(0.0f64, |m, i| m.max((ls[i] - value * g[i]).abs()));
    Ok(QuadraticNorm {
        value,
        euler_residual,
    })
}

/// One-sided quotient `(l(p + e d) - l(p)) / e` at `e = 100h, 10h, h`, extrapolated
/// twice with ratio 10 to cancel the `O(e)` and `O(e^2)` terms.
fn one_sided_derivative(p: [f64; 2], d: [f64; 2], h: f64) -> f64 {
    let l0 = length(p);
    let q = |e: f64| (length([p[0] + e * d[0], p[1] + e * d[1]]) - l0) / e;
    let (q1, q2, q3) = (q(100.0 * h), q(10.0 * h), q(h));
    let r1 = (10.0 * q2 - q1) / 9.0;
    let r2 = (10.0 * q3 - q2) / 9.0;
    (100.0 * r2 - r1) / 99.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalCheck {
    /// Difference-quotient estimate of `Dl(x, y; u, v)`.
    pub derivative: f64,
    /// `dl/dx u + dl/dy v` from partials estimated the same way.
    pub linear: f64,
    pub residual: f64,
}

/// Compares the directional derivative of `l = |(x, y)|` with the linear functional
/// built from its partials. `h` is the smallest step (default `1e-5`).
pub fn directional_derivative_check(x: f64, y: f64, u: f64, v: f64, h: f64) -> DirectionalCheck {
    let p = [x, y];
    let derivative = one_sided_derivative(p, [u, v], h);
    let dx = one_sided_derivative(p, [1.0, 0.0], h);
    let dy = one_sided_derivative(p, [0.0, 1.0], h);
    let linear = dx * u + dy * v;
    DirectionalCheck {
        derivative,
        linear,
        residual: (derivative - linear).abs(),
    }
}

/// Worst residuals of the randomized demo suite.
#[derive(Clone, Debug, PartialEq)]
pub struct DemoReport {
    pub reconstructed: Vec<f64>,
    pub path_spread: f64,
    pub path_error: f64,
    pub gradient_max: f64,
    pub unit_length_max: f64,
    pub linearity_max: f64,
    pub paths: usize,
    pub points: usize,
}

/// Reconstructs `|(3,4)|^2` along `paths` random polylines and checks the plane
/// identities at `points` random points and directions.
pub fn pythagoras_demo(
    seed: u64,
    paths: usize,
    points: usize,
    h: f64,
) -> Result<DemoReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reconstructed = Vec::with_capacity(paths);
    for _ in 0..paths {
        let mut path = vec![[0.0, 0.0]];
        for _ in 0..rng.gen_range(1..=4) {
            path.push([rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]);
        }
        path.push([3.0, 4.0]);
        reconstructed.push(reconstruct_length_squared(&path)?);
    }
    let lo = reconstructed.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = reconstructed
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let path_error = reconstructed
        .iter()
        .fold(0.0f64, |m, v| m.max((v - 25.0).abs()));
    let (mut gradient_max, mut unit_length_max, mut linearity_max) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..points {
        let s = loop {
            let s = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
            if length(s) > 0.1 {
                break s;
            }
        };
        let (r1, r2) = length_identity_residuals(s, h);
        gradient_max = gradient_max.max(r1);
        unit_length_max = unit_length_max.max(r2);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let c = directional_derivative_check(s[0], s[1], theta.cos(), theta.sin(), h);
        linearity_max = linearity_max.max(c.residual);
    }
    Ok(DemoReport {
        reconstructed,
        path_spread: if paths == 0 { 0.0 } else { hi - lo },
        path_error,
        gradient_max,
        unit_length_max,
        linearity_max,
        paths,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_examples() {
        assert!(
            (reconstruct_length_squared(&[[0.0, 0.0], [3.0, 4.0]]).unwrap() - 25.0).abs() < 1e-10
        );
        let axis = [[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]];
        assert!((reconstruct_length_squared(&axis).unwrap() - 25.0).abs() < 1e-10);
        let back = [[0.0, 0.0], [2.0, -1.0], [0.0, 0.0]];
        assert!(reconstruct_length_squared(&back).unwrap().abs() < 1e-10);
        assert!(reconstruct_length_squared(&[[1.0, 0.0]]).is_err());
    }

    #[test]
    fn length_identity_examples() {
        let (a, b) = length_identity_residuals([1.0, 0.0], 1e-5);
        assert!(a < 1e-8 && b < 1e-8);
        let g = central_gradient(|p| length([p[0], p[1]]), &[1.0, 0.0], 1e-5);
        assert!((g[0] - 1.0).abs() < 1e-10 && g[1].abs() < 1e-10);
        let (a, b) = length_identity_residuals([3.0, 4.0], 1e-5);
        assert!(a < 1e-8 && b < 1e-8);
        let (a, b) = length_identity_residuals([0.001, 0.0], 1e-5);
        assert!(a < 1e-5 && b < 1e-5);
    }

    #[test]
    fn quadratic_norm_examples() {
        let id = QuadraticForm::new(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = quadratic_norm(&id, &[3.0, 4.0]).unwrap();
        assert!((r.value - 5.0).abs() < 1e-15 && r.euler_residual < 1e-8);
        let d = QuadraticForm::new(&[vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((quadratic_norm(&d, &[1.0, 0.0]).unwrap().value - 2.0).abs() < 1e-15);
        let deg = QuadraticForm::new(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(quadratic_norm(&deg, &[0.0, 7.0]).unwrap().value, 0.0);
        assert!(matches!(
            QuadraticForm::new(&[vec![1.0, 0.0], vec![0.0, -1.0]]),
            Err(Error::NotSemidefinite { .. })
        ));
    }

    #[test]
    fn negative_form_is_rejected() {
        // the semidefinite check allows -1e-12 eigenvalues; a form slightly below
        // that at a large point is still caught at evaluation
        let q = QuadraticForm::new(&[vec![1.0, 0.0], vec![0.0, -1e-13]]).unwrap();
        assert!(matches!(
            quadratic_norm(&q, &[0.0, 1e1]),
            Err(Error::NegativeForm { .. })
        ));
    }

    #[test]
    fn homogeneity_of_quadratic_norm() {
        let q = QuadraticForm::new(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let s = [0.7, -1.3];
        let base = quadratic_norm(&q, &s).unwrap().value;
        for alpha in [0.5, 2.0, 10.0] {
            let v = quadratic_norm(&q, &[alpha * s[0], alpha * s[1]])
                .unwrap()
                .value;
            assert!((v - alpha * base).abs() < 1e-9);
        }
    }

    #[test]
    fn directional_examples() {
        let c = directional_derivative_check(3.0, 4.0, 0.6, 0.8, 1e-5);
        assert!((c.derivative - 1.0).abs() < 1e-6 && c.residual < 1e-6);
        let c = directional_derivative_check(3.0, 4.0, -0.6, -0.8, 1e-5);
        assert!((c.derivative + 1.0).abs() < 1e-6);
        let c = directional_derivative_check(1.0, 0.0, 0.0, 1.0, 1e-5);
        assert!(c.derivative.abs() < 1e-6 && c.residual < 1e-6);
    }

    #[test]
    fn identity_form_matches_reconstruction() {
        let id = QuadraticForm::new(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let l2 = reconstruct_length_squared(&[[0.0, 0.0], [1.0, 2.0], [3.0, 4.0]]).unwrap();
        let q = quadratic_norm(&id, &[3.0, 4.0]).unwrap().value;
        assert!((q - l2.sqrt()).abs() < 1e-8);
    }
}
