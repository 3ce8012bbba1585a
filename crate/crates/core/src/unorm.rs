//! The unital norm: `u(s) = exp((1/|1|^2) * integral of (L g^{-1}) . g')` along a
//! path `g` of units from the identity, and numerical checks of its attributes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::exact::rational::to_f64;
use crate::quadrature::{integrate, GaussLegendre, QuadError, Refinement};
use crate::uncurl::{is_normalized, is_uncurling, normalization_residual, SymMetric};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub order: usize,
    pub tolerance: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: 16,
            tolerance: 1e-10,
            max_depth: 20,
        }
    }
}

/// Polyline starting at the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Vec<f64>>,
}

impl PathSpec {
    /// Repeated consecutive waypoints are dropped.
    pub fn new(a: &Algebra, waypoints: Vec<Vec<f64>>) -> Result<Self, Error> {
        let unit = a.unit_f64();
        if waypoints.first() != Some(&unit) {
            return Err(Error::InvalidParams("path must start at the unit".into()));
        }
        if let Some(bad) = waypoints.iter().find(|w| w.len() != a.dim()) {
            return Err(Error::Shape(format!(
                "waypoint has {} coordinates, expected {}",
                bad.len(),
                a.dim()
            )));
        }
        let mut w = waypoints;
        w.dedup();
        Ok(PathSpec { waypoints: w })
    }

    pub fn straight(a: &Algebra, s: &[f64]) -> Self {
        let mut waypoints = vec![a.unit_f64()];
        if s != waypoints[0].as_slice() {
            waypoints.push(s.to_vec());
        }
        PathSpec { waypoints }
    }

    pub fn waypoints(&self) -> &[Vec<f64>] {
        &self.waypoints
    }
}

/// Attribute residuals at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientResiduals {
    /// `|L s^{-1} - |1|^2 grad u(s) / u(s)|_inf`
    pub gradient: f64,
    /// `|L s - |1|^2 u(s) grad u(s^{-1})|_inf`
    pub scalar_product: f64,
}

/// Worst residuals over a seeded batch of points near the identity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttributeSummary {
    pub trials: usize,
    pub homogeneity: f64,
    pub inversion: f64,
    pub gradient: f64,
    pub scalar_product: f64,
    pub recovery: f64,
    /// `|u(s) - |det R(s)|^{1/n}|`; zero only for metrics whose norm is the usual one.
    pub usual_norm_gap: f64,
}

/// Evaluates the unital norm of one normalized uncurling metric.
#[derive(Clone, Debug)]
pub struct NormEvaluator<'a> {
    algebra: &'a Algebra,
    metric: SymMetric,
    l: Vec<Vec<f64>>,
    l_pinv: Vec<Vec<f64>>,
    projector: Vec<Vec<f64>>,
    unit_norm_squared: f64,
    rule: GaussLegendre,
    config: QuadratureConfig,
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn to_rows(m: &crate::exact::RationalMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(to_f64).collect())
        .collect()
}

pub fn make_evaluator<'a>(
    a: &'a Algebra,
    metric: &SymMetric,
    config: QuadratureConfig,
) -> Result<NormEvaluator<'a>, Error> {
    if metric.dim() != a.dim() {
        return Err(Error::Shape(format!(
            "metric is {m}x{m} but the algebra has dimension {n}",
            m = metric.dim(),
            n = a.dim()
        )));
    }
    if !is_uncurling(a, metric) {
        return Err(Error::NotNormalized(
            "L s^-1 is not curl-free (uncurling condition fails)".into(),
        ));
    }
    if !is_normalized(a, metric) {
        return Err(Error::NotNormalized(format!(
            "s^T L s^-1 differs from |1|^2 (residual numerator {})",
            normalization_residual(a, metric)
        )));
    }
    if config.tolerance.is_nan() || config.tolerance <= 0.0 || config.order == 0 {
        return Err(Error::InvalidParams(
            "quadrature needs a positive tolerance and order".into(),
        ));
    }
    let pinv = metric.matrix().pseudoinverse();
    let projector = pinv.mul(metric.matrix()).expect("square");
    Ok(NormEvaluator {
        algebra: a,
        metric: metric.clone(),
        l: metric.to_f64_rows(),
        l_pinv: to_rows(&pinv),
        projector: to_rows(&projector),
        unit_norm_squared: a.unit_norm_squared() as f64,
        rule: GaussLegendre::new(config.order),
        config,
    })
}

impl NormEvaluator<'_> {
    pub fn algebra(&self) -> &Algebra {
        self.algebra
    }

    pub fn metric(&self) -> &SymMetric {
        &self.metric
    }

    pub fn unit_norm_squared(&self) -> f64 {
        self.unit_norm_squared
    }

    /// `log u(s)` along the given path (straight from the unit by default).
    pub fn log_eval(&self, s: &[f64], path: Option<&PathSpec>) -> Result<f64, Error> {
        let a = self.algebra;
        if s.len() != a.dim() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, expected {}",
                s.len(),
                a.dim()
            )));
        }
        let mut points = match path {
            Some(p) => p.waypoints.clone(),
            None => vec![a.unit_f64()],
        };
        if points.last().map(Vec::as_slice) != Some(s) {
            points.push(s.to_vec());
        }
        if !a.is_numeric_unit(s) {
            return Err(Error::PathThroughNonUnit {
                segment: points.len().saturating_sub(2),
                t: 1.0,
            });
        }
        let refinement = Refinement {
            tolerance: self.config.tolerance,
            max_depth: self.config.max_depth,
        };
        let mut total = 0.0;
        for (seg, w) in points.windows(2).enumerate() {
            let (p, q) = (&w[0], &w[1]);
            let dir: Vec<f64> = q.iter().zip(p).map(|(x, y)| x - y).collect();
            if let Some(t) = crossing(a, p, &dir) {
                return Err(Error::PathThroughNonUnit { segment: seg, t });
            }
            let integrand = |t: f64| -> Result<f64, Error> {
                let g: Vec<f64> = p.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
                let inv = a
                    .numeric_inverse(&g)
                    .map_err(|_| Error::PathThroughNonUnit { segment: seg, t })?;
                let field = mat_vec(&self.l, &inv);
                Ok(field.iter().zip(&dir).map(|(f, d)| f * d).sum())
            };
            total +=
                integrate(&self.rule, 0.0, 1.0, refinement, integrand).map_err(|e| match e {
                    QuadError::Integrand(e) => e,
                    QuadError::NotConverged { diff } => {
                        Error::QuadratureNotConverged { segment: seg, diff }
                    }
                })?;
        }
        Ok(total / self.unit_norm_squared)
    }

    pub fn eval(&self, s: &[f64], path: Option<&PathSpec>) -> Result<f64, Error> {
        Ok(self.log_eval(s, path)?.exp())
    }

    /// Central-difference gradient of `u` at `s`.
    pub fn gradient(&self, s: &[f64], h: f64) -> Result<Vec<f64>, Error> {
        (0..s.len())
            .map(|j| {
                let mut hi = s.to_vec();
                let mut lo = s.to_vec();
                hi[j] += h;
                lo[j] -= h;
                Ok((self.eval(&hi, None)? - self.eval(&lo, None)?) / (2.0 * h))
            })
            .collect()
    }

    /// `|u(alpha s) - alpha u(s)|`.
    pub fn check_homogeneity(&self, s: &[f64], alpha: f64) -> Result<f64, Error> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidParams("alpha must be positive".into()));
        }
        let scaled: Vec<f64> = s.iter().map(|x| alpha * x).collect();
        Ok((self.eval(&scaled, None)? - alpha * self.eval(s, None)?).abs())
    }

    /// `|u(s) u(s^{-1}) - 1|`.
    pub fn check_inversion(&self, s: &[f64]) -> Result<f64, Error> {
        let inv = self.algebra.numeric_inverse(s)?;
        Ok((self.eval(s, None)? * self.eval(&inv, None)? - 1.0).abs())
    }

    pub fn check_gradient(&self, s: &[f64], h: f64) -> Result<GradientResiduals, Error> {
        let k = self.unit_norm_squared;
        let a = self.algebra;
        let inv = a.numeric_inverse(s)?;
        let u = self.eval(s, None)?;
        let grad = self.gradient(s, h)?;
        let lhs = mat_vec(&self.l, &inv);
        let rhs: Vec<f64> = grad.iter().map(|g| k * g / u).collect();
        let grad_inv = self.gradient(&inv, h)?;
        let ls = mat_vec(&self.l, s);
        let rhs3: Vec<f64> = grad_inv.iter().map(|g| k * u * g).collect();
        Ok(GradientResiduals {
            gradient: max_abs_diff(&lhs, &rhs),
            scalar_product: max_abs_diff(&ls, &rhs3),
        })
    }

    /// `L^+ (|1|^2 grad u(s) / u(s))`, which recovers `s^{-1}` up to its component
    /// in the kernel of `L`.
    pub fn recover_inverse(&self, s: &[f64], h: f64) -> Result<Vec<f64>, Error> {
        let k = self.unit_norm_squared;
        let u = self.eval(s, None)?;
        let g: Vec<f64> = self.gradient(s, h)?.iter().map(|x| k * x / u).collect();
        Ok(mat_vec(&self.l_pinv, &g))
    }

    /// `|recover_inverse(s) - L^+ L s^{-1}|_inf`.
    pub fn recovery_residual(&self, s: &[f64], h: f64) -> Result<f64, Error> {
        let rec = self.recover_inverse(s, h)?;
        let inv = self.algebra.numeric_inverse(s)?;
        Ok(max_abs_diff(&rec, &mat_vec(&self.projector, &inv)))
    }

    /// Runs every attribute check at `trials` points `1 + U(-spread, spread)^n`, with
    /// the homogeneity factor drawn from `[0.5, 2)`.
    pub fn attribute_sweep(
        &self,
        trials: usize,
        seed: u64,
        spread: f64,
        h: f64,
    ) -> Result<AttributeSummary, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unit = self.algebra.unit_f64();
        let n = unit.len() as f64;
        let mut out = AttributeSummary {
            trials,
            ..Default::default()
        };
        for _ in 0..trials {
            let s: Vec<f64> = unit
                .iter()
                .map(|u| u + rng.gen_range(-spread..spread))
                .collect();
            let alpha = rng.gen_range(0.5..2.0);
            let g = self.check_gradient(&s, h)?;
            let det = self.algebra.left_regular_f64(&s).determinant().abs();
            out.homogeneity = out.homogeneity.max(self.check_homogeneity(&s, alpha)?);
            out.inversion = out.inversion.max(self.check_inversion(&s)?);
            out.gradient = out.gradient.max(g.gradient);
            out.scalar_product = out.scalar_product.max(g.scalar_product);
            out.recovery = out.recovery.max(self.recovery_residual(&s, h)?);
            out.usual_norm_gap = out
                .usual_norm_gap
                .max((self.eval(&s, None)? - det.powf(1.0 / n)).abs());
        }
        Ok(out)
    }
}

/// Parameter `t` in `[0, 1]` where `p + t dir` is a non-unit, if any. Quadrature
/// nodes can step over an isolated singularity (a symmetric rule even cancels a
/// simple pole), so the segment is screened first: `det R(p + t dir) = 0` exactly
/// when `t = -1/mu` for an eigenvalue `mu` of `R(p)^{-1} R(dir)`.
fn crossing(a: &Algebra, p: &[f64], dir: &[f64]) -> Option<f64> {
    let Some(rp_inv) = a.left_regular_f64(p).try_inverse() else {
        return Some(0.0);
    };
    let m = rp_inv * a.left_regular_f64(dir);
    m.complex_eigenvalues().iter().find_map(|mu| {
        if mu.norm() == 0.0 {
            return None;
        }
        let t = (-mu.inv()).re;
        if !(0.0..=1.0).contains(&t) {
            return None;
        }
        let g: Vec<f64> = p.iter().zip(dir).map(|(x, d)| x + t * d).collect();
        (!a.is_numeric_unit(&g)).then_some(t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::exact::RationalMatrix;
    use crate::uncurl::identity_metric;

    fn sym(rows: &[&[i64]]) -> SymMetric {
        SymMetric::new(RationalMatrix::from_i64(rows)).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn evaluator_membership() {
        let c = builtin("complex").unwrap();
        assert!(make_evaluator(&c, &sym(&[&[1, 0], &[0, -1]]), cfg()).is_ok());
        assert!(matches!(
            make_evaluator(&c, &identity_metric(2), cfg()),
            Err(Error::NotNormalized(_))
        ));
        let r2 = builtin("reals(2)").unwrap();
        assert!(make_evaluator(&r2, &identity_metric(2), cfg()).is_ok());
    }

    #[test]
    fn closed_form_values() {
        let c = builtin("complex").unwrap();
        let e = make_evaluator(&c, &sym(&[&[1, 0], &[0, -1]]), cfg()).unwrap();
        assert!((e.eval(&[0.6, 0.8], None).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(e.eval(&[1.0, 0.0], None).unwrap(), 1.0);

        let r2 = builtin("reals(2)").unwrap();
        let e = make_evaluator(&r2, &identity_metric(2), cfg()).unwrap();
        assert!((e.eval(&[2.0, 0.5], None).unwrap() - 1.0).abs() < 1e-8);

        // x exp(y / x) at (2, 1)
        let d = builtin("dual").unwrap();
        let e = make_evaluator(&d, &sym(&[&[1, 1], &[1, 0]]), cfg()).unwrap();
        let want = 2.0 * 0.5f64.exp();
        assert!((e.eval(&[2.0, 1.0], None).unwrap() - want).abs() < 1e-6);
        assert!((want - 3.29744254).abs() < 1e-8);
    }

    #[test]
    fn attribute_examples() {
        let c = builtin("complex").unwrap();
        let ec = make_evaluator(&c, &sym(&[&[1, 0], &[0, -1]]), cfg()).unwrap();
        assert!(ec.check_homogeneity(&[0.6, 0.8], 2.0).unwrap() < 1e-7);
        assert!(ec.check_homogeneity(&[1.0, 0.0], 1.0).unwrap() < 1e-12);
        assert!(ec.check_inversion(&[0.6, 0.8]).unwrap() < 1e-7);
        assert!(ec.check_gradient(&[0.6, 0.8], 1e-5).unwrap().gradient < 1e-5);

        let r2 = builtin("reals(2)").unwrap();
        let er = make_evaluator(&r2, &identity_metric(2), cfg()).unwrap();
        assert!(er.check_homogeneity(&[2.0, 0.5], 3.0).unwrap() < 1e-7);
        assert!(er.check_gradient(&[1.0, 1.0], 1e-5).unwrap().gradient < 1e-5);
        let g = er.gradient(&[1.0, 1.0], 1e-5).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-8 && (g[1] - 0.5).abs() < 1e-8);

        let d = builtin("dual").unwrap();
        let ed = make_evaluator(&d, &sym(&[&[1, 1], &[1, 0]]), cfg()).unwrap();
        assert!(ed.check_inversion(&[2.0, 1.0]).unwrap() < 1e-6);
        assert!(ed.check_gradient(&[2.0, 1.0], 1e-5).unwrap().gradient < 1e-4);
    }

    #[test]
    fn attribute_sweep_is_seeded() {
        let a = builtin("complex").unwrap();
        let e = make_evaluator(&a, &sym(&[&[1, 0], &[0, -1]]), cfg()).unwrap();
        let x = e.attribute_sweep(10, 3, 0.3, 1e-5).unwrap();
        assert_eq!(x, e.attribute_sweep(10, 3, 0.3, 1e-5).unwrap());
        assert!(x.homogeneity < 1e-7 && x.gradient < 1e-5 && x.recovery < 1e-4);
        assert!(x.usual_norm_gap < 1e-8);
        let twisted = make_evaluator(&a, &sym(&[&[1, 1], &[1, -1]]), cfg()).unwrap();
        assert!(
            twisted
                .attribute_sweep(10, 3, 0.3, 1e-5)
                .unwrap()
                .usual_norm_gap
                > 1e-3
        );
    }

    #[test]
    fn inverse_recovery() {
        let close = |a: &[f64], b: &[f64]| max_abs_diff(a, b) < 1e-4;
        let c = builtin("complex").unwrap();
        let e = make_evaluator(&c, &sym(&[&[1, 0], &[0, -1]]), cfg()).unwrap();
        assert!(close(
            &e.recover_inverse(&[0.6, 0.8], 1e-5).unwrap(),
            &[0.6, -0.8]
        ));
        let r2 = builtin("reals(2)").unwrap();
        let e = make_evaluator(&r2, &identity_metric(2), cfg()).unwrap();
        assert!(close(
            &e.recover_inverse(&[2.0, 0.5], 1e-5).unwrap(),
            &[0.5, 2.0]
        ));
        let d = builtin("dual").unwrap();
        let e = make_evaluator(&d, &sym(&[&[1, 0], &[0, 0]]), cfg()).unwrap();
        assert!(close(
            &e.recover_inverse(&[2.0, 1.0], 1e-5).unwrap(),
            &[0.5, 0.0]
        ));
        assert!(e.recovery_residual(&[2.0, 1.0], 1e-5).unwrap() < 1e-4);
    }

    #[test]
    fn paths_and_non_units() {
        let c = builtin("complex").unwrap();
        let e = make_evaluator(&c, &sym(&[&[1, 0], &[0, -1]]), cfg()).unwrap();
        let path =
            PathSpec::new(&c, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![-0.5, 1.0]]).unwrap();
        let via = e.eval(&[0.6, 0.8], Some(&path)).unwrap();
        assert!((via - 1.0).abs() < 1e-8);
        // straight line from 1 to -1 hits the origin
        assert!(matches!(
            e.eval(&[-1.0, 0.0], None),
            Err(Error::PathThroughNonUnit { .. })
        ));
        assert!(PathSpec::new(&c, vec![vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn branch_depends_on_path() {
        // with L = [[1,1],[1,-1]] the norm is r e^{theta}, so winding once around
        // the origin multiplies it by e^{2 pi}
        let c = builtin("complex").unwrap();
        let e = make_evaluator(&c, &sym(&[&[1, 1], &[1, -1]]), cfg()).unwrap();
        let direct = e.eval(&[0.0, 1.0], None).unwrap();
        assert!((direct - std::f64::consts::FRAC_PI_2.exp()).abs() < 1e-8);
        let around = PathSpec::new(
            &c,
            vec![
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![1.0, 0.5],
            ],
        )
        .unwrap();
        let wound = e.eval(&[0.0, 1.0], Some(&around)).unwrap();
        let ratio = wound / direct;
        assert!(
            (ratio.ln() - 2.0 * std::f64::consts::PI).abs() < 1e-6,
            "{ratio}"
        );
    }
}
