//! Composite Gauss–Legendre quadrature with dyadic panel refinement.

use std::f64::consts::PI;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on `[a, b]`.
    pub fn panel<E>(
        &self,
        a: f64,
        b: f64,
        f: &mut impl FnMut(f64) -> Result<f64, E>,
    ) -> Result<f64, E> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = if n == 0 {
        0.0
    } else {
        n as f64 * (x * p1 - p0) / (x * x - 1.0)
    };
    (p, dp)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Refinement {
    pub tolerance: f64,
    pub max_depth: u32,
}

#[derive(Debug, PartialEq)]
pub enum QuadError<E> {
    Integrand(E),
    NotConverged { diff: f64 },
}

/// Integrates `f` over `[a, b]` with `2^k` equal panels for `k = 0, 1, ...`, stopping
/// once two successive estimates differ by less than the tolerance.
pub fn integrate<E>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    refinement: Refinement,
    mut f: impl FnMut(f64) -> Result<f64, E>,
) -> Result<f64, QuadError<E>> {
    let mut prev = rule.panel(a, b, &mut f).map_err(QuadError::Integrand)?;
    let mut diff = f64::INFINITY;
    for depth in 1..=refinement.max_depth {
        let panels = 1usize << depth;
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + width * p as f64;
            let hi = if p + 1 == panels { b } else { lo + width };
            total += rule.panel(lo, hi, &mut f).map_err(QuadError::Integrand)?;
        }
        diff = (total - prev).abs();
        if diff < refinement.tolerance {
            return Ok(total);
        }
        prev = total;
    }
    Err(QuadError::NotConverged { diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(x: f64) -> Result<f64, Infallible> {
        Ok(x)
    }

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        for n in [1, 2, 5, 16, 31] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "order {n}: {s}");
            for (x, y) in r.nodes().iter().zip(r.nodes().iter().rev()) {
                assert!((x + y).abs() < 1e-15);
            }
        }
        let two = GaussLegendre::new(2);
        assert!((two.nodes()[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let r = GaussLegendre::new(16);
        for k in 0..32 {
            let got = r.panel(-1.0, 1.0, &mut |x: f64| ok(x.powi(k))).unwrap();
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn refinement_converges_on_smooth_integrands() {
        let r = GaussLegendre::new(16);
        let cfg = Refinement {
            tolerance: 1e-12,
            max_depth: 20,
        };
        let got = integrate(&r, 0.0, PI, cfg, |x| ok(x.sin())).unwrap();
        assert!((got - 2.0).abs() < 1e-13);
        let got = integrate(&r, 1.0, 3.0, cfg, |x| ok(1.0 / x)).unwrap();
        assert!((got - 3f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn reports_non_convergence_and_integrand_errors() {
        let r = GaussLegendre::new(2);
        let cfg = Refinement {
            tolerance: 1e-300,
            max_depth: 3,
        };
        assert!(matches!(
            integrate(&r, 0.0, 1.0, cfg, |x| ok(x.sqrt())),
            Err(QuadError::NotConverged { .. })
        ));
        let err = integrate(
            &r,
            0.0,
            1.0,
            cfg,
            |x| if x > 0.5 { Err("bad") } else { Ok(x) },
        );
        assert_eq!(err, Err(QuadError::Integrand("bad")));
    }
}
