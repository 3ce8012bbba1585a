use std::fs;
use std::io::Read;

use serde_json::{json, Map, Value};
use uncurl_core::algebra::io::{algebra_to_json, AlgebraFile};
use uncurl_core::euclid::{
    directional_derivative_check, length_identity_residuals, pythagoras_demo,
};
use uncurl_core::exact::{parse_rational, Rational, RationalMatrix};
use uncurl_core::uncurl::{
    distinguish_reports, invariant_report, is_normalized, is_uncurling, normalized_family,
    uncurling_space, verify_uncurling, Comparison, NormalizedFamily, SymMetric,
};
use uncurl_core::unorm::{make_evaluator, PathSpec, QuadratureConfig};
use uncurl_core::{builtin, Algebra, Error};

use crate::report::{self, float, floats};

/// Residual bounds applied by `check`.
const HOMOGENEITY_TOL: f64 = 1e-7;
const INVERSION_TOL: f64 = 1e-7;
const GRADIENT_TOL: f64 = 1e-5;
const SCALAR_PRODUCT_TOL: f64 = 1e-4;
const RECOVERY_TOL: f64 = 1e-4;
const CURL_TOL: f64 = 1e-6;
const SPREAD: f64 = 0.3;

pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NOT_NORMALIZED: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub quadrature: QuadratureConfig,
    pub fd_step: f64,
    pub seed: u64,
}

impl Settings {
    fn to_json(self) -> Value {
        json!({
            "tolerance": float(self.quadrature.tolerance),
            "order": self.quadrature.order,
            "max_depth": self.quadrature.max_depth,
            "fd_step": float(self.fd_step),
            "seed": self.seed,
        })
    }
}

/// A failed command: the exit code, the error, and whatever was computed before it.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    pub partial: Map<String, Value>,
}

impl Failure {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            kind,
            message: message.into(),
            partial: Map::new(),
        }
    }

    fn with(mut self, partial: Map<String, Value>) -> Self {
        self.partial = partial;
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_numeric() {
            EXIT_NUMERIC
        } else {
            match e {
                Error::NotNormalized(_) => EXIT_NOT_NORMALIZED,
                Error::UnknownBuiltin(_) | Error::InvalidParams(_) => EXIT_USAGE,
                _ => EXIT_VALIDATION,
            }
        };
        Failure::new(code, error_kind(&e), e.to_string())
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::ArityMismatch { .. } | Error::IndexOutOfRange { .. } => "internal",
        Error::NotSquare { .. } | Error::Shape(_) => "shape",
        Error::Singular | Error::SingularTransform => "singular",
        Error::NoUnit => "no_unit",
        Error::InvalidAlgebra(_) => "invalid_algebra",
        Error::UnknownBuiltin(_) => "unknown_builtin",
        Error::InvalidParams(_) => "invalid_params",
        Error::NonUnit { .. } => "non_unit",
        Error::NotNormalized(_) => "not_normalized",
        Error::PathThroughNonUnit { .. } => "path_through_non_unit",
        Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
        Error::NegativeForm { .. } => "negative_form",
        Error::NotSemidefinite { .. } => "not_semidefinite",
        Error::SamplingExhausted { .. } => "sampling_exhausted",
        Error::Io(_) => "io",
    }
}

pub type Outcome = Result<Map<String, Value>, Failure>;

pub fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::new(EXIT_VALIDATION, "io", format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn load(path: &str) -> Result<Algebra, Failure> {
    Ok(AlgebraFile::parse(&read_input(path)?)?.into_algebra()?)
}

fn header(a: &Algebra) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("algebra".into(), a.name().into());
    m.insert("dim".into(), a.dim().into());
    m
}

pub fn validate(path: &str) -> Outcome {
    let file = AlgebraFile::parse(&read_input(path)?)?;
    let v = file.validate();
    let mut m = Map::new();
    m.insert("algebra".into(), file.name.clone().into());
    m.insert("dim".into(), v.dim.into());
    m.insert(
        "associativity_witness".into(),
        v.associativity_witness
            .map_or(Value::Null, |w| w.to_vec().into()),
    );
    m.insert(
        "unit".into(),
        v.unit.as_deref().map_or(Value::Null, report::rationals),
    );
    m.insert("valid".into(), v.is_valid().into());
    if let Some([i, j, k, l]) = v.associativity_witness {
        let msg = format!("(e{i} e{j}) e{k} != e{i} (e{j} e{k}) in component {l}");
        return Err(Failure::new(EXIT_VALIDATION, "not_associative", msg).with(m));
    }
    if v.unit.is_none() {
        return Err(Failure::from(Error::NoUnit).with(m));
    }
    if let Err(e) = file.into_algebra() {
        return Err(Failure::from(e).with(m));
    }
    Ok(m)
}

pub fn repinfo(path: &str) -> Outcome {
    let a = load(path)?;
    let n = a.dim();
    let r = a.left_regular();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| report::poly(r.get(i, j))).collect()))
        .collect();
    let inv = a.symbolic_inverse();
    let mut m = header(&a);
    m.insert("unit".into(), report::rationals(a.unit()));
    m.insert("left_regular".into(), Value::Array(rows));
    m.insert("usual_norm".into(), report::poly(a.usual_norm_poly()));
    m.insert("unit_norm_squared".into(), a.unit_norm_squared().into());
    m.insert("diagonal_form_rank".into(), a.diagonal_form_rank().into());
    m.insert(
        "symbolic_inverse".into(),
        json!({
            "numerator": inv.numerator.iter().map(report::poly).collect::<Vec<_>>(),
            "denominator": report::poly(&inv.denominator),
        }),
    );
    Ok(m)
}

pub fn uncurl(path: &str) -> Outcome {
    let a = load(path)?;
    let space = uncurling_space(&a);
    let mut m = header(&a);
    m.insert("dimension".into(), space.dimension().into());
    m.insert(
        "basis".into(),
        Value::Array(space.basis.iter().map(report::metric).collect()),
    );
    Ok(m)
}

pub fn normalize(path: &str) -> Outcome {
    let a = load(path)?;
    let mut m = header(&a);
    m.insert("unit_norm_squared".into(), a.unit_norm_squared().into());
    match normalized_family(&a) {
        NormalizedFamily::Family {
            particular,
            directions,
        } => {
            m.insert("consistent".into(), true.into());
            m.insert("dimension".into(), directions.len().into());
            m.insert("particular".into(), report::metric(&particular));
            m.insert(
                "directions".into(),
                Value::Array(directions.iter().map(report::metric).collect()),
            );
            Ok(m)
        }
        NormalizedFamily::Inconsistent => {
            m.insert("consistent".into(), false.into());
            Err(Failure::new(
                EXIT_NOT_NORMALIZED,
                "inconsistent",
                "no uncurling metric satisfies the normalization",
            )
            .with(m))
        }
    }
}

pub fn invariants(path: &str) -> Outcome {
    let a = load(path)?;
    let mut m = header(&a);
    m.insert(
        "invariants".into(),
        report::invariants(&invariant_report(&a)),
    );
    Ok(m)
}

pub fn compare(first: &str, second: &str) -> Outcome {
    let a = load(first)?;
    let b = load(second)?;
    let (ra, rb) = (invariant_report(&a), invariant_report(&b));
    let mut m = Map::new();
    match distinguish_reports(&ra, &rb) {
        Comparison::Distinguishable(w) => {
            m.insert("result".into(), "distinguishable".into());
            m.insert("witness".into(), w.into());
        }
        Comparison::Inconclusive => {
            m.insert("result".into(), "inconclusive".into());
            m.insert("witness".into(), Value::Null);
        }
    }
    m.insert(
        "first".into(),
        json!({ "algebra": a.name(), "invariants": report::invariants(&ra) }),
    );
    m.insert(
        "second".into(),
        json!({ "algebra": b.name(), "invariants": report::invariants(&rb) }),
    );
    Ok(m)
}

fn parse_number(text: &str) -> Result<f64, Failure> {
    let t = text.trim();
    if let Ok(x) = t.parse::<f64>() {
        if x.is_finite() {
            return Ok(x);
        }
    }
    parse_rational(t)
        .map(|r| uncurl_core::exact::rational::to_f64(&r))
        .map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                "invalid_params",
                format!("not a number: {text:?}"),
            )
        })
}

pub fn parse_point(text: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let v = text
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != dim {
        return Err(Failure::new(
            EXIT_USAGE,
            "invalid_params",
            format!("point {text:?} has {} coordinates, expected {dim}", v.len()),
        ));
    }
    Ok(v)
}

fn rational_json(v: &Value) -> Result<Rational, Error> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

fn metric_from_json(v: &Value) -> Result<SymMetric, Error> {
    let v = match v {
        Value::Object(o) => o
            .get("metric")
            .or_else(|| o.get("particular"))
            .ok_or_else(|| Error::Parse("metric object needs a \"metric\" field".into()))?,
        other => other,
    };
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("metric must be an array of rows".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("metric rows must be arrays".into()))?
                .iter()
                .map(rational_json)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SymMetric::new(RationalMatrix::from_rows(rows)?)
}

/// `canonical`, `family:c1,c2,...` (canonical plus a combination of the family
/// directions), a JSON matrix, or a file holding one.
pub fn resolve_metric(a: &Algebra, spec: &str) -> Result<SymMetric, Failure> {
    let family = || match normalized_family(a) {
        NormalizedFamily::Family {
            particular,
            directions,
        } => Ok((particular, directions)),
        NormalizedFamily::Inconsistent => Err(Failure::new(
            EXIT_NOT_NORMALIZED,
            "inconsistent",
            "the algebra has no normalized uncurling metric",
        )),
    };
    if spec == "canonical" {
        return Ok(family()?.0);
    }
    if let Some(coeffs) = spec.strip_prefix("family:") {
        let (p, dirs) = family()?;
        let c = coeffs
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::new(EXIT_USAGE, "invalid_params", e.to_string()))?;
        if c.len() != dirs.len() {
            return Err(Failure::new(
                EXIT_USAGE,
                "invalid_params",
                format!(
                    "family has {} directions, got {} coefficients",
                    dirs.len(),
                    c.len()
                ),
            ));
        }
        let mut m = p.matrix().clone();
        for (ci, d) in c.iter().zip(&dirs) {
            m = m.add(&d.matrix().scale(ci))?;
        }
        return Ok(SymMetric::new(m)?);
    }
    let text = if spec.trim_start().starts_with('[') || spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        read_input(spec)?
    };
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::from(Error::Parse(format!("metric is not valid JSON: {e}"))))?;
    Ok(metric_from_json(&v)?)
}

pub struct UnormArgs<'a> {
    pub file: &'a str,
    pub metric: &'a str,
    pub point: &'a str,
    pub path: &'a [String],
    pub alpha: f64,
}

pub fn unorm(args: UnormArgs<'_>, settings: Settings) -> Outcome {
    let a = load(args.file)?;
    let l = resolve_metric(&a, args.metric)?;
    let s = parse_point(args.point, a.dim())?;
    let mut waypoints = vec![a.unit_f64()];
    for w in args.path {
        waypoints.push(parse_point(w, a.dim())?);
    }
    waypoints.push(s.clone());
    let path = PathSpec::new(&a, waypoints)?;
    let e = make_evaluator(&a, &l, settings.quadrature)?;
    let mut m = header(&a);
    m.insert("metric".into(), report::metric(&l));
    m.insert("point".into(), floats(&s));
    m.insert(
        "path".into(),
        Value::Array(path.waypoints().iter().map(|w| floats(w)).collect()),
    );
    m.insert("config".into(), settings.to_json());
    let value = match e.eval(&s, Some(&path)) {
        Ok(v) => v,
        Err(err) => return Err(Failure::from(err).with(m)),
    };
    m.insert("value".into(), float(value));
    let h = settings.fd_step;
    let residuals = (|| {
        let g = e.check_gradient(&s, h)?;
        Ok::<_, Error>(json!({
            "alpha": float(args.alpha),
            "homogeneity": float(e.check_homogeneity(&s, args.alpha)?),
            "inversion": float(e.check_inversion(&s)?),
            "gradient": float(g.gradient),
            "scalar_product": float(g.scalar_product),
            "recovery": float(e.recovery_residual(&s, h)?),
        }))
    })();
    match residuals {
        Ok(r) => {
            m.insert("residuals".into(), r);
        }
        Err(err) => {
            // the value stands; residuals use straight paths that may hit non-units
            m.insert("residuals".into(), Value::Null);
            m.insert("residual_error".into(), err.to_string().into());
        }
    }
    Ok(m)
}

pub fn check(file: &str, metric: &str, trials: usize, settings: Settings) -> Outcome {
    let a = load(file)?;
    let l = resolve_metric(&a, metric)?;
    let mut m = header(&a);
    m.insert("metric".into(), report::metric(&l));
    m.insert("config".into(), settings.to_json());
    let uncurling = is_uncurling(&a, &l);
    let normalized = is_normalized(&a, &l);
    m.insert(
        "exact".into(),
        json!({ "uncurling": uncurling, "normalized": normalized }),
    );
    let e = match make_evaluator(&a, &l, settings.quadrature) {
        Ok(e) => e,
        Err(err) => return Err(Failure::from(err).with(m)),
    };
    let checks = (|| {
        let curl = verify_uncurling(&a, &l, 50, settings.seed)?;
        let sweep = e.attribute_sweep(trials, settings.seed, SPREAD, settings.fd_step)?;
        Ok::<_, Error>((curl, sweep))
    })();
    let (curl, sweep) = match checks {
        Ok(x) => x,
        Err(err) => return Err(Failure::from(err).with(m)),
    };
    let rows = [
        ("numeric_curl", curl, CURL_TOL),
        ("homogeneity", sweep.homogeneity, HOMOGENEITY_TOL),
        ("inversion", sweep.inversion, INVERSION_TOL),
        ("gradient", sweep.gradient, GRADIENT_TOL),
        ("scalar_product", sweep.scalar_product, SCALAR_PRODUCT_TOL),
        ("recovery", sweep.recovery, RECOVERY_TOL),
    ];
    let mut table = Map::new();
    let mut passed = true;
    for (name, value, tol) in rows {
        let ok = value < tol;
        passed &= ok;
        table.insert(
            name.into(),
            json!({ "max": float(value), "bound": float(tol), "pass": ok }),
        );
    }
    m.insert("trials".into(), trials.into());
    m.insert("residuals".into(), Value::Object(table));
    m.insert("usual_norm_gap".into(), float(sweep.usual_norm_gap));
    m.insert("passed".into(), passed.into());
    if passed {
        Ok(m)
    } else {
        Err(Failure::new(
            EXIT_NUMERIC,
            "residual_bound",
            "a residual exceeded its bound",
        )
        .with(m))
    }
}

pub fn pythagoras(paths: usize, points: usize, settings: Settings) -> Outcome {
    let h = settings.fd_step;
    let r = pythagoras_demo(settings.seed, paths, points, h)?;
    let plane: Vec<Value> = [[1.0, 0.0], [3.0, 4.0], [0.001, 0.0]]
        .iter()
        .map(|&s| {
            let (r1, r2) = length_identity_residuals(s, h);
            json!({ "point": floats(&s), "gradient_residual": float(r1), "unit_length_residual": float(r2) })
        })
        .collect();
    let directional: Vec<Value> = [
        [3.0, 4.0, 0.6, 0.8],
        [3.0, 4.0, -0.6, -0.8],
        [1.0, 0.0, 0.0, 1.0],
    ]
    .iter()
    .map(|&[x, y, u, v]| {
        let d = directional_derivative_check(x, y, u, v, h);
        json!({
            "point": floats(&[x, y]),
            "direction": floats(&[u, v]),
            "derivative": float(d.derivative),
            "linear": float(d.linear),
            "residual": float(d.residual),
        })
    })
    .collect();
    let mut m = Map::new();
    m.insert("config".into(), settings.to_json());
    m.insert("endpoint".into(), floats(&[3.0, 4.0]));
    m.insert("paths".into(), r.paths.into());
    m.insert("reconstructed".into(), floats(&r.reconstructed));
    m.insert("path_spread".into(), float(r.path_spread));
    m.insert("path_error".into(), float(r.path_error));
    m.insert("points".into(), r.points.into());
    m.insert("gradient_residual_max".into(), float(r.gradient_max));
    m.insert("unit_length_residual_max".into(), float(r.unit_length_max));
    m.insert("linearity_residual_max".into(), float(r.linearity_max));
    m.insert("plane_examples".into(), Value::Array(plane));
    m.insert("directional_examples".into(), Value::Array(directional));
    Ok(m)
}

pub fn emit_builtin(name: &str) -> Outcome {
    let a = builtin(name)?;
    match algebra_to_json(&a) {
        Value::Object(m) => Ok(m),
        _ => unreachable!("algebra files are objects"),
    }
}
