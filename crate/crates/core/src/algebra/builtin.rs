//! Standard structure-constant tables, addressed by names such as
//! `direct_sum(complex, reals(1))`.

use num_traits::One;

use super::{Algebra, StructureConstants};
use crate::error::Error;
use crate::exact::rational::{rat, Rational};

/// Builtins used by the invariance and attribute test suites.
pub const CORPUS: [&str; 10] = [
    "reals(1)",
    "reals(2)",
    "reals(3)",
    "reals(4)",
    "complex",
    "dual",
    "quaternion",
    "matrix(2)",
    "upper_triangular(2)",
    "cyclic_group_algebra(3)",
];

const MAX_DIM: usize = 16;

#[derive(Debug, PartialEq)]
enum Expr {
    Int(usize),
    Call(String, Vec<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a name or integer"));
        }
        let word = &rest[..len];
        self.pos += len;
        if word.bytes().all(|b| b.is_ascii_digit()) {
            return word
                .parse()
                .map(Expr::Int)
                .map_err(|_| self.err("integer too large"));
        }
        let mut args = Vec::new();
        if self.eat('(') {
            loop {
                args.push(self.expr()?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.err("expected ',' or ')'"));
                }
            }
        }
        Ok(Expr::Call(word.to_string(), args))
    }
}

fn parse(name: &str) -> Result<Expr, Error> {
    let mut p = Parser { src: name, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != name.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Builds the named algebra.
pub fn builtin(name: &str) -> Result<Algebra, Error> {
    let expr = parse(name)?;
    let c = build(&expr)?;
    Algebra::new(canonical_name(&expr), c)
}

fn canonical_name(e: &Expr) -> String {
    match e {
        Expr::Int(k) => k.to_string(),
        Expr::Call(f, args) if args.is_empty() => f.clone(),
        Expr::Call(f, args) => format!(
            "{f}({})",
            args.iter()
                .map(canonical_name)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn int_arg(f: &str, args: &[Expr]) -> Result<usize, Error> {
    match args {
        [Expr::Int(k)] if *k >= 1 => Ok(*k),
        _ => Err(Error::InvalidParams(format!(
            "{f} takes one positive integer"
        ))),
    }
}

fn check_dim(f: &str, n: usize) -> Result<usize, Error> {
    if n > MAX_DIM {
        return Err(Error::InvalidParams(format!(
            "{f} has dimension {n}, the limit is {MAX_DIM}"
        )));
    }
    Ok(n)
}

fn build(e: &Expr) -> Result<StructureConstants, Error> {
    let Expr::Call(f, args) = e else {
        return Err(Error::InvalidParams(
            "expected an algebra, found an integer".into(),
        ));
    };
    let no_args = || {
        if args.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("{f} takes no parameters")))
        }
    };
    match f.as_str() {
        "reals" => {
            let k = check_dim(f, int_arg(f, args)?)?;
            Ok(reals(k))
        }
        "complex" => {
            no_args()?;
            Ok(table(
                2,
                &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, -1)],
            ))
        }
        "dual" => {
            no_args()?;
            Ok(table(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]))
        }
        "quaternion" => {
            no_args()?;
            Ok(quaternion())
        }
        "matrix" => {
            let k = int_arg(f, args)?;
            check_dim(f, k.saturating_mul(k))?;
            Ok(matrix(k))
        }
        "upper_triangular" => {
            let k = int_arg(f, args)?;
            check_dim(f, k.saturating_mul(k + 1) / 2)?;
            Ok(upper_triangular(k))
        }
        "cyclic_group_algebra" => {
            let m = check_dim(f, int_arg(f, args)?)?;
            Ok(cyclic(m))
        }
        "direct_sum" => match args.as_slice() {
            [a, b] => {
                let (a, b) = (build(a)?, build(b)?);
                check_dim(f, a.dim() + b.dim())?;
                Ok(direct_sum(&a, &b))
            }
            _ => Err(Error::InvalidParams("direct_sum takes two algebras".into())),
        },
        _ => Err(Error::UnknownBuiltin(f.clone())),
    }
}

fn table(n: usize, entries: &[(usize, usize, usize, i64)]) -> StructureConstants {
    let mut c = StructureConstants::zeros(n);
    for &(i, j, k, v) in entries {
        c.set(i, j, k, rat(v));
    }
    c
}

fn reals(k: usize) -> StructureConstants {
    let mut c = StructureConstants::zeros(k);
    for i in 0..k {
        c.set(i, i, i, Rational::one());
    }
    c
}

fn quaternion() -> StructureConstants {
    // basis 1, i, j, k
    let mut c = StructureConstants::zeros(4);
    for a in 0..4 {
        c.set(0, a, a, rat(1));
        c.set(a, 0, a, rat(1));
    }
    for a in 1..4 {
        c.set(a, a, 0, rat(-1));
    }
    for (a, b, p) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        c.set(a, b, p, rat(1));
        c.set(b, a, p, rat(-1));
    }
    c
}

fn matrix(k: usize) -> StructureConstants {
    // E_ab at index a*k + b; E_ab E_bd = E_ad
    let mut c = StructureConstants::zeros(k * k);
    for a in 0..k {
        for b in 0..k {
            for d in 0..k {
                c.set(a * k + b, b * k + d, a * k + d, rat(1));
            }
        }
    }
    c
}

fn upper_triangular(k: usize) -> StructureConstants {
    let idx: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
    let pos = |a: usize, b: usize| idx.iter().position(|&p| p == (a, b)).expect("upper entry");
    let mut c = StructureConstants::zeros(idx.len());
    for (i, &(a, b)) in idx.iter().enumerate() {
        for d in b..k {
            c.set(i, pos(b, d), pos(a, d), rat(1));
        }
    }
    c
}

fn cyclic(m: usize) -> StructureConstants {
    let mut c = StructureConstants::zeros(m);
    for a in 0..m {
        for b in 0..m {
            c.set(a, b, (a + b) % m, rat(1));
        }
    }
    c
}

fn direct_sum(a: &StructureConstants, b: &StructureConstants) -> StructureConstants {
    let (na, nb) = (a.dim(), b.dim());
    let mut c = StructureConstants::zeros(na + nb);
    for i in 0..na {
        for j in 0..na {
            for k in 0..na {
                c.set(i, j, k, a.get(i, j, k).clone());
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            for k in 0..nb {
                c.set(na + i, na + j, na + k, b.get(i, j, k).clone());
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid() {
        for name in CORPUS {
            let a = builtin(name).unwrap();
            assert_eq!(a.name(), name);
        }
    }

    #[test]
    fn quaternion_table() {
        let q = builtin("quaternion").unwrap();
        let e = |i: usize| {
            let mut v = vec![rat(0); 4];
            v[i] = rat(1);
            v
        };
        let neg_one = vec![rat(-1), rat(0), rat(0), rat(0)];
        for i in 1..4 {
            assert_eq!(q.mul(&e(i), &e(i)), neg_one);
        }
        assert_eq!(q.mul(&e(1), &e(2)), e(3));
        assert_eq!(q.mul(&e(2), &e(1)), vec![rat(0), rat(0), rat(0), rat(-1)]);
        assert_eq!(q.unit(), e(0).as_slice());
    }

    #[test]
    fn units() {
        let ones = |n| vec![rat(1); n];
        assert_eq!(builtin("reals(2)").unwrap().unit(), ones(2).as_slice());
        assert_eq!(
            builtin("matrix(2)").unwrap().unit(),
            &[rat(1), rat(0), rat(0), rat(1)]
        );
        assert_eq!(
            builtin("upper_triangular(2)").unwrap().unit(),
            &[rat(1), rat(0), rat(1)]
        );
        assert_eq!(
            builtin("cyclic_group_algebra(3)").unwrap().unit(),
            &[rat(1), rat(0), rat(0)]
        );
    }

    #[test]
    fn nested_direct_sum() {
        let a = builtin("direct_sum(complex, reals(1))").unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.unit(), &[rat(1), rat(0), rat(1)]);
        assert_eq!(a.name(), "direct_sum(complex, reals(1))");
        let b = builtin(" direct_sum( dual ,direct_sum(reals(1),complex))").unwrap();
        assert_eq!(b.dim(), 5);
    }

    #[test]
    fn bad_names() {
        assert!(matches!(builtin("octonion"), Err(Error::UnknownBuiltin(_))));
        assert!(matches!(builtin("reals(0)"), Err(Error::InvalidParams(_))));
        assert!(matches!(builtin("reals"), Err(Error::InvalidParams(_))));
        assert!(matches!(
            builtin("complex(2)"),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(builtin("matrix(5)"), Err(Error::InvalidParams(_))));
        assert!(matches!(
            builtin("direct_sum(complex)"),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(builtin("reals(2"), Err(Error::Parse(_))));
        assert!(matches!(builtin("reals(2) x"), Err(Error::Parse(_))));
    }
}
