//! Module expressions such as `omega^1(D(2)) + omega^2(D(1))`.
//!
//! ```text
//! expr   := factor ("+" factor)*
//! factor := "omega^" int "(" expr ")" | atom
//! atom   := ("S"|"P"|"D"|"Q") "(" int ")" | "radq(" int ")" | ident "(" args ")"
//! ```
//!
//! `+` is the direct sum. Indices are 1-based. The named atoms are
//! `theta(i)`, `regular()` and `mt(t)` (the `ex54` family).

use std::fmt;
use std::sync::Arc;

use crate::algebra::PathAlgebra;
use crate::corpus::corpus_mt;
use crate::error::{Error, Result};
use crate::module::{direct_sum, Module};
use crate::strat::{standard_modules, Epss, StratSystem};
use crate::text::Cursor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Simple(usize),
    Projective(usize),
    Standard(usize),
    ExtProjective(usize),
    RadQuotient(usize),
    Named(String, Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    Sum(Vec<ModuleExpr>),
    Omega(usize, Box<ModuleExpr>),
    Atom(Atom),
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::Sum(parts) => {
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            ModuleExpr::Omega(k, e) => write!(f, "omega^{k}({e})"),
            ModuleExpr::Atom(a) => match a {
                Atom::Simple(i) => write!(f, "S({i})"),
                Atom::Projective(i) => write!(f, "P({i})"),
                Atom::Standard(i) => write!(f, "D({i})"),
                Atom::ExtProjective(i) => write!(f, "Q({i})"),
                Atom::RadQuotient(k) => write!(f, "radq({k})"),
                Atom::Named(name, args) => {
                    let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    write!(f, "{name}({})", args.join(", "))
                }
            },
        }
    }
}

fn signed_int(cur: &mut Cursor<'_>) -> Result<i64> {
    let neg = cur.eat('-');
    let v = cur.int().ok_or_else(|| cur.error("integer"))?;
    let v = i64::try_from(v).map_err(|_| cur.error("integer below 2^63"))?;
    Ok(if neg { -v } else { v })
}

fn index(cur: &mut Cursor<'_>) -> Result<usize> {
    let v = cur.int().ok_or_else(|| cur.error("index"))?;
    usize::try_from(v).map_err(|_| cur.error("smaller index"))
}

fn expect(cur: &mut Cursor<'_>, c: char) -> Result<()> {
    if cur.eat(c) {
        Ok(())
    } else {
        Err(cur.error(&format!("`{c}`")))
    }
}

fn parse_sum(cur: &mut Cursor<'_>) -> Result<ModuleExpr> {
    let mut parts = vec![parse_factor(cur)?];
    while cur.eat('+') {
        parts.push(parse_factor(cur)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        ModuleExpr::Sum(parts)
    })
}

fn parse_factor(cur: &mut Cursor<'_>) -> Result<ModuleExpr> {
    cur.skip_ws();
    let start = cur.pos;
    let name = cur.ident().ok_or_else(|| cur.error("module atom"))?;
    if name == "omega" {
        expect(cur, '^')?;
        let k = index(cur)?;
        expect(cur, '(')?;
        let inner = parse_sum(cur)?;
        expect(cur, ')')?;
        return Ok(ModuleExpr::Omega(k, Box::new(inner)));
    }
    expect(cur, '(')?;
    let atom = match name {
        "S" | "P" | "D" | "Q" => {
            let i = index(cur)?;
            if i == 0 {
                cur.pos = start;
                return Err(cur.error("1-based index"));
            }
            match name {
                "S" => Atom::Simple(i),
                "P" => Atom::Projective(i),
                "D" => Atom::Standard(i),
                _ => Atom::ExtProjective(i),
            }
        }
        "radq" => Atom::RadQuotient(index(cur)?),
        _ => {
            let mut args = Vec::new();
            cur.skip_ws();
            if cur.peek() != Some(')') {
                args.push(signed_int(cur)?);
                while cur.eat(',') {
                    args.push(signed_int(cur)?);
                }
            }
            Atom::Named(name.to_string(), args)
        }
    };
    expect(cur, ')')?;
    Ok(ModuleExpr::Atom(atom))
}

/// Parses a one-line expression; errors report line 1.
pub fn parse_module_expr(text: &str) -> Result<ModuleExpr> {
    let mut cur = Cursor::new(1, text);
    let e = parse_sum(&mut cur)?;
    cur.finish()?;
    Ok(e)
}

pub struct ExprContext<'a> {
    pub algebra: &'a Arc<PathAlgebra>,
    pub system: Option<&'a StratSystem>,
    pub epss: Option<&'a Epss>,
}

impl<'a> ExprContext<'a> {
    pub fn new(algebra: &'a Arc<PathAlgebra>) -> Self {
        ExprContext {
            algebra,
            system: None,
            epss: None,
        }
    }
}

fn in_range(i: usize, max: usize) -> Result<usize> {
    if i >= 1 && i <= max {
        Ok(i - 1)
    } else {
        Err(Error::IndexOutOfRange { index: i, max })
    }
}

fn arity(name: &str, args: &[i64], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::InvalidModule(format!("{name} takes {n} argument(s), got {}", args.len())))
    }
}

pub fn eval_module_expr(expr: &ModuleExpr, ctx: &ExprContext<'_>) -> Result<Module> {
    let alg = ctx.algebra;
    let n = alg.vertex_count();
    match expr {
        ModuleExpr::Sum(parts) => {
            let ms = parts.iter().map(|p| eval_module_expr(p, ctx)).collect::<Result<Vec<_>>>()?;
            Ok(direct_sum(alg, &ms))
        }
        ModuleExpr::Omega(k, inner) => Ok(eval_module_expr(inner, ctx)?.syzygy(*k)),
        ModuleExpr::Atom(atom) => match atom {
            Atom::Simple(i) => Module::simple(alg, in_range(*i, n)?),
            Atom::Projective(i) => Module::projective(alg, in_range(*i, n)?),
            Atom::Standard(i) => {
                let v = in_range(*i, n)?;
                Ok(standard_modules(alg).swap_remove(v))
            }
            Atom::ExtProjective(i) => {
                let epss = ctx
                    .epss
                    .ok_or_else(|| Error::MissingContext("Q(i) needs an Ext-projective system".into()))?;
                Ok(epss.q[in_range(*i, epss.q.len())?].clone())
            }
            Atom::RadQuotient(k) => Ok(Module::radical_power_quotient(alg, *k)),
            Atom::Named(name, args) => match name.as_str() {
                "theta" => {
                    arity(name, args, 1)?;
                    let sys = ctx
                        .system
                        .ok_or_else(|| Error::MissingContext("theta(i) needs a stratifying system".into()))?;
                    let i = usize::try_from(args[0]).unwrap_or(0);
                    Ok(sys.theta[in_range(i, sys.size())?].clone())
                }
                "regular" => {
                    arity(name, args, 0)?;
                    Ok(Module::regular(alg))
                }
                "mt" => {
                    arity(name, args, 1)?;
                    corpus_mt(alg, args[0])
                }
                _ => Err(Error::UnknownCorpusName(name.clone())),
            },
        },
    }
}

/// Parses and evaluates in one step.
pub fn module_from_str(text: &str, ctx: &ExprContext<'_>) -> Result<Module> {
    let e = parse_module_expr(text)?;
    Ok(eval_module_expr(&e, ctx)?.labeled(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_display() {
        let e = parse_module_expr("omega^1(D(2)) + omega^2( D(1) )+mt(-3)").unwrap();
        assert_eq!(e.to_string(), "omega^1(D(2)) + omega^2(D(1)) + mt(-3)");
        assert_eq!(parse_module_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn syntax_errors() {
        let err = parse_module_expr("S(1) +").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 7, .. }), "{err:?}");
        assert!(matches!(parse_module_expr("omega(S(1))"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_module_expr("S(0)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_module_expr("S(1) S(2)"), Err(Error::Syntax { .. })));
    }
}
