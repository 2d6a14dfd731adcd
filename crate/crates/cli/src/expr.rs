//! Function expressions: a catalog name or one of `add(f, g)`, `mul(f, g)`,
//! `scale(f, s)` and `deriv(s)`. Arguments may themselves be expressions.

use asymprod::func_catalog::{combine_add, combine_mul, derivative_of_s, lookup, scale_module};
use asymprod::FunctionSpec;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionExpr {
    Name(String),
    Add(Box<FunctionExpr>, Box<FunctionExpr>),
    Mul(Box<FunctionExpr>, Box<FunctionExpr>),
    Scale(Box<FunctionExpr>, Box<FunctionExpr>),
    Deriv(Box<FunctionExpr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> CliError {
        CliError::Config(format!("function `{}`: {msg} at offset {}", self.src, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, ch: char) -> Result<(), CliError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{ch}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str, CliError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn expr(&mut self) -> Result<FunctionExpr, CliError> {
        let name = self.ident()?;
        self.skip_ws();
        if !self.src[self.pos..].starts_with('(') {
            return Ok(FunctionExpr::Name(name.to_owned()));
        }
        self.eat('(')?;
        let first = Box::new(self.expr()?);
        let node = if name == "deriv" {
            FunctionExpr::Deriv(first)
        } else {
            self.eat(',')?;
            let second = Box::new(self.expr()?);
            match name {
                "add" => FunctionExpr::Add(first, second),
                "mul" => FunctionExpr::Mul(first, second),
                "scale" => FunctionExpr::Scale(first, second),
                _ => return Err(self.error(&format!("unknown combinator `{name}`"))),
            }
        };
        self.eat(')')?;
        Ok(node)
    }
}

pub fn parse_function_expr(src: &str) -> Result<FunctionExpr, CliError> {
    let mut parser = Parser { src, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != src.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(expr)
}

impl FunctionExpr {
    pub fn build(&self) -> Result<FunctionSpec, CliError> {
        Ok(match self {
            FunctionExpr::Name(name) => {
                lookup(name).ok_or_else(|| CliError::Config(format!("unknown function `{name}`")))?
            }
            FunctionExpr::Add(f, g) => combine_add(&f.build()?, &g.build()?)?,
            FunctionExpr::Mul(f, g) => combine_mul(&f.build()?, &g.build()?)?,
            FunctionExpr::Scale(f, s) => scale_module(&f.build()?, &s.build()?)?,
            FunctionExpr::Deriv(s) => derivative_of_s(&s.build()?)?,
        })
    }
}

/// Parses and builds in one step.
pub fn resolve_function(src: &str) -> Result<FunctionSpec, CliError> {
    parse_function_expr(src)?.build()
}
