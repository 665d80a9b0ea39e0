//! Relator expressions with symbolic exponents, as used by the example
//! data: `x1^-1*(x2*x3)^(gamma-1)*x3^2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hexatangle::{LinearCell, Param};
use crate::lex::Cursor;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    Linear(LinearCell),
}

impl Exponent {
    fn eval(&self, a: &BTreeMap<Param, i64>) -> Result<i64> {
        match self {
            Exponent::Int(k) => Ok(*k),
            Exponent::Linear(c) => c.value(1, a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Generator(u32),
    Product(Vec<Expr>),
    Power(Box<Expr>, Exponent),
}

impl Expr {
    pub fn vars(&self) -> BTreeSet<Param> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Param>) {
        match self {
            Expr::Generator(_) => {}
            Expr::Product(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Expr::Power(b, e) => {
                b.collect_vars(out);
                if let Exponent::Linear(LinearCell { var: Some(v), .. }) = e {
                    out.insert(*v);
                }
            }
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn eval(&self, a: &BTreeMap<Param, i64>) -> Result<Word> {
        match self {
            Expr::Generator(g) => Ok(Word::generator(*g)),
            Expr::Product(fs) => {
                let mut w = Word::identity();
                for f in fs {
                    w = &w * &f.eval(a)?;
                }
                Ok(w)
            }
            Expr::Power(b, e) => Ok(b.eval(a)?.pow(e.eval(a)?)),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    /// `EXPR := FACTOR ("*" FACTOR)* | "1"`,
    /// `FACTOR := ("x" INT | "(" EXPR ")") ["^" (INT | "(" LINEAR ")")]`.
    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        if cur.eat('1') {
            cur.skip_ws();
            if cur.at_end() {
                return Ok(Expr::Product(Vec::new()));
            }
            return Err(cur.error("trailing input after `1`"));
        }
        let e = product(&mut cur)?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error("unexpected input"));
        }
        Ok(e)
    }
}

fn product(cur: &mut Cursor) -> Result<Expr> {
    let mut factors = vec![factor(cur)?];
    loop {
        cur.skip_ws();
        if !cur.eat('*') {
            break;
        }
        factors.push(factor(cur)?);
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        Expr::Product(factors)
    })
}

fn factor(cur: &mut Cursor) -> Result<Expr> {
    cur.skip_ws();
    let base = if cur.eat('(') {
        let e = product(cur)?;
        cur.skip_ws();
        cur.expect(')')?;
        e
    } else if cur.eat('x') {
        let at = cur.pos();
        let g = cur.unsigned()?;
        if g == 0 || g > u32::MAX as u64 {
            return Err(Error::parse(at, "generator index out of range"));
        }
        Expr::Generator(g as u32)
    } else {
        return Err(cur.error("expected `x<i>` or `(`"));
    };
    cur.skip_ws();
    if !cur.eat('^') {
        return Ok(base);
    }
    cur.skip_ws();
    let exp = if cur.eat('(') {
        let start = cur.pos();
        let inner = cur.rest().split(')').next().unwrap_or("");
        let cell: LinearCell = inner.parse().map_err(|e| match e {
            Error::Parse { position, message } => Error::parse(start + position, message),
            other => other,
        })?;
        if cell.pm {
            return Err(Error::parse(start, "`±` is not allowed in an exponent"));
        }
        for _ in inner.chars() {
            cur.bump();
        }
        cur.expect(')')?;
        match cell.var {
            None => Exponent::Int(cell.constant),
            Some(_) => Exponent::Linear(cell),
        }
    } else {
        Exponent::Int(cur.signed()?)
    };
    Ok(Expr::Power(Box::new(base), exp))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Generator(g) => write!(f, "x{g}"),
            Expr::Product(fs) if fs.is_empty() => f.write_str("1"),
            Expr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Expr::Power(b, e) => {
                match **b {
                    Expr::Product(_) => write!(f, "({b})")?,
                    _ => write!(f, "{b}")?,
                }
                match e {
                    Exponent::Int(k) => write!(f, "^{k}"),
                    Exponent::Linear(c) => write!(f, "^({c})"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concrete_expression() {
        let e: Expr = "x2^-1*x3^-1*x2^-1".parse().unwrap();
        assert!(e.is_concrete());
        assert_eq!(
            e.eval(&BTreeMap::new()).unwrap().to_string(),
            "x2^-1*x3^-1*x2^-1"
        );
    }

    #[test]
    fn symbolic_exponent() {
        let e: Expr = "x1^-1*(x2*x3)^(gamma-1)".parse().unwrap();
        assert_eq!(e.vars(), [Param::Gamma].into());
        let a = [(Param::Gamma, 3)].into();
        assert_eq!(e.eval(&a).unwrap().to_string(), "x1^-1*x2*x3*x2*x3");
        let a = [(Param::Gamma, 0)].into();
        assert_eq!(e.eval(&a).unwrap().to_string(), "x1^-1*x3^-1*x2^-1");
        assert!(e.eval(&BTreeMap::new()).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "x1^-1*(x2*x3)^(-gamma+1)",
            "x2^(-beta)",
            "(x2^-1*x3)^2*x1",
            "1",
        ] {
            let e: Expr = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!("x0".parse::<Expr>().is_err());
        assert!("x1^(±1)".parse::<Expr>().is_err());
        assert!("(x1*x2".parse::<Expr>().is_err());
        assert!("x1**x2".parse::<Expr>().is_err());
    }
}
