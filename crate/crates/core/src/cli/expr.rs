//! Arithmetic expressions in `x` for potentials given on the command line.
//!
//! Grammar: `expr = term (('+'|'-') term)*`, `term = unary (('*'|'/') unary)*`,
//! `unary = '-' unary | power`, `power = atom ('^' unary)?`,
//! `atom = number | 'x' | 'pi' | func '(' expr (',' expr)? ')' | '(' expr ')'`.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{BasicPotential, Grid};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Pow,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "pow" => Func::Pow,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let toks = tokenize(src)?;
        let mut p = Parser { toks: &toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != toks.len() {
            return Err(Error::Config(format!("unexpected {} in {src:?}", toks[p.pos])));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    Op::Add => a + b,
                    Op::Sub => a - b,
                    Op::Mul => a * b,
                    Op::Div => a / b,
                    Op::Pow => a.powf(b),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x);
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Log => a.ln(),
                    Func::Pow => a.powf(args[1].eval(x)),
                }
            }
        }
    }

    /// Samples onto `grid`; every value must be finite.
    pub fn sample(&self, grid: &Grid) -> Result<BasicPotential> {
        let values = grid.field(|x| self.eval(x));
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "expression is not finite at x = {}",
                grid.nodes()[i]
            )));
        }
        BasicPotential::new(grid, values)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Sym(c) => write!(f, "{c:?}"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| Error::Config(format!("bad number {s:?}")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Config(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Sym(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_sym() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Config(match self.toks.get(self.pos) {
                Some(t) => format!("expected {c:?}, found {t}"),
                None => format!("expected {c:?} at end of expression"),
            }))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek_sym() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_sym() == Some('^') {
            self.pos += 1;
            // right associative; binds tighter than unary minus on the left
            let exp = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Config("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "x" => Ok(Expr::X),
            Tok::Ident(name) if name == "pi" => Ok(Expr::Num(std::f64::consts::PI)),
            Tok::Ident(name) => {
                let f = Func::lookup(&name)
                    .ok_or_else(|| Error::Config(format!("unknown identifier {name:?}")))?;
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.peek_sym() == Some(',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                if args.len() != f.arity() {
                    return Err(Error::Config(format!(
                        "{name} takes {} argument(s), got {}",
                        f.arity(),
                        args.len()
                    )));
                }
                Ok(Expr::Call(f, args))
            }
            t => Err(Error::Config(format!("unexpected {t}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        Expr::parse(s).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1+2*3", 0.0), 7.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("0.3*(1-x^2)", 0.5), 0.3 * 0.75);
        assert_eq!(ev("2e-1*x", 1.0), 0.2);
    }

    #[test]
    fn functions() {
        let x = 0.37;
        assert_eq!(ev("sin(x)+cos(x)", x), x.sin() + x.cos());
        assert_eq!(ev("log(exp(x))", x), x.exp().ln());
        assert_eq!(ev("pow(x, 3)", x), x.powf(3.0));
        assert_eq!(ev("pi", 0.0), std::f64::consts::PI);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1+", "(x", "foo(x)", "pow(x)", "x $ 2", "y", "sin x"] {
            assert!(Expr::parse(bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn sampling_checks_finiteness() {
        let g = Grid::new(16).unwrap();
        assert!(Expr::parse("log(x)").unwrap().sample(&g).is_err());
        let p = Expr::parse("0.1*x").unwrap().sample(&g).unwrap();
        assert!((p.values()[3] - 0.1 * g.nodes()[3]).abs() < 1e-16);
    }
}
