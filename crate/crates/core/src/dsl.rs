//! A small expression language for elements and tensors.
//!
//! ```text
//! sum    := ["+"|"-"] prod {("+"|"-") prod}
//! prod   := term ["#" term]
//! term   := factor {("*"|"/") factor}
//! factor := atom ["^" ["-"] integer]
//! atom   := integer | "q" | ("E"|"F"|"h"|"C") "[" ["-"] integer "]" | "k1" | "k2" | "(" sum ")"
//! ```
//!
//! Evaluation goes through the rewrite engine, so results are normal
//! ordered. Division is only by scalars.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::scalars::QScalar;
use crate::superalg::{random, Element, Letter, TensorElement};

#[derive(Clone, Debug, PartialEq)]
pub enum DslExpr {
    Int(BigInt),
    Q,
    Gen(Letter),
    Neg(Box<Spanned>),
    Add(Box<Spanned>, Box<Spanned>),
    Sub(Box<Spanned>, Box<Spanned>),
    Mul(Box<Spanned>, Box<Spanned>),
    Div(Box<Spanned>, Box<Spanned>),
    Pow(Box<Spanned>, i64),
    Tensor(Box<Spanned>, Box<Spanned>),
}

/// An expression node with the byte offset where it starts.
#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub pos: usize,
    pub expr: DslExpr,
}

/// The value of an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Element(Element),
    Tensor(TensorElement),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((
                pos,
                Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect()),
            ));
        } else if "+-*/^#()[]".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(err(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected '{c}'")))
        }
    }

    fn node(pos: usize, expr: DslExpr) -> Spanned {
        Spanned { pos, expr }
    }

    fn sum(&mut self) -> Result<Spanned> {
        let pos = self.pos();
        let mut acc = if self.eat('-') {
            Self::node(pos, DslExpr::Neg(Box::new(self.prod()?)))
        } else {
            self.eat('+');
            self.prod()?
        };
        loop {
            let p = self.pos();
            if self.eat('+') {
                acc = Self::node(p, DslExpr::Add(Box::new(acc), Box::new(self.prod()?)));
            } else if self.eat('-') {
                acc = Self::node(p, DslExpr::Sub(Box::new(acc), Box::new(self.prod()?)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&mut self) -> Result<Spanned> {
        let left = self.term()?;
        let p = self.pos();
        if self.eat('#') {
            let right = self.term()?;
            return Ok(Self::node(
                p,
                DslExpr::Tensor(Box::new(left), Box::new(right)),
            ));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Spanned> {
        let mut acc = self.factor()?;
        loop {
            let p = self.pos();
            if self.eat('*') {
                acc = Self::node(p, DslExpr::Mul(Box::new(acc), Box::new(self.factor()?)));
            } else if self.eat('/') {
                acc = Self::node(p, DslExpr::Div(Box::new(acc), Box::new(self.factor()?)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let v: i64 = n.try_into().map_err(|_| err(p, "integer too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(err(p, "expected an integer")),
        }
    }

    fn factor(&mut self) -> Result<Spanned> {
        let base = self.atom()?;
        let p = self.pos();
        if self.eat('^') {
            let e = self.signed_int()?;
            return Ok(Self::node(p, DslExpr::Pow(Box::new(base), e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Spanned> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Self::node(pos, DslExpr::Int(n)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let gen = match name.as_str() {
                    "q" => return Ok(Self::node(pos, DslExpr::Q)),
                    "k1" => return Ok(Self::node(pos, DslExpr::Gen(Letter::K1(1)))),
                    "k2" => return Ok(Self::node(pos, DslExpr::Gen(Letter::K2(1)))),
                    "E" => Letter::E,
                    "F" => Letter::F,
                    "h" => Letter::H,
                    "C" => Letter::C,
                    _ => return Err(err(pos, format!("unknown identifier {name:?}"))),
                };
                self.expect('[')?;
                let ip = self.pos();
                let n = self.signed_int()?;
                self.expect(']')?;
                if n == 0 && matches!(name.as_str(), "h" | "C") {
                    return Err(err(ip, "zero index"));
                }
                Ok(Self::node(pos, DslExpr::Gen(gen(n))))
            }
            Some(t) => Err(err(pos, format!("unexpected {t:?}"))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

/// Parses without evaluating.
pub fn parse_expr(src: &str) -> Result<Spanned> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(e)
}

fn scalar_of(v: &Value) -> Option<QScalar> {
    match v {
        Value::Element(e) => e.as_scalar(),
        Value::Tensor(_) => None,
    }
}

fn combine(a: Value, b: Value, pos: usize, sub: bool) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Element(x), Value::Element(y)) => {
            Value::Element(if sub { x.minus(&y) } else { x.plus(&y) })
        }
        (Value::Tensor(x), Value::Tensor(y)) => {
            Value::Tensor(if sub { x.minus(&y) } else { x.plus(&y) })
        }
        (Value::Tensor(x), Value::Element(y)) | (Value::Element(y), Value::Tensor(x))
            if y.is_zero() =>
        {
            Value::Tensor(x)
        }
        _ => return Err(err(pos, "cannot add an element and a tensor")),
    })
}

/// Evaluates a parsed expression.
pub fn eval(e: &Spanned) -> Result<Value> {
    let pos = e.pos;
    Ok(match &e.expr {
        DslExpr::Int(n) => Value::Element(Element::scalar(QScalar::from_bigint(n.clone()))),
        DslExpr::Q => Value::Element(Element::scalar(QScalar::q())),
        DslExpr::Gen(l) => Value::Element(Element::letter(*l)),
        DslExpr::Neg(x) => match eval(x)? {
            Value::Element(v) => Value::Element(v.scaled(&QScalar::from_int(-1))),
            Value::Tensor(v) => Value::Tensor(v.scaled(&QScalar::from_int(-1))),
        },
        DslExpr::Add(a, b) => combine(eval(a)?, eval(b)?, pos, false)?,
        DslExpr::Sub(a, b) => combine(eval(a)?, eval(b)?, pos, true)?,
        DslExpr::Mul(a, b) => match (eval(a)?, eval(b)?) {
            (Value::Element(x), Value::Element(y)) => Value::Element(x.times(&y)),
            (Value::Tensor(x), Value::Tensor(y)) => Value::Tensor(x.times(&y)),
            (Value::Tensor(t), Value::Element(s)) | (Value::Element(s), Value::Tensor(t)) => {
                let c = s
                    .as_scalar()
                    .ok_or_else(|| err(pos, "only scalars multiply tensors"))?;
                Value::Tensor(t.scaled(&c))
            }
        },
        DslExpr::Div(a, b) => {
            let d = scalar_of(&eval(b)?).ok_or_else(|| err(b.pos, "division by a non-scalar"))?;
            let inv = d.inv().map_err(|_| err(b.pos, "division by zero"))?;
            match eval(a)? {
                Value::Element(x) => Value::Element(x.scaled(&inv)),
                Value::Tensor(x) => Value::Tensor(x.scaled(&inv)),
            }
        }
        DslExpr::Pow(a, n) => match eval(a)? {
            Value::Element(x) => {
                if *n >= 0 {
                    Value::Element(x.pow(*n as u32))
                } else {
                    let inv = crate::series::SeriesCoeff::try_inverse(&x)
                        .filter(|_| x.len() == 1)
                        .ok_or_else(|| {
                            err(pos, "negative powers need a scalar or group-like base")
                        })?;
                    Value::Element(inv.pow(n.unsigned_abs() as u32))
                }
            }
            Value::Tensor(x) => {
                if *n < 0 {
                    return Err(err(pos, "negative power of a tensor"));
                }
                Value::Tensor((0..*n).fold(TensorElement::one(), |acc, _| acc.times(&x)))
            }
        },
        DslExpr::Tensor(a, b) => match (eval(a)?, eval(b)?) {
            (Value::Element(x), Value::Element(y)) => Value::Tensor(TensorElement::pure(&x, &y)),
            _ => return Err(err(pos, "tensor legs must be elements")),
        },
    })
}

pub fn parse(src: &str) -> Result<Value> {
    eval(&parse_expr(src)?)
}

pub fn parse_element(src: &str) -> Result<Element> {
    match parse(src)? {
        Value::Element(e) => Ok(e),
        Value::Tensor(_) => Err(err(0, "expected an element, found a tensor")),
    }
}

/// Parses a tensor; a plain element `x` is read as `x # 1` only when it is
/// zero.
pub fn parse_tensor(src: &str) -> Result<TensorElement> {
    match parse(src)? {
        Value::Tensor(t) => Ok(t),
        Value::Element(e) if e.is_zero() => Ok(TensorElement::zero()),
        Value::Element(_) => Err(err(0, "expected a tensor (use '#')")),
    }
}

pub fn format_element(x: &Element) -> String {
    x.render()
}

pub fn format_tensor(x: &TensorElement) -> String {
    x.render()
}

pub fn format_value(v: &Value) -> String {
    match v {
        Value::Element(e) => format_element(e),
        Value::Tensor(t) => format_tensor(t),
    }
}

/// Parses back `samples` seeded random elements from their formatting and
/// checks that formatting the result reproduces the same text.
pub fn check_round_trip(samples: usize, seed: u64) -> Report {
    let mut report = Report::new("dsl", 0)
        .param("samples", samples)
        .param("seed", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity = None;
    let mut stable = None;
    for i in 0..samples {
        let x = random::element(&mut rng, 3, 3, 3);
        let s = format_element(&x);
        match parse_element(&s) {
            Ok(y) if y == x => {
                if stable.is_none() && format_element(&y) != s {
                    stable = Some(format!("sample {i}: {s}"));
                }
            }
            Ok(_) => {
                identity = identity.or(Some(format!(
                    "sample {i}: {s} parses to a different element"
                )))
            }
            Err(e) => identity = identity.or(Some(format!("sample {i}: {s}: {e}"))),
        }
    }
    report.push(Check::from_witness("parse(format(x)) = x", identity));
    report.push(Check::from_witness("format is deterministic", stable));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::coproduct;
    use crate::scalars::q_minus_qinv;

    #[test]
    fn ef_product() {
        let x = parse_element("E[0]*F[0]").unwrap();
        let expect = Element::f(0)
            .times(&Element::e(0))
            .scaled(&QScalar::from_int(-1))
            .plus(
                &Element::k(-1, 1)
                    .minus(&Element::k(1, -1))
                    .scaled(&q_minus_qinv()),
            );
        assert_eq!(x, expect);
    }

    #[test]
    fn scalar_multiple() {
        let x = parse_element("(q - q^-1)*h[1]").unwrap();
        assert_eq!(x, Element::h(1).scaled(&q_minus_qinv()));
        assert_eq!(
            parse_element("h[1]/(q - q^-1)").unwrap(),
            Element::h(1).scaled(&q_minus_qinv().inv().unwrap())
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_element("h[0]"),
            Err(Error::Parse {
                pos: 2,
                msg: "zero index".into()
            })
        );
        assert!(
            matches!(parse_element("C[0]"), Err(Error::Parse { msg, .. }) if msg == "zero index")
        );
        assert_eq!(
            parse_element("E[0] / F[1]"),
            Err(Error::Parse {
                pos: 7,
                msg: "division by a non-scalar".into()
            })
        );
        assert!(matches!(
            parse_element("E[0] +"),
            Err(Error::Parse { pos: 6, .. })
        ));
        assert!(matches!(
            parse_element("E[0] $"),
            Err(Error::Parse { pos: 5, .. })
        ));
        assert!(matches!(
            parse_element("x"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(parse_element("1 # 2 + E[0]").is_err());
        assert!(parse_element("E[1]^-1").is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_element(&Element::zero()), "0");
        assert_eq!(
            format_tensor(&coproduct(&Element::c(1))),
            "1 # C[1] + C[1] # 1"
        );
        assert_eq!(
            parse_tensor("1 # C[1] + C[1] # 1").unwrap(),
            coproduct(&Element::c(1))
        );
        assert_eq!(parse_element("k1^-2*k2").unwrap(), Element::k(-2, 1));
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let x = random::element(&mut rng, 3, 3, 3);
            let s = format_element(&x);
            assert_eq!(parse_element(&s).unwrap(), x, "{s}");
            assert_eq!(format_element(&parse_element(&s).unwrap()), s);
        }
        for _ in 0..20 {
            let x = random::element(&mut rng, 2, 2, 2);
            let t = coproduct(&x);
            let s = format_tensor(&t);
            assert_eq!(parse_tensor(&s).unwrap(), t, "{s}");
        }
    }
}
