//! Recursive-descent reader for model files.
//!
//! ```text
//! model "quadric" {
//!     ambient 2;
//!     codim 1;
//!     im w = z*conj(z);
//! }
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::model::{conj_swap, model_vars, ManifoldModel};
use super::ModelError;
use crate::series::{Coeff, GaussRational, TruncSeries, Vars, EXACT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigRational),
    Str(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s: String = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').collect();
            i += s.len();
            col += s.len();
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let s: String = chars[i..].iter().take_while(|c| c.is_ascii_digit() || **c == '.').collect();
            i += s.len();
            col += s.len();
            let value = parse_decimal(&s).ok_or_else(|| err(l0, c0, format!("malformed number `{s}`")))?;
            out.push(Token { tok: Tok::Num(value), line: l0, col: c0 });
            continue;
        }
        if c == '"' {
            let s: String = chars[i + 1..].iter().take_while(|c| **c != '"' && **c != '\n').collect();
            if chars.get(i + 1 + s.len()) != Some(&'"') {
                return Err(err(l0, c0, "unterminated string".into()));
            }
            i += s.len() + 2;
            col += s.chars().count() + 2;
            out.push(Token { tok: Tok::Str(s), line: l0, col: c0 });
            continue;
        }
        if "{};:=+-*/^()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(num, den))
}

/// Declaration parsed from a model body.
enum Decl {
    Rho(usize, TruncSeries),
    ImW(usize, TruncSeries),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n: usize,
    d: usize,
    vars: Vars,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Ident(k.into()) {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected `{k}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn expect_int(&mut self) -> Result<usize, ParseError> {
        match self.peek().tok.clone() {
            Tok::Num(v) if v.is_integer() => {
                let n: Option<usize> = v.to_integer().try_into().ok();
                match n {
                    Some(n) => {
                        self.next();
                        Ok(n)
                    }
                    None => self.error("integer out of range"),
                }
            }
            t => self.error(format!("expected an integer, found {}", describe(&t))),
        }
    }

    fn constant(&self, c: GaussRational) -> TruncSeries {
        TruncSeries::constant(&self.vars, EXACT, c)
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        let (n, d) = (self.n, self.d);
        let big_n = n + d;
        let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
        let (stem, idx) = name.split_at(split);
        let idx: Option<usize> = if idx.is_empty() { None } else { idx.parse().ok() };
        let (base, count) = match stem {
            "z" => (0, n),
            "w" => (n, d),
            "chi" => (big_n, n),
            "tau" => (big_n + n, d),
            _ => return None,
        };
        match idx {
            None if count == 1 => Some(base),
            Some(k) if k >= 1 && k <= count => Some(base + k - 1),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<TruncSeries, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TruncSeries, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    let at = self.peek().clone();
                    let den = self.unary()?;
                    let c = den.constant_term();
                    if den.num_terms() > 1 || (den.num_terms() == 1 && c.is_zero()) {
                        return Err(ParseError { line: at.line, col: at.col, msg: "division only by constants".into() });
                    }
                    let inv = c.inv().ok_or(ParseError { line: at.line, col: at.col, msg: "division by zero".into() })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<TruncSeries, ParseError> {
        match self.peek().tok {
            Tok::Sym('-') => {
                self.next();
                Ok(self.unary()?.neg())
            }
            Tok::Sym('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<TruncSeries, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Sym('^') {
            self.next();
            let e = self.expect_int()?;
            if e > 64 {
                return self.error("exponent too large");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<TruncSeries, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Num(v) => Ok(self.constant(GaussRational::new(v, BigRational::zero()))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "i" => Ok(self.constant(GaussRational::imag_unit())),
            Tok::Ident(name) if matches!(name.as_str(), "conj" | "re" | "im") => {
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                let c = conj_swap(&e, self.n + self.d);
                Ok(match name.as_str() {
                    "conj" => c,
                    "re" => (&e + &c).scale(&GaussRational::rational(1, 2)),
                    _ => (&e - &c).scale(&GaussRational::from_parts(0, 1, -1, 2)),
                })
            }
            Tok::Ident(name) => match self.resolve(&name) {
                Some(v) => Ok(TruncSeries::var(&self.vars, EXACT, v)),
                None => Err(ParseError { line: t.line, col: t.col, msg: format!("unknown identifier `{name}`") }),
            },
            other => Err(ParseError { line: t.line, col: t.col, msg: format!("unexpected {}", describe(&other)) }),
        }
    }

    fn decl(&mut self) -> Result<Decl, ParseError> {
        let start = self.peek().clone();
        match &start.tok {
            Tok::Ident(k) if k == "rho" => {
                self.next();
                let j = self.expect_int()?;
                self.expect_sym(':')?;
                let e = self.expr()?;
                self.expect_sym(';')?;
                Ok(Decl::Rho(j, e))
            }
            Tok::Ident(k) if k == "im" => {
                self.next();
                let j = match self.next().tok {
                    Tok::Ident(w) if w == "w" => {
                        if let Tok::Num(_) = self.peek().tok {
                            self.expect_int()?
                        } else {
                            1
                        }
                    }
                    Tok::Ident(w) if w.starts_with('w') && w[1..].parse::<usize>().is_ok() => w[1..].parse().unwrap(),
                    _ => return Err(ParseError { line: start.line, col: start.col, msg: "expected `w` after `im`".into() }),
                };
                self.expect_sym('=')?;
                let e = self.expr()?;
                self.expect_sym(';')?;
                Ok(Decl::ImW(j, e))
            }
            other => self.error(format!("expected `rho` or `im w`, found {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(v) => format!("number {v}"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parse a model file and validate it; `kappa` is the truncation budget.
pub fn parse_model(text: &str, kappa: u32) -> Result<ManifoldModel, ModelError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, n: 0, d: 0, vars: model_vars(1, 1) };
    p.expect_keyword("model")?;
    let label = match p.next().tok {
        Tok::Str(s) => s,
        t => return Err(p.error::<()>(format!("expected model name string, found {}", describe(&t))).unwrap_err().into()),
    };
    p.expect_sym('{')?;
    p.expect_keyword("ambient")?;
    let big_n = p.expect_int()?;
    p.expect_sym(';')?;
    p.expect_keyword("codim")?;
    let d = p.expect_int()?;
    p.expect_sym(';')?;
    if d == 0 || d >= big_n || 2 * big_n > crate::series::MAX_VARS {
        return Err(p.error::<()>(format!("unsupported dimensions: ambient {big_n}, codim {d}")).unwrap_err().into());
    }
    p.n = big_n - d;
    p.d = d;
    p.vars = model_vars(p.n, d);
    let mut rho: Vec<Option<TruncSeries>> = vec![None; d];
    while p.peek().tok != Tok::Sym('}') {
        let at = p.peek().clone();
        let (j, series) = match p.decl()? {
            Decl::Rho(j, e) => (j, e),
            Decl::ImW(j, phi) => {
                if j == 0 || j > d {
                    return Err(ParseError { line: at.line, col: at.col, msg: format!("index {j} out of range 1..={d}") }.into());
                }
                let w = TruncSeries::var(&p.vars, EXACT, p.n + j - 1);
                let tau = TruncSeries::var(&p.vars, EXACT, big_n + p.n + j - 1);
                let lhs = (&w - &tau).scale(&GaussRational::from_parts(0, 1, -1, 2));
                (j, &lhs - &phi)
            }
        };
        if j == 0 || j > d {
            return Err(ParseError { line: at.line, col: at.col, msg: format!("index {j} out of range 1..={d}") }.into());
        }
        if rho[j - 1].is_some() {
            return Err(ParseError { line: at.line, col: at.col, msg: format!("defining function {j} declared twice") }.into());
        }
        rho[j - 1] = Some(series);
    }
    p.expect_sym('}')?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error::<()>("trailing input after model").unwrap_err().into());
    }
    let rho: Vec<TruncSeries> = rho
        .into_iter()
        .enumerate()
        .map(|(j, r)| r.ok_or_else(|| ModelError::Parse(ParseError { line: 0, col: 0, msg: format!("defining function {} missing", j + 1) })))
        .collect::<Result<_, _>>()?;
    ManifoldModel::new(&label, p.n, d, rho, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussRational {
        GaussRational::from_parts(re_n, re_d, im_n, im_d)
    }

    #[test]
    fn quadric_complexifies() {
        let m = parse_model("model \"q\" { ambient 2; codim 1; im w = z*conj(z); }", 8).unwrap();
        let r = &m.rho[0];
        // (w - τ)/(2i) - zχ
        assert_eq!(r.coeff_of(&[0, 1, 0, 0]), g(0, 1, -1, 2));
        assert_eq!(r.coeff_of(&[0, 0, 0, 1]), g(0, 1, 1, 2));
        assert_eq!(r.coeff_of(&[1, 0, 1, 0]), g(-1, 1, 0, 1));
        assert_eq!(r.num_terms(), 3);
    }

    #[test]
    fn quartic_complexifies() {
        let m = parse_model("model \"e\" { ambient 2; codim 1; im w = (z*conj(z))^2; }", 8).unwrap();
        assert_eq!(m.rho[0].coeff_of(&[2, 0, 2, 0]), g(-1, 1, 0, 1));
        assert_eq!(m.rho[0].num_terms(), 3);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_model("model \"x\" {\n ambient 2;\n codim 1;\n im w = z*$;\n}", 8).unwrap_err();
        match e {
            ModelError::Parse(p) => {
                assert_eq!((p.line, p.col), (4, 11));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_model("model \"x\" { ambient 2; codim 1; im w = i*z*conj(z); }", 8),
            Err(ModelError::NotReal(_))
        ));
        assert!(matches!(
            parse_model("model \"x\" { ambient 2; codim 1; rho 1: z + chi; }", 8),
            Err(ModelError::NotGeneric(_)) | Ok(_)
        ));
    }

    #[test]
    fn decimals_and_division() {
        let m = parse_model("model \"x\" { ambient 2; codim 1; im w = 0.5*z*conj(z) + z*conj(z)/2; }", 8).unwrap();
        assert_eq!(m.rho[0].coeff_of(&[1, 0, 1, 0]), g(-1, 1, 0, 1));
    }

    #[test]
    fn re_of_w() {
        let m = parse_model("model \"x\" { ambient 2; codim 1; im w = z*conj(z)*re(w); }", 8).unwrap();
        assert_eq!(m.rho[0].coeff_of(&[1, 1, 1, 0]), g(-1, 2, 0, 1));
        assert_eq!(m.rho[0].coeff_of(&[1, 0, 1, 1]), g(-1, 2, 0, 1));
    }
}
