//! Text format for polynomials and elimination systems.
//!
//! A system file is two header lines and one polynomial per following
//! non-empty line, each implicitly set to zero:
//!
//! ```text
//! vars: a b x y
//! eliminate: a b
//! a^2 - x^2 - y^2
//! a - b
//! ```
//!
//! The expression grammar has explicit `*` only (no implicit multiplication,
//! which would collide with multi-character identifiers), `^` with a
//! nonnegative integer exponent, parentheses, and exact literals: integers,
//! fractions like `19/10`, and decimals like `2.1` converted exactly. Errors
//! carry the line and column where parsing stopped.

use std::sync::Arc;

use locuskit_core::exact::Rational;
use locuskit_core::groebner::{GroebnerError, PolySystem};
use locuskit_core::multipoly::{MonomialOrder, PolyError, Polynomial, VarContext};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exponents above this are rejected; big powers signal a typo, not a curve.
pub const MAX_EXPONENT: u32 = 64;

const ORDER: MonomialOrder = MonomialOrder::DegRevLex;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown variable `{name}`")]
    UndeclaredIdentifier { line: usize, column: usize, name: String },
    #[error("line {line}, column {column}: exponent {value} exceeds the maximum of {MAX_EXPONENT}")]
    ExponentOverflow { line: usize, column: usize, value: u64 },
    #[error("line {line}: {message}")]
    Header { line: usize, message: String },
    #[error("invalid system: {0}")]
    System(String),
}

impl From<GroebnerError> for ParseError {
    fn from(e: GroebnerError) -> Self {
        ParseError::System(e.to_string())
    }
}

impl From<PolyError> for ParseError {
    fn from(e: PolyError) -> Self {
        ParseError::System(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Ident(String),
    // digits with an optional single dot; sign and fraction bar are separate
    Number(String),
    Eof,
}

struct Lexer {
    chars: Vec<char>,
    line: usize,
}

impl Lexer {
    fn new(src: &str, line: usize) -> Self {
        Lexer { chars: src.chars().collect(), line }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column, message: message.into() }
    }

    /// Tokens paired with their 1-based starting column.
    fn tokenize(&self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.chars.len() {
            let c = self.chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' | '\r' => i += 1,
                '+' => {
                    out.push((Tok::Plus, col));
                    i += 1;
                }
                '-' => {
                    out.push((Tok::Minus, col));
                    i += 1;
                }
                '*' => {
                    out.push((Tok::Star, col));
                    i += 1;
                }
                '^' => {
                    out.push((Tok::Caret, col));
                    i += 1;
                }
                '/' => {
                    out.push((Tok::Slash, col));
                    i += 1;
                }
                '(' => {
                    out.push((Tok::LParen, col));
                    i += 1;
                }
                ')' => {
                    out.push((Tok::RParen, col));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    let mut dots = 0;
                    while i < self.chars.len()
                        && (self.chars[i].is_ascii_digit() || self.chars[i] == '.')
                    {
                        if self.chars[i] == '.' {
                            dots += 1;
                        }
                        i += 1;
                    }
                    let text: String = self.chars[start..i].iter().collect();
                    if dots > 1 || text.ends_with('.') {
                        return Err(self.error(col, format!("malformed number `{text}`")));
                    }
                    out.push((Tok::Number(text), col));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < self.chars.len()
                        && (self.chars[i].is_ascii_alphanumeric() || self.chars[i] == '_')
                    {
                        i += 1;
                    }
                    out.push((Tok::Ident(self.chars[start..i].iter().collect()), col));
                }
                other => return Err(self.error(col, format!("unexpected character `{other}`"))),
            }
        }
        out.push((Tok::Eof, self.chars.len() + 1));
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    ctx: &'a Arc<VarContext>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.column(), message: message.into() }
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.ctx, ORDER)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        } else if *self.peek() == Tok::Plus {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = self.zero().sub(&acc)?;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let column = self.column();
        match self.bump() {
            Tok::Number(text) => {
                let value = if *self.peek() == Tok::Slash {
                    self.bump();
                    let den_col = self.column();
                    let Tok::Number(den) = self.bump() else {
                        return Err(self.error("expected denominator after `/`"));
                    };
                    rational_from_parts(&text, Some(&den)).ok_or_else(|| ParseError::Syntax {
                        line: self.line,
                        column: den_col,
                        message: format!("malformed fraction `{text}/{den}`"),
                    })?
                } else {
                    rational_from_parts(&text, None).ok_or_else(|| ParseError::Syntax {
                        line: self.line,
                        column,
                        message: format!("malformed number `{text}`"),
                    })?
                };
                Ok(Polynomial::constant(self.ctx, ORDER, value))
            }
            Tok::Ident(name) => {
                let Some(v) = self.ctx.index_of(&name) else {
                    return Err(ParseError::UndeclaredIdentifier {
                        line: self.line,
                        column,
                        name,
                    });
                };
                let base = Polynomial::var(self.ctx, ORDER, v)?;
                if *self.peek() != Tok::Caret {
                    return Ok(base);
                }
                self.bump();
                let exp_col = self.column();
                let Tok::Number(exp) = self.bump() else {
                    return Err(self.error("expected integer exponent after `^`"));
                };
                if exp.contains('.') {
                    return Err(ParseError::Syntax {
                        line: self.line,
                        column: exp_col,
                        message: format!("exponent `{exp}` must be an integer"),
                    });
                }
                let value: u64 = exp.parse().map_err(|_| ParseError::Syntax {
                    line: self.line,
                    column: exp_col,
                    message: format!("exponent `{exp}` out of range"),
                })?;
                if value > MAX_EXPONENT as u64 {
                    return Err(ParseError::ExponentOverflow {
                        line: self.line,
                        column: exp_col,
                        value,
                    });
                }
                Ok(base.pow(value as u32))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    self.pos -= 1;
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Tok::Eof => Err(ParseError::Syntax {
                line: self.line,
                column,
                message: "unexpected end of expression".into(),
            }),
            other => Err(ParseError::Syntax {
                line: self.line,
                column,
                message: format!("unexpected token `{}`", token_name(&other)),
            }),
        }
    }
}

fn token_name(t: &Tok) -> String {
    match t {
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Caret => "^".into(),
        Tok::Slash => "/".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Ident(s) => s.clone(),
        Tok::Number(s) => s.clone(),
        Tok::Eof => "end of input".into(),
    }
}

/// Exact rational from digit strings: plain integers, `num/den` fractions,
/// and decimals (`2.1` becomes 21/10). Returns `None` on a zero denominator.
fn rational_from_parts(num: &str, den: Option<&str>) -> Option<Rational> {
    if let Some(den) = den {
        if num.contains('.') || den.contains('.') {
            return None;
        }
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    match num.split_once('.') {
        None => {
            let n: BigInt = num.parse().ok()?;
            Some(Rational::from(n))
        }
        Some((int_part, frac_part)) => {
            let int_part = if int_part.is_empty() { "0" } else { int_part };
            let n: BigInt = int_part.parse().ok()?;
            let f: BigInt = frac_part.parse().ok()?;
            let mut den = BigInt::one();
            for _ in 0..frac_part.len() {
                den *= 10;
            }
            Some(Rational::from(n) + Rational::new(f, den))
        }
    }
}

/// Parses a standalone rational literal: integer `2`, fraction `19/10`, or
/// exact decimal `2.1`; an optional leading `-` negates. `None` on anything
/// else (no whitespace inside, no exponents, no zero denominator).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (neg, mag) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    if mag.is_empty() || !mag.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '/') {
        return None;
    }
    let (num, den) = match mag.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (mag, None),
    };
    let r = rational_from_parts(num, den)?;
    Some(if neg { -r } else { r })
}

/// Parses one polynomial over the given variables.
pub fn parse_poly(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial, ParseError> {
    parse_poly_at(text, ctx, 1)
}

fn parse_poly_at(
    text: &str,
    ctx: &Arc<VarContext>,
    line: usize,
) -> Result<Polynomial, ParseError> {
    let toks = Lexer::new(text, line).tokenize()?;
    let mut parser = Parser { toks, pos: 0, line, ctx };
    let poly = parser.expr()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!(
            "trailing input starting at `{}`",
            token_name(parser.peek())
        )));
    }
    Ok(poly)
}

fn header_names(line: &str, prefix: &str) -> Option<Vec<String>> {
    let rest = line.trim().strip_prefix(prefix)?;
    Some(rest.split_whitespace().map(str::to_owned).collect())
}

/// Parses a full system file: `vars:` line, `eliminate:` line, then one
/// polynomial per non-empty line.
pub fn parse_system(text: &str) -> Result<PolySystem, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let vars_line = lines.first().copied().unwrap_or("");
    let Some(names) = header_names(vars_line, "vars:") else {
        return Err(ParseError::Header {
            line: 1,
            message: "expected `vars: v1 v2 ...` as the first line".into(),
        });
    };
    if names.is_empty() {
        return Err(ParseError::Header { line: 1, message: "no variables declared".into() });
    }
    for (i, name) in names.iter().enumerate() {
        let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ParseError::Header {
                line: 1,
                message: format!("invalid variable name `{name}`"),
            });
        }
        if names[..i].contains(name) {
            return Err(ParseError::Header {
                line: 1,
                message: format!("variable `{name}` declared twice"),
            });
        }
    }
    let ctx = VarContext::new(names.iter().map(String::as_str))?;

    let elim_line = lines.get(1).copied().unwrap_or("");
    let Some(elim_names) = header_names(elim_line, "eliminate:") else {
        return Err(ParseError::Header {
            line: 2,
            message: "expected `eliminate: vi ...` as the second line".into(),
        });
    };
    let mut elim = Vec::with_capacity(elim_names.len());
    for name in &elim_names {
        let Some(v) = ctx.index_of(name) else {
            return Err(ParseError::Header {
                line: 2,
                message: format!("elimination variable `{name}` is not declared"),
            });
        };
        elim.push(v);
    }
    if elim.len() >= ctx.len() {
        return Err(ParseError::Header {
            line: 2,
            message: "at least one variable must be retained".into(),
        });
    }

    let mut gens = Vec::new();
    for (idx, raw) in lines.iter().enumerate().skip(2) {
        if raw.trim().is_empty() {
            continue;
        }
        gens.push(parse_poly_at(raw, &ctx, idx + 1)?);
    }
    if gens.is_empty() {
        return Err(ParseError::System("a system needs at least one polynomial".into()));
    }
    Ok(PolySystem::new(gens, elim)?)
}

/// Canonical single-line text; [`parse_poly`] inverts it exactly.
pub fn serialize_poly(p: &Polynomial) -> String {
    p.canonical_text()
}

/// Canonical system file text; [`parse_system`] inverts it exactly.
pub fn serialize_system(sys: &PolySystem) -> String {
    let ctx = sys.context();
    let mut out = String::from("vars:");
    for name in ctx.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push_str("\neliminate:");
    for &v in sys.elim_vars() {
        out.push(' ');
        out.push_str(ctx.name(v));
    }
    out.push('\n');
    for g in sys.generators() {
        out.push_str(&g.canonical_text());
        out.push('\n');
    }
    out
}
