//! Line-oriented map files.
//!
//! ```text
//! # comment
//! field p=2147483647        (or: field rational; default is p=2147483647)
//! vars X0 X1 X2
//! f0 X1^2*X2^4 - X1^4*X2^2
//! f1 ...
//! ```
//!
//! Expressions use `+`, `-`, `*`, `^`, parentheses, integer literals and the
//! declared variable names. `/` divides by a nonzero number, as in `X0/2`. Coefficients are read as rationals and reduced
//! to the chosen field afterwards.

use std::fmt;

use anyhow::{bail, Context};
use jacfiber_core::{Field, MvPoly, PrimeField, RationalField, RationalMapInput, DEFAULT_PRIME};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// A syntax error with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

/// A parsed map file, before validation.
#[derive(Clone, Debug, PartialEq)]
pub struct MapFile {
    pub field: FieldSpec,
    pub names: Vec<String>,
    /// The forms with their coefficients as written.
    pub forms: Vec<MvPoly<RationalField>>,
}

/// A validated map over the field named in its file.
#[derive(Clone, Debug)]
pub enum MapInput {
    Prime(RationalMapInput<PrimeField>),
    Rational(RationalMapInput<RationalField>),
}

impl MapFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut field = None;
        let mut names: Option<Vec<String>> = None;
        let mut forms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let Some(start) = content.find(|c: char| !c.is_whitespace()) else {
                continue;
            };
            let body = &content[start..];
            let keyword_end = body.find(char::is_whitespace).unwrap_or(body.len());
            let keyword = &body[..keyword_end];
            let rest_offset = start + keyword_end;
            let rest = &content[rest_offset..];
            let err = |column: usize, message: String| ParseError { line, column, message };
            match keyword {
                "field" => {
                    if field.is_some() {
                        return Err(err(start + 1, "field declared twice".into()));
                    }
                    let value = rest.trim();
                    let col = rest_offset + rest.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
                    field = Some(if value == "rational" {
                        FieldSpec::Rational
                    } else if let Some(p) = value.strip_prefix("p=") {
                        let p = p
                            .trim()
                            .parse::<u64>()
                            .map_err(|_| err(col + 2, format!("'{}' is not a modulus", p.trim())))?;
                        FieldSpec::Prime(p)
                    } else {
                        return Err(err(col, "expected 'p=<prime>' or 'rational'".into()));
                    });
                }
                "vars" => {
                    if names.is_some() {
                        return Err(err(start + 1, "variables declared twice".into()));
                    }
                    let mut list: Vec<String> = Vec::new();
                    for (off, word) in words(rest) {
                        let col = rest_offset + off + 1;
                        if !is_identifier(word) {
                            return Err(err(col, format!("'{word}' is not a variable name")));
                        }
                        if list.iter().any(|n| n == word) {
                            return Err(err(col, format!("variable '{word}' declared twice")));
                        }
                        list.push(word.to_string());
                    }
                    if list.is_empty() {
                        return Err(err(start + 1, "no variables declared".into()));
                    }
                    names = Some(list);
                }
                label if label.starts_with('f') && label[1..].parse::<usize>().is_ok() => {
                    let index: usize = label[1..].parse().expect("checked above");
                    let Some(vars) = names.as_ref() else {
                        return Err(err(start + 1, "forms must come after the 'vars' line".into()));
                    };
                    if index != forms.len() {
                        return Err(err(start + 1, format!("expected f{}, found {label}", forms.len())));
                    }
                    let poly = parse_expression(rest, vars).map_err(|(column, message)| ParseError {
                        line,
                        column: rest_offset + column,
                        message,
                    })?;
                    forms.push(poly);
                }
                other => {
                    return Err(err(start + 1, format!("unknown keyword '{other}'")));
                }
            }
        }
        let last = text.lines().count().max(1);
        let names = names.ok_or(ParseError { line: last, column: 1, message: "missing 'vars' line".into() })?;
        if forms.is_empty() {
            return Err(ParseError { line: last, column: 1, message: "no forms given".into() });
        }
        Ok(MapFile { field: field.unwrap_or(FieldSpec::Prime(DEFAULT_PRIME)), names, forms })
    }

    /// The file text; [`MapFile::parse`] reads it back to an equal value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.field {
            FieldSpec::Prime(p) => out.push_str(&format!("field p={p}\n")),
            FieldSpec::Rational => out.push_str("field rational\n"),
        }
        out.push_str(&format!("vars {}\n", self.names.join(" ")));
        for (i, f) in self.forms.iter().enumerate() {
            out.push_str(&format!("f{i} {}\n", f.display_with(&self.names)));
        }
        out
    }

    /// Validates the forms over the file's own field.
    pub fn input(&self) -> anyhow::Result<MapInput> {
        Ok(match self.field {
            FieldSpec::Prime(p) => MapInput::Prime(self.prime_input(p)?),
            FieldSpec::Rational => MapInput::Rational(self.rational_input()?),
        })
    }

    /// The forms reduced modulo `p` and validated.
    pub fn prime_input(&self, p: u64) -> anyhow::Result<RationalMapInput<PrimeField>> {
        let k = PrimeField::new(p)?;
        let mut forms = Vec::with_capacity(self.forms.len());
        for (i, f) in self.forms.iter().enumerate() {
            if f.terms().iter().any(|(_, c)| k.is_zero(&k.from_bigint(c.denom()))) {
                bail!("a coefficient of f{i} has a denominator divisible by {p}");
            }
            forms.push(f.map_coefficients(&k, |c| scalar_from_rational(&k, c).expect("denominator checked")));
        }
        validate(&k, forms, &self.names)
    }

    pub fn rational_input(&self) -> anyhow::Result<RationalMapInput<RationalField>> {
        validate(&RationalField, self.forms.clone(), &self.names)
    }
}

fn validate<F: Field>(k: &F, forms: Vec<MvPoly<F>>, names: &[String]) -> anyhow::Result<RationalMapInput<F>> {
    let input = RationalMapInput::new_unchecked_gcd(k, forms)?.with_names(names.to_vec())?;
    input.check_coprime()?;
    Ok(input)
}

/// Parses and validates in one step.
pub fn parse_map_file(text: &str) -> anyhow::Result<(MapFile, MapInput)> {
    let file = MapFile::parse(text)?;
    let input = file.input()?;
    Ok((file, input))
}

pub fn read_map_file(path: &std::path::Path) -> anyhow::Result<(MapFile, MapInput)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_map_file(&text).with_context(|| format!("in {}", path.display()))
}

/// `num / den` in the field; fails when the denominator vanishes there.
pub fn scalar_from_rational<F: Field>(k: &F, c: &BigRational) -> anyhow::Result<F::Scalar> {
    let den = k.from_bigint(c.denom());
    if k.is_zero(&den) {
        bail!("denominator {} vanishes in the field", c.denom());
    }
    Ok(k.div(&k.from_bigint(c.numer()), &den))
}

/// A comma-separated list of integers or fractions `a/b`.
pub fn parse_point<F: Field>(k: &F, text: &str) -> anyhow::Result<Vec<F::Scalar>> {
    text.split(',')
        .map(|part| {
            let s = part.trim();
            let q: BigRational = s
                .parse()
                .ok()
                .filter(|q: &BigRational| !q.denom().is_zero())
                .with_context(|| format!("'{s}' is not a number"))?;
            scalar_from_rational(k, &q)
        })
        .collect()
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated words with their byte offsets.
fn words(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace().map(move |w| (w.as_ptr() as usize - s.as_ptr() as usize, w))
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(v) => write!(f, "{v}"),
            Token::Name(n) => write!(f, "{n}"),
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Slash => write!(f, "/"),
            Token::Caret => write!(f, "^"),
            Token::Open => write!(f, "("),
            Token::Close => write!(f, ")"),
        }
    }
}

/// Errors carry a 1-based column within the expression text.
type ExprResult<T> = Result<T, (usize, String)>;

fn tokenize(s: &str) -> ExprResult<Vec<(usize, Token)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            _ => None,
        };
        if let Some(t) = single {
            out.push((col, t));
            i += 1;
        } else if c.is_ascii_digit() {
            let end = s[i..].find(|ch: char| !ch.is_ascii_digit()).map_or(s.len(), |e| i + e);
            out.push((col, Token::Int(s[i..end].parse().expect("digits"))));
            i = end;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let end = s[i..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .map_or(s.len(), |e| i + e);
            out.push((col, Token::Name(s[i..end].to_string())));
            i = end;
        } else {
            let ch = s[i..].chars().next().expect("in bounds");
            return Err((col, format!("unexpected character '{ch}'")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    names: &'a [String],
    /// Column just past the expression, for errors at the end.
    end: usize,
}

type Poly = MvPoly<RationalField>;

fn parse_expression(text: &str, names: &[String]) -> ExprResult<Poly> {
    let tokens = tokenize(text)?;
    let end = text.trim_end().len() + 1;
    if tokens.is_empty() {
        return Err((end, "empty expression".into()));
    }
    let mut p = ExprParser { tokens, pos: 0, names, end };
    let poly = p.sum()?;
    if let Some((col, t)) = p.tokens.get(p.pos) {
        return Err((*col, format!("unexpected '{t}'")));
    }
    Ok(poly)
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    /// Error at the end of input, pointing at the dangling token.
    fn eof_error(&self) -> (usize, String) {
        match self.tokens.last() {
            Some((col, t)) => (*col, format!("expression ends after '{t}'")),
            None => (self.end, "empty expression".into()),
        }
    }

    fn sum(&mut self) -> ExprResult<Poly> {
        let mut acc = self.product()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Token::Plus => {
                    self.next();
                    acc = &acc + &self.product()?;
                }
                Token::Minus => {
                    self.next();
                    acc = &acc - &self.product()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> ExprResult<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    let col = self.tokens.get(self.pos + 1).map_or(self.end, |(c, _)| *c);
                    self.next();
                    let divisor = self.unary()?;
                    if !divisor.is_constant() || divisor.is_zero() {
                        return Err((col, "can only divide by a nonzero number".into()));
                    }
                    let k = RationalField;
                    acc = acc.scale(&k.inv(&divisor.leading_coeff()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> ExprResult<Poly> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> ExprResult<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.next();
        match self.next() {
            Some((col, Token::Int(e))) => {
                let e: u32 = (&e).try_into().map_err(|_| (col, format!("exponent {e} is too large")))?;
                Ok(base.pow(e))
            }
            Some((col, t)) => Err((col, format!("expected an integer exponent, found '{t}'"))),
            None => Err(self.eof_error()),
        }
    }

    fn atom(&mut self) -> ExprResult<Poly> {
        let nvars = self.names.len();
        let k = RationalField;
        match self.next() {
            Some((_, Token::Int(v))) => Ok(MvPoly::constant(&k, nvars, k.from_bigint(&v))),
            Some((col, Token::Name(n))) => match self.names.iter().position(|x| *x == n) {
                Some(i) => Ok(MvPoly::var(&k, nvars, i)),
                None => Err((col, format!("unknown variable '{n}'"))),
            },
            Some((col, Token::Open)) => {
                let inner = self.sum()?;
                match self.next() {
                    Some((_, Token::Close)) => Ok(inner),
                    Some((c, t)) => Err((c, format!("expected ')', found '{t}'"))),
                    None => Err((col, "unclosed '('".into())),
                }
            }
            Some((col, t)) => Err((col, format!("unexpected '{t}'"))),
            None => Err(self.eof_error()),
        }
    }
}
