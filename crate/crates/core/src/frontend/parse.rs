//! Text syntax.
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := rational factor ('*' factor)* | rational | factor ('*' factor)*
//! factor   := rational | jet | 'tr' '(' expr ')' | '(' expr ')' | 'D' '[' int ']' '(' expr ')'
//! jet      := name ('[' int ']')? ('_' int)*          base dimension 1
//!           | name ('[' int ']')? ('^(' int (',' int)* ')')?
//! rational := int ('/' int)?
//! ```
//!
//! Names: `a`, `b` when there is one generator, else `a1..am`, `b1..bm`;
//! `p1, p2, …` are the inert auxiliary letters; operator slots use the
//! names handed to [`parse_operator`]. Auxiliary and slot letters take a
//! `[j]` component index when there are several generators.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{CyclicPoly, DiffPoly, Family, Letter, MultiIndex, Parity, Q};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::{total_derivative, DiffOperator};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Underscore,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].parse().expect("ascii digits"))));
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Name(src[start..i].to_string())));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'_' => Tok::Underscore,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b';' => Tok::Semicolon,
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse { pos: i, msg: format!("unexpected character '{ch}'") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Result of [`parse_expression`]: an open polynomial or a closed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Open(DiffPoly),
    Closed(CyclicPoly),
}

impl Parsed {
    fn is_zero(&self) -> bool {
        match self {
            Parsed::Open(p) => p.is_zero(),
            Parsed::Closed(c) => c.is_zero(),
        }
    }
}

struct Parser<'a> {
    ctx: &'a Context,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    slots: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(ctx: &'a Context, src: &str, slots: &'a [&'a str]) -> Result<Self> {
        Ok(Parser { ctx, toks: lex(src)?, pos: 0, end: src.len(), slots })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<usize> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                usize::try_from(n).or_else(|_| self.err(format!("{what} too large")))
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<Parsed> {
        let mut negate = false;
        if self.eat(&Tok::Minus) {
            negate = true;
        } else {
            self.eat(&Tok::Plus);
        }
        let mut acc = self.term()?;
        if negate {
            acc = scale(acc, &-Q::one());
        }
        loop {
            let start = self.here();
            let sign = if self.eat(&Tok::Plus) {
                Q::one()
            } else if self.eat(&Tok::Minus) {
                -Q::one()
            } else {
                break;
            };
            let t = scale(self.term()?, &sign);
            acc = add(acc, t).ok_or(Error::Parse { pos: start, msg: "cannot add open and closed expressions".into() })?;
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(_)) | Some(Tok::LParen))
    }

    fn term(&mut self) -> Result<Parsed> {
        let mut acc = if matches!(self.peek(), Some(Tok::Int(_))) {
            let r = self.rational()?;
            let c = Parsed::Open(DiffPoly::constant(r));
            if self.starts_factor() {
                let start = self.here();
                let f = self.factor()?;
                mul(c, f).ok_or(Error::Parse { pos: start, msg: "product of two traces".into() })?
            } else {
                c
            }
        } else {
            self.factor()?
        };
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let start = self.here();
            let f = self.factor()?;
            acc = mul(acc, f).ok_or(Error::Parse { pos: start, msg: "product of two traces".into() })?;
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Q> {
        let n = match self.peek().cloned() {
            Some(Tok::Int(n)) => n,
            _ => return self.err("expected a number"),
        };
        self.pos += 1;
        if self.eat(&Tok::Slash) {
            let d = match self.peek().cloned() {
                Some(Tok::Int(d)) => d,
                _ => return self.err("expected a denominator"),
            };
            if d.is_zero() {
                return self.err("zero denominator");
            }
            self.pos += 1;
            Ok(Q::new(n, d))
        } else {
            Ok(Q::from_integer(n))
        }
    }

    fn factor(&mut self) -> Result<Parsed> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(_)) => Ok(Parsed::Open(DiffPoly::constant(self.rational()?))),
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Name(name)) if name == "tr" && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LParen) => {
                self.pos += 2;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                match inner {
                    Parsed::Open(p) => Ok(Parsed::Closed(self.ctx.close(&p))),
                    Parsed::Closed(_) => Err(Error::Parse { pos: start, msg: "nested tr".into() }),
                }
            }
            Some(Tok::Name(name)) if name == "D" && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LBracket) => {
                self.pos += 2;
                let i = self.small_int("base index")?;
                self.expect(&Tok::RBracket, "']'")?;
                self.expect(&Tok::LParen, "'('")?;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                match inner {
                    Parsed::Open(p) => Ok(Parsed::Open(total_derivative(self.ctx, &p, i)?)),
                    Parsed::Closed(c) if c.is_zero() => Ok(Parsed::Closed(c)),
                    Parsed::Closed(_) => Err(Error::Parse { pos: start, msg: "D applied to a trace".into() }),
                }
            }
            Some(Tok::Name(_)) => Ok(Parsed::Open(DiffPoly::letter(self.jet()?))),
            _ => self.err("expected a factor"),
        }
    }

    fn jet(&mut self) -> Result<Letter> {
        let start = self.here();
        let Some(Tok::Name(name)) = self.peek().cloned() else {
            return self.err("expected a name");
        };
        self.pos += 1;
        let m = self.ctx.gens();
        let (family, mut generator, needs_component) = self.resolve(&name, start)?;
        if needs_component && m > 1 {
            self.expect(&Tok::LBracket, "'[' component index")?;
            let j = self.small_int("component index")?;
            self.expect(&Tok::RBracket, "']'")?;
            if j == 0 || j > m {
                return Err(Error::GeneratorOutOfRange { index: j, gens: m });
            }
            generator = j - 1;
        }
        let n = self.ctx.base_dim();
        let mut sigma = MultiIndex::ZERO;
        if self.peek() == Some(&Tok::Underscore) {
            if n > 1 {
                return self.err("subscripts need base dimension 1; write a^(i,j,...)");
            }
            while self.eat(&Tok::Underscore) {
                let k = self.small_int("derivative order")?;
                for _ in 0..k {
                    sigma = sigma.incremented(0);
                }
            }
        } else if self.eat(&Tok::Caret) {
            self.expect(&Tok::LParen, "'(' after '^'")?;
            let mut dir = 0;
            loop {
                let k = self.small_int("derivative order")?;
                if dir >= n {
                    return self.err(format!("multi-index longer than base dimension {n}"));
                }
                for _ in 0..k {
                    sigma = sigma.incremented(dir);
                }
                dir += 1;
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "')'")?;
        }
        if sigma.order() > 255 {
            return self.err("derivative order too large");
        }
        Ok(Letter::new(family, generator as u8, sigma))
    }

    /// Family, generator, and whether a `[j]` component index follows.
    fn resolve(&self, name: &str, pos: usize) -> Result<(Family, usize, bool)> {
        if let Some(s) = self.slots.iter().position(|s| *s == name) {
            return Ok((Family::Slot(s as u8), 0, true));
        }
        let m = self.ctx.gens();
        let unknown = || Error::Parse { pos, msg: format!("unknown symbol '{name}'") };
        let (head, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len()));
        let index: Option<usize> = if digits.is_empty() {
            None
        } else if digits.bytes().all(|c| c.is_ascii_digit()) {
            Some(digits.parse().map_err(|_| unknown())?)
        } else {
            return Err(unknown());
        };
        match head {
            "a" | "b" => {
                let family = if head == "a" { Family::A } else { Family::B };
                let j = match index {
                    None if m == 1 => 1,
                    None => return Err(Error::Parse { pos, msg: format!("'{name}' needs a generator index (1..={m})") }),
                    Some(j) => j,
                };
                if j == 0 || j > m {
                    return Err(Error::GeneratorOutOfRange { index: j, gens: m });
                }
                Ok((family, j - 1, false))
            }
            "p" => match index {
                Some(k) if (1..=u8::MAX as usize).contains(&k) => Ok((Family::Aux((k - 1) as u8), 0, true)),
                _ => Err(unknown()),
            },
            _ => Err(unknown()),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

fn scale(p: Parsed, c: &Q) -> Parsed {
    match p {
        Parsed::Open(x) => Parsed::Open(x.scale(c)),
        Parsed::Closed(x) => Parsed::Closed(x.scale(c)),
    }
}

fn add(x: Parsed, y: Parsed) -> Option<Parsed> {
    match (x, y) {
        (Parsed::Open(a), Parsed::Open(b)) => Some(Parsed::Open(&a + &b)),
        (Parsed::Closed(a), Parsed::Closed(b)) => Some(Parsed::Closed(&a + &b)),
        (Parsed::Open(a), c @ Parsed::Closed(_)) | (c @ Parsed::Closed(_), Parsed::Open(a)) if a.is_zero() => Some(c),
        (o @ Parsed::Open(_), c) | (c, o @ Parsed::Open(_)) if c.is_zero() => Some(o),
        _ => None,
    }
}

/// Scalar of a constant open polynomial.
fn as_constant(p: &DiffPoly) -> Option<Q> {
    let mut out = Q::zero();
    for (w, c) in p.terms() {
        if !w.is_empty() {
            return None;
        }
        out = c.clone();
    }
    Some(out)
}

fn mul(x: Parsed, y: Parsed) -> Option<Parsed> {
    match (x, y) {
        (Parsed::Open(a), Parsed::Open(b)) => Some(Parsed::Open(a.concat(&b))),
        (Parsed::Open(a), Parsed::Closed(c)) | (Parsed::Closed(c), Parsed::Open(a)) => {
            as_constant(&a).map(|k| Parsed::Closed(c.scale(&k)))
        }
        (Parsed::Closed(_), Parsed::Closed(_)) => None,
    }
}

/// Parses an expression, closing `tr(…)` and applying `D[i]`.
pub fn parse_expression(ctx: &Context, src: &str) -> Result<Parsed> {
    let mut p = Parser::new(ctx, src, &[])?;
    let e = p.expr()?;
    p.finish()?;
    Ok(match e {
        Parsed::Open(x) => Parsed::Open(ctx.canon(x)),
        c => c,
    })
}

/// An open polynomial.
pub fn parse_poly(ctx: &Context, src: &str) -> Result<DiffPoly> {
    match parse_expression(ctx, src)? {
        Parsed::Open(p) => Ok(p),
        Parsed::Closed(c) if c.is_zero() => Ok(DiffPoly::zero()),
        Parsed::Closed(_) => Err(Error::Parse { pos: 0, msg: "expected an open polynomial, found tr(...)".into() }),
    }
}

/// A closed density; `0` is accepted.
pub fn parse_cyclic(ctx: &Context, src: &str) -> Result<CyclicPoly> {
    match parse_expression(ctx, src)? {
        Parsed::Closed(c) => Ok(c),
        Parsed::Open(p) if p.is_zero() => Ok(CyclicPoly::zero()),
        Parsed::Open(_) => Err(Error::Parse { pos: 0, msg: "expected a density tr(...)".into() }),
    }
}

/// `m` open polynomials separated by `;`.
pub fn parse_vector(ctx: &Context, src: &str) -> Result<Vec<DiffPoly>> {
    parse_rows(ctx, src, &[])
}

fn parse_rows(ctx: &Context, src: &str, slots: &[&str]) -> Result<Vec<DiffPoly>> {
    let mut p = Parser::new(ctx, src, slots)?;
    let mut rows = Vec::new();
    loop {
        let start = p.here();
        match p.expr()? {
            Parsed::Open(x) => rows.push(x),
            Parsed::Closed(c) if c.is_zero() => rows.push(DiffPoly::zero()),
            Parsed::Closed(_) => return Err(Error::Parse { pos: start, msg: "expected an open polynomial".into() }),
        }
        if !p.eat(&Tok::Semicolon) {
            break;
        }
    }
    p.finish()?;
    ctx.check_components(rows.len())?;
    Ok(rows)
}

/// A linear operator in the named slots; `m` rows separated by `;`.
///
/// `parse_operator(ctx, "a*D[1](p) + D[1](p*a)", &["p"])`.
pub fn parse_operator(ctx: &Context, src: &str, slots: &[&str]) -> Result<DiffOperator> {
    if slots.is_empty() {
        return Err(Error::ZeroArity);
    }
    let rows = parse_rows(ctx, src, slots)?;
    for row in &rows {
        for (w, _) in row.terms() {
            let mut seen = vec![0usize; slots.len()];
            for l in w.letters() {
                if let Family::Slot(s) = l.family {
                    seen[s as usize] += 1;
                }
            }
            if seen.iter().any(|&k| k != 1) {
                return Err(Error::NotLinear(slots.len()));
            }
        }
    }
    DiffOperator::from_rows(ctx, slots.len(), Parity::Even, rows)
}
