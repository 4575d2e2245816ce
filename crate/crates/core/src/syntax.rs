//! Text syntax for monomial ideals: comma-separated monomials such as
//! `x^2*y, y^3`. `1` is the unit monomial and a lone `0` the zero ideal.
//! The output of `Display` parses back to the same canonical form.
//!
//! Family specs use the `Display` form of [`FamilySpec`], e.g.
//! `power(x^2, y^3)`, `maxpower(sigma)`, `valuation[(2, 1) >= 2]` or
//! `product(power(x, y); saturation(x^2, x*y))`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::families::{ExponentSequence, FamilySpec, ValuationWeight};
use crate::ideal::MonomialIdeal;
use crate::rational::parse_q;
use crate::ring::{AmbientRing, Exponent};

pub fn parse_ideal(ring: &Arc<AmbientRing>, text: &str) -> Result<MonomialIdeal> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    p.skip_ws();
    let wrapped = p.eat(b'(');
    p.skip_ws();
    let gens = if p.peek() == Some(b'0') && p.is_lone_zero() {
        p.pos += 1;
        Vec::new()
    } else {
        let mut gens = vec![p.monomial()?];
        loop {
            p.skip_ws();
            if !p.eat(b',') {
                break;
            }
            p.skip_ws();
            gens.push(p.monomial()?);
        }
        gens
    };
    p.skip_ws();
    if wrapped && !p.eat(b')') {
        return Err(p.error("expected `)`"));
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    MonomialIdeal::minimalize(ring, gens)
}

pub fn parse_monomial(ring: &Arc<AmbientRing>, text: &str) -> Result<Exponent> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    p.skip_ws();
    let m = p.monomial()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(m)
}

pub fn format_monomial(ring: &AmbientRing, a: &Exponent) -> String {
    let mut s = String::new();
    crate::ideal::write_monomial(&mut s, ring.names(), &a.0).expect("writing to a String");
    s
}

pub fn parse_family(ring: &Arc<AmbientRing>, text: &str) -> Result<FamilySpec> {
    family_in(ring, text, text)
}

/// Parses `part`, a slice of `whole`, reporting columns within `whole`.
fn family_in(ring: &Arc<AmbientRing>, whole: &str, part: &str) -> Result<FamilySpec> {
    let t = part.trim();
    let ideal = |s: &str| ideal_in(ring, whole, s);
    let malformed = |msg: &str| Error::MalformedSpec(format!("{msg} in `{t}`"));
    if let Some(body) = call(t, "power", '(', ')') {
        return Ok(FamilySpec::Power(ideal(body)?));
    }
    if let Some(body) = call(t, "saturation", '(', ')') {
        return Ok(FamilySpec::Saturation(ideal(body)?));
    }
    if let Some(body) = call(t, "symbolic", '(', ')') {
        let parts = split_top(body, ';');
        if parts.len() != 2 {
            return Err(malformed("symbolic needs two ideals separated by `;`"));
        }
        return Ok(FamilySpec::Symbolic { ideal: ideal(parts[0])?, by: ideal(parts[1])? });
    }
    if let Some(body) = call(t, "product", '(', ')') {
        let parts = split_top(body, ';');
        if parts.len() != 2 {
            return Err(malformed("product needs two families separated by `;`"));
        }
        return Ok(FamilySpec::Product(
            Box::new(family_in(ring, whole, parts[0])?),
            Box::new(family_in(ring, whole, parts[1])?),
        ));
    }
    if let Some(body) = call(t, "maxpower", '(', ')') {
        let sequence = match body.trim() {
            "sigma" => ExponentSequence::Sigma,
            "log" => ExponentSequence::Log,
            other => return Err(malformed(&format!("unknown exponent sequence `{other}`"))),
        };
        return Ok(FamilySpec::MaxPowerSeq { ring: Arc::clone(ring), sequence });
    }
    if let Some(body) = call(t, "maxpower", '[', ']') {
        let table = split_top(body, ',')
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<u64>().map_err(|_| malformed(&format!("bad exponent `{}`", s.trim()))))
            .collect::<Result<Vec<_>>>()?;
        return Ok(FamilySpec::MaxPowerSeq { ring: Arc::clone(ring), sequence: ExponentSequence::Table(table) });
    }
    if let Some(body) = call(t, "valuation", '[', ']') {
        let mut constraints = Vec::new();
        for part in split_top(body, ';') {
            let (lhs, rhs) = part.split_once(">=").ok_or_else(|| malformed("expected `(weights) >= threshold`"))?;
            let lhs = lhs.trim();
            let inner = lhs
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| malformed("weights must be parenthesized"))?;
            let weights = inner
                .split(',')
                .map(|w| parse_q(w.trim()).ok_or_else(|| malformed(&format!("bad weight `{}`", w.trim()))))
                .collect::<Result<Vec<_>>>()?;
            let threshold =
                parse_q(rhs.trim()).ok_or_else(|| malformed(&format!("bad threshold `{}`", rhs.trim())))?;
            constraints.push(ValuationWeight::new(weights, threshold));
        }
        return Ok(FamilySpec::Valuation { ring: Arc::clone(ring), constraints });
    }
    if let Some(body) = call(t, "table", '[', ']') {
        let members = split_top(body, ',')
            .into_iter()
            .filter(|s| !s.trim().is_empty())
            .map(ideal)
            .collect::<Result<Vec<_>>>()?;
        return Ok(FamilySpec::Table(members));
    }
    Err(malformed("unknown family kind"))
}

fn ideal_in(ring: &Arc<AmbientRing>, whole: &str, part: &str) -> Result<MonomialIdeal> {
    let offset = part.as_ptr() as usize - whole.as_ptr() as usize;
    parse_ideal(ring, part).map_err(|e| match e {
        Error::Parse { column, message } => Error::Parse { column: column + offset, message },
        other => other,
    })
}

fn call<'a>(t: &'a str, name: &str, open: char, close: char) -> Option<&'a str> {
    let rest = t.strip_prefix(name)?.trim_start().strip_prefix(open)?;
    let body = rest.strip_suffix(close)?;
    // The closing bracket must match the opening one.
    let mut depth = 0i32;
    for c in body.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    (depth == 0).then_some(body)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<AmbientRing>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn is_lone_zero(&self) -> bool {
        let rest = &self.src[self.pos + 1..];
        rest.iter().all(|c| c.is_ascii_whitespace() || *c == b')')
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().map_err(|_| Error::Parse { column: start + 1, message: "exponent too large".into() })
    }

    fn factor(&mut self, acc: &mut [u32]) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                if self.number()? != 1 {
                    return Err(Error::Parse {
                        column: start + 1,
                        message: "coefficients are not allowed; only `1` may appear as a constant".into(),
                    });
                }
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let idx = self.ring.index_of(name).ok_or_else(|| Error::Parse {
                    column: start + 1,
                    message: format!("unknown variable `{name}`"),
                })?;
                self.skip_ws();
                let e = if self.eat(b'^') {
                    self.skip_ws();
                    self.number()?
                } else {
                    1
                };
                acc[idx] = acc[idx]
                    .checked_add(e)
                    .ok_or_else(|| Error::Parse { column: start + 1, message: "exponent too large".into() })?;
                Ok(())
            }
            _ => Err(self.error("expected a monomial")),
        }
    }

    fn monomial(&mut self) -> Result<Exponent> {
        let mut acc = vec![0u32; self.ring.dim()];
        self.factor(&mut acc)?;
        loop {
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
            self.skip_ws();
            self.factor(&mut acc)?;
        }
        Ok(Exponent(acc))
    }
}
