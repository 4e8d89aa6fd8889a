//! Ring-spec strings.
//!
//! ```text
//! spec    := ring [ext]
//! ring    := local ( ("x" | "×") local )*
//! local   := "Z" INT [ "[x]/(" poly ")" ]
//!          | "GR(" INT "^" INT "," INT ")"
//! ext     := "ext" "m=" INT [ "f=" poly ]
//! poly    := ["-"] term ( ("+" | "-") term )*
//! term    := INT [ "*" ] "x" [ "^" INT ] | "x" [ "^" INT ] | INT
//! ```
//!
//! `Z N` with composite `N` is split into its prime-power factors.
//! Products must separate factors with whitespace around `x`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::field::factorize;
use crate::ring::{prime_power, LocalRing};

/// Extension clause: degree and optional integer modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClause {
    pub m: usize,
    pub f: Option<Vec<i64>>,
}

impl ExtClause {
    pub fn build(&self, base: Arc<LocalRing>) -> Result<Extension> {
        let ext = match &self.f {
            Some(f) => Extension::new(base, f)?,
            None => Extension::with_default_modulus(base, self.m)?,
        };
        if ext.m() != self.m {
            return Err(Error::InvalidParams(format!(
                "f has degree {} but m={}",
                ext.m(),
                self.m
            )));
        }
        Ok(ext)
    }
}

#[derive(Clone, Debug)]
pub struct RingSpec {
    pub factors: Vec<LocalRing>,
    /// Set when the ring was written as `Z N` with composite `N`.
    pub crt_modulus: Option<u64>,
    pub ext: Option<ExtClause>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse { position: self.pos, expected: expected.into() })
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&format!("'{tok}'"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("integer");
        }
        let v = self.rest()[..digits].parse().or_else(|_| self.err("integer below 2^64"))?;
        self.pos += digits;
        Ok(v)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    /// Parses a polynomial in `x` with integer coefficients.
    fn poly(&mut self) -> Result<Vec<i64>> {
        let mut coeffs: Vec<i64> = Vec::new();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            self.skip_ws();
            let start = self.pos;
            let c = if self.rest().starts_with(|ch: char| ch.is_ascii_digit()) {
                let c = self.int()? as i64;
                self.skip_ws();
                self.eat("*");
                self.skip_ws();
                Some(c)
            } else {
                None
            };
            let deg = if self.eat("x") {
                if self.eat("^") {
                    self.int()? as usize
                } else {
                    1
                }
            } else if c.is_some() {
                0
            } else {
                self.pos = start;
                return self.err("polynomial term");
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] += sign * c.unwrap_or(1);
            self.skip_ws();
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok(coeffs);
            }
        }
    }

    fn local(&mut self, factors: &mut Vec<LocalRing>, crt: &mut Option<u64>) -> Result<()> {
        self.skip_ws();
        if self.eat("GR(") {
            let p = self.int()?;
            self.expect("^")?;
            let s = self.int()? as u32;
            self.expect(",")?;
            self.skip_ws();
            let mu = self.int()? as usize;
            self.expect(")")?;
            let (p, s) = prime_power(p.pow(s)).map(|_| (p, s))?;
            factors.push(LocalRing::gr(p, s, mu)?);
            return Ok(());
        }
        if !self.eat("Z") {
            return self.err("'Z' or 'GR('");
        }
        self.skip_ws();
        let n_pos = self.pos;
        let n = self.int()?;
        if self.eat("[x]/(") {
            let g = self.poly()?;
            self.expect(")")?;
            let (p, s) = prime_power(n)?;
            let m = n as i64;
            let g: Vec<u64> = g.iter().map(|c| c.rem_euclid(m) as u64).collect();
            factors.push(LocalRing::quotient(p, s, &g)?);
            return Ok(());
        }
        if n < 2 {
            self.pos = n_pos;
            return self.err("modulus >= 2");
        }
        let f = factorize(n);
        if f.len() > 1 {
            *crt = Some(n);
        }
        for (p, e) in f {
            factors.push(LocalRing::zmod(p, e)?);
        }
        Ok(())
    }

    fn ext(&mut self) -> Result<ExtClause> {
        self.skip_ws();
        self.eat("ext");
        self.skip_ws();
        self.expect("m=")?;
        let m = self.int()? as usize;
        self.skip_ws();
        let f = if self.eat("f=") { Some(self.poly()?) } else { None };
        Ok(ExtClause { m, f })
    }
}

/// Parses a full spec such as `Z4 ext m=20` or `Z2 x Z9 ext m=10`.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut p = Parser::new(text);
    let mut factors = Vec::new();
    let mut crt = None;
    let mut clauses = 1;
    p.local(&mut factors, &mut crt)?;
    loop {
        let before = p.pos;
        p.skip_ws();
        let had_ws = p.pos > before;
        if p.eat("×") || (had_ws && p.rest().starts_with("x ") && p.eat("x")) {
            clauses += 1;
            p.local(&mut factors, &mut crt)?;
        } else {
            break;
        }
    }
    let ext = if p.at_end() {
        None
    } else if p.rest().starts_with("ext") {
        Some(p.ext()?)
    } else {
        return p.err("'x', 'ext' or end of input");
    };
    if !p.at_end() {
        return p.err("end of input");
    }
    // explicit products never use the integer CRT view
    let crt_modulus = if clauses == 1 { crt } else { None };
    Ok(RingSpec { factors, crt_modulus, ext })
}

/// Parses a spec that must describe a single local ring.
pub fn parse_local_ring(text: &str) -> Result<LocalRing> {
    let mut spec = parse_ring_spec(text)?;
    if spec.factors.len() != 1 {
        return Err(Error::NotLocal(format!("{text} has {} local factors", spec.factors.len())));
    }
    Ok(spec.factors.pop().unwrap())
}

/// Parses `ext m=<int> [f=<poly>]` (the `ext` keyword is optional).
pub fn parse_ext_clause(text: &str) -> Result<ExtClause> {
    let mut p = Parser::new(text);
    let clause = p.ext()?;
    if !p.at_end() {
        return p.err("end of input");
    }
    Ok(clause)
}

pub fn parse_extension(base: Arc<LocalRing>, text: &str) -> Result<Extension> {
    parse_ext_clause(text)?.build(base)
}
