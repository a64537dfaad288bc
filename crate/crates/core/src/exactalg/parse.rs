//! Text forms for rings and scalars.
//!
//! Rings: `Q`, `GF(7)`, `Q[t,t^-1]`, `Q[s]`, `GF(5)[t,t^-1,u]`. A variable listed
//! together with its inverse is Laurent; a bare variable is polynomial.
//!
//! Scalars: `3/4`, `5 mod 7`, `2*t^-1 - t + 1/2*t^2*u`. Whitespace is ignored.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactalg::field::{BaseField, FieldElem};
use crate::exactalg::ring::{Elem, LaurentDesc, Ring, RingDesc};

fn parse_base(s: &str) -> Result<BaseField> {
    if s == "Q" || s == "QQ" {
        return Ok(BaseField::Rationals);
    }
    let p = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| s.strip_prefix("F_"))
        .ok_or_else(|| Error::Parse(format!("unknown base field {s:?}")))?;
    let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad characteristic in {s:?}")))?;
    BaseField::prime(p)
}

impl FromStr for RingDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (base_str, vars) = match s.find('[') {
            None => (s.as_str(), None),
            Some(i) => {
                let inner = s[i + 1..]
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Parse(format!("unclosed bracket in {s:?}")))?;
                (&s[..i], Some(inner))
            }
        };
        let base = parse_base(base_str)?;
        let Some(inner) = vars else {
            return Ok(match base {
                BaseField::Rationals => RingDesc::Rationals,
                BaseField::Prime(p) => RingDesc::PrimeField(p),
            });
        };
        let mut names: Vec<String> = Vec::new();
        let mut polynomial: Vec<bool> = Vec::new();
        for tok in inner.split(',') {
            if let Some(v) = tok.strip_suffix("^-1") {
                let i = names
                    .iter()
                    .position(|n| n == v)
                    .ok_or_else(|| Error::Parse(format!("{tok} listed before {v}")))?;
                if !polynomial[i] {
                    return Err(Error::Parse(format!("{tok} listed twice")));
                }
                polynomial[i] = false;
            } else {
                if names.iter().any(|n| n == tok) {
                    return Err(Error::Parse(format!("variable {tok} listed twice")));
                }
                names.push(tok.to_string());
                polynomial.push(true);
            }
        }
        if names.is_empty() {
            return Err(Error::Parse("empty variable list".into()));
        }
        let desc = RingDesc::Laurent(LaurentDesc { base, vars: names, polynomial });
        desc.validate()?;
        Ok(desc)
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ring::new(s.parse()?)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn ident(&mut self) -> Option<String> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }
}

/// Parses a scalar literal in `ring`.
pub fn parse_scalar(ring: &Ring, text: &str) -> Result<Elem> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty scalar literal".into()));
    }
    let mut cur = Cursor { s: compact.as_bytes(), pos: 0 };
    let base = ring.base();
    let mut total = ring.zero();
    let mut first = true;
    while cur.peek().is_some() {
        let negative = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') || first {
            false
        } else {
            return Err(cur.err("expected + or -"));
        };
        first = false;
        let mut coeff = base.one();
        let mut exps = vec![0i32; ring.nvars()];
        loop {
            if let Some(num) = cur.digits() {
                let num = BigInt::from_str(&num).unwrap();
                let mut den = BigInt::from(1);
                if cur.eat(b'/') {
                    let d = cur.digits().ok_or_else(|| cur.err("expected denominator"))?;
                    den = BigInt::from_str(&d).unwrap();
                }
                let value = base.from_fraction(&num, &den)?;
                if cur.s[cur.pos..].starts_with(b"mod") {
                    cur.pos += 3;
                    let p: u64 = cur
                        .digits()
                        .ok_or_else(|| cur.err("expected modulus"))?
                        .parse::<u64>()
                        .map_err(|_| cur.err("modulus too large"))?;
                    if base != BaseField::Prime(p) {
                        return Err(Error::Parse(format!("residue mod {p} in ring {ring}")));
                    }
                }
                coeff = base.mul(&coeff, &value);
            } else if let Some(name) = cur.ident() {
                let i = ring
                    .var_names()
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name} for ring {ring}")))?;
                let mut e = 1i32;
                if cur.eat(b'^') {
                    let neg = cur.eat(b'-');
                    let d: i32 = cur
                        .digits()
                        .ok_or_else(|| cur.err("expected exponent"))?
                        .parse()
                        .map_err(|_| cur.err("exponent too large"))?;
                    e = if neg { -d } else { d };
                }
                exps[i] += e;
            } else {
                return Err(cur.err("expected number or variable"));
            }
            if !cur.eat(b'*') {
                break;
            }
        }
        if negative {
            coeff = base.neg(&coeff);
        }
        let term = if ring.nvars() == 0 { Elem::F(coeff) } else { ring.monomial(coeff, exps)? };
        total = ring.add(&total, &term);
    }
    Ok(total)
}

/// Inverse of [`parse_scalar`] up to canonical form.
pub fn format_scalar(ring: &Ring, a: &Elem) -> String {
    match (ring.desc(), a) {
        (RingDesc::PrimeField(p), Elem::F(FieldElem::Fp(v))) => format!("{v} mod {p}"),
        _ => ring.fmt_elem(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_strings_roundtrip() {
        for s in ["Q", "GF(7)", "Q[t,t^-1]", "Q[s]", "GF(5)[t,t^-1,u]"] {
            let d: RingDesc = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("GF(8)".parse::<RingDesc>().is_err());
        assert!("Q[t,t]".parse::<RingDesc>().is_err());
    }

    #[test]
    fn scalar_forms() {
        let q = Ring::rationals();
        assert_eq!(q.fmt_elem(&parse_scalar(&q, " 6 / 4 ").unwrap()), "3/2");
        let f7 = Ring::prime_field(7).unwrap();
        assert_eq!(parse_scalar(&f7, "10 mod 7").unwrap(), f7.from_i64(3));
        assert!(parse_scalar(&f7, "1 mod 5").is_err());
        assert!(parse_scalar(&q, "1 mod 5").is_err());
        let l: Ring = "Q[t,t^-1,u,u^-1]".parse().unwrap();
        let e = parse_scalar(&l, "2*t^-1 - t*u + 1/2*t^2*u^-3").unwrap();
        assert_eq!(parse_scalar(&l, &l.fmt_elem(&e)).unwrap(), e);
    }

    #[test]
    fn malformed_literals() {
        let l: Ring = "Q[t,t^-1]".parse().unwrap();
        for bad in ["", "1+", "t^", "x", "2**t", "1/0", "t^1.5"] {
            assert!(parse_scalar(&l, bad).is_err(), "{bad}");
        }
        let s: Ring = "Q[s]".parse().unwrap();
        assert!(parse_scalar(&s, "s^-1").is_err());
    }
}
