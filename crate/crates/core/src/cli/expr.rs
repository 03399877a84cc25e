//! Expressions of the job grammar: scalars in z = ζ_m and linear
//! combinations of words such as `2*x1x0 - (1/2)*x0x1`.
//!
//! Everything parses into a noncommutative polynomial in the letters; a
//! scalar is the part on the empty word. Juxtaposed or `*`-joined factors
//! multiply by concatenation.

use std::collections::BTreeMap;

use crate::linalg::{SVec, Scalar};
use crate::scalar::{CycloField, Rational};

type Poly = BTreeMap<Vec<u32>, Scalar>;

pub struct ExprParser<'a> {
    field: &'static CycloField,
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

fn normalize(s: &str) -> String {
    s.replace(['−', '–'], "-").replace('·', "*")
}

pub fn parse_scalar(field: &'static CycloField, s: &str) -> Result<Scalar, String> {
    let p = ExprParser::new(field, s).parse_all()?;
    if p.keys().any(|w| !w.is_empty()) {
        return Err(format!("expected a scalar, found letters in '{s}'"));
    }
    Ok(p.get(&Vec::new()).cloned().unwrap_or_else(|| field.zero()))
}

/// A homogeneous element of V^⊗n with letters below `dim`; returns (n, vector).
pub fn parse_tensor(field: &'static CycloField, dim: usize, s: &str) -> Result<(usize, SVec), String> {
    let p = ExprParser::new(field, s).parse_all()?;
    let mut deg = None;
    let mut out = Vec::new();
    for (w, c) in p {
        if deg.is_some_and(|d| d != w.len()) {
            return Err(format!("'{s}' is not homogeneous"));
        }
        deg = Some(w.len());
        let mut idx = 0u32;
        for l in &w {
            if *l as usize >= dim {
                return Err(format!("letter x{l} out of range for dimension {dim}"));
            }
            idx = idx * dim as u32 + l;
        }
        out.push((idx, c));
    }
    out.sort_by_key(|e| e.0);
    Ok((deg.unwrap_or(0), out))
}

/// `[[a, b], [c, d]]`.
pub fn parse_matrix(field: &'static CycloField, s: &str) -> Result<Vec<Vec<Scalar>>, String> {
    let t: String = normalize(s).chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| "a matrix must be written [[..], ..]".to_string())?;
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(|| "expected '[' to open a matrix row".to_string())?;
        let end = body.find(']').ok_or_else(|| "unterminated matrix row".to_string())?;
        let row = body[..end]
            .split(',')
            .map(|e| parse_scalar(field, e))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
        rest = body[end + 1..].strip_prefix(',').unwrap_or(&body[end + 1..]);
    }
    Ok(rows)
}

impl<'a> ExprParser<'a> {
    fn new(field: &'static CycloField, src: &'a str) -> Self {
        ExprParser { field, chars: normalize(src).chars().collect(), pos: 0, src }
    }

    fn parse_all(mut self) -> Result<Poly, String> {
        let p = self.sum()?;
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(format!("unexpected '{}' in '{}'", self.chars[self.pos], self.src));
        }
        Ok(p)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Poly, String> {
        let mut acc = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.product()?;
            let t = if c == '-' { neg(&t) } else { t };
            acc = add(&acc, &t);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let r = self.unary()?;
                    acc = mul(&acc, &r);
                }
                Some('/') => {
                    self.pos += 1;
                    let r = self.unary()?;
                    let s = as_scalar(self.field, &r).ok_or_else(|| format!("can only divide by scalars in '{}'", self.src))?;
                    let inv = s.inv().map_err(|_| format!("division by zero in '{}'", self.src))?;
                    acc = acc.into_iter().map(|(w, c)| (w, &c * &inv)).collect();
                }
                // juxtaposition: x0x1, 2z, (..)x0
                Some(c) if c == 'x' || c == 'e' || c == 'z' || c == '(' => {
                    let r = self.power()?;
                    acc = mul(&acc, &r);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, String> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(neg(&self.unary()?))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg_exp = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.integer().ok_or_else(|| format!("missing exponent after '^' in '{}'", self.src))?;
        let e = i64::try_from(e).map_err(|_| "exponent too large".to_string())?;
        if let Some(s) = as_scalar(self.field, &base) {
            let r = s.pow(if neg_exp { -e } else { e }).map_err(|_| format!("zero to a negative power in '{}'", self.src))?;
            return Ok(scalar_poly(r));
        }
        if neg_exp {
            return Err(format!("negative power of a tensor in '{}'", self.src));
        }
        let mut acc = scalar_poly(self.field.one());
        for _ in 0..e {
            acc = mul(&acc, &base);
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn atom(&mut self) -> Result<Poly, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(format!("missing ')' in '{}'", self.src));
                }
                self.pos += 1;
                Ok(p)
            }
            Some('z') => {
                self.pos += 1;
                Ok(scalar_poly(self.field.zeta_pow(1)))
            }
            Some('x' | 'e') => {
                self.pos += 1;
                let l = self.integer().ok_or_else(|| format!("a letter needs an index in '{}'", self.src))?;
                let l = u32::try_from(l).map_err(|_| "letter index too large".to_string())?;
                Ok(BTreeMap::from([(vec![l], self.field.one())]))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: num_bigint::BigInt = digits.parse().map_err(|_| format!("bad number '{digits}'"))?;
                Ok(scalar_poly(self.field.from_rational(Rational::from_bigints(n, 1.into()))))
            }
            Some(c) => Err(format!("unexpected '{c}' in '{}'", self.src)),
            None => Err(format!("unexpected end of '{}'", self.src)),
        }
    }
}

fn scalar_poly(s: Scalar) -> Poly {
    let mut p = BTreeMap::new();
    if !s.is_zero() {
        p.insert(Vec::new(), s);
    }
    p
}

/// The constant term, if `p` has no other terms.
fn as_scalar(field: &'static CycloField, p: &Poly) -> Option<Scalar> {
    match p.len() {
        0 => Some(field.zero()),
        1 => p.get(&Vec::new()).cloned(),
        _ => None,
    }
}

fn neg(p: &Poly) -> Poly {
    p.iter().map(|(w, c)| (w.clone(), c.neg())).collect()
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        let v = match out.remove(w) {
            Some(x) => &x + c,
            None => c.clone(),
        };
        if !v.is_zero() {
            out.insert(w.clone(), v);
        }
    }
    out
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (w1, c1) in a {
        for (w2, c2) in b {
            let mut w = w1.clone();
            w.extend(w2);
            out = add(&out, &BTreeMap::from([(w, c1 * c2)]));
        }
    }
    out
}
