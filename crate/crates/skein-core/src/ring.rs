//! Exact sparse multivariate Laurent polynomials with rational exponents.
//!
//! This is the value ring for every invariant in the crate. Coefficients are
//! exact rationals and exponents are exact rationals, so substitutions like
//! `y -> q^{1/6}` or twists like `y^{9v/2}` never leave the ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    /// Substituting `var -> -1 * target^r` when some exponent of `var` is not
    /// an integer, so `(-1)^e` has no canonical value.
    #[error("substitution sign (-1)^{exponent} is not well defined for variable {var}")]
    NonIntegerSignPower { var: Var, exponent: Exponent },
    #[error("variable {0} assigned zero in complex evaluation")]
    ZeroAssignment(Var),
    #[error("variable {0} has no assignment in complex evaluation")]
    UnassignedVariable(Var),
    #[error("polynomial parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("cannot invert non-monomial polynomial {0}")]
    NonMonomial(String),
}

/// A variable name. The engine only ever uses a handful (`A`, `B`, `d`, `a`,
/// `y`, `q`), but names are free-form so CLI-supplied parameters work too.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(name.to_string())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An exact rational exponent in canonical (reduced, positive-denominator)
/// form, totally ordered by rational value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Ratio<i64>);

impl Exponent {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "exponent denominator must be nonzero");
        Exponent(Ratio::new(numerator, denominator))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("exponent fits in f64")
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl Mul for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 * rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// A monomial: a finite map from variables to nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<Var, Exponent>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial::var_pow(name, Exponent::integer(1))
    }

    pub fn var_pow(name: &str, exp: Exponent) -> Self {
        let mut m = BTreeMap::new();
        if !exp.is_zero() {
            m.insert(Var::new(name), exp);
        }
        Monomial(m)
    }

    pub fn exponent(&self, var: &Var) -> Exponent {
        self.0.get(var).copied().unwrap_or(Exponent::integer(0))
    }

    /// This monomial times `var^exp`.
    pub fn mul_var(&self, name: &str, exp: Exponent) -> Monomial {
        self.mul(&Monomial::var_pow(name, exp))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            let cur = out.get(v).copied().unwrap_or(Exponent::integer(0)) + *e;
            if cur.is_zero() {
                out.remove(v);
            } else {
                out.insert(v.clone(), cur);
            }
        }
        Monomial(out)
    }

    fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -*e)).collect())
    }

    fn render(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| format!("{}^{}", v, e))
            .collect();
        parts.join("*")
    }
}

/// The image of a variable under substitution: `sign * prod var^exp`.
///
/// The public substitution operation restricts images to `±1 *
/// target^r`; the multivariate form is what the mirror property
/// (`y -> 1/(ya)`) needs internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMonomial {
    pub negative: bool,
    pub monomial: Monomial,
}

impl SignedMonomial {
    pub fn positive(monomial: Monomial) -> Self {
        SignedMonomial {
            negative: false,
            monomial,
        }
    }

    pub fn negative(monomial: Monomial) -> Self {
        SignedMonomial {
            negative: true,
            monomial,
        }
    }

    /// `sign * target^r`.
    pub fn power(negative: bool, target: &str, r: Exponent) -> Self {
        SignedMonomial {
            negative,
            monomial: Monomial::var_pow(target, r),
        }
    }
}

/// An exact sparse multivariate Laurent polynomial with rational exponents
/// and rational coefficients. Zero coefficients are never stored, so
/// structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        LaurentPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        LaurentPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        LaurentPoly::from_term(BigRational::one(), Monomial::var(name))
    }

    /// `c * var^e` for integer `e`.
    pub fn var_pow(name: &str, e: i64) -> Self {
        LaurentPoly::from_term(
            BigRational::one(),
            Monomial::var_pow(name, Exponent::integer(e)),
        )
    }

    pub fn from_term(coeff: BigRational, monomial: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// All variables occurring with nonzero exponent.
    pub fn vars(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        vars.sort();
        vars
    }

    /// The single term `(coeff, monomial)` if this polynomial is one, i.e. a
    /// unit of the Laurent ring.
    pub fn as_monomial(&self) -> Option<(&BigRational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse_monomial(&self) -> Result<LaurentPoly, RingError> {
        match self.as_monomial() {
            Some((c, m)) => Ok(LaurentPoly::from_term(c.recip(), m.inverse())),
            None => Err(RingError::NonMonomial(self.to_canonical_text())),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power of a unit; negative powers invert the monomial.
    pub fn pow_unit(&self, n: i64) -> Result<LaurentPoly, RingError> {
        let base = if n < 0 {
            self.inverse_monomial()?
        } else {
            self.clone()
        };
        Ok(base.pow(n.unsigned_abs() as u32))
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    terms.remove(&m);
                }
            }
            None => {
                terms.insert(m, c);
            }
        }
    }

    /// Substitute `var -> image` where `image = sign * prod target^r`.
    ///
    /// Every occurrence `var^e` becomes `sign^e * prod target^{r e}`; when the
    /// sign is negative, `e` must be an integer for `sign^e` to be defined.
    pub fn substitute(&self, var: &Var, image: &SignedMonomial) -> Result<LaurentPoly, RingError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e.is_zero() {
                Self::insert_term(&mut terms, m.clone(), c.clone());
                continue;
            }
            if image.negative && !e.is_integer() {
                return Err(RingError::NonIntegerSignPower {
                    var: var.clone(),
                    exponent: e,
                });
            }
            let mut stripped = m.clone();
            stripped.0.remove(var);
            let mut scaled = Monomial::one();
            for (tv, te) in &image.monomial.0 {
                let ne = *te * e;
                if !ne.is_zero() {
                    scaled.0.insert(tv.clone(), ne);
                }
            }
            let new_mono = stripped.mul(&scaled);
            let mut coeff = c.clone();
            if image.negative && e.numer() % 2 != 0 {
                coeff = -coeff;
            }
            Self::insert_term(&mut terms, new_mono, coeff);
        }
        Ok(LaurentPoly { terms })
    }

    /// Evaluate at a complex point; every occurring variable must be assigned
    /// a nonzero value. Rational exponents use the principal branch.
    pub fn eval_complex(
        &self,
        assignment: &BTreeMap<Var, Complex64>,
    ) -> Result<Complex64, RingError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut val = Complex64::new(
                c.numer().to_f64().ok_or_else(|| {
                    RingError::Parse {
                        at: 0,
                        msg: "coefficient out of f64 range".into(),
                    }
                })?,
                0.0,
            );
            val /= c.denom().to_f64().unwrap_or(f64::NAN);
            for (v, e) in &m.0 {
                let z = assignment
                    .get(v)
                    .ok_or_else(|| RingError::UnassignedVariable(v.clone()))?;
                if z.norm_sqr() == 0.0 {
                    return Err(RingError::ZeroAssignment(v.clone()));
                }
                let p = if e.is_integer() {
                    z.powi(e.numer() as i32)
                } else {
                    z.powf(e.to_f64())
                };
                val *= p;
            }
            total += val;
        }
        Ok(total)
    }

    /// Canonical text rendering: terms sorted descending by exponent tuple,
    /// coefficients with their signs absorbed, `+` separated. This is the
    /// bit-exact comparison format used by the CLI and tests.
    pub fn to_canonical_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let all_vars = self.vars();
        let mut entries: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        entries.sort_by(|(ma, _), (mb, _)| {
            for v in &all_vars {
                let ea = ma.exponent(v);
                let eb = mb.exponent(v);
                match eb.cmp(&ea) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        });
        let rendered: Vec<String> = entries
            .into_iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{}", c)
                } else if c.is_one() {
                    m.render()
                } else if (-c).is_one() {
                    format!("-{}", m.render())
                } else {
                    format!("{}*{}", c, m.render())
                }
            })
            .collect();
        rendered.join(" + ")
    }

    /// Parse the canonical text format (plus a tolerant `a - b` spelling).
    pub fn parse(input: &str) -> Result<LaurentPoly, RingError> {
        Parser::new(input).parse_poly()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_text())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            LaurentPoly::insert_term(&mut terms, m.clone(), c.clone());
        }
        LaurentPoly { terms }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            LaurentPoly::insert_term(&mut terms, m.clone(), -c.clone());
        }
        LaurentPoly { terms }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                LaurentPoly::insert_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        LaurentPoly { terms }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, RingError> {
        Err(RingError::Parse {
            at: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn parse_poly(&mut self) -> Result<LaurentPoly, RingError> {
        let mut acc = LaurentPoly::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let term = self.parse_term()?;
            acc = if negate { acc - term } else { acc + term };
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(_) => return self.err("expected '+' or '-' between terms"),
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<LaurentPoly, RingError> {
        self.skip_ws();
        let mut coeff = BigRational::one();
        let mut monomial = Monomial::one();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
            self.skip_ws();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.parse_bigint()?;
                    let den = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.parse_bigint()?
                    } else {
                        BigInt::one()
                    };
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    coeff *= BigRational::new(num, den);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.parse_ident();
                    let exp = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.parse_exponent()?
                    } else {
                        Exponent::integer(1)
                    };
                    monomial = monomial.mul(&Monomial::var_pow(&name, exp));
                }
                _ => return self.err("expected coefficient or variable"),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if negate {
            coeff = -coeff;
        }
        Ok(LaurentPoly::from_term(coeff, monomial))
    }

    fn parse_bigint(&mut self) -> Result<BigInt, RingError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<BigInt>()
            .map_err(|_| RingError::Parse {
                at: start,
                msg: "bad integer".into(),
            })
    }

    fn parse_i64(&mut self) -> Result<i64, RingError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| RingError::Parse {
            at: start,
            msg: "integer out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn parse_exponent(&mut self) -> Result<Exponent, RingError> {
        let num = self.parse_i64()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.parse_i64()?;
            if den == 0 {
                return self.err("zero exponent denominator");
            }
            Ok(Exponent::new(num, den))
        } else {
            Ok(Exponent::integer(num))
        }
    }

    fn parse_ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string()
    }
}
