//! Two-dimensional generalized Boolean functions over Z_q.
//!
//! A function of `n` row variables `y1..yn` and `m` column variables
//! `x1..xm` maps `{0,1}^{n+m}` to Z_q. It is stored as a sum of monomials,
//! each a product of distinct variables with a coefficient in Z_q.
//!
//! The associated array has `2^n` rows and `2^m` columns. Entry `(g, i)` is
//! the function evaluated at the binary digits of `g` and `i`, where
//! variable index 1 is the **least significant** bit: `g = Σ g_h 2^{h-1}`.
//!
//! # Text format
//!
//! ```text
//! spec    := (header ";")* "f" "=" expr
//! header  := ("q" | "n" | "m") "=" integer
//! expr    := ["-"] term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := integer | "x" integer | "y" integer
//! ```
//!
//! `q` is required. `n` and `m` default to the largest index used. Whitespace
//! is ignored, and repeated variables in a term collapse since `v² = v` on
//! `{0,1}`.
//!
//! ```
//! use ccc2d::gbf::GbfPolynomial;
//!
//! let f: GbfPolynomial = "q=2; n=2; m=3; f = x1*x3 + x2*y1 + y2".parse().unwrap();
//! assert_eq!(f.evaluate_index(2, 5), 0);
//! assert_eq!(f.to_array().shape(), (4, 8));
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::array::{check_q, ZqArray};

/// Upper bound on `n` and `m`; variable sets are stored as `u32` bitmasks.
pub const MAX_VARIABLES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbfError {
    #[error("alphabet size q = {0} must be an even integer >= 2")]
    InvalidModulus(u32),
    #[error("coefficient {value} is outside Z_{q}")]
    CoefficientRange { value: i64, q: u32 },
    #[error("variable {var}{index} is outside 1..={bound}")]
    VariableIndex {
        var: char,
        index: usize,
        bound: usize,
    },
    #[error("too many variables: {0} (at most {MAX_VARIABLES} per axis)")]
    TooManyVariables(usize),
    #[error("expected {expected} {axis}-bits, got {actual}")]
    BitLength {
        axis: char,
        expected: usize,
        actual: usize,
    },
    #[error("bit value {0} is not 0 or 1")]
    NotABit(u8),
    #[error("operands differ in (q, n, m)")]
    ShapeMismatch,
    #[error("array needs {expected} entries, got {actual}")]
    ArrayLength { expected: usize, actual: usize },
    #[error("arrays must have at least one row and one column")]
    EmptyArray,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A variable of a 2D GBF. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
}

/// Product of distinct variables, as bitmasks (bit `h-1` set ⇔ variable `h` present).
///
/// Ordered by degree, then lexicographically by variables (x before y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    y: u32,
    x: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { y: 0, x: 0 };

    pub fn from_vars(vars: &[Var]) -> Self {
        vars.iter().fold(Self::ONE, |mut acc, v| {
            match *v {
                Var::X(l) => acc.x |= 1 << (l - 1),
                Var::Y(s) => acc.y |= 1 << (s - 1),
            }
            acc
        })
    }

    pub fn degree(&self) -> u32 {
        self.x.count_ones() + self.y.count_ones()
    }

    pub fn y_mask(&self) -> u32 {
        self.y
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    /// 1-based x-variable indices, ascending.
    pub fn x_vars(&self) -> impl Iterator<Item = usize> + '_ {
        mask_indices(self.x)
    }

    /// 1-based y-variable indices, ascending.
    pub fn y_vars(&self) -> impl Iterator<Item = usize> + '_ {
        mask_indices(self.y)
    }

    /// Value of the monomial at row index `g`, column index `i`.
    #[inline]
    pub fn is_active(&self, g: usize, i: usize) -> bool {
        (g as u32) & self.y == self.y && (i as u32) & self.x == self.x
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |m: &Monomial| -> Vec<(u8, usize)> {
            m.x_vars()
                .map(|l| (0, l))
                .chain(m.y_vars().map(|s| (1, s)))
                .collect()
        };
        self.degree()
            .cmp(&other.degree())
            .then_with(|| key(self).cmp(&key(other)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn mask_indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

/// A generalized Boolean function `Z_2^{n+m} → Z_q` in canonical form:
/// no zero coefficients and no repeated monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbfPolynomial {
    q: u32,
    n: usize,
    m: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl GbfPolynomial {
    /// The zero function with `n` y-variables and `m` x-variables.
    pub fn zero(q: u32, n: usize, m: usize) -> Result<Self, GbfError> {
        check_q(q)?;
        for k in [n, m] {
            if k > MAX_VARIABLES {
                return Err(GbfError::TooManyVariables(k));
            }
        }
        Ok(Self {
            q,
            n,
            m,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(q: u32, n: usize, m: usize, c: u32) -> Result<Self, GbfError> {
        let mut f = Self::zero(q, n, m)?;
        f.add_term(i64::from(c), &[])?;
        Ok(f)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of y-variables (row exponent).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of x-variables (column exponent).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u32)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    /// Coefficient of the monomial formed by `vars` (0 when absent).
    pub fn coefficient(&self, vars: &[Var]) -> u32 {
        self.terms
            .get(&Monomial::from_vars(vars))
            .copied()
            .unwrap_or(0)
    }

    fn check_var(&self, v: Var) -> Result<(), GbfError> {
        let (var, index, bound) = match v {
            Var::X(l) => ('x', l, self.m),
            Var::Y(s) => ('y', s, self.n),
        };
        if index == 0 || index > bound {
            return Err(GbfError::VariableIndex { var, index, bound });
        }
        Ok(())
    }

    /// Adds `coeff · Π vars` in place. Negative coefficients are taken mod q.
    pub fn add_term(&mut self, coeff: i64, vars: &[Var]) -> Result<(), GbfError> {
        for &v in vars {
            self.check_var(v)?;
        }
        let c = coeff.rem_euclid(i64::from(self.q)) as u32;
        self.accumulate(Monomial::from_vars(vars), c);
        Ok(())
    }

    fn accumulate(&mut self, mono: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let q = self.q;
        let entry = self.terms.entry(mono).or_insert(0);
        *entry = (*entry + c) % q;
        if *entry == 0 {
            self.terms.remove(&mono);
        }
    }

    /// Returns `f + coeff · v` for a single variable `v`.
    pub fn add_indicator_term(&self, coeff: u32, v: Var) -> Result<Self, GbfError> {
        let mut out = self.clone();
        out.add_term(i64::from(coeff), &[v])?;
        Ok(out)
    }

    /// Coefficient-wise sum mod q.
    pub fn add(&self, other: &Self) -> Result<Self, GbfError> {
        if (self.q, self.n, self.m) != (other.q, other.n, other.m) {
            return Err(GbfError::ShapeMismatch);
        }
        let mut out = self.clone();
        for (mono, c) in other.terms() {
            out.accumulate(mono, c);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c` mod q.
    pub fn scale(&self, c: u32) -> Self {
        let q = u64::from(self.q);
        let terms = self
            .terms
            .iter()
            .filter_map(|(mono, &v)| {
                let s = (u64::from(v) * u64::from(c) % q) as u32;
                (s != 0).then_some((*mono, s))
            })
            .collect();
        Self { terms, ..*self }
    }

    /// Evaluates at explicit bit-vectors; `g_bits[h-1]` is the value of `y_h`.
    pub fn evaluate(&self, g_bits: &[u8], i_bits: &[u8]) -> Result<u32, GbfError> {
        let g = bits_to_index('y', g_bits, self.n)?;
        let i = bits_to_index('x', i_bits, self.m)?;
        Ok(self.evaluate_index(g, i))
    }

    /// Evaluates at the binary digits of row index `g` and column index `i`.
    pub fn evaluate_index(&self, g: usize, i: usize) -> u32 {
        let sum: u64 = self
            .terms
            .iter()
            .filter(|(mono, _)| mono.is_active(g, i))
            .map(|(_, &c)| u64::from(c))
            .sum();
        (sum % u64::from(self.q)) as u32
    }

    /// The `2^n × 2^m` array of the function.
    pub fn to_array(&self) -> ZqArray {
        let rows = 1usize << self.n;
        let cols = 1usize << self.m;
        let mut values = Vec::with_capacity(rows * cols);
        for g in 0..rows {
            values.extend((0..cols).map(|i| self.evaluate_index(g, i)));
        }
        ZqArray::new(self.q, rows, cols, values).expect("evaluation stays within Z_q")
    }
}

fn bits_to_index(axis: char, bits: &[u8], expected: usize) -> Result<usize, GbfError> {
    if bits.len() != expected {
        return Err(GbfError::BitLength {
            axis,
            expected,
            actual: bits.len(),
        });
    }
    bits.iter()
        .enumerate()
        .try_fold(0usize, |acc, (h, &b)| match b {
            0 => Ok(acc),
            1 => Ok(acc | 1 << h),
            other => Err(GbfError::NotABit(other)),
        })
}

/// Little-endian binary digits of `value`: `bits[h-1] = value_h`.
pub fn index_to_bits(value: usize, len: usize) -> Vec<u8> {
    (0..len).map(|h| (value >> h & 1) as u8).collect()
}

impl fmt::Display for GbfPolynomial {
    /// Prints the expression part, e.g. `x1*x3 + y2 + 1`; `0` for the zero function.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let vars: Vec<String> = mono
                .x_vars()
                .map(|l| format!("x{l}"))
                .chain(mono.y_vars().map(|s| format!("y{s}")))
                .collect();
            match (c, vars.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => f.write_str(&vars.join("*"))?,
                (c, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl GbfPolynomial {
    /// Full text form including the header, parseable by [`FromStr`].
    pub fn to_spec_string(&self) -> String {
        format!("q={}; n={}; m={}; f = {}", self.q, self.n, self.m, self)
    }
}

impl FromStr for GbfPolynomial {
    type Err = GbfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> GbfError {
        GbfError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), GbfError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i64, GbfError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("integer out of range"))
    }

    fn parse(mut self) -> Result<GbfPolynomial, GbfError> {
        let (mut q, mut n, mut m) = (None, None, None);
        loop {
            let key = self
                .peek()
                .ok_or_else(|| self.err("unexpected end of input"))?;
            self.pos += 1;
            self.expect(b'=')?;
            match key {
                b'f' => break,
                b'q' => q = Some(self.integer()?),
                b'n' => n = Some(self.integer()? as usize),
                b'm' => m = Some(self.integer()? as usize),
                other => return Err(self.err(format!("unknown key '{}'", other as char))),
            }
            self.expect(b';')?;
        }
        let q = q.ok_or_else(|| self.err("missing q"))?;
        let q = u32::try_from(q).map_err(|_| GbfError::InvalidModulus(u32::MAX))?;

        let mut terms: Vec<(i64, Vec<Var>)> = Vec::new();
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let term_start = self.pos;
            let (coeff, vars) = self.term()?;
            let coeff = coeff.checked_mul(sign).ok_or_else(|| GbfError::Parse {
                pos: term_start,
                msg: "coefficient overflow".into(),
            })?;
            terms.push((coeff, vars));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => return Err(self.err("expected '+', '-' or end of input")),
            }
            self.pos += 1;
        }

        let max_index = |pick: fn(&Var) -> Option<usize>| {
            terms
                .iter()
                .flat_map(|(_, vs)| vs.iter().filter_map(pick))
                .max()
                .unwrap_or(0)
        };
        let n = n.unwrap_or_else(|| {
            max_index(|v| match v {
                Var::Y(s) => Some(*s),
                Var::X(_) => None,
            })
        });
        let m = m.unwrap_or_else(|| {
            max_index(|v| match v {
                Var::X(l) => Some(*l),
                Var::Y(_) => None,
            })
        });
        let mut f = GbfPolynomial::zero(q, n, m)?;
        for (c, vars) in terms {
            f.add_term(c, &vars)?;
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<(i64, Vec<Var>), GbfError> {
        let mut coeff: i64 = 1;
        let mut vars = Vec::new();
        loop {
            match self.peek() {
                Some(b'x') | Some(b'y') => {
                    let axis = self.src[self.pos];
                    self.pos += 1;
                    let idx = self.integer()? as usize;
                    if idx == 0 || idx > MAX_VARIABLES {
                        return Err(self.err(format!("variable index {idx} out of range")));
                    }
                    vars.push(if axis == b'x' {
                        Var::X(idx)
                    } else {
                        Var::Y(idx)
                    });
                }
                Some(c) if c.is_ascii_digit() => {
                    let k = self.integer()?;
                    coeff = coeff
                        .checked_mul(k)
                        .ok_or_else(|| self.err("coefficient overflow"))?;
                }
                _ => return Err(self.err("expected integer or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coeff, vars));
            }
        }
    }
}
