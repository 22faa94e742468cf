//! Exact scalars: rationals, polynomials in the level `k`, and the level itself.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Level of a representation: a rational value or the indeterminate `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Value(Q),
    Symbolic,
}

impl Level {
    pub fn value(&self) -> Option<&Q> {
        match self {
            Level::Value(k) => Some(k),
            Level::Symbolic => None,
        }
    }

    /// The level as a polynomial in `k`.
    pub fn as_poly(&self) -> LevelPoly {
        match self {
            Level::Value(k) => LevelPoly::constant(k.clone()),
            Level::Symbolic => LevelPoly::k(),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Value(k) => f.write_str(&fmt_q(k)),
            Level::Symbolic => f.write_str("k"),
        }
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "symbolic" || s.trim() == "k" {
            Ok(Level::Symbolic)
        } else {
            parse_rational(s).map(Level::Value)
        }
    }
}

/// Polynomial in the level indeterminate `k` with rational coefficients.
///
/// `coeffs[i]` multiplies `k^i`; trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LevelPoly {
    coeffs: Vec<Q>,
}

impl LevelPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        LevelPoly { coeffs }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn k() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// `a + b k`.
    pub fn linear(a: Q, b: Q) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree in `k`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, k: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * k + c;
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl serde::Serialize for LevelPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for LevelPoly {
    /// `-1 - 2k` style; wrapped in parentheses when it has several terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, &Q)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (idx, (pow, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            let body = match pow {
                0 => fmt_q(&mag),
                _ => {
                    let var = if *pow == 1 { "k".to_string() } else { format!("k^{pow}") };
                    if mag.is_one() {
                        var
                    } else {
                        format!("{}{}", fmt_q(&mag), var)
                    }
                }
            };
            if idx == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        if terms.len() > 1 {
            write!(f, "({s})")
        } else {
            f.write_str(&s)
        }
    }
}

impl std::ops::Add for LevelPoly {
    type Output = LevelPoly;
    fn add(self, o: LevelPoly) -> LevelPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        LevelPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl std::ops::Sub for LevelPoly {
    type Output = LevelPoly;
    fn sub(self, o: LevelPoly) -> LevelPoly {
        self + (-o)
    }
}

impl std::ops::Neg for LevelPoly {
    type Output = LevelPoly;
    fn neg(self) -> LevelPoly {
        LevelPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for LevelPoly {
    type Output = LevelPoly;
    fn mul(self, o: LevelPoly) -> LevelPoly {
        mul_poly(&self, &o)
    }
}

fn mul_poly(a: &LevelPoly, b: &LevelPoly) -> LevelPoly {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return LevelPoly::default();
    }
    let mut out = vec![Q::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    LevelPoly::new(out)
}

impl Zero for LevelPoly {
    fn zero() -> Self {
        LevelPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LevelPoly {
    fn one() -> Self {
        LevelPoly::constant(Q::one())
    }
}

/// Coefficient ring of Fock vectors: `Q` for a numeric level, `LevelPoly` for symbolic `k`.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + fmt::Display + Zero + One + Send + Sync + 'static
{
    fn from_q(q: &Q) -> Self;
    /// Specializes a level-dependent coefficient at `level`.
    fn from_level_poly(p: &LevelPoly, level: &Level) -> Result<Self>;
    fn mul_ref(&self, o: &Self) -> Self;
    fn add_assign_ref(&mut self, o: &Self);
    fn neg_ref(&self) -> Self;
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn from_level_poly(p: &LevelPoly, level: &Level) -> Result<Self> {
        match level {
            Level::Value(k) => Ok(p.eval(k)),
            Level::Symbolic => p.as_constant().ok_or_else(|| {
                Error::Validation("symbolic level needs polynomial scalars".into())
            }),
        }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Scalar for LevelPoly {
    fn from_q(q: &Q) -> Self {
        LevelPoly::constant(q.clone())
    }
    fn from_level_poly(p: &LevelPoly, level: &Level) -> Result<Self> {
        Ok(match level {
            Level::Value(k) => LevelPoly::constant(p.eval(k)),
            Level::Symbolic => p.clone(),
        })
    }
    fn mul_ref(&self, o: &Self) -> Self {
        mul_poly(self, o)
    }
    fn add_assign_ref(&mut self, o: &Self) {
        if self.coeffs.len() < o.coeffs.len() {
            self.coeffs.resize(o.coeffs.len(), Q::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
}
