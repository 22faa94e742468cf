//! Normal-ordered field expressions, Fourier-mode extraction, and the A₂⁽²⁾ currents.

mod a22;
mod mode;

pub use a22::{derive_missing_currents, explicit_currents_a22, uncorrected_currents_a22, wakimoto_currents_a22, Currents, DerivedCurrent};
pub use mode::{mode, transposed_mode, ModeOperator};

use std::fmt::Write as _;

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Family, FreeFieldData};
use crate::scalar::{fmt_q, LevelPoly};

/// Basic field `∂_z^d x_{label}(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldFactor {
    pub family: Family,
    pub label: u8,
    pub deriv: u32,
}

impl FieldFactor {
    pub fn a(label: u8) -> Self {
        FieldFactor { family: Family::A, label, deriv: 0 }
    }
    pub fn a_star(label: u8) -> Self {
        FieldFactor { family: Family::AStar, label, deriv: 0 }
    }
    pub fn b(label: u8) -> Self {
        FieldFactor { family: Family::B, label, deriv: 0 }
    }
    pub fn d(self) -> Self {
        FieldFactor { deriv: self.deriv + 1, ..self }
    }
}

/// `coeff · z^{z_power} · :f₁ f₂ ⋯:`, factors kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldTerm {
    pub coeff: LevelPoly,
    pub z_power: i32,
    factors: Vec<FieldFactor>,
}

impl FieldTerm {
    pub fn new(coeff: LevelPoly, factors: Vec<FieldFactor>) -> Self {
        Self::with_z_power(coeff, 0, factors)
    }

    pub fn with_z_power(coeff: LevelPoly, z_power: i32, mut factors: Vec<FieldFactor>) -> Self {
        factors.sort();
        FieldTerm { coeff, z_power, factors }
    }

    pub fn factors(&self) -> &[FieldFactor] {
        &self.factors
    }

    /// Σ field weights + derivatives − z-power; 1 for a current.
    pub fn conformal_weight(&self) -> i64 {
        self.factors.iter().map(|f| f.family.field_weight() + i64::from(f.deriv)).sum::<i64>() - i64::from(self.z_power)
    }

    pub fn finite_weight(&self, data: &FreeFieldData) -> i64 {
        self.factors.iter().map(|f| data.field_weight(f.family, f.label)).sum()
    }

    pub fn parity(&self, data: &FreeFieldData) -> u32 {
        self.factors.iter().map(|f| data.parity(f.family, f.label)).sum::<u32>() % data.order
    }

    fn render(&self, data: &FreeFieldData) -> String {
        let mut body = String::new();
        if self.z_power != 0 {
            let _ = write!(body, "z^{} ", self.z_power);
        }
        let mut i = 0;
        let mut parts = Vec::new();
        while i < self.factors.len() {
            let f = self.factors[i];
            let mut e = 1;
            while i + e < self.factors.len() && self.factors[i + e] == f {
                e += 1;
            }
            let sym = match f.family {
                Family::AStar => "a*",
                Family::A => "a",
                Family::B => "b",
            };
            let mut s = format!("{sym}_{}(z)", data.label_name(f.family, f.label));
            if f.deriv == 1 {
                s = format!("∂_z {s}");
            } else if f.deriv > 1 {
                s = format!("∂_z^{} {s}", f.deriv);
            }
            if e > 1 {
                s = format!("({s})^{e}");
            }
            parts.push(s);
            i += e;
        }
        if self.factors.len() > 1 {
            let _ = write!(body, ":{}:", parts.join(" "));
        } else {
            body.push_str(&parts.concat());
        }
        body
    }
}

/// Formal sum of normal-ordered terms representing a current of σ-eigenvalue
/// index `j` and finite weight `weight·α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldExpr {
    pub j: u32,
    pub weight: i64,
    terms: Vec<FieldTerm>,
}

impl FieldExpr {
    /// Checks that every term has the declared parity, weight and conformal weight 1.
    pub fn new(data: &FreeFieldData, j: u32, weight: i64, terms: Vec<FieldTerm>) -> Result<Self> {
        for t in &terms {
            for f in t.factors() {
                let n = if f.family == Family::B { data.b_labels.len() } else { data.a_labels.len() };
                if usize::from(f.label) >= n {
                    return Err(Error::Validation(format!("unknown field label {}", f.label)));
                }
            }
            if t.parity(data) != j % data.order {
                return Err(Error::Validation(format!("term {} has σ-index {} ≠ {j}", t.render(data), t.parity(data))));
            }
            if t.finite_weight(data) != weight {
                return Err(Error::Validation(format!("term {} has weight {} ≠ {weight}", t.render(data), t.finite_weight(data))));
            }
            if t.conformal_weight() != 1 {
                return Err(Error::Validation(format!("term {} has conformal weight {}", t.render(data), t.conformal_weight())));
            }
        }
        let terms = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        Ok(FieldExpr { j, weight, terms })
    }

    /// No grading checks; for reproducing misgraded expressions.
    pub fn unchecked(j: u32, weight: i64, terms: Vec<FieldTerm>) -> Self {
        FieldExpr { j, weight, terms }
    }

    /// Merges terms with equal factors and z-power, drops zeros, sorts.
    pub fn normalized(&self) -> FieldExpr {
        let mut merged: Vec<FieldTerm> = Vec::new();
        for t in &self.terms {
            match merged.iter_mut().find(|m| m.z_power == t.z_power && m.factors == t.factors) {
                Some(m) => m.coeff = m.coeff.clone() + t.coeff.clone(),
                None => merged.push(t.clone()),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        merged.sort_by(|a, b| (&a.factors, a.z_power).cmp(&(&b.factors, b.z_power)));
        FieldExpr { j: self.j, weight: self.weight, terms: merged }
    }

    pub fn terms(&self) -> &[FieldTerm] {
        &self.terms
    }

    /// Coefficient of the term with exactly these factors (and no z-power).
    pub fn coefficient(&self, factors: &[FieldFactor]) -> LevelPoly {
        let mut f = factors.to_vec();
        f.sort();
        self.terms
            .iter()
            .filter(|t| t.z_power == 0 && t.factors == f)
            .fold(LevelPoly::zero(), |acc, t| acc + t.coeff.clone())
    }

    pub fn add(&self, o: &FieldExpr) -> Result<FieldExpr> {
        if (self.j, self.weight) != (o.j, o.weight) {
            return Err(Error::Validation("adding fields of different grading".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(FieldExpr { j: self.j, weight: self.weight, terms })
    }

    /// Conventional rendering, e.g. `(-1 - 2k) ∂_z a*_(0,α)(z)`.
    pub fn render(&self, data: &FreeFieldData) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let body = t.render(data);
            let c = &t.coeff;
            let (sign, mag) = match c.as_constant() {
                Some(x) if x.is_one() => ("+", String::new()),
                Some(x) if (-x.clone()).is_one() => ("-", String::new()),
                Some(x) if x < num::zero() => ("-", format!("{} ", fmt_q(&-x))),
                Some(x) => ("+", format!("{} ", fmt_q(&x))),
                None => ("+", format!("{c} ")),
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            let _ = write!(out, "{mag}{body}");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};

    #[test]
    fn validation_rejects_wrong_grading() {
        let d = FreeFieldData::a2_2();
        let one = LevelPoly::constant(q(1));
        assert!(FieldExpr::new(&d, 0, 1, vec![FieldTerm::new(one.clone(), vec![FieldFactor::a(0)])]).is_ok());
        assert!(FieldExpr::new(&d, 1, 1, vec![FieldTerm::new(one.clone(), vec![FieldFactor::a(0)])]).is_err());
        assert!(FieldExpr::new(&d, 0, 2, vec![FieldTerm::new(one.clone(), vec![FieldFactor::a(0)])]).is_err());
        assert!(FieldExpr::new(&d, 0, -1, vec![FieldTerm::new(one.clone(), vec![FieldFactor::a_star(0)])]).is_err());
        assert!(FieldExpr::new(&d, 0, -1, vec![FieldTerm::new(one, vec![FieldFactor::a_star(0).d()])]).is_ok());
    }

    #[test]
    fn rendering() {
        let d = FreeFieldData::a2_2();
        let f = FieldExpr::new(
            &d,
            0,
            -1,
            vec![
                FieldTerm::new(LevelPoly::constant(qr(1, 2)), vec![FieldFactor::a(0), FieldFactor::a_star(0), FieldFactor::a_star(0)]),
                FieldTerm::new(LevelPoly::linear(q(-1), q(-2)), vec![FieldFactor::a_star(0).d()]),
                FieldTerm::new(LevelPoly::constant(q(-1)), vec![FieldFactor::a_star(0), FieldFactor::b(0)]),
            ],
        )
        .unwrap();
        assert_eq!(
            f.render(&d),
            "1/2 :(a*_(0,α)(z))^2 a_(0,α)(z): + (-1 - 2k) ∂_z a*_(0,α)(z) - :a*_(0,α)(z) b_(0,1)(z):"
        );
    }
}
