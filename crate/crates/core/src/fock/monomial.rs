use std::collections::BTreeMap;


use super::{FreeFieldData, ModeGenerator, Mode};
use crate::scalar::Scalar;

/// Canonically ordered product of creation operators applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockMonomial {
    factors: Vec<(ModeGenerator, u32)>,
}

impl FockMonomial {
    pub fn vacuum() -> Self {
        FockMonomial::default()
    }

    /// Builds a monomial from generators in any order, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (ModeGenerator, u32)>>(it: I) -> Self {
        let mut m = FockMonomial::vacuum();
        for (g, e) in it {
            m = m.times(g, e);
        }
        m
    }

    pub fn factors(&self) -> &[(ModeGenerator, u32)] {
        &self.factors
    }

    pub fn is_vacuum(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, g: &ModeGenerator) -> u32 {
        self.factors.binary_search_by(|(h, _)| h.cmp(g)).map(|i| self.factors[i].1).unwrap_or(0)
    }

    /// `g^e · self`.
    pub fn times(&self, g: ModeGenerator, e: u32) -> FockMonomial {
        if e == 0 {
            return self.clone();
        }
        let mut f = self.factors.clone();
        match f.binary_search_by(|(h, _)| h.cmp(&g)) {
            Ok(i) => f[i].1 += e,
            Err(i) => f.insert(i, (g, e)),
        }
        FockMonomial { factors: f }
    }

    /// Removes one factor `g`; returns its previous exponent.
    pub fn without_one(&self, g: &ModeGenerator) -> Option<(u32, FockMonomial)> {
        let i = self.factors.binary_search_by(|(h, _)| h.cmp(g)).ok()?;
        let e = self.factors[i].1;
        let mut f = self.factors.clone();
        if e == 1 {
            f.remove(i);
        } else {
            f[i].1 -= 1;
        }
        Some((e, FockMonomial { factors: f }))
    }

    /// Σ (−n)·e over the factors.
    pub fn degree(&self) -> Mode {
        self.factors.iter().map(|(g, e)| (-g.mode).times(i64::from(*e))).sum()
    }

    pub fn total_exponent(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn display(&self, data: &FreeFieldData) -> String {
        if self.factors.is_empty() {
            return "vac".into();
        }
        self.factors
            .iter()
            .map(|(g, e)| if *e == 1 { g.display(data) } else { format!("{}^{}", g.display(data), e) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Finite linear combination of monomials; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector<S> {
    terms: BTreeMap<FockMonomial, S>,
}

impl<S: Scalar> Default for FockVector<S> {
    fn default() -> Self {
        FockVector { terms: BTreeMap::new() }
    }
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(FockMonomial::vacuum())
    }

    pub fn monomial(m: FockMonomial) -> Self {
        let mut v = Self::zero();
        v.terms.insert(m, S::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                x.add_assign_ref(c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// `self += c · o`.
    pub fn add_scaled(&mut self, o: &FockVector<S>, c: &S) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (m, x) in &o.terms {
            if one {
                self.add_term(m.clone(), x);
            } else {
                self.add_term(m.clone(), &x.mul_ref(c));
            }
        }
    }

    pub fn scaled(&self, c: &S) -> FockVector<S> {
        let mut v = Self::zero();
        v.add_scaled(self, c);
        v
    }

    pub fn sub(&self, o: &FockVector<S>) -> FockVector<S> {
        let mut v = self.clone();
        v.add_scaled(o, &S::one().neg_ref());
        v
    }

    pub fn max_degree(&self) -> Option<Mode> {
        self.terms.keys().map(FockMonomial::degree).max()
    }

    /// Drops monomials above `d`; returns whether anything was dropped.
    pub fn truncate(&mut self, d: Mode) -> bool {
        let before = self.terms.len();
        self.terms.retain(|m, _| m.degree() <= d);
        before != self.terms.len()
    }

    /// `{monomial-string: coefficient-string}` in canonical order.
    pub fn to_string_map(&self, data: &FreeFieldData) -> BTreeMap<String, String> {
        self.terms.iter().map(|(m, c)| (m.display(data), c.to_string())).collect()
    }
}

impl<S: Scalar> FromIterator<(FockMonomial, S)> for FockVector<S> {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, S)>>(it: I) -> Self {
        let mut v = Self::zero();
        for (m, c) in it {
            v.add_term(m, &c);
        }
        v
    }
}
