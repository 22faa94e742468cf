//! Twisted βγ and Heisenberg Fock spaces, their tensor products, the restricted
//! critical-level space and the contragredient space.

mod dual;
mod monomial;
pub(crate) mod space;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{fmt_root_multiple, Decomposition, LieAlgebra};
use crate::scalar::Q;

pub use dual::{adjoint_holds, pairing, random_word, transpose, transpose_word, OscillatorWord};
pub use monomial::{FockMonomial, FockVector};
pub use space::{apply_oscillator, basis_up_to_degree, Applied, FockSpace, SpaceKind};

/// Oscillator family. The derived order `a* < a < b` is the canonical one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    AStar,
    A,
    B,
}

impl Family {
    /// Conformal weight of the basic field: 0 for a*, 1 for a and b.
    pub fn field_weight(self) -> i64 {
        match self {
            Family::AStar => 0,
            Family::A | Family::B => 1,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Family::AStar => "a*",
            Family::A => "a",
            Family::B => "b",
        }
    }
}

/// Exact mode index in (1/N)ℤ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(Ratio<i64>);

impl Mode {
    pub const ZERO: Mode = Mode(Ratio::new_raw(0, 1));

    pub fn new(n: i64, d: i64) -> Self {
        Mode(Ratio::new(n, d))
    }
    pub fn int(n: i64) -> Self {
        Mode(Ratio::from_integer(n))
    }
    /// `j/N`.
    pub fn offset(j: u32, n: u32) -> Self {
        Mode::new(i64::from(j), i64::from(n))
    }
    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }
    pub fn to_q(self) -> Q {
        Q::new((*self.0.numer()).into(), (*self.0.denom()).into())
    }
    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }
    /// Whether `self ∈ offset + ℤ`.
    pub fn in_coset(self, offset: Mode) -> bool {
        (self - offset).is_integer()
    }
    pub fn is_negative(self) -> bool {
        self.0.is_negative()
    }
    pub fn is_positive(self) -> bool {
        self.0.is_positive()
    }
    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }
    pub fn abs(self) -> Mode {
        Mode(self.0.abs())
    }
    /// `self · e`.
    pub fn times(self, e: i64) -> Mode {
        Mode(self.0 * e)
    }
    /// Largest element of `offset + ℤ` that is `≤ self`.
    pub fn floor_in_coset(self, offset: Mode) -> Mode {
        let t = (self - offset).0.floor();
        offset + Mode(t)
    }
    /// Elements of `offset + ℤ` in `[lo, hi]`, increasing.
    pub fn coset_range(offset: Mode, lo: Mode, hi: Mode) -> Vec<Mode> {
        let mut out = Vec::new();
        let mut m = lo.floor_in_coset(offset);
        if m < lo {
            m = m + Mode::int(1);
        }
        while m <= hi {
            out.push(m);
            m = m + Mode::int(1);
        }
        out
    }
}

impl std::ops::Add for Mode {
    type Output = Mode;
    fn add(self, o: Mode) -> Mode {
        Mode(self.0 + o.0)
    }
}
impl std::ops::Sub for Mode {
    type Output = Mode;
    fn sub(self, o: Mode) -> Mode {
        Mode(self.0 - o.0)
    }
}
impl std::ops::Neg for Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        Mode(-self.0)
    }
}
impl std::iter::Sum for Mode {
    fn sum<I: Iterator<Item = Mode>>(it: I) -> Mode {
        it.fold(Mode::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a mode: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Mode::new(n, d))
            }
            None => Ok(Mode::int(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Label `(j, α)` of an a/a* oscillator, α ∈ Δ⁺ⱼ as a multiple of the simple root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootLabel {
    pub j: u32,
    pub weight: i64,
}

/// Label `(i, a)` of a b oscillator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CartanLabel {
    pub i: u32,
    pub a: i64,
}

/// Oscillator content of the twisted free-field realization, derived from the
/// eigenspace decomposition: one a/a* pair per positive root space and one b per
/// Cartan basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFieldData {
    pub order: u32,
    pub dual_coxeter: u32,
    pub a_labels: Vec<RootLabel>,
    pub b_labels: Vec<CartanLabel>,
    /// `(H_{i,a}, H_{j,b})` on the b labels.
    pub b_form: Vec<Vec<Q>>,
    /// α(H_{0,a}) for the `b_labels` with `i = 0`, in order.
    pub alpha_values: Vec<Q>,
    /// Inverse of the form on h₀ (for pairings of finite weights).
    pub h0_form_inverse: Vec<Vec<Q>>,
}

impl FreeFieldData {
    pub fn new(g: &LieAlgebra, d: &Decomposition) -> Result<Self> {
        if d.alpha_values.len() != 1 {
            return Err(Error::Unsupported("free-field data needs a rank-one g₀".into()));
        }
        let mut a_labels = Vec::new();
        let mut b_idx = Vec::new();
        let mut b_labels = Vec::new();
        for s in &d.summands {
            for w in d.positive_weights(s.j) {
                a_labels.push(RootLabel { j: s.j, weight: w });
            }
            for &c in &s.cartan {
                let l = g.labels()[c];
                b_labels.push(CartanLabel { i: s.j, a: l.weight });
                b_idx.push(c);
            }
        }
        let b_form = b_idx
            .iter()
            .map(|&x| b_idx.iter().map(|&y| g.form_basis(x, y).clone()).collect())
            .collect();
        let h0: Vec<usize> = d.cartan0.clone();
        let h0_form = crate::linalg::Matrix::from_rows(
            h0.len(),
            h0.iter().map(|&x| h0.iter().map(|&y| g.form_basis(x, y).clone()).collect()).collect(),
        );
        let inv = crate::linalg::inverse(&h0_form)
            .ok_or_else(|| Error::Structural("form is degenerate on h₀".into()))?;
        Ok(FreeFieldData {
            order: d.order,
            dual_coxeter: g.dual_coxeter(),
            a_labels,
            b_labels,
            b_form,
            alpha_values: d.alpha_values.clone(),
            h0_form_inverse: inv.rows,
        })
    }

    /// Data for A₂⁽²⁾.
    pub fn a2_2() -> Self {
        let (g, s) = crate::lie::build_a2_2();
        let d = crate::lie::eigenspace_decompose(&g, &s).expect("A2(2) decomposes");
        FreeFieldData::new(&g, &d).expect("A2(2) has rank-one g0")
    }

    pub fn a_label(&self, j: u32, weight: i64) -> Option<u8> {
        self.a_labels.iter().position(|l| l.j == j && l.weight == weight).map(|i| i as u8)
    }

    pub fn b_label(&self, i: u32, a: i64) -> Option<u8> {
        self.b_labels.iter().position(|l| l.i == i && l.a == a).map(|x| x as u8)
    }

    /// Index of a b label among the zero-mode (i = 0) labels.
    pub fn zero_mode_slot(&self, label: u8) -> Option<usize> {
        let l = self.b_labels[label as usize];
        (l.i == 0).then(|| self.b_labels[..label as usize].iter().filter(|x| x.i == 0).count())
    }

    pub fn n_zero_modes(&self) -> usize {
        self.b_labels.iter().filter(|x| x.i == 0).count()
    }

    /// Coset `c + ℤ` in which modes of the given oscillator live.
    pub fn lattice_offset(&self, family: Family, label: u8) -> Mode {
        let n = self.order;
        let j = match family {
            Family::A => self.a_labels[label as usize].j,
            Family::AStar => (n - self.a_labels[label as usize].j % n) % n,
            Family::B => self.b_labels[label as usize].i,
        };
        Mode::offset(j, n)
    }

    /// σ-eigenvalue index contributed by one factor of this oscillator.
    pub fn parity(&self, family: Family, label: u8) -> u32 {
        let n = self.order;
        match family {
            Family::A => self.a_labels[label as usize].j % n,
            Family::AStar => (n - self.a_labels[label as usize].j % n) % n,
            Family::B => self.b_labels[label as usize].i % n,
        }
    }

    /// Finite-weight contribution of the field (multiple of α).
    pub fn field_weight(&self, family: Family, label: u8) -> i64 {
        match family {
            Family::A => self.a_labels[label as usize].weight,
            Family::AStar => -self.a_labels[label as usize].weight,
            Family::B => 0,
        }
    }

    /// Label `(−j, α)` used by the transpose map.
    pub fn transpose_label(&self, family: Family, label: u8) -> Option<u8> {
        let n = self.order;
        match family {
            Family::A | Family::AStar => {
                let l = self.a_labels[label as usize];
                self.a_label((n - l.j % n) % n, l.weight)
            }
            Family::B => None,
        }
    }

    pub fn label_name(&self, family: Family, label: u8) -> String {
        match family {
            Family::A | Family::AStar => {
                let l = self.a_labels[label as usize];
                format!("({},{})", l.j, fmt_root_multiple(l.weight))
            }
            Family::B => {
                let l = self.b_labels[label as usize];
                format!("({},{})", l.i, l.a)
            }
        }
    }

    fn check_label(&self, family: Family, label: u8) -> Result<()> {
        let ok = match family {
            Family::A | Family::AStar => (label as usize) < self.a_labels.len(),
            Family::B => (label as usize) < self.b_labels.len(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("unknown {} label {label}", family.symbol())))
        }
    }
}

/// One oscillator `a_{n,(j,α)}`, `a*_{n,(j,α)}` or `b_{n,(i,a)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeGenerator {
    pub family: Family,
    pub label: u8,
    pub mode: Mode,
}

impl ModeGenerator {
    pub fn new(family: Family, label: u8, mode: Mode) -> Self {
        ModeGenerator { family, label, mode }
    }
    pub fn a(label: u8, mode: Mode) -> Self {
        Self::new(Family::A, label, mode)
    }
    pub fn a_star(label: u8, mode: Mode) -> Self {
        Self::new(Family::AStar, label, mode)
    }
    pub fn b(label: u8, mode: Mode) -> Self {
        Self::new(Family::B, label, mode)
    }

    /// Checks the label and that the mode lies on the oscillator's lattice.
    pub fn validate(&self, data: &FreeFieldData) -> Result<()> {
        data.check_label(self.family, self.label)?;
        let off = data.lattice_offset(self.family, self.label);
        if !self.mode.in_coset(off) {
            return Err(Error::Validation(format!(
                "mode {} of {}{} is not in {} + ℤ",
                self.mode,
                self.family.symbol(),
                data.label_name(self.family, self.label),
                off
            )));
        }
        Ok(())
    }

    pub fn display(&self, data: &FreeFieldData) -> String {
        format!("{}[{}]{}", self.family.symbol(), self.mode, data.label_name(self.family, self.label))
    }
}

impl Ord for ModeGenerator {
    /// Family, then label, then mode descending.
    fn cmp(&self, o: &Self) -> Ordering {
        self.family
            .cmp(&o.family)
            .then(self.label.cmp(&o.label))
            .then(o.mode.cmp(&self.mode))
    }
}

impl PartialOrd for ModeGenerator {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
