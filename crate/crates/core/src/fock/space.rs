use std::sync::Arc;

use num::Zero;

use super::{Family, FockMonomial, FockVector, FreeFieldData, Mode, ModeGenerator};
use crate::characters::Weight;
use crate::error::{Error, Result};
use crate::scalar::{q, Level, LevelPoly, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SpaceKind {
    /// M^σ: a/a* oscillators only.
    BetaGamma,
    /// π^{r,σ}_χ: b oscillators only.
    Heisenberg,
    /// W^σ_{k,χ} = M^σ ⊗ π^{k+ȟ,σ}_χ.
    Wakimoto,
    /// W̄^σ_χ = M^σ ⊗ C_{0,χ} at the critical level.
    Restricted,
    /// M̃^σ: the contragredient βγ space.
    Dual,
    /// M̃^σ ⊗ C_{0,χ}: the contragredient of W̄^σ_χ.
    DualRestricted,
}

impl SpaceKind {
    pub fn has_a(self) -> bool {
        !matches!(self, SpaceKind::Heisenberg)
    }
    /// b_n with n ≠ 0 act nontrivially.
    pub fn has_b_oscillators(self) -> bool {
        matches!(self, SpaceKind::Heisenberg | SpaceKind::Wakimoto)
    }
    /// b_{0,(0,a)} acts by the scalar c_a.
    pub fn has_b_zero_modes(self) -> bool {
        !matches!(self, SpaceKind::BetaGamma | SpaceKind::Dual)
    }
    pub fn is_dual(self) -> bool {
        matches!(self, SpaceKind::Dual | SpaceKind::DualRestricted)
    }
    pub fn is_critical(self) -> bool {
        matches!(self, SpaceKind::Restricted | SpaceKind::DualRestricted)
    }
}

/// How an oscillator acts on a given space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Create,
    Annihilate,
    /// Acts by the zero-mode scalar in the given slot.
    Scalar(usize),
    Zero,
}

/// A truncated Fock space descriptor.
///
/// Truncation keeps monomials of degree ≤ `max_degree` whose finite-weight shift
/// (multiple of α relative to χ) is ≥ `−depth`. The window is needed because
/// `a*_{0,(0,α)}` (resp. `a_{0,(0,α)}` in the dual) creates at degree 0.
#[derive(Clone, Debug)]
pub struct FockSpace {
    kind: SpaceKind,
    data: Arc<FreeFieldData>,
    level: Level,
    r: LevelPoly,
    chi: Vec<Q>,
    max_degree: Mode,
    depth: i64,
}

impl FockSpace {
    pub fn new(kind: SpaceKind, data: Arc<FreeFieldData>, level: Level, chi: Vec<Q>) -> Result<Self> {
        let h = q(i64::from(data.dual_coxeter));
        if kind.has_b_zero_modes() && chi.len() != data.n_zero_modes() {
            return Err(Error::Validation(format!("χ needs {} coordinates", data.n_zero_modes())));
        }
        if kind.is_critical() && level != Level::Value(-h.clone()) {
            return Err(Error::Validation(format!("{kind:?} exists only at the critical level k = -{h}")));
        }
        let r = level.as_poly() + LevelPoly::constant(h);
        let chi = if kind.has_b_zero_modes() { chi } else { Vec::new() };
        Ok(FockSpace { kind, data, level, r, chi, max_degree: Mode::ZERO, depth: 0 })
    }

    /// W^σ_{k,χ} with r = k + ȟ.
    pub fn wakimoto(data: Arc<FreeFieldData>, level: Level, chi: Vec<Q>) -> Result<Self> {
        Self::new(SpaceKind::Wakimoto, data, level, chi)
    }

    /// W̄^σ_χ at k = −ȟ.
    pub fn restricted(data: Arc<FreeFieldData>, chi: Vec<Q>) -> Result<Self> {
        let k = Level::Value(-q(i64::from(data.dual_coxeter)));
        Self::new(SpaceKind::Restricted, data, k, chi)
    }

    /// Contragredient of W̄^σ_χ.
    pub fn dual_restricted(data: Arc<FreeFieldData>, chi: Vec<Q>) -> Result<Self> {
        let k = Level::Value(-q(i64::from(data.dual_coxeter)));
        Self::new(SpaceKind::DualRestricted, data, k, chi)
    }

    pub fn beta_gamma(data: Arc<FreeFieldData>) -> Self {
        Self::new(SpaceKind::BetaGamma, data, Level::Value(Q::zero()), Vec::new()).expect("no constraints")
    }

    pub fn dual(data: Arc<FreeFieldData>) -> Self {
        Self::new(SpaceKind::Dual, data, Level::Value(Q::zero()), Vec::new()).expect("no constraints")
    }

    /// π^{r,σ}_χ with an independent central scalar r.
    pub fn heisenberg(data: Arc<FreeFieldData>, r: LevelPoly, chi: Vec<Q>) -> Result<Self> {
        let level = if r.as_constant().is_some() { Level::Value(Q::zero()) } else { Level::Symbolic };
        let mut s = Self::new(SpaceKind::Heisenberg, data, level, chi)?;
        s.r = r;
        Ok(s)
    }

    pub fn truncated(mut self, max_degree: Mode, depth: i64) -> Self {
        self.max_degree = max_degree;
        self.depth = depth;
        self
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }
    pub fn data(&self) -> &Arc<FreeFieldData> {
        &self.data
    }
    pub fn level(&self) -> &Level {
        &self.level
    }
    /// Scalar by which the Heisenberg central element acts.
    pub fn r(&self) -> &LevelPoly {
        &self.r
    }
    pub fn chi(&self) -> &[Q] {
        &self.chi
    }
    pub fn max_degree(&self) -> Mode {
        self.max_degree
    }
    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub(crate) fn role(&self, g: &ModeGenerator) -> Result<Role> {
        let k = self.kind;
        match g.family {
            Family::A | Family::AStar if !k.has_a() => {
                Err(Error::Validation(format!("{k:?} has no βγ oscillators")))
            }
            Family::A | Family::AStar => {
                let zero_creates = (g.family == Family::AStar) != k.is_dual();
                let creates = g.mode.is_negative() || (zero_creates && g.mode.is_zero());
                Ok(if creates { Role::Create } else { Role::Annihilate })
            }
            Family::B if !k.has_b_zero_modes() => Err(Error::Validation(format!("{k:?} has no b oscillators"))),
            Family::B => {
                if g.mode.is_zero() {
                    Ok(self.data.zero_mode_slot(g.label).map(Role::Scalar).unwrap_or(Role::Zero))
                } else if !k.has_b_oscillators() {
                    Ok(Role::Zero)
                } else if g.mode.is_negative() {
                    Ok(Role::Create)
                } else {
                    Ok(Role::Annihilate)
                }
            }
        }
    }

    /// Contraction of an annihilator with the monomial.
    pub(crate) fn contract<S: Scalar>(&self, g: &ModeGenerator, m: &FockMonomial, r: &S) -> Vec<(S, FockMonomial)> {
        match g.family {
            Family::A | Family::AStar => {
                let partner_family = if g.family == Family::A { Family::AStar } else { Family::A };
                let partner = ModeGenerator::new(partner_family, g.label, -g.mode);
                match m.without_one(&partner) {
                    None => Vec::new(),
                    Some((e, rest)) => {
                        let c = if g.family == Family::A { q(i64::from(e)) } else { q(-i64::from(e)) };
                        vec![(S::from_q(&c), rest)]
                    }
                }
            }
            Family::B => {
                let mut out = Vec::new();
                for l in 0..self.data.b_labels.len() {
                    let form = &self.data.b_form[g.label as usize][l];
                    if form.is_zero() {
                        continue;
                    }
                    let partner = ModeGenerator::b(l as u8, -g.mode);
                    if let Some((e, rest)) = m.without_one(&partner) {
                        let c = q(i64::from(e)) * g.mode.to_q() * form;
                        out.push((S::from_q(&c).mul_ref(r), rest));
                    }
                }
                out
            }
        }
    }

    /// Finite-weight shift (multiple of α) contributed by one creation factor.
    pub fn shift_of(&self, family: Family, label: u8) -> i64 {
        let w = self.data.field_weight(family, label);
        // a* has weight −α and a has +α in M^σ; the dual swaps the roles
        if self.kind.is_dual() {
            -w
        } else {
            w
        }
    }

    /// (finite-weight shift, degree) of a monomial relative to χ.
    pub fn grade(&self, m: &FockMonomial) -> (i64, Mode) {
        let shift = m
            .factors()
            .iter()
            .map(|(g, e)| self.shift_of(g.family, g.label) * i64::from(*e))
            .sum();
        (shift, m.degree())
    }

    /// Weight χ + (shift)·α − (degree)·δ.
    pub fn weight_of(&self, m: &FockMonomial) -> Result<Weight> {
        let k = self
            .level
            .value()
            .ok_or_else(|| Error::Unsupported("weights need a numeric level".into()))?;
        let (shift, deg) = self.grade(m);
        let mut finite = if self.chi.is_empty() { vec![Q::zero(); self.data.alpha_values.len()] } else { self.chi.clone() };
        for (f, a) in finite.iter_mut().zip(&self.data.alpha_values) {
            *f += q(shift) * a;
        }
        Ok(Weight { finite, level: k.clone(), delta: -deg.to_q() })
    }

    /// Creation generators of degree in `[0, d]`, in canonical order.
    pub fn creators_up_to(&self, d: Mode) -> Vec<ModeGenerator> {
        let mut out = Vec::new();
        let families: &[Family] = match self.kind {
            SpaceKind::Heisenberg => &[Family::B],
            SpaceKind::Wakimoto => &[Family::AStar, Family::A, Family::B],
            _ => &[Family::AStar, Family::A],
        };
        for &fam in families {
            let n_labels = if fam == Family::B { self.data.b_labels.len() } else { self.data.a_labels.len() };
            for l in 0..n_labels as u8 {
                let off = self.data.lattice_offset(fam, l);
                for m in Mode::coset_range(off, -d, Mode::ZERO).into_iter().rev() {
                    let g = ModeGenerator::new(fam, l, m);
                    if self.role(&g).ok() == Some(Role::Create) {
                        out.push(g);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Result of [`apply_oscillator`]; `truncated` is set when monomials above the
/// space's truncation degree were dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Applied<S> {
    pub vector: FockVector<S>,
    pub truncated: bool,
}

/// Action of a single oscillator.
pub fn apply_oscillator<S: Scalar>(g: &ModeGenerator, v: &FockVector<S>, space: &FockSpace) -> Result<Applied<S>> {
    g.validate(&space.data)?;
    let role = space.role(g)?;
    let r = S::from_level_poly(&space.r, &space.level)?;
    let mut out = FockVector::zero();
    for (m, c) in v.iter() {
        match role {
            Role::Create => out.add_term(m.times(*g, 1), c),
            Role::Annihilate => {
                for (x, rest) in space.contract(g, m, &r) {
                    out.add_term(rest, &x.mul_ref(c));
                }
            }
            Role::Scalar(slot) => out.add_term(m.clone(), &S::from_q(&space.chi[slot]).mul_ref(c)),
            Role::Zero => {}
        }
    }
    let truncated = out.truncate(space.max_degree);
    Ok(Applied { vector: out, truncated })
}

/// All monomials of degree ≤ `d` inside the space's weight window, sorted by
/// degree and then canonically.
pub fn basis_up_to_degree(space: &FockSpace, d: Mode) -> Vec<FockMonomial> {
    if d.is_negative() {
        return Vec::new();
    }
    let gens = space.creators_up_to(d);
    let (zero, positive): (Vec<_>, Vec<_>) = gens.into_iter().partition(|g| g.mode.is_zero());
    let mut out = Vec::new();
    let mut stack: Vec<(ModeGenerator, u32)> = Vec::new();
    enumerate(space, &positive, &zero, 0, Mode::ZERO, 0, d, &mut stack, &mut out);
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    space: &FockSpace,
    positive: &[ModeGenerator],
    zero: &[ModeGenerator],
    i: usize,
    deg: Mode,
    shift: i64,
    d: Mode,
    stack: &mut Vec<(ModeGenerator, u32)>,
    out: &mut Vec<FockMonomial>,
) {
    if i == positive.len() {
        fill_zero_modes(space, zero, 0, shift, stack, out);
        return;
    }
    let g = positive[i];
    let step = -g.mode;
    let w = space.shift_of(g.family, g.label);
    let mut e = 0u32;
    let mut dg = deg;
    while dg <= d {
        if e > 0 {
            stack.push((g, e));
        }
        enumerate(space, positive, zero, i + 1, dg, shift + w * i64::from(e), d, stack, out);
        if e > 0 {
            stack.pop();
        }
        e += 1;
        dg = dg + step;
    }
}

fn fill_zero_modes(
    space: &FockSpace,
    zero: &[ModeGenerator],
    i: usize,
    shift: i64,
    stack: &mut Vec<(ModeGenerator, u32)>,
    out: &mut Vec<FockMonomial>,
) {
    if shift < -space.depth {
        return;
    }
    if i == zero.len() {
        out.push(FockMonomial::from_factors(stack.iter().copied()));
        return;
    }
    let g = zero[i];
    let w = space.shift_of(g.family, g.label);
    debug_assert!(w < 0, "degree-0 creators lower the weight");
    let mut e = 0u32;
    while shift + w * i64::from(e) >= -space.depth {
        if e > 0 {
            stack.push((g, e));
        }
        fill_zero_modes(space, zero, i + 1, shift + w * i64::from(e), stack, out);
        if e > 0 {
            stack.pop();
        }
        e += 1;
    }
}
