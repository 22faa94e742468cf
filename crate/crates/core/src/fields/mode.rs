use num::Zero;

use super::{FieldExpr, FieldTerm};
use crate::error::{Error, Result};
use crate::fock::space::Role;
use crate::fock::{Applied, Family, FockMonomial, FockSpace, FockVector, Mode, ModeGenerator};
use crate::scalar::{q, Scalar, Q};

/// The Fourier mode `f_n` (or its transpose `T(f_n)`) acting on a Fock space.
///
/// Application is exact: on a finite vector only finitely many mode tuples
/// contribute, so no truncation is needed to evaluate it.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    expr: FieldExpr,
    n: Mode,
    space: FockSpace,
    transposed: bool,
}

/// `f_n = Σ_{m₁+…+m_r = n} Π c(mᵢ) :x_{m₁} ⋯ x_{m_r}:` with annihilators to the right.
pub fn mode(f: &FieldExpr, n: Mode, space: &FockSpace) -> Result<ModeOperator> {
    ModeOperator::build(f, n, space, false)
}

/// `T(f_n)`: every oscillator `x_m` replaced by its transpose, acting on the
/// contragredient space. Its oscillator modes sum to `−n`.
pub fn transposed_mode(f: &FieldExpr, n: Mode, space: &FockSpace) -> Result<ModeOperator> {
    if !space.kind().is_dual() {
        return Err(Error::Validation("the transposed action lives on the contragredient space".into()));
    }
    ModeOperator::build(f, n, space, true)
}

/// One factor of a term as seen by the oscillators it expands into.
#[derive(Clone, Copy, Debug)]
struct Slot {
    family: Family,
    label: u8,
    deriv: u32,
    weight: i64,
    offset: Mode,
    /// −1 for a* under the transpose.
    negate: bool,
}

impl ModeOperator {
    fn build(f: &FieldExpr, n: Mode, space: &FockSpace, transposed: bool) -> Result<Self> {
        let data = space.data();
        if !n.in_coset(Mode::offset(f.j, data.order)) {
            return Err(Error::Validation(format!("mode {n} is off the lattice of a σ-index {} field", f.j)));
        }
        Ok(ModeOperator { expr: f.clone(), n, space: space.clone(), transposed })
    }

    pub fn n(&self) -> Mode {
        self.n
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    /// Degree change of every monomial in the image.
    pub fn degree_shift(&self) -> Mode {
        if self.transposed {
            self.n
        } else {
            -self.n
        }
    }

    fn slots(&self, t: &FieldTerm) -> Result<Vec<Slot>> {
        let data = self.space.data();
        t.factors()
            .iter()
            .map(|f| {
                let label = if self.transposed && f.family != Family::B {
                    data.transpose_label(f.family, f.label)
                        .ok_or_else(|| Error::Structural("label without transpose".into()))?
                } else {
                    f.label
                };
                Ok(Slot {
                    family: f.family,
                    label,
                    deriv: f.deriv,
                    weight: f.family.field_weight(),
                    offset: data.lattice_offset(f.family, label),
                    negate: self.transposed && f.family == Family::AStar,
                })
            })
            .collect()
    }

    /// Coefficient picked up by a factor whose oscillator carries mode `m`.
    fn slot_coeff(&self, s: &Slot, m: Mode) -> Q {
        // ∂_z on Σ x_m z^{−m−w} gives Π (−m−w−t); under T the series mode is −m
        let m = if self.transposed { -m } else { m };
        let mut c = q(1);
        for t in 0..i64::from(s.deriv) {
            c *= (-m).to_q() - q(s.weight + t);
        }
        if s.negate {
            -c
        } else {
            c
        }
    }

    fn role(&self, s: &Slot, m: Mode) -> Role {
        self.space.role(&ModeGenerator::new(s.family, s.label, m)).unwrap_or(Role::Zero)
    }

    /// Annihilating modes of the slot that can act nontrivially on `mono`.
    fn annihilator_options(&self, s: &Slot, mono: &FockMonomial) -> Vec<Mode> {
        let data = self.space.data();
        let mut out = Vec::new();
        match s.family {
            Family::A | Family::AStar => {
                let partner = if s.family == Family::A { Family::AStar } else { Family::A };
                for (g, _) in mono.factors() {
                    if g.family == partner && g.label == s.label && self.role(s, -g.mode) == Role::Annihilate {
                        out.push(-g.mode);
                    }
                }
            }
            Family::B => {
                if matches!(self.role(s, Mode::ZERO), Role::Scalar(_)) {
                    out.push(Mode::ZERO);
                }
                for (g, _) in mono.factors() {
                    if g.family == Family::B
                        && !data.b_form[s.label as usize][g.label as usize].is_zero()
                        && self.role(s, -g.mode) == Role::Annihilate
                    {
                        out.push(-g.mode);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn apply<S: Scalar>(&self, v: &FockVector<S>) -> Result<FockVector<S>> {
        let level = self.space.level();
        let r = S::from_level_poly(self.space.r(), level)?;
        let total = if self.transposed { -self.n } else { self.n };
        let mut out = FockVector::zero();
        for t in self.expr.terms() {
            let coeff = S::from_level_poly(&t.coeff, level)?;
            let slots = self.slots(t)?;
            for (mono, c) in v.iter() {
                let opts: Vec<Vec<Mode>> = slots.iter().map(|s| self.annihilator_options(s, mono)).collect();
                let base = coeff.mul_ref(c);
                let mut choice: Vec<Option<Mode>> = vec![None; slots.len()];
                self.choose(&slots, &opts, 0, &mut choice, total, mono, &base, &r, &mut out);
            }
        }
        Ok(out)
    }

    /// Drops monomials above the space's truncation degree and flags it.
    pub fn apply_truncated<S: Scalar>(&self, v: &FockVector<S>) -> Result<Applied<S>> {
        let mut vector = self.apply(v)?;
        let truncated = vector.truncate(self.space.max_degree());
        Ok(Applied { vector, truncated })
    }

    /// Picks, per slot, either an annihilating mode or "creator" (`None`).
    #[allow(clippy::too_many_arguments)]
    fn choose<S: Scalar>(
        &self,
        slots: &[Slot],
        opts: &[Vec<Mode>],
        i: usize,
        choice: &mut Vec<Option<Mode>>,
        total: Mode,
        mono: &FockMonomial,
        base: &S,
        r: &S,
        out: &mut FockVector<S>,
    ) {
        if i == slots.len() {
            let ann_sum: Mode = choice.iter().flatten().copied().sum();
            let rest = total - ann_sum;
            if rest.is_positive() {
                return;
            }
            let creators: Vec<usize> = (0..slots.len()).filter(|&j| choice[j].is_none()).collect();
            let mut modes = vec![Mode::ZERO; creators.len()];
            self.creators(slots, &creators, 0, rest, &mut modes, &mut |cm| {
                self.emit(slots, choice, &creators, cm, mono, base, r, out);
            });
            return;
        }
        choice[i] = None;
        self.choose(slots, opts, i + 1, choice, total, mono, base, r, out);
        for &m in &opts[i] {
            choice[i] = Some(m);
            self.choose(slots, opts, i + 1, choice, total, mono, base, r, out);
        }
        choice[i] = None;
    }

    /// Enumerates creation modes for the creator slots summing to `rem`.
    fn creators(&self, slots: &[Slot], idx: &[usize], k: usize, rem: Mode, modes: &mut Vec<Mode>, f: &mut dyn FnMut(&[Mode])) {
        if k == idx.len() {
            if rem.is_zero() {
                f(modes);
            }
            return;
        }
        let s = &slots[idx[k]];
        if k + 1 == idx.len() {
            if rem.in_coset(s.offset) && self.role(s, rem) == Role::Create {
                modes[k] = rem;
                f(modes);
            }
            return;
        }
        for m in Mode::coset_range(s.offset, rem, Mode::ZERO).into_iter().rev() {
            if self.role(s, m) == Role::Create {
                modes[k] = m;
                self.creators(slots, idx, k + 1, rem - m, modes, f);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn emit<S: Scalar>(
        &self,
        slots: &[Slot],
        choice: &[Option<Mode>],
        creators: &[usize],
        cm: &[Mode],
        mono: &FockMonomial,
        base: &S,
        r: &S,
        out: &mut FockVector<S>,
    ) {
        let mut c = Q::from_integer(1.into());
        for (j, s) in slots.iter().enumerate() {
            let m = match choice[j] {
                Some(m) => m,
                None => cm[creators.iter().position(|&x| x == j).expect("creator slot")],
            };
            c *= self.slot_coeff(s, m);
            if c.is_zero() {
                return;
            }
        }
        let mut cur = vec![(base.mul_ref(&S::from_q(&c)), mono.clone())];
        for (j, s) in slots.iter().enumerate() {
            let Some(m) = choice[j] else { continue };
            let g = ModeGenerator::new(s.family, s.label, m);
            let mut next = Vec::new();
            match self.role(s, m) {
                Role::Scalar(slot) => {
                    let x = S::from_q(&self.space.chi()[slot]);
                    next.extend(cur.into_iter().map(|(a, mm)| (a.mul_ref(&x), mm)));
                }
                Role::Annihilate => {
                    for (a, mm) in cur {
                        for (x, rest) in self.space.contract(&g, &mm, r) {
                            next.push((a.mul_ref(&x), rest));
                        }
                    }
                }
                _ => {}
            }
            cur = next;
            if cur.is_empty() {
                return;
            }
        }
        for (k, &j) in creators.iter().enumerate() {
            let s = &slots[j];
            let g = ModeGenerator::new(s.family, s.label, cm[k]);
            for (_, mm) in cur.iter_mut() {
                *mm = mm.times(g, 1);
            }
        }
        for (a, mm) in cur {
            out.add_term(mm, &a);
        }
    }
}
