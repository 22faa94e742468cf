//! Transpose map, the pairing M̃^σ × M^σ → ℚ, and oscillator words.

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{apply_oscillator, Family, FockMonomial, FockSpace, FockVector, FreeFieldData, Mode, ModeGenerator};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};

/// `T(a_{n,(j,α)}) = a_{−n,(−j,α)}`, `T(a*_{n,(j,α)}) = −a*_{−n,(−j,α)}`.
pub fn transpose(g: &ModeGenerator, data: &FreeFieldData) -> Result<(Q, ModeGenerator)> {
    g.validate(data)?;
    let label = data
        .transpose_label(g.family, g.label)
        .ok_or_else(|| Error::Unsupported("the transpose is defined on a/a* oscillators only".into()))?;
    let sign = if g.family == Family::AStar { q(-1) } else { q(1) };
    Ok((sign, ModeGenerator::new(g.family, label, -g.mode)))
}

/// Product `coeff · g₁ g₂ ⋯ gₖ` of oscillators; the rightmost acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscillatorWord {
    pub coeff: Q,
    pub letters: Vec<ModeGenerator>,
}

impl OscillatorWord {
    pub fn new(letters: Vec<ModeGenerator>) -> Self {
        OscillatorWord { coeff: Q::one(), letters }
    }

    /// Exact action (no truncation).
    pub fn apply(&self, v: &FockVector<Q>, space: &FockSpace) -> Result<FockVector<Q>> {
        let mut cur = v.clone();
        for g in self.letters.iter().rev() {
            cur = apply_oscillator(g, &cur, space)?.vector;
        }
        Ok(cur.scaled(&self.coeff))
    }
}

/// `T(AB) = T(B) T(A)`.
pub fn transpose_word(w: &OscillatorWord, data: &FreeFieldData) -> Result<OscillatorWord> {
    let mut coeff = w.coeff.clone();
    let mut letters = Vec::with_capacity(w.letters.len());
    for g in w.letters.iter().rev() {
        let (s, t) = transpose(g, data)?;
        coeff *= s;
        letters.push(t);
    }
    Ok(OscillatorWord { coeff, letters })
}

/// The M̃ monomial dual to an M^σ monomial: a*_n ↔ a_n.
fn dual_monomial(m: &FockMonomial) -> Result<FockMonomial> {
    let mut out = Vec::with_capacity(m.factors().len());
    for (g, e) in m.factors() {
        let family = match g.family {
            Family::A => Family::AStar,
            Family::AStar => Family::A,
            Family::B => return Err(Error::Unsupported("the pairing is defined on the βγ sector only".into())),
        };
        out.push((ModeGenerator::new(family, g.label, g.mode), *e));
    }
    Ok(FockMonomial::from_factors(out))
}

fn factorial_weight(m: &FockMonomial) -> Q {
    let mut acc = Q::one();
    for (_, e) in m.factors() {
        for t in 2..=i64::from(*e) {
            acc *= q(t);
        }
    }
    acc
}

/// `⟨v, w⟩` for `v` in the contragredient space and `w` in M^σ (or W̄^σ_χ):
/// matched monomials pair to the product of factorials of their exponents.
pub fn pairing(v: &FockVector<Q>, v_space: &FockSpace, w: &FockVector<Q>, w_space: &FockSpace) -> Result<Q> {
    if !v_space.kind().is_dual() || w_space.kind().is_dual() || !w_space.kind().has_a() || w_space.kind().has_b_oscillators() {
        return Err(Error::Validation("pairing needs (contragredient, βγ-type) spaces".into()));
    }
    if v_space.data() != w_space.data() {
        return Err(Error::Validation("spaces built from different oscillator data".into()));
    }
    let mut acc = Q::zero();
    for (m, c) in w.iter() {
        let d = dual_monomial(m)?;
        let x = v.coeff(&d);
        if !x.is_zero() {
            acc += x * c * factorial_weight(m);
        }
    }
    Ok(acc)
}

/// `⟨v, A·w⟩ = ⟨T(A)·v, w⟩` for one word and one pair.
pub fn adjoint_holds(word: &OscillatorWord, v: &FockVector<Q>, v_space: &FockSpace, w: &FockVector<Q>, w_space: &FockSpace) -> Result<bool> {
    let tw = transpose_word(word, w_space.data())?;
    let lhs = pairing(v, v_space, &word.apply(w, w_space)?, w_space)?;
    let rhs = pairing(&tw.apply(v, v_space)?, v_space, w, w_space)?;
    Ok(lhs == rhs)
}

/// A word of `1..=max_len` random a/a* oscillators with `|mode| ≤ mode_bound`
/// and a small nonzero rational coefficient.
pub fn random_word<R: Rng>(rng: &mut R, data: &FreeFieldData, max_len: usize, mode_bound: Mode) -> OscillatorWord {
    let mut pool = Vec::new();
    for family in [Family::A, Family::AStar] {
        for label in 0..data.a_labels.len() as u8 {
            for n in Mode::coset_range(data.lattice_offset(family, label), -mode_bound, mode_bound) {
                pool.push(ModeGenerator::new(family, label, n));
            }
        }
    }
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len).map(|_| *pool.choose(rng).expect("nonempty oscillator pool")).collect();
    let coeff = Q::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=3).into());
    OscillatorWord { coeff, letters }
}
