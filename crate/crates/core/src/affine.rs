//! Expected brackets of ĝ^σ and the commutator check of the realized currents.

use std::collections::BTreeMap;

use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{mode, transposed_mode, Currents, ModeOperator};
use crate::fock::{basis_up_to_degree, FockSpace, FockVector, Mode, SpaceKind};
use crate::lie::{build_a2_2, chevalley_involution, ChevalleyInvolution, GeneratorLabel, LieAlgebra, LieElement};
use crate::scalar::{fmt_q, Level, LevelPoly, Scalar, Q};

/// `Σ xᵢ ⊗ t^{nᵢ} + central·K + degree·d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineElement {
    pub loops: Vec<(LieElement, Mode)>,
    pub central: Q,
    pub degree: Q,
}

fn label_index(g: &LieAlgebra, x: &GeneratorLabel) -> Result<usize> {
    g.index_of(x).ok_or_else(|| Error::Validation(format!("unknown generator {x}")))
}

fn check_lattice(x: &GeneratorLabel, m: Mode, order: u32) -> Result<()> {
    if m.in_coset(Mode::offset(x.j, order)) {
        Ok(())
    } else {
        Err(Error::Validation(format!("mode {m} is off the lattice of {x}")))
    }
}

/// `[x⊗t^m, y⊗t^n] = [x,y]⊗t^{m+n} + m (x,y) δ_{m,−n} K`.
/// `order` is the order N of the twisting automorphism.
pub fn expected_bracket(g: &LieAlgebra, order: u32, x: &GeneratorLabel, m: Mode, y: &GeneratorLabel, n: Mode) -> Result<AffineElement> {
    check_lattice(x, m, order)?;
    check_lattice(y, n, order)?;
    let (i, j) = (label_index(g, x)?, label_index(g, y)?);
    let br = g.element_from_sparse(g.bracket_basis(i, j));
    let loops = if br.is_zero() { Vec::new() } else { vec![(br, m + n)] };
    let central = if (m + n).is_zero() { m.to_q() * g.form_basis(i, j) } else { Q::zero() };
    Ok(AffineElement { loops, central, degree: Q::zero() })
}

/// Mode operator of a generator scaled by a constant.
#[derive(Clone, Debug)]
pub struct RealizedMode {
    pub op: ModeOperator,
    pub scale: Q,
}

impl RealizedMode {
    pub fn apply<S: Scalar>(&self, v: &FockVector<S>) -> Result<FockVector<S>> {
        Ok(self.op.apply(v)?.scaled(&S::from_q(&self.scale)))
    }
}

/// The currents acting on a space: directly on M^σ-type spaces, and through
/// `x·v = T(ω(x))·v` on the contragredient ones.
#[derive(Clone, Debug)]
pub struct Realization {
    pub g: LieAlgebra,
    pub currents: Currents,
    pub space: FockSpace,
    pub omega: Option<ChevalleyInvolution>,
}

impl Realization {
    pub fn new(currents: Currents, space: FockSpace) -> Result<Self> {
        let (g, _) = build_a2_2();
        let omega = if space.kind().is_dual() { Some(chevalley_involution(&g)?) } else { None };
        Ok(Realization { g, currents, space, omega })
    }

    pub fn with_space(&self, space: FockSpace) -> Result<Self> {
        Realization::new(self.currents.clone(), space)
    }

    pub fn operator(&self, x: &GeneratorLabel, m: Mode) -> Result<RealizedMode> {
        let field = |l: &GeneratorLabel| self.currents.get(l).ok_or_else(|| Error::Structural(format!("no current for {l}")));
        match &self.omega {
            None => Ok(RealizedMode { op: mode(field(x)?, m, &self.space)?, scale: Q::from_integer(1.into()) }),
            Some(w) => {
                let (t, c) = &w.image[label_index(&self.g, x)?];
                let y = self.g.labels()[*t];
                // ω(x⊗t^m) = c·y⊗t^{−m}
                Ok(RealizedMode { op: transposed_mode(field(&y)?, -m, &self.space)?, scale: c.clone() })
            }
        }
    }
}

/// One checked pair `[X_m, Y_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationResult {
    pub pair: (String, String),
    pub modes: (Mode, Mode),
    pub level: String,
    pub status: Status,
    /// Coefficient of K (acting by k).
    pub central_term: String,
    pub vectors_checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Realized commutator minus the expected bracket on every basis vector of
/// degree ≤ D − max(−m−n, 0).
pub fn verify_relation(real: &Realization, x: &GeneratorLabel, m: Mode, y: &GeneratorLabel, n: Mode) -> Result<RelationResult> {
    match real.space.level() {
        Level::Value(_) => verify_relation_in::<Q>(real, x, m, y, n),
        Level::Symbolic => verify_relation_in::<LevelPoly>(real, x, m, y, n),
    }
}

fn verify_relation_in<S: Scalar>(real: &Realization, x: &GeneratorLabel, m: Mode, y: &GeneratorLabel, n: Mode) -> Result<RelationResult> {
    let sp = &real.space;
    let g = &real.g;
    let exp = expected_bracket(g, sp.data().order, x, m, y, n)?;
    let room = sp.max_degree() - if (m + n).is_negative() { -(m + n) } else { Mode::ZERO };
    if room.is_negative() {
        return Err(Error::Truncation(format!(
            "[{x}_{m}, {y}_{n}] raises degree by {} beyond the truncation {}",
            -(m + n),
            sp.max_degree()
        )));
    }
    let xm = real.operator(x, m)?;
    let yn = real.operator(y, n)?;
    let mut rhs_ops = Vec::new();
    for (el, p) in &exp.loops {
        for (idx, c) in el.support() {
            rhs_ops.push((S::from_q(&c), real.operator(&g.labels()[idx], *p)?));
        }
    }
    let k = S::from_level_poly(&sp.level().as_poly(), sp.level())?;
    let central = S::from_q(&exp.central).mul_ref(&k);
    let basis = basis_up_to_degree(sp, room);
    let mut failures = 0;
    let mut first = None;
    for mono in &basis {
        let v = FockVector::<S>::monomial(mono.clone());
        let lhs = xm.apply(&yn.apply(&v)?)?.sub(&yn.apply(&xm.apply(&v)?)?);
        let want_deg = mono.degree() - (m + n);
        let graded = lhs.iter().all(|(mm, _)| mm.degree() == want_deg);
        let mut rhs = v.scaled(&central);
        for (c, op) in &rhs_ops {
            rhs.add_scaled(&op.apply(&v)?, c);
        }
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() || !graded {
            failures += 1;
            if first.is_none() {
                let mut d = diff.to_string_map(sp.data());
                d.insert("input".into(), mono.display(sp.data()));
                first = Some(d);
            }
        }
    }
    Ok(RelationResult {
        pair: (x.to_string(), y.to_string()),
        modes: (m, n),
        level: sp.level().to_string(),
        status: if failures == 0 { Status::Pass } else { Status::Fail },
        central_term: if exp.central.is_zero() { "0".into() } else { LevelPoly::k().scale(&exp.central).to_string() },
        vectors_checked: basis.len(),
        failures,
        discrepancy: first,
    })
}

/// Aggregate of [`verify_relation`] over generator pairs, modes and levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub levels: Vec<String>,
    pub chi: Vec<String>,
    pub max_degree: Mode,
    pub depth: i64,
    pub mode_bound: Mode,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<RelationResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Lattice-compatible modes of `x` with `|m| ≤ bound`.
pub fn modes_of(x: &GeneratorLabel, bound: Mode, order: u32) -> Vec<Mode> {
    Mode::coset_range(Mode::offset(x.j, order), -bound, bound)
}

/// Rebuilds `space` at each level and checks every ordered pair of currents at
/// every mode pair with `|m|, |n| ≤ mode_bound`.
pub fn verify_all(currents: &Currents, space: &FockSpace, mode_bound: Mode, levels: &[Level]) -> Result<VerificationReport> {
    let order = space.data().order;
    let labels = currents.labels();
    let mut tasks = Vec::new();
    for level in levels {
        let sp = FockSpace::new(space.kind(), space.data().clone(), level.clone(), space.chi().to_vec())?
            .truncated(space.max_degree(), space.depth());
        let real = Realization::new(currents.clone(), sp)?;
        for x in &labels {
            for y in &labels {
                for m in modes_of(x, mode_bound, order) {
                    for n in modes_of(y, mode_bound, order) {
                        tasks.push((real.clone(), *x, m, *y, n));
                    }
                }
            }
        }
    }
    let entries: Vec<RelationResult> = tasks
        .par_iter()
        .map(|(r, x, m, y, n)| verify_relation(r, x, *m, y, *n))
        .collect::<Result<_>>()?;
    let passed = entries.iter().filter(|e| e.status == Status::Pass).count();
    Ok(VerificationReport {
        levels: levels.iter().map(ToString::to_string).collect(),
        chi: space.chi().iter().map(fmt_q).collect(),
        max_degree: space.max_degree(),
        depth: space.depth(),
        mode_bound,
        checked: entries.len(),
        passed,
        failed: entries.len() - passed,
        entries,
    })
}

/// Critical spaces only admit `k = −ȟ`.
pub fn admissible_level(kind: SpaceKind, level: &Level) -> bool {
    !kind.is_critical() || level.value().is_some_and(|k| *k == Q::from_integer((-3).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::wakimoto_currents_a22;
    use crate::fock::FreeFieldData;
    use crate::scalar::{q, qr};
    use std::sync::Arc;

    const E0A: GeneratorLabel = GeneratorLabel::e(0, 1);
    const E1A: GeneratorLabel = GeneratorLabel::e(1, 1);
    const H01: GeneratorLabel = GeneratorLabel::h(0, 1);
    const E0M: GeneratorLabel = GeneratorLabel::e(0, -1);

    fn wak(k: Level, d: Mode, depth: i64) -> Realization {
        let data = Arc::new(FreeFieldData::a2_2());
        let sp = FockSpace::wakimoto(data, k, vec![qr(1, 3)]).unwrap().truncated(d, depth);
        Realization::new(wakimoto_currents_a22(), sp).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let (g, _) = build_a2_2();
        let e = expected_bracket(&g, 2, &H01, Mode::int(1), &H01, Mode::int(-1)).unwrap();
        assert!(e.loops.is_empty());
        assert_eq!(e.central, q(2));
        let e = expected_bracket(&g, 2, &E0A, Mode::ZERO, &E0M, Mode::ZERO).unwrap();
        assert_eq!(e.central, q(0));
        assert_eq!(e.loops, vec![(g.basis(g.index_of(&H01).unwrap()), Mode::ZERO)]);
        let e = expected_bracket(&g, 2, &E0A, Mode::int(1), &E0M, Mode::ZERO).unwrap();
        assert_eq!(e.central, q(0));
        assert!(expected_bracket(&g, 2, &E1A, Mode::ZERO, &E0A, Mode::ZERO).is_err());
    }

    #[test]
    fn examples_pass() {
        let r = wak(Level::Value(qr(7, 3)), Mode::int(1), 1);
        let h = Mode::new(1, 2);
        for (x, m, y, n) in [(E0A, Mode::ZERO, E0M, Mode::ZERO), (H01, Mode::int(1), H01, Mode::int(-1)), (E1A, h, E1A, h)] {
            let res = verify_relation(&r, &x, m, &y, n).unwrap();
            assert_eq!(res.status, Status::Pass, "{res:?}");
        }
        let res = verify_relation(&r, &H01, Mode::int(1), &H01, Mode::int(-1)).unwrap();
        assert_eq!(res.central_term, "2k");
    }

    #[test]
    fn refuses_pairs_beyond_truncation() {
        let r = wak(Level::Value(q(1)), Mode::new(1, 2), 0);
        assert!(matches!(
            verify_relation(&r, &H01, Mode::int(-1), &H01, Mode::ZERO),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn symbolic_level_small_suite() {
        let data = Arc::new(FreeFieldData::a2_2());
        let sp = FockSpace::wakimoto(data, Level::Symbolic, vec![qr(1, 3)]).unwrap().truncated(Mode::int(1), 1);
        let rep = verify_all(&wakimoto_currents_a22(), &sp, Mode::new(1, 2), &[Level::Symbolic]).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.entries.iter().find(|e| e.status == Status::Fail));
        assert!(rep.checked > 0);
    }

    #[test]
    fn uncorrected_currents_fail() {
        let mut cur = crate::fields::uncorrected_currents_a22();
        let full = wakimoto_currents_a22();
        for l in [GeneratorLabel::e(1, 2), GeneratorLabel::e(1, -2)] {
            cur.insert(l, full.get(&l).unwrap().clone());
        }
        let data = Arc::new(FreeFieldData::a2_2());
        let sp = FockSpace::wakimoto(data, Level::Value(qr(7, 3)), vec![qr(1, 3)]).unwrap().truncated(Mode::int(1), 1);
        let rep = verify_all(&cur, &sp, Mode::new(1, 2), &[Level::Value(qr(7, 3))]).unwrap();
        assert!(rep.failed > 0);
    }

    #[test]
    fn antisymmetry_of_results() {
        let r = wak(Level::Value(q(1)), Mode::int(1), 1);
        let h = Mode::new(1, 2);
        for (x, m, y, n) in [(E0A, Mode::ZERO, E1A, h), (H01, Mode::int(1), E0M, Mode::int(-1))] {
            let a = verify_relation(&r, &x, m, &y, n).unwrap();
            let b = verify_relation(&r, &y, n, &x, m).unwrap();
            assert_eq!(a.status, b.status);
        }
    }

    #[test]
    fn empty_levels_give_empty_report() {
        let r = wak(Level::Value(q(1)), Mode::int(1), 0);
        let rep = verify_all(&r.currents, &r.space, Mode::int(1), &[]).unwrap();
        assert_eq!(rep.checked, 0);
    }

    #[test]
    fn contragredient_action_small_suite() {
        let data = Arc::new(FreeFieldData::a2_2());
        let sp = FockSpace::dual_restricted(data, vec![qr(7, 5)]).unwrap().truncated(Mode::int(1), 1);
        let rep = verify_all(&wakimoto_currents_a22(), &sp, Mode::new(1, 2), &[Level::Value(q(-3))]).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.entries.iter().find(|e| e.status == Status::Fail));
    }
}
