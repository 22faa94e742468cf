use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num::Zero;
use serde::Serialize;

use super::{mode, FieldExpr, FieldFactor, FieldTerm};
use crate::error::{Error, Result};
use crate::fock::{basis_up_to_degree, FockMonomial, FockSpace, FockVector, FreeFieldData, Mode};
use crate::lie::{build_a2_2, GeneratorLabel, LieAlgebra};
use crate::linalg::{self, Matrix, SolveError};
use crate::scalar::{fmt_q, q, qr, Level, LevelPoly, Q};

const E0A: GeneratorLabel = GeneratorLabel::e(0, 1);
const E1A: GeneratorLabel = GeneratorLabel::e(1, 1);
const E12A: GeneratorLabel = GeneratorLabel::e(1, 2);
const H01: GeneratorLabel = GeneratorLabel::h(0, 1);
const H11: GeneratorLabel = GeneratorLabel::h(1, 1);
const E0M: GeneratorLabel = GeneratorLabel::e(0, -1);
const E1M: GeneratorLabel = GeneratorLabel::e(1, -1);
const E12M: GeneratorLabel = GeneratorLabel::e(1, -2);

/// A current obtained from `c⁻¹ [X_0, Y_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedCurrent {
    pub label: GeneratorLabel,
    pub from: (GeneratorLabel, GeneratorLabel),
    /// `[X, Y] = c · label` in g.
    #[serde(serialize_with = "ser_q")]
    pub c: Q,
    pub expr: FieldExpr,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

/// Assignment of a field to each generator of g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Currents {
    data: Arc<FreeFieldData>,
    entries: Vec<(GeneratorLabel, FieldExpr)>,
    derived: Vec<DerivedCurrent>,
}

impl Currents {
    pub fn new(data: Arc<FreeFieldData>, entries: Vec<(GeneratorLabel, FieldExpr)>) -> Self {
        Currents { data, entries, derived: Vec::new() }
    }

    pub fn data(&self) -> &Arc<FreeFieldData> {
        &self.data
    }

    pub fn get(&self, l: &GeneratorLabel) -> Option<&FieldExpr> {
        self.entries.iter().find(|(x, _)| x == l).map(|(_, f)| f)
    }

    pub fn labels(&self) -> Vec<GeneratorLabel> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(GeneratorLabel, FieldExpr)> {
        self.entries.iter()
    }

    pub fn derived(&self) -> &[DerivedCurrent] {
        &self.derived
    }

    pub fn insert(&mut self, l: GeneratorLabel, f: FieldExpr) {
        match self.entries.iter_mut().find(|(x, _)| *x == l) {
            Some(e) => e.1 = f,
            None => self.entries.push((l, f)),
        }
    }

    /// One `label(z) = …` line per current.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(l, f)| format!("{l}(z) = {}", f.render(&self.data)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn c(x: Q) -> LevelPoly {
    LevelPoly::constant(x)
}

fn s(l: u8) -> FieldFactor {
    FieldFactor::a_star(l)
}

fn a(l: u8) -> FieldFactor {
    FieldFactor::a(l)
}

fn b(l: u8) -> FieldFactor {
    FieldFactor::b(l)
}

fn t(x: Q, f: Vec<FieldFactor>) -> FieldTerm {
    FieldTerm::new(c(x), f)
}

/// Oscillator labels: a/a* 0 = (0,α), 1 = (1,α), 2 = (1,2α); b 0 = (0,1), 1 = (1,1).
fn six_currents(uncorrected: bool) -> Vec<(GeneratorLabel, u32, i64, Vec<FieldTerm>)> {
    let level_term = |l: u8| FieldTerm::new(LevelPoly::linear(q(-1), q(-2)), vec![s(l).d()]);
    let h11_second = if uncorrected { a(0) } else { a(1) };
    let e0a = vec![t(q(-1), vec![a(0)]), t(qr(-1, 2), vec![s(1), a(2)])];
    let e1a = vec![t(q(-1), vec![a(1)]), t(qr(1, 2), vec![s(0), a(2)])];
    let h01 = vec![
        t(q(-1), vec![s(0), a(0)]),
        t(q(-1), vec![s(1), a(1)]),
        t(q(-2), vec![s(2), a(2)]),
        t(q(1), vec![b(0)]),
    ];
    let h11 = vec![t(q(-3), vec![s(0), h11_second]), t(q(-3), vec![s(1), a(0)]), t(q(1), vec![b(1)])];
    let mut e0m = vec![
        t(qr(1, 2), vec![s(0), s(0), a(0)]),
        t(qr(3, 2), vec![s(1), s(1), a(0)]),
        t(q(2), vec![s(0), s(1), a(1)]),
        t(q(-2), vec![s(2), a(1)]),
        t(qr(1, 4), vec![s(1), s(0), s(0), a(2)]),
        t(qr(-1, 4), vec![s(1), s(1), s(1), a(2)]),
        t(q(1), vec![s(0), s(2), a(2)]),
        level_term(0),
        t(q(-1), vec![s(0), b(0)]),
    ];
    let mut e1m = vec![
        t(q(2), vec![s(2), a(0)]),
        t(q(2), vec![s(0), s(1), a(0)]),
        t(qr(3, 2), vec![s(0), s(0), a(1)]),
        t(qr(1, 2), vec![s(1), s(1), a(1)]),
        t(qr(1, 4), vec![s(0), s(0), s(0), a(2)]),
        t(qr(-1, 4), vec![s(0), s(1), s(1), a(2)]),
        t(q(1), vec![s(1), s(2), a(2)]),
        level_term(1),
    ];
    if uncorrected {
        e1m.push(t(q(-1), vec![s(1), b(1)]));
    } else {
        e0m.push(t(q(-1), vec![s(1), b(1)]));
        e1m.push(t(q(-1), vec![s(1), b(0)]));
        e1m.push(t(q(-1), vec![s(0), b(1)]));
        e1m.push(FieldTerm::with_z_power(c(qr(1, 2)), -1, vec![s(1)]));
    }
    vec![(E0A, 0, 1, e0a), (E1A, 1, 1, e1a), (H01, 0, 0, h01), (H11, 1, 0, h11), (E0M, 0, -1, e0m), (E1M, 1, -1, e1m)]
}

/// The six explicit currents in the form that satisfies the relations.
pub fn explicit_currents_a22() -> Currents {
    let data = Arc::new(FreeFieldData::a2_2());
    let entries = six_currents(false)
        .into_iter()
        .map(|(l, j, w, terms)| (l, FieldExpr::new(&data, j, w, terms).expect("well-graded current")))
        .collect();
    Currents::new(data, entries)
}

/// The six currents without the correction terms and grading checks. Two of
/// the terms carry the wrong σ-index and the set fails the relations.
pub fn uncorrected_currents_a22() -> Currents {
    let data = Arc::new(FreeFieldData::a2_2());
    let entries = six_currents(true)
        .into_iter()
        .map(|(l, j, w, terms)| (l, FieldExpr::unchecked(j, w, terms)))
        .collect();
    Currents::new(data, entries)
}

/// All eight currents, with `E_(1,±2α)` derived from the explicit six.
pub fn wakimoto_currents_a22() -> Currents {
    static CACHE: OnceLock<Currents> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let mut cur = explicit_currents_a22();
            let derived = derive_missing_currents(&cur).expect("E_(1,±2α) are determined by the other currents");
            for d in derived {
                cur.insert(d.label, d.expr.clone());
                cur.derived.push(d);
            }
            let order = crate::lie::A22_LABELS;
            cur.entries.sort_by_key(|(l, _)| order.iter().position(|x| x == l));
            cur
        })
        .clone()
}

/// Monomials `P(a*)`, as sorted label lists, of total degree ≤ `max`.
fn a_star_monomials(n_labels: u8, max: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for l in start..n_labels {
                let mut x: Vec<u8> = m.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Conformal-weight-1 monomials of the given finite weight and σ-index:
/// `P(a*) a`, `P(a*) b`, `z⁻¹ P(a*)`, `P(a*) ∂a*` and `∂a*`.
fn ansatz(data: &FreeFieldData, j: u32, weight: i64) -> Vec<FieldTerm> {
    let na = data.a_labels.len() as u8;
    let nb = data.b_labels.len() as u8;
    let one = || c(q(1));
    let mut cands = Vec::new();
    for p in a_star_monomials(na, 4) {
        let base: Vec<FieldFactor> = p.iter().map(|&l| s(l)).collect();
        for g in 0..na {
            let mut f = base.clone();
            f.push(a(g));
            cands.push(FieldTerm::new(one(), f));
        }
        if p.len() <= 3 {
            for l in 0..nb {
                let mut f = base.clone();
                f.push(b(l));
                cands.push(FieldTerm::new(one(), f));
            }
            cands.push(FieldTerm::with_z_power(one(), -1, base.clone()));
            for g in 0..na {
                let mut f = base.clone();
                f.push(s(g).d());
                cands.push(FieldTerm::new(one(), f));
            }
        }
    }
    cands
        .into_iter()
        .filter(|t| t.parity(data) == j % data.order && t.finite_weight(data) == weight && t.conformal_weight() == 1)
        .collect()
}

/// Fits `c⁻¹ [X_0, Y_n]` by the ansatz at one numeric level.
fn fit_at(cur: &Currents, x: &FieldExpr, y: &FieldExpr, target_j: u32, target_w: i64, cst: &Q, k: Q) -> Result<Vec<(FieldTerm, Q)>> {
    let data = cur.data().clone();
    let d = Mode::int(2);
    let sp = FockSpace::wakimoto(data.clone(), Level::Value(k), vec![qr(1, 3)])?.truncated(d, 0);
    let terms = ansatz(&data, target_j, target_w);
    let basis = basis_up_to_degree(&sp, d);
    let x0 = mode(x, Mode::ZERO, &sp)?;
    let mut rows: BTreeMap<(Mode, usize, FockMonomial), Vec<Q>> = BTreeMap::new();
    let ncols = terms.len();
    let mut rhs_of: BTreeMap<(Mode, usize, FockMonomial), Q> = BTreeMap::new();
    let singles: Vec<FieldExpr> = terms
        .iter()
        .map(|t| FieldExpr::new(&data, target_j, target_w, vec![t.clone()]))
        .collect::<Result<_>>()?;
    let lim = Mode::new(3, 2);
    for n in Mode::coset_range(Mode::offset(target_j, data.order), -lim, lim) {
        let yn = mode(y, n, &sp)?;
        let room = d - if n.is_negative() { -n } else { Mode::ZERO };
        for (vi, m) in basis.iter().enumerate() {
            if m.degree() > room {
                continue;
            }
            let v = FockVector::<Q>::monomial(m.clone());
            let comm = x0.apply(&yn.apply(&v)?)?.sub(&yn.apply(&x0.apply(&v)?)?);
            for (mm, val) in comm.iter() {
                rhs_of.insert((n, vi, mm.clone()), val / cst);
                rows.entry((n, vi, mm.clone())).or_insert_with(|| vec![Q::zero(); ncols]);
            }
            for (ci, f) in singles.iter().enumerate() {
                for (mm, val) in mode(f, n, &sp)?.apply(&v)?.iter() {
                    rows.entry((n, vi, mm.clone())).or_insert_with(|| vec![Q::zero(); ncols])[ci] = val.clone();
                }
            }
        }
    }
    let mut mat = Matrix::new(ncols);
    let mut rhs = Vec::with_capacity(rows.len());
    for (key, row) in rows {
        rhs.push(rhs_of.remove(&key).unwrap_or_else(Q::zero));
        mat.push_row(row);
    }
    match linalg::solve(&mat, &rhs) {
        Ok(sol) => Ok(terms.into_iter().zip(sol).filter(|(_, v)| !v.is_zero()).collect()),
        Err(SolveError::Inconsistent) => Err(Error::Consistency("commutator is not a single field of the expected shape".into())),
        Err(SolveError::Underdetermined { free }) => {
            Err(Error::Consistency(format!("commutator does not fix the field ({free} free parameters)")))
        }
    }
}

/// Lagrange interpolation through `(kᵢ, yᵢ)`.
fn interpolate(points: &[(Q, Q)]) -> LevelPoly {
    let mut acc = LevelPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = LevelPoly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let inv = Q::from_integer(1.into()) / (xi - xj);
                basis = basis * LevelPoly::linear(-xj * &inv, inv);
            }
        }
        acc = acc + basis;
    }
    acc
}

fn bracket_constant(g: &LieAlgebra, x: GeneratorLabel, y: GeneratorLabel, target: GeneratorLabel) -> Result<Q> {
    let (i, j, t) = (
        g.index_of(&x).ok_or_else(|| Error::Structural(format!("no generator {x}")))?,
        g.index_of(&y).ok_or_else(|| Error::Structural(format!("no generator {y}")))?,
        g.index_of(&target).ok_or_else(|| Error::Structural(format!("no generator {target}")))?,
    );
    match g.bracket_basis(i, j).as_slice() {
        [(k, cst)] if *k == t && !cst.is_zero() => Ok(cst.clone()),
        _ => Err(Error::Structural(format!("[{x}, {y}] is not a multiple of {target}"))),
    }
}

/// `E_(1,2α) = c⁻¹[E_(0,α), E_(1,α)]` and `E_(1,−2α) = c⁻¹[E_(0,−α), E_(1,−α)]`.
///
/// The commutator modes are fitted, at several numeric levels, by the unique
/// combination of conformal-weight-1 monomials of the right grading; the
/// coefficients are then interpolated as polynomials of degree ≤ 2 in k and
/// confirmed at a further level.
pub fn derive_missing_currents(cur: &Currents) -> Result<Vec<DerivedCurrent>> {
    let (g, _) = build_a2_2();
    let data = cur.data().clone();
    let fit_levels = [q(0), q(1), q(2)];
    let check_level = qr(7, 3);
    let mut out = Vec::new();
    for (x, y, target) in [(E0A, E1A, E12A), (E0M, E1M, E12M)] {
        let cst = bracket_constant(&g, x, y, target)?;
        let fx = cur.get(&x).ok_or_else(|| Error::Structural(format!("missing current {x}")))?;
        let fy = cur.get(&y).ok_or_else(|| Error::Structural(format!("missing current {y}")))?;
        let (tj, tw) = (target.j, target.weight);
        let mut samples: BTreeMap<String, (FieldTerm, Vec<(Q, Q)>)> = BTreeMap::new();
        let key = |t: &FieldTerm| format!("{}|{:?}", t.z_power, t.factors());
        for (i, k) in fit_levels.iter().enumerate() {
            for (term, v) in fit_at(cur, fx, fy, tj, tw, &cst, k.clone())? {
                let e = samples.entry(key(&term)).or_insert_with(|| (term.clone(), fit_levels.iter().map(|x| (x.clone(), Q::zero())).collect()));
                e.1[i].1 = v;
            }
        }
        let terms: Vec<FieldTerm> = samples
            .into_values()
            .map(|(t, pts)| FieldTerm::with_z_power(interpolate(&pts), t.z_power, t.factors().to_vec()))
            .collect();
        let check = fit_at(cur, fx, fy, tj, tw, &cst, check_level.clone())?;
        let predicted: Vec<(FieldTerm, Q)> = terms
            .iter()
            .map(|t| (t.clone(), t.coeff.eval(&check_level)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let same = check.len() == predicted.len()
            && check.iter().all(|(t, v)| predicted.iter().any(|(p, w)| p.factors() == t.factors() && p.z_power == t.z_power && v == w));
        if !same {
            return Err(Error::Consistency(format!("{target} coefficients are not polynomial of degree ≤ 2 in k")));
        }
        let expr = FieldExpr::new(&data, tj, tw, terms)?.normalized();
        out.push(DerivedCurrent { label: target, from: (x, y), c: cst, expr });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_coefficients_present() {
        let cur = explicit_currents_a22();
        let e0m = cur.get(&E0M).unwrap();
        assert_eq!(e0m.coefficient(&[s(0).d()]), LevelPoly::linear(q(-1), q(-2)));
        assert_eq!(cur.get(&H01).unwrap().coefficient(&[b(0)]), c(q(1)));
        assert_eq!(cur.get(&E1A).unwrap().coefficient(&[a(1)]), c(q(-1)));
        assert!(cur.render().contains("(-1 - 2k) ∂_z a*_(0,α)(z)"));
    }

    #[test]
    fn uncorrected_set_has_misgraded_terms() {
        let data = FreeFieldData::a2_2();
        let p = uncorrected_currents_a22();
        let bad: Vec<_> = p
            .iter()
            .filter(|(_, f)| FieldExpr::new(&data, f.j, f.weight, f.terms().to_vec()).is_err())
            .map(|(l, _)| *l)
            .collect();
        assert_eq!(bad, vec![H11, E1M]);
    }

    #[test]
    fn ansatz_sizes() {
        let data = FreeFieldData::a2_2();
        assert!(ansatz(&data, 1, 2).iter().all(|t| t.conformal_weight() == 1));
        assert!(ansatz(&data, 1, 2).len() < ansatz(&data, 1, -2).len());
    }

    #[test]
    fn interpolation() {
        let p = interpolate(&[(q(0), q(2)), (q(1), q(0)), (q(2), q(-6))]);
        // 2 - 2k²
        assert_eq!(p, LevelPoly::new(vec![q(2), q(0), q(-2)]));
    }

    #[test]
    fn derived_currents_match_frozen_oracle() {
        let cur = wakimoto_currents_a22();
        let der = cur.derived();
        assert_eq!(der.len(), 2);
        assert_eq!((der[0].label, der[0].c.clone()), (E12A, q(1)));
        assert_eq!((der[1].label, der[1].c.clone()), (E12M, q(-1)));
        let data = cur.data().clone();
        let e12a = FieldExpr::new(&data, 1, 2, vec![t(q(-1), vec![a(2)])]).unwrap().normalized();
        assert_eq!(cur.get(&E12A).unwrap(), &e12a);
        let kp = |a0: i64, a1: i64| LevelPoly::linear(q(a0), q(a1));
        let e12m = FieldExpr::new(
            &data,
            1,
            -2,
            vec![
                t(q(4), vec![s(0), s(2), a(0)]),
                t(q(1), vec![s(0), s(0), s(1), a(0)]),
                t(q(-1), vec![s(1), s(1), s(1), a(0)]),
                t(q(4), vec![s(1), s(2), a(1)]),
                t(q(1), vec![s(0), s(0), s(0), a(1)]),
                t(q(-1), vec![s(0), s(1), s(1), a(1)]),
                t(q(4), vec![s(2), s(2), a(2)]),
                t(qr(1, 4), vec![s(0), s(0), s(0), s(0), a(2)]),
                t(qr(-1, 2), vec![s(0), s(0), s(1), s(1), a(2)]),
                t(qr(1, 4), vec![s(1), s(1), s(1), s(1), a(2)]),
                t(q(-4), vec![s(2), b(0)]),
                t(q(-1), vec![s(0), s(0), b(1)]),
                t(q(1), vec![s(1), s(1), b(1)]),
                FieldTerm::with_z_power(c(q(1)), -1, vec![s(0), s(1)]),
                FieldTerm::new(kp(2, 2), vec![s(1), s(0).d()]),
                FieldTerm::new(kp(-2, -2), vec![s(0), s(1).d()]),
                FieldTerm::new(kp(0, -4), vec![s(2).d()]),
            ],
        )
        .unwrap()
        .normalized();
        assert_eq!(cur.get(&E12M).unwrap(), &e12m);
    }
}
