//! Weights, root data of ĝ^σ, truncated characters and the Kac–Kazhdan equation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::rational::Ratio;
use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{basis_up_to_degree, FockSpace, FreeFieldData, Mode};
use crate::lie::{Decomposition, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::scalar::{fmt_q, q, Q};

/// Weight `λ̄ + kΛ₀ + dδ`: `finite[a] = λ̄(H_{0,a})`, `level = k`, `delta = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub finite: Vec<Q>,
    pub level: Q,
    pub delta: Q,
}

impl Weight {
    /// `(λ̄₁,λ̄₂) + k₁d₂ + k₂d₁`, with the form on h₀* dual to the normalized form.
    pub fn pair(&self, o: &Weight, data: &FreeFieldData) -> Q {
        let mut acc = Q::zero();
        for (a, x) in self.finite.iter().enumerate() {
            for (b, y) in o.finite.iter().enumerate() {
                acc += x * y * &data.h0_form_inverse[a][b];
            }
        }
        acc + &self.level * &o.delta + &o.level * &self.delta
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight {
            finite: self.finite.iter().zip(&o.finite).map(|(a, b)| a + b).collect(),
            level: &self.level + &o.level,
            delta: &self.delta + &o.delta,
        }
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight {
            finite: self.finite.iter().map(|a| a * c).collect(),
            level: &self.level * c,
            delta: &self.delta * c,
        }
    }

    /// χ with `χ(H_{0,a}) = chi[a]` at level `k` and d-value 0.
    pub fn highest(chi: Vec<Q>, k: Q) -> Weight {
        Weight { finite: chi, level: k, delta: Q::zero() }
    }
}

/// Root `p·α + n·δ` of ĝ^σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AffineRoot {
    pub finite: i64,
    pub delta: Mode,
}

impl AffineRoot {
    pub fn new(finite: i64, delta: Mode) -> Self {
        AffineRoot { finite, delta }
    }
    pub fn is_real(&self) -> bool {
        self.finite != 0
    }
    /// `n > 0`, or `n = 0` with positive finite part.
    pub fn is_positive(&self) -> bool {
        self.delta.is_positive() || (self.delta.is_zero() && self.finite > 0)
    }
    pub fn as_weight(&self, data: &FreeFieldData) -> Weight {
        Weight {
            finite: data.alpha_values.iter().map(|a| a * q(self.finite)).collect(),
            level: Q::zero(),
            delta: self.delta.to_q(),
        }
    }
    /// `(finite α-shift, degree)` of `e^{−β}`.
    pub fn lowering_grade(&self) -> (i64, Mode) {
        (-self.finite, self.delta)
    }
}

impl std::fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fin = crate::lie::fmt_root_multiple(self.finite);
        match (self.finite, self.delta.is_zero()) {
            (_, true) => f.write_str(&fin),
            (0, false) => write!(f, "{}δ", self.delta),
            _ => write!(f, "{fin} + {}δ", self.delta),
        }
    }
}

/// Roots `finite·α + nδ` with `n ∈ offset + ℤ`, each of multiplicity `mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFamily {
    pub finite: i64,
    pub offset: Mode,
    pub mult: u32,
}

/// Root data of ĝ^σ derived from the eigenspace decomposition.
///
/// Positivity convention: a root is positive iff its δ-part is positive, or it
/// is zero and the finite part is positive.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub data: Arc<FreeFieldData>,
    pub real: Vec<RootFamily>,
    pub imaginary: Vec<RootFamily>,
    pub simple: Vec<AffineRoot>,
    pub rho: Weight,
}

impl RootDatum {
    pub fn new(g: &LieAlgebra, d: &Decomposition, data: Arc<FreeFieldData>) -> Result<Self> {
        let n = d.order;
        let mut real = Vec::new();
        let mut imaginary = Vec::new();
        for s in &d.summands {
            let offset = Mode::offset(s.j, n);
            for r in &s.roots {
                let finite = r.multiple.ok_or_else(|| Error::Unsupported("rank-one g₀ only".into()))?;
                real.push(RootFamily { finite, offset, mult: 1 });
            }
            if !s.cartan.is_empty() {
                imaginary.push(RootFamily { finite: 0, offset, mult: s.cartan.len() as u32 });
            }
        }
        real.sort_by_key(|f| (f.offset, f.finite));
        // simple roots: α, and δ/N − θ with θ the highest weight of g_{1 mod N}
        let theta = d
            .summand(1 % n)
            .and_then(|s| s.roots.iter().filter_map(|r| r.multiple).max())
            .ok_or_else(|| Error::Structural("no roots in g₁".into()))?;
        let simple = vec![AffineRoot::new(1, Mode::ZERO), AffineRoot::new(-theta, Mode::offset(1, n))];
        let _ = g;
        let rho = solve_rho(&simple, &data)?;
        Ok(RootDatum { data, real, imaginary, simple, rho })
    }

    pub fn a2_2() -> Self {
        let (g, s) = crate::lie::build_a2_2();
        let d = crate::lie::eigenspace_decompose(&g, &s).expect("A2(2) decomposes");
        let data = Arc::new(FreeFieldData::new(&g, &d).expect("rank-one g0"));
        RootDatum::new(&g, &d, data).expect("A2(2) root datum")
    }

    fn expand(families: &[RootFamily], d: Mode) -> Vec<(AffineRoot, u32)> {
        let mut out = Vec::new();
        for f in families {
            for n in Mode::coset_range(f.offset, Mode::ZERO, d) {
                let r = AffineRoot::new(f.finite, n);
                if r.is_positive() {
                    out.push((r, f.mult));
                }
            }
        }
        out.sort();
        out
    }

    /// Positive real roots with δ-part ≤ `d`.
    pub fn positive_real_roots(&self, d: Mode) -> Vec<(AffineRoot, u32)> {
        Self::expand(&self.real, d)
    }

    /// Positive imaginary roots with δ-part ≤ `d`.
    pub fn positive_imaginary_roots(&self, d: Mode) -> Vec<(AffineRoot, u32)> {
        Self::expand(&self.imaginary, d)
    }

    pub fn pair_roots(&self, a: &AffineRoot, b: &AffineRoot) -> Q {
        a.as_weight(&self.data).pair(&b.as_weight(&self.data), &self.data)
    }

    /// Level component of ρ (equals the dual Coxeter number).
    pub fn rho_level(&self) -> &Q {
        &self.rho.level
    }
}

/// ρ with ⟨ρ, αᵢ^∨⟩ = 1, i.e. 2(ρ,αᵢ) = (αᵢ,αᵢ), and d-value 0.
fn solve_rho(simple: &[AffineRoot], data: &FreeFieldData) -> Result<Weight> {
    let r0 = data.alpha_values.len();
    // unknowns: ρ̄(H_{0,a}) for each a, then the level
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in simple {
        let w = s.as_weight(data);
        let mut row = vec![Q::zero(); r0 + 1];
        for a in 0..r0 {
            for b in 0..r0 {
                row[a] += q(2) * &w.finite[b] * &data.h0_form_inverse[a][b];
            }
        }
        row[r0] = q(2) * &w.delta;
        rows.push(row);
        rhs.push(w.pair(&w, data));
    }
    let x = linalg::solve(&Matrix::from_rows(r0 + 1, rows), &rhs)
        .map_err(|e| Error::Structural(format!("ρ is not determined by the simple roots: {e:?}")))?;
    Ok(Weight { finite: x[..r0].to_vec(), level: x[r0].clone(), delta: Q::zero() })
}

/// Truncated character: dimensions indexed by (degree, α-shift relative to χ).
///
/// Only shifts `≥ −depth` are recorded (the degree-0 tower makes every
/// degree slice infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSeries {
    pub max_degree: Mode,
    pub depth: i64,
    coeffs: BTreeMap<(Mode, i64), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterEntry {
    pub shift: i64,
    pub degree: Mode,
    pub dim: u64,
}

/// A coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterDiff {
    pub shift: i64,
    pub degree: Mode,
    pub left: u64,
    pub right: u64,
}

impl CharacterSeries {
    pub fn new(max_degree: Mode, depth: i64) -> Self {
        CharacterSeries { max_degree, depth, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, shift: i64, degree: Mode) -> u64 {
        self.coeffs.get(&(degree, shift)).copied().unwrap_or(0)
    }

    pub fn total_at_degree(&self, degree: Mode) -> u64 {
        self.coeffs.range((degree, i64::MIN)..=(degree, i64::MAX)).map(|(_, v)| v).sum()
    }

    fn add(&mut self, shift: i64, degree: Mode, n: u64) {
        if n > 0 {
            *self.coeffs.entry((degree, shift)).or_insert(0) += n;
        }
    }

    /// Entries ordered by degree, then by shift descending.
    pub fn entries(&self) -> Vec<CharacterEntry> {
        let mut v: Vec<_> = self
            .coeffs
            .iter()
            .map(|(&(degree, shift), &dim)| CharacterEntry { shift, degree, dim })
            .collect();
        v.sort_by(|a, b| a.degree.cmp(&b.degree).then(b.shift.cmp(&a.shift)));
        v
    }

    pub fn diff(&self, o: &CharacterSeries) -> Vec<CharacterDiff> {
        let mut keys: Vec<_> = self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(degree, shift)| {
                let (l, r) = (self.coeff(shift, degree), o.coeff(shift, degree));
                (l != r).then_some(CharacterDiff { shift, degree, left: l, right: r })
            })
            .collect()
    }

    /// Restriction to the common window.
    pub fn restrict(&self, max_degree: Mode, depth: i64) -> CharacterSeries {
        let mut out = CharacterSeries::new(max_degree, depth);
        for (&(d, s), &n) in &self.coeffs {
            if d <= max_degree && s >= -depth {
                out.add(s, d, n);
            }
        }
        out
    }
}

/// Counts basis monomials by weight.
pub fn fock_character(space: &FockSpace, d: Mode) -> Result<CharacterSeries> {
    if d > space.max_degree() {
        return Err(Error::Truncation(format!("degree {d} exceeds the space truncation {}", space.max_degree())));
    }
    let mut out = CharacterSeries::new(d, space.depth());
    for m in basis_up_to_degree(space, d) {
        let (s, deg) = space.grade(&m);
        out.add(s, deg, 1);
    }
    Ok(out)
}

/// Expands `Π 1/(1 − e^{−β})^{mult}` inside the window.
fn product_series(roots: &[(AffineRoot, u32)], d: Mode, depth: i64) -> CharacterSeries {
    // intermediate terms may sit below the window and be lifted later by factors
    // that raise the α-shift; the steepest such factor bounds how far
    let slope: Ratio<i64> = roots
        .iter()
        .filter(|(r, _)| r.finite < 0)
        .map(|(r, _)| Ratio::from_integer(-r.finite) / r.delta.ratio())
        .max()
        .unwrap_or_else(Ratio::zero);
    let floor = |deg: Mode| -> i64 { -depth - (slope * (d - deg).ratio()).floor().to_integer() };
    let mut cur: BTreeMap<(Mode, i64), u64> = BTreeMap::new();
    cur.insert((Mode::ZERO, 0), 1);
    for (r, mult) in roots {
        let (ds, dd) = r.lowering_grade();
        for _ in 0..*mult {
            let mut next = BTreeMap::new();
            for (&(deg, sh), &n) in &cur {
                let (mut deg2, mut sh2) = (deg, sh);
                while deg2 <= d && sh2 >= floor(deg2) {
                    *next.entry((deg2, sh2)).or_insert(0) += n;
                    deg2 = deg2 + dd;
                    sh2 += ds;
                    if dd.is_zero() && ds >= 0 {
                        break;
                    }
                }
            }
            cur = next;
        }
    }
    let mut out = CharacterSeries::new(d, depth);
    for ((deg, sh), n) in cur {
        if sh >= -depth {
            out.add(sh, deg, n);
        }
    }
    out
}

/// Verma character: product over all positive roots with multiplicities.
pub fn verma_character(d: Mode, depth: i64, datum: &RootDatum) -> CharacterSeries {
    let mut roots = datum.positive_real_roots(d);
    roots.extend(datum.positive_imaginary_roots(d));
    product_series(&roots, d, depth)
}

/// Product over positive real roots only.
pub fn kk_character(d: Mode, depth: i64, datum: &RootDatum) -> CharacterSeries {
    product_series(&datum.positive_real_roots(d), d, depth)
}

/// `2(χ + ρ, β) = n (β, β)`.
pub fn kk_equation_check(chi: &Weight, beta: &AffineRoot, n: u32, datum: &RootDatum) -> bool {
    let b = beta.as_weight(&datum.data);
    let lhs = q(2) * chi.add(&datum.rho).pair(&b, &datum.data);
    let rhs = q(i64::from(n)) * b.pair(&b, &datum.data);
    lhs == rhs
}

/// Bounded genericity scan over positive real roots with δ-part ≤ `bound` and
/// `n ≤ bound`. This is a certificate for the window only, not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityCertificate {
    pub generic: bool,
    pub bound: u32,
    /// Set when `bound = 0`: nothing was scanned.
    pub vacuous: bool,
    pub roots_scanned: usize,
    /// `(β, n)` pairs solving the equation.
    pub witnesses: Vec<(AffineRoot, u32)>,
}

pub fn is_generic(chi: &Weight, bound: u32, datum: &RootDatum) -> GenericityCertificate {
    let roots = if bound == 0 { Vec::new() } else { datum.positive_real_roots(Mode::int(i64::from(bound))) };
    let mut witnesses = Vec::new();
    for (r, _) in &roots {
        for n in 1..=bound {
            if kk_equation_check(chi, r, n, datum) {
                witnesses.push((*r, n));
            }
        }
    }
    GenericityCertificate { generic: witnesses.is_empty(), bound, vacuous: bound == 0, roots_scanned: roots.len(), witnesses }
}

/// The `c₁ = χ(H_{0,1})` solving the equation for `β` and `n` at level `k`, if unique.
pub fn solve_kk_for_chi(beta: &AffineRoot, n: u32, k: &Q, datum: &RootDatum) -> Option<Q> {
    // 2(χ+ρ,β) − n(β,β) is affine in c₁
    let at = |c: Q| {
        let chi = Weight::highest(vec![c], k.clone());
        let b = beta.as_weight(&datum.data);
        q(2) * chi.add(&datum.rho).pair(&b, &datum.data) - q(i64::from(n)) * b.pair(&b, &datum.data)
    };
    let f0 = at(Q::zero());
    let slope = at(q(1)) - &f0;
    (!slope.is_zero()).then(|| -f0 / slope)
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fin: Vec<_> = self.finite.iter().map(fmt_q).collect();
        write!(f, "(λ̄=[{}], k={}, d={})", fin.join(","), fmt_q(&self.level), fmt_q(&self.delta))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qr, Level};

    fn datum() -> RootDatum {
        RootDatum::a2_2()
    }

    #[test]
    fn rho_and_simple_roots() {
        let r = datum();
        assert_eq!(r.simple, vec![AffineRoot::new(1, Mode::ZERO), AffineRoot::new(-2, Mode::new(1, 2))]);
        assert_eq!(r.rho.finite, vec![qr(1, 2)]);
        assert_eq!(r.rho_level(), &q(3));
        let a = AffineRoot::new(1, Mode::ZERO);
        assert_eq!(r.pair_roots(&a, &a), qr(1, 2));
        for s in &r.simple {
            let sw = s.as_weight(&r.data);
            assert_eq!(q(2) * r.rho.pair(&sw, &r.data), sw.pair(&sw, &r.data));
        }
    }

    #[test]
    fn root_families() {
        let r = datum();
        let low: Vec<_> = r.positive_real_roots(Mode::new(1, 2)).into_iter().map(|(x, _)| x).collect();
        let h = Mode::new(1, 2);
        assert_eq!(
            low,
            vec![
                AffineRoot::new(-2, h),
                AffineRoot::new(-1, h),
                AffineRoot::new(1, Mode::ZERO),
                AffineRoot::new(1, h),
                AffineRoot::new(2, h),
            ]
        );
        let im = r.positive_imaginary_roots(Mode::int(1));
        assert_eq!(im, vec![(AffineRoot::new(0, h), 1), (AffineRoot::new(0, Mode::int(1)), 1)]);
    }

    #[test]
    fn real_and_imaginary_roots_orthogonal() {
        let r = datum();
        for (re, _) in r.positive_real_roots(Mode::int(2)) {
            for (im, _) in r.positive_imaginary_roots(Mode::int(2)) {
                assert_eq!(r.pair_roots(&re, &im), Q::zero());
                assert_eq!(r.pair_roots(&im, &im), Q::zero());
            }
        }
    }

    #[test]
    fn kk_examples() {
        let r = datum();
        let crit = Weight::highest(vec![qr(7, 5)], q(-3));
        for n in 1..5 {
            assert!(kk_equation_check(&crit, &AffineRoot::new(0, Mode::new(n, 2)), n as u32, &r));
        }
        let noncrit = Weight::highest(vec![qr(7, 5)], q(1));
        assert!(!kk_equation_check(&noncrit, &AffineRoot::new(0, Mode::int(1)), 1, &r));
        // β = α, n = 1: (c₁ + 1/2) = 1/2 ⇒ c₁ = 0
        let beta = AffineRoot::new(1, Mode::ZERO);
        let c = solve_kk_for_chi(&beta, 1, &q(1), &r).unwrap();
        assert_eq!(c, q(0));
        let chi = Weight::highest(vec![c], q(1));
        assert!(kk_equation_check(&chi, &beta, 1, &r));
        assert!(!is_generic(&chi, 3, &r).generic);
    }

    #[test]
    fn genericity_scan() {
        let r = datum();
        let cert = is_generic(&Weight::highest(vec![qr(7, 5)], q(-3)), 10, &r);
        assert!(cert.generic && !cert.vacuous && cert.roots_scanned > 0);
        let v = is_generic(&Weight::highest(vec![q(0)], q(-3)), 0, &r);
        assert!(v.generic && v.vacuous);
        let ng = is_generic(&Weight::highest(vec![q(-1)], q(-3)), 2, &r);
        assert!(ng.witnesses.contains(&(AffineRoot::new(-1, Mode::new(1, 2)), 1)));
    }

    #[test]
    fn verma_pure_delta_column_is_partition_count() {
        // coefficient at shift 0 for the imaginary-only product: partitions into parts in (1/2)ℤ>0
        let r = datum();
        let im = r.positive_imaginary_roots(Mode::int(3));
        let s = product_series(&im, Mode::int(3), 0);
        let partitions = [1u64, 1, 2, 3, 5, 7, 11];
        for (i, p) in partitions.iter().enumerate() {
            assert_eq!(s.coeff(0, Mode::new(i as i64, 2)), *p);
        }
    }

    #[test]
    fn fock_equals_verma_small() {
        let r = datum();
        let sp = FockSpace::wakimoto(r.data.clone(), Level::Value(q(1)), vec![qr(2, 7)])
            .unwrap()
            .truncated(Mode::new(3, 2), 1);
        let f = fock_character(&sp, Mode::new(3, 2)).unwrap();
        let v = verma_character(Mode::new(3, 2), 1, &r);
        assert_eq!(f.diff(&v), vec![]);
        assert_eq!(f.coeff(0, Mode::ZERO), 1);
        assert!(fock_character(&sp, Mode::int(2)).is_err());
    }
}
