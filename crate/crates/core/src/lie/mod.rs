//! Finite-dimensional Lie algebras in a fixed σ-diagonal basis.

mod a22;
mod automorphism;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{q, Q};

pub use a22::{build_a2_2, build_sl3, A22_LABELS, chevalley_involution, sl3_matrices, ChevalleyInvolution, SquareMatrix};
pub use automorphism::{eigenspace_decompose, Automorphism, Cyclotomic, Decomposition, EigenSummand, RootSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LabelKind {
    E,
    H,
}

/// Basis label `E_(j,α)` or `H_(i,a)`.
///
/// For `E`, `weight` is the g₀-weight as an integer multiple of the simple root α
/// of g₀ (rank-one case); for `H` it is the Cartan index `a ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub kind: LabelKind,
    pub j: u32,
    pub weight: i64,
}

impl GeneratorLabel {
    pub const fn e(j: u32, weight: i64) -> Self {
        GeneratorLabel { kind: LabelKind::E, j, weight }
    }
    pub const fn h(i: u32, a: i64) -> Self {
        GeneratorLabel { kind: LabelKind::H, j: i, weight: a }
    }
    /// g₀-weight (multiple of α); zero for Cartan labels.
    pub fn root_weight(&self) -> i64 {
        match self.kind {
            LabelKind::E => self.weight,
            LabelKind::H => 0,
        }
    }
}

/// `α`, `-α`, `2α`, ...
pub fn fmt_root_multiple(w: i64) -> String {
    match w {
        0 => "0".into(),
        1 => "α".into(),
        -1 => "-α".into(),
        _ => format!("{w}α"),
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabelKind::E => write!(f, "E_({},{})", self.j, fmt_root_multiple(self.weight)),
            LabelKind::H => write!(f, "H_({},{})", self.j, self.weight),
        }
    }
}

impl std::str::FromStr for GeneratorLabel {
    type Err = Error;
    /// Parses the display form, also accepting `a` for `α`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator label {s:?}"));
        let s = s.trim().replace('a', "α");
        let (kind, rest) = if let Some(r) = s.strip_prefix("E_(") {
            (LabelKind::E, r)
        } else if let Some(r) = s.strip_prefix("H_(") {
            (LabelKind::H, r)
        } else {
            return Err(bad());
        };
        let rest = rest.strip_suffix(')').ok_or_else(bad)?;
        let (j, w) = rest.split_once(',').ok_or_else(bad)?;
        let j: u32 = j.trim().parse().map_err(|_| bad())?;
        let w = w.trim();
        let weight = match kind {
            LabelKind::H => w.parse().map_err(|_| bad())?,
            LabelKind::E => {
                let body = w.strip_suffix('α').ok_or_else(bad)?;
                match body {
                    "" => 1,
                    "-" => -1,
                    _ => body.parse().map_err(|_| bad())?,
                }
            }
        };
        Ok(GeneratorLabel { kind, j, weight })
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Element of a [`LieAlgebra`] as exact coordinates in its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    algebra: u64,
    coeffs: Vec<Q>,
}

impl LieElement {
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    /// Nonzero coordinates as `(basis index, coefficient)`.
    pub fn support(&self) -> Vec<(usize, Q)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    }
    pub fn scale(&self, c: &Q) -> LieElement {
        LieElement { algebra: self.algebra, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
    pub fn add(&self, o: &LieElement) -> Result<LieElement> {
        if self.algebra != o.algebra {
            return Err(Error::Structural("elements of different algebras".into()));
        }
        Ok(LieElement { algebra: self.algebra, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }
}

/// Sparse vector of basis coordinates.
pub type Sparse = Vec<(usize, Q)>;

/// Lie algebra given by structure constants in a fixed basis, with its
/// normalized invariant form `(x,y) = Tr(ad x ad y) / (2ř)`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    id: u64,
    rank: usize,
    labels: Vec<GeneratorLabel>,
    brackets: Vec<Vec<Sparse>>,
    form: Vec<Vec<Q>>,
    dual_coxeter: u32,
    realization: Option<Vec<SquareMatrix>>,
}

impl LieAlgebra {
    /// Builds the algebra from structure constants `[b_i, b_j] = Σ c_{ij}^l b_l`.
    pub fn from_structure_constants(
        labels: Vec<GeneratorLabel>,
        brackets: Vec<Vec<Sparse>>,
        rank: usize,
        dual_coxeter: u32,
    ) -> Result<Self> {
        let dim = labels.len();
        if brackets.len() != dim || brackets.iter().any(|r| r.len() != dim) {
            return Err(Error::Structural("structure constant table has wrong shape".into()));
        }
        let mut alg = LieAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            rank,
            labels,
            brackets,
            form: Vec::new(),
            dual_coxeter,
            realization: None,
        };
        alg.check_antisymmetry()?;
        alg.form = alg.ad_trace_form();
        Ok(alg)
    }

    /// Builds the algebra from a faithful matrix realization of its basis.
    pub fn from_matrices(
        labels: Vec<GeneratorLabel>,
        matrices: Vec<SquareMatrix>,
        rank: usize,
        dual_coxeter: u32,
    ) -> Result<Self> {
        let dim = labels.len();
        if matrices.len() != dim {
            return Err(Error::Structural("one matrix per basis label required".into()));
        }
        let coords = MatrixCoordinates::new(&matrices)?;
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let c = matrices[i].commutator(&matrices[j]);
                brackets[i][j] = coords.decompose(&c)?;
            }
        }
        let mut alg = Self::from_structure_constants(labels, brackets, rank, dual_coxeter)?;
        alg.realization = Some(matrices);
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }
    pub fn dual_coxeter(&self) -> u32 {
        self.dual_coxeter
    }
    pub fn realization(&self) -> Option<&[SquareMatrix]> {
        self.realization.as_deref()
    }

    pub fn index_of(&self, label: &GeneratorLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis(&self, i: usize) -> LieElement {
        let mut coeffs = vec![Q::zero(); self.dim()];
        coeffs[i] = Q::one();
        LieElement { algebra: self.id, coeffs }
    }

    pub fn element(&self, coeffs: Vec<Q>) -> Result<LieElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::Structural("coordinate vector has wrong length".into()));
        }
        Ok(LieElement { algebra: self.id, coeffs })
    }

    pub fn element_from_sparse(&self, s: &Sparse) -> LieElement {
        let mut coeffs = vec![Q::zero(); self.dim()];
        for (i, c) in s {
            coeffs[*i] += c;
        }
        LieElement { algebra: self.id, coeffs }
    }

    /// Structure constants of `[b_i, b_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &Sparse {
        &self.brackets[i][j]
    }

    fn own(&self, x: &LieElement) -> Result<()> {
        if x.algebra != self.id {
            return Err(Error::Structural("element belongs to a different algebra".into()));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.own(x)?;
        self.own(y)?;
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = &a * &b;
                for (l, c) in &self.brackets[i][j] {
                    out[*l] += &ab * c;
                }
            }
        }
        Ok(LieElement { algebra: self.id, coeffs: out })
    }

    /// Normalized invariant form.
    pub fn normalized_form(&self, x: &LieElement, y: &LieElement) -> Result<Q> {
        self.own(x)?;
        self.own(y)?;
        let mut acc = Q::zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                acc += &a * &b * &self.form[i][j];
            }
        }
        Ok(acc)
    }

    pub fn form_basis(&self, i: usize, j: usize) -> &Q {
        &self.form[i][j]
    }

    /// Matrix of `ad(b_i)`: column `j` holds the coordinates of `[b_i, b_j]`.
    pub fn ad(&self, i: usize) -> Vec<Vec<Q>> {
        let n = self.dim();
        let mut m = vec![vec![Q::zero(); n]; n];
        for j in 0..n {
            for (l, c) in &self.brackets[i][j] {
                m[*l][j] = c.clone();
            }
        }
        m
    }

    fn ad_trace_form(&self) -> Vec<Vec<Q>> {
        let n = self.dim();
        let ads: Vec<_> = (0..n).map(|i| self.ad(i)).collect();
        let scale = Q::one() / q(2 * i64::from(self.dual_coxeter));
        let mut form = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut tr = Q::zero();
                for a in 0..n {
                    for b in 0..n {
                        if !ads[i][a][b].is_zero() && !ads[j][b][a].is_zero() {
                            tr += &ads[i][a][b] * &ads[j][b][a];
                        }
                    }
                }
                form[i][j] = &tr * &scale;
                form[j][i] = form[i][j].clone();
            }
        }
        form
    }

    fn check_antisymmetry(&self) -> Result<()> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let a = self.element_from_sparse(&self.brackets[i][j]);
                let b = self.element_from_sparse(&self.brackets[j][i]);
                if !a.add(&b)?.is_zero() {
                    return Err(Error::Structural(format!("bracket not antisymmetric at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Jacobi identity over all basis triples `i < j < l`.
    pub fn check_jacobi(&self) -> Result<usize> {
        let n = self.dim();
        let mut checked = 0;
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(l));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z)?)?;
                    let t2 = self.bracket(&y, &self.bracket(&z, &x)?)?;
                    let t3 = self.bracket(&z, &self.bracket(&x, &y)?)?;
                    if !t1.add(&t2)?.add(&t3)?.is_zero() {
                        return Err(Error::Structural(format!("Jacobi fails on ({i},{j},{l})")));
                    }
                    checked += 1;
                }
            }
        }
        Ok(checked)
    }

    /// `([x,y],z) + (y,[x,z]) = 0` over all basis triples.
    pub fn check_invariance(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(l));
                    let a = self.normalized_form(&self.bracket(&x, &y)?, &z)?;
                    let b = self.normalized_form(&y, &self.bracket(&x, &z)?)?;
                    if !(a + b).is_zero() {
                        return Err(Error::Structural(format!("form not invariant on ({i},{j},{l})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Solves for coordinates of a matrix in a fixed matrix basis.
struct MatrixCoordinates {
    system: Matrix,
    dim: usize,
}

impl MatrixCoordinates {
    fn new(basis: &[SquareMatrix]) -> Result<Self> {
        let n = basis.first().map(|m| m.n()).unwrap_or(0);
        let rows = (0..n * n)
            .map(|e| basis.iter().map(|m| m.entry(e / n, e % n).clone()).collect())
            .collect();
        let system = Matrix::from_rows(basis.len(), rows);
        if linalg::rank(&system) != basis.len() {
            return Err(Error::Structural("matrices are linearly dependent".into()));
        }
        Ok(MatrixCoordinates { system, dim: basis.len() })
    }

    fn decompose(&self, m: &SquareMatrix) -> Result<Sparse> {
        let n = m.n();
        let b: Vec<Q> = (0..n * n).map(|e| m.entry(e / n, e % n).clone()).collect();
        if b.iter().all(Zero::is_zero) {
            return Ok(Vec::new());
        }
        let x = linalg::solve(&self.system, &b)
            .map_err(|_| Error::Structural("matrix outside the span of the basis".into()))?;
        debug_assert_eq!(x.len(), self.dim);
        Ok(x.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
    }
}
