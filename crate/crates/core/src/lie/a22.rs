//! sl₃ in the σ-diagonal basis of A₂⁽²⁾, built from 3×3 matrices.

use num::{One, Zero};

use super::{Automorphism, GeneratorLabel, LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};

/// Exact square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Q>,
}

impl SquareMatrix {
    pub fn zero(n: usize) -> Self {
        SquareMatrix { n, data: vec![Q::zero(); n * n] }
    }

    /// Elementary matrix `R_(i,j)` (1-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.data[(i - 1) * n + (j - 1)] = Q::one();
        m
    }

    /// `Σ c · R_(i,j)`.
    pub fn combo(n: usize, terms: &[(i64, usize, usize)]) -> Self {
        let mut m = Self::zero(n);
        for &(c, i, j) in terms {
            m.data[(i - 1) * n + (j - 1)] += q(c);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &SquareMatrix) -> SquareMatrix {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.entry(k, j);
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &SquareMatrix) -> SquareMatrix {
        let ab = self.mul(o);
        let ba = o.mul(self);
        SquareMatrix { n: self.n, data: ab.data.iter().zip(&ba.data).map(|(x, y)| x - y).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.entry(i, i).clone()).sum()
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.entry(i, j).clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> SquareMatrix {
        SquareMatrix { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| self.entry(i, j).is_zero()))
    }

    pub fn is_strictly_lower(&self) -> bool {
        self.transpose().is_strictly_upper()
    }

    /// Diagram automorphism of sl₃: `X ↦ −A Xᵀ A` with `A = antidiag(1, −1, 1)`.
    pub fn sigma(&self) -> SquareMatrix {
        let a = SquareMatrix::combo(3, &[(1, 1, 3), (-1, 2, 2), (1, 3, 1)]);
        a.mul(&self.transpose()).mul(&a).scale(&q(-1))
    }
}

/// Basis labels of A₂⁽²⁾ in their fixed order.
pub const A22_LABELS: [GeneratorLabel; 8] = [
    GeneratorLabel::e(0, 1),
    GeneratorLabel::e(1, 1),
    GeneratorLabel::e(1, 2),
    GeneratorLabel::h(0, 1),
    GeneratorLabel::h(1, 1),
    GeneratorLabel::e(0, -1),
    GeneratorLabel::e(1, -1),
    GeneratorLabel::e(1, -2),
];

/// The eight basis matrices, in the order of [`A22_LABELS`].
pub fn sl3_matrices() -> Vec<SquareMatrix> {
    let m = |t: &[(i64, usize, usize)]| SquareMatrix::combo(3, t);
    vec![
        m(&[(1, 1, 2), (1, 2, 3)]),
        m(&[(1, 1, 2), (-1, 2, 3)]),
        m(&[(-2, 1, 3)]),
        m(&[(1, 1, 1), (-1, 3, 3)]),
        m(&[(1, 1, 1), (-2, 2, 2), (1, 3, 3)]),
        m(&[(1, 2, 1), (1, 3, 2)]),
        m(&[(1, 2, 1), (-1, 3, 2)]),
        m(&[(-2, 3, 1)]),
    ]
}

/// sl₃ in the σ-diagonal basis together with the order-2 diagram automorphism.
pub fn build_a2_2() -> (LieAlgebra, Automorphism) {
    let alg = LieAlgebra::from_matrices(A22_LABELS.to_vec(), sl3_matrices(), 2, 3)
        .expect("the A2(2) basis matrices span sl3");
    let sigma = Automorphism::diagonal(2, A22_LABELS.iter().map(|l| l.j).collect())
        .expect("order-2 eigen-indices");
    (alg, sigma)
}

/// sl₃ in the Chevalley basis `R_(i,j)`, `H_1 = R_11 − R_22`, `H_2 = R_22 − R_33`
/// with the trivial automorphism. Root vectors are labelled by height.
pub fn build_sl3() -> (LieAlgebra, Automorphism) {
    let m = |t: &[(i64, usize, usize)]| SquareMatrix::combo(3, t);
    let labels = vec![
        GeneratorLabel::e(0, 1),
        GeneratorLabel::e(0, 2),
        GeneratorLabel::e(0, 3),
        GeneratorLabel::h(0, 1),
        GeneratorLabel::h(0, 2),
        GeneratorLabel::e(0, -1),
        GeneratorLabel::e(0, -2),
        GeneratorLabel::e(0, -3),
    ];
    let mats = vec![
        m(&[(1, 1, 2)]),
        m(&[(1, 2, 3)]),
        m(&[(1, 1, 3)]),
        m(&[(1, 1, 1), (-1, 2, 2)]),
        m(&[(1, 2, 2), (-1, 3, 3)]),
        m(&[(1, 2, 1)]),
        m(&[(1, 3, 2)]),
        m(&[(1, 3, 1)]),
    ];
    let alg = LieAlgebra::from_matrices(labels, mats, 2, 3).expect("Chevalley basis of sl3");
    let sigma = Automorphism::diagonal(1, vec![0; 8]).expect("trivial automorphism");
    (alg, sigma)
}

/// Chevalley anti-involution ω: `ω(b_i) = c_i · b_{π(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyInvolution {
    pub image: Vec<(usize, Q)>,
}

impl ChevalleyInvolution {
    pub fn apply(&self, g: &LieAlgebra, x: &LieElement) -> LieElement {
        let mut s = Vec::new();
        for (i, c) in x.support() {
            let (t, d) = &self.image[i];
            s.push((*t, c * d));
        }
        g.element_from_sparse(&s)
    }
}

/// ω as matrix transposition, checked to be an anti-involution that fixes the
/// Cartan part of g₀ and maps `E_(0,α)` to exactly `E_(0,−α)`.
pub fn chevalley_involution(g: &LieAlgebra) -> Result<ChevalleyInvolution> {
    let mats = g
        .realization()
        .ok_or_else(|| Error::Unsupported("ω needs a matrix realization".into()))?;
    let mut image = Vec::with_capacity(g.dim());
    for m in mats {
        let t = m.transpose();
        let hit = mats.iter().enumerate().find_map(|(j, b)| proportional(&t, b).map(|c| (j, c)));
        image.push(hit.ok_or_else(|| Error::Structural("transpose does not permute the basis".into()))?);
    }
    let omega = ChevalleyInvolution { image };
    for i in 0..g.dim() {
        let x = g.basis(i);
        if omega.apply(g, &omega.apply(g, &x)) != x {
            return Err(Error::Structural("ω is not an involution".into()));
        }
        for j in 0..g.dim() {
            let y = g.basis(j);
            let lhs = omega.apply(g, &g.bracket(&x, &y)?);
            let rhs = g.bracket(&omega.apply(g, &y), &omega.apply(g, &x))?;
            if lhs != rhs {
                return Err(Error::Structural("ω is not an anti-homomorphism".into()));
            }
        }
        let l = g.labels()[i];
        if l.kind == super::LabelKind::H && l.j == 0 && omega.image[i] != (i, Q::one()) {
            return Err(Error::Structural("ω does not fix h₀".into()));
        }
    }
    if let (Some(p), Some(m)) = (g.index_of(&GeneratorLabel::e(0, 1)), g.index_of(&GeneratorLabel::e(0, -1))) {
        if omega.image[p] != (m, Q::one()) {
            return Err(Error::Structural("ω(E_(0,α)) ≠ E_(0,−α)".into()));
        }
    }
    Ok(omega)
}

fn proportional(a: &SquareMatrix, b: &SquareMatrix) -> Option<Q> {
    let mut ratio: Option<Q> = None;
    for (x, y) in a.data.iter().zip(&b.data) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (false, false) => {
                let r = x / y;
                if ratio.as_ref().is_some_and(|c| *c != r) {
                    return None;
                }
                ratio = Some(r);
            }
            _ => return None,
        }
    }
    ratio
}
