//! Diagram automorphisms in the σ-diagonal basis and the induced gradation g = ⊕ gⱼ.

use std::fmt;

use num::{One, Zero};

use super::{LabelKind, LieAlgebra, LieElement};
use crate::error::{Error, Result};
use crate::scalar::{fmt_q, q, Q};

/// Element `a + b ε` of ℚ(ε), ε a primitive N-th root of unity, N ∈ {1, 2, 3}.
///
/// For N ≤ 2, ε = ±1 is folded into `a` and `b` stays zero; for N = 3,
/// ε² = −1 − ε.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u32,
    a: Q,
    b: Q,
}

impl Cyclotomic {
    pub fn new(n: u32, a: Q, b: Q) -> Self {
        assert!((1..=3).contains(&n), "only N = 1, 2, 3 are supported");
        match n {
            1 => Cyclotomic { n, a: a + b, b: Q::zero() },
            2 => Cyclotomic { n, a: a - b, b: Q::zero() },
            _ => Cyclotomic { n, a, b },
        }
    }

    pub fn from_q(n: u32, a: Q) -> Self {
        Self::new(n, a, Q::zero())
    }

    /// ε^j.
    pub fn eps_pow(n: u32, j: u32) -> Self {
        match (n, j % n) {
            (_, 0) => Self::from_q(n, Q::one()),
            (3, 1) => Self::new(3, Q::zero(), Q::one()),
            (3, _) => Self::new(3, q(-1), q(-1)),
            _ => Self::new(n, Q::zero(), Q::one()),
        }
    }

    pub fn mul(&self, o: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.n, o.n);
        let ac = &self.a * &o.a;
        let bd = &self.b * &o.b;
        let cross = &self.a * &o.b + &self.b * &o.a;
        Cyclotomic::new(self.n, ac - &bd, cross - bd)
    }

    pub fn add(&self, o: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::new(self.n, &self.a + &o.a, &self.b + &o.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            f.write_str(&fmt_q(&self.a))
        } else {
            write!(f, "{} + {}ε", fmt_q(&self.a), fmt_q(&self.b))
        }
    }
}

/// Finite-order automorphism acting diagonally: σ(bᵢ) = ε^{jᵢ} bᵢ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    order: u32,
    eigen: Vec<u32>,
}

impl Automorphism {
    pub fn diagonal(order: u32, eigen: Vec<u32>) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::Unsupported(format!("automorphism of order {order}")));
        }
        if eigen.iter().any(|&j| j >= order) {
            return Err(Error::Validation("eigen-index out of range".into()));
        }
        Ok(Automorphism { order, eigen })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn eigen_index(&self, i: usize) -> u32 {
        self.eigen[i]
    }

    /// Coordinates of σ(x) in ℚ(ε).
    pub fn apply(&self, x: &LieElement) -> Vec<Cyclotomic> {
        x.coeffs()
            .iter()
            .zip(&self.eigen)
            .map(|(c, &j)| Cyclotomic::from_q(self.order, c.clone()).mul(&Cyclotomic::eps_pow(self.order, j)))
            .collect()
    }

    /// Checks σᴺ = 1, σ[x,y] = [σx,σy] and (σx,σy) = (x,y) on all basis pairs.
    pub fn validate(&self, g: &LieAlgebra) -> Result<()> {
        if self.eigen.len() != g.dim() {
            return Err(Error::Validation("automorphism has wrong dimension".into()));
        }
        let n = self.order;
        for i in 0..g.dim() {
            let mut p = Cyclotomic::from_q(n, Q::one());
            for _ in 0..n {
                p = p.mul(&Cyclotomic::eps_pow(n, self.eigen[i]));
            }
            if !p.is_one() {
                return Err(Error::Validation("σ^N ≠ 1".into()));
            }
        }
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let phase = Cyclotomic::eps_pow(n, self.eigen[i] + self.eigen[j]);
                let br = g.element_from_sparse(g.bracket_basis(i, j));
                let lhs = self.apply(&br);
                let rhs: Vec<_> = br.coeffs().iter().map(|c| Cyclotomic::from_q(n, c.clone()).mul(&phase)).collect();
                if lhs != rhs {
                    return Err(Error::Validation(format!("σ does not preserve the bracket on ({i},{j})")));
                }
                let f = Cyclotomic::from_q(n, g.form_basis(i, j).clone());
                if f.mul(&phase) != f {
                    return Err(Error::Validation(format!("σ does not preserve the form on ({i},{j})")));
                }
            }
        }
        Ok(())
    }
}

/// One-dimensional g₀-weight space inside gⱼ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSpace {
    pub index: usize,
    /// Values λ(H_{0,a}) of the weight on the Cartan basis of g₀.
    pub eigenvalues: Vec<Q>,
    /// Integer multiple of the simple root of g₀ (rank-one g₀ only).
    pub multiple: Option<i64>,
    /// Whether the root vector lies in n₊.
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSummand {
    pub j: u32,
    pub basis: Vec<usize>,
    /// Weight-zero part hⱼ.
    pub cartan: Vec<usize>,
    pub roots: Vec<RootSpace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub order: u32,
    pub summands: Vec<EigenSummand>,
    /// Cartan basis of g₀ (indices of the `H_(0,a)`).
    pub cartan0: Vec<usize>,
    /// Values of the simple root α of g₀ on `cartan0` (empty unless rank g₀ = 1).
    pub alpha_values: Vec<Q>,
}

impl Decomposition {
    pub fn summand(&self, j: u32) -> Option<&EigenSummand> {
        self.summands.iter().find(|s| s.j == j)
    }

    /// Δ⁺ⱼ as integer multiples of α, increasing.
    pub fn positive_weights(&self, j: u32) -> Vec<i64> {
        let mut w: Vec<i64> = self
            .summand(j)
            .map(|s| s.roots.iter().filter(|r| r.positive).filter_map(|r| r.multiple).collect())
            .unwrap_or_default();
        w.sort();
        w
    }
}

/// Splits g into σ-eigenspaces and each into g₀-weight spaces.
///
/// Positivity of a root space is read off the matrix realization (strictly
/// upper triangular = in n₊).
pub fn eigenspace_decompose(g: &LieAlgebra, sigma: &Automorphism) -> Result<Decomposition> {
    sigma.validate(g)?;
    let n = sigma.order();
    let cartan0: Vec<usize> = (0..g.dim())
        .filter(|&i| sigma.eigen_index(i) == 0 && g.labels()[i].kind == LabelKind::H)
        .collect();
    for &a in &cartan0 {
        for &b in &cartan0 {
            if !g.bracket_basis(a, b).is_empty() {
                return Err(Error::Validation("Cartan part of g₀ is not abelian".into()));
            }
        }
    }
    let mats = g.realization();
    let mut eigen = Vec::with_capacity(g.dim());
    for i in 0..g.dim() {
        let mut vals = Vec::with_capacity(cartan0.len());
        for &h in &cartan0 {
            let br = g.bracket_basis(h, i);
            let val = match br.as_slice() {
                [] => Q::zero(),
                [(l, c)] if *l == i => c.clone(),
                _ => return Err(Error::Validation(format!("basis vector {} is not a g₀-weight vector", g.labels()[i]))),
            };
            vals.push(val);
        }
        eigen.push(vals);
    }
    // simple root of a rank-one g₀: the positive g₀ root with the smallest eigenvalue
    let mut alpha_values = Vec::new();
    if cartan0.len() == 1 {
        let best = (0..g.dim())
            .filter(|&i| sigma.eigen_index(i) == 0 && eigen[i][0] > Q::zero())
            .map(|i| eigen[i][0].clone())
            .min();
        if let Some(a) = best {
            alpha_values.push(a);
        }
    }
    let mut summands = Vec::new();
    for j in 0..n {
        let basis: Vec<usize> = (0..g.dim()).filter(|&i| sigma.eigen_index(i) == j).collect();
        if basis.is_empty() {
            continue;
        }
        let mut cartan = Vec::new();
        let mut roots = Vec::new();
        for &i in &basis {
            let label = g.labels()[i];
            if n > 1 && label.j != j {
                return Err(Error::Validation(format!("label {label} sits in the ε^{j} eigenspace")));
            }
            if eigen[i].iter().all(Zero::is_zero) {
                cartan.push(i);
                continue;
            }
            let multiple = alpha_values.first().map(|a| {
                let m = &eigen[i][0] / a;
                if !m.is_integer() {
                    return Err(Error::Validation("weight is not an integer multiple of α".into()));
                }
                Ok(m.to_integer().try_into().expect("small weight"))
            });
            let multiple = multiple.transpose()?;
            if let Some(m) = multiple {
                if label.kind != LabelKind::E || label.weight != m {
                    return Err(Error::Validation(format!("label {label} carries weight {m}α")));
                }
            }
            let positive = match mats {
                Some(ms) if ms[i].is_strictly_upper() => true,
                Some(ms) if ms[i].is_strictly_lower() => false,
                Some(_) => return Err(Error::Validation(format!("{label} is neither in n₊ nor n₋"))),
                None => return Err(Error::Unsupported("positivity needs a matrix realization".into())),
            };
            roots.push(RootSpace { index: i, eigenvalues: eigen[i].clone(), multiple, positive });
        }
        summands.push(EigenSummand { j, basis, cartan, roots });
    }
    Ok(Decomposition { order: n, summands, cartan0, alpha_values })
}
