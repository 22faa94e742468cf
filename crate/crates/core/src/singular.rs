//! Singular vectors: kernels of raising operators on weight blocks.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::Realization;
use crate::characters::{is_generic, GenericityCertificate, RootDatum, Weight};
use crate::error::{Error, Result};
use crate::fields::Currents;
use crate::fock::{basis_up_to_degree, FockMonomial, FockSpace, FockVector, FreeFieldData, Mode};
use crate::lie::GeneratorLabel;
use crate::linalg::{self, Matrix};
use crate::scalar::{fmt_q, q, Q};

/// Which raising operators a singular vector must be killed by.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RaisingSet {
    /// Every `X_m` with `m > 0`, plus the positive root vectors of g₀ at `m = 0`.
    #[default]
    Full,
    /// `E_(j,α)` with α > 0 and `m ≥ 0`.
    LoopNilpotent,
    /// The Chevalley generators of the positive part.
    Chevalley,
}

impl FromStr for RaisingSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(RaisingSet::Full),
            "loop-nilpotent" => Ok(RaisingSet::LoopNilpotent),
            "chevalley" => Ok(RaisingSet::Chevalley),
            _ => Err(Error::Parse(format!("unknown raising set {s:?} (full | loop-nilpotent | chevalley)"))),
        }
    }
}

/// The raising operators relevant for a block of degree `d`: modes above `d`
/// lower the degree below zero and act trivially.
pub fn raising_operators(set: RaisingSet, labels: &[GeneratorLabel], order: u32, d: Mode) -> Vec<(GeneratorLabel, Mode)> {
    let mut out = Vec::new();
    match set {
        RaisingSet::Full | RaisingSet::LoopNilpotent => {
            for x in labels {
                let positive = x.root_weight() > 0;
                if set == RaisingSet::LoopNilpotent && !positive {
                    continue;
                }
                for m in Mode::coset_range(Mode::offset(x.j, order), Mode::ZERO, d) {
                    if m.is_positive() || (positive && x.j % order == 0) {
                        out.push((*x, m));
                    }
                }
            }
        }
        RaisingSet::Chevalley => {
            // α at mode 0 and −θ + δ/N at mode 1/N, θ the highest g_1 weight
            let theta = labels.iter().filter(|x| x.j % order == 1 % order).map(|x| x.root_weight()).max().unwrap_or(0);
            for x in labels {
                if (x.j % order == 0 && x.root_weight() == 1) || (x.j % order == 1 % order && x.root_weight() == -theta) {
                    let m = if x.j % order == 0 { Mode::ZERO } else { Mode::offset(1, order) };
                    if m <= d {
                        out.push((*x, m));
                    }
                }
            }
        }
    }
    out
}

/// Monomials of one weight `χ + shift·α − degree·δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBlock {
    pub shift: i64,
    pub degree: Mode,
    pub basis: Vec<FockMonomial>,
    pub raising: Vec<(GeneratorLabel, Mode)>,
}

/// Splits the truncated basis into weight blocks, ordered by degree then shift descending.
pub fn weight_blocks(space: &FockSpace, deg_bound: Mode, labels: &[GeneratorLabel], set: RaisingSet) -> Vec<WeightBlock> {
    let mut by: BTreeMap<(Mode, i64), Vec<FockMonomial>> = BTreeMap::new();
    for m in basis_up_to_degree(space, deg_bound) {
        let (s, d) = space.grade(&m);
        by.entry((d, -s)).or_default().push(m);
    }
    by.into_iter()
        .map(|((degree, ms), basis)| WeightBlock {
            shift: -ms,
            degree,
            basis,
            raising: raising_operators(set, labels, space.data().order, degree),
        })
        .collect()
}

/// Stacked images of the block basis under the raising operators; one row per
/// (operator, target monomial), one column per basis monomial.
pub fn raising_matrix(block: &WeightBlock, real: &Realization) -> Result<Matrix> {
    let mut rows: BTreeMap<(usize, FockMonomial), Vec<Q>> = BTreeMap::new();
    let ncols = block.basis.len();
    for (oi, (x, m)) in block.raising.iter().enumerate() {
        let op = real.operator(x, *m)?;
        for (ci, mono) in block.basis.iter().enumerate() {
            let img = op.apply(&FockVector::<Q>::monomial(mono.clone()))?;
            for (t, c) in img.iter() {
                rows.entry((oi, t.clone())).or_insert_with(|| vec![Q::zero(); ncols])[ci] = c.clone();
            }
        }
    }
    Ok(Matrix::from_rows(ncols, rows.into_values().collect()))
}

/// Kernel of one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockKernel {
    pub shift: i64,
    pub degree: Mode,
    pub dim: usize,
    pub kernel_dim: usize,
    /// Kernel basis vectors as `{monomial: coefficient}`.
    pub kernel: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    pub space: String,
    pub level: String,
    pub chi: Vec<String>,
    pub deg_bound: Mode,
    pub depth: i64,
    pub raising: RaisingSet,
    pub blocks_scanned: usize,
    /// The vacuum block and every block with a nonzero kernel.
    pub singular: Vec<BlockKernel>,
    pub vacuum_only: bool,
    /// `ω(x) = c·y` as `{x: "c·y"}`, for contragredient scans.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GenericityCertificate>,
}

fn block_kernel(block: &WeightBlock, real: &Realization) -> Result<BlockKernel> {
    let data = real.space.data();
    let kernel = if block.raising.is_empty() {
        (0..block.basis.len())
            .map(|i| (0..block.basis.len()).map(|j| if i == j { q(1) } else { Q::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&raising_matrix(block, real)?)
    };
    Ok(BlockKernel {
        shift: block.shift,
        degree: block.degree,
        dim: block.basis.len(),
        kernel_dim: kernel.len(),
        kernel: kernel
            .iter()
            .map(|v| {
                block
                    .basis
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m.display(data), fmt_q(c)))
                    .collect()
            })
            .collect(),
    })
}

/// Scans every weight block of degree ≤ `deg_bound` in the space's window.
/// `genericity_bound > 0` attaches a Kac–Kazhdan scan of χ.
pub fn find_singular(real: &Realization, deg_bound: Mode, set: RaisingSet, genericity_bound: u32) -> Result<SingularReport> {
    let sp = &real.space;
    if sp.level().value().is_none() {
        return Err(Error::Unsupported("singular vector scans need a numeric level".into()));
    }
    if deg_bound > sp.max_degree() {
        return Err(Error::Truncation(format!("degree bound {deg_bound} exceeds the truncation {}", sp.max_degree())));
    }
    let blocks = weight_blocks(sp, deg_bound, &real.currents.labels(), set);
    let kernels: Vec<BlockKernel> = blocks.par_iter().map(|b| block_kernel(b, real)).collect::<Result<_>>()?;
    let singular: Vec<BlockKernel> = kernels
        .into_iter()
        .filter(|k| k.kernel_dim > 0 || (k.degree.is_zero() && k.shift == 0))
        .collect();
    let vacuum_only = singular.iter().all(|k| k.degree.is_zero() && k.shift == 0);
    let certificate = (genericity_bound > 0).then(|| {
        let datum = RootDatum::a2_2();
        let chi = Weight::highest(sp.chi().to_vec(), sp.level().value().cloned().unwrap_or_default());
        is_generic(&chi, genericity_bound, &datum)
    });
    Ok(SingularReport {
        space: format!("{:?}", sp.kind()),
        level: sp.level().to_string(),
        chi: sp.chi().iter().map(fmt_q).collect(),
        deg_bound,
        depth: sp.depth(),
        raising: set,
        blocks_scanned: blocks.len(),
        singular,
        vacuum_only,
        omega: real.omega.as_ref().map(|w| {
            let labels = real.g.labels();
            w.image.iter().enumerate().map(|(i, (t, c))| (labels[i].to_string(), format!("{}·{}", fmt_q(c), labels[*t]))).collect()
        }),
        certificate,
    })
}

/// The same scan on the contragredient of W̄^σ_χ, where `x·v = T(ω(x))·v`.
pub fn contragredient_scan(
    chi: Vec<Q>,
    currents: &Currents,
    deg_bound: Mode,
    depth: i64,
    set: RaisingSet,
    genericity_bound: u32,
) -> Result<SingularReport> {
    let data = currents.data().clone();
    let sp = FockSpace::dual_restricted(data, chi)?.truncated(deg_bound, depth);
    find_singular(&Realization::new(currents.clone(), sp)?, deg_bound, set, genericity_bound)
}

/// Kernel dimension after permuting the basis and rows and rescaling rows
/// with a seeded generator; must equal the plain kernel dimension.
pub fn permuted_kernel_dim(block: &WeightBlock, real: &Realization, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = block.clone();
    b.basis.shuffle(&mut rng);
    let m = raising_matrix(&b, real)?;
    let mut rows: Vec<Vec<Q>> = m.rows.clone();
    rows.shuffle(&mut rng);
    for (i, r) in rows.iter_mut().enumerate() {
        let s = q(i as i64 % 5 + 1) * if i % 2 == 0 { q(1) } else { q(-1) };
        for x in r.iter_mut() {
            *x *= &s;
        }
    }
    let m2 = Matrix::from_rows(m.ncols, rows);
    Ok(block.basis.len() - linalg::rank(&m2))
}

/// Convenience: W̄^σ_χ with the A₂⁽²⁾ data at `c₁`.
pub fn restricted_realization(currents: &Currents, c1: Q, deg_bound: Mode, depth: i64) -> Result<Realization> {
    let data = std::sync::Arc::new(FreeFieldData::a2_2());
    let sp = FockSpace::restricted(data, vec![c1])?.truncated(deg_bound, depth);
    Realization::new(currents.clone(), sp)
}
