//! Direct construction of `(2^k, 2^k, 2^n, 2^m)` complete complementary codes
//! from 2D generalized Boolean functions.
//!
//! The x-indices `{1..m}` and y-indices `{1..n}` are each split into `k`
//! ordered blocks. Within block `α` the x-variables are visited in the order
//! `π_α(1), …, π_α(m_α)` and the y-variables in the order
//! `σ_α(1), …, σ_α(n_α)`. The base function is
//!
//! ```text
//! f = q/2 · Σ_α Σ_l x_{π_α(l)} x_{π_α(l+1)}
//!   + q/2 · Σ_α Σ_l y_{σ_α(l)} y_{σ_α(l+1)}
//!   + q/2 · Σ_α x_{π_α(m_α)} y_{σ_α(1)}
//!   + Σ d_l x_l + Σ w_l y_l + w_0
//! ```
//!
//! and array `t` of set `p` adds `q/2 · x_{π_α(1)}` for every set bit `t_α`
//! of `t` and `q/2 · y_{σ_α(n_α)}` for every set bit `p_α` of `p`. Bit `α`
//! of an index is its `α`-th least significant binary digit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::ZqArray;
use crate::family::CccFamily;
use crate::gbf::{GbfPolynomial, Var, MAX_VARIABLES};

/// Which variable axis a validation error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("alphabet size q = {0} must be an even integer >= 2")]
    InvalidModulus(u32),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("need m >= k and n >= k (m = {m}, n = {n}, k = {k})")]
    TooFewVariables { m: usize, n: usize, k: usize },
    #[error("{0} variables exceed the supported maximum of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("{axis} partition has {actual} blocks, expected k = {expected}")]
    BlockCount {
        axis: Axis,
        expected: usize,
        actual: usize,
    },
    #[error("{axis} partition block {block} is empty")]
    EmptyBlock { axis: Axis, block: usize },
    #[error("{axis} index {index} is outside 1..={bound}")]
    IndexOutOfRange {
        axis: Axis,
        index: usize,
        bound: usize,
    },
    #[error("{axis} index {index} appears in more than one place")]
    DuplicateIndex { axis: Axis, index: usize },
    #[error("{axis} index {index} is not covered by the partition")]
    MissingIndex { axis: Axis, index: usize },
    #[error("{axis} bijection {block} is not an ordering of partition block {block}")]
    NotABijection { axis: Axis, block: usize },
    #[error("coefficient vector {name} has {actual} entries, expected {expected}")]
    CoefficientCount {
        name: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("coefficient {name}[{index}] = {value} is outside Z_q")]
    CoefficientRange {
        name: &'static str,
        index: usize,
        value: u32,
    },
    #[error("set index {p} is outside 0..{count}")]
    SetIndex { p: usize, count: usize },
}

/// Serialized form of a construction spec, before validation.
///
/// Partitions list the 1-based indices of each block. Bijections give the
/// visiting order of each block; when absent, the partition's listed order is
/// used. Coefficient vectors default to all zeros. `k` may be omitted and is
/// then the number of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub x_partition: Vec<Vec<usize>>,
    pub y_partition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_bijections: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_bijections: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<u32>,
}

/// A validated parameterization of the construction.
///
/// `x_bijections[α][l-1]` is `π_{α+1}(l)` and `y_bijections[α][l-1]` is
/// `σ_{α+1}(l)`. All indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionSpec {
    q: u32,
    m: usize,
    n: usize,
    x_partition: Vec<Vec<usize>>,
    y_partition: Vec<Vec<usize>>,
    x_bijections: Vec<Vec<usize>>,
    y_bijections: Vec<Vec<usize>>,
    d: Vec<u32>,
    w: Vec<u32>,
    w0: u32,
}

impl TryFrom<SpecDocument> for ConstructionSpec {
    type Error = SpecError;

    fn try_from(doc: SpecDocument) -> Result<Self, SpecError> {
        let x_bijections = doc.x_bijections.unwrap_or_else(|| doc.x_partition.clone());
        let y_bijections = doc.y_bijections.unwrap_or_else(|| doc.y_partition.clone());
        let spec = Self {
            q: doc.q,
            m: doc.m,
            n: doc.n,
            d: doc.d.unwrap_or_else(|| vec![0; doc.m]),
            w: doc.w.unwrap_or_else(|| vec![0; doc.n]),
            w0: doc.w0.unwrap_or(0),
            x_partition: doc.x_partition,
            y_partition: doc.y_partition,
            x_bijections,
            y_bijections,
        };
        let k = doc.k.unwrap_or(spec.x_partition.len());
        spec.validate(k)?;
        Ok(spec)
    }
}

impl ConstructionSpec {
    /// Builds a spec where each block is given directly in visiting order,
    /// so the partition and the bijections coincide.
    pub fn from_orders(
        q: u32,
        x_orders: Vec<Vec<usize>>,
        y_orders: Vec<Vec<usize>>,
    ) -> Result<Self, SpecError> {
        let m = x_orders.iter().map(Vec::len).sum();
        let n = y_orders.iter().map(Vec::len).sum();
        Self::try_from(SpecDocument {
            q,
            m,
            n,
            k: None,
            x_partition: x_orders,
            y_partition: y_orders,
            x_bijections: None,
            y_bijections: None,
            d: None,
            w: None,
            w0: None,
        })
    }

    /// Replaces the linear coefficients `d_1..d_m`, `w_1..w_n` and `w_0`.
    pub fn with_coefficients(
        mut self,
        d: Vec<u32>,
        w: Vec<u32>,
        w0: u32,
    ) -> Result<Self, SpecError> {
        self.d = d;
        self.w = w;
        self.w0 = w0;
        self.validate(self.k())?;
        Ok(self)
    }

    fn validate(&self, k: usize) -> Result<(), SpecError> {
        if self.q < 2 || !self.q.is_multiple_of(2) {
            return Err(SpecError::InvalidModulus(self.q));
        }
        if k == 0 {
            return Err(SpecError::ZeroK);
        }
        if self.m < k || self.n < k {
            return Err(SpecError::TooFewVariables {
                m: self.m,
                n: self.n,
                k,
            });
        }
        for count in [self.m, self.n] {
            if count > MAX_VARIABLES {
                return Err(SpecError::TooManyVariables(count));
            }
        }
        check_partition(Axis::X, &self.x_partition, &self.x_bijections, self.m, k)?;
        check_partition(Axis::Y, &self.y_partition, &self.y_bijections, self.n, k)?;
        check_coefficients("d", &self.d, self.m, self.q)?;
        check_coefficients("w", &self.w, self.n, self.q)?;
        if self.w0 >= self.q {
            return Err(SpecError::CoefficientRange {
                name: "w0",
                index: 0,
                value: self.w0,
            });
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.x_partition.len()
    }

    pub fn x_partition(&self) -> &[Vec<usize>] {
        &self.x_partition
    }

    pub fn y_partition(&self) -> &[Vec<usize>] {
        &self.y_partition
    }

    pub fn x_bijections(&self) -> &[Vec<usize>] {
        &self.x_bijections
    }

    pub fn y_bijections(&self) -> &[Vec<usize>] {
        &self.y_bijections
    }

    /// Number of sets (and of arrays per set): `2^k`.
    pub fn set_count(&self) -> usize {
        1 << self.k()
    }

    /// Array shape `(2^n, 2^m)`.
    pub fn array_shape(&self) -> (usize, usize) {
        (1 << self.n, 1 << self.m)
    }

    /// The document form with every optional field filled in.
    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            q: self.q,
            m: self.m,
            n: self.n,
            k: Some(self.k()),
            x_partition: self.x_partition.clone(),
            y_partition: self.y_partition.clone(),
            x_bijections: Some(self.x_bijections.clone()),
            y_bijections: Some(self.y_bijections.clone()),
            d: Some(self.d.clone()),
            w: Some(self.w.clone()),
            w0: Some(self.w0),
        }
    }

    /// The base function `f`.
    pub fn build_base_function(&self) -> GbfPolynomial {
        let half = i64::from(self.q / 2);
        let mut f = GbfPolynomial::zero(self.q, self.n, self.m).expect("validated spec");
        let mut add = |c: i64, vars: &[Var]| f.add_term(c, vars).expect("validated spec");

        for (xs, ys) in self.x_bijections.iter().zip(&self.y_bijections) {
            for pair in xs.windows(2) {
                add(half, &[Var::X(pair[0]), Var::X(pair[1])]);
            }
            for pair in ys.windows(2) {
                add(half, &[Var::Y(pair[0]), Var::Y(pair[1])]);
            }
            add(half, &[Var::X(xs[xs.len() - 1]), Var::Y(ys[0])]);
        }
        for (l, &c) in self.d.iter().enumerate() {
            add(i64::from(c), &[Var::X(l + 1)]);
        }
        for (l, &c) in self.w.iter().enumerate() {
            add(i64::from(c), &[Var::Y(l + 1)]);
        }
        add(i64::from(self.w0), &[]);
        f
    }

    /// The function of array `t` in set `p`.
    pub fn array_function(&self, p: usize, t: usize) -> Result<GbfPolynomial, SpecError> {
        let count = self.set_count();
        for idx in [p, t] {
            if idx >= count {
                return Err(SpecError::SetIndex { p: idx, count });
            }
        }
        Ok(self.offset_function(&self.build_base_function(), p, t))
    }

    fn offset_function(&self, base: &GbfPolynomial, p: usize, t: usize) -> GbfPolynomial {
        let half = self.q / 2;
        let mut f = base.clone();
        for (alpha, (xs, ys)) in self.x_bijections.iter().zip(&self.y_bijections).enumerate() {
            if t >> alpha & 1 == 1 {
                f = f
                    .add_indicator_term(half, Var::X(xs[0]))
                    .expect("validated spec");
            }
            if p >> alpha & 1 == 1 {
                f = f
                    .add_indicator_term(half, Var::Y(ys[ys.len() - 1]))
                    .expect("validated spec");
            }
        }
        f
    }

    /// Set `G^p`: its `2^k` arrays ordered by `t`.
    pub fn build_set(&self, p: usize) -> Result<Vec<ZqArray>, SpecError> {
        let count = self.set_count();
        if p >= count {
            return Err(SpecError::SetIndex { p, count });
        }
        let base = self.build_base_function();
        Ok((0..count)
            .map(|t| self.offset_function(&base, p, t).to_array())
            .collect())
    }

    /// All `2^k` sets.
    pub fn build_ccc(&self) -> CccFamily {
        let sets = (0..self.set_count())
            .into_par_iter()
            .map(|p| self.build_set(p).expect("p in range"))
            .collect();
        CccFamily::new(sets).expect("construction yields uniform shapes")
    }

    /// Draws a spec uniformly over ordered partitions, block orders and
    /// coefficient vectors. Deterministic per `seed`.
    pub fn sample_random(
        q: u32,
        m: usize,
        n: usize,
        k: usize,
        seed: u64,
    ) -> Result<Self, SpecError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample_with(q, m, n, k, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(
        q: u32,
        m: usize,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<Self, SpecError> {
        if q < 2 || !q.is_multiple_of(2) {
            return Err(SpecError::InvalidModulus(q));
        }
        if k == 0 {
            return Err(SpecError::ZeroK);
        }
        if m < k || n < k {
            return Err(SpecError::TooFewVariables { m, n, k });
        }
        if m.max(n) > MAX_VARIABLES {
            return Err(SpecError::TooManyVariables(m.max(n)));
        }
        let x = random_ordered_blocks(m, k, rng);
        let y = random_ordered_blocks(n, k, rng);
        let d = (0..m).map(|_| rng.random_range(0..q)).collect();
        let w = (0..n).map(|_| rng.random_range(0..q)).collect();
        let w0 = rng.random_range(0..q);
        Self::from_orders(q, x, y)?.with_coefficients(d, w, w0)
    }
}

/// Random permutation of `1..=len` cut into `k` nonempty runs.
///
/// Each (permutation, composition) pair maps to a distinct ordered partition
/// with ordered blocks, so the result is uniform over those.
fn random_ordered_blocks<R: Rng + ?Sized>(len: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (1..=len).collect();
    perm.shuffle(rng);
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, len - 1, k - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(len)) {
        blocks.push(perm[start..end].to_vec());
        start = end;
    }
    blocks
}

fn check_partition(
    axis: Axis,
    partition: &[Vec<usize>],
    bijections: &[Vec<usize>],
    bound: usize,
    k: usize,
) -> Result<(), SpecError> {
    for blocks in [partition, bijections] {
        if blocks.len() != k {
            return Err(SpecError::BlockCount {
                axis,
                expected: k,
                actual: blocks.len(),
            });
        }
    }
    let mut seen = vec![false; bound + 1];
    for (alpha, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(SpecError::EmptyBlock {
                axis,
                block: alpha + 1,
            });
        }
        for &index in block {
            if index == 0 || index > bound {
                return Err(SpecError::IndexOutOfRange { axis, index, bound });
            }
            if std::mem::replace(&mut seen[index], true) {
                return Err(SpecError::DuplicateIndex { axis, index });
            }
        }
    }
    if let Some(index) = (1..=bound).find(|&i| !seen[i]) {
        return Err(SpecError::MissingIndex { axis, index });
    }
    for (alpha, (block, order)) in partition.iter().zip(bijections).enumerate() {
        let mut a = block.clone();
        let mut b = order.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(SpecError::NotABijection {
                axis,
                block: alpha + 1,
            });
        }
    }
    Ok(())
}

fn check_coefficients(
    name: &'static str,
    coeffs: &[u32],
    len: usize,
    q: u32,
) -> Result<(), SpecError> {
    if coeffs.len() != len {
        return Err(SpecError::CoefficientCount {
            name,
            expected: len,
            actual: coeffs.len(),
        });
    }
    if let Some((i, &value)) = coeffs.iter().enumerate().find(|(_, &c)| c >= q) {
        return Err(SpecError::CoefficientRange {
            name,
            index: i + 1,
            value,
        });
    }
    Ok(())
}

/// The worked example with `q = 2, m = 4, n = 3, k = 2`: x-blocks `(1, 3)`,
/// `(2, 4)`; y-blocks `(1, 2)`, `(3)`; zero linear terms. Yields a
/// `(4, 4, 8, 16)` code.
pub fn example_spec() -> ConstructionSpec {
    ConstructionSpec::from_orders(2, vec![vec![1, 3], vec![2, 4]], vec![vec![1, 2], vec![3]])
        .expect("example spec is valid")
}
