//! Omnidirectional precoding over a uniform rectangular array (URA).
//!
//! A base station with an `L1 × L2` URA sends a 4×4 real orthogonal
//! space-time block code. Code row `n` is beamformed by precoder `W_n`, and a
//! single-antenna user at direction `(φ, θ)` over a line-of-sight channel
//! receives, in time slot `t`,
//!
//! ```text
//! y(t) = Σ_n h_n s_n(t) + w(t),     h_n = Σ_{g,i} A(φ,θ)_{g,i} (W_n)_{g,i}
//! ```
//!
//! with complex AWGN `w(t)`. When the precoders form a Golay complementary
//! array set, `Σ_n |h_n|²` does not depend on the direction.
//!
//! # Power and SNR conventions
//!
//! [`PrecoderSet::normalized`] divides every `W_n` by `√(L1·L2·N)`, so unimodular
//! precoders radiate unit total energy per time slot. The simulator reads the
//! SNR as `Eb/N0` with `Eb` the transmitted energy per bit: one BPSK bit per
//! slot, hence `Eb = Σ_n ‖W_n‖²_F` and `N0 = E|w|² = Eb / 10^{SNR/10}`. With
//! `h = (1, 0, 0, 0)` and unit energy this reproduces the textbook BPSK curve
//! `Q(√(2 Eb/N0))`.

use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::array::ZqArray;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MimoError {
    #[error("array dimensions must be positive (got {0}x{1})")]
    EmptyArray(usize, usize),
    #[error("wavelength and element spacings must be positive and finite")]
    InvalidGeometry,
    #[error("elevation φ = {0} is outside [0, π/2]")]
    ElevationOutOfRange(f64),
    #[error("azimuth θ = {0} is outside [0, 2π]")]
    AzimuthOutOfRange(f64),
    #[error("matrix shape {actual:?} does not match {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("precoder set is empty")]
    NoPrecoders,
    #[error("expected {expected} symbols, got {actual}")]
    SymbolCount { expected: usize, actual: usize },
    #[error("Zadoff-Chu root {root} must be in 1..{len} and coprime to {len}")]
    InvalidRoot { root: usize, len: usize },
    #[error("Zadoff-Chu length must be at least 2 (got {0})")]
    ShortSequence(usize),
    #[error("simulation needs {expected} precoders, got {actual}")]
    PrecoderCount { expected: usize, actual: usize },
    #[error("bit budget must be positive")]
    EmptyBudget,
    #[error("angle grid is empty")]
    EmptyGrid,
}

/// URA geometry. Lengths share one arbitrary unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringConfig {
    pub rows: usize,
    pub cols: usize,
    pub wavelength: f64,
    /// Spacing between columns (paired with the column index `i`).
    pub dx: f64,
    /// Spacing between rows (paired with the row index `g`).
    pub dy: f64,
}

impl SteeringConfig {
    /// Half-wavelength spacing on both axes.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            wavelength: 1.0,
            dx: 0.5,
            dy: 0.5,
        }
    }

    pub fn validate(&self) -> Result<(), MimoError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(MimoError::EmptyArray(self.rows, self.cols));
        }
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.wavelength) && ok(self.dx) && ok(self.dy)) {
            return Err(MimoError::InvalidGeometry);
        }
        Ok(())
    }

    /// Row and column phase progressions; `A[g][i] = row[g] · col[i]`.
    pub fn steering_factors(&self, phi: f64, theta: f64) -> Result<SteeringFactors, MimoError> {
        self.validate()?;
        check_angles(phi, theta)?;
        Ok(self.factors_unchecked(phi, theta))
    }

    fn factors_unchecked(&self, phi: f64, theta: f64) -> SteeringFactors {
        let k = 2.0 * PI / self.wavelength;
        let (sp, (st, ct)) = (phi.sin(), theta.sin_cos());
        let row_step = -k * self.dy * sp * st;
        let col_step = -k * self.dx * sp * ct;
        SteeringFactors {
            row: (0..self.rows)
                .map(|g| Complex64::from_polar(1.0, row_step * g as f64))
                .collect(),
            col: (0..self.cols)
                .map(|i| Complex64::from_polar(1.0, col_step * i as f64))
                .collect(),
        }
    }
}

fn check_angles(phi: f64, theta: f64) -> Result<(), MimoError> {
    if !(0.0..=PI / 2.0).contains(&phi) {
        return Err(MimoError::ElevationOutOfRange(phi));
    }
    if !(0.0..=2.0 * PI).contains(&theta) {
        return Err(MimoError::AzimuthOutOfRange(theta));
    }
    Ok(())
}

/// Separable form of a steering matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringFactors {
    pub row: Vec<Complex64>,
    pub col: Vec<Complex64>,
}

impl SteeringFactors {
    pub fn to_matrix(&self) -> Array2<Complex64> {
        Array2::from_shape_fn((self.row.len(), self.col.len()), |(g, i)| {
            self.row[g] * self.col[i]
        })
    }

    /// `Σ_{g,i} A[g][i] W[g][i]` without forming `A`.
    fn gain(&self, w: &Array2<Complex64>) -> Complex64 {
        w.outer_iter()
            .zip(&self.row)
            .map(|(wrow, a)| {
                a * wrow
                    .iter()
                    .zip(&self.col)
                    .map(|(x, b)| x * b)
                    .sum::<Complex64>()
            })
            .sum()
    }
}

/// Steering matrix `A(φ, θ)` with
/// `A[g][i] = exp(-j 2π/λ (g·dy·sinφ·sinθ + i·dx·sinφ·cosθ))`,
/// for `φ ∈ [0, π/2]` and `θ ∈ [0, 2π]`.
pub fn steering_matrix(
    cfg: &SteeringConfig,
    phi: f64,
    theta: f64,
) -> Result<Array2<Complex64>, MimoError> {
    Ok(cfg.steering_factors(phi, theta)?.to_matrix())
}

/// `N` precoding matrices of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    matrices: Vec<Array2<Complex64>>,
    /// Factor already applied to the matrices (1 when unnormalized).
    scale: f64,
    label: String,
}

impl PrecoderSet {
    pub fn new(
        matrices: Vec<Array2<Complex64>>,
        label: impl Into<String>,
    ) -> Result<Self, MimoError> {
        let first = matrices.first().ok_or(MimoError::NoPrecoders)?;
        let shape = first.dim();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(MimoError::EmptyArray(shape.0, shape.1));
        }
        if let Some(bad) = matrices.iter().find(|w| w.dim() != shape) {
            return Err(MimoError::ShapeMismatch {
                expected: shape,
                actual: bad.dim(),
            });
        }
        Ok(Self {
            matrices,
            scale: 1.0,
            label: label.into(),
        })
    }

    /// Unimodular precoders `W_n[g][i] = ξ^{C_n[g][i]}` from a q-ary array set.
    pub fn from_arrays(arrays: &[ZqArray], label: impl Into<String>) -> Result<Self, MimoError> {
        let matrices = arrays
            .iter()
            .map(|a| Array2::from_shape_fn(a.shape(), |(g, i)| a.phase(g, i)))
            .collect();
        Self::new(matrices, label)
    }

    /// Divides every matrix by `√(L1·L2·N)`.
    pub fn normalized(mut self) -> Self {
        let (l1, l2) = self.shape();
        let factor = 1.0 / ((l1 * l2 * self.len()) as f64).sqrt();
        for w in &mut self.matrices {
            w.mapv_inplace(|z| z * factor);
        }
        self.scale *= factor;
        self
    }

    pub fn matrices(&self) -> &[Array2<Complex64>] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrices[0].dim()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Σ_n ‖W_n‖²_F`: transmitted energy per time slot for unit-power symbols.
    pub fn transmit_energy(&self) -> f64 {
        self.matrices
            .iter()
            .flat_map(|w| w.iter())
            .map(Complex64::norm_sqr)
            .sum()
    }
}

/// `h_n = vec(A)ᵀ vec(W_n)` for each precoder.
pub fn effective_gain(w: &PrecoderSet, a: &Array2<Complex64>) -> Result<Vec<Complex64>, MimoError> {
    if a.dim() != w.shape() {
        return Err(MimoError::ShapeMismatch {
            expected: w.shape(),
            actual: a.dim(),
        });
    }
    Ok(w.matrices
        .iter()
        .map(|wn| wn.iter().zip(a.iter()).map(|(x, y)| x * y).sum())
        .collect())
}

/// Received power `Σ_n |h_n|²` at one direction.
pub fn received_power(
    w: &PrecoderSet,
    cfg: &SteeringConfig,
    phi: f64,
    theta: f64,
) -> Result<f64, MimoError> {
    if (cfg.rows, cfg.cols) != w.shape() {
        return Err(MimoError::ShapeMismatch {
            expected: w.shape(),
            actual: (cfg.rows, cfg.cols),
        });
    }
    let f = cfg.steering_factors(phi, theta)?;
    Ok(w.matrices.iter().map(|wn| f.gain(wn).norm_sqr()).sum())
}

/// Received power over a `φ × θ` grid (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPattern {
    pub phis: Vec<f64>,
    pub thetas: Vec<f64>,
    /// `power[[a, b]]` is the power at `(phis[a], thetas[b])`.
    pub power: Array2<f64>,
}

impl PowerPattern {
    pub fn min(&self) -> f64 {
        self.power.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.power.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.power.mean().unwrap_or(0.0)
    }

    /// `(max - min) / mean`.
    pub fn relative_spread(&self) -> f64 {
        (self.max() - self.min()) / self.mean()
    }

    /// Rows of `(φ, θ, power)` in radians.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.phis.iter().enumerate().flat_map(move |(a, &phi)| {
            self.thetas
                .iter()
                .enumerate()
                .map(move |(b, &theta)| (phi, theta, self.power[[a, b]]))
        })
    }
}

pub fn power_pattern(
    w: &PrecoderSet,
    cfg: &SteeringConfig,
    phis: &[f64],
    thetas: &[f64],
) -> Result<PowerPattern, MimoError> {
    if phis.is_empty() || thetas.is_empty() {
        return Err(MimoError::EmptyGrid);
    }
    for &phi in phis {
        check_angles(phi, 0.0)?;
    }
    for &theta in thetas {
        check_angles(0.0, theta)?;
    }
    let values: Vec<f64> = phis
        .par_iter()
        .flat_map_iter(|&phi| thetas.iter().map(move |&theta| (phi, theta)))
        .map(|(phi, theta)| received_power(w, cfg, phi, theta))
        .collect::<Result<_, _>>()?;
    Ok(PowerPattern {
        phis: phis.to_vec(),
        thetas: thetas.to_vec(),
        power: Array2::from_shape_vec((phis.len(), thetas.len()), values).expect("grid size"),
    })
}

/// `count` evenly spaced elevations covering `[0, π/2]` inclusive.
pub fn elevation_grid(count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..count)
            .map(|a| PI / 2.0 * a as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// `count` evenly spaced azimuths covering `[0, 2π)`.
pub fn azimuth_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|b| 2.0 * PI * b as f64 / count as f64)
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Zadoff-Chu sequence of length `len` and root `root`:
/// `exp(-jπ r i²/L)` for even `L`, `exp(-jπ r i(i+1)/L)` for odd `L`.
pub fn zc_sequence(len: usize, root: usize) -> Result<Vec<Complex64>, MimoError> {
    if len < 2 {
        return Err(MimoError::ShortSequence(len));
    }
    if root == 0 || root >= len || gcd(root, len) != 1 {
        return Err(MimoError::InvalidRoot { root, len });
    }
    let l = len as u64;
    let r = root as u64;
    Ok((0..l)
        .map(|i| {
            // Phase index mod 2L keeps the argument small and exact.
            let k = if len.is_multiple_of(2) {
                r * i * i
            } else {
                r * i * (i + 1)
            } % (2 * l);
            Complex64::from_polar(1.0, -PI * k as f64 / l as f64)
        })
        .collect())
}

/// Zadoff-Chu baseline precoders (a surrogate construction).
///
/// `W_n[g][i] = a[(g + n·⌊L1/N⌋) mod L1] · b[(i + n·⌊L2/N⌋) mod L2]`, where `a`
/// and `b` are ZC sequences of lengths `L1` and `L2` with the given roots.
/// Each precoder is the outer product of cyclic shifts of the two sequences.
pub fn zc_precoders(
    rows: usize,
    cols: usize,
    count: usize,
    roots: (usize, usize),
) -> Result<PrecoderSet, MimoError> {
    if count == 0 {
        return Err(MimoError::NoPrecoders);
    }
    let a = zc_sequence(rows, roots.0)?;
    let b = zc_sequence(cols, roots.1)?;
    let (sa, sb) = (rows / count, cols / count);
    let matrices = (0..count)
        .map(|n| {
            Array2::from_shape_fn((rows, cols), |(g, i)| {
                a[(g + n * sa) % rows] * b[(i + n * sb) % cols]
            })
        })
        .collect();
    PrecoderSet::new(matrices, "zc-surrogate")
}

/// `count` matrices with entries drawn uniformly from `{+1, -1}`.
pub fn random_precoders(
    rows: usize,
    cols: usize,
    count: usize,
    seed: u64,
) -> Result<PrecoderSet, MimoError> {
    if count == 0 {
        return Err(MimoError::NoPrecoders);
    }
    if rows == 0 || cols == 0 {
        return Err(MimoError::EmptyArray(rows, cols));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices = (0..count)
        .map(|_| {
            Array2::from_shape_simple_fn((rows, cols), || {
                Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
            })
        })
        .collect();
    PrecoderSet::new(matrices, "random")
}

/// The 4×4 real orthogonal design
///
/// ```text
/// s0 -s1 -s2 -s3
/// s1  s0  s3 -s2
/// s2 -s3  s0  s1
/// s3  s2 -s1  s0
/// ```
///
/// Row `n` is the code index, column `t` the time slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StbcCodebook;

impl StbcCodebook {
    pub const SIZE: usize = 4;

    /// `LAYOUT[n][t] = (symbol index, sign)`.
    pub const LAYOUT: [[(usize, i8); 4]; 4] = [
        [(0, 1), (1, -1), (2, -1), (3, -1)],
        [(1, 1), (0, 1), (3, 1), (2, -1)],
        [(2, 1), (3, -1), (0, 1), (1, 1)],
        [(3, 1), (2, 1), (1, -1), (0, 1)],
    ];

    /// Code matrix `S` for four symbols.
    pub fn encode<T>(symbols: &[T]) -> Result<[[T; 4]; 4], MimoError>
    where
        T: Copy + std::ops::Neg<Output = T>,
    {
        if symbols.len() != Self::SIZE {
            return Err(MimoError::SymbolCount {
                expected: Self::SIZE,
                actual: symbols.len(),
            });
        }
        Ok(Self::LAYOUT
            .map(|row| row.map(|(k, sign)| if sign > 0 { symbols[k] } else { -symbols[k] })))
    }

    /// `v_k[t]`: received contribution of symbol `k` in slot `t`, so that
    /// `y = Σ_k s_k v_k + w`.
    pub fn symbol_signatures(gains: &[Complex64; 4]) -> [[Complex64; 4]; 4] {
        let mut v = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (n, row) in Self::LAYOUT.iter().enumerate() {
            for (t, &(k, sign)) in row.iter().enumerate() {
                v[k][t] += gains[n] * f64::from(sign);
            }
        }
        v
    }

    /// Matched-filter statistics `z_k = Re(v_kᴴ y)`.
    ///
    /// For a real orthogonal design the `v_k` are orthogonal in the real inner
    /// product, so `sign(z_k)` is the ML decision for BPSK.
    pub fn combine(signatures: &[[Complex64; 4]; 4], received: &[Complex64; 4]) -> [f64; 4] {
        signatures.map(|v| v.iter().zip(received).map(|(a, y)| (a.conj() * y).re).sum())
    }

    /// Hard BPSK decisions for one received block.
    pub fn decode(gains: &[Complex64; 4], received: &[Complex64; 4]) -> [f64; 4] {
        Self::combine(&Self::symbol_signatures(gains), received).map(|z| {
            if z >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
    }
}

/// How the user direction is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DirectionPolicy {
    /// One direction for every frame (radians).
    Fixed { phi: f64, theta: f64 },
    /// Fresh `φ ~ U[0, π/2]`, `θ ~ U[0, 2π)` per frame.
    UniformPerFrame,
}

/// Which precoder family a simulation run uses. Recorded in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Ccc,
    Zc,
    Random,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Ccc => "ccc",
            Scheme::Zc => "zc",
            Scheme::Random => "random",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Eb/N0 points in dB; `f64::INFINITY` gives a noiseless channel.
    pub snr_db: Vec<f64>,
    /// Bits per SNR point (rounded up to whole 4-bit frames).
    pub bits_per_point: u64,
    pub seed: u64,
    pub direction: DirectionPolicy,
    pub scheme: Scheme,
}

/// Frames per independently seeded RNG stream.
pub const CHUNK_FRAMES: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bit_errors: u64,
    pub bits: u64,
    pub frames: u64,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub scheme: Scheme,
    pub label: String,
    pub seed: u64,
    pub workers: usize,
    pub points: Vec<BerPoint>,
}

enum GainSource<'a> {
    Fixed(Box<[[Complex64; 4]; 4]>),
    PerFrame(&'a PrecoderSet, &'a SteeringConfig),
}

fn gains_array(h: &[Complex64]) -> [Complex64; 4] {
    [h[0], h[1], h[2], h[3]]
}

fn run_point(source: &GainSource<'_>, noise_var: f64, frames: u64, seed: u64, point: usize) -> u64 {
    let chunks = frames.div_ceil(CHUNK_FRAMES);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((point as u64) << 40) | chunk);
            let todo = CHUNK_FRAMES.min(frames - chunk * CHUNK_FRAMES);
            let sigma = (noise_var / 2.0).sqrt();
            let mut errors = 0u64;
            for _ in 0..todo {
                let sig = match source {
                    GainSource::Fixed(sig) => **sig,
                    GainSource::PerFrame(w, cfg) => {
                        let phi = rng.random_range(0.0..=PI / 2.0);
                        let theta = rng.random_range(0.0..2.0 * PI);
                        let f = cfg.factors_unchecked(phi, theta);
                        let h: Vec<Complex64> = w.matrices.iter().map(|wn| f.gain(wn)).collect();
                        StbcCodebook::symbol_signatures(&gains_array(&h))
                    }
                };
                let bits: [bool; 4] = rng.random();
                let s = bits.map(|b| if b { -1.0 } else { 1.0 });
                let mut y = [Complex64::new(0.0, 0.0); 4];
                for (k, vk) in sig.iter().enumerate() {
                    for (yt, v) in y.iter_mut().zip(vk) {
                        *yt += v * s[k];
                    }
                }
                if sigma > 0.0 {
                    for yt in &mut y {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        *yt += Complex64::new(re, im) * sigma;
                    }
                }
                let z = StbcCodebook::combine(&sig, &y);
                errors += z
                    .iter()
                    .zip(&bits)
                    .filter(|(zk, &b)| (**zk < 0.0) != b)
                    .count() as u64;
            }
            errors
        })
        .sum()
}

fn noise_variance(energy_per_bit: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        energy_per_bit / 10f64.powf(snr_db / 10.0)
    }
}

fn simulate(
    sim: &SimConfig,
    source: GainSource<'_>,
    energy_per_bit: f64,
    label: String,
) -> Result<BerReport, MimoError> {
    if sim.bits_per_point == 0 {
        return Err(MimoError::EmptyBudget);
    }
    let frames = sim.bits_per_point.div_ceil(4);
    let points = sim
        .snr_db
        .iter()
        .enumerate()
        .map(|(idx, &snr_db)| BerPoint {
            snr_db,
            bit_errors: run_point(
                &source,
                noise_variance(energy_per_bit, snr_db),
                frames,
                sim.seed,
                idx,
            ),
            bits: frames * 4,
            frames,
        })
        .collect();
    Ok(BerReport {
        scheme: sim.scheme,
        label,
        seed: sim.seed,
        workers: rayon::current_num_threads(),
        points,
    })
}

/// Monte-Carlo BER of the precoded STBC link.
///
/// Every frame carries four BPSK bits over four slots. Frames are split into
/// chunks of [`CHUNK_FRAMES`], each with its own ChaCha stream derived from
/// `(seed, SNR index, chunk index)`, so results do not depend on the number
/// of worker threads.
pub fn ber_simulation(
    sim: &SimConfig,
    cfg: &SteeringConfig,
    w: &PrecoderSet,
) -> Result<BerReport, MimoError> {
    cfg.validate()?;
    if w.len() != StbcCodebook::SIZE {
        return Err(MimoError::PrecoderCount {
            expected: StbcCodebook::SIZE,
            actual: w.len(),
        });
    }
    if (cfg.rows, cfg.cols) != w.shape() {
        return Err(MimoError::ShapeMismatch {
            expected: w.shape(),
            actual: (cfg.rows, cfg.cols),
        });
    }
    let source = match sim.direction {
        DirectionPolicy::Fixed { phi, theta } => {
            let a = steering_matrix(cfg, phi, theta)?;
            GainSource::Fixed(Box::new(StbcCodebook::symbol_signatures(&gains_array(
                &effective_gain(w, &a)?,
            ))))
        }
        DirectionPolicy::UniformPerFrame => GainSource::PerFrame(w, cfg),
    };
    simulate(sim, source, w.transmit_energy(), w.label().to_string())
}

/// Same link with a fixed effective gain vector and unit energy per bit.
pub fn ber_with_gains(sim: &SimConfig, gains: [Complex64; 4]) -> Result<BerReport, MimoError> {
    let source = GainSource::Fixed(Box::new(StbcCodebook::symbol_signatures(&gains)));
    simulate(sim, source, 1.0, "fixed-gain".to_string())
}
