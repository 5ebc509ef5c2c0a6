//! 2D aperiodic correlation of q-ary arrays and exhaustive complementarity checks.
//!
//! Correlations are accumulated exactly as integer combinations of powers of
//! `ξ = exp(2πj/q)`. Since `ξ^{q/2} = -1`, every sum folds onto the
//! coefficients of `1, ξ, …, ξ^{q/2-1}`. When `q` is a power of two those
//! powers are linearly independent over the rationals, so "the correlation is
//! zero" is decided exactly: integers for `q = 2`, Gaussian integers for
//! `q = 4`, and so on. Other even `q` fall back to double precision.
//!
//! Shift conventions: `u1` shifts along rows (`-L1 < u1 < L1`), `u2` along
//! columns (`-L2 < u2 < L2`), and
//! `ρ(C, D; u1, u2) = Σ ξ^{D[g+u1][i+u2] - C[g][i]}` over all index pairs
//! where both entries exist.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::array::{root_of_unity, ZqArray};
use crate::family::CccFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrelationError {
    #[error("shift ({u1}, {u2}) is outside the {rows}x{cols} correlation domain")]
    ShiftOutOfRange {
        u1: isize,
        u2: isize,
        rows: usize,
        cols: usize,
    },
    #[error("arrays differ in q or shape")]
    ShapeMismatch,
    #[error("sets have different sizes ({0} vs {1})")]
    SetSizeMismatch(usize, usize),
    #[error("empty array set")]
    EmptySet,
    #[error("1D view needs single-row arrays, found {0} rows")]
    NotOneDimensional(usize),
}

/// An element of `Z[ξ]` stored as coefficients of `ξ^0..ξ^{q/2-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseSum {
    q: u32,
    coeffs: Vec<i64>,
}

impl PhaseSum {
    pub fn zero(q: u32) -> Self {
        Self {
            q,
            coeffs: vec![0; (q / 2) as usize],
        }
    }

    /// `Σ_r counts[r] ξ^r` for a histogram over `Z_q`.
    pub fn from_histogram(q: u32, counts: &[i64]) -> Self {
        let half = (q / 2) as usize;
        let coeffs = (0..half).map(|r| counts[r] - counts[r + half]).collect();
        Self { q, coeffs }
    }

    /// The integer `k` as an element of `Z[ξ]`.
    pub fn integer(q: u32, k: i64) -> Self {
        let mut s = Self::zero(q);
        s.coeffs[0] = k;
        s
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// True when the zero test is exact (q a power of two).
    pub fn is_exact(&self) -> bool {
        self.q.is_power_of_two()
    }

    pub fn add_assign(&mut self, other: &PhaseSum) {
        debug_assert_eq!(self.q, other.q);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &PhaseSum) -> PhaseSum {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self { q: self.q, coeffs }
    }

    /// Complex conjugate: `ξ^r → ξ^{-r} = -ξ^{q/2-r}` for `0 < r < q/2`.
    pub fn conj(&self) -> PhaseSum {
        let half = self.coeffs.len();
        let mut coeffs = vec![0; half];
        coeffs[0] = self.coeffs[0];
        for r in 1..half {
            coeffs[half - r] = -self.coeffs[r];
        }
        Self { q: self.q, coeffs }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(r, &c)| root_of_unity(self.q, r as u32) * c as f64)
            .sum()
    }

    /// Coefficient-level zero test. Exact only when [`is_exact`](Self::is_exact).
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `|value|`; exactly `0.0` for the zero element.
    pub fn magnitude(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        match self.coeffs.as_slice() {
            [a] => (*a as f64).abs(),
            [a, b] => ((a * a + b * b) as f64).sqrt(),
            _ => self.to_complex().norm(),
        }
    }
}

impl fmt::Display for PhaseSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        write!(f, "{}{:+}j", z.re, z.im)
    }
}

/// A correlation value at shift `(u1, u2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationValue {
    pub u1: isize,
    pub u2: isize,
    pub value: PhaseSum,
}

impl CorrelationValue {
    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex()
    }
}

fn check_pair(c: &ZqArray, d: &ZqArray) -> Result<(), CorrelationError> {
    if c.q() != d.q() || c.shape() != d.shape() {
        return Err(CorrelationError::ShapeMismatch);
    }
    Ok(())
}

fn check_shift(rows: usize, cols: usize, u1: isize, u2: isize) -> Result<(), CorrelationError> {
    if u1.unsigned_abs() >= rows || u2.unsigned_abs() >= cols {
        return Err(CorrelationError::ShiftOutOfRange { u1, u2, rows, cols });
    }
    Ok(())
}

/// Histogram of `D[g+dr][i+dc] - C[g+cr][i+cc]` over an `h × w` window.
#[allow(clippy::too_many_arguments)]
fn accumulate_window(
    c: &ZqArray,
    d: &ZqArray,
    (cr, cc): (usize, usize),
    (dr, dc): (usize, usize),
    h: usize,
    w: usize,
    counts: &mut [i64],
) {
    let q = c.q();
    for g in 0..h {
        let crow = &c.row(cr + g)[cc..cc + w];
        let drow = &d.row(dr + g)[dc..dc + w];
        for (a, b) in crow.iter().zip(drow) {
            counts[((b + q - a) % q) as usize] += 1;
        }
    }
}

fn cross_unchecked(c: &ZqArray, d: &ZqArray, u1: isize, u2: isize, counts: &mut [i64]) {
    let (l1, l2) = c.shape();
    let (a1, a2) = (u1.unsigned_abs(), u2.unsigned_abs());
    let (h, w) = (l1 - a1, l2 - a2);
    // The four sign quadrants of (u1, u2) pick which array's window is offset.
    let (c_off, d_off) = match (u1 >= 0, u2 >= 0) {
        (true, true) => ((0, 0), (a1, a2)),
        (true, false) => ((0, a2), (a1, 0)),
        (false, false) => ((a1, a2), (0, 0)),
        (false, true) => ((a1, 0), (0, a2)),
    };
    accumulate_window(c, d, c_off, d_off, h, w, counts);
}

/// `ρ(C, D; u1, u2)`.
pub fn cross_correlation(
    c: &ZqArray,
    d: &ZqArray,
    u1: isize,
    u2: isize,
) -> Result<CorrelationValue, CorrelationError> {
    check_pair(c, d)?;
    check_shift(c.rows(), c.cols(), u1, u2)?;
    let mut counts = vec![0i64; c.q() as usize];
    cross_unchecked(c, d, u1, u2, &mut counts);
    Ok(CorrelationValue {
        u1,
        u2,
        value: PhaseSum::from_histogram(c.q(), &counts),
    })
}

/// `ρ(C; u1, u2) = ρ(C, C; u1, u2)`.
pub fn auto_correlation(
    c: &ZqArray,
    u1: isize,
    u2: isize,
) -> Result<CorrelationValue, CorrelationError> {
    cross_correlation(c, c, u1, u2)
}

fn check_sets(a: &[ZqArray], b: &[ZqArray]) -> Result<(), CorrelationError> {
    if a.len() != b.len() {
        return Err(CorrelationError::SetSizeMismatch(a.len(), b.len()));
    }
    let first = a.first().ok_or(CorrelationError::EmptySet)?;
    for x in a.iter().chain(b) {
        check_pair(first, x)?;
    }
    Ok(())
}

fn set_sum_unchecked(a: &[ZqArray], b: &[ZqArray], u1: isize, u2: isize) -> PhaseSum {
    let q = a[0].q();
    let mut counts = vec![0i64; q as usize];
    for (c, d) in a.iter().zip(b) {
        cross_unchecked(c, d, u1, u2, &mut counts);
    }
    PhaseSum::from_histogram(q, &counts)
}

/// `Σ_t ρ(C^p_t, C^{p'}_t; u1, u2)`.
pub fn set_correlation_sum(
    a: &[ZqArray],
    b: &[ZqArray],
    u1: isize,
    u2: isize,
) -> Result<CorrelationValue, CorrelationError> {
    check_sets(a, b)?;
    check_shift(a[0].rows(), a[0].cols(), u1, u2)?;
    Ok(CorrelationValue {
        u1,
        u2,
        value: set_sum_unchecked(a, b, u1, u2),
    })
}

/// Location and size of the largest deviation from the ideal value.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub p: usize,
    pub p_prime: usize,
    pub u1: isize,
    pub u2: isize,
    /// Observed correlation sum.
    pub value: Complex64,
    /// `|observed - ideal|`.
    pub deviation: f64,
}

impl Witness {
    fn key(&self) -> (usize, usize, isize, isize) {
        (self.p, self.p_prime, self.u1, self.u2)
    }

    /// Larger deviation wins; ties go to the lexicographically smaller key.
    fn worse_of(a: Witness, b: Witness) -> Witness {
        match a.deviation.total_cmp(&b.deviation) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if a.key() <= b.key() {
                    a
                } else {
                    b
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    /// Set when the input is not even shaped like the object being checked.
    pub structural_error: Option<String>,
    /// Largest deviation seen. Reported whether or not the check passed.
    pub worst: Option<Witness>,
    pub tolerance: f64,
    pub shifts_checked: u64,
    /// Whether all comparisons used exact arithmetic.
    pub exact: bool,
}

impl VerificationReport {
    fn structural(msg: impl Into<String>, tolerance: f64) -> Self {
        Self {
            passed: false,
            structural_error: Some(msg.into()),
            worst: None,
            tolerance,
            shifts_checked: 0,
            exact: false,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "result: {}", if self.passed { "pass" } else { "fail" })?;
        if let Some(msg) = &self.structural_error {
            writeln!(f, "structural_error: {msg}")?;
        }
        writeln!(
            f,
            "arithmetic: {}",
            if self.exact { "exact" } else { "floating" }
        )?;
        writeln!(f, "tolerance: {:e}", self.tolerance)?;
        writeln!(f, "shifts_checked: {}", self.shifts_checked)?;
        if let Some(w) = &self.worst {
            writeln!(
                f,
                "worst: p={} p'={} u1={} u2={} value={}{:+}j deviation={}",
                w.p, w.p_prime, w.u1, w.u2, w.value.re, w.value.im, w.deviation
            )?;
        }
        Ok(())
    }
}

/// Default tolerance `1e-9 · N · L1 · L2`.
pub fn default_tolerance(set_size: usize, rows: usize, cols: usize) -> f64 {
    1e-9 * (set_size * rows * cols) as f64
}

/// Shift tasks for one `(p, p')` pair, in lexicographic `(u1, u2)` order.
///
/// Auto pairs cover `u1 ∈ [0, L1)`, `u2 ∈ (-L2, L2)`; the other half follows from
/// `ρ(C; -u1, -u2) = ρ*(C; u1, u2)`. Cross pairs cover the full domain, and
/// `(p', p)` follows from `ρ(D, C; u) = ρ*(C, D; -u)`.
fn shift_tasks(
    p: usize,
    p_prime: usize,
    l1: usize,
    l2: usize,
) -> impl Iterator<Item = (usize, usize, isize, isize)> {
    let (l1, l2) = (l1 as isize, l2 as isize);
    let u1_start = if p == p_prime { 0 } else { 1 - l1 };
    (u1_start..l1).flat_map(move |u1| (1 - l2..l2).map(move |u2| (p, p_prime, u1, u2)))
}

fn run_checks(
    sets: &[Vec<ZqArray>],
    pairs: &[(usize, usize)],
    tolerance: f64,
) -> VerificationReport {
    let (l1, l2) = sets[0][0].shape();
    let q = sets[0][0].q();
    let peak = PhaseSum::integer(q, (sets[0].len() * l1 * l2) as i64);
    let tasks: Vec<_> = pairs
        .iter()
        .flat_map(|&(p, pp)| shift_tasks(p, pp, l1, l2))
        .collect();

    let worst = tasks
        .par_iter()
        .map(|&(p, p_prime, u1, u2)| {
            let value = set_sum_unchecked(&sets[p], &sets[p_prime], u1, u2);
            let ideal_peak = p == p_prime && u1 == 0 && u2 == 0;
            let deviation = if ideal_peak {
                value.sub(&peak).magnitude()
            } else {
                value.magnitude()
            };
            Witness {
                p,
                p_prime,
                u1,
                u2,
                value: value.to_complex(),
                deviation,
            }
        })
        .reduce_with(Witness::worse_of);

    let passed = worst.as_ref().is_none_or(|w| w.deviation <= tolerance);
    VerificationReport {
        passed,
        structural_error: None,
        worst,
        tolerance,
        shifts_checked: tasks.len() as u64,
        exact: q.is_power_of_two(),
    }
}

/// Checks that `set` is a Golay complementary array set: the summed
/// autocorrelation is `N·L1·L2` at `(0, 0)` and zero at every other shift.
pub fn verify_gcas(set: &[ZqArray], tolerance: f64) -> VerificationReport {
    if let Err(e) = check_sets(set, set) {
        return VerificationReport::structural(e.to_string(), tolerance);
    }
    run_checks(&[set.to_vec()], &[(0, 0)], tolerance)
}

/// Checks that `family` is a complete complementary code: each set is a
/// GCAS and every pair of distinct sets has zero correlation sum at every
/// shift, `(0, 0)` included.
pub fn verify_ccc(family: &CccFamily, tolerance: f64) -> VerificationReport {
    let (m, n, _, _) = family.parameters();
    if m != n {
        return VerificationReport::structural(
            format!("set count M = {m} differs from set size N = {n}"),
            tolerance,
        );
    }
    if m == 1 {
        return VerificationReport::structural(
            "a single set is not a complete complementary code",
            tolerance,
        );
    }
    let pairs: Vec<_> = (0..m).flat_map(|p| (p..m).map(move |pp| (p, pp))).collect();
    run_checks(family.sets(), &pairs, tolerance)
}

/// One row of a full correlation table.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub p: usize,
    pub p_prime: usize,
    pub u1: isize,
    pub u2: isize,
    pub value: Complex64,
}

/// Every correlation sum the CCC verifier inspects, in lexicographic order.
pub fn correlation_table(family: &CccFamily) -> Vec<CorrelationRow> {
    let m = family.set_count();
    let (l1, l2) = family.array_shape();
    let tasks: Vec<_> = (0..m)
        .flat_map(|p| (p..m).flat_map(move |pp| shift_tasks(p, pp, l1, l2)))
        .collect();
    tasks
        .par_iter()
        .map(|&(p, p_prime, u1, u2)| CorrelationRow {
            p,
            p_prime,
            u1,
            u2,
            value: set_sum_unchecked(family.set(p), family.set(p_prime), u1, u2).to_complex(),
        })
        .collect()
}

/// A family of single-row arrays viewed as 1D sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFamily {
    q: u32,
    sets: Vec<Vec<Vec<u32>>>,
}

/// Views an `L1 = 1` family as a family of 1D sequences.
pub fn reduce_to_1d(family: &CccFamily) -> Result<SequenceFamily, CorrelationError> {
    let (rows, _) = family.array_shape();
    if rows != 1 {
        return Err(CorrelationError::NotOneDimensional(rows));
    }
    let sets = family
        .sets()
        .iter()
        .map(|set| set.iter().map(|a| a.row(0).to_vec()).collect())
        .collect();
    Ok(SequenceFamily {
        q: family.q(),
        sets,
    })
}

impl SequenceFamily {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sets(&self) -> &[Vec<Vec<u32>>] {
        &self.sets
    }

    pub fn sequence(&self, p: usize, t: usize) -> &[u32] {
        &self.sets[p][t]
    }

    /// Back to `1 × L` arrays.
    pub fn to_family(&self) -> CccFamily {
        let sets = self
            .sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|s| {
                        ZqArray::new(self.q, 1, s.len(), s.clone())
                            .expect("validated on construction")
                    })
                    .collect()
            })
            .collect();
        CccFamily::new(sets).expect("validated on construction")
    }

    /// Same checks as [`verify_ccc`], on the single-row arrays.
    pub fn verify(&self, tolerance: f64) -> VerificationReport {
        verify_ccc(&self.to_family(), tolerance)
    }
}

/// Aperiodic cross-correlation of two q-ary sequences:
/// `Σ_i ξ^{b[i+u] - a[i]}` over the overlap.
pub fn sequence_correlation(
    q: u32,
    a: &[u32],
    b: &[u32],
    u: isize,
) -> Result<PhaseSum, CorrelationError> {
    if a.len() != b.len() {
        return Err(CorrelationError::ShapeMismatch);
    }
    let len = a.len();
    if u.unsigned_abs() >= len {
        return Err(CorrelationError::ShiftOutOfRange {
            u1: 0,
            u2: u,
            rows: 1,
            cols: len,
        });
    }
    let mut counts = vec![0i64; q as usize];
    let shift = u.unsigned_abs();
    let pairs: Box<dyn Iterator<Item = (&u32, &u32)>> = if u >= 0 {
        Box::new(a.iter().zip(&b[shift..]))
    } else {
        Box::new(a[shift..].iter().zip(b))
    };
    for (x, y) in pairs {
        counts[((y + q - x) % q) as usize] += 1;
    }
    Ok(PhaseSum::from_histogram(q, &counts))
}
