//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the correlation kernels under test.

#![allow(dead_code)]

use ccc2d::{CccFamily, ZqArray};
use num_complex::Complex64;

/// `ξ^v` as a Gaussian integer, for q ∈ {2, 4}.
pub fn gaussian_root(q: u32, v: u32) -> (i64, i64) {
    match (q, v % q) {
        (2, 0) | (4, 0) => (1, 0),
        (2, 1) | (4, 2) => (-1, 0),
        (4, 1) => (0, 1),
        (4, 3) => (0, -1),
        _ => panic!("gaussian oracle only covers q = 2, 4"),
    }
}

/// Zero-pads both arrays to `(2L1-1) × (2L2-1)` and sums `D[x+u]·conj(C[x])`
/// over every padded position.
pub fn padded_correlation(c: &ZqArray, d: &ZqArray, u1: isize, u2: isize) -> (i64, i64) {
    let (l1, l2) = (c.rows() as isize, c.cols() as isize);
    let q = c.q();
    let lookup = |a: &ZqArray, g: isize, i: isize| -> (i64, i64) {
        if g < 0 || i < 0 || g >= l1 || i >= l2 {
            (0, 0)
        } else {
            gaussian_root(q, a.get(g as usize, i as usize))
        }
    };
    let mut acc = (0i64, 0i64);
    for g in -(l1 - 1)..(2 * l1 - 1) {
        for i in -(l2 - 1)..(2 * l2 - 1) {
            let (cr, ci) = lookup(c, g, i);
            let (dr, di) = lookup(d, g + u1, i + u2);
            // d · conj(c)
            acc.0 += dr * cr + di * ci;
            acc.1 += di * cr - dr * ci;
        }
    }
    acc
}

/// Floating-point double loop for any even q.
pub fn direct_correlation(c: &ZqArray, d: &ZqArray, u1: isize, u2: isize) -> Complex64 {
    let (l1, l2) = (c.rows() as isize, c.cols() as isize);
    let xi =
        |v: u32| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * v as f64 / c.q() as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for g in 0..l1 {
        for i in 0..l2 {
            let (gg, ii) = (g + u1, i + u2);
            if (0..l1).contains(&gg) && (0..l2).contains(&ii) {
                acc +=
                    xi(d.get(gg as usize, ii as usize)) * xi(c.get(g as usize, i as usize)).conj();
            }
        }
    }
    acc
}

/// Independent CCC check over every ordered pair of sets and every shift.
/// Returns the first violation found.
pub fn oracle_ccc_violation(family: &CccFamily) -> Option<(usize, usize, isize, isize, Complex64)> {
    let (m, n, l1, l2) = family.parameters();
    let peak = (n * l1 * l2) as f64;
    for p in 0..m {
        for pp in 0..m {
            for u1 in -(l1 as isize - 1)..l1 as isize {
                for u2 in -(l2 as isize - 1)..l2 as isize {
                    let sum: Complex64 = (0..n)
                        .map(|t| direct_correlation(&family.set(p)[t], &family.set(pp)[t], u1, u2))
                        .sum();
                    let ideal = if p == pp && u1 == 0 && u2 == 0 {
                        peak
                    } else {
                        0.0
                    };
                    if (sum - ideal).norm() > 1e-9 * peak {
                        return Some((p, pp, u1, u2, sum));
                    }
                }
            }
        }
    }
    None
}

/// Plain 1D aperiodic correlation `Σ_i ξ^{b[i+u] - a[i]}` in floating point.
pub fn sequence_oracle(q: u32, a: &[u32], b: &[u32], u: isize) -> Complex64 {
    let len = a.len() as isize;
    (0..len)
        .filter(|i| (0..len).contains(&(i + u)))
        .map(|i| {
            let d = b[(i + u) as usize] as f64 - a[i as usize] as f64;
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * d / q as f64)
        })
        .sum()
}

/// Independent 1D CCC verdict.
pub fn oracle_is_1d_ccc(q: u32, sets: &[Vec<Vec<u32>>]) -> bool {
    let m = sets.len();
    let n = sets[0].len();
    if m != n || m < 2 {
        return false;
    }
    let len = sets[0][0].len();
    let peak = (n * len) as f64;
    for p in 0..m {
        for pp in 0..m {
            for u in -(len as isize - 1)..len as isize {
                let sum: Complex64 = (0..n)
                    .map(|t| sequence_oracle(q, &sets[p][t], &sets[pp][t], u))
                    .sum();
                let ideal = if p == pp && u == 0 { peak } else { 0.0 };
                if (sum - ideal).norm() > 1e-9 * peak {
                    return false;
                }
            }
        }
    }
    true
}

/// The eight 8×16 arrays of the worked example's sets G⁰ and G¹, as printed.
pub fn example_table() -> Vec<Vec<ZqArray>> {
    let text = include_str!("../data/example_sets_g0_g1.txt");
    let mut sets = vec![Vec::new(), Vec::new()];
    let mut lines = text.lines();
    while let Some(header) = lines.next() {
        let parts: Vec<usize> = header
            .split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        let rows: Vec<Vec<u32>> = (0..8)
            .map(|_| {
                lines
                    .next()
                    .unwrap()
                    .split_whitespace()
                    .map(|v| v.parse().unwrap())
                    .collect()
            })
            .collect();
        sets[parts[0]].push(ZqArray::from_rows(2, &rows).unwrap());
    }
    sets
}
