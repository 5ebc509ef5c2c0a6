//! q-ary arrays: rectangular grids of phase indices in Z_q.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::gbf::GbfError;

/// An `rows × cols` grid of elements of Z_q, stored row-major.
///
/// Entry `(g, i)` stands for the unimodular complex value `ξ^{value}` with
/// `ξ = exp(2πj/q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZqArray {
    q: u32,
    rows: usize,
    cols: usize,
    values: Vec<u32>,
}

impl ZqArray {
    pub fn new(q: u32, rows: usize, cols: usize, values: Vec<u32>) -> Result<Self, GbfError> {
        check_q(q)?;
        if rows == 0 || cols == 0 {
            return Err(GbfError::EmptyArray);
        }
        if values.len() != rows * cols {
            return Err(GbfError::ArrayLength {
                expected: rows * cols,
                actual: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= q) {
            return Err(GbfError::CoefficientRange { value: v as i64, q });
        }
        Ok(Self {
            q,
            rows,
            cols,
            values,
        })
    }

    /// Builds an array from a list of equally long rows.
    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Result<Self, GbfError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(GbfError::ArrayLength {
                expected: cols,
                actual: bad.len(),
            });
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    /// Array with every entry equal to `value`.
    pub fn constant(q: u32, rows: usize, cols: usize, value: u32) -> Result<Self, GbfError> {
        Self::new(q, rows, cols, vec![value; rows * cols])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(rows, cols)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, g: usize, i: usize) -> u32 {
        self.values[g * self.cols + i]
    }

    pub fn row(&self, g: usize) -> &[u32] {
        &self.values[g * self.cols..(g + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[u32]> {
        self.values.chunks(self.cols)
    }

    /// Complex realization `ξ^{C_{g,i}}` of one entry.
    pub fn phase(&self, g: usize, i: usize) -> Complex64 {
        root_of_unity(self.q, self.get(g, i))
    }

    /// Entry-wise sum modulo q.
    pub fn add(&self, other: &ZqArray) -> Result<ZqArray, GbfError> {
        if self.q != other.q || self.shape() != other.shape() {
            return Err(GbfError::ShapeMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % self.q)
            .collect();
        Ok(Self { values, ..*self })
    }

    /// Adds `c` (mod q) to every entry. With `c = q/2` this negates the complex array.
    pub fn offset(&self, c: u32) -> ZqArray {
        let c = c % self.q;
        let values = self.values.iter().map(|v| (v + c) % self.q).collect();
        Self { values, ..*self }
    }

    /// Replaces one entry; `value` is reduced mod q.
    pub fn set(&mut self, g: usize, i: usize, value: u32) {
        self.values[g * self.cols + i] = value % self.q;
    }
}

impl fmt::Display for ZqArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows_iter() {
            let mut first = true;
            for v in row {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `exp(2πj·k/q)`, with exact values on the axes.
pub fn root_of_unity(q: u32, k: u32) -> Complex64 {
    let k = k % q;
    // Exact quarter turns keep q ∈ {2, 4} realizations free of rounding noise.
    if (4 * k).is_multiple_of(q) {
        return match 4 * k / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * f64::from(k) / f64::from(q))
}

pub(crate) fn check_q(q: u32) -> Result<(), GbfError> {
    if q < 2 || !q.is_multiple_of(2) {
        Err(GbfError::InvalidModulus(q))
    } else {
        Ok(())
    }
}
