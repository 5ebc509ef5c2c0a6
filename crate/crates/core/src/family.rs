//! Collections of array sets: `M` sets of `N` equally sized arrays.

use thiserror::Error;

use crate::array::ZqArray;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family has no sets")]
    Empty,
    #[error("set {set} has {actual} arrays, expected {expected}")]
    SetSize {
        set: usize,
        expected: usize,
        actual: usize,
    },
    #[error("array {array} of set {set} differs in q or shape from array 0 of set 0")]
    Shape { set: usize, array: usize },
}

/// An `(M, N, L1, L2)` family: `sets[p][t]` is array `C^p_t`.
///
/// Every set holds the same number of arrays and all arrays share `q` and
/// shape. Whether the family is complementary is a separate question
/// answered by [`crate::correlation::verify_ccc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CccFamily {
    sets: Vec<Vec<ZqArray>>,
}

impl CccFamily {
    pub fn new(sets: Vec<Vec<ZqArray>>) -> Result<Self, FamilyError> {
        let first = sets
            .first()
            .and_then(|s| s.first())
            .ok_or(FamilyError::Empty)?;
        let (q, shape, n) = (first.q(), first.shape(), sets[0].len());
        for (p, set) in sets.iter().enumerate() {
            if set.len() != n {
                return Err(FamilyError::SetSize {
                    set: p,
                    expected: n,
                    actual: set.len(),
                });
            }
            if let Some(t) = set.iter().position(|a| a.q() != q || a.shape() != shape) {
                return Err(FamilyError::Shape { set: p, array: t });
            }
        }
        Ok(Self { sets })
    }

    /// Number of sets `M`.
    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    /// Arrays per set `N`.
    pub fn set_size(&self) -> usize {
        self.sets[0].len()
    }

    pub fn q(&self) -> u32 {
        self.sets[0][0].q()
    }

    /// `(L1, L2)`.
    pub fn array_shape(&self) -> (usize, usize) {
        self.sets[0][0].shape()
    }

    pub fn set(&self, p: usize) -> &[ZqArray] {
        &self.sets[p]
    }

    pub fn sets(&self) -> &[Vec<ZqArray>] {
        &self.sets
    }

    pub fn into_sets(self) -> Vec<Vec<ZqArray>> {
        self.sets
    }

    /// `(M, N, L1, L2)`.
    pub fn parameters(&self) -> (usize, usize, usize, usize) {
        let (l1, l2) = self.array_shape();
        (self.set_count(), self.set_size(), l1, l2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_families() {
        let a = ZqArray::constant(2, 2, 2, 0).unwrap();
        let b = ZqArray::constant(2, 2, 3, 0).unwrap();
        assert_eq!(CccFamily::new(vec![]), Err(FamilyError::Empty));
        assert_eq!(
            CccFamily::new(vec![vec![a.clone(), a.clone()], vec![a.clone()]]),
            Err(FamilyError::SetSize {
                set: 1,
                expected: 2,
                actual: 1
            })
        );
        assert_eq!(
            CccFamily::new(vec![vec![a.clone(), b]]),
            Err(FamilyError::Shape { set: 0, array: 1 })
        );
        let f = CccFamily::new(vec![vec![a.clone()], vec![a]]).unwrap();
        assert_eq!(f.parameters(), (2, 1, 2, 2));
    }
}
