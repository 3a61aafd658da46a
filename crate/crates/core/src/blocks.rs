//! Contiguous storage for a list of equally sized vectors.

use std::slice::{ChunksExact, ChunksExactMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `count` vectors of dimension `dim`, stored row-major in one allocation.
///
/// Used for stacked query points, gradients and dual variables (one block per
/// constraint pair).
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks<T> {
    data: Vec<T>,
    dim: usize,
}

impl<T: Scalar> Blocks<T> {
    pub fn zeros(count: usize, dim: usize) -> Self {
        assert!(dim >= 1, "block dimension must be at least 1");
        Self { data: vec![T::zero(); count * dim], dim }
    }

    pub fn from_flat(data: Vec<T>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("block dimension"));
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim * (data.len() / dim + 1), found: data.len() });
        }
        Ok(Self { data, dim })
    }

    /// Builds from a list of rows; all rows must share one nonzero length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty("block list"))?;
        let dim = first.as_ref().len();
        if dim == 0 {
            return Err(Error::Empty("block dimension"));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { data, dim })
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.data.len() / self.dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn block(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn block_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> ChunksExact<'_, T> {
        self.data.chunks_exact(self.dim)
    }

    pub fn iter_mut(&mut self) -> ChunksExactMut<'_, T> {
        self.data.chunks_exact_mut(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_flat(self) -> Vec<T> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.iter().map(<[T]>::to_vec).collect()
    }

    pub fn push(&mut self, block: &[T]) -> Result<()> {
        if block.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: block.len() });
        }
        self.data.extend_from_slice(block);
        Ok(())
    }

    /// Arithmetic mean of the blocks.
    pub fn centroid(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim];
        for b in self.iter() {
            for (a, &v) in acc.iter_mut().zip(b) {
                *a += v;
            }
        }
        let n = T::of_usize(self.count().max(1));
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Euclidean norm of the stacked vector.
    pub fn norm(&self) -> T {
        crate::linalg::norm(&self.data)
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.count() != other.count() {
            return Err(Error::BlockCount { expected: self.count(), found: other.count() });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
