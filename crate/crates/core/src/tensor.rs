//! Dense coordinate tensors with explicit slot variance.
//!
//! Components are stored row-major over the index tuple, one slot per tensor
//! argument. Operator-valued tensors keep their argument slots first and the
//! output slot last, e.g. a (1,1) operator `A` stores `A[x][d]` meaning the
//! `d`-th component of `A` applied to the `x`-th coordinate vector.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Up,
    Down,
}

pub const MAX_RANK: usize = 6;

/// Iterates over all index tuples of a fixed rank in row-major order.
pub struct IndexIter {
    dim: usize,
    rank: usize,
    cur: [usize; MAX_RANK],
    started: bool,
    done: bool,
}

impl IndexIter {
    pub fn new(dim: usize, rank: usize) -> IndexIter {
        assert!(rank <= MAX_RANK);
        IndexIter { dim, rank, cur: [0; MAX_RANK], started: false, done: dim == 0 }
    }
}

impl Iterator for IndexIter {
    type Item = [usize; MAX_RANK];

    fn next(&mut self) -> Option<[usize; MAX_RANK]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.rank == 0 {
                self.done = true;
            }
            return Some(self.cur);
        }
        let mut k = self.rank;
        loop {
            if k == 0 {
                self.done = true;
                return None;
            }
            k -= 1;
            self.cur[k] += 1;
            if self.cur[k] < self.dim {
                break;
            }
            self.cur[k] = 0;
        }
        Some(self.cur)
    }
}

pub fn linear_index(dim: usize, idx: &[usize]) -> usize {
    let mut lin = 0;
    for &i in idx {
        debug_assert!(i < dim);
        lin = lin * dim + i;
    }
    lin
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorValue {
    dim: usize,
    variance: Vec<Variance>,
    comps: Vec<f64>,
}

impl TensorValue {
    pub fn zeros(dim: usize, variance: Vec<Variance>) -> TensorValue {
        let len = dim.pow(variance.len() as u32);
        TensorValue { dim, variance, comps: vec![0.0; len] }
    }

    pub fn from_components(dim: usize, variance: Vec<Variance>, comps: Vec<f64>) -> TensorValue {
        assert_eq!(comps.len(), dim.pow(variance.len() as u32));
        TensorValue { dim, variance, comps }
    }

    pub fn scalar(v: f64) -> TensorValue {
        TensorValue { dim: 1, variance: vec![], comps: vec![v] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.rank());
        self.comps[linear_index(self.dim, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        debug_assert_eq!(idx.len(), self.rank());
        let lin = linear_index(self.dim, idx);
        self.comps[lin] = v;
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn sub(&self, other: &TensorValue) -> TensorValue {
        assert_eq!(self.variance, other.variance);
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        TensorValue { dim: self.dim, variance: self.variance.clone(), comps }
    }

    pub fn scale(&self, s: f64) -> TensorValue {
        let comps = self.comps.iter().map(|c| c * s).collect();
        TensorValue { dim: self.dim, variance: self.variance.clone(), comps }
    }

    fn swap_variance(&self, slot: usize, expect: Variance, metric: &DMatrix<f64>) -> Result<TensorValue> {
        if slot >= self.rank() {
            return Err(Error::SlotOutOfRange { slot, rank: self.rank() });
        }
        if self.variance[slot] != expect {
            return Err(Error::VarianceMismatch { slot });
        }
        let mut variance = self.variance.clone();
        variance[slot] = match expect {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        };
        let mut out = TensorValue::zeros(self.dim, variance);
        let rank = self.rank();
        for idx in IndexIter::new(self.dim, rank) {
            let mut src = idx;
            let mut acc = 0.0;
            for m in 0..self.dim {
                src[slot] = m;
                acc += metric[(idx[slot], m)] * self.comps[linear_index(self.dim, &src[..rank])];
            }
            let lin = linear_index(self.dim, &idx[..rank]);
            out.comps[lin] = acc;
        }
        Ok(out)
    }

    /// Contracts the slot with the inverse metric, turning a lower slot into
    /// an upper one.
    pub fn raise_index(&self, slot: usize, g_inv: &DMatrix<f64>) -> Result<TensorValue> {
        self.swap_variance(slot, Variance::Down, g_inv)
    }

    /// Contracts the slot with the metric, turning an upper slot into a lower
    /// one.
    pub fn lower_index(&self, slot: usize, g: &DMatrix<f64>) -> Result<TensorValue> {
        self.swap_variance(slot, Variance::Up, g)
    }

    /// View a rank-2 tensor as a matrix (first index = row).
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.rank(), 2);
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]))
    }
}

/// Tensor whose components are jets; `values()` drops to order zero.
#[derive(Debug, Clone)]
pub struct JetTensor {
    dim: usize,
    variance: Vec<Variance>,
    comps: Vec<Jet>,
}

impl JetTensor {
    pub fn from_components(dim: usize, variance: Vec<Variance>, comps: Vec<Jet>) -> JetTensor {
        assert_eq!(comps.len(), dim.pow(variance.len() as u32));
        JetTensor { dim, variance, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn get(&self, idx: &[usize]) -> &Jet {
        &self.comps[linear_index(self.dim, idx)]
    }

    pub fn components(&self) -> &[Jet] {
        &self.comps
    }

    pub fn values(&self) -> TensorValue {
        TensorValue {
            dim: self.dim,
            variance: self.variance.clone(),
            comps: self.comps.iter().map(|j| j.value()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn index_iteration_row_major() {
        let all: Vec<_> = IndexIter::new(2, 3).map(|i| (i[0], i[1], i[2])).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], (0, 0, 0));
        assert_eq!(all[1], (0, 0, 1));
        assert_eq!(all[7], (1, 1, 1));
    }

    #[test]
    fn raise_then_lower_is_identity() {
        // generic nondegenerate symmetric metric of mixed signature
        let g = DMatrix::from_row_slice(3, 3, &[-1.0, 0.2, 0.0, 0.2, 1.5, -0.1, 0.0, -0.1, 2.0]);
        let g_inv = g.clone().try_inverse().unwrap();
        let mut t = TensorValue::zeros(3, vec![Variance::Down, Variance::Down]);
        for (k, idx) in IndexIter::new(3, 2).enumerate() {
            t.set(&idx[..2], (k as f64) * 0.37 - 1.0);
        }
        let up = t.raise_index(1, &g_inv).unwrap();
        assert_eq!(up.variance()[1], Variance::Up);
        let back = up.lower_index(1, &g).unwrap();
        for idx in IndexIter::new(3, 2) {
            assert_relative_eq!(back.get(&idx[..2]), t.get(&idx[..2]), epsilon = 1e-12);
        }
    }

    #[test]
    fn minkowski_flip_covector() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
        let v = TensorValue::from_components(4, vec![Variance::Up], vec![2.0, 1.0, 0.0, -3.0]);
        let low = v.lower_index(0, &g).unwrap();
        assert_eq!(low.components(), &[-2.0, 1.0, 0.0, -3.0]);
    }

    #[test]
    fn variance_misuse_rejected() {
        let g = DMatrix::identity(2, 2);
        let v = TensorValue::from_components(2, vec![Variance::Up], vec![1.0, 2.0]);
        assert!(matches!(v.raise_index(0, &g), Err(Error::VarianceMismatch { slot: 0 })));
        assert!(matches!(v.lower_index(3, &g), Err(Error::SlotOutOfRange { .. })));
    }
}
