//! Banded storage and Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Square matrix with `kl` sub- and `ku` super-diagonals.
///
/// Each row keeps room for `kl` extra super-diagonals so that row
/// interchanges during elimination never spill out of storage.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn identity(n: usize, kl: usize, ku: usize) -> Self {
        let mut m = Self::zeros(n, kl, ku);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    /// Storage slot of `(i, j)` including the fill region.
    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.ku + self.kl {
            None
        } else {
            Some(i * self.width + j + self.kl - i)
        }
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j).unwrap()]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j).unwrap();
        self.data[s] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j).unwrap();
        self.data[s] += value;
    }

    /// Zeroes row `i` and puts `1` on the diagonal.
    pub fn set_identity_row(&mut self, i: usize) {
        let start = i * self.width;
        self.data[start..start + self.width].fill(0.0);
        self.set(i, i, 1.0);
    }

    /// `self ← a·I + b·self`.
    pub fn scale_add_identity(&mut self, a: f64, b: f64) {
        for x in &mut self.data {
            *x *= b;
        }
        for i in 0..self.n {
            self.add(i, i, a);
        }
    }

    fn row_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Solves `matrix · x = rhs`.
///
/// Row-pivoted elimination restricted to the band; the pivot search looks
/// `kl` rows ahead, and upper fill is bounded by `kl + ku`.
pub fn banded_solve(matrix: &BandedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.n;
    if rhs.len() != n {
        return Err(Error::Contract(format!(
            "rhs length {} does not match matrix size {n}",
            rhs.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = matrix.clone();
    let mut b = rhs.to_vec();
    let (kl, ku) = (a.kl, a.ku);
    let scale = a.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tiny = f64::EPSILON * scale;

    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let last_col = (k + kl + ku).min(n - 1);

        let mut p = k;
        let mut best = a.data[a.slot(k, k).unwrap()].abs();
        for r in k + 1..=last_row {
            let val = a.data[a.slot(r, k).unwrap()].abs();
            if val > best {
                best = val;
                p = r;
            }
        }
        if !(best > tiny) || !best.is_finite() {
            return Err(Error::SingularPivot { pivot: k });
        }
        if p != k {
            for j in k..=last_col {
                let sk = a.slot(k, j).unwrap();
                let sp = a.slot(p, j).unwrap();
                a.data.swap(sk, sp);
            }
            b.swap(k, p);
        }

        let pivot = a.data[a.slot(k, k).unwrap()];
        for r in k + 1..=last_row {
            let sr = a.slot(r, k).unwrap();
            let factor = a.data[sr] / pivot;
            if factor == 0.0 {
                continue;
            }
            a.data[sr] = 0.0;
            for j in k + 1..=last_col {
                let upper = a.data[a.slot(k, j).unwrap()];
                let s = a.slot(r, j).unwrap();
                a.data[s] -= factor * upper;
            }
            b[r] -= factor * b[k];
        }
    }

    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let last_col = (k + kl + ku).min(n - 1);
        let mut acc = b[k];
        for (j, xj) in x.iter().enumerate().take(last_col + 1).skip(k + 1) {
            acc -= a.data[a.slot(k, j).unwrap()] * xj;
        }
        x[k] = acc / a.data[a.slot(k, k).unwrap()];
    }
    Ok(x)
}
