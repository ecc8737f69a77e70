//! Minimal dense square matrices over a [`Ring`].

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::Ring;

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<R> {
    size: usize,
    data: Vec<R>,
}

impl<R: Ring> DenseMatrix<R> {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![R::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Self { size, data }
    }

    /// Builds a matrix from rows; panics when the rows are not square.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let size = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == size),
            "matrix must be square"
        );
        Self {
            size,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scale(&self, k: &R) -> Self {
        Self {
            size: self.size,
            data: self.data.iter().map(|v| v.clone() * k.clone()).collect(),
        }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> DenseMatrix<S> {
        DenseMatrix {
            size: self.size,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

impl<R> Index<(usize, usize)> for DenseMatrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.size + j]
    }
}

impl<R> IndexMut<(usize, usize)> for DenseMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.size + j]
    }
}

impl<R: Ring> Add for &DenseMatrix<R> {
    type Output = DenseMatrix<R>;
    fn add(self, rhs: Self) -> DenseMatrix<R> {
        assert_eq!(self.size, rhs.size);
        DenseMatrix {
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<R: Ring> Sub for &DenseMatrix<R> {
    type Output = DenseMatrix<R>;
    fn sub(self, rhs: Self) -> DenseMatrix<R> {
        assert_eq!(self.size, rhs.size);
        DenseMatrix {
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<R: Ring> Mul for &DenseMatrix<R> {
    type Output = DenseMatrix<R>;
    fn mul(self, rhs: Self) -> DenseMatrix<R> {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        DenseMatrix::from_fn(n, |i, j| {
            (0..n).fold(R::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        })
    }
}
