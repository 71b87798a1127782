//! Dense integer matrices and the typed views the decomposition works with.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_nnz(&self, r: usize) -> usize {
        self.row(r).iter().filter(|&&x| x != 0).count()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(|(i, &x)| (i / self.cols, i % self.cols, x))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        IntMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|i| self.get(r, i) * rhs.get(i, c)).sum()
        })
    }
}

impl fmt::Display for IntMatrix {
    /// One row per line, entries rendered as `+1`, ` 0`, `-1` (wider values
    /// fall back to their signed decimal form).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self
                .row(r)
                .iter()
                .map(|&x| match x {
                    0 => " 0".to_string(),
                    x if x > 0 => format!("+{x}"),
                    x => x.to_string(),
                })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `m_{k,n} = k·n mod N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix(IntMatrix);

impl ExponentMatrix {
    pub fn new(order: usize) -> Self {
        Self(IntMatrix::from_fn(order, order, |k, n| {
            ((k * n) % order) as i64
        }))
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }
}

/// Binary matrix marking the positions where `k·n ≡ l (mod N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    class_index: usize,
    matrix: IntMatrix,
}

impl IndicatorMatrix {
    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub(crate) fn from_exponents(exponents: &ExponentMatrix, l: usize) -> Self {
        let m = exponents.matrix();
        Self {
            class_index: l,
            matrix: IntMatrix::from_fn(m.rows(), m.cols(), |k, n| {
                i64::from(m.get(k, n) == l as i64)
            }),
        }
    }
}

/// Matrix over `{0, ±1, ±j}` stored as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianIntegerMatrix {
    re: IntMatrix,
    im: IntMatrix,
}

impl GaussianIntegerMatrix {
    pub fn new(re: IntMatrix, im: IntMatrix) -> Result<Self> {
        if (re.rows(), re.cols()) != (im.rows(), im.cols()) {
            return Err(Error::InvalidInput(
                "real and imaginary parts differ in shape".into(),
            ));
        }
        for ((r, c, a), (_, _, b)) in re.entries().zip(im.entries()) {
            if (a != 0 || b != 0) && a.abs() + b.abs() != 1 {
                return Err(Error::InvalidInput(format!(
                    "entry ({r}, {c}) = {a}{b:+}j is not a Gaussian unit"
                )));
            }
        }
        Ok(Self { re, im })
    }

    pub fn order(&self) -> usize {
        self.re.rows()
    }

    pub fn re(&self) -> &IntMatrix {
        &self.re
    }

    pub fn im(&self) -> &IntMatrix {
        &self.im
    }
}

/// Integer matrix with entries restricted to `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryMatrix(IntMatrix);

impl TernaryMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if let Some((row, col, value)) = matrix.entries().find(|&(_, _, x)| !(-1..=1).contains(&x))
        {
            return Err(Error::NotTernary { row, col, value });
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.rows()
    }
}

impl TryFrom<IntMatrix> for TernaryMatrix {
    type Error = Error;
    fn try_from(m: IntMatrix) -> Result<Self> {
        Self::new(m)
    }
}
