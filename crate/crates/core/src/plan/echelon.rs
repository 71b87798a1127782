//! Rank factorization of ternary matrices through reduced row-echelon form.
//!
//! A ternary `T` (N×N) is written as `T = C·R` where `R` holds the nonzero
//! rows of `rref(T)` and `C` is the submatrix of `T` on the pivot columns.
//! Applying `R` to data costs only additions; a scalar then multiplies the
//! `rank(T)` intermediate values; `C` recombines them with signed additions.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::matrix::{IntMatrix, TernaryMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredTernary {
    combiner: IntMatrix,
    reduced: IntMatrix,
    rank: usize,
    optimal: bool,
}

impl FactoredTernary {
    /// N×r matrix that recombines the scaled intermediates.
    pub fn combiner(&self) -> &IntMatrix {
        &self.combiner
    }

    /// r×N matrix applied to the input.
    pub fn reduced_rows(&self) -> &IntMatrix {
        &self.reduced
    }

    /// Rank of the original matrix over the rationals.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of intermediates, i.e. scalar multiplications this factor costs.
    /// Equals [`rank`](Self::rank) unless the factorization is non-optimal.
    pub fn width(&self) -> usize {
        self.reduced.rows()
    }

    /// False when the echelon factors were not ternary and the
    /// distinct-row fallback was used instead.
    pub fn is_optimal(&self) -> bool {
        self.optimal
    }

    pub fn product(&self) -> IntMatrix {
        &self.combiner * &self.reduced
    }
}

/// Reduced row-echelon form over the rationals. Returns the nonzero rows and
/// the pivot column of each.
fn rref(m: &IntMatrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut rows: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..m.cols() {
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let inv = rows[lead][col].recip();
        for x in rows[lead].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(lead);
    (rows, pivots)
}

fn as_ternary(x: &BigRational) -> Option<i64> {
    if !x.is_integer() || x.abs() > BigRational::one() {
        return None;
    }
    x.to_integer().to_i64()
}

/// Rank of an integer matrix over the rationals.
pub fn rational_rank(m: &IntMatrix) -> usize {
    rref(m).1.len()
}

/// Factor `t` as `combiner · reduced_rows` with both factors ternary.
///
/// Falls back to one intermediate per distinct nonzero row (up to sign) when
/// the echelon rows are not ternary; the result is then flagged non-optimal.
pub fn echelon_factor(t: &TernaryMatrix) -> FactoredTernary {
    let m = t.matrix();
    let (rows, pivots) = rref(m);
    let rank = pivots.len();

    let reduced: Option<Vec<Vec<i64>>> = rows
        .iter()
        .map(|row| row.iter().map(as_ternary).collect())
        .collect();

    match reduced {
        Some(reduced) => {
            let reduced = if reduced.is_empty() {
                IntMatrix::zeros(0, m.cols())
            } else {
                IntMatrix::from_rows(&reduced).expect("rectangular echelon rows")
            };
            let combiner = IntMatrix::from_fn(m.rows(), rank, |r, i| m.get(r, pivots[i]));
            FactoredTernary {
                combiner,
                reduced,
                rank,
                optimal: true,
            }
        }
        None => distinct_row_factor(m, rank),
    }
}

fn distinct_row_factor(m: &IntMatrix, rank: usize) -> FactoredTernary {
    let mut distinct: Vec<Vec<i64>> = Vec::new();
    let mut picks: Vec<Option<(usize, i64)>> = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row = m.row(r);
        let Some(&lead) = row.iter().find(|&&x| x != 0) else {
            picks.push(None);
            continue;
        };
        let sign = lead.signum();
        let canonical: Vec<i64> = row.iter().map(|x| x * sign).collect();
        let idx = match distinct.iter().position(|d| *d == canonical) {
            Some(i) => i,
            None => {
                distinct.push(canonical);
                distinct.len() - 1
            }
        };
        picks.push(Some((idx, sign)));
    }
    let width = distinct.len();
    let reduced = if distinct.is_empty() {
        IntMatrix::zeros(0, m.cols())
    } else {
        IntMatrix::from_rows(&distinct).expect("rectangular rows")
    };
    let combiner = IntMatrix::from_fn(m.rows(), width, |r, i| match picks[r] {
        Some((idx, sign)) if idx == i => sign,
        _ => 0,
    });
    FactoredTernary {
        combiner,
        reduced,
        rank,
        optimal: false,
    }
}
