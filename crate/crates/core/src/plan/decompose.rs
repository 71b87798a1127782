//! Indicator matrices, congruence classes and the Gaussian-integer `M_m`.
//!
//! Every DFT entry `exp(-j2π·l/N)` with `l = kn mod N` can be written as
//! `exp(-j2π·m/N) · (-j)^q` where `l = m + q·N/4`. Grouping positions by the
//! residue `m = l mod N/4` gives `M_m = Σ_{l ∈ C_m} (-j)^{4(l-m)/N} χ_l`, and
//! the DFT matrix is `Σ_m exp(-j2πm/N) M_m`.

use crate::error::{Error, Result};

use super::matrix::{ExponentMatrix, GaussianIntegerMatrix, IndicatorMatrix, IntMatrix};

pub(crate) fn check_order(order: usize) -> Result<()> {
    if order < 4 || !order.is_multiple_of(4) {
        return Err(Error::UnsupportedLength(order));
    }
    Ok(())
}

/// `χ_l` for the `order`-point exponent matrix.
pub fn chi(l: usize, order: usize) -> Result<IndicatorMatrix> {
    if order == 0 || l >= order {
        return Err(Error::InvalidInput(format!(
            "class index {l} is outside 0..{order}"
        )));
    }
    Ok(IndicatorMatrix::from_exponents(
        &ExponentMatrix::new(order),
        l,
    ))
}

/// `C_m = { l ∈ 0..N : l ≡ m (mod N/4) }`, always four elements.
pub fn congruence_class(m: i64, order: usize) -> Result<Vec<usize>> {
    check_order(order)?;
    let quarter = order / 4;
    let residue = m.rem_euclid(quarter as i64) as usize;
    Ok((0..4).map(|q| residue + q * quarter).collect())
}

/// `M_m` for a signed class label.
///
/// The exponent `4(l - m)/N` uses the signed `m`, so `M_{-m}` and
/// `M_{N/4-m}` cover the same positions but differ by a power of `-j`.
pub fn build_m(m: i64, order: usize) -> Result<GaussianIntegerMatrix> {
    let class = congruence_class(m, order)?;
    let exponents = ExponentMatrix::new(order);
    let mut re = IntMatrix::zeros(order, order);
    let mut im = IntMatrix::zeros(order, order);
    for l in class {
        let shift = l as i64 - m;
        debug_assert_eq!((4 * shift) % order as i64, 0);
        let (ur, ui) = neg_j_power(4 * shift / order as i64);
        let indicator = IndicatorMatrix::from_exponents(&exponents, l);
        for (k, n, hit) in indicator.matrix().entries() {
            if hit == 1 {
                re.set(k, n, ur);
                im.set(k, n, ui);
            }
        }
    }
    GaussianIntegerMatrix::new(re, im)
}

/// `(-j)^q` as `(re, im)`.
fn neg_j_power(q: i64) -> (i64, i64) {
    match q.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, -1),
        2 => (-1, 0),
        _ => (0, 1),
    }
}
