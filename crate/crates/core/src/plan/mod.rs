//! The factored Laurent-series plan.
//!
//! With `θ_m = 2πm/N` the DFT matrix is
//!
//! ```text
//! Re F = Re M_0 + Σ_m cos θ_m · Re(M_m + M_-m) + Σ_m sin θ_m · Im(M_m - M_-m)
//! Im F = Im M_0 + Σ_m cos θ_m · Im(M_m + M_-m) - Σ_m sin θ_m · Re(M_m - M_-m)
//! ```
//!
//! for `m = 1 ..= ⌊(N/4 - 1)/2⌋`. When `N ≡ 0 (mod 8)` the residue `N/8` pairs
//! with itself and contributes `exp(-jπ/4)·M_{N/8}`, i.e. a `√2/2` term with
//! matrices `Re M + Im M` (real output) and `Im M - Re M` (imaginary output).

mod decompose;
mod echelon;
mod matrix;
mod schedule;

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use num::complex::Complex64;

use crate::error::Result;

pub use decompose::{build_m, chi, congruence_class};
pub use echelon::{echelon_factor, rational_rank, FactoredTernary};
pub use matrix::{
    ExponentMatrix, GaussianIntegerMatrix, IndicatorMatrix, IntMatrix, TernaryMatrix,
};
pub use schedule::{OutputSchedule, RowRef, Side};

/// Scalar weight of a plan term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Twiddle {
    Unit,
    Cosine {
        m: usize,
        order: usize,
    },
    Sine {
        m: usize,
        order: usize,
    },
    /// `√2/2`, the weight of the self-paired residue `N/8`.
    Middle,
}

impl Twiddle {
    pub fn value(&self) -> f64 {
        match *self {
            Twiddle::Unit => 1.0,
            Twiddle::Cosine { m, order } => (TAU * m as f64 / order as f64).cos(),
            Twiddle::Sine { m, order } => (TAU * m as f64 / order as f64).sin(),
            Twiddle::Middle => FRAC_1_SQRT_2,
        }
    }

    /// Unit terms are applied without multiplications.
    pub fn is_unit(&self) -> bool {
        matches!(self, Twiddle::Unit)
    }
}

impl fmt::Display for Twiddle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twiddle::Unit => write!(f, "1"),
            Twiddle::Cosine { m, order } => write!(f, "cos(2*pi*{m}/{order})"),
            Twiddle::Sine { m, order } => write!(f, "sin(2*pi*{m}/{order})"),
            Twiddle::Middle => write!(f, "sqrt(2)/2"),
        }
    }
}

/// A ternary matrix together with its echelon factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMatrix {
    pub label: String,
    pub matrix: TernaryMatrix,
    pub factored: FactoredTernary,
}

impl TermMatrix {
    fn new(label: String, matrix: IntMatrix) -> Result<Self> {
        let matrix = TernaryMatrix::new(matrix)?;
        let factored = echelon_factor(&matrix);
        Ok(Self {
            label,
            matrix,
            factored,
        })
    }
}

/// One scalar and the two matrices it weights: `real` feeds `Re V`, `imag`
/// feeds `Im V` (signs already folded in).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub twiddle: Twiddle,
    pub real: TermMatrix,
    pub imag: TermMatrix,
}

impl Term {
    pub fn side(&self, side: Side) -> &TermMatrix {
        match side {
            Side::Real => &self.real,
            Side::Imag => &self.imag,
        }
    }
}

/// Immutable factored decomposition of the `order`-point DFT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPlan {
    order: usize,
    terms: Vec<Term>,
    schedule: OutputSchedule,
}

impl LaurentPlan {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn schedule(&self) -> &OutputSchedule {
        &self.schedule
    }

    /// False if any matrix needed the distinct-row fallback.
    pub fn is_optimal(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.real.factored.is_optimal() && t.imag.factored.is_optimal())
    }

    /// Human-readable listing: each term's scalar, and for both of its
    /// matrices the rank and the two ternary factors.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LaurentPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plan N={} terms={}", self.order, self.terms.len())?;
        for (i, term) in self.terms.iter().enumerate() {
            writeln!(
                f,
                "term {i}: scalar {} = {}",
                term.twiddle,
                significant(term.twiddle.value(), 10)
            )?;
            for (side, tm) in [("real", &term.real), ("imag", &term.imag)] {
                let fac = &tm.factored;
                writeln!(
                    f,
                    "  {side} output {}: rank {}{}",
                    tm.label,
                    fac.rank(),
                    if fac.is_optimal() {
                        String::new()
                    } else {
                        format!(" (non-optimal, width {})", fac.width())
                    }
                )?;
                writeln!(f, "    reduced rows ({}x{}):", fac.width(), self.order)?;
                write_indented(f, fac.reduced_rows())?;
                writeln!(f, "    combiner ({}x{}):", self.order, fac.width())?;
                write_indented(f, fac.combiner())?;
            }
        }
        Ok(())
    }
}

fn write_indented(f: &mut fmt::Formatter<'_>, m: &IntMatrix) -> fmt::Result {
    if m.rows() == 0 || m.cols() == 0 {
        return writeln!(f, "      (empty)");
    }
    for line in m.to_string().lines() {
        writeln!(f, "      {line}")?;
    }
    Ok(())
}

/// `x` rendered with `digits` significant digits in positional notation.
fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return format!("{:.*}", (digits - 1) as usize, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Builds the plan for `order ≡ 0 (mod 4)`.
pub fn build_plan(order: usize) -> Result<LaurentPlan> {
    decompose::check_order(order)?;
    let mut terms = Vec::new();

    let m0 = build_m(0, order)?;
    terms.push(Term {
        twiddle: Twiddle::Unit,
        real: TermMatrix::new("Re(M0)".into(), m0.re().clone())?,
        imag: TermMatrix::new("Im(M0)".into(), m0.im().clone())?,
    });

    for m in 1..=(order / 4 - 1) / 2 {
        let pos = build_m(m as i64, order)?;
        let neg = build_m(-(m as i64), order)?;
        terms.push(Term {
            twiddle: Twiddle::Cosine { m, order },
            real: TermMatrix::new(format!("Re(M{m} + M-{m})"), pos.re() + neg.re())?,
            imag: TermMatrix::new(format!("Im(M{m} + M-{m})"), pos.im() + neg.im())?,
        });
        terms.push(Term {
            twiddle: Twiddle::Sine { m, order },
            real: TermMatrix::new(format!("Im(M{m} - M-{m})"), pos.im() - neg.im())?,
            imag: TermMatrix::new(format!("-Re(M{m} - M-{m})"), neg.re() - pos.re())?,
        });
    }

    if order.is_multiple_of(8) {
        let m = order / 8;
        let mid = build_m(m as i64, order)?;
        terms.push(Term {
            twiddle: Twiddle::Middle,
            real: TermMatrix::new(format!("Re(M{m}) + Im(M{m})"), mid.re() + mid.im())?,
            imag: TermMatrix::new(format!("Im(M{m}) - Re(M{m})"), mid.im() - mid.re())?,
        });
    }

    let schedule = OutputSchedule::new(order, &terms);
    Ok(LaurentPlan {
        order,
        terms,
        schedule,
    })
}

/// Recombines the factored terms into the complex N×N matrix they represent.
pub fn reconstruct(plan: &LaurentPlan) -> Vec<Vec<Complex64>> {
    let n = plan.order();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for term in plan.terms() {
        let s = term.twiddle.value();
        let re = term.real.factored.product();
        let im = term.imag.factored.product();
        for (k, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry += Complex64::new(s * re.get(k, c) as f64, s * im.get(k, c) as f64);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn dft_matrix(n: usize) -> Vec<Vec<Complex64>> {
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|c| {
                        let t = TAU * ((k * c) % n) as f64 / n as f64;
                        Complex64::new(t.cos(), -t.sin())
                    })
                    .collect()
            })
            .collect()
    }

    fn max_dev(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn sixteen_point_structure() {
        let plan = build_plan(16).unwrap();
        let kinds: Vec<Twiddle> = plan.terms().iter().map(|t| t.twiddle).collect();
        assert_eq!(
            kinds,
            vec![
                Twiddle::Unit,
                Twiddle::Cosine { m: 1, order: 16 },
                Twiddle::Sine { m: 1, order: 16 },
                Twiddle::Middle,
            ]
        );
        assert!((kinds[1].value() - (std::f64::consts::PI / 8.0).cos()).abs() < 1e-15);
        assert!((kinds[2].value() - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-15);
        assert!((kinds[3].value() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(plan.is_optimal());
    }

    #[test]
    fn four_point_plan_is_m0_alone() {
        let plan = build_plan(4).unwrap();
        assert_eq!(plan.terms().len(), 1);
        let r = reconstruct(&plan);
        let f = dft_matrix(4);
        for k in 0..4 {
            for c in 0..4 {
                assert_eq!(r[k][c].re, f[k][c].re.round());
                assert_eq!(r[k][c].im, f[k][c].im.round());
            }
        }
    }

    #[test]
    fn twelve_point_has_no_middle_term() {
        let plan = build_plan(12).unwrap();
        assert_eq!(plan.terms().len(), 3);
        assert!(max_dev(&reconstruct(&plan), &dft_matrix(12)) < 1e-12);
    }

    #[test]
    fn reconstruction_entry() {
        let r = reconstruct(&build_plan(16).unwrap());
        let expected = Complex64::from_polar(1.0, -std::f64::consts::PI / 8.0);
        assert!((r[1][1] - expected).norm() < 1e-12);
        assert!(max_dev(&reconstruct(&build_plan(8).unwrap()), &dft_matrix(8)) < 1e-12);
    }

    #[test]
    fn rejects_bad_lengths() {
        for n in [0usize, 2, 6, 10, 13] {
            let err = build_plan(n).unwrap_err();
            assert_eq!(err, Error::UnsupportedLength(n));
            assert!(err.to_string().contains("N ≡ 0 (mod 4)"));
        }
    }

    #[test]
    fn ternarity_and_exactness_up_to_32() {
        for n in (4..=32).step_by(4) {
            let plan = build_plan(n).unwrap();
            for term in plan.terms() {
                for tm in [&term.real, &term.imag] {
                    assert_eq!(
                        &tm.factored.product(),
                        tm.matrix.matrix(),
                        "{n} {}",
                        tm.label
                    );
                }
            }
        }
    }

    #[test]
    fn dump_lists_scalars_and_ranks() {
        let text = build_plan(16).unwrap().dump();
        assert!(text.contains("scalar cos(2*pi*1/16) = 0.9238795325"));
        assert!(text.contains("scalar sin(2*pi*1/16) = 0.3826834324"));
        assert!(text.contains("scalar sqrt(2)/2 = 0.7071067812"));
        assert!(text.contains("scalar 1 = 1.000000000"));
        assert!(text.contains("real output Re(M2) + Im(M2): rank 2"));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(significant(FRAC_1_SQRT_2, 10), "0.7071067812");
        assert_eq!(significant(1.0, 10), "1.000000000");
        assert_eq!(significant(0.0, 3), "0.00");
    }
}
