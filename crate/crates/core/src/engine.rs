//! Plan execution, DFT/DHT selection and operation counting.
//!
//! Execution follows the plan structure literally: each factored matrix
//! applies its reduced rows to the input (additions only), scales the
//! intermediates by the term's twiddle, and the shared accumulation rows of
//! the [`OutputSchedule`](crate::plan::OutputSchedule) recombine them. The
//! exact and fixed-point paths walk the same schedule through a common
//! datapath trait, so counts and results always describe the same program.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::fixed::{Fixed, FixedContext, QFormat, Rounding};
use crate::oracle::{HartleySpectrum, Signal, Spectrum};
use crate::plan::{LaurentPlan, Side};

/// The single selection bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TransformSelect {
    #[default]
    Dft,
    Dht,
}

/// Word formats and rounding of the fixed-point datapath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedConfig {
    /// Input samples and twiddle constants.
    pub input: QFormat,
    /// Accumulators and outputs.
    pub accumulator: QFormat,
    pub rounding: Rounding,
}

impl FixedConfig {
    /// 16-bit inputs and 32-bit accumulators with `frac_bits` fractional bits.
    pub fn with_frac_bits(frac_bits: u32, rounding: Rounding) -> Result<Self> {
        Ok(Self {
            input: QFormat::new(16, frac_bits)?,
            accumulator: QFormat::new(32, frac_bits)?,
            rounding,
        })
    }
}

impl Default for FixedConfig {
    /// The device configuration: Q8.7 in, Q24.7 accumulate, half-away rounding.
    fn default() -> Self {
        Self {
            input: QFormat::DEVICE_INPUT,
            accumulator: QFormat::DEVICE_ACCUMULATOR,
            rounding: Rounding::HalfAwayFromZero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    #[default]
    Exact,
    Fixed(FixedConfig),
}

/// Fixed-point transform output. For DFT `imag` holds `Im V_k`; for DHT
/// `real` holds `H_k` and `imag` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedSpectrum {
    pub select: TransformSelect,
    pub real: Vec<Fixed>,
    pub imag: Vec<Fixed>,
    /// Sticky saturation flag of the computation that produced this output.
    pub overflow: bool,
}

impl FixedSpectrum {
    pub fn len(&self) -> usize {
        self.real.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real.is_empty()
    }

    /// Complex values of a DFT output.
    pub fn to_spectrum(&self) -> Result<Spectrum> {
        if self.select != TransformSelect::Dft {
            return Err(Error::InvalidInput("not a DFT output".into()));
        }
        Ok(Spectrum(
            self.real
                .iter()
                .zip(&self.imag)
                .map(|(r, i)| Complex64::new(r.to_f64(), i.to_f64()))
                .collect(),
        ))
    }

    /// Real values of a DHT output.
    pub fn to_hartley(&self) -> Result<HartleySpectrum> {
        if self.select != TransformSelect::Dht {
            return Err(Error::InvalidInput("not a DHT output".into()));
        }
        Ok(HartleySpectrum(
            self.real.iter().map(Fixed::to_f64).collect(),
        ))
    }

    /// `H_k = Re V_k - Im V_k` in the same saturating arithmetic the engine uses.
    pub fn dht_from_dft(&self) -> Result<FixedSpectrum> {
        if self.select != TransformSelect::Dft {
            return Err(Error::InvalidInput("not a DFT output".into()));
        }
        let mut ctx = FixedContext::default();
        let real = self
            .real
            .iter()
            .zip(&self.imag)
            .map(|(&r, &i)| ctx.sub(r, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(FixedSpectrum {
            select: TransformSelect::Dht,
            real,
            imag: Vec::new(),
            overflow: self.overflow || ctx.overflowed(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransformOutput {
    Fourier(Spectrum),
    Hartley(HartleySpectrum),
    Fixed(FixedSpectrum),
}

/// Arithmetic used while walking the plan.
trait Datapath {
    type Value: Copy;

    fn zero(&self) -> Self::Value;
    fn add(&mut self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&mut self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&mut self, a: Self::Value) -> Self::Value;
    /// Multiplies by the twiddle of term `term`.
    fn scale(&mut self, term: usize, a: Self::Value) -> Self::Value;

    fn signed(&mut self, a: Self::Value, sign: i64) -> Self::Value {
        if sign < 0 {
            self.neg(a)
        } else {
            a
        }
    }

    /// `Σ c_i x_i` over `c_i ∈ {±1}` with one addition per extra term.
    fn signed_sum(&mut self, items: impl IntoIterator<Item = (Self::Value, i64)>) -> Self::Value {
        let mut iter = items.into_iter();
        let Some((first, sign)) = iter.next() else {
            return self.zero();
        };
        let mut acc = self.signed(first, sign);
        for (x, c) in iter {
            acc = if c < 0 {
                self.sub(acc, x)
            } else {
                self.add(acc, x)
            };
        }
        acc
    }
}

/// Runs the plan on `input`; returns `(Re V, Im V)`.
fn run_plan<D: Datapath>(
    plan: &LaurentPlan,
    dp: &mut D,
    input: &[D::Value],
) -> (Vec<D::Value>, Vec<D::Value>) {
    let schedule = plan.schedule();
    let mut slots = vec![dp.zero(); schedule.slot_count()];
    for (t, term) in plan.terms().iter().enumerate() {
        for side in [Side::Real, Side::Imag] {
            let reduced = term.side(side).factored.reduced_rows();
            let base = schedule.offset(t, side);
            for i in 0..reduced.rows() {
                let u = dp.signed_sum(
                    reduced
                        .row(i)
                        .iter()
                        .zip(input)
                        .filter(|(&c, _)| c != 0)
                        .map(|(&c, &x)| (x, c)),
                );
                slots[base + i] = if term.twiddle.is_unit() {
                    u
                } else {
                    dp.scale(t, u)
                };
            }
        }
    }
    let rows: Vec<D::Value> = schedule
        .rows()
        .iter()
        .map(|row| dp.signed_sum(row.iter().map(|&(s, c)| (slots[s], c))))
        .collect();
    let mut component = |side| -> Vec<D::Value> {
        schedule
            .outputs(side)
            .iter()
            .map(|r| match r {
                Some(r) => dp.signed(rows[r.row], r.sign),
                None => dp.zero(),
            })
            .collect()
    };
    let re = component(Side::Real);
    let im = component(Side::Imag);
    (re, im)
}

struct ExactPath<'a> {
    twiddles: &'a [f64],
}

impl Datapath for ExactPath<'_> {
    type Value = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn add(&mut self, a: f64, b: f64) -> f64 {
        a + b
    }
    fn sub(&mut self, a: f64, b: f64) -> f64 {
        a - b
    }
    fn neg(&mut self, a: f64) -> f64 {
        -a
    }
    fn scale(&mut self, term: usize, a: f64) -> f64 {
        self.twiddles[term] * a
    }
}

struct FixedPath<'a> {
    ctx: FixedContext,
    twiddles: &'a [Fixed],
    accumulator: QFormat,
}

// Operand formats are fixed by construction (accumulator everywhere, input
// format only for twiddles), so the format checks cannot fail here.
impl Datapath for FixedPath<'_> {
    type Value = Fixed;

    fn zero(&self) -> Fixed {
        Fixed::zero(self.accumulator)
    }
    fn add(&mut self, a: Fixed, b: Fixed) -> Fixed {
        self.ctx.add(a, b).expect("accumulator formats agree")
    }
    fn sub(&mut self, a: Fixed, b: Fixed) -> Fixed {
        self.ctx.sub(a, b).expect("accumulator formats agree")
    }
    fn neg(&mut self, a: Fixed) -> Fixed {
        self.ctx.neg(a)
    }
    fn scale(&mut self, term: usize, a: Fixed) -> Fixed {
        self.ctx
            .mul(self.twiddles[term], a)
            .expect("twiddle and accumulator share frac bits")
    }
}

fn check_len(plan: &LaurentPlan, len: usize) -> Result<()> {
    if len != plan.order() {
        return Err(Error::LengthMismatch {
            expected: plan.order(),
            actual: len,
        });
    }
    Ok(())
}

/// Exact (`f64`) execution.
pub fn execute_exact(
    plan: &LaurentPlan,
    v: &Signal,
    select: TransformSelect,
) -> Result<TransformOutput> {
    check_len(plan, v.len())?;
    let twiddles: Vec<f64> = plan.terms().iter().map(|t| t.twiddle.value()).collect();
    let mut dp = ExactPath {
        twiddles: &twiddles,
    };
    let (re, im) = run_plan(plan, &mut dp, v.samples());
    Ok(match select {
        TransformSelect::Dft => TransformOutput::Fourier(Spectrum(
            re.into_iter()
                .zip(im)
                .map(|(r, i)| Complex64::new(r, i))
                .collect(),
        )),
        TransformSelect::Dht => TransformOutput::Hartley(HartleySpectrum(
            re.iter().zip(&im).map(|(r, i)| r - i).collect(),
        )),
    })
}

/// A plan bound to a fixed-point configuration, with its twiddles quantized
/// once into the input format (the device's constant table).
#[derive(Debug, Clone)]
pub struct FixedKernel<'p> {
    plan: &'p LaurentPlan,
    config: FixedConfig,
    twiddles: Vec<Fixed>,
}

impl<'p> FixedKernel<'p> {
    pub fn new(plan: &'p LaurentPlan, config: FixedConfig) -> Result<Self> {
        if config.input.frac_bits() != config.accumulator.frac_bits() {
            return Err(Error::FormatMismatch {
                left: config.input,
                right: config.accumulator,
            });
        }
        let mut ctx = FixedContext::new(config.rounding);
        let twiddles = plan
            .terms()
            .iter()
            .map(|t| ctx.quantize(t.twiddle.value(), config.input))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            plan,
            config,
            twiddles,
        })
    }

    pub fn plan(&self) -> &LaurentPlan {
        self.plan
    }

    pub fn config(&self) -> FixedConfig {
        self.config
    }

    /// Quantized twiddle of each plan term, in term order.
    pub fn twiddles(&self) -> &[Fixed] {
        &self.twiddles
    }

    /// Quantizes samples into the input format. A sample that does not fit
    /// is an error naming its index.
    pub fn quantize_signal(&self, v: &Signal) -> Result<Vec<Fixed>> {
        let fmt = self.config.input;
        v.samples()
            .iter()
            .enumerate()
            .map(|(index, &x)| {
                let mut ctx = FixedContext::new(self.config.rounding);
                let q = ctx.quantize(x, fmt)?;
                if ctx.overflowed() {
                    return Err(Error::SampleOutOfRange {
                        index,
                        value: x,
                        format: fmt,
                    });
                }
                Ok(q)
            })
            .collect()
    }

    /// Runs the core on input-format words.
    pub fn run(&self, input: &[Fixed], select: TransformSelect) -> Result<FixedSpectrum> {
        check_len(self.plan, input.len())?;
        let mut ctx = FixedContext::new(self.config.rounding);
        let widened = input
            .iter()
            .map(|&x| {
                if x.format() != self.config.input {
                    return Err(Error::FormatMismatch {
                        left: x.format(),
                        right: self.config.input,
                    });
                }
                ctx.convert(x, self.config.accumulator)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut dp = FixedPath {
            ctx,
            twiddles: &self.twiddles,
            accumulator: self.config.accumulator,
        };
        let (re, im) = run_plan(self.plan, &mut dp, &widened);
        let (real, imag) = match select {
            TransformSelect::Dft => (re, im),
            TransformSelect::Dht => {
                let h = re.iter().zip(&im).map(|(&r, &i)| dp.sub(r, i)).collect();
                (h, Vec::new())
            }
        };
        Ok(FixedSpectrum {
            select,
            real,
            imag,
            overflow: dp.ctx.overflowed(),
        })
    }

    pub fn run_signal(&self, v: &Signal, select: TransformSelect) -> Result<FixedSpectrum> {
        check_len(self.plan, v.len())?;
        self.run(&self.quantize_signal(v)?, select)
    }
}

/// Runs `plan` on `v` in the requested arithmetic.
pub fn execute(
    plan: &LaurentPlan,
    v: &Signal,
    select: TransformSelect,
    arith: Arithmetic,
) -> Result<TransformOutput> {
    match arith {
        Arithmetic::Exact => execute_exact(plan, v, select),
        Arithmetic::Fixed(cfg) => Ok(TransformOutput::Fixed(
            FixedKernel::new(plan, cfg)?.run_signal(v, select)?,
        )),
    }
}

/// Structural operation count of a plan.
///
/// Only twiddle multiplications are counted; `±1` factors are sign flips.
/// A signed sum of `t` values costs `t - 1` additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCount {
    pub multiplications: usize,
    /// Reduced-row applications plus shared accumulation rows.
    pub additions: usize,
    /// The `N` subtractions `Re V_k - Im V_k` of the DHT output stage.
    pub dht_extra_additions: usize,
    /// What `additions` would be if every output component were accumulated
    /// separately instead of reusing rows that agree up to sign.
    pub additions_without_row_sharing: usize,
}

pub fn count_ops(plan: &LaurentPlan) -> OpCount {
    let mut multiplications = 0;
    let mut reduction = 0;
    for term in plan.terms() {
        for tm in [&term.real, &term.imag] {
            let reduced = tm.factored.reduced_rows();
            if !term.twiddle.is_unit() {
                multiplications += reduced.rows();
            }
            reduction += (0..reduced.rows())
                .map(|r| reduced.row_nnz(r).saturating_sub(1))
                .sum::<usize>();
        }
    }
    let schedule = plan.schedule();
    OpCount {
        multiplications,
        additions: reduction + schedule.additions(),
        dht_extra_additions: plan.order(),
        additions_without_row_sharing: reduction + schedule.unshared_additions(),
    }
}

/// Bins whose exact magnitude is at most this are treated as zero by
/// [`quantization_report`].
pub const NONZERO_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Real,
    Imag,
    Hartley,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinError {
    pub bin: usize,
    pub component: Component,
    pub exact: f64,
    pub fixed: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationReport {
    /// Every compared component with `|exact| > threshold`.
    pub bins: Vec<BinError>,
    pub max_relative_error: f64,
    /// Component attaining the maximum (first one on ties).
    pub worst: Option<BinError>,
    /// Largest absolute deviation over all components, zero bins included.
    pub max_absolute_error: f64,
    pub overflow: bool,
}

/// Relative error of the fixed-point output against exact execution of the
/// same signal, component by component over bins that are nonzero in the
/// exact result.
pub fn quantization_report(
    plan: &LaurentPlan,
    v: &Signal,
    config: FixedConfig,
    select: TransformSelect,
    threshold: f64,
) -> Result<QuantizationReport> {
    let fixed = FixedKernel::new(plan, config)?.run_signal(v, select)?;
    let pairs: Vec<(usize, Component, f64, f64)> = match execute_exact(plan, v, select)? {
        TransformOutput::Fourier(s) => s
            .bins()
            .iter()
            .enumerate()
            .flat_map(|(k, c)| {
                [
                    (k, Component::Real, c.re, fixed.real[k].to_f64()),
                    (k, Component::Imag, c.im, fixed.imag[k].to_f64()),
                ]
            })
            .collect(),
        TransformOutput::Hartley(h) => h
            .bins()
            .iter()
            .enumerate()
            .map(|(k, &x)| (k, Component::Hartley, x, fixed.real[k].to_f64()))
            .collect(),
        TransformOutput::Fixed(_) => unreachable!("exact execution"),
    };

    let max_absolute_error = pairs
        .iter()
        .map(|&(_, _, e, f)| (f - e).abs())
        .fold(0.0, f64::max);
    let bins: Vec<BinError> = pairs
        .into_iter()
        .filter(|&(_, _, exact, _)| exact.abs() > threshold)
        .map(|(bin, component, exact, fixed)| BinError {
            bin,
            component,
            exact,
            fixed,
            relative: (fixed - exact).abs() / exact.abs(),
        })
        .collect();
    let worst = bins
        .iter()
        .copied()
        .fold(None, |best: Option<BinError>, b| match best {
            Some(x) if x.relative >= b.relative => Some(x),
            _ => Some(b),
        });
    Ok(QuantizationReport {
        max_relative_error: worst.map_or(0.0, |w| w.relative),
        worst,
        bins,
        max_absolute_error,
        overflow: fixed.overflow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dft_direct, dht_from_dft};
    use crate::plan::build_plan;

    fn ramp() -> Signal {
        Signal::new((0..16).map(|n| (n % 8) as f64).collect()).unwrap()
    }

    fn fixed_run(select: TransformSelect) -> FixedSpectrum {
        let plan = build_plan(16).unwrap();
        FixedKernel::new(&plan, FixedConfig::default())
            .unwrap()
            .run_signal(&ramp(), select)
            .unwrap()
    }

    #[test]
    fn exact_ramp_matches_oracle() {
        let plan = build_plan(16).unwrap();
        let TransformOutput::Fourier(s) =
            execute(&plan, &ramp(), TransformSelect::Dft, Arithmetic::Exact).unwrap()
        else {
            panic!("expected spectrum");
        };
        let oracle = dft_direct(&ramp()).unwrap();
        for (a, b) in s.bins().iter().zip(oracle.bins()) {
            assert!((a - b).norm() < 1e-9);
        }
        let expected = Complex64::new(-8.0, 8.0 + 8.0 * std::f64::consts::SQRT_2);
        assert!((s.bins()[2] - expected).norm() < 1e-9);
    }

    #[test]
    fn fixed_ramp_bit_exact() {
        let dft = fixed_run(TransformSelect::Dft);
        assert_eq!(dft.real[2].raw(), -1024);
        assert_eq!(dft.imag[2].raw(), 2480);
        assert_eq!(dft.imag[2].to_f64(), 19.375);
        assert!(!dft.overflow);
        let dht = fixed_run(TransformSelect::Dht);
        assert_eq!(dht.real[2].to_f64(), -27.375);
        assert_eq!(dht.real[14].to_f64(), 11.375);
        assert!(dht.imag.is_empty());
    }

    #[test]
    fn fixed_hartley_is_the_subtraction() {
        let dft = fixed_run(TransformSelect::Dft);
        assert_eq!(dft.dht_from_dft().unwrap(), fixed_run(TransformSelect::Dht));
    }

    #[test]
    fn twiddles_quantized_once() {
        let plan = build_plan(16).unwrap();
        let k = FixedKernel::new(&plan, FixedConfig::default()).unwrap();
        let raws: Vec<i32> = k.twiddles().iter().map(Fixed::raw).collect();
        assert_eq!(raws, vec![128, 118, 49, 91]);
    }

    #[test]
    fn zero_input_all_modes() {
        let plan = build_plan(16).unwrap();
        let z = Signal::new(vec![0.0; 16]).unwrap();
        for select in [TransformSelect::Dft, TransformSelect::Dht] {
            match execute(&plan, &z, select, Arithmetic::Exact).unwrap() {
                TransformOutput::Fourier(s) => assert!(s.bins().iter().all(|c| c.norm() == 0.0)),
                TransformOutput::Hartley(h) => assert!(h.bins().iter().all(|&x| x == 0.0)),
                TransformOutput::Fixed(_) => unreachable!(),
            }
            let TransformOutput::Fixed(f) =
                execute(&plan, &z, select, Arithmetic::Fixed(FixedConfig::default())).unwrap()
            else {
                unreachable!()
            };
            assert!(f.real.iter().chain(&f.imag).all(|x| x.raw() == 0));
            assert!(!f.overflow);
        }
    }

    #[test]
    fn length_mismatch() {
        let plan = build_plan(16).unwrap();
        let v = Signal::new(vec![1.0; 12]).unwrap();
        assert_eq!(
            execute(&plan, &v, TransformSelect::Dft, Arithmetic::Exact),
            Err(Error::LengthMismatch {
                expected: 16,
                actual: 12
            })
        );
    }

    #[test]
    fn out_of_range_sample_names_index() {
        let plan = build_plan(4).unwrap();
        let v = Signal::new(vec![0.0, 1.0, 300.0, 2.0]).unwrap();
        let err = execute(
            &plan,
            &v,
            TransformSelect::Dft,
            Arithmetic::Fixed(FixedConfig::default()),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SampleOutOfRange { index: 2, .. }));
    }

    #[test]
    fn saturation_sets_flag() {
        let plan = build_plan(16).unwrap();
        let kernel = FixedKernel::new(
            &plan,
            FixedConfig {
                accumulator: QFormat::new(16, 7).unwrap(),
                ..FixedConfig::default()
            },
        )
        .unwrap();
        let v = Signal::new(vec![200.0; 16]).unwrap();
        let out = kernel.run_signal(&v, TransformSelect::Dft).unwrap();
        assert!(out.overflow);
        assert_eq!(out.real[0].raw(), 32767);
    }

    #[test]
    fn counts() {
        let c16 = count_ops(&build_plan(16).unwrap());
        assert_eq!(c16.multiplications, 12);
        assert_eq!(c16.dht_extra_additions, 16);
        assert!(c16.additions <= c16.additions_without_row_sharing);
        assert_eq!(count_ops(&build_plan(4).unwrap()).multiplications, 0);
        assert_eq!(count_ops(&build_plan(16).unwrap()), c16);
    }

    #[test]
    fn exact_hartley_matches_relation() {
        let plan = build_plan(12).unwrap();
        let v = Signal::new((0..12).map(|i| (i as f64 * 0.7).sin()).collect()).unwrap();
        let TransformOutput::Fourier(s) = execute_exact(&plan, &v, TransformSelect::Dft).unwrap()
        else {
            unreachable!()
        };
        let TransformOutput::Hartley(h) = execute_exact(&plan, &v, TransformSelect::Dht).unwrap()
        else {
            unreachable!()
        };
        for (a, b) in h.bins().iter().zip(dht_from_dft(&s).bins()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn impulse_has_no_quantization_error() {
        let plan = build_plan(16).unwrap();
        let mut v = vec![0.0; 16];
        v[0] = 1.0;
        let r = quantization_report(
            &plan,
            &Signal::new(v).unwrap(),
            FixedConfig::default(),
            TransformSelect::Dft,
            NONZERO_THRESHOLD,
        )
        .unwrap();
        assert_eq!(r.max_relative_error, 0.0);
        assert_eq!(r.max_absolute_error, 0.0);
    }
}
