//! Two's-complement Q-format arithmetic.
//!
//! A [`Fixed`] is a raw integer tagged with its [`QFormat`]; the represented
//! value is `raw / 2^frac_bits`. All narrowing saturates at the format bounds
//! and raises the sticky overflow flag of the [`FixedContext`] that performed
//! the operation, so independent computations never share a flag.

use std::fmt;

use crate::error::{Error, Result};

/// Word width and fractional width of a fixed-point format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QFormat {
    total_bits: u32,
    frac_bits: u32,
}

impl QFormat {
    /// 16-bit words with 7 fractional bits (Q8.7), the device's input format.
    pub const DEVICE_INPUT: QFormat = QFormat {
        total_bits: 16,
        frac_bits: 7,
    };

    /// 32-bit accumulator with 7 fractional bits (Q24.7).
    pub const DEVICE_ACCUMULATOR: QFormat = QFormat {
        total_bits: 32,
        frac_bits: 7,
    };

    pub fn new(total_bits: u32, frac_bits: u32) -> Result<Self> {
        if !(1 <= frac_bits && frac_bits < total_bits && total_bits <= 32) {
            return Err(Error::InvalidInput(format!(
                "Q-format needs 1 <= frac_bits < total_bits <= 32, got total {total_bits} frac {frac_bits}"
            )));
        }
        Ok(Self {
            total_bits,
            frac_bits,
        })
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn min_raw(&self) -> i64 {
        -(1i64 << (self.total_bits - 1))
    }

    pub fn max_raw(&self) -> i64 {
        (1i64 << (self.total_bits - 1)) - 1
    }

    /// Value of one unit in the last place.
    pub fn ulp(&self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    pub fn min_value(&self) -> f64 {
        self.min_raw() as f64 * self.ulp()
    }

    pub fn max_value(&self) -> f64 {
        self.max_raw() as f64 * self.ulp()
    }

    fn clamp(&self, raw: i128) -> (i32, bool) {
        if raw > self.max_raw() as i128 {
            (self.max_raw() as i32, true)
        } else if raw < self.min_raw() as i128 {
            (self.min_raw() as i32, true)
        } else {
            (raw as i32, false)
        }
    }
}

impl Default for QFormat {
    fn default() -> Self {
        Self::DEVICE_INPUT
    }
}

impl fmt::Display for QFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q{}.{}",
            self.total_bits - 1 - self.frac_bits,
            self.frac_bits
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Ties go away from zero: 90.5 → 91, -90.5 → -91.
    #[default]
    HalfAwayFromZero,
    /// Ties go to the even neighbour.
    HalfEven,
    /// Drop the low bits (round toward −∞), as a plain arithmetic shift does.
    Truncate,
}

impl Rounding {
    fn round_f64(self, x: f64) -> f64 {
        match self {
            Rounding::HalfAwayFromZero => x.round(),
            Rounding::HalfEven => x.round_ties_even(),
            Rounding::Truncate => x.floor(),
        }
    }

    /// `num / 2^shift` rounded under this mode, exact in integers.
    fn shift_right(self, num: i128, shift: u32) -> i128 {
        if shift == 0 {
            return num;
        }
        let floor = num >> shift;
        let rem = num - (floor << shift);
        let half = 1i128 << (shift - 1);
        match self {
            Rounding::Truncate => floor,
            Rounding::HalfAwayFromZero => {
                if rem > half || (rem == half && num >= 0) {
                    floor + 1
                } else {
                    floor
                }
            }
            Rounding::HalfEven => {
                if rem > half || (rem == half && floor & 1 == 1) {
                    floor + 1
                } else {
                    floor
                }
            }
        }
    }
}

/// A fixed-point number: `raw / 2^frac_bits` in `format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fixed {
    raw: i32,
    format: QFormat,
}

impl Fixed {
    /// Wraps a raw integer, rejecting values outside the format range.
    pub fn from_raw(raw: i64, format: QFormat) -> Result<Self> {
        if raw < format.min_raw() || raw > format.max_raw() {
            return Err(Error::InvalidInput(format!(
                "raw value {raw} does not fit {format}"
            )));
        }
        Ok(Self {
            raw: raw as i32,
            format,
        })
    }

    pub fn zero(format: QFormat) -> Self {
        Self { raw: 0, format }
    }

    pub fn raw(&self) -> i32 {
        self.raw
    }

    pub fn format(&self) -> QFormat {
        self.format
    }

    pub fn to_f64(&self) -> f64 {
        self.raw as f64 * self.format.ulp()
    }

    /// Two's-complement hex of the raw word, `total_bits / 4` digits rounded up.
    pub fn to_hex(&self) -> String {
        let bits = self.format.total_bits;
        let mask = if bits == 32 {
            u32::MAX
        } else {
            (1u32 << bits) - 1
        };
        let digits = bits.div_ceil(4) as usize;
        format!("{:0digits$X}", (self.raw as u32) & mask)
    }

    /// Inverse of [`Fixed::to_hex`]: sign-extends a `total_bits`-wide word.
    pub fn from_hex(text: &str, format: QFormat) -> Result<Self> {
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .unwrap_or(text);
        let word = u32::from_str_radix(digits, 16)
            .map_err(|e| Error::InvalidInput(format!("bad hex word {text:?}: {e}")))?;
        let bits = format.total_bits;
        if bits < 32 && word >> bits != 0 {
            return Err(Error::InvalidInput(format!(
                "hex word {text:?} is wider than {bits} bits"
            )));
        }
        let shift = 32 - bits;
        let raw = ((word << shift) as i32) >> shift;
        Ok(Self { raw, format })
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Arithmetic unit carrying a rounding mode and a sticky overflow flag.
#[derive(Debug, Clone, Default)]
pub struct FixedContext {
    rounding: Rounding,
    overflow: bool,
}

impl FixedContext {
    pub fn new(rounding: Rounding) -> Self {
        Self {
            rounding,
            overflow: false,
        }
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    /// True once any operation in this context has saturated.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn clear_overflow(&mut self) {
        self.overflow = false;
    }

    fn narrow(&mut self, raw: i128, format: QFormat) -> Fixed {
        let (raw, saturated) = format.clamp(raw);
        self.overflow |= saturated;
        Fixed { raw, format }
    }

    /// Rounds `x · 2^frac_bits` to an integer and saturates into `format`.
    pub fn quantize(&mut self, x: f64, format: QFormat) -> Result<Fixed> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("cannot quantize {x}")));
        }
        let scaled = self
            .rounding
            .round_f64(x * (format.frac_bits as f64).exp2());
        let raw = if scaled >= i64::MAX as f64 {
            i64::MAX
        } else if scaled <= i64::MIN as f64 {
            i64::MIN
        } else {
            scaled as i64
        };
        Ok(self.narrow(raw as i128, format))
    }

    pub fn add(&mut self, a: Fixed, b: Fixed) -> Result<Fixed> {
        same_format(a, b)?;
        Ok(self.narrow(a.raw as i128 + b.raw as i128, a.format))
    }

    pub fn sub(&mut self, a: Fixed, b: Fixed) -> Result<Fixed> {
        same_format(a, b)?;
        Ok(self.narrow(a.raw as i128 - b.raw as i128, a.format))
    }

    /// Negation; only the most negative raw saturates.
    pub fn neg(&mut self, a: Fixed) -> Fixed {
        self.narrow(-(a.raw as i128), a.format)
    }

    /// Product with a double-width intermediate and a single rounding step.
    ///
    /// Both operands must share `frac_bits`; the result takes the wider of the
    /// two word widths, so a 16-bit constant times a 32-bit accumulator stays
    /// in the accumulator format.
    pub fn mul(&mut self, a: Fixed, b: Fixed) -> Result<Fixed> {
        if a.format.frac_bits != b.format.frac_bits {
            return Err(Error::FormatMismatch {
                left: a.format,
                right: b.format,
            });
        }
        let format = if a.format.total_bits >= b.format.total_bits {
            a.format
        } else {
            b.format
        };
        let product = a.raw as i128 * b.raw as i128;
        let raw = self.rounding.shift_right(product, format.frac_bits);
        Ok(self.narrow(raw, format))
    }

    /// Re-expresses `a` in `format` (same fractional width), saturating.
    pub fn convert(&mut self, a: Fixed, format: QFormat) -> Result<Fixed> {
        if a.format.frac_bits != format.frac_bits {
            return Err(Error::FormatMismatch {
                left: a.format,
                right: format,
            });
        }
        Ok(self.narrow(a.raw as i128, format))
    }
}

fn same_format(a: Fixed, b: Fixed) -> Result<()> {
    if a.format != b.format {
        return Err(Error::FormatMismatch {
            left: a.format,
            right: b.format,
        });
    }
    Ok(())
}
