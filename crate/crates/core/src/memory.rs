//! Functional model of the device memory block.
//!
//! Inputs are 16-bit two's-complement words. The core block (a
//! [`FixedKernel`]) computes the selected transform and each bin is stored
//! as one 32-bit word:
//!
//! * DFT: real raw in bits 31..16, imaginary raw in bits 15..0.
//! * DHT: `H_k` raw in bits 15..0, bits 31..16 zero.

use crate::engine::{FixedConfig, FixedKernel, FixedSpectrum, TransformOutput, TransformSelect};
use crate::error::{Error, Result};
use crate::fixed::{Fixed, FixedContext};
use crate::oracle::Signal;
use crate::plan::LaurentPlan;

/// Number of sample words the device holds.
pub const DEVICE_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryImage {
    pub input_words: Vec<u16>,
    pub select: TransformSelect,
    /// Empty until [`run_device`] fills it.
    pub output_words: Vec<u32>,
    /// Set when the core or the narrowing to 16-bit output halves saturated.
    pub overflow: bool,
}

impl MemoryImage {
    pub fn new(input_words: Vec<u16>, select: TransformSelect) -> Self {
        Self {
            input_words,
            select,
            output_words: Vec::new(),
            overflow: false,
        }
    }

    /// Quantizes a signal into input words.
    pub fn from_signal(
        v: &Signal,
        select: TransformSelect,
        kernel: &FixedKernel<'_>,
    ) -> Result<Self> {
        let words = kernel
            .quantize_signal(v)?
            .iter()
            .map(|x| x.raw() as i16 as u16)
            .collect();
        Ok(Self::new(words, select))
    }
}

/// Raw 16-bit halves recovered from output words. `imag` is empty for DHT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputRaws {
    pub real: Vec<i16>,
    pub imag: Vec<i16>,
}

fn raw16(x: &Fixed) -> Result<u16> {
    i16::try_from(x.raw())
        .map(|r| r as u16)
        .map_err(|_| Error::InvalidInput(format!("raw {} does not fit a 16-bit word", x.raw())))
}

/// Packs a fixed-point transform output into 32-bit words.
pub fn pack_output(output: &TransformOutput) -> Result<Vec<u32>> {
    match output {
        TransformOutput::Fixed(s) => pack_fixed(s),
        _ => Err(Error::InvalidInput(
            "only fixed-point outputs can be packed into device words".into(),
        )),
    }
}

pub fn pack_fixed(s: &FixedSpectrum) -> Result<Vec<u32>> {
    match s.select {
        TransformSelect::Dft => {
            if s.imag.len() != s.real.len() {
                return Err(Error::InvalidInput(
                    "DFT output lacks imaginary parts".into(),
                ));
            }
            s.real
                .iter()
                .zip(&s.imag)
                .map(|(re, im)| Ok(((raw16(re)? as u32) << 16) | raw16(im)? as u32))
                .collect()
        }
        TransformSelect::Dht => s.real.iter().map(|h| Ok(raw16(h)? as u32)).collect(),
    }
}

pub fn unpack_output(words: &[u32], select: TransformSelect) -> OutputRaws {
    match select {
        TransformSelect::Dft => OutputRaws {
            real: words.iter().map(|w| (w >> 16) as u16 as i16).collect(),
            imag: words.iter().map(|&w| w as u16 as i16).collect(),
        },
        TransformSelect::Dht => OutputRaws {
            real: words.iter().map(|&w| w as u16 as i16).collect(),
            imag: Vec::new(),
        },
    }
}

/// [`run_device_with`] in the device configuration.
pub fn run_device(image: &MemoryImage, plan: &LaurentPlan) -> Result<MemoryImage> {
    run_device_with(image, plan, FixedConfig::default())
}

/// Loads the input words, runs the core, narrows each result to the 16-bit
/// input format and stores the packed words.
pub fn run_device_with(
    image: &MemoryImage,
    plan: &LaurentPlan,
    config: FixedConfig,
) -> Result<MemoryImage> {
    if image.input_words.len() != plan.order() {
        return Err(Error::LengthMismatch {
            expected: plan.order(),
            actual: image.input_words.len(),
        });
    }
    if config.input.total_bits() != 16 {
        return Err(Error::InvalidInput(format!(
            "device words are 16 bits, input format is {}",
            config.input
        )));
    }
    let kernel = FixedKernel::new(plan, config)?;
    let inputs = image
        .input_words
        .iter()
        .map(|&w| Fixed::from_raw(w as i16 as i64, config.input))
        .collect::<Result<Vec<_>>>()?;
    let core = kernel.run(&inputs, image.select)?;

    let mut ctx = FixedContext::new(config.rounding);
    let narrow = |xs: &[Fixed], ctx: &mut FixedContext| {
        xs.iter()
            .map(|&x| ctx.convert(x, config.input))
            .collect::<Result<Vec<_>>>()
    };
    let stored = FixedSpectrum {
        select: core.select,
        real: narrow(&core.real, &mut ctx)?,
        imag: narrow(&core.imag, &mut ctx)?,
        overflow: core.overflow || ctx.overflowed(),
    };
    Ok(MemoryImage {
        input_words: image.input_words.clone(),
        select: image.select,
        output_words: pack_fixed(&stored)?,
        overflow: stored.overflow,
    })
}
