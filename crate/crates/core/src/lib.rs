//! Matrix Laurent-series decomposition of the discrete Fourier transform.
//!
//! For blocklengths `N ≡ 0 (mod 4)` the DFT matrix splits into a handful of
//! Gaussian-integer matrices weighted by `cos(2πm/N)`, `sin(2πm/N)` and, when
//! `N ≡ 0 (mod 8)`, `√2/2`. Every weighted matrix is ternary and is factored
//! through its row-echelon form, so a twiddle multiplies only `rank` values.
//!
//! The crate is organised as:
//!
//! * [`oracle`]: direct O(N²) DFT/DHT used as ground truth.
//! * [`plan`]: indicator matrices, congruence classes, `M_m` and the factored plan.
//! * [`fixed`]: bit-exact Q-format arithmetic with saturation.
//! * [`engine`]: plan execution (exact or fixed-point), DFT/DHT selection, op counts.
//! * [`memory`]: the device memory model and output-word packing.
//! * [`testbench`]: text interchange files for stimulus and output words.

pub mod engine;
pub mod error;
pub mod fixed;
pub mod memory;
pub mod oracle;
pub mod plan;
pub mod testbench;

pub use engine::{
    count_ops, execute, quantization_report, Arithmetic, FixedConfig, FixedKernel, FixedSpectrum,
    OpCount, QuantizationReport, TransformOutput, TransformSelect,
};
pub use error::{Error, Result};
pub use fixed::{Fixed, FixedContext, QFormat, Rounding};
pub use memory::{
    pack_fixed, pack_output, run_device, run_device_with, unpack_output, MemoryImage, OutputRaws,
};
pub use oracle::{dft_direct, dht_direct, dht_from_dft, HartleySpectrum, Signal, Spectrum};
pub use plan::{build_plan, reconstruct, LaurentPlan};
