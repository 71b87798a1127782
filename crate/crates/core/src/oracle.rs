//! Direct-summation DFT and DHT.
//!
//! These are the O(N²) definitions evaluated in `f64`. They accept any
//! `N ≥ 1` and are the ground truth that every plan-based result is checked
//! against.

use std::f64::consts::TAU;

use num::complex::Complex64;

use crate::error::{Error, Result};

/// Real time-domain samples `v_0 .. v_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal(Vec<f64>);

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("signal is empty".into()));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("sample {i} is not finite")));
        }
        Ok(Self(samples))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self(self.0.iter().map(|x| a * x).collect())
    }
}

impl TryFrom<Vec<f64>> for Signal {
    type Error = Error;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples)
    }
}

/// Complex DFT bins `V_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(pub Vec<Complex64>);

impl Spectrum {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.0
    }
}

/// Real DHT bins `H_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HartleySpectrum(pub Vec<f64>);

impl HartleySpectrum {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bins(&self) -> &[f64] {
        &self.0
    }
}

/// Angle `2π·(kn mod N)/N`. Reducing the product first keeps the argument
/// small so large `kn` does not lose precision.
fn angle(k: usize, n: usize, len: usize) -> f64 {
    TAU * ((k * n) % len) as f64 / len as f64
}

/// `V_k = Σ v_n exp(-j2πkn/N)`.
pub fn dft_direct(v: &Signal) -> Result<Spectrum> {
    let len = v.len();
    if len == 0 {
        return Err(Error::InvalidInput("signal is empty".into()));
    }
    let bins = (0..len)
        .map(|k| {
            v.samples()
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (n, &x)| {
                    let theta = angle(k, n, len);
                    acc + Complex64::new(x * theta.cos(), -x * theta.sin())
                })
        })
        .collect();
    Ok(Spectrum(bins))
}

/// `H_k = Σ v_n cas(2πkn/N)` with `cas = cos + sin`.
pub fn dht_direct(v: &Signal) -> Result<HartleySpectrum> {
    let len = v.len();
    if len == 0 {
        return Err(Error::InvalidInput("signal is empty".into()));
    }
    let bins = (0..len)
        .map(|k| {
            v.samples()
                .iter()
                .enumerate()
                .map(|(n, &x)| {
                    let theta = angle(k, n, len);
                    x * (theta.cos() + theta.sin())
                })
                .sum()
        })
        .collect();
    Ok(HartleySpectrum(bins))
}

/// `H_k = Re(V_k) - Im(V_k)`.
pub fn dht_from_dft(spectrum: &Spectrum) -> HartleySpectrum {
    HartleySpectrum(spectrum.0.iter().map(|c| c.re - c.im).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp() -> Signal {
        Signal::new((0..16).map(|n| (n % 8) as f64).collect()).unwrap()
    }

    #[test]
    fn ramp_dft_matches_table_values() {
        let v = dft_direct(&ramp()).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!((v.0[0] - Complex64::new(56.0, 0.0)).norm() < 1e-9);
        assert!((v.0[1]).norm() < 1e-9);
        assert!((v.0[2] - Complex64::new(-8.0, 8.0 + 8.0 * s2)).norm() < 1e-9);
        assert!((v.0[2].im - 19.3137).abs() < 5e-5);
        assert!((v.0[4] - Complex64::new(-8.0, 8.0)).norm() < 1e-9);
    }

    #[test]
    fn ramp_dht_matches_table_values() {
        let h = dht_direct(&ramp()).unwrap();
        assert!((h.0[0] - 56.0).abs() < 1e-9);
        assert!((h.0[2] + 27.3137).abs() < 5e-5);
        assert!((h.0[14] - 11.3137).abs() < 5e-5);
    }

    #[test]
    fn zeros_and_impulse() {
        let z = dft_direct(&Signal::new(vec![0.0; 16]).unwrap()).unwrap();
        assert!(z.0.iter().all(|c| c.norm() == 0.0));
        let hz = dht_direct(&Signal::new(vec![0.0; 16]).unwrap()).unwrap();
        assert!(hz.0.iter().all(|&h| h == 0.0));

        let mut imp = vec![0.0; 8];
        imp[0] = 1.0;
        let d = dft_direct(&Signal::new(imp).unwrap()).unwrap();
        assert!(d.0.iter().all(|c| *c == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn empty_signal_rejected() {
        assert!(matches!(Signal::new(vec![]), Err(Error::InvalidInput(_))));
        assert!(Signal::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn hartley_from_fourier_table_rows() {
        let spec = Spectrum(vec![
            Complex64::new(-8.0, 19.3137),
            Complex64::new(-8.0, -8.0),
            Complex64::new(3.5, 0.0),
        ]);
        let h = dht_from_dft(&spec);
        assert!((h.0[0] + 27.3137).abs() < 1e-12);
        assert_eq!(h.0[1], 0.0);
        assert_eq!(h.0[2], 3.5);
    }

    fn signal(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
        (1..=max_len).prop_flat_map(|n| proptest::collection::vec(-100.0f64..100.0, n))
    }

    proptest! {
        #[test]
        fn linearity(
            (u, v) in (1usize..=64).prop_flat_map(|n| (
                proptest::collection::vec(-10.0f64..10.0, n),
                proptest::collection::vec(-10.0f64..10.0, n),
            )),
            a in -5.0f64..5.0,
            b in -5.0f64..5.0,
        ) {
            let mix: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
            let lhs = dft_direct(&Signal::new(mix).unwrap()).unwrap();
            let fu = dft_direct(&Signal::new(u).unwrap()).unwrap();
            let fv = dft_direct(&Signal::new(v).unwrap()).unwrap();
            for k in 0..lhs.len() {
                let rhs = fu.0[k] * a + fv.0[k] * b;
                prop_assert!((lhs.0[k] - rhs).norm() < 1e-9);
            }
        }

        #[test]
        fn parseval(v in signal(64)) {
            let n = v.len() as f64;
            let energy: f64 = v.iter().map(|x| x * x).sum();
            let spec = dft_direct(&Signal::new(v).unwrap()).unwrap();
            let spec_energy: f64 = spec.0.iter().map(|c| c.norm_sqr()).sum::<f64>() / n;
            prop_assert!((energy - spec_energy).abs() <= 1e-9 * energy.max(1.0));
        }

        #[test]
        fn conjugate_symmetry(v in signal(64)) {
            let n = v.len();
            let spec = dft_direct(&Signal::new(v).unwrap()).unwrap();
            for k in 1..n {
                prop_assert!((spec.0[n - k] - spec.0[k].conj()).norm() < 1e-9);
            }
        }

        #[test]
        fn hartley_relation(
            v in prop_oneof![Just(4usize), Just(8), Just(12), Just(16)]
                .prop_flat_map(|n| proptest::collection::vec(-100.0f64..100.0, n))
        ) {
            let s = Signal::new(v).unwrap();
            let via_dft = dht_from_dft(&dft_direct(&s).unwrap());
            let direct = dht_direct(&s).unwrap();
            for (a, b) in via_dft.0.iter().zip(&direct.0) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_length_twelve_cross_check() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let v: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = Signal::new(v).unwrap();
        let a = dht_direct(&s).unwrap();
        let b = dht_from_dft(&dft_direct(&s).unwrap());
        for (x, y) in a.0.iter().zip(&b.0) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
