//! Sample-file parsing and output rendering.

use std::fmt::Write;

use anyhow::{bail, Result};
use laurent_core::{HartleySpectrum, Spectrum, TransformOutput, TransformSelect};

/// Reals separated by commas, whitespace or newlines; `#` starts a comment.
pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            match token.parse::<f64>() {
                Ok(x) if x.is_finite() => out.push(x),
                _ => bail!("line {}: not a number: {token:?}", i + 1),
            }
        }
    }
    Ok(out)
}

fn num(x: f64) -> String {
    // no "-0"
    if x == 0.0 {
        "0".into()
    } else {
        x.to_string()
    }
}

fn complex(re: f64, im: f64) -> String {
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}j", num(re), num(im.abs()))
}

/// `(Re, Im)` pairs for DFT outputs, `H` values for DHT outputs.
enum Values {
    Complex(Vec<(f64, f64)>),
    Real(Vec<f64>),
}

fn values(out: &TransformOutput) -> Values {
    match out {
        TransformOutput::Fourier(s) => {
            Values::Complex(s.bins().iter().map(|c| (c.re, c.im)).collect())
        }
        TransformOutput::Hartley(h) => Values::Real(h.bins().to_vec()),
        TransformOutput::Fixed(f) => match f.select {
            TransformSelect::Dft => Values::Complex(
                f.real
                    .iter()
                    .zip(&f.imag)
                    .map(|(r, i)| (r.to_f64(), i.to_f64()))
                    .collect(),
            ),
            TransformSelect::Dht => Values::Real(f.real.iter().map(|x| x.to_f64()).collect()),
        },
    }
}

pub fn text(out: &TransformOutput) -> String {
    let mut s = String::new();
    match values(out) {
        Values::Complex(v) => v.iter().for_each(|&(r, i)| {
            let _ = writeln!(s, "{}", complex(r, i));
        }),
        Values::Real(v) => v.iter().for_each(|&h| {
            let _ = writeln!(s, "{}", num(h));
        }),
    }
    s
}

pub fn csv(out: &TransformOutput) -> String {
    let mut s = String::new();
    match values(out) {
        Values::Complex(v) => {
            s.push_str("k,re,im\n");
            for (k, &(r, i)) in v.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{}", num(r), num(i));
            }
        }
        Values::Real(v) => {
            s.push_str("k,h\n");
            for (k, &h) in v.iter().enumerate() {
                let _ = writeln!(s, "{k},{}", num(h));
            }
        }
    }
    s
}

pub fn max_deviation_dft(out: &TransformOutput, oracle: &Spectrum) -> f64 {
    match values(out) {
        Values::Complex(v) => v
            .iter()
            .zip(oracle.bins())
            .map(|(&(r, i), c)| (r - c.re).hypot(i - c.im))
            .fold(0.0, f64::max),
        Values::Real(_) => f64::NAN,
    }
}

pub fn max_deviation_dht(out: &TransformOutput, oracle: &HartleySpectrum) -> f64 {
    match values(out) {
        Values::Real(v) => v
            .iter()
            .zip(oracle.bins())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
        Values::Complex(_) => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_in_either_layout() {
        assert_eq!(parse_samples("1\n2.5\n-3\n").unwrap(), vec![1.0, 2.5, -3.0]);
        assert_eq!(
            parse_samples("0,1, 2\n3 # tail\n").unwrap(),
            vec![0.0, 1.0, 2.0, 3.0]
        );
        let err = parse_samples("1\nx\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_samples("nan").is_err());
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(complex(0.0, 0.0), "0+0j");
        assert_eq!(complex(-0.0, -0.0), "0+0j");
        assert_eq!(complex(-8.0, 19.375), "-8+19.375j");
        assert_eq!(complex(-8.0, -3.375), "-8-3.375j");
    }
}
