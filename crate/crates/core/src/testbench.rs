//! Text interchange files for comparing against RTL simulation dumps.
//!
//! Stimulus file:
//!
//! ```text
//! SELECT DFT
//! 0x0000
//! 0x0080
//! ...
//! ```
//!
//! one 16-bit hex word per line after the header. Output file: one 32-bit
//! word per line as `0x%08X`. Blank lines and `#` comments are skipped; the
//! `0x` prefix is optional when reading.

use std::fmt::Write;

use crate::engine::TransformSelect;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub select: TransformSelect,
    pub words: Vec<u16>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_word(line: usize, text: &str, bits: u32) -> Result<u32> {
    let digits = text
        .strip_prefix("0x")
        .or_else(|| text.strip_prefix("0X"))
        .unwrap_or(text);
    let bad = |message: String| Error::Parse { line, message };
    if digits.is_empty() || digits.len() > (bits / 4) as usize {
        return Err(bad(format!("expected a {bits}-bit hex word, got {text:?}")));
    }
    u32::from_str_radix(digits, 16).map_err(|e| bad(format!("bad hex word {text:?}: {e}")))
}

pub fn parse_select(text: &str) -> Option<TransformSelect> {
    match text.to_ascii_uppercase().as_str() {
        "DFT" => Some(TransformSelect::Dft),
        "DHT" => Some(TransformSelect::Dht),
        _ => None,
    }
}

pub fn parse_stimulus(text: &str) -> Result<Stimulus> {
    let mut lines = content_lines(text);
    let Some((line, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            message: "empty stimulus".into(),
        });
    };
    let select = header
        .strip_prefix("SELECT")
        .map(str::trim)
        .and_then(parse_select)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `SELECT DFT` or `SELECT DHT`, got {header:?}"),
        })?;
    let words = lines
        .map(|(line, l)| parse_word(line, l, 16).map(|w| w as u16))
        .collect::<Result<Vec<_>>>()?;
    if words.is_empty() {
        return Err(Error::Parse {
            line,
            message: "stimulus has no input words".into(),
        });
    }
    Ok(Stimulus { select, words })
}

pub fn format_stimulus(stimulus: &Stimulus) -> String {
    let mut out = match stimulus.select {
        TransformSelect::Dft => "SELECT DFT\n".to_string(),
        TransformSelect::Dht => "SELECT DHT\n".to_string(),
    };
    for w in &stimulus.words {
        let _ = writeln!(out, "0x{w:04X}");
    }
    out
}

pub fn parse_output_words(text: &str) -> Result<Vec<u32>> {
    content_lines(text)
        .map(|(line, l)| parse_word(line, l, 32))
        .collect()
}

pub fn format_output_words(words: &[u32]) -> String {
    let mut out = String::with_capacity(words.len() * 11);
    for w in words {
        let _ = writeln!(out, "0x{w:08X}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stimulus_round_trip() {
        let s = Stimulus {
            select: TransformSelect::Dht,
            words: vec![0, 0x80, 0xFC00],
        };
        let text = format_stimulus(&s);
        assert_eq!(text, "SELECT DHT\n0x0000\n0x0080\n0xFC00\n");
        assert_eq!(parse_stimulus(&text).unwrap(), s);
    }

    #[test]
    fn stimulus_tolerates_comments_and_bare_hex() {
        let s = parse_stimulus("# ramp\nSELECT dft\n\n0080\n0x0100\n").unwrap();
        assert_eq!(s.select, TransformSelect::Dft);
        assert_eq!(s.words, vec![0x80, 0x100]);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        assert_eq!(
            parse_stimulus("SELECT DFT\n0x0000\n0xZZ\n").unwrap_err(),
            Error::Parse {
                line: 3,
                message: "bad hex word \"0xZZ\": invalid digit found in string".into()
            }
        );
        assert!(matches!(
            parse_stimulus("SELECT DFT\n0x12345\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_stimulus("SELECT FFT\n0x0000\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_stimulus("").is_err());
        assert!(parse_stimulus("SELECT DFT\n").is_err());
    }

    #[test]
    fn output_words() {
        let text = format_output_words(&[0xFC00_09B0, 0x0000_F250]);
        assert_eq!(text, "0xFC0009B0\n0x0000F250\n");
        assert_eq!(
            parse_output_words(&text).unwrap(),
            vec![0xFC00_09B0, 0x0000_F250]
        );
    }
}
