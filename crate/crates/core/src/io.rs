//! Reading signals and images: JSON signals, plain (`P2`) and raw (`P5`)
//! PGM images, and CSV images of real values.

use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::action::fourier::Image;
use crate::action::Signal;
use crate::error::{Error, Result};

/// A loaded input: either a signal already in group coordinates or a
/// spatial-domain image.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Signal(Signal),
    Image(Image),
}

/// Dispatches on the file extension: `.json`, `.pgm` or `.csv`.
pub fn load_input(path: &Path) -> Result<Input> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "json" => Ok(Input::Signal(parse_signal_json(&std::fs::read_to_string(path)?)?)),
        "pgm" => Ok(Input::Image(parse_pgm(&std::fs::read(path)?)?)),
        "csv" => Ok(Input::Image(parse_csv_image(&std::fs::read_to_string(path)?)?)),
        other => Err(Error::Parse(format!(
            "unsupported input extension {other:?} for {}",
            path.display()
        ))),
    }
}

/// Accepts `[[re, im], …]`, `[x, …]` of reals, or an object whose `values`
/// or `signal` field holds either form.
pub fn parse_signal_json(text: &str) -> Result<Signal> {
    let v: Value = serde_json::from_str(text)?;
    signal_from_value(&v)
}

fn signal_from_value(v: &Value) -> Result<Signal> {
    match v {
        Value::Array(items) => {
            let entries = items
                .iter()
                .enumerate()
                .map(|(k, item)| complex_from_value(item).ok_or_else(|| Error::Parse(format!("entry {k} is not a number or [re, im] pair"))))
                .collect::<Result<Vec<_>>>()?;
            Signal::new(entries)
        }
        Value::Object(map) => match map.get("values").or_else(|| map.get("signal")) {
            Some(inner) => signal_from_value(inner),
            None => Err(Error::Parse("object has no \"values\" or \"signal\" field".into())),
        },
        _ => Err(Error::Parse("signal must be an array".into())),
    }
}

fn complex_from_value(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?)),
        _ => None,
    }
}

/// Rows of comma-separated reals; blank lines are skipped.
pub fn parse_csv_image(text: &str) -> Result<Image> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "line {} has {} values, expected {}",
                    i + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    Image::from_real(rows.len(), cols, &rows.concat())
}

/// Binary (`P5`, 8 or 16 bit) or ASCII (`P2`) PGM.
pub fn parse_pgm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos).ok_or_else(|| Error::Parse("empty PGM".into()))?;
    let binary = match magic.as_str() {
        "P2" => false,
        "P5" => true,
        other => return Err(Error::Parse(format!("unsupported PGM magic {other:?}"))),
    };
    let mut header = [0usize; 3];
    for h in header.iter_mut() {
        let tok = next_token(bytes, &mut pos).ok_or_else(|| Error::Parse("truncated PGM header".into()))?;
        *h = tok.parse().map_err(|_| Error::Parse(format!("bad PGM header value {tok:?}")))?;
    }
    let [width, height, maxval] = header;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Parse(format!("PGM maxval {maxval} out of range")));
    }
    let count = width * height;
    let values: Vec<f64> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = pos + 1;
        let width_bytes = if maxval < 256 { 1 } else { 2 };
        let raster = bytes
            .get(start..start + count * width_bytes)
            .ok_or_else(|| Error::Parse("truncated PGM raster".into()))?;
        if width_bytes == 1 {
            raster.iter().map(|&b| f64::from(b)).collect()
        } else {
            raster.chunks_exact(2).map(|c| f64::from(u16::from_be_bytes([c[0], c[1]]))).collect()
        }
    } else {
        (0..count)
            .map(|_| {
                next_token(bytes, &mut pos)
                    .and_then(|t| t.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse("truncated or invalid PGM raster".into()))
            })
            .collect::<Result<_>>()?
    };
    Image::from_real(height, width, &values)
}

/// Next whitespace-delimited token, skipping `#` comments.
fn next_token(bytes: &[u8], pos: &mut usize) -> Option<String> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

/// ASCII PGM of a real image, clamped to `[0, maxval]` and rounded.
pub fn write_pgm_ascii(image: &Image, maxval: u16) -> String {
    let mut out = format!("P2\n{} {}\n{}\n", image.cols(), image.rows(), maxval);
    for r in 0..image.rows() {
        let line: Vec<String> = (0..image.cols())
            .map(|c| (image.get(r, c).re.round().clamp(0.0, f64::from(maxval)) as u16).to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let a = parse_signal_json("[[1, 2], [3.5, -1]]").unwrap();
        assert_eq!(a.as_slice(), &[Complex64::new(1.0, 2.0), Complex64::new(3.5, -1.0)]);
        let b = parse_signal_json("[1, 0.5]").unwrap();
        assert_eq!(b[1], Complex64::new(0.5, 0.0));
        let c = parse_signal_json(r#"{"values": [[0, 1]]}"#).unwrap();
        assert_eq!(c[0], Complex64::new(0.0, 1.0));
        assert!(parse_signal_json(r#"["x"]"#).is_err());
        assert!(parse_signal_json("{").is_err());
    }

    #[test]
    fn ascii_pgm_with_comment() {
        let img = parse_pgm(b"P2\n# note\n3 2\n255\n1 2 3\n4 5 6\n").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 3));
        assert_eq!(img.get(1, 0).re, 4.0);
        let back = parse_pgm(write_pgm_ascii(&img, 255).as_bytes()).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn binary_pgm() {
        let mut bytes = b"P5 2 2 255\n".to_vec();
        bytes.extend_from_slice(&[0, 10, 200, 255]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!(img.get(1, 1).re, 255.0);
        let mut wide = b"P5 1 1 1000\n".to_vec();
        wide.extend_from_slice(&[0x03, 0xe8]);
        assert_eq!(parse_pgm(&wide).unwrap().get(0, 0).re, 1000.0);
        assert!(parse_pgm(b"P5 2 2 255\n\x01").is_err());
        assert!(parse_pgm(b"P6 1 1 255\n\x01").is_err());
    }

    #[test]
    fn csv_image() {
        let img = parse_csv_image("1,2,3\n\n4,5,6\n").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 3));
        assert!(parse_csv_image("1,2\n3\n").is_err());
        assert!(parse_csv_image("1,a\n").is_err());
    }
}
