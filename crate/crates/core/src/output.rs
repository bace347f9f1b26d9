//! File writers for run outputs: CSV probability tables, a packed binary
//! pattern, PPM heatmaps, and JSON reports. All data writers are
//! deterministic (no timestamps), so re-running a config reproduces the
//! files byte for byte.

use crate::driver::XBasisPattern;
use crate::error::DriverError;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DriverError + '_ {
    move |source| DriverError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), DriverError> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), DriverError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| DriverError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })?;
    text.push('\n');
    write_text(path, &text)
}

/// One spin channel as CSV: final-grid indices, momentum coordinates, the
/// complex amplitude, and its probability.
pub fn write_pattern_csv(
    path: &Path,
    pattern: &XBasisPattern,
    spin_up: bool,
) -> Result<(), DriverError> {
    let amps = if spin_up { &pattern.up } else { &pattern.down };
    let mut text = String::with_capacity(amps.len() * 96);
    text.push_str("a,b,k_x,k_y,re,im,prob\n");
    for a in 0..pattern.n_a {
        for b in 0..pattern.n_b {
            let c = amps[a * pattern.n_b + b];
            text.push_str(&format!(
                "{a},{b},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                pattern.k_x_at(a),
                pattern.k_y_at(b),
                c.re,
                c.im,
                c.norm_sqr()
            ));
        }
    }
    write_text(path, &text)
}

/// Both probability planes, row-major little-endian f64, after a one-line
/// text header naming the shape.
pub fn write_pattern_bin(path: &Path, pattern: &XBasisPattern) -> Result<(), DriverError> {
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    let header = format!(
        "planes=2(up,down) rows={} cols={} dtype=f64le order=row-major\n",
        pattern.n_a, pattern.n_b
    );
    file.write_all(header.as_bytes()).map_err(io_err(path))?;
    for amps in [&pattern.up, &pattern.down] {
        for c in amps.iter() {
            file.write_all(&c.norm_sqr().to_le_bytes())
                .map_err(io_err(path))?;
        }
    }
    Ok(())
}

/// Grayscale P6 heatmap of one probability plane; `log_floor` of zero selects
/// linear mapping, otherwise values are mapped as log10 down to
/// `log_floor * max`.
pub fn write_ppm(
    path: &Path,
    values: &[f64],
    rows: usize,
    cols: usize,
    log_floor: f64,
) -> Result<(), DriverError> {
    assert_eq!(values.len(), rows * cols);
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    let mut buf = Vec::with_capacity(rows * cols * 3 + 32);
    buf.extend_from_slice(format!("P6\n{cols} {rows}\n255\n").as_bytes());
    for v in values {
        let level = if max <= 0.0 {
            0.0
        } else if log_floor > 0.0 {
            let floor = log_floor.log10();
            ((v / max).max(log_floor).log10() - floor) / -floor
        } else {
            v / max
        };
        let byte = (level.clamp(0.0, 1.0) * 255.0).round() as u8;
        buf.extend_from_slice(&[byte, byte, byte]);
    }
    std::fs::write(path, buf).map_err(io_err(path))
}

/// A real scalar field (signed) as CSV over an arbitrary rectangular grid.
pub fn write_field_csv(
    path: &Path,
    header: &str,
    coords: impl Fn(usize, usize) -> (f64, f64),
    values: impl Fn(usize, usize) -> f64,
    rows: usize,
    cols: usize,
) -> Result<(), DriverError> {
    let mut text = String::with_capacity(rows * cols * 48);
    text.push_str(header);
    text.push('\n');
    for m in 0..rows {
        for n in 0..cols {
            let (x, y) = coords(m, n);
            text.push_str(&format!(
                "{m},{n},{:.17e},{:.17e},{:.17e}\n",
                x,
                y,
                values(m, n)
            ));
        }
    }
    write_text(path, &text)
}

/// Signed field heatmap: zero maps to mid-gray, extremes to black/white.
pub fn write_signed_ppm(
    path: &Path,
    values: &[f64],
    rows: usize,
    cols: usize,
) -> Result<(), DriverError> {
    assert_eq!(values.len(), rows * cols);
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut buf = Vec::with_capacity(rows * cols * 3 + 32);
    buf.extend_from_slice(format!("P6\n{cols} {rows}\n255\n").as_bytes());
    for v in values {
        let level = if max > 0.0 { 0.5 + 0.5 * v / max } else { 0.5 };
        let byte = (level.clamp(0.0, 1.0) * 255.0).round() as u8;
        buf.extend_from_slice(&[byte, byte, byte]);
    }
    std::fs::write(path, buf).map_err(io_err(path))
}
