use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// One line of a grid CSV.
#[derive(Debug, Clone, Copy)]
pub struct GridCsvRow {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub flag: &'static str,
    pub provenance: &'static str,
}

pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    Ok(())
}

/// Writes `<x_name>,<y_name>,value,flag,provenance` rows.
pub fn write_grid_csv(path: &Path, x_name: &str, y_name: &str, rows: &[GridCsvRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record([x_name, y_name, "value", "flag", "provenance"])?;
    for r in rows {
        w.write_record([
            fmt(r.x).as_str(),
            fmt(r.y).as_str(),
            fmt(r.value).as_str(),
            r.flag,
            r.provenance,
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a CSV with the given header and numeric columns.
pub(crate) fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    ensure_parent(path)?;
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    ensure_parent(path)?;
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Renders row-major `values` (first row at the bottom) with the viridis
/// table mapped onto `[lo, hi]`.
#[cfg(feature = "raster")]
pub(crate) fn write_png(
    path: &Path,
    nx: usize,
    ny: usize,
    values: &[f64],
    lo: f64,
    hi: f64,
) -> Result<()> {
    use super::colormap::TABLE;

    ensure_parent(path)?;
    let scale = (384 / nx.max(ny)).max(1) as u32;
    let (w, h) = (nx as u32 * scale, ny as u32 * scale);
    let img = image::RgbImage::from_fn(w, h, |px, py| {
        let ix = (px / scale) as usize;
        let iy = ny - 1 - (py / scale) as usize;
        let v = values[iy * nx + ix];
        let s = if v.is_nan() { 1.0 } else { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) };
        image::Rgb(TABLE[(s * 255.0).round() as usize])
    });
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))
}

#[cfg(not(feature = "raster"))]
pub(crate) fn write_png(
    _path: &Path,
    _nx: usize,
    _ny: usize,
    _values: &[f64],
    _lo: f64,
    _hi: f64,
) -> Result<()> {
    Err(Error::InvalidParameter("built without PNG support (feature `raster`)".into()))
}
