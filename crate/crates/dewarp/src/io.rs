//! Image and mask files. Every write goes to a temporary file in the target
//! directory and is renamed into place, so readers never see partial files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use dewarp_core::{BinaryMask, ProbabilityMask, Raster};
use image::codecs::jpeg::JpegEncoder;
use image::codecs::png::PngEncoder;
use image::{ColorType, DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};

use crate::config::OutputFormat;
use crate::error::{CliError, Result};

pub const JPEG_QUALITY: u8 = 95;

fn decode(path: &Path) -> Result<DynamicImage> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    ImageReader::open(path)
        .map_err(|e| CliError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| CliError::io(path, e))?
        .decode()
        .map_err(|e| CliError::invalid(path, e.to_string()))
}

/// Reads an image as 8-bit gray (grayscale sources) or RGB (everything
/// else). Alpha is dropped.
pub fn read_image(path: &Path) -> Result<Raster> {
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let raster = match img.color() {
        ColorType::L8 | ColorType::La8 | ColorType::L16 | ColorType::La16 => Raster::new(w, h, 1, img.into_luma8().into_raw()),
        _ => Raster::new(w, h, 3, img.into_rgb8().into_raw()),
    };
    raster.map_err(|e| CliError::invalid(path, e.to_string()))
}

/// Reads a single-channel 8-bit mask; level `v` is probability `v / 255`.
pub fn read_mask(path: &Path) -> Result<ProbabilityMask> {
    let img = decode(path)?;
    if img.color() != ColorType::L8 {
        return Err(CliError::invalid(
            path,
            format!("mask must be 8-bit single-channel, found {:?}", img.color()),
        ));
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    ProbabilityMask::from_levels(w, h, &img.into_luma8().into_raw()).map_err(|e| CliError::invalid(path, e.to_string()))
}

/// Writes `path` through a sibling temporary file renamed into place.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut BufWriter<&File>) -> std::io::Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn color_of(raster: &Raster) -> Result<ExtendedColorType> {
    match raster.channels() {
        1 => Ok(ExtendedColorType::L8),
        3 => Ok(ExtendedColorType::Rgb8),
        c => Err(CliError::Internal(format!("cannot encode a {c}-channel raster"))),
    }
}

pub fn encode_image(raster: &Raster, format: OutputFormat, out: &mut impl Write) -> std::result::Result<(), image::ImageError> {
    let (w, h) = (raster.width() as u32, raster.height() as u32);
    let color = match raster.channels() {
        1 => ExtendedColorType::L8,
        _ => ExtendedColorType::Rgb8,
    };
    match format {
        OutputFormat::Png => PngEncoder::new(out).write_image(raster.pixels(), w, h, color),
        OutputFormat::Jpeg => JpegEncoder::new_with_quality(out, JPEG_QUALITY).write_image(raster.pixels(), w, h, color),
    }
}

pub fn write_image(path: &Path, raster: &Raster, format: OutputFormat) -> Result<()> {
    color_of(raster)?;
    let mut encode_err = None;
    write_atomic(path, |w| {
        encode_image(raster, format, w).map_err(|e| {
            encode_err = Some(e);
            std::io::Error::other("encoding failed")
        })
    })
    .map_err(|e| match encode_err.take() {
        Some(source) => CliError::Encode {
            path: path.to_path_buf(),
            source,
        },
        None => e,
    })
}

fn write_levels(path: &Path, width: usize, height: usize, levels: Vec<u8>) -> Result<()> {
    let raster = Raster::new(width, height, 1, levels).map_err(|e| CliError::Internal(e.to_string()))?;
    write_image(path, &raster, OutputFormat::Png)
}

pub fn write_mask(path: &Path, mask: &ProbabilityMask) -> Result<()> {
    write_levels(path, mask.width(), mask.height(), mask.to_levels())
}

/// Writes `{0, 255}` levels.
pub fn write_binary_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    write_levels(path, mask.width(), mask.height(), mask.to_levels())
}
