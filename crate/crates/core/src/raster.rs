//! Pixel containers: 8-bit images, probability masks and binary masks.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Row-major 8-bit image with one (gray) or three (RGB) interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    pixels: Vec<u8>,
}

/// Rec. 601 luma weights.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer("raster dimensions must be positive"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidBuffer("raster must have 1 or 3 channels"));
        }
        if pixels.len() != width * height * channels {
            return Err(Error::InvalidBuffer("pixel buffer length != width * height * channels"));
        }
        Ok(Self {
            width,
            height,
            channels,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.pixels[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: u8) {
        self.pixels[(y * self.width + x) * self.channels + c] = v;
    }

    /// Per-pixel luminance on the 0..=255 scale (not rounded).
    pub fn luminance(&self) -> Vec<f64> {
        match self.channels {
            1 => self.pixels.iter().map(|&v| f64::from(v)).collect(),
            _ => self
                .pixels
                .chunks_exact(3)
                .map(|px| {
                    LUMA_WEIGHTS[0] * f64::from(px[0])
                        + LUMA_WEIGHTS[1] * f64::from(px[1])
                        + LUMA_WEIGHTS[2] * f64::from(px[2])
                })
                .collect(),
        }
    }

    /// Single-channel copy with luminance rounded to the nearest level.
    pub fn to_gray(&self) -> Raster {
        if self.channels == 1 {
            return self.clone();
        }
        let pixels = self
            .luminance()
            .into_iter()
            .map(|v| libm::round(v).clamp(0.0, 255.0) as u8)
            .collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 1,
            pixels,
        }
    }

    /// Copy of the `w x h` window whose top-left pixel is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Raster> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::InvalidParameter("crop window outside the raster"));
        }
        let c = self.channels;
        let mut pixels = Vec::with_capacity(w * h * c);
        for y in y0..y0 + h {
            let start = (y * self.width + x0) * c;
            pixels.extend_from_slice(&self.pixels[start..start + w * c]);
        }
        Raster::new(w, h, c, pixels)
    }
}

/// Per-pixel document likelihood in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMask {
    width: usize,
    height: usize,
    values: Vec<f32>,
}

impl ProbabilityMask {
    pub fn new(width: usize, height: usize, values: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer("mask dimensions must be positive"));
        }
        if values.len() != width * height {
            return Err(Error::InvalidBuffer("mask buffer length != width * height"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidBuffer("mask values must lie in [0, 1]"));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// 8-bit encoding: level `v` is probability `v / 255`.
    pub fn from_levels(width: usize, height: usize, levels: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            levels.iter().map(|&v| f32::from(v) / 255.0).collect(),
        )
    }

    pub fn to_levels(&self) -> Vec<u8> {
        self.values
            .iter()
            .map(|&v| libm::roundf(v * 255.0).clamp(0.0, 255.0) as u8)
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.values[y * self.width + x]
    }
}

/// Foreground/background mask holding exactly 0 or 1 per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidBuffer("mask dimensions must be positive"));
        }
        if bits.len() != width * height {
            return Err(Error::InvalidBuffer("mask buffer length != width * height"));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBuffer("binary mask values must be 0 or 1"));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0; width * height])
    }

    /// Builds a mask from a predicate over pixel coordinates.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(u8::from(f(x, y)));
            }
        }
        Self::new(width, height, bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x] != 0
    }

    /// Like [`get`](Self::get) but treats everything outside the mask as background.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize] != 0
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        self.bits[y * self.width + x] = u8::from(on);
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// `{0, 255}` levels for 8-bit export.
    pub fn to_levels(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| b * 255).collect()
    }
}
