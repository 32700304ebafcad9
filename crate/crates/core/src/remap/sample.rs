use alloc::vec;

use super::kernel::catmull_rom_weights;
use super::DisplacementField;
use crate::{Error, Raster, Result};

/// Tap positions and weights along one axis, edges replicated.
#[inline]
fn taps(pos: f64, len: usize) -> ([usize; 4], [f64; 4]) {
    let base = libm::floor(pos);
    let w = catmull_rom_weights(pos - base);
    let last = len as i64 - 1;
    let b = base as i64;
    let ix = [b - 1, b, b + 1, b + 2].map(|k| k.clamp(0, last) as usize);
    (ix, w)
}

/// Bicubic sample of channel-interleaved pixels at `(x, y)`, written to
/// `out` (one value per channel, unrounded). Positions outside the raster
/// replicate the nearest edge pixel.
pub fn bicubic_sample(src: &Raster, x: f64, y: f64, out: &mut [f64]) {
    let (w, h, c) = (src.width(), src.height(), src.channels());
    let (x, y) = (sanitize(x, w), sanitize(y, h));
    let (xi, wx) = taps(x, w);
    let (yi, wy) = taps(y, h);
    let px = src.pixels();
    out[..c].iter_mut().for_each(|v| *v = 0.0);
    for (&row, &wr) in yi.iter().zip(&wy) {
        if wr == 0.0 {
            continue;
        }
        let base = row * w * c;
        for (&col, &wc) in xi.iter().zip(&wx) {
            let wgt = wr * wc;
            if wgt == 0.0 {
                continue;
            }
            let at = base + col * c;
            for (k, o) in out[..c].iter_mut().enumerate() {
                *o += wgt * f64::from(px[at + k]);
            }
        }
    }
}

/// Non-finite and far out-of-range positions collapse onto the edge.
#[inline]
fn sanitize(v: f64, len: usize) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(-2.0, len as f64 + 2.0)
    }
}

#[inline]
fn to_level(v: f64) -> u8 {
    libm::round(v).clamp(0.0, 255.0) as u8
}

/// Backward remap: output pixel `(x, y)` takes the source value at
/// `(x + dx, y + dy)`, rounded and clamped to `0..=255`.
pub fn remap_image(src: &Raster, field: &DisplacementField) -> Result<Raster> {
    let c = src.channels();
    let mut pixels = vec![0u8; field.width * field.height * c];
    remap_rows(src, field, 0, &mut pixels)?;
    Raster::new(field.width, field.height, c, pixels)
}

/// Remaps the output rows starting at `first_row` into `out`, which holds a
/// whole number of output rows. Lets callers split the work by rows.
pub fn remap_rows(src: &Raster, field: &DisplacementField, first_row: usize, out: &mut [u8]) -> Result<()> {
    let c = src.channels();
    let stride = field.width * c;
    if out.len() % stride != 0 || first_row + out.len() / stride > field.height {
        return Err(Error::InvalidBuffer("output rows do not fit the displacement field"));
    }
    let mut acc = [0.0f64; 3];
    for (r, row) in out.chunks_exact_mut(stride).enumerate() {
        let y = first_row + r;
        for x in 0..field.width {
            let s = field.source(x, y);
            bicubic_sample(src, s.x, s.y, &mut acc);
            for k in 0..c {
                row[x * c + k] = to_level(acc[k]);
            }
        }
    }
    Ok(())
}

/// Bicubic resize with pixel-centre alignment.
pub fn resize_bicubic(src: &Raster, width: usize, height: usize) -> Result<Raster> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter("resize target must be non-empty"));
    }
    if (width, height) == src.dimensions() {
        return Ok(src.clone());
    }
    let c = src.channels();
    let sx = src.width() as f64 / width as f64;
    let sy = src.height() as f64 / height as f64;
    let mut pixels = vec![0u8; width * height * c];
    let mut acc = [0.0f64; 3];
    for y in 0..height {
        let fy = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..width {
            let fx = (x as f64 + 0.5) * sx - 0.5;
            bicubic_sample(src, fx, fy, &mut acc);
            for k in 0..c {
                pixels[(y * width + x) * c + k] = to_level(acc[k]);
            }
        }
    }
    Raster::new(width, height, c, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WarpGrid;
    use crate::remap::{build_displacement_field, UniformGrid};
    use crate::Point;
    use alloc::vec::Vec;

    fn pattern(w: usize, h: usize, c: usize) -> Raster {
        let px = (0..w * h * c).map(|k| ((k * 37 + (k / c) * 11) % 251) as u8).collect();
        Raster::new(w, h, c, px).unwrap()
    }

    #[test]
    fn zero_field_is_a_crop() {
        let src = pattern(40, 30, 3);
        let out = remap_image(&src, &DisplacementField::identity(25, 20)).unwrap();
        assert_eq!(out, src.crop(0, 0, 25, 20).unwrap());
    }

    #[test]
    fn integer_shift_is_bit_exact() {
        let src = pattern(50, 20, 1);
        let out = remap_image(&src, &DisplacementField::constant(40, 20, 3.0, 0.0)).unwrap();
        for y in 0..20 {
            for x in 0..40 {
                assert_eq!(out.get(x, y, 0), src.get(x + 3, y, 0));
            }
        }
    }

    #[test]
    fn edges_replicate() {
        let src = pattern(8, 8, 1);
        let mut acc = [0.0; 3];
        bicubic_sample(&src, -5.0, 3.0, &mut acc);
        assert_eq!(acc[0], f64::from(src.get(0, 3, 0)));
        bicubic_sample(&src, 4.0, 100.0, &mut acc);
        assert_eq!(acc[0], f64::from(src.get(4, 7, 0)));
        bicubic_sample(&src, f64::NAN, 2.0, &mut acc);
        assert!(acc[0].is_finite());
    }

    #[test]
    fn constant_image_stays_constant() {
        let src = Raster::filled(30, 30, 3, 200).unwrap();
        let out = remap_image(&src, &DisplacementField::constant(30, 30, 0.37, -1.61)).unwrap();
        assert!(out.pixels().iter().all(|&v| v == 200));
    }

    #[test]
    fn row_ranges_compose() {
        let src = pattern(30, 30, 3);
        let field = DisplacementField::constant(20, 10, 0.5, 0.25);
        let whole = remap_image(&src, &field).unwrap();
        let stride = 20 * 3;
        let mut parts = vec![0u8; 10 * stride];
        let (a, b) = parts.split_at_mut(4 * stride);
        remap_rows(&src, &field, 0, a).unwrap();
        remap_rows(&src, &field, 4, b).unwrap();
        assert_eq!(whole.pixels(), &parts[..]);
        assert!(remap_rows(&src, &field, 8, &mut vec![0u8; 3 * stride]).is_err());
    }

    fn psnr(a: &[u8], b: &[u8]) -> f64 {
        let mse = a.iter().zip(b).map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2)).sum::<f64>() / a.len() as f64;
        10.0 * libm::log10(255.0 * 255.0 / mse.max(1e-12))
    }

    #[test]
    fn forward_then_inverse_warp_recovers_checkerboard() {
        // Smooth band-limited checkerboard.
        let (w, h) = (240usize, 180usize);
        let px: Vec<u8> = (0..w * h)
            .map(|k| {
                let (x, y) = ((k % w) as f64, (k / w) as f64);
                let v = libm::sin(x * core::f64::consts::PI / 12.0) * libm::sin(y * core::f64::consts::PI / 12.0);
                (127.5 + 100.0 * v) as u8
            })
            .collect();
        let flat = Raster::new(w, h, 1, px).unwrap();
        // Backward map of the warp and its exact inverse: x' = x + a sin(y/b).
        let shift = |y: f64| 4.0 * libm::sin(y / 30.0);
        let mut warp_field = DisplacementField::identity(w, h);
        let mut inverse = DisplacementField::identity(w, h);
        for y in 0..h {
            for x in 0..w {
                warp_field.source_x[y * w + x] = x as f64 + shift(y as f64);
                inverse.source_x[y * w + x] = x as f64 - shift(y as f64);
            }
        }
        let warped = remap_image(&flat, &warp_field).unwrap();
        let restored = remap_image(&warped, &inverse).unwrap();
        let inner = |r: &Raster| r.crop(10, 10, w - 20, h - 20).unwrap().into_pixels();
        assert!(psnr(&inner(&restored), &inner(&flat)) >= 30.0);
    }

    #[test]
    fn grid_driven_translation() {
        let u = UniformGrid::new(3, 3, 21, 21).unwrap();
        let nodes = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| u.node(i, j) + Point::new(2.0, 1.0)).collect();
        let warp = WarpGrid::from_nodes(3, 3, nodes).unwrap();
        let field = build_displacement_field(&warp, &u).unwrap();
        let src = pattern(30, 30, 1);
        let out = remap_image(&src, &field).unwrap();
        assert_eq!(out, src.crop(2, 1, 21, 21).unwrap());
    }

    #[test]
    fn resize_round_trip_on_smooth_image() {
        let px: Vec<u8> = (0..64 * 48).map(|k| ((k % 64) * 2 + (k / 64)) as u8).collect();
        let src = Raster::new(64, 48, 1, px).unwrap();
        assert_eq!(resize_bicubic(&src, 64, 48).unwrap(), src);
        let up = resize_bicubic(&src, 128, 96).unwrap();
        assert_eq!(up.dimensions(), (128, 96));
        let back = resize_bicubic(&up, 64, 48).unwrap();
        let inner = |r: &Raster| r.crop(4, 4, 56, 40).unwrap().into_pixels();
        assert!(psnr(&inner(&back), &inner(&src)) > 35.0);
    }
}
