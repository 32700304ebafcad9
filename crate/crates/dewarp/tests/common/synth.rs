//! Synthetic documents: a flat textured page, a smooth analytic warp and the
//! exact mask of the warped page.

use dewarp_core::{ProbabilityMask, Raster};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BACKGROUND: u8 = 28;

/// Page texture: a light 64 px checker tint with rows of dark word blocks.
pub fn page(width: usize, height: usize, seed: u64) -> Raster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut px = vec![0u8; width * height * 3];
    for y in 0..height {
        for x in 0..width {
            let v = if (x / 64 + y / 64) % 2 == 0 { 236 } else { 206 };
            let k = (y * width + x) * 3;
            px[k..k + 3].copy_from_slice(&[v, v, v.saturating_sub(8)]);
        }
    }
    let margin = width / 12;
    let mut y = margin;
    while y + 14 < height - margin {
        let mut x = margin;
        while x < width - margin {
            let word = rng.random_range(18..70).min(width - margin - x);
            for yy in y..y + 14 {
                for xx in x..x + word {
                    let k = (yy * width + xx) * 3;
                    px[k..k + 3].copy_from_slice(&[40, 40, 60]);
                }
            }
            x += word + rng.random_range(10..22);
        }
        y += 30;
    }
    Raster::new(width, height, 3, px).unwrap()
}

/// Smooth forward deformation of the flat canvas: a point `p` moves to
/// `p + D(p)` with
///
/// * `D_x = a_x * u * v^2` (sides bowing outwards towards the top and bottom),
/// * `D_y = a_s * (3u - u^3) / 2 + a_c * (u^3 - u) / 0.3849` (a tilt that
///   flattens at the edges plus an S-shaped curl),
///
/// cubic in x and quadratic in y. `u, v` are page-normalized to `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Warp {
    pub cx: f64,
    pub cy: f64,
    pub half_w: f64,
    pub half_h: f64,
    pub a_x: f64,
    pub a_s: f64,
    pub a_c: f64,
}

impl Warp {
    /// Warp for a page of `pw x ph` centred on the canvas with the given
    /// term weights, rescaled so the longest displacement on the page is
    /// `max_disp` pixels.
    pub fn for_page(cw: usize, ch: usize, pw: usize, ph: usize, weights: [f64; 3], max_disp: f64) -> Self {
        let mut w = Self {
            cx: cw as f64 / 2.0,
            cy: ch as f64 / 2.0,
            half_w: pw as f64 / 2.0,
            half_h: ph as f64 / 2.0,
            a_x: weights[0],
            a_s: weights[1],
            a_c: weights[2],
        };
        let k = max_disp / w.max_on_page();
        w.a_x *= k;
        w.a_s *= k;
        w.a_c *= k;
        w
    }

    /// `D(p)` at a flat-canvas point.
    pub fn displacement(&self, x: f64, y: f64) -> (f64, f64) {
        let u = (x - self.cx) / self.half_w;
        let v = (y - self.cy) / self.half_h;
        let dy = self.a_s * (3.0 * u - u * u * u) / 2.0 + self.a_c * (u * u * u - u) / 0.3849;
        (self.a_x * u * v * v, dy)
    }

    /// Flat-canvas point that lands on warped point `(x, y)`.
    pub fn inverse(&self, x: f64, y: f64) -> (f64, f64) {
        let (mut px, mut py) = (x, y);
        for _ in 0..40 {
            let (dx, dy) = self.displacement(px, py);
            let (nx, ny) = (x - dx, y - dy);
            let done = (nx - px).abs() + (ny - py).abs() < 1e-12;
            (px, py) = (nx, ny);
            if done {
                break;
            }
        }
        (px, py)
    }

    pub fn max_on_page(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..=200 {
            for l in 0..=200 {
                let x = self.cx + self.half_w * (k as f64 / 100.0 - 1.0);
                let y = self.cy + self.half_h * (l as f64 / 100.0 - 1.0);
                let (dx, dy) = self.displacement(x, y);
                m = m.max((dx * dx + dy * dy).sqrt());
            }
        }
        m
    }
}

pub struct Scene {
    /// The flat page alone.
    pub flat: Raster,
    /// Flat page placed on the dark canvas.
    pub canvas: Raster,
    pub warped: Raster,
    pub mask: ProbabilityMask,
    /// Top-left of the page on the flat canvas.
    pub origin: (usize, usize),
}

fn bilinear(r: &Raster, x: f64, y: f64, c: usize) -> f64 {
    let (w, h) = (r.width() as f64, r.height() as f64);
    let x = x.clamp(0.0, w - 1.0);
    let y = y.clamp(0.0, h - 1.0);
    let (x0, y0) = (x.floor() as usize, y.floor() as usize);
    let (x1, y1) = ((x0 + 1).min(r.width() - 1), (y0 + 1).min(r.height() - 1));
    let (tx, ty) = (x - x0 as f64, y - y0 as f64);
    let g = |xx, yy| f64::from(r.get(xx, yy, c));
    (g(x0, y0) * (1.0 - tx) + g(x1, y0) * tx) * (1.0 - ty) + (g(x0, y1) * (1.0 - tx) + g(x1, y1) * tx) * ty
}

/// Page of `pw x ph` centred on a `cw x ch` canvas, warped by `warp`.
pub fn scene(cw: usize, ch: usize, pw: usize, ph: usize, warp: Option<Warp>, seed: u64) -> Scene {
    let flat = page(pw, ph, seed);
    let (ox, oy) = ((cw - pw) / 2, (ch - ph) / 2);
    let mut canvas = Raster::filled(cw, ch, 3, BACKGROUND).unwrap();
    for y in 0..ph {
        for x in 0..pw {
            for c in 0..3 {
                canvas.set(ox + x, oy + y, c, flat.get(x, y, c));
            }
        }
    }
    let Some(warp) = warp else {
        let mut m = vec![0u8; cw * ch];
        for y in oy..oy + ph {
            for x in ox..ox + pw {
                m[y * cw + x] = 255;
            }
        }
        let mask = ProbabilityMask::from_levels(cw, ch, &m).unwrap();
        return Scene { warped: canvas.clone(), flat, canvas, mask, origin: (ox, oy) };
    };
    let mut warped = Raster::filled(cw, ch, 3, BACKGROUND).unwrap();
    let mut m = vec![0u8; cw * ch];
    let (x0, y0, x1, y1) = (ox as f64 - 0.5, oy as f64 - 0.5, (ox + pw) as f64 - 0.5, (oy + ph) as f64 - 0.5);
    for y in 0..ch {
        for x in 0..cw {
            let (sx, sy) = warp.inverse(x as f64, y as f64);
            if sx >= x0 && sx < x1 && sy >= y0 && sy < y1 {
                m[y * cw + x] = 255;
                for c in 0..3 {
                    warped.set(x, y, c, bilinear(&canvas, sx, sy, c).round() as u8);
                }
            }
        }
    }
    let mask = ProbabilityMask::from_levels(cw, ch, &m).unwrap();
    Scene { flat, canvas, warped, mask, origin: (ox, oy) }
}
