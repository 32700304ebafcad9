//! Debug and interchange formats: outline JSON, warp grid JSON and the
//! `DWRP` displacement binary.
//!
//! `DWRP` layout, little-endian: the magic `b"DWRP"`, then `u32` width,
//! `u32` height and `u32` plane count (always 2), then the `dx` plane and
//! the `dy` plane as row-major `f32`.

use dewarp_core::contour::Side;
use dewarp_core::grid::WarpGrid;
use dewarp_core::pipeline::Outline;
use dewarp_core::remap::DisplacementField;
use dewarp_core::Point;
use serde::{Deserialize, Serialize};

pub type Xy = [f64; 2];

fn xy(p: Point) -> Xy {
    [p.x, p.y]
}

fn xys(points: &[Point]) -> Vec<Xy> {
    points.iter().copied().map(xy).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidesDump {
    pub top: Vec<Xy>,
    pub right: Vec<Xy>,
    pub bottom: Vec<Xy>,
    pub left: Vec<Xy>,
}

/// The traced outline and its four sides. Top and bottom run left to right,
/// left and right top to bottom; corners are top-left, top-right,
/// bottom-right, bottom-left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlineDump {
    pub contour: Vec<Xy>,
    pub corners: [Xy; 4],
    pub sides: SidesDump,
}

impl OutlineDump {
    pub fn new(outline: &Outline) -> Self {
        let side = |s| outline.sides.oriented(s);
        let (top, right, bottom, left) = (side(Side::Top), side(Side::Right), side(Side::Bottom), side(Side::Left));
        let ends = |v: &[Point]| (v.first().copied().unwrap_or_default(), v.last().copied().unwrap_or_default());
        let ((tl, tr), (bl, br)) = (ends(&top), ends(&bottom));
        Self {
            contour: xys(&outline.contour.points),
            corners: [xy(tl), xy(tr), xy(br), xy(bl)],
            sides: SidesDump {
                top: xys(&top),
                right: xys(&right),
                bottom: xys(&bottom),
                left: xys(&left),
            },
        }
    }
}

/// Row-major warp grid nodes with their validity flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDump {
    pub rows: usize,
    pub cols: usize,
    pub nodes: Vec<Xy>,
    pub valid: Vec<bool>,
}

impl From<&WarpGrid> for GridDump {
    fn from(g: &WarpGrid) -> Self {
        Self {
            rows: g.rows,
            cols: g.cols,
            nodes: xys(&g.nodes),
            valid: g.valid.clone(),
        }
    }
}

impl GridDump {
    pub fn to_grid(&self) -> Result<WarpGrid, String> {
        let nodes: Vec<Point> = self.nodes.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let mut grid = WarpGrid::from_nodes(self.rows, self.cols, nodes).map_err(|e| e.to_string())?;
        if self.valid.len() != grid.nodes.len() {
            return Err(format!("{} validity flags for {} nodes", self.valid.len(), grid.nodes.len()));
        }
        grid.valid.clone_from(&self.valid);
        Ok(grid)
    }
}

pub const DWRP_MAGIC: [u8; 4] = *b"DWRP";
pub const DWRP_HEADER_LEN: usize = 16;

/// Decoded `DWRP` contents.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementPlanes {
    pub width: usize,
    pub height: usize,
    pub dx: Vec<f32>,
    pub dy: Vec<f32>,
}

pub fn encode_displacement(field: &DisplacementField) -> Vec<u8> {
    let (dx, dy) = field.displacement_planes();
    let mut out = Vec::with_capacity(DWRP_HEADER_LEN + 8 * dx.len());
    out.extend_from_slice(&DWRP_MAGIC);
    for v in [field.width as u32, field.height as u32, 2u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in dx.iter().chain(&dy) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_displacement(bytes: &[u8]) -> Result<DisplacementPlanes, String> {
    if bytes.len() < DWRP_HEADER_LEN || bytes[..4] != DWRP_MAGIC {
        return Err("not a DWRP file".into());
    }
    let word = |k: usize| u32::from_le_bytes(bytes[4 * k..4 * k + 4].try_into().unwrap()) as usize;
    let (width, height, planes) = (word(1), word(2), word(3));
    if planes != 2 {
        return Err(format!("expected 2 planes, found {planes}"));
    }
    let n = width * height;
    let body = &bytes[DWRP_HEADER_LEN..];
    if body.len() != 8 * n {
        return Err(format!("expected {} payload bytes, found {}", 8 * n, body.len()));
    }
    let floats: Vec<f32> = body.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
    let (dx, dy) = floats.split_at(n);
    Ok(DisplacementPlanes {
        width,
        height,
        dx: dx.to_vec(),
        dy: dy.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dwrp_layout_and_round_trip() {
        let mut f = DisplacementField::constant(3, 2, 1.5, -0.25);
        f.source_x[4] += 2.0;
        let bytes = encode_displacement(&f);
        assert_eq!(bytes.len(), 16 + 2 * 6 * 4);
        assert_eq!(&bytes[..4], b"DWRP");
        assert_eq!(&bytes[4..16], &[3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&bytes[16..20], &1.5f32.to_le_bytes());
        let p = decode_displacement(&bytes).unwrap();
        assert_eq!((p.width, p.height), (3, 2));
        assert_eq!(p.dx, vec![1.5, 1.5, 1.5, 1.5, 3.5, 1.5]);
        assert!(p.dy.iter().all(|&v| v == -0.25));
        assert!(decode_displacement(&bytes[..20]).is_err());
        assert!(decode_displacement(b"PNG\0000000000000").is_err());
    }

    #[test]
    fn grid_json_round_trip() {
        let nodes = (0..6).map(|k| Point::new(k as f64 * 1.25, (k / 3) as f64)).collect();
        let mut g = WarpGrid::from_nodes(2, 3, nodes).unwrap();
        g.valid[4] = false;
        let dump = GridDump::from(&g);
        let text = serde_json::to_string(&dump).unwrap();
        assert!(text.starts_with(r#"{"rows":2,"cols":3,"nodes":[[0.0,0.0],[1.25,0.0]"#));
        let back: GridDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_grid().unwrap(), g);
        let bad = GridDump { valid: vec![true], ..back };
        assert!(bad.to_grid().is_err());
    }
}
