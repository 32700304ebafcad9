use alloc::collections::VecDeque;
use alloc::vec;

use crate::{BinaryMask, Error, Result};

/// Keeps only the 4-connected foreground component with the most pixels.
/// Ties go to the component found first in row-major scan order.
pub fn select_largest_component(binary: &BinaryMask) -> Result<BinaryMask> {
    let (w, h) = binary.dimensions();
    let bits = binary.bits();
    // 0 = unvisited; labels start at 1.
    let mut labels = vec![0u32; w * h];
    let mut queue = VecDeque::new();
    let mut next = 0u32;
    let mut best: Option<(u32, usize)> = None;

    for start in 0..w * h {
        if bits[start] == 0 || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        queue.push_back(start);
        let mut area = 0usize;
        while let Some(idx) = queue.pop_front() {
            area += 1;
            let (x, y) = (idx % w, idx / w);
            let mut visit = |n: usize| {
                if bits[n] != 0 && labels[n] == 0 {
                    labels[n] = next;
                    queue.push_back(n);
                }
            };
            if x > 0 {
                visit(idx - 1);
            }
            if x + 1 < w {
                visit(idx + 1);
            }
            if y > 0 {
                visit(idx - w);
            }
            if y + 1 < h {
                visit(idx + w);
            }
        }
        if best.is_none_or(|(_, a)| area > a) {
            best = Some((next, area));
        }
    }

    let (keep, _) = best.ok_or(Error::EmptyMask)?;
    let out = labels.iter().map(|&l| u8::from(l == keep)).collect();
    BinaryMask::new(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rect(mask: &mut BinaryMask, x0: usize, y0: usize, w: usize, h: usize) {
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                mask.set(x, y, true);
            }
        }
    }

    #[test]
    fn single_blob_is_identity() {
        let mut m = BinaryMask::zeros(20, 20).unwrap();
        rect(&mut m, 3, 4, 6, 5);
        assert_eq!(select_largest_component(&m).unwrap(), m);
    }

    #[test]
    fn larger_blob_wins() {
        let mut m = BinaryMask::zeros(40, 30).unwrap();
        rect(&mut m, 1, 1, 10, 8); // 80
        rect(&mut m, 20, 5, 12, 10); // 120
        let out = select_largest_component(&m).unwrap();
        assert_eq!(out.count(), 120);
        assert!(out.get(20, 5) && !out.get(1, 1));
    }

    #[test]
    fn diagonal_neighbours_are_separate_components() {
        let mut m = BinaryMask::zeros(4, 4).unwrap();
        m.set(0, 0, true);
        m.set(1, 1, true);
        let out = select_largest_component(&m).unwrap();
        assert_eq!(out.count(), 1);
        assert!(out.get(0, 0));
    }

    #[test]
    fn empty_mask_errors() {
        let m = BinaryMask::zeros(5, 5).unwrap();
        assert_eq!(select_largest_component(&m).unwrap_err(), Error::EmptyMask);
    }

    /// Independent census: depth-first flood fill from every seed.
    fn census(m: &BinaryMask) -> Vec<Vec<usize>> {
        let (w, h) = m.dimensions();
        let mut seen = vec![false; w * h];
        let mut comps = Vec::new();
        for s in 0..w * h {
            if m.bits()[s] == 0 || seen[s] {
                continue;
            }
            let mut stack = vec![s];
            seen[s] = true;
            let mut comp = Vec::new();
            while let Some(i) = stack.pop() {
                comp.push(i);
                let (x, y) = ((i % w) as i64, (i / w) as i64);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let (nx, ny) = (x + dx, y + dy);
                    if m.get_signed(nx, ny) {
                        let j = ny as usize * w + nx as usize;
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    #[test]
    fn matches_flood_fill_census_on_random_blobs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut m = BinaryMask::zeros(120, 90).unwrap();
        for _ in 0..50 {
            let (bw, bh) = (rng.random_range(1..9), rng.random_range(1..9));
            let (x0, y0) = (rng.random_range(0..120 - bw), rng.random_range(0..90 - bh));
            rect(&mut m, x0, y0, bw, bh);
        }
        let comps = census(&m);
        let max_area = comps.iter().map(Vec::len).max().unwrap();
        let expect = comps.iter().find(|c| c.len() == max_area).unwrap();
        let out = select_largest_component(&m).unwrap();
        let got: Vec<usize> = out.bits().iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).collect();
        assert_eq!(&got, expect);
        assert!(out.count() <= m.count());
        assert_eq!(census(&out).len(), 1);
    }
}
