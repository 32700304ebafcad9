//! Static 2-d tree for nearest-neighbour queries over line samples.

use alloc::vec::Vec;

use crate::Point;

/// Balanced k-d tree stored implicitly: the median of every index range is
/// the node, split alternately on x and y.
#[derive(Debug, Clone)]
pub struct KdTree {
    points: Vec<Point>,
    /// Permutation of point indices arranged as the implicit tree.
    order: Vec<u32>,
}

impl KdTree {
    pub fn build(points: &[Point]) -> Self {
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        build_range(points, &mut order, 0);
        Self {
            points: points.to_vec(),
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index and squared distance of the nearest point. Equidistant points
    /// resolve to the smallest index.
    pub fn nearest(&self, q: Point) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(q, 0, self.order.len(), 0, &mut best);
        Some(best)
    }

    /// Like [`KdTree::nearest`], restricted to points within squared
    /// distance `max_dist_sq` of `q`.
    pub fn nearest_within(&self, q: Point, max_dist_sq: f64) -> Option<(usize, f64)> {
        let mut best = (usize::MAX, max_dist_sq);
        self.search(q, 0, self.order.len(), 0, &mut best);
        (best.0 != usize::MAX).then_some(best)
    }

    fn search(&self, q: Point, lo: usize, hi: usize, depth: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid] as usize;
        let p = self.points[idx];
        let d = p.dist_sq(q);
        if d < best.1 || (d == best.1 && (best.0 == usize::MAX || idx < best.0)) {
            *best = (idx, d);
        }
        let diff = if depth % 2 == 0 { q.x - p.x } else { q.y - p.y };
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(q, near.0, near.1, depth + 1, best);
        // `<=` keeps ties reachable on the far side.
        if diff * diff <= best.1 {
            self.search(q, far.0, far.1, depth + 1, best);
        }
    }
}

fn build_range(points: &[Point], order: &mut [u32], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let mid = order.len() / 2;
    let key = |i: &u32| {
        let p = points[*i as usize];
        if depth % 2 == 0 {
            p.x
        } else {
            p.y
        }
    };
    order.select_nth_unstable_by(mid, |a, b| key(a).total_cmp(&key(b)).then(a.cmp(b)));
    let (left, right) = order.split_at_mut(mid);
    build_range(points, left, depth + 1);
    build_range(points, &mut right[1..], depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[Point], q: Point) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, p) in points.iter().enumerate() {
            let d = p.dist_sq(q);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pts: Vec<Point> = (0..1000).map(|_| Point::new(rng.random_range(0.0..500.0), rng.random_range(0.0..300.0))).collect();
        let tree = KdTree::build(&pts);
        for _ in 0..500 {
            let q = Point::new(rng.random_range(-50.0..550.0), rng.random_range(-50.0..350.0));
            assert_eq!(tree.nearest(q).unwrap(), brute(&pts, q));
        }
    }

    #[test]
    fn ties_resolve_to_smallest_index() {
        let pts: Vec<Point> = (0..50).map(|i| Point::new((i % 5) as f64, (i / 5) as f64)).chain([Point::new(2.0, 2.0)]).collect();
        let tree = KdTree::build(&pts);
        // Exact duplicate of index 12.
        assert_eq!(tree.nearest(Point::new(2.0, 2.0)).unwrap(), (12, 0.0));
        // Equidistant from 0 and 1.
        assert_eq!(tree.nearest(Point::new(0.5, -3.0)).unwrap().0, 0);
    }

    #[test]
    fn bounded_search_matches_filtered_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let pts: Vec<Point> = (0..400).map(|_| Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0))).collect();
        let tree = KdTree::build(&pts);
        for _ in 0..300 {
            let q = Point::new(rng.random_range(-20.0..120.0), rng.random_range(-20.0..120.0));
            let want = Some(brute(&pts, q)).filter(|b| b.1 <= 16.0);
            assert_eq!(tree.nearest_within(q, 16.0), want);
        }
    }

    #[test]
    fn empty_tree() {
        assert!(KdTree::build(&[]).nearest(Point::default()).is_none());
    }
}
