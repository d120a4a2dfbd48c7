//! Exact Tukey (halfplane) depth in the plane, and convex hulls.

use std::cmp::Ordering;

use rayon::prelude::*;

pub type Point = [f64; 2];

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

// 0 for angles in [0, pi), 1 for [pi, 2pi)
fn half(d: Point) -> u8 {
    if d[1] > 0.0 || (d[1] == 0.0 && d[0] > 0.0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: Point, b: Point) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

// direction `d` lies in the half-open arc (angle(a), angle(a) + pi]
fn in_upper_arc(a: Point, d: Point) -> bool {
    let c = cross(a, d);
    c > 0.0 || (c == 0.0 && dot(a, d) < 0.0)
}

/// Fraction of `cloud` in the least populated closed halfplane whose
/// boundary passes through `point`.
///
/// Angular sweep in `O(n log n)`: sort the directions from `point`, then
/// for each distinct direction count the points strictly within the
/// following half turn. Points equal to `point` lie in every halfplane.
pub fn tukey_depth(point: Point, cloud: &[Point]) -> f64 {
    if cloud.is_empty() {
        return 0.0;
    }
    let mut coincident = 0usize;
    let mut dirs: Vec<Point> = Vec::with_capacity(cloud.len());
    for q in cloud {
        let d = [q[0] - point[0], q[1] - point[1]];
        if d[0] == 0.0 && d[1] == 0.0 {
            coincident += 1;
        } else {
            dirs.push(d);
        }
    }
    if dirs.is_empty() {
        return 1.0;
    }
    dirs.sort_unstable_by(|a, b| angle_cmp(*a, *b));

    // group equal directions: (representative, multiplicity)
    let mut groups: Vec<(Point, usize)> = Vec::new();
    for d in dirs {
        match groups.last_mut() {
            Some((rep, m)) if angle_cmp(*rep, d) == Ordering::Equal => *m += 1,
            _ => groups.push((d, 1)),
        }
    }
    let g = groups.len();
    let mut prefix = Vec::with_capacity(2 * g + 1);
    prefix.push(0usize);
    for i in 0..2 * g {
        prefix.push(prefix[i] + groups[i % g].1);
    }

    let mut best = usize::MAX;
    let mut end = 0usize;
    for i in 0..g {
        end = end.max(i + 1);
        while end < i + g && in_upper_arc(groups[i].0, groups[end % g].0) {
            end += 1;
        }
        best = best.min(prefix[end] - prefix[i + 1]);
    }
    (best + coincident) as f64 / cloud.len() as f64
}

/// Depth of every cloud point with respect to the whole cloud.
pub fn tukey_depths(cloud: &[Point]) -> Vec<f64> {
    cloud.par_iter().map(|p| tukey_depth(*p, cloud)).collect()
}

/// Convex hull, counter-clockwise, without repeated endpoint (Andrew's
/// monotone chain). Collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| cross([a[0] - o[0], a[1] - o[1]], [b[0] - o[0], b[1] - o[1]]);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Shoelace area of a simple polygon (absolute value).
pub fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let n = poly.len();
    let twice: f64 = (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum();
    twice.abs() / 2.0
}

/// Closed containment test for a counter-clockwise convex polygon.
pub fn convex_polygon_contains(poly: &[Point], p: Point) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0] == p,
        2 => {
            let d = [poly[1][0] - poly[0][0], poly[1][1] - poly[0][1]];
            let e = [p[0] - poly[0][0], p[1] - poly[0][1]];
            cross(d, e) == 0.0 && dot(d, e) >= 0.0 && dot(e, e) <= dot(d, d)
        }
        n => (0..n).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            cross([b[0] - a[0], b[1] - a[1]], [p[0] - a[0], p[1] - a[1]]) >= 0.0
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_cross() {
        let cloud = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        assert_eq!(tukey_depth([0.0, 0.0], &cloud), 0.5);
        assert_eq!(tukey_depth([5.0, 5.0], &cloud), 0.0);
        assert_eq!(tukey_depth([1.0, 0.0], &cloud), 0.25);
    }

    #[test]
    fn collinear_and_coincident_points() {
        let line = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]];
        assert_eq!(tukey_depth([1.0, 0.0], &line), 0.5);
        assert_eq!(tukey_depth([1.5, 0.0], &line), 0.5);
        assert_eq!(tukey_depth([1.5, 0.1], &line), 0.0);
        assert_eq!(tukey_depth([2.0, 2.0], &[[2.0, 2.0]; 3]), 1.0);
        assert_eq!(tukey_depth([0.0, 0.0], &[]), 0.0);
    }

    #[test]
    fn hull_and_area() {
        let pts = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 1.0], [1.0, 0.0]];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert_eq!(polygon_area(&hull), 4.0);
        assert!(convex_polygon_contains(&hull, [1.0, 1.0]));
        assert!(convex_polygon_contains(&hull, [2.0, 1.0]));
        assert!(!convex_polygon_contains(&hull, [2.1, 1.0]));
        assert_eq!(polygon_area(&convex_hull(&[[0.0, 0.0], [1.0, 1.0]])), 0.0);
    }
}
