//! Minimal 2D vector math shared by the clustering and prediction code.

use crate::scalar::Real;

/// A 2D point (or vector) in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Real> std::ops::Add for Point<S> {
    type Output = Point<S>;

    fn add(self, other: Point<S>) -> Point<S> {
        Point::new(self.x + other.x, self.y + other.y)
    }
}

impl<S: Real> std::ops::Sub for Point<S> {
    type Output = Point<S>;

    fn sub(self, other: Point<S>) -> Point<S> {
        Point::new(self.x - other.x, self.y - other.y)
    }
}

impl<S: Real> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn scale(self, k: S) -> Point<S> {
        Point::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: Point<S>) -> S {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    pub fn dist_sq(self, other: Point<S>) -> S {
        (self - other).norm_sq()
    }

    pub fn dist(self, other: Point<S>) -> S {
        self.dist_sq(other).sqrt()
    }

    /// Rotate by the rotation whose first axis is the unit vector (c, s).
    /// Maps world coordinates into the rotated frame.
    pub fn into_frame(self, c: S, s: S) -> Point<S> {
        Point::new(self.x * c + self.y * s, -self.x * s + self.y * c)
    }

    /// Inverse of [`Point::into_frame`].
    pub fn out_of_frame(self, c: S, s: S) -> Point<S> {
        Point::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
}

/// Distance from `p` to the line segment `a`-`b`.
pub fn point_segment_distance<S: Real>(p: Point<S>, a: Point<S>, b: Point<S>) -> S {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == S::zero() {
        return p.dist(a);
    }
    let t = (p - a).dot(d) / len_sq;
    let t = t.max(S::zero()).min(S::one());
    p.dist(a + d.scale(t))
}

/// Distance from `p` to a polyline given as a point sequence.
pub fn point_polyline_distance<S: Real>(p: Point<S>, polyline: &[Point<S>]) -> S {
    match polyline {
        [] => S::infinity(),
        [single] => p.dist(*single),
        _ => polyline
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(S::infinity(), S::min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_roundtrip() {
        let p = Point::new(3.0_f64, -2.0);
        let (c, s) = (0.6, 0.8);
        let q = p.into_frame(c, s).out_of_frame(c, s);
        assert!((q.x - p.x).abs() < 1e-12);
        assert!((q.y - p.y).abs() < 1e-12);
    }

    #[test]
    fn segment_distance_clamps_to_endpoints() {
        let a = Point::new(0.0_f64, 0.0);
        let b = Point::new(10.0, 0.0);
        assert_eq!(point_segment_distance(Point::new(5.0, 3.0), a, b), 3.0);
        assert_eq!(point_segment_distance(Point::new(-4.0, 0.0), a, b), 4.0);
        assert_eq!(point_segment_distance(Point::new(13.0, 4.0), a, b), 5.0);
    }

    #[test]
    fn polyline_distance_takes_nearest_segment() {
        let poly = [
            Point::new(0.0_f64, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
        ];
        let d = point_polyline_distance(Point::new(12.0, 5.0), &poly);
        assert!((d - 2.0).abs() < 1e-12);
    }
}
