//! Planar points and axis-aligned rectangles.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Overlap tolerance in meters. Bodies that merely touch are not colliding.
pub const EPS: f64 = 1e-9;

/// A translation in the plane. Doubles as a 2D vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
}

impl Pose2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Pose2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Bit pattern of both coordinates, for exact keys and equality checks.
    pub fn bits(self) -> (u64, u64) {
        (self.x.to_bits(), self.y.to_bits())
    }

    pub fn lerp(self, other: Pose2, t: f64) -> Pose2 {
        Pose2::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

impl Add for Pose2 {
    type Output = Pose2;
    fn add(self, rhs: Pose2) -> Pose2 {
        Pose2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Pose2 {
    type Output = Pose2;
    fn sub(self, rhs: Pose2) -> Pose2 {
        Pose2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Pose2 {
    type Output = Pose2;
    fn neg(self) -> Pose2 {
        Pose2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Pose2 {
    type Output = Pose2;
    fn mul(self, rhs: f64) -> Pose2 {
        Pose2::new(self.x * rhs, self.y * rhs)
    }
}

/// Width and height of a footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Size {
    pub w: f64,
    pub h: f64,
}

impl Size {
    pub const fn new(w: f64, h: f64) -> Self {
        Self { w, h }
    }

    pub fn half(self) -> Pose2 {
        Pose2::new(self.w * 0.5, self.h * 0.5)
    }

    pub fn area(self) -> f64 {
        self.w * self.h
    }

    pub fn min_side(self) -> f64 {
        self.w.min(self.h)
    }
}

/// Axis-aligned rectangle given by its corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Pose2,
    pub max: Pose2,
}

impl Rect {
    pub const fn new(min: Pose2, max: Pose2) -> Self {
        Self { min, max }
    }

    pub fn from_bounds(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Self::new(Pose2::new(xmin, ymin), Pose2::new(xmax, ymax))
    }

    pub fn centered(center: Pose2, size: Size) -> Self {
        let h = size.half();
        Self::new(center - h, center + h)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Pose2 {
        self.min.lerp(self.max, 0.5)
    }

    pub fn size(&self) -> Size {
        Size::new(self.width(), self.height())
    }

    pub fn is_empty(&self) -> bool {
        !(self.max.x >= self.min.x && self.max.y >= self.min.y)
    }

    /// True when the interiors intersect by more than [`EPS`] on both axes.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min.x < other.max.x - EPS
            && other.min.x < self.max.x - EPS
            && self.min.y < other.max.y - EPS
            && other.min.y < self.max.y - EPS
    }

    /// Closed containment with tolerance.
    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.min.x >= self.min.x - EPS
            && other.min.y >= self.min.y - EPS
            && other.max.x <= self.max.x + EPS
            && other.max.y <= self.max.y + EPS
    }

    pub fn contains_point(&self, p: Pose2) -> bool {
        p.x >= self.min.x - EPS && p.x <= self.max.x + EPS && p.y >= self.min.y - EPS && p.y <= self.max.y + EPS
    }

    /// Strict interior test with tolerance.
    pub fn interior_contains(&self, p: Pose2) -> bool {
        p.x > self.min.x + EPS && p.x < self.max.x - EPS && p.y > self.min.y + EPS && p.y < self.max.y - EPS
    }

    pub fn intersection(&self, other: &Rect) -> Rect {
        Rect::new(
            Pose2::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y)),
            Pose2::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y)),
        )
    }

    pub fn translate(&self, d: Pose2) -> Rect {
        Rect::new(self.min + d, self.max + d)
    }

    /// Minkowski growth by half-extents `h` on each side.
    pub fn inflate(&self, h: Pose2) -> Rect {
        Rect::new(self.min - h, self.max + h)
    }

    /// Does the segment `a → b` pass through the open interior (shrunk by [`EPS`])?
    ///
    /// Liang–Barsky clipping; grazing contact along an edge is not a hit.
    pub fn segment_hits_interior(&self, a: Pose2, b: Pose2) -> bool {
        let lo = Pose2::new(self.min.x + EPS, self.min.y + EPS);
        let hi = Pose2::new(self.max.x - EPS, self.max.y - EPS);
        if lo.x >= hi.x || lo.y >= hi.y {
            return false;
        }
        let d = b - a;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for (p, q) in [
            (-d.x, a.x - lo.x),
            (d.x, hi.x - a.x),
            (-d.y, a.y - lo.y),
            (d.y, hi.y - a.y),
        ] {
            if p == 0.0 {
                if q <= 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    if r > t1 {
                        return false;
                    }
                    if r > t0 {
                        t0 = r;
                    }
                } else {
                    if r < t0 {
                        return false;
                    }
                    if r < t1 {
                        t1 = r;
                    }
                }
            }
        }
        t0 < t1 || (t0 == t1 && self.interior_contains(a.lerp(b, t0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn touching_rectangles_do_not_overlap() {
        let a = Rect::centered(Pose2::new(0.0, 0.0), Size::new(1.0, 1.0));
        let b = Rect::centered(Pose2::new(1.0, 0.0), Size::new(1.0, 1.0));
        assert!(!a.overlaps(&b));
        let c = Rect::centered(Pose2::new(0.5, 0.0), Size::new(1.0, 1.0));
        assert!(a.overlaps(&c));
        assert!(c.overlaps(&a));
    }

    #[test]
    fn segment_interior_hits() {
        let r = Rect::from_bounds(1.0, 1.0, 2.0, 2.0);
        assert!(r.segment_hits_interior(Pose2::new(0.0, 1.5), Pose2::new(3.0, 1.5)));
        // sliding along the edge
        assert!(!r.segment_hits_interior(Pose2::new(0.0, 1.0), Pose2::new(3.0, 1.0)));
        assert!(!r.segment_hits_interior(Pose2::new(0.0, 0.0), Pose2::new(0.9, 3.0)));
        // fully inside
        assert!(r.segment_hits_interior(Pose2::new(1.2, 1.2), Pose2::new(1.3, 1.3)));
        // diagonal through a corner point only
        assert!(!r.segment_hits_interior(Pose2::new(0.0, 2.0), Pose2::new(2.0, 0.0)));
    }
}
