//! Axis-aligned box geometry in continuous pixel coordinates.
//!
//! Origin is the top-left corner, x grows rightward and y downward. A box
//! covers the half-open region `[x_min, x_max) × [y_min, y_max)`, so the
//! pixel at column `i` spans `[i, i + 1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate box: ({x_min}, {y_min}, {x_max}, {y_max})")]
    Degenerate {
        x_min: f64,
        y_min: f64,
        x_max: f64,
        y_max: f64,
    },
    #[error("box lies entirely outside a {width}x{height} frame")]
    OutsideFrame { width: usize, height: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox<T> {
    x_min: T,
    y_min: T,
    x_max: T,
    y_max: T,
}

impl<T: Real> BoundingBox<T> {
    /// Rejects non-finite coordinates and boxes with zero or negative extent.
    pub fn new(x_min: T, y_min: T, x_max: T, y_max: T) -> Result<Self, GeometryError> {
        let finite = [x_min, y_min, x_max, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(GeometryError::Degenerate {
                x_min: x_min.as_f64(),
                y_min: y_min.as_f64(),
                x_max: x_max.as_f64(),
                y_max: y_max.as_f64(),
            });
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    /// Box from center and full extents.
    pub fn from_center(cx: T, cy: T, w: T, h: T) -> Result<Self, GeometryError> {
        let two = T::of(2.0);
        Self::new(cx - w / two, cy - h / two, cx + w / two, cy + h / two)
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn y_min(&self) -> T {
        self.y_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn y_max(&self) -> T {
        self.y_max
    }

    pub fn width(&self) -> T {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> T {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn center(&self) -> (T, T) {
        let two = T::of(2.0);
        ((self.x_min + self.x_max) / two, (self.y_min + self.y_max) / two)
    }

    pub fn intersection_area(&self, other: &Self) -> T {
        let w = self.x_max.min(other.x_max) - self.x_min.max(other.x_min);
        let h = self.y_max.min(other.y_max) - self.y_min.max(other.y_min);
        if w <= T::zero() || h <= T::zero() {
            T::zero()
        } else {
            w * h
        }
    }

    /// Intersection with the `width × height` frame rectangle.
    pub fn clip(&self, width: usize, height: usize) -> Result<Self, GeometryError> {
        let w = T::of(width as f64);
        let h = T::of(height as f64);
        Self::new(
            self.x_min.max(T::zero()),
            self.y_min.max(T::zero()),
            self.x_max.min(w),
            self.y_max.min(h),
        )
        .map_err(|_| GeometryError::OutsideFrame { width, height })
    }

    /// Grows the box by `pad` on every side.
    pub fn pad(&self, pad: T) -> Self {
        Self {
            x_min: self.x_min - pad,
            y_min: self.y_min - pad,
            x_max: self.x_max + pad,
            y_max: self.y_max + pad,
        }
    }

    pub fn translate(&self, dx: T, dy: T) -> Self {
        Self {
            x_min: self.x_min + dx,
            y_min: self.y_min + dy,
            x_max: self.x_max + dx,
            y_max: self.y_max + dy,
        }
    }

    pub fn contains_point(&self, x: T, y: T) -> bool {
        x >= self.x_min && x < self.x_max && y >= self.y_min && y < self.y_max
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.x_min - other.x_min).abs() <= tol
            && (self.y_min - other.y_min).abs() <= tol
            && (self.x_max - other.x_max).abs() <= tol
            && (self.y_max - other.y_max).abs() <= tol
    }

    /// Squared distance between the two box centers.
    pub fn center_distance_sq(&self, other: &Self) -> T {
        let (ax, ay) = self.center();
        let (bx, by) = other.center();
        (ax - bx) * (ax - bx) + (ay - by) * (ay - by)
    }

    pub fn cast<U: Real>(&self) -> BoundingBox<U> {
        BoundingBox {
            x_min: U::of(self.x_min.as_f64()),
            y_min: U::of(self.y_min.as_f64()),
            x_max: U::of(self.x_max.as_f64()),
            y_max: U::of(self.y_max.as_f64()),
        }
    }
}

/// Intersection over union of two valid boxes.
pub fn iou<T: Real>(a: &BoundingBox<T>, b: &BoundingBox<T>) -> T {
    let inter = a.intersection_area(b);
    if inter <= T::zero() {
        return T::zero();
    }
    let union = a.area() + b.area() - inter;
    (inter / union).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x0: f64, y0: f64, x1: f64, y1: f64) -> BoundingBox<f64> {
        BoundingBox::new(x0, y0, x1, y1).unwrap()
    }

    #[test]
    fn iou_examples() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        assert_eq!(iou(&a, &a), 1.0);
        assert_eq!(iou(&a, &bx(20.0, 20.0, 30.0, 30.0)), 0.0);
        assert!((iou(&a, &bx(5.0, 0.0, 15.0, 10.0)) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn touching_edges_do_not_overlap() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        assert_eq!(iou(&a, &bx(10.0, 0.0, 20.0, 10.0)), 0.0);
    }

    #[test]
    fn iou_in_f32() {
        let a = BoundingBox::<f32>::new(0.0, 0.0, 10.0, 10.0).unwrap();
        let b = BoundingBox::<f32>::new(5.0, 0.0, 15.0, 10.0).unwrap();
        assert!((iou(&a, &b) - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(BoundingBox::new(1.0, 0.0, 1.0, 5.0).is_err());
        assert!(BoundingBox::new(0.0, 3.0, 1.0, 2.0).is_err());
        assert!(BoundingBox::new(f64::NAN, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn clip_to_frame() {
        let b = bx(-5.0, -5.0, 5.0, 5.0).clip(100, 100).unwrap();
        assert_eq!(b, bx(0.0, 0.0, 5.0, 5.0));
        assert!(bx(110.0, 0.0, 120.0, 5.0).clip(100, 100).is_err());
    }

    fn arb_box() -> impl Strategy<Value = BoundingBox<f64>> {
        (0.0..100.0f64, 0.0..100.0f64, 0.5..50.0f64, 0.5..50.0f64)
            .prop_map(|(x, y, w, h)| bx(x, y, x + w, y + h))
    }

    proptest! {
        #[test]
        fn iou_is_symmetric_and_bounded(a in arb_box(), b in arb_box()) {
            let ab = iou(&a, &b);
            prop_assert_eq!(ab, iou(&b, &a));
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn iou_one_iff_equal(a in arb_box(), b in arb_box()) {
            prop_assert!((iou(&a, &a) - 1.0).abs() < 1e-12);
            if !a.approx_eq(&b, 1e-9) {
                prop_assert!(iou(&a, &b) < 1.0 - 1e-12);
            }
        }
    }
}
