//! Planar primitives shared by map validation, roadmap construction and rendering.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Sub};

use num_traits::{Float, FromPrimitive, NumCast};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Floating point coordinate type: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + NumCast
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion used when talking to `f64`-only code.
    fn to_f64_lossy(self) -> f64 {
        NumCast::from(self).unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(v: f64) -> Self {
        NumCast::from(v).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Self) -> Self {
        self.lerp(other, T::from_f64_lossy(0.5))
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::from_f64_lossy(self.x.to_f64_lossy()), U::from_f64_lossy(self.y.to_f64_lossy()))
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Sign of the turn a -> b -> c: positive for counterclockwise.
pub fn orient<T: Scalar>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    (b - a).cross(c - a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point2<T>, b: Point2<T>) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> T {
        self.a.distance(self.b)
    }

    pub fn closest_point(&self, p: Point2<T>) -> Point2<T> {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 <= T::zero() {
            return self.a;
        }
        let t = ((p - self.a).dot(d) / len2).max(T::zero()).min(T::one());
        self.a + d * t
    }

    pub fn distance_to_point(&self, p: Point2<T>) -> T {
        self.closest_point(p).distance(p)
    }

    /// True when the closed segments share at least one point.
    pub fn intersects(&self, other: &Segment<T>) -> bool {
        let (p1, p2, p3, p4) = (self.a, self.b, other.a, other.b);
        let d1 = orient(p3, p4, p1);
        let d2 = orient(p3, p4, p2);
        let d3 = orient(p1, p2, p3);
        let d4 = orient(p1, p2, p4);
        let zero = T::zero();
        if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
            && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
        {
            return true;
        }
        (d1 == zero && on_segment(p3, p4, p1))
            || (d2 == zero && on_segment(p3, p4, p2))
            || (d3 == zero && on_segment(p1, p2, p3))
            || (d4 == zero && on_segment(p1, p2, p4))
    }

    /// True when the segments cross at a single interior point of both.
    pub fn crosses_properly(&self, other: &Segment<T>) -> bool {
        let d1 = orient(other.a, other.b, self.a);
        let d2 = orient(other.a, other.b, self.b);
        let d3 = orient(self.a, self.b, other.a);
        let d4 = orient(self.a, self.b, other.b);
        let zero = T::zero();
        ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
            && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    }

    pub fn distance_to_segment(&self, other: &Segment<T>) -> T {
        if self.intersects(other) {
            return T::zero();
        }
        self.distance_to_point(other.a)
            .min(self.distance_to_point(other.b))
            .min(other.distance_to_point(self.a))
            .min(other.distance_to_point(self.b))
    }
}

// collinear p assumed
fn on_segment<T: Scalar>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonDefect {
    TooFewVertices,
    NonFiniteCoordinate,
    ZeroArea,
    SelfIntersecting,
}

/// Simple polygon stored counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polygon<T> {
    /// Validates the ring and normalizes it to counterclockwise order.
    pub fn new(mut vertices: Vec<Point2<T>>) -> Result<Self, PolygonDefect> {
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(PolygonDefect::TooFewVertices);
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(PolygonDefect::NonFiniteCoordinate);
        }
        let (a, b) = (vertices[0], vertices[1]);
        if vertices.iter().all(|&c| orient(a, b, c) == T::zero()) {
            return Err(PolygonDefect::ZeroArea);
        }
        let mut poly = Polygon { vertices };
        if poly.self_intersects() {
            return Err(PolygonDefect::SelfIntersecting);
        }
        let area = signed_area(&poly.vertices);
        if area == T::zero() {
            return Err(PolygonDefect::ZeroArea);
        }
        if area < T::zero() {
            poly.vertices.reverse();
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> T {
        signed_area(&self.vertices).abs()
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment<T>> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn self_intersects(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<_> = self.edges().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // neighbours may only share their common vertex
                    let (first, second) = if j == i + 1 { (&edges[i], &edges[j]) } else { (&edges[j], &edges[i]) };
                    let shared = first.b;
                    let (x, y) = (first.a, second.b);
                    if x == shared || y == shared {
                        return true;
                    }
                    if orient(shared, x, y) == T::zero() && (x - shared).dot(y - shared) > T::zero() {
                        return true;
                    }
                } else if edges[i].intersects(&edges[j]) {
                    return true;
                }
            }
        }
        false
    }

    /// Even-odd containment; points on the boundary count as inside.
    pub fn contains(&self, p: Point2<T>) -> bool {
        if self.boundary_distance(p) == T::zero() {
            return true;
        }
        self.contains_strictly(p)
    }

    /// Ray-casting test without the boundary check.
    pub fn contains_strictly(&self, p: Point2<T>) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    pub fn boundary_distance(&self, p: Point2<T>) -> T {
        self.edges()
            .map(|e| e.distance_to_point(p))
            .fold(T::infinity(), T::min)
    }

    /// Axis-aligned bounding box as (min, max).
    pub fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for p in &self.vertices[1..] {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }
}

fn signed_area<T: Scalar>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    let twice = (0..n).fold(T::zero(), |acc, i| acc + pts[i].cross(pts[(i + 1) % n]));
    twice / (T::one() + T::one())
}
