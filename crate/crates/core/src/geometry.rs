//! Ambient metric groups with dilations.
//!
//! Two backends are provided: Euclidean space `R^d` with vector addition and
//! `δ_r(x) = r x`, and the first Heisenberg group with the symmetric group law
//!
//! ```text
//! (x, y, t) · (x', y', t') = (x + x', y + y', t + t' + (x y' - y x') / 2)
//! ```
//!
//! anisotropic dilations `δ_r(x, y, t) = (r x, r y, r² t)` and the Korányi
//! gauge `‖(x, y, t)‖ = ((x² + y²)² + t²)^{1/4}`, with `d(p, q) = ‖q⁻¹ · p‖`.
//! Both metrics are left-invariant and scale exactly by `r` under `δ_r`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

use crate::error::{input_err, Result};

/// A point of the ambient group. Coordinates are stored inline for `d ≤ 3`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub SmallVec<[f64; 3]>);

impl Point {
    pub fn new(coords: &[f64]) -> Point {
        Point(SmallVec::from_slice(coords))
    }

    pub fn zeros(dim: usize) -> Point {
        Point(SmallVec::from_elem(0.0, dim))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Point {
        Point(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Point {
        Point::new(&v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geometry {
    Euclidean { dim: usize },
    Heisenberg1,
}

impl Geometry {
    pub fn euclidean(dim: usize) -> Result<Geometry> {
        if dim == 0 {
            return Err(input_err!("Euclidean dimension must be at least 1"));
        }
        Ok(Geometry::Euclidean { dim })
    }

    /// Number of coordinates of a point.
    pub fn dim(&self) -> usize {
        match *self {
            Geometry::Euclidean { dim } => dim,
            Geometry::Heisenberg1 => 3,
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, Geometry::Euclidean { .. })
    }

    pub fn origin(&self) -> Point {
        Point::zeros(self.dim())
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if let Geometry::Euclidean { dim: 0 } = self {
            return Err(input_err!("Euclidean dimension must be at least 1"));
        }
        if p.dim() != self.dim() {
            return Err(input_err!(
                "point {:?} has {} coordinates, geometry expects {}",
                p,
                p.dim(),
                self.dim()
            ));
        }
        if !p.is_finite() {
            return Err(input_err!("point {:?} has non-finite coordinates", p));
        }
        Ok(())
    }

    /// Distance from the identity. Assumes `p` is valid for `self`.
    pub fn gauge(&self, p: &Point) -> f64 {
        let c = p.coords();
        match self {
            Geometry::Euclidean { .. } => c.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Geometry::Heisenberg1 => {
                let h = c[0] * c[0] + c[1] * c[1];
                (h * h + c[2] * c[2]).sqrt().sqrt()
            }
        }
    }

    /// `d(p, q)` without validation; the hot path of every quadrature.
    pub fn dist_unchecked(&self, p: &Point, q: &Point) -> f64 {
        match self {
            Geometry::Euclidean { .. } => p
                .0
                .iter()
                .zip(q.0.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Geometry::Heisenberg1 => self.gauge(&self.op(&self.inv(q), p)),
        }
    }

    pub fn dist(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.dist_unchecked(p, q))
    }

    pub fn dilate_unchecked(&self, r: f64, p: &Point) -> Point {
        match self {
            Geometry::Euclidean { .. } => Point(p.0.iter().map(|x| r * x).collect()),
            Geometry::Heisenberg1 => Point::new(&[r * p.0[0], r * p.0[1], r * r * p.0[2]]),
        }
    }

    pub fn dilate(&self, r: f64, p: &Point) -> Result<Point> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(input_err!("dilation factor must be positive and finite, got {r}"));
        }
        self.check(p)?;
        Ok(self.dilate_unchecked(r, p))
    }

    /// Group product `p · q`.
    pub fn op(&self, p: &Point, q: &Point) -> Point {
        match self {
            Geometry::Euclidean { .. } => Point(p.0.iter().zip(q.0.iter()).map(|(a, b)| a + b).collect()),
            Geometry::Heisenberg1 => {
                let (a, b) = (&p.0, &q.0);
                Point::new(&[
                    a[0] + b[0],
                    a[1] + b[1],
                    a[2] + b[2] + 0.5 * (a[0] * b[1] - a[1] * b[0]),
                ])
            }
        }
    }

    pub fn inv(&self, p: &Point) -> Point {
        Point(p.0.iter().map(|x| -x).collect())
    }

    pub fn group_op(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.op(p, q))
    }

    pub fn group_inv(&self, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.inv(p))
    }

    /// `x⁻¹ · y`, the argument handed to Ω in group geometries.
    pub fn relative(&self, x: &Point, y: &Point) -> Point {
        self.op(&self.inv(x), y)
    }
}
