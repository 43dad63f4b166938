//! Standard self-similar sets used throughout the tests and the CLI examples.

use crate::geometry::{Geometry, Point};
use crate::ifs::{Ifs, Similarity};

fn build(g: Geometry, maps: &[(f64, &[f64])]) -> Ifs {
    let maps = maps
        .iter()
        .map(|(r, q)| Similarity { ratio: *r, translation: Point::new(q) })
        .collect();
    Ifs::new(g, maps).expect("preset is valid")
}

/// `S_1(x) = x/3`, `S_2(x) = x/3 + 2/3` on the line.
pub fn middle_thirds() -> Ifs {
    build(Geometry::Euclidean { dim: 1 }, &[(1.0 / 3.0, &[0.0]), (1.0 / 3.0, &[2.0 / 3.0])])
}

/// Four maps of ratio 1/4 onto the corners of the unit square, `s = 1`.
pub fn four_corner() -> Ifs {
    build(
        Geometry::Euclidean { dim: 2 },
        &[
            (0.25, &[0.0, 0.0]),
            (0.25, &[0.75, 0.0]),
            (0.25, &[0.0, 0.75]),
            (0.25, &[0.75, 0.75]),
        ],
    )
}

/// The middle-thirds set placed on the x-axis of the plane.
pub fn line_ifs() -> Ifs {
    build(Geometry::Euclidean { dim: 2 }, &[(1.0 / 3.0, &[0.0, 0.0]), (1.0 / 3.0, &[2.0 / 3.0, 0.0])])
}

/// `x/2` and `x/2 + 1/2`: the attractor is `[0, 1]` and the two cells touch.
pub fn halves() -> Ifs {
    build(Geometry::Euclidean { dim: 1 }, &[(0.5, &[0.0]), (0.5, &[0.5])])
}

/// Ratios 1/2 and 1/4 on the line, fixed points 0 and 1.
pub fn unequal_line() -> Ifs {
    build(Geometry::Euclidean { dim: 1 }, &[(0.5, &[0.0]), (0.25, &[0.75])])
}

/// Four corner maps of ratio 1/4 in the first Heisenberg group.
pub fn heisenberg_corners() -> Ifs {
    build(
        Geometry::Heisenberg1,
        &[
            (0.25, &[0.0, 0.0, 0.0]),
            (0.25, &[0.75, 0.0, 0.0]),
            (0.25, &[0.0, 0.75, 0.0]),
            (0.25, &[0.75, 0.75, 0.0]),
        ],
    )
}
