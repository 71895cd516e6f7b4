//! Small arrangements used by tests, examples and the acceptance suite.

use crate::arrangement::{AffineForm, Arrangement};
use crate::scalar::Scalar;
use num_rational::BigRational;

pub const BRAID_JSON: &str = include_str!("../../../fixtures/braid.json");
pub const BRAID_A_JSON: &str = include_str!("../../../fixtures/braid_a.json");

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn form(coeffs: &[i64], constant: i64) -> AffineForm {
    AffineForm {
        coeffs: coeffs.iter().map(|&c| q(c)).collect(),
        constant: q(constant),
    }
}

/// Lines `x, x-1, y-1, y, x-y` in ℂ², numbered 1..5.
pub fn braid() -> Arrangement {
    Arrangement::from_json(BRAID_JSON).expect("braid fixture")
}

/// The 2×5 matrix with rows `(0,1,1,0,-2)` and `(-1,0,0,-1,2)`.
pub fn braid_b() -> Vec<Vec<Scalar>> {
    vec![
        [0, 1, 1, 0, -2].iter().map(|&c| Scalar::int(c)).collect(),
        [-1, 0, 0, -1, 2].iter().map(|&c| Scalar::int(c)).collect(),
    ]
}

/// `n ≤ 4` lines `y = i·x + c_i` in general position (no parallels, no triple points).
pub fn generic_lines(n: usize) -> Arrangement {
    let intercepts = [0, 1, 3, 7];
    assert!(n <= intercepts.len());
    let forms = (0..n)
        .map(|i| form(&[i as i64 + 1, -1], intercepts[i]))
        .collect();
    Arrangement::new(2, forms).expect("generic lines")
}

/// The point `x = 0` in ℂ¹.
pub fn single_point() -> Arrangement {
    Arrangement::new(1, vec![form(&[1], 0)]).expect("single point")
}

/// The points `x = 0` and `x = 1` in ℂ¹; the complement has free fundamental group.
pub fn two_points() -> Arrangement {
    Arrangement::new(1, vec![form(&[1], 0), form(&[1], -1)]).expect("two points")
}

/// Three lines through the origin: `x, y, x + y`.
pub fn pencil3() -> Arrangement {
    Arrangement::new(2, vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[1, 1], 0)])
        .expect("pencil")
}

/// Coordinate planes plus `x + y + z = 1` in ℂ³.
pub fn tetra() -> Arrangement {
    Arrangement::new(
        3,
        vec![
            form(&[1, 0, 0], 0),
            form(&[0, 1, 0], 0),
            form(&[0, 0, 1], 0),
            form(&[1, 1, 1], -1),
        ],
    )
    .expect("tetra")
}

pub fn empty() -> Arrangement {
    Arrangement::new(2, vec![]).expect("empty")
}

/// The five arrangements used for lattice identity checks.
pub fn all() -> Vec<Arrangement> {
    vec![braid(), generic_lines(4), single_point(), pencil3(), tetra()]
}
