//! Cylindrical cell models of the joint space and of the NN aspect.
//!
//! A cell is a stack of bounds, one per coordinate, in projection order.
//! Each bound names a polynomial in the coordinates fixed so far plus the
//! current one, together with a 1-based root index: the notation
//! `[P, n, t, Q, m]` reads "t runs from the n-th real root of P to the m-th
//! real root of Q". The cells are open; points where a bound polynomial
//! vanishes are reported as boundary points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, RootIsolator};
use crate::tolerance::Tolerances;

/// Slack on the coordinate used to decide that a vanishing bound polynomial
/// belongs to this cell's closure.
const CLOSURE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPoly {
    pub name: String,
    pub expression: String,
    pub poly: MultiPoly,
}

impl NamedPoly {
    fn new(name: &str, expression: &str, nvars: usize, terms: &[(f64, [u32; 3])]) -> Self {
        NamedPoly {
            name: name.to_string(),
            expression: expression.to_string(),
            poly: MultiPoly::new(
                nvars,
                terms
                    .iter()
                    .map(|(c, e)| (*c, e[..nvars].to_vec()))
                    .collect(),
            ),
        }
    }
}

/// The `root`-th (1-based) real root of `poly` in the current coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRef {
    pub poly: NamedPoly,
    pub root: usize,
}

impl RootRef {
    /// Value of the referenced root given the earlier coordinates, or `None`
    /// when the specialized polynomial has too few real roots.
    pub fn value(&self, prefix: &[f64], width: f64) -> Option<f64> {
        let p = self.poly.poly.specialize(prefix);
        let iso = RootIsolator::new(&p).ok()?;
        iso.all_roots(width).get(self.root.checked_sub(1)?).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellBound {
    pub lower: RootRef,
    pub upper: RootRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CadCell {
    pub coordinates: Vec<String>,
    pub bounds: Vec<CellBound>,
    pub sample: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

impl CadCell {
    /// Bound strings in `[P, n, t, Q, m]` form.
    pub fn bound_strings(&self) -> Vec<String> {
        self.bounds
            .iter()
            .zip(&self.coordinates)
            .map(|(b, c)| {
                format!(
                    "[{}, {}, {}, {}, {}]",
                    b.lower.poly.name, b.lower.root, c, b.upper.poly.name, b.upper.root
                )
            })
            .collect()
    }

    pub fn locate(&self, point: &[f64], tol: &Tolerances) -> Result<Membership> {
        if point.len() != self.coordinates.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coordinates.len(),
                got: point.len(),
            });
        }
        let mut on_boundary = false;
        for (k, bound) in self.bounds.iter().enumerate() {
            let v = point[k];
            let prefix = &point[..k];
            let lo = bound.lower.value(prefix, tol.root_width);
            let hi = bound.upper.value(prefix, tol.root_width);
            let vanishes = |r: &RootRef| r.poly.poly.eval(&point[..=k]).abs() <= tol.boundary;
            let near = |edge: Option<f64>| edge.is_some_and(|e| (v - e).abs() <= CLOSURE_SLACK);
            let touches_lower = vanishes(&bound.lower) && near(lo);
            let touches_upper = vanishes(&bound.upper) && near(hi);
            match (lo, hi) {
                _ if touches_lower || touches_upper => on_boundary = true,
                (Some(lo), Some(hi)) if lo < v && v < hi => {}
                _ => return Ok(Membership::Outside),
            }
        }
        Ok(if on_boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Reduced joint space `(mu2z, mu3z, mu3y)`.
    Joint,
    /// Orientation workspace `(q2, q3, q4)`.
    Workspace,
}

/// Result of locating a point among the cells of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// 0-based index of the cell strictly containing the point.
    pub cell: Option<usize>,
    pub boundary: bool,
}

impl Classification {
    /// 1-based cell number as shown by `cells list`, 0 when none.
    pub fn number(&self) -> usize {
        self.cell.map_or(0, |c| c + 1)
    }
}

/// Locates `point` in `cells`. A point on any cell's boundary is never
/// assigned to a cell.
pub fn classify_point(
    cells: &[CadCell],
    point: &[f64],
    tol: &Tolerances,
) -> Result<Classification> {
    let mut interior = None;
    let mut boundary = false;
    for (i, cell) in cells.iter().enumerate() {
        match cell.locate(point, tol)? {
            Membership::Interior if interior.is_none() => interior = Some(i),
            Membership::Interior => {}
            Membership::Boundary => boundary = true,
            Membership::Outside => {}
        }
    }
    Ok(Classification {
        cell: if boundary { None } else { interior },
        boundary,
    })
}

// Exponents are over (mu2z, mu3z, mu3y) or (q2, q3, q4).
fn joint_polys() -> [NamedPoly; 8] {
    [
        NamedPoly::new(
            "P1_R2Z",
            "mu2z + 1",
            1,
            &[(1.0, [1, 0, 0]), (1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P2_R2Z",
            "2*mu2z + 1",
            1,
            &[(2.0, [1, 0, 0]), (1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P3_R2Z",
            "2*mu2z - 1",
            1,
            &[(2.0, [1, 0, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P4_R2Z",
            "mu2z - 1",
            1,
            &[(1.0, [1, 0, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P1_R3Z",
            "mu2z - mu3z - 1",
            2,
            &[(1.0, [1, 0, 0]), (-1.0, [0, 1, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P2_R3Z",
            "mu2z - mu3z + 1",
            2,
            &[(1.0, [1, 0, 0]), (-1.0, [0, 1, 0]), (1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "P3_R3Z",
            "4*(mu2z^2 - mu2z*mu3z + mu3z^2) - 3",
            2,
            &[
                (4.0, [2, 0, 0]),
                (-4.0, [1, 1, 0]),
                (4.0, [0, 2, 0]),
                (-3.0, [0, 0, 0]),
            ],
        ),
        NamedPoly::new(
            "P1_R3Y",
            "(mu2z - mu3z)^2 + mu3y^2 - 1",
            3,
            &[
                (1.0, [2, 0, 0]),
                (-2.0, [1, 1, 0]),
                (1.0, [0, 2, 0]),
                (1.0, [0, 0, 2]),
                (-1.0, [0, 0, 0]),
            ],
        ),
    ]
}

/// Projection polynomials of the joint-space discriminant variety, in
/// `mu2z`, `mu3z` and `mu3y` order.
pub fn joint_projection_polys() -> Vec<NamedPoly> {
    joint_polys().to_vec()
}

fn bound(lower: &NamedPoly, n: usize, upper: &NamedPoly, m: usize) -> CellBound {
    CellBound {
        lower: RootRef {
            poly: lower.clone(),
            root: n,
        },
        upper: RootRef {
            poly: upper.clone(),
            root: m,
        },
    }
}

/// The three cells of the reduced joint space.
pub fn joint_space_cells() -> Vec<CadCell> {
    let [p1, p2, p3, p4, _, _, ellipse, circle] = joint_polys();
    let coordinates = vec!["mu2z".to_string(), "mu3z".to_string(), "mu3y".to_string()];
    let mu2z_ranges = [(&p1, &p2), (&p2, &p3), (&p3, &p4)];
    let samples = [[-0.75, -0.375, 0.0], [0.0, 0.0, 0.0], [0.75, 0.375, 0.0]];
    mu2z_ranges
        .iter()
        .zip(samples)
        .map(|((lo, hi), sample)| CadCell {
            coordinates: coordinates.clone(),
            bounds: vec![
                bound(lo, 1, hi, 1),
                bound(&ellipse, 1, &ellipse, 2),
                bound(&circle, 1, &circle, 2),
            ],
            sample: sample.to_vec(),
        })
        .collect()
}

fn nn_polys() -> [NamedPoly; 4] {
    [
        NamedPoly::new(
            "2q2^2-1",
            "2*q2^2 - 1",
            1,
            &[(2.0, [2, 0, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new("q2", "q2", 1, &[(1.0, [1, 0, 0])]),
        NamedPoly::new(
            "2q2^2+2q3^2-1",
            "2*q2^2 + 2*q3^2 - 1",
            2,
            &[(2.0, [2, 0, 0]), (2.0, [0, 2, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "2q2^2+2q4^2-1",
            "2*q2^2 + 2*q4^2 - 1",
            3,
            &[(2.0, [2, 0, 0]), (2.0, [0, 0, 2]), (-1.0, [0, 0, 0])],
        ),
    ]
}

/// The two cells of the NN aspect over `(q2, q3, q4)`.
pub fn nn_aspect_cells() -> Vec<CadCell> {
    let [edge, axis, c3, c4] = nn_polys();
    let coordinates = vec!["q2".to_string(), "q3".to_string(), "q4".to_string()];
    vec![
        CadCell {
            coordinates: coordinates.clone(),
            bounds: vec![
                bound(&edge, 1, &axis, 1),
                bound(&c3, 1, &c3, 2),
                bound(&c4, 1, &c4, 2),
            ],
            sample: vec![-0.3, 0.0, 0.0],
        },
        CadCell {
            coordinates,
            bounds: vec![
                bound(&axis, 1, &edge, 2),
                bound(&c3, 1, &c3, 2),
                bound(&c4, 1, &c4, 2),
            ],
            sample: vec![0.3, 0.0, 0.0],
        },
    ]
}

/// Projection polynomials of the workspace variety, grouped by axis
/// `q2`, `q3`, `q4`.
pub fn workspace_projection_polys() -> [Vec<NamedPoly>; 3] {
    let q2 = vec![
        NamedPoly::new("q2", "q2", 1, &[(1.0, [1, 0, 0])]),
        NamedPoly::new("q2-1", "q2 - 1", 1, &[(1.0, [1, 0, 0]), (-1.0, [0, 0, 0])]),
        NamedPoly::new("q2+1", "q2 + 1", 1, &[(1.0, [1, 0, 0]), (1.0, [0, 0, 0])]),
        NamedPoly::new(
            "2q2^2-1",
            "2*q2^2 - 1",
            1,
            &[(2.0, [2, 0, 0]), (-1.0, [0, 0, 0])],
        ),
    ];
    let q3 = vec![
        NamedPoly::new(
            "2q3^2-1",
            "2*q3^2 - 1",
            2,
            &[(2.0, [0, 2, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "2q2^2+2q3^2-1",
            "2*q2^2 + 2*q3^2 - 1",
            2,
            &[(2.0, [2, 0, 0]), (2.0, [0, 2, 0]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "q2^2+q3^2-1",
            "q2^2 + q3^2 - 1",
            2,
            &[(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (-1.0, [0, 0, 0])],
        ),
    ];
    let q4 = vec![
        NamedPoly::new(
            "2q2^2+2q4^2-1",
            "2*q2^2 + 2*q4^2 - 1",
            3,
            &[(2.0, [2, 0, 0]), (2.0, [0, 0, 2]), (-1.0, [0, 0, 0])],
        ),
        NamedPoly::new(
            "q2^2+q3^2+q4^2-1",
            "q2^2 + q3^2 + q4^2 - 1",
            3,
            &[
                (1.0, [2, 0, 0]),
                (1.0, [0, 2, 0]),
                (1.0, [0, 0, 2]),
                (-1.0, [0, 0, 0]),
            ],
        ),
    ];
    [q2, q3, q4]
}

/// Polynomial components of a discriminant variety.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantVariety {
    pub space: Space,
    pub components: Vec<NamedPoly>,
}

impl DiscriminantVariety {
    pub fn of(space: Space) -> Self {
        let components = match space {
            Space::Joint => {
                let [_, _, _, _, minus, plus, ellipse, circle] = joint_polys();
                vec![minus, plus, ellipse, circle]
            }
            Space::Workspace => {
                let [_, _, c3, c4] = nn_polys();
                let sphere = NamedPoly::new(
                    "q2^2+q3^2+q4^2-1",
                    "q2^2 + q3^2 + q4^2 - 1",
                    3,
                    &[
                        (1.0, [2, 0, 0]),
                        (1.0, [0, 2, 0]),
                        (1.0, [0, 0, 2]),
                        (-1.0, [0, 0, 0]),
                    ],
                );
                vec![c3, c4, sphere]
            }
        };
        DiscriminantVariety { space, components }
    }

    pub fn residual(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: point.len(),
            });
        }
        // Component polynomials may use fewer variables than the ambient space.
        Ok(self
            .components
            .iter()
            .map(|c| c.poly.eval(&point[..c.poly.nvars()]))
            .collect())
    }
}

pub fn discriminant_variety_residual(space: Space, point: &[f64]) -> Result<Vec<f64>> {
    DiscriminantVariety::of(space).residual(point)
}

impl fmt::Display for CadCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bound_strings().join("  "))
    }
}
