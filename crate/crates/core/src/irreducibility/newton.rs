use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{valuation, Valuation};
use crate::poly::RationalPoly;

/// One edge of the lower hull; `slope_num/slope_den` in lowest terms,
/// `length` its horizontal extent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub slope_num: i64,
    pub slope_den: i64,
    pub length: usize,
}

/// Lower convex hull of `{(r, ν_p(a_r)) : a_r ≠ 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub points: Vec<(usize, i64)>,
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

pub(crate) fn check_monic(f: &RationalPoly) -> Result<usize> {
    match f.degree() {
        Some(n) if n >= 1 && f.is_monic() => Ok(n),
        _ => Err(Error::InvalidPolynomial(format!(
            "expected a monic polynomial of degree >= 1, got {f}"
        ))),
    }
}

/// Cross product of `(b − a) × (c − a)`; positive for a left turn.
fn cross(a: (usize, i64), b: (usize, i64), c: (usize, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

impl NewtonPolygon {
    /// Lower hull of the given points (sorted by abscissa, distinct abscissae).
    /// Collinear interior points are dropped, so slopes strictly increase.
    pub fn from_points(prime: u64, points: Vec<(usize, i64)>) -> Self {
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
                hull.pop();
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let dx = (w[1].0 - w[0].0) as i64;
                let dy = w[1].1 - w[0].1;
                let g = dy.gcd(&dx);
                Segment {
                    slope_num: dy / g,
                    slope_den: dx / g,
                    length: dx as usize,
                }
            })
            .collect();
        Self {
            prime,
            points,
            vertices: hull,
            segments,
        }
    }

    pub fn is_single_segment(&self) -> bool {
        self.segments.len() == 1
    }

    /// True when no point lies strictly below the chord from `(0, ν_p(a_0))`
    /// to `(n, 0)`; for monic input this is the same as a single segment.
    pub fn on_or_above_chord(&self) -> bool {
        let (Some(&(x0, y0)), Some(&(xn, yn))) = (self.points.first(), self.points.last()) else {
            return true;
        };
        self.points
            .iter()
            .all(|&pt| cross((x0, y0), (xn, yn), pt) >= 0)
    }
}

/// Newton polygon of a monic polynomial with nonzero constant term.
pub fn newton_polygon(f: &RationalPoly, p: u64) -> Result<NewtonPolygon> {
    check_monic(f)?;
    if f.coeff(0).is_zero() {
        return Err(Error::InvalidPolynomial(
            "Newton polygon needs a nonzero constant term".into(),
        ));
    }
    let mut points = Vec::new();
    for (r, c) in f.coeffs().iter().enumerate() {
        if let Valuation::Finite(v) = valuation(c, p)? {
            points.push((r, v));
        }
    }
    Ok(NewtonPolygon::from_points(p, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_polygon() {
        let f = RationalPoly::from_integers([2, 2, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 1), (2, 0)]);
        assert_eq!(
            np.segments,
            vec![Segment {
                slope_num: -1,
                slope_den: 2,
                length: 2
            }]
        );
        assert!(np.is_single_segment());
    }

    #[test]
    fn two_segments() {
        let f = RationalPoly::from_integers([4, 1, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 2), (1, 0), (2, 0)]);
        assert_eq!(np.segments.len(), 2);
        assert!(np.segments[0].slope_num * np.segments[1].slope_den
            < np.segments[1].slope_num * np.segments[0].slope_den);
        assert!(!np.on_or_above_chord());
    }

    #[test]
    fn phi_12_polygon() {
        let f = RationalPoly::new(vec!["-432000/691".parse().unwrap(), 1.into()]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 7), (1, 0)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(newton_polygon(&RationalPoly::from_integers([0, 1, 1]), 2).is_err());
        assert!(newton_polygon(&RationalPoly::from_integers([1, 2]), 2).is_err());
        assert!(newton_polygon(&RationalPoly::from_integers([1]), 2).is_err());
    }

    #[test]
    fn collinear_points_are_merged() {
        // x^3 + 2x^2 + 4x + 8 at 2: points (0,3),(1,2),(2,1),(3,0) on one line
        let f = RationalPoly::from_integers([8, 4, 2, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 3), (3, 0)]);
        assert_eq!(np.segments[0].slope_num, -1);
        assert_eq!(np.segments[0].slope_den, 1);
    }
}
