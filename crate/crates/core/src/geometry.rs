//! Two-dimensional fans, T-invariant divisors, their polytopes, and the
//! rational points at which monomial characters are evaluated.

use std::cmp::Ordering;

use num_rational::Ratio;
use thiserror::Error;

use crate::galois::{Field, FieldElement};

/// Exponent vector of a character `x^a`, or any point of the lattice M.
pub type Exponent = [i64; 2];

/// Exact rational number used for polytope vertices and areas.
pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("a fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray {index} ({x}, {y}) is not primitive")]
    NotPrimitive { index: usize, x: i64, y: i64 },
    #[error("rays {i} and {j} are not in strict counterclockwise order")]
    NotCounterclockwise { i: usize, j: usize },
    #[error("rays wind {0} times around the origin; the fan is not complete")]
    NotComplete(usize),
    #[error("fan is incomplete: successive rays must cover a full turn")]
    Incomplete,
    #[error("divisor has {got} coefficients but the fan has {expected} rays")]
    DivisorLength { expected: usize, got: usize },
    #[error("divisor is not Cartier")]
    NotCartier,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("ray index {0} out of range")]
    BadRay(usize),
    #[error("monomial {a:?} has a pole along D_{ray}")]
    Pole { a: Exponent, ray: usize },
}

#[inline]
pub fn det(a: Exponent, b: Exponent) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn pairing(a: Exponent, b: Exponent) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// 0 for angles in [0, pi), 1 for [pi, 2pi).
fn half(v: Exponent) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// A complete fan in R^2 given by its primitive rays in counterclockwise
/// order; the maximal cones are the successive pairs (v_i, v_{i+1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<Exponent>,
}

/// Per-cone smoothness, cone `i` being `(v_i, v_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothness {
    pub per_cone: Vec<bool>,
    pub smooth: bool,
}

impl Fan {
    pub fn new(rays: Vec<Exponent>) -> Result<Fan, GeometryError> {
        let s = rays.len();
        if s < 3 {
            return Err(if s == 2 { GeometryError::Incomplete } else { GeometryError::TooFewRays(s) });
        }
        for (index, v) in rays.iter().enumerate() {
            if gcd(v[0], v[1]) != 1 {
                return Err(GeometryError::NotPrimitive { index, x: v[0], y: v[1] });
            }
        }
        let mut winding = 0;
        for i in 0..s {
            let j = (i + 1) % s;
            if det(rays[i], rays[j]) <= 0 {
                return Err(GeometryError::NotCounterclockwise { i, j });
            }
            // each step turns by less than pi, so crossing from the lower
            // to the upper half-plane means passing angle 0
            if half(rays[i]) == 1 && half(rays[j]) == 0 {
                winding += 1;
            }
        }
        if winding != 1 {
            return Err(GeometryError::NotComplete(winding));
        }
        Ok(Fan { rays })
    }

    pub fn rays(&self) -> &[Exponent] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Exponent {
        self.rays[i]
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    fn cone(&self, i: usize) -> (Exponent, Exponent) {
        (self.rays[i], self.rays[(i + 1) % self.rays.len()])
    }

    pub fn smoothness(&self) -> Smoothness {
        let per_cone: Vec<bool> = (0..self.len())
            .map(|i| {
                let (a, b) = self.cone(i);
                det(a, b).abs() == 1
            })
            .collect();
        let smooth = per_cone.iter().all(|&b| b);
        Smoothness { per_cone, smooth }
    }

    pub fn is_smooth(&self) -> bool {
        self.smoothness().smooth
    }

    fn check_divisor(&self, div: &Divisor) -> Result<(), GeometryError> {
        if div.coeffs.len() != self.len() {
            return Err(GeometryError::DivisorLength { expected: self.len(), got: div.coeffs.len() });
        }
        Ok(())
    }

    /// Local linear data `m_sigma` for each maximal cone, when the divisor is
    /// Cartier: `<m, v_i> = -d_i` and `<m, v_{i+1}> = -d_{i+1}` with `m`
    /// integral.
    pub fn cartier_data(&self, div: &Divisor) -> Result<Option<Vec<Exponent>>, GeometryError> {
        self.check_divisor(div)?;
        let s = self.len();
        let mut data = Vec::with_capacity(s);
        for i in 0..s {
            let (a, b) = self.cone(i);
            let (ra, rb) = (-div.coeffs[i], -div.coeffs[(i + 1) % s]);
            let d = det(a, b);
            // Cramer on [a; b] m = [ra; rb]
            let x = ra * b[1] - rb * a[1];
            let y = a[0] * rb - b[0] * ra;
            if x % d != 0 || y % d != 0 {
                return Ok(None);
            }
            data.push([x / d, y / d]);
        }
        Ok(Some(data))
    }

    pub fn is_cartier(&self, div: &Divisor) -> Result<bool, GeometryError> {
        Ok(self.cartier_data(div)?.is_some())
    }

    /// Strict convexity of the support function psi_G of a Cartier divisor:
    /// each cone's linear piece lies strictly inside the half-plane of every
    /// ray outside that cone.
    pub fn is_ample(&self, div: &Divisor) -> Result<bool, GeometryError> {
        let data = self.cartier_data(div)?.ok_or(GeometryError::NotCartier)?;
        let s = self.len();
        for (c, m) in data.iter().enumerate() {
            if data[(c + 1) % s] == *m {
                return Ok(false);
            }
            for j in 0..s {
                if j == c || j == (c + 1) % s {
                    continue;
                }
                if pairing(*m, self.rays[j]) <= -div.coeffs[j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn polytope(&self, div: &Divisor) -> Result<Polytope, GeometryError> {
        self.check_divisor(div)?;
        Ok(Polytope::from_half_planes(self.rays.clone(), div.coeffs.clone()))
    }

    /// |X(F_q)| = (q-1)^2 torus points + s(q-1) ray-orbit points + s fixed points.
    pub fn rational_point_count(&self, q: u64) -> u64 {
        let s = self.len() as u64;
        (q - 1) * (q - 1) + s * (q - 1) + s
    }

    /// Generator of `v_i^perp` in M: `v_i` rotated by +90 degrees.
    pub fn orbit_generator(&self, i: usize) -> Exponent {
        let v = self.rays[i];
        [-v[1], v[0]]
    }

    /// An integral `c` with `<c, v_i> = value`.
    pub fn lift(&self, i: usize, value: i64) -> Exponent {
        let v = self.rays[i];
        let (g, s, t) = ext_gcd(v[0], v[1]);
        debug_assert_eq!(g.abs(), 1);
        [s * g * value, t * g * value]
    }
}

/// A T-invariant divisor `sum d_i D_i`, aligned with a fan's rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Divisor {
        Divisor { coeffs }
    }

    pub fn zero(len: usize) -> Divisor {
        Divisor { coeffs: vec![0; len] }
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        Divisor {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }
}

/// Graded-lexicographic order on exponents: total degree, then first
/// coordinate, then second.
pub fn grlex(a: &Exponent, b: &Exponent) -> Ordering {
    (a[0] + a[1], a[0], a[1]).cmp(&(b[0] + b[1], b[0], b[1]))
}

/// `{ u : <u, v_i> >= -d_i }` with its vertex cycle and lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    normals: Vec<Exponent>,
    offsets: Vec<i64>,
    vertices: Vec<[Rational; 2]>,
    bounded: bool,
    points: Vec<Exponent>,
}

fn cross(o: &[Rational; 2], a: &[Rational; 2], b: &[Rational; 2]) -> Rational {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise convex hull without collinear points.
fn convex_hull(mut pts: Vec<[Rational; 2]>) -> Vec<[Rational; 2]> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let zero = Rational::from_integer(0);
    let mut lower: Vec<[Rational; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= zero {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<[Rational; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= zero {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Normals positively span the plane: sorted by angle, every gap is < pi.
fn positively_spanning(normals: &[Exponent]) -> bool {
    if normals.len() < 3 {
        return false;
    }
    let mut sorted = normals.to_vec();
    sorted.sort_by(|a, b| {
        half(*a).cmp(&half(*b)).then_with(|| 0.cmp(&det(*a, *b)))
    });
    (0..sorted.len()).all(|i| det(sorted[i], sorted[(i + 1) % sorted.len()]) > 0)
}

impl Polytope {
    pub fn from_half_planes(normals: Vec<Exponent>, offsets: Vec<i64>) -> Polytope {
        assert_eq!(normals.len(), offsets.len());
        let bounded = positively_spanning(&normals);
        let s = normals.len();
        let mut candidates = Vec::new();
        for i in 0..s {
            for j in (i + 1)..s {
                let (a, b) = (normals[i], normals[j]);
                let d = det(a, b);
                if d == 0 {
                    continue;
                }
                let (ra, rb) = (-offsets[i], -offsets[j]);
                let x = Rational::new(ra * b[1] - rb * a[1], d);
                let y = Rational::new(a[0] * rb - b[0] * ra, d);
                let feasible = (0..s).all(|k| {
                    let n = normals[k];
                    x * n[0] + y * n[1] >= Rational::from_integer(-offsets[k])
                });
                if feasible {
                    candidates.push([x, y]);
                }
            }
        }
        let vertices = if bounded { convex_hull(candidates) } else { Vec::new() };
        let mut poly = Polytope { normals, offsets, vertices, bounded, points: Vec::new() };
        if bounded {
            poly.points = poly.enumerate_points();
        }
        poly
    }

    fn contains(&self, u: Exponent) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(n, d)| pairing(u, *n) >= -d)
    }

    fn enumerate_points(&self) -> Vec<Exponent> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let lo_x = self.vertices.iter().map(|v| v[0].floor().to_integer()).min().unwrap();
        let hi_x = self.vertices.iter().map(|v| v[0].ceil().to_integer()).max().unwrap();
        let lo_y = self.vertices.iter().map(|v| v[1].floor().to_integer()).min().unwrap();
        let hi_y = self.vertices.iter().map(|v| v[1].ceil().to_integer()).max().unwrap();
        let mut pts = Vec::new();
        for x in lo_x..=hi_x {
            for y in lo_y..=hi_y {
                if self.contains([x, y]) {
                    pts.push([x, y]);
                }
            }
        }
        pts.sort_by(grlex);
        pts
    }

    pub fn normals(&self) -> &[Exponent] {
        &self.normals
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// Counterclockwise vertex cycle.
    pub fn vertices(&self) -> &[[Rational; 2]] {
        &self.vertices
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn is_empty(&self) -> bool {
        self.bounded && self.vertices.is_empty()
    }

    /// Lattice points in graded-lexicographic order.
    pub fn lattice_points(&self) -> Result<&[Exponent], GeometryError> {
        if !self.bounded {
            return Err(GeometryError::Unbounded);
        }
        Ok(&self.points)
    }

    /// Euclidean area by the shoelace formula.
    pub fn volume(&self) -> Result<Rational, GeometryError> {
        if !self.bounded {
            return Err(GeometryError::Unbounded);
        }
        if self.vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        let n = self.vertices.len();
        let mut twice = Rational::from_integer(0);
        for i in 0..n {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            twice += a[0] * b[1] - a[1] * b[0];
        }
        let area = twice / 2;
        Ok(if area < Rational::from_integer(0) { -area } else { area })
    }

    /// The polytope shifted by the lattice vector `t`.
    pub fn translate(&self, t: Exponent) -> Polytope {
        let offsets = self
            .normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, d)| d - pairing(t, *n))
            .collect();
        Polytope::from_half_planes(self.normals.clone(), offsets)
    }
}

/// A rational point of the toric surface used for evaluation.
///
/// Ray indices are 0-based here (`D_{ray+1}` in one-based notation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvalPoint {
    Torus { t1: FieldElement, t2: FieldElement },
    RayOrbit { ray: usize, s: FieldElement },
}

/// The (q-1)^2 torus points ordered by (log t1, log t2).
pub fn torus_points(field: &Field) -> Vec<EvalPoint> {
    let units = field.units();
    let mut out = Vec::with_capacity(units.len() * units.len());
    for &t1 in &units {
        for &t2 in &units {
            out.push(EvalPoint::Torus { t1, t2 });
        }
    }
    out
}

/// The q-1 points of the one-dimensional orbit inside `D_{ray}`.
pub fn orbit_points(fan: &Fan, ray: usize, field: &Field) -> Result<Vec<EvalPoint>, GeometryError> {
    if ray >= fan.len() {
        return Err(GeometryError::BadRay(ray));
    }
    Ok(field.units().into_iter().map(|s| EvalPoint::RayOrbit { ray, s }).collect())
}

/// Discrete-log form of an evaluation point, for fast repeated evaluation.
#[derive(Clone, Copy, Debug)]
pub(crate) enum LogPoint {
    Torus(i64, i64),
    Orbit { normal: Exponent, generator: Exponent, log_s: i64, ray: usize },
}

impl LogPoint {
    pub(crate) fn new(point: &EvalPoint, fan: &Fan, field: &Field) -> Result<LogPoint, GeometryError> {
        match *point {
            EvalPoint::Torus { t1, t2 } => {
                let l1 = field.log(t1).expect("torus coordinates are nonzero") as i64;
                let l2 = field.log(t2).expect("torus coordinates are nonzero") as i64;
                Ok(LogPoint::Torus(l1, l2))
            }
            EvalPoint::RayOrbit { ray, s } => {
                if ray >= fan.len() {
                    return Err(GeometryError::BadRay(ray));
                }
                Ok(LogPoint::Orbit {
                    normal: fan.ray(ray),
                    generator: fan.orbit_generator(ray),
                    log_s: field.log(s).expect("orbit parameter is nonzero") as i64,
                    ray,
                })
            }
        }
    }

    #[inline]
    pub(crate) fn eval(&self, a: Exponent, field: &Field) -> Result<FieldElement, GeometryError> {
        match *self {
            LogPoint::Torus(l1, l2) => Ok(field.exp(a[0] * l1 + a[1] * l2)),
            LogPoint::Orbit { normal, generator, log_s, ray } => match pairing(a, normal).cmp(&0) {
                Ordering::Greater => Ok(FieldElement::ZERO),
                Ordering::Less => Err(GeometryError::Pole { a, ray }),
                Ordering::Equal => {
                    let lambda = if generator[0] != 0 { a[0] / generator[0] } else { a[1] / generator[1] };
                    Ok(field.exp(lambda * log_s))
                }
            },
        }
    }
}

/// Value of the character `x^a` at a point.
///
/// On the orbit in `D_i` the character tends to 0 when `<a, v_i> > 0`,
/// restricts to `s^lambda` when `a = lambda u_i` lies on `v_i^perp`, and has
/// a pole when `<a, v_i> < 0`.
pub fn evaluate_monomial(point: &EvalPoint, a: Exponent, fan: &Fan, field: &Field) -> Result<FieldElement, GeometryError> {
    LogPoint::new(point, fan, field)?.eval(a, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan1() -> Fan {
        Fan::new(vec![[2, -1], [-1, 2], [-1, -1]]).unwrap()
    }

    fn fan4() -> Fan {
        Fan::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    fn fan6() -> Fan {
        Fan::new(vec![[2, -1], [-1, 1], [-1, 0]]).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn validate_fan_cases() {
        assert!(Fan::new(vec![[1, 0], [0, 1], [-1, -1]]).is_ok());
        assert!(matches!(Fan::new(vec![[2, 0], [0, 1], [-1, -1]]), Err(GeometryError::NotPrimitive { index: 0, .. })));
        assert_eq!(Fan::new(vec![[1, 0], [0, 1]]), Err(GeometryError::Incomplete));
        // clockwise
        assert!(matches!(Fan::new(vec![[1, 0], [-1, -1], [0, 1]]), Err(GeometryError::NotCounterclockwise { .. })));
        // winds twice
        let twice = vec![[1, 0], [0, 1], [-1, 0], [0, -1], [1, 0], [0, 1], [-1, 0], [0, -1]];
        assert_eq!(Fan::new(twice), Err(GeometryError::NotComplete(2)));
    }

    #[test]
    fn smoothness_examples() {
        assert!(fan4().is_smooth());
        assert!(!fan1().is_smooth());
        assert!(fan6().is_smooth());
        let fan7 = Fan::new(vec![[5, -1], [-1, 5], [-1, -1]]).unwrap();
        assert!(!fan7.is_smooth());
    }

    #[test]
    fn cartier_examples() {
        let f = fan1();
        assert!(f.is_cartier(&Divisor::new(vec![1, 1, 1])).unwrap());
        assert!(!f.is_cartier(&Divisor::new(vec![0, 0, 1])).unwrap());
        for d1 in -4..=4 {
            for d2 in -4..=4 {
                for d3 in -4..=4 {
                    let expect = (d1 - d2) % 3 == 0 && (d2 - d3) % 3 == 0;
                    assert_eq!(f.is_cartier(&Divisor::new(vec![d1, d2, d3])).unwrap(), expect);
                }
            }
        }
        let fan2 = Fan::new(vec![[1, 0], [-1, 3], [0, -1]]).unwrap();
        for d1 in -4..=4 {
            for d2 in -4..=4 {
                for d3 in -2..=2 {
                    let expect = (d1 + d2) % 3 == 0;
                    assert_eq!(fan2.is_cartier(&Divisor::new(vec![d1, d2, d3])).unwrap(), expect, "{d1} {d2} {d3}");
                }
            }
        }
    }

    #[test]
    fn ample_examples() {
        let f6 = fan6();
        for d1 in -3..=3 {
            for d2 in -3..=3 {
                for d3 in -3..=3 {
                    let div = Divisor::new(vec![d1, d2, d3]);
                    assert_eq!(f6.is_ample(&div).unwrap(), d1 + d2 + d3 > 0, "{d1} {d2} {d3}");
                }
            }
        }
        assert!(fan1().is_ample(&Divisor::new(vec![1, 1, 1])).unwrap());
        assert_eq!(fan1().is_ample(&Divisor::new(vec![0, 0, 1])), Err(GeometryError::NotCartier));
    }

    #[test]
    fn polytope_vertices_from_decoding_example() {
        let g = fan1().polytope(&Divisor::new(vec![0, 0, 10])).unwrap();
        let mut v = g.vertices().to_vec();
        v.sort();
        assert_eq!(v, vec![[r(0, 1), r(0, 1)], [r(10, 3), r(20, 3)], [r(20, 3), r(10, 3)]]);
        assert_eq!(g.volume().unwrap(), r(50, 3));
        assert_eq!(g.lattice_points().unwrap().len(), 22);

        let gp = fan1().polytope(&Divisor::new(vec![2, 2, 2])).unwrap();
        let mut v = gp.vertices().to_vec();
        v.sort();
        assert_eq!(v, vec![[r(-2, 1), r(-2, 1)], [r(0, 1), r(2, 1)], [r(2, 1), r(0, 1)]]);
    }

    #[test]
    fn trivial_divisor_is_origin() {
        for f in [fan1(), fan4(), fan6()] {
            let p = f.polytope(&Divisor::zero(3)).unwrap();
            assert_eq!(p.lattice_points().unwrap(), &[[0, 0]]);
            assert_eq!(p.volume().unwrap(), r(0, 1));
        }
    }

    #[test]
    fn lattice_point_examples() {
        // direct double loop over a generous box as the oracle
        let oracle = |fan: &Fan, d: &[i64]| {
            let mut pts = Vec::new();
            for x in -30..=30 {
                for y in -30..=30 {
                    if fan.rays().iter().zip(d).all(|(v, di)| pairing([x, y], *v) >= -di) {
                        pts.push([x, y]);
                    }
                }
            }
            pts
        };
        let p = fan1().polytope(&Divisor::new(vec![0, 0, 3])).unwrap();
        assert_eq!(p.lattice_points().unwrap(), &[[0, 0], [1, 1], [1, 2], [2, 1]]);
        assert_eq!(oracle(&fan1(), &[0, 0, 3]).len(), 4);
        let fan7 = Fan::new(vec![[5, -1], [-1, 5], [-1, -1]]).unwrap();
        assert_eq!(fan7.polytope(&Divisor::new(vec![0, 0, 5])).unwrap().lattice_points().unwrap().len(), 11);
        for d in [[1, 2, 3], [2, 3, 4], [0, 4, 4], [4, 1, 2], [-1, 3, 5]] {
            for fan in [fan1(), fan6(), fan4()] {
                let mut got = fan.polytope(&Divisor::new(d.to_vec())).unwrap().lattice_points().unwrap().to_vec();
                got.sort();
                assert_eq!(got, oracle(&fan, &d), "{d:?}");
            }
        }
    }

    #[test]
    fn empty_polytope_is_valid() {
        let p = fan4().polytope(&Divisor::new(vec![0, 0, -1])).unwrap();
        assert!(p.is_empty());
        assert!(p.lattice_points().unwrap().is_empty());
        assert_eq!(p.volume(), Err(GeometryError::Empty));
    }

    #[test]
    fn unbounded_half_planes() {
        let p = Polytope::from_half_planes(vec![[1, 0], [0, 1]], vec![0, 0]);
        assert_eq!(p.lattice_points(), Err(GeometryError::Unbounded));
        assert_eq!(p.volume(), Err(GeometryError::Unbounded));
    }

    #[test]
    fn fan6_volume_closed_form() {
        // P_G is the triangle with vertices (-d1-d2, -d1-2d2), (d3, 2d3+d1),
        // (d3, d3-d2): base and height both d1+d2+d3. The product
        // (2d1+d3)(d3-d1-d2)/2 sometimes quoted for this fan disagrees.
        for d1 in 1..6 {
            for d2 in 1..6 {
                for d3 in (d1 + d2 + 1)..(d1 + d2 + 6) {
                    let p = fan6().polytope(&Divisor::new(vec![d1, d2, d3])).unwrap();
                    let s = d1 + d2 + d3;
                    assert_eq!(p.volume().unwrap(), r(s * s, 2), "{d1} {d2} {d3}");
                }
            }
        }
        let (d1, d2, d3) = (1, 1, 3);
        let p = fan6().polytope(&Divisor::new(vec![d1, d2, d3])).unwrap();
        assert_ne!(p.volume().unwrap(), r((2 * d1 + d3) * (d3 - d1 - d2), 2));
    }

    #[test]
    fn point_counts() {
        let f = fan1();
        let got: Vec<u64> = [2, 3, 4, 5, 7, 8].iter().map(|&q| f.rational_point_count(q)).collect();
        assert_eq!(got, vec![7, 13, 21, 31, 57, 73]);
    }

    #[test]
    fn torus_and_orbit_points() {
        for (q, n) in [(2, 1), (5, 16), (8, 49)] {
            let field = Field::with_order(q).unwrap();
            assert_eq!(torus_points(&field).len(), n);
        }
        let f2 = Field::with_order(2).unwrap();
        assert_eq!(torus_points(&f2), vec![EvalPoint::Torus { t1: FieldElement::ONE, t2: FieldElement::ONE }]);
        let f8 = Field::with_order(8).unwrap();
        let fan = fan1();
        let boundary: usize = (0..3).map(|i| orbit_points(&fan, i, &f8).unwrap().len()).sum();
        assert_eq!(boundary, 7 * 3);
        assert_eq!(boundary as u64, fan.rational_point_count(8) - 49 - 3);
        assert_eq!(fan.orbit_generator(2), [1, -1]);
        assert_eq!(pairing(fan.orbit_generator(2), fan.ray(2)), 0);
        assert_eq!(orbit_points(&fan, 3, &f8), Err(GeometryError::BadRay(3)));
    }

    #[test]
    fn monomial_evaluation_rules() {
        let f8 = Field::with_order(8).unwrap();
        let fan = fan1();
        let g = f8.primitive();
        let t = EvalPoint::Torus { t1: g, t2: f8.exp(3) };
        assert_eq!(evaluate_monomial(&t, [0, 0], &fan, &f8).unwrap(), FieldElement::ONE);
        assert_eq!(evaluate_monomial(&t, [2, -1], &fan, &f8).unwrap(), f8.exp(2 - 3));
        let on3 = EvalPoint::RayOrbit { ray: 2, s: g };
        assert_eq!(evaluate_monomial(&on3, [1, 1], &fan, &f8), Err(GeometryError::Pole { a: [1, 1], ray: 2 }));
        let s = f8.exp(5);
        let on1 = EvalPoint::RayOrbit { ray: 0, s };
        assert_eq!(fan.orbit_generator(0), [1, 2]);
        assert_eq!(evaluate_monomial(&on1, [1, 2], &fan, &f8).unwrap(), s);
        assert_eq!(evaluate_monomial(&on1, [-2, -4], &fan, &f8).unwrap(), f8.pow(s, -2).unwrap());
        assert_eq!(evaluate_monomial(&on1, [1, 1], &fan, &f8).unwrap(), FieldElement::ZERO);
    }

    #[test]
    fn lift_solves_pairing() {
        for fan in [fan1(), fan6(), Fan::new(vec![[5, -1], [-1, 5], [-1, -1]]).unwrap()] {
            for i in 0..fan.len() {
                for value in -5..=5 {
                    assert_eq!(pairing(fan.lift(i, value), fan.ray(i)), value);
                }
            }
        }
    }

    #[test]
    fn smooth_fans_make_every_divisor_cartier() {
        let fan3 = Fan::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap();
        for fan in [fan3, fan4(), fan6()] {
            for seed in 0..200i64 {
                let coeffs: Vec<i64> = (0..fan.len() as i64).map(|i| ((seed * 7919 + i * 104729) % 13) - 6).collect();
                assert!(fan.is_cartier(&Divisor::new(coeffs)).unwrap());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn lattice_count_translation_invariant(d1 in -3i64..6, d2 in -3i64..6, d3 in -3i64..8, tx in -5i64..5, ty in -5i64..5) {
                let p = fan1().polytope(&Divisor::new(vec![d1, d2, d3])).unwrap();
                let t = p.translate([tx, ty]);
                prop_assert_eq!(p.lattice_points().unwrap().len(), t.lattice_points().unwrap().len());
                if !p.is_empty() {
                    prop_assert_eq!(p.volume().unwrap(), t.volume().unwrap());
                }
            }

            #[test]
            fn torus_evaluation_is_multiplicative(a0 in -9i64..9, a1 in -9i64..9, b0 in -9i64..9, b1 in -9i64..9, l1 in 0i64..7, l2 in 0i64..7) {
                let f8 = Field::with_order(8).unwrap();
                let fan = fan1();
                let pt = EvalPoint::Torus { t1: f8.exp(l1), t2: f8.exp(l2) };
                let ea = evaluate_monomial(&pt, [a0, a1], &fan, &f8).unwrap();
                let eb = evaluate_monomial(&pt, [b0, b1], &fan, &f8).unwrap();
                let eab = evaluate_monomial(&pt, [a0 + b0, a1 + b1], &fan, &f8).unwrap();
                prop_assert_eq!(f8.mul(ea, eb), eab);
            }
        }
    }
}
