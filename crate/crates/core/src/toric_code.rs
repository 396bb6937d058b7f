//! Evaluation codes `C_L(P, G)` on toric surfaces and their duals.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::code::{LinearCode, Matrix};
use crate::galois::{Field, FieldElement};
use crate::geometry::{orbit_points, torus_points, Divisor, EvalPoint, Exponent, Fan, GeometryError, LogPoint, Polytope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("no evaluation points")]
    NoPoints,
    #[error("the Riemann-Roch space is empty")]
    EmptyBasis,
    #[error("monomial {a:?} has a pole at point {point}")]
    Pole { a: Exponent, point: usize },
    #[error("invalid Hansen parameters: {0}")]
    HansenParameters(String),
}

/// Which rational points make up `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSet {
    Torus,
    /// Torus points followed by the full orbits of the listed rays (0-based).
    TorusAndOrbits(Vec<usize>),
}

/// Torus points in discrete-log order, then whole ray orbits in the given order.
pub fn default_points(field: &Field, fan: &Fan, mode: &PointSet) -> Result<Vec<EvalPoint>, ToricError> {
    let mut pts = torus_points(field);
    if let PointSet::TorusAndOrbits(rays) = mode {
        for &r in rays {
            pts.extend(orbit_points(fan, r, field)?);
        }
    }
    Ok(pts)
}

/// Evaluates every exponent at every point; `rows[i][j]` is `x^{a_i}(P_j)`.
pub(crate) fn evaluation_rows(
    field: &Field,
    fan: &Fan,
    exps: &[Exponent],
    points: &[EvalPoint],
) -> Result<Vec<Vec<FieldElement>>, ToricError> {
    let logs = points
        .iter()
        .map(|p| LogPoint::new(p, fan, field))
        .collect::<Result<Vec<_>, _>>()?;
    exps.par_iter()
        .map(|&a| {
            logs.iter()
                .enumerate()
                .map(|(j, lp)| lp.eval(a, field).map_err(|_| ToricError::Pole { a, point: j }))
                .collect()
        })
        .collect()
}

/// Validated input for a toric code.
#[derive(Clone, Debug)]
pub struct ToricCodeSpec {
    field: Field,
    fan: Fan,
    divisor: Divisor,
    points: Vec<EvalPoint>,
    polytope: Polytope,
    basis: Vec<Exponent>,
}

impl ToricCodeSpec {
    /// Checks that the points are distinct, `P_G` is bounded with at least
    /// one lattice point, and no basis monomial has a pole at a point.
    pub fn new(field: Field, fan: Fan, divisor: Divisor, points: Vec<EvalPoint>) -> Result<ToricCodeSpec, ToricError> {
        if points.is_empty() {
            return Err(ToricError::NoPoints);
        }
        let mut seen = std::collections::HashMap::new();
        for (j, p) in points.iter().enumerate() {
            if let Some(&i) = seen.get(p) {
                return Err(ToricError::DuplicatePoint(i, j));
            }
            seen.insert(*p, j);
        }
        let polytope = fan.polytope(&divisor)?;
        if !polytope.is_bounded() {
            return Err(GeometryError::Unbounded.into());
        }
        let basis = polytope.lattice_points()?.to_vec();
        if basis.is_empty() {
            return Err(ToricError::EmptyBasis);
        }
        let logs = points
            .iter()
            .map(|p| LogPoint::new(p, &fan, &field))
            .collect::<Result<Vec<_>, _>>()?;
        for &a in &basis {
            for (j, lp) in logs.iter().enumerate() {
                if lp.eval(a, &field).is_err() {
                    return Err(ToricError::Pole { a, point: j });
                }
            }
        }
        Ok(ToricCodeSpec { field, fan, divisor, points, polytope, basis })
    }

    pub fn torus(field: Field, fan: Fan, divisor: Divisor) -> Result<ToricCodeSpec, ToricError> {
        let points = torus_points(&field);
        ToricCodeSpec::new(field, fan, divisor, points)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn points(&self) -> &[EvalPoint] {
        &self.points
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Lattice points of `P_G` in graded-lex order.
    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    /// Same spec with the points reordered by `perm` (new `j` is old `perm[j]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<ToricCodeSpec, ToricError> {
        let pts = perm.iter().map(|&i| self.points[i]).collect();
        ToricCodeSpec::new(self.field.clone(), self.fan.clone(), self.divisor.clone(), pts)
    }
}

#[derive(Clone, Debug)]
pub struct ToricCode {
    pub spec: ToricCodeSpec,
    /// `C_L(P, G)`.
    pub code: LinearCode,
    /// The dual `C`.
    pub dual: LinearCode,
    /// `|P_G ∩ M|`.
    pub kc: usize,
    /// Whether evaluation on `L(G)` is injective, i.e. `k = kc`.
    pub injective: bool,
    pub warnings: Vec<String>,
    /// One row per basis exponent, before reduction.
    pub evaluation: Matrix,
}

impl ToricCode {
    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }
}

pub fn build(spec: ToricCodeSpec) -> Result<ToricCode, ToricError> {
    let field = spec.field.clone();
    let q = field.order() as i64;
    let rows = evaluation_rows(&field, &spec.fan, &spec.basis, &spec.points)?;
    let evaluation = Matrix::from_rows(rows, spec.points.len());
    let code = LinearCode::from_generator(&field, &evaluation);
    let kc = spec.basis.len();
    let injective = code.k() == kc;
    let mut warnings = Vec::new();
    let large: Vec<Exponent> = spec.basis.iter().copied().filter(|a| a.iter().any(|x| x.abs() >= q - 1)).collect();
    if !large.is_empty() {
        warnings.push(format!(
            "{} basis exponents have a coordinate of absolute value >= q-1 = {}; characters may coincide on the torus",
            large.len(),
            q - 1
        ));
    }
    if !injective {
        warnings.push(format!("evaluation map is not injective: k = {} < |P_G ∩ M| = {kc}", code.k()));
    }
    let exps: HashSet<(i64, i64)> = spec.basis.iter().map(|a| (a[0].rem_euclid(q - 1), a[1].rem_euclid(q - 1))).collect();
    if exps.len() < kc && spec.points.iter().all(|p| matches!(p, EvalPoint::Torus { .. })) {
        warnings.push(format!("{} exponent classes mod q-1 collide", kc - exps.len()));
    }
    let dual = code.dual();
    Ok(ToricCode { spec, code, dual, kc, injective, warnings, evaluation })
}

/// The four polytope families with known parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HansenCase {
    /// Triangle (0,0), (a,a), (0,2a).
    A,
    /// Triangle (0,0), (a,0), (0,a).
    B,
    /// Rectangle [0,a] x [0,b].
    C,
    /// Trapezoid (0,0), (a,0), (0,b), (a, b+am).
    D,
}

impl std::str::FromStr for HansenCase {
    type Err = ToricError;
    fn from_str(s: &str) -> Result<Self, ToricError> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(HansenCase::A),
            "b" => Ok(HansenCase::B),
            "c" => Ok(HansenCase::C),
            "d" => Ok(HansenCase::D),
            other => Err(ToricError::HansenParameters(format!("unknown case {other:?}"))),
        }
    }
}

/// Fan and divisor whose polytope is the case's polygon.
pub fn hansen_fan(case: HansenCase, a: i64, b: i64, m: i64) -> Result<(Fan, Divisor), ToricError> {
    let bad = |msg: &str| Err(ToricError::HansenParameters(msg.to_string()));
    if a <= 0 {
        return bad("a must be positive");
    }
    Ok(match case {
        HansenCase::A => (Fan::new(vec![[1, 0], [-1, 1], [-1, -1]])?, Divisor::new(vec![0, 0, 2 * a])),
        HansenCase::B => (Fan::new(vec![[1, 0], [0, 1], [-1, -1]])?, Divisor::new(vec![0, 0, a])),
        HansenCase::C => {
            if b <= 0 {
                return bad("b must be positive");
            }
            (Fan::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]])?, Divisor::new(vec![0, 0, a, b]))
        }
        HansenCase::D => {
            if b <= 0 || m <= 0 {
                return bad("b and m must be positive");
            }
            (Fan::new(vec![[1, 0], [0, 1], [-1, 0], [m, -1]])?, Divisor::new(vec![0, 0, a, b]))
        }
    })
}

/// Torus code of a Hansen polygon.
pub fn hansen_code(case: HansenCase, a: i64, b: i64, m: i64, field: &Field) -> Result<ToricCode, ToricError> {
    let (fan, div) = hansen_fan(case, a, b, m)?;
    build(ToricCodeSpec::torus(field.clone(), fan, div)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{min_distance_exhaustive, DEFAULT_WORK_CAP};

    fn f(q: u32) -> Field {
        Field::with_order(q).unwrap()
    }

    fn fan1() -> Fan {
        Fan::new(vec![[2, -1], [-1, 2], [-1, -1]]).unwrap()
    }

    #[test]
    fn point_set_sizes() {
        assert_eq!(default_points(&f(5), &fan1(), &PointSet::Torus).unwrap().len(), 16);
        assert_eq!(default_points(&f(8), &fan1(), &PointSet::Torus).unwrap().len(), 49);
        let pts = default_points(&f(8), &fan1(), &PointSet::TorusAndOrbits(vec![0, 1, 2])).unwrap();
        assert_eq!(pts.len(), 70);
        assert!(default_points(&f(8), &fan1(), &PointSet::TorusAndOrbits(vec![3])).is_err());
    }

    #[test]
    fn fan1_small_row() {
        let t = build(ToricCodeSpec::torus(f(5), fan1(), Divisor::new(vec![0, 0, 3])).unwrap()).unwrap();
        assert_eq!((t.n(), t.k(), t.kc), (16, 4, 4));
        assert!(t.injective);
        assert_eq!(min_distance_exhaustive(&t.code, DEFAULT_WORK_CAP).unwrap().d, 10);
        assert_eq!(t.dual.k(), 12);
    }

    #[test]
    fn single_point_polytope_is_repetition() {
        let t = build(ToricCodeSpec::torus(f(7), fan1(), Divisor::new(vec![0, 0, 0])).unwrap()).unwrap();
        assert_eq!(t.spec.basis(), &[[0, 0]]);
        assert_eq!(t.k(), 1);
        assert_eq!(min_distance_exhaustive(&t.code, DEFAULT_WORK_CAP).unwrap().d, 36);
    }

    #[test]
    fn hansen_polygons() {
        let (fan, div) = hansen_fan(HansenCase::A, 2, 0, 0).unwrap();
        let p = fan.polytope(&div).unwrap();
        assert_eq!(p.lattice_points().unwrap().len(), 9);
        let (fan, div) = hansen_fan(HansenCase::D, 2, 1, 3).unwrap();
        let p = fan.polytope(&div).unwrap();
        // (a+1)(b+1) + m a(a+1)/2
        assert_eq!(p.lattice_points().unwrap().len(), 6 + 9);
        let t = hansen_code(HansenCase::B, 2, 0, 0, &f(5)).unwrap();
        assert_eq!((t.n(), t.k()), (16, 6));
        assert_eq!(min_distance_exhaustive(&t.code, DEFAULT_WORK_CAP).unwrap().d, 8);
        let t = hansen_code(HansenCase::C, 1, 1, 0, &f(5)).unwrap();
        assert_eq!(t.k(), 4);
        assert!("e".parse::<HansenCase>().is_err());
    }

    #[test]
    fn spec_validation() {
        let mut pts = torus_points(&f(5));
        pts.push(pts[3]);
        assert_eq!(
            ToricCodeSpec::new(f(5), fan1(), Divisor::new(vec![0, 0, 3]), pts).unwrap_err(),
            ToricError::DuplicatePoint(3, 16)
        );
        let orbit = orbit_points(&fan1(), 2, &f(5)).unwrap();
        assert!(matches!(
            ToricCodeSpec::new(f(5), fan1(), Divisor::new(vec![0, 0, 3]), orbit),
            Err(ToricError::Pole { .. })
        ));
        assert!(matches!(
            ToricCodeSpec::torus(f(5), fan1(), Divisor::new(vec![0, 0, -1])),
            Err(ToricError::EmptyBasis)
        ));
    }

    #[test]
    fn exponent_congruence_on_torus() {
        let field = f(7);
        let fan = fan1();
        let pts = torus_points(&field);
        let a = [1, 2];
        for shift in [[6, 0], [0, 6], [-6, 12]] {
            let b = [a[0] + shift[0], a[1] + shift[1]];
            let ra = evaluation_rows(&field, &fan, &[a], &pts).unwrap();
            let rb = evaluation_rows(&field, &fan, &[b], &pts).unwrap();
            assert_eq!(ra, rb);
        }
    }
}
