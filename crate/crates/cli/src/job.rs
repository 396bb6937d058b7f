//! Input documents: job specs and serialized code files.
//!
//! Both are TOML. A job spec describes a code to construct; a code file is
//! what `build` writes, the same description plus the computed matrix in a
//! `[code]` table.

use serde::{Deserialize, Serialize};
use toric_core::code::{LinearCode, Matrix};
use toric_core::geometry::{gcd, EvalPoint, Fan, GeometryError};
use toric_core::toric_code::ToricError;
use toric_core::{Divisor, Field, FieldElement, ToricCode, ToricCodeSpec};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Coefficients of the defining polynomial, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rays: Vec<[i64; 2]>,
}

/// Evaluation points, in this order: the torus, whole orbits, single orbit points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsSpec {
    #[serde(default = "yes")]
    pub torus: bool,
    /// 1-based ray indices whose full orbits are appended.
    #[serde(default)]
    pub orbits: Vec<usize>,
    /// `[ray, s]` pairs: 1-based ray index and the element index of `s`.
    #[serde(default)]
    pub orbit_points: Vec<[u32; 2]>,
}

fn yes() -> bool {
    true
}

impl Default for PointsSpec {
    fn default() -> Self {
        PointsSpec { torus: true, orbits: Vec::new(), orbit_points: Vec::new() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MindistSpec {
    pub method: Option<String>,
    pub workers: Option<usize>,
    pub work_cap: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSpec {
    pub gprime: Vec<i64>,
    pub list_cap: Option<usize>,
    pub work_cap: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default = "yes")]
    pub gv: bool,
    #[serde(default = "yes")]
    pub segment: bool,
    #[serde(default = "yes")]
    pub conjectures: bool,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        BoundsSpec { gv: true, segment: true, conjectures: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub divisor: Vec<i64>,
    pub field: FieldSpec,
    pub fan: FanSpec,
    #[serde(default)]
    pub points: PointsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mindist: Option<MindistSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<DecoderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeBlock {
    pub n: usize,
    pub k: usize,
    pub kc: usize,
    pub injective: bool,
    pub basis: Vec<[i64; 2]>,
    /// One row per basis exponent, as element indices.
    pub generator: Vec<Vec<u16>>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Output of `build`. The geometry block is optional so that plain
/// generator matrices can be fed to `mindist`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<i64>>,
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointsSpec>,
    pub code: CodeBlock,
}

/// Either kind of input document.
pub enum Input {
    Job(JobSpec),
    Code(CodeFile),
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn read_input(path: &str) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    parse_input(&text).map_err(|e| match e {
        CliError::Validation(m) => invalid(format!("{path}: {m}")),
        other => other,
    })
}

pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
    if table.contains_key("code") {
        toml::from_str(text).map(Input::Code).map_err(|e| invalid(e.to_string()))
    } else {
        toml::from_str(text).map(Input::Job).map_err(|e| invalid(e.to_string()))
    }
}

pub fn field(spec: &FieldSpec) -> Result<Field, CliError> {
    Field::new(spec.p, spec.m, spec.modulus.as_deref()).map_err(|e| invalid(format!("field: {e}")))
}

pub fn fan(spec: &FanSpec) -> Result<Fan, CliError> {
    for (i, r) in spec.rays.iter().enumerate() {
        let g = gcd(r[0], r[1]);
        if g != 1 {
            return Err(invalid(format!("fan.rays[{i}]: ray not primitive: ({}, {}) has gcd {g}", r[0], r[1])));
        }
    }
    Fan::new(spec.rays.clone()).map_err(|e| invalid(format!("fan.rays: {e}")))
}

fn points(spec: &PointsSpec, field: &Field, fan: &Fan) -> Result<Vec<EvalPoint>, CliError> {
    let rays = 1..=fan.len();
    let mut out = Vec::new();
    if spec.torus {
        out.extend(toric_core::geometry::torus_points(field));
    }
    for (i, &r) in spec.orbits.iter().enumerate() {
        if !rays.contains(&r) {
            return Err(invalid(format!("points.orbits[{i}]: ray {r} outside 1..={}", fan.len())));
        }
        out.extend(toric_core::geometry::orbit_points(fan, r - 1, field).map_err(|e| invalid(e.to_string()))?);
    }
    for (i, &[r, s]) in spec.orbit_points.iter().enumerate() {
        if !rays.contains(&(r as usize)) {
            return Err(invalid(format!("points.orbit_points[{i}]: ray {r} outside 1..={}", fan.len())));
        }
        if s == 0 || s >= field.order() {
            return Err(invalid(format!(
                "points.orbit_points[{i}]: s = {s} must be a nonzero element index below {}",
                field.order()
            )));
        }
        out.push(EvalPoint::RayOrbit { ray: r as usize - 1, s: FieldElement(s as u16) });
    }
    if out.is_empty() {
        return Err(invalid("points: no evaluation points selected"));
    }
    Ok(out)
}

/// Structural checks, then the validated toric code input.
pub fn toric_spec(
    field_spec: &FieldSpec,
    fan_spec: &FanSpec,
    divisor: &[i64],
    points_spec: &PointsSpec,
) -> Result<ToricCodeSpec, CliError> {
    let f = field(field_spec)?;
    let fan = fan(fan_spec)?;
    if divisor.len() != fan.len() {
        return Err(invalid(format!(
            "divisor: has {} coefficients but the fan has {} rays",
            divisor.len(),
            fan.len()
        )));
    }
    let pts = points(points_spec, &f, &fan)?;
    ToricCodeSpec::new(f, fan, Divisor::new(divisor.to_vec()), pts).map_err(|e| match e {
        ToricError::DuplicatePoint(..) => invalid(format!("points: {e}")),
        ToricError::Geometry(GeometryError::DivisorLength { .. }) => invalid(format!("divisor: {e}")),
        other => CliError::Compute(other.to_string()),
    })
}

impl JobSpec {
    pub fn toric_spec(&self) -> Result<ToricCodeSpec, CliError> {
        toric_spec(&self.field, &self.fan, &self.divisor, &self.points)
    }
}

impl CodeFile {
    pub fn from_code(job: &JobSpec, tc: &ToricCode) -> CodeFile {
        let field = tc.spec.field();
        CodeFile {
            divisor: Some(job.divisor.clone()),
            field: FieldSpec {
                p: field.characteristic(),
                m: field.degree(),
                modulus: Some(field.modulus().to_vec()),
            },
            fan: Some(job.fan.clone()),
            points: Some(job.points.clone()),
            code: CodeBlock {
                n: tc.n(),
                k: tc.k(),
                kc: tc.kc,
                injective: tc.injective,
                basis: tc.spec.basis().to_vec(),
                generator: tc.evaluation.to_rows().iter().map(|r| r.iter().map(|x| x.0).collect()).collect(),
                warnings: tc.warnings.clone(),
            },
        }
    }

    /// The geometric description, if the file carries one.
    pub fn toric_spec(&self) -> Option<Result<ToricCodeSpec, CliError>> {
        let (fan, divisor) = (self.fan.as_ref()?, self.divisor.as_ref()?);
        let pts = self.points.clone().unwrap_or_default();
        Some(toric_spec(&self.field, fan, divisor, &pts))
    }

    /// The linear code spanned by the stored rows, after range checks.
    pub fn linear_code(&self) -> Result<LinearCode, CliError> {
        let f = field(&self.field)?;
        let n = self.code.n;
        let mut rows = Vec::with_capacity(self.code.generator.len());
        for (i, row) in self.code.generator.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("code.generator[{i}]: {} entries, expected n = {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x as u32 >= f.order()) {
                return Err(invalid(format!("code.generator[{i}]: element index {x} outside GF({})", f.order())));
            }
            rows.push(row.iter().map(|&x| FieldElement(x)).collect());
        }
        let code = LinearCode::from_generator(&f, &Matrix::from_rows(rows, n));
        if code.k() != self.code.k {
            return Err(invalid(format!("code.k: declared {} but the rows have rank {}", self.code.k, code.k())));
        }
        Ok(code)
    }
}

/// Serialized form; stable byte-for-byte for equal inputs.
pub fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("documents serialize")
}

/// Received word: whitespace-separated element indices.
pub fn read_vector(path: &str, field: &Field, n: usize) -> Result<Vec<FieldElement>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{path}: {e}")))?;
    let mut out = Vec::new();
    for (i, tok) in text.split_whitespace().enumerate() {
        let x: u32 = tok.parse().map_err(|_| invalid(format!("{path}: entry {i}: {tok:?} is not an integer")))?;
        if x >= field.order() {
            return Err(invalid(format!("{path}: entry {i}: {x} outside GF({})", field.order())));
        }
        out.push(FieldElement(x as u16));
    }
    if out.len() != n {
        return Err(invalid(format!("{path}: {} entries, expected n = {n}", out.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAN7: &str = "divisor = [0, 0, 5]\n[field]\np = 2\nm = 3\n[fan]\nrays = [[5, -1], [-1, 5], [-1, -1]]\n";

    #[test]
    fn parses_minimal_job() {
        let Input::Job(job) = parse_input(FAN7).unwrap() else { panic!("expected job") };
        assert!(job.points.torus);
        assert_eq!(job.toric_spec().unwrap().points().len(), 49);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = format!("{FAN7}[points]\ntorus = true\nextra = 1\n");
        let Err(CliError::Validation(msg)) = parse_input(&bad) else { panic!("expected rejection") };
        assert!(msg.contains("extra"), "{msg}");
    }

    #[test]
    fn non_primitive_ray_named() {
        let job: JobSpec = toml::from_str(&FAN7.replace("[5, -1]", "[2, 0]")).unwrap();
        let Err(CliError::Validation(msg)) = job.toric_spec() else { panic!("expected rejection") };
        assert!(msg.starts_with("fan.rays[0]: ray not primitive"), "{msg}");
    }

    #[test]
    fn orbit_point_bounds() {
        let job: JobSpec = toml::from_str(&format!("{FAN7}[points]\norbit_points = [[4, 1]]\n")).unwrap();
        assert!(matches!(job.toric_spec(), Err(CliError::Validation(_))));
        let job: JobSpec = toml::from_str(&format!("{FAN7}[points]\norbit_points = [[1, 0]]\n")).unwrap();
        assert!(matches!(job.toric_spec(), Err(CliError::Validation(_))));
    }

    #[test]
    fn code_file_round_trip() {
        let Input::Job(job) = parse_input(&FAN7.replace("[0, 0, 5]", "[0, 0, 2]")).unwrap() else { panic!() };
        let tc = toric_core::build(job.toric_spec().unwrap()).unwrap();
        let file = CodeFile::from_code(&job, &tc);
        let text = to_toml(&file);
        let Input::Code(back) = parse_input(&text).unwrap() else { panic!("expected code file") };
        assert_eq!(back, file);
        assert_eq!(to_toml(&back), text);
        let code = back.linear_code().unwrap();
        assert!(code.same_code(&tc.code));
        assert_eq!(code.generator(), tc.code.generator());
        let rebuilt = toric_core::build(back.toric_spec().unwrap().unwrap()).unwrap();
        assert_eq!(rebuilt.evaluation, tc.evaluation);
    }

    #[test]
    fn declared_rank_checked() {
        let Input::Job(job) = parse_input(FAN7).unwrap() else { panic!() };
        let tc = toric_core::build(job.toric_spec().unwrap()).unwrap();
        let mut file = CodeFile::from_code(&job, &tc);
        file.code.k += 1;
        assert!(matches!(file.linear_code(), Err(CliError::Validation(_))));
        file.code.k -= 1;
        file.code.generator[0][0] = 8;
        assert!(matches!(file.linear_code(), Err(CliError::Validation(_))));
    }
}
