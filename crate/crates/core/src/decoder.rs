//! Error-locator decoding of the dual code `C = C_L(P, G)^perp`.
//!
//! A second divisor `G'` supplies candidate locators `f in L(G')`; the
//! products `f_j g_i` with `g_i in L(G - G')` lie in `L(G)`, so brackets
//! `[r, f_j g_i]` see only the error. Error values are then solved on the
//! zero set of the locator.
//!
//! At a point of the orbit in `D_i`, members of `L(G')` are evaluated in a
//! local trivialization: `x^a` becomes `x^(a + c)` with `<c, v_i> = G'_i`,
//! and members of `L(G - G')` become `x^(b - c)`. Products are unchanged,
//! and a section vanishing along `D_i` evaluates to zero there.

use rayon::prelude::*;
use thiserror::Error;

use crate::code::{distance_bounds, solve, CodeError, LinearCode, Matrix};
use crate::galois::{Field, FieldElement};
use crate::geometry::{Divisor, EvalPoint, Exponent, GeometryError, LogPoint};
use crate::toric_code::{evaluation_rows, ToricCodeSpec, ToricError};

pub const DEFAULT_LIST_CAP: usize = 256;

/// Work cap for the auxiliary distance searches run during setup.
pub const DEFAULT_SETUP_WORK_CAP: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("L({0}) is empty")]
    EmptySpace(&'static str),
    #[error("{space} monomial {a:?} has a pole at point {point}")]
    Pole { space: &'static str, a: Exponent, point: usize },
    #[error("received word has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("locator is identically zero")]
    ZeroLocator,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Whether `d(C) > Z` is known to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    Verified,
    Violated,
    Unverified,
}

#[derive(Clone, Copy, Debug)]
pub struct SetupOptions {
    pub work_cap: u64,
    pub list_cap: usize,
}

impl Default for SetupOptions {
    fn default() -> Self {
        SetupOptions { work_cap: DEFAULT_SETUP_WORK_CAP, list_cap: DEFAULT_LIST_CAP }
    }
}

pub struct DecoderSetup {
    spec: ToricCodeSpec,
    gprime: Divisor,
    /// Bases of `L(G')`, `L(G - G')`, `L(G)` in graded-lex order.
    pub f_basis: Vec<Exponent>,
    pub g_basis: Vec<Exponent>,
    pub h_basis: Vec<Exponent>,
    f_vals: Vec<Vec<FieldElement>>,
    g_vals: Vec<Vec<FieldElement>>,
    h_vals: Vec<Vec<FieldElement>>,
    /// `fg[i][j]` holds the values of `f_j g_i`.
    fg_vals: Vec<Vec<Vec<FieldElement>>>,
    logs: Vec<LogPoint>,
    code: LinearCode,
    /// Upper bound on the zeros of a nonzero member of `L(G')` among the points.
    pub zero_cap: usize,
    pub zero_cap_exact: bool,
    /// Certified bounds on the minimum distance of `C`.
    pub dual_distance: (usize, usize),
    pub condition_c: Condition,
    pub list_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    /// The error is the unique one of weight at most `(d(C) - 1) / 2`.
    Unique,
    List,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// The error for `Unique`; candidates by increasing weight for `List`.
    pub errors: Vec<Vec<FieldElement>>,
    pub locator: Option<Vec<FieldElement>>,
    pub zero_set: Vec<usize>,
    /// `|N(f)| <= Z`.
    pub within_zero_cap: bool,
}

impl DecodeOutcome {
    fn fail(reason: &str, locator: Option<Vec<FieldElement>>, zero_set: Vec<usize>, within: bool) -> Self {
        DecodeOutcome {
            status: DecodeStatus::Fail(reason.to_string()),
            errors: Vec::new(),
            locator,
            zero_set,
            within_zero_cap: within,
        }
    }
}

fn twist(points: &[EvalPoint], spec: &ToricCodeSpec, gprime: &Divisor) -> Vec<Exponent> {
    points
        .iter()
        .map(|p| match *p {
            EvalPoint::Torus { .. } => [0, 0],
            EvalPoint::RayOrbit { ray, .. } => spec.fan().lift(ray, gprime.coeffs[ray]),
        })
        .collect()
}

fn twisted_values(
    field: &Field,
    logs: &[LogPoint],
    exps: &[Exponent],
    shifts: &[Exponent],
    sign: i64,
    space: &'static str,
) -> Result<Vec<Vec<FieldElement>>, DecodeError> {
    exps.iter()
        .map(|&a| {
            logs.iter()
                .zip(shifts)
                .enumerate()
                .map(|(j, (lp, c))| {
                    let b = [a[0] + sign * c[0], a[1] + sign * c[1]];
                    lp.eval(b, field).map_err(|_| DecodeError::Pole { space, a, point: j })
                })
                .collect()
        })
        .collect()
}

fn lattice(spec: &ToricCodeSpec, div: &Divisor, name: &'static str) -> Result<Vec<Exponent>, DecodeError> {
    let poly = spec.fan().polytope(div)?;
    if !poly.is_bounded() {
        return Err(GeometryError::Unbounded.into());
    }
    let pts = poly.lattice_points()?.to_vec();
    if pts.is_empty() {
        return Err(DecodeError::EmptySpace(name));
    }
    Ok(pts)
}

pub fn setup(spec: &ToricCodeSpec, gprime: &Divisor, opts: SetupOptions) -> Result<DecoderSetup, DecodeError> {
    let field = spec.field().clone();
    let fan = spec.fan();
    let points = spec.points();
    let n = points.len();
    let f_basis = lattice(spec, gprime, "G'")?;
    let g_basis = lattice(spec, &spec.divisor().sub(gprime), "G - G'")?;
    let h_basis = spec.basis().to_vec();
    let logs = points
        .iter()
        .map(|p| LogPoint::new(p, fan, &field))
        .collect::<Result<Vec<_>, _>>()?;
    let shifts = twist(points, spec, gprime);
    let f_vals = twisted_values(&field, &logs, &f_basis, &shifts, 1, "L(G')")?;
    let g_vals = twisted_values(&field, &logs, &g_basis, &shifts, -1, "L(G - G')")?;
    let h_vals = evaluation_rows(&field, fan, &h_basis, points)?;
    let fg_vals = g_vals
        .par_iter()
        .map(|g| {
            f_vals
                .iter()
                .map(|f| f.iter().zip(g).map(|(&x, &y)| field.mul(x, y)).collect())
                .collect()
        })
        .collect();

    let code = LinearCode::from_generator(&field, &Matrix::from_rows(h_vals.clone(), n)).dual();

    let aux = LinearCode::from_generator(&field, &Matrix::from_rows(f_vals.clone(), n));
    let (zero_cap, zero_cap_exact) = if aux.k() < f_basis.len() {
        // some nonzero member of L(G') vanishes at every point
        (n, true)
    } else {
        let s = distance_bounds(&aux, opts.work_cap)?;
        (n - s.lower, s.exact)
    };

    let dual_distance = if code.k() == 0 {
        (n + 1, n + 1)
    } else {
        let s = distance_bounds(&code, opts.work_cap)?;
        (s.lower, s.upper)
    };
    let condition_c = if dual_distance.0 > zero_cap {
        Condition::Verified
    } else if dual_distance.1 <= zero_cap && zero_cap_exact {
        Condition::Violated
    } else {
        Condition::Unverified
    };

    Ok(DecoderSetup {
        spec: spec.clone(),
        gprime: gprime.clone(),
        f_basis,
        g_basis,
        h_basis,
        f_vals,
        g_vals,
        h_vals,
        fg_vals,
        logs,
        code,
        zero_cap,
        zero_cap_exact,
        dual_distance,
        condition_c,
        list_cap: opts.list_cap,
    })
}

/// Enumerates `p + span(kernel)` up to `cap` vectors.
fn affine_span(field: &Field, p: &[FieldElement], kernel: &[Vec<FieldElement>], cap: usize) -> Option<Vec<Vec<FieldElement>>> {
    let q = field.order() as u128;
    if q.checked_pow(kernel.len() as u32).is_none_or(|c| c > cap as u128) {
        return None;
    }
    let mut out = vec![p.to_vec()];
    for k in kernel {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for v in &out {
            for c in field.elements() {
                next.push(v.iter().zip(k).map(|(&x, &y)| field.add(x, field.mul(c, y))).collect());
            }
        }
        out = next;
    }
    Some(out)
}

impl DecoderSetup {
    pub fn spec(&self) -> &ToricCodeSpec {
        &self.spec
    }

    pub fn gprime(&self) -> &Divisor {
        &self.gprime
    }

    pub fn n(&self) -> usize {
        self.logs.len()
    }

    /// The code being decoded, `C_L(P, G)^perp`.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Largest error weight the uniqueness certificate covers.
    pub fn radius(&self) -> usize {
        self.dual_distance.0.saturating_sub(1) / 2
    }

    /// Values of `f in L(G')` with coefficients `a` (twisted on orbit points).
    pub fn locator_values(&self, a: &[FieldElement]) -> Vec<FieldElement> {
        let field = self.spec.field();
        let mut out = vec![FieldElement::ZERO; self.n()];
        for (&c, row) in a.iter().zip(&self.f_vals) {
            if !c.is_zero() {
                for (o, &x) in out.iter_mut().zip(row) {
                    *o = field.add(*o, field.mul(c, x));
                }
            }
        }
        out
    }

    /// Values of `g_i in L(G - G')` (twisted on orbit points).
    pub fn g_values(&self, i: usize) -> &[FieldElement] {
        &self.g_vals[i]
    }

    /// Values of `h_j in L(G)`.
    pub fn h_values(&self, j: usize) -> &[FieldElement] {
        &self.h_vals[j]
    }

    fn check_len(&self, r: &[FieldElement]) -> Result<(), DecodeError> {
        if r.len() != self.n() {
            return Err(DecodeError::LengthMismatch { expected: self.n(), got: r.len() });
        }
        Ok(())
    }

    /// `[r, x^phi] = sum r_i phi(P_i)`.
    pub fn bracket(&self, r: &[FieldElement], phi: Exponent) -> Result<FieldElement, DecodeError> {
        self.check_len(r)?;
        let field = self.spec.field();
        let mut acc = FieldElement::ZERO;
        for (&ri, lp) in r.iter().zip(&self.logs) {
            if !ri.is_zero() {
                acc = field.add(acc, field.mul(ri, lp.eval(phi, field)?));
            }
        }
        Ok(acc)
    }

    fn bracket_values(&self, r: &[FieldElement], vals: &[FieldElement]) -> FieldElement {
        self.spec.field().dot(r, vals)
    }

    /// The `k x l` system `sum_j [r, f_j g_i] a_j = 0`.
    pub fn bracket_matrix(&self, r: &[FieldElement]) -> Result<Matrix, DecodeError> {
        self.check_len(r)?;
        let rows = self
            .fg_vals
            .iter()
            .map(|row| row.iter().map(|v| self.bracket_values(r, v)).collect())
            .collect();
        Ok(Matrix::from_rows(rows, self.f_basis.len()))
    }

    /// Null-space vector with its first free coordinate set to one and the
    /// other free coordinates zero; `None` when the null space is trivial.
    pub fn error_locator(&self, r: &[FieldElement]) -> Result<Option<Vec<FieldElement>>, DecodeError> {
        let m = self.bracket_matrix(r)?;
        Ok(m.null_space(self.spec.field()).into_iter().next())
    }

    /// `N(f)` for the locator with coefficients `a`.
    pub fn zero_set(&self, a: &[FieldElement]) -> Result<Vec<usize>, DecodeError> {
        if a.iter().all(|x| x.is_zero()) {
            return Err(DecodeError::ZeroLocator);
        }
        Ok(self
            .locator_values(a)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i)
            .collect())
    }

    /// Syndrome `([r, h_1], ..., [r, h_m])`.
    pub fn syndrome(&self, r: &[FieldElement]) -> Result<Vec<FieldElement>, DecodeError> {
        self.check_len(r)?;
        Ok(self.h_vals.iter().map(|h| self.bracket_values(r, h)).collect())
    }

    /// Solutions `b` supported on `zeros` of `sum_i b_i h_j(P_i) = [r, h_j]`,
    /// as length-`n` vectors; `None` when inconsistent, `Some(Err(dim))` when
    /// the solution space has more than `list_cap` members.
    pub fn error_values(&self, r: &[FieldElement], zeros: &[usize]) -> Result<Option<Result<Vec<Vec<FieldElement>>, usize>>, DecodeError> {
        let field = self.spec.field();
        let rhs = self.syndrome(r)?;
        let a = Matrix::from_rows(
            self.h_vals.iter().map(|h| zeros.iter().map(|&i| h[i]).collect()).collect(),
            zeros.len(),
        );
        let Some(sol) = solve(field, &a, &rhs) else {
            return Ok(None);
        };
        let Some(local) = affine_span(field, &sol.particular, &sol.kernel, self.list_cap) else {
            return Ok(Some(Err(sol.kernel.len())));
        };
        let n = self.n();
        Ok(Some(Ok(local
            .into_iter()
            .map(|b| {
                let mut e = vec![FieldElement::ZERO; n];
                for (&i, &v) in zeros.iter().zip(&b) {
                    e[i] = v;
                }
                e
            })
            .collect())))
    }

    pub fn decode(&self, r: &[FieldElement]) -> Result<DecodeOutcome, DecodeError> {
        self.check_len(r)?;
        let n = self.n();
        if self.syndrome(r)?.iter().all(|x| x.is_zero()) {
            return Ok(DecodeOutcome {
                status: DecodeStatus::Unique,
                errors: vec![vec![FieldElement::ZERO; n]],
                locator: None,
                zero_set: Vec::new(),
                within_zero_cap: true,
            });
        }
        let Some(a) = self.error_locator(r)? else {
            return Ok(DecodeOutcome::fail("no error locator", None, Vec::new(), false));
        };
        let zeros = self.zero_set(&a)?;
        let within = zeros.len() <= self.zero_cap;
        let cands = match self.error_values(r, &zeros)? {
            None => return Ok(DecodeOutcome::fail("error-value system is inconsistent", Some(a), zeros, within)),
            Some(Err(dim)) => {
                let msg = format!("solution space of dimension {dim} exceeds the list cap");
                return Ok(DecodeOutcome::fail(&msg, Some(a), zeros, within));
            }
            Some(Ok(c)) => c,
        };
        let field = self.spec.field();
        let mut cands: Vec<(usize, Vec<FieldElement>)> = cands
            .into_iter()
            .filter(|e| {
                let c: Vec<FieldElement> = r.iter().zip(e).map(|(&x, &y)| field.sub(x, y)).collect();
                self.code.contains(&c).unwrap_or(false)
            })
            .map(|e| (crate::code::hamming_weight(&e), e))
            .collect();
        cands.sort();
        let status = match cands.first() {
            None => return Ok(DecodeOutcome::fail("no candidate lies in the code", Some(a), zeros, within)),
            Some((w, _)) if *w <= self.radius() => DecodeStatus::Unique,
            Some(_) => DecodeStatus::List,
        };
        let errors = match status {
            DecodeStatus::Unique => vec![cands.swap_remove(0).1],
            _ => cands.into_iter().map(|(_, e)| e).collect(),
        };
        Ok(DecodeOutcome { status, errors, locator: Some(a), zero_set: zeros, within_zero_cap: within })
    }

    pub fn decode_batch(&self, words: &[Vec<FieldElement>]) -> Vec<Result<DecodeOutcome, DecodeError>> {
        words.par_iter().map(|r| self.decode(r)).collect()
    }
}
