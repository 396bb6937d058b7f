//! Linear codes over GF(q).

mod distance;
mod matrix;
mod reed_muller;

pub use distance::{
    distance_bounds, min_distance, min_distance_exhaustive, min_distance_infoset, projective_count, DistanceSearch,
    Method, SearchMethod, WeightReport, AUTO_EXHAUSTIVE_LIMIT, DEFAULT_WORK_CAP,
};
pub use matrix::{solve, AffineSolution, Echelon, Matrix};
pub use reed_muller::{reed_muller, reed_muller_dimensions, rm_predicted_params, RmParams, RM_MAX_LENGTH};

use thiserror::Error;

use crate::galois::{Field, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty code")]
    EmptyCode,
    #[error("exhaustive search needs {needed} codewords, above the work cap {cap}")]
    WorkCapExceeded { needed: u128, cap: u64 },
    #[error("code length {0} exceeds the size cap")]
    TooLong(u128),
    #[error("degree bound {l} is outside 0..={max}")]
    DegreeOutOfRange { l: u32, max: u32 },
    #[error("minimum distance {d} violates 1 <= d <= n - k + 1 = {singleton}")]
    InvalidDistance { d: usize, singleton: usize },
}

/// A linear `[n, k]` code, stored as a reduced row echelon generator.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
    pivots: Vec<usize>,
    distance: Option<usize>,
    distance_bounds: Option<(usize, usize)>,
    warnings: Vec<String>,
}

impl LinearCode {
    /// Row-reduces `gen`; dependent rows are dropped with a warning.
    pub fn from_generator(field: &Field, gen: &Matrix) -> LinearCode {
        let ech = gen.rref(field);
        let mut warnings = Vec::new();
        if ech.rank < gen.rows() {
            warnings.push(format!(
                "generator has {} rows but rank {}; dependent rows dropped",
                gen.rows(),
                ech.rank
            ));
        }
        let keep: Vec<usize> = (0..ech.rank).collect();
        let generator = ech.reduced.select_rows(&keep);
        let generator = if keep.is_empty() { Matrix::zeros(0, gen.cols()) } else { generator };
        LinearCode {
            field: field.clone(),
            generator,
            pivots: ech.pivots,
            distance: None,
            distance_bounds: None,
            warnings,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn distance_interval(&self) -> Option<(usize, usize)> {
        self.distance.map(|d| (d, d)).or(self.distance_bounds)
    }

    pub fn singleton_bound(&self) -> usize {
        self.n() + 1 - self.k()
    }

    /// Caches an exact minimum distance.
    pub fn set_distance(&mut self, d: usize) -> Result<(), CodeError> {
        if d == 0 || d > self.singleton_bound() {
            return Err(CodeError::InvalidDistance { d, singleton: self.singleton_bound() });
        }
        self.distance = Some(d);
        self.distance_bounds = None;
        Ok(())
    }

    pub fn set_distance_bounds(&mut self, lower: usize, upper: usize) {
        if lower >= upper {
            self.distance = Some(upper);
            self.distance_bounds = None;
        } else {
            self.distance_bounds = Some((lower, upper));
        }
    }

    pub fn encode(&self, message: &[FieldElement]) -> Vec<FieldElement> {
        self.generator.left_mul(&self.field, message)
    }

    /// Generator of the dual code, `(n - k) x n`, with `G H^T = 0`.
    pub fn parity_check(&self) -> Matrix {
        let n = self.n();
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let rows = (0..n)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; n];
                v[free] = FieldElement::ONE;
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = self.field.neg(self.generator[(r, free)]);
                }
                v
            })
            .collect();
        Matrix::from_rows(rows, n)
    }

    pub fn dual(&self) -> LinearCode {
        let mut dual = LinearCode::from_generator(&self.field, &self.parity_check());
        if dual.k() == 0 {
            dual.warnings.push("dual of a full-space code is the zero code".to_string());
        }
        dual
    }

    /// Inner products of `v` with the rows of the parity check matrix;
    /// all zero exactly when `v` is a codeword.
    pub fn syndrome(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, CodeError> {
        if v.len() != self.n() {
            return Err(CodeError::LengthMismatch { expected: self.n(), got: v.len() });
        }
        Ok(self.parity_check().mul_vec(&self.field, v))
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool, CodeError> {
        Ok(self.syndrome(v)?.iter().all(|x| x.is_zero()))
    }

    /// Same row space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.field == other.field && self.generator == other.generator
    }
}

pub fn hamming_weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}
