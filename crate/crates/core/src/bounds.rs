//! Parameter bounds: Hansen's closed forms, the segment upper bound,
//! Singleton and Gilbert-Varshamov comparisons, and two conjectural bounds.

use thiserror::Error;

use crate::geometry::{Divisor, Fan, GeometryError, Polytope, Rational};
use crate::toric_code::{HansenCase, ToricCode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("relative distance {delta} outside [0, {max}]")]
    DeltaOutOfRange { delta: f64, max: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HansenPrediction {
    pub case: HansenCase,
    pub n: u64,
    pub k: u64,
    pub d: u64,
    /// Whether `q` satisfies the hypothesis under which the formulas hold.
    pub in_range: bool,
}

/// Closed-form `(n, k, d)` for the Hansen polygons; out-of-range `q` is
/// flagged rather than rejected.
pub fn hansen_params(case: HansenCase, q: u64, a: u64, b: u64, m: u64) -> HansenPrediction {
    let n = (q - 1) * (q - 1);
    let sat = |x: i64| x.max(0) as u64;
    let (qi, ai, bi, mi) = (q as i64, a as i64, b as i64, m as i64);
    let (k, d, in_range) = match case {
        HansenCase::A => ((a + 1) * (a + 1), sat(n as i64 - 2 * ai * (qi - 1)), q > 2 * a + 1),
        HansenCase::B => ((a + 1) * (a + 2) / 2, sat(n as i64 - ai * (qi - 1)), q > a + 1),
        HansenCase::C => (
            (a + 1) * (b + 1),
            sat(n as i64 - ai * (qi - 1) - bi * (qi - 1) + ai * bi),
            q > a.max(b) + 1,
        ),
        HansenCase::D => {
            let d1 = (qi - ai - 1) * (qi - bi - 1);
            let d2 = (qi - 1) * (qi - bi - ai * mi - 1);
            (
                (a + 1) * (b + 1) + m * a * (a + 1) / 2,
                sat(d1.min(d2)),
                q > a.max(b).max(b + a * m) + 1,
            )
        }
    };
    HansenPrediction { case, n, k, d, in_range }
}

/// Longest run of lattice points on an axis-parallel line, minus one.
///
/// Lattice points of a convex polygon on a line are consecutive, so this is
/// the largest `h` with a translate of `{0, e_j, ..., h e_j}` inside `P ∩ M`.
pub fn segment_length(poly: &Polytope) -> Result<usize, GeometryError> {
    let pts = poly.lattice_points()?;
    if pts.is_empty() {
        return Err(GeometryError::Empty);
    }
    let mut h = 0;
    for axis in 0..2 {
        let mut lines: std::collections::BTreeMap<i64, (i64, i64)> = Default::default();
        for p in pts {
            let e = lines.entry(p[1 - axis]).or_insert((p[axis], p[axis]));
            e.0 = e.0.min(p[axis]);
            e.1 = e.1.max(p[axis]);
        }
        h = h.max(lines.values().map(|(lo, hi)| (hi - lo) as usize).max().unwrap_or(0));
    }
    Ok(h)
}

/// `n - h`: a product of `h` distinct linear factors `x_j - a`, `a` a unit,
/// times a monomial is a codeword with at least `h` zeros.
///
/// Only `q - 2` such factors leave the product nonzero on the torus, so `h`
/// is capped there; longer segments give no stronger statement.
pub fn segment_upper_bound(poly: &Polytope, n: usize, q: u32) -> Result<usize, GeometryError> {
    let h = segment_length(poly)?.min(q.saturating_sub(2) as usize);
    Ok(n.saturating_sub(h))
}

/// q-ary entropy, with `H_q(0) = 0`.
pub fn entropy(q: u32, x: f64) -> f64 {
    let lq = (q as f64).ln();
    let mut h = x * ((q - 1) as f64).ln() / lq;
    if x > 0.0 {
        h -= x * x.ln() / lq;
    }
    if x < 1.0 {
        h -= (1.0 - x) * (1.0 - x).ln() / lq;
    }
    h
}

/// The asymptotic Gilbert-Varshamov rate `1 - H_q(delta)`.
pub fn gv_rate(q: u32, delta: f64) -> Result<f64, BoundsError> {
    let max = (q - 1) as f64 / q as f64;
    if !(0.0..=max + 1e-15).contains(&delta) {
        return Err(BoundsError::DeltaOutOfRange { delta, max });
    }
    Ok((1.0 - entropy(q, delta.min(max))).max(0.0))
}

/// Rate `k/n` strictly above the curve at `d/n`; beyond `(q-1)/q` the curve is 0.
pub fn beats_gv(n: usize, k: usize, d: usize, q: u32) -> bool {
    let delta = d as f64 / n as f64;
    let max = (q - 1) as f64 / q as f64;
    let curve = if delta >= max { 0.0 } else { gv_rate(q, delta).expect("in range") };
    k as f64 / n as f64 > curve
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture1 {
    /// Smallest admissible `N`.
    pub n_value: u64,
    /// Every `N > 1` with `2N vol <= n <= 2N^2 vol`.
    pub all: Vec<u64>,
    /// Conjectured `d >= n - 2N vol` for the smallest `N`.
    pub lower_bound: Rational,
}

pub fn conjecture1_bound(vol: Rational, n: usize) -> Option<Conjecture1> {
    if vol <= Rational::from_integer(0) {
        return None;
    }
    let nn = Rational::from_integer(n as i64);
    let mut all = Vec::new();
    let mut big_n = 2i64;
    while Rational::from_integer(2 * big_n) * vol <= nn {
        if nn <= Rational::from_integer(2 * big_n * big_n) * vol {
            all.push(big_n as u64);
        }
        big_n += 1;
    }
    let first = *all.first()?;
    Some(Conjecture1 {
        n_value: first,
        lower_bound: nn - Rational::from_integer(2 * first as i64) * vol,
        all,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture2 {
    pub predicted_k: usize,
    /// Conjectured `d >= n - 2 |P_G ∩ M|`.
    pub lower_bound: i64,
    pub smooth: bool,
    pub ample: bool,
    /// Self-intersection `G^2 = 2 vol(P_G)`.
    pub degree: Rational,
    pub n_exceeds_degree: bool,
    pub applicable: bool,
}

pub fn conjecture2_bound(fan: &Fan, div: &Divisor, poly: &Polytope, n: usize) -> Result<Conjecture2, GeometryError> {
    let kc = poly.lattice_points()?.len();
    let smooth = fan.is_smooth();
    let ample = fan.is_ample(div).unwrap_or(false);
    let degree = poly.volume().unwrap_or_else(|_| Rational::from_integer(0)) * 2;
    let n_exceeds_degree = Rational::from_integer(n as i64) > degree;
    Ok(Conjecture2 {
        predicted_k: kc,
        lower_bound: n as i64 - 2 * kc as i64,
        smooth,
        ample,
        degree,
        n_exceeds_degree,
        applicable: smooth && ample && n_exceeds_degree,
    })
}

/// Everything known about one code's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    /// Certified `lower <= d <= upper`; equal when exact.
    pub d_lower: usize,
    pub d_upper: usize,
    /// `n + 1 - k - d`, when `d` is exact.
    pub singleton_defect: Option<i64>,
    pub segment_upper: usize,
    pub gv_rate: f64,
    /// Decided from the certified lower bound; `None` when the interval straddles the curve.
    pub beats_gv: Option<bool>,
    pub conj1: Option<Conjecture1>,
    pub conj2: Conjecture2,
    pub table_ref: Option<String>,
}

impl BoundReport {
    pub fn exact_d(&self) -> Option<usize> {
        (self.d_lower == self.d_upper).then_some(self.d_lower)
    }
}

pub fn bound_report(tc: &ToricCode, d_lower: usize, d_upper: usize) -> Result<BoundReport, BoundsError> {
    let poly = tc.spec.polytope();
    let (n, k) = (tc.n(), tc.k());
    let q = tc.spec.field().order();
    let exact = d_lower == d_upper;
    let delta = (d_upper as f64 / n as f64).min((q - 1) as f64 / q as f64);
    let beats = if beats_gv(n, k, d_lower, q) {
        Some(true)
    } else if !beats_gv(n, k, d_upper, q) {
        Some(false)
    } else {
        None
    };
    Ok(BoundReport {
        q,
        n,
        k,
        d_lower,
        d_upper,
        singleton_defect: exact.then(|| (n + 1) as i64 - k as i64 - d_upper as i64),
        segment_upper: segment_upper_bound(poly, n, q)?,
        gv_rate: gv_rate(q, delta)?,
        beats_gv: beats,
        conj1: conjecture1_bound(poly.volume()?, n),
        conj2: conjecture2_bound(tc.spec.fan(), tc.spec.divisor(), poly, n)?,
        table_ref: None,
    })
}
