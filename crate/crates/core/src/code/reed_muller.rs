//! Reed-Muller codes: evaluations of reduced polynomials of bounded degree
//! at every point of GF(q)^m.

use super::{CodeError, LinearCode, Matrix};
use crate::galois::{Field, FieldElement};

/// Largest supported length `q^m`.
pub const RM_MAX_LENGTH: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RmParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form parameters for `0 <= l <= m(q-1)`.
pub fn rm_predicted_params(q: u32, m: u32, l: u32) -> Result<RmParams, CodeError> {
    let max = m * (q - 1);
    if l > max || m == 0 {
        return Err(CodeError::DegreeOutOfRange { l, max });
    }
    let (q, m) = (q as i64, m as i64);
    let n = q.pow(m as u32);
    let mut k = 0i64;
    for i in 0..=l as i64 {
        for j in 0..=i / q {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            k += sign * binom(m, j) * binom(m - 1 + i - q * j, m - 1);
        }
    }
    let d = if l == 0 {
        n
    } else {
        let a = (l as i64 - 1) / (q - 1);
        let b = l as i64 - a * (q - 1);
        (q - b) * q.pow((m - a - 1) as u32)
    };
    Ok(RmParams { n: n as u64, k: k as u64, d: d as u64 })
}

/// Exponent vectors with every entry `<= q-1` and total degree `<= l`,
/// sorted by degree and then lexicographically.
fn monomials(q: u32, m: u32, l: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m as usize];
    loop {
        if cur.iter().sum::<u32>() <= l {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == m as usize {
                out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then_with(|| b.cmp(a)));
                return out;
            }
            cur[i] += 1;
            if cur[i] < q {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn check_size(q: u32, m: u32) -> Result<usize, CodeError> {
    let n = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    if n > RM_MAX_LENGTH {
        return Err(CodeError::TooLong(n));
    }
    Ok(n as usize)
}

/// Point `idx` of GF(q)^m has coordinate `i` equal to base-q digit `i`.
fn evaluation_row(field: &Field, exps: &[u32], n: usize) -> Vec<FieldElement> {
    let q = field.order() as usize;
    (0..n)
        .map(|mut idx| {
            let mut v = FieldElement::ONE;
            for &e in exps {
                let x = FieldElement((idx % q) as u16);
                idx /= q;
                v = field.mul(v, field.pow(x, e as i64).expect("nonnegative power"));
            }
            v
        })
        .collect()
}

pub fn reed_muller(field: &Field, m: u32, l: u32) -> Result<LinearCode, CodeError> {
    let q = field.order();
    let n = check_size(q, m)?;
    if m == 0 {
        return Err(CodeError::DegreeOutOfRange { l, max: 0 });
    }
    let rows = monomials(q, m, l).iter().map(|e| evaluation_row(field, e, n)).collect();
    Ok(LinearCode::from_generator(field, &Matrix::from_rows(rows, n)))
}

/// Lengths up to this are profiled by elimination; longer ones by the
/// Vandermonde certificate.
const ELIMINATION_LIMIT: usize = 128;

/// `dims[l]` is the dimension of the degree-`l` code for every
/// `0 <= l <= m(q-1)`.
///
/// Short codes insert evaluation rows in degree order into a growing echelon
/// basis. Longer ones use that the evaluation matrix of all reduced monomials
/// is the `m`-fold Kronecker power of the `q x q` Vandermonde matrix: once its
/// determinant is seen to be nonzero, every set of reduced monomials has
/// independent evaluations and the dimension is a monomial count.
pub fn reed_muller_dimensions(field: &Field, m: u32) -> Result<Vec<u64>, CodeError> {
    let n = check_size(field.order(), m)?;
    if n <= ELIMINATION_LIMIT {
        return Ok(elimination_profile(field, m, n));
    }
    Ok(certified_profile(field, m).unwrap_or_else(|| elimination_profile(field, m, n)))
}

fn elimination_profile(field: &Field, m: u32, n: usize) -> Vec<u64> {
    let q = field.order();
    let max = m * (q - 1);
    let mut basis: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    let mut dims = vec![0u64; max as usize + 1];
    for e in monomials(q, m, max) {
        let deg = e.iter().sum::<u32>() as usize;
        let mut v = evaluation_row(field, &e, n);
        for (p, b) in &basis {
            let c = v[*p];
            if !c.is_zero() {
                let nc = field.neg(c);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = field.add(*x, field.mul(nc, y));
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = field.inv(v[p]).expect("nonzero");
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            basis.push((p, v));
        }
        dims[deg] = basis.len() as u64;
    }
    for l in 1..dims.len() {
        dims[l] = dims[l].max(dims[l - 1]);
    }
    dims
}

/// `None` when the Vandermonde determinant over the coordinate values vanishes.
fn certified_profile(field: &Field, m: u32) -> Option<Vec<u64>> {
    let q = field.order();
    let pts: Vec<FieldElement> = (0..q as u16).map(FieldElement).collect();
    let mut det = FieldElement::ONE;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            det = field.mul(det, field.sub(b, a));
        }
    }
    if det.is_zero() {
        return None;
    }
    // reduced monomials by total degree: coefficients of ((1 - x^q)/(1 - x))^m
    let max = (m * (q - 1)) as usize;
    let mut count = vec![0u64; max + 1];
    count[0] = 1;
    for _ in 0..m {
        let mut next = vec![0u64; max + 1];
        for (d, &c) in count.iter().enumerate().filter(|(_, &c)| c > 0) {
            for e in 0..q as usize {
                if d + e <= max {
                    next[d + e] += c;
                }
            }
        }
        count = next;
    }
    let mut acc = 0;
    Some(count.iter().map(|c| {
        acc += c;
        acc
    }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{min_distance_exhaustive, DEFAULT_WORK_CAP};

    #[test]
    fn mariner_code() {
        let f2 = Field::with_order(2).unwrap();
        let c = reed_muller(&f2, 5, 1).unwrap();
        assert_eq!((c.n(), c.k()), (32, 6));
        assert_eq!(min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap().d, 16);
        assert_eq!(rm_predicted_params(2, 5, 1).unwrap(), RmParams { n: 32, k: 6, d: 16 });
    }

    #[test]
    fn degree_zero_is_repetition() {
        let f3 = Field::with_order(3).unwrap();
        let c = reed_muller(&f3, 2, 0).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap().d, 9);
        assert_eq!(rm_predicted_params(3, 2, 0).unwrap().d, 9);
    }

    #[test]
    fn ternary_linear_code() {
        let f3 = Field::with_order(3).unwrap();
        let c = reed_muller(&f3, 2, 1).unwrap();
        assert_eq!((c.n(), c.k()), (9, 3));
        let rep = min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(rep.work, 13);
        assert_eq!(rep.d as u64, rm_predicted_params(3, 2, 1).unwrap().d);
    }

    #[test]
    fn out_of_range_and_size_cap() {
        assert!(rm_predicted_params(2, 3, 4).is_err());
        let f2 = Field::with_order(2).unwrap();
        assert!(matches!(reed_muller(&f2, 17, 1), Err(CodeError::TooLong(_))));
    }

    #[test]
    fn dimension_profile_matches_direct_construction() {
        let f4 = Field::with_order(4).unwrap();
        let dims = reed_muller_dimensions(&f4, 2).unwrap();
        for (l, &k) in dims.iter().enumerate() {
            assert_eq!(reed_muller(&f4, 2, l as u32).unwrap().k() as u64, k);
        }
        assert_eq!(*dims.last().unwrap(), 16);
    }

    #[test]
    fn certificate_agrees_with_elimination() {
        for (q, m) in [(17, 2), (2, 9), (5, 4), (7, 3)] {
            let f = Field::with_order(q).unwrap();
            let n = (q as usize).pow(m);
            assert_eq!(certified_profile(&f, m).unwrap(), elimination_profile(&f, m, n), "q={q} m={m}");
        }
    }
}
