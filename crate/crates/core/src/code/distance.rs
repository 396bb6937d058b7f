//! Minimum distance: exhaustive projective enumeration and a
//! Brouwer-Zimmermann style search over disjoint information sets.
//!
//! Both engines work on systematic generators, so a codeword's weight is
//! the number of nonzero message coordinates plus the weight on the
//! redundant columns; only the latter is computed in the inner loop.

use rayon::prelude::*;

use super::{CodeError, LinearCode, Matrix};
use crate::galois::{AddKind, Field, FieldElement};

pub const DEFAULT_WORK_CAP: u64 = 2_000_000_000;

/// `Method::Auto` enumerates exhaustively up to this many projective codewords.
pub const AUTO_EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Scaled-row tables larger than this many entries are replaced by
/// on-the-fly multiplication.
const SCALED_TABLE_LIMIT: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Exhaustive,
    InfoSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    InformationSet,
}

impl std::fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMethod::Exhaustive => "exhaustive",
            SearchMethod::InformationSet => "information-set",
        })
    }
}

/// An exact minimum distance with a minimum-weight codeword.
///
/// The witness is normalized so its first nonzero entry is one; among the
/// minimum-weight codewords visited it is the lexicographically smallest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub d: usize,
    pub witness: Vec<FieldElement>,
    pub method: SearchMethod,
    /// Codewords evaluated.
    pub work: u64,
}

/// Outcome of a possibly truncated search: `lower <= d <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSearch {
    pub lower: usize,
    pub upper: usize,
    pub witness: Option<Vec<FieldElement>>,
    pub exact: bool,
    pub work: u64,
    /// Highest message weight fully processed.
    pub level: usize,
    pub info_sets: usize,
}

/// `(q^k - 1) / (q - 1)`, saturating.
pub fn projective_count(q: u32, k: usize) -> u128 {
    let q = q as u128;
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..k {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(q);
    }
    total
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// Messages with exactly `w` nonzeros and leading coefficient one.
fn level_size(q: u32, k: usize, w: usize) -> u128 {
    if w == 0 {
        return 0;
    }
    binomial(k, w).saturating_mul(((q - 1) as u128).saturating_pow(w as u32 - 1))
}

trait Adder: Send + Sync {
    fn add(&self, dst: &mut [u16], a: &[u16], b: &[u16]);
}

struct XorAdd;
struct ModPAdd(u16);
struct TableAdd {
    q: usize,
    table: Vec<u16>,
}

impl Adder for XorAdd {
    #[inline]
    fn add(&self, dst: &mut [u16], a: &[u16], b: &[u16]) {
        for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
            *d = x ^ y;
        }
    }
}

impl Adder for ModPAdd {
    #[inline]
    fn add(&self, dst: &mut [u16], a: &[u16], b: &[u16]) {
        let p = self.0;
        for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
            let s = x + y;
            *d = if s >= p { s - p } else { s };
        }
    }
}

impl Adder for TableAdd {
    #[inline]
    fn add(&self, dst: &mut [u16], a: &[u16], b: &[u16]) {
        for ((d, &x), &y) in dst.iter_mut().zip(a).zip(b) {
            *d = self.table[x as usize * self.q + y as usize];
        }
    }
}

/// A systematic generator for one information set.
struct InfoSet {
    /// Full reduced generator in original column order.
    full: Matrix,
    /// Row `i` restricted to the non-pivot columns, row-major.
    redundancy: Vec<u16>,
    pivots: Vec<usize>,
    /// Rank of the generator on this set's columns.
    rank: usize,
}

impl InfoSet {
    fn new(field: &Field, gen: &Matrix, order: &[usize], available: &[bool]) -> InfoSet {
        let ech = gen.rref_with_order(field, order);
        let n = gen.cols();
        let k = gen.rows();
        let mut is_pivot = vec![false; n];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut redundancy = Vec::with_capacity(k * rest.len());
        for i in 0..k {
            redundancy.extend(rest.iter().map(|&j| ech.reduced[(i, j)].0));
        }
        let rank = ech.pivots.iter().filter(|&&p| available[p]).count();
        InfoSet { full: ech.reduced, redundancy, pivots: ech.pivots, rank }
    }

    /// Lower-bound contribution after all levels up to `w` were enumerated.
    fn contribution(&self, k: usize, w: usize) -> usize {
        (w + 1).saturating_sub(k - self.rank)
    }
}

/// Greedy disjoint information sets; the last may be partial.
fn information_sets(code: &LinearCode) -> Vec<InfoSet> {
    let n = code.n();
    let mut available = vec![true; n];
    let mut sets = Vec::new();
    loop {
        let order: Vec<usize> = (0..n).filter(|&j| available[j]).chain((0..n).filter(|&j| !available[j])).collect();
        if !available.iter().any(|&a| a) {
            break;
        }
        let set = InfoSet::new(code.field(), code.generator(), &order, &available);
        if set.rank == 0 {
            break;
        }
        if set.rank == code.k() {
            for &p in &set.pivots {
                available[p] = false;
            }
            sets.push(set);
        } else {
            sets.push(set);
            break;
        }
    }
    sets
}

#[derive(Clone, Debug)]
struct Best {
    weight: usize,
    word: Vec<u16>,
}

impl Best {
    fn none() -> Best {
        Best { weight: usize::MAX, word: Vec::new() }
    }

    fn offer(&mut self, weight: usize, word: Vec<u16>) {
        if weight < self.weight || (weight == self.weight && word < self.word) {
            self.weight = weight;
            self.word = word;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if other.weight != usize::MAX {
            self.offer(other.weight, other.word);
        }
        self
    }
}

struct Enumerator<'a, A: Adder> {
    adder: A,
    field: &'a Field,
    set: &'a InfoSet,
    k: usize,
    rl: usize,
    q: usize,
    units: Vec<u16>,
    scaled: Option<Vec<u16>>,
}

impl<'a, A: Adder> Enumerator<'a, A> {
    fn new(adder: A, field: &'a Field, set: &'a InfoSet) -> Self {
        let k = set.full.rows();
        let rl = set.full.cols() - k;
        let q = field.order() as usize;
        let units: Vec<u16> = field.units().iter().map(|u| u.0).collect();
        let scaled = (k * q * rl <= SCALED_TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; k * q * rl];
            for i in 0..k {
                let row = &set.redundancy[i * rl..(i + 1) * rl];
                for c in 1..q {
                    let dst = &mut t[(i * q + c) * rl..(i * q + c + 1) * rl];
                    for (d, &x) in dst.iter_mut().zip(row) {
                        *d = field.mul(FieldElement(c as u16), FieldElement(x)).0;
                    }
                }
            }
            t
        });
        Enumerator { adder, field, set, k, rl, q, units, scaled }
    }

    fn row(&self, i: usize) -> &[u16] {
        &self.set.redundancy[i * self.rl..(i + 1) * self.rl]
    }

    fn scaled_row<'s>(&'s self, i: usize, c: u16, scratch: &'s mut [u16]) -> &'s [u16] {
        match &self.scaled {
            Some(t) => {
                let base = (i * self.q + c as usize) * self.rl;
                &t[base..base + self.rl]
            }
            None => {
                for (d, &x) in scratch.iter_mut().zip(self.row(i)) {
                    *d = self.field.mul(FieldElement(c), FieldElement(x)).0;
                }
                scratch
            }
        }
    }

    /// Full codeword for a message, scaled so its first nonzero entry is one.
    fn reconstruct(&self, path: &[(usize, u16)]) -> Vec<u16> {
        let n = self.set.full.cols();
        let mut word = vec![FieldElement::ZERO; n];
        for &(i, c) in path {
            for (w, &g) in word.iter_mut().zip(self.set.full.row(i)) {
                *w = self.field.add(*w, self.field.mul(FieldElement(c), g));
            }
        }
        let lead = *word.iter().find(|x| !x.is_zero()).expect("nonzero codeword");
        let inv = self.field.inv(lead).expect("nonzero");
        word.iter().map(|&x| self.field.mul(inv, x).0).collect()
    }

    #[inline]
    fn leaf(&self, buf: &[u16], path: &[(usize, u16)], best: &mut Best) {
        let w = path.len() + buf.iter().filter(|&&x| x != 0).count();
        if w <= best.weight {
            best.offer(w, self.reconstruct(path));
        }
    }

    /// Extends `partial` (message support `path`) with rows after `last`,
    /// evaluating messages whose support size lies in `lo..=hi`.
    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        partial: &[u16],
        last: usize,
        lo: usize,
        hi: usize,
        path: &mut Vec<(usize, u16)>,
        stack: &mut [Vec<u16>],
        scratch: &mut [u16],
        best: &mut Best,
        work: &mut u64,
    ) {
        let depth = path.len() + 1;
        let (cur, rest) = stack.split_first_mut().expect("stack depth");
        for j in last + 1..self.k {
            if depth + (self.k - 1 - j) < lo {
                break;
            }
            for &c in &self.units {
                let s = self.scaled_row(j, c, scratch);
                self.adder.add(cur, partial, s);
                path.push((j, c));
                if depth >= lo {
                    *work += 1;
                    self.leaf(cur, path, best);
                }
                if depth < hi {
                    self.descend(cur, j, lo, hi, path, rest, scratch, best, work);
                }
                path.pop();
            }
        }
    }

    /// Tasks are a leading row `i`, optionally followed by a second row `j`.
    fn run(&self, lo: usize, hi: usize) -> (Best, u64) {
        let k = self.k;
        let mut tasks: Vec<(usize, Option<usize>)> = Vec::new();
        for i in 0..k {
            if lo <= 1 {
                tasks.push((i, None));
            }
            if hi >= 2 {
                for j in i + 1..k {
                    if 2 + (k - 1 - j) >= lo {
                        tasks.push((i, Some(j)));
                    }
                }
            }
        }
        let results: Vec<(Best, u64)> = tasks
            .par_iter()
            .map(|&(i, second)| {
                let mut best = Best::none();
                let mut work = 0u64;
                let mut path = vec![(i, 1u16)];
                match second {
                    None => {
                        work += 1;
                        self.leaf(self.row(i), &path, &mut best);
                    }
                    Some(j) => {
                        let mut stack = vec![vec![0u16; self.rl]; hi.max(2)];
                        let mut scratch = vec![0u16; self.rl];
                        let (first, rest) = stack.split_first_mut().unwrap();
                        for &c in &self.units {
                            let s = self.scaled_row(j, c, &mut scratch);
                            self.adder.add(first, self.row(i), s);
                            path.push((j, c));
                            if lo <= 2 {
                                work += 1;
                                self.leaf(first, &path, &mut best);
                            }
                            if hi > 2 {
                                self.descend(first, j, lo, hi, &mut path, rest, &mut scratch, &mut best, &mut work);
                            }
                            path.pop();
                        }
                    }
                }
                (best, work)
            })
            .collect();
        results
            .into_iter()
            .fold((Best::none(), 0), |(b, w), (b2, w2)| (b.merge(b2), w + w2))
    }
}

/// Enumerates messages of support size `lo..=hi` in one information set.
fn enumerate(field: &Field, set: &InfoSet, lo: usize, hi: usize) -> (Best, u64) {
    match field.add_kind() {
        AddKind::Xor => Enumerator::new(XorAdd, field, set).run(lo, hi),
        AddKind::ModP(p) => Enumerator::new(ModPAdd(p), field, set).run(lo, hi),
        AddKind::Table => {
            let table = field.add_table().iter().map(|x| x.0).collect();
            let adder = TableAdd { q: field.order() as usize, table };
            Enumerator::new(adder, field, set).run(lo, hi)
        }
    }
}

fn to_elements(word: &[u16]) -> Vec<FieldElement> {
    word.iter().map(|&x| FieldElement(x)).collect()
}

/// Visits all `(q^k - 1)/(q - 1)` projective codewords.
pub fn min_distance_exhaustive(code: &LinearCode, work_cap: u64) -> Result<WeightReport, CodeError> {
    let k = code.k();
    if k == 0 {
        return Err(CodeError::EmptyCode);
    }
    let needed = projective_count(code.field().order(), k);
    if needed > work_cap as u128 {
        return Err(CodeError::WorkCapExceeded { needed, cap: work_cap });
    }
    let n = code.n();
    let order: Vec<usize> = (0..n).collect();
    let set = InfoSet::new(code.field(), code.generator(), &order, &vec![true; n]);
    let (best, work) = enumerate(code.field(), &set, 1, k);
    Ok(WeightReport {
        d: best.weight,
        witness: to_elements(&best.word),
        method: SearchMethod::Exhaustive,
        work,
    })
}

/// Runs the information-set search level by level until the bounds meet
/// or the next level would push the work past `work_cap`.
pub fn distance_bounds(code: &LinearCode, work_cap: u64) -> Result<DistanceSearch, CodeError> {
    let k = code.k();
    if k == 0 {
        return Err(CodeError::EmptyCode);
    }
    let q = code.field().order();
    let sets = information_sets(code);
    let mut best = Best::none();
    let mut work: u64 = 0;
    let mut lower = sets.iter().map(|s| s.contribution(k, 0)).sum::<usize>().max(1);
    // A set becomes active once its contribution is positive; from then on
    // every level up to the current one has been enumerated for it.
    let mut active = vec![false; sets.len()];
    let mut level = 0;
    let mut exact = false;
    for w in 1..=k {
        let mut plan = Vec::new();
        let mut cost: u128 = 0;
        for (j, set) in sets.iter().enumerate() {
            if set.contribution(k, w) == 0 {
                continue;
            }
            let lo = if active[j] { w } else { 1 };
            cost += (lo..=w).map(|l| level_size(q, k, l)).sum::<u128>();
            plan.push((j, lo));
        }
        if work as u128 + cost > work_cap as u128 {
            break;
        }
        for (j, lo) in plan {
            let (b, wk) = enumerate(code.field(), &sets[j], lo, w);
            best = best.merge(b);
            work += wk;
            active[j] = true;
        }
        level = w;
        lower = lower.max(sets.iter().map(|s| s.contribution(k, w)).sum());
        if best.weight <= lower || w == k {
            exact = true;
            break;
        }
    }
    let upper = if best.weight == usize::MAX { code.singleton_bound() } else { best.weight };
    Ok(DistanceSearch {
        lower: lower.min(upper),
        upper,
        witness: (best.weight != usize::MAX).then(|| to_elements(&best.word)),
        exact: exact || lower >= upper,
        work,
        level,
        info_sets: sets.len(),
    })
}

pub fn min_distance_infoset(code: &LinearCode, work_cap: u64) -> Result<WeightReport, CodeError> {
    let search = distance_bounds(code, work_cap)?;
    if !search.exact {
        let k = code.k();
        let needed = level_size(code.field().order(), k, (search.level + 1).min(k));
        return Err(CodeError::WorkCapExceeded { needed: needed + search.work as u128, cap: work_cap });
    }
    Ok(WeightReport {
        d: search.upper,
        witness: search.witness.expect("exact search found a codeword"),
        method: SearchMethod::InformationSet,
        work: search.work,
    })
}

pub fn min_distance(code: &LinearCode, method: Method, work_cap: u64) -> Result<WeightReport, CodeError> {
    match method {
        Method::Exhaustive => min_distance_exhaustive(code, work_cap),
        Method::InfoSet => min_distance_infoset(code, work_cap),
        Method::Auto => {
            if projective_count(code.field().order(), code.k()) <= AUTO_EXHAUSTIVE_LIMIT {
                min_distance_exhaustive(code, work_cap)
            } else {
                min_distance_infoset(code, work_cap)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Weight of every nonzero combination, by plain counting in base q.
    fn brute_force(code: &LinearCode) -> usize {
        let f = code.field();
        let q = f.order() as usize;
        let k = code.k();
        let mut best = usize::MAX;
        let total = q.pow(k as u32);
        for idx in 1..total {
            let mut msg = Vec::with_capacity(k);
            let mut x = idx;
            for _ in 0..k {
                msg.push(FieldElement((x % q) as u16));
                x /= q;
            }
            let w = super::super::hamming_weight(&code.encode(&msg));
            best = best.min(w);
        }
        best
    }

    fn random_code(q: u32, k: usize, n: usize, seed: u64) -> LinearCode {
        let f = Field::with_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..k)
            .map(|_| (0..n).map(|_| FieldElement(rng.gen_range(0..q) as u16)).collect())
            .collect();
        LinearCode::from_generator(&f, &Matrix::from_rows(rows, n))
    }

    #[test]
    fn hamming_code() {
        let f2 = Field::with_order(2).unwrap();
        let rows = ["1000110", "0100101", "0010011", "0001111"]
            .iter()
            .map(|s| s.bytes().map(|b| FieldElement((b - b'0') as u16)).collect())
            .collect();
        let c = LinearCode::from_generator(&f2, &Matrix::from_rows(rows, 7));
        let ex = min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(ex.d, 3);
        assert_eq!(ex.work, 15);
        assert_eq!(super::super::hamming_weight(&ex.witness), 3);
        assert!(c.contains(&ex.witness).unwrap());
        let is = min_distance_infoset(&c, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(is.d, 3);
    }

    #[test]
    fn work_cap_is_enforced() {
        let c = random_code(3, 10, 20, 1);
        let err = min_distance_exhaustive(&c, 100).unwrap_err();
        assert!(matches!(err, CodeError::WorkCapExceeded { needed: 29524, cap: 100 }));
        let search = distance_bounds(&c, 10).unwrap();
        assert!(search.lower <= search.upper);
    }

    #[test]
    fn engines_agree_with_brute_force_over_extension_fields() {
        for (q, seed) in [(4u32, 3u64), (8, 4), (9, 5), (25, 6)] {
            let c = random_code(q, 3, 9, seed);
            let d = brute_force(&c);
            assert_eq!(min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap().d, d, "q={q}");
            assert_eq!(min_distance_infoset(&c, DEFAULT_WORK_CAP).unwrap().d, d, "q={q}");
        }
    }

    #[test]
    fn witness_is_independent_of_thread_count() {
        let c = random_code(5, 6, 14, 9);
        let a = min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap());
        assert_eq!(a, b);
        let lead = a.witness.iter().find(|x| !x.is_zero()).unwrap();
        assert_eq!(*lead, FieldElement::ONE);
    }

    #[test]
    fn level_sizes_sum_to_projective_count() {
        for (q, k) in [(2u32, 7usize), (3, 5), (8, 4)] {
            let total: u128 = (1..=k).map(|w| level_size(q, k, w)).sum();
            assert_eq!(total, projective_count(q, k));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn infoset_matches_exhaustive(q in prop::sample::select(vec![2u32, 3, 4, 5, 7]), k in 1usize..5, extra in 0usize..8, seed in any::<u64>()) {
            let c = random_code(q, k, k + extra, seed);
            prop_assume!(c.k() > 0);
            let ex = min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap();
            let is = min_distance_infoset(&c, DEFAULT_WORK_CAP).unwrap();
            prop_assert_eq!(ex.d, brute_force(&c));
            prop_assert_eq!(is.d, ex.d);
            prop_assert!(ex.d <= c.singleton_bound());
            prop_assert!(c.contains(&is.witness).unwrap());
            prop_assert_eq!(super::super::hamming_weight(&is.witness), is.d);
        }

        #[test]
        fn truncated_bounds_bracket_the_distance(seed in any::<u64>(), cap in 0u64..200) {
            let c = random_code(3, 6, 12, seed);
            prop_assume!(c.k() > 0);
            let d = min_distance_exhaustive(&c, DEFAULT_WORK_CAP).unwrap().d;
            let s = distance_bounds(&c, cap).unwrap();
            prop_assert!(s.lower <= d && d <= s.upper);
            if s.exact { prop_assert_eq!(s.upper, d); }
        }
    }
}
