use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::code::{hamming_weight, LinearCode};
use toric_core::decoder::{setup, DecodeStatus, DecoderSetup, SetupOptions};
use toric_core::geometry::{orbit_points, torus_points};
use toric_core::{Divisor, Fan, Field, FieldElement, ToricCodeSpec};

fn fan1() -> Fan {
    Fan::new(vec![[2, -1], [-1, 2], [-1, -1]]).unwrap()
}

/// Torus points, then one point on each of the first two ray orbits.
fn spec(q: u32, g: [i64; 3]) -> ToricCodeSpec {
    let field = Field::with_order(q).unwrap();
    let mut pts = torus_points(&field);
    pts.push(orbit_points(&fan1(), 0, &field).unwrap()[0]);
    pts.push(orbit_points(&fan1(), 1, &field).unwrap()[0]);
    ToricCodeSpec::new(field, fan1(), Divisor::new(g.to_vec()), pts).unwrap()
}

fn random_codeword(code: &LinearCode, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let q = code.field().order() as u16;
    let msg: Vec<FieldElement> = (0..code.k()).map(|_| FieldElement(rng.gen_range(0..q))).collect();
    code.encode(&msg)
}

fn add(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn sub(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

fn planted(n: usize, support: &[usize], q: u16, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let mut e = vec![FieldElement::ZERO; n];
    for &i in support {
        e[i] = FieldElement(rng.gen_range(1..q));
    }
    e
}

fn worked_setups() -> Vec<DecoderSetup> {
    [7u32, 8, 9]
        .iter()
        .map(|&q| setup(&spec(q, [0, 0, 10]), &Divisor::new(vec![2, 2, 2]), SetupOptions::default()).unwrap())
        .collect()
}

#[test]
fn locator_vanishes_on_orbit_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for s in worked_setups() {
        let f = s.spec().field().clone();
        let q = f.order() as u16;
        let n = s.n();
        let (a, b) = (n - 2, n - 1);
        for support in [vec![a], vec![b], vec![a, b]] {
            // L(G' - sum of the divisors through the error points) must be nonempty
            let mut reduced = s.gprime().clone();
            for &i in &support {
                reduced.coeffs[i - (n - 2)] -= 1;
            }
            let poly = s.spec().fan().polytope(&reduced).unwrap();
            assert!(!poly.lattice_points().unwrap().is_empty());
            for _ in 0..20 {
                let e = planted(n, &support, q, &mut rng);
                let r = add(&f, &random_codeword(s.code(), &mut rng), &e);
                let loc = s.error_locator(&r).unwrap().expect("locator exists");
                let vals = s.locator_values(&loc);
                for &i in &support {
                    assert!(vals[i].is_zero(), "q={q} support {support:?}");
                }
            }
        }
    }
}

#[test]
fn small_zero_sets_give_exactly_the_planted_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut exercised = 0;
    for s in worked_setups() {
        let f = s.spec().field().clone();
        let q = f.order() as u16;
        let n = s.n();
        for trial in 0..60 {
            let mut support: Vec<usize> = match trial % 3 {
                0 => vec![n - 2, n - 1],
                1 => vec![rng.gen_range(0..n - 2)],
                _ => vec![rng.gen_range(0..n - 2), n - 1],
            };
            support.dedup();
            let e = planted(n, &support, q, &mut rng);
            let r = add(&f, &random_codeword(s.code(), &mut rng), &e);
            let Some(loc) = s.error_locator(&r).unwrap() else { continue };
            let zeros = s.zero_set(&loc).unwrap();
            if zeros.len() > s.zero_cap || zeros.len() >= s.dual_distance.0 {
                continue;
            }
            let sols = s.error_values(&r, &zeros).unwrap().expect("consistent").expect("small");
            assert_eq!(sols.len(), 1, "q={q} |N(f)|={}", zeros.len());
            if support.iter().all(|i| zeros.contains(i)) {
                assert_eq!(sols[0], e);
                exercised += 1;
            }
        }
    }
    assert!(exercised >= 60, "only {exercised} located trials");
}

/// All codewords of a small code.
fn codewords(code: &LinearCode) -> Vec<Vec<FieldElement>> {
    let f = code.field();
    let mut out = vec![vec![FieldElement::ZERO; code.n()]];
    for row in code.generator().iter_rows() {
        let mut next = Vec::with_capacity(out.len() * f.order() as usize);
        for c in &out {
            for a in f.elements() {
                next.push(c.iter().zip(row).map(|(&x, &y)| f.add(x, f.mul(a, y))).collect());
            }
        }
        out = next;
    }
    out
}

fn distance(a: &[FieldElement], b: &[FieldElement]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[test]
fn decoder_never_returns_a_wrong_unique_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut configs = 0;
    let mut uniques = 0;
    for q in [3u32, 4, 5] {
        for a in 1..=12 {
            for gp in [[0, 0, 1], [1, 1, 1], [0, 0, 2], [1, 1, 2], [2, 2, 2]] {
                let sp = spec(q, [0, 0, a]);
                let Ok(s) = setup(&sp, &Divisor::new(gp.to_vec()), SetupOptions::default()) else { continue };
                let code = s.code();
                if code.k() == 0 || code.k() > 6 || code.n() > 20 {
                    continue;
                }
                configs += 1;
                let f = code.field().clone();
                let words = codewords(code);
                let d = words.iter().map(|c| hamming_weight(c)).filter(|&w| w > 0).min().unwrap();
                assert!(s.radius() <= (d - 1) / 2);
                assert!(s.dual_distance.0 <= d && d <= s.dual_distance.1);
                let n = code.n();
                for _ in 0..40 {
                    let w = rng.gen_range(0..=3.min(n));
                    let mut support: Vec<usize> = (0..w).map(|_| rng.gen_range(0..n)).collect();
                    support.sort();
                    support.dedup();
                    let e = planted(n, &support, f.order() as u16, &mut rng);
                    let r = add(&f, &random_codeword(code, &mut rng), &e);
                    let nearest = words.iter().map(|c| distance(&r, c)).min().unwrap();
                    let out = s.decode(&r).unwrap();
                    for cand in &out.errors {
                        assert!(code.contains(&sub(&f, &r, cand)).unwrap());
                        if out.locator.is_some() {
                            assert!((0..n).all(|i| cand[i].is_zero() || out.zero_set.contains(&i)));
                        }
                    }
                    if out.status == DecodeStatus::Unique {
                        uniques += 1;
                        assert_eq!(hamming_weight(&out.errors[0]), nearest);
                        let ties = words.iter().filter(|c| distance(&r, c) == nearest).count();
                        assert_eq!(ties, 1);
                    }
                }
            }
        }
    }
    assert!(configs >= 3, "only {configs} small configurations");
    assert!(uniques > 0);
}
