//! End-to-end acceptance checks, one test per criterion. Each runs the
//! public API against independently computed expectations: brute-force
//! searches, hand-checked tables, and exhaustive small-scale sweeps.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use torusbundle::freeprod::{self, FreeProductSignature, Word};
use torusbundle::oracle::{
    bfs_subgroup_elements, brute_conjugator, brute_lattice_member, SearchBudget,
};
use torusbundle::rep::PslRep;
use torusbundle::sl2z::psl::PslWord;
use torusbundle::{
    betti1_flat, canonicalize_lift, compatible_symplectic, enumerate_lifts, is_normal_form, iso,
    lift_orbit_tag, matrix_to_word, member_with_witness, project_rep, sl_conjugate,
    verify_certificate, word_to_matrix, IsoVerdict, Sl2Matrix, SlGen, SlRep, SlWord, TorusBundle,
};

fn e2() -> Sl2Matrix {
    Sl2Matrix::identity()
}

fn mi() -> Sl2Matrix {
    Sl2Matrix::minus_identity()
}

fn neg(m: &Sl2Matrix) -> Sl2Matrix {
    mi().mul(m)
}

fn bundle(pairs: Vec<(Sl2Matrix, Sl2Matrix)>, m: i64, n: i64) -> TorusBundle {
    TorusBundle::new(SlRep::new(pairs), m, n).unwrap()
}

#[test]
fn criterion_1_generator_relations_and_word_roundtrips() {
    let start = Instant::now();
    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    assert_eq!(s.pow(4), e2());
    assert_eq!(s.pow(2), mi());
    assert_eq!(t.pow(3), mi());
    assert_eq!(s.pow(2), t.pow(3));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=20);
        let mut word = SlWord::empty();
        for _ in 0..len {
            let gen = if rng.gen_bool(0.5) {
                SlGen::S
            } else {
                SlGen::T
            };
            let exp: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            word.push(gen, exp);
        }
        let m = word_to_matrix(&word);
        let back = matrix_to_word(&m);
        assert_eq!(word_to_matrix(&back), m);
    }
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn criterion_2_order_agrees_with_repeated_multiplication() {
    let start = Instant::now();
    let mut checked = 0u32;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                for d in -4i64..=4 {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    let m = Sl2Matrix::new(a, b, c, d).unwrap();
                    let mut power = m.clone();
                    let mut first_identity = None;
                    for k in 1..=12u32 {
                        if power.is_identity() {
                            first_identity = Some(k);
                            break;
                        }
                        power = power.mul(&m);
                    }
                    match m.order() {
                        Some(o) => {
                            assert!(matches!(o, 1 | 2 | 3 | 4 | 6));
                            assert_eq!(first_identity, Some(o));
                        }
                        None => assert_eq!(first_identity, None),
                    }
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 180);
    assert!(start.elapsed() < Duration::from_secs(30));
}

#[test]
fn criterion_3_full_group_and_commutator_subgroup_invariants() {
    let sig = FreeProductSignature::psl();
    let full = freeprod::build(
        &sig,
        &[
            Word::parse("a", &sig).unwrap(),
            Word::parse("b", &sig).unwrap(),
        ],
    )
    .unwrap();
    let inv = freeprod::kurosh_invariants(&full);
    assert_eq!(inv.free_rank, 0);
    assert_eq!(inv.factor_counts.get(&2), Some(&1));
    assert_eq!(inv.factor_counts.get(&3), Some(&1));
    assert_eq!(freeprod::finite_index(&full), Some(1));

    let whole_image = SlRep::new(vec![(e2(), Sl2Matrix::gen_t()), (e2(), Sl2Matrix::gen_s())]);
    let psl = project_rep(&whole_image).unwrap();
    let cert = is_normal_form(&psl).unwrap();
    assert_eq!((cert.k, cert.l, cert.m), (0, 1, 2));
    let mut tags = Vec::new();
    for lift in enumerate_lifts(&psl) {
        let tag = lift_orbit_tag(&canonicalize_lift(&lift).unwrap()).unwrap();
        if !tags.contains(&tag) {
            tags.push(tag);
        }
    }
    assert_eq!(tags.len(), 1);

    let commutators = [
        Word::parse("abab2", &sig).unwrap(),
        Word::parse("ab2ab", &sig).unwrap(),
    ];
    let derived = freeprod::build(&sig, &commutators).unwrap();
    let dinv = freeprod::kurosh_invariants(&derived);
    assert_eq!(dinv.free_rank, 2);
    assert!(dinv.factor_counts.is_empty());
    assert_eq!(freeprod::finite_index(&derived), Some(6));
    let chi = freeprod::euler_characteristic_check(&derived);
    assert_eq!(chi, num_rational::Rational64::from_integer(-1));
}

#[test]
fn criterion_4_lift_orbit_census_at_genus_two() {
    let start = Instant::now();
    let sig = FreeProductSignature::psl();
    let w = |text: &str| Word::parse(text, &sig).unwrap().to_psl();
    let e = PslWord::empty();
    // Each row: betas for a genus-2 normal form, expected (k,l,m),
    // expected number of lift orbits (2^k when m>l, 2^(k+1) when m=l).
    type CensusRow = (&'static str, &'static str, (usize, usize, usize), usize);
    let rows: [CensusRow; 6] = [
        ("e", "e", (0, 0, 0), 2),
        ("ab", "e", (1, 1, 1), 4),
        ("b", "e", (0, 1, 1), 2),
        ("a", "e", (0, 0, 1), 1),
        ("ab", "bab2", (1, 1, 2), 2),
        ("b", "bab2", (0, 1, 2), 1),
    ];
    for (b1, b2, (k, l, m), expected_orbits) in rows {
        let rep = PslRep::new(vec![(e.clone(), w(b1)), (e.clone(), w(b2))]);
        let cert = is_normal_form(&rep).unwrap_or_else(|| panic!("({b1},{b2}) not normal form"));
        assert_eq!((cert.k, cert.l, cert.m), (k, l, m));
        let lifts = enumerate_lifts(&rep);
        assert_eq!(lifts.len(), 16);
        let mut tags = Vec::new();
        for lift in &lifts {
            let tag = lift_orbit_tag(&canonicalize_lift(lift).unwrap()).unwrap();
            if !tags.contains(&tag) {
                tags.push(tag);
            }
        }
        assert_eq!(tags.len(), expected_orbits, "betas ({b1},{b2})");
    }
    assert!(start.elapsed() < Duration::from_secs(10));
}

#[test]
fn criterion_5_finite_order_isomorphism_tables() {
    let start = Instant::now();
    // For each finite order, the four bundles with monodromy (±E₂, ±B)
    // and zero Euler vector; `yes[i][j]` is the expected verdict.
    // Order 4 identifies everything; orders 2 and 6 isolate (E₂,−B),
    // whose second matrix has order outside {2,4,6}.
    let all_yes = [[true; 4]; 4];
    let isolated_second = [
        [true, false, true, true],
        [false, true, false, false],
        [true, false, true, true],
        [true, false, true, true],
    ];
    let tables: [(Sl2Matrix, [[bool; 4]; 4]); 3] = [
        (Sl2Matrix::gen_s(), all_yes),
        (Sl2Matrix::gen_t(), isolated_second),
        (mi(), isolated_second),
    ];
    for (b, expected) in tables {
        let bundles = [
            bundle(vec![(e2(), b.clone())], 0, 0),
            bundle(vec![(e2(), neg(&b))], 0, 0),
            bundle(vec![(mi(), b.clone())], 0, 0),
            bundle(vec![(mi(), neg(&b))], 0, 0),
        ];
        for i in 0..4 {
            for j in 0..4 {
                match iso(&bundles[i], &bundles[j]).unwrap() {
                    IsoVerdict::Yes(cert) => {
                        assert!(expected[i][j], "unexpected Yes at ({i},{j}) for {b:?}");
                        assert!(verify_certificate(&bundles[i], &bundles[j], &cert).unwrap());
                    }
                    IsoVerdict::No(sep) => {
                        assert!(!expected[i][j], "unexpected No at ({i},{j}) for {b:?}");
                        assert_eq!(sep.condition, 1);
                    }
                    IsoVerdict::Indeterminate(r) => panic!("indeterminate at ({i},{j}): {r}"),
                }
            }
        }
    }
    assert!(start.elapsed() < Duration::from_secs(5));
}

/// Rank-based torsion test written directly from the excluded families:
/// trivial lattice needs a zero Euler vector, a rank-1 lattice needs the
/// Euler vector on the lattice line, and a rank-2 lattice absorbs
/// everything.
fn torsion_by_cases(cols: &[[BigInt; 2]], euler: &[BigInt; 2]) -> bool {
    let det2 = |u: &[BigInt; 2], v: &[BigInt; 2]| &u[0] * &v[1] - &u[1] * &v[0];
    let nonzero: Vec<&[BigInt; 2]> = cols
        .iter()
        .filter(|c| !(c[0].is_zero() && c[1].is_zero()))
        .collect();
    let Some(first) = nonzero.first() else {
        return euler[0].is_zero() && euler[1].is_zero();
    };
    for other in &nonzero[1..] {
        if !det2(first, other).is_zero() {
            return true;
        }
    }
    det2(first, euler).is_zero()
}

fn small_sl_matrices(bound: i64) -> Vec<Sl2Matrix> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if a * d - b * c == 1 {
                        out.push(Sl2Matrix::new(a, b, c, d).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_symplectic_compatibility_matches_excluded_families() {
    let mats = small_sl_matrices(2);
    let commuting: Vec<(Sl2Matrix, Sl2Matrix)> = mats
        .iter()
        .flat_map(|a| {
            mats.iter()
                .filter(move |b| a.mul(b) == b.mul(a))
                .map(move |b| (a.clone(), b.clone()))
        })
        .collect();
    let euler_range: Vec<(i64, i64)> = (-3..=3)
        .flat_map(|m| (-3..=3).map(move |n| (m, n)))
        .collect();

    let mut disagreements = 0usize;
    let mut check = |b: &TorusBundle| {
        let cols = torusbundle::euler_columns(b.rep());
        if compatible_symplectic(b) != torsion_by_cases(&cols, b.euler()) {
            disagreements += 1;
        }
    };

    for &(m, n) in &euler_range {
        check(&bundle(vec![], m, n));
    }
    for (a, bm) in &commuting {
        for &(m, n) in &euler_range {
            check(&bundle(vec![(a.clone(), bm.clone())], m, n));
        }
    }
    // Genus 2: pair every commuting handle with a fixed palette, plus
    // handles whose commutators cancel each other instead of vanishing.
    let palette: Vec<(Sl2Matrix, Sl2Matrix)> = vec![
        (e2(), e2()),
        (e2(), Sl2Matrix::gen_t()),
        (e2(), Sl2Matrix::shear()),
        (mi(), Sl2Matrix::gen_s()),
    ];
    for (a, bm) in commuting.iter().step_by(7) {
        for second in &palette {
            for &(m, n) in &euler_range {
                check(&bundle(vec![(a.clone(), bm.clone()), second.clone()], m, n));
            }
        }
    }
    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    for &(m, n) in &euler_range {
        check(&bundle(
            vec![(s.clone(), t.clone()), (t.clone(), s.clone())],
            m,
            n,
        ));
        check(&bundle(
            vec![(t.clone(), s.clone()), (s.clone(), t.clone())],
            m,
            n,
        ));
    }
    assert_eq!(disagreements, 0);

    assert_eq!(betti1_flat(&SlRep::new(vec![(e2(), e2())])), 4);
    assert_eq!(
        betti1_flat(&SlRep::new(vec![(e2(), Sl2Matrix::shear())])),
        3
    );
    assert_eq!(
        betti1_flat(&SlRep::new(vec![(e2(), Sl2Matrix::gen_t())])),
        2
    );
}

fn random_sl_word(rng: &mut ChaCha8Rng, max_len: usize) -> Sl2Matrix {
    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    let steps = [s.clone(), s.inverse(), t.clone(), t.inverse()];
    let mut m = e2();
    for _ in 0..rng.gen_range(0..=max_len) {
        m = m.mul(&steps[rng.gen_range(0..4)]);
    }
    m
}

fn random_subgroup_word(rng: &mut ChaCha8Rng, sig: &FreeProductSignature) -> Word {
    let mut w = Word::empty();
    for _ in 0..rng.gen_range(1..=4) {
        if rng.gen_bool(0.4) {
            w.push(0, 1, sig);
        } else {
            w.push(1, rng.gen_range(1..=2), sig);
        }
    }
    w
}

#[test]
fn criterion_7_algorithms_never_contradict_brute_force() {
    let start = Instant::now();
    let budget = SearchBudget::new(10, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);

    for _ in 0..1000 {
        let a = random_sl_word(&mut rng, 5);
        let b = if rng.gen_bool(0.5) {
            let q = random_sl_word(&mut rng, 4);
            let conj = q.conjugate(&a);
            if rng.gen_bool(0.25) {
                neg(&conj)
            } else {
                conj
            }
        } else {
            random_sl_word(&mut rng, 5)
        };
        let lib = sl_conjugate(&a, &b);
        if let Some(q) = &lib {
            assert_eq!(q.conjugate(&a), b);
        }
        if brute_conjugator(&a, &b, &budget).is_some() {
            assert!(lib.is_some());
        }
    }

    let sig = FreeProductSignature::psl();
    for _ in 0..10 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=2))
            .map(|_| random_subgroup_word(&mut rng, &sig))
            .collect();
        let graph = freeprod::build(&sig, &gens).unwrap();
        let elements = bfs_subgroup_elements(&sig, &gens, &budget);
        for _ in 0..100 {
            let query = if rng.gen_bool(0.5) {
                let mut w = Word::empty();
                for _ in 0..rng.gen_range(0..=3) {
                    let pick = &gens[rng.gen_range(0..gens.len())];
                    let factor = if rng.gen_bool(0.5) {
                        pick.clone()
                    } else {
                        pick.inverse(&sig)
                    };
                    w = w.concat(&factor, &sig);
                }
                w
            } else {
                random_subgroup_word(&mut rng, &sig)
            };
            let found = freeprod::member(&graph, &query).is_some();
            if elements.contains(&query) {
                assert!(found, "{}", query.display(&sig));
            }
        }
    }

    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let rand_vec = |rng: &mut ChaCha8Rng| {
            [
                BigInt::from(rng.gen_range(-9i64..=9)),
                BigInt::from(rng.gen_range(-9i64..=9)),
            ]
        };
        let gens: Vec<[BigInt; 2]> = (0..n).map(|_| rand_vec(&mut rng)).collect();
        let target = if rng.gen_bool(0.5) {
            let mut acc = [BigInt::zero(), BigInt::zero()];
            for g in &gens {
                let c = BigInt::from(rng.gen_range(-4i64..=4));
                acc[0] += &c * &g[0];
                acc[1] += &c * &g[1];
            }
            acc
        } else {
            rand_vec(&mut rng)
        };
        let lib = member_with_witness(&target, &gens);
        if let Some(coeffs) = &lib {
            let mut acc = [BigInt::zero(), BigInt::zero()];
            for (c, g) in coeffs.iter().zip(&gens) {
                acc[0] += c * &g[0];
                acc[1] += c * &g[1];
            }
            assert_eq!(acc, target);
        }
        let brute = brute_lattice_member(&target, &gens, 9);
        if brute.is_some() {
            assert!(lib.is_some());
        }
        if lib.is_none() {
            assert!(brute.is_none());
        }
    }
    assert!(start.elapsed() < Duration::from_secs(120));
}

#[test]
fn criterion_8_every_yes_verdict_reverifies() {
    let mut yes_count = 0usize;
    let mut verify = |b1: &TorusBundle, b2: &TorusBundle| {
        if let IsoVerdict::Yes(cert) = iso(b1, b2).unwrap() {
            assert!(verify_certificate(b1, b2, &cert).unwrap());
            yes_count += 1;
        }
    };

    let genus0: Vec<TorusBundle> = [(0, 0), (1, 0), (2, 0), (6, 4), (3, 5), (-2, 2)]
        .into_iter()
        .map(|(m, n)| bundle(vec![], m, n))
        .collect();
    for b1 in &genus0 {
        for b2 in &genus0 {
            verify(b1, b2);
        }
    }

    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    let c = Sl2Matrix::shear();
    let hyper = Sl2Matrix::new(3, 1, 2, 1).unwrap();
    let genus1: Vec<TorusBundle> = vec![
        bundle(vec![(e2(), t.clone())], 0, 0),
        bundle(vec![(mi(), t.clone())], 0, 0),
        bundle(vec![(mi(), neg(&t))], 0, 0),
        bundle(vec![(e2(), s.clone())], 2, 1),
        bundle(vec![(mi(), neg(&s))], 1, 0),
        bundle(vec![(e2(), c.clone())], 3, 0),
        bundle(vec![(e2(), c.clone())], 1, 0),
        bundle(vec![(e2(), c.pow(2))], 3, 1),
        bundle(vec![(e2(), c.pow(2))], 0, 1),
        bundle(vec![(e2(), hyper.clone())], 1, 0),
        bundle(vec![(e2(), hyper.clone())], 1, -2),
        bundle(vec![(e2(), e2())], 4, 6),
        bundle(vec![(e2(), e2())], 2, 0),
        bundle(vec![(mi(), e2())], 1, 1),
        bundle(vec![(mi(), e2())], 3, 0),
        bundle(vec![(e2(), mi())], 1, 0),
        bundle(vec![(t.clone(), t.clone())], 0, 0),
    ];
    for b1 in &genus1 {
        for b2 in &genus1 {
            verify(b1, b2);
        }
    }

    let genus2: Vec<TorusBundle> = vec![
        bundle(vec![(e2(), t.clone()), (e2(), s.clone())], 2, 3),
        bundle(vec![(e2(), t.clone()), (e2(), s.clone())], 0, 0),
        bundle(vec![(e2(), c.clone()), (e2(), e2())], 5, 0),
        bundle(vec![(e2(), c.clone()), (e2(), e2())], 0, 0),
        bundle(vec![(e2(), e2()), (e2(), e2())], 2, 0),
        bundle(vec![(e2(), e2()), (e2(), e2())], 0, 2),
        bundle(vec![(mi(), e2()), (e2(), e2())], 1, 0),
        bundle(vec![(mi(), e2()), (e2(), e2())], 0, 1),
        bundle(vec![(e2(), c.clone()), (mi(), e2())], 0, 0),
    ];
    for b1 in &genus2 {
        for b2 in &genus2 {
            if let IsoVerdict::Yes(cert) = iso(b1, b2).unwrap() {
                assert!(verify_certificate(b1, b2, &cert).unwrap());
                yes_count += 1;
            }
        }
    }

    // Transitivity on a golden triple from the order-4 family.
    let tri = [
        bundle(vec![(e2(), s.clone())], 0, 0),
        bundle(vec![(mi(), s.clone())], 0, 0),
        bundle(vec![(mi(), neg(&s))], 0, 0),
    ];
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        assert!(iso(&tri[i], &tri[j]).unwrap().is_yes());
    }

    assert!(yes_count >= 40, "only {yes_count} Yes verdicts exercised");
}

#[test]
fn iso_is_symmetric_on_mixed_corpus() {
    let s = Sl2Matrix::gen_s();
    let t = Sl2Matrix::gen_t();
    let c = Sl2Matrix::shear();
    let corpus: Vec<TorusBundle> = vec![
        bundle(vec![(e2(), t.clone())], 5, 7),
        bundle(vec![(e2(), t.clone())], 0, 0),
        bundle(vec![(mi(), neg(&t))], 0, 0),
        bundle(vec![(e2(), c.clone())], 1, 0),
        bundle(vec![(e2(), c.clone())], 0, 1),
        bundle(vec![(e2(), mi())], 2, 0),
        bundle(vec![(mi(), e2())], 1, 1),
        bundle(vec![(e2(), s.clone())], 0, 2),
    ];
    let mut seen_yes = HashSet::new();
    for (i, b1) in corpus.iter().enumerate() {
        for (j, b2) in corpus.iter().enumerate() {
            let fwd = iso(b1, b2).unwrap().is_yes();
            let bwd = iso(b2, b1).unwrap().is_yes();
            assert_eq!(fwd, bwd, "asymmetry between {i} and {j}");
            if fwd {
                seen_yes.insert((i.min(j), i.max(j)));
            }
        }
    }
    assert!(seen_yes.len() > corpus.len());
}
