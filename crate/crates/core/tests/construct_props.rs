use std::collections::BTreeSet;

use ffwitness::construct::{self, AlphaPolicy, PipelineParams, Tower};
use ffwitness::poly::Polynomial;
use ffwitness::{charsum, nt, Embedding, Field, FieldElement, FieldOptions};
use num_integer::Integer;
use proptest::prelude::*;

fn opts() -> FieldOptions {
    FieldOptions::default()
}

/// Indices of the nonzero squares, by squaring every element.
fn squares(f: &Field) -> BTreeSet<u32> {
    f.nonzero_elements().map(|y| (y * y).index()).collect()
}

#[test]
fn set_cardinality_formula_exhaustive() {
    for q in nt::prime_powers_in(2, 128) {
        let (p, k) = nt::prime_power(q).unwrap();
        let tower = Tower::new(p as u32, k, 2, &opts()).unwrap();
        let emb = tower.embedding().unwrap();
        let outside: Vec<FieldElement> = tower.big.elements().filter(|&a| !emb.contains(a)).collect();
        let alphas = [outside[0], outside[outside.len() / 2], tower.big.generator()];
        for t in 1..=16u64 {
            let expected = 1 + (q - 1) / t.gcd(&(q - 1));
            for &alpha in &alphas {
                let s = construct::build_set(alpha, t, &emb).unwrap();
                assert_eq!(s.len() as u64, expected, "q={q} t={t}");
                assert!(s.iter().all(|e| !e.is_zero()));
                // oracle: the set of t-th powers of F_q, computed by repeated multiplication
                let powers: BTreeSet<u32> = emb
                    .image()
                    .map(|x| (0..t).fold(tower.big.one(), |acc, _| acc * x).index())
                    .collect();
                let direct: BTreeSet<u32> = powers
                    .iter()
                    .map(|&i| (alpha - tower.big.element(i as u64).unwrap()).index())
                    .collect();
                assert_eq!(s.iter().map(|e| e.index()).collect::<BTreeSet<_>>(), direct);
            }
        }
    }
}

#[test]
fn coset_check_matches_direct_search() {
    for (p, k, h) in [(2u32, 1u32, 2u32), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (7, 1, 2), (3, 1, 3), (2, 1, 4), (3, 1, 4)] {
        let check = construct::linear_coset_check(p, k, h, &opts()).unwrap();
        let tower = Tower::new(p, k, h, &opts()).unwrap();
        let emb = tower.embedding().unwrap();
        let n = tower.big.order() - 1;
        let divisors: Vec<u64> = nt::factorize(n).unwrap().divisors().into_iter().filter(|&d| d > 1).collect();
        assert_eq!(check.divisors, divisors.len() as u64);
        let mut failures = Vec::new();
        for alpha in tower.big.elements().filter(|&a| !emb.contains(a)) {
            let coset: Vec<FieldElement> = emb.image().map(|x| alpha - x).collect();
            let failing = divisors
                .iter()
                .filter(|&&d| construct::find_non_dth_power(&coset, d).unwrap().is_none())
                .max();
            if let Some(&d) = failing {
                failures.push((alpha.index() as u64, d));
            }
        }
        assert_eq!(check.failures, failures, "q={} h={h}", check.q);
        // every alpha in a proper intermediate field fails, for d = (q^h-1)/(q^j-1)
        let q = check.q;
        let in_subfield = |a: FieldElement| (1..h).filter(|j| h % j == 0).any(|j| a.pow(q.pow(j)) == a);
        let subfield_alphas: Vec<u64> = tower
            .big
            .elements()
            .filter(|&a| !emb.contains(a) && in_subfield(a))
            .map(|a| a.index() as u64)
            .collect();
        assert!(subfield_alphas.iter().all(|i| failures.iter().any(|f| f.0 == *i)));
        let counted = failures.iter().filter(|f| subfield_alphas.contains(&f.0)).count();
        assert_eq!(check.subfield_failures, counted as u64);
        // h <= sqrt(q) is the covered range
        if (h as u64).pow(2) <= check.q {
            assert!(check.holds(), "q={} h={h}", check.q);
        }
        assert_eq!(check.alphas, tower.big.order() - tower.q());
    }
}

#[test]
fn density_scan_agrees_with_pipeline() {
    for (p, k, h, t, d) in [(7u32, 1u32, 2u32, 1u64, 2u64), (5, 1, 2, 2, 2), (3, 1, 3, 1, 13), (2, 2, 2, 1, 5)] {
        let scan = construct::alpha_density_scan(p, k, h, t, d, &opts()).unwrap();
        assert_eq!(scan.valid_certified, scan.valid);
        let tower = Tower::new(p, k, h, &opts()).unwrap();
        let emb = tower.embedding().unwrap();
        let mut certified = 0;
        for alpha in tower.big.elements().filter(|&a| !emb.contains(a)) {
            let rep = construct::construct_pipeline(
                &PipelineParams {
                    t: Some(t),
                    alpha: AlphaPolicy::Given(alpha.index() as u64),
                    ..PipelineParams::new(p, k, h, d)
                },
                &opts(),
            )
            .unwrap();
            certified += rep.verified as u64;
            if rep.guaranteed {
                assert!(rep.verified);
            }
        }
        assert_eq!(scan.certified, certified);
    }
}

#[test]
fn primitive_counts_match_indicator() {
    for q in [7u32, 9, 11] {
        let (p, k) = nt::prime_power(q as u64).unwrap();
        let tower = Tower::new(p as u32, k, 2, &opts()).unwrap();
        let emb = tower.embedding().unwrap();
        for t in [1u64, 2] {
            for alpha in tower.big.elements().filter(|&a| !emb.contains(a)) {
                let params = PipelineParams {
                    t: Some(t),
                    alpha: AlphaPolicy::Given(alpha.index() as u64),
                    ..PipelineParams::new(p as u32, k, 2, 2)
                };
                let rep = construct::primitive_set_search(&params, &opts()).unwrap();
                let stats = rep.primitive.unwrap();
                let set = construct::build_set(alpha, t, &emb).unwrap();
                let over_set: f64 = set.iter().map(|&s| charsum::primitive_indicator(s).unwrap()).sum();
                let over_coset: f64 = emb
                    .image()
                    .map(|x| charsum::primitive_indicator(alpha - x.pow(t)).unwrap())
                    .sum();
                assert!((over_set - stats.n_actual as f64).abs() < 1e-6);
                assert!((over_coset - stats.n_weighted as f64).abs() < 1e-6);
                assert!(stats.n_weighted as f64 >= stats.n_lower);
                assert_eq!(rep.verified, stats.n_actual > 0);
                if alpha.is_primitive().unwrap() && t == 1 {
                    // x = 0 keeps alpha itself in the set
                    assert!(rep.verified);
                }
            }
        }
    }
}

#[test]
fn lower_bound_examples() {
    let b = construct::primitive_lower_bound(7, 2, 1).unwrap();
    assert_eq!((b.tau, b.phi), (10, 16));
    assert!((b.n_lower - (16.0 / 48.0) * (7.0 - 9.0 * 7f64.sqrt())).abs() < 1e-12);
    assert!(!b.tau_condition);
    for q in nt::prime_powers_in(3, 2000) {
        for t in 1..4 {
            let b = construct::primitive_lower_bound(q, 2, t).unwrap();
            if b.tau_condition {
                assert!(b.n_lower > 0.0, "q={q} t={t}");
            }
        }
    }
}

#[test]
fn reports_survive_json_and_detect_tampering() {
    for (p, k, h, d) in [(7u32, 1u32, 2u32, 2u64), (3, 2, 2, 4), (2, 1, 2, 3), (257, 1, 2, 2), (5, 1, 3, 31)] {
        let rep = construct::construct_pipeline(&PipelineParams::new(p, k, h, d), &opts()).unwrap();
        let back: construct::ConstructionReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
        assert!(construct::verify(&back, &opts()).unwrap().ok);
        let mut bad = rep.clone();
        bad.set_indices.reverse();
        bad.set_indices.push(0);
        assert!(!construct::verify(&bad, &opts()).unwrap().ok);
        let mut bad = rep.clone();
        bad.field.generator += 1;
        assert!(construct::verify(&bad, &opts()).map(|v| !v.ok).unwrap_or(true));
    }
}

#[test]
fn cli_examples_from_the_pipeline() {
    let r = construct::construct_pipeline(&PipelineParams::new(7, 1, 2, 2), &opts()).unwrap();
    assert!(r.verified);
    assert_eq!(r.cardinality, 1 + 6 / r.gcd_t);
    let r = construct::construct_pipeline(&PipelineParams::new(2, 1, 2, 3), &opts()).unwrap();
    assert_eq!(r.spec.t, 1);
    assert!(r.verified);
    // F_4^* has order 3, so the non-cube is any element other than 1
    let f4 = Field::new(2, 2).unwrap();
    let cert = f4.element(r.certificate.unwrap()).unwrap();
    assert!(!cert.is_one());
    let r = construct::construct_pipeline(&PipelineParams::new(257, 1, 2, 2), &opts()).unwrap();
    assert_eq!((r.spec.t, r.m_of_h, r.cardinality), (8, 8, 33));
    assert!(construct::construct_pipeline(&PipelineParams::new(7, 1, 2, 5), &opts()).is_err());
}

/// Irreducibility of a polynomial of degree <= 3 is the absence of roots.
fn has_root(f: &Polynomial<'_>) -> bool {
    f.field().elements().any(|x| f.eval(x).is_zero())
}

#[test]
fn mn_witnesses_in_trivial_and_small_cases() {
    for q in [2u64, 3, 4, 5] {
        for l in 1..=4 {
            let s = construct::mn_conjecture_search(q, 1, l, construct::MN_SEARCH_BUDGET, &opts()).unwrap();
            assert!(s.witness.is_some(), "q={q} l={l}");
        }
        for kk in [2u32, 3] {
            let s = construct::mn_conjecture_search(q, kk, 1, construct::MN_SEARCH_BUDGET, &opts()).unwrap();
            let w = s.witness.unwrap();
            let big = Field::from_descriptor(&w.field, &opts()).unwrap();
            let c = big.element(w.coeffs[0] as u64).unwrap();
            // -c generates the whole field over F_p
            let p = big.characteristic() as u64;
            let deg = (1..=big.degree()).find(|&j| c.pow(p.pow(j)) == c).unwrap();
            assert_eq!(deg, big.degree());
            assert_eq!(s.examined, 1);
        }
    }
    for (q, kk, l) in [(2u64, 2u32, 2u32), (2, 3, 3), (3, 2, 2), (3, 2, 3), (4, 2, 3), (5, 3, 2)] {
        let s = construct::mn_conjecture_search(q, kk, l, construct::MN_SEARCH_BUDGET, &opts()).unwrap();
        let w = s.witness.expect("witness");
        let big = Field::from_descriptor(&w.field, &opts()).unwrap();
        let f = Polynomial::from_record(&big, &w).unwrap();
        assert_eq!(f.degree(), Some(l as usize));
        assert!(!has_root(&f));
        // middle coefficients lie in F_q
        let (p, k) = nt::prime_power(q).unwrap();
        let base = Field::new(p as u32, k).unwrap();
        let emb = Embedding::new(&base, &big).unwrap();
        assert!(f.coeffs()[1..l as usize].iter().all(|&c| emb.contains(c)));
        assert!(s.examined <= s.candidates);
    }
    assert!(construct::mn_conjecture_search(5, 3, 4, 1000, &opts()).is_err());
}

#[test]
fn square_mix_over_small_fields() {
    // independent oracle from the explicit set of squares; returns (plain, with a = 0)
    fn oracle(p: u32, k: u32) -> (bool, bool) {
        let tower = Tower::new(p, k, 2, &FieldOptions::default()).unwrap();
        let emb = tower.embedding().unwrap();
        let sq = squares(&tower.big);
        let euler_square = |b: FieldElement| sq.contains(&b.index());
        let mut plain = true;
        let mut with_zero = true;
        for alpha in tower.big.elements().filter(|&a| !emb.contains(a)) {
            let kinds: BTreeSet<bool> = emb
                .image()
                .filter(|a| !a.is_zero())
                .map(|a| euler_square(alpha - a * a))
                .collect();
            plain &= kinds.len() == 2;
            let mut kinds = kinds;
            kinds.insert(euler_square(alpha));
            with_zero &= kinds.len() == 2;
        }
        (plain, with_zero)
    }
    for q in nt::prime_powers_in(5, 49).into_iter().filter(|q| q % 2 == 1) {
        let (p, k) = nt::prime_power(q).unwrap();
        let c = construct::coulter_kosick_check(p as u32, k, &opts()).unwrap();
        assert_eq!((c.holds, c.holds_with_zero), oracle(p as u32, k), "q={q}");
        assert_eq!(c.set_size, (q - 1) / 2);
        assert_eq!(c.alphas, q * q - q);
        if q >= 11 {
            assert!(c.holds, "q={q}");
        }
    }
    let c7 = construct::coulter_kosick_check(7, 1, &opts()).unwrap();
    assert!(!c7.holds && c7.holds_with_zero);
}

#[test]
fn artin_schreier_roots() {
    for p in [3u32, 5] {
        let c = construct::hm_artin_schreier_check(p, &opts()).unwrap();
        assert!(c.holds);
        assert_eq!(c.roots, p as u64);
        let big = Field::new(p, p).unwrap();
        let alpha = big.element(c.alpha).unwrap();
        let sq = squares(&big);
        for j in 0..p as i64 {
            assert!(!sq.contains(&(alpha + big.from_int(j)).index()));
        }
    }
    let s = construct::nonsquare_coset_search(3, 3, &opts()).unwrap();
    assert!(s.found > 0);
}

#[test]
fn survey_small_grid() {
    let rows = construct::survey(7, 49, 2, 2, &opts());
    let qs: Vec<u64> = rows.iter().map(|r| r.q).collect();
    assert_eq!(qs, nt::prime_powers_in(7, 49));
    for r in rows.iter().filter(|r| r.q % 2 == 1) {
        assert_eq!(r.status, "ok", "q={}", r.q);
        assert_eq!(r.set_size, Some(1 + (r.q - 1) / r.t.gcd(&(r.q - 1))));
    }
    assert!(rows.iter().filter(|r| r.q % 2 == 0).all(|r| r.status.starts_with("skipped")));
    let r17 = rows.iter().find(|r| r.q == 17).unwrap();
    assert_eq!((r17.m_of_h, r17.floor_log2_q_minus_1, r17.log2_claim_holds), (2, 4, false));
    let r257 = construct::survey_row(257, 2, 2, &opts());
    assert_eq!((r257.m_of_h, r257.set_size), (8, Some(33)));
    assert!(construct::survey_row(8, 2, 2, &opts()).status.starts_with("skipped"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conditions_match_their_definitions(q_idx in 0usize..40, h in 2u32..4, t in 1u64..20, alpha_seed in 0u64..1_000_000) {
        let qs = nt::prime_powers_in(3, 60);
        let q = qs[q_idx % qs.len()];
        let (p, k) = nt::prime_power(q).unwrap();
        prop_assume!(q.pow(h) <= 300_000);
        let tower = Tower::new(p as u32, k, h, &opts()).unwrap();
        let emb = tower.embedding().unwrap();
        let big_q = tower.big.order();
        let idx = alpha_seed % big_q;
        let alpha = tower.big.element(idx).unwrap();
        prop_assume!(!emb.contains(alpha));
        let e = alpha.mult_order().unwrap();
        let spec = construct::ConstructionSpec { p: p as u32, k, q, h, d: 2, t, r: None, alpha: idx, e };
        let c = construct::theorem_conditions_check(&spec).unwrap();
        let primes_t: Vec<u64> = (2..=t).filter(|&r| nt::is_prime(r) && t % r == 0).collect();
        prop_assert_eq!(c[0], t.gcd(&((big_q - 1) / e)) == 1);
        prop_assert_eq!(c[1], primes_t.iter().all(|r| e % r == 0));
        prop_assert_eq!(c[2], t % 4 != 0 || big_q % 4 == 1);
        prop_assert_eq!(c[3], (t * h as u64).pow(2) <= q);
        let s = construct::build_set(alpha, t, &emb).unwrap();
        prop_assert_eq!(s.len() as u64, 1 + (q - 1) / t.gcd(&(q - 1)));
    }
}
