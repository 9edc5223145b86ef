use ffwitness::poly::{self, Polynomial};
use ffwitness::{nt, Embedding, Field, FieldElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{linear, roots_by_evaluation};

fn field_of(q: u64) -> Field {
    let (p, k) = nt::prime_power(q).unwrap();
    Field::new(p as u32, k).unwrap()
}

fn monic_polys(f: &Field, deg: usize) -> Vec<Polynomial<'_>> {
    let q = f.order();
    let count = q.pow(deg as u32);
    (0..count)
        .map(|mut idx| {
            let mut c: Vec<FieldElement> = (0..deg)
                .map(|_| {
                    let e = f.element(idx % q).unwrap();
                    idx /= q;
                    e
                })
                .collect();
            c.push(f.one());
            Polynomial::new(f, c)
        })
        .collect()
}

#[test]
fn binomial_criterion_is_exact() {
    for q in nt::prime_powers_in(2, 27) {
        let f = field_of(q);
        for t in 2..=12u64 {
            for a in f.nonzero_elements() {
                let crit = poly::binomial_irreducible_check(t, a).unwrap();
                let truth = poly::is_irreducible(&Polynomial::binomial(t as usize, a)).unwrap();
                assert_eq!(crit.verdict, truth, "q={q} t={t} a={a:?}");
            }
        }
    }
}

#[test]
fn composition_criterion_is_sufficient() {
    for q in [3, 4, 5, 7, 8, 9] {
        let f = field_of(q);
        for deg in 1..=2 {
            for g in monic_polys(&f, deg) {
                if g.coeff(0).is_zero() || !poly::is_irreducible(&g).unwrap() {
                    continue;
                }
                for t in 1..=8u64 {
                    let crit = poly::composed_irreducible_check(&g, t).unwrap();
                    if crit.verdict {
                        assert!(poly::is_irreducible(&g.compose_power(t as usize)).unwrap());
                    }
                    if t == 1 {
                        assert!(crit.verdict);
                    }
                }
            }
        }
    }
}

#[test]
fn monomial_value_sets() {
    for q in nt::prime_powers_in(2, 64) {
        let f = field_of(q);
        for t in 1..=12u64 {
            let v = poly::value_set(&Polynomial::monomial(f.one(), t as usize));
            assert_eq!(v.len() as u64, 1 + (q - 1) / num_integer::gcd(t, q - 1), "q={q} t={t}");
        }
    }
    let f7 = field_of(7);
    let cubes: Vec<u32> = poly::value_set(&Polynomial::monomial(f7.one(), 3))
        .into_iter()
        .map(|e| e.index())
        .collect();
    assert_eq!(cubes, vec![0, 1, 6]);
}

#[test]
fn value_set_trivial_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [7u64, 9, 16, 25, 49] {
        let f = field_of(q);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=6usize);
            let mut c: Vec<FieldElement> = (0..deg).map(|_| f.element(rng.gen_range(0..q)).unwrap()).collect();
            c.push(f.element(rng.gen_range(1..q)).unwrap());
            let g = Polynomial::new(&f, c);
            let v = poly::value_set(&g).len() as u64;
            assert!(v <= q && v >= q.div_ceil(deg as u64));
        }
    }
}

#[test]
fn roots_and_radical_match_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, k) in [(3u32, 1u32), (2, 1), (5, 1), (2, 2)] {
        let small = Field::new(p, k).unwrap();
        // every polynomial of degree <= 3 splits over the degree-6 extension
        let big = Field::new(p, 6 * k).unwrap();
        let emb = Embedding::new(&small, &big).unwrap();
        let q = small.order();
        for trial in 0..150 {
            let g = if trial % 3 == 0 {
                // force repeated roots
                let a = small.element(rng.gen_range(0..q)).unwrap();
                let b = small.element(rng.gen_range(0..q)).unwrap();
                &(&linear(a) * &linear(a)) * &linear(b)
            } else {
                let deg = rng.gen_range(1..=3usize);
                let mut c: Vec<FieldElement> = (0..deg).map(|_| small.element(rng.gen_range(0..q)).unwrap()).collect();
                c.push(small.element(rng.gen_range(1..q)).unwrap());
                Polynomial::new(&small, c)
            };
            let embedded: Vec<FieldElement> = g.coeffs().iter().map(|&c| emb.embed(c)).collect();
            let oracle = roots_by_evaluation(&embedded, &big);
            let found: Vec<(u32, u32)> = poly::roots_in_extension(&g, &emb)
                .unwrap()
                .into_iter()
                .map(|(z, m)| (z.index(), m))
                .collect();
            assert_eq!(found, oracle, "{g:?}");
            let total: u32 = oracle.iter().map(|r| r.1).sum();
            assert_eq!(total as usize, g.degree().unwrap());
            assert_eq!(poly::squarefree_part_degree(&g).unwrap(), oracle.len());
        }
    }
}

#[test]
fn worked_poly_examples() {
    let f3 = field_of(3);
    let f7 = field_of(7);
    assert!(poly::is_irreducible(&Polynomial::from_indices(&f3, &[1, 0, 1]).unwrap()).unwrap());
    assert!(!poly::is_irreducible(&Polynomial::from_indices(&f7, &[5, 0, 1]).unwrap()).unwrap());
    let c = poly::binomial_irreducible_check(2, f7.from_int(3)).unwrap();
    assert!(c.verdict);
    assert!(!poly::binomial_irreducible_check(2, f7.from_int(2)).unwrap().verdict);
    assert!(!poly::binomial_irreducible_check(4, f7.from_int(3)).unwrap().verdict);
    let lin = Polynomial::from_indices(&f7, &[4, 1]).unwrap(); // x - 3
    assert!(poly::composed_irreducible_check(&lin, 2).unwrap().verdict);
    let lin = Polynomial::from_indices(&f7, &[6, 1]).unwrap(); // x - 1
    assert!(!poly::composed_irreducible_check(&lin, 2).unwrap().verdict);
    let sq = Polynomial::from_indices(&f7, &[1, 5, 1]).unwrap(); // (x - 1)^2
    assert_eq!(poly::squarefree_part_degree(&sq).unwrap(), 1);
    assert!(poly::squarefree_part_degree(&Polynomial::constant(f7.one())).is_err());
}
