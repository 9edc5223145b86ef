//! Integer number theory: factorization, arithmetic functions, and the
//! parameter selection for the `alpha - x^t` constructions.
//!
//! Everything here works on `u64` and is exact; no floating-point logarithms
//! are used when comparing `t * h` against `sqrt(q)`.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input accepted by [`factorize`].
pub const FACTORIZE_MAX: u64 = 1 << 63;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a positive integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn moebius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Exponent of `r` in `n` (zero when `r` does not divide `n`).
    pub fn valuation(&self, r: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(p, _)| p == r)
            .map_or(0, |&(_, e)| e)
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Squarefree divisors together with their Moebius value.
    pub fn squarefree_divisors(&self) -> Vec<(u64, i8)> {
        let mut out = vec![(1u64, 1i8)];
        for &(p, _) in &self.factors {
            let len = out.len();
            for i in 0..len {
                let (d, mu) = out[i];
                out.push((d * p, -mu));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Factor `n` by trial division, stopping early once the cofactor is prime.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if n > FACTORIZE_MAX {
        return Err(Error::InvalidArgument(format!(
            "{n} exceeds the factorization cap 2^63"
        )));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut divide_out = |m: &mut u64, p: u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        e > 0
    };
    divide_out(&mut m, 2);
    divide_out(&mut m, 3);
    let mut p = 5u64;
    let mut cofactor_prime = is_prime(m);
    while m > 1 && !cofactor_prime && p.saturating_mul(p) <= m {
        let a = divide_out(&mut m, p);
        let b = divide_out(&mut m, p + 2);
        if a || b {
            cofactor_prime = is_prime(m);
        }
        p += 6;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors.sort_unstable();
    Ok(Factorization { n, factors })
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

pub fn phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi())
}

pub fn moebius(n: u64) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

/// `v_r(n)`: the largest `e` with `r^e | n`.
pub fn padic_valuation(r: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    if !is_prime(r) {
        return Err(Error::NotPrime(r));
    }
    let mut e = 0;
    let mut m = n;
    while m % r == 0 {
        m /= r;
        e += 1;
    }
    Ok(e)
}

/// Decompose `q = p^k` with `p` prime, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match factorize(q).ok()?.factors() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

/// Prime powers in `[lo, hi]`, ascending.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| is_prime_power(q)).collect()
}

/// The prime `r` and exponent `s` maximizing `r^s = r^{v_r(n)}` over primes
/// dividing `n`. Ties go to the smaller prime (they cannot occur).
pub fn largest_prime_power_part(n: u64) -> Result<(u64, u32)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "largest prime power part needs n >= 2, got {n}"
        )));
    }
    let f = factorize(n)?;
    let mut best = f.factors()[0];
    for &(p, e) in &f.factors()[1..] {
        if (p as u128).pow(e) > (best.0 as u128).pow(best.1) {
            best = (p, e);
        }
    }
    Ok(best)
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128) * ((x + 1) as u128) <= n as u128 {
        x += 1;
    }
    x
}

/// `floor(log2(n))` for `n >= 1`.
pub fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

/// Largest `e >= 0` with `(r^e * h)^2 <= q`; zero when even `h^2 > q`.
fn max_exponent_under_sqrt(r: u64, q: u64, h: u64) -> u32 {
    let q = q as u128;
    let h = h as u128;
    let mut e = 0;
    let mut t = r as u128;
    while t * t * h * h <= q {
        e += 1;
        t *= r as u128;
    }
    e
}

/// Does `t * h <= sqrt(q)` hold? Exact integer form `t^2 h^2 <= q`.
pub fn within_sqrt_bound(t: u64, h: u64, q: u64) -> bool {
    let th = t as u128 * h as u128;
    th.checked_mul(th).is_some_and(|sq| sq <= q as u128)
}

/// Strict variant `t * h < sqrt(q)`, i.e. `t^2 h^2 < q`.
pub fn within_sqrt_bound_strict(t: u64, h: u64, q: u64) -> bool {
    let th = t as u128 * h as u128;
    th.checked_mul(th).is_some_and(|sq| sq < q as u128)
}

fn check_prime_power(q: u64) -> Result<()> {
    if is_prime_power(q) {
        Ok(())
    } else {
        Err(Error::NotPrimePower(q))
    }
}

/// `M(h) = max_{r | q-1} r^{min(v_r(q-1), e_r)}` where `e_r` is the largest
/// exponent with `r^{e_r} h <= sqrt(q)` (clamped at zero).
///
/// For `q = 2` there is no prime dividing `q - 1` and the value is 1.
pub fn m_of_h(q: u64, h: u64) -> Result<u64> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    check_prime_power(q)?;
    if q == 2 {
        return Ok(1);
    }
    let f = factorize(q - 1)?;
    Ok(f
        .factors()
        .iter()
        .map(|&(r, v)| r.pow(v.min(max_exponent_under_sqrt(r, q, h))))
        .max()
        .unwrap_or(1))
}

/// The exponent `t` used by the main construction and the prime it is a
/// power of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TChoice {
    /// Prime carrying the largest prime power part of `q - 1`; `None` for `q = 2`.
    pub r: Option<u64>,
    pub t: u64,
}

/// Pick `r` from the largest prime power part of `q - 1` and take `t` as the
/// largest power of `r` with `t h <= sqrt(q)`.
pub fn choose_t(q: u64, h: u64) -> Result<TChoice> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be at least 1".into()));
    }
    check_prime_power(q)?;
    if q == 2 {
        return Ok(TChoice { r: None, t: 1 });
    }
    let (r, _) = largest_prime_power_part(q - 1)?;
    let e = max_exponent_under_sqrt(r, q, h);
    Ok(TChoice {
        r: Some(r),
        t: r.pow(e),
    })
}

/// The three integer conditions under which `x^t - a` (or more generally
/// `f(x^t)`) is irreducible, for a root of order `e` in a field of `big_q`
/// elements:
/// 1. `gcd(t, (big_q - 1)/e) = 1`;
/// 2. every prime factor of `t` divides `e`;
/// 3. `big_q = 1 (mod 4)` whenever `4 | t`.
pub fn irreducibility_conditions(t: u64, big_q: u64, e: u64) -> Result<[bool; 3]> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if e == 0 || (big_q - 1) % e != 0 {
        return Err(Error::NotADivisor {
            divisor: e,
            n: big_q - 1,
        });
    }
    let cofactor = (big_q - 1) / e;
    let c1 = t.gcd(&cofactor) == 1;
    let c2 = factorize(t)?.primes().all(|r| e % r == 0);
    let c3 = t % 4 != 0 || big_q % 4 == 1;
    Ok([c1, c2, c3])
}

/// Result of [`t_density`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TDensity {
    pub count: u64,
    pub bound: u64,
    pub ratio: Ratio<u64>,
}

/// Count `t` in `[1, bound]` meeting [`irreducibility_conditions`] for a
/// field of `q^h` elements and order `e`.
pub fn t_density(q: u64, h: u32, e: u64, bound: u64) -> Result<TDensity> {
    check_prime_power(q)?;
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let big_q = q
        .checked_pow(h)
        .ok_or_else(|| Error::InvalidArgument(format!("{q}^{h} overflows u64")))?;
    if e == 0 || (big_q - 1) % e != 0 {
        return Err(Error::NotADivisor {
            divisor: e,
            n: big_q - 1,
        });
    }
    let mut count = 0;
    for t in 1..=bound {
        if irreducibility_conditions(t, big_q, e)?.iter().all(|&c| c) {
            count += 1;
        }
    }
    Ok(TDensity {
        count,
        bound,
        ratio: Ratio::new(count, bound),
    })
}

/// `M(2) < sqrt(q)` and `floor(log2(q - 1)) <= M(2)` over odd prime powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct M2BoundsAudit {
    pub q_max: u64,
    pub checked: u64,
    /// `q` with `M(2)^2 >= q`; must be empty.
    pub sqrt_violations: Vec<u64>,
    /// `q` with `floor(log2(q - 1)) > M(2)`; tabulated only.
    pub log2_violations: Vec<u64>,
}

impl M2BoundsAudit {
    /// The lower bound holds for every checked `q` above this value.
    pub fn last_log2_violation(&self) -> Option<u64> {
        self.log2_violations.last().copied()
    }
}

pub fn m2_bounds_audit(q_max: u64) -> Result<M2BoundsAudit> {
    let mut audit = M2BoundsAudit {
        q_max,
        checked: 0,
        sqrt_violations: Vec::new(),
        log2_violations: Vec::new(),
    };
    for q in prime_powers_in(3, q_max).into_iter().filter(|q| q % 2 == 1) {
        let m = m_of_h(q, 2)?;
        audit.checked += 1;
        if m as u128 * m as u128 >= q as u128 {
            audit.sqrt_violations.push(q);
        }
        if floor_log2(q - 1) as u64 > m {
            audit.log2_violations.push(q);
        }
    }
    Ok(audit)
}
