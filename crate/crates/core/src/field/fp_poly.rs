//! Dense polynomials over a prime field `F_p`, used only while choosing the
//! defining modulus of an extension field (before any `Field` exists).

use crate::nt;

pub(crate) type FpPoly = Vec<u64>;

fn trim(f: &mut FpPoly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
fn rem(mut a: FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    trim(&mut a);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = (a[top] as u128 * lead_inv as u128 % p as u128) as u64;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let i = top - dm + j;
                a[i] = (a[i] + (p - mj) * c % p) % p;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn mul_mod(a: &FpPoly, b: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj % p) % p;
        }
    }
    rem(prod, m, p)
}

fn pow_mod(base: &FpPoly, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc = rem(vec![1], m, p);
    let mut b = rem(base.clone(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(mut a: FpPoly, mut b: FpPoly, p: u64) -> FpPoly {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub_x(mut f: FpPoly, p: u64) -> FpPoly {
    if f.len() < 2 {
        f.resize(2, 0);
    }
    f[1] = (f[1] + p - 1) % p;
    trim(&mut f);
    f
}

/// Rabin's irreducibility test for a monic `f` over `F_p`.
pub(crate) fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x: FpPoly = vec![0, 1];
    // x^{p^j} mod f for j = 0..=n
    let mut frob = Vec::with_capacity(n + 1);
    let mut cur = rem(x, f, p);
    frob.push(cur.clone());
    for _ in 0..n {
        cur = pow_mod(&cur, p, f, p);
        frob.push(cur.clone());
    }
    if sub_x(frob[n].clone(), p) != Vec::<u64>::new() {
        return false;
    }
    let factors = nt::factorize(n as u64).expect("degree is positive");
    let coprime = factors.primes().all(|r| {
        let j = n / r as usize;
        let g = gcd(f.clone(), sub_x(frob[j].clone(), p), p);
        g.len() == 1
    });
    coprime
}
