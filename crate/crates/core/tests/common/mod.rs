//! Oracles shared by the integration tests.
#![allow(dead_code)]

use ffwitness::poly::Polynomial;
use ffwitness::{Field, FieldElement};

/// Distinct roots and their multiplicities in `big`, by evaluating the
/// embedded polynomial and dividing out `x - z` synthetically.
pub fn roots_by_evaluation<'b>(coeffs: &[FieldElement<'b>], big: &'b Field) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for z in big.elements() {
        let mut cur: Vec<FieldElement> = coeffs.to_vec();
        let mut mult = 0;
        loop {
            // synthetic division by (x - z)
            let n = cur.len();
            if n < 2 {
                break;
            }
            let mut quotient = vec![big.zero(); n - 1];
            let mut acc = big.zero();
            for i in (0..n).rev() {
                acc = acc * z + cur[i];
                if i > 0 {
                    quotient[i - 1] = acc;
                }
            }
            if !acc.is_zero() {
                break;
            }
            mult += 1;
            cur = quotient;
        }
        if mult > 0 {
            out.push((z.index(), mult));
        }
    }
    out
}

pub fn linear(c: FieldElement<'_>) -> Polynomial<'_> {
    Polynomial::new(c.field(), vec![-c, c.field().one()])
}
