use std::collections::HashMap;

use super::{Field, FieldElement};
use crate::error::{Error, Result};

/// A fixed embedding `F_{p^m} -> F_{p^k}` for `m | k`.
///
/// The image of the small field's polynomial variable is the root of the
/// small modulus with the smallest index in the big field, so the embedding
/// is reproducible.
pub struct Embedding<'s, 'b> {
    small: &'s Field,
    big: &'b Field,
    images: Vec<u32>,
    preimages: HashMap<u32, u32>,
}

impl<'s, 'b> Embedding<'s, 'b> {
    pub fn new(small: &'s Field, big: &'b Field) -> Result<Self> {
        if small.p != big.p || big.k % small.k != 0 {
            return Err(Error::NotASubfield {
                p: small.p,
                m: small.k,
                k: big.k,
            });
        }
        let modulus: Vec<FieldElement<'b>> = small
            .modulus
            .iter()
            .map(|&c| big.from_int(c as i64))
            .collect();
        let root = big
            .elements()
            .find(|&z| {
                modulus
                    .iter()
                    .rev()
                    .fold(big.zero(), |acc, &c| acc * z + c)
                    .is_zero()
            })
            .ok_or_else(|| {
                Error::Internal(format!(
                    "modulus of F_{} has no root in F_{}",
                    small.label(),
                    big.label()
                ))
            })?;
        let powers: Vec<FieldElement<'b>> = (0..small.k)
            .scan(big.one(), |acc, _| {
                let cur = *acc;
                *acc = *acc * root;
                Some(cur)
            })
            .collect();
        let images: Vec<u32> = (0..small.order as u32)
            .map(|i| {
                small
                    .digits(i)
                    .iter()
                    .zip(&powers)
                    .fold(big.zero(), |acc, (&d, &rp)| acc + big.from_int(d as i64) * rp)
                    .index()
            })
            .collect();
        let preimages = images
            .iter()
            .enumerate()
            .map(|(i, &img)| (img, i as u32))
            .collect();
        Ok(Embedding {
            small,
            big,
            images,
            preimages,
        })
    }

    pub fn small(&self) -> &'s Field {
        self.small
    }

    pub fn big(&self) -> &'b Field {
        self.big
    }

    /// `[F_{p^k} : F_{p^m}]`.
    pub fn degree(&self) -> u32 {
        self.big.k / self.small.k
    }

    pub fn embed(&self, a: FieldElement<'s>) -> FieldElement<'b> {
        assert!(a.field.same_as(self.small), "element is not in the small field");
        self.big.wrap(self.images[a.idx as usize])
    }

    /// The small-field element mapping to `b`, if `b` lies in the image.
    pub fn preimage(&self, b: FieldElement<'b>) -> Option<FieldElement<'s>> {
        self.preimages.get(&b.idx).map(|&i| self.small.wrap(i))
    }

    pub fn contains(&self, b: FieldElement<'b>) -> bool {
        self.preimages.contains_key(&b.idx)
    }

    /// Embedded copy of the small field, in small-field index order.
    pub fn image(&self) -> impl Iterator<Item = FieldElement<'b>> + '_ {
        self.images.iter().map(move |&i| self.big.wrap(i))
    }

    /// `Norm(b) = b^{(p^k - 1)/(p^m - 1)}`, expressed in the small field.
    pub fn norm(&self, b: FieldElement<'b>) -> FieldElement<'s> {
        let e = (self.big.order - 1) / (self.small.order - 1);
        let n = b.pow(e);
        self.preimage(n)
            .expect("the norm always lands in the subfield")
    }
}
