//! GF(2^m) arithmetic via log/antilog tables, m <= 16.

use crate::error::{Error, Result};

/// Fixed primitive polynomial per field size, so generator matrices are
/// reproducible across runs and implementations. Degree-4 is x^4 + x + 1.
const PRIMITIVE_POLYS: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

pub fn primitive_poly(m: u32) -> Result<u32> {
    if !(1..=16).contains(&m) {
        return Err(Error::InvalidParameter(format!("field degree m = {m} outside 1..=16")));
    }
    Ok(PRIMITIVE_POLYS[m as usize])
}

/// GF(2^m) with log/antilog tables over the fixed primitive polynomial.
/// Elements are `u16` values in `0..2^m`.
#[derive(Debug, Clone)]
pub struct GfField {
    m: u32,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl GfField {
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_poly(m)?;
        let order = 1usize << m;
        let mut exp = vec![0u16; 2 * (order - 1)];
        let mut log = vec![0u16; order];
        let mut x: u32 = 1;
        for i in 0..order - 1 {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParameter(format!(
                    "polynomial {poly:#x} is not primitive for m = {m}"
                )));
            }
            exp[i] = x as u16;
            exp[i + order - 1] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        Ok(Self { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Field size 2^m.
    pub fn order(&self) -> usize {
        1 << self.m
    }

    /// The fixed generator of the multiplicative group.
    pub fn primitive_element(&self) -> u16 {
        self.exp[1 % (self.order() - 1)]
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        let q1 = self.order() - 1;
        self.exp[(q1 - self.log[a as usize] as usize) % q1]
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u16, e: usize) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let q1 = self.order() - 1;
        self.exp[(self.log[a as usize] as usize * (e % q1)) % q1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf16_basic_identities() {
        let f = GfField::new(4).unwrap();
        assert_eq!(f.poly(), 0x13);
        assert_eq!(f.order(), 16);
        assert_eq!(f.mul(1, 9), 9);
        assert_eq!(f.add(5, 5), 0);
        for a in 1..16u16 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // alpha^15 = 1 for the primitive element.
        assert_eq!(f.pow(f.primitive_element(), 15), 1);
        for e in 1..15 {
            assert_ne!(f.pow(f.primitive_element(), e), 1);
        }
    }

    #[test]
    fn field_axioms_hold_for_random_triples() {
        for m in [3u32, 4, 8, 16] {
            let f = GfField::new(m).unwrap();
            let mask = (f.order() - 1) as u16;
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..1000 {
                let (a, b, c) = (
                    rng.gen::<u16>() & mask,
                    rng.gen::<u16>() & mask,
                    rng.gen::<u16>() & mask,
                );
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if a != 0 {
                    assert_eq!(f.div(f.mul(a, b), a), b);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_degree() {
        assert!(GfField::new(0).is_err());
        assert!(GfField::new(17).is_err());
    }
}
