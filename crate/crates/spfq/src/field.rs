//! Exact modular arithmetic over a prime field F_q.
//!
//! A [`PrimeField`] carries the modulus and exposes arithmetic on canonical
//! residues (`u64` values in `[0, q)`). [`FieldElement`] is the checked layer:
//! it remembers its modulus so that mixing elements of different fields is a
//! hard error instead of a silent wrap.

use crate::error::{Error, Result};

/// Trial-division primality test. Sufficient for the 32-bit moduli we accept.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// A prime field F_q, `q` prime and below 2^32 so that products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Constructs the field, rejecting composite or oversized moduli.
    pub fn new(q: u64) -> Result<Self> {
        if q > u64::from(u32::MAX) {
            return Err(Error::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Wraps an integer into a checked element (reduces mod q).
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.q,
            modulus: self.q,
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        a * b % self.q
    }

    /// Multiplicative inverse by extended Euclid. Errors on zero.
    pub fn inv(&self, a: u64) -> Result<u64> {
        debug_assert!(a < self.q);
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.q as i64, a as i64);
        while new_r != 0 {
            let quot = r / new_r;
            (t, new_t) = (new_t, t - quot * new_t);
            (r, new_r) = (new_r, r - quot * new_r);
        }
        debug_assert_eq!(r, 1, "modulus is prime, gcd must be 1");
        Ok(t.rem_euclid(self.q as i64) as u64)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.q);
        let mut acc = 1u64 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Errors unless both operands live in the same field.
    pub fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.q != other.q {
            return Err(Error::FieldMismatch(self.q, other.q));
        }
        Ok(())
    }
}

/// A canonical residue tagged with its modulus.
///
/// Arithmetic is via checked methods rather than operator traits: mixing
/// fields must surface as an error, and `std::ops` cannot return `Result`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.modulus }
    }

    fn check_same(&self, rhs: &FieldElement) -> Result<PrimeField> {
        if self.modulus != rhs.modulus {
            return Err(Error::FieldMismatch(self.modulus, rhs.modulus));
        }
        Ok(self.field())
    }

    pub fn add(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.check_same(&rhs)?;
        Ok(f.element(f.add(self.value, rhs.value)))
    }

    pub fn sub(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.check_same(&rhs)?;
        Ok(f.element(f.sub(self.value, rhs.value)))
    }

    pub fn mul(self, rhs: FieldElement) -> Result<FieldElement> {
        let f = self.check_same(&rhs)?;
        Ok(f.element(f.mul(self.value, rhs.value)))
    }

    /// Additive inverse; total.
    pub fn neg(self) -> FieldElement {
        let f = self.field();
        f.element(f.neg(self.value))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn mul_inverse(self) -> Result<FieldElement> {
        let f = self.field();
        Ok(f.element(f.inv(self.value)?))
    }
}
