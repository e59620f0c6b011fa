//! Prime field `F_q` for a u64 modulus, with canonical-value elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand_chacha::rand_core::RngCore;

use crate::error::{Error, Result};

/// Default modulus for protocol runs: the Mersenne prime 2^61 - 1. Large
/// enough that random mask cancellations have negligible probability, small
/// enough that products fit in u128.
pub const DEFAULT_MODULUS: u64 = (1 << 61) - 1;

/// A prime field description. Cheap to copy; elements carry one of these so
/// that cross-field arithmetic is caught at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Builds the field, rejecting composites and q < 2. Primality is decided
    /// exactly for any u64 via deterministic Miller-Rabin.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 || !is_prime_u64(q) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(PrimeField { q })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Canonical element from an arbitrary integer.
    #[inline]
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.q,
            field: *self,
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Uniform element via rejection sampling on the raw u64 stream, so the
    /// result depends only on the generator's output sequence.
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> FieldElement {
        let zone = u64::MAX - (u64::MAX % self.q);
        loop {
            let x = rng.next_u64();
            if x < zone {
                return self.element(x % self.q);
            }
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// An element of a [`PrimeField`], stored as its canonical value in [0, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    #[inline]
    fn assert_same_field(&self, other: &FieldElement) {
        assert_eq!(
            self.field, other.field,
            "field elements from different moduli"
        );
    }

    #[inline]
    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let q = self.field.q;
        let mut v = self.value + rhs.value; // q < 2^63, no overflow
        if v >= q {
            v -= q;
        }
        FieldElement {
            value: v,
            field: self.field,
        }
    }

    #[inline]
    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let q = self.field.q;
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + q - rhs.value
        };
        FieldElement {
            value: v,
            field: self.field,
        }
    }

    #[inline]
    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        FieldElement {
            value: mul_mod(self.value, rhs.value, self.field.q),
            field: self.field,
        }
    }

    /// Square-and-multiply; 0^0 = 1 by convention.
    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let q = self.field.q;
        let mut base = self.value;
        let mut acc = 1u64 % q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, q);
            }
            base = mul_mod(base, base, q);
            exp >>= 1;
        }
        FieldElement {
            value: acc,
            field: self.field,
        }
    }

    /// Multiplicative inverse via Fermat: a^(q-2).
    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero(self.field.q));
        }
        Ok(self.pow(self.field.q - 2))
    }

    #[inline]
    pub fn neg(&self) -> FieldElement {
        let v = if self.value == 0 {
            0
        } else {
            self.field.q - self.value
        };
        FieldElement {
            value: v,
            field: self.field,
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement::add(&self, &rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        FieldElement::sub(&self, &rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        FieldElement::mul(&self, &rhs)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin. The witness set decides primality exactly for
/// every integer below 3.3 * 10^24, which covers all of u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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
