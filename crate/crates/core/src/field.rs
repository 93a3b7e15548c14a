//! Coefficient fields: word-sized prime fields and the rationals.
//!
//! Field elements carry no reference to their field; every operation goes
//! through a field handle, so a prime field chosen at runtime costs one
//! `u64` per polynomial rather than one per coefficient.

use std::fmt::{self, Debug};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The default modulus, the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Modulus used to cross-check results computed modulo [`DEFAULT_PRIME`].
pub const SECOND_PRIME: u64 = 2_305_843_009_213_693_951;

/// Exact arithmetic in a field.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Scalar: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    /// Characteristic of the field; `0` for the rationals.
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Scalar;
    fn one(&self) -> Self::Scalar;
    fn is_zero(&self, a: &Self::Scalar) -> bool;
    fn is_one(&self, a: &Self::Scalar) -> bool;

    fn add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn neg(&self, a: &Self::Scalar) -> Self::Scalar;
    fn mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Scalar) -> Self::Scalar;

    fn div(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar {
        self.mul(a, &self.inv(b))
    }

    fn from_i64(&self, v: i64) -> Self::Scalar;
    fn from_bigint(&self, v: &BigInt) -> Self::Scalar;

    fn from_u64(&self, v: u64) -> Self::Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    /// A uniformly random element (prime fields) or a small random integer
    /// (rationals).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Scalar;

    /// The modulus when the field is a prime field.
    fn modulus(&self) -> Option<u64>;

    /// The residue in `[0, p)` of a prime-field element; `None` over the
    /// rationals.
    fn to_residue(&self, a: &Self::Scalar) -> Option<u64>;

    /// Writes a scalar in the form used by polynomial printing: prime-field
    /// residues are shown in the symmetric range `(-p/2, p/2]`.
    fn fmt_scalar(&self, a: &Self::Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    /// Whether the printed form of `a` starts with a minus sign.
    fn is_negative(&self, a: &Self::Scalar) -> bool;

    fn pow(&self, a: &Self::Scalar, mut e: u64) -> Self::Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `true` when the characteristic divides the integer `n`.
    fn char_divides(&self, n: u64) -> bool {
        match self.characteristic() {
            0 => n == 0,
            p => n.is_multiple_of(p),
        }
    }
}

/// The prime field `Z/pZ` for an odd prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p >= 1 << 63 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u128) -> u64 {
        (v % self.p as u128) as u64
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow_raw(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        // extended Euclid on signed 128-bit values
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i128) as u64
    }

    fn signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }
}

impl Field for PrimeField {
    type Scalar = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_raw(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_raw(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn inv(&self, a: &u64) -> u64 {
        self.inv_raw(*a)
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn modulus(&self) -> Option<u64> {
        Some(self.p)
    }
    fn to_residue(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
    fn fmt_scalar(&self, a: &u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed(*a))
    }
    fn is_negative(&self, a: &u64) -> bool {
        self.signed(*a) < 0
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

impl Field for RationalField {
    type Scalar = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-1000..=1000))
    }
    fn modulus(&self) -> Option<u64> {
        None
    }
    fn to_residue(&self, _a: &BigRational) -> Option<u64> {
        None
    }
    fn fmt_scalar(&self, a: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if a.is_integer() {
            write!(f, "{}", a.numer())
        } else {
            write!(f, "{}/{}", a.numer(), a.denom())
        }
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
