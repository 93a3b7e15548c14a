//! Dense univariate polynomials over a prime field: Euclid, modular
//! exponentiation, and Cantor-Zassenhaus splitting into irreducible factors
//! of small degree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::poly::MvPoly;

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// `c0 + c1 * t`.
    pub fn linear(field: PrimeField, c0: u64, c1: u64) -> Self {
        Self::new(field, vec![c0, c1])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        self.scale(self.field.inv_raw(self.lc()))
    }

    pub fn scale(&self, c: u64) -> Self {
        let k = self.field;
        Self::new(k, self.coeffs.iter().map(|&a| k.mul_raw(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                k.add_raw(a, b)
            })
            .collect();
        Self::new(k, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                k.sub_raw(a, b)
            })
            .collect();
        Self::new(k, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let p = self.field.p() as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                // reduce eagerly; a * b < p^2 < 2^126
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.field, acc.into_iter().map(|v| v as u64).collect())
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let k = self.field;
        let mut r = self.coeffs.clone();
        let db = divisor.coeffs.len() - 1;
        if r.len() <= db {
            return (Self::zero(k), self.clone());
        }
        let inv = k.inv_raw(divisor.lc());
        let mut q = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = k.mul_raw(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - db + j;
                r[idx] = k.sub_raw(r[idx], k.mul_raw(c, b));
            }
        }
        r.truncate(db);
        (Self::new(k, q), Self::new(k, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let k = self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (Self::zero(k), Self::constant(k, 1));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(t0.scale(k.inv_raw(r0.lc())).rem(m))
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::constant(self.field, 1).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let k = self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| k.mul_raw(a, i as u64 % k.p()))
            .collect();
        Self::new(k, c)
    }

    pub fn eval(&self, t: u64) -> u64 {
        let k = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| k.add_raw(k.mul_raw(acc, t), c))
    }

    /// Distinct-degree factorization restricted to factors of degree at most
    /// `max_degree`: returns `(d, g_d)` where `g_d` is the product of the
    /// monic irreducible factors of degree `d` of the square-free part.
    pub fn distinct_degree(&self, max_degree: usize) -> Vec<(usize, UniPoly)> {
        let mut out = Vec::new();
        let Some(deg) = self.degree() else {
            return out;
        };
        if deg == 0 {
            return out;
        }
        let k = self.field;
        let mut f = self.square_free_part();
        let t = Self::linear(k, 0, 1);
        let mut frob = t.clone();
        for d in 1..=max_degree {
            let fd = f.degree().unwrap_or(0);
            if fd < d {
                break;
            }
            if fd < 2 * d {
                // what is left is a single irreducible factor
                if fd <= max_degree {
                    out.push((fd, f));
                }
                break;
            }
            frob = frob.pow_mod(k.p(), &f);
            let g = f.gcd(&frob.sub(&t));
            if g.degree().unwrap_or(0) > 0 {
                f = f.div_rem(&g).0;
                frob = frob.rem(&f);
                out.push((d, g));
            }
        }
        out
    }

    /// `self / gcd(self, self')`, monic. Correct when the characteristic
    /// exceeds the degree or the polynomial has no p-th power factors.
    pub fn square_free_part(&self) -> Self {
        let d = self.derivative();
        if d.is_zero() {
            return self.monic();
        }
        let g = self.gcd(&d);
        self.div_rem(&g).0.monic()
    }

    /// Splits a monic square-free product of irreducibles all of degree `d`
    /// into its factors (Cantor-Zassenhaus).
    pub fn equal_degree_split<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<UniPoly> {
        let n = self.degree().expect("nonzero polynomial");
        assert!(d > 0 && n.is_multiple_of(d), "degree {n} is not a multiple of {d}");
        if n == d {
            return vec![self.monic()];
        }
        let k = self.field;
        loop {
            let a = Self::new(k, (0..n).map(|_| k.random(rng)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            // a^((p^d - 1) / 2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1) / 2)
            let mut norm = a.clone();
            let mut conj = a.clone();
            for _ in 1..d {
                conj = conj.pow_mod(k.p(), self);
                norm = norm.mul_mod(&conj, self);
            }
            let b = norm.pow_mod((k.p() - 1) / 2, self);
            let g = self.gcd(&b.sub(&Self::constant(k, 1)));
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let h = self.div_rem(&g).0.monic();
                let mut out = g.equal_degree_split(d, rng);
                out.extend(h.equal_degree_split(d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of degree at most `max_degree`, each listed
    /// once, sorted by degree then coefficients.
    pub fn low_degree_factors(&self, max_degree: usize, seed: u64) -> Vec<UniPoly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (d, g) in self.distinct_degree(max_degree) {
            out.extend(g.equal_degree_split(d, &mut rng));
        }
        out.sort_by(|a, b| a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        out
    }

    /// Distinct roots in `[0, p)`, ascending.
    pub fn roots(&self, seed: u64) -> Vec<u64> {
        self.low_degree_factors(1, seed)
            .into_iter()
            .map(|l| self.field.sub_raw(0, l.coeffs[0]))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// Roots in the prime field of a polynomial involving at most one variable.
pub fn univariate_roots<F: Field>(a: &MvPoly<F>, seed: u64) -> Result<Vec<F::Scalar>> {
    let k = a.field();
    let p = k.modulus().ok_or(Error::RationalModeUnsupported)?;
    let support = a.support();
    if a.is_zero() {
        return Err(Error::InvalidInput("roots of the zero polynomial".into()));
    }
    if support.len() > 1 {
        return Err(Error::InvalidInput(format!(
            "polynomial involves {} variables, expected one",
            support.len()
        )));
    }
    let Some(&var) = support.first() else {
        return Ok(Vec::new());
    };
    let field = PrimeField::new(p)?;
    let mut coeffs = vec![0u64; a.degree_in(var) as usize + 1];
    for (m, c) in a.terms() {
        coeffs[m.exp(var) as usize] = k.to_residue(c).expect("prime field residue");
    }
    let u = UniPoly::new(field, coeffs);
    Ok(u.roots(seed).into_iter().map(|r| k.from_u64(r)).collect())
}
