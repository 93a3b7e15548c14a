use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub type Exponents = SmallVec<[u32; 4]>;

/// A monomial `X0^e0 * ... * Xk^ek`, ordered graded-lexicographically with
/// `X0 > X1 > ... > Xk`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Exponents,
}

impl Monomial {
    pub fn new(exps: impl Into<Exponents>) -> Self {
        let exps = exps.into();
        let degree = exps.iter().sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            degree: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    /// The variable `X_index` in a ring with `nvars` variables.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if exact.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            degree: other.degree - self.degree,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect::<Exponents>(),
        )
    }

    pub fn with_exp(&self, var: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[var] = e;
        Monomial::new(exps)
    }

    /// All monomials of total degree `degree` in `nvars` variables, in
    /// descending graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(var: usize, remaining: u32, cur: &mut Exponents, out: &mut Vec<Monomial>) {
            if var + 1 == cur.len() {
                cur[var] = remaining;
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in (0..=remaining).rev() {
                cur[var] = e;
                rec(var + 1, remaining - e, cur, out);
            }
            cur[var] = 0;
        }
        if nvars == 0 {
            return if degree == 0 { vec![Monomial::one(0)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(0, degree, &mut SmallVec::from_elem(0, nvars), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.as_slice().cmp(other.exps.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}
