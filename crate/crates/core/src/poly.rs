//! Sparse multivariate polynomials over a [`Field`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Exponents, Monomial};

/// A polynomial stored as its nonzero terms in strictly descending
/// graded-lex order.
#[derive(Clone)]
pub struct MvPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: Vec<(Monomial, F::Scalar)>,
}

impl<F: Field> MvPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        MvPoly {
            field: field.clone(),
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Scalar) -> Self {
        Self::monomial(field, nvars, Monomial::one(nvars), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable X{index} out of range");
        Self::monomial(field, nvars, Monomial::var(nvars, index), field.one())
    }

    pub fn monomial(field: &F, nvars: usize, m: Monomial, c: F::Scalar) -> Self {
        assert_eq!(m.nvars(), nvars);
        let terms = if field.is_zero(&c) { Vec::new() } else { vec![(m, c)] };
        MvPoly {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, combining repeated
    /// monomials and dropping zeros.
    pub fn from_terms<I>(field: &F, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Scalar)>,
    {
        let mut acc: HashMap<Monomial, F::Scalar> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(field, nvars, acc)
    }

    fn from_map(field: &F, nvars: usize, acc: HashMap<Monomial, F::Scalar>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MvPoly {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    /// Terms already sorted in strictly descending order with nonzero
    /// coefficients.
    fn from_sorted(field: &F, nvars: usize, terms: Vec<(Monomial, F::Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !field.is_zero(c)));
        MvPoly {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, F::Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && !self.is_zero() && self.field.is_one(&self.terms[0].1)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> F::Scalar {
        self.terms
            .first()
            .map_or_else(|| self.field.zero(), |(_, c)| c.clone())
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &Monomial) -> F::Scalar {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map_or_else(|_| self.field.zero(), |i| self.terms[i].1.clone())
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let k = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &F::Scalar| if negate_other { k.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        k.sub(&a[i].1, &b[j].1)
                    } else {
                        k.add(&a[i].1, &b[j].1)
                    };
                    if !k.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Self::from_sorted(k, self.nvars, out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let k = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(k, self.nvars));
        }
        if other.is_monomial() {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, F::Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = k.mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(v) => *v = k.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(k, self.nvars, acc))
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Scalar) -> Self {
        let k = &self.field;
        if k.is_zero(c) {
            return Self::zero(k, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), k.mul(a, c)))
            .collect();
        Self::from_sorted(k, self.nvars, terms)
    }

    pub fn scale(&self, c: &F::Scalar) -> Self {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_arity(divisor)?;
        match self.div_rem_exact(divisor) {
            Some(q) => Ok(q),
            None => Err(Error::NotDivisible),
        }
    }

    /// `Some(self / divisor)` when `divisor` divides `self`.
    pub fn divide(&self, divisor: &Self) -> Option<Self> {
        if self.nvars != divisor.nvars {
            return None;
        }
        self.div_rem_exact(divisor)
    }

    pub fn is_divisible_by(&self, divisor: &Self) -> bool {
        self.divide(divisor).is_some()
    }

    fn div_rem_exact(&self, divisor: &Self) -> Option<Self> {
        let k = &self.field;
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(k, self.nvars));
        }
        if divisor.is_monomial() {
            let (dm, dc) = &divisor.terms[0];
            let inv = k.inv(dc);
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((dm.div(m)?, k.mul(c, &inv)));
            }
            return Some(Self::from_sorted(k, self.nvars, terms));
        }
        // cheap rejections: degree and per-variable degree bounds
        if divisor.degree() > self.degree() {
            return None;
        }
        for v in 0..self.nvars {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = k.inv(&lc);
        let mut rem: BTreeMap<Monomial, F::Scalar> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = lm.div(&m)?;
            let qc = k.mul(&c, &lc_inv);
            for (dm, dc) in &divisor.terms[1..] {
                let t = qm.mul(dm);
                let delta = k.mul(&qc, dc);
                match rem.get_mut(&t) {
                    Some(v) => {
                        *v = k.sub(v, &delta);
                        if k.is_zero(v) {
                            rem.remove(&t);
                        }
                    }
                    None => {
                        rem.insert(t, k.neg(&delta));
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Self::from_sorted(k, self.nvars, quot))
    }

    /// Formal partial derivative with respect to `X_var`.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable X{var} out of range");
        let k = &self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            if e == 0 {
                return None;
            }
            Some((m.with_exp(var, e - 1), k.mul(c, &k.from_u64(e as u64))))
        });
        // lowering one exponent keeps distinct monomials distinct but may
        // reorder them, and e may vanish mod p
        Self::from_terms(k, self.nvars, terms)
    }

    pub fn evaluate(&self, point: &[F::Scalar]) -> F::Scalar {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let k = &self.field;
        let mut powers: Vec<Vec<F::Scalar>> = Vec::with_capacity(self.nvars);
        for (v, x) in point.iter().enumerate() {
            let dv = self.degree_in(v) as usize;
            let mut pw = Vec::with_capacity(dv + 1);
            pw.push(k.one());
            for i in 1..=dv {
                let next = k.mul(&pw[i - 1], x);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = k.mul(&t, &powers[v][e as usize]);
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `X_var = value`, keeping the variable count.
    pub fn eval_var(&self, var: usize, value: &F::Scalar) -> Self {
        let k = &self.field;
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            (m.with_exp(var, 0), k.mul(c, &k.pow(value, e as u64)))
        });
        Self::from_terms(k, self.nvars, terms)
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = &self.terms[0].1;
        if self.field.is_one(lc) {
            return self.clone();
        }
        self.scale(&self.field.inv(lc))
    }

    /// Coefficients with respect to `X_var`: entry `i` multiplies
    /// `X_var^i` and does not involve `X_var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let k = &self.field;
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, F::Scalar)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.with_exp(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                Self::from_sorted(k, self.nvars, ts)
            })
            .collect()
    }

    /// Inverse of [`MvPoly::coefficients_in`].
    pub fn from_coefficients_in(field: &F, nvars: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.exp(var), 0);
                terms.push((m.with_exp(var, i as u32), a.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_sorted(field, nvars, terms)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one(self.nvars);
        };
        it.fold(first.clone(), |g, (m, _)| g.gcd(m))
    }

    /// Divides every exponent vector by the monomial `m`, which must divide
    /// every term.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (m.div(t).expect("monomial divides every term"), c.clone()))
            .collect();
        Self::from_sorted(&self.field, self.nvars, terms)
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    pub fn map_coefficients<G: Field>(&self, target: &G, f: impl Fn(&F::Scalar) -> G::Scalar) -> MvPoly<G> {
        MvPoly::from_terms(
            target,
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Embeds into a ring with `nvars >= self.nvars()` variables.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Exponents = m.exponents().iter().copied().collect();
                e.resize(nvars, 0);
                (Monomial::new(e), c.clone())
            })
            .collect();
        Self::from_sorted(&self.field, nvars, terms)
    }

    /// `true` when `self = c * other` for a nonzero scalar `c`.
    pub fn equals_up_to_scalar(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    /// Printable form using the supplied variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, F> {
        PolyDisplay { poly: self, names: Some(names) }
    }
}

impl<F: Field> PartialEq for MvPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for MvPoly<F> {}

impl<F: Field> std::hash::Hash for MvPoly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        self.terms.hash(state);
    }
}

impl<F: Field> fmt::Debug for MvPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct PolyDisplay<'a, F: Field> {
    poly: &'a MvPoly<F>,
    names: Option<&'a [String]>,
}

impl<F: Field> fmt::Display for PolyDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        let k = &p.field;
        if p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in p.terms.iter().enumerate() {
            let negative = k.is_negative(c);
            let abs = if negative { k.neg(c) } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut wrote = false;
            if !k.is_one(&abs) || m.is_one() {
                k.fmt_scalar(&abs, f)?;
                wrote = true;
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                match self.names {
                    Some(names) => write!(f, "{}", names[v])?,
                    None => write!(f, "X{v}")?,
                }
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Display for MvPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay { poly: self, names: None }.fmt(f)
    }
}

impl<F: Field> Add for &MvPoly<F> {
    type Output = MvPoly<F>;
    fn add(self, rhs: Self) -> MvPoly<F> {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl<F: Field> Sub for &MvPoly<F> {
    type Output = MvPoly<F>;
    fn sub(self, rhs: Self) -> MvPoly<F> {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<F: Field> Mul for &MvPoly<F> {
    type Output = MvPoly<F>;
    fn mul(self, rhs: Self) -> MvPoly<F> {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl<F: Field> Neg for &MvPoly<F> {
    type Output = MvPoly<F>;
    fn neg(self) -> MvPoly<F> {
        let k = &self.field;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect();
        MvPoly::from_sorted(k, self.nvars, terms)
    }
}

/// Builds a polynomial from `(coefficient, exponents)` pairs with integer
/// coefficients. Mostly for tests and fixtures.
pub fn poly_from_ints<F: Field>(field: &F, nvars: usize, terms: &[(i64, &[u32])]) -> MvPoly<F> {
    MvPoly::from_terms(
        field,
        nvars,
        terms
            .iter()
            .map(|(c, e)| (Monomial::new(e.iter().copied().collect::<Exponents>()), field.from_i64(*c))),
    )
}
