//! Multivariate gcd by recursive primitive polynomial remainder sequences.
//!
//! A polynomial is viewed as univariate in a main variable with
//! coefficients in the remaining variables. The gcd splits into the gcd of
//! the contents (recursion on fewer variables) times the gcd of the
//! primitive parts, obtained from a pseudo-remainder sequence in which every
//! remainder is replaced by its primitive part. Before recursing, the degree
//! of the gcd in each variable is bounded from above by a gcd of univariate
//! images; a zero bound removes that variable from the problem.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::Field;
use crate::poly::MvPoly;

/// Evaluation attempts per variable when bounding gcd degrees.
const IMAGE_TRIES: usize = 4;

/// Monic gcd of two polynomials (leading graded-lex coefficient 1).
///
/// `gcd(0, 0)` is `0`; otherwise the result divides both inputs and every
/// common divisor divides it.
pub fn gcd_multivariate<F: Field>(a: &MvPoly<F>, b: &MvPoly<F>) -> MvPoly<F> {
    assert_eq!(a.nvars(), b.nvars(), "gcd of polynomials in different rings");
    gcd_rec(a, b).monic()
}

/// Monic gcd of a list, stopping early once the running gcd is constant.
pub fn gcd_many<'a, F: Field, I>(field: &F, nvars: usize, polys: I) -> MvPoly<F>
where
    I: IntoIterator<Item = &'a MvPoly<F>>,
{
    let mut acc = MvPoly::zero(field, nvars);
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = if acc.is_zero() { p.monic() } else { gcd_rec(&acc, p).monic() };
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn gcd_rec<F: Field>(a: &MvPoly<F>, b: &MvPoly<F>) -> MvPoly<F> {
    let k = a.field().clone();
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MvPoly::one(&k, n);
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = MvPoly::monomial(&k, n, ma.gcd(&mb), k.one());
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);
    if a.is_constant() || b.is_constant() {
        return mono;
    }
    if a.equals_up_to_scalar(&b) {
        return &mono * &a.monic();
    }
    if b.divide(&a).is_some() {
        return &mono * &a.monic();
    }
    if a.divide(&b).is_some() {
        return &mono * &b.monic();
    }

    let sa = a.support();
    let sb = b.support();

    // a variable present in only one argument cannot occur in the gcd
    if let Some(&v) = sa.iter().find(|v| !sb.contains(v)) {
        let mut cs = a.coefficients_in(v);
        cs.push(b.clone());
        return &mono * &gcd_many(&k, n, cs.iter());
    }
    if let Some(&v) = sb.iter().find(|v| !sa.contains(v)) {
        let mut cs = b.coefficients_in(v);
        cs.push(a.clone());
        return &mono * &gcd_many(&k, n, cs.iter());
    }

    let bounds = degree_bounds(&a, &b, &sa);
    if bounds.iter().all(|&(_, d)| d == Some(0)) {
        return mono;
    }
    if let Some(&(v, _)) = bounds.iter().find(|&&(_, d)| d == Some(0)) {
        let mut cs = a.coefficients_in(v);
        cs.extend(b.coefficients_in(v));
        return &mono * &gcd_many(&k, n, cs.iter());
    }

    let v = *sa
        .iter()
        .min_by_key(|&&v| (a.degree_in(v) + b.degree_in(v), v))
        .expect("nonconstant polynomial has support");

    let (ca, pa) = content_and_primitive(&a, v);
    let (cb, pb) = content_and_primitive(&b, v);
    let c = gcd_rec(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    &(&mono * &c) * &g.monic()
}

/// Content with respect to `var` and the corresponding primitive part.
fn content_and_primitive<F: Field>(a: &MvPoly<F>, var: usize) -> (MvPoly<F>, MvPoly<F>) {
    let coeffs = a.coefficients_in(var);
    let content = gcd_many(a.field(), a.nvars(), coeffs.iter());
    if content.is_one() {
        return (content, a.clone());
    }
    let pp = a.exact_div(&content).expect("content divides the polynomial");
    (content, pp)
}

fn primitive_part<F: Field>(a: &MvPoly<F>, var: usize) -> MvPoly<F> {
    content_and_primitive(a, var).1
}

/// Gcd of two polynomials that are primitive with respect to `var`.
fn primitive_prs<F: Field>(a: MvPoly<F>, b: MvPoly<F>, var: usize) -> MvPoly<F> {
    let k = a.field().clone();
    let n = a.nvars();
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    loop {
        if r1.degree_in(var) == 0 {
            // a primitive polynomial free of var is a unit
            return MvPoly::one(&k, n);
        }
        let r = pseudo_remainder(&r0, &r1, var);
        if r.is_zero() {
            return r1;
        }
        if r.degree_in(var) == 0 {
            return MvPoly::one(&k, n);
        }
        r0 = r1;
        r1 = primitive_part(&r, var);
    }
}

/// A scalar-free multiple of `prem(a, b)` with respect to `var`. Only the
/// primitive part of the result is meaningful.
fn pseudo_remainder<F: Field>(a: &MvPoly<F>, b: &MvPoly<F>, var: usize) -> MvPoly<F> {
    let k = a.field();
    let n = a.nvars();
    let mut r = a.coefficients_in(var);
    let bc = b.coefficients_in(var);
    let db = bc.len() - 1;
    let lcb = &bc[db];
    while r.len() > db {
        let lcr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for (i, ri) in r.iter_mut().enumerate() {
            let scaled = &*ri * lcb;
            *ri = if i >= shift && i - shift < bc.len() {
                &scaled - &(&lcr * &bc[i - shift])
            } else {
                scaled
            };
        }
        debug_assert!(r.last().is_some_and(|c| c.is_zero()));
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    MvPoly::from_coefficients_in(k, n, var, &r)
}

/// Upper bounds on the degree of `gcd(a, b)` in each variable of `vars`,
/// from gcds of univariate images. `None` when every attempted evaluation
/// point killed a leading coefficient.
fn degree_bounds<F: Field>(a: &MvPoly<F>, b: &MvPoly<F>, vars: &[usize]) -> Vec<(usize, Option<u32>)> {
    let k = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6763_645f_6d76);
    vars.iter()
        .map(|&v| {
            let ca = a.coefficients_in(v);
            let cb = b.coefficients_in(v);
            for _ in 0..IMAGE_TRIES {
                let pt: Vec<F::Scalar> = (0..a.nvars()).map(|_| k.random(&mut rng)).collect();
                let ia: Vec<F::Scalar> = ca.iter().map(|c| c.evaluate(&pt)).collect();
                let ib: Vec<F::Scalar> = cb.iter().map(|c| c.evaluate(&pt)).collect();
                if k.is_zero(ia.last().unwrap()) || k.is_zero(ib.last().unwrap()) {
                    continue;
                }
                return (v, Some(dense_gcd_degree(k, ia, ib)));
            }
            (v, None)
        })
        .collect()
}

/// Degree of the gcd of two dense univariate polynomials (coefficients in
/// ascending order, nonzero leading coefficients).
fn dense_gcd_degree<F: Field>(k: &F, mut a: Vec<F::Scalar>, mut b: Vec<F::Scalar>) -> u32 {
    let trim = |p: &mut Vec<F::Scalar>| {
        while p.last().is_some_and(|c| k.is_zero(c)) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a <- a mod b
        let inv = k.inv(b.last().unwrap());
        while a.len() >= b.len() {
            let q = k.mul(a.last().unwrap(), &inv);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = k.sub(&a[shift + i], &k.mul(&q, bi));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    (a.len() as u32).saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField, DEFAULT_PRIME};
    use crate::poly::poly_from_ints;

    fn k() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn difference_of_squares_and_square() {
        let a = poly_from_ints(&k(), 3, &[(1, &[2, 0, 0]), (-1, &[0, 2, 0])]);
        let b = poly_from_ints(&k(), 3, &[(1, &[2, 0, 0]), (2, &[1, 1, 0]), (1, &[0, 2, 0])]);
        let g = gcd_multivariate(&a, &b);
        assert_eq!(g.to_string(), "X0 + X1");
    }

    #[test]
    fn gcd_with_zero_normalizes() {
        let a = poly_from_ints(&k(), 2, &[(3, &[1, 0]), (6, &[0, 1])]);
        let z = MvPoly::zero(&k(), 2);
        assert_eq!(gcd_multivariate(&a, &z).to_string(), "X0 + 2*X1");
        assert_eq!(gcd_multivariate(&z, &a).to_string(), "X0 + 2*X1");
    }

    #[test]
    fn coprime_inputs() {
        let a = poly_from_ints(&k(), 3, &[(1, &[1, 1, 0]), (1, &[0, 0, 2])]);
        let b = poly_from_ints(&k(), 3, &[(1, &[2, 0, 0]), (-1, &[0, 1, 1])]);
        assert!(gcd_multivariate(&a, &b).is_one());
    }

    #[test]
    fn rational_coefficients() {
        let q = RationalField;
        let f = poly_from_ints(&q, 2, &[(2, &[1, 0]), (3, &[0, 1])]);
        let g1 = poly_from_ints(&q, 2, &[(5, &[1, 0]), (-1, &[0, 1])]);
        let g2 = poly_from_ints(&q, 2, &[(1, &[2, 0]), (7, &[0, 2])]);
        let g = gcd_multivariate(&(&f * &g1), &(&f * &g2));
        assert!(g.equals_up_to_scalar(&f));
        assert!(q.is_one(&g.leading_coeff()));
    }

    #[test]
    fn many_with_early_exit() {
        let x = |i| MvPoly::var(&k(), 3, i);
        let polys = [&x(0) * &x(1), &x(0) * &x(2), x(1), &x(0) * &x(0)];
        assert!(gcd_many(&k(), 3, polys.iter()).is_one());
        let polys = [&x(0) * &x(1), &x(0) * &x(2)];
        assert_eq!(gcd_many(&k(), 3, polys.iter()), x(0));
    }
}
