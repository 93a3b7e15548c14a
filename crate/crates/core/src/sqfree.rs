//! Square-free decomposition of multivariate polynomials.
//!
//! For a main variable `v` the input splits as `content_v * primitive_v`.
//! Every factor of the primitive part involves `v`, so Yun's iteration with
//! the partial derivative in `v` separates it by multiplicity; the content
//! is decomposed recursively in the remaining variables. Factors from
//! different levels are coprime, so equal multiplicities simply multiply.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::gcd_multivariate;
use crate::poly::MvPoly;

/// `a = unit * prod(part^e)` with monic, square-free, pairwise coprime
/// parts listed by increasing multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeDecomposition<F: Field> {
    pub unit: F::Scalar,
    pub parts: Vec<(MvPoly<F>, u32)>,
}

impl<F: Field> SquarefreeDecomposition<F> {
    /// `prod(part^e)`, i.e. the input made monic.
    pub fn expand(&self, field: &F, nvars: usize) -> MvPoly<F> {
        self.parts
            .iter()
            .fold(MvPoly::one(field, nvars), |acc, (p, e)| &acc * &p.pow(*e))
    }

    /// Product of the parts: the square-free kernel of the input.
    pub fn radical(&self, field: &F, nvars: usize) -> MvPoly<F> {
        self.parts
            .iter()
            .fold(MvPoly::one(field, nvars), |acc, (p, _)| &acc * p)
    }

    /// `sum e * deg(P_e)`.
    pub fn degree(&self) -> u32 {
        self.parts.iter().map(|(p, e)| e * p.degree()).sum()
    }

    /// `sum (2e - 1) * deg(P_e)`.
    pub fn weighted_degree(&self) -> u32 {
        self.parts.iter().map(|(p, e)| (2 * e - 1) * p.degree()).sum()
    }

    /// `prod(P_e^(2e - 1))`.
    pub fn weighted_product(&self, field: &F, nvars: usize) -> MvPoly<F> {
        self.parts
            .iter()
            .fold(MvPoly::one(field, nvars), |acc, (p, e)| &acc * &p.pow(2 * e - 1))
    }
}

/// Square-free decomposition of a nonzero polynomial.
///
/// Fails with [`Error::PthPowerHazard`] when the characteristic `p`
/// satisfies `0 < p <= deg(a)`, where derivatives can vanish on p-th powers.
pub fn squarefree_decompose<F: Field>(a: &MvPoly<F>) -> Result<SquarefreeDecomposition<F>> {
    assert!(!a.is_zero(), "square-free decomposition of zero");
    let k = a.field();
    let p = k.characteristic();
    if p != 0 && p <= a.degree() as u64 {
        return Err(Error::PthPowerHazard { p, degree: a.degree() });
    }
    let unit = a.leading_coeff();
    let mut by_mult: BTreeMap<u32, MvPoly<F>> = BTreeMap::new();
    decompose_into(&a.monic(), &mut by_mult);
    let parts = by_mult
        .into_iter()
        .filter(|(_, q)| !q.is_constant())
        .map(|(e, q)| (q.monic(), e))
        .collect();
    Ok(SquarefreeDecomposition { unit, parts })
}

fn decompose_into<F: Field>(a: &MvPoly<F>, out: &mut BTreeMap<u32, MvPoly<F>>) {
    if a.is_constant() {
        return;
    }
    let v = *a
        .support()
        .iter()
        .min_by_key(|&&v| (a.degree_in(v), v))
        .expect("nonconstant polynomial has support");
    let coeffs = a.coefficients_in(v);
    let content = crate::gcd::gcd_many(a.field(), a.nvars(), coeffs.iter());
    let primitive = a.exact_div(&content).expect("content divides");
    for (part, e) in yun(&primitive, v) {
        push_part(out, part, e);
    }
    decompose_into(&content, out);
}

fn push_part<F: Field>(out: &mut BTreeMap<u32, MvPoly<F>>, part: MvPoly<F>, e: u32) {
    if part.is_constant() {
        return;
    }
    match out.get_mut(&e) {
        Some(acc) => *acc = &*acc * &part,
        None => {
            out.insert(e, part);
        }
    }
}

/// Yun's algorithm in the variable `v` for a polynomial primitive in `v`.
fn yun<F: Field>(a: &MvPoly<F>, v: usize) -> Vec<(MvPoly<F>, u32)> {
    let mut parts = Vec::new();
    let da = a.derivative(v);
    let g = gcd_multivariate(a, &da);
    let mut b = a.exact_div(&g).expect("gcd divides");
    let c = da.exact_div(&g).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let part = gcd_multivariate(&b, &d);
        b = b.exact_div(&part).expect("gcd divides");
        let c_next = d.exact_div(&part).expect("gcd divides");
        d = &c_next - &b.derivative(v);
        parts.push((part, i));
        i += 1;
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, DEFAULT_PRIME};
    use crate::poly::poly_from_ints;

    fn k() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn mixed_multiplicities() {
        let a = poly_from_ints(&k(), 2, &[(1, &[4, 2]), (1, &[3, 3])]);
        let sq = squarefree_decompose(&a).unwrap();
        let shown: Vec<(String, u32)> = sq.parts.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        assert_eq!(
            shown,
            vec![("X0 + X1".to_string(), 1), ("X1".to_string(), 2), ("X0".to_string(), 3)]
        );
        assert_eq!(sq.degree(), 6);
        assert_eq!(sq.weighted_degree(), 1 + 3 + 5);
    }

    #[test]
    fn squarefree_input_is_one_part() {
        let a = poly_from_ints(&k(), 3, &[(3, &[1, 1, 0]), (6, &[0, 0, 2])]);
        let sq = squarefree_decompose(&a).unwrap();
        assert_eq!(sq.parts, vec![(a.monic(), 1)]);
        assert_eq!(sq.unit, 3);
    }

    #[test]
    fn small_characteristic_is_refused() {
        let f5 = PrimeField::new(5).unwrap();
        let a = poly_from_ints(&f5, 2, &[(1, &[5, 0]), (1, &[0, 5])]);
        assert!(matches!(
            squarefree_decompose(&a),
            Err(Error::PthPowerHazard { p: 5, degree: 5 })
        ));
    }

    #[test]
    fn content_factors_are_found() {
        // (X1 - X2)^2 * (X0 + X2) * X2^3: content in X0 carries X2 and X1 - X2
        let x = |i| MvPoly::var(&k(), 3, i);
        let l = &x(1) - &x(2);
        let a = &(&l.pow(2) * &(&x(0) + &x(2))) * &x(2).pow(3);
        let sq = squarefree_decompose(&a).unwrap();
        assert_eq!(sq.expand(&k(), 3), a);
        let es: Vec<u32> = sq.parts.iter().map(|(_, e)| *e).collect();
        assert_eq!(es, vec![1, 2, 3]);
    }
}
