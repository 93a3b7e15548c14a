//! Inputs shared by the benchmarks.

use jacfiber_core::poly::poly_from_ints;
use jacfiber_core::{MvPoly, PrimeField, DEFAULT_PRIME};

pub fn field() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).expect("default prime is valid")
}

/// `(X0 + X1 + X2)^e * (X0 - 2*X1 + 3)` and `(X0 + X1 + X2)^e * (X1^2 + X2^2 + 5)`,
/// a gcd instance with a cofactor on each side.
pub fn gcd_pair(k: &PrimeField, e: u32) -> (MvPoly<PrimeField>, MvPoly<PrimeField>) {
    let common = poly_from_ints(k, 3, &[(1, &[1, 0, 0]), (1, &[0, 1, 0]), (1, &[0, 0, 1])]).pow(e);
    let a = poly_from_ints(k, 3, &[(1, &[1, 0, 0]), (-2, &[0, 1, 0]), (3, &[0, 0, 0])]);
    let b = poly_from_ints(k, 3, &[(1, &[0, 2, 0]), (1, &[0, 0, 2]), (5, &[0, 0, 0])]);
    (&common * &a, &common * &b)
}
