//! Surface maps `P^2 --> P^3` with known fiber structure, used by tests,
//! benchmarks and the CLI self-test.

use crate::field::Field;
use crate::jacobian::RationalMapInput;
use crate::poly::poly_from_ints;

/// The sextic map
///
/// ```text
/// f0 = X1^2*X2^4 - X1^4*X2^2    f1 = X0^4*X2^2 - X2^6
/// f2 = X0^2*X1^2*X2^2 - X0^2*X1^4    f3 = X0^4*X1^2 - X1^2*X2^4
/// ```
///
/// whose minor gcd is `X0*X1^3*X2*(X0^4 - X2^4)*(X1^2 - X2^2)`.
pub fn sextic<F: Field>(k: &F) -> RationalMapInput<F> {
    let forms = vec![
        poly_from_ints(k, 3, &[(1, &[0, 2, 4]), (-1, &[0, 4, 2])]),
        poly_from_ints(k, 3, &[(1, &[4, 0, 2]), (-1, &[0, 0, 6])]),
        poly_from_ints(k, 3, &[(1, &[2, 2, 2]), (-1, &[2, 4, 0])]),
        poly_from_ints(k, 3, &[(1, &[4, 2, 0]), (-1, &[0, 2, 4])]),
    ];
    RationalMapInput::new(k, forms).expect("fixture is a valid map")
}

/// The degree-`d` family (`d >= 4`)
///
/// ```text
/// f0 = X0^(d-3)*X1*(X0^2 - X1^2)    f1 = X0^(d-3)*X2*(X0^2 - X1^2)
/// f2 = X0^(d-3)*X2*(X1^2 - X2^2)    f3 = X1^(d-3)*X2*(X1^2 - X2^2)
/// ```
///
/// with minor gcd `X0^(2d-7)*X2*(X0^2 - X1^2)*(X1^2 - X2^2)`.
pub fn family<F: Field>(k: &F, d: u32) -> RationalMapInput<F> {
    assert!(d >= 4, "the family starts at degree 4");
    let e = d - 3;
    let forms = vec![
        poly_from_ints(k, 3, &[(1, &[e + 2, 1, 0]), (-1, &[e, 3, 0])]),
        poly_from_ints(k, 3, &[(1, &[e + 2, 0, 1]), (-1, &[e, 2, 1])]),
        poly_from_ints(k, 3, &[(1, &[e, 2, 1]), (-1, &[e, 0, 3])]),
        poly_from_ints(k, 3, &[(1, &[0, e + 2, 1]), (-1, &[0, e, 3])]),
    ];
    RationalMapInput::new(k, forms).expect("fixture is a valid map")
}

/// `(X0^3, X1^3, X2^3, X0^3 + X1^3)`: linearly dependent cubes.
pub fn dependent_cubes<F: Field>(k: &F) -> RationalMapInput<F> {
    let forms = vec![
        poly_from_ints(k, 3, &[(1, &[3, 0, 0])]),
        poly_from_ints(k, 3, &[(1, &[0, 3, 0])]),
        poly_from_ints(k, 3, &[(1, &[0, 0, 3])]),
        poly_from_ints(k, 3, &[(1, &[3, 0, 0]), (1, &[0, 3, 0])]),
    ];
    RationalMapInput::new(k, forms).expect("fixture is a valid map")
}
