//! Graded pieces of the syzygy module of `I = (f_0, ..., f_n)` by exact
//! linear algebra, degree by degree.

use crate::field::Field;
use crate::jacobian::RationalMapInput;
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::poly::MvPoly;

/// A basis of `Syz(I)_nu`: tuples of forms of degree `nu` with
/// `sum a_i f_i = 0`.
#[derive(Clone, Debug)]
pub struct GradedKernelBasis<F: Field> {
    pub degree: u32,
    pub basis: Vec<Vec<MvPoly<F>>>,
}

impl<F: Field> GradedKernelBasis<F> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Smallest degree with a nonzero syzygy, searched up to a cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndegResult {
    /// `None` stands for "no syzygy up to `searched_up_to`".
    pub indeg: Option<u32>,
    pub searched_up_to: u32,
}

/// The matrix of `(a_0, ..., a_n) |-> sum a_i f_i` from `(R_nu)^(n+1)` to
/// `R_(nu+d)` in graded-lex monomial coordinates; columns are grouped by
/// form index.
pub fn multiplication_matrix<F: Field>(input: &RationalMapInput<F>, nu: u32) -> (Matrix<F>, Vec<Monomial>) {
    let k = input.field();
    let nv = input.nvars();
    let sources = Monomial::all_of_degree(nv, nu);
    let targets = Monomial::all_of_degree(nv, nu + input.d());
    let index: std::collections::HashMap<&Monomial, usize> =
        targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let ncols = sources.len() * input.forms().len();
    let mut mat = Matrix::zeros(k, targets.len(), ncols);
    for (i, f) in input.forms().iter().enumerate() {
        for (s, src) in sources.iter().enumerate() {
            let col = i * sources.len() + s;
            for (m, c) in f.terms() {
                let row = index[&m.mul(src)];
                mat.set(row, col, c.clone());
            }
        }
    }
    (mat, sources)
}

pub fn graded_syzygy_kernel<F: Field>(input: &RationalMapInput<F>, nu: u32) -> GradedKernelBasis<F> {
    let k = input.field();
    let nv = input.nvars();
    let (mat, sources) = multiplication_matrix(input, nu);
    let basis = mat
        .kernel()
        .into_iter()
        .map(|v| {
            v.chunks(sources.len())
                .map(|chunk| {
                    MvPoly::from_terms(k, nv, sources.iter().cloned().zip(chunk.iter().cloned()))
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    for tuple in &basis {
        debug_assert!(is_syzygy(input, tuple));
    }
    GradedKernelBasis { degree: nu, basis }
}

/// `sum a_i f_i == 0`, by expansion.
pub fn is_syzygy<F: Field>(input: &RationalMapInput<F>, tuple: &[MvPoly<F>]) -> bool {
    tuple.len() == input.forms().len()
        && tuple
            .iter()
            .zip(input.forms())
            .fold(MvPoly::zero(input.field(), input.nvars()), |acc, (a, f)| &acc + &(a * f))
            .is_zero()
}

/// Dimension of `Syz(I)_nu` without building the basis.
pub fn syzygy_dimension<F: Field>(input: &RationalMapInput<F>, nu: u32) -> usize {
    let (mat, _) = multiplication_matrix(input, nu);
    mat.cols() - mat.rank()
}

/// `indeg(Syz(I))`, scanning `nu = 0, 1, ..., cap`.
pub fn indeg_syzygy<F: Field>(input: &RationalMapInput<F>, cap: u32) -> IndegResult {
    for nu in 0..=cap {
        if syzygy_dimension(input, nu) > 0 {
            return IndegResult { indeg: Some(nu), searched_up_to: nu };
        }
    }
    IndegResult { indeg: None, searched_up_to: cap }
}
