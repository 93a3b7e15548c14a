//! Jacobian matrices of rational maps, their minors, and the gcd `F` of
//! the 3-minors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcd::gcd_many;
use crate::linalg::Matrix;
use crate::monomial::Monomial;
use crate::poly::MvPoly;

/// A rational map `P^m --> P^n` given by `n + 1` forms of common degree `d`
/// in `m + 1` variables, without a common factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMapInput<F: Field> {
    field: F,
    d: u32,
    forms: Vec<MvPoly<F>>,
    names: Vec<String>,
}

impl<F: Field> RationalMapInput<F> {
    /// Validates homogeneity, the common degree, `gcd(f) = 1` and that the
    /// characteristic does not divide `d`.
    pub fn new(field: &F, forms: Vec<MvPoly<F>>) -> Result<Self> {
        let input = Self::new_unchecked_gcd(field, forms)?;
        input.check_coprime()?;
        Ok(input)
    }

    /// [`Error::CommonFactor`] naming `gcd(f_0, ..., f_n)` when it is not
    /// constant.
    pub fn check_coprime(&self) -> Result<()> {
        let g = gcd_many(&self.field, self.nvars(), self.forms.iter());
        if !g.is_constant() {
            return Err(Error::CommonFactor(g.display_with(&self.names).to_string()));
        }
        Ok(())
    }

    /// Like [`RationalMapInput::new`] but skips the gcd test, for forms
    /// known to be coprime (e.g. an invertible recombination of valid
    /// input).
    pub fn new_unchecked_gcd(field: &F, forms: Vec<MvPoly<F>>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::InvalidInput("a map needs at least two forms".into()));
        }
        let nvars = forms[0].nvars();
        if nvars < 2 {
            return Err(Error::InvalidInput("a map needs at least two variables".into()));
        }
        for f in &forms {
            if f.nvars() != nvars {
                return Err(Error::ArityMismatch { left: nvars, right: f.nvars() });
            }
        }
        let mut d = None;
        for (i, f) in forms.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if !f.is_homogeneous() {
                return Err(Error::NotHomogeneous { index: i });
            }
            match d {
                None => d = Some(f.degree()),
                Some(e) if e != f.degree() => {
                    return Err(Error::MixedDegrees { index: i, expected: e, found: f.degree() })
                }
                _ => {}
            }
        }
        let d = d.ok_or_else(|| Error::InvalidInput("all forms are zero".into()))?;
        if d == 0 {
            return Err(Error::InvalidInput("forms must have positive degree".into()));
        }
        if field.char_divides(d as u64) {
            return Err(Error::CharDividesDegree { p: field.characteristic(), d });
        }
        Ok(RationalMapInput {
            field: field.clone(),
            d,
            forms,
            names: (0..nvars).map(|i| format!("X{i}")).collect(),
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.nvars() {
            return Err(Error::InvalidInput(format!(
                "{} variable names for {} variables",
                names.len(),
                self.nvars()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Source dimension.
    pub fn m(&self) -> usize {
        self.nvars() - 1
    }

    /// Target dimension.
    pub fn n(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.forms[0].nvars()
    }

    pub fn forms(&self) -> &[MvPoly<F>] {
        &self.forms
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `3(d - 1)`.
    pub fn outer_bound(&self) -> u32 {
        3 * (self.d - 1)
    }

    /// Values `(f_0(x), ..., f_n(x))`.
    pub fn evaluate(&self, x: &[F::Scalar]) -> Vec<F::Scalar> {
        self.forms.iter().map(|f| f.evaluate(x)).collect()
    }

    /// `g_i = sum_j change[i][j] * f_j`.
    pub fn recombine(&self, change: &Matrix<F>) -> Result<Self> {
        if change.rows() != self.forms.len() || change.cols() != self.forms.len() {
            return Err(Error::InvalidInput("change matrix has the wrong size".into()));
        }
        if !change.is_invertible() {
            return Err(Error::SingularChange);
        }
        let k = &self.field;
        let forms = (0..change.rows())
            .map(|i| {
                self.forms
                    .iter()
                    .enumerate()
                    .fold(MvPoly::zero(k, self.nvars()), |acc, (j, f)| &acc + &f.scale(change.get(i, j)))
            })
            .collect();
        let mut out = Self::new_unchecked_gcd(k, forms)?;
        out.names = self.names.clone();
        Ok(out)
    }
}

/// `jac[i][j] = df_i / dX_j`, an `(n + 1) x (m + 1)` matrix.
pub fn build_jacobian<F: Field>(input: &RationalMapInput<F>) -> Vec<Vec<MvPoly<F>>> {
    input
        .forms()
        .iter()
        .map(|f| (0..input.nvars()).map(|j| f.derivative(j)).collect())
        .collect()
}

/// A minor with its strictly increasing row and column index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Minor<F: Field> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: MvPoly<F>,
}

/// All `s x s` minors, zero ones included, rows-major in lexicographic
/// order of the index sets.
pub fn minors<F: Field>(jac: &[Vec<MvPoly<F>>], s: usize) -> Result<Vec<Minor<F>>> {
    let nrows = jac.len();
    let ncols = jac.first().map_or(0, |r| r.len());
    let max = nrows.min(ncols);
    if s == 0 || s > max {
        return Err(Error::SOutOfRange { s, max });
    }
    let row_sets = combinations(nrows, s);
    let col_sets = combinations(ncols, s);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rows in &row_sets {
        for cols in &col_sets {
            let sub: Vec<Vec<&MvPoly<F>>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| &jac[r][c]).collect())
                .collect();
            out.push(Minor {
                rows: rows.clone(),
                cols: cols.clone(),
                value: determinant(&sub),
            });
        }
    }
    Ok(out)
}

/// Increasing `s`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < s - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, s, &mut Vec::with_capacity(s), &mut out);
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant<F: Field>(m: &[Vec<&MvPoly<F>>]) -> MvPoly<F> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix expected");
    match n {
        1 => m[0][0].clone(),
        2 => &(m[0][0] * m[1][1]) - &(m[0][1] * m[1][0]),
        _ => {
            let k = m[0][0].field();
            let mut acc = MvPoly::zero(k, m[0][0].nvars());
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<&MvPoly<F>>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, p)| *p).collect())
                    .collect();
                let term = m[0][c] * &determinant(&sub);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Gcd of the nonzero minors, accumulated from the sparsest minor upward
/// with an early exit at 1.
pub fn gcd_of_minors<F: Field>(minors: &[MvPoly<F>]) -> Result<MvPoly<F>> {
    let mut nonzero: Vec<&MvPoly<F>> = minors.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::AllMinorsZero);
    }
    nonzero.sort_by_key(|p| p.len());
    Ok(gcd_many(nonzero[0].field(), nonzero[0].nvars(), nonzero))
}

/// Same as [`gcd_of_minors`] with the accumulation order shuffled by `seed`.
pub fn gcd_of_minors_shuffled<F: Field>(minors: &[MvPoly<F>], seed: u64) -> Result<MvPoly<F>> {
    let mut nonzero: Vec<&MvPoly<F>> = minors.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::AllMinorsZero);
    }
    nonzero.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(gcd_many(nonzero[0].field(), nonzero[0].nvars(), nonzero))
}

/// Nonvanishing of `I_{m+1}(J)` and `I_3(J)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinitenessFlags {
    pub i_top_nonzero: bool,
    pub i3_nonzero: bool,
    /// Whether random evaluation was inconclusive and minors were expanded.
    pub symbolic_fallback: bool,
}

const FINITENESS_TRIALS: usize = 8;

/// Tests `I_{m+1}(J) != 0` and `I_3(J) != 0` by the rank of `J` at random
/// points, expanding minors symbolically when every trial is degenerate.
pub fn generic_finiteness_check<F: Field>(input: &RationalMapInput<F>, seed: u64) -> FinitenessFlags {
    let k = input.field();
    let jac = build_jacobian(input);
    let top = input.m() + 1;
    let max_minor = (input.n() + 1).min(top);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..FINITENESS_TRIALS {
        let pt: Vec<F::Scalar> = (0..input.nvars()).map(|_| k.random(&mut rng)).collect();
        best = best.max(jacobian_at(&jac, k, &pt).rank());
        if best >= max_minor {
            break;
        }
    }
    let mut flags = FinitenessFlags {
        i_top_nonzero: top <= max_minor && best >= top,
        i3_nonzero: 3 <= max_minor && best >= 3,
        symbolic_fallback: false,
    };
    let nonzero_minor = |s: usize| {
        s <= max_minor
            && minors(&jac, s)
                .map(|ms| ms.iter().any(|m| !m.value.is_zero()))
                .unwrap_or(false)
    };
    if !flags.i3_nonzero && 3 <= max_minor {
        flags.symbolic_fallback = true;
        flags.i3_nonzero = nonzero_minor(3);
    }
    if !flags.i_top_nonzero && top <= max_minor {
        flags.symbolic_fallback = true;
        flags.i_top_nonzero = nonzero_minor(top);
    }
    flags
}

/// The scalar matrix `J(q)`.
pub fn jacobian_at<F: Field>(jac: &[Vec<MvPoly<F>>], field: &F, q: &[F::Scalar]) -> Matrix<F> {
    Matrix::from_rows(
        field,
        jac.iter().map(|row| row.iter().map(|p| p.evaluate(q)).collect()).collect(),
    )
}

/// Everything derived from the Jacobian of a map.
#[derive(Clone, Debug)]
pub struct JacobianReport<F: Field> {
    pub jac: Vec<Vec<MvPoly<F>>>,
    /// Nonzero 3-minors.
    pub minors3: Vec<Minor<F>>,
    /// Gcd of the 3-minors, monic.
    pub gcd: MvPoly<F>,
    pub deg_gcd: u32,
    pub i3_nonzero: bool,
    pub i_top_nonzero: bool,
}

impl<F: Field> JacobianReport<F> {
    /// Fails with [`Error::AllMinorsZero`] when `I_3(J) = 0`.
    pub fn compute(input: &RationalMapInput<F>, seed: u64) -> Result<Self> {
        let jac = build_jacobian(input);
        if input.nvars() < 3 || input.forms().len() < 3 {
            return Err(Error::AllMinorsZero);
        }
        let all = minors(&jac, 3)?;
        let minors3: Vec<Minor<F>> = all.into_iter().filter(|m| !m.value.is_zero()).collect();
        let values: Vec<MvPoly<F>> = minors3.iter().map(|m| m.value.clone()).collect();
        let gcd = gcd_of_minors(&values)?;
        let flags = generic_finiteness_check(input, seed);
        Ok(JacobianReport {
            deg_gcd: gcd.degree(),
            jac,
            minors3,
            gcd,
            i3_nonzero: true,
            i_top_nonzero: flags.i_top_nonzero,
        })
    }

    pub fn minor_values(&self) -> impl Iterator<Item = &MvPoly<F>> {
        self.minors3.iter().map(|m| &m.value)
    }
}

/// The syzygy `(a_0, ..., a_3)` with `a_i = D_i / F`, where `D_i` is the
/// signed 3-minor of the Jacobian of a surface map with row `i` deleted.
#[derive(Clone, Debug)]
pub struct EulerSyzygy<F: Field> {
    pub signed_minors: Vec<MvPoly<F>>,
    pub coefficients: Vec<MvPoly<F>>,
    /// `3(d - 1) - deg F`.
    pub delta: u32,
    /// `sum a_i f_i = 0`, checked by expansion.
    pub identity_holds: bool,
}

pub fn euler_syzygy<F: Field>(input: &RationalMapInput<F>, gcd: &MvPoly<F>) -> Result<EulerSyzygy<F>> {
    if input.m() != 2 || input.n() != 3 {
        return Err(Error::InvalidInput(format!(
            "the Euler syzygy is built for maps P^2 --> P^3, got P^{} --> P^{}",
            input.m(),
            input.n()
        )));
    }
    let k = input.field();
    if k.char_divides(input.d() as u64) {
        return Err(Error::CharDividesDegree { p: k.characteristic(), d: input.d() });
    }
    if gcd.is_zero() || gcd.degree() > input.outer_bound() {
        return Err(Error::InvalidInput("gcd of minors is zero or too large".into()));
    }
    let jac = build_jacobian(input);
    let mut signed_minors = Vec::with_capacity(4);
    let mut coefficients = Vec::with_capacity(4);
    for i in 0..4 {
        let sub: Vec<Vec<&MvPoly<F>>> = (0..4)
            .filter(|&r| r != i)
            .map(|r| jac[r].iter().collect())
            .collect();
        let det = determinant(&sub);
        let signed = if i % 2 == 0 { det } else { -&det };
        let a = signed.divide(gcd).ok_or(Error::FDoesNotDivideMinor { index: i })?;
        signed_minors.push(signed);
        coefficients.push(a);
    }
    let combo = coefficients
        .iter()
        .zip(input.forms())
        .fold(MvPoly::zero(k, input.nvars()), |acc, (a, f)| &acc + &(a * f));
    Ok(EulerSyzygy {
        signed_minors,
        coefficients,
        delta: input.outer_bound() - gcd.degree(),
        identity_holds: combo.is_zero(),
    })
}

/// Linear (in)dependence of the forms over the base field.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearDependence<F: Field> {
    pub dependent: bool,
    pub rank: usize,
    /// `lambda` with `sum lambda_i f_i = 0`, first nonzero entry 1.
    pub relation: Option<Vec<F::Scalar>>,
}

pub fn linear_dependence_check<F: Field>(input: &RationalMapInput<F>) -> LinearDependence<F> {
    let k = input.field();
    let monomials = Monomial::all_of_degree(input.nvars(), input.d());
    let rows: Vec<Vec<F::Scalar>> = monomials
        .iter()
        .map(|m| input.forms().iter().map(|f| f.coeff(m)).collect())
        .collect();
    let mat = Matrix::from_rows(k, rows);
    let rank = mat.rank();
    let relation = mat.kernel().into_iter().next().map(|v| {
        let lead = v.iter().find(|c| !k.is_zero(c)).expect("kernel vector is nonzero").clone();
        let inv = k.inv(&lead);
        v.iter().map(|c| k.mul(c, &inv)).collect()
    });
    LinearDependence {
        dependent: relation.is_some(),
        rank,
        relation,
    }
}

/// Recomputes `F` for `change * f` and compares with `F` for `f` up to a
/// scalar. The seed shuffles the order in which the recombined minors are
/// accumulated.
pub fn fitting_invariance_check<F: Field>(
    input: &RationalMapInput<F>,
    change: &Matrix<F>,
    seed: u64,
) -> Result<bool> {
    let original = JacobianReport::compute(input, seed)?.gcd;
    let changed = input.recombine(change)?;
    let jac = build_jacobian(&changed);
    let values: Vec<MvPoly<F>> = minors(&jac, 3)?.into_iter().map(|m| m.value).collect();
    let recomputed = gcd_of_minors_shuffled(&values, seed)?;
    Ok(original.equals_up_to_scalar(&recomputed))
}

/// A uniformly random invertible `n x n` matrix.
pub fn random_invertible<F: Field, R: Rng>(field: &F, n: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
        let m = Matrix::from_rows(field, rows);
        if m.is_invertible() {
            return m;
        }
    }
}
