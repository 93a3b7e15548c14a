//! Fibers of dimension `m - 1`: their defining equations, discovery by
//! sampling the zero locus of `F` along random lines over a prime field,
//! and the degree chain they satisfy.
//!
//! Every hypersurface contracted by the map lies in `Z(F)`. A random line
//! meets `Z(F)` in closed points; those of degree 1 are ordinary rational
//! points, those of higher degree are irreducible factors `q(t)` of the
//! restriction of `F` to the line, handled in the residue field
//! `GF(p)[t]/(q)`. When the image of such a point is rational, its fiber
//! equation is computed exactly over the base field. This also reaches
//! contracted curves without rational points (e.g. `X0^2 + X2^2` when `-1`
//! is a non-residue). Images that are not rational are counted and skipped.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::gcd::gcd_many;
use crate::jacobian::{build_jacobian, jacobian_at, Minor, RationalMapInput};
use crate::linalg::Matrix;
use crate::poly::MvPoly;
use crate::sqfree::{squarefree_decompose, SquarefreeDecomposition};
use crate::univariate::UniPoly;

/// A point of projective space, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ProjectivePoint<F: Field> {
    coords: Vec<F::Scalar>,
}

impl<F: Field> PartialEq for ProjectivePoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<F: Field> Eq for ProjectivePoint<F> {}

impl<F: Field> std::hash::Hash for ProjectivePoint<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<F: Field> PartialOrd for ProjectivePoint<F> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for ProjectivePoint<F> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl<F: Field> ProjectivePoint<F> {
    pub fn new(field: &F, coords: Vec<F::Scalar>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !field.is_zero(c)).cloned() else {
            return Err(Error::InvalidInput("the zero vector is not a projective point".into()));
        };
        let inv = field.inv(&lead);
        Ok(ProjectivePoint {
            coords: coords.iter().map(|c| field.mul(c, &inv)).collect(),
        })
    }

    pub fn coords(&self) -> &[F::Scalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn display(&self, field: &F) -> String {
        struct S<'a, F: Field>(&'a F, &'a F::Scalar);
        impl<F: Field> std::fmt::Display for S<'_, F> {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                self.0.fmt_scalar(self.1, f)
            }
        }
        let parts: Vec<String> = self.coords.iter().map(|c| S(field, c).to_string()).collect();
        format!("({})", parts.join(":"))
    }
}

/// A fiber with a divisorial part: the target point, the equation `h_y` of
/// that part, and its square-free structure.
#[derive(Clone, Debug)]
pub struct FiberRecord<F: Field> {
    pub y: ProjectivePoint<F>,
    pub h: MvPoly<F>,
    pub sqfree: SquarefreeDecomposition<F>,
    /// `deg h_y`.
    pub deg_h: u32,
    /// `sum (2e - 1) deg P_e`.
    pub weighted_deg: u32,
}

impl<F: Field> FiberRecord<F> {
    pub fn new(y: ProjectivePoint<F>, h: MvPoly<F>) -> Result<Self> {
        let sqfree = squarefree_decompose(&h)?;
        Ok(FiberRecord {
            y,
            deg_h: h.degree(),
            weighted_deg: sqfree.weighted_degree(),
            h,
            sqfree,
        })
    }

    /// Product of the distinct square-free parts.
    pub fn radical(&self) -> MvPoly<F> {
        self.sqfree.radical(self.h.field(), self.h.nvars())
    }
}

/// The equation of the divisorial part of the fiber over `y`: the monic gcd
/// of `f_i - y_i * l(f)` with `l = T_i0 / y_i0` for the first nonzero
/// coordinate `i0`. A constant result means no divisorial part.
pub fn fiber_equation<F: Field>(input: &RationalMapInput<F>, y: &ProjectivePoint<F>) -> Result<MvPoly<F>> {
    let k = input.field();
    let i0 = y
        .coords()
        .iter()
        .position(|c| !k.is_zero(c))
        .expect("projective point is nonzero");
    fiber_equation_with_pivot(input, y, i0)
}

/// [`fiber_equation`] with an explicit choice of the coordinate used for
/// the linear form `l`.
pub fn fiber_equation_with_pivot<F: Field>(
    input: &RationalMapInput<F>,
    y: &ProjectivePoint<F>,
    pivot: usize,
) -> Result<MvPoly<F>> {
    let k = input.field();
    if y.len() != input.forms().len() {
        return Err(Error::BadPoint { expected: input.forms().len(), found: y.len() });
    }
    let yp = &y.coords()[pivot];
    if k.is_zero(yp) {
        return Err(Error::InvalidInput(format!("coordinate {pivot} of the point is zero")));
    }
    let forms = input.forms();
    let base = &forms[pivot];
    let combos: Vec<MvPoly<F>> = forms
        .iter()
        .zip(y.coords())
        .map(|(f, yi)| f - &base.scale(&k.div(yi, yp)))
        .filter(|p| !p.is_zero())
        .collect();
    if combos.is_empty() {
        return Err(Error::AllCombinationsZero);
    }
    let g = gcd_many(k, input.nvars(), combos.iter());
    Ok(if g.is_constant() { MvPoly::one(k, input.nvars()) } else { g })
}

/// A random line `t |-> a + t*b` inside the affine chart `X_c = 1`.
#[derive(Clone, Debug)]
struct Line {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl Line {
    fn random<R: Rng>(k: PrimeField, nvars: usize, rng: &mut R) -> Self {
        let chart = rng.gen_range(0..nvars);
        let mut a: Vec<u64> = (0..nvars).map(|_| k.random(rng)).collect();
        let mut b: Vec<u64> = (0..nvars).map(|_| k.random(rng)).collect();
        a[chart] = 1;
        b[chart] = 0;
        Line { a, b }
    }

    /// `h(a + t*b)` as a univariate polynomial.
    fn restrict<F: Field>(&self, k: PrimeField, h: &MvPoly<F>) -> UniPoly {
        let hk = h.field();
        let nv = h.nvars();
        let powers: Vec<Vec<UniPoly>> = (0..nv)
            .map(|j| {
                let lin = UniPoly::linear(k, self.a[j], self.b[j]);
                let mut pw = vec![UniPoly::constant(k, 1)];
                for e in 1..=h.degree_in(j) as usize {
                    let next = pw[e - 1].mul(&lin);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = UniPoly::zero(k);
        for (m, c) in h.terms() {
            let c = hk.to_residue(c).expect("prime field residue");
            let mut t = UniPoly::constant(k, c);
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[j][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn point_at(&self, k: PrimeField, t: u64) -> Vec<u64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| k.add_raw(a, k.mul_raw(t, b)))
            .collect()
    }
}

fn line_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn prime_field_of<F: Field>(k: &F) -> Result<PrimeField> {
    PrimeField::new(k.modulus().ok_or(Error::RationalModeUnsupported)?)
}

/// Rational points on the hypersurface `h = 0`, found as roots of `h` along
/// `budget` random lines. Deterministic for a given seed; duplicates are
/// removed and the first-found order is kept.
pub fn sample_hypersurface_points<F: Field>(
    h: &MvPoly<F>,
    budget: usize,
    seed: u64,
) -> Result<Vec<ProjectivePoint<F>>> {
    let hk = h.field();
    let k = prime_field_of(hk)?;
    if h.is_constant() {
        return Ok(Vec::new());
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in 0..budget {
        let mut rng = line_rng(seed, i);
        let line = Line::random(k, h.nvars(), &mut rng);
        let u = line.restrict(k, h);
        if u.is_zero() {
            continue;
        }
        for r in u.roots(rng.gen()) {
            let coords = line.point_at(k, r).into_iter().map(|c| hk.from_u64(c)).collect();
            let pt = ProjectivePoint::new(hk, coords)?;
            if seen.insert(pt.clone()) {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Knobs for [`discover_fibers`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscoveryOptions {
    /// Number of random lines.
    pub budget: usize,
    pub seed: u64,
    /// Largest degree of closed points examined on each line.
    pub max_closed_degree: usize,
}

impl Default for DiscoveryOptions {
    fn default() -> Self {
        DiscoveryOptions { budget: 200, seed: 42, max_closed_degree: 4 }
    }
}

/// Records found by [`discover_fibers`] together with sampling counters.
#[derive(Clone, Debug)]
pub struct DiscoveryResult<F: Field> {
    /// Sorted by target point.
    pub records: Vec<FiberRecord<F>>,
    pub lines: usize,
    /// Closed points of `Z(F)` examined.
    pub points_sampled: usize,
    /// Samples on the base locus, where the map is undefined.
    pub base_locus_skipped: usize,
    /// Samples whose image is not a rational point.
    pub nonrational_images: usize,
    /// `sum deg(radical(h_y))` over the records.
    pub radical_degree_found: u32,
    /// `deg(radical(F))`.
    pub radical_degree_of_gcd: u32,
}

/// Image of a closed point `q(t) = 0` of a line, when it is rational.
enum ClosedImage {
    BaseLocus,
    NotRational,
    Point(Vec<u64>),
}

fn closed_image(restricted: &[UniPoly], q: &UniPoly) -> ClosedImage {
    let vals: Vec<UniPoly> = restricted.iter().map(|f| f.rem(q)).collect();
    let Some(pivot) = vals.iter().find(|v| !v.is_zero()) else {
        return ClosedImage::BaseLocus;
    };
    let inv = pivot.inverse_mod(q).expect("residue ring of an irreducible is a field");
    let mut coords = Vec::with_capacity(vals.len());
    for v in &vals {
        match v.mul_mod(&inv, q).as_constant() {
            Some(c) => coords.push(c),
            None => return ClosedImage::NotRational,
        }
    }
    ClosedImage::Point(coords)
}

/// Finds fibers with a divisorial part by sampling closed points on `Z(F)`
/// and computing the fiber equation of each rational image.
pub fn discover_fibers<F: Field>(
    input: &RationalMapInput<F>,
    gcd: &MvPoly<F>,
    opts: &DiscoveryOptions,
) -> Result<DiscoveryResult<F>> {
    let fk = input.field();
    let k = prime_field_of(fk)?;
    let mut result = DiscoveryResult {
        records: Vec::new(),
        lines: opts.budget,
        points_sampled: 0,
        base_locus_skipped: 0,
        nonrational_images: 0,
        radical_degree_found: 0,
        radical_degree_of_gcd: 0,
    };
    if gcd.is_constant() {
        return Ok(result);
    }
    let radical = squarefree_decompose(gcd)?.radical(fk, input.nvars());
    result.radical_degree_of_gcd = radical.degree();

    let mut visited: BTreeMap<ProjectivePoint<F>, Option<FiberRecord<F>>> = BTreeMap::new();
    for i in 0..opts.budget {
        let mut rng = line_rng(opts.seed, i);
        let line = Line::random(k, input.nvars(), &mut rng);
        let u = line.restrict(k, &radical);
        if u.degree().unwrap_or(0) == 0 {
            continue;
        }
        let restricted: Vec<UniPoly> = input.forms().iter().map(|f| line.restrict(k, f)).collect();
        for q in u.low_degree_factors(opts.max_closed_degree, rng.gen()) {
            result.points_sampled += 1;
            let coords = match closed_image(&restricted, &q) {
                ClosedImage::BaseLocus => {
                    result.base_locus_skipped += 1;
                    continue;
                }
                ClosedImage::NotRational => {
                    result.nonrational_images += 1;
                    continue;
                }
                ClosedImage::Point(c) => c,
            };
            let y = ProjectivePoint::new(fk, coords.into_iter().map(|c| fk.from_u64(c)).collect())?;
            if visited.contains_key(&y) {
                continue;
            }
            let h = fiber_equation(input, &y)?;
            let record = if h.is_constant() { None } else { Some(FiberRecord::new(y.clone(), h)?) };
            visited.insert(y, record);
        }
    }
    result.records = visited.into_values().flatten().collect();
    result.radical_degree_found = result.records.iter().map(|r| r.radical().degree()).sum();
    Ok(result)
}

/// Counts closed points of `Z(h)` on random lines whose image is `y` versus
/// a different point, skipping base points. Used to confirm that a record
/// describes a contracted hypersurface.
pub fn check_contracted<F: Field>(
    input: &RationalMapInput<F>,
    record: &FiberRecord<F>,
    wanted: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let fk = input.field();
    let k = prime_field_of(fk)?;
    let radical = record.radical();
    let target: Vec<u64> = record
        .y
        .coords()
        .iter()
        .map(|c| fk.to_residue(c).expect("prime field residue"))
        .collect();
    let (mut hits, mut misses) = (0, 0);
    for i in 0..wanted.max(1) * 50 {
        if hits + misses >= wanted {
            break;
        }
        let mut rng = line_rng(seed, i);
        let line = Line::random(k, input.nvars(), &mut rng);
        let u = line.restrict(k, &radical);
        if u.degree().unwrap_or(0) == 0 {
            continue;
        }
        let restricted: Vec<UniPoly> = input.forms().iter().map(|f| line.restrict(k, f)).collect();
        for q in u.low_degree_factors(2, rng.gen()) {
            match closed_image(&restricted, &q) {
                ClosedImage::BaseLocus => {}
                ClosedImage::Point(c) if c == target => hits += 1,
                _ => misses += 1,
            }
        }
    }
    Ok((hits, misses))
}

/// The degree chain `sum deg h_y <= sum weighted <= deg F <= 3(d - 1)` for
/// a set of fiber records, with the syzygy refinement when available.
#[derive(Clone, Debug)]
pub struct BoundChainReport<F: Field> {
    pub fibers: Vec<FiberRecord<F>>,
    pub sum_deg: u32,
    pub sum_weighted: u32,
    pub deg_gcd: u32,
    /// `3(d - 1)`.
    pub outer: u32,
    /// `sum_deg <= sum_weighted <= deg_gcd <= outer`.
    pub chain_ok: bool,
    /// `prod P_e^(2e - 1)` over all records divides `F`.
    pub witness_divides: bool,
    /// `3(d - 1) - indeg(Syz(I))`.
    pub refined_bound: Option<u32>,
}

impl<F: Field> BoundChainReport<F> {
    /// `sum_deg <= refined` and `deg_gcd <= refined`, when a refinement is
    /// attached.
    pub fn refined_ok(&self) -> Option<bool> {
        self.refined_bound
            .map(|r| self.sum_deg <= r && self.deg_gcd <= r)
    }

    /// Every check holds.
    pub fn all_ok(&self) -> bool {
        self.chain_ok && self.witness_divides && self.refined_ok().unwrap_or(true)
    }

    /// [`Error::ChainViolation`] naming the first failed inequality.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ChainViolation(msg));
        if self.sum_deg > self.sum_weighted {
            return fail(format!("sum deg h_y = {} > weighted sum {}", self.sum_deg, self.sum_weighted));
        }
        if self.sum_weighted > self.deg_gcd {
            return fail(format!("weighted sum {} > deg F = {}", self.sum_weighted, self.deg_gcd));
        }
        if self.deg_gcd > self.outer {
            return fail(format!("deg F = {} > 3(d-1) = {}", self.deg_gcd, self.outer));
        }
        if !self.witness_divides {
            return fail("prod P_e^(2e-1) does not divide F".into());
        }
        if let Some(r) = self.refined_bound {
            if self.deg_gcd > r {
                return fail(format!("deg F = {} > 3(d-1) - indeg = {}", self.deg_gcd, r));
            }
            if self.sum_deg > r {
                return fail(format!("sum deg h_y = {} > 3(d-1) - indeg = {}", self.sum_deg, r));
            }
        }
        Ok(())
    }
}

pub fn verify_bound_chain<F: Field>(
    input: &RationalMapInput<F>,
    fibers: &[FiberRecord<F>],
    gcd: &MvPoly<F>,
    indeg: Option<u32>,
) -> BoundChainReport<F> {
    let k = input.field();
    let nv = input.nvars();
    let sum_deg = fibers.iter().map(|r| r.deg_h).sum();
    let sum_weighted = fibers.iter().map(|r| r.weighted_deg).sum();
    let outer = input.outer_bound();
    let deg_gcd = gcd.degree();
    let witness = fibers
        .iter()
        .fold(MvPoly::one(k, nv), |acc, r| &acc * &r.sqfree.weighted_product(k, nv));
    BoundChainReport {
        fibers: fibers.to_vec(),
        sum_deg,
        sum_weighted,
        deg_gcd,
        outer,
        chain_ok: sum_deg <= sum_weighted && sum_weighted <= deg_gcd && deg_gcd <= outer,
        witness_divides: !gcd.is_zero() && gcd.is_divisible_by(&witness),
        refined_bound: indeg.map(|i| outer.saturating_sub(i)),
    }
}

/// Ranks of `J(q)` and of the differential of the map at `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub rank_j: usize,
    pub rank_dphi: usize,
    /// `rank_j == rank_dphi + 1`.
    pub consistent: bool,
}

/// Compares `rank J(q)` with the rank of the affine Jacobian of
/// `g_i = f_i / f_b` in the chart `X_a = 1`, where `a` and `b` are the
/// first indices with `q_a != 0` and `f_b(q) != 0`. The latter matrix is
/// assembled with the quotient rule
/// `dg_i/dX_j = (df_i/dX_j * f_b - f_i * df_b/dX_j) / f_b^2`.
pub fn tangent_rank_check<F: Field>(input: &RationalMapInput<F>, q: &[F::Scalar]) -> Result<RankCheck> {
    let k = input.field();
    if q.len() != input.nvars() {
        return Err(Error::BadPoint { expected: input.nvars(), found: q.len() });
    }
    if k.char_divides(input.d() as u64) {
        return Err(Error::CharDividesDegree { p: k.characteristic(), d: input.d() });
    }
    let a = q
        .iter()
        .position(|c| !k.is_zero(c))
        .ok_or_else(|| Error::InvalidInput("the zero vector is not a point".into()))?;
    let scale = k.inv(&q[a]);
    let q: Vec<F::Scalar> = q.iter().map(|c| k.mul(c, &scale)).collect();
    let values = input.evaluate(&q);
    let b = values.iter().position(|v| !k.is_zero(v)).ok_or(Error::BasePointError)?;

    let jac = build_jacobian(input);
    let jq = jacobian_at(&jac, k, &q);
    let rank_j = jq.rank();

    let fb = &values[b];
    let fb2_inv = k.inv(&k.mul(fb, fb));
    let rows: Vec<Vec<F::Scalar>> = (0..values.len())
        .filter(|&i| i != b)
        .map(|i| {
            (0..input.nvars())
                .filter(|&j| j != a)
                .map(|j| {
                    let num = k.sub(&k.mul(jq.get(i, j), fb), &k.mul(&values[i], jq.get(b, j)));
                    k.mul(&num, &fb2_inv)
                })
                .collect()
        })
        .collect();
    let rank_dphi = Matrix::from_rows(k, rows).rank();
    Ok(RankCheck { rank_j, rank_dphi, consistent: rank_j == rank_dphi + 1 })
}

/// The radical of `h` divides every nonzero 3-minor.
pub fn minor_vanishing_check<F: Field>(minors3: &[Minor<F>], h: &MvPoly<F>) -> Result<bool> {
    if h.is_constant() {
        return Ok(true);
    }
    let radical = squarefree_decompose(h)?.radical(h.field(), h.nvars());
    Ok(minors3
        .iter()
        .filter(|m| !m.value.is_zero())
        .all(|m| m.value.is_divisible_by(&radical)))
}
