//! The analysis pipeline: Jacobian minors and their gcd, syzygies, fiber
//! discovery and the degree chain, collected into a serializable report.

use std::fmt::Write as _;

use jacfiber_core::{
    discover_fibers, euler_syzygy, indeg_syzygy, linear_dependence_check, verify_bound_chain, DiscoveryOptions,
    Error, Field, FiberRecord, JacobianReport, MvPoly, RationalMapInput, SECOND_PRIME,
};
use serde::Serialize;

use crate::mapfile::{FieldSpec, MapFile, MapInput};

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub budget: usize,
    pub second_prime: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        let d = DiscoveryOptions::default();
        AnalyzeOptions { seed: d.seed, budget: d.budget, second_prime: false }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SqfreePart {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiberSummary {
    pub y: String,
    pub h: String,
    pub deg: u32,
    pub weighted_deg: u32,
    pub parts: Vec<SqfreePart>,
}

impl FiberSummary {
    pub fn new<F: Field>(input: &RationalMapInput<F>, rec: &FiberRecord<F>) -> Self {
        let names = input.names();
        FiberSummary {
            y: rec.y.display(input.field()),
            h: rec.h.display_with(names).to_string(),
            deg: rec.deg_h,
            weighted_deg: rec.weighted_deg,
            parts: rec
                .sqfree
                .parts
                .iter()
                .map(|(p, e)| SqfreePart { factor: p.display_with(names).to_string(), multiplicity: *e })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EulerSummary {
    pub delta: u32,
    pub identity_holds: bool,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscoverySummary {
    pub lines: usize,
    pub points_sampled: usize,
    pub base_locus_skipped: usize,
    pub nonrational_images: usize,
    pub radical_degree_found: u32,
    pub radical_degree_of_f: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SecondPrimeSummary {
    pub prime: u64,
    #[serde(rename = "degF")]
    pub deg_f: u32,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub field: String,
    pub m: usize,
    pub n: usize,
    pub d: u32,
    pub forms: Vec<String>,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "degF")]
    pub deg_f: u32,
    pub nonzero_minors: usize,
    pub i3_nonzero: bool,
    pub i_top_nonzero: bool,
    pub linearly_dependent: bool,
    pub dependence_relation: Option<Vec<String>>,
    pub indeg_syz: Option<u32>,
    pub indeg_searched_up_to: u32,
    pub euler_syzygy: Option<EulerSummary>,
    pub sum_deg: u32,
    pub sum_weighted: u32,
    pub outer_bound: u32,
    pub refined_bound: Option<u32>,
    pub chain_ok: bool,
    pub witness_divides: bool,
    pub refined_ok: Option<bool>,
    pub fibers: Vec<FiberSummary>,
    pub discovery: Option<DiscoverySummary>,
    pub second_prime: Option<SecondPrimeSummary>,
    pub warnings: Vec<String>,
    pub violation: Option<String>,
    pub seed: u64,
    pub budget: usize,
}

impl AnalysisReport {
    /// Every inequality and divisibility check holds.
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn analyze(file: &MapFile, input: &MapInput, opts: &AnalyzeOptions) -> anyhow::Result<AnalysisReport> {
    let mut report = match input {
        MapInput::Prime(i) => analyze_input(i, file.field, opts)?,
        MapInput::Rational(i) => analyze_input(i, file.field, opts)?,
    };
    if opts.second_prime {
        let check = file.prime_input(SECOND_PRIME)?;
        let deg = JacobianReport::compute(&check, opts.seed)?.deg_gcd;
        let agrees = deg == report.deg_f;
        if !agrees {
            report.warnings.push(format!(
                "deg F = {} over {} but {} modulo {}; the first prime may be unlucky",
                report.deg_f, report.field, deg, SECOND_PRIME
            ));
        }
        report.second_prime = Some(SecondPrimeSummary { prime: SECOND_PRIME, deg_f: deg, agrees });
    }
    Ok(report)
}

pub fn analyze_input<F: Field>(
    input: &RationalMapInput<F>,
    field: FieldSpec,
    opts: &AnalyzeOptions,
) -> anyhow::Result<AnalysisReport> {
    let k = input.field();
    let names = input.names();
    let show = |p: &MvPoly<F>| p.display_with(names).to_string();
    let mut warnings = Vec::new();

    let jac = JacobianReport::compute(input, opts.seed)?;
    let dep = linear_dependence_check(input);
    if dep.dependent {
        warnings.push("generators linearly dependent".to_string());
    }
    let indeg = indeg_syzygy(input, input.d());
    let euler = if input.m() == 2 && input.n() == 3 {
        let e = euler_syzygy(input, &jac.gcd)?;
        Some(EulerSummary {
            delta: e.delta,
            identity_holds: e.identity_holds,
            coefficients: e.coefficients.iter().map(show).collect(),
        })
    } else {
        None
    };

    let (records, discovery) = if k.modulus().is_some() {
        let found = discover_fibers(
            input,
            &jac.gcd,
            &DiscoveryOptions { budget: opts.budget, seed: opts.seed, ..DiscoveryOptions::default() },
        )?;
        if found.base_locus_skipped > 0 {
            warnings.push(format!("{} sampled points lay on the base locus", found.base_locus_skipped));
        }
        if found.radical_degree_found < found.radical_degree_of_gcd {
            warnings.push(format!(
                "coverage: fibers account for degree {} of the {} in the square-free part of F",
                found.radical_degree_found, found.radical_degree_of_gcd
            ));
        }
        let summary = DiscoverySummary {
            lines: found.lines,
            points_sampled: found.points_sampled,
            base_locus_skipped: found.base_locus_skipped,
            nonrational_images: found.nonrational_images,
            radical_degree_found: found.radical_degree_found,
            radical_degree_of_f: found.radical_degree_of_gcd,
        };
        (found.records, Some(summary))
    } else {
        warnings.push("fiber discovery needs a prime field; skipped over Q".to_string());
        (Vec::new(), None)
    };

    // the refinement by indeg(Syz) is stated for surface maps only
    let surface = input.m() == 2 && input.n() == 3;
    let chain = verify_bound_chain(input, &records, &jac.gcd, indeg.indeg.filter(|_| surface));
    let violation = match chain.check() {
        Ok(()) => None,
        Err(Error::ChainViolation(msg)) => Some(msg),
        Err(e) => return Err(e.into()),
    };
    let euler_fails = euler.as_ref().is_some_and(|e| !e.identity_holds);
    let violation = violation.or_else(|| euler_fails.then(|| "Euler syzygy identity fails".to_string()));

    Ok(AnalysisReport {
        field: field.to_string(),
        m: input.m(),
        n: input.n(),
        d: input.d(),
        forms: input.forms().iter().map(show).collect(),
        f: show(&jac.gcd),
        deg_f: jac.deg_gcd,
        nonzero_minors: jac.minors3.len(),
        i3_nonzero: jac.i3_nonzero,
        i_top_nonzero: jac.i_top_nonzero,
        linearly_dependent: dep.dependent,
        dependence_relation: dep.relation.map(|r| r.iter().map(|c| scalar_string(k, c)).collect()),
        indeg_syz: indeg.indeg,
        indeg_searched_up_to: indeg.searched_up_to,
        euler_syzygy: euler,
        sum_deg: chain.sum_deg,
        sum_weighted: chain.sum_weighted,
        outer_bound: chain.outer,
        refined_bound: chain.refined_bound,
        chain_ok: chain.chain_ok,
        witness_divides: chain.witness_divides,
        refined_ok: chain.refined_ok(),
        fibers: records.iter().map(|r| FiberSummary::new(input, r)).collect(),
        discovery,
        second_prime: None,
        warnings,
        violation,
        seed: opts.seed,
        budget: opts.budget,
    })
}

pub fn scalar_string<F: Field>(k: &F, c: &F::Scalar) -> String {
    struct S<'a, F: Field>(&'a F, &'a F::Scalar);
    impl<F: Field> std::fmt::Display for S<'_, F> {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            self.0.fmt_scalar(self.1, f)
        }
    }
    S(k, c).to_string()
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "VIOLATED"
    }
}

/// Human-readable report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "map P^{} --> P^{} of degree {} over {}", r.m, r.n, r.d, r.field);
    for (i, f) in r.forms.iter().enumerate() {
        let _ = writeln!(s, "  f{i} = {f}");
    }
    let _ = writeln!(s, "F = {}", r.f);
    let _ = writeln!(s, "deg F = {} (gcd of {} nonzero 3-minors)", r.deg_f, r.nonzero_minors);
    let _ = writeln!(s, "I_(m+1)(J) nonzero: {}", r.i_top_nonzero);
    match &r.dependence_relation {
        Some(rel) => {
            let _ = writeln!(s, "forms linearly dependent: relation ({})", rel.join(", "));
        }
        None => {
            let _ = writeln!(s, "forms linearly independent");
        }
    }
    match r.indeg_syz {
        Some(v) => {
            let _ = writeln!(s, "indeg Syz(I) = {v}");
        }
        None => {
            let _ = writeln!(s, "indeg Syz(I) > {}", r.indeg_searched_up_to);
        }
    }
    if let Some(e) = &r.euler_syzygy {
        let _ = writeln!(
            s,
            "Euler syzygy: degree {}, sum a_i f_i = 0 {}",
            e.delta,
            if e.identity_holds { "holds" } else { "FAILS" }
        );
    }
    if let Some(disc) = &r.discovery {
        let _ = writeln!(
            s,
            "fibers (seed {}, {} lines, {} closed points examined):",
            r.seed, disc.lines, disc.points_sampled
        );
    }
    for fib in &r.fibers {
        let parts: Vec<String> = fib
            .parts
            .iter()
            .map(|p| if p.multiplicity == 1 { format!("({})", p.factor) } else { format!("({})^{}", p.factor, p.multiplicity) })
            .collect();
        let _ = writeln!(
            s,
            "  y = {}  h = {}  deg {}  weighted {}  [{}]",
            fib.y,
            fib.h,
            fib.deg,
            fib.weighted_deg,
            parts.join(" ")
        );
    }
    let _ = writeln!(
        s,
        "chain: sum deg h_y = {} <= weighted {} <= deg F = {} <= 3(d-1) = {}  {}",
        r.sum_deg,
        r.sum_weighted,
        r.deg_f,
        r.outer_bound,
        flag(r.chain_ok)
    );
    let _ = writeln!(s, "divisibility prod P_e^(2e-1) | F: {}", flag(r.witness_divides));
    if let (Some(b), Some(ok)) = (r.refined_bound, r.refined_ok) {
        let _ = writeln!(
            s,
            "refined: {} <= {} <= 3(d-1) - indeg = {} <= {}  {}",
            r.sum_deg,
            r.deg_f,
            b,
            r.outer_bound,
            flag(ok)
        );
    }
    if let Some(sp) = &r.second_prime {
        let _ = writeln!(s, "second prime {}: deg F = {} ({})", sp.prime, sp.deg_f, if sp.agrees { "agrees" } else { "differs" });
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    if let Some(v) = &r.violation {
        let _ = writeln!(s, "VIOLATION: {v}");
    }
    s
}
