//! Built-in fixtures with pinned expectations, plus invariant checks that
//! run on each of them.

use std::fmt::Write as _;
use std::path::Path;

use jacfiber_core::fibers::check_contracted;
use jacfiber_core::jacobian::random_invertible;
use jacfiber_core::{
    discover_fibers, fiber_equation_with_pivot, fitting_invariance_check, gcd_many, minor_vanishing_check,
    tangent_rank_check, DiscoveryOptions, Field, JacobianReport, PrimeField, RationalMapInput,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{analyze, AnalysisReport, AnalyzeOptions};
use crate::mapfile::{parse_map_file, MapInput};

/// Pinned values; `None` leaves a quantity unchecked.
#[derive(Clone, Copy, Debug)]
pub struct Expect {
    pub deg_f: u32,
    pub indeg: Option<u32>,
    pub sum_deg: Option<u32>,
    pub sum_weighted: Option<u32>,
    pub refined: Option<u32>,
    pub dependent: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub expect: Expect,
}

const fn family(name: &'static str, text: &'static str, d: u32) -> Fixture {
    Fixture {
        name,
        text,
        expect: Expect {
            deg_f: 2 * (d - 1),
            indeg: None,
            sum_deg: Some(d + 2),
            sum_weighted: Some(2 * (d - 1)),
            refined: None,
            dependent: false,
        },
    }
}

pub const FIXTURES: [Fixture; 6] = [
    family("family_d4", include_str!("../../../maps/family_d4.map"), 4),
    family("family_d5", include_str!("../../../maps/family_d5.map"), 5),
    family("family_d6", include_str!("../../../maps/family_d6.map"), 6),
    family("family_d7", include_str!("../../../maps/family_d7.map"), 7),
    Fixture {
        name: "sextic",
        text: include_str!("../../../maps/sextic.map"),
        expect: Expect {
            deg_f: 11,
            indeg: Some(2),
            sum_deg: Some(8),
            sum_weighted: Some(9),
            refined: Some(13),
            dependent: false,
        },
    },
    Fixture {
        name: "cubes",
        text: include_str!("../../../maps/cubes.map"),
        expect: Expect {
            deg_f: 6,
            indeg: Some(0),
            sum_deg: None,
            sum_weighted: None,
            refined: Some(6),
            dependent: true,
        },
    },
];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

fn check(name: &str, expected: impl ToString, found: impl ToString) -> Check {
    let (expected, found) = (expected.to_string(), found.to_string());
    Check { name: name.to_string(), ok: expected == found, expected, found }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FixtureResult {
    pub name: String,
    #[serde(rename = "degF")]
    pub deg_f: Option<u32>,
    pub indeg_syz: Option<u32>,
    pub sum_deg: Option<u32>,
    pub sum_weighted: Option<u32>,
    pub outer_bound: Option<u32>,
    pub refined_bound: Option<u32>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub fixtures: Vec<FixtureResult>,
    pub passed: bool,
}

/// Runs every fixture. With `dir`, fixture texts are read from
/// `dir/<name>.map` instead of the built-in copies.
pub fn run_selftest(dir: Option<&Path>) -> SelftestReport {
    let fixtures: Vec<FixtureResult> = FIXTURES
        .iter()
        .map(|fx| {
            let text = match dir {
                Some(d) => std::fs::read_to_string(d.join(format!("{}.map", fx.name))),
                None => Ok(fx.text.to_string()),
            };
            match text {
                Ok(t) => run_fixture(fx, &t),
                Err(e) => failed_load(fx.name, &format!("cannot read fixture: {e}")),
            }
        })
        .collect();
    let passed = fixtures.iter().all(|f| f.passed);
    SelftestReport { fixtures, passed }
}

fn failed_load(name: &str, why: &str) -> FixtureResult {
    FixtureResult {
        name: name.to_string(),
        deg_f: None,
        indeg_syz: None,
        sum_deg: None,
        sum_weighted: None,
        outer_bound: None,
        refined_bound: None,
        passed: false,
        checks: vec![Check { name: "load".into(), expected: "valid map".into(), found: why.into(), ok: false }],
    }
}

fn run_fixture(fx: &Fixture, text: &str) -> FixtureResult {
    let (file, input) = match parse_map_file(text) {
        Ok(v) => v,
        Err(e) => return failed_load(fx.name, &format!("{e:#}")),
    };
    let report = match analyze(&file, &input, &AnalyzeOptions::default()) {
        Ok(r) => r,
        Err(e) => return failed_load(fx.name, &format!("{e:#}")),
    };
    let mut checks = pinned_checks(&fx.expect, &report);
    checks.extend(chain_checks(&report));
    if let MapInput::Prime(i) = &input {
        checks.extend(invariant_checks(i));
    }
    FixtureResult {
        name: fx.name.to_string(),
        deg_f: Some(report.deg_f),
        indeg_syz: report.indeg_syz,
        sum_deg: Some(report.sum_deg),
        sum_weighted: Some(report.sum_weighted),
        outer_bound: Some(report.outer_bound),
        refined_bound: report.refined_bound,
        passed: checks.iter().all(|c| c.ok),
        checks,
    }
}

fn opt(v: Option<u32>) -> String {
    v.map_or("none".into(), |x| x.to_string())
}

fn pinned_checks(e: &Expect, r: &AnalysisReport) -> Vec<Check> {
    let mut out = vec![check("degF", e.deg_f, r.deg_f), check("linearly dependent", e.dependent, r.linearly_dependent)];
    if e.indeg.is_some() {
        out.push(check("indegSyz", opt(e.indeg), opt(r.indeg_syz)));
    }
    if let Some(v) = e.sum_deg {
        out.push(check("sumDeg", v, r.sum_deg));
    }
    if let Some(v) = e.sum_weighted {
        out.push(check("sumWeighted", v, r.sum_weighted));
    }
    if e.refined.is_some() {
        out.push(check("refinedBound", opt(e.refined), opt(r.refined_bound)));
    }
    out
}

fn chain_checks(r: &AnalysisReport) -> Vec<Check> {
    let mut out = vec![
        check("sumDeg <= sumWeighted", true, r.sum_deg <= r.sum_weighted),
        check("sumWeighted <= degF", true, r.sum_weighted <= r.deg_f),
        check("degF <= 3(d-1)", true, r.deg_f <= r.outer_bound),
        check("prod P_e^(2e-1) divides F", true, r.witness_divides),
    ];
    if r.m == 2 && r.n == 3 {
        out.push(check("degF = 3(d-1) iff dependent", r.linearly_dependent, r.deg_f == r.outer_bound));
    }
    if let Some(b) = r.refined_bound {
        out.push(check("degF <= 3(d-1) - indeg", true, r.deg_f <= b));
        out.push(check("sumDeg <= 3(d-1) - indeg", true, r.sum_deg <= b));
    }
    if let Some(i) = r.indeg_syz {
        out.push(check("indeg = 0 iff dependent", r.linearly_dependent, i == 0));
    }
    if let Some(e) = &r.euler_syzygy {
        out.push(check("Euler syzygy identity", true, e.identity_holds));
        out.push(check("Euler syzygy degree", r.outer_bound - r.deg_f, e.delta));
        if let Some(i) = r.indeg_syz {
            out.push(check("indeg <= Euler syzygy degree", true, i <= e.delta));
        }
    }
    out
}

/// Properties that hold for every map: fiber equations do not depend on the
/// pivot, records are coprime and genuinely contracted, their equations
/// divide every 3-minor, `F` is basis invariant and the rank formula holds
/// at random points.
fn invariant_checks(input: &RationalMapInput<PrimeField>) -> Vec<Check> {
    let k = input.field();
    let mut out = Vec::new();
    let Ok(jac) = JacobianReport::compute(input, 0) else {
        return out;
    };
    let Ok(found) = discover_fibers(input, &jac.gcd, &DiscoveryOptions::default()) else {
        return out;
    };
    let recs = &found.records;

    let pivot_ok = recs.iter().all(|r| {
        let c = r.y.coords();
        (0..c.len())
            .filter(|&i| c[i] != 0)
            .all(|i| fiber_equation_with_pivot(input, &r.y, i).is_ok_and(|h| h == r.h))
    });
    out.push(check("fiber equation independent of pivot", true, pivot_ok));

    let coprime = recs
        .iter()
        .enumerate()
        .all(|(i, a)| recs[i + 1..].iter().all(|b| gcd_many(k, input.nvars(), [&a.h, &b.h]).is_one()));
    out.push(check("records pairwise coprime", true, coprime));

    let divides = recs.iter().all(|r| jac.gcd.is_divisible_by(&r.radical()));
    out.push(check("rad(h_y) divides F", true, divides));

    let contracted = recs
        .iter()
        .enumerate()
        .all(|(i, r)| check_contracted(input, r, 3, i as u64).is_ok_and(|(hits, misses)| hits >= 3 && misses == 0));
    out.push(check("divisors contracted to y", true, contracted));

    let vanish = recs.iter().all(|r| minor_vanishing_check(&jac.minors3, &r.h).unwrap_or(false));
    out.push(check("h_y divides every 3-minor", true, vanish));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = input.forms().len();
    let invariant = (0..3).all(|i| {
        let change = random_invertible(k, n, &mut rng);
        fitting_invariance_check(input, &change, i).unwrap_or(false)
    });
    out.push(check("F invariant under change of basis", true, invariant));

    let mut tested = 0;
    let mut consistent = 0;
    for _ in 0..200 {
        if tested == 20 {
            break;
        }
        let q: Vec<u64> = (0..input.nvars()).map(|_| k.random(&mut rng)).collect();
        if let Ok(r) = tangent_rank_check(input, &q) {
            tested += 1;
            consistent += usize::from(r.consistent);
        }
    }
    out.push(check("rank J(q) = rank dphi + 1", format!("{tested}/{tested}"), format!("{consistent}/{tested}")));
    out
}

pub fn render_table(r: &SelftestReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>5} {:>6} {:>7} {:>9} {:>6} {:>8}  status",
        "fixture", "degF", "indeg", "sumDeg", "weighted", "outer", "refined"
    );
    let cell = |v: Option<u32>| v.map_or("-".to_string(), |x| x.to_string());
    for f in &r.fixtures {
        let _ = writeln!(
            s,
            "{:<10} {:>5} {:>6} {:>7} {:>9} {:>6} {:>8}  {}",
            f.name,
            cell(f.deg_f),
            cell(f.indeg_syz),
            cell(f.sum_deg),
            cell(f.sum_weighted),
            cell(f.outer_bound),
            cell(f.refined_bound),
            if f.passed { "ok" } else { "FAILED" }
        );
    }
    for f in &r.fixtures {
        for c in f.checks.iter().filter(|c| !c.ok) {
            let _ = writeln!(s, "FAILED {}: {} (expected {}, found {})", f.name, c.name, c.expected, c.found);
        }
    }
    let total: usize = r.fixtures.iter().map(|f| f.checks.len()).sum();
    let failed: usize = r.fixtures.iter().map(|f| f.checks.iter().filter(|c| !c.ok).count()).sum();
    let _ = writeln!(s, "{} checks, {} failed", total, failed);
    s
}
