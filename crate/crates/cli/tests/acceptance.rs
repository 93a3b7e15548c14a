//! End-to-end acceptance run. Prints one `PASS` or `FAIL` line per criterion
//! and exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;

use jacfiber_cli::analysis::{analyze, AnalyzeOptions};
use jacfiber_cli::mapfile::{parse_map_file, MapInput};
use jacfiber_core::poly::poly_from_ints;
use jacfiber_core::{
    euler_syzygy, gcd_multivariate, squarefree_decompose, tangent_rank_check, Field,
    JacobianReport, Monomial, MvPoly, PrimeField, RationalMapInput, DEFAULT_PRIME,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAPS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../maps");
const FIXTURES: [&str; 6] = ["family_d4", "family_d5", "family_d6", "family_d7", "sextic", "cubes"];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn k() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).unwrap()
}

fn load(name: &str) -> (jacfiber_cli::mapfile::MapFile, MapInput) {
    let text = std::fs::read_to_string(Path::new(MAPS).join(format!("{name}.map"))).unwrap();
    parse_map_file(&text).unwrap()
}

fn prime_input(input: &MapInput) -> &RationalMapInput<PrimeField> {
    match input {
        MapInput::Prime(i) => i,
        MapInput::Rational(_) => panic!("fixture is over Q"),
    }
}

/// Roots in `F_p` of `c2 t^2 + c1 t + c0` with degree 1 or 2. Square roots
/// use `x^((p + 1) / 4)`, valid since `p = 3 mod 4`.
fn small_roots(kk: &PrimeField, c2: u64, c1: u64, c0: u64) -> Vec<u64> {
    if c2 == 0 {
        return if c1 == 0 { vec![] } else { vec![kk.neg(&kk.div(&c0, &c1))] };
    }
    let disc = kk.sub(&kk.mul(&c1, &c1), &kk.mul(&kk.from_i64(4), &kk.mul(&c2, &c0)));
    let s = kk.pow(&disc, (kk.p() + 1) / 4);
    if kk.mul(&s, &s) != disc {
        return vec![];
    }
    let two_a = kk.inv(&kk.mul(&kk.from_i64(2), &c2));
    vec![kk.mul(&kk.sub(&s, &c1), &two_a), kk.mul(&kk.neg(&kk.add(&s, &c1)), &two_a)]
}

/// Checks that `h` is contracted to `y`. Points of `h = 0` are found by
/// fixing two coordinates at random and solving for the third when `h` has
/// degree at most 2 in it. Their images must all equal `y`. When `h = 0` has
/// no such rational points, every `y_b f_i - y_i f_b` must vanish modulo `h`.
fn contracted_to(input: &RationalMapInput<PrimeField>, h: &MvPoly<PrimeField>, y: &[u64], seed: u64) -> bool {
    let kk = input.field();
    let b = y.iter().position(|v| *v != 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    for _ in 0..100 {
        if hits >= 6 {
            break;
        }
        let (a0, a1) = (kk.random(&mut rng), kk.random(&mut rng));
        for var in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&v| v != var).collect();
            let restricted = h.eval_var(others[0], &a0).eval_var(others[1], &a1);
            if restricted.degree() == 0 || restricted.degree() > 2 {
                continue;
            }
            let coeff = |e: u32| {
                let mut m = [0u32; 3];
                m[var] = e;
                restricted.coeff(&Monomial::new(&m[..]))
            };
            for root in small_roots(kk, coeff(2), coeff(1), coeff(0)) {
                let mut q = [0u64; 3];
                q[var] = root;
                q[others[0]] = a0;
                q[others[1]] = a1;
                let vals: Vec<u64> = input.forms().iter().map(|f| f.evaluate(&q)).collect();
                if vals.iter().all(|v| *v == 0) {
                    continue;
                }
                // the image equals y iff every 2x2 minor of (vals, y) vanishes
                let same = (0..y.len()).all(|i| kk.mul(&vals[i], &y[b]) == kk.mul(&vals[b], &y[i]));
                if !same {
                    return false;
                }
                hits += 1;
            }
            break;
        }
    }
    if hits > 0 {
        return true;
    }
    input.forms().iter().zip(y).all(|(f, yi)| {
        let g = &input.forms()[b].scale(yi) - &f.scale(&y[b]);
        g.is_divisible_by(h)
    })
}

fn criterion_1() -> Outcome {
    let (file, input) = load("sextic");
    let i = prime_input(&input);
    let kk = k();
    let x = |j: usize| MvPoly::var(&kk, 3, j);
    let x4 = poly_from_ints(&kk, 3, &[(1, &[4, 0, 0]), (-1, &[0, 0, 4])]);
    let q = poly_from_ints(&kk, 3, &[(1, &[0, 2, 0]), (-1, &[0, 0, 2])]);
    let expected = &(&(&(&x(0) * &x(1).pow(3)) * &x(2)) * &x4) * &q;
    let rep = JacobianReport::compute(i, 42).map_err(|e| e.to_string())?;
    ensure(rep.gcd.equals_up_to_scalar(&expected), || format!("F = {}", rep.gcd))?;
    let r = analyze(&file, &input, &AnalyzeOptions::default()).map_err(|e| format!("{e:#}"))?;
    let got = (r.deg_f, r.indeg_syz, r.sum_deg, r.refined_bound, r.outer_bound);
    ensure(got == (11, Some(2), 8, Some(13), 15), || format!("(degF, indeg, sumDeg, refined, outer) = {got:?}"))?;
    ensure(r.chain_ok && r.refined_ok == Some(true), || "chain reported as violated".into())?;
    for (n, fib) in r.fibers.iter().enumerate() {
        let y = parse_y(&kk, &fib.y);
        let h = jacfiber_core::fiber_equation(i, &jacfiber_core::ProjectivePoint::new(&kk, y.clone()).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(contracted_to(i, &h, &y, n as u64), || format!("{} is not contracted", fib.h))?;
    }
    Ok(format!("F of degree {}, 8 <= 11 <= 13 <= 15", r.deg_f))
}

/// Reads back a target point printed as `(a:b:c:d)`.
fn parse_y(kk: &PrimeField, s: &str) -> Vec<u64> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(':')
        .map(|t| kk.from_i64(t.parse::<i64>().unwrap()))
        .collect()
}

fn criterion_2() -> Outcome {
    let kk = k();
    for d in 4..=7u32 {
        let (file, input) = load(&format!("family_d{d}"));
        let r = analyze(&file, &input, &AnalyzeOptions::default()).map_err(|e| format!("{e:#}"))?;
        let got = (r.deg_f, r.sum_deg, r.sum_weighted);
        ensure(got == (2 * (d - 1), d + 2, 2 * (d - 1)), || format!("d = {d}: (degF, sumDeg, weighted) = {got:?}"))?;
        let i = prime_input(&input);
        for (n, fib) in r.fibers.iter().enumerate() {
            let y = parse_y(&kk, &fib.y);
            let point = jacfiber_core::ProjectivePoint::new(&kk, y.clone()).unwrap();
            let h = jacfiber_core::fiber_equation(i, &point).map_err(|e| e.to_string())?;
            ensure(contracted_to(i, &h, &y, n as u64), || format!("d = {d}: {} is not contracted", fib.h))?;
        }
        if d == 4 {
            ensure(r.deg_f == 6 && r.sum_deg == 6 && r.sum_weighted == 6, || "d = 4 values do not coincide".into())?;
        }
    }
    Ok("d = 4..7 match 2(d-1), d+2, 2(d-1)".into())
}

fn criterion_3() -> Outcome {
    let (file, input) = load("cubes");
    let r = analyze(&file, &input, &AnalyzeOptions::default()).map_err(|e| format!("{e:#}"))?;
    ensure(r.linearly_dependent, || "cubes not reported dependent".into())?;
    ensure(r.deg_f == 6 && r.outer_bound == 6 && r.indeg_syz == Some(0), || {
        format!("cubes: degF {}, outer {}, indeg {:?}", r.deg_f, r.outer_bound, r.indeg_syz)
    })?;
    for name in FIXTURES.iter().filter(|n| **n != "cubes") {
        let (file, input) = load(name);
        let r = analyze(&file, &input, &AnalyzeOptions::default()).map_err(|e| format!("{e:#}"))?;
        ensure(!r.linearly_dependent && r.deg_f < r.outer_bound, || format!("{name}: degF {} outer {}", r.deg_f, r.outer_bound))?;
        ensure(r.indeg_syz.is_some_and(|i| i > 0), || format!("{name}: indeg {:?}", r.indeg_syz))?;
    }
    Ok("dependent cubes reach 6 = 3(d-1), independent fixtures stay below".into())
}

fn random_form(kk: &PrimeField, d: u32, density: f64, rng: &mut ChaCha8Rng) -> MvPoly<PrimeField> {
    loop {
        let terms = Monomial::all_of_degree(3, d)
            .into_iter()
            .filter_map(|m| rng.gen_bool(density).then(|| (m, kk.random(rng))))
            .collect::<Vec<_>>();
        let f = MvPoly::from_terms(kk, 3, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_map(kk: &PrimeField, n: usize, d: u32, density: f64, rng: &mut ChaCha8Rng) -> RationalMapInput<PrimeField> {
    loop {
        let forms = (0..=n).map(|_| random_form(kk, d, density, rng)).collect();
        if let Ok(input) = RationalMapInput::new(kk, forms) {
            return input;
        }
    }
}

fn criterion_4() -> Outcome {
    let kk = k();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut done = 0;
    let mut degrees = std::collections::BTreeSet::new();
    while done < 50 {
        let density = [0.15, 0.3, 1.0][done % 3];
        let input = random_map(&kk, 3, 4, density, &mut rng);
        let Ok(rep) = JacobianReport::compute(&input, done as u64) else {
            continue;
        };
        if rep.gcd.is_zero() {
            continue;
        }
        let syz = euler_syzygy(&input, &rep.gcd).map_err(|e| e.to_string())?;
        let combo = syz
            .coefficients
            .iter()
            .zip(input.forms())
            .fold(MvPoly::zero(&kk, 3), |acc, (a, f)| &acc + &(a * f));
        ensure(combo.is_zero(), || format!("map {done}: sum a_i f_i != 0"))?;
        ensure(syz.coefficients.iter().any(|a| !a.is_zero()), || format!("map {done}: zero syzygy"))?;
        for a in syz.coefficients.iter().filter(|a| !a.is_zero()) {
            ensure(a.is_homogeneous() && a.degree() + rep.deg_gcd == 9, || {
                format!("map {done}: deg a = {}, deg F = {}", a.degree(), rep.deg_gcd)
            })?;
        }
        degrees.insert(rep.deg_gcd);
        done += 1;
    }
    Ok(format!("50 maps, deg F values {degrees:?}"))
}

fn criterion_5() -> Outcome {
    let kk = k();
    let (_, input) = load("sextic");
    let input = prime_input(&input);
    let base = JacobianReport::compute(input, 0).map_err(|e| e.to_string())?.gcd;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut done = 0;
    while done < 20 {
        let m: Vec<Vec<u64>> = (0..4).map(|_| (0..4).map(|_| kk.random(&mut rng)).collect()).collect();
        if rank_mod_p(&kk, m.clone()) < 4 {
            continue;
        }
        let forms: Vec<MvPoly<PrimeField>> = m
            .iter()
            .map(|row| {
                row.iter().zip(input.forms()).fold(MvPoly::zero(&kk, 3), |acc, (c, f)| &acc + &f.scale(c))
            })
            .collect();
        let changed = RationalMapInput::new(&kk, forms).map_err(|e| e.to_string())?;
        let g = JacobianReport::compute(&changed, done).map_err(|e| e.to_string())?.gcd;
        ensure(g.equals_up_to_scalar(&base), || format!("change {done}: F = {g}"))?;
        done += 1;
    }
    Ok("20 changes of basis leave F unchanged".into())
}

fn rank_mod_p(kk: &PrimeField, mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = kk.inv(&rows[rank][col]);
        let pivot: Vec<u64> = rows[rank].iter().map(|v| kk.mul(v, &inv)).collect();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let c = rows[r][col];
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = kk.sub(x, &kk.mul(&c, y));
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Rank of the differential of `q -> (f_i / f_b)_{i != b}` in the chart
/// `X_a = 1`, with `a` and `b` the last indices where `q` and `f(q)` are
/// nonzero. Quotient rule applied to evaluated partials.
fn dphi_rank(kk: &PrimeField, input: &RationalMapInput<PrimeField>, q: &[u64]) -> Option<usize> {
    let a = (0..3).rev().find(|&j| q[j] != 0)?;
    let inv = kk.inv(&q[a]);
    let q: Vec<u64> = q.iter().map(|v| kk.mul(v, &inv)).collect();
    let vals: Vec<u64> = input.forms().iter().map(|f| f.evaluate(&q)).collect();
    let b = (0..vals.len()).rev().find(|&i| vals[i] != 0)?;
    let fb2 = kk.inv(&kk.mul(&vals[b], &vals[b]));
    let grads: Vec<Vec<u64>> =
        input.forms().iter().map(|f| (0..3).map(|j| f.derivative(j).evaluate(&q)).collect()).collect();
    let rows: Vec<Vec<u64>> = (0..vals.len())
        .filter(|&i| i != b)
        .map(|i| {
            (0..3)
                .filter(|&j| j != a)
                .map(|j| {
                    let num = kk.sub(&kk.mul(&grads[i][j], &vals[b]), &kk.mul(&vals[i], &grads[b][j]));
                    kk.mul(&num, &fb2)
                })
                .collect()
        })
        .collect();
    Some(rank_mod_p(kk, rows))
}

fn criterion_6() -> Outcome {
    let kk = k();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut total = 0;
    for map in 0..10 {
        let d = loop {
            let d = rng.gen_range(2..=5u32);
            if !DEFAULT_PRIME.is_multiple_of(d as u64) {
                break d;
            }
        };
        let n = rng.gen_range(2..=4);
        let input = random_map(&kk, n, d, 0.4, &mut rng);
        let mut tested = 0;
        while tested < 100 {
            // every fourth point lies on X0 = X1
            let mut q: Vec<u64> = (0..3).map(|_| kk.random(&mut rng)).collect();
            if tested % 4 == 0 {
                q[1] = q[0];
            }
            let Some(rank_dphi) = dphi_rank(&kk, &input, &q) else {
                continue;
            };
            let jq: Vec<Vec<u64>> =
                input.forms().iter().map(|f| (0..3).map(|j| f.derivative(j).evaluate(&q)).collect()).collect();
            let rank_j = rank_mod_p(&kk, jq);
            ensure(rank_j == rank_dphi + 1, || format!("map {map}, q {q:?}: rank J {rank_j}, rank dphi {rank_dphi}"))?;
            let lib = tangent_rank_check(&input, &q).map_err(|e| e.to_string())?;
            ensure(lib.consistent && lib.rank_j == rank_j && lib.rank_dphi == rank_dphi, || {
                format!("map {map}, q {q:?}: library reports {lib:?}")
            })?;
            tested += 1;
            total += 1;
        }
    }
    Ok(format!("{total} points on 10 maps"))
}

/// Affine-linear polynomial or `X_i^2 + X_j^2 + c`, both irreducible.
fn random_irreducible(kk: &PrimeField, nvars: usize, rng: &mut ChaCha8Rng) -> MvPoly<PrimeField> {
    if nvars >= 2 && rng.gen_bool(0.2) {
        let i = rng.gen_range(0..nvars);
        let j = (i + 1 + rng.gen_range(0..nvars - 1)) % nvars;
        let mut ei = vec![0u32; nvars];
        ei[i] = 2;
        let mut ej = vec![0u32; nvars];
        ej[j] = 2;
        return poly_from_ints(kk, nvars, &[(1, &ei), (1, &ej), (rng.gen_range(1..=9), &vec![0; nvars])]);
    }
    loop {
        let mut terms: Vec<(i64, Vec<u32>)> = vec![(rng.gen_range(-5..=5), vec![0; nvars])];
        for v in 0..nvars {
            let mut e = vec![0u32; nvars];
            e[v] = 1;
            terms.push((rng.gen_range(-5..=5), e));
        }
        let refs: Vec<(i64, &[u32])> = terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        let p = poly_from_ints(kk, nvars, &refs);
        if p.degree() == 1 {
            return p;
        }
    }
}

fn product(kk: &PrimeField, nvars: usize, fs: &[&MvPoly<PrimeField>]) -> MvPoly<PrimeField> {
    fs.iter().fold(MvPoly::one(kk, nvars), |acc, f| &acc * *f)
}

fn criterion_7() -> Outcome {
    let kk = k();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for case in 0..200 {
        let nvars = rng.gen_range(1..=3);
        let pool: Vec<MvPoly<PrimeField>> = (0..4).map(|_| random_irreducible(&kk, nvars, &mut rng)).collect();
        let mut draw = || {
            let mut out: Vec<MvPoly<PrimeField>> = Vec::new();
            let target = rng.gen_range(1..=6);
            let mut deg = 0;
            while deg < target {
                let f = pool[rng.gen_range(0..pool.len())].clone();
                if deg + f.degree() > 6 {
                    break;
                }
                deg += f.degree();
                out.push(f);
            }
            out
        };
        let fa = draw();
        let fb = draw();
        let a = product(&kk, nvars, &fa.iter().collect::<Vec<_>>());
        let b = product(&kk, nvars, &fb.iter().collect::<Vec<_>>());
        let mut best = MvPoly::one(&kk, nvars);
        for mask in 0u32..(1 << fa.len()) {
            let chosen: Vec<&MvPoly<PrimeField>> =
                (0..fa.len()).filter(|i| mask >> i & 1 == 1).map(|i| &fa[i]).collect();
            let cand = product(&kk, nvars, &chosen);
            if cand.degree() > best.degree() && b.is_divisible_by(&cand) {
                best = cand;
            }
        }
        let g = gcd_multivariate(&a, &b);
        ensure(g.equals_up_to_scalar(&best), || format!("gcd case {case}: {g} vs oracle {best}"))?;
    }
    let mut done = 0;
    while done < 200 {
        let nvars = rng.gen_range(1..=3);
        let mut distinct: Vec<MvPoly<PrimeField>> = Vec::new();
        while distinct.len() < 3 {
            let f = random_irreducible(&kk, nvars, &mut rng);
            if distinct.iter().all(|g| !g.equals_up_to_scalar(&f)) {
                distinct.push(f);
            }
        }
        let mut a = MvPoly::constant(&kk, nvars, kk.from_i64(rng.gen_range(1..100)));
        for f in &distinct {
            a = &a * &f.pow(rng.gen_range(0..=3));
        }
        if a.is_constant() {
            continue;
        }
        let dec = squarefree_decompose(&a).map_err(|e| e.to_string())?;
        ensure(dec.expand(&kk, nvars).equals_up_to_scalar(&a), || format!("square-free case {done}: {a}"))?;
        done += 1;
    }
    Ok("200 gcd instances and 200 square-free reconstructions".into())
}

fn run_json(file: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_jacfiber"))
        .args(["analyze", "--seed", "42", "--json"])
        .arg(file)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{}: exit {:?}", file.display(), out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_8() -> Outcome {
    for name in FIXTURES {
        let path = Path::new(MAPS).join(format!("{name}.map"));
        let a = run_json(&path)?;
        let b = run_json(&path)?;
        ensure(!a.is_empty() && a == b, || format!("{name}: outputs differ"))?;
    }
    Ok(format!("{} fixtures byte-identical", FIXTURES.len()))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in FIXTURES {
        std::fs::copy(Path::new(MAPS).join(format!("{name}.map")), dir.path().join(format!("{name}.map")))
            .map_err(|e| e.to_string())?;
    }
    let path = dir.path().join("sextic.map");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let original = "f3 X0^4*X1^2 - X1^2*X2^4";
    ensure(text.contains(original), || "f3 line not found".into())?;
    let perturbed = text.replace(original, "f3 X0^4*X1^2 - 2*X1^2*X2^4");
    std::fs::write(&path, &perturbed).map_err(|e| e.to_string())?;

    let (_, before) = load("sextic");
    let (_, after) = parse_map_file(&perturbed).map_err(|e| format!("{e:#}"))?;
    let deg = |i: &MapInput| JacobianReport::compute(prime_input(i), 0).map(|r| r.deg_gcd).unwrap();
    let (d0, d1) = (deg(&before), deg(&after));
    ensure(d0 != d1, || format!("deg F unchanged at {d0}"))?;

    let out = Command::new(env!("CARGO_BIN_EXE_jacfiber"))
        .args(["selftest", "--fixture-dir"])
        .arg(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure(code.is_some_and(|c| c != 0), || format!("selftest exit {code:?}"))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(stdout.contains("FAILED sextic: degF"), || "selftest did not flag degF".into())?;
    let clean = Command::new(env!("CARGO_BIN_EXE_jacfiber")).arg("selftest").output().map_err(|e| e.to_string())?;
    ensure(clean.status.success(), || "unperturbed selftest fails".into())?;
    Ok(format!("deg F {d0} -> {d1}, selftest exit {}", code.unwrap()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("sextic surface map: F, indeg, fiber degrees", criterion_1),
        ("degree family d = 4..7", criterion_2),
        ("linear dependence iff deg F = 3(d-1)", criterion_3),
        ("Euler syzygy on random quartic maps", criterion_4),
        ("F invariant under change of basis", criterion_5),
        ("rank J(q) = rank dphi_q + 1", criterion_6),
        ("gcd and square-free oracles", criterion_7),
        ("analyze --json is deterministic", criterion_8),
        ("perturbed fixture is rejected", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
