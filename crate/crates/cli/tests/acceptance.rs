//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nichols_core::braided::ad_x1_pow;
use nichols_core::jset::{compute_j, multiplicity, non_root_table_check};
use nichols_core::oracle::{naive_symmetrizer, BraidingMatrix};
use nichols_core::qcalc::{b_k, hypothesis_holds, q2_eval, q2_poly};
use nichols_core::rootvec::{ad_p_closed_form, p_k};
use nichols_core::sweep::shorthand_points;
use nichols_core::{parse_field_spec, BraidingParams, Field, GradedElement, Oracle, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

const F9: &str = "ext:Fp:3:1,0,1";

struct Verdict {
    failures: Vec<String>,
    detail: String,
}

impl Verdict {
    fn new(failures: Vec<String>, detail: impl Into<String>) -> Self {
        Verdict { failures, detail: detail.into() }
    }
}

fn field(spec: &str) -> Field {
    parse_field_spec(spec).expect("valid field spec")
}

fn sweep(spec: &str) -> Vec<BraidingParams> {
    shorthand_points(&field(spec)).expect("finite field")
}

fn small_sweeps() -> Vec<BraidingParams> {
    let mut out = sweep("Fp:5");
    out.extend(sweep("Fp:7"));
    out
}

fn f9_point() -> BraidingParams {
    let f = field(F9);
    let t = f.generator().unwrap();
    BraidingParams::shorthand(t.clone(), t, f.from_i64(-1)).unwrap()
}

fn random_params(f: &Field, rng: &mut ChaCha8Rng) -> BraidingParams {
    BraidingParams::new(f.random_nonzero(rng), f.random_nonzero(rng), f.random_nonzero(rng), f.random_nonzero(rng))
        .unwrap()
}

fn describe(p: &BraidingParams) -> String {
    format!("{}: q={}, r={}, s={}", p.field(), p.q(), p.r(), p.s())
}

fn char_three_example() -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_nichols"))
        .args(["jset", "--field", "Fp:3", "--q", "1", "--r", "2", "--s", "2", "--max", "6", "--format", "json"])
        .output()
        .expect("binary runs");
    let mut failures = Vec::new();
    if !out.status.success() {
        failures.push(format!("exit status {}", out.status));
        return Verdict::new(failures, "");
    }
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    let upto3 = |xs: Vec<u64>| xs.into_iter().filter(|&x| x <= 3).collect::<Vec<_>>();
    let nums = |key: &str| v[key].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect::<Vec<_>>();
    let j = upto3(nums("J"));
    let j1 = upto3(nums("J1"));
    let j2: Vec<(u64, u64)> = v["J2"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["n"].as_u64().unwrap(), e["j_n"].as_u64().unwrap()))
        .filter(|&(n, _)| n <= 3)
        .collect();
    if j != [0, 3] {
        failures.push(format!("J ∩ [0,3] = {j:?}"));
    }
    if j1 != [0] {
        failures.push(format!("J1 ∩ [0,3] = {j1:?}"));
    }
    if j2 != [(3, 0)] {
        failures.push(format!("J2 ∩ [0,3] = {j2:?}"));
    }
    Verdict::new(failures, format!("J ∩ [0,3] = {j:?}, J1 = {j1:?}, J2 = {j2:?}; full J up to 6 = {:?}", nums("J")))
}

fn small_numbers() -> Verdict {
    let points = small_sweeps();
    let failures: Vec<String> = points
        .par_iter()
        .filter_map(|p| {
            let f = p.field();
            let minus_one = -f.one();
            let (q, r, s) = (p.q(), p.r(), p.s());
            let cls = compute_j(2, p);
            let zero = s == minus_one;
            let rs_one = (&r * &s).is_one();
            let one = rs_one && !zero;
            let two = (&q * &r * &r * &s) == minus_one && !rs_one && !zero;
            let got = (cls.contains(0), cls.contains(1), cls.contains(2));
            (got != (zero, one, two)).then(|| format!("{}: J has {got:?}, expected {:?}", describe(p), (zero, one, two)))
        })
        .collect();
    Verdict::new(failures, format!("{} points", points.len()))
}

fn p_k_vanishing() -> Verdict {
    let points = small_sweeps();
    let results: Vec<(usize, Vec<String>)> = points
        .par_iter()
        .map(|p| {
            let oracle = Oracle::new(p);
            let mut checked = 0;
            let mut failures = Vec::new();
            for k in 0..=5usize {
                if !hypothesis_holds(k as u64, p) {
                    continue;
                }
                checked += 1;
                let pk = p_k(k, p).unwrap().to_element(p).unwrap();
                let in_ker = oracle.in_kernel(&pk).unwrap();
                let lhs = p.q().pow((k * k.saturating_sub(1) / 2) as u64) * (-p.r()).pow(k as u64) * p.s();
                let predicted = lhs == -p.field().one();
                if in_ker != predicted {
                    failures.push(format!("{}, k={k}: oracle {in_ker}, formula {predicted}", describe(p)));
                }
            }
            (checked, failures)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    Verdict::new(results.into_iter().flat_map(|r| r.1).collect(), format!("{checked} (point, k) cases"))
}

fn main_theorem() -> Verdict {
    let mut points = small_sweeps();
    points.push(f9_point());
    let results: Vec<(usize, usize, Vec<String>)> = points
        .par_iter()
        .map(|p| {
            let oracle = Oracle::new(p);
            let (mut checked, mut skipped, mut failures) = (0, 0, Vec::new());
            for m in 0..=5 {
                if !hypothesis_holds(m as u64, p) {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                match oracle.verify_main(m) {
                    Ok(r) if r.matches_theorem => {}
                    Ok(r) => failures.push(format!("{}, m={m}: {r:?}", describe(p))),
                    Err(e) => failures.push(format!("{}, m={m}: {e}", describe(p))),
                }
            }
            (checked, skipped, failures)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let skipped: usize = results.iter().map(|r| r.1).sum();
    let mut failures: Vec<String> = results.into_iter().flat_map(|r| r.2).collect();
    let r = Oracle::new(&f9_point()).verify_main(3).unwrap();
    let labels: Vec<&str> = r.candidates.iter().map(|c| c.label.as_str()).collect();
    if r.dim != 2 || labels != ["adP(3,0)", "L(3)"] || !r.matches_theorem {
        failures.push(format!("F9 point, m=3: {r:?}"));
    }
    Verdict::new(failures, format!("{checked} (point, m) cases verified, {skipped} skipped; F9 m=3 dim {}", r.dim))
}

fn closed_form() -> Verdict {
    let specs = ["Fp:5", "Fp:7", F9, "Q"];
    let results: Vec<(usize, Vec<String>)> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let f = field(spec);
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
            let (mut checked, mut failures) = (0, Vec::new());
            for _ in 0..100 {
                let p = random_params(&f, &mut rng);
                for k in 0..=6usize {
                    let base = match p_k(k, &p) {
                        Ok(v) => v.to_element(&p).unwrap(),
                        Err(_) => continue,
                    };
                    let mut words = base;
                    for m in 0..=(6 - k) {
                        if m > 0 {
                            words = ad_x1_pow(1, &words, &p).unwrap();
                        }
                        if !hypothesis_holds((m + k) as u64, &p) {
                            continue;
                        }
                        checked += 1;
                        let direct = words.scale(&p.q12().powi(-(m as i64)).unwrap());
                        let closed = ad_p_closed_form(m, k, &p).unwrap().to_element(&p).unwrap();
                        if direct != closed {
                            failures.push(format!("{}, m={m}, k={k}", describe(&p)));
                        }
                    }
                }
            }
            (checked, failures)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    Verdict::new(results.into_iter().flat_map(|r| r.1).collect(), format!("{checked} (point, m, k) cases"))
}

fn q2_consistency() -> Verdict {
    let mut failures = Vec::new();
    for k in 0..=8usize {
        for m in 0..=(8 - k) {
            if let Err(e) = q2_poly(k, m) {
                failures.push(format!("Q2({k},{m}): {e}"));
            }
        }
    }
    let mut points = small_sweeps();
    points.extend(sweep(F9));
    // Each case: (counterexample?, factorial hypothesis holds at n?, message).
    let cases: Vec<(bool, bool, String)> = points
        .par_iter()
        .flat_map_iter(|p| {
            let cls = compute_j(10, p);
            let j1 = cls.j1();
            let j2: Vec<usize> = cls.j2().iter().map(|&(n, _)| n).collect();
            let mut out = Vec::new();
            for n in 1..=10usize {
                if b_k(n as u64, p).is_zero() {
                    continue;
                }
                for &j_n in j1.iter().filter(|&&j| j < n) {
                    let x = p.q().pow((n + j_n - 1) as u64) * p.r().pow(2);
                    if !x.is_one() {
                        continue;
                    }
                    let in_j2 = j2.contains(&n);
                    let vanishes = q2_eval(j_n, n - j_n - 1, p).unwrap().is_zero();
                    let msg = format!(
                        "{}, n={n}, j_n={j_n}: in J2 {in_j2}, Q2 = 0 {vanishes}, J ∩ [0,10] = {:?}",
                        describe(p),
                        cls.j_set()
                    );
                    out.push((in_j2 != vanishes, hypothesis_holds(n as u64, p), msg));
                }
            }
            out
        })
        .collect();
    let restricted = cases.iter().filter(|c| c.1).count();
    let restricted_bad = cases.iter().filter(|c| c.0 && c.1).count();
    failures.extend(cases.iter().filter(|c| c.0).map(|c| c.2.clone()));
    Verdict::new(
        failures,
        format!(
            "45 exact divisions, {} (point, n, j_n) cases with b_n != 0; \
             restricted to (n)_q^! b_n != 0: {restricted} cases, {restricted_bad} exceptions",
            cases.len()
        ),
    )
}

fn random_homogeneous(f: &Field, oracle: &Oracle, rng: &mut ChaCha8Rng) -> GradedElement {
    let total = rng.gen_range(2..=8);
    let a = rng.gen_range(0..=total);
    let sym = oracle.symmetrizer(&[a, total - a]).unwrap();
    let word = |w: &[u8]| Word::from_letters(&w.iter().map(|l| l + 1).collect::<Vec<_>>());
    let null = sym.matrix().nullspace();
    let mut x = GradedElement::zero(f);
    if !null.is_empty() && rng.gen_bool(0.5) {
        for v in &null {
            let c = f.random_element(rng);
            for (w, e) in sym.basis().iter().zip(v) {
                x.add_term(word(w), e * &c);
            }
        }
    } else {
        let terms = rng.gen_range(1..=sym.basis().len().min(6));
        for _ in 0..terms {
            let w = &sym.basis()[rng.gen_range(0..sym.basis().len())];
            x.add_term(word(w), f.random_element(rng));
        }
    }
    x
}

fn oracle_agreement() -> Verdict {
    let specs = ["Fp:5", "Fp:7", F9, "Q"];
    let results: Vec<(usize, usize, Vec<String>)> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let f = field(spec);
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce + i as u64);
            let (mut in_kernel, mut failures) = (0, Vec::new());
            let mut oracle = Oracle::new(&random_params(&f, &mut rng));
            for n in 0..1000 {
                if n % 50 == 0 {
                    oracle = Oracle::new(&random_params(&f, &mut rng));
                }
                let x = random_homogeneous(&f, &oracle, &mut rng);
                let a = oracle.in_kernel(&x).unwrap();
                let b = oracle.in_kernel_by_derivations(&x).unwrap();
                in_kernel += usize::from(a);
                if a != b {
                    failures.push(format!("{spec}: symmetrizer {a}, derivations {b} on {x}"));
                }
            }
            let mut compared = 0;
            for _ in 0..4 {
                let p = random_params(&f, &mut rng);
                let oracle = Oracle::new(&p);
                let braiding = BraidingMatrix::from_params(&p);
                for total in 0..=6usize {
                    for a in 0..=total {
                        let d = [a, total - a];
                        compared += 1;
                        let naive = naive_symmetrizer(&d, &braiding).unwrap();
                        if oracle.symmetrizer(&d).unwrap().matrix() != naive.matrix() {
                            failures.push(format!("{}, degree {d:?}: recursive != naive", describe(&p)));
                        }
                    }
                }
            }
            (in_kernel, compared, failures)
        })
        .collect();
    let in_kernel: usize = results.iter().map(|r| r.0).sum();
    let compared: usize = results.iter().map(|r| r.1).sum();
    Verdict::new(
        results.into_iter().flat_map(|r| r.2).collect(),
        format!("4000 elements ({in_kernel} in the kernel), {compared} symmetrizer comparisons"),
    )
}

fn table_one() -> Verdict {
    let mut points = small_sweeps();
    points.extend(sweep(F9));
    let results: Vec<(usize, Vec<String>)> = points
        .par_iter()
        .map(|p| {
            let (mut checked, mut failures) = (0, Vec::new());
            for m in [1usize, 2, 3, 4, 6] {
                if !hypothesis_holds(m as u64, p) {
                    continue;
                }
                checked += 1;
                let mult = multiplicity(m, p).unwrap();
                let table = non_root_table_check(m, p).unwrap();
                if (mult == 0) != table {
                    failures.push(format!("{}, m={m}: multiplicity {mult}, table non-root {table}", describe(p)));
                }
            }
            let cls = compute_j(12, p);
            for m in 0..=12 {
                if 3 * cls.count_upto(m) > m + 3 {
                    failures.push(format!("{}: |J ∩ [0,{m}]| = {}", describe(p), cls.count_upto(m)));
                }
            }
            for w in cls.j_set().windows(2) {
                if w[1] - w[0] <= 2 {
                    failures.push(format!("{}: members {} and {}", describe(p), w[0], w[1]));
                }
            }
            (checked, failures)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    Verdict::new(
        results.into_iter().flat_map(|r| r.1).collect(),
        format!("{checked} (point, m) rows over {} points", points.len()),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict, Duration);
    let criteria: [Criterion; 8] = [
        ("1 char-3 example", char_three_example, Duration::from_secs(1)),
        ("2 small-number criteria", small_numbers, Duration::from_secs(10)),
        ("3 P_k vanishing", p_k_vanishing, Duration::from_secs(120)),
        ("4 main theorem", main_theorem, Duration::from_secs(120)),
        ("5 closed-form ad-powers", closed_form, Duration::from_secs(60)),
        ("6 Q2 consistency", q2_consistency, Duration::from_secs(60)),
        ("7 oracle agreement", oracle_agreement, Duration::from_secs(120)),
        ("8 non-root table", table_one, Duration::from_secs(60)),
    ];
    let mut all_ok = true;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let ok = verdict.failures.is_empty() && elapsed <= budget;
        all_ok &= ok;
        println!(
            "criterion {name}: {} ({:.2}s, budget {}s) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            verdict.detail
        );
        for f in verdict.failures.iter().take(10) {
            println!("    {f}");
        }
        if verdict.failures.len() > 10 {
            println!("    ... {} more", verdict.failures.len() - 10);
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
