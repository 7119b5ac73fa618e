//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_3;
use std::panic;
use std::process::{Command, ExitCode};
use std::time::Instant;
use wickforge::catalog::{make_preset, Preset};
use wickforge::fock::{FockSpace, Word};
use wickforge::linalg::{c64, flip, identity, max_abs, max_abs_diff, Complex64, Matrix, Tolerance};
use wickforge::operators::{
    build_ttilde, check_braid, check_consistency, check_star, check_yang_baxter, scaled_flip,
    BraidOperator, StatisticsSystem,
};
use wickforge::wick::{
    evaluate_on_sector, inversions, normal_order, normal_order_with, parse_expression, Generator,
    OperatorExpression,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::new(EPS).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// boltzmann, boson, fermion, quon(0.5), quon(−0.5), quon(1), phase(π/3).
fn all_presets(dim: usize) -> Vec<Preset> {
    vec![
        Preset::Boltzmann { dim },
        Preset::Boson { dim },
        Preset::Fermion { dim },
        Preset::Quon { dim, q: 0.5 },
        Preset::Quon { dim, q: -0.5 },
        Preset::Quon { dim, q: 1.0 },
        Preset::uniform_phase(dim, FRAC_PI_3),
    ]
}

fn system(p: &Preset) -> StatisticsSystem {
    make_preset(p).unwrap()
}

fn space(p: &Preset) -> FockSpace {
    FockSpace::new(system(p))
}

fn flip_factor(s: &StatisticsSystem, i: usize, j: usize) -> Complex64 {
    s.cross.entry(i - 1, j - 1, j - 1, i - 1)
}

/// Σ over matchings σ of bra letters to ket positions of the product of
/// exchange factors over inverted pairs.
fn permutation_gram(s: &StatisticsSystem, bra: &[usize], ket: &[usize]) -> Complex64 {
    let n = bra.len();
    let mut total = c64(0.0, 0.0);
    for sigma in (0..n).permutations(n) {
        if (0..n).any(|k| bra[k] != ket[sigma[k]]) {
            continue;
        }
        let mut w = c64(1.0, 0.0);
        for (k, kk) in (0..n).tuple_combinations() {
            if sigma[k] > sigma[kk] {
                w *= flip_factor(s, bra[k], bra[kk]);
            }
        }
        total += w;
    }
    total
}

fn oracle_gram(s: &StatisticsSystem, n: usize) -> Matrix {
    let dim = s.dim();
    let size = dim.pow(n as u32);
    Matrix::from_fn(size, size, |r, c| {
        permutation_gram(
            s,
            Word::from_offset(dim, n, r).letters(),
            Word::from_offset(dim, n, c).letters(),
        )
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_expression(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> OperatorExpression {
    let mut e = OperatorExpression::zero();
    for _ in 0..rng.random_range(1..=3) {
        let len = rng.random_range(0..=max_len);
        let word = (0..len)
            .map(|_| {
                let s = rng.random_range(1..=dim);
                if rng.random_bool(0.5) {
                    Generator::creation(s)
                } else {
                    Generator::annihilation(s)
                }
            })
            .collect();
        e.add_term(word, c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    }
    e
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for dim in 1..=3 {
        for p in all_presets(dim) {
            let s = system(&p);
            let (ok, r) = check_star(&s.cross, tol());
            ensure(ok, || format!("{p:?}: star residual {r:e}"))?;
            worst = worst.max(r);
            let (ok, r) = check_yang_baxter(&build_ttilde(&s.cross), tol());
            ensure(ok, || format!("{p:?}: Yang-Baxter residual {r:e}"))?;
            worst = worst.max(r);
            if let Some(b) = &s.braid {
                let (ok, r) = check_braid(b, tol());
                ensure(ok, || format!("{p:?}: braid residual {r:e}"))?;
                worst = worst.max(r);
                let (ok, r) = check_consistency(&s.cross, b, tol()).unwrap();
                ensure(ok, || format!("{p:?}: consistency residuals {r:?}"))?;
                worst = worst.max(r.mixed).max(r.kernel);
            }
            count += 1;
        }
    }
    Ok(format!("{count} systems, max residual {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let cross = scaled_flip(2, c64(0.5, 0.0)).unwrap();
    let braid = BraidOperator::new(2, flip(2)).unwrap();
    let (ok, r) = check_consistency(&cross, &braid, tol()).unwrap();
    ensure(!ok, || "(0.5 flip, flip) passed consistency".into())?;
    ensure((r.kernel - 0.5).abs() <= 1e-12, || format!("r2 = {:e}, expected 0.5", r.kernel))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dense = BraidOperator::new(2, random_matrix(&mut rng, 4)).unwrap();
    let (ok, rb) = check_braid(&dense, tol());
    ensure(!ok, || "random dense B passed the braid relation".into())?;
    Ok(format!("r2 = {:.3}, random B braid residual {rb:.2e}", r.kernel))
}

fn criterion_3() -> Outcome {
    let s = space(&Preset::Boltzmann { dim: 2 });
    let mut worst = 0.0_f64;
    for n in 0..=5 {
        let g = s.gram_matrix(n).map_err(|e| e.to_string())?.mat;
        worst = worst.max(max_abs_diff(&g, &identity(g.nrows())));
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let p = Preset::Quon { dim: 1, q: 0.5 };
    let s = space(&p);
    let known = [1.0, 1.0, 1.5, 2.625, 4.921875];
    let mut values = Vec::new();
    for n in 0..=5 {
        let g = s.gram_matrix(n).map_err(|e| e.to_string())?.mat[(0, 0)];
        let oracle = permutation_gram(s.system(), &vec![1; n], &vec![1; n]);
        ensure((g - oracle).norm() <= EPS, || format!("n={n}: {g} vs oracle {oracle}"))?;
        if let Some(k) = known.get(n) {
            ensure((oracle.re - k).abs() <= 1e-12, || format!("oracle n={n} = {oracle}"))?;
        }
        values.push(g.re);
    }
    Ok(format!("norms {values:?}"))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0_f64;
    for dim in 1..=3 {
        for p in all_presets(dim) {
            let s = space(&p);
            for n in 0..=4 {
                let g = s.gram_matrix(n).map_err(|e| e.to_string())?.mat;
                let d = max_abs_diff(&g, &oracle_gram(s.system(), n));
                ensure(d <= EPS, || format!("{p:?} n={n}: {d:e}"))?;
                worst = worst.max(d);
            }
        }
    }
    Ok(format!("max entry difference {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let s = space(&Preset::Quon { dim: 2, q: 0.5 });
    let mut min_pd = f64::INFINITY;
    for n in 0..=4 {
        let r = s.positivity_report(n).map_err(|e| e.to_string())?;
        let e = r.min_eig.unwrap();
        ensure(e > 0.0 && r.positive_definite, || format!("quon 0.5 n={n}: {r:?}"))?;
        min_pd = min_pd.min(e);
    }
    let s = space(&Preset::Quon { dim: 2, q: 1.0 });
    let mut kernels = Vec::new();
    for n in 0..=4 {
        let r = s.positivity_report(n).map_err(|e| e.to_string())?;
        let expected = 2usize.pow(n as u32) - binomial(2 + n - 1, n);
        ensure(r.min_eig.unwrap() >= -EPS, || format!("quon 1 n={n}: {r:?}"))?;
        ensure(r.kernel_dim == expected, || {
            format!("quon 1 n={n}: kernel {} expected {expected}", r.kernel_dim)
        })?;
        kernels.push(r.kernel_dim);
    }
    Ok(format!("quon 0.5 min eig {min_pd:.4}; quon 1 kernel dims {kernels:?}"))
}

fn criterion_7() -> Outcome {
    let dims = |p: &Preset, max: usize| -> Result<Vec<usize>, String> {
        let s = space(p);
        (0..=max)
            .map(|n| {
                let d = s.quotient_sector(n).map_err(|e| e.to_string())?.quotient_dim().unwrap();
                let r = s.quotient_positivity_report(n).map_err(|e| e.to_string())?;
                ensure(d == 0 || r.positive_definite, || format!("{p:?} n={n}: {r:?}"))?;
                Ok(d)
            })
            .collect()
    };
    let boson = dims(&Preset::Boson { dim: 2 }, 4)?;
    ensure(boson == [1, 2, 3, 4, 5], || format!("boson dims {boson:?}"))?;
    let fermion = dims(&Preset::Fermion { dim: 2 }, 4)?;
    ensure(fermion == [1, 2, 1, 0, 0], || format!("fermion dims {fermion:?}"))?;
    let f3 = dims(&Preset::Fermion { dim: 3 }, 2)?;
    ensure(f3[2] == 3, || format!("fermion N=3 n=2 dim {}", f3[2]))?;
    Ok(format!("boson {boson:?}, fermion {fermion:?}, fermion N=3 n=2 -> {}", f3[2]))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0_f64;
    let mut quotients = 0;
    for dim in 1..=3 {
        for p in all_presets(dim) {
            let s = space(&p);
            let braid = s.system().braid.is_some();
            for n in 0..=4 {
                for quotient in [false, true] {
                    if quotient && !braid {
                        continue;
                    }
                    let adj = s.adjointness_residual(n, quotient).map_err(|e| e.to_string())?;
                    let comm = s.commutation_residual(n, quotient).map_err(|e| e.to_string())?;
                    ensure(adj <= EPS && comm <= EPS, || {
                        format!("{p:?} n={n} quotient={quotient}: adjointness {adj:e}, commutation {comm:e}")
                    })?;
                    worst = worst.max(adj).max(comm);
                    quotients += usize::from(quotient);
                }
            }
        }
    }
    Ok(format!("max residual {worst:.1e} ({quotients} quotient sectors)"))
}

fn criterion_9() -> Outcome {
    let boson = space(&Preset::Boson { dim: 2 });
    let fermion = space(&Preset::Fermion { dim: 2 });
    let mut worst = 0.0_f64;
    for n in 0..=4 {
        for i in 1..=2 {
            for j in 1..=2 {
                for (s, sign) in [(&boson, -1.0), (&fermion, 1.0)] {
                    let a_up = s.descended_operators(i, n + 1).map_err(|e| e.to_string())?.annihilation.unwrap();
                    let c_here = s.descended_operators(j, n).map_err(|e| e.to_string())?.creation;
                    let mut r = &a_up * &c_here;
                    if n >= 1 {
                        let c_down = s.descended_operators(j, n - 1).map_err(|e| e.to_string())?.creation;
                        let a_here = s.descended_operators(i, n).map_err(|e| e.to_string())?.annihilation.unwrap();
                        r += (&c_down * &a_here) * c64(sign, 0.0);
                    }
                    if i == j {
                        r -= identity(r.nrows());
                    }
                    worst = worst.max(max_abs(&r));
                }
            }
            let c1 = fermion.descended_operators(i, n).map_err(|e| e.to_string())?.creation;
            let c2 = fermion.descended_operators(i, n + 1).map_err(|e| e.to_string())?.creation;
            worst = worst.max(max_abs(&(&c2 * &c1)));
        }
    }
    ensure(worst <= EPS, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    for q in [0.5, -0.5, 1.0, 0.25] {
        let s = system(&Preset::Quon { dim: 1, q });
        let nf = normal_order(&parse_expression("a(1) c(1)", 1).unwrap(), &s, tol());
        let expected = parse_expression(&format!("1 + ({q},0) c(1) a(1)"), 1).unwrap();
        ensure(*nf == expected, || format!("q={q}: {nf}"))?;
        if q == 0.5 {
            ensure(nf.to_string() == "1 + 0.5 c(1) a(1)", || format!("printed {nf}"))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0_f64;
    for p in all_presets(2) {
        let s = space(&p);
        for _ in 0..50 {
            let e = random_expression(&mut rng, 2, 3);
            let nf = normal_order(&e, s.system(), tol());
            for n in 0..=3 {
                let lhs = evaluate_on_sector(&e, &s, n).map_err(|e| e.to_string())?;
                let rhs = evaluate_on_sector(&nf, &s, n).map_err(|e| e.to_string())?;
                let d = lhs.max_abs_diff(&rhs);
                ensure(d <= 1e-8, || format!("{p:?} {e} n={n}: {d:e}"))?;
                worst = worst.max(d);
            }
        }
    }

    let mut fuzzed = 0;
    for p in all_presets(2) {
        let s = system(&p);
        for _ in 0..200 {
            let e = random_expression(&mut rng, 2, 6);
            let (nf, stats) = normal_order_with(&e, &s.cross, tol());
            ensure(nf.is_normal_ordered(), || format!("{p:?} {e}: not normal ordered"))?;
            let bound_ok = e.terms().all(|(w, _)| inversions(w) <= w.len() * w.len());
            ensure(bound_ok && stats.generations <= stats.step_bound, || {
                format!("{p:?} {e}: {} generations, bound {}", stats.generations, stats.step_bound)
            })?;
            fuzzed += 1;
        }
    }
    Ok(format!("soundness max {worst:.1e}; {fuzzed} fuzzed inputs within the step bound"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wickforge"))
        .args(args)
        .env_remove("WICKFORGE_EPS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_11() -> Outcome {
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", "--preset", "boson", "--dim", "2", "--json"],
        vec!["gram", "--preset", "boson", "--dim", "2", "--sector", "3", "--json"],
        vec!["gram", "--preset", "boson", "--dim", "2", "--sector", "3", "--quotient", "--json"],
        vec!["kernel", "--preset", "boson", "--dim", "2", "--json"],
        vec!["quotient", "--preset", "boson", "--dim", "2", "--max-sector", "4", "--json"],
        vec!["normal-order", "a(1) c(2) c(1)", "--preset", "boson", "--dim", "2", "--verify", "--json"],
        vec!["catalog", "--json"],
        vec!["catalog", "--preset", "boson", "--dim", "2", "--json"],
        vec!["catalog", "--preset", "boson", "--dim", "2", "--emit"],
    ];
    for args in &commands {
        let (c1, o1) = run_cli(args);
        let (c2, o2) = run_cli(args);
        ensure(c1 == 0 && c2 == 0, || format!("{args:?}: exit {c1}/{c2}"))?;
        ensure(!o1.is_empty() && o1 == o2, || format!("{args:?}: output differs between runs"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let broken = StatisticsSystem::new(
        scaled_flip(2, c64(0.5, 0.0)).unwrap(),
        Some(BraidOperator::new(2, flip(2)).unwrap()),
        "inconsistent",
    )
    .unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken.to_json()).map_err(|e| e.to_string())?;
    let path = path.to_str().unwrap();

    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["validate", "--preset", "boson", "--dim", "2"], 0),
        (vec!["validate", "--file", path], 1),
        (vec!["validate"], 2),
        (vec!["gram", "--preset", "boson", "--dim", "8", "--sector", "6"], 3),
    ];
    for (args, want) in &cases {
        let (got, _) = run_cli(args);
        ensure(got == *want, || format!("{args:?}: exit {got}, expected {want}"))?;
    }
    Ok(format!("{} commands byte-identical; exit codes 0/1/2/3 as expected", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("preset validation", criterion_1),
        ("negative controls", criterion_2),
        ("boltzmann gram is identity", criterion_3),
        ("quon norms", criterion_4),
        ("gram oracle equivalence", criterion_5),
        ("positivity", criterion_6),
        ("quotient dimensions", criterion_7),
        ("representation contract", criterion_8),
        ("canonical (anti)commutation relations", criterion_9),
        ("normal ordering", criterion_10),
        ("cli determinism and exit codes", criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  [{:>2}] {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  [{:>2}] {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
