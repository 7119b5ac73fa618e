use crate::output::{
    complex_json, matrix_json, matrix_text, print_json, reals_text, system_json, vector_json, vector_text,
};
use crate::{Cli, Command, PresetParams, SourceArgs};
use serde_json::json;
use std::fmt;
use std::fs;
use std::path::Path;
use wickforge::catalog::{make_preset, Preset, PresetKind};
use wickforge::fock::{FockConfig, FockError, FockSpace, SectorReport, DEFAULT_SECTOR_CAP};
use wickforge::linalg::EPS_ENV_VAR;
use wickforge::operators::CheckStatus;
use wickforge::wick::{evaluate_on_sector, normal_order_with, parse_expression};
use wickforge::{validate_system, StatisticsSystem, Tolerance};

/// Failure that maps to a process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    SizeLimit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::SizeLimit(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) | CliError::SizeLimit(m) => f.write_str(m),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::SizeLimit { .. } => CliError::SizeLimit(e.to_string()),
            FockError::SpeciesOutOfRange { .. } | FockError::VacuumAnnihilation(_) => {
                CliError::Usage(e.to_string())
            }
            FockError::NoBraid | FockError::NotWellDefined { .. } | FockError::Linalg(_) => {
                CliError::Failed(e.to_string())
            }
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Runs one command; `Ok` carries 0 when every check passed, 1 otherwise.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let tol = tolerance(cli.eps)?;
    match &cli.command {
        Command::Validate(source) => validate(&load(source)?, tol, cli.json),
        Command::Gram {
            source,
            sector,
            quotient,
        } => gram(&space(load(source)?, tol), *sector, *quotient, cli.json),
        Command::Kernel(source) => kernel(&space(load(source)?, tol), cli.json),
        Command::Quotient { source, max_sector } => quotient(&space(load(source)?, tol), *max_sector, cli.json),
        Command::NormalOrder {
            expr,
            source,
            verify,
            max_sector,
        } => normal_order(&space(load(source)?, tol), expr, verify.then_some(*max_sector), cli.json),
        Command::Catalog { preset, params, emit } => catalog(*preset, params, emit.as_ref(), tol, cli.json),
    }
}

fn tolerance(eps: Option<f64>) -> Result<Tolerance, CliError> {
    match eps {
        Some(e) => Tolerance::new(e).map_err(|err| usage(format!("--eps: {err}"))),
        None => Tolerance::from_env().map_err(|err| usage(format!("{EPS_ENV_VAR}: {err}"))),
    }
}

fn preset_from(kind: PresetKind, params: &PresetParams) -> Result<StatisticsSystem, CliError> {
    let preset = Preset::from_params(kind, params.dim.unwrap_or(2), params.q, params.phi.as_deref()).map_err(usage)?;
    make_preset(&preset).map_err(usage)
}

fn load(args: &SourceArgs) -> Result<StatisticsSystem, CliError> {
    match (&args.source.file, args.source.preset) {
        (Some(path), _) => {
            let p = &args.params;
            if p.dim.is_some() || p.q.is_some() || p.phi.is_some() {
                return Err(usage("--dim, --q and --phi only apply to --preset"));
            }
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            StatisticsSystem::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
        }
        (None, Some(kind)) => preset_from(kind, &args.params),
        (None, None) => Err(usage("one of --file or --preset is required")),
    }
}

fn space(system: StatisticsSystem, tol: Tolerance) -> FockSpace {
    FockSpace::with_config(
        system,
        FockConfig {
            cap: DEFAULT_SECTOR_CAP,
            tol,
        },
    )
}

fn code(passed: bool) -> u8 {
    if passed {
        0
    } else {
        1
    }
}

fn validate(system: &StatisticsSystem, tol: Tolerance, as_json: bool) -> Result<u8, CliError> {
    let report = validate_system(system, tol);
    let passed = report.passed();
    if as_json {
        print_json(&json!({
            "system": system_json(system),
            "eps": tol.eps(),
            "checks": report.checks,
            "passed": passed,
        }));
    } else {
        println!("system: {} (N = {}, eps = {:e})", system.label, system.dim(), tol.eps());
        print!("{report}");
        println!("result: {}", if passed { "pass" } else { "fail" });
    }
    Ok(code(passed))
}

fn report_passed(report: &SectorReport) -> bool {
    report.checks.values().all(|c| c.status != CheckStatus::Fail)
}

fn print_checks(report: &SectorReport) {
    for (name, check) in &report.checks {
        println!("  {name:<22} {:<7} {:.3e}", check.status, check.residual);
    }
}

/// Largest matrix printed in text mode.
const MAX_TEXT_MATRIX: usize = 64;

fn gram(space: &FockSpace, n: usize, quotient: bool, as_json: bool) -> Result<u8, CliError> {
    let gram = if quotient {
        space.quotient_gram(n)?
    } else {
        space.gram_matrix(n)?
    };
    let spectrum = space.gram_spectrum(n, quotient)?;
    let positivity = if quotient {
        space.quotient_positivity_report(n)?
    } else {
        space.positivity_report(n)?
    };
    let report = space.sector_report(n, quotient)?;
    let passed = report_passed(&report);
    if as_json {
        print_json(&json!({
            "system": system_json(space.system()),
            "sector": n,
            "quotient": quotient,
            "gram": matrix_json(&gram.mat),
            "spectrum": spectrum,
            "positivity": positivity,
            "report": report,
            "passed": passed,
        }));
        return Ok(code(passed));
    }
    let kind = if quotient { "quotient" } else { "full" };
    println!("sector {n} ({kind}), dim {}", gram.mat.nrows());
    if gram.mat.nrows() <= MAX_TEXT_MATRIX {
        println!("{}", matrix_text(&gram.mat));
    } else {
        println!("(matrix omitted, use --json)");
    }
    println!("spectrum: {}", reals_text(&spectrum));
    match positivity.min_eig {
        Some(e) => println!("min_eig: {e}"),
        None => println!("min_eig: none"),
    }
    println!("kernel_dim: {}", positivity.kernel_dim);
    println!("positive_semidefinite: {}", positivity.positive_semidefinite);
    println!("positive_definite: {}", positivity.positive_definite);
    println!("checks:");
    print_checks(&report);
    Ok(code(passed))
}

fn kernel(space: &FockSpace, as_json: bool) -> Result<u8, CliError> {
    let basis = space.p2_kernel();
    if as_json {
        print_json(&json!({
            "system": system_json(space.system()),
            "dim": basis.len(),
            "basis": basis.iter().map(vector_json).collect::<Vec<_>>(),
        }));
    } else {
        println!("kernel of P2 = id + T~: dim {}", basis.len());
        for (k, v) in basis.iter().enumerate() {
            println!("  v{} = {}", k + 1, vector_text(v));
        }
    }
    Ok(0)
}

fn quotient(space: &FockSpace, max_sector: usize, as_json: bool) -> Result<u8, CliError> {
    let reports = (0..=max_sector)
        .map(|n| space.sector_report(n, true))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(report_passed);
    if as_json {
        print_json(&json!({
            "system": system_json(space.system()),
            "sectors": reports,
            "passed": passed,
        }));
        return Ok(code(passed));
    }
    println!("{:>6}  {:>6}  {:>12}  {:>12}", "sector", "dim", "quotient_dim", "min_eig");
    for r in &reports {
        let min_eig = r.min_eig.map_or("none".to_string(), |e| format!("{e:.6e}"));
        println!(
            "{:>6}  {:>6}  {:>12}  {:>12}",
            r.sector,
            r.dim,
            r.quotient_dim.unwrap_or(r.dim),
            min_eig
        );
        print_checks(r);
    }
    println!("result: {}", if passed { "pass" } else { "fail" });
    Ok(code(passed))
}

fn normal_order(space: &FockSpace, text: &str, verify: Option<usize>, as_json: bool) -> Result<u8, CliError> {
    let tol = space.config().tol;
    let expr = parse_expression(text, space.dim()).map_err(usage)?;
    let (nf, stats) = normal_order_with(&expr, &space.system().cross, tol);

    let mut checks = Vec::new();
    if let Some(max) = verify {
        for n in 0..=max {
            let lhs = evaluate_on_sector(&expr, space, n)?;
            let rhs = evaluate_on_sector(&nf, space, n)?;
            checks.push((n, lhs.max_abs_diff(&rhs)));
        }
    }
    let passed = checks.iter().all(|(_, r)| tol.accepts(*r));
    let status = |r: f64| if tol.accepts(r) { CheckStatus::Pass } else { CheckStatus::Fail };

    if as_json {
        let terms: Vec<_> = nf
            .terms()
            .map(|(w, c)| {
                let word: Vec<String> = w.iter().map(ToString::to_string).collect();
                json!({ "word": word.join(" "), "coeff": complex_json(*c) })
            })
            .collect();
        let verify_json = verify.map(|_| {
            checks
                .iter()
                .map(|(n, r)| json!({ "sector": n, "residual": r, "status": status(*r) }))
                .collect::<Vec<_>>()
        });
        print_json(&json!({
            "input": expr.to_string(),
            "normal_form": nf.to_string(),
            "terms": terms,
            "stats": {
                "generations": stats.generations,
                "rewrites": stats.rewrites,
                "step_bound": stats.step_bound,
            },
            "verify": verify_json,
            "passed": passed,
        }));
        return Ok(code(passed));
    }
    println!("{nf}");
    for (n, r) in &checks {
        println!("  sector {n}: residual {r:.3e} {}", status(*r));
    }
    Ok(code(passed))
}

fn catalog(
    preset: Option<PresetKind>,
    params: &PresetParams,
    emit: Option<&Option<std::path::PathBuf>>,
    tol: Tolerance,
    as_json: bool,
) -> Result<u8, CliError> {
    let Some(kind) = preset else {
        if as_json {
            let list: Vec<_> = PresetKind::ALL
                .iter()
                .map(|k| json!({ "name": k.name(), "summary": k.summary() }))
                .collect();
            print_json(&json!(list));
        } else {
            for k in PresetKind::ALL {
                println!("{:<10} {}", k.name(), k.summary());
            }
        }
        return Ok(0);
    };
    let system = preset_from(kind, params)?;
    match emit {
        Some(None) => print!("{}", system.to_json()),
        Some(Some(path)) => write_file(path, &system.to_json())?,
        None => {
            let report = validate_system(&system, tol);
            if as_json {
                print_json(&json!({
                    "system": system_json(&system),
                    "passed": report.passed(),
                }));
            } else {
                println!("{} (N = {})", system.label, system.dim());
                println!("braid: {}", if system.braid.is_some() { "yes" } else { "no" });
                println!("key: {}", system.content_key());
                println!("validation: {}", if report.passed() { "pass" } else { "fail" });
            }
        }
    }
    Ok(0)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}
