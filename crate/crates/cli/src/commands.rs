//! Subcommands. Each returns its full output so callers can buffer it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use websym::darboux::discriminant_cofactor;
use websym::determining::{explicit_g_coefficients, normalized_system};
use websym::lie::{closure_check, ClosureMode, StructureConstants};
use websym::numverify::{
    verify_certificate, verify_foliation_certificate, Certificate, SamplePlan, DEFAULT_HI, DEFAULT_LO, DEFAULT_POINTS,
    DEFAULT_TOL,
};
use websym::solver::{solve_polynomial_with, Limits, DEFAULT_MAX_UNKNOWNS};
use websym::web::{product_formula_holds, resultant_identity_holds, WebForm};
use websym::{Error, VectorField, Web};

use crate::corpus;
use crate::webfile::{FileError, WebFile};

/// Environment variable capping the unknowns of the exact solver.
pub const MAX_UNKNOWNS_ENV: &str = "WEBSYM_MAX_UNKNOWNS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "websym", version, about = "Infinitesimal symmetries of planar webs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the z-discriminant and check the resultant identity.
    Discriminant { file: PathBuf },
    /// Print the normalized system of a web of degree at least 3.
    Normalize { file: PathBuf },
    /// Find all polynomial symmetries up to a total degree.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Check a candidate symmetry numerically.
    Verify {
        file: PathBuf,
        /// Components as `a1,a2`.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        /// Decimal or `0x` hexadecimal.
        #[arg(long, value_parser = parse_seed, default_value = "0x5745_4253_594d")]
        seed: u64,
    },
    /// List or replay the embedded corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Run {
        #[arg(long)]
        json: bool,
        /// Entries to run; all when empty.
        names: Vec<String>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn verdict(stdout: String, passed: bool) -> Outcome {
        Outcome { code: if passed { EXIT_OK } else { EXIT_VERIFICATION }, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Outcome {
        let mut stderr = message.into();
        stderr.push('\n');
        Outcome { code, stdout: String::new(), stderr }
    }

    fn from_error(e: &Error) -> Outcome {
        let code = match e {
            Error::ResourceLimit { .. } => EXIT_RESOURCE,
            Error::NotASymmetry { .. } => EXIT_VERIFICATION,
            _ => EXIT_VALIDATION,
        };
        Outcome::fail(code, format!("error: {e}"))
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Solver limits, honouring the environment override.
pub fn limits_from_env() -> Result<Limits, String> {
    match std::env::var(MAX_UNKNOWNS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(|max_unknowns| Limits { max_unknowns })
            .ok_or_else(|| format!("{MAX_UNKNOWNS_ENV} must be a positive integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(Limits { max_unknowns: DEFAULT_MAX_UNKNOWNS }),
        Err(e) => Err(format!("{MAX_UNKNOWNS_ENV}: {e}")),
    }
}

fn read_file(path: &Path) -> Result<WebFile, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("error: {}: {e}", path.display())))?;
    WebFile::parse(&text).map_err(|e| file_error(path, &e))
}

fn file_error(path: &Path, e: &FileError) -> Outcome {
    Outcome::fail(EXIT_VALIDATION, format!("error: {}:{e}", path.display()))
}

fn load(path: &Path) -> Result<(WebFile, Web), Outcome> {
    let file = read_file(path)?;
    let web = file.to_web().map_err(|e| file_error(path, &e))?;
    Ok((file, web))
}

fn header(out: &mut String, web: &Web) {
    let c = web.coords();
    let _ = writeln!(out, "web: {} (degree {}, coordinates {}, {})", web.label(), web.degree(), c.first, c.second);
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Discriminant { file } => discriminant(&file),
        Command::Normalize { file } => normalize(&file),
        Command::Solve { file, degree } => match limits_from_env() {
            Ok(limits) => solve(&file, degree, &limits),
            Err(m) => Err(Outcome::fail(EXIT_VALIDATION, format!("error: {m}"))),
        },
        Command::Verify { file, field, tol, points, seed } => verify(&file, &field, tol, points, seed),
        Command::Corpus { action } => match limits_from_env() {
            Ok(limits) => corpus_cmd(action, &limits),
            Err(m) => Err(Outcome::fail(EXIT_VALIDATION, format!("error: {m}"))),
        },
    };
    result.unwrap_or_else(|o| o)
}

pub fn discriminant(path: &Path) -> Result<Outcome, Outcome> {
    let (_, web) = load(path)?;
    let mut out = String::new();
    header(&mut out, &web);
    let err = |e: Error| Outcome::from_error(&e);
    let delta = web.discriminant().map_err(err)?;
    let _ = writeln!(out, "discriminant: {delta}");
    let mut ok = true;
    if matches!(web.form(), WebForm::Slopes(_)) {
        let reduced = web.reduced_discriminant().map_err(err)?;
        let _ = writeln!(out, "reduced discriminant: {reduced}");
        let product = product_formula_holds(&web).map_err(err)?;
        ok &= product;
        let _ = writeln!(out, "product formula: {}", pass(product));
    }
    let res = web.resultant().map_err(err)?;
    let _ = writeln!(out, "resultant: {res}");
    let identity = resultant_identity_holds(&web).map_err(err)?;
    ok &= identity;
    let _ = writeln!(out, "resultant identity: {}", pass(identity));
    Ok(Outcome::verdict(out, ok))
}

pub fn normalize(path: &Path) -> Result<Outcome, Outcome> {
    let (_, web) = load(path)?;
    let n = normalized_system(&web).map_err(|e| Outcome::from_error(&e))?;
    let c = web.coords();
    let (s, t) = (c.first, c.second);
    let mut out = String::new();
    header(&mut out, &web);
    let rows = [format!("-d{s}(a2)"), format!("d{s}(a1) - d{t}(a2)"), format!("d{t}(a1)")];
    let _ = writeln!(out, "differential rows (w + g a1 + h a2 = 0):");
    for (k, w) in rows.iter().enumerate() {
        let i = n.g_index(k);
        let _ = writeln!(out, "  w = {w}: g_{i} = {}, h_{i} = {}", n.g_rows[k][0], n.g_rows[k][1]);
    }
    if n.compat.is_empty() {
        let _ = writeln!(out, "C_d: empty");
    } else {
        let _ = writeln!(out, "C_{} ({} x 2):", n.degree, n.compat.len());
        for (k, r) in n.compat.iter().enumerate() {
            let _ = writeln!(out, "  row {} (leaf {}): [{}, {}]", n.compat_index(k), k + 4, r[0], r[1]);
        }
    }
    let recon = n.reconstruction_holds();
    let compat = n.compatibility_holds();
    let explicit = explicit_g_coefficients(&web)
        .map(|e| (0..3).all(|k| e.g[k] == n.g_rows[k][0] && e.h[k] == n.g_rows[k][1]))
        .unwrap_or(false);
    let _ = writeln!(out, "reconstruction identity: {}", pass(recon));
    let _ = writeln!(out, "compatibility identity: {}", pass(compat));
    let _ = writeln!(out, "explicit coefficients: {}", pass(explicit));
    Ok(Outcome::verdict(out, recon && compat && explicit))
}

fn write_constants(out: &mut String, constants: &StructureConstants) {
    let StructureConstants::Exact(c) = constants else {
        return;
    };
    let n = c.len();
    let mut any = false;
    for i in 0..n {
        for j in i + 1..n {
            let terms: Vec<String> = c[i][j]
                .iter()
                .enumerate()
                .filter(|(_, v)| !num_is_zero(v))
                .map(|(k, v)| {
                    if *v == websym::Rational::from_integer(1.into()) {
                        format!("X{}", k + 1)
                    } else {
                        format!("({v})*X{}", k + 1)
                    }
                })
                .collect();
            if !terms.is_empty() {
                any = true;
                let _ = writeln!(out, "  [X{}, X{}] = {}", i + 1, j + 1, terms.join(" + "));
            }
        }
    }
    if !any && n > 1 {
        let _ = writeln!(out, "  abelian");
    }
}

fn num_is_zero(v: &websym::Rational) -> bool {
    *v == websym::Rational::from_integer(0.into())
}

pub fn solve(path: &Path, degree: u32, limits: &Limits) -> Result<Outcome, Outcome> {
    let (_, web) = load(path)?;
    let sol = solve_polynomial_with(&web, degree, limits).map_err(|e| match e {
        Error::NotRational | Error::NoClosedFormSlopes => Outcome::fail(
            EXIT_VALIDATION,
            format!(
                "error: {e}\nthe exact solver needs rational slopes; check candidate generators with \
                 `websym verify {} --field a1,a2`",
                path.display()
            ),
        ),
        e => Outcome::from_error(&e),
    })?;
    let mut out = String::new();
    header(&mut out, &web);
    let _ = writeln!(out, "ansatz: total degree {}, {} unknowns, {} equations", sol.degree, sol.unknowns, sol.equations);
    let _ = writeln!(out, "dimension: {}", sol.dimension());
    let _ = writeln!(out, "stabilized: {}", if sol.stabilized { "yes" } else { "no" });
    let _ = writeln!(out, "basis:");
    for (k, f) in sol.fields.iter().enumerate() {
        let _ = writeln!(out, "  X{} = {f}", k + 1);
    }
    if sol.excluded.is_empty() {
        let _ = writeln!(out, "excluded loci: none");
    } else {
        let loci: Vec<String> = sol.excluded.iter().map(|p| format!("{p} = 0")).collect();
        let _ = writeln!(out, "excluded loci: {}", loci.join(", "));
    }
    let mut ok = true;
    if !sol.fields.is_empty() {
        let r = closure_check(&sol.fields).map_err(|e| Outcome::from_error(&e))?;
        let mode = match r.mode {
            ClosureMode::Exact => String::from("exact"),
            ClosureMode::Numeric { points, max_residual } => format!("numeric, {points} points, {max_residual:.3e}"),
        };
        ok &= r.closed;
        let _ = writeln!(out, "closure: {} ({mode})", if r.closed { "closed" } else { "not closed" });
        if let Some(c) = &r.constants {
            write_constants(&mut out, c);
        }
        let _ = writeln!(out, "discriminant cofactors:");
        for (k, f) in sol.fields.iter().enumerate() {
            match discriminant_cofactor(&web, f) {
                Ok(d) => {
                    ok &= d.verified;
                    let how = if d.exact { "exact" } else { "sampled" };
                    let _ = writeln!(out, "  X{}: K = {} ({how}, {})", k + 1, d.cofactor, pass(d.verified));
                }
                Err(e) => {
                    ok = false;
                    let _ = writeln!(out, "  X{}: {e}", k + 1);
                }
            }
        }
    }
    Ok(Outcome::verdict(out, ok))
}

fn split_field(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut cuts = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => cuts.push(i),
            _ => {}
        }
    }
    match cuts[..] {
        [i] => Some((s[..i].trim(), s[i + 1..].trim())),
        _ => None,
    }
}

fn write_certificate(out: &mut String, cert: &Certificate, kind: &str) {
    let r = &cert.report;
    let _ = writeln!(out, "residual: {kind}");
    let _ = writeln!(out, "max residual: {:.3e} (tolerance {:.1e})", r.max, cert.tolerance);
    let per: Vec<String> = r.per_leaf.iter().enumerate().map(|(k, v)| format!("{}: {v:.3e}", k + 1)).collect();
    let _ = writeln!(out, "per leaf: {}", per.join(", "));
    let _ = writeln!(out, "worst point: ({:.6}, {:.6})", r.worst_point.0, r.worst_point.1);
    let _ = writeln!(out, "points: {} used, {} excluded", r.points_used, r.points_excluded);
    let _ = writeln!(out, "certificate: {}", pass(cert.passed));
}

pub fn verify(path: &Path, field: &str, tol: f64, points: usize, seed: u64) -> Result<Outcome, Outcome> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Outcome::fail(EXIT_VALIDATION, "error: --tol must be positive"));
    }
    if points == 0 {
        return Err(Outcome::fail(EXIT_VALIDATION, "error: --points must be positive"));
    }
    let file = read_file(path)?;
    let (a1, a2) = split_field(field)
        .ok_or_else(|| Outcome::fail(EXIT_VALIDATION, format!("error: --field expects `a1,a2`, got `{field}`")))?;
    let x = VectorField::parse(a1, a2, file.coords)
        .map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("error: --field: {e}")))?;
    let plan = SamplePlan::uniform(points, DEFAULT_LO, DEFAULT_HI, seed);
    let mut out = String::new();
    let cert = match file.to_web() {
        Ok(web) => {
            header(&mut out, &web);
            let _ = writeln!(out, "field: {x}");
            let cert = verify_certificate(&web, &x, &plan, tol).map_err(|e| Outcome::from_error(&e))?;
            write_certificate(&mut out, &cert, "determining equations");
            cert
        }
        Err(file_err) => {
            let Some(fs) = file.foliations() else {
                return Err(file_error(path, &file_err));
            };
            match Web::from_foliations(fs.to_vec(), file.coords) {
                Err(e @ Error::VerticalLeaf { .. }) => {
                    let c = file.coords;
                    let _ = writeln!(
                        out,
                        "web: {} (degree {}, coordinates {}, {})",
                        file.name,
                        fs.len(),
                        c.first,
                        c.second
                    );
                    let _ = writeln!(out, "note: {e}; checking invariance of the first integrals instead");
                    let _ = writeln!(out, "field: {x}");
                    let cert =
                        verify_foliation_certificate(fs, c, &x, &plan, tol).map_err(|e| Outcome::from_error(&e))?;
                    write_certificate(&mut out, &cert, "foliation invariance");
                    cert
                }
                _ => return Err(file_error(path, &file_err)),
            }
        }
    };
    Ok(Outcome::verdict(out, cert.passed))
}

pub fn corpus_cmd(action: CorpusAction, limits: &Limits) -> Result<Outcome, Outcome> {
    match action {
        CorpusAction::List { json } => {
            let entries = corpus::list();
            let out = if json {
                let mut s = serde_json::to_string_pretty(&entries).expect("list serializes");
                s.push('\n');
                s
            } else {
                let mut s = String::new();
                for e in &entries {
                    let dim = e.expected_dimension.map_or_else(|| String::from("infinite"), |d| d.to_string());
                    let _ = writeln!(
                        s,
                        "{:<12} degree {}  {:<14} dimension {:<8} {}",
                        e.name, e.degree, e.mode, dim, e.description
                    );
                }
                s
            };
            Ok(Outcome::ok(out))
        }
        CorpusAction::Run { json, names } => {
            let entries: Vec<&corpus::CorpusEntry> = if names.is_empty() {
                corpus::CORPUS.iter().collect()
            } else {
                names
                    .iter()
                    .map(|n| {
                        corpus::find(n)
                            .ok_or_else(|| Outcome::fail(EXIT_VALIDATION, format!("error: no corpus entry `{n}`")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let report = corpus::run(&entries, limits);
            let out = if json {
                let mut s = report.to_json();
                s.push('\n');
                s
            } else {
                report.to_text()
            };
            Ok(Outcome::verdict(out, report.passed))
        }
    }
}
