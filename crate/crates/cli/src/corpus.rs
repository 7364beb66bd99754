//! The embedded corpus of worked webs and its replay.

use std::thread;

use websym::darboux::discriminant_cofactor;
use websym::determining::{is_exact_symmetry, normalized_system};
use websym::lie::closure_check;
use websym::numverify::{verify_certificate, SamplePlan, DEFAULT_TOL};
use websym::solver::{same_span, solve_polynomial_with, stabilization_scan_with, Limits};
use websym::web::{product_formula_holds, resultant_identity_holds};
use websym::{Error, VectorField, Web};

use crate::report::{CheckReport, CorpusReport, EntryReport, ListEntry};
use crate::webfile::WebFile;

type Field = (&'static str, &'static str);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polynomial {
    /// The degree-`degree` solve spans exactly `basis`.
    Span { degree: u32, basis: &'static [Field] },
    /// Dimensions grow with the degree up to `degree`; `members` are
    /// sample symmetries.
    Unbounded { degree: u32, members: &'static [Field] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
    Mixed,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Mixed => "exact+numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub description: &'static str,
    pub polynomial: Option<Polynomial>,
    /// Non-polynomial generators checked numerically.
    pub numeric: &'static [Field],
}

impl CorpusEntry {
    pub fn mode(&self) -> Mode {
        match (self.polynomial.is_some(), self.numeric.is_empty()) {
            (true, true) => Mode::Exact,
            (false, _) => Mode::Numeric,
            (true, false) => Mode::Mixed,
        }
    }

    /// Dimension of the full algebra when finite.
    pub fn expected_dimension(&self) -> Option<usize> {
        match self.polynomial {
            Some(Polynomial::Unbounded { .. }) => None,
            Some(Polynomial::Span { basis, .. }) => Some(basis.len() + self.numeric.len()),
            None => Some(self.numeric.len()),
        }
    }

    /// Every listed generator, polynomial ones first.
    pub fn expected_basis(&self) -> Vec<Field> {
        let poly: &[Field] = match self.polynomial {
            Some(Polynomial::Span { basis, .. }) => basis,
            Some(Polynomial::Unbounded { members, .. }) => members,
            None => &[],
        };
        poly.iter().chain(self.numeric).copied().collect()
    }

    pub fn file(&self) -> WebFile {
        WebFile::parse(self.source).expect("corpus files are valid")
    }
}

const AFFINE: &[Field] = &[("1", "0"), ("0", "1"), ("x", "y")];

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "one_web",
        source: include_str!("../corpus/one_web.web"),
        description: "1-web of horizontal lines, infinite-dimensional algebra",
        polynomial: Some(Polynomial::Unbounded { degree: 3, members: &[("1", "0"), ("x^2*y", "0"), ("0", "y^3")] }),
        numeric: &[("exp(x)", "0")],
    },
    CorpusEntry {
        name: "two_web",
        source: include_str!("../corpus/two_web.web"),
        description: "2-web of lines with slopes 0 and 1, infinite-dimensional algebra",
        polynomial: Some(Polynomial::Unbounded { degree: 3, members: &[("1", "1"), ("y^2", "y^2"), ("(y - x)^2", "0")] }),
        numeric: &[("exp(y - x)", "0")],
    },
    CorpusEntry {
        name: "parallel",
        source: include_str!("../corpus/parallel.web"),
        description: "parallel 3-web, translations and homotheties",
        polynomial: Some(Polynomial::Span { degree: 3, basis: AFFINE }),
        numeric: &[],
    },
    CorpusEntry {
        name: "cartan",
        source: include_str!("../corpus/cartan.web"),
        description: "two parallel families and the graphs of u(x) = x",
        polynomial: Some(Polynomial::Span { degree: 3, basis: &[("0", "1")] }),
        numeric: &[],
    },
    CorpusEntry {
        name: "muzsnay_uv",
        source: include_str!("../corpus/muzsnay_uv.web"),
        description: "Muzsnay web in prepared coordinates",
        polynomial: Some(Polynomial::Span { degree: 2, basis: &[("0", "1")] }),
        numeric: &[],
    },
    CorpusEntry {
        name: "clairaut",
        source: include_str!("../corpus/clairaut.web"),
        description: "Clairaut web, two linear generators and a logarithmic one",
        polynomial: Some(Polynomial::Span { degree: 1, basis: &[("x", "y"), ("y", "x")] }),
        numeric: &[(
            "x*ln((x^2 - y^2)^2)/2 + y*ln(((x + y)/(x - y))^2)/2",
            "y*ln((x^2 - y^2)^2)/2 + x*ln(((x + y)/(x - y))^2)/2",
        )],
    },
    CorpusEntry {
        name: "zariski_1_1",
        source: include_str!("../corpus/zariski_1_1.web"),
        description: "Zariski web (y')^3 + x y = 0",
        polynomial: None,
        numeric: &[("x^(-1/3)", "0"), ("0", "y^(1/3)"), ("2*x", "4*y")],
    },
    CorpusEntry {
        name: "zariski_3_3",
        source: include_str!("../corpus/zariski_3_3.web"),
        description: "Zariski web (y')^3 + x^3 y^3 = 0, logarithmic branch",
        polynomial: None,
        numeric: &[("x^(-1)", "0"), ("0", "y"), ("x/2", "y*ln(y)")],
    },
    CorpusEntry {
        name: "hexagonal",
        source: include_str!("../corpus/hexagonal.web"),
        description: "hexagonal 3-web of lines",
        polynomial: Some(Polynomial::Span { degree: 3, basis: AFFINE }),
        numeric: &[],
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

pub fn list() -> Vec<ListEntry> {
    CORPUS
        .iter()
        .map(|e| {
            let f = e.file();
            ListEntry {
                name: e.name.to_string(),
                degree: f.to_web().map(|w| w.degree()).unwrap_or(0),
                coordinates: [f.coords.first.to_string(), f.coords.second.to_string()],
                mode: e.mode().as_str().to_string(),
                expected_dimension: e.expected_dimension(),
                expected_basis: e.expected_basis().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
                description: e.description.to_string(),
            }
        })
        .collect()
}

struct Checks(Vec<CheckReport>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>, value: Option<f64>) {
        self.0.push(CheckReport { name: name.to_string(), passed, detail: detail.into(), value });
    }

    fn error(&mut self, name: &str, e: &Error) {
        self.push(name, false, e.to_string(), None);
    }
}

fn fields(list: &[Field], web: &Web) -> Result<Vec<VectorField>, Error> {
    list.iter().map(|(a, b)| VectorField::parse(a, b, web.coords())).collect()
}

/// Replay one entry.
pub fn run_entry(entry: &CorpusEntry, limits: &Limits) -> EntryReport {
    let mut checks = Checks(Vec::new());
    let file = entry.file();
    let mut report = EntryReport {
        name: entry.name.to_string(),
        degree: 0,
        coordinates: [file.coords.first.to_string(), file.coords.second.to_string()],
        mode: entry.mode().as_str().to_string(),
        passed: false,
        dimension: None,
        checks: Vec::new(),
    };
    let web = match file.to_web() {
        Ok(w) => w,
        Err(e) => {
            checks.push("load", false, e.to_string(), None);
            report.checks = checks.0;
            return report;
        }
    };
    report.degree = web.degree();
    let mut verified: Vec<VectorField> = Vec::new();
    let mut algebra: Vec<VectorField> = Vec::new();
    let mut finite = true;

    match entry.polynomial {
        Some(Polynomial::Span { degree, basis }) => match (solve_polynomial_with(&web, degree, limits), fields(basis, &web)) {
            (Ok(sol), Ok(expected)) => {
                let ok = sol.dimension() == expected.len() && same_span(&sol.fields, &expected);
                checks.push(
                    "polynomial solve",
                    ok,
                    format!("degree {degree}: dimension {} (expected {})", sol.dimension(), expected.len()),
                    None,
                );
                verified.extend(sol.fields.iter().cloned());
                algebra.extend(sol.fields);
            }
            (Err(e), _) | (_, Err(e)) => checks.error("polynomial solve", &e),
        },
        Some(Polynomial::Unbounded { degree, members }) => {
            finite = false;
            match stabilization_scan_with(&web, degree, limits) {
                Ok(scan) => {
                    let growing = scan.dimensions.windows(2).all(|p| p[1] > p[0]);
                    checks.push("unbounded growth", growing, format!("dimensions {:?}", scan.dimensions), None);
                }
                Err(e) => checks.error("unbounded growth", &e),
            }
            match fields(members, &web) {
                Ok(fs) => {
                    for f in fs {
                        match is_exact_symmetry(&web, &f) {
                            Ok(true) => {
                                checks.push("member", true, f.to_string(), None);
                                verified.push(f);
                            }
                            Ok(false) => checks.push("member", false, format!("{f} is not a symmetry"), None),
                            Err(e) => checks.error("member", &e),
                        }
                    }
                }
                Err(e) => checks.error("member", &e),
            }
        }
        None => {}
    }

    let plan = SamplePlan::default();
    match fields(entry.numeric, &web) {
        Ok(fs) => {
            for f in fs {
                match verify_certificate(&web, &f, &plan, DEFAULT_TOL) {
                    Ok(c) => {
                        checks.push(
                            "numeric certificate",
                            c.passed,
                            format!("{f}: max residual {:.3e} on {} points", c.report.max, c.report.points_used),
                            Some(c.report.max),
                        );
                        if c.passed {
                            verified.push(f.clone());
                        }
                    }
                    Err(e) => checks.error("numeric certificate", &e),
                }
                algebra.push(f);
            }
        }
        Err(e) => checks.error("numeric certificate", &e),
    }

    if finite {
        report.dimension = Some(algebra.len());
        match closure_check(&algebra) {
            Ok(r) => {
                let exact = matches!(r.mode, websym::lie::ClosureMode::Exact);
                let consistent = !exact || r.constants_consistent();
                checks.push(
                    "closure",
                    r.closed && consistent,
                    format!("dimension {}, {} closure", r.dimension, if exact { "exact" } else { "numeric" }),
                    None,
                );
            }
            Err(e) => checks.error("closure", &e),
        }
    }

    for f in &verified {
        match discriminant_cofactor(&web, f) {
            Ok(d) => checks.push(
                "discriminant cofactor",
                d.verified,
                format!("{f}: K = {}{}", d.cofactor, if d.exact { " (exact)" } else { " (sampled)" }),
                d.max_deviation,
            ),
            Err(e) => checks.error("discriminant cofactor", &e),
        }
    }

    if web.degree() >= 2 {
        match resultant_identity_holds(&web) {
            Ok(ok) => checks.push("resultant identity", ok, "Res = (-1)^(d(d-1)/2) a_0 Δ", None),
            Err(Error::NotRational) => {}
            Err(e) => checks.error("resultant identity", &e),
        }
        if web.rational_slopes().is_some() {
            match product_formula_holds(&web) {
                Ok(ok) => checks.push("product formula", ok, "Δ = a_0^(2d-2) ∏ (p_i - p_j)^2", None),
                Err(e) => checks.error("product formula", &e),
            }
        }
    }
    if web.degree() >= 3 && web.rational_slopes().is_some() {
        match normalized_system(&web) {
            Ok(n) => {
                checks.push("reconstruction identity", n.reconstruction_holds(), "V G = M", None);
                checks.push("compatibility identity", n.compatibility_holds(), "C = -M' + V' V^-1 M", None);
                for f in &verified {
                    if let Some(c) = n.apply_compatibility(f) {
                        checks.push("compatibility kernel", c.iter().all(|r| r.is_zero()), f.to_string(), None);
                    }
                }
            }
            Err(e) => checks.error("normalization", &e),
        }
    }

    report.passed = !checks.0.is_empty() && checks.0.iter().all(|c| c.passed);
    report.checks = checks.0;
    report
}

/// Replay entries concurrently; results keep the input order.
pub fn run(entries: &[&CorpusEntry], limits: &Limits) -> CorpusReport {
    let reports: Vec<EntryReport> = thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run_entry(e, limits))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    });
    CorpusReport::new(reports)
}
