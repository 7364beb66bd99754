//! Plain-text web definitions.
//!
//! ```text
//! # comment
//! name = clairaut
//! variables = x, y
//! degree = 3
//! foliations = [y - x, y + x, y/x]
//! ```
//!
//! Exactly one of `slopes`, `coefficients` (`a_0` first) or `foliations`
//! must be present. `variables` defaults to `x, y`; `degree` is optional
//! and checked against the definition when given.

use std::fmt;

use websym::expr::{parse, Expr};
use websym::{Coords, Var, Web};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FileError {
    FileError { line, message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Definition {
    Slopes(Vec<Expr>),
    Coefficients(Vec<Expr>),
    Foliations(Vec<Expr>),
}

impl Definition {
    fn key(&self) -> &'static str {
        match self {
            Definition::Slopes(_) => "slopes",
            Definition::Coefficients(_) => "coefficients",
            Definition::Foliations(_) => "foliations",
        }
    }

    fn items(&self) -> &[Expr] {
        match self {
            Definition::Slopes(v) | Definition::Coefficients(v) | Definition::Foliations(v) => v,
        }
    }

    fn degree(&self) -> usize {
        match self {
            Definition::Coefficients(v) => v.len().saturating_sub(1),
            Definition::Slopes(v) | Definition::Foliations(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WebFile {
    pub name: String,
    pub coords: Coords,
    pub degree: Option<usize>,
    pub definition: Definition,
    /// Line of the definition, for error reporting.
    pub definition_line: usize,
}

/// Split on commas that are not nested in parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_list(value: &str, line: usize) -> Result<Vec<Expr>, FileError> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| err(line, "expected a bracketed list `[e1, e2, ...]`"))?;
    if inner.trim().is_empty() {
        return Err(err(line, "empty list"));
    }
    split_top_level(inner)
        .into_iter()
        .map(|item| parse(item.trim()).map_err(|e| err(line, format!("in `{}`: {e}", item.trim()))))
        .collect()
}

fn parse_coords(value: &str, line: usize) -> Result<Coords, FileError> {
    let names: Vec<&str> = value.split(',').map(str::trim).collect();
    let [a, b] = names[..] else {
        return Err(err(line, "expected two variable names"));
    };
    let var = |n: &str| Var::from_name(n).ok_or_else(|| err(line, format!("unknown variable `{n}`")));
    Coords::new(var(a)?, var(b)?).ok_or_else(|| err(line, "variables must be two distinct names other than z"))
}

impl WebFile {
    pub fn parse(text: &str) -> Result<WebFile, FileError> {
        let mut name = None;
        let mut coords = None;
        let mut degree = None;
        let mut definition: Option<(Definition, usize)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => {
                    if value.is_empty() {
                        return Err(err(line, "empty name"));
                    }
                    name = Some(value.to_string());
                }
                "variables" => coords = Some(parse_coords(value, line)?),
                "degree" => {
                    let d = value.parse::<usize>().map_err(|_| err(line, "degree must be a positive integer"))?;
                    if d == 0 {
                        return Err(err(line, "degree must be a positive integer"));
                    }
                    degree = Some(d);
                }
                "slopes" | "coefficients" | "foliations" => {
                    if let Some((_, first)) = &definition {
                        return Err(err(line, format!("second web definition (first on line {first})")));
                    }
                    let items = parse_list(value, line)?;
                    let def = match key {
                        "slopes" => Definition::Slopes(items),
                        "coefficients" => Definition::Coefficients(items),
                        _ => Definition::Foliations(items),
                    };
                    definition = Some((def, line));
                }
                other => return Err(err(line, format!("unknown key `{other}`"))),
            }
        }
        let (definition, definition_line) =
            definition.ok_or_else(|| err(text.lines().count().max(1), "missing `slopes`, `coefficients` or `foliations`"))?;
        let file = WebFile {
            name: name.unwrap_or_else(|| String::from("unnamed")),
            coords: coords.unwrap_or(Coords::XY),
            degree,
            definition,
            definition_line,
        };
        if let Some(d) = degree {
            if d != file.definition.degree() {
                return Err(err(
                    definition_line,
                    format!("declared degree {d} but the definition has degree {}", file.definition.degree()),
                ));
            }
        }
        Ok(file)
    }

    /// Build the web; validation errors point at the definition line.
    pub fn to_web(&self) -> Result<Web, FileError> {
        let line = self.definition_line;
        let wrap = |e: websym::Error| err(line, e.to_string());
        let web = match &self.definition {
            Definition::Slopes(s) => Web::from_slopes(s.clone(), self.coords),
            Definition::Foliations(f) => Web::from_foliations(f.clone(), self.coords),
            Definition::Coefficients(c) => {
                let polys = c
                    .iter()
                    .map(|e| e.to_poly().ok_or_else(|| err(line, format!("coefficient `{e}` is not a polynomial"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Web::from_coefficients(polys, self.coords)
            }
        }
        .map_err(wrap)?;
        Ok(web.with_label(self.name.clone()))
    }

    pub fn foliations(&self) -> Option<&[Expr]> {
        match &self.definition {
            Definition::Foliations(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for WebFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "variables = {}, {}", self.coords.first, self.coords.second)?;
        if let Some(d) = self.degree {
            writeln!(f, "degree = {d}")?;
        }
        let items: Vec<String> = self.definition.items().iter().map(ToString::to_string).collect();
        writeln!(f, "{} = [{}]", self.definition.key(), items.join(", "))
    }
}
