//! Scenario files: a line-oriented `key = value` format with sections.
//!
//! ```text
//! # comment
//! symmetry = su2            # u1 | su2 | so3 | u2 | abelian(n) | trivial | table
//! structure = u1
//! truncation = 6
//!
//! [symmetry.table]          # required when symmetry = table
//! name = broken
//! dim = 3
//! f 1 2 3 = 1               # f^c_{ab}, 1-based indices a b c
//!
//! [series]
//! name = ch                 # ch | a_hat
//! degree = 4
//! normalization = 2pi       # 2pi | 4pi
//!
//! [monopole]
//! charge = 1
//! grid = 200x400            # n_theta x n_phi
//! lambda = 1, -1/2, 3/4
//! generators = 1, 2, 3
//!
//! [suites]
//! run = verify-core, universal-check, series, anomaly
//! ```
//!
//! Unknown keys and sections are errors. All errors are collected and
//! reported with their line numbers.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::lie::LieAlgebraData;
use crate::scalar::{Rational, Scalar};
use crate::series::{AHatConvention, CharSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    /// 1-based; 0 for errors about the file as a whole.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Schema(Vec<SchemaError>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    VerifyCore,
    UniversalCheck,
    Series,
    Anomaly,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::VerifyCore, Suite::UniversalCheck, Suite::Series, Suite::Anomaly];

    pub fn label(self) -> &'static str {
        match self {
            Suite::VerifyCore => "verify-core",
            Suite::UniversalCheck => "universal-check",
            Suite::Series => "series",
            Suite::Anomaly => "anomaly",
        }
    }

    /// Bit in the failure exit code.
    pub fn bit(self) -> i32 {
        match self {
            Suite::VerifyCore => 1,
            Suite::UniversalCheck => 2,
            Suite::Series => 4,
            Suite::Anomaly => 8,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.label() == s.trim())
            .ok_or_else(|| format!("unknown suite `{}`", s.trim()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A built-in algebra name or an explicit table of `f^c_{ab}`.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraSpec {
    Named(String),
    Table {
        name: String,
        dim: usize,
        /// Zero-based `(a, b, c, f^c_{ab})`.
        entries: Vec<(usize, usize, usize, Scalar)>,
    },
}

impl AlgebraSpec {
    pub fn resolve(&self) -> LieAlgebraData {
        match self {
            AlgebraSpec::Named(n) => LieAlgebraData::by_name(n).expect("checked while parsing"),
            AlgebraSpec::Table { name, dim, entries } => {
                let mut table = vec![Scalar::zero(); dim * dim * dim];
                for (a, b, c, v) in entries {
                    table[(a * dim + b) * dim + c] = v.clone();
                }
                LieAlgebraData::from_table(name, *dim, table).expect("size checked while parsing")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub name: String,
    pub degree: u32,
    pub convention: AHatConvention,
}

impl SeriesSpec {
    pub fn build(&self) -> CharSeries {
        CharSeries::by_name(&self.name, self.degree, self.convention).expect("checked while parsing")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonopoleSpec {
    pub charge: i64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub lambdas: Vec<Rational>,
    /// Zero-based rotation generators.
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub symmetry: AlgebraSpec,
    pub structure: AlgebraSpec,
    pub truncation: u32,
    pub series: Option<SeriesSpec>,
    pub monopole: Option<MonopoleSpec>,
    pub suites: Vec<Suite>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    Top,
    SymmetryTable,
    StructureTable,
    Series,
    Monopole,
    Suites,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "symmetry.table" => Section::SymmetryTable,
            "structure.table" => Section::StructureTable,
            "series" => Section::Series,
            "monopole" => Section::Monopole,
            "suites" => Section::Suites,
            _ => return None,
        })
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Top => &["symmetry", "structure", "truncation"],
            Section::SymmetryTable | Section::StructureTable => &["name", "dim"],
            Section::Series => &["name", "degree", "normalization"],
            Section::Monopole => &["charge", "grid", "lambda", "generators"],
            Section::Suites => &["run"],
        }
    }

    fn label(self) -> &'static str {
        match self {
            Section::Top => "top level",
            Section::SymmetryTable => "[symmetry.table]",
            Section::StructureTable => "[structure.table]",
            Section::Series => "[series]",
            Section::Monopole => "[monopole]",
            Section::Suites => "[suites]",
        }
    }
}

/// `(line, a, b, c, value)` for one `f a b c = value` entry.
type TableEntry = (usize, usize, usize, usize, String);

#[derive(Default)]
struct Raw {
    values: std::collections::BTreeMap<(u8, String), (usize, String)>,
    entries: [Vec<TableEntry>; 2],
    sections: std::collections::BTreeMap<u8, usize>,
}

fn section_id(s: Section) -> u8 {
    s as u8
}

impl Raw {
    fn get(&self, s: Section, key: &str) -> Option<&(usize, String)> {
        self.values.get(&(section_id(s), key.to_string()))
    }

    fn has(&self, s: Section) -> bool {
        self.sections.contains_key(&section_id(s))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

fn lex(text: &str, errors: &mut Vec<SchemaError>) -> Raw {
    let mut raw = Raw::default();
    let mut section = Section::Top;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SchemaError { line: ln, message: msg };
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            match Section::parse(name.trim()) {
                Some(s) => {
                    if raw.sections.insert(section_id(s), ln).is_some() {
                        errors.push(err(format!("duplicate section [{}]", name.trim())));
                    }
                    section = s;
                }
                None => errors.push(err(format!("unknown section [{}]", name.trim()))),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(err(format!("expected `key = value`, found `{line}`")));
            continue;
        };
        let (key, value) = (key.trim(), value.trim().to_string());
        if matches!(section, Section::SymmetryTable | Section::StructureTable) && key.starts_with("f ") {
            let idx: Vec<&str> = key.split_whitespace().skip(1).collect();
            let parsed: Vec<usize> = idx.iter().filter_map(|s| s.parse().ok()).collect();
            if idx.len() != 3 || parsed.len() != 3 || parsed.contains(&0) {
                errors.push(err(format!("table entry `{key}` needs three 1-based indices")));
                continue;
            }
            let t = (section == Section::StructureTable) as usize;
            raw.entries[t].push((ln, parsed[0] - 1, parsed[1] - 1, parsed[2] - 1, value));
            continue;
        }
        if !section.keys().contains(&key) {
            errors.push(err(format!("unknown key `{key}` in {}", section.label())));
            continue;
        }
        if raw.values.insert((section_id(section), key.to_string()), (ln, value)).is_some() {
            errors.push(err(format!("duplicate key `{key}`")));
        }
    }
    raw
}

fn parse_list<T>(
    line: usize,
    value: &str,
    what: &str,
    parse: impl Fn(&str) -> Option<T>,
    errors: &mut Vec<SchemaError>,
) -> Vec<T> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match parse(item) {
            Some(x) => out.push(x),
            None => errors.push(SchemaError {
                line,
                message: format!("invalid {what} `{item}`"),
            }),
        }
    }
    out
}

fn parse_algebra(raw: &Raw, key: &str, table: Section, errors: &mut Vec<SchemaError>) -> Option<AlgebraSpec> {
    let Some((line, value)) = raw.get(Section::Top, key) else {
        errors.push(SchemaError {
            line: 0,
            message: format!("missing required key `{key}`"),
        });
        return None;
    };
    let t = (table == Section::StructureTable) as usize;
    if value != "table" {
        if raw.has(table) {
            errors.push(SchemaError {
                line: raw.sections[&section_id(table)],
                message: format!("{} given but {key} = {value}", table.label()),
            });
        }
        return match LieAlgebraData::by_name(value) {
            Ok(_) => Some(AlgebraSpec::Named(value.clone())),
            Err(e) => {
                errors.push(SchemaError { line: *line, message: e.to_string() });
                None
            }
        };
    }
    if !raw.has(table) {
        errors.push(SchemaError {
            line: *line,
            message: format!("{key} = table needs a {} section", table.label()),
        });
        return None;
    }
    let name = raw.get(table, "name").map(|v| v.1.clone()).unwrap_or_else(|| format!("{key}_table"));
    let Some((dl, dv)) = raw.get(table, "dim") else {
        errors.push(SchemaError {
            line: raw.sections[&section_id(table)],
            message: format!("{} needs `dim`", table.label()),
        });
        return None;
    };
    let Ok(dim) = dv.parse::<usize>() else {
        errors.push(SchemaError { line: *dl, message: format!("invalid dim `{dv}`") });
        return None;
    };
    let mut entries = Vec::new();
    for (ln, a, b, c, v) in &raw.entries[t] {
        if *a >= dim || *b >= dim || *c >= dim {
            errors.push(SchemaError {
                line: *ln,
                message: format!("index out of range for dim {dim}"),
            });
            continue;
        }
        match v.parse::<Scalar>() {
            Ok(s) => entries.push((*a, *b, *c, s)),
            Err(_) => errors.push(SchemaError { line: *ln, message: format!("invalid value `{v}`") }),
        }
    }
    Some(AlgebraSpec::Table { name, dim, entries })
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    /// Resolved form with every default written out; parsing it gives back
    /// the same scenario.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let alg = |spec: &AlgebraSpec| match spec {
            AlgebraSpec::Named(n) => n.clone(),
            AlgebraSpec::Table { .. } => "table".to_string(),
        };
        s.push_str(&format!("symmetry = {}\n", alg(&self.symmetry)));
        s.push_str(&format!("structure = {}\n", alg(&self.structure)));
        s.push_str(&format!("truncation = {}\n", self.truncation));
        for (spec, header) in [(&self.symmetry, "symmetry.table"), (&self.structure, "structure.table")] {
            if let AlgebraSpec::Table { name, dim, entries } = spec {
                s.push_str(&format!("\n[{header}]\nname = {name}\ndim = {dim}\n"));
                for (a, b, c, v) in entries {
                    s.push_str(&format!("f {} {} {} = {}\n", a + 1, b + 1, c + 1, v));
                }
            }
        }
        if let Some(series) = &self.series {
            s.push_str(&format!(
                "\n[series]\nname = {}\ndegree = {}\nnormalization = {}\n",
                series.name,
                series.degree,
                series.convention.label()
            ));
        }
        if let Some(m) = &self.monopole {
            let lambdas: Vec<String> = m.lambdas.iter().map(ToString::to_string).collect();
            let gens: Vec<String> = m.generators.iter().map(|g| (g + 1).to_string()).collect();
            s.push_str(&format!(
                "\n[monopole]\ncharge = {}\ngrid = {}x{}\nlambda = {}\ngenerators = {}\n",
                m.charge,
                m.n_theta,
                m.n_phi,
                lambdas.join(", "),
                gens.join(", ")
            ));
        }
        let suites: Vec<&str> = self.suites.iter().map(|s| s.label()).collect();
        s.push_str(&format!("\n[suites]\nrun = {}\n", suites.join(", ")));
        s
    }
}

impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut errors = Vec::new();
        let raw = lex(text, &mut errors);
        let symmetry = parse_algebra(&raw, "symmetry", Section::SymmetryTable, &mut errors);
        let structure = parse_algebra(&raw, "structure", Section::StructureTable, &mut errors);

        let truncation = match raw.get(Section::Top, "truncation") {
            Some((ln, v)) => match v.parse::<u32>() {
                Ok(t) => Some(t),
                Err(_) => {
                    errors.push(SchemaError { line: *ln, message: format!("invalid truncation `{v}`") });
                    None
                }
            },
            None => {
                errors.push(SchemaError { line: 0, message: "missing required key `truncation`".into() });
                None
            }
        };

        let series = if raw.has(Section::Series) {
            let name = raw.get(Section::Series, "name").map(|v| v.1.clone()).unwrap_or_else(|| "ch".into());
            let degree = match raw.get(Section::Series, "degree") {
                Some((ln, v)) => v.parse::<u32>().ok().filter(|d| d % 2 == 0).unwrap_or_else(|| {
                    errors.push(SchemaError { line: *ln, message: format!("invalid degree `{v}` (even integer)") });
                    4
                }),
                None => 4,
            };
            let convention = match raw.get(Section::Series, "normalization") {
                Some((ln, v)) => v.parse::<AHatConvention>().unwrap_or_else(|_| {
                    errors.push(SchemaError { line: *ln, message: format!("invalid normalization `{v}` (2pi or 4pi)") });
                    AHatConvention::TwoPi
                }),
                None => AHatConvention::TwoPi,
            };
            if !matches!(name.as_str(), "ch" | "a_hat") {
                let ln = raw.get(Section::Series, "name").map(|v| v.0).unwrap_or(0);
                errors.push(SchemaError { line: ln, message: format!("unknown series `{name}` (ch or a_hat)") });
            }
            Some(SeriesSpec { name, degree, convention })
        } else {
            None
        };

        let monopole = if raw.has(Section::Monopole) {
            let charge = match raw.get(Section::Monopole, "charge") {
                Some((ln, v)) => v.parse::<i64>().unwrap_or_else(|_| {
                    errors.push(SchemaError { line: *ln, message: format!("invalid charge `{v}`") });
                    0
                }),
                None => {
                    errors.push(SchemaError {
                        line: raw.sections[&section_id(Section::Monopole)],
                        message: "[monopole] needs `charge`".into(),
                    });
                    0
                }
            };
            let (n_theta, n_phi) = match raw.get(Section::Monopole, "grid") {
                Some((ln, v)) => {
                    let parsed = v
                        .split_once('x')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
                    parsed.unwrap_or_else(|| {
                        errors.push(SchemaError { line: *ln, message: format!("invalid grid `{v}` (expected NxM)") });
                        (0, 0)
                    })
                }
                None => (200, 400),
            };
            let lambdas = match raw.get(Section::Monopole, "lambda") {
                Some((ln, v)) => parse_list(*ln, v, "lambda", |s| s.parse::<Rational>().ok(), &mut errors),
                None => vec![Rational::from_integer(1.into())],
            };
            let generators = match raw.get(Section::Monopole, "generators") {
                Some((ln, v)) => parse_list(
                    *ln,
                    v,
                    "generator",
                    |s| s.parse::<usize>().ok().filter(|g| (1..=3).contains(g)).map(|g| g - 1),
                    &mut errors,
                ),
                None => vec![0, 1, 2],
            };
            Some(MonopoleSpec {
                charge,
                n_theta,
                n_phi,
                lambdas,
                generators,
            })
        } else {
            None
        };

        let suites = match raw.get(Section::Suites, "run") {
            Some((ln, v)) => parse_list(*ln, v, "suite", |s| s.parse::<Suite>().ok(), &mut errors),
            None => {
                let mut s = vec![Suite::VerifyCore, Suite::UniversalCheck];
                if series.is_some() {
                    s.push(Suite::Series);
                }
                if monopole.is_some() {
                    s.push(Suite::Anomaly);
                }
                s
            }
        };
        let run_line = raw.get(Section::Suites, "run").map(|v| v.0).unwrap_or(0);
        if suites.contains(&Suite::Series) && series.is_none() {
            errors.push(SchemaError { line: run_line, message: "suite `series` needs a [series] section".into() });
        }
        if suites.contains(&Suite::Anomaly) && monopole.is_none() {
            errors.push(SchemaError { line: run_line, message: "suite `anomaly` needs a [monopole] section".into() });
        }
        if let Some(t) = truncation {
            if t < 4 && suites.iter().any(|s| matches!(s, Suite::Series | Suite::Anomaly)) {
                let ln = raw.get(Section::Top, "truncation").map(|v| v.0).unwrap_or(0);
                errors.push(SchemaError { line: ln, message: format!("truncation {t} < 4 with series checks requested") });
            }
        }

        if !errors.is_empty() {
            errors.sort_by_key(|e| e.line);
            return Err(ScenarioError::Schema(errors));
        }
        Ok(Scenario {
            symmetry: symmetry.expect("no errors"),
            structure: structure.expect("no errors"),
            truncation: truncation.expect("no errors"),
            series,
            monopole,
            suites,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<SchemaError> {
        match text.parse::<Scenario>() {
            Err(ScenarioError::Schema(e)) => e,
            other => panic!("expected schema errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_file() {
        let s: Scenario = "symmetry = su2\nstructure = u1\ntruncation = 6\n".parse().unwrap();
        assert_eq!(s.symmetry, AlgebraSpec::Named("su2".into()));
        assert_eq!(s.suites, vec![Suite::VerifyCore, Suite::UniversalCheck]);
        assert!(s.series.is_none() && s.monopole.is_none());
    }

    #[test]
    fn unknown_key_names_key_and_line() {
        let e = errors("symmetry = su2\nstructure_grp = u1\nstructure = u1\ntruncation = 6\n");
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].line, 2);
        assert!(e[0].message.contains("structure_grp"));
    }

    #[test]
    fn missing_required_keys() {
        let e = errors("symmetry = su2\n");
        assert!(e.iter().any(|x| x.message.contains("`structure`")));
        assert!(e.iter().any(|x| x.message.contains("`truncation`")));
    }

    #[test]
    fn monopole_block() {
        let s: Scenario = "symmetry = so3\nstructure = u1\ntruncation = 4\n[monopole]\ncharge = 2\ngrid = 200x400\n"
            .parse()
            .unwrap();
        let m = s.monopole.unwrap();
        assert_eq!((m.charge, m.n_theta, m.n_phi), (2, 200, 400));
        assert_eq!(m.generators, vec![0, 1, 2]);
        assert!(s.suites.contains(&Suite::Anomaly));
    }

    #[test]
    fn table_and_round_trip() {
        let text = "symmetry = table\nstructure = u1\ntruncation = 6\n[symmetry.table]\nname = t\ndim = 2\nf 1 2 2 = 1\nf 2 1 2 = -1\n[series]\nname = a_hat\ndegree = 8\nnormalization = 4pi\n[monopole]\ncharge = -3\ngrid = 20x16\nlambda = 1, -1/2\n";
        let s: Scenario = text.parse().unwrap();
        assert!(matches!(&s.symmetry, AlgebraSpec::Table { dim: 2, entries, .. } if entries.len() == 2));
        assert!(s.symmetry.resolve().validate().accepted());
        let again: Scenario = s.to_text().parse().unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_text(), s.to_text());
    }

    #[test]
    fn series_checks_need_truncation_four() {
        let e = errors("symmetry = su2\nstructure = u1\ntruncation = 2\n[series]\nname = ch\n");
        assert_eq!(e[0].line, 3);
    }

    #[test]
    fn bad_values() {
        let e = errors("symmetry = su3\nstructure = u1\ntruncation = x\n[monopole]\ncharge = 1\ngrid = 20by10\ngenerators = 4\n[nope]\n");
        let lines: Vec<usize> = e.iter().map(|x| x.line).collect();
        assert_eq!(lines, vec![1, 3, 6, 7, 8]);
    }
}
