//! Running a scenario and rendering the report.
//!
//! A report has a human section, a machine section of
//! `CHECK <name> <PASS|FAIL> <residual|exact>` lines, and the resolved
//! scenario between `--- scenario ---` and `--- end scenario ---`.
//!
//! Exit codes: `0` when every check passes, `2` for usage or scenario
//! errors, `3` for I/O errors, and `16 | bits` when suites fail, with bits
//! `1` verify-core, `2` universal-check, `4` series, `8` anomaly.

use std::fmt;
use std::str::FromStr;

use crate::checks::{
    anomaly_suite, augmentation_check, graded_suite, lie_check, monopole_suite, series_suite, series_table,
    universal_suite, weil_suite, Check, SEED,
};
use crate::scenario::{Scenario, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_SUITE_FAILED: i32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Suite(Suite),
    /// The scenario's listed suites.
    All,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            Ok(Command::All)
        } else {
            s.parse::<Suite>()
                .map(Command::Suite)
                .map_err(|_| format!("unknown command `{s}` (verify-core, universal-check, series, anomaly, all)"))
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Suite(s) => write!(f, "{s}"),
            Command::All => f.write_str("all"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: Vec<Check>,
    /// Extra human-readable output (series tables, moment tables).
    pub notes: String,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: Command,
    pub results: Vec<SuiteResult>,
    pub scenario_text: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let bits = self
            .results
            .iter()
            .filter(|r| !r.passed())
            .fold(0, |acc, r| acc | r.suite.bit());
        if bits == 0 {
            EXIT_OK
        } else {
            EXIT_SUITE_FAILED | bits
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.results.iter().flat_map(|r| &r.checks)
    }

    pub fn machine_section(&self) -> String {
        let mut s = String::from("--- machine ---\n");
        for c in self.checks() {
            s.push_str(&c.machine_line());
            s.push('\n');
        }
        s.push_str("--- end machine ---\n");
        s
    }

    pub fn render(&self) -> String {
        let mut s = format!("eqcw report: {}\n", self.command);
        for r in &self.results {
            s.push_str(&format!("\n== {} ({}) ==\n", r.suite, if r.passed() { "PASS" } else { "FAIL" }));
            for c in &r.checks {
                s.push_str(&format!(
                    "{}: {} ({})\n",
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.residual
                ));
                if let Some(d) = &c.detail {
                    for line in d.lines() {
                        s.push_str(&format!("    {line}\n"));
                    }
                }
            }
            if !r.notes.is_empty() {
                s.push('\n');
                s.push_str(&r.notes);
                if !r.notes.ends_with('\n') {
                    s.push('\n');
                }
            }
        }
        s.push('\n');
        s.push_str(&self.machine_section());
        s.push_str("--- scenario ---\n");
        s.push_str(&self.scenario_text);
        s.push_str("--- end scenario ---\n");
        s
    }
}

/// Extracts the embedded scenario from a rendered report.
pub fn embedded_scenario(report: &str) -> Option<&str> {
    let start = report.find("--- scenario ---\n")? + "--- scenario ---\n".len();
    let end = report[start..].find("--- end scenario ---")? + start;
    Some(&report[start..end])
}

/// Extracts the machine section from a rendered report.
pub fn machine_section(report: &str) -> Option<&str> {
    let start = report.find("--- machine ---\n")?;
    let end = report[start..].find("--- end machine ---\n")? + start + "--- end machine ---\n".len();
    Some(&report[start..end])
}

fn verify_core(s: &Scenario) -> SuiteResult {
    let sym = s.symmetry.resolve();
    let structure = s.structure.resolve();
    let mut checks = vec![lie_check("symmetry", &sym), lie_check("structure", &structure)];
    match graded_suite(SEED, 20) {
        Ok(c) => checks.extend(c),
        Err(e) => checks.push(Check::failed("graded", e)),
    }
    if sym.validate().accepted() {
        match weil_suite(&sym, s.truncation) {
            Ok(c) => checks.extend(c),
            Err(e) => checks.push(Check::failed(format!("weil[{}]", sym.name()), e)),
        }
        match augmentation_check(&sym, s.truncation) {
            Ok(c) => checks.push(c),
            Err(e) => checks.push(Check::failed(format!("weil_augmentation[{}]", sym.name()), e)),
        }
    } else {
        checks.push(Check::failed(format!("weil[{}]", sym.name()), "skipped: invalid structure constants"));
    }
    SuiteResult {
        suite: Suite::VerifyCore,
        checks,
        notes: String::new(),
    }
}

fn universal(s: &Scenario) -> SuiteResult {
    SuiteResult {
        suite: Suite::UniversalCheck,
        checks: universal_suite(&s.symmetry.resolve(), &s.structure.resolve(), s.truncation),
        notes: String::new(),
    }
}

fn series(s: &Scenario) -> SuiteResult {
    let spec = s.series.as_ref().expect("checked while parsing");
    let built = spec.build();
    let (checks, notes) = match series_suite(spec.degree) {
        Ok(c) => (c, series_table(&built)),
        Err(e) => (vec![Check::failed("series", e)], String::new()),
    };
    SuiteResult {
        suite: Suite::Series,
        checks,
        notes,
    }
}

fn anomaly(s: &Scenario) -> SuiteResult {
    let m = s.monopole.as_ref().expect("checked while parsing");
    let mut checks = monopole_suite(m.charge, m.n_theta, m.n_phi);
    let mut notes = String::new();
    let mut series_list = vec![crate::series::CharSeries::chern_character(4)];
    if let Some(spec) = &s.series {
        if spec.name == "a_hat" {
            series_list.push(crate::series::CharSeries::a_hat(4, spec.convention));
        }
    }
    for series in &series_list {
        let (c, cv) = anomaly_suite(m.charge, m.n_theta, m.n_phi, series, &m.generators, &m.lambdas);
        checks.extend(c);
        if let Some(cv) = cv {
            notes.push_str(&cv.to_string());
            notes.push('\n');
        }
    }
    SuiteResult {
        suite: Suite::Anomaly,
        checks,
        notes,
    }
}

pub fn run(command: Command, scenario: &Scenario) -> Report {
    let suites: Vec<Suite> = match command {
        Command::Suite(s) => vec![s],
        Command::All => scenario.suites.clone(),
    };
    let results = suites
        .into_iter()
        .map(|suite| match suite {
            Suite::VerifyCore => verify_core(scenario),
            Suite::UniversalCheck => universal(scenario),
            Suite::Series => series(scenario),
            Suite::Anomaly => anomaly(scenario),
        })
        .collect();
    Report {
        command,
        results,
        scenario_text: scenario.to_text(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names() {
        assert_eq!("all".parse::<Command>(), Ok(Command::All));
        assert_eq!("series".parse::<Command>(), Ok(Command::Suite(Suite::Series)));
        assert!("verify".parse::<Command>().is_err());
    }

    #[test]
    fn universal_check_reports_structure_equation() {
        let s: Scenario = "symmetry = su2\nstructure = u1\ntruncation = 6\n".parse().unwrap();
        let r = run(Command::Suite(Suite::UniversalCheck), &s);
        assert_eq!(r.exit_code(), 0);
        assert!(r.render().contains("CHECK structure_equation[su2,u1] PASS exact"));
    }

    #[test]
    fn broken_table_sets_verify_core_bit() {
        let text = "symmetry = table\nstructure = u1\ntruncation = 4\n[symmetry.table]\ndim = 3\nf 1 2 3 = 1\nf 2 1 3 = -1\nf 1 3 1 = 1\nf 3 1 1 = -1\n";
        let s: Scenario = text.parse().unwrap();
        let r = run(Command::Suite(Suite::VerifyCore), &s);
        assert_eq!(r.exit_code(), EXIT_SUITE_FAILED | 1);
        assert!(r.render().contains("jacobi("));
    }

    #[test]
    fn sections_can_be_extracted() {
        let s: Scenario = "symmetry = u1\nstructure = u1\ntruncation = 4\n".parse().unwrap();
        let text = run(Command::Suite(Suite::UniversalCheck), &s).render();
        assert_eq!(embedded_scenario(&text), Some(s.to_text().as_str()));
        assert!(machine_section(&text).unwrap().starts_with("--- machine ---\nCHECK "));
    }
}
