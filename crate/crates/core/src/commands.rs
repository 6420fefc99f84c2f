//! Subcommand implementations shared by the `kummerlat` binary and the tests.
//!
//! Each command returns a [`CommandResult`]; rendering and exit codes are
//! decided here so the binary stays a thin argument parser.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::ade::{enumerate_configs, AdeConfig};
use crate::divisibility::{check_nonexistence, doubling_filter, DivisibilityError, ObstructionStep};
use crate::kummer::{kummer_report, KummerError, KummerGroup};
use crate::lattice::{parse_rational, rational_to_string};
use crate::torus::{
    default_lattice, singularity_configuration, standard_group_on, TorusError, TorusLattice,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug)]
pub struct CommandResult {
    pub command: &'static str,
    pub status: Status,
    pub data: Value,
    pub diagnostics: Vec<String>,
    pub text: String,
    pub exit_code: i32,
}

impl CommandResult {
    fn ok(command: &'static str, data: Value, text: String) -> Self {
        Self { command, status: Status::Ok, data, diagnostics: Vec::new(), text, exit_code: EXIT_OK }
    }

    fn error(command: &'static str, exit_code: i32, message: String) -> Self {
        Self {
            command,
            status: Status::Error,
            data: Value::Null,
            text: format!("error: {message}\n"),
            diagnostics: vec![message],
            exit_code,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": format!("kummerlat/{}/{}", self.command, SCHEMA_VERSION),
            "status": match self.status { Status::Ok => "ok", Status::Error => "error" },
            "data": self.data,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn cmd_census(m: &str, max_rank: usize, doubling: bool) -> CommandResult {
    let m_value: BigRational = match parse_rational(m) {
        Ok(v) if v > BigRational::from_integer(0.into()) => v,
        _ => return CommandResult::error("census", EXIT_USAGE, format!("invalid m value {m:?}")),
    };
    let configs: Vec<AdeConfig> = if doubling {
        match doubling_filter(&m_value, max_rank) {
            Ok(c) => c,
            Err(e) => return CommandResult::error("census", EXIT_INTERNAL, e.to_string()),
        }
    } else {
        enumerate_configs(&m_value, max_rank)
    };
    let mut text = String::new();
    for c in &configs {
        text.push_str(&format!("{c}\n"));
    }
    let filter = if doubling { ", doubling filter" } else { "" };
    text.push_str(&format!(
        "{} configurations with m = {} and rank <= {max_rank}{filter}\n",
        configs.len(),
        rational_to_string(&m_value)
    ));
    let data = json!({
        "m": rational_to_string(&m_value),
        "max_rank": max_rank,
        "doubling_filter": doubling,
        "count": configs.len(),
        "configs": configs.iter().map(|c| {
            let mut v = c.to_json();
            v["name"] = json!(c.to_string());
            v
        }).collect::<Vec<_>>(),
    });
    CommandResult::ok("census", data, text)
}

pub fn cmd_kummer(group: &str) -> CommandResult {
    let group: KummerGroup = match group.parse() {
        Ok(g) => g,
        Err(e) => return CommandResult::error("kummer", EXIT_USAGE, e.to_string()),
    };
    match kummer_report(group) {
        Ok(report) => {
            let mut result = CommandResult::ok("kummer", report.to_json(), report.to_text());
            if !report.all_checks_pass() {
                result.diagnostics.push("some lattice checks failed".to_string());
            }
            result
        }
        Err(e @ KummerError::UnknownGroup(_)) => CommandResult::error("kummer", EXIT_USAGE, e.to_string()),
        Err(e) => CommandResult::error("kummer", EXIT_INTERNAL, e.to_string()),
    }
}

fn describe_step(step: &ObstructionStep) -> String {
    let mark = if step.excludes() { "excludes" } else { "passes" };
    let body = match step {
        ObstructionStep::RankBound { rank, max_rank } => format!("rank {rank} against maximum {max_rank}"),
        ObstructionStep::AdmissibleCandidateCount { witness, required, candidates } => format!(
            "{} disjoint curves need {required} independent even sets; {candidates} candidates supported there",
            witness.len()
        ),
        ObstructionStep::IndependenceDeficit { witness, required, candidates, available } => format!(
            "{} disjoint curves need {required} independent even sets; {candidates} candidates span a closed family of dimension {available}",
            witness.len()
        ),
        ObstructionStep::LengthRequirement { prime, p_length, bound, required, available } => format!(
            "{prime}-length {p_length} exceeds {bound}; needs {required} independent {prime}-divisible classes, available {}",
            available.map_or_else(|| "not analysed".to_string(), |a| a.to_string())
        ),
        ObstructionStep::CoverRankExceeds { witness, candidates, cover_configs } => format!(
            "all {candidates} even sets on {} disjoint curves have non-viable double covers: {}",
            witness.len(),
            cover_configs.join(", ")
        ),
    };
    format!("  [{mark}] {}: {body}", step.kind())
}

pub fn cmd_obstruct(config: &str) -> CommandResult {
    let config: AdeConfig = match config.parse() {
        Ok(c) => c,
        Err(e) => return CommandResult::error("obstruct", EXIT_USAGE, format!("{e}")),
    };
    match check_nonexistence(&config) {
        Ok(report) => {
            let mut text = format!(
                "{} (rank {}, m = {}): {}\n",
                report.config,
                report.config.rank(),
                rational_to_string(&report.m_value),
                report.verdict.as_str()
            );
            text.push_str(&format!(
                "  {} even-set candidates, {} 3-divisible candidates\n",
                report.even_set_candidates, report.three_divisible_candidates
            ));
            // identical lines differ only in their witness sets, which the JSON keeps
            let mut lines: Vec<(String, usize)> = Vec::new();
            for step in &report.steps {
                let line = describe_step(step);
                match lines.iter_mut().find(|(l, _)| *l == line) {
                    Some((_, n)) => *n += 1,
                    None => lines.push((line, 1)),
                }
            }
            for (line, n) in lines {
                if n > 1 {
                    text.push_str(&format!("{line} (x{n})\n"));
                } else {
                    text.push_str(&format!("{line}\n"));
                }
            }
            CommandResult::ok("obstruct", report.to_json(), text)
        }
        Err(e @ DivisibilityError::TooManyCurves { .. }) => CommandResult::error("obstruct", EXIT_USAGE, e.to_string()),
        Err(e) => CommandResult::error("obstruct", EXIT_INTERNAL, e.to_string()),
    }
}

fn torus_exit_code(e: &TorusError) -> i32 {
    match e {
        TorusError::UnknownGroup(_) | TorusError::UnknownLattice(_) | TorusError::IncompatibleLattice { .. } => EXIT_USAGE,
        TorusError::InvariantViolation(_) => EXIT_INTERNAL,
        // mathematical outcomes on valid input
        _ => EXIT_OK,
    }
}

pub fn cmd_torus(group: &str, lattice: Option<&str>) -> CommandResult {
    let lattice = match lattice.map(TorusLattice::by_name).unwrap_or_else(|| default_lattice(group)) {
        Ok(l) => l,
        Err(e) => return CommandResult::error("torus", torus_exit_code(&e), e.to_string()),
    };
    let lattice_name = lattice.name().to_string();
    let group = match standard_group_on(group, lattice) {
        Ok(g) => g,
        Err(e) => return CommandResult::error("torus", torus_exit_code(&e), e.to_string()),
    };
    match singularity_configuration(&group) {
        Ok(report) => CommandResult::ok("torus", report.to_json(), report.to_text()),
        Err(e) => {
            let code = torus_exit_code(&e);
            if code != EXIT_OK {
                return CommandResult::error("torus", code, e.to_string());
            }
            // a non-ADE quotient is reported as data, not as a failure
            let data = json!({
                "group": group.name,
                "lattice": lattice_name,
                "group_order": group.order(),
                "points": [],
                "config": Value::Null,
                "obstruction": e.to_string(),
            });
            let text = format!(
                "group {} (order {}) on lattice {lattice_name}: quotient is not an ADE orbifold: {e}\n",
                group.name,
                group.order()
            );
            CommandResult::ok("torus", data, text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_counts() {
        let r = cmd_census("24", 19, false);
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.data["count"], 18);
        let r = cmd_census("3/2", 19, false);
        assert_eq!(r.data["count"], 1);
        assert_eq!(r.data["configs"][0]["name"], "A1");
        assert_eq!(cmd_census("x", 19, false).exit_code, EXIT_USAGE);
    }

    #[test]
    fn obstruct_verdicts_are_data() {
        let r = cmd_obstruct("11A1+2A3");
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.data["verdict"], "Excluded");
        assert_eq!(cmd_obstruct("16A1").data["verdict"], "NoObstructionFound");
        assert_eq!(cmd_obstruct("3Q1").exit_code, EXIT_USAGE);
    }

    #[test]
    fn torus_commands() {
        assert_eq!(cmd_torus("neg1", None).data["config"], "16A1");
        assert_eq!(cmd_torus("Q8", Some("a")).data["config"], "3A1+4D4");
        assert_eq!(cmd_torus("Q8", Some("b")).exit_code, EXIT_USAGE);
        assert_eq!(cmd_torus("nope", None).exit_code, EXIT_USAGE);
        let d4 = cmd_torus("D4", None);
        assert_eq!(d4.exit_code, EXIT_OK);
        assert!(d4.data["config"].is_null());
    }

    #[test]
    fn json_envelope() {
        let r = cmd_kummer("Z2");
        let v = r.to_json();
        assert_eq!(v["schema"], "kummerlat/kummer/1");
        assert_eq!(v["status"], "ok");
        assert_eq!(v["data"]["rank"], 16);
        let text = r.render(true);
        assert!(serde_json::from_str::<Value>(&text).is_ok());
        assert_eq!(cmd_kummer("Z5").exit_code, EXIT_USAGE);
    }
}
