use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// Everything a subcommand produces: a table and the named checks.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub command: String,
    pub datum: String,
    #[serde(rename = "H")]
    pub height: i64,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub tsv: String,
}

impl Summary {
    pub fn new(command: &str, datum: &str, height: i64) -> Self {
        Summary { command: command.to_string(), datum: datum.to_string(), height, checks: Vec::new(), tsv: String::new() }
    }

    pub fn row(&mut self, fields: &[&dyn Display]) {
        let line: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
        self.tsv.push_str(&line.join("\t"));
        self.tsv.push('\n');
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let status = if pass { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), status, detail: detail.into() });
    }

    pub fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status: Status::Skipped, detail: detail.into() });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// With `out`, writes `<command>.tsv` and `summary.json` there and echoes
    /// the summary on stdout; otherwise the table goes to stdout and the
    /// summary to stderr.
    pub fn emit(&self, out: Option<&PathBuf>) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("summary serializes");
        match out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(format!("{}.tsv", self.command)), &self.tsv)?;
                fs::write(dir.join("summary.json"), format!("{json}\n"))?;
                println!("{json}");
            }
            None => {
                std::io::stdout().write_all(self.tsv.as_bytes())?;
                eprintln!("{json}");
            }
        }
        Ok(())
    }
}
