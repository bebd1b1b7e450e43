//! The report a command run produces. One run, one report: an overall flag,
//! per-axiom lines, the budget charged, and any extra result lines a
//! command wants to surface (paths written, cells found).
//!
//! Reports hold no wall-clock data. The same inputs must print the same
//! bytes regardless of thread count or machine load, because reports are
//! compared verbatim in tests; timing is printed to stderr by main.

use std::fmt::Write as _;

use distlax::core2::{AxiomCheck, AxiomStatus, ValidationReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub subject: String,
    pub ok: bool,
    pub axioms: Vec<AxiomCheck>,
    pub charged: u64,
    pub results: Vec<String>,
}

impl Report {
    pub fn new(command: &str, subject: &str) -> Report {
        Report {
            command: command.to_string(),
            subject: subject.to_string(),
            ok: true,
            axioms: Vec::new(),
            charged: 0,
            results: Vec::new(),
        }
    }

    pub fn from_validation(command: &str, subject: &str, rep: ValidationReport) -> Report {
        let mut out = Report::new(command, subject);
        out.absorb(rep);
        out
    }

    pub fn absorb(&mut self, rep: ValidationReport) {
        self.ok &= rep.ok;
        self.charged += rep.charged;
        self.axioms.extend(rep.axioms);
    }

    /// Absorb with every axiom name prefixed, for commands that run several
    /// validators and must keep their lines apart.
    pub fn absorb_under(&mut self, prefix: &str, rep: ValidationReport) {
        self.ok &= rep.ok;
        self.charged += rep.charged;
        for mut check in rep.axioms {
            check.axiom = format!("{prefix}/{}", check.axiom);
            self.axioms.push(check);
        }
    }

    pub fn push(&mut self, axiom: &str, status: AxiomStatus) {
        if matches!(status, AxiomStatus::Fail { .. }) {
            self.ok = false;
        }
        self.axioms.push(AxiomCheck {
            axiom: axiom.to_string(),
            status,
        });
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "subject: {}", self.subject);
        let _ = writeln!(out, "ok: {}", self.ok);
        for check in &self.axioms {
            match &check.status {
                AxiomStatus::Pass { instances } => {
                    let _ = writeln!(out, "  {:<24} pass     {instances} instances", check.axiom);
                }
                AxiomStatus::Trivial { reason } => {
                    let _ = writeln!(out, "  {:<24} trivial  {reason}", check.axiom);
                }
                AxiomStatus::Skipped { reason } => {
                    let _ = writeln!(out, "  {:<24} skipped  {reason}", check.axiom);
                }
                AxiomStatus::Fail { witness, detail } => {
                    let path: Vec<String> = witness.iter().map(|c| c.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "  {:<24} FAIL     [{}] {detail}",
                        check.axiom,
                        path.join("/")
                    );
                }
            }
        }
        let _ = writeln!(out, "charged: {}", self.charged);
        for line in &self.results {
            let _ = writeln!(out, "result: {line}");
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
