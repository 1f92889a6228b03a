//! Reports: the command echo, a digest per input file, result entries and
//! optional wall-clock timing. Timing is off by default so that reports for
//! identical inputs and seed are byte-identical.

use std::time::Duration;

use clap::ValueEnum;
use sha2::{Digest, Sha256};

use crate::sexp::{Sexp, SexpKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Sexp,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: Vec<String>,
    /// `(name, digest)` per input, in the order read.
    pub inputs: Vec<(String, String)>,
    pub results: Vec<Sexp>,
    pub timing: Option<Duration>,
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().take(8).map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

impl Report {
    pub fn push(&mut self, item: Sexp) {
        self.results.push(item);
    }

    fn to_sexp(&self) -> Sexp {
        let mut items = vec![
            Sexp::tagged("command", self.command.iter().map(|a| Sexp::string(a.clone())).collect()),
            Sexp::tagged(
                "inputs",
                self.inputs
                    .iter()
                    .map(|(n, d)| Sexp::tagged("input", vec![Sexp::string(n.clone()), Sexp::atom(d.clone())]))
                    .collect(),
            ),
            Sexp::tagged("results", self.results.clone()),
        ];
        if let Some(t) = self.timing {
            items.push(Sexp::tagged("timing-ms", vec![Sexp::atom(t.as_millis().to_string())]));
        }
        Sexp::tagged("report", items)
    }
}

fn scalar(s: &Sexp) -> Option<String> {
    match &s.kind {
        SexpKind::Atom(a) | SexpKind::Str(a) => Some(a.clone()),
        SexpKind::List(_) => None,
    }
}

fn text_lines(s: &Sexp, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let (Some(head), tail) = (s.head(), s.tail()) else {
        out.push_str(&format!("{pad}{}\n", scalar(s).unwrap_or_else(|| s.to_compact())));
        return;
    };
    let flat: Option<Vec<String>> =
        tail.iter().map(|t| scalar(t).or_else(|| t.head().is_none().then(|| t.to_compact()))).collect();
    match flat {
        Some(v) if v.is_empty() => out.push_str(&format!("{pad}{head}\n")),
        Some(v) => out.push_str(&format!("{pad}{head}: {}\n", v.join(" "))),
        None => {
            out.push_str(&format!("{pad}{head}:\n"));
            for t in tail {
                text_lines(t, indent + 2, out);
            }
        }
    }
}

/// Canonical rendering; the sexp form reads back with the problem-file lexer.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    let mut out = String::new();
    match format {
        Format::Sexp => {
            out.push_str(&report.to_sexp().to_pretty(100));
            out.push('\n');
        }
        Format::Text => {
            out.push_str(&format!("command: {}\n", report.command.join(" ")));
            for (n, d) in &report.inputs {
                out.push_str(&format!("input: {n} {d}\n"));
            }
            for r in &report.results {
                text_lines(r, 0, &mut out);
            }
            if let Some(t) = report.timing {
                out.push_str(&format!("timing-ms: {}\n", t.as_millis()));
            }
        }
    }
    out.into_bytes()
}
