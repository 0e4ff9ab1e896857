use serde_json::Value;

use crate::args::Format;

/// A command result in both output modes.
pub struct Output {
    pub json: Value,
    pub table: String,
    /// Set when the command checked something and the check failed.
    pub falsified: bool,
}

impl Output {
    pub fn new(json: Value, table: String) -> Self {
        Output { json, table, falsified: false }
    }

    pub fn falsified_if(mut self, failed: bool) -> Self {
        self.falsified = failed;
        self
    }

    pub fn text(&self, format: Format) -> String {
        match format {
            // serde_json maps keep keys sorted, so equal values print equal bytes
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Table => self.table.clone(),
        }
    }
}

/// A markdown table with padded columns.
pub fn table<S: AsRef<str>>(headers: &[&str], rows: &[Vec<S>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut w: Vec<usize> = headers.iter().map(|h| width(h)).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(width(c.as_ref()));
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&w).map(|(c, &n)| format!("{c}{}", " ".repeat(n - width(c)))).collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(headers.to_vec());
    out += &format!("|{}|\n", w.iter().map(|&n| "-".repeat(n + 2)).collect::<Vec<_>>().join("|"));
    for r in rows {
        out += &line(r.iter().map(AsRef::as_ref).collect());
    }
    out
}

/// `key: value` lines followed by an optional table.
pub fn summary(pairs: &[(&str, String)], rest: Option<String>) -> String {
    let mut out: String = pairs.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
    if let Some(t) = rest {
        out.push('\n');
        out += &t;
    }
    out
}
