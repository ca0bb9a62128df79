//! Deterministic CSV/JSON assembly and file/stdout writing. Every byte of
//! output is a pure function of the parsed configuration.

use std::io::Write;
use std::path::Path;

use paradox_core::numeric::{display_4dp, exact_string, to_f64, Rational};

pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            lines: vec![header.join(",")],
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

pub fn cell_4dp(r: &Rational) -> String {
    display_4dp(r)
}

pub fn cell_exact(r: &Rational) -> String {
    exact_string(r)
}

pub fn cell_float(r: &Rational) -> String {
    let v = to_f64(r);
    format!("{v}")
}

/// Fixed-precision decimal for refined roots; ten places matches the
/// bisection tolerance.
pub fn cell_10dp(r: &Rational) -> String {
    format!("{:.10}", to_f64(r))
}

pub fn write_out(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}
