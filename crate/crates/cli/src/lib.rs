//! Line-oriented script interpreter over the rees-blowup library.
//!
//! Scripts are sequences of statements, one per line (semicolons also
//! separate statements; `#` starts a comment). Each statement echoes a
//! record whose text and JSON forms denote the same object. Execution stops
//! at the first error with a line diagnostic.

pub mod session;

use std::time::Duration;

use rees_blowup::ring::{FieldSpec, MonomialOrder};

pub use session::Session;

/// Parses a field flag value (`QQ` or `Fp:<p>`).
pub fn session_field(token: &str) -> Result<FieldSpec, String> {
    session::parse_field(token)
}

/// Session-wide options, set from command-line flags.
#[derive(Debug, Clone)]
pub struct Options {
    pub json: bool,
    pub field: FieldSpec,
    pub bound: i64,
    pub order: MonomialOrder,
    /// regseq tests all permutations of the sequence.
    pub permutations: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            json: false,
            field: FieldSpec::Rational,
            bound: 5,
            order: MonomialOrder::GrevLex,
            permutations: false,
        }
    }
}

/// One executed statement: echo, payloads and timing. The timing is kept
/// out of both output forms so runs stay byte-identical.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: String,
    pub text: String,
    pub json: serde_json::Value,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Executes a script, stopping at the first failing statement.
pub fn run_script(input: &str, options: &Options) -> Result<Vec<OutputRecord>, ScriptError> {
    let mut session = Session::new(options.clone());
    let mut records = Vec::new();
    for (idx, raw_line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let started = std::time::Instant::now();
            match session.execute(stmt) {
                Ok((text, json)) => records.push(OutputRecord {
                    command: stmt.to_string(),
                    text,
                    json,
                    elapsed: started.elapsed(),
                }),
                Err(message) => {
                    return Err(ScriptError {
                        line: line_no,
                        message,
                    })
                }
            }
        }
    }
    Ok(records)
}

/// Renders records in the selected mode; output is deterministic.
pub fn format_records(records: &[OutputRecord], json: bool) -> String {
    let mut out = String::new();
    for record in records {
        if json {
            let mut object = serde_json::Map::new();
            object.insert(
                "schema".into(),
                serde_json::Value::String("rees-blowup/1".into()),
            );
            object.insert(
                "command".into(),
                serde_json::Value::String(record.command.clone()),
            );
            if let serde_json::Value::Object(fields) = &record.json {
                for (k, v) in fields {
                    object.insert(k.clone(), v.clone());
                }
            }
            out.push_str(&serde_json::Value::Object(object).to_string());
            out.push('\n');
        } else {
            out.push_str("> ");
            out.push_str(&record.command);
            out.push('\n');
            if !record.text.is_empty() {
                out.push_str(&record.text);
                out.push('\n');
            }
        }
    }
    out
}
