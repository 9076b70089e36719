use std::fmt;

use klein_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// The uniform output of every subcommand. Field order is the serialized
/// key order; `inputs`, `result` and `witness` are `serde_json` maps, which
/// keep their keys sorted.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub witness: Value,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            result: json!({}),
            checks: Vec::new(),
            witness: Value::Null,
            text: String::new(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = self.text.clone();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}{}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(": {}", c.detail)
                }
            ));
        }
        out
    }
}

/// Everything that stops a command before it produces a report.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag combination or unreadable input; exit 2.
    Usage(String),
    /// A parse error in a word or element; exit 2.
    Parse { input: String, source: Error },
    /// Any other library error; exit 1.
    Library(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Library(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Parse { source, .. } | CliError::Library(source) => source.kind(),
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut err = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Parse {
            input,
            source: Error::Parse { pos, .. },
        } = self
        {
            err["input"] = json!(input);
            err["column"] = json!(pos);
        }
        json!({ "command": command, "error": err })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Parse {
                input,
                source: Error::Parse { pos, msg },
            } => {
                writeln!(f, "{msg} at column {pos}")?;
                writeln!(f, "  {input}")?;
                write!(f, "  {}^", " ".repeat(pos.saturating_sub(1)))
            }
            CliError::Parse { source, .. } | CliError::Library(source) => write!(f, "{source}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

/// Attach the offending input to parse errors.
pub fn parsed<T>(input: &str, r: klein_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        Error::Parse { .. } => CliError::Parse {
            input: input.to_string(),
            source: e,
        },
        other => CliError::Library(other),
    })
}
