//! Line-oriented `key: value` reports.

use std::fmt;

/// How a command's claim came out; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Inconclusive => 1,
        }
    }

    pub fn and(self, other: Status) -> Status {
        if self == Status::Verified && other == Status::Verified {
            Status::Verified
        } else {
            Status::Inconclusive
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Item {
    lines: Vec<(String, String)>,
}

impl Item {
    pub fn new() -> Self {
        Item::default()
    }

    pub fn put(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Everything except timing, which the caller prints on its own line so
/// that the body stays byte-identical across runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub items: Vec<Item>,
    pub verdict: String,
    pub status: Status,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), items: Vec::new(), verdict: String::new(), status: Status::Inconclusive }
    }

    pub fn finish(mut self, verdict: &str, status: Status) -> Self {
        self.verdict = verdict.to_string();
        self.status = status;
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        for item in &self.items {
            writeln!(f)?;
            for (k, v) in &item.lines {
                writeln!(f, "{k}: {v}")?;
            }
        }
        writeln!(f)?;
        writeln!(f, "verdict: {}", self.verdict)
    }
}
