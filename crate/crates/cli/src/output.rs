//! Record rendering: one line per record, human-readable or JSON.

use std::io::{self, Write};

use hyperop::Natural;
use serde_json::{json, Value};

use crate::error::CliError;

pub struct Renderer {
    json: bool,
    max_digits: Option<usize>,
    out: io::BufWriter<io::Stdout>,
}

/// One result. `human` is the default rendering; `result` is the JSON
/// payload.
pub struct Record {
    pub operation: &'static str,
    pub input: Value,
    pub result: Value,
    pub verified: Option<bool>,
    pub human: String,
}

impl Record {
    pub fn to_json(&self) -> Value {
        json!({
            "operation": self.operation,
            "input": self.input,
            "result": self.result,
            "verified": self.verified,
        })
    }
}

impl Renderer {
    pub fn new(json: bool, max_digits: Option<usize>) -> Self {
        Renderer {
            json,
            max_digits,
            out: io::BufWriter::new(io::stdout()),
        }
    }

    pub fn json(&self) -> bool {
        self.json
    }

    /// Full decimal rendering, refused rather than truncated above
    /// `--max-digits`.
    pub fn num(&self, n: &Natural) -> Result<String, CliError> {
        let s = n.to_str_radix(10);
        match self.max_digits {
            Some(limit) if s.len() > limit => Err(CliError::TooManyDigits {
                digits: s.len(),
                limit,
            }),
            _ => Ok(s),
        }
    }

    pub fn nums(&self, ns: &[Natural]) -> Result<Vec<String>, CliError> {
        ns.iter().map(|n| self.num(n)).collect()
    }

    pub fn emit(&mut self, record: &Record) -> Result<(), CliError> {
        if self.json {
            writeln!(self.out, "{}", record.to_json())?;
        } else {
            match record.verified {
                Some(true) => writeln!(self.out, "{} (verified)", record.human)?,
                Some(false) => writeln!(self.out, "{} (ORACLE MISMATCH)", record.human)?,
                None => writeln!(self.out, "{}", record.human)?,
            }
        }
        Ok(())
    }

    pub fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}
