use serde_json::Value;

use crate::{CliError, Format};

/// A rendered report in every supported format.
pub struct Outcome {
    pub pass: bool,
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn new(pass: bool, text: String, json: Value) -> Self {
        Outcome {
            pass,
            text,
            json,
            csv: None,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut s = match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("reports serialize"),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::Usage("this command has no CSV output".into()))?,
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        Ok(s)
    }
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
