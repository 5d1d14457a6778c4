use std::fmt::Write as _;

use crate::args::RunConfig;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn preamble(cfg: &RunConfig, schema: &str) -> String {
    format!(
        "# mgtf {VERSION}\n# command: {}\n# flags: {}\n# {schema}\n",
        cfg.command.name(),
        cfg.flag_line()
    )
}

/// CSV document: comment header, column row, data rows, trailing comments.
pub struct Csv {
    head: String,
    writer: csv::Writer<Vec<u8>>,
    trailer: String,
}

impl Csv {
    pub fn new(cfg: &RunConfig, columns: &[String]) -> Result<Self, CliError> {
        let head = preamble(cfg, &format!("columns: {}", columns.join(",")));
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        writer.write_record(columns).map_err(CliError::from)?;
        Ok(Self {
            head,
            writer,
            trailer: String::new(),
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(CliError::from)
    }

    pub fn comment(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.trailer, "# {}", line.as_ref());
    }

    pub fn finish(self) -> Result<String, CliError> {
        let body = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Io(e.to_string()))?;
        let body = String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(format!("{}{body}{}", self.head, self.trailer))
    }
}

/// Flat `key=value` document.
pub struct Report {
    text: String,
}

impl Report {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            text: preamble(cfg, "format: key=value"),
        }
    }

    pub fn entry(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}={value}");
    }

    pub fn number(&mut self, key: &str, x: f64) {
        self.entry(key, num(x));
    }

    pub fn finish(self) -> String {
        self.text
    }
}
