use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::args::Format;

/// A command's result: one table, rendered as CSV or as JSON records.
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub seed: Option<u64>,
    /// Extra `key: value` lines for the CSV header.
    pub notes: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub records: Value,
}

impl Report {
    pub fn new(command: &'static str, config: Map<String, Value>, seed: Option<u64>) -> Self {
        Self { command, config, seed, notes: Vec::new(), columns: Vec::new(), rows: Vec::new(), records: json!([]) }
    }

    fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# discovery {}", self.command)?;
        writeln!(w, "# config: {}", Value::Object(self.config.clone()))?;
        if let Some(seed) = self.seed {
            writeln!(w, "# seed: {seed}")?;
        }
        for (k, v) in &self.notes {
            writeln!(w, "# {k}: {v}")?;
        }
        let mut csv = csv::Writer::from_writer(&mut w);
        csv.write_record(&self.columns)?;
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush()?;
        drop(csv);
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("config".into(), Value::Object(self.config.clone()));
        if let Some(seed) = self.seed {
            doc.insert("seed".into(), json!(seed));
        }
        for (k, v) in &self.notes {
            doc.insert(k.clone(), v.clone());
        }
        doc.insert("records".into(), self.records.clone());
        serde_json::to_writer_pretty(&mut w, &Value::Object(doc))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let sink: Box<dyn Write> = match out {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match format {
            Format::Csv => self.write_csv(sink),
            Format::Json => self.write_json(sink),
        }
    }
}

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}
