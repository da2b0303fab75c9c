//! Input documents and the tsv / json-lines output sink.

use std::fs;
use std::io::{self, BufWriter, Read, StdoutLock, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    #[value(alias = "json-lines")]
    Jsonl,
}

/// A named piece of input text.
pub struct Input {
    pub label: String,
    pub text: String,
}

fn read_stdin() -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    io::stdin()
        .read_to_end(&mut buf)
        .context("cannot read standard input")?;
    Ok(buf)
}

fn utf8(label: &str, bytes: Vec<u8>) -> Result<String> {
    String::from_utf8(bytes)
        .map_err(|e| anyhow::anyhow!("{label}: not valid UTF-8 (byte {})", e.utf8_error().valid_up_to()))
}

/// One document per file, or NUL-separated documents on standard input,
/// labelled by their 1-based position.
pub fn read_documents(files: &[PathBuf]) -> Result<Vec<Input>> {
    if files.is_empty() {
        let buf = read_stdin()?;
        let mut parts: Vec<&[u8]> = buf.split(|&b| b == 0).collect();
        if parts.last().is_some_and(|p| p.is_empty()) {
            parts.pop();
        }
        return parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let label = (i + 1).to_string();
                let text = utf8(&format!("document {label}"), p.to_vec())?;
                Ok(Input { label, text })
            })
            .collect();
    }
    read_files(files)
}

/// Each file whole, or all of standard input as one text labelled `-`.
pub fn read_texts(files: &[PathBuf]) -> Result<Vec<Input>> {
    if files.is_empty() {
        let text = utf8("standard input", read_stdin()?)?;
        return Ok(vec![Input {
            label: "-".into(),
            text,
        }]);
    }
    read_files(files)
}

fn read_files(files: &[PathBuf]) -> Result<Vec<Input>> {
    files
        .iter()
        .map(|f| {
            let label = f.display().to_string();
            let bytes = fs::read(f).with_context(|| format!("cannot read {label}"))?;
            let text = utf8(&label, bytes)?;
            Ok(Input { label, text })
        })
        .collect()
}

/// Backslash escapes for tab, newline, carriage return and backslash.
pub fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

pub struct Sink {
    out: BufWriter<StdoutLock<'static>>,
    format: Format,
}

impl Sink {
    pub fn stdout(format: Format) -> Self {
        Sink {
            out: BufWriter::new(io::stdout().lock()),
            format,
        }
    }

    /// Writes one record; `tsv` and `json` must carry the same fields.
    pub fn row(&mut self, tsv: impl FnOnce() -> String, json: impl FnOnce() -> Value) -> Result<()> {
        match self.format {
            Format::Tsv => writeln!(self.out, "{}", tsv())?,
            Format::Jsonl => writeln!(self.out, "{}", json())?,
        }
        Ok(())
    }

    pub fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
