//! Sequence ingestion: CSV (one value per line, or comma-separated rows,
//! `#` comments) and JSON (a flat array of numbers).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use seqconvex_core::Sequence;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub source: String,
    pub length: usize,
    /// `sha256:<hex>` of the raw file bytes.
    pub checksum: String,
}

pub fn load(path: &Path) -> Result<(Sequence, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Malformed {
        location: "file".into(),
        token: "<invalid utf-8>".into(),
    })?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('[');
    let values = if is_json {
        parse_json(&text)?
    } else {
        parse_csv(&text)?
    };
    let seq = Sequence::new(values).map_err(|e| match e {
        seqconvex_core::Error::EmptySequence => CliError::EmptyInput,
        other => CliError::Core(other),
    })?;
    let digest = InputDigest {
        source: path.display().to_string(),
        length: seq.len(),
        checksum: format!("sha256:{}", hex(&Sha256::digest(&bytes))),
    };
    Ok((seq, digest))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_number(token: &str, location: String, index: usize) -> Result<f64, CliError> {
    let value: f64 = token.parse().map_err(|_| CliError::Malformed {
        location: location.clone(),
        token: token.to_string(),
    })?;
    if !value.is_finite() {
        return Err(CliError::NonFinite {
            index,
            token: token.to_string(),
        });
    }
    Ok(value)
}

pub fn parse_csv(text: &str) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Malformed {
            location: "csv".into(),
            token: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        for field in record.iter().filter(|f| !f.is_empty()) {
            let index = values.len();
            values.push(parse_number(field, format!("line {line}"), index)?);
        }
    }
    Ok(values)
}

pub fn parse_json(text: &str) -> Result<Vec<f64>, CliError> {
    let items: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| CliError::Malformed {
        location: "json".into(),
        token: e.to_string(),
    })?;
    items
        .iter()
        .enumerate()
        .map(|(index, item)| {
            item.as_f64().ok_or_else(|| CliError::Malformed {
                location: format!("json element {index}"),
                token: item.to_string(),
            })
        })
        .collect()
}
