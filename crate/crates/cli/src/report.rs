//! Report payloads and their JSON and CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use sawlab::golden::Golden;

use crate::config::RunConfig;
use crate::CliError;

/// One value of a payload. Big integers travel as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    pub fn big(value: &BigUint) -> Cell {
        Cell::Text(value.to_string())
    }

    /// Non-finite reals become text so JSON stays valid.
    pub fn real(value: f64) -> Cell {
        if value.is_finite() {
            Cell::Real(value)
        } else {
            Cell::Text(value.to_string())
        }
    }

    /// Shortest round-trip text.
    pub fn render(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Real(r) => format!("{r:?}"),
            Cell::Text(t) => t.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Cell {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Bool(v)
    }
}

impl From<&BigUint> for Cell {
    fn from(v: &BigUint) -> Cell {
        Cell::big(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Scalar(Cell),
    Column(Vec<Cell>),
}

/// Named scalars and equal-role columns, in key order.
pub type Results = BTreeMap<String, Field>;

#[derive(Debug, Default)]
pub struct ResultsBuilder {
    results: Results,
}

impl ResultsBuilder {
    pub fn scalar(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.results.insert(key.to_string(), Field::Scalar(value.into()));
        self
    }

    pub fn column<C: Into<Cell>>(&mut self, key: &str, values: impl IntoIterator<Item = C>) -> &mut Self {
        let cells = values.into_iter().map(Into::into).collect();
        self.results.insert(key.to_string(), Field::Column(cells));
        self
    }

    pub fn finish(self) -> Results {
        self.results
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub rel_err: f64,
    pub citation: String,
    pub passed: bool,
}

impl GoldenCheck {
    pub fn new(golden: &Golden, computed: f64) -> Self {
        GoldenCheck {
            name: golden.name.to_string(),
            computed,
            reference: golden.value,
            rel_err: golden.rel_err(computed),
            citation: golden.citation.to_string(),
            passed: golden.passes(computed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub version: String,
    pub timing_ms: f64,
    pub results: Results,
    pub golden_checks: Vec<GoldenCheck>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<RunReport, CliError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Long-format CSV of the results: `key,index,value`, with an empty index
/// for scalars.
pub fn write_csv(results: &Results, out: impl Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["key", "index", "value"])?;
    for (key, field) in results {
        match field {
            Field::Scalar(c) => w.write_record([key.as_str(), "", &c.render()])?,
            Field::Column(cells) => {
                for (i, c) in cells.iter().enumerate() {
                    w.write_record([key.as_str(), &i.to_string(), &c.render()])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
