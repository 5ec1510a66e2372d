//! Rendering of results as text, JSON or LaTeX.
//!
//! JSON output is `{"kind", "value", "data"}` with `value` the serialized
//! result (it deserializes back to the in-memory value) and `data` the
//! text form plus any auxiliary fields. Keys are sorted.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactring::{Coefficient, EPoly, MotivicRational};
use crate::grothendieck::EqClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::Parse(format!("unknown format \"{s}\""))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Latex => "latex",
        })
    }
}

/// A computed result in all three renderings.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub kind: String,
    pub value: Value,
    pub text: String,
    pub latex: String,
    pub data: Map<String, Value>,
}

impl Rendered {
    pub fn new<T: Serialize>(kind: &str, value: &T, text: String, latex: String) -> Result<Self> {
        let value = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
        Ok(Rendered {
            kind: kind.into(),
            value,
            text,
            latex,
            data: Map::new(),
        })
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Self {
        self.data.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Latex => self.latex.clone(),
            Format::Json => {
                let mut data = self.data.clone();
                data.insert("text".into(), Value::String(self.text.clone()));
                let doc = json!({
                    "kind": self.kind,
                    "value": self.value,
                    "data": Value::Object(data),
                });
                // serde_json maps are ordered by key, so output is canonical.
                serde_json::to_string_pretty(&doc).expect("JSON values always serialize")
            }
        }
    }
}

/// LaTeX rendering of coefficients.
pub trait Latex {
    fn latex(&self) -> String;
}

impl Latex for EPoly {
    fn latex(&self) -> String {
        self.to_latex()
    }
}

impl Latex for EqClass {
    fn latex(&self) -> String {
        self.to_latex()
    }
}

fn t_power(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "T".into(),
        e => format!("T^{{{e}}}"),
    }
}

/// `\frac{P(T)}{∏ (L^ν T^{-N} - 1)^m} + …` for a one-variable series.
pub fn mrat_latex<C: Coefficient + Latex>(x: &MotivicRational<C>) -> String {
    if x.terms.is_empty() {
        return "0".into();
    }
    let mut out = Vec::new();
    for t in &x.terms {
        let num: Vec<String> = t
            .numerator
            .iter()
            .map(|(e, c)| {
                let tp = t_power(e[0]);
                if tp.is_empty() {
                    c.latex()
                } else {
                    format!("\\left({}\\right){tp}", c.latex())
                }
            })
            .collect();
        let num = num.join(" + ");
        if t.factors.is_empty() {
            out.push(num);
            continue;
        }
        let den: String = t
            .factors
            .iter()
            .map(|(f, m)| {
                let base = format!("\\left(\\mathbb{{L}}^{{{}}}T^{{-{}}} - 1\\right)", f.nu, f.n[0]);
                if *m > 1 {
                    format!("{base}^{{{m}}}")
                } else {
                    base
                }
            })
            .collect();
        out.push(format!("\\frac{{{num}}}{{{den}}}"));
    }
    out.join(" + ")
}
