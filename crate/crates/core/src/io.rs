//! JSON problem files.
//!
//! ```json
//! {
//!   "museums": 3,
//!   "consortia": [[1, 2], [3]],
//!   "passes": [
//!     {"sigma": -2, "price": "2", "holders": [1, 2, 3],
//!      "visits": {"rows": [2], "matrix": [[1, 1, 1]]}},
//!     {"sigma": 0, "price": "4.00", "holders": ["ann"],
//!      "visits": {"rows": [1, 2, 3], "matrix": [[1], [0], [1]]}}
//!   ]
//! }
//! ```
//!
//! Prices are decimal or `p/q` strings (JSON integers are accepted too) and
//! are parsed exactly. `holders` and `visits` may be left out for a pass
//! nobody bought. The individual pass of a museum forming a consortium on its
//! own may be left out entirely; it then takes the consortium pass price.
//! Output is canonical: every pass is written, in sigma order, with prices in
//! their shortest exact form.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::problem::{ConsortiumId, ConsumptionMatrix, HolderId, MuseumId, Pass, PassId, Problem, ProblemData, ValidationReport};
use crate::rational::Rational;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    museums: usize,
    consortia: Vec<Vec<MuseumId>>,
    passes: Vec<PassEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PassEntry {
    sigma: i64,
    #[serde(with = "crate::rational::serde_string")]
    price: Rational,
    #[serde(default)]
    holders: Vec<HolderId>,
    #[serde(default)]
    visits: Option<ConsumptionMatrix>,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("pass sigma {0} is listed twice")]
    DuplicatePass(i64),
    #[error("problem is invalid:\n{0}")]
    Invalid(ValidationReport),
}

impl IoError {
    pub fn report(&self) -> Option<&ValidationReport> {
        match self {
            IoError::Invalid(r) => Some(r),
            _ => None,
        }
    }
}

/// Parses problem JSON without checking the problem invariants.
pub fn parse_problem_data(text: &str) -> Result<ProblemData, IoError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        IoError::Syntax {
            path: if path.is_empty() { ".".to_string() } else { path },
            line: inner.line(),
            column: inner.column(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    de.end().map_err(|e| IoError::Syntax {
        path: ".".to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    from_file(file)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(pos) => message[..pos].to_string(),
        None => message.to_string(),
    }
}

fn from_file(file: ProblemFile) -> Result<ProblemData, IoError> {
    let mut data = ProblemData { museums: file.museums, consortia: file.consortia, passes: BTreeMap::new() };
    for entry in file.passes {
        let sigma = PassId::from_sigma(entry.sigma);
        let visits = match entry.visits {
            Some(v) => v,
            None => ConsumptionMatrix::empty(data.expected_rows(sigma).unwrap_or_default()),
        };
        let pass = Pass { price: entry.price, holders: entry.holders, visits };
        if data.passes.insert(sigma, pass).is_some() {
            return Err(IoError::DuplicatePass(entry.sigma));
        }
    }
    for (k, block) in data.consortia.iter().enumerate() {
        let [museum] = block.as_slice() else { continue };
        let indiv = PassId::Individual(*museum);
        if data.passes.contains_key(&indiv) {
            continue;
        }
        if let Some(price) = data.passes.get(&PassId::Consortium(ConsortiumId(k + 1))).map(|p| p.price.clone()) {
            data.passes.insert(indiv, Pass::unsold(price, vec![*museum]));
        }
    }
    Ok(data)
}

/// Parses and validates a problem.
pub fn parse_problem(text: &str) -> Result<Problem, IoError> {
    Problem::new(parse_problem_data(text)?).map_err(IoError::Invalid)
}

fn to_file(data: &ProblemData) -> ProblemFile {
    ProblemFile {
        museums: data.museums,
        consortia: data.consortia.clone(),
        passes: data
            .passes
            .iter()
            .map(|(sigma, pass)| PassEntry {
                sigma: sigma.sigma(),
                price: pass.price.clone(),
                holders: pass.holders.clone(),
                visits: Some(pass.visits.clone()),
            })
            .collect(),
    }
}

pub fn problem_to_json(data: &ProblemData) -> serde_json::Value {
    serde_json::to_value(to_file(data)).expect("problem data always serializes")
}

/// Canonical pretty-printed JSON, with each matrix row on one line.
pub fn serialize_problem(data: &ProblemData) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"museums\": {},\n", data.museums));
    out.push_str(&format!("  \"consortia\": {},\n", compact(&data.consortia)));
    out.push_str("  \"passes\": [");
    for (n, (sigma, pass)) in data.passes.iter().enumerate() {
        out.push_str(if n == 0 { "\n" } else { ",\n" });
        out.push_str(&format!(
            "    {{\n      \"sigma\": {},\n      \"price\": {},\n      \"holders\": {},\n      \"visits\": {{\n        \"rows\": {},\n        \"matrix\": [",
            sigma.sigma(),
            compact(&crate::rational::format_rational(&pass.price)),
            compact(&pass.holders),
            compact(&pass.visits.rows),
        ));
        for (r, row) in pass.visits.cells.iter().enumerate() {
            out.push_str(if r == 0 { "\n" } else { ",\n" });
            out.push_str(&format!("          {}", compact(row)));
        }
        if pass.visits.cells.is_empty() {
            out.push_str("]\n      }\n    }");
        } else {
            out.push_str("\n        ]\n      }\n    }");
        }
    }
    out.push_str("\n  ]\n}\n");
    out
}

fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

impl Serialize for ProblemData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_file(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProblemData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        from_file(ProblemFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Problem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.data().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::example_one;
    use crate::rational::{frac, int};

    const SMALL: &str = r#"{
        "museums": 2,
        "consortia": [[1], [2]],
        "passes": [
            {"sigma": 1, "price": "2.50"},
            {"sigma": 2, "price": 3},
            {"sigma": 0, "price": "1/3", "holders": ["ann"],
             "visits": {"rows": [1, 2], "matrix": [[1], [1]]}}
        ]
    }"#;

    #[test]
    fn singleton_individual_passes_may_be_omitted() {
        let p = parse_problem(SMALL).unwrap();
        assert_eq!(p.individual_price(MuseumId(1)), &frac(5, 2));
        assert_eq!(p.individual_price(MuseumId(2)), &int(3));
        assert_eq!(p.price(PassId::General), &frac(1, 3));
        assert_eq!(p.holders(PassId::General), &[HolderId::from("ann")]);
    }

    #[test]
    fn round_trip_is_canonical() {
        let p = example_one();
        let text = serialize_problem(p.data());
        let back = parse_problem(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(serialize_problem(back.data()), text);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value, problem_to_json(p.data()));
    }

    #[test]
    fn syntax_errors_name_the_field() {
        let text = SMALL.replace("\"1/3\"", "\"one third\"");
        match parse_problem(&text) {
            Err(IoError::Syntax { path, line, .. }) => {
                assert_eq!(path, "passes[2].price");
                assert_eq!(line, 7);
            }
            other => panic!("{other:?}"),
        }
        let text = SMALL.replace("\"holders\"", "\"holder\"");
        assert!(matches!(parse_problem(&text), Err(IoError::Syntax { .. })));
    }

    #[test]
    fn floats_are_refused() {
        let text = SMALL.replace("\"2.50\"", "2.5");
        let err = parse_problem(&text).unwrap_err().to_string();
        assert!(err.contains("quote it as a string"), "{err}");
    }

    #[test]
    fn duplicates_and_invariants() {
        let text = SMALL.replace("{\"sigma\": 2, \"price\": 3}", "{\"sigma\": 1, \"price\": 3}");
        assert!(matches!(parse_problem(&text), Err(IoError::DuplicatePass(1))));
        let text = SMALL.replace("[[1], [1]]", "[[0], [0]]");
        let err = parse_problem(&text).unwrap_err();
        assert!(err.report().unwrap().has("empty visit column"));
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let text = format!("{SMALL} x");
        assert!(matches!(parse_problem(&text), Err(IoError::Syntax { .. })));
    }
}
