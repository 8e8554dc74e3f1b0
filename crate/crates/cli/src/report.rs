//! Report records and their JSON and text renderings.
//!
//! Floats are written with 17 significant digits so identical runs produce
//! byte-identical JSON.

use std::fmt::Write as _;

use realclose::{EomReport, ModelSpec, Rational};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

/// A float with fixed formatting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub reality: Num,
    pub isospectral: Num,
    pub reference: Num,
    pub pseudo: Num,
    pub picture: Num,
    pub drift: Num,
    pub exchange: Num,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reality: Num(1e-8),
            isospectral: Num(1e-6),
            reference: Num(1e-6),
            pseudo: Num(1e-6),
            picture: Num(1e-8),
            drift: Num(1e-8),
            exchange: Num(1e-6),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub realclose: &'static str,
    #[serde(rename = "realclose-cli")]
    pub cli: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { realclose: realclose::VERSION, cli: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSection {
    pub spec: ModelSpec,
    pub hamiltonian: String,
    pub modes: usize,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationSection {
    pub passed: bool,
    pub is_hermitian: bool,
    pub is_pt_symmetric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EomEntry {
    pub variable: String,
    pub order: u32,
    pub real_closed: bool,
    pub force_poly: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub coefficients: Option<Vec<String>>,
    pub ambiguous: bool,
    pub inertia: String,
    pub residual: String,
}

impl From<&EomReport> for EomEntry {
    fn from(r: &EomReport) -> Self {
        EomEntry {
            variable: r.variable.to_string(),
            order: r.order,
            real_closed: r.real_closed,
            force_poly: r.force_poly.as_ref().map(|p| p.to_string()),
            alpha: r.alpha().map(Rational::to_string),
            beta: r.beta().map(Rational::to_string),
            coefficients: r.linear_coeffs.as_ref().map(|c| c.iter().map(Rational::to_string).collect()),
            ambiguous: r.ambiguous,
            inertia: r.inertia.to_string(),
            residual: r.residual.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EomSection {
    pub passed: bool,
    pub targets: Vec<EomEntry>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterpartSection {
    pub passed: bool,
    pub hamiltonian: Option<String>,
    pub is_hermitian: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimilaritySection {
    pub passed: bool,
    pub omega_exponent: Option<String>,
    pub bch_depth: Option<usize>,
    pub residual: Option<String>,
    pub verified: bool,
    pub verified_up_to_constant: bool,
    pub constant_offset: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSection {
    pub passed: bool,
    pub dimension: usize,
    pub compare_count: usize,
    pub lowest: Vec<[Num; 2]>,
    pub reference: Option<Vec<Num>>,
    pub counterpart_lowest: Option<Vec<Num>>,
    pub counterpart_offset: Num,
    pub reality_residual: Num,
    pub isospectral_residual: Option<Num>,
    pub reference_residual: Option<Num>,
    pub combination: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaSection {
    pub passed: bool,
    pub scales: Vec<Num>,
    pub scale_factor: Num,
    pub cond: Num,
    pub within_budget: bool,
    pub eta_min_eigenvalue: Num,
    pub pseudo_residual: Num,
    pub block: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PictureSection {
    pub passed: bool,
    pub picture_residual: Num,
    pub norm_drift: Num,
    pub t_max: Num,
    pub points: usize,
    pub scale_factor: Num,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangeSection {
    pub passed: bool,
    pub distance: Num,
    pub sum_invariant: bool,
    pub difference_invariant: bool,
    pub difference_before: Num,
    pub difference_after: Num,
}

/// A numerical check either produced its record or failed with a message.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Outcome<T> {
    Done(T),
    Failed { passed: bool, error: String },
}

impl<T> Outcome<T> {
    pub fn failed(error: impl ToString) -> Self {
        Outcome::Failed { passed: false, error: error.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralSection {
    #[serde(rename = "N")]
    pub n: usize,
    pub scales: Vec<Num>,
    pub spectrum: Option<Outcome<SpectrumSection>>,
    pub eta: Option<Outcome<EtaSection>>,
    pub picture: Option<Outcome<PictureSection>>,
    pub exchange: Option<Outcome<ExchangeSection>>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub model: ModelSection,
    pub classification: Option<ClassificationSection>,
    pub eom: Option<EomSection>,
    pub counterpart: Option<CounterpartSection>,
    pub similarity: Option<SimilaritySection>,
    pub spectral: Option<SpectralSection>,
    pub tolerances: Tolerances,
    pub versions: Versions,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One table per top-level section, rows `path  value`.
    pub fn to_text(&self) -> String {
        let value: Value = serde_json::from_str(&self.to_json()).expect("report reparses");
        let mut out = String::new();
        let Value::Object(top) = value else { unreachable!() };
        for (section, body) in top {
            let mut rows = Vec::new();
            flatten("", &body, &mut rows);
            let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            let _ = writeln!(out, "[{section}]");
            for (k, v) in rows {
                let _ = writeln!(out, "  {k:<width$}  {v}");
            }
            out.push('\n');
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    Some(match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return None,
    })
}

fn flatten(path: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, rows);
            }
        }
        Value::Array(items) => {
            if let Some(cells) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                rows.push((path.to_string(), format!("[{}]", cells.join(", "))));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&format!("{path}[{i}]"), item, rows);
                }
            }
        }
        other => rows.push((if path.is_empty() { "value".into() } else { path.to_string() }, scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_fixed_width() {
        let s = serde_json::to_string(&[Num(2.5), Num(1e-17), Num(f64::NAN)]).unwrap();
        assert_eq!(s, r#"[2.5000000000000000e0,1.0000000000000001e-17,"NaN"]"#);
    }

    #[test]
    fn text_flattens_nested_values() {
        let v: Value = serde_json::from_str(r#"{"a": {"b": [1, 2], "c": [[1.5, 0.0]]}}"#).unwrap();
        let mut rows = Vec::new();
        flatten("", &v, &mut rows);
        assert_eq!(rows[0], ("a.b".to_string(), "[1, 2]".to_string()));
        assert_eq!(rows[1].0, "a.c[0]");
    }
}
