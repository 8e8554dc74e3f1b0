//! Run configuration: the JSON document accepted by `--config` and the flag
//! overlay applied on top of it.

use std::fmt;
use std::path::PathBuf;

use realclose::{BasisConfig, ModelSpec};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::RunError;

pub const DEFAULT_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Classify,
    Closure,
    Counterpart,
    Similarity,
    Spectrum,
    Eta,
    Picture,
    Exchange,
}

impl Check {
    /// Dependency order.
    pub const ALL: [Check; 8] = [
        Check::Classify,
        Check::Closure,
        Check::Counterpart,
        Check::Similarity,
        Check::Spectrum,
        Check::Eta,
        Check::Picture,
        Check::Exchange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Classify => "classify",
            Check::Closure => "closure",
            Check::Counterpart => "counterpart",
            Check::Similarity => "similarity",
            Check::Spectrum => "spectrum",
            Check::Eta => "eta",
            Check::Picture => "picture",
            Check::Exchange => "exchange",
        }
    }

    pub fn parse(name: &str) -> Result<Check, RunError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == name.trim())
            .ok_or_else(|| RunError::Config(format!("unknown check `{}`", name.trim())))
    }

    /// `None` when the check applies, otherwise the reason it does not.
    pub fn inapplicable(self, spec: &ModelSpec) -> Option<String> {
        let kind = spec.kind_name();
        match self {
            Check::Classify | Check::Closure | Check::Spectrum => None,
            Check::Counterpart => {
                let targets = spec.closure_targets();
                let ok = spec.modes() == 1 && targets.len() == 1 && targets[0].order == 2;
                (!ok).then(|| format!("no Hermitian counterpart construction for {kind}"))
            }
            Check::Similarity | Check::Eta | Check::Picture => {
                (!spec.has_similarity()).then(|| format!("no similarity operator is available for {kind}"))
            }
            Check::Exchange => (!spec.is_pu()).then(|| format!("parameter exchange is only defined for pu_I and pu_II, not {kind}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `"all"`, a comma list, or a JSON list of check names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Checks {
    #[default]
    All,
    Only(Vec<Check>),
}

impl Checks {
    pub fn parse(text: &str) -> Result<Checks, RunError> {
        if text.trim() == "all" {
            return Ok(Checks::All);
        }
        let list = text.split(',').filter(|s| !s.trim().is_empty()).map(Check::parse).collect::<Result<Vec<_>, _>>()?;
        if list.is_empty() {
            return Err(RunError::Config("no checks requested".into()));
        }
        Ok(Checks::Only(list))
    }

    /// Checks to run for `spec`, sorted in dependency order. Under `all` the
    /// inapplicable ones are dropped; an explicit inapplicable request is an error.
    pub fn resolve(&self, spec: &ModelSpec) -> Result<Vec<Check>, RunError> {
        let mut out: Vec<Check> = match self {
            Checks::All => Check::ALL.into_iter().filter(|c| c.inapplicable(spec).is_none()).collect(),
            Checks::Only(list) => {
                for c in list {
                    if let Some(why) = c.inapplicable(spec) {
                        return Err(RunError::Config(format!("check `{c}` requested but {why}")));
                    }
                }
                list.clone()
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for Checks {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<String>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => Checks::parse(&t),
            Raw::List(l) => Checks::parse(&l.join(",")),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Basis overrides; unset fields take the model's defaults.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub m0: Option<f64>,
    pub omega0: Option<f64>,
    pub scales: Option<Vec<f64>>,
    /// Number of lowest eigenvalues compared.
    pub k: Option<usize>,
    pub max_dim: Option<usize>,
    pub cond_budget: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

impl BasisSection {
    pub fn overlay(&mut self, other: BasisSection) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(n, m0, omega0, scales, k, max_dim, cond_budget, t_max, points);
    }

    pub fn build(&self, spec: &ModelSpec) -> Result<BasisConfig, RunError> {
        let n = self.n.unwrap_or(DEFAULT_N);
        let mut cfg = BasisConfig::for_model(spec, n);
        if self.m0.is_some() || self.omega0.is_some() {
            cfg.mode_scales = None;
        }
        if let Some(m0) = self.m0 {
            cfg.ref_mass = m0;
        }
        if let Some(w0) = self.omega0 {
            cfg.ref_freq = w0;
        }
        if let Some(s) = &self.scales {
            if s.len() != spec.modes() {
                return Err(RunError::Config(format!("{} basis scales given for {} modes", s.len(), spec.modes())));
            }
            cfg.mode_scales = Some(s.clone());
        }
        if let Some(k) = self.k {
            cfg.compare_count = k;
        }
        if let Some(d) = self.max_dim {
            cfg.max_dim = d;
        }
        if let Some(b) = self.cond_budget {
            cfg.cond_budget = b;
        }
        if let Some(t) = self.t_max {
            cfg.t_max = t;
        }
        if let Some(p) = self.points {
            cfg.time_points = p;
        }
        cfg.validate().map_err(|e| RunError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    pub eigenvalues_csv: Option<PathBuf>,
}

/// The configuration document. `model` is kept as raw JSON so flag values can
/// be merged into it before it is parsed into a [`ModelSpec`].
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: Map<String, Value>,
    #[serde(default)]
    pub basis: BasisSection,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("configuration: {e}")))
    }

    pub fn model_spec(&self) -> Result<ModelSpec, RunError> {
        if !self.model.contains_key("kind") {
            return Err(RunError::Config("model kind is missing (use --model or a `kind` field)".into()));
        }
        let spec: ModelSpec = serde_json::from_value(Value::Object(self.model.clone()))
            .map_err(|e| RunError::Config(format!("model: {e}")))?;
        spec.validate().map_err(|e| RunError::Config(e.to_string()))?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use realclose::exact::integer;

    #[test]
    fn checks_sort_into_dependency_order() {
        let spec = ModelSpec::swanson(integer(1), integer(1), integer(0));
        let got = Checks::parse("eta, closure,closure").unwrap().resolve(&spec).unwrap();
        assert_eq!(got, vec![Check::Closure, Check::Eta]);
        assert!(Checks::parse("spectra").is_err());
    }

    #[test]
    fn all_skips_what_does_not_apply() {
        let pu = ModelSpec::pu_i(integer(1), integer(2), integer(1));
        let got = Checks::All.resolve(&pu).unwrap();
        assert_eq!(got, vec![Check::Classify, Check::Closure, Check::Spectrum, Check::Exchange]);
        assert!(Checks::parse("eta").unwrap().resolve(&pu).is_err());
    }

    #[test]
    fn document_parses() {
        let cfg = RunConfig::from_json(
            r#"{"model": {"kind": "swanson", "m": "1", "omega": 3, "c": "4"},
                "basis": {"N": 32, "k": 4}, "checks": ["spectrum", "eta"],
                "output": {"format": "text"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.checks, Checks::Only(vec![Check::Spectrum, Check::Eta]));
        let spec = cfg.model_spec().unwrap();
        let basis = cfg.basis.build(&spec).unwrap();
        assert_eq!((basis.n, basis.compare_count), (32, 4));
        assert_eq!(cfg.output.format, Some(Format::Text));
    }

    #[test]
    fn floats_and_typos_are_rejected() {
        let cfg = RunConfig::from_json(r#"{"model": {"kind": "swanson", "m": 1.5, "omega": "1", "c": "0"}}"#).unwrap();
        assert!(cfg.model_spec().is_err());
        assert!(RunConfig::from_json(r#"{"basis": {"n": 32}}"#).is_err());
    }
}
