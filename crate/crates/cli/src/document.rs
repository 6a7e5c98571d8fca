//! JSON system documents.
//!
//! ```json
//! { "name": "z2xz3", "points": 6, "weights": ["1/6", ...], "t1": [3, 4, 5, 0, 1, 2], "t2": [1, 2, 0, 4, 5, 3] }
//! ```
//!
//! `points` is a count or a list of labels; `weights` defaults to uniform.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use erglab::dynamics::{validate_system, CommutingSystem, Transformation};
use erglab::measure::WeightedSpace;
use erglab::rational::{format, parse};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Points,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
}

/// A validated system with its point labels.
#[derive(Debug, Clone)]
pub struct LoadedSystem {
    pub name: Option<String>,
    pub labels: Option<Vec<String>>,
    pub system: CommutingSystem,
}

impl LoadedSystem {
    /// Resolves a point given by label or by index.
    pub fn point(&self, token: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == token) {
                return Ok(i);
            }
        }
        let i: usize = token.parse().map_err(|_| anyhow!("unknown point `{token}`"))?;
        if i >= self.system.len() {
            bail!("point {i} out of range for {} points", self.system.len());
        }
        Ok(i)
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("parse error at line {}, column {}: {e}", e.line(), e.column()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn len(&self) -> usize {
        match &self.points {
            Points::Count(n) => *n,
            Points::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn load(&self) -> Result<LoadedSystem> {
        let n = self.len();
        let labels = match &self.points {
            Points::Labels(l) => {
                let mut sorted = l.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != l.len() {
                    bail!("points: labels must be distinct");
                }
                Some(l.clone())
            }
            Points::Count(_) => None,
        };
        let space = match &self.weights {
            None => WeightedSpace::uniform(n).context("points")?,
            Some(w) => {
                if w.len() != n {
                    bail!("weights: {} entries for {n} points", w.len());
                }
                let parsed = w
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse(s).ok_or_else(|| anyhow!("weights[{i}]: `{s}` is not a rational p/q")))
                    .collect::<Result<Vec<_>>>()?;
                WeightedSpace::new(parsed).context("weights")?
            }
        };
        let space = Arc::new(space);
        let perm = |field: &str, v: &[usize]| -> Result<Transformation> {
            if v.len() != n {
                bail!("{field}: {} entries for {n} points", v.len());
            }
            Transformation::new(v.to_vec()).with_context(|| field.to_string())
        };
        let system = validate_system(&space, perm("t1", &self.t1)?, perm("t2", &self.t2)?).context("system")?;
        Ok(LoadedSystem { name: self.name.clone(), labels, system })
    }

    /// Canonical document for a system: weights omitted when uniform.
    pub fn from_system(loaded: &LoadedSystem) -> Self {
        let sys = &loaded.system;
        let n = sys.len();
        let weights = sys.space().weights();
        let uniform = weights.iter().all(|w| *w == weights[0]);
        Self {
            name: loaded.name.clone(),
            points: match &loaded.labels {
                Some(l) => Points::Labels(l.clone()),
                None => Points::Count(n),
            },
            weights: (!uniform).then(|| weights.iter().map(format).collect()),
            t1: sys.t1().forward().to_vec(),
            t2: sys.t2().forward().to_vec(),
        }
    }
}

pub fn read_document(path: &std::path::Path) -> Result<(Vec<u8>, SystemDocument)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("document is not UTF-8")?;
    let doc = SystemDocument::from_json(text)?;
    Ok((bytes, doc))
}
