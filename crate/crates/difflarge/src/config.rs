//! Workbench configuration: base field declaration plus numeric knobs.

use crate::basefield::BaseFieldSpec;
use crate::error::{Error, Result};
use crate::parse::parse_diffpoly;
use crate::ratfunc::RatFunc;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

fn default_prec() -> isize {
    16
}

fn default_search_bound() -> i64 {
    8
}

fn default_factor_degree_bound() -> u32 {
    12
}

fn default_derivative_cap() -> usize {
    64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorkbenchConfig {
    #[serde(default)]
    pub generators: Vec<String>,
    /// generator name -> derivation expression over the generators
    #[serde(default)]
    pub derivations: BTreeMap<String, String>,
    #[serde(default = "default_prec")]
    pub prec: isize,
    #[serde(default = "default_search_bound")]
    pub search_bound: i64,
    #[serde(default = "default_factor_degree_bound")]
    pub factor_degree_bound: u32,
    #[serde(default = "default_derivative_cap")]
    pub derivative_cap: usize,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig {
            generators: Vec::new(),
            derivations: BTreeMap::new(),
            prec: default_prec(),
            search_bound: default_search_bound(),
            factor_degree_bound: default_factor_degree_bound(),
            derivative_cap: default_derivative_cap(),
        }
    }
}

impl WorkbenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("malformed config: {}", e)))
    }

    /// Resolve the declared base field, parsing each derivation expression
    /// over the generator universe. Missing entries default to zero.
    pub fn base_spec(&self) -> Result<Arc<BaseFieldSpec>> {
        // a derivationless spec gives the parser the generator names
        let names_only = Arc::new(BaseFieldSpec::new(
            self.generators.clone(),
            vec![RatFunc::zero(); self.generators.len()],
        )?);
        let mut derivations = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let rf = match self.derivations.get(g) {
                Some(text) => {
                    let p = parse_diffpoly(text, &names_only)?;
                    p.as_field_elem().ok_or_else(|| {
                        Error::Validation(format!(
                            "derivation of `{}` must not involve the differential variable",
                            g
                        ))
                    })?
                }
                None => RatFunc::zero(),
            };
            derivations.push(rf);
        }
        for g in self.derivations.keys() {
            if !self.generators.contains(g) {
                return Err(Error::Validation(format!(
                    "derivation given for undeclared generator `{}`",
                    g
                )));
            }
        }
        Ok(Arc::new(BaseFieldSpec::new(
            self.generators.clone(),
            derivations,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = WorkbenchConfig::from_json("{}").unwrap();
        assert_eq!(c.prec, 16);
        assert_eq!(c.search_bound, 8);
        assert_eq!(c.factor_degree_bound, 12);
        assert_eq!(c.derivative_cap, 64);
        assert!(c.base_spec().unwrap().generator_count() == 0);
    }

    #[test]
    fn declared_base() {
        let c = WorkbenchConfig::from_json(
            r#"{"generators":["u"],"derivations":{"u":"1"},"prec":12}"#,
        )
        .unwrap();
        let b = c.base_spec().unwrap();
        assert_eq!(b.generator_count(), 1);
        assert!(b.derivation_of(0).is_one());
        assert_eq!(c.prec, 12);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(WorkbenchConfig::from_json(r#"{"prec":"big"}"#).is_err());
        let c = WorkbenchConfig::from_json(r#"{"generators":["u"],"derivations":{"v":"1"}}"#)
            .unwrap();
        assert!(c.base_spec().is_err());
        let c = WorkbenchConfig::from_json(r#"{"generators":["u"],"derivations":{"u":"x'"}}"#)
            .unwrap();
        assert!(c.base_spec().is_err());
    }
}
