//! JSON input documents.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nachbin_core::fnalg::same_carrier;
use nachbin_core::order::{validate_order, ValidatedOrder};
use nachbin_core::rational::{format_rational, parse_rational};
use nachbin_core::{carrier, Carrier, QuasiOrder, RationalFn, SbalSkeleton, SubalgebraPartition};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn to_order(&self, require_antisymmetry: bool) -> Result<ValidatedOrder, CliError> {
        Ok(validate_order(&self.elements, &self.leq, require_antisymmetry)?)
    }

    /// Canonical form: every strict pair of the closure, in index order.
    pub fn from_order(q: &QuasiOrder) -> Self {
        let elements = q.labels().to_vec();
        let leq = q.pairs().filter(|(i, j)| i != j).map(|(i, j)| (elements[i].clone(), elements[j].clone())).collect();
        Self { elements, leq }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub carrier: Vec<String>,
    pub values: BTreeMap<String, String>,
}

impl FunctionDoc {
    pub fn to_fn(&self) -> Result<RationalFn, CliError> {
        if self.values.len() != self.carrier.len() {
            return Err(CliError::Input(format!(
                "function has {} values for {} carrier points",
                self.values.len(),
                self.carrier.len()
            )));
        }
        let mut pairs = Vec::with_capacity(self.values.len());
        for (k, v) in &self.values {
            pairs.push((k.as_str(), parse_rational(v)?));
        }
        Ok(RationalFn::from_labeled(carrier(&self.carrier), pairs)?)
    }

    pub fn from_fn(f: &RationalFn) -> Self {
        let carrier = f.carrier().to_vec();
        let values = carrier.iter().cloned().zip(f.values().iter().map(format_rational)).collect();
        Self { carrier, values }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub carrier: Vec<String>,
    pub blocks: Vec<Vec<String>>,
}

impl AlgebraDoc {
    pub fn to_partition(&self) -> Result<SubalgebraPartition, CliError> {
        let c = carrier(&self.carrier);
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|l| self.carrier.iter().position(|x| x == l).ok_or_else(|| CliError::Input(format!("unknown element `{l}`"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SubalgebraPartition::from_blocks(c, &blocks)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SkeletonDoc {
    Quasi { quasiorder: PosetDoc },
    Generators { generators: Vec<FunctionDoc> },
}

impl SkeletonDoc {
    pub fn to_skeleton(&self) -> Result<SbalSkeleton, CliError> {
        match self {
            SkeletonDoc::Quasi { quasiorder } => Ok(SbalSkeleton::new(quasiorder.to_order(false)?.quasi().clone())),
            SkeletonDoc::Generators { generators } => {
                let gens = generators.iter().map(FunctionDoc::to_fn).collect::<Result<Vec<_>, _>>()?;
                let first = gens.first().ok_or_else(|| CliError::Input("skeleton needs at least one generator".into()))?;
                let c: Carrier = first.carrier().clone();
                if gens.iter().any(|g| !same_carrier(g.carrier(), &c)) {
                    return Err(CliError::Input("generators have different carriers".into()));
                }
                Ok(SbalSkeleton::from_generators(c, &gens)?)
            }
        }
    }
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))
}

/// Canonical serialization; parsing it back and re-serializing is byte-identical.
pub fn to_canonical<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}
