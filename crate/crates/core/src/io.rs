//! JSON wire formats. Item indices are 0-based everywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ItemGraph;
use crate::model::{Allocation, Bundle, Instance, Metadata, Valuation};
use crate::value::RawValue;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub items: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    pub agents: Vec<RawAgent>,
    /// Role annotations written by the gadget generators; ignored on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadget: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawAgent {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub valuation: RawValuation,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RawValuation {
    Additive { values: Vec<RawValue> },
    Binary { approves: Vec<usize> },
    TwoAdditive { weights: Vec<RawWeight> },
    Table { entries: Vec<RawEntry> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawWeight {
    pub items: Vec<usize>,
    pub w: RawValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawEntry {
    pub bundle: Vec<usize>,
    pub value: RawValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawAllocation {
    pub bundles: Vec<Vec<usize>>,
}

impl RawValuation {
    fn to_valuation(&self, agent: usize) -> Result<Valuation> {
        Ok(match self {
            RawValuation::Additive { values } => {
                Valuation::Additive(values.iter().map(RawValue::parse).collect::<Result<_>>()?)
            }
            RawValuation::Binary { approves } => {
                let set: BTreeSet<usize> = approves.iter().copied().collect();
                if set.len() != approves.len() {
                    return Err(Error::InvalidInstance(format!("agent {agent}: repeated approval")));
                }
                Valuation::Binary(set)
            }
            RawValuation::TwoAdditive { weights } => {
                let mut singles = BTreeMap::new();
                let mut pairs = BTreeMap::new();
                for wt in weights {
                    let w = wt.w.parse()?;
                    let dup = match wt.items[..] {
                        [v] => singles.insert(v, w).is_some(),
                        [a, b] if a != b => pairs.insert((a.min(b), a.max(b)), w).is_some(),
                        _ => {
                            return Err(Error::InvalidInstance(format!(
                                "agent {agent}: weight on {:?} must name one item or two distinct items",
                                wt.items
                            )))
                        }
                    };
                    if dup {
                        return Err(Error::InvalidInstance(format!(
                            "agent {agent}: repeated weight on {:?}",
                            wt.items
                        )));
                    }
                }
                Valuation::TwoAdditive { singles, pairs }
            }
            RawValuation::Table { entries } => {
                let mut table = HashMap::new();
                for e in entries {
                    let b = Bundle::new(e.bundle.iter().copied());
                    if b.len() != e.bundle.len() {
                        return Err(Error::InvalidInstance(format!(
                            "agent {agent}: repeated item in table bundle {:?}",
                            e.bundle
                        )));
                    }
                    if table.insert(b, e.value.parse()?).is_some() {
                        return Err(Error::InvalidInstance(format!(
                            "agent {agent}: table lists {:?} twice",
                            e.bundle
                        )));
                    }
                }
                Valuation::Table(table)
            }
        })
    }

    fn from_valuation(v: &Valuation) -> Self {
        match v {
            Valuation::Additive(values) => {
                RawValuation::Additive { values: values.iter().map(|&x| x.into()).collect() }
            }
            Valuation::Binary(a) => RawValuation::Binary { approves: a.iter().copied().collect() },
            Valuation::TwoAdditive { singles, pairs } => {
                let mut weights: Vec<RawWeight> =
                    singles.iter().map(|(&v, &w)| RawWeight { items: vec![v], w: w.into() }).collect();
                weights.extend(
                    pairs.iter().map(|(&(a, b), &w)| RawWeight { items: vec![a, b], w: w.into() }),
                );
                RawValuation::TwoAdditive { weights }
            }
            Valuation::Table(t) => {
                let mut entries: Vec<_> = t.iter().collect();
                entries.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
                RawValuation::Table {
                    entries: entries
                        .into_iter()
                        .map(|(b, &v)| RawEntry { bundle: b.items().to_vec(), value: v.into() })
                        .collect(),
                }
            }
        }
    }
}

impl RawInstance {
    pub fn to_instance(&self) -> Result<Instance> {
        let graph = ItemGraph::with_labels(self.items.clone(), self.edges.iter().map(|e| (e[0], e[1])))?;
        let valuations = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| a.valuation.to_valuation(i))
            .collect::<Result<Vec<_>>>()?;
        let names = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| a.name.clone().unwrap_or_else(|| format!("agent{}", i + 1)))
            .collect();
        let meta = Metadata { name: self.name.clone(), provenance: self.provenance.clone() };
        Instance::with_names(graph, valuations, names, meta)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        RawInstance {
            name: inst.meta().name.clone(),
            provenance: inst.meta().provenance.clone(),
            items: inst.graph().labels().to_vec(),
            edges: inst.graph().edges().iter().map(|&(a, b)| [a, b]).collect(),
            agents: inst
                .valuations()
                .iter()
                .enumerate()
                .map(|(i, v)| RawAgent {
                    name: Some(inst.agent_name(i).to_string()),
                    valuation: RawValuation::from_valuation(v),
                })
                .collect(),
            gadget: None,
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    serde_json::from_str::<RawInstance>(text)?.to_instance()
}

pub fn instance_to_json(inst: &Instance) -> serde_json::Value {
    serde_json::to_value(RawInstance::from_instance(inst)).expect("instances always serialize")
}

impl From<&Allocation> for RawAllocation {
    fn from(a: &Allocation) -> Self {
        RawAllocation { bundles: a.bundles().iter().map(|b| b.items().to_vec()).collect() }
    }
}

impl RawAllocation {
    /// Rejects repeated items inside a bundle; everything else is checked by
    /// [`Instance::validate_allocation`].
    pub fn to_allocation(&self) -> Result<Allocation> {
        for (i, b) in self.bundles.iter().enumerate() {
            if Bundle::new(b.iter().copied()).len() != b.len() {
                return Err(Error::InvalidAllocation(format!("bundle {i} repeats an item")));
            }
        }
        Ok(Allocation::from_lists(self.bundles.iter().cloned()))
    }
}

pub fn parse_allocation(text: &str) -> Result<Allocation> {
    serde_json::from_str::<RawAllocation>(text)?.to_allocation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{int, Value};

    #[test]
    fn parses_every_valuation_kind() {
        let text = r#"{
            "items": ["a", "b", "c"],
            "edges": [[0, 1], [1, 2]],
            "agents": [
                {"kind": "additive", "values": [1, "1/2", 0]},
                {"kind": "binary", "approves": [2], "name": "Bob"},
                {"kind": "two_additive", "weights": [{"items": [0], "w": 1}, {"items": [2, 0], "w": -1}]},
                {"kind": "table", "entries": [
                    {"bundle": [0], "value": 1}, {"bundle": [1], "value": 1}, {"bundle": [2], "value": 1},
                    {"bundle": [0, 1], "value": 2}, {"bundle": [1, 2], "value": 2}, {"bundle": [0, 1, 2], "value": 2}
                ]}
            ]
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.agent_count(), 4);
        assert_eq!(inst.agent_name(1), "Bob");
        assert_eq!(inst.value(0, &Bundle::new([0, 1])).unwrap(), Value::new(3, 2));
        assert_eq!(inst.value(2, &Bundle::new([0, 1, 2])).unwrap(), int(0));

        let again = serde_json::to_string(&instance_to_json(&inst)).unwrap();
        let back = parse_instance(&again).unwrap();
        assert_eq!(back.fingerprint(), inst.fingerprint());
    }

    #[test]
    fn rejects_out_of_range_edge() {
        let text = r#"{"items": ["a","b","c","d","e"], "edges": [[0, 9]], "agents": [{"kind": "binary", "approves": []}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn rejects_floats() {
        let text = r#"{"items": ["a"], "agents": [{"kind": "additive", "values": ["0.5"]}]}"#;
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn allocation_roundtrip() {
        let a = parse_allocation(r#"{"bundles": [[1, 0], []]}"#).unwrap();
        assert_eq!(a.bundle(0).items(), [0, 1]);
        assert_eq!(RawAllocation::from(&a).bundles, vec![vec![0, 1], vec![]]);
        assert!(parse_allocation(r#"{"bundles": [[1, 1]]}"#).is_err());
    }
}
