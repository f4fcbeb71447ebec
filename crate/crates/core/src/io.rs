//! JSON formats for instances, traces and solver results.
//!
//! Instances are objects with `n`, `topology` (`"cycle"` or
//! `{"edges": [[i, j], ...]}`), `preferences`, `initial` and `target`.
//! Reachable Object inputs carry `agent` and `object` instead of `target`.
//! Indices are 0-based unless the caller asks for 1-based input/output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dynamics::Swap;
use crate::model::{AgentId, Instance, ModelError, ObjectId, Topology};
use crate::reduction::RoInstance;
use crate::solver::Solution;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum TopologySpec {
    Named(String),
    Edges { edges: Vec<[usize; 2]> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    topology: TopologySpec,
    preferences: Vec<Vec<usize>>,
    initial: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    object: Option<usize>,
}

struct Index {
    one_based: bool,
}

impl Index {
    fn read(&self, v: usize, what: &str) -> Result<usize, IoError> {
        if self.one_based {
            v.checked_sub(1)
                .ok_or_else(|| IoError::Format(format!("index 0 in {what} with 1-based indexing")))
        } else {
            Ok(v)
        }
    }

    fn write(&self, v: usize) -> usize {
        v + usize::from(self.one_based)
    }

    fn objects(&self, v: &[usize], what: &str) -> Result<Vec<ObjectId>, IoError> {
        v.iter().map(|&o| self.read(o, what).map(ObjectId)).collect()
    }
}

fn build(file: &InstanceFile, ix: &Index, target: &[usize]) -> Result<Instance, IoError> {
    let topology = match &file.topology {
        TopologySpec::Named(s) if s == "cycle" => Topology::Cycle,
        TopologySpec::Named(s) => {
            return Err(IoError::Format(format!("unknown topology {s:?}")));
        }
        TopologySpec::Edges { edges } => Topology::Graph(
            edges
                .iter()
                .map(|&[a, b]| Ok((ix.read(a, "edges")?, ix.read(b, "edges")?)))
                .collect::<Result<_, IoError>>()?,
        ),
    };
    if file.preferences.len() != file.n {
        return Err(IoError::Format(format!(
            "n = {} but {} preference lists given",
            file.n,
            file.preferences.len()
        )));
    }
    let prefs = file
        .preferences
        .iter()
        .map(|l| ix.objects(l, "preferences"))
        .collect::<Result<_, _>>()?;
    Ok(Instance::new(
        topology,
        prefs,
        ix.objects(&file.initial, "initial")?,
        ix.objects(target, "target")?,
    )?)
}

pub fn parse_instance(text: &str, one_based: bool) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let target = file
        .target
        .clone()
        .ok_or_else(|| IoError::Format("missing field `target`".into()))?;
    build(&file, &Index { one_based }, &target)
}

pub fn parse_ro_instance(text: &str, one_based: bool) -> Result<RoInstance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let ix = Index { one_based };
    let (Some(agent), Some(object)) = (file.agent, file.object) else {
        return Err(IoError::Format("missing field `agent` or `object`".into()));
    };
    let target = file.target.clone().unwrap_or_else(|| file.initial.clone());
    let instance = build(&file, &ix, &target)?;
    let agent = ix.read(agent, "agent")?;
    let object = ix.read(object, "object")?;
    if agent >= instance.n() || object >= instance.n() {
        return Err(IoError::Format("agent or object out of range".into()));
    }
    Ok(RoInstance {
        instance,
        agent: AgentId(agent),
        object: ObjectId(object),
    })
}

fn to_file(instance: &Instance, ix: &Index) -> InstanceFile {
    let objs = |v: &[ObjectId]| v.iter().map(|o| ix.write(o.0)).collect::<Vec<_>>();
    InstanceFile {
        n: instance.n(),
        topology: match instance.topology() {
            Topology::Cycle => TopologySpec::Named("cycle".into()),
            Topology::Graph(edges) => TopologySpec::Edges {
                edges: edges.iter().map(|&(a, b)| [ix.write(a), ix.write(b)]).collect(),
            },
        },
        preferences: instance.all_preferences().iter().map(|l| objs(l)).collect(),
        initial: objs(instance.initial().objects()),
        target: Some(objs(instance.target().objects())),
        agent: None,
        object: None,
    }
}

pub fn instance_to_json(instance: &Instance, one_based: bool) -> Value {
    serde_json::to_value(to_file(instance, &Index { one_based })).expect("serializable")
}

pub fn ro_instance_to_json(ro: &RoInstance, one_based: bool) -> Value {
    let ix = Index { one_based };
    let mut file = to_file(&ro.instance, &ix);
    file.target = None;
    file.agent = Some(ix.write(ro.agent.0));
    file.object = Some(ix.write(ro.object.0));
    serde_json::to_value(file).expect("serializable")
}

pub fn trace_to_json(swaps: &[Swap], one_based: bool) -> Value {
    let ix = Index { one_based };
    Value::Array(
        swaps
            .iter()
            .map(|s| {
                json!({
                    "a": ix.write(s.a.0),
                    "b": ix.write(s.b.0),
                    "oa": ix.write(s.oa.0),
                    "ob": ix.write(s.ob.0),
                })
            })
            .collect(),
    )
}

pub fn parse_trace(text: &str, one_based: bool) -> Result<Vec<Swap>, IoError> {
    #[derive(Deserialize)]
    struct Step {
        a: usize,
        b: usize,
        oa: usize,
        ob: usize,
    }
    let steps: Vec<Step> = serde_json::from_str(text)?;
    let ix = Index { one_based };
    steps
        .into_iter()
        .map(|s| {
            Ok(Swap {
                a: AgentId(ix.read(s.a, "trace")?),
                b: AgentId(ix.read(s.b, "trace")?),
                oa: ObjectId(ix.read(s.oa, "trace")?),
                ob: ObjectId(ix.read(s.ob, "trace")?),
            })
        })
        .collect()
}

pub fn solution_to_json(sol: &Solution, one_based: bool) -> Value {
    let ix = Index { one_based };
    json!({
        "answer": if sol.reachable { "yes" } else { "no" },
        "first_swap_edge": sol.first_swap_edge.map(|(a, b)| [ix.write(a.0), ix.write(b.0)]),
        "selection": sol.selection.as_ref().map(|s| s.bits()),
        "trace": sol.trace.as_ref().map(|t| trace_to_json(t, one_based)),
        "guesses_examined": sol.guesses_examined,
    })
}
