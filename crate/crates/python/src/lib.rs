//! Python bindings for the `swapreach` solver.
//!
//! ```python
//! import swapreach
//! inst = swapreach.Instance.from_json(open("fig1.json").read(), one_indexed=True)
//! sol = swapreach.solve(inst)
//! assert sol.reachable
//! ```

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use swapreach::dynamics::{greedy_swap, verify_trace, GreedyOutcome, Swap};
use swapreach::generate::GenMode;
use swapreach::geometry::CandidateTable;
use swapreach::oracle::OracleAnswer;
use swapreach::{io, AgentId, ObjectId, RoInstance, Selection, Topology};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ids(v: Vec<usize>) -> Vec<ObjectId> {
    v.into_iter().map(ObjectId).collect()
}

type SwapTuple = (usize, usize, usize, usize);

fn swaps_out(swaps: &[Swap]) -> Vec<SwapTuple> {
    swaps.iter().map(|s| (s.a.0, s.b.0, s.oa.0, s.ob.0)).collect()
}

/// A Reachable Assignment instance. Labels are 0-based.
#[pyclass(frozen, module = "swapreach")]
struct Instance {
    inner: swapreach::Instance,
}

#[pymethods]
impl Instance {
    /// `edges=None` means the cycle 0-1-...-(n-1)-0.
    #[new]
    #[pyo3(signature = (preferences, initial, target, edges=None))]
    fn new(
        preferences: Vec<Vec<usize>>,
        initial: Vec<usize>,
        target: Vec<usize>,
        edges: Option<Vec<(usize, usize)>>,
    ) -> PyResult<Self> {
        let topology = edges.map_or(Topology::Cycle, Topology::Graph);
        let prefs = preferences.into_iter().map(ids).collect();
        swapreach::Instance::new(topology, prefs, ids(initial), ids(target))
            .map(|inner| Instance { inner })
            .map_err(value_err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, one_indexed=false))]
    fn from_json(text: &str, one_indexed: bool) -> PyResult<Self> {
        io::parse_instance(text, one_indexed)
            .map(|inner| Instance { inner })
            .map_err(value_err)
    }

    #[pyo3(signature = (one_indexed=false))]
    fn to_json(&self, one_indexed: bool) -> String {
        io::instance_to_json(&self.inner, one_indexed).to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn is_cycle(&self) -> bool {
        self.inner.is_cycle()
    }

    #[getter]
    fn preferences(&self) -> Vec<Vec<usize>> {
        self.inner
            .all_preferences()
            .iter()
            .map(|l| l.iter().map(|o| o.0).collect())
            .collect()
    }

    #[getter]
    fn initial(&self) -> Vec<usize> {
        self.inner.initial().objects().iter().map(|o| o.0).collect()
    }

    #[getter]
    fn target(&self) -> Vec<usize> {
        self.inner.target().objects().iter().map(|o| o.0).collect()
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, cycle={})", self.inner.n(), self.inner.is_cycle())
    }
}

/// Result of [`solve`].
#[pyclass(frozen, get_all, module = "swapreach")]
struct Solution {
    reachable: bool,
    first_swap_edge: Option<(usize, usize)>,
    /// One bit per object, 1 for clockwise.
    selection: Option<Vec<u8>>,
    /// Swaps as `(agent_a, agent_b, object_a, object_b)`.
    trace: Option<Vec<SwapTuple>>,
    guesses_examined: usize,
    json: String,
}

#[pymethods]
impl Solution {
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(reachable={}, guesses_examined={})",
            if self.reachable { "True" } else { "False" },
            self.guesses_examined
        )
    }
}

/// Decide a cycle instance in polynomial time.
#[pyfunction]
fn solve(py: Python<'_>, instance: &Instance) -> PyResult<Solution> {
    let inner = instance.inner.clone();
    let sol = py.detach(move || swapreach::solve(&inner)).map_err(value_err)?;
    Ok(Solution {
        reachable: sol.reachable,
        first_swap_edge: sol.first_swap_edge.map(|(a, b)| (a.0, b.0)),
        selection: sol.selection.as_ref().map(Selection::bits),
        trace: sol.trace.as_deref().map(swaps_out),
        guesses_examined: sol.guesses_examined,
        json: io::solution_to_json(&sol, false).to_string(),
    })
}

/// Exhaustive search. Returns a witness trace, or `None` if unreachable.
#[pyfunction]
#[pyo3(signature = (instance, cap=swapreach::oracle::DEFAULT_CAP))]
fn oracle(instance: &Instance, cap: usize) -> PyResult<Option<Vec<SwapTuple>>> {
    match swapreach::oracle_reachable_assignment(&instance.inner, cap).map_err(value_err)? {
        OracleAnswer::Yes(t) => Ok(Some(swaps_out(&t))),
        OracleAnswer::No => Ok(None),
    }
}

/// Exhaustive search for a single agent obtaining a single object.
#[pyfunction]
#[pyo3(signature = (instance, agent, object, cap=swapreach::oracle::DEFAULT_CAP))]
fn oracle_object(
    instance: &Instance,
    agent: usize,
    object: usize,
    cap: usize,
) -> PyResult<Option<Vec<SwapTuple>>> {
    let n = instance.inner.n();
    if agent >= n || object >= n {
        return Err(value_err("agent or object out of range"));
    }
    let answer = swapreach::oracle_reachable_object(&instance.inner, AgentId(agent), ObjectId(object), cap)
        .map_err(value_err)?;
    match answer {
        OracleAnswer::Yes(t) => Ok(Some(swaps_out(&t))),
        OracleAnswer::No => Ok(None),
    }
}

fn selection_for(instance: &swapreach::Instance, bits: &[u8]) -> PyResult<Selection> {
    if bits.len() != instance.n() {
        return Err(value_err(format!(
            "selection has {} entries for {} objects",
            bits.len(),
            instance.n()
        )));
    }
    Ok(Selection::from_bits(&bits.iter().map(|&b| b != 0).collect::<Vec<_>>()))
}

fn reduced(instance: &Instance) -> PyResult<swapreach::Instance> {
    if !instance.inner.is_cycle() {
        return Err(value_err("expected a cycle instance"));
    }
    instance.inner.apply_rule_1().map_err(value_err)
}

/// Simulate a selection (1 = clockwise). Returns the trace or `None`.
#[pyfunction]
fn greedy(instance: &Instance, selection: Vec<u8>) -> PyResult<Option<Vec<SwapTuple>>> {
    let inst = reduced(instance)?;
    let gamma = selection_for(&inst, &selection)?;
    Ok(match greedy_swap(&inst, &gamma) {
        GreedyOutcome::Reached(t) => Some(swaps_out(&t.swaps)),
        GreedyOutcome::Failed(_) => None,
    })
}

/// Static validity check of a selection against the candidate table.
#[pyfunction]
fn is_valid(instance: &Instance, selection: Vec<u8>) -> PyResult<bool> {
    let inst = reduced(instance)?;
    let gamma = selection_for(&inst, &selection)?;
    let table = CandidateTable::build(&inst).map_err(value_err)?;
    Ok(swapreach::is_valid(&gamma, &table))
}

/// Does the trace lead from the initial to the target assignment?
#[pyfunction]
fn verify(instance: &Instance, trace: Vec<SwapTuple>) -> bool {
    let swaps: Vec<Swap> = trace
        .into_iter()
        .map(|(a, b, oa, ob)| Swap {
            a: AgentId(a),
            b: AgentId(b),
            oa: ObjectId(oa),
            ob: ObjectId(ob),
        })
        .collect();
    verify_trace(&instance.inner, &swaps).is_ok()
}

/// `n - Y/n`, where `Y` is the total clockwise displacement of all objects.
#[pyfunction]
fn theta(instance: &Instance) -> PyResult<usize> {
    swapreach::theta(&reduced(instance)?).map_err(value_err)
}

/// Candidate table dump as a JSON string.
#[pyfunction]
fn candidate_table(instance: &Instance) -> PyResult<String> {
    let table = CandidateTable::build(&reduced(instance)?).map_err(value_err)?;
    Ok(table.to_json(false).to_string())
}

/// Seeded generator; `mode` is "random", "yes-guaranteed" or "perturbed".
#[pyfunction]
#[pyo3(signature = (n, mode="random", seed=0))]
fn generate(n: usize, mode: &str, seed: u64) -> PyResult<Instance> {
    if n < 3 {
        return Err(value_err("n must be at least 3"));
    }
    let mode = match mode {
        "random" => GenMode::Random,
        "yes-guaranteed" => GenMode::YesGuaranteed,
        "perturbed" => GenMode::Perturbed,
        other => return Err(value_err(format!("unknown mode {other:?}"))),
    };
    Ok(Instance {
        inner: swapreach::generate::generate(n, mode, seed),
    })
}

/// Reachable Object on a complete graph to Reachable Assignment.
#[pyfunction]
fn reduce(instance: &Instance, agent: usize, object: usize) -> PyResult<Instance> {
    let n = instance.inner.n();
    if agent >= n || object >= n {
        return Err(value_err("agent or object out of range"));
    }
    let ro = RoInstance {
        instance: instance.inner.clone(),
        agent: AgentId(agent),
        object: ObjectId(object),
    };
    swapreach::reduce_ro_to_ra(&ro)
        .map(|inner| Instance { inner })
        .map_err(value_err)
}

#[pymodule]
#[pyo3(name = "swapreach")]
fn swapreach_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_object, m)?)?;
    m.add_function(wrap_pyfunction!(greedy, m)?)?;
    m.add_function(wrap_pyfunction!(is_valid, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(candidate_table, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    Ok(())
}
