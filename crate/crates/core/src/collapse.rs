//! The circuit graph of a cobordism, collapsibility and the factorization of
//! a collapsible cobordism into elementary moves between its boundary fans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::Serialize;

use crate::cobordism::{project, project_cone, Circuit, Cobordism, ConeClass};
use crate::error::{Error, Result};
use crate::fan::{self, Fan, Ray, SimplicialCone};
use crate::linalg;

/// Identifies a circuit by its sorted ray set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CircuitKey(Vec<Ray>);

impl CircuitKey {
    pub fn new(mut rays: Vec<Ray>) -> CircuitKey {
        rays.sort();
        CircuitKey(rays)
    }

    pub fn rays(&self) -> &[Ray] {
        &self.0
    }
}

impl fmt::Display for CircuitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug)]
pub struct CircuitNode {
    pub key: CircuitKey,
    pub circuit: Circuit,
    /// Maximal cones carrying this circuit.
    pub cones: Vec<SimplicialCone>,
}

impl CircuitNode {
    pub fn class(&self) -> ConeClass {
        self.circuit.class()
    }
}

/// Nodes are the distinct circuits in key order; `a -> b` when some cone
/// with circuit `b` contains a positive ray of `a`.
#[derive(Clone, Debug)]
pub struct CollapseGraph {
    nodes: Vec<CircuitNode>,
    edges: BTreeSet<(usize, usize)>,
}

impl CollapseGraph {
    pub fn nodes(&self) -> &[CircuitNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn index_of(&self, key: &CircuitKey) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.key.cmp(key)).ok()
    }

    pub fn node(&self, key: &CircuitKey) -> Option<&CircuitNode> {
        self.index_of(key).map(|i| &self.nodes[i])
    }

    pub fn has_edge(&self, from: &CircuitKey, to: &CircuitKey) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(a), Some(b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }

    fn successors(&self, i: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    /// Graphviz rendering; edges along `highlight` (a cycle, closed) are red.
    pub fn to_dot(&self, highlight: &[CircuitKey]) -> String {
        let idx: Vec<usize> = highlight.iter().filter_map(|k| self.index_of(k)).collect();
        let marked: BTreeSet<(usize, usize)> = (0..idx.len()).map(|i| (idx[i], idx[(i + 1) % idx.len()])).collect();
        let mut out = String::from("digraph circuits {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let list = |rs: Vec<&Ray>| rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                out,
                "  c{i} [label=\"{}\\nPOS {}\\nNEG {}\"];",
                n.class(),
                list(n.circuit.positive()),
                list(n.circuit.negative())
            );
        }
        for &(a, b) in &self.edges {
            if marked.contains(&(a, b)) {
                let _ = writeln!(out, "  c{a} -> c{b} [color=red, penwidth=2];");
            } else {
                let _ = writeln!(out, "  c{a} -> c{b};");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn circuit_graph(cob: &Cobordism) -> CollapseGraph {
    let mut by_key: BTreeMap<CircuitKey, CircuitNode> = BTreeMap::new();
    for (cone, cc) in cob.circuits() {
        let Some(cc) = cc else { continue };
        let key = CircuitKey(cc.circuit.rays().to_vec());
        let node = by_key.entry(key.clone()).or_insert_with(|| CircuitNode {
            key,
            circuit: cc.circuit.clone(),
            cones: Vec::new(),
        });
        debug_assert_eq!(node.circuit, cc.circuit, "a circuit does not depend on the cone carrying it");
        node.cones.push(cone.clone());
    }
    let nodes: Vec<CircuitNode> = by_key.into_values().collect();
    let mut edges = BTreeSet::new();
    for (a, from) in nodes.iter().enumerate() {
        for p in from.circuit.positive() {
            for (b, to) in nodes.iter().enumerate() {
                if a != b && to.cones.iter().any(|c| c.contains_ray(p)) {
                    edges.insert((a, b));
                }
            }
        }
    }
    CollapseGraph { nodes, edges }
}

/// Either a collapse order or a directed cycle of circuits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseVerdict {
    pub collapsible: bool,
    /// Topological order if collapsible, otherwise a cycle starting at its
    /// smallest key.
    pub witness: Vec<CircuitKey>,
}

fn topological_order(g: &CollapseGraph) -> Option<Vec<usize>> {
    let n = g.nodes.len();
    let mut indegree = vec![0usize; n];
    for &(_, b) in &g.edges {
        indegree[b] += 1;
    }
    let priority = |i: usize| -> (BigInt, usize) { (g.nodes[i].circuit.top_height(), i) };
    let mut ready: BTreeSet<(BigInt, usize)> = (0..n).filter(|&i| indegree[i] == 0).map(priority).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, i)) = ready.pop_first() {
        order.push(i);
        for j in g.successors(i) {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(priority(j));
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn find_cycle(g: &CollapseGraph) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = g.nodes.len();
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, g.successors(root).rev().collect())];
        mark[root] = Mark::Active;
        while let Some((v, pending)) = stack.last_mut() {
            let v = *v;
            match pending.pop() {
                None => {
                    mark[v] = Mark::Done;
                    stack.pop();
                }
                Some(w) => match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        stack.push((w, g.successors(w).rev().collect()));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|(u, _)| *u == w).expect("active node is on the stack");
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|(u, _)| *u).collect();
                        let lowest = cycle.iter().enumerate().min_by_key(|(_, u)| **u).map(|(i, _)| i).unwrap();
                        cycle.rotate_left(lowest);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                },
            }
        }
    }
    None
}

pub fn is_collapsible(cob: &Cobordism) -> CollapseVerdict {
    verdict(&circuit_graph(cob))
}

pub fn verdict(g: &CollapseGraph) -> CollapseVerdict {
    let keys = |idx: Vec<usize>| idx.into_iter().map(|i| g.nodes[i].key.clone()).collect();
    match topological_order(g) {
        Some(order) => CollapseVerdict { collapsible: true, witness: keys(order) },
        None => {
            let cycle = find_cycle(g).expect("a graph without topological order has a cycle");
            CollapseVerdict { collapsible: false, witness: keys(cycle) }
        }
    }
}

/// Whether every π-independent face projects to a smooth cone; otherwise the
/// first offending face in canonical order.
pub fn is_pi_nonsingular(cob: &Cobordism) -> (bool, Option<SimplicialCone>) {
    let mut seen = BTreeSet::new();
    for sigma in cob.max_cones() {
        for face in sigma.faces() {
            if !seen.insert(face.clone()) || !project(&face).1 {
                continue;
            }
            let image = project_cone(&face).expect("independent projection");
            let gcd = linalg::maximal_minor_gcd(&image.generators()).expect("common dimension");
            if gcd != BigInt::from(1) {
                return (false, Some(face));
            }
        }
    }
    (true, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "ray", rename_all = "snake_case")]
pub enum StepKind {
    /// Star subdivision at the projected positive ray.
    Blowup(Ray),
    /// Inverse of a star subdivision at the projected negative ray.
    Blowdown(Ray),
    Flip,
    /// The front does not change.
    Identity,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Blowup(r) => write!(f, "blowup at {r}"),
            StepKind::Blowdown(r) => write!(f, "blowdown at {r}"),
            StepKind::Flip => f.write_str("flip"),
            StepKind::Identity => f.write_str("identity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorStep {
    pub kind: StepKind,
    pub circuit: CircuitKey,
    /// The front after this step.
    pub result: Fan,
}

fn projected_faces(node: &CircuitNode, drop: &[&Ray]) -> Result<BTreeSet<SimplicialCone>> {
    let mut out = BTreeSet::new();
    for cone in &node.cones {
        for r in drop {
            let face = cone.without(r).ok_or_else(|| Error::AssertionFailed(format!("{r} is not a ray of {cone}")))?;
            if !face.is_empty() {
                out.insert(project_cone(&face)?);
            }
        }
    }
    Ok(out)
}

/// Walks the circuits in collapse order, replacing the lower faces of each
/// circuit's star by its upper faces, from the bottom fan to the top fan.
pub fn extract_factorization(cob: &Cobordism, elide_identity: bool) -> Result<Vec<FactorStep>> {
    let graph = circuit_graph(cob);
    let verdict = verdict(&graph);
    if !verdict.collapsible {
        return Err(Error::NotCollapsible(verdict.witness.len()));
    }
    let d = cob.base_dim();
    let mut front = cob.bottom().clone();
    let mut steps = Vec::new();
    for key in verdict.witness {
        let node = graph.node(&key).expect("key from the graph");
        let pos = node.circuit.positive();
        let neg = node.circuit.negative();
        let kind = match node.class() {
            ConeClass::Up => StepKind::Blowup(Ray::new(&pos[0].base())?),
            ConeClass::Down => StepKind::Blowdown(Ray::new(&neg[0].base())?),
            ConeClass::UpDown => StepKind::Identity,
            ConeClass::Mixed => StepKind::Flip,
            ConeClass::Degenerate | ConeClass::Independent => return Err(Error::DegenerateCircuit),
        };
        let lower = projected_faces(node, &pos)?;
        let upper = projected_faces(node, &neg)?;
        if let Some(missing) = lower.iter().find(|c| !front.has_cone(c)) {
            return Err(Error::FrontMismatch(format!(
                "cone {missing} of circuit {key} is not a maximal cone of the current front"
            )));
        }
        let cones = front.max_cones().iter().filter(|c| !lower.contains(c)).cloned().chain(upper);
        front = Fan::new(d, cones)?;
        let report = fan::validate_fan(&front);
        if !report.is_valid() {
            return Err(Error::BrokenFan(report));
        }
        if !(elide_identity && kind == StepKind::Identity) {
            steps.push(FactorStep { kind, circuit: key, result: front.clone() });
        }
    }
    if !fan::fans_equal(&front, cob.top()) {
        return Err(Error::FrontMismatch("the last front differs from the upper boundary fan".into()));
    }
    Ok(steps)
}
