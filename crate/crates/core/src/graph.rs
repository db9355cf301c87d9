//! Associated digraphs: strongly connected components, maximum cycle mean,
//! critical digraph, cyclicity and cyclic classes.

use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::semiring::{MaxPlus, MaxPlusMatrix};

/// Tolerance for the zero tests that identify critical nodes and edges.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Digraph with finite edge weights; edge `(i, j)` exists iff `a_ij ≠ ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedDigraph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(i, j, w) in &edges {
            if i >= node_count || j >= node_count {
                return Err(Error::Precondition(format!(
                    "edge ({i}, {j}) refers to a node outside 0..{node_count}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidEntry {
                    row: i,
                    col: j,
                    reason: "edge weight must be finite".into(),
                });
            }
            if !seen.insert((i, j)) {
                return Err(Error::Precondition(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(WeightedDigraph { node_count, edges })
    }

    pub fn from_matrix(a: &MaxPlusMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let edges = a
            .entries()
            .filter_map(|(i, j, x)| x.value().map(|w| (i, j, w)))
            .collect();
        Ok(WeightedDigraph {
            node_count: a.rows(),
            edges,
        })
    }

    pub fn to_matrix(&self) -> MaxPlusMatrix {
        let mut m = MaxPlusMatrix::epsilon(self.node_count, self.node_count);
        for &(i, j, w) in &self.edges {
            m.set(i, j, MaxPlus::finite(w));
        }
        m
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(i, j, _)| (i, j)).collect()
    }
}

/// Maximum cycle mean by Karp's recurrence started from every node at once.
/// Returns ε for an acyclic graph.
pub fn max_cycle_mean(g: &WeightedDigraph) -> MaxPlus {
    let n = g.node_count;
    if n == 0 {
        return MaxPlus::EPSILON;
    }
    let neg = f64::NEG_INFINITY;
    // d[k][v]: best weight of a walk with exactly k edges ending at v
    let mut d = vec![vec![neg; n]; n + 1];
    d[0].iter_mut().for_each(|x| *x = 0.0);
    for k in 1..=n {
        let (prev, cur) = d.split_at_mut(k);
        let prev = &prev[k - 1];
        let cur = &mut cur[0];
        for &(u, v, w) in &g.edges {
            if prev[u] > neg {
                let cand = prev[u] + w;
                if cand > cur[v] {
                    cur[v] = cand;
                }
            }
        }
    }
    let mut best = neg;
    for v in 0..n {
        if d[n][v] == neg {
            continue;
        }
        let mut worst = f64::INFINITY;
        for (k, row) in d.iter().enumerate().take(n) {
            if row[v] > neg {
                let mean = (d[n][v] - row[v]) / (n - k) as f64;
                if mean < worst {
                    worst = mean;
                }
            }
        }
        if worst > best {
            best = worst;
        }
    }
    MaxPlus::try_from_f64(best).expect("cycle mean is never NaN or +inf")
}

pub fn matrix_max_cycle_mean(a: &MaxPlusMatrix) -> Result<MaxPlus> {
    Ok(max_cycle_mean(&WeightedDigraph::from_matrix(a)?))
}

/// Strongly connected components of the digraph on `0..n` with the given edges.
/// Each component is sorted; components are ordered by their smallest node.
pub fn strongly_connected_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(n, edges.len());
    let idx: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(i, j) in edges {
        g.add_edge(idx[i], idx[j], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

pub fn is_irreducible(g: &WeightedDigraph) -> bool {
    g.node_count > 0 && strongly_connected_components(g.node_count, &g.edge_pairs()).len() == 1
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Cyclicity and cyclic classes of one strongly connected component.
///
/// `nodes` must be strongly connected through `edges` (edges leaving the set are ignored).
/// The smallest node is the anchor with class 0. Returns `(γ, class per entry of nodes)`.
pub fn cyclic_classes(nodes: &[usize], edges: &[(usize, usize)]) -> Result<(usize, Vec<usize>)> {
    if nodes.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let pos = |x: usize| nodes.iter().position(|&y| y == x);
    let inner: Vec<(usize, usize)> = edges
        .iter()
        .filter_map(|&(u, v)| Some((pos(u)?, pos(v)?)))
        .collect();
    if inner.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let m = nodes.len();
    let mut adj = vec![Vec::new(); m];
    for &(u, v) in &inner {
        adj[u].push(v);
    }
    let anchor = (0..m).min_by_key(|&k| nodes[k]).expect("non-empty");
    let mut level = vec![usize::MAX; m];
    level[anchor] = 0;
    let mut queue = VecDeque::from([anchor]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if level.contains(&usize::MAX) {
        return Err(Error::Precondition(
            "node set is not strongly connected".into(),
        ));
    }
    let mut g = 0;
    for &(u, v) in &inner {
        let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
        g = gcd(g, diff);
    }
    if g == 0 {
        return Err(Error::Precondition(
            "node set is not strongly connected".into(),
        ));
    }
    Ok((g, level.into_iter().map(|l| l % g).collect()))
}

/// lcm over the non-trivial strongly connected components of the per-component cyclicities.
pub fn cyclicity(nodes: &[usize], edges: &[(usize, usize)]) -> Result<usize> {
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let n = nodes
        .iter()
        .copied()
        .chain(edges.iter().flat_map(|&(u, v)| [u, v]))
        .max()
        .map_or(0, |m| m + 1);
    let node_set: BTreeSet<usize> = nodes.iter().copied().collect();
    let kept: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|(u, v)| node_set.contains(u) && node_set.contains(v))
        .collect();
    let mut result = None;
    for comp in strongly_connected_components(n, &kept) {
        if !node_set.contains(&comp[0]) {
            continue;
        }
        let has_edge = kept
            .iter()
            .any(|(u, v)| comp.binary_search(u).is_ok() && comp.binary_search(v).is_ok());
        if !has_edge {
            continue;
        }
        let (g, _) = cyclic_classes(&comp, &kept)?;
        result = Some(result.map_or(g, |r| lcm(r, g)));
    }
    result.ok_or(Error::Acyclic)
}

/// One strongly connected component of the critical digraph.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalComponent {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub cyclicity: usize,
    /// Class of `nodes[k]` is `classes[k]`.
    pub classes: Vec<usize>,
}

impl CriticalComponent {
    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    pub fn class_of(&self, node: usize) -> Option<usize> {
        self.nodes.binary_search(&node).ok().map(|k| self.classes[k])
    }

    /// Smallest node of each cyclic class, indexed by class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.cyclicity];
        for (&node, &class) in self.nodes.iter().zip(&self.classes) {
            reps[class] = reps[class].min(node);
        }
        reps
    }
}

/// Critical digraph of a matrix together with cyclic structure of the ambient digraph.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalStructure {
    pub node_count: usize,
    pub lambda: f64,
    pub critical_nodes: Vec<usize>,
    pub critical_edges: Vec<(usize, usize)>,
    pub components: Vec<CriticalComponent>,
    /// lcm of the component cyclicities.
    pub global_cyclicity: usize,
    /// Cyclicity of the whole digraph.
    pub ambient_cyclicity: usize,
    /// Cyclic class of every node in the whole digraph, when it is strongly connected.
    pub ambient_classes: Option<Vec<usize>>,
}

impl CriticalStructure {
    pub fn q(&self) -> usize {
        self.critical_nodes.len()
    }

    pub fn is_critical(&self, node: usize) -> bool {
        self.critical_nodes.binary_search(&node).is_ok()
    }

    pub fn component_of(&self, node: usize) -> Option<usize> {
        self.components.iter().position(|c| c.contains(node))
    }

    /// `[i]' →_k [j]'` in the ambient digraph.
    pub fn ambient_reachable(&self, i: usize, j: usize, k: usize) -> Option<bool> {
        let classes = self.ambient_classes.as_ref()?;
        let r = self.ambient_cyclicity;
        Some((classes[i] + k % r) % r == classes[j])
    }

    /// 0 on critical edges, ε elsewhere.
    pub fn s_matrix(&self) -> MaxPlusMatrix {
        let mut s = MaxPlusMatrix::epsilon(self.node_count, self.node_count);
        for &(i, j) in &self.critical_edges {
            s.set(i, j, MaxPlus::ZERO);
        }
        s
    }

    /// Restriction of [`CriticalStructure::s_matrix`] to one component.
    pub fn s_component(&self, index: usize) -> MaxPlusMatrix {
        let mut s = MaxPlusMatrix::epsilon(self.node_count, self.node_count);
        for &(i, j) in &self.components[index].edges {
            s.set(i, j, MaxPlus::ZERO);
        }
        s
    }
}

/// Critical digraph of `g` whose maximum cycle mean is `lambda`.
pub fn critical_graph(g: &WeightedDigraph, lambda: MaxPlus) -> Result<CriticalStructure> {
    let lambda = lambda.value().ok_or(Error::Acyclic)?;
    let n = g.node_count;
    let shift = MaxPlus::finite(-lambda);
    let normalized = g.to_matrix().scale(shift);
    let plus = normalized.metric_unchecked();

    let critical_nodes: Vec<usize> = (0..n)
        .filter(|&i| plus.get(i, i).approx_eq(MaxPlus::ZERO, CRITICAL_TOLERANCE))
        .collect();
    let critical_edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter(|&&(i, j, w)| {
            plus.get(j, i)
                .value()
                .is_some_and(|back| (w - lambda + back).abs() <= CRITICAL_TOLERANCE)
        })
        .map(|&(i, j, _)| (i, j))
        .collect();

    let mut components = Vec::new();
    for comp in strongly_connected_components(n, &critical_edges) {
        if critical_nodes.binary_search(&comp[0]).is_err() {
            continue;
        }
        let edges: Vec<(usize, usize)> = critical_edges
            .iter()
            .copied()
            .filter(|(u, v)| comp.binary_search(u).is_ok() && comp.binary_search(v).is_ok())
            .collect();
        let (cyclicity, classes) = cyclic_classes(&comp, &edges)?;
        components.push(CriticalComponent {
            nodes: comp,
            edges,
            cyclicity,
            classes,
        });
    }
    if components.is_empty() {
        return Err(Error::Consistency("no critical cycle found".into()));
    }
    let global_cyclicity = components.iter().map(|c| c.cyclicity).fold(1, lcm);

    let pairs = g.edge_pairs();
    let ambient_cyclicity = cyclicity(&(0..n).collect::<Vec<_>>(), &pairs)?;
    let ambient_classes = if is_irreducible(g) {
        let all: Vec<usize> = (0..n).collect();
        Some(cyclic_classes(&all, &pairs)?.1)
    } else {
        None
    };

    Ok(CriticalStructure {
        node_count: n,
        lambda,
        critical_nodes,
        critical_edges,
        components,
        global_cyclicity,
        ambient_cyclicity,
        ambient_classes,
    })
}

/// Critical structure of a square matrix.
pub fn critical_structure(a: &MaxPlusMatrix) -> Result<CriticalStructure> {
    let g = WeightedDigraph::from_matrix(a)?;
    let lambda = max_cycle_mean(&g);
    critical_graph(&g, lambda)
}
