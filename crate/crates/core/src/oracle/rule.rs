use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::error::{Error, Result};

/// Acceptance functional on edge subsets. Every kind is monotone: adding an
/// edge never lowers the weight, which makes `β_k` non-decreasing in `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertyRule {
    /// 1 when `target` is reachable from `source` over subset edges (respecting direction).
    StConnectivity { source: usize, target: usize },
    /// Fraction of vertices whose component has at least `min_size` vertices:
    /// the chance that a uniformly random seed vertex reaches a cluster that large.
    ComponentThreshold { min_size: usize },
    /// 1 when some component has at least `min_size` vertices.
    LargestComponent { min_size: usize },
}

impl PropertyRule {
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        match *self {
            PropertyRule::StConnectivity { source, target } => {
                let n = graph.vertex_count();
                if source >= n || target >= n {
                    return Err(Error::Domain(format!(
                        "terminals ({source}, {target}) outside 0..{n}"
                    )));
                }
            }
            PropertyRule::ComponentThreshold { min_size } | PropertyRule::LargestComponent { min_size } => {
                if min_size == 0 {
                    return Err(Error::Domain("component threshold must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Weights are `numerator / denominator` with an integer numerator.
    pub fn weight_denominator(&self, graph: &Graph) -> u64 {
        match self {
            PropertyRule::ComponentThreshold { .. } => graph.vertex_count() as u64,
            _ => 1,
        }
    }
}

/// Reusable scratch space for evaluating one rule on many subsets.
#[derive(Debug, Clone)]
pub struct Evaluator<'g> {
    graph: &'g Graph,
    rule: PropertyRule,
    parent: Vec<usize>,
    size: Vec<usize>,
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    seen: Vec<bool>,
    queue: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl<'g> Evaluator<'g> {
    pub fn new(graph: &'g Graph, rule: PropertyRule) -> Result<Self> {
        rule.validate(graph)?;
        let v = graph.vertex_count();
        let e = graph.edge_count();
        Ok(Self {
            graph,
            rule,
            parent: vec![0; v],
            size: vec![0; v],
            head: vec![NIL; v],
            next: Vec::with_capacity(2 * e),
            to: Vec::with_capacity(2 * e),
            seen: vec![false; v],
            queue: Vec::with_capacity(v),
        })
    }

    pub fn denominator(&self) -> u64 {
        self.rule.weight_denominator(self.graph)
    }

    /// Integer numerator of the acceptance weight. Subset entries must be valid edge indices.
    pub fn numerator(&mut self, subset: &[usize]) -> u64 {
        match self.rule {
            PropertyRule::StConnectivity { source, target } => self.reachable(subset, source, target) as u64,
            PropertyRule::ComponentThreshold { min_size } => {
                self.components(subset);
                (0..self.parent.len())
                    .filter(|&v| {
                        let r = self.find(v);
                        self.size[r] >= min_size
                    })
                    .count() as u64
            }
            PropertyRule::LargestComponent { min_size } => {
                let largest = self.components(subset);
                (largest >= min_size) as u64
            }
        }
    }

    pub fn weight(&mut self, subset: &[usize]) -> f64 {
        self.numerator(subset) as f64 / self.denominator() as f64
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let p = self.parent[x];
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    /// Union-find over the undirected subset graph; returns the largest component size.
    fn components(&mut self, subset: &[usize]) -> usize {
        for v in 0..self.parent.len() {
            self.parent[v] = v;
            self.size[v] = 1;
        }
        let mut largest = usize::from(!self.parent.is_empty());
        for &e in subset {
            let (u, v) = self.graph.edges()[e];
            let (mut a, mut b) = (self.find(u), self.find(v));
            if a == b {
                continue;
            }
            if self.size[a] < self.size[b] {
                std::mem::swap(&mut a, &mut b);
            }
            self.parent[b] = a;
            self.size[a] += self.size[b];
            largest = largest.max(self.size[a]);
        }
        largest
    }

    /// Breadth-first search from `source` over subset edges.
    fn reachable(&mut self, subset: &[usize], source: usize, target: usize) -> bool {
        if source == target {
            return true;
        }
        self.head.fill(NIL);
        self.next.clear();
        self.to.clear();
        let directed = self.graph.is_directed();
        for &e in subset {
            let (u, v) = self.graph.edges()[e];
            self.push_arc(u, v);
            if !directed {
                self.push_arc(v, u);
            }
        }
        self.seen.fill(false);
        self.queue.clear();
        self.queue.push(source);
        self.seen[source] = true;
        let mut i = 0;
        while i < self.queue.len() {
            let u = self.queue[i];
            i += 1;
            let mut a = self.head[u];
            while a != NIL {
                let w = self.to[a];
                if !self.seen[w] {
                    if w == target {
                        return true;
                    }
                    self.seen[w] = true;
                    self.queue.push(w);
                }
                a = self.next[a];
            }
        }
        false
    }

    fn push_arc(&mut self, u: usize, v: usize) {
        self.to.push(v);
        self.next.push(self.head[u]);
        self.head[u] = self.to.len() - 1;
    }
}

/// Acceptance weight of one edge subset, in `[0, 1]`.
pub fn acceptance_weight(graph: &Graph, subset: &[usize], rule: PropertyRule) -> Result<f64> {
    if let Some(&bad) = subset.iter().find(|&&e| e >= graph.edge_count()) {
        return Err(Error::Domain(format!("edge index {bad} outside 0..{}", graph.edge_count())));
    }
    Ok(Evaluator::new(graph, rule)?.weight(subset))
}
