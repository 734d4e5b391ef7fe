//! Simple undirected graphs on dense vertex ids `0..n`, the graph families
//! used throughout the crate, and the structural predicates the solvers rely
//! on (forest test, degeneracy, degrees).
//!
//! Family builders fix canonical vertex orderings: path powers are written in
//! path order and cycle powers in cyclic order, so a peel set is always an
//! index range.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::error::{param, Error, Result};

pub type Vertex = usize;

/// Provenance of a graph built by [`Graph::build`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyTag {
    PathPower {
        n: usize,
        p: usize,
    },
    CyclePower {
        n: usize,
        p: usize,
    },
    Complete {
        n: usize,
    },
    CompleteMinusEdge {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    /// Disjoint union; `boundaries[i]` is the first vertex of component `i`.
    Union {
        boundaries: Vec<usize>,
    },
    Custom,
}

/// Parameters for one of the named graph families.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    /// `P_n^p`: vertices in path order, `uv` an edge iff `0 < |u-v| <= p`.
    PathPower {
        n: usize,
        p: usize,
    },
    /// `C_n^p`: vertices in cyclic order.
    CyclePower {
        n: usize,
        p: usize,
    },
    Complete {
        n: usize,
    },
    /// `K_n` without the edge between the first and last vertex.
    CompleteMinusEdge {
        n: usize,
    },
    /// `K_{a,b}` with side X = `0..a` and side Y = `a..a+b`.
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    /// Disjoint union; later operands are shifted past earlier ones.
    Union(Vec<Graph>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    family: Option<FamilyTag>,
}

/// An induced subgraph together with the map back to the parent's ids.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    /// `original[i]` is the parent vertex relabeled to `i`.
    pub original: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return param(format!("edge ({u},{v}) out of range for n = {n}"));
            }
            if u == v {
                return param(format!("self-loop at vertex {u}"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return param(format!("duplicate edge at vertex {v}"));
            }
        }
        Ok(Graph { adj, family: None })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            family: None,
        }
    }

    pub fn with_family(mut self, tag: FamilyTag) -> Self {
        self.family = Some(tag);
        self
    }

    pub fn build(spec: &FamilySpec) -> Result<Self> {
        match *spec {
            FamilySpec::PathPower { n, p } => {
                if n == 0 || p == 0 {
                    return param("path power needs n >= 1 and p >= 1");
                }
                let g = Self::from_rule(n, |u, v| v - u <= p);
                Ok(g.with_family(FamilyTag::PathPower { n, p }))
            }
            FamilySpec::CyclePower { n, p } => {
                if n < 3 || p == 0 {
                    return param("cycle power needs n >= 3 and p >= 1");
                }
                let g = Self::from_rule(n, |u, v| (v - u).min(n - (v - u)) <= p);
                Ok(g.with_family(FamilyTag::CyclePower { n, p }))
            }
            FamilySpec::Complete { n } => {
                if n == 0 {
                    return param("complete graph needs n >= 1");
                }
                Ok(Self::from_rule(n, |_, _| true).with_family(FamilyTag::Complete { n }))
            }
            FamilySpec::CompleteMinusEdge { n } => {
                if n < 2 {
                    return param("K_n - e needs n >= 2");
                }
                let g = Self::from_rule(n, |u, v| !(u == 0 && v == n - 1));
                Ok(g.with_family(FamilyTag::CompleteMinusEdge { n }))
            }
            FamilySpec::CompleteBipartite { a, b } => {
                if a == 0 || b == 0 {
                    return param("complete bipartite graph needs a, b >= 1");
                }
                let g = Self::from_rule(a + b, |u, v| u < a && v >= a);
                Ok(g.with_family(FamilyTag::CompleteBipartite { a, b }))
            }
            FamilySpec::Union(ref parts) => {
                if parts.is_empty() {
                    return param("union needs at least one operand");
                }
                Ok(Self::disjoint_union(parts))
            }
        }
    }

    /// Graph on `0..n` with `uv` (u < v) an edge iff `rule(u, v)`.
    fn from_rule(n: usize, rule: impl Fn(usize, usize) -> bool) -> Self {
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in u + 1..n {
                if rule(u, v) {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, family: None }
    }

    pub fn disjoint_union(parts: &[Graph]) -> Self {
        let mut adj = Vec::new();
        let mut boundaries = Vec::with_capacity(parts.len());
        for g in parts {
            let offset = adj.len();
            boundaries.push(offset);
            adj.extend(
                g.adj
                    .iter()
                    .map(|list| list.iter().map(|&u| u + offset).collect::<Vec<_>>()),
            );
        }
        Graph {
            adj,
            family: Some(FamilyTag::Union { boundaries }),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn family(&self) -> Option<&FamilyTag> {
        self.family.as_ref()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Subgraph induced by `s`, relabeled so that `s[i]` becomes `i`.
    pub fn induced_subgraph(&self, s: &[Vertex]) -> Result<Induced> {
        let n = self.n();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in s.iter().enumerate() {
            if v >= n {
                return param(format!("vertex {v} out of range for n = {n}"));
            }
            if index[v] != usize::MAX {
                return param(format!("vertex {v} listed twice"));
            }
            index[v] = i;
        }
        let adj = s
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self.adj[v]
                    .iter()
                    .filter(|&&u| index[u] != usize::MAX)
                    .map(|&u| index[u])
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        let mut graph = Graph { adj, family: None };
        graph.family = self.induced_family(s, &graph);
        Ok(Induced {
            graph,
            original: s.to_vec(),
        })
    }

    /// A consecutive increasing run of a path or cycle power that induces a
    /// path power keeps the path-power tag.
    fn induced_family(&self, s: &[Vertex], sub: &Graph) -> Option<FamilyTag> {
        let p = match self.family {
            Some(FamilyTag::PathPower { p, .. }) | Some(FamilyTag::CyclePower { p, .. }) => p,
            _ => return Some(FamilyTag::Custom),
        };
        let consecutive = s.windows(2).all(|w| w[1] == w[0] + 1);
        if !s.is_empty() && consecutive {
            let len = s.len();
            let expected = Self::from_rule(len, |u, v| v - u <= p);
            if expected.adj == sub.adj {
                return Some(FamilyTag::PathPower { n: len, p });
            }
        }
        Some(FamilyTag::Custom)
    }

    /// `g - s`: the subgraph induced by the vertices not in `s`, in
    /// increasing order.
    pub fn remove_vertices(&self, s: &[Vertex]) -> Result<Induced> {
        let mut drop = vec![false; self.n()];
        for &v in s {
            if v >= self.n() {
                return param(format!("vertex {v} out of range"));
            }
            drop[v] = true;
        }
        let keep: Vec<Vertex> = (0..self.n()).filter(|&v| !drop[v]).collect();
        self.induced_subgraph(&keep)
    }

    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.n());
        self.edges().into_iter().all(|(u, v)| uf.union(u, v))
    }

    /// Smallest-index vertex of degree at most `bound`, and the graph without it.
    pub fn remove_low_degree_vertex(&self, bound: usize) -> Result<(Vertex, Induced)> {
        if self.n() == 0 {
            return param("graph is empty");
        }
        let v = (0..self.n())
            .find(|&v| self.degree(v) <= bound)
            .ok_or_else(|| {
                Error::Structural(format!(
                    "no vertex of degree <= {bound}; not {bound}-degenerate"
                ))
            })?;
        Ok((v, self.remove_vertices(&[v])?))
    }

    /// Degeneracy and a removal order (each vertex has minimum degree in
    /// the graph remaining when it is removed; ties go to the smaller id).
    pub fn degeneracy_order(&self) -> (usize, Vec<Vertex>) {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("vertex remains");
            degeneracy = degeneracy.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        (degeneracy, order)
    }

    pub fn is_k_degenerate(&self, k: usize) -> bool {
        self.degeneracy_order().0 <= k
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &u in &self.adj[comp[i]] {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// If the graph is complete bipartite `K_{a,b}` with both sides non-empty,
    /// returns the two sides (the side containing vertex 0 first).
    pub fn complete_bipartite_sides(&self) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        let n = self.n();
        if n < 2 || self.degree(0) == 0 {
            return None;
        }
        let mut in_y = vec![false; n];
        for &u in self.neighbors(0) {
            in_y[u] = true;
        }
        let x: Vec<Vertex> = (0..n).filter(|&v| !in_y[v]).collect();
        let y: Vec<Vertex> = (0..n).filter(|&v| in_y[v]).collect();
        let ok = x.iter().all(|&v| self.adj[v] == y) && y.iter().all(|&v| self.adj[v] == x);
        ok.then_some((x, y))
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            family: self.family.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.into_graph()
    }

    /// Graphviz rendering with vertices and edges in sorted order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk graph format: `{"n": .., "edges": [[u,v],..], "family": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyTag>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        let edges: Vec<(Vertex, Vertex)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = Graph::from_edges(self.n, &edges)?;
        g.family = self.family;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(n: usize, p: usize) -> Graph {
        Graph::build(&FamilySpec::PathPower { n, p }).unwrap()
    }

    fn cp(n: usize, p: usize) -> Graph {
        Graph::build(&FamilySpec::CyclePower { n, p }).unwrap()
    }

    #[test]
    fn family_examples() {
        let k3 = pp(3, 5);
        assert_eq!(k3.num_edges(), 3);
        assert_eq!(pp(5, 2).num_edges(), 7);
        let c62 = cp(6, 2);
        assert_eq!(c62.num_edges(), 12);
        assert!((0..6).all(|v| c62.degree(v) == 4));
        let kme = Graph::build(&FamilySpec::CompleteMinusEdge { n: 5 }).unwrap();
        let mut degs: Vec<usize> = (0..5).map(|v| kme.degree(v)).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degs, vec![4, 4, 4, 3, 3]);
        assert!(!kme.has_edge(0, 4));
    }

    #[test]
    fn bad_parameters() {
        assert!(Graph::build(&FamilySpec::PathPower { n: 0, p: 1 }).is_err());
        assert!(Graph::build(&FamilySpec::CyclePower { n: 2, p: 1 }).is_err());
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn induced_examples() {
        let k4 = Graph::build(&FamilySpec::Complete { n: 4 }).unwrap();
        let sub = k4.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.graph.edges(), vec![(0, 1)]);

        let c5 = cp(5, 1);
        let p3 = c5.induced_subgraph(&[1, 2, 3]).unwrap();
        assert_eq!(p3.graph.edges(), vec![(0, 1), (1, 2)]);

        let c82 = cp(8, 2);
        let sub = c82.induced_subgraph(&[0, 1, 2, 3]).unwrap();
        assert_eq!(
            sub.graph.edges(),
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(
            sub.graph.family(),
            Some(&FamilyTag::PathPower { n: 4, p: 2 })
        );
        assert!(c82.induced_subgraph(&[0, 8]).is_err());
    }

    #[test]
    fn forest_examples() {
        assert!(Graph::empty(1).is_forest());
        assert!(!Graph::build(&FamilySpec::Complete { n: 3 })
            .unwrap()
            .is_forest());
        assert!(pp(10, 1).is_forest());
    }

    #[test]
    fn low_degree_removal() {
        let (v, rest) = pp(5, 1).remove_low_degree_vertex(1).unwrap();
        assert!(v == 0 || v == 4);
        assert_eq!(rest.graph.n(), 4);
        let k4 = Graph::build(&FamilySpec::Complete { n: 4 }).unwrap();
        assert!(matches!(
            k4.remove_low_degree_vertex(2),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(
            Graph::build(&FamilySpec::Complete { n: 5 })
                .unwrap()
                .max_degree(),
            4
        );
        assert_eq!(pp(2, 1).max_degree(), 1);
        assert_eq!(cp(9, 3).max_degree(), 6);
    }

    #[test]
    fn power_family_invariants() {
        for n in 1..=12 {
            for p in 1..=4 {
                let g = pp(n, p);
                assert_eq!(g.is_forest(), p == 1 || n < 3, "P_{n}^{p}");
                let degsum: usize = (0..n).map(|v| g.degree(v)).sum();
                assert_eq!(degsum, 2 * g.num_edges());
                if n > 2 * p {
                    assert_eq!(g.max_degree(), 2 * p);
                }
                for u in 0..n {
                    for v in 0..n {
                        assert_eq!(g.has_edge(u, v), u != v && u.abs_diff(v) <= p);
                    }
                }
                if n >= 3 {
                    let c = cp(n, p);
                    if n > 2 * p {
                        assert!((0..n).all(|v| c.degree(v) == 2 * p));
                    }
                    for u in 0..n {
                        for v in 0..n {
                            let d = u.abs_diff(v);
                            assert_eq!(c.has_edge(u, v), u != v && d.min(n - d) <= p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn identity_induced_is_same_graph() {
        let g = cp(9, 2);
        let all: Vec<Vertex> = (0..9).collect();
        assert_eq!(g.induced_subgraph(&all).unwrap().graph.edges(), g.edges());
    }

    #[test]
    fn union_offsets() {
        let c3 = cp(3, 1);
        let u = Graph::build(&FamilySpec::Union(vec![c3.clone(), c3])).unwrap();
        assert_eq!(u.n(), 6);
        assert_eq!(
            u.edges(),
            vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
        );
        assert_eq!(
            u.family(),
            Some(&FamilyTag::Union {
                boundaries: vec![0, 3]
            })
        );
        assert_eq!(u.components().len(), 2);
    }

    #[test]
    fn json_and_dot_are_canonical() {
        let g = pp(3, 1);
        assert_eq!(
            g.to_json(),
            r#"{"n":3,"edges":[[0,1],[1,2]],"family":{"kind":"path_power","n":3,"p":1}}"#
        );
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        assert_eq!(
            g.to_dot(),
            "graph G {\n  0;\n  1;\n  2;\n  0 -- 1;\n  1 -- 2;\n}\n"
        );
    }

    #[test]
    fn bipartite_detection() {
        let k = Graph::build(&FamilySpec::CompleteBipartite { a: 2, b: 3 }).unwrap();
        let (x, y) = k.complete_bipartite_sides().unwrap();
        assert_eq!((x, y), (vec![0, 1], vec![2, 3, 4]));
        assert!(cp(5, 1).complete_bipartite_sides().is_none());
    }

    #[test]
    fn degeneracy() {
        assert_eq!(
            Graph::build(&FamilySpec::Complete { n: 4 })
                .unwrap()
                .degeneracy_order()
                .0,
            3
        );
        assert!(pp(10, 2).is_k_degenerate(2));
        assert!(!pp(10, 3).is_k_degenerate(2));
    }
}
