//! List assignments, partial colorings and the verification predicates for
//! arborable and equitable list colorings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dsu::UnionFind;
use crate::error::{param, Result};
use crate::graph::{Graph, Vertex};

/// Colors are plain non-negative integers; only equality matters.
pub type ColorId = u32;

/// `ceil(n / k)`, the largest class size an equitable coloring may use.
pub fn equity_cap(n: usize, k: usize) -> usize {
    assert!(k >= 1, "list size must be positive");
    n.div_ceil(k)
}

/// Per-vertex lists of available colors. Lists are kept sorted and free of
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ListAssignment {
    lists: Vec<Vec<ColorId>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<ColorId>>) -> Self {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    /// Every vertex gets the same list.
    pub fn constant(n: usize, colors: &[ColorId]) -> Self {
        Self::new(vec![colors.to_vec(); n])
    }

    /// The list `{0, .., k-1}` on every vertex.
    pub fn constant_k(n: usize, k: usize) -> Self {
        let colors: Vec<ColorId> = (0..k as ColorId).collect();
        Self::constant(n, &colors)
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: Vertex) -> &[ColorId] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<ColorId>] {
        &self.lists
    }

    pub fn contains(&self, v: Vertex, c: ColorId) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    /// The common list size, if all lists have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.lists.first().map_or(0, Vec::len);
        self.lists.iter().all(|l| l.len() == first).then_some(first)
    }

    pub fn is_k_assignment(&self, k: usize) -> bool {
        self.lists.iter().all(|l| l.len() == k)
    }

    /// Errors unless this is a `k`-assignment for a graph on `n` vertices.
    pub fn require_k_assignment(&self, n: usize, k: usize) -> Result<()> {
        if self.n() != n {
            return param(format!(
                "assignment covers {} vertices, graph has {n}",
                self.n()
            ));
        }
        if let Some(v) = (0..n).find(|&v| self.lists[v].len() != k) {
            return param(format!(
                "not a {k}-assignment: vertex {v} has {} colors",
                self.lists[v].len()
            ));
        }
        Ok(())
    }

    /// Union of all lists, ascending.
    pub fn palette(&self) -> Vec<ColorId> {
        let set: BTreeSet<ColorId> = self.lists.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Lists of `keep`, relabeled so that `keep[i]` becomes vertex `i`
    /// (matching [`Graph::induced_subgraph`]).
    pub fn restrict(&self, keep: &[Vertex]) -> ListAssignment {
        ListAssignment {
            lists: keep.iter().map(|&v| self.lists[v].clone()).collect(),
        }
    }

    pub fn set_list(&mut self, v: Vertex, mut list: Vec<ColorId>) {
        list.sort_unstable();
        list.dedup();
        self.lists[v] = list;
    }

    pub fn to_file(&self) -> ListFile {
        ListFile {
            lists: self.lists.iter().cloned().enumerate().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("lists serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ListFile = serde_json::from_str(text)?;
        file.into_assignment()
    }
}

/// On-disk list assignment: `{"lists": {"0": [1,2,3], ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ListFile {
    pub lists: BTreeMap<usize, Vec<ColorId>>,
}

impl ListFile {
    pub fn into_assignment(self) -> Result<ListAssignment> {
        let n = self.lists.len();
        if let Some(&v) = self.lists.keys().find(|&&v| v >= n) {
            return param(format!("list keys must be 0..{n}; found {v}"));
        }
        Ok(ListAssignment::new(self.lists.into_values().collect()))
    }
}

/// A partial map from vertices to colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    colors: Vec<Option<ColorId>>,
}

impl PartialColoring {
    pub fn empty(n: usize) -> Self {
        PartialColoring {
            colors: vec![None; n],
        }
    }

    pub fn from_total(colors: &[ColorId]) -> Self {
        PartialColoring {
            colors: colors.iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn from_options(colors: Vec<Option<ColorId>>) -> Self {
        PartialColoring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: Vertex) -> Option<ColorId> {
        self.colors[v]
    }

    pub fn set(&mut self, v: Vertex, c: ColorId) {
        self.colors[v] = Some(c);
    }

    pub fn clear(&mut self, v: Vertex) {
        self.colors[v] = None;
    }

    pub fn as_slice(&self) -> &[Option<ColorId>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn domain(&self) -> Vec<Vertex> {
        (0..self.n())
            .filter(|&v| self.colors[v].is_some())
            .collect()
    }

    /// Color classes `f^{-1}(c)`, each sorted.
    pub fn classes(&self) -> BTreeMap<ColorId, Vec<Vertex>> {
        let mut out: BTreeMap<ColorId, Vec<Vertex>> = BTreeMap::new();
        for (v, c) in self.colors.iter().enumerate() {
            if let Some(c) = c {
                out.entry(*c).or_default().push(v);
            }
        }
        out
    }

    pub fn class_size(&self, c: ColorId) -> usize {
        self.colors.iter().filter(|&&x| x == Some(c)).count()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes().values().map(Vec::len).max().unwrap_or(0)
    }

    /// Copies the colors of `sub` (indexed by subgraph ids) onto the parent
    /// vertices `original[i]`.
    pub fn lift_from(&mut self, sub: &PartialColoring, original: &[Vertex]) {
        for (i, &v) in original.iter().enumerate() {
            if let Some(c) = sub.get(i) {
                self.colors[v] = Some(c);
            }
        }
    }

    pub fn to_file(&self) -> ColoringFile {
        ColoringFile {
            colors: self
                .colors
                .iter()
                .enumerate()
                .filter_map(|(v, c)| c.map(|c| (v, c)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("coloring serializes")
    }
}

/// On-disk coloring: `{"colors": {"0": 2, ...}}`. Missing keys are uncolored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColoringFile {
    pub colors: BTreeMap<usize, ColorId>,
}

impl ColoringFile {
    pub fn into_coloring(self, n: usize) -> Result<PartialColoring> {
        let mut f = PartialColoring::empty(n);
        for (v, c) in self.colors {
            if v >= n {
                return param(format!("colored vertex {v} out of range for n = {n}"));
            }
            f.set(v, c);
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Every vertex is colored (only checked when totality was requested).
    pub total: bool,
    pub list_respected: bool,
    /// First vertex whose color is not in its list.
    pub list_violation: Option<Vertex>,
    pub arborable: bool,
    pub cap: usize,
    pub max_class_size: usize,
    pub equitable: bool,
    /// A class that contains a cycle.
    pub offending_class: Option<ColorId>,
    /// A cycle inside `offending_class`, in cyclic order.
    pub offending_cycle: Option<Vec<Vertex>>,
    /// A class larger than `cap`.
    pub over_cap_class: Option<ColorId>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.total && self.list_respected && self.arborable && self.equitable
    }
}

/// A cycle of `g[class]` if there is one.
pub fn class_cycle(g: &Graph, class: &[Vertex]) -> Option<Vec<Vertex>> {
    let mut member = vec![false; g.n()];
    for &v in class {
        member[v] = true;
    }
    let mut uf = UnionFind::new(g.n());
    let mut forest: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for &u in class {
        for &v in g.neighbors(u) {
            if v <= u || !member[v] {
                continue;
            }
            if !uf.union(u, v) {
                let mut path = forest_path(&forest, v, u);
                path.reverse();
                return Some(path);
            }
            forest[u].push(v);
            forest[v].push(u);
        }
    }
    None
}

/// Path from `from` to `to` inside an adjacency-list forest.
fn forest_path(forest: &[Vec<Vertex>], from: Vertex, to: Vertex) -> Vec<Vertex> {
    let mut prev = vec![usize::MAX; forest.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in &forest[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path
}

fn base_report(g: &Graph, f: &PartialColoring, cap: usize) -> VerificationReport {
    let classes = f.classes();
    let mut report = VerificationReport {
        total: true,
        list_respected: true,
        list_violation: None,
        arborable: true,
        cap,
        max_class_size: 0,
        equitable: true,
        offending_class: None,
        offending_cycle: None,
        over_cap_class: None,
    };
    for (&c, class) in &classes {
        if class.len() > report.max_class_size {
            report.max_class_size = class.len();
        }
        if class.len() > cap && report.over_cap_class.is_none() {
            report.over_cap_class = Some(c);
        }
        if report.arborable {
            if let Some(cycle) = class_cycle(g, class) {
                report.arborable = false;
                report.offending_class = Some(c);
                report.offending_cycle = Some(cycle);
            }
        }
    }
    report.equitable = report.max_class_size <= cap;
    report
}

/// Checks that `f` respects `lists` and that every color class induces a
/// forest. The cap is `ceil(n/k)` with `k` the largest list size.
#[allow(non_snake_case)]
pub fn verify_arborable_L_coloring(
    g: &Graph,
    lists: &ListAssignment,
    f: &PartialColoring,
    require_total: bool,
) -> VerificationReport {
    let k = lists.lists().iter().map(Vec::len).max().unwrap_or(1).max(1);
    let mut report = base_report(g, f, equity_cap(g.n().max(1), k));
    report.list_violation = (0..f.n()).find(|&v| match f.get(v) {
        Some(c) => v >= lists.n() || !lists.contains(v, c),
        None => false,
    });
    report.list_respected = report.list_violation.is_none();
    report.total = !require_total || (f.n() == g.n() && f.is_total());
    report
}

/// Checks the equity cap `ceil(n/k)` (and arborability) of a total coloring.
pub fn verify_equitable(g: &Graph, k: usize, f: &PartialColoring) -> VerificationReport {
    let mut report = base_report(g, f, equity_cap(g.n().max(1), k));
    report.total = f.n() == g.n() && f.is_total();
    report
}

/// Full check of an equitable, arborable `L`-coloring with list size `k`.
pub fn verify_certificate(
    g: &Graph,
    lists: &ListAssignment,
    k: usize,
    f: &PartialColoring,
) -> VerificationReport {
    let mut report = verify_arborable_L_coloring(g, lists, f, true);
    report.cap = equity_cap(g.n().max(1), k);
    report.equitable = report.max_class_size <= report.cap;
    report.over_cap_class = f
        .classes()
        .into_iter()
        .find(|(_, class)| class.len() > report.cap)
        .map(|(c, _)| c);
    report
}

/// True iff `f` is a total coloring with exactly `k` classes (empty ones
/// included), colors drawn from `0..k`, sizes forming the equitable multiset
/// and each class a forest.
pub fn verify_equitable_vertex_partition(g: &Graph, k: usize, f: &PartialColoring) -> bool {
    let n = g.n();
    if k == 0 || f.n() != n || !f.is_total() {
        return false;
    }
    let mut sizes = vec![0usize; k];
    for v in 0..n {
        let c = f.get(v).expect("total") as usize;
        if c >= k {
            return false;
        }
        sizes[c] += 1;
    }
    let (lo, hi) = (n / k, n.div_ceil(k));
    let big = sizes.iter().filter(|&&s| s == hi).count();
    let sizes_ok = sizes.iter().all(|&s| s == lo || s == hi) && (lo == hi || big == n % k);
    sizes_ok
        && f.classes()
            .values()
            .all(|class| class_cycle(g, class).is_none())
}

/// Self-contained result file written by `solve` and read by `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lists: Option<ListFile>,
    pub colors: BTreeMap<usize, ColorId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
}

impl Certificate {
    pub const SCHEMA: u32 = 1;

    pub fn new(
        g: &Graph,
        lists: &ListAssignment,
        k: usize,
        f: &PartialColoring,
        theorem: Option<String>,
    ) -> Self {
        Certificate {
            schema: Self::SCHEMA,
            k,
            theorem,
            lists: Some(lists.to_file()),
            colors: f.to_file().colors,
            report: Some(verify_certificate(g, lists, k, f)),
        }
    }

    pub fn coloring(&self, n: usize) -> Result<PartialColoring> {
        ColoringFile {
            colors: self.colors.clone(),
        }
        .into_coloring(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    fn k(n: usize) -> Graph {
        Graph::build(&FamilySpec::Complete { n }).unwrap()
    }

    fn kab(a: usize, b: usize) -> Graph {
        Graph::build(&FamilySpec::CompleteBipartite { a, b }).unwrap()
    }

    #[test]
    fn equity_cap_examples() {
        assert_eq!(equity_cap(19, 3), 7);
        assert_eq!(equity_cap(28, 3), 10);
        assert_eq!(equity_cap(6, 6), 1);
    }

    #[test]
    fn arborable_examples() {
        let g = k(3);
        let lists = ListAssignment::constant(3, &[1, 2]);
        let r =
            verify_arborable_L_coloring(&g, &lists, &PartialColoring::from_total(&[1, 1, 2]), true);
        assert!(r.arborable && r.list_respected && r.total);
        assert!(r.offending_cycle.is_none());

        let r =
            verify_arborable_L_coloring(&g, &lists, &PartialColoring::from_total(&[1, 1, 1]), true);
        assert!(!r.arborable);
        assert_eq!(r.offending_class, Some(1));
        let mut cyc = r.offending_cycle.unwrap();
        cyc.sort_unstable();
        assert_eq!(cyc, vec![0, 1, 2]);

        let g = kab(2, 2);
        let lists = ListAssignment::constant(4, &[1]);
        let r = verify_arborable_L_coloring(
            &g,
            &lists,
            &PartialColoring::from_total(&[1, 1, 1, 1]),
            true,
        );
        assert!(!r.arborable);
        assert_eq!(r.offending_cycle.as_ref().map(Vec::len), Some(4));
    }

    #[test]
    fn cycle_witness_is_a_cycle() {
        let g = Graph::build(&FamilySpec::CyclePower { n: 9, p: 2 }).unwrap();
        let all: Vec<Vertex> = (0..9).collect();
        let cyc = class_cycle(&g, &all).unwrap();
        assert!(cyc.len() >= 3);
        for i in 0..cyc.len() {
            assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }

    #[test]
    fn list_violation_and_totality() {
        let g = k(3);
        let lists = ListAssignment::constant(3, &[1, 2]);
        let mut f = PartialColoring::from_total(&[1, 3, 2]);
        let r = verify_arborable_L_coloring(&g, &lists, &f, true);
        assert!(!r.list_respected);
        assert_eq!(r.list_violation, Some(1));
        f.clear(1);
        let r = verify_arborable_L_coloring(&g, &lists, &f, true);
        assert!(r.list_respected && !r.total);
        assert!(verify_arborable_L_coloring(&g, &lists, &f, false).total);
    }

    #[test]
    fn equitable_examples() {
        let g = Graph::empty(4);
        assert!(verify_equitable(&g, 2, &PartialColoring::from_total(&[0, 0, 1, 1])).equitable);
        let g = Graph::empty(5);
        assert!(verify_equitable(&g, 2, &PartialColoring::from_total(&[0, 0, 0, 1, 1])).equitable);
        let g = Graph::empty(28);
        let mut colors = vec![0; 8];
        colors.extend(std::iter::repeat_n(1, 20));
        let r = verify_equitable(&g, 4, &PartialColoring::from_total(&colors));
        assert_eq!(r.cap, 7);
        assert!(!r.equitable);
        assert_eq!(r.over_cap_class, Some(0));
    }

    #[test]
    fn vertex_partition_examples() {
        let g = kab(9, 9);
        let colors: Vec<ColorId> = (0..18).map(|v| u32::from(v >= 9)).collect();
        assert!(verify_equitable_vertex_partition(
            &g,
            2,
            &PartialColoring::from_total(&colors)
        ));

        let g = Graph::empty(19);
        let mut colors = vec![0; 7];
        colors.extend([1; 7]);
        colors.extend([2; 5]);
        assert!(!verify_equitable_vertex_partition(
            &g,
            3,
            &PartialColoring::from_total(&colors)
        ));

        let g = Graph::empty(6);
        assert!(verify_equitable_vertex_partition(
            &g,
            3,
            &PartialColoring::from_total(&[0, 0, 1, 1, 2, 2])
        ));
        assert!(!verify_equitable_vertex_partition(
            &g,
            3,
            &PartialColoring::from_total(&[0, 0, 1, 1, 3, 3])
        ));
    }

    #[test]
    fn restrict_examples() {
        let lists = ListAssignment::new(vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        assert_eq!(lists.restrict(&[0, 1, 2]), lists);
        assert_eq!(lists.restrict(&[]).n(), 0);
        assert_eq!(lists.restrict(&[2]).list(0), &[5, 6]);
    }

    #[test]
    fn json_shapes() {
        let lists = ListAssignment::new(vec![vec![2, 1], vec![3]]);
        assert_eq!(lists.to_json(), r#"{"lists":{"0":[1,2],"1":[3]}}"#);
        assert_eq!(ListAssignment::from_json(&lists.to_json()).unwrap(), lists);
        let mut f = PartialColoring::empty(3);
        f.set(2, 7);
        assert_eq!(f.to_json(), r#"{"colors":{"2":7}}"#);
    }

    /// Exhaustive check of the side-count criterion on complete bipartite
    /// graphs with `a + b <= 8` and up to three colors.
    #[test]
    fn bipartite_side_count_criterion() {
        for a in 1..=4 {
            for b in 1..=(8 - a).min(4) {
                let g = kab(a, b);
                let n = a + b;
                let lists = ListAssignment::constant_k(n, 3);
                for code in 0..3usize.pow(n as u32) {
                    let colors: Vec<ColorId> = (0..n)
                        .map(|i| ((code / 3usize.pow(i as u32)) % 3) as ColorId)
                        .collect();
                    let f = PartialColoring::from_total(&colors);
                    let criterion = (0..3).all(|c| {
                        let x = colors[..a].iter().filter(|&&x| x == c).count();
                        let y = colors[a..].iter().filter(|&&y| y == c).count();
                        x <= 1 || y <= 1
                    });
                    let r = verify_arborable_L_coloring(&g, &lists, &f, true);
                    assert_eq!(r.arborable, criterion);
                    assert!(r.list_respected);
                    assert_eq!(f.classes().values().map(Vec::len).sum::<usize>(), n);
                }
            }
        }
    }
}
