//! Exact decision procedures.
//!
//! * [`exact_equitable_arborable`]: does a given list assignment admit an
//!   arborable coloring with every class of size at most `cap`?
//! * [`decide_equitable_vertex_arborable`]: is there an arborable
//!   `k`-coloring whose class sizes differ by at most one?
//! * [`decide_equitably_k_list_arborable`]: does *every* `k`-assignment over a
//!   bounded color universe admit an equitable arborable coloring?
//!
//! All three are complete backtracking searches. A `Feasible` or `Infeasible`
//! verdict is only produced by a search that ran to completion; running out
//! of budget yields `Unknown`.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite;
use crate::coloring::{
    equity_cap, verify_arborable_L_coloring, verify_equitable_vertex_partition, ColorId,
    ListAssignment, PartialColoring,
};
use crate::dsu::RollbackUnionFind;
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(limit: u64) -> Self {
        SearchBudget {
            node_limit: Some(limit),
            time_limit: None,
        }
    }

    pub fn seconds(secs: f64) -> Self {
        SearchBudget {
            node_limit: None,
            time_limit: Some(Duration::from_secs_f64(secs)),
        }
    }

    pub(crate) fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|t| Instant::now() + t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<PartialColoring>,
    /// For the all-assignments decision: a `k`-assignment with no equitable
    /// arborable coloring.
    pub refuted_assignment: Option<ListAssignment>,
    /// Search-tree nodes expanded.
    pub nodes: u64,
    /// False when the decision only covered part of the space (a color
    /// universe below `k * n`).
    pub complete: bool,
}

impl Verdict {
    fn new(status: Status, witness: Option<PartialColoring>, nodes: u64) -> Self {
        Verdict {
            status,
            witness,
            refuted_assignment: None,
            nodes,
            complete: true,
        }
    }

    pub fn feasible(witness: PartialColoring, nodes: u64) -> Self {
        Self::new(Status::Feasible, Some(witness), nodes)
    }

    pub fn infeasible(nodes: u64) -> Self {
        Self::new(Status::Infeasible, None, nodes)
    }

    pub fn unknown(nodes: u64) -> Self {
        Self::new(Status::Unknown, None, nodes)
    }

    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

/// Backtracking over list colorings with per-class forest maintenance.
///
/// Classes are tracked in a single undoable union-find over the vertices:
/// giving `v` color `c` unions `v` with its `c`-colored neighbors, and the
/// assignment closes a cycle exactly when two of those neighbors already
/// share a root.
struct ListSearch<'a> {
    g: &'a Graph,
    /// Dense color index -> color id.
    palette: Vec<ColorId>,
    /// Per vertex, dense color indices of its list.
    domain: Vec<Vec<usize>>,
    cap: usize,
    /// Lower bound on every class size (equitable vertex partitions only).
    floor: usize,
    /// All unused colors are interchangeable (identical lists everywhere).
    symmetric_colors: bool,
    rank: Vec<usize>,
    color: Vec<Option<usize>>,
    size: Vec<usize>,
    uf: RollbackUnionFind,
    uncolored: usize,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl<'a> ListSearch<'a> {
    fn new(g: &'a Graph, lists: &ListAssignment, cap: usize, budget: &SearchBudget) -> Self {
        let palette = lists.palette();
        let domain = (0..g.n())
            .map(|v| {
                lists
                    .list(v)
                    .iter()
                    .map(|c| palette.binary_search(c).expect("color in palette"))
                    .collect()
            })
            .collect();
        let mut order: Vec<Vertex> = (0..g.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut rank = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let colors = palette.len();
        ListSearch {
            g,
            palette,
            domain,
            cap,
            floor: 0,
            symmetric_colors: false,
            rank,
            color: vec![None; g.n()],
            size: vec![0; colors],
            uf: RollbackUnionFind::new(g.n()),
            uncolored: g.n(),
            nodes: 0,
            node_limit: budget.node_limit,
            deadline: budget.deadline(),
        }
    }

    fn viable(&self, v: Vertex, c: usize) -> bool {
        if self.size[c] >= self.cap {
            return false;
        }
        let mut roots: [usize; 8] = [usize::MAX; 8];
        let mut spill = Vec::new();
        let mut count = 0;
        for &u in self.g.neighbors(v) {
            if self.color[u] != Some(c) {
                continue;
            }
            let r = self.uf.find(u);
            let seen = roots[..count.min(8)].contains(&r) || spill.contains(&r);
            if seen {
                return false;
            }
            if count < 8 {
                roots[count] = r;
            } else {
                spill.push(r);
            }
            count += 1;
        }
        true
    }

    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return true;
            }
        }
        if self.nodes % 1024 == 1 {
            if let Some(deadline) = self.deadline {
                return Instant::now() >= deadline;
            }
        }
        false
    }

    fn bounds_ok(&self) -> bool {
        let room: usize = self.size.iter().map(|&s| self.cap.saturating_sub(s)).sum();
        if room < self.uncolored {
            return false;
        }
        if self.floor > 0 {
            let deficit: usize = self
                .size
                .iter()
                .map(|&s| self.floor.saturating_sub(s))
                .sum();
            if deficit > self.uncolored {
                return false;
            }
        }
        true
    }

    fn search(&mut self) -> Outcome {
        if self.out_of_budget() {
            return Outcome::OutOfBudget;
        }
        if self.uncolored == 0 {
            return Outcome::Found;
        }
        if !self.bounds_ok() {
            return Outcome::Exhausted;
        }
        // Most constrained vertex first; ties by static rank.
        let mut best: Option<(usize, usize, Vertex)> = None;
        let mut best_vals = Vec::new();
        for v in 0..self.g.n() {
            if self.color[v].is_some() {
                continue;
            }
            let vals: Vec<usize> = self.domain[v]
                .iter()
                .copied()
                .filter(|&c| self.viable(v, c))
                .collect();
            let key = (vals.len(), self.rank[v], v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
                best_vals = vals;
                if best_vals.is_empty() {
                    return Outcome::Exhausted;
                }
            }
        }
        let (_, _, v) = best.expect("an uncolored vertex exists");
        best_vals.sort_by_key(|&c| (self.size[c], c));
        let mut tried_fresh = false;
        for c in best_vals {
            if self.symmetric_colors && self.size[c] == 0 {
                if tried_fresh {
                    continue;
                }
                tried_fresh = true;
            }
            let checkpoint = self.uf.checkpoint();
            for &u in self.g.neighbors(v) {
                if self.color[u] == Some(c) {
                    self.uf.union(u, v);
                }
            }
            self.color[v] = Some(c);
            self.size[c] += 1;
            self.uncolored -= 1;
            match self.search() {
                Outcome::Exhausted => {}
                other => return other,
            }
            self.uncolored += 1;
            self.size[c] -= 1;
            self.color[v] = None;
            self.uf.rollback(checkpoint);
        }
        Outcome::Exhausted
    }

    fn witness(&self) -> PartialColoring {
        PartialColoring::from_options(
            self.color
                .iter()
                .map(|c| c.map(|c| self.palette[c]))
                .collect(),
        )
    }

    fn run(mut self) -> Verdict {
        match self.search() {
            Outcome::Found => Verdict::feasible(self.witness(), self.nodes),
            Outcome::Exhausted => Verdict::infeasible(self.nodes),
            Outcome::OutOfBudget => Verdict::unknown(self.nodes),
        }
    }
}

/// Decides whether `g` has an arborable `lists`-coloring with no class
/// larger than `cap`.
pub fn exact_equitable_arborable(
    g: &Graph,
    lists: &ListAssignment,
    cap: usize,
    budget: SearchBudget,
) -> Verdict {
    assert_eq!(lists.n(), g.n(), "assignment must cover the graph");
    let verdict = ListSearch::new(g, lists, cap, &budget).run();
    if let Some(w) = &verdict.witness {
        let report = verify_arborable_L_coloring(g, lists, w, true);
        assert!(
            report.total
                && report.list_respected
                && report.arborable
                && report.max_class_size <= cap,
            "search produced an invalid witness: {report:?}"
        );
    }
    verdict
}

/// Decides equitable vertex `k`-arborability: a `k`-coloring (colors
/// `0..k`) whose classes are forests with sizes in `{floor(n/k), ceil(n/k)}`.
///
/// Complete bipartite graphs are decided on class profiles; other graphs by
/// backtracking where at most one unused color is ever tried per node.
pub fn decide_equitable_vertex_arborable(g: &Graph, k: usize, budget: SearchBudget) -> Verdict {
    assert!(k >= 1);
    let n = g.n();
    let verdict = if let Some((x, y)) = g.complete_bipartite_sides() {
        let result = bipartite::profile_oracle(x.len(), y.len(), k, equity_cap(n, k), true);
        match result.witness {
            Some(profile) => {
                let coloring = bipartite::profile_coloring(&profile, &x, &y, n);
                Verdict::feasible(coloring, result.profiles_examined)
            }
            None => Verdict::infeasible(result.profiles_examined),
        }
    } else {
        let lists = ListAssignment::constant_k(n, k);
        let mut search = ListSearch::new(g, &lists, equity_cap(n, k), &budget);
        search.floor = n / k;
        search.symmetric_colors = true;
        search.run()
    };
    if let Some(w) = &verdict.witness {
        assert!(
            verify_equitable_vertex_partition(g, k, w),
            "invalid equitable vertex partition witness"
        );
    }
    verdict
}

/// All `k`-subsets of `0..universe` per vertex, optionally reduced modulo
/// color permutations: colors are introduced in increasing vertex order and
/// a vertex may only open the smallest unused ids.
pub fn enumerate_assignments(
    n: usize,
    k: usize,
    universe: usize,
    canonical: bool,
) -> Vec<ListAssignment> {
    let mut out = Vec::new();
    for_each_assignment(n, k, universe, canonical, &mut |lists| {
        out.push(ListAssignment::new(lists.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

/// Streams the assignments of [`enumerate_assignments`] without storing
/// them; `visit` may stop the walk early.
pub fn for_each_assignment(
    n: usize,
    k: usize,
    universe: usize,
    canonical: bool,
    visit: &mut dyn FnMut(&[Vec<ColorId>]) -> ControlFlow<()>,
) {
    struct Walk<'a> {
        n: usize,
        k: usize,
        universe: usize,
        canonical: bool,
        current: Vec<Vec<ColorId>>,
        visit: &'a mut dyn FnMut(&[Vec<ColorId>]) -> ControlFlow<()>,
    }

    impl Walk<'_> {
        fn vertex(&mut self, v: usize, opened: usize) -> ControlFlow<()> {
            if v == self.n {
                return (self.visit)(&self.current);
            }
            if !self.canonical {
                let pool: Vec<ColorId> = (0..self.universe as ColorId).collect();
                for list in subsets(&pool, self.k) {
                    self.current.push(list);
                    let flow = self.vertex(v + 1, opened);
                    self.current.pop();
                    flow?;
                }
                return ControlFlow::Continue(());
            }
            let old: Vec<ColorId> = (0..opened as ColorId).collect();
            for fresh in 0..=self.k.min(self.universe - opened) {
                if self.k - fresh > opened {
                    continue;
                }
                let new_ids = opened as ColorId..(opened + fresh) as ColorId;
                for mut list in subsets(&old, self.k - fresh) {
                    list.extend(new_ids.clone());
                    self.current.push(list);
                    let flow = self.vertex(v + 1, opened + fresh);
                    self.current.pop();
                    flow?;
                }
            }
            ControlFlow::Continue(())
        }
    }

    let mut walk = Walk {
        n,
        k,
        universe,
        canonical,
        current: Vec::with_capacity(n),
        visit,
    };
    let _ = walk.vertex(0, 0);
}

/// All `k`-subsets of `pool`, in lexicographic order.
fn subsets(pool: &[ColorId], k: usize) -> Vec<Vec<ColorId>> {
    fn rec(
        pool: &[ColorId],
        k: usize,
        start: usize,
        pick: &mut Vec<ColorId>,
        out: &mut Vec<Vec<ColorId>>,
    ) {
        if pick.len() == k {
            out.push(pick.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - pick.len() {
                break;
            }
            pick.push(pool[i]);
            rec(pool, k, i + 1, pick, out);
            pick.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Decides whether every `k`-assignment over colors `0..universe` admits an
/// arborable coloring with classes of size at most `ceil(n/k)`.
///
/// Only complete (`verdict.complete`) when `universe >= k * n`, since an
/// assignment never uses more than `k * n` colors.
pub fn decide_equitably_k_list_arborable(
    g: &Graph,
    k: usize,
    universe: usize,
    budget: SearchBudget,
) -> Verdict {
    decide_over_assignments(g, k, universe, budget, true)
}

/// Assignments checked in parallel per batch.
const BATCH: usize = 4096;

pub(crate) fn decide_over_assignments(
    g: &Graph,
    k: usize,
    universe: usize,
    budget: SearchBudget,
    canonical: bool,
) -> Verdict {
    assert!(
        k >= 1 && universe >= k,
        "universe must hold at least k colors"
    );
    let n = g.n();
    let cap = equity_cap(n.max(1), k);
    let deadline = budget.deadline();
    let mut nodes = 0u64;
    let mut unknown = false;
    let mut refuted: Option<ListAssignment> = None;
    let mut batch: Vec<ListAssignment> = Vec::with_capacity(BATCH);

    let mut run_batch = |batch: &mut Vec<ListAssignment>| -> ControlFlow<()> {
        let results: Vec<(Status, u64)> = batch
            .par_iter()
            .map(|lists| {
                let remaining = deadline.map(|d| d.saturating_duration_since(Instant::now()));
                if remaining == Some(Duration::ZERO) {
                    return (Status::Unknown, 0);
                }
                let per = SearchBudget {
                    node_limit: budget.node_limit,
                    time_limit: remaining,
                };
                let v = exact_equitable_arborable(g, lists, cap, per);
                (v.status, v.nodes)
            })
            .collect();
        nodes += results.iter().map(|r| r.1).sum::<u64>();
        if let Some(i) = results.iter().position(|r| r.0 == Status::Infeasible) {
            refuted = Some(batch.swap_remove(i));
            return ControlFlow::Break(());
        }
        batch.clear();
        if results.iter().any(|r| r.0 == Status::Unknown) {
            unknown = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    };

    let mut stopped = false;
    for_each_assignment(n, k, universe, canonical, &mut |lists| {
        batch.push(ListAssignment::new(lists.to_vec()));
        if batch.len() == BATCH && run_batch(&mut batch).is_break() {
            stopped = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if !stopped && !batch.is_empty() {
        let _ = run_batch(&mut batch);
    }

    if let Some(refuted) = refuted {
        let recheck = exact_equitable_arborable(g, &refuted, cap, SearchBudget::unlimited());
        assert_eq!(
            recheck.status,
            Status::Infeasible,
            "refutation does not replay"
        );
        return Verdict {
            status: Status::Infeasible,
            witness: None,
            refuted_assignment: Some(refuted),
            nodes,
            complete: true,
        };
    }
    Verdict {
        status: if unknown {
            Status::Unknown
        } else {
            Status::Feasible
        },
        witness: None,
        refuted_assignment: None,
        nodes,
        complete: universe >= k * n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    fn build(spec: FamilySpec) -> Graph {
        Graph::build(&spec).unwrap()
    }

    /// Brute force over all colorings with colors from the lists.
    fn brute(g: &Graph, lists: &ListAssignment, cap: usize) -> bool {
        let n = g.n();
        let mut idx = vec![0usize; n];
        loop {
            let colors: Vec<ColorId> = (0..n).map(|v| lists.list(v)[idx[v]]).collect();
            let f = PartialColoring::from_total(&colors);
            let r = verify_arborable_L_coloring(g, lists, &f, true);
            if r.arborable && r.max_class_size <= cap {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                idx[i] += 1;
                if idx[i] < lists.list(i).len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn small_examples_match_brute_force() {
        let k5 = build(FamilySpec::Complete { n: 5 });
        let kme = build(FamilySpec::CompleteMinusEdge { n: 5 });
        let c5 = build(FamilySpec::CyclePower { n: 5, p: 1 });
        let lists = ListAssignment::constant(5, &[1, 2]);
        for (g, expect) in [(&k5, false), (&kme, true), (&c5, true)] {
            assert_eq!(brute(g, &lists, 3), expect);
            let v = exact_equitable_arborable(g, &lists, 3, SearchBudget::unlimited());
            assert_eq!(v.is_feasible(), expect);
        }
    }

    #[test]
    fn random_instances_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.55) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let k = rng.gen_range(1..=3);
            let lists = crate::random::random_assignment(n, k, k + 2, &mut rng);
            let cap = rng.gen_range(1..=n);
            let v = exact_equitable_arborable(&g, &lists, cap, SearchBudget::unlimited());
            assert_eq!(
                v.is_feasible(),
                brute(&g, &lists, cap),
                "{edges:?} {lists:?} cap {cap}"
            );
        }
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let g = build(FamilySpec::CompleteBipartite { a: 6, b: 6 });
        let lists = ListAssignment::constant_k(12, 3);
        let v = exact_equitable_arborable(&g, &lists, 4, SearchBudget::nodes(5));
        assert_eq!(v.status, Status::Unknown);
        assert!(v.witness.is_none());
    }

    #[test]
    fn vertex_arborable_examples() {
        let k415 = build(FamilySpec::CompleteBipartite { a: 4, b: 15 });
        assert_eq!(
            decide_equitable_vertex_arborable(&k415, 3, SearchBudget::unlimited()).status,
            Status::Infeasible
        );
        let k99 = build(FamilySpec::CompleteBipartite { a: 9, b: 9 });
        assert!(
            decide_equitable_vertex_arborable(&k99, 2, SearchBudget::unlimited()).is_feasible()
        );
        let k2 = build(FamilySpec::Complete { n: 2 });
        assert!(decide_equitable_vertex_arborable(&k2, 2, SearchBudget::unlimited()).is_feasible());
        // Generic path (not complete bipartite): K_5 splits into 3 + 2 only with a triangle.
        let k5 = build(FamilySpec::Complete { n: 5 });
        assert_eq!(
            decide_equitable_vertex_arborable(&k5, 2, SearchBudget::unlimited()).status,
            Status::Infeasible
        );
        let c6 = build(FamilySpec::CyclePower { n: 6, p: 2 });
        assert!(decide_equitable_vertex_arborable(&c6, 2, SearchBudget::unlimited()).is_feasible());
    }

    #[test]
    fn all_assignment_examples() {
        let k3 = build(FamilySpec::Complete { n: 3 });
        let v = decide_equitably_k_list_arborable(&k3, 2, 6, SearchBudget::unlimited());
        assert_eq!(v.status, Status::Feasible);
        assert!(v.complete);

        let k5 = build(FamilySpec::Complete { n: 5 });
        let v = decide_equitably_k_list_arborable(&k5, 2, 4, SearchBudget::unlimited());
        assert_eq!(v.status, Status::Infeasible);
        let refuted = v.refuted_assignment.unwrap();
        assert!(refuted.is_k_assignment(2));

        let k1 = Graph::empty(1);
        assert!(
            decide_equitably_k_list_arborable(&k1, 3, 3, SearchBudget::unlimited()).is_feasible()
        );
    }

    #[test]
    fn canonical_enumeration_agrees_with_full() {
        let graphs = [
            build(FamilySpec::Complete { n: 4 }),
            build(FamilySpec::CyclePower { n: 4, p: 1 }),
            build(FamilySpec::CompleteMinusEdge { n: 4 }),
            build(FamilySpec::Complete { n: 3 }),
        ];
        for g in &graphs {
            let a = decide_over_assignments(g, 2, 4, SearchBudget::unlimited(), true);
            let b = decide_over_assignments(g, 2, 4, SearchBudget::unlimited(), false);
            assert_eq!(a.status, b.status);
        }
        assert!(
            enumerate_assignments(4, 2, 4, true).len()
                < enumerate_assignments(4, 2, 4, false).len()
        );
    }

    #[test]
    fn canonical_enumeration_covers_every_orbit() {
        // Every full assignment must be a color relabeling of a canonical one.
        let canon: std::collections::HashSet<ListAssignment> =
            enumerate_assignments(3, 2, 4, true).into_iter().collect();
        for lists in enumerate_assignments(3, 2, 4, false) {
            let mut map = std::collections::HashMap::new();
            let mut next = 0;
            let relabeled: Vec<Vec<ColorId>> = lists
                .lists()
                .iter()
                .map(|l| {
                    // fresh colors in a list are numbered in ascending original order
                    l.iter()
                        .map(|c| {
                            *map.entry(*c).or_insert_with(|| {
                                next += 1;
                                next - 1
                            })
                        })
                        .collect()
                })
                .collect();
            assert!(canon.contains(&ListAssignment::new(relabeled)), "{lists:?}");
        }
    }

    #[test]
    fn streaming_enumeration_stops_early() {
        let mut seen = 0;
        for_each_assignment(30, 2, 60, true, &mut |_| {
            seen += 1;
            if seen == 5 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        assert_eq!(seen, 5);
    }

    #[test]
    fn all_assignments_decision_respects_budget() {
        let g = build(FamilySpec::CyclePower { n: 10, p: 2 });
        let v = decide_equitably_k_list_arborable(&g, 2, 20, SearchBudget::seconds(0.05));
        assert_eq!(v.status, Status::Unknown);
    }
}
