//! Constructive solvers for the families with known equitable list
//! arboricity bounds. Each removes a peel set, solves the rest recursively
//! and extends with the machinery in [`crate::extension`]. Every returned
//! coloring has been checked by the verifier.

use serde::{Deserialize, Serialize};

use crate::bipartite::{solve_bipartite_exact, BipartiteInstance};
use crate::coloring::{equity_cap, verify_certificate, ColorId, ListAssignment, PartialColoring};
use crate::error::{param, Error, Result};
use crate::extension::{
    compute_d_lists, distinct_greedy, merge_colorings, zhang_extend, ExtensionContext, PeelMode,
};
use crate::graph::{FamilySpec, FamilyTag, Graph, Vertex};
use crate::oracle::{exact_equitable_arborable, SearchBudget, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    PathPower,
    PathPowerPMinus1,
    CyclePower,
    TwoDegenerate,
    LowDegree,
    CompleteMinusEdge,
    RegularSmall,
    /// Usage-capped greedy; valid whenever `n <= 2k`.
    Greedy,
    Bipartite,
    Exact,
}

impl Strategy {
    pub const ALL: [Strategy; 10] = [
        Strategy::PathPower,
        Strategy::PathPowerPMinus1,
        Strategy::CyclePower,
        Strategy::TwoDegenerate,
        Strategy::LowDegree,
        Strategy::CompleteMinusEdge,
        Strategy::RegularSmall,
        Strategy::Greedy,
        Strategy::Bipartite,
        Strategy::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::PathPower => "path-power",
            Strategy::PathPowerPMinus1 => "path-power-pminus1",
            Strategy::CyclePower => "cycle-power",
            Strategy::TwoDegenerate => "two-degenerate",
            Strategy::LowDegree => "low-degree",
            Strategy::CompleteMinusEdge => "complete-minus-edge",
            Strategy::RegularSmall => "regular-small",
            Strategy::Greedy => "greedy",
            Strategy::Bipartite => "bipartite",
            Strategy::Exact => "exact",
        }
    }

    pub fn parse(name: &str) -> Option<Strategy> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub coloring: PartialColoring,
    pub theorem: Strategy,
    /// Peel sets in the order they were removed, in the input's vertex ids.
    pub recursion_trace: Vec<Vec<Vertex>>,
    /// Extension contexts as JSON, when requested.
    pub contexts: Vec<serde_json::Value>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub record_contexts: bool,
    /// Budget for the search-based strategies.
    pub budget: SearchBudget,
}

#[derive(Default)]
struct Trace {
    record_contexts: bool,
    peels: Vec<Vec<Vertex>>,
    contexts: Vec<serde_json::Value>,
}

impl Trace {
    fn new(opts: &SolveOptions) -> Self {
        Trace {
            record_contexts: opts.record_contexts,
            ..Default::default()
        }
    }

    fn peel(&mut self, peel: &[Vertex], labels: &[Vertex]) {
        self.peels.push(peel.iter().map(|&v| labels[v]).collect());
    }

    fn context(&mut self, ctx: &ExtensionContext, labels: &[Vertex]) {
        if self.record_contexts {
            self.contexts.push(ctx.to_json_value(labels));
        }
    }
}

fn list_size(lists: &ListAssignment, n: usize) -> Result<usize> {
    let k = lists
        .uniform_size()
        .ok_or_else(|| Error::Parameter("lists must all have the same size".into()))?;
    lists.require_k_assignment(n, k)?;
    Ok(k)
}

fn finish(
    g: &Graph,
    lists: &ListAssignment,
    k: usize,
    coloring: PartialColoring,
    theorem: Strategy,
    trace: Trace,
) -> Result<SolveOutcome> {
    let report = verify_certificate(g, lists, k, &coloring);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "{} produced a coloring that fails verification: {report:?}",
            theorem.name()
        )));
    }
    Ok(SolveOutcome {
        coloring,
        theorem,
        recursion_trace: trace.peels,
        contexts: trace.contexts,
    })
}

/// Colors `g` with an equitable arborable coloring found by exhaustive search.
fn base_exact(g: &Graph, lists: &ListAssignment, k: usize) -> Result<PartialColoring> {
    let v = exact_equitable_arborable(
        g,
        lists,
        equity_cap(g.n().max(1), k),
        SearchBudget::unlimited(),
    );
    v.witness.ok_or_else(|| {
        Error::Internal(format!(
            "base case on {} vertices has no equitable arborable coloring",
            g.n()
        ))
    })
}

/// Colors vertices in `order`, each with the list color of least current use
/// (ties to the smaller id) among those used fewer than `limit` times.
/// Returns `None` if some vertex has no such color.
fn usage_greedy(
    lists: &ListAssignment,
    order: &[Vertex],
    limit: usize,
    f: &mut PartialColoring,
) -> Option<()> {
    let mut uses = std::collections::HashMap::<ColorId, usize>::new();
    for v in 0..f.n() {
        if let Some(c) = f.get(v) {
            *uses.entry(c).or_default() += 1;
        }
    }
    for &v in order {
        let c = lists
            .list(v)
            .iter()
            .copied()
            .map(|c| (uses.get(&c).copied().unwrap_or(0), c))
            .filter(|&(u, _)| u < limit)
            .min()?
            .1;
        *uses.entry(c).or_default() += 1;
        f.set(v, c);
    }
    Some(())
}

/// When `n <= 2k` the cap is at most 2, classes of size 2 are always
/// forests, and the `i`-th vertex sees at most `floor(i/2) < k` full colors.
fn small_greedy(lists: &ListAssignment, n: usize, k: usize) -> Result<PartialColoring> {
    let limit = equity_cap(n.max(1), k).min(2);
    let mut f = PartialColoring::empty(n);
    let order: Vec<Vertex> = (0..n).collect();
    usage_greedy(lists, &order, limit, &mut f)
        .ok_or_else(|| Error::Internal("usage-capped greedy ran out of colors".into()))?;
    Ok(f)
}

fn check_family(g: &Graph, spec: FamilySpec) -> Result<()> {
    let built = Graph::build(&spec)?;
    if built.n() != g.n() || (0..g.n()).any(|v| built.neighbors(v) != g.neighbors(v)) {
        return param(format!("graph is not {spec:?} in canonical vertex order"));
    }
    Ok(())
}

/// Equitable arborable coloring of `P_n^p` from any `k`-assignment, `k >= p`.
pub fn solve_path_power(
    n: usize,
    p: usize,
    k: usize,
    lists: &ListAssignment,
) -> Result<SolveOutcome> {
    solve_path_power_with(n, p, k, lists, &SolveOptions::default())
}

pub fn solve_path_power_with(
    n: usize,
    p: usize,
    k: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    if p == 0 || k < p {
        return param(format!("need k >= p >= 1, got k = {k}, p = {p}"));
    }
    lists.require_k_assignment(n, k)?;
    let g = Graph::build(&FamilySpec::PathPower { n, p })?;
    let labels: Vec<Vertex> = (0..n).collect();
    let mut trace = Trace::new(opts);
    let f = path_power_rec(&g, k, lists, &labels, &mut trace)?;
    finish(&g, lists, k, f, Strategy::PathPower, trace)
}

/// Peels the first `k` path vertices; `x_i` then has at most
/// `max(0, p - (k - i)) <= 2i - 1` neighbors behind the peel.
fn path_power_rec(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    labels: &[Vertex],
    trace: &mut Trace,
) -> Result<PartialColoring> {
    let n = g.n();
    if n < 2 * k {
        return base_exact(g, lists, k);
    }
    let peel: Vec<Vertex> = (0..k).collect();
    trace.peel(&peel, labels);
    let f = solve_rest(
        g,
        &peel,
        lists,
        labels,
        trace,
        |sub, sub_lists, sub_labels, trace| path_power_rec(sub, k, sub_lists, sub_labels, trace),
    )?;
    let (h, ctx) = zhang_extend(g, &peel, lists, &f)?;
    trace.context(&ctx, labels);
    Ok(h)
}

/// Solves `g - peel` with `rec` and lifts the result back to `g`.
fn solve_rest(
    g: &Graph,
    peel: &[Vertex],
    lists: &ListAssignment,
    labels: &[Vertex],
    trace: &mut Trace,
    rec: impl FnOnce(&Graph, &ListAssignment, &[Vertex], &mut Trace) -> Result<PartialColoring>,
) -> Result<PartialColoring> {
    let rest = g.remove_vertices(peel)?;
    let sub_lists = lists.restrict(&rest.original);
    let sub_labels: Vec<Vertex> = rest.original.iter().map(|&v| labels[v]).collect();
    let sub = rec(&rest.graph, &sub_lists, &sub_labels, trace)?;
    let mut f = PartialColoring::empty(g.n());
    f.lift_from(&sub, &rest.original);
    Ok(f)
}

/// Equitable arborable coloring of `P_n^p` from any `(p-1)`-assignment, `p >= 3`.
pub fn solve_path_power_pminus1(
    n: usize,
    p: usize,
    lists: &ListAssignment,
) -> Result<SolveOutcome> {
    solve_path_power_pminus1_with(n, p, lists, &SolveOptions::default())
}

pub fn solve_path_power_pminus1_with(
    n: usize,
    p: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    if p < 3 {
        return param(format!("need p >= 3, got {p}"));
    }
    let k = p - 1;
    lists.require_k_assignment(n, k)?;
    let g = Graph::build(&FamilySpec::PathPower { n, p })?;
    let labels: Vec<Vertex> = (0..n).collect();
    let mut trace = Trace::new(opts);
    let f = pminus1_rec(&g, p, lists, &labels, &mut trace)?;
    finish(&g, lists, k, f, Strategy::PathPowerPMinus1, trace)
}

/// Peel positions colored from D-lists and from safe lists, in coloring
/// order, chosen by `|D(v_p)|`.
fn pminus1_groups(p: usize, d_vp: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    // Peel position i holds v_{i+1}.
    let top = 2 * p - 3;
    if d_vp == p - 1 {
        let from_d = (p - 1..=top).rev().collect();
        let from_safe = (0..p - 1).rev().collect();
        Some((from_d, from_safe))
    } else if d_vp == p - 2 {
        let mut from_d: Vec<usize> = (p..=top).rev().collect();
        from_d.push(p - 2);
        let mut from_safe = vec![p - 1];
        from_safe.extend((0..p - 2).rev());
        Some((from_d, from_safe))
    } else {
        None
    }
}

/// 1 or 2 according to the size of `D(v_p)` for the outermost peel of the
/// `(p-1)`-list construction on `P_n^p`; `None` when `n` is a base case.
pub fn pminus1_case(n: usize, p: usize, lists: &ListAssignment) -> Result<Option<u8>> {
    let opts = SolveOptions {
        record_contexts: true,
        ..Default::default()
    };
    let out = solve_path_power_pminus1_with(n, p, lists, &opts)?;
    Ok(out.contexts.last().map(|ctx| {
        let d = ctx["d"][p - 1].as_array().map_or(0, Vec::len);
        if d == p - 1 {
            1
        } else {
            2
        }
    }))
}

fn pminus1_rec(
    g: &Graph,
    p: usize,
    lists: &ListAssignment,
    labels: &[Vertex],
    trace: &mut Trace,
) -> Result<PartialColoring> {
    let k = p - 1;
    let n = g.n();
    if n <= 2 * k {
        return base_exact(g, lists, k);
    }
    let peel: Vec<Vertex> = (0..2 * k).collect();
    trace.peel(&peel, labels);
    let f = solve_rest(
        g,
        &peel,
        lists,
        labels,
        trace,
        |sub, sub_lists, sub_labels, trace| pminus1_rec(sub, p, sub_lists, sub_labels, trace),
    )?;
    let (h, ctx) = pminus1_extend(g, p, lists, &f)?;
    trace.context(&ctx, labels);
    Ok(h)
}

/// Extends `f`, an equitable arborable coloring of `P_n^p` minus its first
/// `2p - 2` vertices, to the whole graph.
pub fn pminus1_extend(
    g: &Graph,
    p: usize,
    lists: &ListAssignment,
    f: &PartialColoring,
) -> Result<(PartialColoring, ExtensionContext)> {
    let n = g.n();
    let peel: Vec<Vertex> = (0..2 * p - 2).collect();
    let ctx = compute_d_lists(g, &peel, lists, f, 2, PeelMode::Strict)?;
    let d_vp = ctx.d[p - 1].len();
    let (from_d, from_safe) = pminus1_groups(p, d_vp)
        .ok_or_else(|| Error::Internal(format!("|D(v_p)| = {d_vp} with p = {p}")))?;
    if d_vp == p - 2 && ctx.d[p - 1] != ctx.safe[p - 1] {
        return Err(Error::Internal(format!(
            "|D(v_p)| = p - 2 but v_p has dangerous colors {:?}",
            ctx.dangerous[p - 1]
        )));
    }
    let mut gcol = PartialColoring::empty(n);
    distinct_greedy(&ctx, &from_d, |i| &ctx.d[i], &mut Vec::new(), &mut gcol)?;
    distinct_greedy(
        &ctx,
        &from_safe,
        |i| &ctx.safe[i],
        &mut Vec::new(),
        &mut gcol,
    )?;
    let h = merge_colorings(g, lists, &ctx, &gcol)?;
    Ok((h, ctx))
}

/// Equitable arborable coloring of `C_n^p` from any `k`-assignment, with
/// `p >= 2`, `n >= 2p + 2` and `k >= p + 1`.
pub fn solve_cycle_power(
    n: usize,
    p: usize,
    k: usize,
    lists: &ListAssignment,
) -> Result<SolveOutcome> {
    solve_cycle_power_with(n, p, k, lists, &SolveOptions::default())
}

pub fn solve_cycle_power_with(
    n: usize,
    p: usize,
    k: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    if p < 2 || n < 2 * p + 2 || k < p + 1 {
        return param(format!(
            "need p >= 2, n >= 2p + 2, k >= p + 1; got n = {n}, p = {p}, k = {k}"
        ));
    }
    lists.require_k_assignment(n, k)?;
    let g = Graph::build(&FamilySpec::CyclePower { n, p })?;
    let mut trace = Trace::new(opts);
    if n <= 2 * k {
        let f = base_exact(&g, lists, k)?;
        return finish(&g, lists, k, f, Strategy::CyclePower, trace);
    }
    let labels: Vec<Vertex> = (0..n).collect();
    let peel: Vec<Vertex> = (0..2 * k).collect();
    trace.peel(&peel, &labels);
    // The rest is the path power on 2k..n.
    let f = solve_rest(
        &g,
        &peel,
        lists,
        &labels,
        &mut trace,
        |sub, sub_lists, sub_labels, trace| path_power_rec(sub, k, sub_lists, sub_labels, trace),
    )?;
    let ctx = compute_d_lists(&g, &peel, lists, &f, 2, PeelMode::Strict)?;
    let first: Vec<usize> = (0..k).collect();
    let second: Vec<usize> = (k..2 * k).rev().collect();
    let mut gcol = PartialColoring::empty(n);
    distinct_greedy(&ctx, &first, |i| &ctx.safe[i], &mut Vec::new(), &mut gcol)?;
    distinct_greedy(&ctx, &second, |i| &ctx.safe[i], &mut Vec::new(), &mut gcol)?;
    let h = merge_colorings(&g, lists, &ctx, &gcol)?;
    trace.context(&ctx, &labels);
    finish(&g, lists, k, h, Strategy::CyclePower, trace)
}

/// Equitable arborable coloring of a graph with maximum degree at most 2
/// from any `k`-assignment, `k >= 2`.
pub fn solve_low_degree(g: &Graph, k: usize, lists: &ListAssignment) -> Result<SolveOutcome> {
    solve_low_degree_with(g, k, lists, &SolveOptions::default())
}

pub fn solve_low_degree_with(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    if g.max_degree() > 2 {
        return Err(Error::Structural(format!(
            "maximum degree {} exceeds 2",
            g.max_degree()
        )));
    }
    if k < 2 {
        return param("need k >= 2");
    }
    lists.require_k_assignment(g.n(), k)?;
    let labels: Vec<Vertex> = (0..g.n()).collect();
    let mut trace = Trace::new(opts);
    let f = low_degree_rec(g, k, lists, &labels, &mut trace)?;
    finish(g, lists, k, f, Strategy::LowDegree, trace)
}

/// Vertices of a graph with maximum degree 2, component by component: a
/// path from its smaller endpoint, a cycle from its smallest vertex.
fn component_walk(g: &Graph) -> Vec<Vertex> {
    let mut order = Vec::with_capacity(g.n());
    for comp in g.components() {
        let start = comp
            .iter()
            .copied()
            .find(|&v| g.degree(v) <= 1)
            .unwrap_or(comp[0]);
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            order.push(cur);
            let next = g
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&u| u != prev)
                .min();
            match next {
                Some(u) if u != start => {
                    prev = cur;
                    cur = u;
                }
                _ => break,
            }
        }
    }
    order
}

/// Peels the first `k` vertices of the component walk. The first one has at
/// most one neighbor outside the peel (an endpoint, an isolated vertex, or a
/// cycle start whose successor is peeled too); the others have at most two.
fn low_degree_rec(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    labels: &[Vertex],
    trace: &mut Trace,
) -> Result<PartialColoring> {
    let n = g.n();
    if n <= 2 * k {
        return small_greedy(lists, n, k);
    }
    let peel: Vec<Vertex> = component_walk(g).into_iter().take(k).collect();
    trace.peel(&peel, labels);
    let f = solve_rest(
        g,
        &peel,
        lists,
        labels,
        trace,
        |sub, sub_lists, sub_labels, trace| low_degree_rec(sub, k, sub_lists, sub_labels, trace),
    )?;
    let (h, ctx) = zhang_extend(g, &peel, lists, &f)?;
    trace.context(&ctx, labels);
    Ok(h)
}

/// Equitable arborable coloring of a 2-degenerate graph from any
/// `k`-assignment with `k >= ceil(max degree / 2)`. Graphs of maximum degree
/// at most 2 are passed to [`solve_low_degree`].
pub fn solve_2degenerate(g: &Graph, k: usize, lists: &ListAssignment) -> Result<SolveOutcome> {
    solve_2degenerate_with(g, k, lists, &SolveOptions::default())
}

pub fn solve_2degenerate_with(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    if !g.is_k_degenerate(2) {
        return Err(Error::Structural("graph is not 2-degenerate".into()));
    }
    if g.max_degree() < 3 {
        let mut out = solve_low_degree_with(g, k, lists, opts)?;
        out.theorem = Strategy::LowDegree;
        return Ok(out);
    }
    if k < g.max_degree().div_ceil(2) {
        return param(format!("need k >= ceil({}/2)", g.max_degree()));
    }
    lists.require_k_assignment(g.n(), k)?;
    let labels: Vec<Vertex> = (0..g.n()).collect();
    let mut trace = Trace::new(opts);
    let f = two_degenerate_rec(g, k, lists, &labels, &mut trace)?;
    finish(g, lists, k, f, Strategy::TwoDegenerate, trace)
}

/// `x_1` has degree 1 or 2 and `x_k` is a neighbor of it; each middle `x_i`
/// has degree at most 2 once `x_1..x_{i-1}` and `x_k` are removed.
fn two_degenerate_peel(g: &Graph, k: usize) -> Result<Vec<Vertex>> {
    let x1 = (0..g.n())
        .find(|&v| (1..=2).contains(&g.degree(v)))
        .ok_or_else(|| Error::Structural("no vertex of degree 1 or 2".into()))?;
    let xk = g.neighbors(x1)[0];
    let mut removed = vec![false; g.n()];
    removed[x1] = true;
    removed[xk] = true;
    let mut peel = vec![x1];
    for _ in 1..k - 1 {
        let v = (0..g.n())
            .find(|&v| !removed[v] && g.neighbors(v).iter().filter(|&&u| !removed[u]).count() <= 2)
            .ok_or_else(|| Error::Structural("graph is not 2-degenerate".into()))?;
        removed[v] = true;
        peel.push(v);
    }
    peel.push(xk);
    Ok(peel)
}

fn two_degenerate_rec(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    labels: &[Vertex],
    trace: &mut Trace,
) -> Result<PartialColoring> {
    let n = g.n();
    if n <= 2 * k {
        return small_greedy(lists, n, k);
    }
    if g.max_degree() <= 2 {
        return low_degree_rec(g, k, lists, labels, trace);
    }
    let peel = two_degenerate_peel(g, k)?;
    trace.peel(&peel, labels);
    let f = solve_rest(
        g,
        &peel,
        lists,
        labels,
        trace,
        |sub, sub_lists, sub_labels, trace| {
            two_degenerate_rec(sub, k, sub_lists, sub_labels, trace)
        },
    )?;
    let (h, ctx) = zhang_extend(g, &peel, lists, &f)?;
    trace.context(&ctx, labels);
    Ok(h)
}

/// Equitable arborable coloring of `K_n - e` (missing edge between the first
/// and last vertex) from any `k`-assignment, `k >= ceil((n-1)/2)`.
pub fn solve_complete_minus_edge(
    n: usize,
    k: usize,
    lists: &ListAssignment,
) -> Result<SolveOutcome> {
    if n < 3 {
        return param("need n >= 3");
    }
    if k < (n - 1).div_ceil(2) {
        return param(format!("need k >= ceil((n-1)/2) = {}", (n - 1).div_ceil(2)));
    }
    lists.require_k_assignment(n, k)?;
    let g = Graph::build(&FamilySpec::CompleteMinusEdge { n })?;
    let f = if n <= 2 * k {
        small_greedy(lists, n, k)?
    } else {
        // n = 2k + 1: the first 2k vertices use each color at most twice; the
        // last one needs a color held by at most one of its neighbors, and
        // every vertex but the first is its neighbor.
        let mut f = PartialColoring::empty(n);
        let order: Vec<Vertex> = (0..n - 1).collect();
        usage_greedy(lists, &order, 2, &mut f)
            .ok_or_else(|| Error::Internal("usage-capped greedy ran out of colors".into()))?;
        let last = n - 1;
        let c = lists
            .list(last)
            .iter()
            .copied()
            .filter(|&c| {
                g.neighbors(last)
                    .iter()
                    .filter(|&&u| f.get(u) == Some(c))
                    .count()
                    <= 1
            })
            .map(|c| (f.class_size(c), c))
            .min()
            .ok_or_else(|| Error::Internal("last vertex has no admissible color".into()))?
            .1;
        f.set(last, c);
        f
    };
    finish(
        &g,
        lists,
        k,
        f,
        Strategy::CompleteMinusEdge,
        Trace::default(),
    )
}

/// Equitable arborable coloring by the usage-capped greedy, for `n <= 2k`.
pub fn solve_greedy(g: &Graph, k: usize, lists: &ListAssignment) -> Result<SolveOutcome> {
    if g.n() > 2 * k {
        return param(format!("greedy needs n <= 2k, got n = {}, k = {k}", g.n()));
    }
    lists.require_k_assignment(g.n(), k)?;
    let f = small_greedy(lists, g.n(), k)?;
    finish(g, lists, k, f, Strategy::Greedy, Trace::default())
}

/// `Some(l)` if `g` is `2l`-regular on `2l + 2` vertices with `l >= 2`.
pub fn small_regular_half_degree(g: &Graph) -> Option<usize> {
    let n = g.n();
    if n < 6 || !n.is_multiple_of(2) {
        return None;
    }
    let l = (n - 2) / 2;
    (0..n).all(|v| g.degree(v) == 2 * l).then_some(l)
}

/// Equitable arborable coloring of a `2l`-regular graph on `2l + 2`
/// vertices, `l >= 2`, from any `k`-assignment with `k >= l`.
///
/// Any arborable coloring is automatically equitable: a class of size
/// `s >= 4` has minimum degree at least `2l - (2l + 2 - s) = s - 2 >= 2`
/// inside it and so contains a cycle. The coloring is found by search with
/// no cap.
pub fn solve_regular_small(g: &Graph, k: usize, lists: &ListAssignment) -> Result<SolveOutcome> {
    solve_regular_small_with(g, k, lists, &SolveOptions::default())
}

pub fn solve_regular_small_with(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    let l = small_regular_half_degree(g).ok_or_else(|| {
        Error::Parameter("graph is not 2l-regular on 2l + 2 vertices with l >= 2".into())
    })?;
    if k < l {
        return param(format!("need k >= {l}"));
    }
    lists.require_k_assignment(g.n(), k)?;
    let n = g.n();
    let f = if k > l {
        small_greedy(lists, n, k)?
    } else {
        let v = exact_equitable_arborable(g, lists, n, opts.budget);
        match v.status {
            Status::Feasible => v.witness.expect("feasible verdicts carry a witness"),
            Status::Infeasible => {
                return Err(Error::Internal(
                    "no arborable coloring exists, contradicting the list arboricity bound".into(),
                ))
            }
            Status::Unknown => return Err(Error::Budget),
        }
    };
    if f.max_class_size() > equity_cap(n, l) {
        return Err(Error::Internal(format!(
            "arborable coloring has a class of size {}",
            f.max_class_size()
        )));
    }
    finish(g, lists, k, f, Strategy::RegularSmall, Trace::default())
}

fn solve_by_search(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    strategy: Strategy,
    budget: SearchBudget,
) -> Result<SolveOutcome> {
    lists.require_k_assignment(g.n(), k)?;
    let cap = equity_cap(g.n().max(1), k);
    let verdict = if strategy == Strategy::Bipartite {
        let (a, b) = match g.family() {
            Some(&FamilyTag::CompleteBipartite { a, b }) => (a, b),
            _ => match g.complete_bipartite_sides() {
                Some((x, y)) if x.iter().copied().eq(0..x.len()) => (x.len(), y.len()),
                _ => return param("graph is not K_{a,b} with side X = 0..a"),
            },
        };
        check_family(g, FamilySpec::CompleteBipartite { a, b })?;
        solve_bipartite_exact(&BipartiteInstance::new(a, b, lists.clone())?, cap, budget)
    } else {
        exact_equitable_arborable(g, lists, cap, budget)
    };
    match verdict.status {
        Status::Feasible => finish(
            g,
            lists,
            k,
            verdict.witness.expect("feasible verdicts carry a witness"),
            strategy,
            Trace::default(),
        ),
        Status::Infeasible => Err(Error::Refuted(format!(
            "exhaustive search found no arborable coloring with classes of size at most {cap}"
        ))),
        Status::Unknown => Err(Error::Budget),
    }
}

/// The strategy `auto` picks: the family tag first, then structure.
pub fn choose_strategy(g: &Graph, k: usize) -> Strategy {
    let n = g.n();
    match g.family() {
        Some(&FamilyTag::PathPower { p, .. }) if k >= p => return Strategy::PathPower,
        Some(&FamilyTag::PathPower { p, .. }) if p >= 3 && k == p - 1 => {
            return Strategy::PathPowerPMinus1
        }
        Some(&FamilyTag::CyclePower { n, p }) if p >= 2 && n >= 2 * p + 2 && k > p => {
            return Strategy::CyclePower
        }
        Some(&FamilyTag::CompleteMinusEdge { n }) if n >= 3 && k >= (n - 1).div_ceil(2) => {
            return Strategy::CompleteMinusEdge
        }
        Some(FamilyTag::CompleteBipartite { .. }) => return Strategy::Bipartite,
        _ => {}
    }
    if n <= 2 * k {
        Strategy::Greedy
    } else if g.max_degree() <= 2 && k >= 2 {
        Strategy::LowDegree
    } else if g.max_degree() <= 2 * k && g.is_k_degenerate(2) {
        Strategy::TwoDegenerate
    } else if small_regular_half_degree(g).is_some_and(|l| k >= l) {
        Strategy::RegularSmall
    } else if g
        .complete_bipartite_sides()
        .is_some_and(|(x, _)| x.iter().copied().eq(0..x.len()))
    {
        Strategy::Bipartite
    } else {
        Strategy::Exact
    }
}

/// Runs `strategy` (or the automatic choice) on `g`.
pub fn solve(
    g: &Graph,
    k: usize,
    lists: &ListAssignment,
    strategy: Option<Strategy>,
    opts: &SolveOptions,
) -> Result<SolveOutcome> {
    list_size(lists, g.n())?;
    let strategy = strategy.unwrap_or_else(|| choose_strategy(g, k));
    let n = g.n();
    let path_p = || match g.family() {
        Some(&FamilyTag::PathPower { p, .. }) | Some(&FamilyTag::CyclePower { p, .. }) => Ok(p),
        _ => param("graph carries no path or cycle power tag"),
    };
    let out = match strategy {
        Strategy::PathPower => {
            let p = path_p()?;
            check_family(g, FamilySpec::PathPower { n, p })?;
            solve_path_power_with(n, p, k, lists, opts)?
        }
        Strategy::PathPowerPMinus1 => {
            let p = path_p()?;
            check_family(g, FamilySpec::PathPower { n, p })?;
            if k + 1 != p {
                return param(format!(
                    "this strategy needs k = p - 1 = {}",
                    p.saturating_sub(1)
                ));
            }
            solve_path_power_pminus1_with(n, p, lists, opts)?
        }
        Strategy::CyclePower => {
            let p = path_p()?;
            check_family(g, FamilySpec::CyclePower { n, p })?;
            solve_cycle_power_with(n, p, k, lists, opts)?
        }
        Strategy::CompleteMinusEdge => {
            check_family(g, FamilySpec::CompleteMinusEdge { n })?;
            solve_complete_minus_edge(n, k, lists)?
        }
        Strategy::TwoDegenerate => solve_2degenerate_with(g, k, lists, opts)?,
        Strategy::LowDegree => solve_low_degree_with(g, k, lists, opts)?,
        Strategy::RegularSmall => solve_regular_small_with(g, k, lists, opts)?,
        Strategy::Greedy => solve_greedy(g, k, lists)?,
        Strategy::Bipartite | Strategy::Exact => {
            solve_by_search(g, k, lists, strategy, opts.budget)?
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_assignment, random_two_degenerate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn passes(g: &Graph, lists: &ListAssignment, k: usize, out: &SolveOutcome) {
        let r = verify_certificate(g, lists, k, &out.coloring);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn path_power_examples() {
        let lists = ListAssignment::constant(4, &[7]);
        let out = solve_path_power(4, 1, 1, &lists).unwrap();
        assert_eq!(out.coloring, PartialColoring::from_total(&[7, 7, 7, 7]));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lists = random_assignment(20, 2, 5, &mut rng);
        let out = solve_path_power(20, 2, 2, &lists).unwrap();
        assert_eq!(out.theorem, Strategy::PathPower);
        assert!(out.coloring.max_class_size() <= 10);

        let lists = ListAssignment::constant(9, &[1, 2, 3]);
        let out = solve_path_power(9, 3, 3, &lists).unwrap();
        assert!(out.coloring.classes().values().all(|c| c.len() == 3));
    }

    #[test]
    fn path_power_peels_prefixes() {
        let lists = ListAssignment::constant_k(13, 3);
        let out = solve_path_power(13, 2, 3, &lists).unwrap();
        assert_eq!(
            out.recursion_trace,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]
        );
    }

    #[test]
    fn pminus1_examples() {
        let g = Graph::build(&FamilySpec::PathPower { n: 4, p: 3 }).unwrap();
        let lists = ListAssignment::constant(4, &[1, 2]);
        let out = solve_path_power_pminus1(4, 3, &lists).unwrap();
        passes(&g, &lists, 2, &out);
        assert!(out.recursion_trace.is_empty());

        let lists = ListAssignment::constant(12, &[1, 2]);
        let out = solve_path_power_pminus1(12, 3, &lists).unwrap();
        assert!(out.coloring.max_class_size() <= 6);
        assert!(pminus1_case(12, 3, &lists).unwrap().is_some());

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lists = random_assignment(16, 3, 6, &mut rng);
        solve_path_power_pminus1(16, 4, &lists).unwrap();
        assert!(solve_path_power_pminus1(8, 2, &ListAssignment::constant_k(8, 1)).is_err());
    }

    #[test]
    fn pminus1_second_case() {
        // v_4 and v_5 share color 1, so D(v_3) = {2} and it is safe.
        let g = Graph::build(&FamilySpec::PathPower { n: 7, p: 3 }).unwrap();
        let lists = ListAssignment::constant(7, &[1, 2]);
        let f =
            PartialColoring::from_options(vec![None, None, None, None, Some(1), Some(1), Some(2)]);
        let (h, ctx) = pminus1_extend(&g, 3, &lists, &f).unwrap();
        assert_eq!(ctx.d[2], vec![2]);
        assert_eq!(ctx.safe[2], vec![2]);
        assert!(verify_certificate(&g, &lists, 2, &h).passed());
    }

    #[test]
    fn cycle_power_examples() {
        let out = solve_cycle_power(6, 2, 3, &ListAssignment::constant(6, &[1, 2, 3])).unwrap();
        assert!(out.coloring.max_class_size() <= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lists = random_assignment(15, 3, 6, &mut rng);
        let out = solve_cycle_power(15, 2, 3, &lists).unwrap();
        assert!(out.coloring.max_class_size() <= 5);
        let out =
            solve_cycle_power(20, 3, 4, &ListAssignment::constant(20, &[1, 2, 3, 4])).unwrap();
        assert!(out.coloring.max_class_size() <= 5);
        assert!(solve_cycle_power(5, 2, 3, &ListAssignment::constant_k(5, 3)).is_err());
    }

    #[test]
    fn low_degree_examples() {
        let c3 = Graph::build(&FamilySpec::CyclePower { n: 3, p: 1 }).unwrap();
        let g = Graph::disjoint_union(&[c3.clone(), c3]);
        let lists = ListAssignment::constant(6, &[1, 2]);
        let out = solve_low_degree(&g, 2, &lists).unwrap();
        passes(&g, &lists, 2, &out);

        let p7 = Graph::build(&FamilySpec::PathPower { n: 7, p: 1 }).unwrap();
        let lists = random_assignment(7, 2, 4, &mut ChaCha8Rng::seed_from_u64(5));
        let out = solve_low_degree(&p7, 2, &lists).unwrap();
        assert!(out.coloring.max_class_size() <= 4);

        let g = Graph::empty(5);
        let out = solve_low_degree(&g, 2, &ListAssignment::constant(5, &[1, 2])).unwrap();
        assert!(out.coloring.max_class_size() <= 3);

        let k4 = Graph::build(&FamilySpec::Complete { n: 4 }).unwrap();
        assert!(matches!(
            solve_low_degree(&k4, 2, &ListAssignment::constant_k(4, 2)),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn long_cycles_and_paths() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 3..30 {
            let c = Graph::build(&FamilySpec::CyclePower { n, p: 1 }).unwrap();
            let p = Graph::build(&FamilySpec::PathPower { n, p: 1 }).unwrap();
            let g = Graph::disjoint_union(&[c, p]);
            for k in 2..4 {
                let lists = random_assignment(g.n(), k, k + 2, &mut rng);
                solve_low_degree(&g, k, &lists).unwrap();
            }
        }
    }

    #[test]
    fn two_degenerate_examples() {
        let k4 = Graph::build(&FamilySpec::Complete { n: 4 }).unwrap();
        assert!(matches!(
            solve_2degenerate(&k4, 2, &ListAssignment::constant_k(4, 2)),
            Err(Error::Structural(_))
        ));

        // A book: three triangles sharing the edge 0-1 plus a pendant path.
        let book = Graph::from_edges(
            7,
            &[
                (0, 1),
                (0, 2),
                (1, 2),
                (0, 3),
                (1, 3),
                (0, 4),
                (1, 4),
                (0, 5),
                (5, 6),
                (0, 6),
            ],
        )
        .unwrap();
        assert_eq!(book.max_degree(), 6);
        let lists = random_assignment(7, 3, 5, &mut ChaCha8Rng::seed_from_u64(7));
        let out = solve_2degenerate(&book, 3, &lists).unwrap();
        passes(&book, &lists, 3, &out);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut done = 0;
        while done < 20 {
            let g = random_two_degenerate(15, &mut rng);
            if g.max_degree() != 4 {
                continue;
            }
            let lists = random_assignment(15, 2, 4, &mut rng);
            let out = solve_2degenerate(&g, 2, &lists).unwrap();
            assert!(out.coloring.max_class_size() <= 8);
            done += 1;
        }
    }

    #[test]
    fn complete_minus_edge_examples() {
        let lists = ListAssignment::constant(5, &[1, 2]);
        let out = solve_complete_minus_edge(5, 2, &lists).unwrap();
        assert!(out.coloring.max_class_size() <= 3);
        let out = solve_complete_minus_edge(3, 1, &ListAssignment::constant(3, &[4])).unwrap();
        assert_eq!(out.coloring, PartialColoring::from_total(&[4, 4, 4]));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [5, 7, 9, 11] {
            for _ in 0..30 {
                let k = (n - 1) / 2;
                let lists = random_assignment(n, k, k + 2, &mut rng);
                solve_complete_minus_edge(n, k, &lists).unwrap();
            }
        }
        assert!(solve_complete_minus_edge(7, 2, &ListAssignment::constant_k(7, 2)).is_err());
    }

    #[test]
    fn regular_small_examples() {
        let k222 = Graph::build(&FamilySpec::CyclePower { n: 6, p: 2 }).unwrap();
        let out = solve_regular_small(&k222, 2, &ListAssignment::constant(6, &[1, 2])).unwrap();
        assert!(out.coloring.max_class_size() <= 3);

        let cocktail = Graph::from_edges(
            8,
            &(0..8)
                .flat_map(|u| (u + 1..8).map(move |v| (u, v)))
                .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(small_regular_half_degree(&cocktail), Some(3));
        let lists = random_assignment(8, 3, 5, &mut ChaCha8Rng::seed_from_u64(10));
        solve_regular_small(&cocktail, 3, &lists).unwrap();
        assert!(
            solve_regular_small(&Graph::empty(6), 2, &ListAssignment::constant_k(6, 2)).is_err()
        );
    }

    #[test]
    fn auto_strategy_dispatch() {
        let pp = Graph::build(&FamilySpec::PathPower { n: 12, p: 3 }).unwrap();
        assert_eq!(choose_strategy(&pp, 3), Strategy::PathPower);
        assert_eq!(choose_strategy(&pp, 2), Strategy::PathPowerPMinus1);
        let cp = Graph::build(&FamilySpec::CyclePower { n: 12, p: 2 }).unwrap();
        assert_eq!(choose_strategy(&cp, 3), Strategy::CyclePower);
        let kab = Graph::build(&FamilySpec::CompleteBipartite { a: 11, b: 17 }).unwrap();
        assert_eq!(choose_strategy(&kab, 3), Strategy::Bipartite);
        let out = solve(
            &kab,
            3,
            &ListAssignment::constant(28, &[1, 2, 3]),
            None,
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(out.coloring.max_class_size() <= 10);
        let untagged = Graph::from_edges(12, &cp.edges()).unwrap();
        assert_eq!(choose_strategy(&untagged, 2), Strategy::Exact);
        assert_eq!(
            Strategy::parse("two-degenerate"),
            Some(Strategy::TwoDegenerate)
        );
    }

    #[test]
    fn deterministic() {
        let lists = random_assignment(25, 3, 6, &mut ChaCha8Rng::seed_from_u64(11));
        let a = solve_path_power(25, 3, 3, &lists).unwrap();
        let b = solve_path_power(25, 3, 3, &lists).unwrap();
        assert_eq!(a.coloring, b.coloring);
    }
}
