//! Extending an equitable arborable coloring of `G - S` to all of `G`.
//!
//! Given `f` on `G - S`, each peel vertex `v` keeps the colors of its list
//! that appear on at most one `f`-colored neighbor (its D-list). A color with
//! exactly one such neighbor is *dangerous* for `v`, one with none is *safe*.
//! A coloring `g` of `S` drawn from the D-lists extends `f` whenever
//! `g` is arborable on `G[S]`, uses each color at most `m` times and gives
//! each color to at most one vertex for which it is dangerous. When
//! `|S| = m k` the union is then equitable as well: classes of `f` have at
//! most `ceil(n/k) - m` vertices.
//!
//! All vertex ids here are ids of `G`; `f` is a coloring of `G` that leaves
//! exactly `S` uncolored.

use std::collections::HashMap;

use serde::Serialize;

use crate::coloring::{
    equity_cap, verify_arborable_L_coloring, verify_certificate, ColorId, ColoringFile,
    ListAssignment, PartialColoring,
};
use crate::dsu::{RollbackUnionFind, UnionFind};
use crate::error::{param, Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeelMode {
    /// `|S| = m k` exactly.
    Strict,
    /// `|S| <= m k`; the merged coloring is re-verified instead of trusted.
    Relaxed,
}

/// D-lists of the peel vertices with respect to a base coloring.
/// Per-vertex vectors are indexed by position in `peel`.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    pub peel: Vec<Vertex>,
    pub m: usize,
    pub k: usize,
    pub d: Vec<Vec<ColorId>>,
    pub dangerous: Vec<Vec<ColorId>>,
    pub safe: Vec<Vec<ColorId>>,
    /// `|N(v) - S|` for each peel vertex.
    pub outside: Vec<usize>,
    pub base: PartialColoring,
    pub mode: PeelMode,
}

#[derive(Serialize)]
struct ContextDump<'a> {
    peel: Vec<Vertex>,
    m: usize,
    k: usize,
    relaxed: bool,
    outside: &'a [usize],
    d: &'a [Vec<ColorId>],
    dangerous: &'a [Vec<ColorId>],
    safe: &'a [Vec<ColorId>],
    base: ColoringFile,
}

impl ExtensionContext {
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.peel.iter().position(|&u| u == v)
    }

    /// JSON dump with vertex ids passed through `labels` (identity if empty).
    pub fn to_json_value(&self, labels: &[Vertex]) -> serde_json::Value {
        let label = |v: Vertex| if labels.is_empty() { v } else { labels[v] };
        let mut base = ColoringFile {
            colors: Default::default(),
        };
        for v in 0..self.base.n() {
            if let Some(c) = self.base.get(v) {
                base.colors.insert(label(v), c);
            }
        }
        serde_json::to_value(ContextDump {
            peel: self.peel.iter().map(|&v| label(v)).collect(),
            m: self.m,
            k: self.k,
            relaxed: self.mode == PeelMode::Relaxed,
            outside: &self.outside,
            d: &self.d,
            dangerous: &self.dangerous,
            safe: &self.safe,
            base,
        })
        .expect("context serializes")
    }
}

pub fn compute_d_lists(
    g: &Graph,
    peel: &[Vertex],
    lists: &ListAssignment,
    f: &PartialColoring,
    m: usize,
    mode: PeelMode,
) -> Result<ExtensionContext> {
    let n = g.n();
    let k = lists
        .uniform_size()
        .ok_or_else(|| Error::Parameter("lists must all have the same size".into()))?;
    if lists.n() != n || f.n() != n {
        return param("graph, lists and coloring must cover the same vertices");
    }
    if m == 0 {
        return param("m must be positive");
    }
    let mut in_s = vec![false; n];
    for &v in peel {
        if v >= n || in_s[v] {
            return param(format!("peel vertex {v} out of range or repeated"));
        }
        in_s[v] = true;
    }
    match mode {
        PeelMode::Strict if peel.len() != m * k => {
            return param(format!("|S| = {} but m k = {}", peel.len(), m * k));
        }
        PeelMode::Relaxed if peel.len() > m * k => {
            return param(format!("|S| = {} exceeds m k = {}", peel.len(), m * k));
        }
        _ => {}
    }
    for (v, &peeled) in in_s.iter().enumerate() {
        match (peeled, f.get(v)) {
            (true, Some(_)) => {
                return Err(Error::Precondition(format!(
                    "peel vertex {v} is already colored"
                )))
            }
            (false, None) => {
                return Err(Error::Precondition(format!(
                    "base coloring misses vertex {v}"
                )))
            }
            _ => {}
        }
    }
    let rest = n - peel.len();
    if rest > 0 {
        let report = verify_arborable_L_coloring(g, lists, f, false);
        let cap = equity_cap(rest, k);
        if !report.list_respected || !report.arborable || report.max_class_size > cap {
            return Err(Error::Precondition(format!(
                "base coloring is not an equitable arborable L-coloring of G - S (cap {cap})"
            )));
        }
    }

    let mut ctx = ExtensionContext {
        peel: peel.to_vec(),
        m,
        k,
        d: Vec::with_capacity(peel.len()),
        dangerous: Vec::with_capacity(peel.len()),
        safe: Vec::with_capacity(peel.len()),
        outside: Vec::with_capacity(peel.len()),
        base: f.clone(),
        mode,
    };
    for &v in peel {
        let mut seen: HashMap<ColorId, usize> = HashMap::new();
        let mut t = 0;
        for &u in g.neighbors(v) {
            if let Some(c) = f.get(u) {
                t += 1;
                *seen.entry(c).or_default() += 1;
            }
        }
        let (mut d, mut dangerous, mut safe) = (Vec::new(), Vec::new(), Vec::new());
        for &c in lists.list(v) {
            match seen.get(&c).copied().unwrap_or(0) {
                0 => {
                    d.push(c);
                    safe.push(c);
                }
                1 => {
                    d.push(c);
                    dangerous.push(c);
                }
                _ => {}
            }
        }
        if d.len() < k.saturating_sub(t / 2) || safe.len() < k.saturating_sub(t) {
            return Err(Error::Internal(format!(
                "D-list bounds fail at vertex {v}: |D| = {}, |safe| = {}, t = {t}, k = {k}",
                d.len(),
                safe.len()
            )));
        }
        ctx.d.push(d);
        ctx.dangerous.push(dangerous);
        ctx.safe.push(safe);
        ctx.outside.push(t);
    }
    Ok(ctx)
}

fn hypothesis(clause: &'static str, detail: String) -> Error {
    Error::Hypothesis { clause, detail }
}

/// Checks every merge hypothesis for `peel_coloring`, a coloring of `G`
/// defined exactly on the peel set.
pub fn check_peel_coloring(
    g: &Graph,
    ctx: &ExtensionContext,
    peel_coloring: &PartialColoring,
) -> Result<()> {
    if peel_coloring.n() != g.n() {
        return Err(hypothesis(
            "domain",
            "coloring size differs from the graph".into(),
        ));
    }
    let mut in_s = vec![false; g.n()];
    for &v in &ctx.peel {
        in_s[v] = true;
    }
    if let Some(v) = (0..g.n()).find(|&v| !in_s[v] && peel_coloring.get(v).is_some()) {
        return Err(hypothesis(
            "domain",
            format!("vertex {v} is outside S but colored"),
        ));
    }
    let mut uses: HashMap<ColorId, usize> = HashMap::new();
    let mut dangerous_holders: HashMap<ColorId, usize> = HashMap::new();
    for (i, &v) in ctx.peel.iter().enumerate() {
        let c = peel_coloring
            .get(v)
            .ok_or_else(|| hypothesis("total on S", format!("peel vertex {v} is uncolored")))?;
        if !ctx.d[i].contains(&c) {
            return Err(hypothesis(
                "D-coloring",
                format!("vertex {v} took {c}, not in its D-list"),
            ));
        }
        *uses.entry(c).or_default() += 1;
        if ctx.dangerous[i].contains(&c) {
            *dangerous_holders.entry(c).or_default() += 1;
        }
    }
    if let Some((c, u)) = uses.iter().find(|&(_, &u)| u > ctx.m) {
        return Err(hypothesis(
            "at most m uses",
            format!("color {c} used {u} times, m = {}", ctx.m),
        ));
    }
    if let Some((c, h)) = dangerous_holders.iter().find(|&(_, &h)| h > 1) {
        return Err(hypothesis(
            "one dangerous holder",
            format!("color {c} is dangerous for {h} of its holders"),
        ));
    }
    let mut uf = UnionFind::new(g.n());
    for &v in &ctx.peel {
        for &u in g.neighbors(v) {
            if u < v && in_s[u] && peel_coloring.get(u) == peel_coloring.get(v) && !uf.union(u, v) {
                return Err(hypothesis(
                    "forest in G[S]",
                    format!(
                        "color {} has a cycle through {u}-{v}",
                        peel_coloring.get(v).unwrap()
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Returns `f` extended by `peel_coloring` after checking the hypotheses and
/// re-verifying the result against the cap `ceil(n/k)`.
pub fn merge_colorings(
    g: &Graph,
    lists: &ListAssignment,
    ctx: &ExtensionContext,
    peel_coloring: &PartialColoring,
) -> Result<PartialColoring> {
    check_peel_coloring(g, ctx, peel_coloring)?;
    let mut h = ctx.base.clone();
    for &v in &ctx.peel {
        h.set(v, peel_coloring.get(v).expect("checked total on S"));
    }
    let report = verify_certificate(g, lists, ctx.k, &h);
    if report.passed() {
        return Ok(h);
    }
    let detail = format!(
        "merged coloring fails verification (max class {}, cap {}, arborable {})",
        report.max_class_size, report.cap, report.arborable
    );
    match ctx.mode {
        PeelMode::Strict => Err(Error::Internal(detail)),
        PeelMode::Relaxed => Err(Error::Precondition(detail)),
    }
}

/// First coloring of `S` meeting every merge hypothesis, searching peel
/// vertices in order and colors ascending. `None` means none exists.
pub fn find_peel_coloring(g: &Graph, ctx: &ExtensionContext) -> Option<PartialColoring> {
    let mut search = PeelSearch {
        g,
        ctx,
        coloring: PartialColoring::empty(g.n()),
        uses: HashMap::new(),
        dangerous_taken: HashMap::new(),
        uf: RollbackUnionFind::new(g.n()),
    };
    search.run(0).then_some(search.coloring)
}

struct PeelSearch<'a> {
    g: &'a Graph,
    ctx: &'a ExtensionContext,
    coloring: PartialColoring,
    uses: HashMap<ColorId, usize>,
    dangerous_taken: HashMap<ColorId, bool>,
    uf: RollbackUnionFind,
}

impl PeelSearch<'_> {
    fn run(&mut self, i: usize) -> bool {
        if i == self.ctx.peel.len() {
            return true;
        }
        let v = self.ctx.peel[i];
        for &c in &self.ctx.d[i] {
            if self.uses.get(&c).copied().unwrap_or(0) >= self.ctx.m {
                continue;
            }
            let dangerous = self.ctx.dangerous[i].contains(&c);
            if dangerous && self.dangerous_taken.get(&c).copied().unwrap_or(false) {
                continue;
            }
            let cp = self.uf.checkpoint();
            let acyclic = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&u| self.coloring.get(u) == Some(c))
                .all(|&u| self.uf.union(u, v));
            if acyclic {
                self.coloring.set(v, c);
                *self.uses.entry(c).or_default() += 1;
                if dangerous {
                    self.dangerous_taken.insert(c, true);
                }
                if self.run(i + 1) {
                    return true;
                }
                self.coloring.clear(v);
                *self.uses.get_mut(&c).expect("counted") -= 1;
                if dangerous {
                    self.dangerous_taken.insert(c, false);
                }
            }
            self.uf.rollback(cp);
        }
        false
    }
}

/// Gives the peel positions in `order` pairwise distinct colors, each taken
/// greedily (smallest first) from `choices(position)` and avoiding `taken`.
pub(crate) fn distinct_greedy<'a>(
    ctx: &'a ExtensionContext,
    order: &[usize],
    choices: impl Fn(usize) -> &'a [ColorId],
    taken: &mut Vec<ColorId>,
    out: &mut PartialColoring,
) -> Result<()> {
    for &i in order {
        let c = choices(i)
            .iter()
            .copied()
            .find(|c| !taken.contains(c))
            .ok_or_else(|| {
                Error::Internal(format!(
                    "no free color for peel vertex {} (D-list {:?}, taken {:?})",
                    ctx.peel[i], ctx.d[i], taken
                ))
            })?;
        taken.push(c);
        out.set(ctx.peel[i], c);
    }
    Ok(())
}

/// Extends `f` to `S = (x_1, .., x_k)` with distinct colors when
/// `|N(x_i) - S| <= 2i - 1` for every `i`.
///
/// The vertices are colored `x_k` first down to `x_1`. When `x_i` is reached
/// `k - i` colors are taken, while its D-list has at least
/// `k - floor((2i-1)/2) = k - i + 1` colors, so a free one always exists.
pub fn zhang_extend(
    g: &Graph,
    peel: &[Vertex],
    lists: &ListAssignment,
    f: &PartialColoring,
) -> Result<(PartialColoring, ExtensionContext)> {
    let k = lists
        .uniform_size()
        .ok_or_else(|| Error::Parameter("lists must all have the same size".into()))?;
    if peel.len() != k {
        return param(format!("|S| = {} but k = {k}", peel.len()));
    }
    let mut in_s = vec![false; g.n()];
    for &v in peel {
        if v < g.n() {
            in_s[v] = true;
        }
    }
    for (i, &v) in peel.iter().enumerate() {
        let t = g.neighbors(v).iter().filter(|&&u| !in_s[u]).count();
        if t > 2 * i + 1 {
            return Err(Error::Precondition(format!(
                "x_{} = {v} has {t} neighbors outside S, more than {}",
                i + 1,
                2 * i + 1
            )));
        }
    }
    let ctx = compute_d_lists(g, peel, lists, f, 1, PeelMode::Strict)?;
    let order: Vec<usize> = (0..k).rev().collect();
    let mut gcol = PartialColoring::empty(g.n());
    distinct_greedy(&ctx, &order, |i| &ctx.d[i], &mut Vec::new(), &mut gcol)?;
    let h = merge_colorings(g, lists, &ctx, &gcol)?;
    Ok((h, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    fn c4_context() -> (Graph, ListAssignment, ExtensionContext) {
        let g = Graph::build(&FamilySpec::CyclePower { n: 4, p: 1 }).unwrap();
        let lists = ListAssignment::constant(4, &[1, 2]);
        let f = PartialColoring::from_options(vec![None, None, Some(1), Some(2)]);
        let ctx = compute_d_lists(&g, &[0, 1], &lists, &f, 1, PeelMode::Strict).unwrap();
        (g, lists, ctx)
    }

    #[test]
    fn c4_d_lists() {
        let (_, _, ctx) = c4_context();
        assert_eq!(ctx.d, vec![vec![1, 2], vec![1, 2]]);
        assert_eq!(ctx.dangerous, vec![vec![2], vec![1]]);
        assert_eq!(ctx.safe, vec![vec![1], vec![2]]);
    }

    #[test]
    fn c4_merge_accepts_exactly_the_distinct_maps() {
        let (g, lists, ctx) = c4_context();
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let gcol = PartialColoring::from_options(vec![Some(a), Some(b), None, None]);
            let merged = merge_colorings(&g, &lists, &ctx, &gcol);
            assert_eq!(merged.is_ok(), a != b, "g = ({a}, {b})");
        }
        let found = find_peel_coloring(&g, &ctx).unwrap();
        assert_eq!(found.get(0), Some(1));
        assert_eq!(found.get(1), Some(2));
    }

    #[test]
    fn isolated_peel_vertex_has_full_safe_list() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let lists = ListAssignment::constant(3, &[4, 5]);
        let f = PartialColoring::from_options(vec![None, Some(4), Some(5)]);
        let ctx = compute_d_lists(&g, &[0], &lists, &f, 1, PeelMode::Relaxed).unwrap();
        assert_eq!(ctx.safe[0], vec![4, 5]);
        assert_eq!(ctx.d[0], ctx.safe[0]);
    }

    #[test]
    fn one_outside_neighbor_makes_its_color_dangerous() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let lists = ListAssignment::constant(2, &[1, 2, 3]);
        let f = PartialColoring::from_options(vec![None, Some(2)]);
        let ctx = compute_d_lists(&g, &[0], &lists, &f, 1, PeelMode::Relaxed).unwrap();
        assert_eq!(ctx.dangerous[0], vec![2]);
        assert_eq!(ctx.safe[0], vec![1, 3]);
    }

    #[test]
    fn empty_relaxed_peel_returns_base() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let lists = ListAssignment::constant(3, &[1, 2]);
        let f = PartialColoring::from_total(&[1, 2, 1]);
        let ctx = compute_d_lists(&g, &[], &lists, &f, 1, PeelMode::Relaxed).unwrap();
        let h = merge_colorings(&g, &lists, &ctx, &PartialColoring::empty(3)).unwrap();
        assert_eq!(h, f);
        assert!(compute_d_lists(&g, &[], &lists, &f, 1, PeelMode::Strict).is_err());
    }

    #[test]
    fn shared_dangerous_color_has_no_peel_coloring() {
        let g = Graph::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let ctx = ExtensionContext {
            peel: vec![0, 1],
            m: 1,
            k: 1,
            d: vec![vec![7], vec![7]],
            dangerous: vec![vec![7], vec![7]],
            safe: vec![vec![], vec![]],
            outside: vec![1, 1],
            base: PartialColoring::from_options(vec![None, None, Some(7), Some(7)]),
            mode: PeelMode::Relaxed,
        };
        assert!(find_peel_coloring(&g, &ctx).is_none());
    }

    #[test]
    fn hypothesis_errors_name_the_clause() {
        let (g, lists, ctx) = c4_context();
        let clause = |gcol: Vec<Option<ColorId>>| match merge_colorings(
            &g,
            &lists,
            &ctx,
            &PartialColoring::from_options(gcol),
        ) {
            Err(Error::Hypothesis { clause, .. }) => clause,
            other => panic!("{other:?}"),
        };
        assert_eq!(clause(vec![Some(1), None, None, None]), "total on S");
        assert_eq!(clause(vec![Some(3), Some(1), None, None]), "D-coloring");
        assert_eq!(clause(vec![Some(1), Some(1), None, None]), "at most m uses");
        assert_eq!(clause(vec![Some(1), Some(2), Some(1), None]), "domain");
    }

    #[test]
    fn precondition_errors() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let lists = ListAssignment::constant(3, &[1]);
        let f = PartialColoring::from_options(vec![None, Some(1), None]);
        assert!(matches!(
            compute_d_lists(&g, &[0], &lists, &f, 1, PeelMode::Strict),
            Err(Error::Precondition(_))
        ));
        let f = PartialColoring::from_options(vec![None, Some(1), Some(1)]);
        assert!(matches!(
            zhang_extend(
                &Graph::build(&FamilySpec::Complete { n: 3 }).unwrap(),
                &[0],
                &lists,
                &f
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zhang_extend_on_path_power() {
        let g = Graph::build(&FamilySpec::PathPower { n: 10, p: 2 }).unwrap();
        let lists = ListAssignment::constant(10, &[1, 2]);
        let mut f = PartialColoring::empty(10);
        for v in 2..10 {
            f.set(v, [1, 1, 2, 2][(v - 2) % 4]);
        }
        let (h, ctx) = zhang_extend(&g, &[0, 1], &lists, &f).unwrap();
        assert!(!ctx.d[1].is_empty() && ctx.d[0].len() >= 2);
        assert!(verify_certificate(&g, &lists, 2, &h).passed());
        assert_ne!(h.get(0), h.get(1));
    }

    #[test]
    fn single_vertex_peel() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let lists = ListAssignment::constant(3, &[9]);
        let f = PartialColoring::from_options(vec![None, Some(9), Some(9)]);
        let (h, _) = zhang_extend(&g, &[0], &lists, &f).unwrap();
        assert_eq!(h, PartialColoring::from_total(&[9, 9, 9]));
    }
}
