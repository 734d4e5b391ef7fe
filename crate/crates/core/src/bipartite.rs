//! Complete bipartite specializations.
//!
//! On `K_{a,b}` a coloring is arborable iff every color class has at most one
//! vertex on one of the two sides, so most questions reduce to counting
//! per-color side pairs ("profiles").

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use crate::coloring::{verify_arborable_L_coloring, ColorId, ListAssignment, PartialColoring};
use crate::error::{param, Error, Result};
use crate::graph::{FamilySpec, Graph, Vertex};
use crate::oracle::{SearchBudget, Verdict};

/// `K_{a,b}` with side X = `0..a`, side Y = `a..a+b`, and a list assignment.
#[derive(Clone, Debug)]
pub struct BipartiteInstance {
    pub a: usize,
    pub b: usize,
    pub lists: ListAssignment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl BipartiteInstance {
    pub fn new(a: usize, b: usize, lists: ListAssignment) -> Result<Self> {
        if a == 0 || b == 0 {
            return param("both sides must be non-empty");
        }
        if lists.n() != a + b {
            return param(format!(
                "assignment covers {} vertices, expected {}",
                lists.n(),
                a + b
            ));
        }
        Ok(BipartiteInstance { a, b, lists })
    }

    pub fn n(&self) -> usize {
        self.a + self.b
    }

    pub fn side(&self, v: Vertex) -> Side {
        if v < self.a {
            Side::X
        } else {
            Side::Y
        }
    }

    pub fn graph(&self) -> Graph {
        Graph::build(&FamilySpec::CompleteBipartite {
            a: self.a,
            b: self.b,
        })
        .expect("sides are non-empty")
    }

    /// Number of vertices on `side` whose list contains `c`.
    pub fn eta(&self, side: Side, c: ColorId) -> usize {
        (0..self.n())
            .filter(|&v| self.side(v) == side && self.lists.contains(v, c))
            .count()
    }

    /// Per-color `(X count, Y count)` of a coloring.
    pub fn profile_of(&self, f: &PartialColoring) -> BTreeMap<ColorId, (usize, usize)> {
        let mut out: BTreeMap<ColorId, (usize, usize)> = BTreeMap::new();
        for v in 0..self.n() {
            if let Some(c) = f.get(v) {
                let e = out.entry(c).or_default();
                match self.side(v) {
                    Side::X => e.0 += 1,
                    Side::Y => e.1 += 1,
                }
            }
        }
        out
    }
}

/// Side-count criterion: every class has at most one vertex on some side.
/// Does not look at lists.
pub fn bipartite_arborable_check(inst: &BipartiteInstance, f: &PartialColoring) -> bool {
    inst.profile_of(f).values().all(|&(x, y)| x <= 1 || y <= 1)
}

/// Per-color `(X count, Y count)` pairs, color `i` at index `i`.
pub type ClassProfile = Vec<(usize, usize)>;

#[derive(Clone, Debug)]
pub struct ProfileResult {
    pub feasible: bool,
    pub witness: Option<ClassProfile>,
    /// Complete profiles checked.
    pub profiles_examined: u64,
}

/// Decides, for the constant assignment of `k` colors on `K_{a,b}`, whether
/// some profile is arborable and respects the size constraint: every class
/// at most `cap`, or with `exact_sizes` the equitable multiset (`n mod k`
/// classes of size `ceil(n/k)`, the rest `floor(n/k)`).
pub fn profile_oracle(
    a: usize,
    b: usize,
    k: usize,
    cap: usize,
    exact_sizes: bool,
) -> ProfileResult {
    assert!(k >= 1);
    let n = a + b;
    let targets: Option<Vec<usize>> =
        exact_sizes.then(|| (0..k).map(|i| n / k + usize::from(i < n % k)).collect());
    let mut profile = Vec::with_capacity(k);
    let mut examined = 0;
    let found = profile_rec(
        a,
        b,
        k,
        cap,
        targets.as_deref(),
        &mut profile,
        &mut examined,
    );
    ProfileResult {
        feasible: found,
        witness: found.then_some(profile),
        profiles_examined: examined,
    }
}

fn profile_rec(
    rem_a: usize,
    rem_b: usize,
    k: usize,
    cap: usize,
    targets: Option<&[usize]>,
    profile: &mut ClassProfile,
    examined: &mut u64,
) -> bool {
    let i = profile.len();
    if i == k {
        *examined += 1;
        return rem_a == 0 && rem_b == 0;
    }
    for x in 0..=rem_a {
        for y in 0..=rem_b {
            if x > 1 && y > 1 {
                continue;
            }
            let ok = match targets {
                Some(t) => x + y == t[i],
                None => x + y <= cap,
            };
            if !ok {
                continue;
            }
            profile.push((x, y));
            if profile_rec(rem_a - x, rem_b - y, k, cap, targets, profile, examined) {
                return true;
            }
            profile.pop();
        }
    }
    false
}

/// Realizes a profile on the given sides, coloring with ids `0..k`.
pub fn profile_coloring(
    profile: &ClassProfile,
    x: &[Vertex],
    y: &[Vertex],
    n: usize,
) -> PartialColoring {
    let mut f = PartialColoring::empty(n);
    let (mut xi, mut yi) = (x.iter(), y.iter());
    for (c, &(cx, cy)) in profile.iter().enumerate() {
        for _ in 0..cx {
            f.set(*xi.next().expect("profile fits X"), c as ColorId);
        }
        for _ in 0..cy {
            f.set(*yi.next().expect("profile fits Y"), c as ColorId);
        }
    }
    f
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwoHeavyOutcome {
    /// An arborable coloring of the whole graph extending the X coloring.
    Extended(PartialColoring),
    /// Y vertices whose lists meet the heavy pair; at least three of them.
    Obstruction(Vec<Vertex>),
}

/// Extends an X coloring in which exactly the two `heavy` colors appear at
/// least twice. Succeeds whenever at most two Y vertices list a heavy color:
/// those receive distinct colors and every other Y vertex avoids both heavy
/// colors.
pub fn extend_two_heavy(
    inst: &BipartiteInstance,
    f_on_x: &PartialColoring,
    heavy: (ColorId, ColorId),
) -> Result<TwoHeavyOutcome> {
    let (ha, hb) = heavy;
    if ha == hb {
        return param("heavy colors must be distinct");
    }
    if f_on_x.n() != inst.n() {
        return param("coloring size does not match the instance");
    }
    let mut uses: HashMap<ColorId, usize> = HashMap::new();
    for v in 0..inst.a {
        let c = f_on_x
            .get(v)
            .ok_or_else(|| Error::Parameter(format!("X vertex {v} is uncolored")))?;
        if !inst.lists.contains(v, c) {
            return param(format!("X vertex {v} colored {c} outside its list"));
        }
        *uses.entry(c).or_default() += 1;
    }
    if (inst.a..inst.n()).any(|v| f_on_x.get(v).is_some()) {
        return param("Y must be uncolored");
    }
    if uses.get(&ha).copied().unwrap_or(0) < 2 || uses.get(&hb).copied().unwrap_or(0) < 2 {
        return param("both heavy colors must be used at least twice on X");
    }
    if let Some((c, _)) = uses.iter().find(|&(&c, &u)| c != ha && c != hb && u > 1) {
        return param(format!(
            "color {c} is used more than once on X but is not heavy"
        ));
    }

    let heavy_listed: Vec<Vertex> = (inst.a..inst.n())
        .filter(|&v| inst.lists.contains(v, ha) || inst.lists.contains(v, hb))
        .collect();
    if heavy_listed.len() >= 3 {
        return Ok(TwoHeavyOutcome::Obstruction(heavy_listed));
    }

    let mut f = f_on_x.clone();
    for v in inst.a..inst.n() {
        if heavy_listed.contains(&v) {
            continue;
        }
        let c = inst
            .lists
            .list(v)
            .iter()
            .copied()
            .find(|&c| c != ha && c != hb);
        f.set(v, c.expect("list avoids both heavy colors"));
    }
    let mut taken = HashSet::new();
    for &v in &heavy_listed {
        let c = inst
            .lists
            .list(v)
            .iter()
            .copied()
            .find(|c| !taken.contains(c))
            .ok_or_else(|| {
                Error::Parameter(format!("list of vertex {v} too short for distinct colors"))
            })?;
        taken.insert(c);
        f.set(v, c);
    }
    if !bipartite_arborable_check(inst, &f) {
        return Err(Error::Internal(
            "two-heavy extension is not arborable".into(),
        ));
    }
    Ok(TwoHeavyOutcome::Extended(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    /// Reject instances with `a + b > (k+1) 2^k - 1`.
    Strict,
    /// Attempt the split anyway; fails if too many vertices stay uncolored.
    BestEffort,
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub coloring: PartialColoring,
    /// Expected number of uncolored vertices under a uniformly random split.
    pub initial_expectation: f64,
    /// Vertices left uncolored by the side split, before the distinct-color fixup.
    pub uncolored_after_split: usize,
    /// Set when the size bound did not hold.
    pub best_effort: bool,
}

/// Colors `K_{a,b}` by sending each palette color to side X or Y using the
/// method of conditional expectations, then coloring the few stragglers with
/// pairwise distinct colors.
///
/// A vertex stays uncolored iff every color of its list went to the other
/// side. Colors are decided in ascending order; each goes to the side giving
/// the smaller conditional expected number of uncolored vertices (ties go to
/// X). Expectations are kept exactly as integers scaled by `2^k`.
pub fn derandomized_split(
    inst: &BipartiteInstance,
    k: usize,
    mode: SplitMode,
) -> Result<SplitOutcome> {
    inst.lists.require_k_assignment(inst.n(), k)?;
    if k >= 62 {
        return param("list size too large for exact expectations");
    }
    let bound = (k + 1) * (1usize << k) - 1;
    let within = inst.n() <= bound;
    if !within && mode == SplitMode::Strict {
        return param(format!(
            "a + b = {} exceeds (k+1)2^k - 1 = {bound}",
            inst.n()
        ));
    }
    let palette = inst.lists.palette();
    let mut side_of: HashMap<ColorId, Side> = HashMap::new();

    let scaled_expectation = |side_of: &HashMap<ColorId, Side>| -> u64 {
        (0..inst.n())
            .map(|v| {
                let own = inst.side(v);
                let mut undecided = 0;
                for c in inst.lists.list(v) {
                    match side_of.get(c) {
                        Some(&s) if s == own => return 0,
                        Some(_) => {}
                        None => undecided += 1,
                    }
                }
                1u64 << (k - undecided)
            })
            .sum()
    };
    let initial = scaled_expectation(&side_of);
    for &c in &palette {
        side_of.insert(c, Side::X);
        let ex = scaled_expectation(&side_of);
        side_of.insert(c, Side::Y);
        let ey = scaled_expectation(&side_of);
        side_of.insert(c, if ex <= ey { Side::X } else { Side::Y });
    }

    let mut f = PartialColoring::empty(inst.n());
    let mut leftover = Vec::new();
    for v in 0..inst.n() {
        let own = inst.side(v);
        match inst.lists.list(v).iter().find(|c| side_of[*c] == own) {
            Some(&c) => f.set(v, c),
            None => leftover.push(v),
        }
    }
    let uncolored_after_split = leftover.len();
    let mut taken = HashSet::new();
    for &v in &leftover {
        let c = inst
            .lists
            .list(v)
            .iter()
            .copied()
            .find(|c| !taken.contains(c))
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "{uncolored_after_split} vertices left uncolored; cannot give them distinct colors"
                ))
            })?;
        taken.insert(c);
        f.set(v, c);
    }
    if !bipartite_arborable_check(inst, &f) {
        return Err(Error::Internal(
            "derandomized split is not arborable".into(),
        ));
    }
    Ok(SplitOutcome {
        coloring: f,
        initial_expectation: initial as f64 / (1u64 << k) as f64,
        uncolored_after_split,
        best_effort: !within,
    })
}

/// Complete search for an arborable coloring of `K_{a,b}` with classes of
/// size at most `cap`.
///
/// Vertices are visited X side first, each side grouped by identical lists.
/// Inside a group the chosen colors are non-decreasing, which is sound since
/// permuting same-side vertices with equal lists is a symmetry. A vertex
/// tries the colors most common on its own side first. Subtrees are cut
/// when some remaining vertex has no usable color or when the per-color
/// upper bounds on final class sizes cannot absorb all vertices.
pub fn solve_bipartite_exact(
    inst: &BipartiteInstance,
    cap: usize,
    budget: SearchBudget,
) -> Verdict {
    let mut search = BipartiteSearch::new(inst, cap, &budget);
    let outcome = search.run(0);
    let verdict = match outcome {
        Some(true) => Verdict::feasible(search.witness(), search.nodes),
        Some(false) => Verdict::infeasible(search.nodes),
        None => Verdict::unknown(search.nodes),
    };
    if let Some(w) = &verdict.witness {
        let r = verify_arborable_L_coloring(&inst.graph(), &inst.lists, w, true);
        assert!(
            r.total && r.list_respected && r.arborable && r.max_class_size <= cap,
            "bipartite search produced an invalid witness: {r:?}"
        );
    }
    verdict
}

struct BipartiteSearch<'a> {
    inst: &'a BipartiteInstance,
    cap: usize,
    palette: Vec<ColorId>,
    order: Vec<Vertex>,
    /// `same_group[i]`: position `i` shares side and list with position `i-1`.
    same_group: Vec<bool>,
    /// Dense color indices per position, in trial order.
    candidates: Vec<Vec<usize>>,
    /// Dense color indices per position, sorted.
    domain: Vec<Vec<usize>>,
    xs: Vec<usize>,
    ys: Vec<usize>,
    rem_x: Vec<usize>,
    rem_y: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl<'a> BipartiteSearch<'a> {
    fn new(inst: &'a BipartiteInstance, cap: usize, budget: &SearchBudget) -> Self {
        let palette = inst.lists.palette();
        let dense = |c: &ColorId| palette.binary_search(c).expect("palette color");
        let mut xs: Vec<Vertex> = (0..inst.a).collect();
        let mut ys: Vec<Vertex> = (inst.a..inst.n()).collect();
        xs.sort_by(|&u, &v| inst.lists.list(u).cmp(inst.lists.list(v)).then(u.cmp(&v)));
        ys.sort_by(|&u, &v| inst.lists.list(u).cmp(inst.lists.list(v)).then(u.cmp(&v)));
        let order: Vec<Vertex> = xs.into_iter().chain(ys).collect();
        let same_group = (0..order.len())
            .map(|i| {
                i > 0
                    && inst.side(order[i]) == inst.side(order[i - 1])
                    && inst.lists.list(order[i]) == inst.lists.list(order[i - 1])
            })
            .collect();
        let colors = palette.len();
        let mut eta_x = vec![0usize; colors];
        let mut eta_y = vec![0usize; colors];
        for v in 0..inst.n() {
            for c in inst.lists.list(v) {
                match inst.side(v) {
                    Side::X => eta_x[dense(c)] += 1,
                    Side::Y => eta_y[dense(c)] += 1,
                }
            }
        }
        let domain: Vec<Vec<usize>> = order
            .iter()
            .map(|&v| inst.lists.list(v).iter().map(dense).collect())
            .collect();
        let candidates = order
            .iter()
            .zip(&domain)
            .map(|(&v, dom)| {
                let eta = if inst.side(v) == Side::X {
                    &eta_x
                } else {
                    &eta_y
                };
                let mut c = dom.clone();
                c.sort_by_key(|&c| (std::cmp::Reverse(eta[c]), c));
                c
            })
            .collect();
        BipartiteSearch {
            inst,
            cap,
            palette,
            order,
            same_group,
            candidates,
            domain,
            xs: vec![0; colors],
            ys: vec![0; colors],
            rem_x: eta_x,
            rem_y: eta_y,
            chosen: Vec::new(),
            nodes: 0,
            node_limit: budget.node_limit,
            deadline: budget.deadline(),
        }
    }

    fn fits(&self, side: Side, c: usize) -> bool {
        let (x, y) = (self.xs[c], self.ys[c]);
        if x + y >= self.cap {
            return false;
        }
        match side {
            Side::X => !(x + 1 >= 2 && y >= 2),
            Side::Y => !(x >= 2 && y + 1 >= 2),
        }
    }

    /// Largest final size color `c` can still reach.
    fn max_final(&self, c: usize) -> usize {
        let (x, y, rx, ry) = (self.xs[c], self.ys[c], self.rem_x[c], self.rem_y[c]);
        let mut best = 0;
        if y <= 1 {
            best = best.max(x + rx + (y + ry).min(1).max(y));
        }
        if x <= 1 {
            best = best.max((x + rx).min(1).max(x) + y + ry);
        }
        best.min(self.cap)
    }

    fn prune(&self, pos: usize) -> bool {
        let total: usize = (0..self.palette.len()).map(|c| self.max_final(c)).sum();
        if total < self.inst.n() {
            return true;
        }
        self.order[pos..]
            .iter()
            .zip(&self.domain[pos..])
            .any(|(&v, dom)| {
                let side = self.inst.side(v);
                !dom.iter().any(|&c| self.fits(side, c))
            })
    }

    fn budget_exhausted(&mut self) -> bool {
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            return true;
        }
        self.nodes % 1024 == 1 && self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn run(&mut self, pos: usize) -> Option<bool> {
        if self.budget_exhausted() {
            return None;
        }
        if pos == self.order.len() {
            return Some(true);
        }
        if self.prune(pos) {
            return Some(false);
        }
        let v = self.order[pos];
        let side = self.inst.side(v);
        let floor = if self.same_group[pos] {
            self.chosen[pos - 1]
        } else {
            0
        };
        for c in self.candidates[pos].clone() {
            if c < floor || !self.fits(side, c) {
                continue;
            }
            for &d in &self.domain[pos] {
                match side {
                    Side::X => self.rem_x[d] -= 1,
                    Side::Y => self.rem_y[d] -= 1,
                }
            }
            match side {
                Side::X => self.xs[c] += 1,
                Side::Y => self.ys[c] += 1,
            }
            self.chosen.push(c);
            let r = self.run(pos + 1);
            if r != Some(false) {
                return r;
            }
            self.chosen.pop();
            match side {
                Side::X => self.xs[c] -= 1,
                Side::Y => self.ys[c] -= 1,
            }
            for &d in &self.domain[pos] {
                match side {
                    Side::X => self.rem_x[d] += 1,
                    Side::Y => self.rem_y[d] += 1,
                }
            }
        }
        Some(false)
    }

    fn witness(&self) -> PartialColoring {
        let mut f = PartialColoring::empty(self.inst.n());
        for (&v, &c) in self.order.iter().zip(&self.chosen) {
            f.set(v, self.palette[c]);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::equity_cap;
    use crate::oracle::{exact_equitable_arborable, Status};
    use crate::random::random_assignment;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(a: usize, b: usize, lists: Vec<Vec<ColorId>>) -> BipartiteInstance {
        BipartiteInstance::new(a, b, ListAssignment::new(lists)).unwrap()
    }

    #[test]
    fn arborable_check_examples() {
        let i = BipartiteInstance::new(2, 2, ListAssignment::constant(4, &[1, 2])).unwrap();
        assert!(bipartite_arborable_check(
            &i,
            &PartialColoring::from_total(&[1, 2, 1, 2])
        ));
        assert!(!bipartite_arborable_check(
            &i,
            &PartialColoring::from_total(&[1, 1, 1, 1])
        ));
        let i = BipartiteInstance::new(3, 3, ListAssignment::constant(6, &[1, 2])).unwrap();
        assert!(bipartite_arborable_check(
            &i,
            &PartialColoring::from_total(&[1, 1, 1, 1, 2, 2])
        ));
    }

    #[test]
    fn arborable_check_matches_forest_test() {
        for a in 1..=5 {
            for b in 1..=5 {
                let n = a + b;
                if n > 8 {
                    continue;
                }
                let i = BipartiteInstance::new(a, b, ListAssignment::constant_k(n, 3)).unwrap();
                let g = i.graph();
                for code in 0..3usize.pow(n as u32) {
                    let colors: Vec<ColorId> = (0..n)
                        .map(|v| ((code / 3usize.pow(v as u32)) % 3) as ColorId)
                        .collect();
                    let f = PartialColoring::from_total(&colors);
                    let forest = f
                        .classes()
                        .values()
                        .all(|cl| g.induced_subgraph(cl).unwrap().graph.is_forest());
                    assert_eq!(bipartite_arborable_check(&i, &f), forest);
                }
            }
        }
    }

    #[test]
    fn profile_oracle_examples() {
        assert!(!profile_oracle(11, 17, 4, 7, true).feasible);
        assert!(!profile_oracle(11, 17, 4, 7, false).feasible);
        assert!(!profile_oracle(4, 15, 3, 7, true).feasible);
        let r = profile_oracle(9, 9, 2, 9, true);
        assert!(r.feasible);
        let mut w = r.witness.unwrap();
        w.sort_unstable();
        assert_eq!(w, vec![(0, 9), (9, 0)]);
        assert!(!profile_oracle(9, 9, 3, 6, true).feasible);
    }

    #[test]
    fn profile_oracle_agrees_with_exact_search() {
        for a in 1..=6 {
            for b in a..=(12 - a) {
                for k in 1..=3 {
                    let n = a + b;
                    let cap = equity_cap(n, k);
                    let i = BipartiteInstance::new(a, b, ListAssignment::constant_k(n, k)).unwrap();
                    let exact = solve_bipartite_exact(&i, cap, SearchBudget::unlimited());
                    let prof = profile_oracle(a, b, k, cap, false);
                    assert_eq!(exact.is_feasible(), prof.feasible, "K_{{{a},{b}}} k={k}");
                }
            }
        }
    }

    #[test]
    fn exact_solver_matches_generic_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = rng.gen_range(1..=4);
            let b = rng.gen_range(1..=5);
            let k = rng.gen_range(1..=3);
            let lists = random_assignment(a + b, k, k + rng.gen_range(0..=2), &mut rng);
            let i = BipartiteInstance::new(a, b, lists.clone()).unwrap();
            let cap = rng.gen_range(1..=a + b);
            let fast = solve_bipartite_exact(&i, cap, SearchBudget::unlimited());
            let generic =
                exact_equitable_arborable(&i.graph(), &lists, cap, SearchBudget::unlimited());
            assert_eq!(fast.status, generic.status);
        }
    }

    #[test]
    fn constant_four_lists_on_k_11_17_refuted() {
        let i =
            BipartiteInstance::new(11, 17, ListAssignment::constant(28, &[1, 2, 3, 4])).unwrap();
        let v = solve_bipartite_exact(&i, 7, SearchBudget::unlimited());
        assert_eq!(v.status, Status::Infeasible);
    }

    #[test]
    fn two_heavy_without_heavy_listed_y() {
        let i = inst(
            4,
            3,
            vec![
                vec![1, 2],
                vec![1, 2],
                vec![1, 2],
                vec![1, 2],
                vec![3, 4],
                vec![3, 5],
                vec![4, 5],
            ],
        );
        let f = PartialColoring::from_options(vec![
            Some(1),
            Some(1),
            Some(2),
            Some(2),
            None,
            None,
            None,
        ]);
        match extend_two_heavy(&i, &f, (1, 2)).unwrap() {
            TwoHeavyOutcome::Extended(h) => assert!(bipartite_arborable_check(&i, &h)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_heavy_with_two_heavy_listed_y() {
        let i = inst(
            4,
            3,
            vec![
                vec![1, 2],
                vec![1, 2],
                vec![1, 2],
                vec![1, 2],
                vec![1, 2],
                vec![1, 5],
                vec![4, 5],
            ],
        );
        let f = PartialColoring::from_options(vec![
            Some(1),
            Some(1),
            Some(2),
            Some(2),
            None,
            None,
            None,
        ]);
        let TwoHeavyOutcome::Extended(h) = extend_two_heavy(&i, &f, (1, 2)).unwrap() else {
            panic!("expected an extension");
        };
        assert_ne!(h.get(4), h.get(5));
        assert!(bipartite_arborable_check(&i, &h));
    }

    #[test]
    fn two_heavy_precondition_errors() {
        let i = inst(3, 1, vec![vec![1, 2], vec![1, 2], vec![1, 2], vec![1, 2]]);
        let f = PartialColoring::from_options(vec![Some(1), Some(1), Some(2), None]);
        assert!(matches!(
            extend_two_heavy(&i, &f, (1, 2)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn derandomized_split_examples() {
        assert_eq!((2 + 1) * (1 << 2) - 1, 11);
        let i = BipartiteInstance::new(4, 7, ListAssignment::constant(11, &[1, 2])).unwrap();
        let out = derandomized_split(&i, 2, SplitMode::Strict).unwrap();
        assert_eq!(out.uncolored_after_split, 0);
        assert!(bipartite_arborable_check(&i, &out.coloring));

        let i = BipartiteInstance::new(
            5,
            6,
            ListAssignment::new(vec![
                vec![1, 2],
                vec![3, 4],
                vec![1, 3],
                vec![2, 4],
                vec![1, 4],
                vec![1, 2],
                vec![3, 4],
                vec![1, 3],
                vec![2, 4],
                vec![2, 3],
                vec![1, 4],
            ]),
        )
        .unwrap();
        let out = derandomized_split(&i, 2, SplitMode::Strict).unwrap();
        assert_eq!(out.initial_expectation, 11.0 / 4.0);
        assert!(out.uncolored_after_split <= 2);

        let big = BipartiteInstance::new(6, 6, ListAssignment::constant(12, &[1, 2])).unwrap();
        assert!(derandomized_split(&big, 2, SplitMode::Strict).is_err());
        assert!(
            derandomized_split(&big, 2, SplitMode::BestEffort)
                .unwrap()
                .best_effort
        );
    }

    #[test]
    fn obstruction_from_structured_k_7_11_pattern() {
        // X: four lists {1,4} and three {2,3}; Y: the tight pattern that forces |Y| >= 12 minus one.
        let mut lists = vec![vec![1, 4]; 4];
        lists.extend(vec![vec![2, 3]; 3]);
        lists.extend(vec![vec![1, 2]; 3]);
        lists.extend(vec![vec![1, 3]; 3]);
        lists.extend(vec![vec![4, 2]; 3]);
        lists.extend(vec![vec![4, 3]; 2]);
        let i = inst(7, 11, lists);
        let mut f = PartialColoring::empty(18);
        for v in 0..4 {
            f.set(v, 1);
        }
        for v in 4..7 {
            f.set(v, 2);
        }
        let TwoHeavyOutcome::Obstruction(w) = extend_two_heavy(&i, &f, (1, 2)).unwrap() else {
            panic!("expected obstruction");
        };
        assert!(w.len() >= 3);
        // No arborable extension of this X coloring exists: pin X to singletons.
        let mut pinned = i.lists.clone();
        for v in 0..7 {
            pinned.set_list(v, vec![f.get(v).unwrap()]);
        }
        let v = exact_equitable_arborable(&i.graph(), &pinned, 18, SearchBudget::unlimited());
        assert_eq!(v.status, Status::Infeasible);
    }
}
