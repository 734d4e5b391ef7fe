//! Reproduction harness: each claim replays a fixed, seeded experiment and
//! reports expected against observed outcomes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::{
    bipartite_arborable_check, derandomized_split, profile_oracle, solve_bipartite_exact,
    BipartiteInstance, SplitMode,
};
use crate::coloring::{
    equity_cap, verify_arborable_L_coloring, verify_certificate, ColorId, ListAssignment,
    PartialColoring,
};
use crate::error::{Error, Result};
use crate::extension::{compute_d_lists, find_peel_coloring, merge_colorings, PeelMode};
use crate::fixtures::{connected_four_regular, k11_17_patterns, k7_11_patterns};
use crate::graph::{FamilySpec, Graph, Vertex};
use crate::oracle::{
    decide_equitable_vertex_arborable, exact_equitable_arborable, SearchBudget, Status,
};
use crate::random::{random_assignment, random_bounded_degree, random_two_degenerate};
use crate::solvers::{
    solve_2degenerate, solve_complete_minus_edge, solve_cycle_power, solve_path_power,
    solve_path_power_pminus1, solve_regular_small, SolveOutcome,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ReproStatus {
    Pass,
    Fail,
    /// The search budget ran out before a verdict.
    Skip,
}

impl ReproStatus {
    pub fn label(self) -> &'static str {
        match self {
            ReproStatus::Pass => "PASS",
            ReproStatus::Fail => "FAIL",
            ReproStatus::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReproLine {
    pub claim_id: String,
    pub reference: String,
    pub command: String,
    pub expected: String,
    pub observed: String,
    pub status: ReproStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct ReproConfig {
    pub budget: SearchBudget,
    pub seed: u64,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            budget: SearchBudget::unlimited(),
            seed: 0,
        }
    }
}

pub struct Claim {
    pub id: &'static str,
    pub reference: &'static str,
    run: fn(&Claim, &ReproConfig) -> Vec<ReproLine>,
}

impl Claim {
    pub fn run(&self, cfg: &ReproConfig) -> Vec<ReproLine> {
        (self.run)(self, cfg)
    }

    fn line(
        &self,
        command: impl Into<String>,
        expected: impl Into<String>,
        observed: impl Into<String>,
        unknown: bool,
    ) -> ReproLine {
        let (expected, observed) = (expected.into(), observed.into());
        let status = if expected == observed {
            ReproStatus::Pass
        } else if unknown {
            ReproStatus::Skip
        } else {
            ReproStatus::Fail
        };
        ReproLine {
            claim_id: self.id.to_string(),
            reference: self.reference.to_string(),
            command: command.into(),
            expected,
            observed,
            status,
        }
    }

    fn verdict_line(
        &self,
        command: impl Into<String>,
        expected: Status,
        observed: Status,
    ) -> ReproLine {
        self.line(
            command,
            format!("{expected:?}"),
            format!("{observed:?}"),
            observed == Status::Unknown,
        )
    }

    fn suite_line(&self, command: impl Into<String>, tally: Tally) -> ReproLine {
        let total = tally.total;
        let mut observed = format!("{}/{total} pass", tally.passed);
        if let Some(detail) = &tally.first_failure {
            observed.push_str(&format!(" (first failure: {detail})"));
        }
        self.line(
            command,
            format!("{total}/{total} pass"),
            observed,
            tally.unknown > 0 && tally.first_failure.is_none(),
        )
    }
}

/// Outcome of one sample in a seeded suite.
pub enum Sample {
    Pass,
    Fail(String),
    Unknown,
}

impl From<Result<()>> for Sample {
    fn from(r: Result<()>) -> Self {
        match r {
            Ok(()) => Sample::Pass,
            Err(Error::Budget) => Sample::Unknown,
            Err(e) => Sample::Fail(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub total: usize,
    pub passed: usize,
    pub unknown: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

/// Runs `count` samples in parallel, sample `i` with an RNG seeded from
/// `seed + i`. The tally does not depend on scheduling.
pub fn run_suite<F>(count: usize, seed: u64, sample: F) -> Tally
where
    F: Fn(usize, &mut ChaCha8Rng) -> Sample + Sync,
{
    let results: Vec<Sample> = (0..count)
        .into_par_iter()
        .map(|i| {
            sample(
                i,
                &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64)),
            )
        })
        .collect();
    let mut tally = Tally {
        total: count,
        ..Default::default()
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Sample::Pass => tally.passed += 1,
            Sample::Unknown => tally.unknown += 1,
            Sample::Fail(msg) => {
                tally
                    .first_failure
                    .get_or_insert_with(|| format!("sample {i}: {msg}"));
            }
        }
    }
    tally
}

fn check(out: Result<SolveOutcome>, g: &Graph, lists: &ListAssignment, k: usize) -> Result<()> {
    let out = out?;
    if verify_certificate(g, lists, k, &out.coloring).passed() {
        Ok(())
    } else {
        Err(Error::Internal("solver output failed verification".into()))
    }
}

fn bipartite_sample(inst: &BipartiteInstance, cap: usize, budget: SearchBudget) -> Sample {
    let v = solve_bipartite_exact(inst, cap, budget);
    match (v.status, &v.witness) {
        (Status::Feasible, Some(w)) => {
            let report = verify_arborable_L_coloring(&inst.graph(), &inst.lists, w, true);
            if report.total
                && report.list_respected
                && report.arborable
                && w.max_class_size() <= cap
            {
                Sample::Pass
            } else {
                Sample::Fail("witness failed verification".into())
            }
        }
        (Status::Feasible, None) => Sample::Fail("feasible verdict without a witness".into()),
        (Status::Infeasible, _) => Sample::Fail("no coloring within the cap".into()),
        (Status::Unknown, _) => Sample::Unknown,
    }
}

fn kab(a: usize, b: usize) -> Graph {
    Graph::build(&FamilySpec::CompleteBipartite { a, b }).expect("valid sides")
}

/// All registered claims in table order.
pub fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "sec1.2",
            reference: "K_{9,9} is equitably vertex 2-arborable but not equitably vertex 3-arborable",
            run: claim_vertex_k99,
        },
        Claim {
            id: "prop2.2",
            reference: "K_{4,15} is not equitably vertex 3-arborable yet is equitably 3-list arborable",
            run: claim_k4_15,
        },
        Claim {
            id: "prop2.4",
            reference: "K_{a,b} with a+b <= (k+1)2^k - 1 is k-list arborable",
            run: claim_split,
        },
        Claim {
            id: "lemma2.6",
            reference: "every 2-assignment of K_{7,11} has an arborable coloring with classes of size <= 10",
            run: claim_k7_11,
        },
        Claim {
            id: "thm2.7",
            reference: "K_{11,17} is equitably 3-list arborable but not equitably 4-list arborable",
            run: claim_k11_17,
        },
        Claim {
            id: "thm1.4",
            reference: "P_n^p is equitably k-list arborable for k >= p",
            run: claim_path_power,
        },
        Claim {
            id: "prop1.6",
            reference: "P_n^p is equitably (p-1)-list arborable for p >= 3",
            run: claim_pminus1,
        },
        Claim {
            id: "thm1.8",
            reference: "C_n^p is equitably k-list arborable for k >= p+1",
            run: claim_cycle_power,
        },
        Claim {
            id: "thm3.4",
            reference: "2-degenerate graphs with max degree >= 3 are equitably k-list arborable for k >= ceil(max degree/2)",
            run: claim_two_degenerate,
        },
        Claim {
            id: "prop3.1",
            reference: "K_n - e is equitably k-list arborable for k >= ceil((n-1)/2); K_5 is not equitably 2-list arborable",
            run: claim_complete_minus_edge,
        },
        Claim {
            id: "prop3.2",
            reference: "2l-regular graphs on 2l+2 vertices are equitably k-list arborable for k >= l",
            run: claim_regular_small,
        },
        Claim {
            id: "thm3.5",
            reference: "max degree 4 with at most three degree-4 vertices, or small connected 4-regular: equitably 2-list arborable",
            run: claim_degree_four,
        },
        Claim {
            id: "lemma1.5",
            reference: "peel colorings meeting the merge hypotheses extend equitable arborable colorings",
            run: claim_extension,
        },
    ]
}

/// Runs the selected claims (all when `subset` is `None`) on a pool of
/// `jobs` threads; lines come back in table order.
pub fn reproduce(subset: Option<&str>, cfg: &ReproConfig, jobs: usize) -> Result<Vec<ReproLine>> {
    let selected: Vec<Claim> = claims()
        .into_iter()
        .filter(|c| subset.is_none_or(|s| s == c.id))
        .collect();
    if selected.is_empty() {
        let known: Vec<&str> = claims().iter().map(|c| c.id).collect();
        return Err(Error::Parameter(format!(
            "unknown claim '{}'; known: {}",
            subset.unwrap_or_default(),
            known.join(", ")
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let lines = pool.install(|| selected.par_iter().map(|c| c.run(cfg)).collect::<Vec<_>>());
    Ok(lines.into_iter().flatten().collect())
}

/// Fixed-width text table.
pub fn format_table(lines: &[ReproLine]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&format!(
            "{:<4} {:<9} expected {:<22} observed {:<22} | {}\n",
            l.status.label(),
            l.claim_id,
            l.expected,
            l.observed,
            l.command
        ));
    }
    out
}

fn claim_vertex_k99(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let g = kab(9, 9);
    [(2, Status::Feasible), (3, Status::Infeasible)]
        .into_iter()
        .map(|(k, expected)| {
            let v = decide_equitable_vertex_arborable(&g, k, cfg.budget);
            c.verdict_line(
                format!("decide --family complete-bipartite --a 9 --b 9 --vertex --k {k}"),
                expected,
                v.status,
            )
        })
        .collect()
}

fn claim_k4_15(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let v = decide_equitable_vertex_arborable(&kab(4, 15), 3, cfg.budget);
    let tally = run_suite(500, cfg.seed, |_, rng| {
        let inst =
            BipartiteInstance::new(4, 15, random_assignment(19, 3, 6, rng)).expect("sizes match");
        bipartite_sample(&inst, 7, cfg.budget)
    });
    vec![
        c.verdict_line(
            "decide --family complete-bipartite --a 4 --b 15 --vertex --k 3",
            Status::Infeasible,
            v.status,
        ),
        c.suite_line(
            format!("solve --family complete-bipartite --a 4 --b 15 --k 3 --random --universe 6 --seed {}..+500", cfg.seed),
            tally,
        ),
    ]
}

/// Checks one derandomized split: at most `k` stragglers and an arborable result.
pub fn split_sample(a: usize, b: usize, k: usize, rng: &mut ChaCha8Rng) -> Sample {
    let inst =
        BipartiteInstance::new(a, b, random_assignment(a + b, k, 2 * k, rng)).expect("sizes match");
    match derandomized_split(&inst, k, SplitMode::Strict) {
        Ok(out)
            if out.uncolored_after_split <= k
                && bipartite_arborable_check(&inst, &out.coloring) =>
        {
            if inst
                .lists
                .lists()
                .iter()
                .enumerate()
                .all(|(v, l)| l.contains(&out.coloring.get(v).unwrap()))
            {
                Sample::Pass
            } else {
                Sample::Fail("color outside list".into())
            }
        }
        Ok(out) => Sample::Fail(format!(
            "{} vertices left uncolored",
            out.uncolored_after_split
        )),
        Err(e) => Sample::Fail(e.to_string()),
    }
}

fn claim_split(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    [2usize, 3]
        .into_iter()
        .map(|k| {
            let total = (k + 1) * (1 << k) - 1;
            assert!(total >> k <= k, "expected stragglers exceed k");
            let pairs: Vec<(usize, usize)> = (1..=total / 2).map(|a| (a, total - a)).collect();
            let tally = run_suite(pairs.len() * 100, cfg.seed, |i, rng| {
                let (a, b) = pairs[i / 100];
                split_sample(a, b, k, rng)
            });
            c.suite_line(
                format!(
                    "split --k {k} --a 1..{} --b {total}-a --random --seed {}..",
                    total / 2,
                    cfg.seed
                ),
                tally,
            )
        })
        .collect()
}

fn claim_k7_11(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let random = run_suite(500, cfg.seed, |_, rng| {
        let inst =
            BipartiteInstance::new(7, 11, random_assignment(18, 2, 4, rng)).expect("sizes match");
        bipartite_sample(&inst, 10, cfg.budget)
    });
    let patterns = k7_11_patterns();
    let structured = run_suite(patterns.len(), cfg.seed, |i, _| {
        let f = &patterns[i];
        bipartite_sample(
            &BipartiteInstance::new(f.a, f.b, f.lists.clone()).expect("sizes match"),
            10,
            cfg.budget,
        )
    });
    vec![
        c.suite_line(format!("solve --family complete-bipartite --a 7 --b 11 --cap 10 --random --k 2 --universe 4 --seed {}..+500", cfg.seed), random),
        c.suite_line("solve --family complete-bipartite --a 7 --b 11 --cap 10 --lists <structured fixtures>", structured),
    ]
}

fn claim_k11_17(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let patterns = k11_17_patterns();
    let count = 500 + patterns.len();
    let tally = run_suite(count, cfg.seed, |i, rng| {
        let lists = match patterns.get(i.wrapping_sub(500)) {
            Some(f) if i >= 500 => f.lists.clone(),
            _ => random_assignment(28, 3, 6, rng),
        };
        bipartite_sample(
            &BipartiteInstance::new(11, 17, lists).expect("sizes match"),
            10,
            cfg.budget,
        )
    });
    let positive = if tally.all_passed() {
        "Feasible@k=3".to_string()
    } else if let Some(f) = &tally.first_failure {
        format!("Infeasible@k=3 ({f})")
    } else {
        "Unknown@k=3".to_string()
    };
    let profiles = profile_oracle(11, 17, 4, 7, false);
    let constant = BipartiteInstance::new(11, 17, ListAssignment::constant(28, &[1, 2, 3, 4]))
        .expect("sizes match");
    let search = solve_bipartite_exact(&constant, 7, cfg.budget);
    let negative = match (profiles.feasible, search.status) {
        (false, Status::Infeasible) => "Infeasible@k=4".to_string(),
        (_, Status::Unknown) => "Unknown@k=4".to_string(),
        _ => "Feasible@k=4".to_string(),
    };
    vec![
        c.line(
            format!("solve --family complete-bipartite --a 11 --b 17 --k 3 --random --universe 6 --seed {}..+500 (+4 structured)", cfg.seed),
            "Feasible@k=3",
            positive,
            tally.unknown > 0,
        ),
        c.line(
            "decide --family complete-bipartite --a 11 --b 17 --k 4 --constant 1,2,3,4",
            "Infeasible@k=4",
            negative,
            search.status == Status::Unknown,
        ),
    ]
}

/// `(n, p, k)` triples of the path power suite.
pub fn path_power_grid() -> Vec<(usize, usize, usize)> {
    let mut grid = Vec::new();
    for p in 1..=4 {
        for k in p..=p + 1 {
            for n in 1..=40 {
                grid.push((n, p, k));
            }
        }
    }
    grid
}

/// Solver plus verifiers; for `n <= 8` the exact oracle must agree.
fn path_power_sample(
    out: Result<SolveOutcome>,
    g: &Graph,
    lists: &ListAssignment,
    k: usize,
    budget: SearchBudget,
) -> Sample {
    if let Err(e) = check(out, g, lists, k) {
        return Sample::Fail(e.to_string());
    }
    if g.n() <= 8 {
        return oracle_sample(g, lists, k, budget);
    }
    Sample::Pass
}

fn claim_path_power(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let grid = path_power_grid();
    let tally = run_suite(grid.len() * 50, cfg.seed, |i, rng| {
        let (n, p, k) = grid[i / 50];
        let lists = random_assignment(n, k, 2 * k, rng);
        let g = Graph::build(&FamilySpec::PathPower { n, p }).expect("valid");
        path_power_sample(solve_path_power(n, p, k, &lists), &g, &lists, k, cfg.budget)
    });
    vec![c.suite_line(
        "solve --family path-power --n 1..40 --p 1..4 --k p..p+1 --random (50 seeds each)",
        tally,
    )]
}

fn claim_pminus1(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let grid: Vec<(usize, usize)> = (3..=4)
        .flat_map(|p| (1..=40).map(move |n| (n, p)))
        .collect();
    let tally = run_suite(grid.len() * 50, cfg.seed, |i, rng| {
        let (n, p) = grid[i / 50];
        let lists = random_assignment(n, p - 1, 2 * (p - 1), rng);
        let g = Graph::build(&FamilySpec::PathPower { n, p }).expect("valid");
        path_power_sample(
            solve_path_power_pminus1(n, p, &lists),
            &g,
            &lists,
            p - 1,
            cfg.budget,
        )
    });
    vec![c.suite_line(
        "solve --family path-power --n 1..40 --p 3..4 --k p-1 --random (50 seeds each)",
        tally,
    )]
}

fn claim_cycle_power(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let grid: Vec<(usize, usize)> = (2..=3)
        .flat_map(|p| (2 * p + 2..=30).map(move |n| (n, p)))
        .collect();
    let tally = run_suite(grid.len() * 50, cfg.seed, |i, rng| {
        let (n, p) = grid[i / 50];
        let k = p + 1;
        let lists = random_assignment(n, k, 2 * k, rng);
        let g = Graph::build(&FamilySpec::CyclePower { n, p }).expect("valid");
        check(solve_cycle_power(n, p, k, &lists), &g, &lists, k).into()
    });
    vec![c.suite_line(
        "solve --family cycle-power --n 2p+2..30 --p 2..3 --k p+1 --random (50 seeds each)",
        tally,
    )]
}

/// A random 2-degenerate graph on at most 25 vertices with maximum degree
/// at least 3.
pub fn random_two_degenerate_instance(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let n = rng.gen_range(5..=25);
        let g = random_two_degenerate(n, rng);
        if g.max_degree() >= 3 {
            return g;
        }
    }
}

fn claim_two_degenerate(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let tally = run_suite(200, cfg.seed, |_, rng| {
        let g = random_two_degenerate_instance(rng);
        let k = g.max_degree().div_ceil(2);
        let lists = random_assignment(g.n(), k, 2 * k, rng);
        check(solve_2degenerate(&g, k, &lists), &g, &lists, k).into()
    });
    vec![c.suite_line(
        "solve --strategy two-degenerate (200 random graphs, n <= 25)",
        tally,
    )]
}

fn claim_complete_minus_edge(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let lists = ListAssignment::constant(5, &[1, 2]);
    let k5e = Graph::build(&FamilySpec::CompleteMinusEdge { n: 5 }).expect("valid");
    let k5 = Graph::build(&FamilySpec::Complete { n: 5 }).expect("valid");
    let with_edge_removed = exact_equitable_arborable(&k5e, &lists, 3, cfg.budget);
    let complete = exact_equitable_arborable(&k5, &lists, 3, cfg.budget);
    let sizes = [3usize, 5, 7, 9, 11];
    let tally = run_suite(sizes.len() * 100, cfg.seed, |i, rng| {
        let n = sizes[i / 100];
        let k = (n - 1) / 2;
        let lists = random_assignment(n, k, 2 * k, rng);
        let g = Graph::build(&FamilySpec::CompleteMinusEdge { n }).expect("valid");
        check(solve_complete_minus_edge(n, k, &lists), &g, &lists, k).into()
    });
    vec![
        c.verdict_line("decide --family complete-minus-edge --n 5 --k 2 --constant 1,2", Status::Feasible, with_edge_removed.status),
        c.verdict_line("decide --family complete --n 5 --k 2 --constant 1,2", Status::Infeasible, complete.status),
        c.suite_line("solve --family complete-minus-edge --n 3..11 odd --k (n-1)/2 --random (100 seeds each)", tally),
    ]
}

fn claim_regular_small(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let graphs = connected_four_regular(6);
    let tally = run_suite(graphs.len() * 100, cfg.seed, |i, rng| {
        let g = &graphs[i / 100];
        let lists = random_assignment(6, 2, 4, rng);
        match solve_regular_small(g, 2, &lists) {
            Ok(out) if out.coloring.max_class_size() <= 3 => check(Ok(out), g, &lists, 2).into(),
            Ok(out) => Sample::Fail(format!("class of size {}", out.coloring.max_class_size())),
            Err(e) => Sample::Fail(e.to_string()),
        }
    });
    vec![c.suite_line("solve --family cycle-power --n 6 --p 2 --k 2 --strategy regular-small --random (100 seeds)", tally)]
}

fn oracle_sample(g: &Graph, lists: &ListAssignment, k: usize, budget: SearchBudget) -> Sample {
    let v = exact_equitable_arborable(g, lists, equity_cap(g.n().max(1), k), budget);
    match v.status {
        Status::Feasible => Sample::Pass,
        Status::Infeasible => Sample::Fail(format!("refuted on {} vertices", g.n())),
        Status::Unknown => Sample::Unknown,
    }
}

/// A graph on at most 14 vertices with maximum degree at most 4 and at most
/// three vertices of degree 4.
pub fn random_degree_four_instance(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(5..=14);
    let density = rng.gen_range(0.3..1.0);
    random_bounded_degree(n, 4, 3, density, rng)
}

fn claim_degree_four(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let sparse = run_suite(100 * 20, cfg.seed, |i, _| {
        let mut graph_rng = ChaCha8Rng::seed_from_u64(
            cfg.seed
                .wrapping_add((i / 20) as u64)
                .wrapping_mul(0x9E37_79B9),
        );
        let g = random_degree_four_instance(&mut graph_rng);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        oracle_sample(&g, &random_assignment(g.n(), 2, 4, &mut rng), 2, cfg.budget)
    });
    let regular: Vec<Graph> = (6..=8).flat_map(connected_four_regular).collect();
    let dense = run_suite(regular.len() * 20, cfg.seed, |i, rng| {
        let g = &regular[i / 20];
        oracle_sample(g, &random_assignment(g.n(), 2, 4, rng), 2, cfg.budget)
    });
    vec![
        c.suite_line("decide --k 2 --random (100 graphs with max degree 4 and <= 3 degree-4 vertices, 20 assignments each)", sparse),
        c.suite_line("decide --k 2 --random (all connected 4-regular graphs on 6..8 vertices, 20 assignments each)", dense),
    ]
}

/// A random extension instance: graph, peel set, lists, an equitable
/// arborable coloring of the graph minus the peel, and `m`.
#[derive(Clone, Debug)]
pub struct ExtensionInstance {
    pub graph: Graph,
    pub peel: Vec<Vertex>,
    pub lists: ListAssignment,
    pub base: PartialColoring,
    pub m: usize,
    pub k: usize,
}

/// Samples `n <= 12`, `k <= 3`, `m in {1, 2}` with `|S| = m k <= 6`, a
/// random graph and lists, and a base coloring found by exact search.
pub fn random_extension_instance(rng: &mut ChaCha8Rng) -> ExtensionInstance {
    loop {
        let k = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=2);
        let s = m * k;
        let n = rng.gen_range(s.max(2)..=12);
        let density = rng.gen_range(0.1..0.6);
        let edges: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let graph = Graph::from_edges(n, &edges).expect("simple");
        let lists = random_assignment(n, k, k + 2, rng);
        let mut order: Vec<Vertex> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
        let peel: Vec<Vertex> = order[..s].to_vec();
        let rest = graph.remove_vertices(&peel).expect("in range");
        let sub_lists = lists.restrict(&rest.original);
        let cap = equity_cap(rest.graph.n().max(1), k);
        let v = exact_equitable_arborable(&rest.graph, &sub_lists, cap, SearchBudget::unlimited());
        if let Some(w) = v.witness {
            let mut base = PartialColoring::empty(n);
            base.lift_from(&w, &rest.original);
            return ExtensionInstance {
                graph,
                peel,
                lists,
                base,
                m,
                k,
            };
        }
    }
}

/// Every map from the peel set to its D-lists that meets the merge
/// hypotheses, by plain enumeration.
pub fn brute_force_peel_colorings(
    inst: &ExtensionInstance,
    d: &[Vec<ColorId>],
    dangerous: &[Vec<ColorId>],
) -> Vec<PartialColoring> {
    let s = inst.peel.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; s];
    if d.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut g = PartialColoring::empty(inst.graph.n());
        for (i, &v) in inst.peel.iter().enumerate() {
            g.set(v, d[i][idx[i]]);
        }
        let classes = g.classes();
        let uses_ok = classes.values().all(|cl| cl.len() <= inst.m);
        let danger_ok = classes.iter().all(|(c, cl)| {
            cl.iter()
                .filter(|&&v| {
                    let i = inst.peel.iter().position(|&u| u == v).expect("peel vertex");
                    dangerous[i].contains(c)
                })
                .count()
                <= 1
        });
        let forest_ok = classes.values().all(|cl| {
            inst.graph
                .induced_subgraph(cl)
                .expect("valid")
                .graph
                .is_forest()
        });
        if uses_ok && danger_ok && forest_ok {
            out.push(g);
        }
        let mut i = 0;
        loop {
            if i == s {
                return out;
            }
            idx[i] += 1;
            if idx[i] < d[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn extension_sample(rng: &mut ChaCha8Rng) -> Result<()> {
    let inst = random_extension_instance(rng);
    let ctx = compute_d_lists(
        &inst.graph,
        &inst.peel,
        &inst.lists,
        &inst.base,
        inst.m,
        PeelMode::Strict,
    )?;
    let all = brute_force_peel_colorings(&inst, &ctx.d, &ctx.dangerous);
    let found = find_peel_coloring(&inst.graph, &ctx);
    if found.is_some() != !all.is_empty() {
        return Err(Error::Internal(format!(
            "search says {} but enumeration found {} colorings",
            found.is_some(),
            all.len()
        )));
    }
    for g in found.iter().chain(&all) {
        merge_colorings(&inst.graph, &inst.lists, &ctx, g)?;
    }
    Ok(())
}

fn claim_extension(c: &Claim, cfg: &ReproConfig) -> Vec<ReproLine> {
    let tally = run_suite(1000, cfg.seed, |_, rng| extension_sample(rng).into());
    vec![c.suite_line(
        "1000 random (G, S, L, f) with n <= 12, k <= 3: bounds, search vs enumeration, merges",
        tally,
    )]
}
