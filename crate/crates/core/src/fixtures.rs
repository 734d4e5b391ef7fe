//! Fixed instance families used by tests and the reproduction harness.

use crate::coloring::{ColorId, ListAssignment};
use crate::graph::{Graph, Vertex};

/// All `r`-regular graphs on `n` vertices up to isomorphism, in generation
/// order. Exhaustive, so only meant for small `n`.
pub fn regular_graphs(n: usize, r: usize) -> Vec<Graph> {
    let mut reps: Vec<(Vec<u64>, Graph)> = Vec::new();
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    if n * r % 2 == 1 || r >= n.max(1) {
        return Vec::new();
    }
    fill(n, r, 0, &mut adj, &mut deg, &mut |adj| {
        let edges: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| adj[u][v])
            .collect();
        let g = Graph::from_edges(n, &edges).expect("simple by construction");
        let inv = invariant(&g);
        if !reps.iter().any(|(i, h)| *i == inv && isomorphic(&g, h)) {
            reps.push((inv, g));
        }
    });
    reps.into_iter().map(|(_, g)| g).collect()
}

/// Connected 4-regular graphs on `n` vertices up to isomorphism.
pub fn connected_four_regular(n: usize) -> Vec<Graph> {
    regular_graphs(n, 4)
        .into_iter()
        .filter(|g| g.components().len() == 1)
        .collect()
}

/// Completes vertex `u`'s neighborhood with larger vertices, then moves on.
fn fill(
    n: usize,
    r: usize,
    u: usize,
    adj: &mut Vec<Vec<bool>>,
    deg: &mut Vec<usize>,
    emit: &mut dyn FnMut(&Vec<Vec<bool>>),
) {
    if u == n {
        emit(adj);
        return;
    }
    if deg[u] == r {
        fill(n, r, u + 1, adj, deg, emit);
        return;
    }
    let lo = (0..n)
        .rev()
        .find(|&v| v > u && adj[u][v])
        .map_or(u + 1, |v| v + 1);
    for v in lo..n {
        if deg[v] < r {
            adj[u][v] = true;
            adj[v][u] = true;
            deg[u] += 1;
            deg[v] += 1;
            fill(n, r, u, adj, deg, emit);
            adj[u][v] = false;
            adj[v][u] = false;
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }
}

/// Per-vertex triangle counts, sorted. Isomorphism-invariant.
fn invariant(g: &Graph) -> Vec<u64> {
    let mut t: Vec<u64> = (0..g.n()).map(|v| vertex_triangles(g, v)).collect();
    t.sort_unstable();
    t
}

fn vertex_triangles(g: &Graph, v: Vertex) -> u64 {
    let nb = g.neighbors(v);
    let mut count = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if g.has_edge(a, b) {
                count += 1;
            }
        }
    }
    count
}

/// Backtracking isomorphism test for small graphs of equal order.
pub fn isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.n();
    if n != h.n() || g.num_edges() != h.num_edges() {
        return false;
    }
    let tg: Vec<u64> = (0..n).map(|v| vertex_triangles(g, v)).collect();
    let th: Vec<u64> = (0..n).map(|v| vertex_triangles(h, v)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_map(g, h, &tg, &th, 0, &mut map, &mut used)
}

fn extend_map(
    g: &Graph,
    h: &Graph,
    tg: &[u64],
    th: &[u64],
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == g.n() {
        return true;
    }
    for w in 0..h.n() {
        if used[w] || g.degree(v) != h.degree(w) || tg[v] != th[w] {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != h.has_edge(map[u], w)) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_map(g, h, tg, th, v + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    false
}

/// A named complete bipartite instance with side X = `0..a`.
#[derive(Clone, Debug)]
pub struct BipartiteFixture {
    pub name: &'static str,
    pub a: usize,
    pub b: usize,
    pub lists: ListAssignment,
}

/// Seven X lists and eleven Y lists for `K_{7,11}`.
type Pattern = (&'static str, [[ColorId; 2]; 7], [[ColorId; 2]; 11]);

/// 2-assignments of `K_{7,11}` at the edge of the case analysis: on X,
/// every way of coloring uses two colors at least twice, and the Y lists
/// cover the resulting heavy pairs three times each except one pair,
/// covered twice.
const PATTERNS: [Pattern; 4] = [
    (
        "four-shared",
        [[1, 4], [1, 4], [1, 4], [1, 4], [2, 3], [2, 3], [2, 3]],
        [
            [1, 2],
            [1, 2],
            [1, 2],
            [1, 3],
            [1, 3],
            [1, 3],
            [4, 2],
            [4, 2],
            [4, 2],
            [4, 3],
            [4, 3],
        ],
    ),
    (
        "three-shared-pendant",
        [[1, 5], [1, 4], [1, 4], [4, 5], [2, 3], [2, 3], [2, 3]],
        [
            [1, 2],
            [1, 2],
            [1, 2],
            [1, 3],
            [1, 3],
            [1, 3],
            [2, 4],
            [2, 4],
            [2, 4],
            [3, 4],
            [3, 4],
        ],
    ),
    (
        "three-shared-split",
        [[1, 5], [1, 5], [1, 4], [2, 3], [2, 3], [2, 4], [3, 4]],
        [
            [1, 2],
            [1, 2],
            [1, 2],
            [1, 3],
            [1, 3],
            [1, 3],
            [5, 2],
            [5, 2],
            [5, 2],
            [5, 3],
            [5, 3],
        ],
    ),
    (
        "three-shared-tail",
        [[1, 4], [1, 4], [1, 4], [2, 3], [2, 3], [2, 5], [3, 5]],
        [
            [1, 2],
            [1, 2],
            [1, 2],
            [1, 3],
            [1, 3],
            [1, 3],
            [4, 2],
            [4, 2],
            [4, 2],
            [4, 3],
            [4, 3],
        ],
    ),
];

/// Structured 2-assignments of `K_{7,11}`; each admits an arborable coloring
/// with no class above 10.
pub fn k7_11_patterns() -> Vec<BipartiteFixture> {
    PATTERNS
        .iter()
        .map(|(name, x, y)| BipartiteFixture {
            name,
            a: 7,
            b: 11,
            lists: ListAssignment::new(x.iter().chain(y).map(|l| l.to_vec()).collect()),
        })
        .collect()
}

/// 3-assignments of `K_{11,17}` where one color `c` lies in every list and
/// removing `c` together with ten Y vertices leaves one of the `K_{7,11}`
/// patterns (X playing the 11-vertex side).
pub fn k11_17_patterns() -> Vec<BipartiteFixture> {
    const C: ColorId = 9;
    PATTERNS
        .iter()
        .map(|(name, seven, eleven)| {
            let with_c = |l: &[ColorId; 2]| vec![C, l[0], l[1]];
            let mut lists: Vec<Vec<ColorId>> = eleven.iter().map(with_c).collect();
            lists.extend(std::iter::repeat_n(vec![C, 6, 7], 10));
            lists.extend(seven.iter().map(with_c));
            BipartiteFixture {
                name,
                a: 11,
                b: 17,
                lists: ListAssignment::new(lists),
            }
        })
        .collect()
}
