//! Seeded instance generators used by tests, the reproduction harness and
//! the CLI. All take an explicit RNG so runs are reproducible from a seed.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::coloring::{ColorId, ListAssignment};
use crate::graph::{Graph, Vertex};

/// Uniform `k`-subsets of `0..universe` for each of `n` vertices.
pub fn random_assignment<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    universe: usize,
    rng: &mut R,
) -> ListAssignment {
    assert!(universe >= k, "universe smaller than list size");
    let lists = (0..n)
        .map(|_| {
            index::sample(rng, universe, k)
                .into_iter()
                .map(|c| c as ColorId)
                .collect()
        })
        .collect();
    ListAssignment::new(lists)
}

/// Starts from an edge and repeatedly attaches a new vertex to one or two
/// distinct existing vertices chosen uniformly at random. The result is
/// connected and 2-degenerate.
pub fn random_two_degenerate<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 2);
    let mut edges = vec![(0, 1)];
    for v in 2..n {
        let count = rng.gen_range(1..=2).min(v);
        for u in index::sample(rng, v, count) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("generated graph is simple")
}

/// A random graph with maximum degree at most `max_degree` and at most
/// `max_full` vertices of degree exactly `max_degree`, built by inserting
/// shuffled candidate edges while the constraints allow.
pub fn random_bounded_degree<R: Rng + ?Sized>(
    n: usize,
    max_degree: usize,
    max_full: usize,
    density: f64,
    rng: &mut R,
) -> Graph {
    let mut candidates: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    candidates.shuffle(rng);
    let mut deg = vec![0usize; n];
    let mut full = 0;
    let mut edges = Vec::new();
    for (u, v) in candidates {
        if !rng.gen_bool(density) {
            continue;
        }
        if deg[u] >= max_degree || deg[v] >= max_degree {
            continue;
        }
        let new_full =
            usize::from(deg[u] + 1 == max_degree) + usize::from(deg[v] + 1 == max_degree);
        if full + new_full > max_full {
            continue;
        }
        full += new_full;
        deg[u] += 1;
        deg[v] += 1;
        edges.push((u, v));
    }
    Graph::from_edges(n, &edges).expect("generated graph is simple")
}
