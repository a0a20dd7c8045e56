//! Legitimate 2-colorings of `n`-uniform linear hypergraphs with `n` edges.
//!
//! A coloring is legitimate when no two edges have the same (blue, red)
//! multiplicities. [`two_phase_coloring`] first colors edges greedily in order
//! (odd edges paint their uncolored vertices blue, even edges red), then fixes
//! each edge's blue count to a distinct target by recoloring only vertices that
//! belong to that edge alone.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edges are vertex-index sets; edge `i` in the API is `F_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearHypergraph {
    pub n: usize,
    pub num_vertices: usize,
    pub edges: Vec<Vec<usize>>,
}

impl LinearHypergraph {
    /// Sorts each edge and checks: `n` edges, each of exactly `n` distinct
    /// vertices, pairwise sharing at most one vertex.
    pub fn new(n: usize, num_vertices: usize, mut edges: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidHypergraph(m));
        if n == 0 {
            return bad("n must be at least 1".into());
        }
        if edges.len() != n {
            return bad(format!("expected {n} edges, found {}", edges.len()));
        }
        for (i, e) in edges.iter_mut().enumerate() {
            e.sort_unstable();
            if e.len() != n {
                return bad(format!(
                    "edge {} has {} vertices, expected {n}",
                    i + 1,
                    e.len()
                ));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("edge {} repeats a vertex", i + 1));
            }
            if e.last().is_some_and(|&v| v >= num_vertices) {
                return bad(format!("edge {} uses a vertex >= {num_vertices}", i + 1));
            }
        }
        let h = LinearHypergraph {
            n,
            num_vertices,
            edges,
        };
        for i in 0..n {
            for j in i + 1..n {
                if h.intersection(i, j).len() > 1 {
                    return bad(format!(
                        "edges {} and {} share more than one vertex",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        Ok(h)
    }

    pub fn intersection(&self, i: usize, j: usize) -> Vec<usize> {
        let (a, b) = (&self.edges[i], &self.edges[j]);
        let (mut x, mut y) = (0, 0);
        let mut out = Vec::new();
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[x]);
                    x += 1;
                    y += 1;
                }
            }
        }
        out
    }

    /// Indices of the edges containing each vertex, increasing.
    pub fn vertex_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Same hypergraph with edges in a seeded random order.
    pub fn permuted(&self, seed: u64) -> Self {
        let mut edges = self.edges.clone();
        edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        LinearHypergraph {
            edges,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorMode {
    /// Pairwise intersections at vertices private to the pair.
    Pairwise,
    /// Pairwise plus vertices shared by 3 to 5 edges.
    Sunflower,
    /// Random intersection rate, sunflowers, shuffled labels and edge order.
    Mixed,
}

impl GeneratorMode {
    pub const ALL: [GeneratorMode; 3] = [
        GeneratorMode::Pairwise,
        GeneratorMode::Sunflower,
        GeneratorMode::Mixed,
    ];
}

impl std::str::FromStr for GeneratorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairwise" => Ok(GeneratorMode::Pairwise),
            "sunflower" => Ok(GeneratorMode::Sunflower),
            "mixed" => Ok(GeneratorMode::Mixed),
            _ => Err(Error::param(format!("unknown generator mode {s:?}"))),
        }
    }
}

pub fn generate_linear_hypergraph(n: usize, seed: u64, mode: GeneratorMode) -> LinearHypergraph {
    generate_with_rate(n, seed, mode, 0.5)
}

/// `rate` is the probability that a not-yet-meeting pair of edges gets a
/// shared vertex; `Mixed` draws its own rate.
pub fn generate_with_rate(n: usize, seed: u64, mode: GeneratorMode, rate: f64) -> LinearHypergraph {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Vec<usize>> = vec![Vec::with_capacity(n); n];
    let mut meets = vec![vec![false; n]; n];
    let mut next_vertex = 0;

    let rate = match mode {
        GeneratorMode::Mixed => rng.gen_range(0.1..0.95),
        _ => rate,
    };

    if mode != GeneratorMode::Pairwise && n >= 3 {
        let flowers = match mode {
            GeneratorMode::Sunflower => rng.gen_range(1..=n.max(2) / 2 + 1),
            _ => rng.gen_range(0..=n / 3 + 1),
        };
        for _ in 0..flowers {
            let k = rng.gen_range(3..=n.min(5));
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut petals: Vec<usize> = Vec::with_capacity(k);
            for i in order {
                if petals.len() == k {
                    break;
                }
                if edges[i].len() < n && petals.iter().all(|&j| !meets[i][j]) {
                    petals.push(i);
                }
            }
            if petals.len() < 3 {
                continue;
            }
            for &i in &petals {
                edges[i].push(next_vertex);
                for &j in &petals {
                    meets[i][j] |= i != j;
                }
            }
            next_vertex += 1;
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if meets[i][j] || !rng.gen_bool(rate) {
                continue;
            }
            // never exceed n vertices per edge; dropping keeps linearity
            if edges[i].len() < n && edges[j].len() < n {
                edges[i].push(next_vertex);
                edges[j].push(next_vertex);
                meets[i][j] = true;
                meets[j][i] = true;
                next_vertex += 1;
            }
        }
    }

    for e in edges.iter_mut() {
        while e.len() < n {
            e.push(next_vertex);
            next_vertex += 1;
        }
    }

    if mode == GeneratorMode::Mixed {
        let mut relabel: Vec<usize> = (0..next_vertex).collect();
        relabel.shuffle(&mut rng);
        for e in edges.iter_mut() {
            e.iter_mut().for_each(|v| *v = relabel[*v]);
        }
        edges.shuffle(&mut rng);
    }

    LinearHypergraph::new(n, next_vertex, edges)
        .expect("generator keeps the hypergraph linear and uniform")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

/// Per-edge bookkeeping for the second phase (edge numbers are 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDiagnostics {
    pub edge: usize,
    pub phase1_blue: usize,
    pub target: usize,
    /// `|R_i|`: vertices in no other edge.
    pub private: usize,
    /// `|C_i|`: earlier `F_j` whose meeting vertex with `F_i` already lies in some `F_k`, `k < j`.
    pub captured: usize,
    /// `|D_i|`: edges disjoint from `F_i`.
    pub disjoint: usize,
    /// `t_i`: private vertices recolored.
    pub recolored: usize,
}

impl EdgeDiagnostics {
    /// `|R_i| >= |C_i| + |D_i| + 1`
    pub fn feasible(&self) -> bool {
        self.private > self.captured + self.disjoint
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegitColoring {
    pub colors: Vec<Color>,
    pub blue_counts: Vec<usize>,
    pub targets: Vec<usize>,
    pub diagnostics: Vec<EdgeDiagnostics>,
}

/// Target blue count of edge number `i` (1-based): `n - floor(i/2)` for odd `i`,
/// `i/2` for even `i`.
pub fn target_blue(n: usize, i: usize) -> usize {
    if i % 2 == 1 {
        n - i / 2
    } else {
        i / 2
    }
}

/// Greedy first phase: edge `F_i` paints its still-uncolored vertices blue when
/// `i` is odd and red when `i` is even.
pub fn phase_one(h: &LinearHypergraph) -> Vec<Option<Color>> {
    let mut colors = vec![None; h.num_vertices];
    for (idx, e) in h.edges.iter().enumerate() {
        let c = if (idx + 1) % 2 == 1 {
            Color::Blue
        } else {
            Color::Red
        };
        for &v in e {
            colors[v].get_or_insert(c);
        }
    }
    colors
}

fn blue_count(edge: &[usize], colors: &[Option<Color>]) -> usize {
    edge.iter()
        .filter(|&&v| colors[v] == Some(Color::Blue))
        .count()
}

pub fn two_phase_coloring(h: &LinearHypergraph) -> Result<LegitColoring> {
    let n = h.n;
    let mut colors = phase_one(h);
    let vertex_edges = h.vertex_edges();

    let phase1_blue: Vec<usize> = h.edges.iter().map(|e| blue_count(e, &colors)).collect();
    for (idx, &blue) in phase1_blue.iter().enumerate() {
        let i = idx + 1;
        let ok = if i % 2 == 1 {
            blue >= n - i / 2
        } else {
            blue <= i / 2
        };
        if !ok {
            return Err(Error::PhaseOneBound { edge: i, blue });
        }
    }

    let mut diagnostics = Vec::with_capacity(n);
    for (idx, edge) in h.edges.iter().enumerate() {
        let i = idx + 1;
        let target = target_blue(n, i);
        let private: Vec<usize> = edge
            .iter()
            .copied()
            .filter(|&v| vertex_edges[v].len() == 1)
            .collect();

        let mut meeting = BTreeSet::new();
        let mut captured = 0;
        for &v in edge {
            let first = vertex_edges[v][0];
            for &j in &vertex_edges[v] {
                if j == idx {
                    continue;
                }
                meeting.insert(j);
                // captured: j < i and some k < j already holds v
                if j < idx && first < j {
                    captured += 1;
                }
            }
        }
        let disjoint = n - 1 - meeting.len();

        let blue = blue_count(edge, &colors);
        let (from, to, needed) = if blue >= target {
            (Color::Blue, Color::Red, blue - target)
        } else {
            (Color::Red, Color::Blue, target - blue)
        };
        let candidates: Vec<usize> = private
            .iter()
            .copied()
            .filter(|&v| colors[v] == Some(from))
            .collect();
        if candidates.len() < needed {
            return Err(Error::PhaseTwoInfeasible {
                edge: i,
                needed,
                available: candidates.len(),
                private: private.len(),
                captured,
                disjoint,
            });
        }
        for &v in &candidates[..needed] {
            colors[v] = Some(to);
        }
        diagnostics.push(EdgeDiagnostics {
            edge: i,
            phase1_blue: phase1_blue[idx],
            target,
            private: private.len(),
            captured,
            disjoint,
            recolored: needed,
        });
    }

    // isolated vertices outside every edge keep no color from the phases
    let colors: Vec<Color> = colors
        .into_iter()
        .map(|c| c.unwrap_or(Color::Blue))
        .collect();
    let blue_counts = h
        .edges
        .iter()
        .map(|e| e.iter().filter(|&&v| colors[v] == Color::Blue).count())
        .collect();
    Ok(LegitColoring {
        colors,
        blue_counts,
        targets: (1..=n).map(|i| target_blue(n, i)).collect(),
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub legitimate: bool,
    /// 1-based edge numbers with identical multiplicity lists.
    pub violating_pair: Option<(usize, usize)>,
    pub blue_counts: Vec<usize>,
}

/// Checks that the (blue, red) multiplicity lists of all edges are distinct.
pub fn verify_legitimate(h: &LinearHypergraph, colors: &[Option<Color>]) -> Result<Verdict> {
    if colors.len() < h.num_vertices {
        return Err(Error::UncoloredVertex(colors.len()));
    }
    let mut blue_counts = Vec::with_capacity(h.n);
    for e in &h.edges {
        let mut blue = 0;
        for &v in e {
            match colors[v] {
                None => return Err(Error::UncoloredVertex(v)),
                Some(Color::Blue) => blue += 1,
                Some(Color::Red) => {}
            }
        }
        blue_counts.push(blue);
    }
    // uniform edges: equal blue counts <=> equal lists
    let mut first_seen = std::collections::HashMap::new();
    let mut violating_pair = None;
    for (i, &b) in blue_counts.iter().enumerate() {
        let list = (b, h.edges[i].len() - b);
        if let Some(&j) = first_seen.get(&list) {
            violating_pair = Some((j + 1, i + 1));
            break;
        }
        first_seen.insert(list, i);
    }
    Ok(Verdict {
        legitimate: violating_pair.is_none(),
        violating_pair,
        blue_counts,
    })
}

pub fn verify_coloring(h: &LinearHypergraph, coloring: &LegitColoring) -> Result<Verdict> {
    let colors: Vec<Option<Color>> = coloring.colors.iter().copied().map(Some).collect();
    verify_legitimate(h, &colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let h = generate_linear_hypergraph(1, 0, GeneratorMode::Pairwise);
        assert_eq!(h.edges, vec![vec![0]]);
        let c = two_phase_coloring(&h).unwrap();
        assert_eq!(c.colors, vec![Color::Blue]);
        assert_eq!(c.targets, vec![1]);
    }

    #[test]
    fn disjoint_triples() {
        let h = generate_with_rate(3, 0, GeneratorMode::Pairwise, 0.0);
        assert_eq!(h.edges, vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
        let c = two_phase_coloring(&h).unwrap();
        let p1: Vec<_> = c.diagnostics.iter().map(|d| d.phase1_blue).collect();
        let t: Vec<_> = c.diagnostics.iter().map(|d| d.recolored).collect();
        assert_eq!(p1, vec![3, 0, 3]);
        assert_eq!(c.targets, vec![3, 1, 2]);
        assert_eq!(t, vec![0, 1, 1]);
        assert_eq!(c.blue_counts, vec![3, 1, 2]);
        let v = verify_coloring(&h, &c).unwrap();
        assert!(v.legitimate);
        assert_eq!(v.blue_counts, vec![3, 1, 2]);
    }

    #[test]
    fn two_edges_sharing_a_vertex() {
        // F1 = {u, v}, F2 = {v, w}
        let h = LinearHypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let p1 = phase_one(&h);
        assert_eq!(
            p1,
            vec![Some(Color::Blue), Some(Color::Blue), Some(Color::Red)]
        );
        let c = two_phase_coloring(&h).unwrap();
        assert_eq!(c.targets, vec![2, 1]);
        assert_eq!(c.blue_counts, vec![2, 1]);
        assert!(c.diagnostics.iter().all(|d| d.recolored == 0));
    }

    #[test]
    fn all_blue_disjoint_edges_are_not_legitimate() {
        let h = LinearHypergraph::new(2, 4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let v = verify_legitimate(&h, &[Some(Color::Blue); 4]).unwrap();
        assert!(!v.legitimate);
        assert_eq!(v.violating_pair, Some((1, 2)));
        assert_eq!(
            verify_legitimate(
                &h,
                &[Some(Color::Blue), None, Some(Color::Red), Some(Color::Red)]
            ),
            Err(Error::UncoloredVertex(1))
        );
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(LinearHypergraph::new(2, 3, vec![vec![0, 1]]).is_err());
        assert!(LinearHypergraph::new(2, 3, vec![vec![0, 1], vec![2]]).is_err());
        // "at most n" edges are rejected
        assert!(
            LinearHypergraph::new(3, 9, vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]]).is_err()
        );
        assert!(
            LinearHypergraph::new(3, 5, vec![vec![0, 1, 2], vec![0, 1, 3], vec![2, 3, 4]]).is_err()
        );
        assert!(LinearHypergraph::new(2, 2, vec![vec![0, 0], vec![0, 1]]).is_err());
        assert!(LinearHypergraph::new(2, 2, vec![vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn captured_counts_follow_the_first_occurrence() {
        // v = 0 lies in F1, F2, F3; F4 meets v too. For F4 the earlier edges
        // F2 and F3 are captured (F1 already held v), F1 is not.
        let h = LinearHypergraph::new(
            4,
            13,
            vec![
                vec![0, 1, 2, 3],
                vec![0, 4, 5, 6],
                vec![0, 7, 8, 9],
                vec![0, 10, 11, 12],
            ],
        )
        .unwrap();
        let c = two_phase_coloring(&h).unwrap();
        let d = &c.diagnostics;
        assert_eq!(
            d.iter().map(|x| x.captured).collect::<Vec<_>>(),
            vec![0, 0, 1, 2]
        );
        assert!(d
            .iter()
            .all(|x| x.disjoint == 0 && x.private == 3 && x.feasible()));
        assert!(verify_coloring(&h, &c).unwrap().legitimate);
    }

    #[test]
    fn generator_is_deterministic_and_linear() {
        for mode in GeneratorMode::ALL {
            for n in [1, 2, 3, 7, 20] {
                let a = generate_linear_hypergraph(n, 9, mode);
                assert_eq!(a, generate_linear_hypergraph(n, 9, mode));
                for i in 0..n {
                    assert_eq!(a.edges[i].len(), n);
                    for j in i + 1..n {
                        assert!(a.intersection(i, j).len() <= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn sunflower_mode_creates_high_degree_vertices() {
        let h = generate_linear_hypergraph(12, 3, GeneratorMode::Sunflower);
        assert!(h.vertex_edges().iter().any(|es| es.len() >= 3));
    }

    #[test]
    fn permutation_is_seeded() {
        let h = generate_linear_hypergraph(8, 1, GeneratorMode::Sunflower);
        assert_eq!(h.permuted(4), h.permuted(4));
        let c = two_phase_coloring(&h.permuted(4)).unwrap();
        assert!(verify_coloring(&h.permuted(4), &c).unwrap().legitimate);
    }

    #[test]
    fn second_phase_only_touches_private_vertices() {
        for mode in GeneratorMode::ALL {
            for seed in 0..20 {
                let h = generate_linear_hypergraph(15, seed, mode);
                let before = phase_one(&h);
                let after = two_phase_coloring(&h).unwrap();
                let degree = h.vertex_edges();
                for v in 0..h.num_vertices {
                    if before[v] != Some(after.colors[v]) {
                        assert_eq!(degree[v].len(), 1);
                    }
                }
                for (idx, d) in after.diagnostics.iter().enumerate() {
                    let moved = h.edges[idx]
                        .iter()
                        .filter(|&&v| before[v] != Some(after.colors[v]))
                        .count();
                    assert_eq!(moved, d.recolored);
                }
            }
        }
    }
}
