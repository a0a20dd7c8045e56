//! Min-max search over point sets: the smallest achievable mode frequency
//! `min_S max_k L_k(S)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plane::ProjectivePlane;
use crate::spectrum::PointSet;

pub const EXHAUSTIVE_MAX_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Exhaustive,
    Local,
}

impl SearchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMethod::Exhaustive => "exhaustive",
            SearchMethod::Local => "local",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub q: usize,
    pub best_mode_count: u64,
    pub witness: PointSet,
    pub subsets_examined: u64,
    pub method: SearchMethod,
}

fn line_masks(plane: &ProjectivePlane) -> Vec<u64> {
    (0..plane.num_lines())
        .map(|l| {
            plane
                .points_on_line(l)
                .iter()
                .fold(0u64, |m, &p| m | 1 << p)
        })
        .collect()
}

fn mode_of_mask(lines: &[u64], mask: u64) -> u64 {
    let mut hist = [0u8; 8];
    for &l in lines {
        hist[(l & mask).count_ones() as usize] += 1;
    }
    *hist.iter().max().unwrap() as u64
}

/// Exact minimum of the mode frequency over every subset, for `q <= 4`.
///
/// Only sets with `|S| <= N/2` are scanned: a complement has the reversed
/// histogram and hence the same mode frequency. The witness is the smallest
/// bitmap (bit `i` = point `i`, read as an integer) attaining the minimum among
/// the scanned sets.
pub fn exhaustive_minmax(plane: &ProjectivePlane) -> Result<SearchResult> {
    let q = plane.order();
    if q > EXHAUSTIVE_MAX_ORDER {
        return Err(Error::ExhaustiveLimit(q as u32));
    }
    let n = plane.num_points();
    let half = (n / 2) as u32;
    let lines = line_masks(plane);

    // fixed high-bit prefixes; each worker scans one contiguous block
    let low_bits = n.saturating_sub(8);
    let prefixes = 1u64 << (n - low_bits);
    let (best, best_mask, examined) = (0..prefixes)
        .into_par_iter()
        .map(|prefix| {
            let base = prefix << low_bits;
            let mut best = (u64::MAX, u64::MAX);
            let mut examined = 0u64;
            for low in 0..1u64 << low_bits {
                let mask = base | low;
                if mask.count_ones() > half {
                    continue;
                }
                examined += 1;
                let m = mode_of_mask(&lines, mask);
                if m < best.0 {
                    best = (m, mask);
                }
            }
            (best.0, best.1, examined)
        })
        .reduce(
            || (u64::MAX, u64::MAX, 0),
            |a, b| {
                let (m, w) = std::cmp::min((a.0, a.1), (b.0, b.1));
                (m, w, a.2 + b.2)
            },
        );

    Ok(SearchResult {
        q,
        best_mode_count: best,
        witness: PointSet::from_mask(n, best_mask),
        subsets_examined: examined,
        method: SearchMethod::Exhaustive,
    })
}

/// Secant counts and histogram kept in sync under single-point flips.
struct State<'a> {
    plane: &'a ProjectivePlane,
    set: PointSet,
    secants: Vec<u32>,
    hist: Vec<u64>,
}

impl<'a> State<'a> {
    fn new(plane: &'a ProjectivePlane, set: PointSet) -> Self {
        let spec = crate::spectrum::compute_spectrum(plane, &set);
        State {
            plane,
            set,
            secants: spec.secants().to_vec(),
            hist: spec.histogram().to_vec(),
        }
    }

    fn flip(&mut self, p: usize) {
        let adding = !self.set.contains(p);
        self.set.toggle(p);
        let (secants, hist) = (&mut self.secants, &mut self.hist);
        self.plane.for_each_line_through_point(p, |l| {
            let k = secants[l] as usize;
            hist[k] -= 1;
            let k = if adding { k + 1 } else { k - 1 };
            hist[k] += 1;
            secants[l] = k as u32;
        });
    }

    /// (mode frequency, sum of squared bin counts); the second term orders
    /// histograms by variance since the bin mean is fixed.
    fn score(&self) -> (u64, u64) {
        let max = *self.hist.iter().max().unwrap();
        (max, self.hist.iter().map(|h| h * h).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    pub iters: u64,
    pub restarts: u32,
    pub seed: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig {
            iters: 20_000,
            restarts: 8,
            seed: 0,
        }
    }
}

fn descend(plane: &ProjectivePlane, iters: u64, seed: u64) -> ((u64, u64), PointSet) {
    let n = plane.num_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = PointSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
    let mut state = State::new(plane, start);
    let mut current = state.score();
    let mut best = (current, state.set.clone());
    let patience = (4 * n as u64).max(64);
    let mut stale = 0u64;

    for _ in 0..iters {
        let p = rng.gen_range(0..n);
        state.flip(p);
        let s = state.score();
        if s <= current {
            current = s;
        } else {
            state.flip(p);
        }
        if current < best.0 {
            best = (current, state.set.clone());
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= patience {
            // kick: a few random flips, accepted unconditionally
            let kicks = rng.gen_range(2..=(n / 8).max(3));
            for _ in 0..kicks {
                state.flip(rng.gen_range(0..n));
            }
            current = state.score();
            stale = 0;
        }
    }
    best
}

/// Randomized hill descent over single-point flips with kicks and restarts.
///
/// Each restart `r` runs from its own generator seeded by `(seed, r)`, so the
/// result does not depend on how restarts are scheduled across threads.
pub fn local_search(plane: &ProjectivePlane, config: &LocalSearchConfig) -> SearchResult {
    let restarts = config.restarts.max(1);
    let (score, witness) = (0..restarts)
        .into_par_iter()
        .map(|r| descend(plane, config.iters, restart_seed(config.seed, r)))
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .unwrap();
    SearchResult {
        q: plane.order(),
        best_mode_count: score.0,
        witness,
        subsets_examined: config.iters * restarts as u64,
        method: SearchMethod::Local,
    }
}

fn restart_seed(seed: u64, restart: u32) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (restart as u64)
            .wrapping_add(1)
            .wrapping_mul(0xD1B5_4A32_D192_ED03)
}
