//! Secant-size spectra, the double-counting identities and the lower bounds on
//! the most frequent secant size.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::plane::ProjectivePlane;

/// A subset of the points of a plane, as a bitmap over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    universe: usize,
    bits: Vec<u64>,
    size: usize,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            universe,
            bits: vec![0; universe.div_ceil(64)],
            size: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        Self::empty(universe).complement()
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Bit `i` of `mask` is point `i`; requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask sets hold at most 64 points");
        let mask = if universe == 64 {
            mask
        } else {
            mask & ((1u64 << universe) - 1)
        };
        PointSet {
            universe,
            bits: vec![mask],
            size: mask.count_ones() as usize,
        }
    }

    pub(crate) fn from_words(universe: usize, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), universe.div_ceil(64));
        let size = bits.iter().map(|w| w.count_ones() as usize).sum();
        PointSet {
            universe,
            bits,
            size,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    /// Low 64 bits of the bitmap.
    pub fn mask(&self) -> u64 {
        self.bits.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "point {i} outside the plane");
        let fresh = !self.contains(i);
        if fresh {
            self.bits[i / 64] |= 1 << (i % 64);
            self.size += 1;
        }
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let present = self.contains(i);
        if present {
            self.bits[i / 64] &= !(1 << (i % 64));
            self.size -= 1;
        }
        present
    }

    pub fn toggle(&mut self, i: usize) {
        if !self.remove(i) {
            self.insert(i);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Complement within the plane.
    pub fn complement(&self) -> Self {
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        let tail = self.universe % 64;
        if tail != 0 {
            if let Some(last) = bits.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        PointSet {
            universe: self.universe,
            bits,
            size: self.universe - self.size,
        }
    }
}

/// How per-line secant sizes are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Popcount when the plane has line bitmaps, gather otherwise.
    Auto,
    Popcount,
    Gather,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantSpectrum {
    q: usize,
    set_size: usize,
    secants: Vec<u32>,
    histogram: Vec<u64>,
    mode_k: usize,
    mode_count: u64,
}

const LINE_CHUNK: usize = 1024;

pub fn compute_spectrum(plane: &ProjectivePlane, set: &PointSet) -> SecantSpectrum {
    compute_spectrum_with(plane, set, Kernel::Auto)
}

pub fn compute_spectrum_with(
    plane: &ProjectivePlane,
    set: &PointSet,
    kernel: Kernel,
) -> SecantSpectrum {
    assert_eq!(
        set.universe(),
        plane.num_points(),
        "point set does not belong to this plane"
    );
    let n = plane.num_lines();
    let mut secants = vec![0u32; n];
    let bitmaps = match kernel {
        Kernel::Gather => None,
        Kernel::Auto => plane.line_bitmaps(),
        Kernel::Popcount => Some(
            plane
                .line_bitmaps()
                .expect("popcount kernel needs a plane with line bitmaps"),
        ),
    };
    secants
        .par_chunks_mut(LINE_CHUNK)
        .enumerate()
        .for_each(|(chunk, out)| {
            let base = chunk * LINE_CHUNK;
            for (i, slot) in out.iter_mut().enumerate() {
                let l = base + i;
                *slot = match bitmaps {
                    Some(bm) => bm
                        .line(l)
                        .iter()
                        .zip(set.words())
                        .map(|(a, b)| (a & b).count_ones())
                        .sum(),
                    None => {
                        let mut c = 0;
                        plane.for_each_point_on_line(l, |p| c += set.contains(p) as u32);
                        c
                    }
                };
            }
        });
    SecantSpectrum::from_secants(plane.order(), set.len(), secants)
}

impl SecantSpectrum {
    /// Builds the histogram and mode from per-line secant sizes.
    pub fn from_secants(q: usize, set_size: usize, secants: Vec<u32>) -> Self {
        let mut histogram = vec![0u64; q + 2];
        for &k in &secants {
            histogram[k as usize] += 1;
        }
        let (mode_k, mode_count) = mode_of(&histogram);
        SecantSpectrum {
            q,
            set_size,
            secants,
            histogram,
            mode_k,
            mode_count,
        }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn num_lines(&self) -> usize {
        self.secants.len()
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    /// `n_l` for every line index.
    pub fn secants(&self) -> &[u32] {
        &self.secants
    }

    /// `L_k` for `k` in `0..=q+1`.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    pub fn mode_k(&self) -> usize {
        self.mode_k
    }

    pub fn mode_count(&self) -> u64 {
        self.mode_count
    }

    /// Mean secant size `s(q+1)/N`.
    pub fn mean(&self) -> Ratio<i128> {
        Ratio::new(
            (self.set_size * (self.q + 1)) as i128,
            self.num_lines() as i128,
        )
    }

    /// Whether `mode_count >= ceil(N / sqrt(3q + 13))`.
    pub fn satisfies_lower_bound(&self) -> bool {
        self.mode_count >= cor_ceiling(self.q as u64)
    }
}

/// Smallest `k` attaining `max_k L_k`, and that maximum.
fn mode_of(histogram: &[u64]) -> (usize, u64) {
    histogram.iter().enumerate().fold(
        (0, 0),
        |best, (k, &c)| if c > best.1 { (k, c) } else { best },
    )
}

pub fn max_frequency(spec: &SecantSpectrum) -> (usize, u64) {
    (spec.mode_k, spec.mode_count)
}

pub fn complement(set: &PointSet) -> PointSet {
    set.complement()
}

/// Residuals of the three exact identities; all zero for a correct spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    /// `Σ n - s(q+1)`
    pub eq1: i128,
    /// `Σ n(n-1) - s(s-1)`
    pub eq2: i128,
    /// `N Σ n² - (Σ n)² - q s (N - s)`
    pub var: i128,
}

impl IdentityCheck {
    pub fn eq1_ok(&self) -> bool {
        self.eq1 == 0
    }

    pub fn eq2_ok(&self) -> bool {
        self.eq2 == 0
    }

    pub fn var_ok(&self) -> bool {
        self.var == 0
    }

    pub fn all_ok(&self) -> bool {
        self.eq1_ok() && self.eq2_ok() && self.var_ok()
    }
}

pub fn verify_counting_identities(spec: &SecantSpectrum) -> IdentityCheck {
    let q = spec.q as i128;
    let s = spec.set_size as i128;
    let n = spec.num_lines() as i128;
    let (sum, sum_sq) = spec.secants.iter().fold((0i128, 0i128), |(a, b), &k| {
        (a + k as i128, b + (k as i128).pow(2))
    });
    IdentityCheck {
        eq1: sum - s * (q + 1),
        eq2: (sum_sq - sum) - s * (s - 1),
        var: n * sum_sq - sum * sum - q * s * (n - s),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub q: u64,
    pub set_size: u64,
    /// `q s (1 - s/N)`, exact.
    #[serde(serialize_with = "ratio_string")]
    pub variance: Ratio<i128>,
    /// `N^{3/2} / sqrt(12 V + 13 N)`
    pub prop_bound: f64,
    /// `N / sqrt(3q + 13)`
    pub cor_bound: f64,
    /// `q^{3/2}/sqrt(3) - 3q`; negative for small q.
    pub thm_lower: f64,
    /// `sqrt(2/pi) q^{3/2}`
    pub thm_upper_ref: f64,
}

fn ratio_string<S: serde::Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Number of points (and lines) of a plane of order `q`.
pub fn plane_size(q: u64) -> u64 {
    q * q + q + 1
}

/// The size-dependent bound uses `12V + 13N` under the root: that is where the
/// counting argument lands, and it specializes to `N / sqrt(3q + 13)` at `s = N/2`.
pub fn bounds_report(q: u64, s: u64) -> BoundsReport {
    let n = plane_size(q);
    assert!(s <= n, "set larger than the plane");
    let variance = Ratio::new((q * s) as i128 * (n - s) as i128, n as i128);
    let v = *variance.numer() as f64 / *variance.denom() as f64;
    let nf = n as f64;
    let qf = q as f64;
    BoundsReport {
        q,
        set_size: s,
        variance,
        prop_bound: nf.powf(1.5) / (12.0 * v + 13.0 * nf).sqrt(),
        cor_bound: nf / (3.0 * qf + 13.0).sqrt(),
        thm_lower: qf.powf(1.5) / 3f64.sqrt() - 3.0 * qf,
        thm_upper_ref: (2.0 / std::f64::consts::PI).sqrt() * qf.powf(1.5),
    }
}

/// `ceil(N / sqrt(3q + 13))`, computed exactly as the least `m` with
/// `m² (3q + 13) >= N²`.
pub fn cor_ceiling(q: u64) -> u64 {
    let n = plane_size(q) as u128;
    let d = 3 * q as u128 + 13;
    let target = n * n;
    let mut m = (n as f64 / (d as f64).sqrt()).floor() as u128;
    m = m.saturating_sub(2);
    while m * m * d < target {
        m += 1;
    }
    m as u64
}
