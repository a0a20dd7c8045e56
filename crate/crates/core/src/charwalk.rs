//! Character walks: prefix sums of the Legendre symbol, moving-window sums, level
//! statistics, and the projection profiles of the region above a parabola.
//!
//! For the region `S = {(x,y) : lift(f(x)) < lift(y)}` with
//! `f(x) = alpha x^2 + beta x + gamma` and a slope `d != 0`, the profile
//! `pr_d(b) = |S ∩ {y = dx + b}|` obeys, for every `b` including the wrap at
//! `b = p - 1`,
//!
//! ```text
//! pr_d(b + 1) - pr_d(b) = χ((beta - d)^2 + 4 alpha (b - gamma))
//! ```
//!
//! Going from `b` to `b + 1` raises each point `(x, dx + b)` by one; it enters `S`
//! exactly when `f(x) = dx + b`, except for the single `x` with `dx + b = p - 1`,
//! which wraps to `y = 0` and leaves. The two effects combine to
//! `#roots(f(x) - dx - b) - 1`, which is the character of the discriminant.
//! [`verify_projection_laws`] checks this alongside the cyclic-shift and
//! secant-count consequences, and reports the sign/offset form
//! `-χ((beta - 1)^2 + 4 alpha (b + 1 - gamma))` next to it for comparison.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::construct::{parabola_region, ParabolaParams};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, QuadraticCharacter};
use crate::plane::ProjectivePlane;
use crate::spectrum::compute_spectrum;

/// `Ψ(a, t) = Σ_{j=0}^{t} χ(a + j)` for `t` in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Walk {
    pub p: u32,
    pub a: u32,
    pub values: Vec<i64>,
}

impl Walk {
    pub fn new(chi: &QuadraticCharacter, a: u32) -> Self {
        let p = chi.modulus();
        let a = a % p;
        let mut acc = 0i64;
        let values = (0..p)
            .map(|j| {
                let r = a + j;
                acc += chi.chi_residue(if r >= p { r - p } else { r }) as i64;
                acc
            })
            .collect();
        Walk { p, a, values }
    }

    /// Increments `values[t] - values[t-1]`, with `values[-1] = 0`.
    pub fn increments(&self) -> impl Iterator<Item = i64> + '_ {
        std::iter::once(0)
            .chain(self.values.iter().copied())
            .zip(self.values.iter().copied())
            .map(|(prev, next)| next - prev)
    }
}

pub fn psi_walk(p: u32, a: u32) -> Result<Walk> {
    Ok(Walk::new(&QuadraticCharacter::new(p)?, a))
}

/// `Φ(u, a) = Σ_{t=0}^{a-1} χ(u - t)`.
pub fn phi_sum_with(chi: &QuadraticCharacter, u: i64, a: u32) -> i64 {
    (0..a as i64).map(|t| chi.chi(u - t) as i64).sum()
}

pub fn phi_sum(p: u32, u: i64, a: u32) -> Result<i64> {
    if a > p {
        return Err(Error::param(format!("window length {a} exceeds p = {p}")));
    }
    Ok(phi_sum_with(&QuadraticCharacter::new(p)?, u, a))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCount {
    pub level: i64,
    pub count: u64,
}

/// Occupancy of the levels of a walk. The envelope flags are descriptive only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelStats {
    pub p: u32,
    pub a: u32,
    pub counts: Vec<LevelCount>,
    pub zero_count: u64,
    /// Smallest level attaining `max_level_count`.
    pub max_level: i64,
    pub max_level_count: u64,
    pub min: i64,
    pub max: i64,
    pub range: i64,
    pub max_abs: i64,
    /// `range <= sqrt(p) ln p`
    pub range_within_log_envelope: bool,
    /// `zero_count <= sqrt(p) ln^2 p`
    pub zeros_within_log2_envelope: bool,
    /// `zero_count <= sqrt(p) ln p`
    pub zeros_within_log1_envelope: bool,
    pub zero_ratio: f64,
    pub max_level_ratio: f64,
}

pub fn level_stats(walk: &Walk) -> LevelStats {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &v in &walk.values {
        *counts.entry(v).or_default() += 1;
    }
    let (max_level, max_level_count) =
        counts.iter().fold(
            (0, 0),
            |best, (&h, &c)| if c > best.1 { (h, c) } else { best },
        );
    let min = *counts.keys().next().unwrap_or(&0);
    let max = *counts.keys().next_back().unwrap_or(&0);
    let zero_count = counts.get(&0).copied().unwrap_or(0);
    let sp = (walk.p as f64).sqrt();
    let lp = (walk.p as f64).ln();
    LevelStats {
        p: walk.p,
        a: walk.a,
        counts: counts
            .into_iter()
            .map(|(level, count)| LevelCount { level, count })
            .collect(),
        zero_count,
        max_level,
        max_level_count,
        min,
        max,
        range: max - min,
        max_abs: min.abs().max(max.abs()),
        range_within_log_envelope: ((max - min) as f64) <= sp * lp,
        zeros_within_log2_envelope: (zero_count as f64) <= sp * lp * lp,
        zeros_within_log1_envelope: (zero_count as f64) <= sp * lp,
        zero_ratio: zero_count as f64 / sp,
        max_level_ratio: max_level_count as f64 / sp,
    }
}

/// `pr_d(b)` for every intercept `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionProfile {
    pub p: u32,
    pub params: ParabolaParams,
    pub d: Elem,
    pub pr: Vec<u32>,
}

impl ProjectionProfile {
    pub fn min(&self) -> u32 {
        *self.pr.iter().min().unwrap()
    }

    pub fn max(&self) -> u32 {
        *self.pr.iter().max().unwrap()
    }

    /// `max - min` of the attained values.
    pub fn range(&self) -> u32 {
        self.max() - self.min()
    }

    pub fn delta(&self, b: usize) -> i64 {
        let next = self.pr[(b + 1) % self.pr.len()] as i64;
        next - self.pr[b] as i64
    }
}

fn check_slope_field(field: &Field, params: &ParabolaParams, d: Elem) -> Result<u32> {
    if !field.is_prime_field() || field.order() <= 3 {
        return Err(Error::param(
            "projection profiles need a prime field with p > 3",
        ));
    }
    let p = field.order();
    if params.alpha == 0 || params.alpha >= p || params.beta >= p || params.gamma >= p || d >= p {
        return Err(Error::param("parameters out of range"));
    }
    if d == 0 {
        return Err(Error::HorizontalSlope);
    }
    Ok(p)
}

/// Each `x` contributes to a cyclic run of intercepts: `(x, y)` lies above the
/// parabola for `y` in `(f(x), p-1]`, i.e. for `b = y - dx` in a run of length
/// `p - 1 - f(x)` starting at `f(x) + 1 - dx`. A difference array over `b` sums
/// the runs in `O(p)`.
pub fn projection_profile(
    field: &Field,
    params: &ParabolaParams,
    d: Elem,
) -> Result<ProjectionProfile> {
    let p = check_slope_field(field, params, d)?;
    let pu = p as usize;
    let mut diff = vec![0i64; pu + 1];
    for x in 0..p {
        let fx = params.eval(field, x);
        let len = (p - 1 - fx) as usize;
        if len == 0 {
            continue;
        }
        let start = field.sub(field.add(fx, 1), field.mul(d, x)) as usize;
        if start + len <= pu {
            diff[start] += 1;
            diff[start + len] -= 1;
        } else {
            diff[start] += 1;
            diff[pu] -= 1;
            diff[0] += 1;
            diff[start + len - pu] -= 1;
        }
    }
    let mut acc = 0i64;
    let pr = diff[..pu]
        .iter()
        .map(|&dv| {
            acc += dv;
            acc as u32
        })
        .collect();
    Ok(ProjectionProfile {
        p,
        params: *params,
        d,
        pr,
    })
}

/// `χ((beta - d)^2 + 4 alpha (b - gamma))`, the step from `b` to `b + 1`.
pub fn profile_step(
    field: &Field,
    chi: &QuadraticCharacter,
    params: &ParabolaParams,
    d: Elem,
    b: Elem,
) -> i32 {
    let bd = field.sub(params.beta, d);
    let four_alpha = field.mul(field.from_int(4), params.alpha);
    chi.chi_residue(field.add(
        field.mul(bd, bd),
        field.mul(four_alpha, field.sub(b, params.gamma)),
    ))
}

/// `-χ((beta - 1)^2 + 4 alpha (b + 1 - gamma))`, the slope-free form.
pub fn profile_step_reference_form(
    field: &Field,
    chi: &QuadraticCharacter,
    params: &ParabolaParams,
    b: Elem,
) -> i32 {
    let b1 = field.sub(params.beta, 1);
    let four_alpha = field.mul(field.from_int(4), params.alpha);
    let arg = field.add(
        field.mul(b1, b1),
        field.mul(four_alpha, field.sub(field.add(b, 1), params.gamma)),
    );
    -chi.chi_residue(arg)
}

/// Pass/fail of one law, with the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub passed: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl LawOutcome {
    fn new(law: &str) -> Self {
        LawOutcome {
            law: law.to_string(),
            passed: true,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(describe());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub p: u32,
    pub params: ParabolaParams,
    /// Step law with the slope-dependent discriminant.
    pub l1_step: LawOutcome,
    /// Unit steps and an interval image, for every slope.
    pub l2_interval: LawOutcome,
    /// `pr_d` is a cyclic shift of `pr_1`.
    pub l3_cyclic_shift: LawOutcome,
    /// Secant counts over sloped non-horizontal lines factor as `(p-1)` times
    /// the level counts of `pr_1`.
    pub l4_secant_counts: LawOutcome,
    /// `sqrt(p)/(2π) <= range(pr_1) <= sqrt(p) ln p`.
    pub l5_range: LawOutcome,
    /// `pr_d(b)` equals the secant size of `y = dx + b` in the full spectrum.
    pub profile_matches_spectrum: LawOutcome,
    /// `pr_1` rebuilt from `pr_1(0)` by telescoping character sums.
    pub telescoping: LawOutcome,
    /// `shifts[d-1] = s` with `pr_d(b) = pr_1(b + s)`.
    pub shifts: Vec<u32>,
    pub range: u32,
    /// How often the slope-free reference form matched the observed step.
    pub reference_form_agreements: u64,
    pub reference_form_checked: u64,
}

impl LawReport {
    /// L1 through L5 plus the spectrum and telescoping cross-checks.
    pub fn all_passed(&self) -> bool {
        self.laws().iter().all(|l| l.passed)
    }

    pub fn laws(&self) -> [&LawOutcome; 7] {
        [
            &self.l1_step,
            &self.l2_interval,
            &self.l3_cyclic_shift,
            &self.l4_secant_counts,
            &self.l5_range,
            &self.profile_matches_spectrum,
            &self.telescoping,
        ]
    }
}

pub fn range_law(profile: &ProjectionProfile) -> LawOutcome {
    let mut out = LawOutcome::new("L5 range");
    let p = profile.p as f64;
    let lo = p.sqrt() / (2.0 * std::f64::consts::PI);
    let hi = p.sqrt() * p.ln();
    let r = profile.range() as f64;
    out.record(lo <= r && r <= hi, || {
        format!(
            "p={} range={} not in [{lo:.4}, {hi:.4}]",
            profile.p,
            profile.range()
        )
    });
    out
}

fn is_interval(pr: &[u32]) -> bool {
    let min = *pr.iter().min().unwrap();
    let max = *pr.iter().max().unwrap();
    let mut seen = vec![false; (max - min + 1) as usize];
    pr.iter().for_each(|&v| seen[(v - min) as usize] = true);
    seen.into_iter().all(|s| s)
}

/// Rebuilds `pr_1` from `pr_1(0)` and the step law. When `4 alpha = 1` the steps
/// are consecutive characters, and the sums are read off a [`Walk`].
pub fn profile_from_steps(
    field: &Field,
    chi: &QuadraticCharacter,
    params: &ParabolaParams,
    pr0: u32,
) -> Vec<u32> {
    let p = field.order();
    let four_alpha = field.mul(field.from_int(4), params.alpha);
    let mut out = Vec::with_capacity(p as usize);
    out.push(pr0);
    if four_alpha == 1 {
        // steps χ(c0 + j) with c0 = (beta-1)^2 - gamma
        let b1 = field.sub(params.beta, 1);
        let c0 = field.sub(field.mul(b1, b1), params.gamma);
        let walk = Walk::new(chi, c0);
        for b in 1..p as usize {
            out.push((pr0 as i64 + walk.values[b - 1]) as u32);
        }
    } else {
        let mut acc = pr0 as i64;
        for b in 0..p - 1 {
            acc += profile_step(field, chi, params, 1, b) as i64;
            out.push(acc as u32);
        }
    }
    out
}

fn find_shift(pr_d: &[u32], pr_1: &[u32], hint: usize) -> Option<usize> {
    let p = pr_1.len();
    let matches = |s: usize| (0..p).all(|b| pr_d[b] == pr_1[(b + s) % p]);
    if matches(hint) {
        return Some(hint);
    }
    (0..p).find(|&s| matches(s))
}

pub fn verify_projection_laws(
    plane: &ProjectivePlane,
    params: &ParabolaParams,
) -> Result<LawReport> {
    let field = plane.field();
    let p = check_slope_field(field, params, 1)?;
    let chi = QuadraticCharacter::for_field(field)?;
    let frame = plane.affine_frame();
    let set = parabola_region(plane, params)?;
    let spectrum = compute_spectrum(plane, &set);
    let secants = spectrum.secants();

    let mut l1 = LawOutcome::new("L1 step");
    let mut l2 = LawOutcome::new("L2 interval");
    let mut l3 = LawOutcome::new("L3 cyclic shift");
    let mut l4 = LawOutcome::new("L4 secant counts");
    let mut matches = LawOutcome::new("profile matches spectrum");
    let mut telescoping = LawOutcome::new("telescoping");
    let mut shifts = Vec::with_capacity(p as usize - 1);
    let mut reference_agree = 0;
    let mut reference_checked = 0;

    let pr1 = projection_profile(field, params, 1)?;
    let four_alpha_inv = field
        .inv(field.mul(field.from_int(4), params.alpha))
        .unwrap();
    let b1 = field.sub(params.beta, 1);
    let b1_sq = field.mul(b1, b1);

    let q1 = p as usize + 2;
    let mut direct_hist = vec![0u64; q1];

    for d in 1..p {
        let prof = projection_profile(field, params, d)?;
        for b in 0..p {
            let delta = prof.delta(b as usize);
            let step = profile_step(field, &chi, params, d, b) as i64;
            l1.record(delta == step, || {
                format!("d={d} b={b}: Δ={delta}, χ={step}")
            });
            l2.record(delta.abs() <= 1, || {
                format!("d={d} b={b}: |Δ|={}", delta.abs())
            });
            let reference = profile_step_reference_form(field, &chi, params, b) as i64;
            reference_checked += 1;
            reference_agree += (reference == delta) as u64;

            let line = frame.line(d, b);
            let k = secants[line];
            direct_hist[k as usize] += 1;
            matches.record(k == prof.pr[b as usize], || {
                format!("d={d} b={b}: pr={} n_l={k}", prof.pr[b as usize])
            });
        }
        l2.record(is_interval(&prof.pr), || {
            format!("d={d}: image not an interval")
        });

        let bd = field.sub(params.beta, d);
        let hint = field.mul(field.sub(field.mul(bd, bd), b1_sq), four_alpha_inv) as usize;
        match find_shift(&prof.pr, &pr1.pr, hint) {
            Some(s) => {
                l3.record(true, String::new);
                shifts.push(s as u32);
            }
            None => {
                l3.record(false, || format!("d={d}: no cyclic shift of pr_1"));
                shifts.push(u32::MAX);
            }
        }
    }

    let mut level_hist = vec![0u64; q1];
    pr1.pr.iter().for_each(|&k| level_hist[k as usize] += 1);
    for k in 0..q1 {
        let expect = (p as u64 - 1) * level_hist[k];
        l4.record(direct_hist[k] == expect, || {
            format!(
                "k={k}: {} lines, (p-1)·|{{b: pr_1(b)=k}}| = {expect}",
                direct_hist[k]
            )
        });
    }

    let rebuilt = profile_from_steps(field, &chi, params, pr1.pr[0]);
    for b in 0..p as usize {
        telescoping.record(rebuilt[b] == pr1.pr[b], || {
            format!("b={b}: telescoped {} vs {}", rebuilt[b], pr1.pr[b])
        });
    }

    Ok(LawReport {
        p,
        params: *params,
        l1_step: l1,
        l2_interval: l2,
        l3_cyclic_shift: l3,
        l4_secant_counts: l4,
        l5_range: range_law(&pr1),
        profile_matches_spectrum: matches,
        telescoping,
        shifts,
        range: pr1.range(),
        reference_form_agreements: reference_agree,
        reference_form_checked: reference_checked,
    })
}
