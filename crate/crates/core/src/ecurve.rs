//! Weierstrass curves over prime fields and their link to the cubic region.
//!
//! For the line `v = m x + b`, the secant size of `{(x, v) : x^3 - v is a square}`
//! counts the `x` with `x^3 - m x - b` a square or zero. Each nonzero square
//! gives two points of `Y^2 = X^3 - m X - b` and each root gives one, so
//! `|E| = 2 n_l + 1 - Z` where `Z` is the number of distinct roots of the cubic
//! and the `1` is the point at infinity.

use serde::Serialize;

use crate::construct::ec_region;
use crate::error::{Error, Result};
use crate::field::{is_prime, Elem, QuadraticCharacter};
use crate::plane::{AffineLine, ProjectivePlane};
use crate::spectrum::{compute_spectrum, verify_counting_identities, IdentityCheck, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub p: u32,
    pub a: u32,
    pub b: u32,
    /// Projective point count, including the point at infinity.
    pub count: u64,
    /// `p + 1 - count`
    pub trace: i64,
}

impl Curve {
    /// `|t| <= 2 sqrt(p)`, checked as `t^2 <= 4p`.
    pub fn satisfies_hasse(&self) -> bool {
        (self.trace as i128).pow(2) <= 4 * self.p as i128
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p <= 3 || !is_prime(p as u64) {
        return Err(Error::param(format!("need a prime p > 3, got {p}")));
    }
    Ok(())
}

fn reduce(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// `4a^3 + 27b^2 mod p`.
pub fn discriminant(p: u32, a: u32, b: u32) -> u32 {
    let p64 = p as u64;
    let (a, b) = (a as u64, b as u64);
    ((4 * (a * a % p64) % p64 * a + 27 * (b * b % p64)) % p64) as u32
}

/// `1 + Σ_x (1 + χ(x^3 + a x + b))`, without the singularity check.
pub fn curve_count_with(chi: &QuadraticCharacter, a: u32, b: u32) -> u64 {
    let p = chi.modulus() as u64;
    let (a, b) = (a as u64, b as u64);
    let mut total = 1i64;
    for x in 0..p {
        let rhs = ((x * x % p * x) + a * x + b) % p;
        total += 1 + chi.chi_residue(rhs as u32) as i64;
    }
    total as u64
}

pub fn curve_count(p: u32, a: i64, b: i64) -> Result<Curve> {
    check_prime(p)?;
    let (a, b) = (reduce(a, p), reduce(b, p));
    if discriminant(p, a, b) == 0 {
        return Err(Error::SingularCurve);
    }
    let chi = QuadraticCharacter::new(p)?;
    let count = curve_count_with(&chi, a, b);
    Ok(Curve {
        p,
        a,
        b,
        count,
        trace: p as i64 + 1 - count as i64,
    })
}

/// Distinct roots of `x^3 - m x - b` in F_p, by scanning.
pub fn cubic_root_count(p: u32, m: i64, b: i64) -> Result<u32> {
    check_prime(p)?;
    Ok(cubic_roots(p, reduce(m, p), reduce(b, p)))
}

fn cubic_roots(p: u32, m: u32, b: u32) -> u32 {
    let p64 = p as u64;
    (0..p64)
        .filter(|&x| (x * x % p64 * x + (p64 - m as u64) * x % p64 + p64 - b as u64) % p64 == 0)
        .count() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LineCurveRelation {
    pub m: u32,
    pub b: u32,
    pub secant: u32,
    pub roots: u32,
    pub curve_count: u64,
}

impl LineCurveRelation {
    /// `curve_count = 2 n_l + 1 - Z`
    pub fn holds(&self) -> bool {
        self.curve_count as i64 == 2 * self.secant as i64 + 1 - self.roots as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    Vertical,
    Infinite,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineCheck {
    Checked(LineCurveRelation),
    Skipped(SkipReason),
}

/// Relates line `line` of the plane to `Y^2 = X^3 - m X - b`, reading `n_l`
/// off `region`.
pub fn line_curve_check(
    plane: &ProjectivePlane,
    region: &PointSet,
    line: usize,
) -> Result<LineCheck> {
    let p = plane.order() as u32;
    check_prime(p)?;
    if !plane.field().is_prime_field() {
        return Err(Error::param("elliptic-curve checks need a prime field"));
    }
    let chi = QuadraticCharacter::new(p)?;
    let frame = plane.affine_frame();
    Ok(match frame.classify(line) {
        AffineLine::Vertical { .. } => LineCheck::Skipped(SkipReason::Vertical),
        AffineLine::Infinite => LineCheck::Skipped(SkipReason::Infinite),
        AffineLine::Sloped { d, b } => {
            let mut secant = 0;
            plane.for_each_point_on_line(line, |pt| secant += region.contains(pt) as u32);
            check_with(&chi, d, b, secant)
        }
    })
}

/// [`line_curve_check`] for the line `v = m x + b`.
pub fn line_curve_check_mb(
    plane: &ProjectivePlane,
    region: &PointSet,
    m: i64,
    b: i64,
) -> Result<LineCheck> {
    let p = plane.order() as u32;
    check_prime(p)?;
    let line = plane.affine_frame().line(reduce(m, p), reduce(b, p));
    line_curve_check(plane, region, line)
}

fn check_with(chi: &QuadraticCharacter, m: Elem, b: Elem, secant: u32) -> LineCheck {
    let p = chi.modulus();
    let neg_m = reduce(-(m as i64), p);
    let neg_b = reduce(-(b as i64), p);
    // -4m^3 + 27b^2 = discriminant of X^3 + (-m) X + (-b)
    if discriminant(p, neg_m, neg_b) == 0 {
        return LineCheck::Skipped(SkipReason::Singular);
    }
    LineCheck::Checked(LineCurveRelation {
        m,
        b,
        secant,
        roots: cubic_roots(p, m, b),
        curve_count: curve_count_with(chi, neg_m, neg_b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcScanReport {
    pub p: u32,
    pub set_size: usize,
    pub histogram: Vec<u64>,
    pub mode_k: usize,
    pub mode_count: u64,
    pub relation_violations: u64,
    pub checked_lines: u64,
    pub skipped_lines: u64,
    pub skipped_vertical: u64,
    pub skipped_singular: u64,
    pub identities: IdentityCheck,
    pub lower_bound_ok: bool,
    /// `p^{3/2} ln p (ln ln p)^2`, for scale only.
    pub reference_scale: f64,
    pub mode_ratio: f64,
    pub first_violation: Option<LineCurveRelation>,
}

pub fn ec_spectrum_scan(plane: &ProjectivePlane) -> Result<EcScanReport> {
    let p = plane.order() as u32;
    check_prime(p)?;
    let region = ec_region(plane)?;
    let spectrum = compute_spectrum(plane, &region);
    let chi = QuadraticCharacter::new(p)?;
    let frame = plane.affine_frame();

    let mut checked = 0;
    let mut violations = 0;
    let mut singular = 0;
    let mut first_violation = None;
    for m in 0..p {
        for b in 0..p {
            let secant = spectrum.secants()[frame.line(m, b)];
            match check_with(&chi, m, b, secant) {
                LineCheck::Checked(rel) => {
                    checked += 1;
                    if !rel.holds() {
                        violations += 1;
                        first_violation.get_or_insert(rel);
                    }
                }
                LineCheck::Skipped(_) => singular += 1,
            }
        }
    }
    // p verticals plus the line at infinity
    let vertical = p as u64 + 1;
    let pf = p as f64;
    let scale = pf.powf(1.5) * pf.ln() * pf.ln().ln().powi(2);
    Ok(EcScanReport {
        p,
        set_size: region.len(),
        histogram: spectrum.histogram().to_vec(),
        mode_k: spectrum.mode_k(),
        mode_count: spectrum.mode_count(),
        relation_violations: violations,
        checked_lines: checked,
        skipped_lines: singular + vertical,
        skipped_vertical: vertical,
        skipped_singular: singular,
        identities: verify_counting_identities(&spectrum),
        lower_bound_ok: spectrum.satisfies_lower_bound(),
        reference_scale: scale,
        mode_ratio: spectrum.mode_count() as f64 / scale,
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts pairs (x, y) with y^2 = x^3 + a x + b, plus infinity.
    fn brute_count(p: u64, a: u64, b: u64) -> u64 {
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if (y * y) % p == (x * x * x + a * x + b) % p {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn count_examples() {
        let c = curve_count(5, 0, 1).unwrap();
        assert_eq!((c.count, c.trace), (6, 0));
        assert_eq!(curve_count(5, 0, 0), Err(Error::SingularCurve));
        assert_eq!(curve_count(5, -1, 0).unwrap().count, 8);
        assert!(curve_count(3, 1, 1).is_err());
        assert!(curve_count(9, 1, 1).is_err());
    }

    #[test]
    fn character_count_matches_enumeration() {
        for p in [5u32, 7, 11, 13] {
            for a in 0..p {
                for b in 0..p {
                    match curve_count(p, a as i64, b as i64) {
                        Ok(c) => {
                            assert_eq!(c.count, brute_count(p as u64, a as u64, b as u64));
                            assert!(c.satisfies_hasse());
                        }
                        Err(e) => assert_eq!(e, Error::SingularCurve),
                    }
                }
            }
        }
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(cubic_root_count(5, 1, 0).unwrap(), 3);
        assert_eq!(cubic_root_count(5, 0, 2).unwrap(), 1);
        assert_eq!(cubic_root_count(7, 0, 1).unwrap(), 3);
    }

    #[test]
    fn line_relation_examples() {
        let pl = ProjectivePlane::of_order(5).unwrap();
        let region = ec_region(&pl).unwrap();
        match line_curve_check_mb(&pl, &region, 1, 0).unwrap() {
            LineCheck::Checked(rel) => {
                assert_eq!((rel.secant, rel.roots, rel.curve_count), (5, 3, 8));
                assert!(rel.holds());
            }
            other => panic!("{other:?}"),
        }
        match line_curve_check_mb(&pl, &region, 0, 1).unwrap() {
            LineCheck::Checked(rel) => {
                let expect_n = (0..5u64).filter(|x| {
                    let v = (x * x * x + 4) % 5; // x^3 - 1
                    v == 0 || v == 1 || v == 4
                });
                assert_eq!(rel.secant as usize, expect_n.count());
                assert_eq!(rel.curve_count, brute_count(5, 0, 4));
                assert!(rel.holds());
            }
            other => panic!("{other:?}"),
        }
        // m = 3: -4*27 + 27 b^2 = 27 (b^2 - 4) vanishes for b = ±2
        assert_eq!(
            line_curve_check_mb(&pl, &region, 3, 2).unwrap(),
            LineCheck::Skipped(SkipReason::Singular)
        );
        let fr = pl.affine_frame();
        assert_eq!(
            line_curve_check(&pl, &region, fr.vertical(1)).unwrap(),
            LineCheck::Skipped(SkipReason::Vertical)
        );
    }

    #[test]
    fn scan_p5() {
        let pl = ProjectivePlane::of_order(5).unwrap();
        let rep = ec_spectrum_scan(&pl).unwrap();
        assert_eq!(rep.set_size, 15);
        assert_eq!(rep.relation_violations, 0);
        assert_eq!(rep.checked_lines + rep.skipped_singular, 25);
        assert_eq!(rep.skipped_lines, rep.skipped_singular + 6);
        assert!(rep.identities.all_ok());
        assert!(rep.lower_bound_ok);
    }
}
