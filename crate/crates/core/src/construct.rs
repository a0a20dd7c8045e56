//! Point-set constructions: seeded random sets, the region above a parabola, a
//! family of stacked parabolas and the region cut out by `x^3 - v` being a square.
//!
//! The structured constructions live in AG(2,p) for a prime `p` and never include
//! points on the line at infinity.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, QuadraticCharacter};
use crate::plane::ProjectivePlane;
use crate::spectrum::PointSet;

/// Name of the random-set generator, embedded in output metadata.
pub const RANDOM_SET_GENERATOR: &str = "chacha8-u64-per-point-v1";

/// Points per parallel block; a multiple of 64 so blocks own whole bitmap words.
const RANDOM_BLOCK: usize = 64 * 256;

/// A probability given as an exact fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Density(Ratio<u64>);

impl Density {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::param(format!("density {num}/{den} outside [0,1]")));
        }
        Ok(Density(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// `r` maps to `floor(r * den / 2^64)`, uniform on `[0, den)` up to 2^-64 bias.
    #[inline]
    fn accepts(&self, r: u64) -> bool {
        ((r as u128 * self.denom() as u128) >> 64) < self.numer() as u128
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = parse_fraction(s)?;
        if n < 0 || d < 0 {
            return Err(Error::param(format!("negative density {s}")));
        }
        Density::new(n as u64, d as u64)
    }
}

fn parse_fraction(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::param(format!("cannot parse {s:?} as an integer or fraction"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad())?;
    let d: i64 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok((n, d))
}

/// Parses `"3"`, `"-1"` or `"1/4"` as an element of a prime field.
pub fn parse_residue(field: &Field, s: &str) -> Result<Elem> {
    let (n, d) = parse_fraction(s)?;
    let d = field.from_int(d);
    let inv = field
        .inv(d)
        .ok_or_else(|| Error::param(format!("{s}: denominator vanishes mod {}", field.order())))?;
    Ok(field.mul(field.from_int(n), inv))
}

/// Each of the `N` points independently with probability `density`. Point `i`
/// consumes the `i`-th `u64` of the ChaCha8 stream seeded by `seed`, so blocks
/// can be generated in parallel and still match serial output.
pub fn random_set(plane: &ProjectivePlane, density: Density, seed: u64) -> PointSet {
    let n = plane.num_points();
    let mut words = vec![0u64; n.div_ceil(64)];
    words
        .par_chunks_mut(RANDOM_BLOCK / 64)
        .enumerate()
        .for_each(|(block, out)| {
            let start = block * RANDOM_BLOCK;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(2 * start as u128);
            for i in start..(start + RANDOM_BLOCK).min(n) {
                if density.accepts(rng.next_u64()) {
                    out[(i - start) / 64] |= 1 << (i % 64);
                }
            }
        });
    PointSet::from_words(n, words)
}

/// Serial reference for [`random_set`].
pub fn random_set_serial(plane: &ProjectivePlane, density: Density, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointSet::from_indices(
        plane.num_points(),
        (0..plane.num_points()).filter(|_| density.accepts(rng.next_u64())),
    )
}

fn require_prime_plane(plane: &ProjectivePlane, min_exclusive: u32) -> Result<u32> {
    let f = plane.field();
    if !f.is_prime_field() {
        return Err(Error::param(format!(
            "construction needs a prime field, got order {}",
            f.order()
        )));
    }
    if f.order() <= min_exclusive {
        return Err(Error::param(format!(
            "construction needs p > {min_exclusive}, got {}",
            f.order()
        )));
    }
    Ok(f.order())
}

/// Coefficients of `alpha x^2 + beta x + gamma`, as residues mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolaParams {
    pub alpha: Elem,
    pub beta: Elem,
    pub gamma: Elem,
}

impl ParabolaParams {
    pub fn new(field: &Field, alpha: Elem, beta: Elem, gamma: Elem) -> Result<Self> {
        if !field.is_prime_field() || field.order() <= 3 {
            return Err(Error::param("parabola needs a prime field with p > 3"));
        }
        let (alpha, beta, gamma) = (
            alpha % field.order(),
            beta % field.order(),
            gamma % field.order(),
        );
        if alpha == 0 {
            return Err(Error::param("alpha must be nonzero"));
        }
        Ok(ParabolaParams { alpha, beta, gamma })
    }

    /// Parses each coefficient with [`parse_residue`].
    pub fn parse(field: &Field, alpha: &str, beta: &str, gamma: &str) -> Result<Self> {
        Self::new(
            field,
            parse_residue(field, alpha)?,
            parse_residue(field, beta)?,
            parse_residue(field, gamma)?,
        )
    }

    #[inline]
    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        field.add(
            field.mul(field.add(field.mul(self.alpha, x), self.beta), x),
            self.gamma,
        )
    }
}

/// Affine points strictly above the parabola in the integer-lift order:
/// `lift(alpha x^2 + beta x + gamma) < lift(y)`.
pub fn parabola_region(plane: &ProjectivePlane, params: &ParabolaParams) -> Result<PointSet> {
    let p = require_prime_plane(plane, 3)?;
    if params.alpha == 0 || params.alpha >= p || params.beta >= p || params.gamma >= p {
        return Err(Error::param("parabola parameters out of range"));
    }
    let f = plane.field();
    let frame = plane.affine_frame();
    let mut set = PointSet::empty(plane.num_points());
    for x in 0..p {
        let fx = params.eval(f, x);
        for y in fx + 1..p {
            set.insert(frame.point(x, y));
        }
    }
    Ok(set)
}

/// The fraction `c` and the derived stack height `a = floor(c p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub c: Ratio<u64>,
    pub a: u32,
}

impl FamilyParams {
    pub fn new(p: u32, num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::param(format!("c = {num}/{den} must lie in (0,1)")));
        }
        let a = (num as u128 * p as u128 / den as u128) as u64;
        if a < 1 || a > p as u64 - 1 {
            return Err(Error::param(format!(
                "a = floor({num}/{den} * {p}) = {a} outside [1, p-1]"
            )));
        }
        Ok(FamilyParams {
            c: Ratio::new(num, den),
            a: a as u32,
        })
    }
}

/// `{(x, x^2 + t) : x in F_p, 0 <= t < a}`.
pub fn parabola_family(plane: &ProjectivePlane, params: &FamilyParams) -> Result<PointSet> {
    let p = require_prime_plane(plane, 2)?;
    if params.a < 1 || params.a >= p {
        return Err(Error::param(format!("a = {} outside [1, p-1]", params.a)));
    }
    let f = plane.field();
    let frame = plane.affine_frame();
    let mut set = PointSet::empty(plane.num_points());
    for x in 0..p {
        let sq = f.mul(x, x);
        for t in 0..params.a {
            set.insert(frame.point(x, f.add(sq, t)));
        }
    }
    Ok(set)
}

/// `{(x, v) : x^3 - v is a square in F_p}` (zero counts as a square).
pub fn ec_region(plane: &ProjectivePlane) -> Result<PointSet> {
    let p = require_prime_plane(plane, 3)?;
    let f = plane.field();
    let chi = QuadraticCharacter::for_field(f)?;
    let frame = plane.affine_frame();
    let mut set = PointSet::empty(plane.num_points());
    for x in 0..p {
        let cube = f.mul(f.mul(x, x), x);
        for v in 0..p {
            if chi.chi_residue(f.sub(cube, v)) >= 0 {
                set.insert(frame.point(x, v));
            }
        }
    }
    Ok(set)
}

/// A construction named on the command line, e.g. `random:density=1/2,seed=7`,
/// `parabola:a=1/4,b=1,g=1`, `family:c=1/2` or `ecregion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionSpec {
    Random {
        density: Density,
        seed: Option<u64>,
    },
    /// Coefficients kept as text until a field is known.
    Parabola {
        alpha: String,
        beta: String,
        gamma: String,
    },
    Family {
        num: u64,
        den: u64,
    },
    EcRegion,
}

impl ConstructionSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionSpec::Random { .. } => "random",
            ConstructionSpec::Parabola { .. } => "parabola",
            ConstructionSpec::Family { .. } => "family",
            ConstructionSpec::EcRegion => "ecregion",
        }
    }

    /// Same construction with its seed replaced.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            ConstructionSpec::Random { density, .. } => ConstructionSpec::Random {
                density: *density,
                seed: Some(seed),
            },
            other => other.clone(),
        }
    }

    /// Builds the set; random constructions without their own seed use `default_seed`.
    pub fn build(&self, plane: &ProjectivePlane, default_seed: u64) -> Result<PointSet> {
        match self {
            ConstructionSpec::Random { density, seed } => {
                Ok(random_set(plane, *density, seed.unwrap_or(default_seed)))
            }
            ConstructionSpec::Parabola { alpha, beta, gamma } => {
                require_prime_plane(plane, 3)?;
                let params = ParabolaParams::parse(plane.field(), alpha, beta, gamma)?;
                parabola_region(plane, &params)
            }
            ConstructionSpec::Family { num, den } => {
                let p = require_prime_plane(plane, 2)?;
                parabola_family(plane, &FamilyParams::new(p, *num, *den)?)
            }
            ConstructionSpec::EcRegion => ec_region(plane),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::Random { density, seed } => {
                write!(f, "random:density={density}")?;
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
            ConstructionSpec::Parabola { alpha, beta, gamma } => {
                write!(f, "parabola:a={alpha},b={beta},g={gamma}")
            }
            ConstructionSpec::Family { num, den } => write!(f, "family:c={num}/{den}"),
            ConstructionSpec::EcRegion => write!(f, "ecregion"),
        }
    }
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::param(format!("expected key=value, got {part:?}")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |keys: &[&str]| keys.iter().find_map(|k| kv.remove(*k));
        let spec = match kind.trim() {
            "random" => ConstructionSpec::Random {
                density: take(&["density", "d"])
                    .ok_or_else(|| Error::param("random construction needs density="))?
                    .parse()?,
                seed: take(&["seed"])
                    .map(|s| {
                        s.parse()
                            .map_err(|_| Error::param(format!("bad seed {s:?}")))
                    })
                    .transpose()?,
            },
            "parabola" => ConstructionSpec::Parabola {
                alpha: take(&["a", "alpha"]).unwrap_or_else(|| "1".into()),
                beta: take(&["b", "beta"]).unwrap_or_else(|| "0".into()),
                gamma: take(&["g", "gamma"]).unwrap_or_else(|| "0".into()),
            },
            "family" => {
                let c = take(&["c"]).ok_or_else(|| Error::param("family needs c=NUM/DEN"))?;
                let (num, den) = parse_fraction(&c)?;
                if num <= 0 || den <= 0 {
                    return Err(Error::param(format!("c = {c} must lie in (0,1)")));
                }
                ConstructionSpec::Family {
                    num: num as u64,
                    den: den as u64,
                }
            }
            "ecregion" => ConstructionSpec::EcRegion,
            other => return Err(Error::param(format!("unknown construction {other:?}"))),
        };
        if let Some(k) = kv.keys().next() {
            return Err(Error::param(format!("unknown key {k:?} for {kind}")));
        }
        Ok(spec)
    }
}

/// On-disk point set: affine points as `[x, y]`, points at infinity as normalized
/// triples. Reading accepts any nonzero triple in `projective`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFile {
    pub q: u64,
    #[serde(default)]
    pub affine: Vec<[u32; 2]>,
    #[serde(default)]
    pub projective: Vec<[u32; 3]>,
}

impl SetFile {
    pub fn from_set(plane: &ProjectivePlane, set: &PointSet) -> Self {
        let frame = plane.affine_frame();
        let mut affine = Vec::new();
        let mut projective = Vec::new();
        for p in set.iter() {
            match frame.coords(p) {
                Some((x, y)) => affine.push([x, y]),
                None => projective.push(plane.point(p)),
            }
        }
        affine.sort_unstable();
        SetFile {
            q: plane.order() as u64,
            affine,
            projective,
        }
    }

    pub fn to_set(&self, plane: &ProjectivePlane) -> Result<PointSet> {
        if self.q != plane.order() as u64 {
            return Err(Error::Input(format!(
                "set file is for q = {}, plane has q = {}",
                self.q,
                plane.order()
            )));
        }
        let q = self.q as u32;
        let frame = plane.affine_frame();
        let mut set = PointSet::empty(plane.num_points());
        for &[x, y] in &self.affine {
            if x >= q || y >= q {
                return Err(Error::Input(format!(
                    "affine point ({x},{y}) outside F_{q}"
                )));
            }
            set.insert(frame.point(x, y));
        }
        for &t in &self.projective {
            let idx = plane
                .index_of(t)
                .ok_or_else(|| Error::Input(format!("invalid projective point {t:?}")))?;
            set.insert(idx);
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;

    fn plane(q: u64) -> ProjectivePlane {
        ProjectivePlane::of_order(q).unwrap()
    }

    fn params(pl: &ProjectivePlane, a: &str, b: &str, g: &str) -> ParabolaParams {
        ParabolaParams::parse(pl.field(), a, b, g).unwrap()
    }

    #[test]
    fn random_extremes_and_determinism() {
        let pl = plane(7);
        let half = Density::new(1, 2).unwrap();
        assert!(random_set(&pl, Density::new(0, 1).unwrap(), 3).is_empty());
        assert_eq!(random_set(&pl, Density::new(1, 1).unwrap(), 3).len(), 57);
        assert_eq!(random_set(&pl, half, 11), random_set(&pl, half, 11));
        assert_ne!(random_set(&pl, half, 11), random_set(&pl, half, 12));
    }

    #[test]
    fn parallel_random_matches_serial() {
        let pl = plane(199);
        let d = Density::new(1, 3).unwrap();
        for seed in [0, 1, 99] {
            assert_eq!(random_set(&pl, d, seed), random_set_serial(&pl, d, seed));
        }
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let a = one.install(|| random_set(&pl, d, 5));
        assert_eq!(a, random_set(&pl, d, 5));
    }

    #[test]
    fn random_size_concentrates() {
        let pl = plane(499);
        let n = pl.num_points() as f64;
        let s = random_set(&pl, Density::new(1, 2).unwrap(), 2024).len() as f64;
        assert!((s - n / 2.0).abs() <= 4.0 * (n / 4.0).sqrt(), "{s}");
    }

    fn brute_region(p: u32, a: u32, b: u32, g: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for x in 0..p {
            let fx = ((a as u64 * x as u64 * x as u64 + b as u64 * x as u64 + g as u64) % p as u64)
                as u32;
            for y in 0..p {
                if fx < y {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn parabola_region_examples() {
        let pl5 = plane(5);
        let s5 = parabola_region(&pl5, &params(&pl5, "1", "0", "0")).unwrap();
        assert_eq!(s5.len(), 10);
        let fr = pl5.affine_frame();
        assert!(s5.contains(fr.point(1, 2)));
        assert!(!s5.contains(fr.point(2, 1)));
        let per_x: Vec<usize> = (0..5)
            .map(|x| (0..5).filter(|&y| s5.contains(fr.point(x, y))).count())
            .collect();
        assert_eq!(per_x, vec![4, 3, 0, 0, 3]);

        let pl7 = plane(7);
        let s7 = parabola_region(&pl7, &params(&pl7, "1", "0", "0")).unwrap();
        assert_eq!(s7.len(), 28);
        let fr7 = pl7.affine_frame();
        let per_x: Vec<usize> = (0..7)
            .map(|x| (0..7).filter(|&y| s7.contains(fr7.point(x, y))).count())
            .collect();
        assert_eq!(per_x, vec![6, 5, 2, 4, 4, 2, 5]);
    }

    #[test]
    fn parabola_region_matches_brute_force() {
        for p in [5u64, 7, 11, 13] {
            let pl = plane(p);
            let fr = pl.affine_frame();
            for (a, b, g) in [(1, 0, 0), (2, 3, 1), (p as u32 - 1, 4, 2)] {
                let prm = ParabolaParams::new(pl.field(), a, b, g).unwrap();
                let s = parabola_region(&pl, &prm).unwrap();
                let expect = PointSet::from_indices(
                    pl.num_points(),
                    brute_region(p as u32, a, b, g)
                        .into_iter()
                        .map(|(x, y)| fr.point(x, y)),
                );
                assert_eq!(s, expect);
                assert!(pl
                    .points_on_line(fr.infinite_line())
                    .iter()
                    .all(|&q| !s.contains(q)));
            }
        }
    }

    #[test]
    fn parabola_parameter_errors() {
        let pl = plane(5);
        assert!(ParabolaParams::parse(pl.field(), "0", "1", "1").is_err());
        assert!(ParabolaParams::parse(pl.field(), "5", "1", "1").is_err());
        let f3 = Field::new(3).unwrap();
        assert!(ParabolaParams::new(&f3, 1, 0, 0).is_err());
        let p3 = plane(3);
        let spec: ConstructionSpec = "parabola:a=1,b=0,g=0".parse().unwrap();
        assert!(spec.build(&p3, 0).is_err());
        assert!(spec.build(&plane(9), 0).is_err());
        // 1/4 mod 5 = 4
        assert_eq!(params(&pl, "1/4", "1", "1").alpha, 4);
    }

    #[test]
    fn family_examples() {
        let pl7 = plane(7);
        let fp = FamilyParams::new(7, 3, 10).unwrap();
        assert_eq!(fp.a, 2);
        let s = parabola_family(&pl7, &fp).unwrap();
        assert_eq!(s.len(), 14);
        assert!(s.contains(pl7.affine_frame().point(3, 3)));

        let pl11 = plane(11);
        let fp = FamilyParams::new(11, 1, 2).unwrap();
        assert_eq!(fp.a, 5);
        assert_eq!(parabola_family(&pl11, &fp).unwrap().len(), 55);

        assert!(FamilyParams::new(7, 1, 10).is_err()); // a = 0
        assert!(FamilyParams::new(7, 1, 1).is_err());
    }

    #[test]
    fn family_vertical_lines_meet_a_points() {
        for p in [5u64, 7, 13, 29] {
            let pl = plane(p);
            let fr = pl.affine_frame();
            let fp = FamilyParams::new(p as u32, 1, 2).unwrap();
            let s = parabola_family(&pl, &fp).unwrap();
            for c in 0..p as u32 {
                let hits = pl
                    .points_on_line(fr.vertical(c))
                    .iter()
                    .filter(|&&x| s.contains(x))
                    .count();
                assert_eq!(hits, fp.a as usize);
            }
        }
    }

    #[test]
    fn ec_region_examples() {
        let pl5 = plane(5);
        let s = ec_region(&pl5).unwrap();
        assert_eq!(s.len(), 15);
        let fr = pl5.affine_frame();
        assert!(s.contains(fr.point(1, 2)));
        for p in (5..60u64).filter(|&p| is_prime(p)) {
            let pl = plane(p);
            let fr = pl.affine_frame();
            let s = ec_region(&pl).unwrap();
            assert_eq!(s.len() as u64, p * (p + 1) / 2);
            assert!(s.contains(fr.point(0, 0)));
            for x in 0..p as u32 {
                let row = (0..p as u32)
                    .filter(|&v| s.contains(fr.point(x, v)))
                    .count() as u64;
                assert_eq!(row, (p + 1) / 2);
            }
        }
        assert!(ec_region(&plane(3)).is_err());
    }

    #[test]
    fn construction_spec_round_trip() {
        for s in [
            "random:density=1/2,seed=7",
            "random:density=3/4",
            "parabola:a=1/4,b=1,g=1",
            "family:c=3/10",
            "ecregion",
        ] {
            let spec: ConstructionSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("random:seed=1".parse::<ConstructionSpec>().is_err());
        assert!("random:density=3/2".parse::<ConstructionSpec>().is_err());
        assert!("blob".parse::<ConstructionSpec>().is_err());
        assert!("family:c=1/2,zz=1".parse::<ConstructionSpec>().is_err());
    }

    #[test]
    fn set_file_round_trip() {
        let pl = plane(7);
        let mut set = ec_region(&pl).unwrap();
        set.insert(pl.index_of([1, 3, 0]).unwrap());
        let file = SetFile::from_set(&pl, &set);
        assert_eq!(file.projective, vec![[1, 3, 0]]);
        let json = serde_json::to_string(&file).unwrap();
        let back: SetFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_set(&pl).unwrap(), set);
        assert!(SetFile {
            q: 5,
            ..back.clone()
        }
        .to_set(&pl)
        .is_err());
    }
}
