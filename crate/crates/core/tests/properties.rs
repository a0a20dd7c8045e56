use proptest::prelude::*;
use proptest::sample::select;

use secant_core::charwalk::profile_step;
use secant_core::construct::{random_set_serial, Density, FamilyParams};
use secant_core::ecurve::{line_curve_check_mb, LineCheck};
use secant_core::legit::verify_coloring;
use secant_core::*;

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 49];
const PRIMES: [u64; 10] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn euler(x: u64, p: u64) -> i32 {
    let x = x % p;
    if x == 0 {
        return 0;
    }
    let (mut b, mut e, mut r) = (x, (p - 1) / 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn random_points(plane: &ProjectivePlane, picks: &[u64]) -> PointSet {
    let n = plane.num_points();
    PointSet::from_indices(n, picks.iter().map(|&r| (r % n as u64) as usize))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in select(&ORDERS[..]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Field::new(q).unwrap();
        let (a, b, c) = (a % q as u32, b % q as u32, c % q as u32);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn character_is_multiplicative(p in select(vec![101u32, 65_537, 1_000_003]), a in 1u32..u32::MAX, b in 1u32..u32::MAX) {
        let chi = QuadraticCharacter::new(p).unwrap();
        let (a, b) = ((a % (p - 1)) + 1, (b % (p - 1)) + 1);
        let ab = (a as u64 * b as u64 % p as u64) as u32;
        prop_assert_eq!(chi.chi_residue(ab), chi.chi_residue(a) * chi.chi_residue(b));
        prop_assert_eq!(chi.chi_residue(a), euler(a as u64, p as u64));
    }

    #[test]
    fn two_points_one_line(q in select(&ORDERS[..]), x in any::<u64>(), y in any::<u64>()) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let n = plane.num_points() as u64;
        let (x, y) = ((x % n) as usize, (y % n) as usize);
        if x == y {
            prop_assert!(plane.line_through(x, y).is_err());
        } else {
            let l = plane.line_through(x, y).unwrap();
            prop_assert!(plane.is_incident(x, l) && plane.is_incident(y, l));
            let through_both = plane.lines_through_point(x).into_iter().filter(|&m| plane.is_incident(y, m)).count();
            prop_assert_eq!(through_both, 1);
            // dual: the two lines with indices x, y meet once
            let m = plane.meet(x, y).unwrap();
            prop_assert!(plane.is_incident(m, x) && plane.is_incident(m, y));
        }
    }

    #[test]
    fn incidence_lists_agree(q in select(&ORDERS[..]), l in any::<u64>()) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let l = (l % plane.num_lines() as u64) as usize;
        let pts = plane.points_on_line(l);
        prop_assert_eq!(pts.len(), q as usize + 1);
        for p in pts {
            prop_assert!(plane.lines_through_point(p).contains(&l));
        }
    }

    #[test]
    fn identities_complement_and_bound(q in select(&ORDERS[..]), picks in prop::collection::vec(any::<u64>(), 0..400)) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let set = random_points(&plane, &picks);
        let spec = compute_spectrum(&plane, &set);
        prop_assert!(verify_counting_identities(&spec).all_ok());
        prop_assert!(spec.satisfies_lower_bound());
        prop_assert!(spec.mode_count() >= cor_ceiling(q));
        let co = compute_spectrum(&plane, &set.complement());
        let mut rev = co.histogram().to_vec();
        rev.reverse();
        prop_assert_eq!(spec.histogram(), &rev[..]);
        let a = bounds_report(q, set.len() as u64);
        let b = bounds_report(q, plane.num_points() as u64 - set.len() as u64);
        prop_assert_eq!(a.variance, b.variance);
        prop_assert!((a.prop_bound - b.prop_bound).abs() <= 1e-9 * a.prop_bound.max(1.0));
    }

    #[test]
    fn random_sets_parallel_equals_serial(q in select(vec![7u64, 64, 131, 256]), seed in any::<u64>(), num in 1u64..8) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let d = Density::new(num, 8).unwrap();
        prop_assert_eq!(random_set(&plane, d, seed), random_set_serial(&plane, d, seed));
    }

    #[test]
    fn parabola_region_rows(p in select(&PRIMES[..]), al in 1u32..1000, be in 0u32..1000, ga in 0u32..1000) {
        let plane = ProjectivePlane::of_order(p).unwrap();
        let f = plane.field();
        let Ok(params) = ParabolaParams::new(f, al % p as u32, be, ga) else { return Ok(()); };
        let set = parabola_region(&plane, &params).unwrap();
        let frame = plane.affine_frame();
        let mut total = 0;
        for x in 0..p as u32 {
            let fx = params.eval(f, x);
            let row: Vec<u32> = (0..p as u32).filter(|&y| set.contains(frame.point(x, y))).collect();
            prop_assert_eq!(row, (fx + 1..p as u32).collect::<Vec<_>>());
            total += p as usize - 1 - fx as usize;
        }
        prop_assert_eq!(set.len(), total);
        prop_assert_eq!(compute_spectrum(&plane, &set).secants()[frame.infinite_line()], 0);
    }

    #[test]
    fn projection_step_law(p in select(&PRIMES[..]), al in 1u32..1000, be in 0u32..1000, ga in 0u32..1000, d in 1u32..1000) {
        let field = Field::new(p).unwrap();
        let Ok(params) = ParabolaParams::new(&field, al % p as u32, be, ga) else { return Ok(()); };
        let d = 1 + d % (p as u32 - 1);
        let chi = QuadraticCharacter::new(p as u32).unwrap();
        let prof = projection_profile(&field, &params, d).unwrap();
        for b in 0..p as u32 {
            // (β - d)^2 + 4α(b - γ), recomputed in plain integers
            let pi = p as i64;
            let disc = (params.beta as i64 - d as i64).pow(2) + 4 * params.alpha as i64 * (b as i64 - params.gamma as i64);
            let expect = euler(disc.rem_euclid(pi) as u64, p) as i64;
            prop_assert_eq!(prof.delta(b as usize), expect);
            prop_assert_eq!(profile_step(&field, &chi, &params, d, b) as i64, expect);
        }
    }

    #[test]
    fn family_and_curve_region_rows(p in select(&PRIMES[..]), num in 1u64..20) {
        let plane = ProjectivePlane::of_order(p).unwrap();
        let frame = plane.affine_frame();
        if let Ok(fp) = FamilyParams::new(p as u32, num, 20) {
            let spec = compute_spectrum(&plane, &parabola_family(&plane, &fp).unwrap());
            for c in 0..p as u32 {
                prop_assert_eq!(spec.secants()[frame.vertical(c)], fp.a);
            }
        }
        let ec = ec_region(&plane).unwrap();
        for x in 0..p as u32 {
            let row = (0..p as u32).filter(|&y| ec.contains(frame.point(x, y))).count();
            prop_assert_eq!(row, (p as usize + 1) / 2);
        }
    }

    #[test]
    fn curve_relation(p in select(&PRIMES[2..]), m in any::<i64>(), b in any::<i64>()) {
        let plane = ProjectivePlane::of_order(p).unwrap();
        let region = ec_region(&plane).unwrap();
        match line_curve_check_mb(&plane, &region, m, b).unwrap() {
            LineCheck::Checked(r) => prop_assert!(r.holds()),
            LineCheck::Skipped(_) => {
                let (pm, pb) = (m.rem_euclid(p as i64), b.rem_euclid(p as i64));
                prop_assert_eq!((-4 * pm.pow(3) + 27 * pb * pb).rem_euclid(p as i64), 0);
            }
        }
    }

    #[test]
    fn legit_colorings(n in 1usize..40, seed in any::<u64>(), mode in select(GeneratorMode::ALL.to_vec()), perm in any::<u64>()) {
        let h = generate_linear_hypergraph(n, seed, mode).permuted(perm);
        let c = two_phase_coloring(&h).unwrap();
        prop_assert_eq!(&c.blue_counts, &c.targets);
        prop_assert!(c.diagnostics.iter().all(|d| d.feasible()));
        prop_assert!(verify_coloring(&h, &c).unwrap().legitimate);
        prop_assert_eq!(two_phase_coloring(&h).unwrap(), c);
    }

    #[test]
    fn set_file_roundtrip(q in select(&ORDERS[..]), picks in prop::collection::vec(any::<u64>(), 0..60)) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let set = random_points(&plane, &picks);
        let file = SetFile::from_set(&plane, &set);
        prop_assert_eq!(file.to_set(&plane).unwrap(), set);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn local_search_respects_the_ceiling(q in select(vec![2u64, 3, 5, 7, 8]), seed in any::<u64>()) {
        let plane = ProjectivePlane::of_order(q).unwrap();
        let cfg = LocalSearchConfig { iters: 2000, restarts: 2, seed };
        let r = local_search(&plane, &cfg);
        prop_assert!(r.best_mode_count >= cor_ceiling(q));
        prop_assert_eq!(compute_spectrum(&plane, &r.witness).mode_count(), r.best_mode_count);
        prop_assert_eq!(local_search(&plane, &cfg), r);
    }
}
