//! Acceptance suite: one test per criterion, each printing a pass/fail line.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use qblock::bounds::{
    self, bounds_table, coefficient_sequence, f_opt, f_star, further_better_diff, u_step,
};
use qblock::constructions::{beutel_blocking, explicit_st, improved_21};
use qblock::gfq::FieldSpec;
use qblock::pgspace::{
    gaussian_binomial, grassmann_enumerate, map_pi, map_rho, pullback_delta, QuotientFrame,
    Subspace,
};
use qblock::polarity::form_absolute_for;
use qblock::verifier::{degree_profile, is_blocking, restrict, Layer};

fn report(criterion: u32, what: &str, ok: bool) {
    println!(
        "acceptance criterion {criterion} ({what}): {}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {what}");
}

#[test]
fn criterion_1_published_bound_table() {
    let expected: [(u64, [(u64, u64); 6]); 2] = [
        (
            2,
            [
                (27, 27),
                (114, 122),
                (468, 517),
                (1895, 2125),
                (7625, 8627),
                (30590, 34762),
            ],
        ),
        (
            3,
            [
                (103, 103),
                (938, 966),
                (8474, 8812),
                (76360, 79660),
                (687520, 718033),
                (6188519, 6465576),
            ],
        ),
    ];
    let mut ok = true;
    for (q, rows) in expected {
        let table = bounds_table(q, 9).unwrap();
        for (row, (lo, hi)) in table.iter().zip(rows) {
            ok &= row.lower_schonheim == BigInt::from(lo);
            ok &= row.upper_fstar == BigInt::from(hi);
        }
    }
    report(1, "published bound table values", ok);
}

#[test]
fn criterion_2_coefficient_table() {
    let rows: [(usize, &[i64]); 8] = [
        (2, &[1]),
        (3, &[1, 0, 1]),
        (4, &[1, 0, 2, 1, 1]),
        (5, &[1, 0, 2, 2, 2, 1, 0]),
        (6, &[1, 0, 2, 2, 3, 2, 1, 0, 1]),
        (7, &[1, 0, 2, 2, 3, 3, 2, 1, 1, 0, 1]),
        (8, &[1, 0, 2, 2, 3, 3, 3, 2, 2, 1, 2, 1, 1]),
        (9, &[1, 0, 2, 2, 3, 3, 3, 3, 3, 2, 3, 2, 2, 1, 0]),
    ];
    let mut ok = true;
    for (n, row) in rows {
        let want: Vec<BigInt> = row.iter().map(|&c| BigInt::from(c)).collect();
        ok &= coefficient_sequence(n) == want;
    }
    let prefix: Vec<BigInt> = [1, 0, 2, 2, 3, 3, 3, 3].iter().map(|&c| BigInt::from(c)).collect();
    for n in 9..=40usize {
        ok &= coefficient_sequence(n)[..8] == prefix[..];
    }
    report(2, "coefficient sequences and stable prefix", ok);
}

#[test]
fn criterion_3_constructions_verified_exhaustively() {
    let cases: [(usize, u64, u64); 7] = [
        (3, 2, 5),
        (3, 3, 10),
        (4, 2, 27),
        (4, 3, 103),
        (5, 2, 122),
        (5, 3, 966),
        (6, 2, 517),
    ];
    let mut ok = true;
    for (n, q, size) in cases {
        let b = improved_21(n, q).unwrap();
        let size_ok = b.len() as u64 == size
            && BigInt::from(size) == f_star(n as isize, q);
        let field = FieldSpec::new(q).unwrap();
        let rep = is_blocking(&field, &b, 2).unwrap();
        if !(size_ok && rep.blocked) {
            println!("  construction n={n}, q={q}: size {} (want {size}), blocked {}", b.len(), rep.blocked);
            ok = false;
        }
    }
    report(3, "recursive construction sizes and exhaustive blocking", ok);
}

#[test]
fn criterion_4_general_recursion_and_subspace_spread() {
    let f2 = FieldSpec::new(2).unwrap();
    let mut ok = true;

    for k in 0..=1isize {
        let b = explicit_st(5, 3, 1, 2, k).unwrap();
        let rep = is_blocking(&f2, &b, 3).unwrap();
        ok &= rep.blocked && rep.s_spaces_checked == 651;
    }

    let b = beutel_blocking(5, 4, 1, 2).unwrap();
    ok &= b.len() == 5;
    let rep = is_blocking(&f2, &b, 4).unwrap();
    ok &= rep.blocked && rep.s_spaces_checked == 63;

    report(4, "general (s,t) recursion and subspace spread", ok);
}

#[test]
fn criterion_5_two_step_comparison_polynomials() {
    fn check_valid(n: isize, k: isize) -> bool {
        k >= -1 && 2 * k <= n - 1
    }
    let mut ok = true;
    let mut tested = 0u32;
    for big_n in 3..=14isize {
        for n in 1..=big_n - 2 {
            let d = big_n - n - 2;
            for k1 in 0..=d {
                let k2 = d - k1;
                for l1 in -1..=d {
                    let l2 = d - l1;
                    if k2 >= l2
                        || !check_valid(big_n, k1)
                        || !check_valid(n + k2 + 1, k2)
                        || !check_valid(big_n, l1)
                        || !check_valid(n + l2 + 1, l2)
                    {
                        continue;
                    }
                    let diff = further_better_diff(n, k1, k2, l1, l2).unwrap();
                    ok &= diff.degree() == Some((2 * k1 + k2) as usize);
                    ok &= diff.leading_coeff() == BigInt::one();
                    ok &= diff.eval_u64(101).is_positive();
                    tested += 1;
                }
            }
        }
    }
    report(5, &format!("two-step comparison ({tested} instances)"), ok && tested > 0);
}

#[test]
fn criterion_6_property_suites() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut ok = true;

    // pullback round trip, >= 1000 random instances in each space
    for (q, n, seed) in [(2u64, 5usize, 41u64), (3, 4, 43)] {
        let field = FieldSpec::new(q).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = Subspace::standard(n, 2);
        let frame = QuotientFrame::new(k.clone());
        let t1s: Vec<Subspace> = (-1..=1)
            .flat_map(|d| {
                grassmann_enumerate(&field, n, d)
                    .filter(|s| k.contains(&field, s))
                    .collect::<Vec<_>>()
            })
            .collect();
        let t2s: Vec<Subspace> = (1..=n as isize)
            .flat_map(|d| {
                grassmann_enumerate(&field, n, d)
                    .filter(|s| s.contains(&field, &k))
                    .collect::<Vec<_>>()
            })
            .collect();
        for _ in 0..1000 {
            let t1 = &t1s[rng.gen_range(0..t1s.len())];
            let t2 = &t2s[rng.gen_range(0..t2s.len())];
            let t = pullback_delta(&field, &k, frame.complement(), t1, t2).unwrap();
            ok &= &map_rho(&field, &k, &t).unwrap() == t1;
            ok &= &map_pi(&field, &k, &t).unwrap() == t2;
        }
    }

    // polarity: absoluteness and balloon coverage, exhaustive for k <= 3, q <= 3
    for q in [2u64, 3] {
        let field = FieldSpec::new(q).unwrap();
        for k_dim in 1..=3usize {
            let n = 2 * k_dim + 1;
            let k = Subspace::standard(n, k_dim + 1);
            let form = form_absolute_for(&field, &k).unwrap();
            ok &= form.is_absolute(&field, &k).unwrap();
            let all_points = Subspace::full(n).point_vectors(&field);
            for l in qblock::pgspace::subspaces_in(&field, &k, 1) {
                let line_points = l.point_vectors(&field);
                ok &= all_points
                    .iter()
                    .all(|v| line_points.iter().any(|p| form.eval(&field, p, v) == 0));
            }
        }
    }

    // incidence double counts on constructed sets
    for (n, q) in [(3usize, 2u64), (4, 2), (4, 3), (5, 2)] {
        let field = FieldSpec::new(q).unwrap();
        let b = improved_21(n, q).unwrap();
        for layer in [Layer::Points, Layer::Spaces(2)] {
            let prof = degree_profile(&field, &b, layer).unwrap();
            ok &= prof.total_incidences == prof.expected_incidences;
        }
    }

    // enumeration counts against the closed form
    for q in [2u64, 3] {
        let field = FieldSpec::new(q).unwrap();
        for n in 1..=4usize {
            for d in -1..=n as isize {
                let count = grassmann_enumerate(&field, n, d).count();
                ok &= num_bigint::BigUint::from(count)
                    == gaussian_binomial(n as u64 + 1, (d + 1) as u64, q);
            }
        }
    }

    // restriction: blocking survives restriction to hyperplanes
    for (n, q) in [(4usize, 2u64), (5, 2), (4, 3)] {
        let field = FieldSpec::new(q).unwrap();
        let b = improved_21(n, q).unwrap();
        for h in grassmann_enumerate(&field, n, n as isize - 1) {
            let r = restrict(&field, &b, &h).unwrap();
            ok &= is_blocking(&field, &r, 2).unwrap().blocked;
        }
    }

    report(6, "property suites", ok);
}

#[test]
fn criterion_7_schedule_optimality_reported() {
    let mut ok = true;
    let mut divergences = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        for n in 5..=12isize {
            let (opt, _) = f_opt(n, q);
            let star = f_star(n, q);
            ok &= opt <= star;
            if opt < star {
                divergences.push((n, q));
            }
            // report whether the top-level argmin contains the anchor choice
            let phi = |m: isize| f_opt(m, q).0;
            let kstar = bounds::k_star(n as usize) as isize;
            let at_kstar = u_step(&phi, n, q, kstar).unwrap();
            // the anchor value can never beat the true minimum
            ok &= at_kstar >= opt;
            if at_kstar > opt {
                println!("  anchor k={kstar} not in argmin at n={n}, q={q}");
            }
        }
    }
    if divergences.is_empty() {
        println!("  minimizer equals the anchor value at every sampled (n,q)");
    } else {
        println!("  minimizer strictly below anchor at: {divergences:?}");
    }
    report(7, "schedule optimality (empirical)", ok);
}

#[test]
fn criterion_8_lower_bounds_are_floors_only() {
    let mut ok = true;
    for q in [2u64, 3, 4, 5] {
        for row in bounds_table(q, 12).unwrap() {
            ok &= row.lower_trivial <= row.upper_fopt;
            ok &= row.lower_stdeq <= row.upper_fopt;
            ok &= row.lower_schonheim <= row.upper_fopt;
            ok &= row.lower_main1 <= row.upper_fopt;
            ok &= row.upper_fopt <= row.upper_fstar;
            ok &= row.density_low <= row.density_high;
        }
    }
    report(8, "lower bounds below constructive uppers", ok);
}
