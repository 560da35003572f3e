//! Invariant suites behind the `selftest` subcommand: fast, deterministic
//! checks of each layer, printing one line per suite.

use num_bigint::BigUint;
use num_traits::One;

use crate::bounds;
use crate::constructions::{improved_21, spread, trivial_21};
use crate::gfq::FieldSpec;
use crate::pgspace::{
    gaussian_binomial, grassmann_enumerate, map_pi, map_rho, pullback_delta, QuotientFrame,
    Subspace,
};
use crate::polarity::{balloon_check, form_absolute_for, BilinearForm};
use crate::verifier::{degree_profile, is_blocking, Layer};
use crate::Result;

type Suite = (&'static str, fn(u64) -> Result<()>);

fn err(msg: String) -> crate::Error {
    crate::Error::Precondition(msg)
}

fn suite_fields(_seed: u64) -> Result<()> {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = FieldSpec::new(q)?;
        let qe = q as u8;
        for a in 0..qe {
            if a != 0 {
                let inv = f.inv(a)?;
                if f.mul(a, inv) != 1 {
                    return Err(err(format!("inverse fails for {a} in F_{q}")));
                }
            }
            for b in 0..qe {
                if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                    return Err(err(format!("commutativity fails in F_{q}")));
                }
            }
        }
    }
    Ok(())
}

fn suite_grassmann(_seed: u64) -> Result<()> {
    for q in [2u64, 3] {
        let f = FieldSpec::new(q)?;
        for n in 1..=4usize {
            for d in -1..=(n as isize) {
                let count = grassmann_enumerate(&f, n, d).count();
                let expect = gaussian_binomial(n as u64 + 1, (d + 1) as u64, q);
                if BigUint::from(count) != expect {
                    return Err(err(format!("enumeration count off at n={n}, d={d}, q={q}")));
                }
            }
        }
    }
    Ok(())
}

fn suite_pullback(seed: u64) -> Result<()> {
    use rand::Rng;
    use rand::SeedableRng;
    for (q, n) in [(2u64, 5usize), (3, 4)] {
        let f = FieldSpec::new(q)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let k = Subspace::standard(n, 2);
        let frame = QuotientFrame::new(k.clone());
        let t1s: Vec<Subspace> = (-1..=1)
            .flat_map(|d| {
                grassmann_enumerate(&f, n, d)
                    .filter(|s| k.contains(&f, s))
                    .collect::<Vec<_>>()
            })
            .collect();
        let t2s: Vec<Subspace> = (1..=n as isize)
            .flat_map(|d| {
                grassmann_enumerate(&f, n, d)
                    .filter(|s| s.contains(&f, &k))
                    .collect::<Vec<_>>()
            })
            .collect();
        for _ in 0..200 {
            let t1 = &t1s[rng.gen_range(0..t1s.len())];
            let t2 = &t2s[rng.gen_range(0..t2s.len())];
            let t = pullback_delta(&f, &k, frame.complement(), t1, t2)?;
            if &map_rho(&f, &k, &t)? != t1 || &map_pi(&f, &k, &t)? != t2 {
                return Err(err(format!("pullback round trip fails in PG({n},{q})")));
            }
        }
    }
    Ok(())
}

fn suite_polarity(_seed: u64) -> Result<()> {
    for q in [2u64, 3] {
        let f = FieldSpec::new(q)?;
        let form = BilinearForm::dot(3);
        for l in grassmann_enumerate(&f, 3, 1) {
            if !balloon_check(&f, &form, &l)? {
                return Err(err(format!("balloon coverage fails in PG(3,{q})")));
            }
        }
        for k_dim in 1..=2usize {
            let n = 2 * k_dim + 1;
            let k = Subspace::standard(n, k_dim + 1);
            let form = form_absolute_for(&f, &k)?;
            if !form.is_absolute(&f, &k)? {
                return Err(err(format!("base subspace not absolute, q={q}, k={k_dim}")));
            }
        }
    }
    Ok(())
}

fn suite_constructions(_seed: u64) -> Result<()> {
    let cases: [(usize, u64, u64); 4] = [(3, 2, 5), (4, 2, 27), (4, 3, 103), (5, 2, 122)];
    for (n, q, size) in cases {
        let f = FieldSpec::new(q)?;
        let b = improved_21(n, q)?;
        if b.len() as u64 != size {
            return Err(err(format!("size {} != {size} for n={n}, q={q}", b.len())));
        }
        if BigUint::from(size) != bounds::f_star(n as isize, q).to_biguint().unwrap() {
            return Err(err(format!("size certificate mismatch at n={n}, q={q}")));
        }
        let rep = is_blocking(&f, &b, 2)?;
        if !rep.blocked {
            return Err(err(format!("construction fails to block at n={n}, q={q}")));
        }
    }
    Ok(())
}

fn suite_double_counts(_seed: u64) -> Result<()> {
    for (b, q) in [
        (spread(3, 1, 2)?, 2u64),
        (trivial_21(4, 2)?, 2),
        (improved_21(4, 3)?, 3),
    ] {
        let f = FieldSpec::new(q)?;
        for layer in [Layer::Points, Layer::Spaces(2)] {
            let prof = degree_profile(&f, &b, layer)?;
            if prof.total_incidences != prof.expected_incidences {
                return Err(err(format!("double count fails for {}", b.construction())));
            }
        }
    }
    Ok(())
}

fn suite_bounds(_seed: u64) -> Result<()> {
    let bad = bounds::check_table1();
    if !bad.is_empty() {
        return Err(err(format!("published table mismatch: {bad:?}")));
    }
    for n in 2..=20isize {
        let p = bounds::f_star_poly(n);
        if p.degree() != Some((2 * n - 4) as usize) || p.leading_coeff() != One::one() {
            return Err(err(format!("anchor polynomial shape off at n={n}")));
        }
    }
    Ok(())
}

/// Runs every suite, printing one status line per suite. Returns true iff
/// all pass.
pub fn run_all(seed: u64) -> bool {
    let suites: &[Suite] = &[
        ("field arithmetic", suite_fields),
        ("grassmann enumeration", suite_grassmann),
        ("quotient pullback", suite_pullback),
        ("polarity and balloon coverage", suite_polarity),
        ("construction sizes and blocking", suite_constructions),
        ("incidence double counts", suite_double_counts),
        ("bound tables and polynomials", suite_bounds),
    ];
    let mut ok = true;
    for (name, f) in suites {
        match f(seed) {
            Ok(()) => println!("selftest {name}: ok"),
            Err(e) => {
                println!("selftest {name}: FAIL ({e})");
                ok = false;
            }
        }
    }
    ok
}
