//! Acceptance checks, one test per criterion.
//!
//! Every test writes a single `criterion N: PASS` or `criterion N: FAIL` line
//! to stderr, bypassing the harness capture, and then asserts the outcome.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use lamstat::charstat::{self, empirical_mgf_chars, enumerate_ellfree, limit_mgf_chars, CharCtx, CharField, CharMgf};
use lamstat::coeff::{rat, rint, LambdaScalar, Rat};
use lamstat::hyperstat::{self, empirical_geo_mgf, empirical_vanishing_mgf, limit_geo_mgf, mu_class, FormSpace, Sign};
use lamstat::partition::{enumerate, Partition};
use lamstat::plethy::{exp_sigma, log_sigma, log_sigma_newton, power};
use lamstat::randmat::{
    cycle_falling_moments, ds_trace_moment, exact_expectation, finite_trace_moment, haar_mc_table, limit_mgf, rat_to_f64,
    sym_group_mgf, Family, GroupTag,
};
use lamstat::report::{
    chars_fixture_name, compare_higher_characters, compare_higher_characters_mod, compare_quadratic_characters,
    compare_vanishing, exp_log_approx_check, hyp_fixture_name, non_increasing, stable_homology_identity, teich_u,
    Comparison, Embeddable, Fixture, Modulus,
};
use lamstat::symfunc::{e, from_basis, h, omega, to_basis, Basis, SymSeries};
use lamstat::witt::{class_of, integrate, power_euler, project, pullback, res_k, WittTrunc};
use lamstat::CycloHalf;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

fn verdict(n: usize, ok: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "criterion {n}: {} ({:.1} s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn part(p: &[usize]) -> Partition {
    Partition::from_parts(p)
}

#[test]
fn criterion_1_symmetric_group_mgf() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 3..=5 {
        let finite = sym_group_mgf(n, n).unwrap();
        let limit = limit_mgf(Family::Symmetric, n);
        for tau in enumerate(n) {
            let (a, b) = (finite.coeff(&tau), limit.coeff(&tau, &Partition::empty()));
            checked += 1;
            if a != b || !a.is_integer() {
                bad.push(format!("n={n} {tau:?}: {a} vs {b}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(10);
    verdict(1, ok, elapsed, &format!("{checked} coefficients for n = 3, 4, 5; mismatches {bad:?}"));
}

#[test]
fn criterion_2_trace_moments() {
    let start = Instant::now();
    let cases: [(Family, &[usize], &[usize], i64); 5] = [
        (Family::Orthogonal, &[2], &[], 1),
        (Family::Orthogonal, &[1], &[], 0),
        (Family::Unitary, &[1], &[1], 1),
        (Family::Unitary, &[0, 1], &[0, 1], 2),
        (Family::Symplectic, &[0, 1], &[], -1),
    ];
    let weight = |a: &[usize]| a.iter().enumerate().map(|(i, k)| (i + 1) * k).sum::<usize>();
    let mut bad = Vec::new();
    let mut finite_checks = 0;
    for (family, a, b, want) in cases {
        let stable = ds_trace_moment(family, a, b).unwrap();
        if stable != rint(want) {
            bad.push(format!("{family:?} {a:?} {b:?}: stable {stable}"));
        }
        for n in 1..=5 {
            if weight(a) > n || weight(b) > n {
                continue;
            }
            let tag = match family {
                Family::Orthogonal => GroupTag::Orthogonal(n),
                Family::Unitary => GroupTag::Unitary(n),
                Family::Symplectic if n % 2 == 0 => GroupTag::Symplectic(n),
                _ => continue,
            };
            finite_checks += 1;
            let finite = finite_trace_moment(tag, a, b).unwrap();
            if finite != stable {
                bad.push(format!("{tag} {a:?} {b:?}: finite {finite} vs stable {stable}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(60);
    verdict(2, ok, elapsed, &format!("5 stable moments, {finite_checks} finite-n checks; mismatches {bad:?}"));
}

#[test]
fn criterion_3_cycle_counting() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=8 {
        for k1 in 0..=n {
            for k2 in 0..=n / 2 {
                for k3 in 0..=n / 3 {
                    for k4 in 0..=n / 4 {
                        let k = [k1, k2, k3, k4];
                        if k1 + 2 * k2 + 3 * k3 + 4 * k4 > n {
                            continue;
                        }
                        let want = k.iter().enumerate().fold(rint(1), |acc, (i, &ki)| acc * rat(1, i as i64 + 1).pow(ki as i32));
                        let got = cycle_falling_moments(n, &k).unwrap();
                        checked += 1;
                        if got != want {
                            bad.push(format!("n={n} k={k:?}: {got} vs {want}"));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(10);
    verdict(3, ok, elapsed, &format!("{checked} falling moments for n <= 8; mismatches {bad:?}"));
}

fn runner() -> TestRunner {
    let config = Config { failure_persistence: None, ..Config::with_cases(256) };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(
    failures: &mut Vec<String>,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    if let Err(e) = runner().run(&strategy, test) {
        failures.push(format!("{name}: {e}"));
    }
}

#[test]
fn criterion_4_identity_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut properties = 0;
    let mut count = |_: &str| properties += 1;

    count("exp/log rational");
    run_property(&mut failures, "exp/log rational", (1..=MAX_DEGREE).prop_flat_map(|d| rat_series(d, false)), |x| {
        let ex = exp_sigma(&x).unwrap();
        prop_assert_eq!(log_sigma(&ex).unwrap(), x.clone());
        prop_assert_eq!(log_sigma_newton(&ex).unwrap(), x.clone());
        let f = one_plus(&x);
        prop_assert_eq!(exp_sigma(&log_sigma(&f).unwrap()).unwrap(), f);
        Ok(())
    });

    count("exp/log Witt");
    run_property(&mut failures, "exp/log Witt", (1..=MAX_LEN).prop_flat_map(|d| witt_series(d, MAX_LEN, false)), |x| {
        let ex = exp_sigma(&x).unwrap();
        witt_agree(&log_sigma(&ex).unwrap(), &x, MAX_LEN)?;
        witt_agree(&log_sigma_newton(&ex).unwrap(), &x, MAX_LEN)?;
        let f = one_plus(&x);
        witt_agree(&exp_sigma(&log_sigma(&f).unwrap()).unwrap(), &f, MAX_LEN)
    });

    count("power multiplicativity");
    run_property(
        &mut failures,
        "power multiplicativity",
        ((1..=4usize).prop_flat_map(|d| (witt_series(d, MAX_LEN, false), witt_series(d, MAX_LEN, false))), witt(MAX_LEN), witt(MAX_LEN)),
        |((x, y), a, b)| {
            let (f, g) = (one_plus(&x), one_plus(&y));
            let lhs = power(&f, &a.plus(&b)).unwrap();
            witt_agree(&lhs, &power(&f, &a).unwrap().mul_unchecked(&power(&f, &b).unwrap()), MAX_LEN)?;
            let lhs = power(&f.mul_unchecked(&g), &a).unwrap();
            witt_agree(&lhs, &power(&f, &a).unwrap().mul_unchecked(&power(&g, &a).unwrap()), MAX_LEN)
        },
    );

    count("power_euler");
    run_property(
        &mut failures,
        "power_euler",
        ((1..=3usize).prop_flat_map(|i| (Just(i), (1..=MAX_LEN / i).prop_flat_map(|d| witt_series(d, MAX_LEN, false)))), adm_set()),
        |((i, x), v)| {
            let f = one_plus(&x);
            let class: W = class_of(&v, MAX_LEN);
            prop_assert_eq!(power_euler(&f, &v, i).unwrap(), project(&power(&f, &class).unwrap(), i));
            Ok(())
        },
    );

    count("res_k");
    run_property(
        &mut failures,
        "res_k",
        (adm_set(), prop::collection::vec(witt(MAX_LEN), 5), 1..=MAX_LEN),
        |(s, f, k)| {
            let f = &f[..s.degrees().len()];
            let total = integrate(&s, f, MAX_LEN).unwrap().ghost(k);
            let restricted = res_k(&s, f, k).unwrap();
            prop_assert_eq!(restricted.len(), s.point_count(k));
            let finite = restricted.iter().fold(rint(0), |acc, w| acc + w.ghost(1));
            prop_assert_eq!(total, finite);
            Ok(())
        },
    );

    count("projection formula");
    run_property(
        &mut failures,
        "projection formula",
        (adm_set(), witt(MAX_LEN), prop::collection::vec(witt(MAX_LEN), 5)),
        |(v, w, g)| {
            let g = &g[..v.degrees().len()];
            let wg: Vec<W> = pullback(&w, &v).iter().zip(g).map(|(a, b)| a.times(b)).collect();
            prop_assert_eq!(integrate(&v, &wg, MAX_LEN).unwrap(), w.times(&integrate(&v, g, MAX_LEN).unwrap()));
            Ok(())
        },
    );

    count("omega evenness");
    run_property(
        &mut failures,
        "omega evenness",
        (1..=MAX_DEGREE / 2).prop_flat_map(|d| rat_series(2 * d, true)),
        |x| {
            prop_assert_eq!(exp_sigma(&omega(&x)).unwrap(), omega(&exp_sigma(&x).unwrap()));
            let f = one_plus(&x);
            prop_assert_eq!(log_sigma(&omega(&f)).unwrap(), omega(&log_sigma(&f).unwrap()));
            prop_assert_eq!(omega(&omega(&x)), x);
            Ok(())
        },
    );

    count("h/e change of basis");
    run_property(&mut failures, "h/e change of basis", (1..=MAX_DEGREE).prop_flat_map(|d| rat_series(d, false)), |x| {
        for basis in [Basis::H, Basis::E] {
            let coeffs = to_basis(&x, basis).unwrap();
            prop_assert_eq!(from_basis(&coeffs, basis, x.trunc()).unwrap(), x.clone());
        }
        Ok(())
    });

    count("h/e inversion");
    for n in 1..=MAX_DEGREE {
        let mut acc = SymSeries::<Rat>::zero(MAX_DEGREE);
        for k in 0..=n {
            let term = e::<Rat>(k, MAX_DEGREE).mul_unchecked(&h::<Rat>(n - k, MAX_DEGREE));
            acc = if k % 2 == 0 { acc.add_unchecked(&term) } else { acc.sub_unchecked(&term) };
        }
        if !acc.is_zero() || omega(&h::<Rat>(n, MAX_DEGREE)) != e::<Rat>(n, MAX_DEGREE) {
            failures.push(format!("h/e inversion in degree {n}"));
        }
    }

    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(120);
    verdict(4, ok, elapsed, &format!("{properties} properties, 256 cases each; failures {failures:?}"));
}

fn is_zero_zz(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

fn gap(a: &CycloHalf, b: &CycloHalf) -> f64 {
    a.minus(b).magnitude()
}

fn largest_gap(emp: &CharMgf, limit: &CharMgf, trunc: usize) -> f64 {
    let e = emp.coefficients();
    let l = limit.coefficients();
    e.keys()
        .chain(l.keys())
        .filter(|k| k.0.size() + k.1.size() <= trunc && !(k.0.is_empty() && k.1.is_empty()))
        .map(|k| gap(&emp.coeff(&k.0, &k.1), &limit.coeff(&k.0, &k.1)))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_5_quadratic_characters() {
    let start = Instant::now();
    let ctx = CharCtx::new(3, 2, 1).unwrap();
    let mut problems = Vec::new();

    let mut degree_checks = 0;
    for d in [1, 3, 5, 7] {
        let cf = CharField::new(ctx, 1, d + 1).unwrap();
        for f in enumerate_ellfree(&cf, d).unwrap() {
            let c = cf.l_coeffs(&f, d + 1);
            degree_checks += 1;
            if is_zero_zz(&c[d - 1]) || !is_zero_zz(&c[d]) || !is_zero_zz(&c[d + 1]) {
                problems.push(format!("deg L != {} for f = {f:?}", d - 1));
            }
        }
    }

    let trunc = 4;
    let limit = limit_mgf_chars(ctx, 1, trunc, charstat::LimitMode::Euler).unwrap();
    let power_limit = limit_mgf_chars(ctx, 1, trunc, charstat::LimitMode::Power).unwrap();
    if limit != power_limit {
        problems.push("euler and power limits differ".into());
    }

    let taus = [part(&[1]), part(&[2]), part(&[1, 1]), part(&[2, 1])];
    let cf = CharField::new(ctx, 1, trunc).unwrap();
    let mut gaps: BTreeMap<Partition, Vec<f64>> = BTreeMap::new();
    for d in [3, 5, 7] {
        let emp = empirical_mgf_chars(&cf, d, trunc, false).unwrap();
        for tau in &taus {
            let g = gap(&emp.coeff(tau, &Partition::empty()), &limit.coeff(tau, &Partition::empty()));
            gaps.entry(tau.clone()).or_default().push(g);
        }
        let name = chars_fixture_name(3, 2, d);
        let path = fixtures_dir().join(&name);
        if path.exists() {
            let fx = Fixture::load(&path).unwrap();
            let bad = fx.verify(trunc, |k| emp.coeff(&k.0, &k.1).as_rational()).unwrap();
            problems.extend(bad.into_iter().map(|b| format!("{name}: {b}")));
        } else if d == 5 {
            problems.push(format!("missing fixture {name}"));
        }
    }
    for (tau, g) in &gaps {
        if !non_increasing(g) {
            problems.push(format!("gap for {tau:?} not non-increasing: {g:?}"));
        }
        if g[2] > 0.05 {
            problems.push(format!("gap for {tau:?} at d=7 is {:.4}", g[2]));
        }
    }

    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(600);
    let summary: Vec<String> = gaps.iter().map(|(t, g)| format!("{t:?}: {:.4} {:.4} {:.4}", g[0], g[1], g[2])).collect();
    verdict(
        5,
        ok,
        elapsed,
        &format!("{degree_checks} L-degrees checked; gaps over d = 3, 5, 7: {}; problems {problems:?}", summary.join(", ")),
    );
}

#[test]
fn criterion_6_cubic_characters() {
    let start = Instant::now();
    let trunc = 3;
    let ctx = CharCtx::new(4, 3, 1).unwrap();
    let limit = limit_mgf_chars(ctx, 1, trunc, charstat::LimitMode::Euler).unwrap();
    let cf = CharField::new(ctx, 1, trunc).unwrap();
    let gaps: Vec<f64> = [2, 4, 5]
        .iter()
        .map(|&d| largest_gap(&empirical_mgf_chars(&cf, d, trunc, true).unwrap(), &limit, trunc))
        .collect();
    let elapsed = start.elapsed();
    let ok = non_increasing(&gaps) && elapsed < Duration::from_secs(600);
    verdict(6, ok, elapsed, &format!("largest joint gap through total degree 3 for d = 2, 4, 5: {gaps:.4?}"));
}

fn geo_gaps(q: u64, m: usize, degrees: &[usize], trunc: usize) -> Vec<f64> {
    let limit = limit_geo_mgf(q, m, 1, trunc, Sign::Plus, hyperstat::LimitMode::Euler).unwrap();
    degrees
        .iter()
        .map(|&d| {
            let emp = empirical_geo_mgf(&FormSpace::new(q, 1, m, d).unwrap(), trunc, Sign::Plus).unwrap();
            enumerate(trunc)
                .iter()
                .filter(|t| !t.is_empty())
                .map(|t| (rat_to_f64(&emp.coeff(t)) - rat_to_f64(&limit.coeff(t))).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

#[test]
fn criterion_7_hypersurfaces() {
    let start = Instant::now();
    let trunc = 3;
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for (q, m, degrees) in [(2, 1, (2..=8).collect::<Vec<_>>()), (3, 1, (2..=8).collect()), (2, 2, vec![3, 4, 5])] {
        let gaps = geo_gaps(q, m, &degrees, trunc);
        if !non_increasing(&gaps) {
            problems.push(format!("q={q} n={}: gaps {gaps:.4?} not non-increasing", m - 1));
        }
        summary.push(format!("q={q} n={} d={degrees:?}: {gaps:.4?}", m - 1));
    }

    let tau = part(&[1]);
    let binary = empirical_geo_mgf(&FormSpace::new(2, 1, 1, 2).unwrap(), 1, Sign::Plus).unwrap().coeff(&tau);
    let limit = limit_geo_mgf(2, 1, 1, 1, Sign::Plus, hyperstat::LimitMode::Euler).unwrap().coeff(&tau);
    if binary != rat(3, 2) || limit != rint(1) {
        problems.push(format!("binary quadratics: {binary} vs limit {limit}"));
    }

    let name = hyp_fixture_name(2, 2, 3, "geo");
    match Fixture::load(&fixtures_dir().join(&name)) {
        Ok(fx) => {
            let emp = empirical_geo_mgf(&FormSpace::new(2, 1, 2, 3).unwrap(), fx.trunc_degree, Sign::Plus).unwrap();
            let bad = fx.verify(fx.trunc_degree, |k| k.1.is_empty().then(|| emp.coeff(&k.0))).unwrap();
            problems.extend(bad.into_iter().map(|b| format!("{name}: {b}")));
        }
        Err(e) => problems.push(format!("fixture {name}: {e}")),
    }

    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(900);
    verdict(
        7,
        ok,
        elapsed,
        &format!("largest gaps {}; d=2 binary value {binary} vs limit {limit}; problems {problems:?}", summary.join("; ")),
    );
}

#[test]
fn criterion_8_vanishing_cohomology() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for q in [2, 3] {
        let conics = empirical_vanishing_mgf(&FormSpace::new(q, 1, 2, 2).unwrap(), 4).unwrap();
        if conics != SymSeries::one(4) {
            problems.push(format!("conics over F_{q}: MGF is not 1"));
        }
        let len = 6;
        if mu_class(q, 1, len) != teich_u(q, -1, len).plus(&teich_u(q, 1, len)) {
            problems.push(format!("mu at q={q} differs from [q^-1/2] + [q^1/2]"));
        }
    }

    let name = hyp_fixture_name(2, 2, 4, "vanishing");
    match Fixture::load(&fixtures_dir().join(&name)) {
        Ok(fx) => {
            let emp = empirical_vanishing_mgf(&FormSpace::new(2, 1, 2, 4).unwrap(), fx.trunc_degree).unwrap();
            let bad = fx
                .verify(fx.trunc_degree, |k| if k.1.is_empty() { emp.coeff(&k.0).as_rational() } else { None })
                .unwrap();
            problems.extend(bad.into_iter().map(|b| format!("{name}: {b}")));
        }
        Err(e) => problems.push(format!("fixture {name}: {e}")),
    }

    let c = compare_vanishing(2, 1, 4, 4).unwrap();
    if !c.pass() {
        problems.push(format!("{} fails: {:?}", c.report.label, c.report.failures()));
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(300);
    verdict(
        8,
        ok,
        elapsed,
        &format!("congruence mod {} with fitted M = {:.4}; problems {problems:?}", c.report.modulus, c.report.m_fit),
    );
}

fn describe(c: &Comparison) -> String {
    format!(
        "{} mod {}: {} (M = {:.3}, sharp: {})",
        c.report.label,
        c.report.modulus,
        if c.pass() { "pass" } else { "fail" },
        c.report.m_fit,
        c.sharp()
    )
}

#[test]
fn criterion_9_congruence_suite() {
    let start = Instant::now();
    let (trunc, fit) = (4, 4);
    let comparisons = [
        compare_quadratic_characters(3, trunc, fit).unwrap(),
        compare_higher_characters(4, 3, trunc, fit).unwrap(),
        compare_higher_characters(11, 5, trunc, fit).unwrap(),
        compare_vanishing(2, 2, trunc, fit).unwrap(),
        compare_vanishing(2, 0, trunc, fit).unwrap(),
    ];
    let mut failed: Vec<String> = comparisons.iter().filter(|c| !c.pass()).map(describe).collect();
    let mut lines: Vec<String> = comparisons.iter().map(describe).collect();
    if !comparisons[1].pass() {
        let half = compare_higher_characters_mod(4, 3, trunc, fit, Modulus::q_inv_half(4)).unwrap();
        lines.push(format!("for comparison, {}", describe(&half)));
    }

    for q in [2, 3] {
        let len = 2 * 2 * 4;
        let a = e::<WittTrunc<CycloHalf>>(2, 4).scale(&teich_u(q, -2, len));
        let b = h::<WittTrunc<CycloHalf>>(1, 4)
            .scale(&teich_u(q, -2, len))
            .add_unchecked(&h::<WittTrunc<CycloHalf>>(2, 4).scale(&teich_u(q, -3, len)));
        for (name, x) in [("[q^-1] e2", a), ("[q^-1] h1 + [q^-3/2] h2", b)] {
            if !exp_log_approx_check(&x, Modulus::q_inv(q), 2).unwrap().pass() {
                failed.push(format!("exp/log first order for {name} at q={q}"));
            }
        }
        let sh = stable_homology_identity(q, 6, 3).unwrap();
        if !sh.pass() {
            failed.push(format!("stable homology identity at q={q}, D=6: {:?}", sh.mismatches));
        }
    }
    lines.push("exp/log first-order approximations and the stable homology identity at D = 6 checked for q = 2, 3".into());

    let elapsed = start.elapsed();
    let ok = failed.is_empty() && elapsed < Duration::from_secs(300);
    verdict(9, ok, elapsed, &format!("{}; failing: {failed:?}", lines.join("; ")));
}

#[test]
fn criterion_10_haar_monte_carlo() {
    let start = Instant::now();
    let samples = 100_000;
    let seed = 2024;
    let tags = [
        GroupTag::Orthogonal(1),
        GroupTag::Orthogonal(2),
        GroupTag::Orthogonal(3),
        GroupTag::Orthogonal(4),
        GroupTag::Unitary(1),
        GroupTag::Unitary(2),
        GroupTag::Unitary(3),
        GroupTag::Unitary(4),
        GroupTag::Symplectic(2),
        GroupTag::Symplectic(4),
    ];
    let mut checked = 0;
    let mut bad = Vec::new();
    for tag in tags {
        for (k, est) in haar_mc_table(tag, 4, samples, seed).unwrap() {
            let exact = rat_to_f64(&exact_expectation(tag, &k.0, &k.1).unwrap());
            checked += 1;
            if !est.agrees(exact, 3.0) {
                bad.push(format!("{tag} {k:?}: exact {exact}, estimate {:.4} +- {:.4}", est.mean, est.stderr));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(600);
    verdict(10, ok, elapsed, &format!("{checked} coefficients, {samples} samples, seed {seed}; outside 3 SE: {bad:?}"));
}

