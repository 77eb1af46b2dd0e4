//! Randomized identities between plethystic operations, powers, integration
//! over admissible ℤ-sets and the involution ω.
//!
//! Series have degree at most 8 and Witt coefficients have ghost length at
//! most 6. Truncated Witt vectors are only defined up to their length, so two
//! series agree when every coefficient agrees on the ghosts both sides carry.

mod common;

use common::*;
use lamstat::coeff::{rat, LambdaScalar, Rat};
use lamstat::partition::Partition;
use lamstat::plethy::{exp_sigma, log_sigma, log_sigma_newton, power};
use lamstat::symfunc::{e, from_basis, h, omega, to_basis, Basis, SymSeries};
use lamstat::witt::{class_of, integrate, power_euler, project, pullback, res_k};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exp_log_round_trip_rational(x in (1..=MAX_DEGREE).prop_flat_map(|d| rat_series(d, false))) {
        let ex = exp_sigma(&x).unwrap();
        prop_assert_eq!(log_sigma(&ex).unwrap(), x.clone());
        prop_assert_eq!(log_sigma_newton(&ex).unwrap(), x.clone());
        let f = one_plus(&x);
        prop_assert_eq!(exp_sigma(&log_sigma(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn exp_log_round_trip_witt(x in (1..=MAX_LEN).prop_flat_map(|d| witt_series(d, MAX_LEN, false))) {
        let ex = exp_sigma(&x).unwrap();
        witt_agree(&log_sigma(&ex).unwrap(), &x, MAX_LEN)?;
        witt_agree(&log_sigma_newton(&ex).unwrap(), &x, MAX_LEN)?;
        let f = one_plus(&x);
        witt_agree(&exp_sigma(&log_sigma(&f).unwrap()).unwrap(), &f, MAX_LEN)?;
    }

    #[test]
    fn exp_is_a_homomorphism(
        (x, y) in (1..=MAX_DEGREE).prop_flat_map(|d| (rat_series(d, false), rat_series(d, false)))
    ) {
        let lhs = exp_sigma(&x.add_unchecked(&y)).unwrap();
        let rhs = exp_sigma(&x).unwrap().mul_unchecked(&exp_sigma(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_multiplicativity_rational(
        (x, y) in (1..=MAX_DEGREE).prop_flat_map(|d| (rat_series(d, false), rat_series(d, false))),
        a in small_rat(),
        b in small_rat(),
    ) {
        let (f, g) = (one_plus(&x), one_plus(&y));
        let sum = &a + &b;
        prop_assert_eq!(power(&f, &sum).unwrap(), power(&f, &a).unwrap().mul_unchecked(&power(&f, &b).unwrap()));
        prop_assert_eq!(
            power(&f.mul_unchecked(&g), &a).unwrap(),
            power(&f, &a).unwrap().mul_unchecked(&power(&g, &a).unwrap())
        );
    }

    #[test]
    fn power_multiplicativity_witt(
        (x, y) in (1..=4usize).prop_flat_map(|d| (witt_series(d, MAX_LEN, false), witt_series(d, MAX_LEN, false))),
        a in witt(MAX_LEN),
        b in witt(MAX_LEN),
    ) {
        let (f, g) = (one_plus(&x), one_plus(&y));
        let lhs = power(&f, &a.plus(&b)).unwrap();
        let rhs = power(&f, &a).unwrap().mul_unchecked(&power(&f, &b).unwrap());
        witt_agree(&lhs, &rhs, MAX_LEN)?;
        let lhs = power(&f.mul_unchecked(&g), &a).unwrap();
        let rhs = power(&f, &a).unwrap().mul_unchecked(&power(&g, &a).unwrap());
        witt_agree(&lhs, &rhs, MAX_LEN)?;
    }

    #[test]
    fn power_euler_matches_power(
        (i, x) in (1..=3usize).prop_flat_map(|i| (Just(i), (1..=MAX_LEN / i).prop_flat_map(|d| witt_series(d, MAX_LEN, false)))),
        v in adm_set(),
    ) {
        let f = one_plus(&x);
        let class: W = class_of(&v, MAX_LEN);
        let via_power = project(&power(&f, &class).unwrap(), i);
        prop_assert_eq!(power_euler(&f, &v, i).unwrap(), via_power);
    }

    #[test]
    fn res_k_recovers_components(
        s in adm_set(),
        f in prop::collection::vec(witt(MAX_LEN), 5),
        k in 1..=MAX_LEN,
    ) {
        let f = &f[..s.degrees().len()];
        let total = integrate(&s, f, MAX_LEN).unwrap().ghost(k);
        let restricted = res_k(&s, f, k).unwrap();
        prop_assert_eq!(restricted.len(), s.point_count(k));
        let finite = restricted.iter().fold(Rat::zero(), |acc, w| acc.plus(&w.ghost(1)));
        prop_assert_eq!(total, finite);
    }

    #[test]
    fn projection_formula(
        v in adm_set(),
        w in witt(MAX_LEN),
        g in prop::collection::vec(witt(MAX_LEN), 5),
    ) {
        let g = &g[..v.degrees().len()];
        let wg: Vec<W> = pullback(&w, &v).iter().zip(g).map(|(a, b)| a.times(b)).collect();
        let lhs = integrate(&v, &wg, MAX_LEN).unwrap();
        let rhs = w.times(&integrate(&v, g, MAX_LEN).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_commutes_with_exp_and_log_on_even_series(
        x in (1..=MAX_DEGREE / 2).prop_flat_map(|d| rat_series(2 * d, true))
    ) {
        prop_assert_eq!(exp_sigma(&omega(&x)).unwrap(), omega(&exp_sigma(&x).unwrap()));
        let f = one_plus(&x);
        prop_assert_eq!(log_sigma(&omega(&f)).unwrap(), omega(&log_sigma(&f).unwrap()));
    }

    #[test]
    fn omega_commutes_with_exp_on_even_witt_series(
        x in (1..=MAX_LEN / 2).prop_flat_map(|d| witt_series(2 * d, MAX_LEN, true))
    ) {
        witt_agree(&exp_sigma(&omega(&x)).unwrap(), &omega(&exp_sigma(&x).unwrap()), MAX_LEN)?;
    }

    #[test]
    fn omega_is_an_involution(x in (1..=MAX_DEGREE).prop_flat_map(|d| rat_series(d, false))) {
        prop_assert_eq!(omega(&omega(&x)), x);
    }

    #[test]
    fn h_e_change_of_basis_round_trips(x in (1..=MAX_DEGREE).prop_flat_map(|d| rat_series(d, false))) {
        for basis in [Basis::H, Basis::E] {
            let coeffs = to_basis(&x, basis).unwrap();
            prop_assert_eq!(from_basis(&coeffs, basis, x.trunc()).unwrap(), x.clone());
        }
    }
}

#[test]
fn h_e_inversion() {
    for n in 1..=MAX_DEGREE {
        let mut acc = SymSeries::<Rat>::zero(MAX_DEGREE);
        for k in 0..=n {
            let term = e::<Rat>(k, MAX_DEGREE).mul_unchecked(&h::<Rat>(n - k, MAX_DEGREE));
            acc = if k % 2 == 0 { acc.add_unchecked(&term) } else { acc.sub_unchecked(&term) };
        }
        assert!(acc.is_zero(), "sum of (-1)^k e_k h_(n-k) for n = {n}");
        assert_eq!(omega(&h::<Rat>(n, MAX_DEGREE)), e::<Rat>(n, MAX_DEGREE));
    }
}

#[test]
fn omega_does_not_commute_with_exp_on_odd_series() {
    let x = h::<Rat>(1, 4);
    assert_ne!(exp_sigma(&omega(&x)).unwrap(), omega(&exp_sigma(&x).unwrap()));
}

#[test]
fn vanishing_truncated_coefficients_keep_their_length() {
    let mut ghosts = vec![Rat::zero(); MAX_LEN];
    ghosts[MAX_LEN - 1] = rat(1, 1);
    let x = SymSeries::from_terms([(Partition::row(1), W::from_ghosts(ghosts))], 4);
    let ex = exp_sigma(&x).unwrap();
    let c = ex.coeff(&Partition::from_parts(&[2, 1]));
    assert!(c.len().is_some_and(|n| n <= MAX_LEN / 2), "coefficient of (2,1) claims {:?} ghosts", c.len());
    witt_agree(&log_sigma(&ex).unwrap(), &x, MAX_LEN).unwrap();
}
