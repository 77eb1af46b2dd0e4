//! Strategies and comparison helpers shared by the randomized identity suites.

#![allow(dead_code)]

use lamstat::coeff::{rat, LambdaScalar, Rat};
use lamstat::partition::{enumerate, Partition};
use lamstat::symfunc::SymSeries;
use lamstat::witt::{AdmZSet, WittTrunc};
use proptest::prelude::*;

pub type W = WittTrunc<Rat>;

pub const MAX_DEGREE: usize = 8;
pub const MAX_LEN: usize = 6;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn witt(len: usize) -> impl Strategy<Value = W> {
    prop::collection::vec(small_rat(), len).prop_map(W::from_ghosts)
}

pub fn keys(min_degree: usize, trunc: usize, even: bool) -> Vec<Partition> {
    enumerate(trunc)
        .into_iter()
        .filter(|p| p.size() >= min_degree && (!even || p.size() % 2 == 0))
        .collect()
}

/// Series with rational coefficients supported on a few partitions of size `1..=trunc`.
pub fn rat_series(trunc: usize, even: bool) -> impl Strategy<Value = SymSeries<Rat>> {
    let ks = keys(1, trunc, even);
    let n = ks.len();
    prop::collection::vec((0..n, small_rat()), 1..=5)
        .prop_map(move |terms| SymSeries::from_terms(terms.into_iter().map(|(i, c)| (ks[i].clone(), c)), trunc))
}

/// Series with Witt coefficients of length `len` on a few partitions of size `1..=trunc`.
pub fn witt_series(trunc: usize, len: usize, even: bool) -> impl Strategy<Value = SymSeries<W>> {
    let ks = keys(1, trunc, even);
    let n = ks.len();
    prop::collection::vec((0..n, witt(len)), 1..=4)
        .prop_map(move |terms| SymSeries::from_terms(terms.into_iter().map(|(i, c)| (ks[i].clone(), c)), trunc))
}

pub fn adm_set() -> impl Strategy<Value = AdmZSet> {
    prop::collection::vec(1usize..=4, 1..=5).prop_map(|d| AdmZSet::new(d).unwrap())
}

/// Ghost-wise agreement on the common length; coefficients of degree at most
/// `len` must keep at least one ghost on both sides.
pub fn witt_agree(a: &SymSeries<W>, b: &SymSeries<W>, len: usize) -> Result<(), TestCaseError> {
    let keys: Vec<Partition> = a.terms().keys().chain(b.terms().keys()).cloned().collect();
    for k in keys {
        let (x, y) = (a.coeff(&k), b.coeff(&k));
        let n = match (x.len(), y.len()) {
            (None, None) => {
                prop_assert_eq!(&x, &y, "coefficient of {:?}", k);
                continue;
            }
            (Some(n), None) | (None, Some(n)) => n,
            (Some(n), Some(m)) => n.min(m),
        };
        if k.size() <= len {
            prop_assert!(n >= 1, "coefficient of {:?} lost every ghost", k);
        }
        for i in 1..=n {
            prop_assert_eq!(x.ghost(i), y.ghost(i), "ghost {} of {:?}", i, k);
        }
    }
    Ok(())
}

pub fn one_plus<S: LambdaScalar>(f: &SymSeries<S>) -> SymSeries<S> {
    SymSeries::one(f.trunc()).add_unchecked(f)
}
