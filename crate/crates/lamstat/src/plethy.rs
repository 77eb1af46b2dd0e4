//! Plethysm, the plethystic exponential and logarithm, and powers.
//!
//! Everything works on truncated series over any [`LambdaScalar`]: the
//! plethysm `p_k ∘` acts by the Adams operation on coefficients and by
//! `t_i ↦ t_i^k` on the variables, and `Exp_σ(x) = exp(Σ_k (p_k ∘ x)/k)`.

use std::collections::BTreeMap;

use crate::arith::{divisors, mobius};
use crate::coeff::{rat, rint, LambdaScalar, Rat};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::symfunc::{e, h, tensor, to_basis, BiPartition, BiSymSeries, Basis, Series, SeriesKey, SymSeries};

/// Classical `exp(y)` for a series without constant term.
pub fn exp_classical<K: SeriesKey, S: LambdaScalar>(y: &Series<K, S>) -> Series<K, S> {
    let d = y.trunc();
    let mut acc = Series::one(d);
    let mut term = Series::one(d);
    for n in 1..=d {
        term = term.mul_unchecked(y).scale_rat(&rat(1, n as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add_unchecked(&term);
    }
    acc
}

/// Classical `log(1 + y)` for a series without constant term.
pub fn log_classical<K: SeriesKey, S: LambdaScalar>(y: &Series<K, S>) -> Series<K, S> {
    let d = y.trunc();
    let mut acc = Series::zero(d);
    let mut power = Series::one(d);
    for n in 1..=d {
        power = power.mul_unchecked(y);
        if power.is_zero() {
            break;
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        acc = acc.add_unchecked(&power.scale_rat(&rat(sign, n as i64)));
    }
    acc
}

fn require_zero_constant<K: SeriesKey, S: LambdaScalar>(x: &Series<K, S>) -> Result<()> {
    if !x.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    Ok(())
}

fn require_unit_constant<K: SeriesKey, S: LambdaScalar>(f: &Series<K, S>) -> Result<()> {
    if f.constant_term() != S::one() {
        return Err(Error::ConstantTermNotOne);
    }
    Ok(())
}

/// `Exp_σ(x) = Σ_k h_k ∘ x`, computed as `exp(Σ_k (p_k ∘ x)/k)`.
pub fn exp_sigma<K: SeriesKey, S: LambdaScalar>(x: &Series<K, S>) -> Result<Series<K, S>> {
    require_zero_constant(x)?;
    if !S::is_q_algebra() {
        return Err(Error::NotQAlgebra);
    }
    let d = x.trunc();
    let mut y = Series::zero(d);
    for k in 1..=d {
        y = y.add_unchecked(&x.adams(k).scale_rat(&rat(1, k as i64)));
    }
    Ok(exp_classical(&y))
}

/// `Exp_σ(−x) = Σ_i (−1)^i e_i ∘ x`, computed from the elementary expansion.
pub fn exp_sigma_neg<K: SeriesKey, S: LambdaScalar>(x: &Series<K, S>) -> Result<Series<K, S>> {
    require_zero_constant(x)?;
    let d = x.trunc();
    let mut outer = SymSeries::<Rat>::zero(d);
    for i in 0..=d {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        outer = outer.add_unchecked(&e::<Rat>(i, d).scale_rat(&rint(sign)));
    }
    plethysm_polynomial(&outer, x)
}

/// `ℓ_i ∘ g = (−1/i) Σ_{d | i} μ(d) (−p_d ∘ g)^{i/d}`.
fn stanley_term<K: SeriesKey, S: LambdaScalar>(i: usize, adams: &[Series<K, S>]) -> Series<K, S> {
    let d = adams[0].trunc();
    let mut acc = Series::zero(d);
    for dv in divisors(i) {
        let mu = mobius(dv);
        if mu == 0 {
            continue;
        }
        let base = adams[dv - 1].neg();
        let t = base.pow((i / dv) as u32).scale_rat(&rint(mu));
        acc = acc.add_unchecked(&t);
    }
    acc.scale_rat(&rat(-1, i as i64))
}

/// `Log_σ(f)` through the plethystic inverse `Σ_i ℓ_i ∘ (f − 1)`.
pub fn log_sigma<K: SeriesKey, S: LambdaScalar>(f: &Series<K, S>) -> Result<Series<K, S>> {
    require_unit_constant(f)?;
    let d = f.trunc();
    let g = f.without_constant();
    let adams: Vec<Series<K, S>> = (1..=d.max(1)).map(|k| g.adams(k)).collect();
    let mut acc = Series::zero(d);
    for i in 1..=d {
        acc = acc.add_unchecked(&stanley_term(i, &adams));
    }
    Ok(acc)
}

/// `Log_σ(f)` by degree-by-degree inversion of [`exp_sigma`].
pub fn log_sigma_newton<K: SeriesKey, S: LambdaScalar>(f: &Series<K, S>) -> Result<Series<K, S>> {
    require_unit_constant(f)?;
    let d = f.trunc();
    let mut l = Series::zero(d);
    for n in 1..=d {
        let current = exp_sigma(&l)?;
        l = l.add_unchecked(&f.sub_unchecked(&current).homogeneous(n));
    }
    Ok(l)
}

/// `f^N = Exp_σ(N · Log_σ(f))`.
pub fn power<K: SeriesKey, S: LambdaScalar>(f: &Series<K, S>, n: &S) -> Result<Series<K, S>> {
    exp_sigma(&log_sigma(f)?.scale(n))
}

/// The plethysm `f ∘ g` for a rational symmetric series `f`.
///
/// `f` is expanded in the power-sum basis and `p_k` acts on `g` by the Adams
/// operation on coefficients and `t ↦ t^k` on variables. When `g` has a
/// nonzero constant term, `f` must be a polynomial: its stored terms must stop
/// strictly below its own truncation degree.
pub fn plethysm<K: SeriesKey, S: LambdaScalar>(f: &SymSeries<Rat>, g: &Series<K, S>) -> Result<Series<K, S>> {
    if !g.constant_term().is_zero() && f.max_degree().is_some_and(|m| m >= f.trunc()) {
        return Err(Error::NonzeroConstantTerm);
    }
    plethysm_polynomial(f, g)
}

fn plethysm_polynomial<K: SeriesKey, S: LambdaScalar>(f: &SymSeries<Rat>, g: &Series<K, S>) -> Result<Series<K, S>> {
    let d = g.trunc();
    let fp = to_basis(f, Basis::P)?;
    let top = fp.keys().flat_map(|l| l.parts().first().copied()).max().unwrap_or(0);
    let adams: Vec<Series<K, S>> = (1..=top).map(|k| g.adams(k)).collect();
    let mut out = Series::zero(d);
    for (lambda, c) in fp {
        if g.constant_term().is_zero() && lambda.size() > d {
            continue;
        }
        let mut t = Series::constant(S::from_rat(&c), d);
        for &k in lambda.parts() {
            t = t.mul_unchecked(&adams[k - 1]);
            if t.is_zero() {
                break;
            }
        }
        out = out.add_unchecked(&t);
    }
    Ok(out)
}

/// `h_1 + h_2 + … + h_D`.
pub fn h_sum<S: LambdaScalar>(from: usize, trunc: usize) -> SymSeries<S> {
    let mut acc = SymSeries::zero(trunc);
    for k in from.max(1)..=trunc {
        acc = acc.add_unchecked(&h::<S>(k, trunc));
    }
    acc
}

/// `−e_1 + e_2 − e_3 + …` through degree `D`.
pub fn alternating_e_sum<S: LambdaScalar>(trunc: usize) -> SymSeries<S> {
    let mut acc = SymSeries::zero(trunc);
    for k in 1..=trunc {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        acc = acc.add_unchecked(&e::<S>(k, trunc).scale_rat(&rint(sign)));
    }
    acc
}

/// Monomial coefficients `c_τ ∘ N` of the falling moment generating function `(1 + h_1)^N`.
pub fn falling_mgf_coeffs<S: LambdaScalar>(n: &S, trunc: usize) -> BTreeMap<Partition, S> {
    let base = SymSeries::one(trunc).add_unchecked(&h::<S>(1, trunc));
    power(&base, n).expect("constant term is one").terms().clone()
}

/// The `(p, N)` binomial σ-moment generating function `(1 + p(h_1 + h_2 + …))^N`.
pub fn binomial_mgf<S: LambdaScalar>(p: &S, n: &S, trunc: usize) -> SymSeries<S> {
    let base = SymSeries::one(trunc).add_unchecked(&h_sum::<S>(1, trunc).scale(p));
    power(&base, n).expect("constant term is one")
}

/// The `μ` Poisson σ-moment generating function `Exp_σ(μ(h_1 + h_2 + …))`.
pub fn poisson_mgf<S: LambdaScalar>(mu: &S, trunc: usize) -> SymSeries<S> {
    exp_sigma(&h_sum::<S>(1, trunc).scale(mu)).expect("constant term is zero")
}

/// The configuration symmetric functions `c_τ` for `|τ| ≤ D`.
///
/// They are read off `(1 + h_1(t))^{h_1(y)}` in two alphabets: the coefficient
/// of `m_τ(t)` is `c_τ(y)`, a symmetric function of degree `|τ|` in `y`.
pub fn configuration_functions(trunc: usize) -> BTreeMap<Partition, SymSeries<Rat>> {
    let total = 2 * trunc;
    let base = SymSeries::<Rat>::one(total).add_unchecked(&h::<Rat>(1, total));
    let log = log_sigma(&base).expect("constant term is one");
    let x = tensor(&log, &h::<Rat>(1, total), total);
    let f: BiSymSeries<Rat> = exp_sigma(&x).expect("constant term is zero");
    let mut out: BTreeMap<Partition, SymSeries<Rat>> = BTreeMap::new();
    for (BiPartition(tau, ybar), c) in f.terms() {
        if tau.size() > trunc {
            continue;
        }
        out.entry(tau.clone())
            .or_insert_with(|| SymSeries::zero(trunc))
            .add_term(ybar.clone(), c.clone());
    }
    out
}
