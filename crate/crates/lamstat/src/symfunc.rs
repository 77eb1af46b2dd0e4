//! Degree-truncated symmetric series.
//!
//! A [`Series`] stores the monomial expansion `Σ a_τ m_τ` of a symmetric
//! series, truncated at a total degree `D`. The same container serves one
//! alphabet ([`SymSeries`], keyed by [`Partition`]) and two alphabets
//! ([`BiSymSeries`], keyed by [`BiPartition`] and standing for `m_τ m̄_τ̄`).
//! The other classical bases (`h`, `e`, `p`, `s`) are views obtained through
//! cached transition matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use serde_json::{json, Value};

use crate::coeff::{rint, LambdaScalar, Rat};
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};

/// Index set of a monomial basis.
pub trait SeriesKey: Ord + Clone + Hash + fmt::Debug + Send + Sync + 'static {
    /// Total degree.
    fn degree(&self) -> usize;
    /// Index of the constant monomial.
    fn unit() -> Self;
    /// Index of the image under `t ↦ t^k`.
    fn dilate(&self, k: usize) -> Self;
    /// Structure constants of the product of two monomials.
    fn product(a: &Self, b: &Self) -> Arc<Vec<(Self, i64)>>;
    /// JSON fields describing the key.
    fn json_fields(&self) -> Vec<(&'static str, Value)>;
}

/// A pair of partitions indexing `m_τ m̄_τ̄` in the two-alphabet ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPartition(pub Partition, pub Partition);

impl fmt::Debug for BiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.0, self.1)
    }
}

type ProductCache<K> = Lazy<RwLock<HashMap<(K, K), Arc<Vec<(K, i64)>>>>>;

static M_PRODUCTS: ProductCache<Partition> = Lazy::new(|| RwLock::new(HashMap::new()));

impl SeriesKey for Partition {
    fn degree(&self) -> usize {
        self.size()
    }
    fn unit() -> Self {
        Partition::empty()
    }
    fn dilate(&self, k: usize) -> Self {
        self.scale(k)
    }
    fn product(a: &Self, b: &Self) -> Arc<Vec<(Self, i64)>> {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(v) = M_PRODUCTS.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(monomial_product(&key.0, &key.1));
        M_PRODUCTS.write().unwrap().insert(key, v.clone());
        v
    }
    fn json_fields(&self) -> Vec<(&'static str, Value)> {
        vec![("partition", json!(self.parts()))]
    }
}

impl SeriesKey for BiPartition {
    fn degree(&self) -> usize {
        self.0.size() + self.1.size()
    }
    fn unit() -> Self {
        BiPartition(Partition::empty(), Partition::empty())
    }
    fn dilate(&self, k: usize) -> Self {
        BiPartition(self.0.scale(k), self.1.scale(k))
    }
    fn product(a: &Self, b: &Self) -> Arc<Vec<(Self, i64)>> {
        let left = Partition::product(&a.0, &b.0);
        let right = Partition::product(&a.1, &b.1);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for (l, x) in left.iter() {
            for (r, y) in right.iter() {
                out.push((BiPartition(l.clone(), r.clone()), x * y));
            }
        }
        Arc::new(out)
    }
    fn json_fields(&self) -> Vec<(&'static str, Value)> {
        vec![
            ("partition", json!(self.0.parts())),
            ("partition_bar", json!(self.1.parts())),
        ]
    }
}

/// Expansion of `m_λ m_μ` in the monomial basis.
///
/// The coefficient of `m_ν` counts the ways to write the exponent vector of
/// `ν` as a rearrangement of `λ` plus a rearrangement of `μ`.
pub fn monomial_product(lambda: &Partition, mu: &Partition) -> Vec<(Partition, i64)> {
    let n = lambda.size() + mu.size();
    let lo = lambda.length().max(mu.length());
    let hi = lambda.length() + mu.length();
    let mut out = Vec::new();
    for nu in partitions_of(n) {
        let len = nu.length();
        if len < lo || len > hi {
            continue;
        }
        let mut padded: Vec<usize> = lambda.parts().to_vec();
        padded.resize(len, 0);
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &padded {
            *counts.entry(p).or_default() += 1;
        }
        let mut slot = vec![0usize; len];
        let mut c = 0i64;
        count_arrangements(&nu, mu, &mut counts, &mut slot, 0, &mut c);
        if c != 0 {
            out.push((nu, c));
        }
    }
    out
}

fn count_arrangements(
    nu: &Partition,
    mu: &Partition,
    counts: &mut BTreeMap<usize, usize>,
    slot: &mut Vec<usize>,
    pos: usize,
    acc: &mut i64,
) {
    let len = nu.length();
    if pos == len {
        let beta: Vec<usize> = (0..len).map(|i| nu.parts()[i] - slot[i]).collect();
        if Partition::from_parts(&beta) == *mu {
            *acc += 1;
        }
        return;
    }
    let keys: Vec<usize> = counts.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
    for v in keys {
        if v > nu.parts()[pos] {
            continue;
        }
        *counts.get_mut(&v).unwrap() -= 1;
        slot[pos] = v;
        count_arrangements(nu, mu, counts, slot, pos + 1, acc);
        *counts.get_mut(&v).unwrap() += 1;
    }
}

/// Truncated symmetric series with coefficients in `S`.
#[derive(Clone, PartialEq)]
pub struct Series<K: SeriesKey, S: LambdaScalar> {
    trunc: usize,
    terms: BTreeMap<K, S>,
}

/// One-alphabet truncated symmetric series.
pub type SymSeries<S> = Series<Partition, S>;
/// Two-alphabet truncated symmetric series.
pub type BiSymSeries<S> = Series<BiPartition, S>;

impl<K: SeriesKey, S: LambdaScalar> fmt::Debug for Series<K, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[D={}]{{", self.trunc)?;
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k:?}: {}", v.to_exact_string())?;
        }
        write!(f, "}}")
    }
}

impl<K: SeriesKey, S: LambdaScalar> Series<K, S> {
    /// The zero series.
    pub fn zero(trunc: usize) -> Self {
        Series {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// The constant series `c`.
    pub fn constant(c: S, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.set(K::unit(), c);
        s
    }

    /// The unit series.
    pub fn one(trunc: usize) -> Self {
        Self::constant(S::one(), trunc)
    }

    /// `c · m_key`, rejecting keys above the truncation degree.
    pub fn monomial(key: K, c: S, trunc: usize) -> Result<Self> {
        if key.degree() > trunc {
            return Err(Error::DegreeOverflow {
                degree: key.degree(),
                trunc,
            });
        }
        let mut s = Self::zero(trunc);
        s.set(key, c);
        Ok(s)
    }

    /// Builds a series from monomial coefficients, dropping keys above `trunc`.
    pub fn from_terms(terms: impl IntoIterator<Item = (K, S)>, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        for (k, v) in terms {
            s.add_term(k, v);
        }
        s
    }

    /// The truncation degree `D`.
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Nonzero monomial coefficients in canonical order.
    pub fn terms(&self) -> &BTreeMap<K, S> {
        &self.terms
    }

    /// Coefficient of `m_key`.
    pub fn coeff(&self, key: &K) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> S {
        self.coeff(&K::unit())
    }

    /// Sets the coefficient of `m_key`; keys above the truncation are ignored.
    pub fn set(&mut self, key: K, c: S) {
        if key.degree() > self.trunc {
            return;
        }
        if c.is_exact_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    /// Adds `c · m_key`; keys above the truncation are ignored.
    pub fn add_term(&mut self, key: K, c: S) {
        if key.degree() > self.trunc || c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.plus(&c);
                if v.is_exact_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// True for the zero series.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.degree()).max()
    }

    /// The same series with a smaller truncation degree.
    pub fn truncate(&self, trunc: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.degree() <= trunc)
                .map(|(k, v)| (k.clone(), v.clone())),
            trunc.min(self.trunc),
        )
    }

    /// Homogeneous component of degree `n`.
    pub fn homogeneous(&self, n: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.degree() == n)
                .map(|(k, v)| (k.clone(), v.clone())),
            self.trunc,
        )
    }

    /// The series without its constant term.
    pub fn without_constant(&self) -> Self {
        let mut s = self.clone();
        s.terms.remove(&K::unit());
        s
    }

    fn check_trunc(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    /// Sum, rejecting mismatched truncations.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.add_unchecked(other))
    }

    /// Sum truncated at the smaller of the two degrees.
    pub fn add_unchecked(&self, other: &Self) -> Self {
        let mut s = self.truncate(self.trunc.min(other.trunc));
        for (k, v) in &other.terms {
            s.add_term(k.clone(), v.clone());
        }
        s
    }

    /// Difference, rejecting mismatched truncations.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    /// Difference truncated at the smaller of the two degrees.
    pub fn sub_unchecked(&self, other: &Self) -> Self {
        self.add_unchecked(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Self {
        self.map(|v| v.negated())
    }

    /// Multiplication by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v.times(c))), self.trunc)
    }

    /// Multiplication by a rational.
    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v.scaled(r))), self.trunc)
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), f(v))), self.trunc)
    }

    /// Changes the coefficient ring.
    pub fn map_into<T: LambdaScalar>(&self, f: impl Fn(&S) -> T) -> Series<K, T> {
        Series::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), f(v))), self.trunc)
    }

    /// Fallible change of coefficient ring.
    pub fn try_map_into<T: LambdaScalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<Series<K, T>> {
        let mut out = Series::zero(self.trunc);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v)?);
        }
        Ok(out)
    }

    /// Product, rejecting mismatched truncations.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_trunc(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product truncated at the smaller of the two degrees.
    pub fn mul_unchecked(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut acc: BTreeMap<K, S> = BTreeMap::new();
        for (a, x) in &self.terms {
            let da = a.degree();
            if da > trunc {
                continue;
            }
            for (b, y) in &other.terms {
                if da + b.degree() > trunc {
                    continue;
                }
                let xy = x.times(y);
                for (nu, c) in K::product(a, b).iter() {
                    let t = xy.scaled(&rint(*c));
                    match acc.get_mut(nu) {
                        Some(v) => *v = v.plus(&t),
                        None => {
                            acc.insert(nu.clone(), t);
                        }
                    }
                }
            }
        }
        Self::from_terms(acc, trunc)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> Self {
        self.pow_u128(e.into())
    }

    /// [`Series::pow`] with a wide exponent, for exponents that count points.
    pub fn pow_u128(&self, e: u128) -> Self {
        let mut acc = Self::one(self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// The substitution `t_i ↦ t_i^k` on the variables only.
    pub fn dilate(&self, k: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (m.dilate(k), v.clone())), self.trunc)
    }

    /// The plethysm `p_k ∘ f`: Adams on coefficients and `t_i ↦ t_i^k`.
    pub fn adams(&self, k: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() * k <= self.trunc)
                .map(|(m, v)| (m.dilate(k), v.adams(k as u32))),
            self.trunc,
        )
    }

    /// JSON coefficient table in the monomial basis.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mut obj = serde_json::Map::new();
                for (name, val) in k.json_fields() {
                    obj.insert(name.to_string(), val);
                }
                obj.insert("coeff".to_string(), json!(v.to_exact_string()));
                Value::Object(obj)
            })
            .collect();
        json!({"basis": "m", "trunc": self.trunc, "terms": terms})
    }
}

impl SymSeries<Rat> {
    /// Parses the JSON coefficient table of a rational series.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        if v.get("basis").and_then(Value::as_str) != Some("m") {
            return Err(bad("expected basis \"m\""));
        }
        let trunc = v.get("trunc").and_then(Value::as_u64).ok_or_else(|| bad("missing trunc"))? as usize;
        let mut s = Self::zero(trunc);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let p: Partition = serde_json::from_value(t.get("partition").cloned().unwrap_or(Value::Null))?;
            let c = crate::coeff::parse_rat(t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad("missing coeff"))?)?;
            s.add_term(p, c);
        }
        Ok(s)
    }
}

/// The classical bases of the ring of symmetric functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Monomial.
    M,
    /// Complete homogeneous.
    H,
    /// Elementary.
    E,
    /// Power sum.
    P,
    /// Schur.
    S,
}

impl Basis {
    /// Parses `m`, `h`, `e`, `p` or `s`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(Basis::M),
            "h" => Ok(Basis::H),
            "e" => Ok(Basis::E),
            "p" => Ok(Basis::P),
            "s" => Ok(Basis::S),
            _ => Err(Error::Parse(format!("unknown basis {s:?}"))),
        }
    }
}

type Matrix = Vec<Vec<Rat>>;

struct Transition {
    index: Vec<Partition>,
    /// Row λ holds the monomial expansion of the basis element indexed by λ.
    forward: Matrix,
    /// Inverse of `forward`.
    inverse: Matrix,
}

static TRANSITIONS: Lazy<RwLock<HashMap<(Basis, usize), Arc<Transition>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

static KOSTKA: Lazy<RwLock<HashMap<(Partition, Partition), i64>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// The Kostka number `K_{λμ}`: semistandard tableaux of shape `λ` and content `μ`.
pub fn kostka(lambda: &Partition, mu: &Partition) -> i64 {
    if lambda.size() != mu.size() {
        return 0;
    }
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(&v) = KOSTKA.read().unwrap().get(&key) {
        return v;
    }
    // the largest entry, with multiplicity μ_last, fills a horizontal strip
    let k = *mu.parts().last().unwrap();
    let rest = Partition::from_parts(&mu.parts()[..mu.length() - 1]);
    let mut total = 0;
    for inner in horizontal_strip_removals(lambda, k) {
        total += kostka(&inner, &rest);
    }
    KOSTKA.write().unwrap().insert(key, total);
    total
}

/// Partitions `ν ⊆ λ` such that `λ / ν` is a horizontal strip of size `k`.
pub fn horizontal_strip_removals(lambda: &Partition, k: usize) -> Vec<Partition> {
    let parts = lambda.parts();
    let n = parts.len();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, rem: usize, parts: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = parts.len();
        if i == n {
            if rem == 0 {
                out.push(Partition::from_parts(cur));
            }
            return;
        }
        let lower = parts.get(i + 1).copied().unwrap_or(0);
        for v in lower..=parts[i] {
            let removed = parts[i] - v;
            if removed > rem {
                continue;
            }
            cur[i] = v;
            rec(i + 1, rem - removed, parts, cur, out);
        }
    }
    rec(0, k, parts, &mut cur, &mut out);
    out
}

fn basis_row(basis: Basis, lambda: &Partition, index: &[Partition]) -> Vec<Rat> {
    let n = lambda.size();
    let series: SymSeries<Rat> = match basis {
        Basis::M => SymSeries::from_terms([(lambda.clone(), rint(1))], n),
        Basis::S => SymSeries::from_terms(index.iter().map(|mu| (mu.clone(), rint(kostka(lambda, mu)))), n),
        _ => {
            let mut acc = SymSeries::one(n);
            for &k in lambda.parts() {
                let factor = match basis {
                    Basis::H => SymSeries::from_terms(partitions_of(k).into_iter().map(|p| (p, rint(1))), n),
                    Basis::E => SymSeries::from_terms([(Partition::column(k), rint(1))], n),
                    Basis::P => SymSeries::from_terms([(Partition::row(k), rint(1))], n),
                    _ => unreachable!(),
                };
                acc = acc.mul_unchecked(&factor);
            }
            acc
        }
    };
    index.iter().map(|mu| series.coeff(mu)).collect()
}

fn invert(m: &Matrix) -> Matrix {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("transition matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

fn transition(basis: Basis, n: usize) -> Arc<Transition> {
    if let Some(t) = TRANSITIONS.read().unwrap().get(&(basis, n)) {
        return t.clone();
    }
    let index = partitions_of(n);
    let forward: Matrix = index.iter().map(|l| basis_row(basis, l, &index)).collect();
    let inverse = invert(&forward);
    let t = Arc::new(Transition { index, forward, inverse });
    TRANSITIONS.write().unwrap().insert((basis, n), t.clone());
    t
}

/// The transition matrix from `basis` to the monomial basis in degree `n`.
///
/// Row `λ` lists the monomial coefficients of the basis element `b_λ`, with
/// rows and columns in the canonical order of [`partitions_of`].
pub fn transition_matrix(basis: Basis, n: usize) -> (Vec<Partition>, Vec<Vec<Rat>>) {
    let t = transition(basis, n);
    (t.index.clone(), t.forward.clone())
}

/// The basis element `b_τ` expanded in the monomial basis.
pub fn basis_element<S: LambdaScalar>(basis: Basis, tau: &Partition, trunc: usize) -> Result<SymSeries<S>> {
    if tau.size() > trunc {
        return Err(Error::DegreeOverflow {
            degree: tau.size(),
            trunc,
        });
    }
    let t = transition(basis, tau.size());
    let row = t.index.iter().position(|p| p == tau).expect("partition is indexed");
    Ok(SymSeries::from_terms(
        t.index
            .iter()
            .zip(&t.forward[row])
            .map(|(mu, c)| (mu.clone(), S::from_rat(c))),
        trunc,
    ))
}

/// `h_k`, or `1` for `k = 0`.
pub fn h<S: LambdaScalar>(k: usize, trunc: usize) -> SymSeries<S> {
    basis_element(Basis::H, &Partition::row(k), trunc).unwrap_or_else(|_| SymSeries::zero(trunc))
}

/// `e_k`, or `1` for `k = 0`.
pub fn e<S: LambdaScalar>(k: usize, trunc: usize) -> SymSeries<S> {
    basis_element(Basis::E, &Partition::row(k), trunc).unwrap_or_else(|_| SymSeries::zero(trunc))
}

/// `p_k` for `k ≥ 1`.
pub fn p<S: LambdaScalar>(k: usize, trunc: usize) -> SymSeries<S> {
    basis_element(Basis::P, &Partition::row(k), trunc).unwrap_or_else(|_| SymSeries::zero(trunc))
}

/// Coefficients of `f` in the given basis.
pub fn to_basis<S: LambdaScalar>(f: &SymSeries<S>, basis: Basis) -> Result<BTreeMap<Partition, S>> {
    if matches!(basis, Basis::P | Basis::S) && !S::is_q_algebra() {
        return Err(Error::NotQAlgebra);
    }
    let mut out = BTreeMap::new();
    for n in 0..=f.trunc() {
        let t = transition(basis, n);
        let fm: Vec<S> = t.index.iter().map(|mu| f.coeff(mu)).collect();
        if fm.iter().all(S::is_exact_zero) {
            continue;
        }
        for (j, lambda) in t.index.iter().enumerate() {
            let mut c = S::zero();
            for (i, x) in fm.iter().enumerate() {
                let m = &t.inverse[i][j];
                if !m.is_zero() && !x.is_exact_zero() {
                    c = c.plus(&x.scaled(m));
                }
            }
            if !c.is_exact_zero() {
                out.insert(lambda.clone(), c);
            }
        }
    }
    Ok(out)
}

/// Rebuilds a series from its coefficients in the given basis.
pub fn from_basis<S: LambdaScalar>(coeffs: &BTreeMap<Partition, S>, basis: Basis, trunc: usize) -> Result<SymSeries<S>> {
    let mut out = SymSeries::zero(trunc);
    for (lambda, c) in coeffs {
        out = out.add_unchecked(&basis_element::<S>(basis, lambda, trunc)?.scale(c));
    }
    Ok(out)
}

/// Coefficients of a two-alphabet series in the basis `b_λ b̄_μ`.
pub fn to_basis_bi<S: LambdaScalar>(f: &BiSymSeries<S>, basis: Basis) -> Result<BTreeMap<BiPartition, S>> {
    if matches!(basis, Basis::P | Basis::S) && !S::is_q_algebra() {
        return Err(Error::NotQAlgebra);
    }
    let mut out: BTreeMap<BiPartition, S> = BTreeMap::new();
    for (key, x) in f.terms() {
        let ta = transition(basis, key.0.size());
        let tb = transition(basis, key.1.size());
        let ia = ta.index.iter().position(|p| *p == key.0).unwrap();
        let ib = tb.index.iter().position(|p| *p == key.1).unwrap();
        for (ja, la) in ta.index.iter().enumerate() {
            let ca = &ta.inverse[ia][ja];
            if ca.is_zero() {
                continue;
            }
            for (jb, lb) in tb.index.iter().enumerate() {
                let cb = &tb.inverse[ib][jb];
                if cb.is_zero() {
                    continue;
                }
                let t = x.scaled(&(ca * cb));
                let k = BiPartition(la.clone(), lb.clone());
                let v = out.remove(&k).map(|v| v.plus(&t)).unwrap_or(t);
                if !v.is_exact_zero() {
                    out.insert(k, v);
                }
            }
        }
    }
    Ok(out)
}

/// The Hall inner product, determined by `⟨m_τ, h_μ⟩ = δ_{τμ}`.
pub fn hall<S: LambdaScalar>(f: &SymSeries<S>, g: &SymSeries<S>) -> Result<S> {
    if f.trunc() != g.trunc() {
        return Err(Error::TruncationMismatch(f.trunc(), g.trunc()));
    }
    let gh = to_basis(g, Basis::H)?;
    let mut acc = S::zero();
    for (tau, c) in gh {
        acc = acc.plus(&f.coeff(&tau).times(&c));
    }
    Ok(acc)
}

/// The Hall inner product on the two-alphabet ring (tensor extension).
pub fn hall_bi<S: LambdaScalar>(f: &BiSymSeries<S>, g: &BiSymSeries<S>) -> Result<S> {
    if f.trunc() != g.trunc() {
        return Err(Error::TruncationMismatch(f.trunc(), g.trunc()));
    }
    let gh = to_basis_bi(g, Basis::H)?;
    let mut acc = S::zero();
    for (tau, c) in gh {
        acc = acc.plus(&f.coeff(&tau).times(&c));
    }
    Ok(acc)
}

/// The involution `ω` exchanging `h_λ` and `e_λ`.
pub fn omega<S: LambdaScalar>(f: &SymSeries<S>) -> SymSeries<S> {
    let coeffs = to_basis(f, Basis::H).expect("h expansion needs no division");
    from_basis(&coeffs, Basis::E, f.trunc()).expect("degrees are within truncation")
}

/// The product `f(t) · g(t̄)` of series in the two separate alphabets.
pub fn tensor<S: LambdaScalar>(f: &SymSeries<S>, g: &SymSeries<S>, trunc: usize) -> BiSymSeries<S> {
    let mut out = BiSymSeries::zero(trunc);
    for (a, x) in f.terms() {
        for (b, y) in g.terms() {
            out.add_term(BiPartition(a.clone(), b.clone()), x.times(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn part(p: &[usize]) -> Partition {
        Partition::from_parts(p)
    }

    #[test]
    fn basis_elements_in_m() {
        let h2 = h::<Rat>(2, 4);
        assert_eq!(h2.coeff(&part(&[2])), rint(1));
        assert_eq!(h2.coeff(&part(&[1, 1])), rint(1));
        let e2 = e::<Rat>(2, 4);
        assert_eq!(e2.terms().len(), 1);
        assert_eq!(e2.coeff(&part(&[1, 1])), rint(1));
        assert_eq!(p::<Rat>(2, 4).coeff(&part(&[2])), rint(1));
        assert!(basis_element::<Rat>(Basis::H, &part(&[3]), 2).is_err());
    }

    #[test]
    fn products() {
        let h1 = h::<Rat>(1, 4);
        let sq = h1.mul(&h1).unwrap();
        assert_eq!(sq.coeff(&part(&[2])), rint(1));
        assert_eq!(sq.coeff(&part(&[1, 1])), rint(2));
        let p1p2 = p::<Rat>(1, 4).mul(&p::<Rat>(2, 4)).unwrap();
        assert_eq!(p1p2.coeff(&part(&[3])), rint(1));
        assert_eq!(p1p2.coeff(&part(&[2, 1])), rint(1));
        assert_eq!(p1p2.terms().len(), 2);
        assert!(h1.mul(&h::<Rat>(1, 3)).is_err());
    }

    #[test]
    fn p_expansions() {
        let c = to_basis(&h::<Rat>(2, 4), Basis::P).unwrap();
        assert_eq!(c[&part(&[1, 1])], rat(1, 2));
        assert_eq!(c[&part(&[2])], rat(1, 2));
        let c = to_basis(&e::<Rat>(2, 4), Basis::P).unwrap();
        assert_eq!(c[&part(&[2])], rat(-1, 2));
        let c = to_basis(&basis_element::<Rat>(Basis::M, &part(&[1]), 3).unwrap(), Basis::H).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&part(&[1])], rint(1));
    }

    #[test]
    fn hall_examples() {
        let m21 = basis_element::<Rat>(Basis::M, &part(&[2, 1]), 4).unwrap();
        let h21 = basis_element::<Rat>(Basis::H, &part(&[2, 1]), 4).unwrap();
        assert_eq!(hall(&m21, &h21).unwrap(), rint(1));
        assert_eq!(hall(&p::<Rat>(2, 4), &p::<Rat>(2, 4)).unwrap(), rint(2));
        let s2 = basis_element::<Rat>(Basis::S, &part(&[2]), 4).unwrap();
        let s11 = basis_element::<Rat>(Basis::S, &part(&[1, 1]), 4).unwrap();
        assert_eq!(hall(&s2, &s11).unwrap(), rint(0));
        assert_eq!(hall(&s2, &s2).unwrap(), rint(1));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&h::<Rat>(3, 4)), e::<Rat>(3, 4));
        assert_eq!(omega(&p::<Rat>(2, 4)), p::<Rat>(2, 4).neg());
        assert_eq!(omega(&SymSeries::<Rat>::one(4)), SymSeries::one(4));
    }

    #[test]
    fn kostka_small() {
        assert_eq!(kostka(&part(&[2, 1]), &part(&[1, 1, 1])), 2);
        assert_eq!(kostka(&part(&[3, 2]), &part(&[2, 2, 1])), 2);
        assert_eq!(kostka(&part(&[2, 2]), &part(&[3, 1])), 0);
    }

    #[test]
    fn json_round_trip() {
        let f = h::<Rat>(2, 3).scale_rat(&rat(-3, 5));
        let v = f.to_json();
        assert_eq!(v["terms"][0]["partition"], json!([2]));
        assert_eq!(SymSeries::<Rat>::from_json(&v).unwrap(), f);
    }
}
