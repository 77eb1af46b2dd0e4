//! Truncated big Witt vectors in ghost coordinates and admissible ℤ-sets.
//!
//! A Witt vector over a ℚ-algebra `K` is stored through its ghost components
//! `(a_1, …, a_N)`, which correspond to the power series `1 + c_1 t + …` with
//! `t·dlog = Σ a_k t^k`. Ring operations are componentwise on ghosts and the
//! Adams operation `p_j ∘` dilates indices: `(a_i)_i ↦ (a_{ij})_i`.

use std::fmt;

use serde_json::{json, Value};

use crate::arith::{gcd, irreducible_count, orbit_count_from_points};
use crate::coeff::{rat, rint, LambdaScalar, Rat};
use crate::error::{Error, Result};
use crate::par;
use crate::symfunc::{Series, SeriesKey};

/// A truncated big Witt vector in ghost coordinates.
///
/// A *diagonal* vector has every ghost equal to one value and no fixed
/// length; it is the image of a scalar of `K` and combines with vectors of any
/// length. Binary operations on two non-diagonal vectors keep the shorter
/// length.
#[derive(Clone)]
pub struct WittTrunc<K> {
    ghosts: Vec<K>,
    diagonal: bool,
}

impl<K: LambdaScalar> WittTrunc<K> {
    /// The vector with the given ghost components.
    pub fn from_ghosts(ghosts: Vec<K>) -> Self {
        WittTrunc { ghosts, diagonal: false }
    }

    /// The diagonal vector with every ghost equal to `c`.
    pub fn diagonal(c: K) -> Self {
        WittTrunc {
            ghosts: vec![c],
            diagonal: true,
        }
    }

    /// The additive zero, i.e. the series `1`, of length `n`.
    pub fn zero_len(n: usize) -> Self {
        Self::from_ghosts(vec![K::zero(); n])
    }

    /// The unit, i.e. the series `1/(1 − t)`, of length `n`.
    pub fn one_len(n: usize) -> Self {
        Self::from_ghosts(vec![K::one(); n])
    }

    /// True for a diagonal vector.
    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// The ghost length, or `None` for a diagonal vector.
    pub fn len(&self) -> Option<usize> {
        (!self.diagonal).then_some(self.ghosts.len())
    }

    /// True for a non-diagonal vector of length zero.
    pub fn is_empty(&self) -> bool {
        !self.diagonal && self.ghosts.is_empty()
    }

    /// The ghost component `a_i` for `i ≥ 1`.
    ///
    /// Panics when `i` is zero or beyond the length.
    pub fn ghost(&self, i: usize) -> K {
        assert!(i >= 1, "ghost components are indexed from 1");
        if self.diagonal {
            self.ghosts[0].clone()
        } else {
            self.ghosts[i - 1].clone()
        }
    }

    /// The stored ghost components (a single value for a diagonal vector).
    pub fn ghosts(&self) -> &[K] {
        &self.ghosts
    }

    /// The vector truncated or materialized to length `n`.
    pub fn with_len(&self, n: usize) -> Result<Self> {
        if self.diagonal {
            return Ok(Self::from_ghosts(vec![self.ghosts[0].clone(); n]));
        }
        if self.ghosts.len() < n {
            return Err(Error::WittTooShort {
                have: self.ghosts.len(),
                need: n,
            });
        }
        Ok(Self::from_ghosts(self.ghosts[..n].to_vec()))
    }

    /// The vector of the series `1 + c_1 t + … + c_N t^N`, given `[1, c_1, …, c_N]`.
    pub fn from_series(coeffs: &[K]) -> Result<Self> {
        if coeffs.first() != Some(&K::one()) {
            return Err(Error::ConstantTermNotOne);
        }
        let n = coeffs.len() - 1;
        let mut g: Vec<K> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut v = coeffs[k].scaled(&rint(k as i64));
            for j in 1..k {
                v = v.minus(&g[j - 1].times(&coeffs[k - j]));
            }
            g.push(v);
        }
        Ok(Self::from_ghosts(g))
    }

    /// The series coefficients `[1, c_1, …, c_N]`.
    ///
    /// Panics on a diagonal vector, which has no length; call
    /// [`WittTrunc::with_len`] first.
    pub fn to_series(&self) -> Vec<K> {
        assert!(!self.diagonal, "a diagonal Witt vector needs a length before conversion");
        let n = self.ghosts.len();
        let mut c = vec![K::one()];
        for k in 1..=n {
            let mut v = K::zero();
            for j in 1..=k {
                v = v.plus(&self.ghosts[j - 1].times(&c[k - j]));
            }
            c.push(v.scaled(&rat(1, k as i64)));
        }
        c
    }

    /// The Teichmüller vector `[z] = (z, z², …, z^N)`, the series `1/(1 − zt)`.
    pub fn teichmuller(z: &K, n: usize) -> Self {
        let mut g = Vec::with_capacity(n);
        let mut acc = K::one();
        for _ in 0..n {
            acc = acc.times(z);
            g.push(acc.clone());
        }
        Self::from_ghosts(g)
    }

    /// Ghost dilation `p_j ∘ (a_i)_i = (a_{ij})_i` to output length `out_len`.
    pub fn adams_witt(&self, j: usize, out_len: usize) -> Result<Self> {
        if self.diagonal {
            return Ok(self.clone());
        }
        if j * out_len > self.ghosts.len() {
            return Err(Error::WittTooShort {
                have: self.ghosts.len(),
                need: j * out_len,
            });
        }
        Ok(Self::from_ghosts((1..=out_len).map(|i| self.ghosts[i * j - 1].clone()).collect()))
    }

    /// Ghost dilation to the longest available output length.
    pub fn dilate(&self, j: usize) -> Self {
        if self.diagonal {
            return self.clone();
        }
        let out = self.ghosts.len() / j;
        self.adams_witt(j, out).expect("length fits")
    }

    /// The substitution `t ↦ t^k`: `(a_i)_i ↦ (k·a_{i/k})_i`, zero off multiples of `k`.
    pub fn substitute_tk(&self, k: usize) -> Self {
        let n = self.len().expect("substitution needs a finite length");
        let kk = rint(k as i64);
        Self::from_ghosts(
            (1..=n)
                .map(|i| {
                    if i % k == 0 {
                        self.ghosts[i / k - 1].scaled(&kk)
                    } else {
                        K::zero()
                    }
                })
                .collect(),
        )
    }

    fn zip(&self, other: &Self, f: impl Fn(&K, &K) -> K) -> Self {
        match (self.diagonal, other.diagonal) {
            (true, true) => Self::diagonal(f(&self.ghosts[0], &other.ghosts[0])),
            (true, false) => Self::from_ghosts(other.ghosts.iter().map(|b| f(&self.ghosts[0], b)).collect()),
            (false, true) => Self::from_ghosts(self.ghosts.iter().map(|a| f(a, &other.ghosts[0])).collect()),
            (false, false) => Self::from_ghosts(self.ghosts.iter().zip(&other.ghosts).map(|(a, b)| f(a, b)).collect()),
        }
    }

    fn map_ghosts(&self, f: impl Fn(&K) -> K) -> Self {
        WittTrunc {
            ghosts: self.ghosts.iter().map(f).collect(),
            diagonal: self.diagonal,
        }
    }

    /// JSON form `{"ghosts": [...]}`; a diagonal vector also carries `"diagonal": true`.
    pub fn to_json(&self) -> Value {
        let g: Vec<String> = self.ghosts.iter().map(K::to_exact_string).collect();
        if self.diagonal {
            json!({ "ghosts": g, "diagonal": true })
        } else {
            json!({ "ghosts": g })
        }
    }
}

impl<K: LambdaScalar> PartialEq for WittTrunc<K> {
    fn eq(&self, other: &Self) -> bool {
        match (self.diagonal, other.diagonal) {
            (true, true) => self.ghosts[0] == other.ghosts[0],
            (true, false) => other.ghosts.iter().all(|g| *g == self.ghosts[0]),
            (false, true) => self.ghosts.iter().all(|g| *g == other.ghosts[0]),
            (false, false) => self.ghosts == other.ghosts,
        }
    }
}

impl<K: LambdaScalar> fmt::Debug for WittTrunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.diagonal {
            write!(f, "W[{:?}, ...]", self.ghosts[0])
        } else {
            write!(f, "W{:?}", self.ghosts)
        }
    }
}

impl<K: LambdaScalar> LambdaScalar for WittTrunc<K> {
    fn zero() -> Self {
        Self::diagonal(K::zero())
    }
    fn one() -> Self {
        Self::diagonal(K::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Self::diagonal(K::from_rat(r))
    }
    fn is_zero(&self) -> bool {
        self.ghosts.iter().all(K::is_zero)
    }
    fn is_exact_zero(&self) -> bool {
        self.diagonal && self.ghosts[0].is_exact_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.zip(other, K::plus)
    }
    fn minus(&self, other: &Self) -> Self {
        self.zip(other, K::minus)
    }
    fn times(&self, other: &Self) -> Self {
        self.zip(other, K::times)
    }
    fn negated(&self) -> Self {
        self.map_ghosts(K::negated)
    }
    fn scaled(&self, r: &Rat) -> Self {
        self.map_ghosts(|g| g.scaled(r))
    }
    fn inverse(&self) -> Option<Self> {
        let inv: Option<Vec<K>> = self.ghosts.iter().map(K::inverse).collect();
        inv.map(|ghosts| WittTrunc {
            ghosts,
            diagonal: self.diagonal,
        })
    }
    fn adams(&self, k: u32) -> Self {
        self.dilate(k as usize)
    }
    fn to_exact_string(&self) -> String {
        let g: Vec<String> = self.ghosts.iter().map(K::to_exact_string).collect();
        if self.diagonal {
            format!("[{}, ...]", g[0])
        } else {
            format!("[{}]", g.join(", "))
        }
    }
}

/// An admissible ℤ-set described by the degrees of its orbits.
///
/// Each entry of `degrees` is one orbit. Orbits of degree larger than the
/// ghost length in use never contribute and may be left out.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AdmZSet {
    degrees: Vec<usize>,
}

impl AdmZSet {
    /// The set with one orbit of each listed degree.
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.contains(&0) {
            return Err(Error::InvalidArgument("orbit degrees must be positive".into()));
        }
        Ok(AdmZSet { degrees })
    }

    /// The set with `counts[d − 1]` orbits of degree `d`.
    pub fn from_orbit_counts(counts: &[u64]) -> Self {
        let mut degrees = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            degrees.extend(std::iter::repeat_n(i + 1, c as usize));
        }
        AdmZSet { degrees }
    }

    /// Orbits through degree `n` of a set with `counts[k − 1]` points fixed by `k`.
    pub fn from_point_counts(counts: &[i128]) -> Result<Self> {
        let mut orbit_counts = Vec::with_capacity(counts.len());
        for d in 1..=counts.len() {
            let c = orbit_count_from_points(counts, d);
            if c < 0 {
                return Err(Error::InvalidArgument(format!("negative orbit count in degree {d}")));
            }
            orbit_counts.push(c as u64);
        }
        Ok(Self::from_orbit_counts(&orbit_counts))
    }

    /// Closed points of the affine line over `F_q` of degree at most `n`.
    pub fn affine_line(q: u64, n: usize) -> Self {
        Self::from_orbit_counts(&(1..=n).map(|d| irreducible_count(q, d)).collect::<Vec<_>>())
    }

    /// Closed points of projective `m`-space over `F_q` of degree at most `n`.
    pub fn projective_space(q: u64, m: u32, n: usize) -> Self {
        let counts: Vec<i128> = (1..=n)
            .map(|k| {
                let qk = (q as i128).pow(k as u32);
                (0..=m).map(|j| qk.pow(j)).sum()
            })
            .collect();
        Self::from_point_counts(&counts).expect("projective point counts are admissible")
    }

    /// Orbit degrees, one entry per orbit.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Number of orbits.
    pub fn orbit_count(&self) -> usize {
        self.degrees.len()
    }

    /// Disjoint union.
    pub fn union(&self, other: &Self) -> Self {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        AdmZSet { degrees }
    }

    /// `#S(𝐤) = Σ_{d | k} d · (number of orbits of degree d)`.
    pub fn point_count(&self, k: usize) -> usize {
        self.degrees.iter().filter(|&&d| k.is_multiple_of(d)).sum()
    }
}

/// A Witt-valued function on the orbits of an [`AdmZSet`], indexed like its degrees.
pub type WFunction<K> = Vec<WittTrunc<K>>;

/// The class `[S]` with ghosts `#S(𝐤)` for `k ≤ n`.
pub fn class_of<K: LambdaScalar>(s: &AdmZSet, n: usize) -> WittTrunc<K> {
    WittTrunc::from_ghosts((1..=n).map(|k| K::from_int(s.point_count(k) as i64)).collect())
}

fn check_defined<K>(v: &AdmZSet, f: &[WittTrunc<K>], n: usize) -> Result<()> {
    if let Some(idx) = (f.len()..v.degrees.len()).find(|&o| v.degrees[o] <= n) {
        return Err(Error::MissingOrbit(idx));
    }
    Ok(())
}

/// `∫_V f`, with ghost `i` equal to `Σ_{orbits o, deg o | i} deg(o) · f(o)_{i / deg o}`.
pub fn integrate<K: LambdaScalar>(v: &AdmZSet, f: &[WittTrunc<K>], n: usize) -> Result<WittTrunc<K>> {
    check_defined(v, f, n)?;
    for (o, &d) in v.degrees.iter().enumerate() {
        if d <= n {
            if let Some(len) = f[o].len() {
                if len < n / d {
                    return Err(Error::WittTooShort { have: len, need: n / d });
                }
            }
        }
    }
    let ghosts = par::map_reduce(
        v.degrees.len(),
        || vec![K::zero(); n],
        |o| {
            let d = v.degrees[o];
            let mut acc = vec![K::zero(); n];
            if d <= n {
                let dd = rint(d as i64);
                for m in 1..=n / d {
                    acc[m * d - 1] = f[o].ghost(m).scaled(&dd);
                }
            }
            acc
        },
        |a, b| a.iter().zip(&b).map(|(x, y)| x.plus(y)).collect(),
    );
    Ok(WittTrunc::from_ghosts(ghosts))
}

/// `E[f] = (∫_S f) / [S]`, computed ghostwise.
pub fn expectation<K: LambdaScalar>(s: &AdmZSet, f: &[WittTrunc<K>], n: usize) -> Result<WittTrunc<K>> {
    let total = integrate(s, f, n)?;
    let ghosts = (1..=n)
        .map(|k| {
            let c = s.point_count(k);
            if c == 0 {
                return Err(Error::EmptyLevelSet(k));
            }
            Ok(total.ghost(k).scaled(&rat(1, c as i64)))
        })
        .collect::<Result<Vec<K>>>()?;
    Ok(WittTrunc::from_ghosts(ghosts))
}

/// The ghost component `E_k[f] = (∫_S f)_k / #S(𝐤)`.
pub fn expectation_component<K: LambdaScalar>(s: &AdmZSet, f: &[WittTrunc<K>], k: usize) -> Result<K> {
    let c = s.point_count(k);
    if c == 0 {
        return Err(Error::EmptyLevelSet(k));
    }
    Ok(integrate(s, f, k)?.ghost(k).scaled(&rat(1, c as i64)))
}

/// The pullback of `w` along `V → pt`: the orbit `v` gets `p_{deg v} ∘ w`.
pub fn pullback<K: LambdaScalar>(w: &WittTrunc<K>, v: &AdmZSet) -> WFunction<K> {
    v.degrees.iter().map(|&d| w.dilate(d)).collect()
}

/// `res_k(f)` on the points of `S(𝐤)`: each orbit of degree `d | k` gives `d`
/// points, all carrying `p_{k/d} ∘ f(o)`.
pub fn res_k<K: LambdaScalar>(s: &AdmZSet, f: &[WittTrunc<K>], k: usize) -> Result<Vec<WittTrunc<K>>> {
    check_defined(s, f, k)?;
    let mut out = Vec::new();
    for (o, &d) in s.degrees.iter().enumerate() {
        if k.is_multiple_of(d) {
            let r = f[o].dilate(k / d);
            out.extend(std::iter::repeat_n(r, d));
        }
    }
    Ok(out)
}

/// The ghost-`i` projection of a series with Witt coefficients.
pub fn project<Key: SeriesKey, K: LambdaScalar>(f: &Series<Key, WittTrunc<K>>, i: usize) -> Series<Key, K> {
    f.map_into(|w| w.ghost(i))
}

/// The ghost-`i` projection of the power `F^{[V]}` as a product over orbits.
///
/// Over the base change to degree `i`, an orbit of degree `d` splits into
/// `gcd(i, d)` orbits of degree `μ = d / gcd(i, d)`, each contributing
/// `F_{iμ}(t^μ)`. Orbits with `μ` above the truncation degree contribute `1`.
pub fn power_euler<Key: SeriesKey, K: LambdaScalar>(
    f: &Series<Key, WittTrunc<K>>,
    v: &AdmZSet,
    i: usize,
) -> Result<Series<Key, K>> {
    if f.constant_term() != WittTrunc::one() {
        return Err(Error::ConstantTermNotOne);
    }
    let d_max = f.trunc();
    for w in f.terms().values() {
        if let Some(len) = w.len() {
            if len < i * d_max {
                return Err(Error::WittTooShort {
                    have: len,
                    need: i * d_max,
                });
            }
        }
    }
    // group orbits by their split degree so each slice is raised once
    let mut exponents = vec![0u32; d_max + 1];
    for &d in &v.degrees {
        let g = gcd(i, d);
        let mu = d / g;
        if mu <= d_max {
            exponents[mu] += g as u32;
        }
    }
    let mut acc = Series::one(d_max);
    for (mu, &e) in exponents.iter().enumerate().skip(1) {
        if e == 0 {
            continue;
        }
        let slice = project(f, i * mu).dilate(mu);
        acc = acc.mul_unchecked(&slice.pow(e));
    }
    Ok(acc)
}
