//! Point-count statistics of smooth hypersurfaces in projective space.
//!
//! Forms of degree `d` in `m + 1` variables over the working field `F_{q^i}`
//! are enumerated by their dense coefficient vectors. A form is admissible
//! when `V(F) ⊂ ℙ^m` is smooth. Each admissible form gives the zeta function
//! of `V(F)` as a Witt vector whose ghost `k` is the number of points over the
//! degree `k` extension; from it the module builds the geometric variable `±Z`
//! and the normalized vanishing-cohomology variable, and compares their
//! empirical σ-moment generating functions with the limiting closed forms.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::orbit_count_from_points;
use crate::coeff::{rint, CycloHalf, LambdaScalar, Rat};
use crate::error::{Error, Result};
use crate::ff::{self, Gf};
use crate::par;
use crate::partition::{enumerate, Partition};
use crate::plethy::{alternating_e_sum, exp_classical, h_sum};
use crate::symfunc::{e, h, p, SymSeries};
use crate::witt::{power_euler, AdmZSet, WittTrunc};

/// Largest number of forms a single enumeration may visit.
pub const MAX_FORMS: u64 = 1 << 25;

/// Largest number of points in a projective point table.
pub const MAX_POINTS: u64 = 1 << 22;

/// Exponent vectors of the monomials of degree `deg` in `nvars` variables, lexicographically decreasing.
pub fn monomials(nvars: usize, deg: usize) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, deg: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if nvars == 1 {
            prefix.push(deg as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=deg).rev() {
            prefix.push(a as u32);
            rec(nvars - 1, deg - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

/// A homogeneous form, as coefficients over the monomial list of its [`FormSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogForm {
    /// Coefficients in the working field, aligned with [`FormSpace::monomials`].
    pub coeffs: Vec<u32>,
}

/// Whether a hypersurface is smooth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Singular,
}

/// Sign of the geometric variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `Z`, the zeta function.
    Plus,
    /// `−Z`, the reciprocal of the zeta function.
    Minus,
}

/// Limit evaluation mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMode {
    /// Product of local factors over closed points of `ℙ^m` over `F_{q^i}`.
    Euler,
    /// Ghost projection of the power over `[ℙ^m]` through its orbit data.
    Power,
}

struct Macaulay {
    ncols: usize,
    /// `f_shifts[β][a]`: column of `x^β · (monomial a of degree d)`.
    f_shifts: Vec<Vec<usize>>,
    /// `p_shifts[β][c]`: column of `x^β · (monomial c of degree d − 1)`.
    p_shifts: Vec<Vec<usize>>,
}

/// Forms of degree `d` in `m + 1` variables over `F_{q^i}`.
pub struct FormSpace {
    q: u64,
    i: u32,
    m: usize,
    d: usize,
    work: Arc<Gf>,
    monos: Vec<Vec<u32>>,
    lower: Vec<Vec<u32>>,
    /// For each variable `j` and monomial `a`: the index of `∂_j x^a / e_j` among degree `d − 1` monomials and `e_j mod p`.
    deriv: Vec<Vec<Option<(usize, u32)>>>,
    macaulay: Option<Macaulay>,
}

fn index_map(monos: &[Vec<u32>]) -> HashMap<Vec<u32>, usize> {
    monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl FormSpace {
    /// The space of degree `d` forms on `ℙ^m` over `F_{q^i}`; rejects enumerations above [`MAX_FORMS`].
    pub fn new(q: u64, i: u32, m: usize, d: usize) -> Result<Self> {
        if m == 0 || d == 0 || i == 0 {
            return Err(Error::InvalidArgument("m, d and i must be positive".into()));
        }
        let qq = q.checked_pow(i).ok_or_else(|| Error::SizeLimit("working field too large".into()))?;
        let work = Gf::get(qq)?;
        let monos = monomials(m + 1, d);
        let count = qq.checked_pow(monos.len() as u32).filter(|&c| c <= MAX_FORMS);
        if count.is_none() {
            return Err(Error::SizeLimit(format!(
                "{qq}^{} forms of degree {d} on P^{m} exceed the limit of {MAX_FORMS}",
                monos.len()
            )));
        }
        let lower = monomials(m + 1, d - 1);
        let lower_idx = index_map(&lower);
        let p = work.characteristic();
        let deriv = (0..=m)
            .map(|j| {
                monos
                    .iter()
                    .map(|a| {
                        let ej = a[j] % p;
                        if ej == 0 {
                            return None;
                        }
                        let mut b = a.clone();
                        b[j] -= 1;
                        Some((lower_idx[&b], ej))
                    })
                    .collect()
            })
            .collect();
        let macaulay = if m >= 2 {
            let s = (m + 1) * (d - 1) + 1;
            let cols = monomials(m + 1, s);
            let col_idx = index_map(&cols);
            let f_shifts = monomials(m + 1, s - d)
                .iter()
                .map(|b| monos.iter().map(|a| col_idx[&add_exps(a, b)]).collect())
                .collect();
            let p_shifts = monomials(m + 1, s - d + 1)
                .iter()
                .map(|b| lower.iter().map(|a| col_idx[&add_exps(a, b)]).collect())
                .collect();
            Some(Macaulay {
                ncols: cols.len(),
                f_shifts,
                p_shifts,
            })
        } else {
            None
        };
        Ok(FormSpace {
            q,
            i,
            m,
            d,
            work,
            monos,
            lower,
            deriv,
            macaulay,
        })
    }

    /// The base field size `q`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The extension degree `i` of the working field.
    pub fn i(&self) -> u32 {
        self.i
    }

    /// The ambient dimension `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The degree `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The working field.
    pub fn work(&self) -> &Gf {
        &self.work
    }

    /// The degree `d` monomials, in coefficient order.
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monos
    }

    /// Number of forms including zero, `Q^{#monomials}`.
    pub fn total(&self) -> u64 {
        (self.work.size() as u64).pow(self.monos.len() as u32)
    }

    /// The form with the given index, read as base-`Q` digits of the coefficients.
    pub fn form(&self, mut index: u64) -> HomogForm {
        let qq = self.work.size() as u64;
        let coeffs = (0..self.monos.len())
            .map(|_| {
                let c = (index % qq) as u32;
                index /= qq;
                c
            })
            .collect();
        HomogForm { coeffs }
    }

    /// The form `Σ c · x^e` from a list of `(exponents, coefficient)` pairs.
    pub fn form_from_terms(&self, terms: &[(&[u32], u32)]) -> Result<HomogForm> {
        let idx = index_map(&self.monos);
        let mut coeffs = vec![0; self.monos.len()];
        for (exps, c) in terms {
            let j = idx
                .get(*exps)
                .ok_or_else(|| Error::InvalidArgument(format!("{exps:?} is not a monomial of degree {}", self.d)))?;
            coeffs[*j] = self.work.add(coeffs[*j], *c);
        }
        Ok(HomogForm { coeffs })
    }

    fn partials(&self, f: &HomogForm) -> Vec<Vec<u32>> {
        let k = &self.work;
        self.deriv
            .iter()
            .map(|dj| {
                let mut out = vec![0u32; self.lower.len()];
                for (a, entry) in dj.iter().enumerate() {
                    if let Some((b, e)) = *entry {
                        if f.coeffs[a] != 0 {
                            out[b] = k.add(out[b], k.mul(k.from_int(e as i64), f.coeffs[a]));
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// Decides whether `V(F)` is smooth over the algebraic closure.
    ///
    /// Binary forms are smooth exactly when squarefree. For `m ≥ 2` a common
    /// zero of `F` and its partials over the working field is searched first;
    /// otherwise smoothness holds exactly when the degree `s = (m+1)(d−1)+1`
    /// part of the ideal `(F, ∂_0 F, …, ∂_m F)` contains every monomial.
    pub fn smoothness_test(&self, f: &HomogForm) -> Smoothness {
        if self.is_smooth(f) {
            Smoothness::Smooth
        } else {
            Smoothness::Singular
        }
    }

    /// Boolean form of [`FormSpace::smoothness_test`].
    pub fn is_smooth(&self, f: &HomogForm) -> bool {
        if f.coeffs.iter().all(|&c| c == 0) {
            return false;
        }
        if self.m == 1 {
            return self.binary_smooth(f);
        }
        let partials = self.partials(f);
        if self.singular_point_over(f, &partials, 1) {
            return false;
        }
        self.macaulay_full_rank(f, &partials)
    }

    fn binary_smooth(&self, f: &HomogForm) -> bool {
        // dehomogenize at x_1 = 1; y^2 | F shows up as a degree drop of two or more
        let mut poly = vec![0u32; self.d + 1];
        for (a, &c) in self.monos.iter().zip(&f.coeffs) {
            poly[a[0] as usize] = c;
        }
        let poly = ff::normalize(poly);
        match ff::degree(&poly) {
            Some(deg) if deg + 1 >= self.d => ff::is_squarefree(&self.work, &poly),
            _ => false,
        }
    }

    fn macaulay_full_rank(&self, f: &HomogForm, partials: &[Vec<u32>]) -> bool {
        let mac = self.macaulay.as_ref().expect("m >= 2");
        if self.work.size() == 2 {
            let words = mac.ncols.div_ceil(64);
            let mut elim = BitEliminator::new(mac.ncols, words);
            let mut row = vec![0u64; words];
            let mut feed = |shifts: &Vec<Vec<usize>>, coeffs: &[u32]| -> bool {
                for sh in shifts {
                    row.iter_mut().for_each(|w| *w = 0);
                    for (a, &c) in coeffs.iter().enumerate() {
                        if c != 0 {
                            row[sh[a] / 64] ^= 1 << (sh[a] % 64);
                        }
                    }
                    if elim.insert(&mut row) {
                        return true;
                    }
                }
                false
            };
            if feed(&mac.f_shifts, &f.coeffs) {
                return true;
            }
            for pj in partials {
                if pj.iter().any(|&c| c != 0) && feed(&mac.p_shifts, pj) {
                    return true;
                }
            }
            false
        } else {
            let mut elim = FieldEliminator::new(&self.work, mac.ncols);
            let mut feed = |shifts: &Vec<Vec<usize>>, coeffs: &[u32]| -> bool {
                for sh in shifts {
                    let mut row = vec![0u32; mac.ncols];
                    for (a, &c) in coeffs.iter().enumerate() {
                        row[sh[a]] = c;
                    }
                    if elim.insert(row) {
                        return true;
                    }
                }
                false
            };
            if feed(&mac.f_shifts, &f.coeffs) {
                return true;
            }
            for pj in partials {
                if pj.iter().any(|&c| c != 0) && feed(&mac.p_shifts, pj) {
                    return true;
                }
            }
            false
        }
    }

    fn singular_point_over(&self, f: &HomogForm, partials: &[Vec<u32>], e: usize) -> bool {
        let Ok(table) = PointTable::new(self, e, true) else {
            return false;
        };
        let fe = table.embed_coeffs(&f.coeffs);
        let pe: Vec<Vec<u32>> = partials.iter().map(|pj| table.embed_coeffs(pj)).collect();
        (0..table.npts).any(|pt| {
            table.eval(&fe, pt) == 0 && pe.iter().all(|pj| table.eval_lower(pj, pt) == 0)
        })
    }

    /// Exhaustive search for a common zero of `F` and its partials over the degree `e` extension.
    pub fn has_singular_point(&self, f: &HomogForm, e: usize) -> Result<bool> {
        PointTable::new(self, e, true)?;
        Ok(self.singular_point_over(f, &self.partials(f), e))
    }

    /// The Witt vector of the zeta function of `V(F)`, with ghost `k` equal to `#V(F)(F_{Q^k})`.
    pub fn zeta_of_section(&self, f: &HomogForm, n: usize) -> Result<WittTrunc<Rat>> {
        if !self.is_smooth(f) {
            return Err(Error::Singular);
        }
        let ghosts = (1..=n)
            .map(|k| Ok(rint(PointTable::new(self, k, false)?.count_zeros(&f.coeffs) as i64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittTrunc::from_ghosts(ghosts))
    }
}

/// Incremental Gaussian elimination over `F_2` on bit rows.
struct BitEliminator {
    ncols: usize,
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl BitEliminator {
    fn new(ncols: usize, _words: usize) -> Self {
        BitEliminator {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    /// Adds a row; returns true once the rank reaches the column count.
    fn insert(&mut self, row: &mut [u64]) -> bool {
        loop {
            let Some(lead) = row.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize) else {
                return false;
            };
            match &self.pivots[lead] {
                Some(p) => {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    self.pivots[lead] = Some(row.to_vec());
                    self.rank += 1;
                    return self.rank == self.ncols;
                }
            }
        }
    }
}

/// Incremental Gaussian elimination over a finite field.
struct FieldEliminator<'a> {
    k: &'a Gf,
    pivots: Vec<Option<Vec<u32>>>,
    rank: usize,
}

impl<'a> FieldEliminator<'a> {
    fn new(k: &'a Gf, ncols: usize) -> Self {
        FieldEliminator {
            k,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    fn insert(&mut self, mut row: Vec<u32>) -> bool {
        let k = self.k;
        loop {
            let Some(lead) = row.iter().position(|&c| c != 0) else {
                return false;
            };
            match &self.pivots[lead] {
                Some(p) => {
                    let c = row[lead];
                    for (a, &b) in row.iter_mut().zip(p).skip(lead) {
                        if b != 0 {
                            *a = k.sub(*a, k.mul(c, b));
                        }
                    }
                }
                None => {
                    let inv = k.inv(row[lead]).unwrap();
                    for a in row.iter_mut().skip(lead) {
                        *a = k.mul(*a, inv);
                    }
                    self.pivots[lead] = Some(row);
                    self.rank += 1;
                    return self.rank == self.pivots.len();
                }
            }
        }
    }
}

/// Monomial values at the points of `ℙ^m` over the degree `e` extension of the working field.
struct PointTable {
    ext: Arc<Gf>,
    embed: Vec<u32>,
    npts: usize,
    nmonos: usize,
    values: Vec<u32>,
    nlower: usize,
    lower_values: Vec<u32>,
    /// Over `F_2` coefficients: per point and bit, the monomials whose value has that bit set.
    bits: Option<(usize, Vec<u64>)>,
}

impl PointTable {
    fn new(space: &FormSpace, e: usize, with_lower: bool) -> Result<Self> {
        let qq = space.work.size() as u64;
        let size = qq
            .checked_pow(e as u32)
            .filter(|&s| s <= ff::MAX_FIELD_SIZE)
            .ok_or_else(|| Error::SizeLimit(format!("extension of degree {e} of F_{qq} is too large")))?;
        let npts_est = (0..=space.m).try_fold(0u64, |acc, j| size.checked_pow(j as u32).map(|v| acc + v));
        if npts_est.is_none_or(|n| n > MAX_POINTS) {
            return Err(Error::SizeLimit(format!("P^{} over F_{size} has too many points", space.m)));
        }
        let ext = Gf::get(size)?;
        let embed = space.work.embedding_into(&ext)?;
        let points = projective_points(&ext, space.m);
        let eval_monos = |monos: &[Vec<u32>]| -> Vec<u32> {
            let mut out = Vec::with_capacity(points.len() * monos.len());
            for pt in &points {
                for a in monos {
                    let mut v = 1;
                    for (x, &ex) in pt.iter().zip(a) {
                        if ex > 0 {
                            v = ext.mul(v, ext.pow(*x, ex as u128));
                        }
                    }
                    out.push(v);
                }
            }
            out
        };
        let values = eval_monos(&space.monos);
        let lower_values = if with_lower { eval_monos(&space.lower) } else { Vec::new() };
        let nmonos = space.monos.len();
        let bits = (space.work.size() == 2 && nmonos <= 64).then(|| {
            let nbits = ext.degree() as usize;
            let mut masks = vec![0u64; points.len() * nbits];
            for pt in 0..points.len() {
                for a in 0..nmonos {
                    let v = values[pt * nmonos + a];
                    for b in 0..nbits {
                        if (v >> b) & 1 == 1 {
                            masks[pt * nbits + b] |= 1 << a;
                        }
                    }
                }
            }
            (nbits, masks)
        });
        Ok(PointTable {
            ext,
            embed,
            npts: points.len(),
            nmonos,
            values,
            nlower: space.lower.len(),
            lower_values,
            bits,
        })
    }

    fn embed_coeffs(&self, c: &[u32]) -> Vec<u32> {
        c.iter().map(|&x| self.embed[x as usize]).collect()
    }

    #[inline]
    fn eval(&self, coeffs: &[u32], pt: usize) -> u32 {
        let row = &self.values[pt * self.nmonos..(pt + 1) * self.nmonos];
        coeffs
            .iter()
            .zip(row)
            .filter(|(c, _)| **c != 0)
            .fold(0, |acc, (&c, &v)| self.ext.add(acc, self.ext.mul(c, v)))
    }

    #[inline]
    fn eval_lower(&self, coeffs: &[u32], pt: usize) -> u32 {
        let row = &self.lower_values[pt * self.nlower..(pt + 1) * self.nlower];
        coeffs
            .iter()
            .zip(row)
            .filter(|(c, _)| **c != 0)
            .fold(0, |acc, (&c, &v)| self.ext.add(acc, self.ext.mul(c, v)))
    }

    /// Number of points where the form with working-field coefficients `c` vanishes.
    fn count_zeros(&self, c: &[u32]) -> i128 {
        if let Some((nbits, masks)) = &self.bits {
            let mask = c.iter().enumerate().fold(0u64, |m, (a, &x)| m | ((x as u64) << a));
            return (0..self.npts)
                .filter(|&pt| masks[pt * nbits..(pt + 1) * nbits].iter().all(|&b| (b & mask).count_ones() % 2 == 0))
                .count() as i128;
        }
        let ce = self.embed_coeffs(c);
        (0..self.npts).filter(|&pt| self.eval(&ce, pt) == 0).count() as i128
    }
}

/// Normalized representatives of `ℙ^m(F)`: the first nonzero coordinate is 1.
fn projective_points(k: &Gf, m: usize) -> Vec<Vec<u32>> {
    let s = k.size() as u64;
    let mut out = Vec::new();
    for lead in 0..=m {
        let free = m - lead;
        for mut idx in 0..s.pow(free as u32) {
            let mut pt = vec![0u32; m + 1];
            pt[lead] = 1;
            for x in pt.iter_mut().skip(lead + 1) {
                *x = (idx % s) as u32;
                idx /= s;
            }
            out.push(pt);
        }
    }
    out
}

/// Series coefficients `b_0, …, b_n` from integer ghosts through `k b_k = Σ g_j b_{k-j}`.
fn int_series_from_ghosts(g: &[i128]) -> Vec<i128> {
    let mut b = vec![1i128];
    for k in 1..=g.len() {
        let s: i128 = (1..=k).map(|j| g[j - 1] * b[k - j]).sum();
        debug_assert_eq!(s % k as i128, 0);
        b.push(s / k as i128);
    }
    b
}

/// Sums over smooth forms of `∏_j b_{τ_j}` for every `|τ| ≤ trunc`, where `b` is the
/// series with ghosts `ghosts_of(N_1, …, N_trunc)`. Returns the partitions, sums and the count.
fn accumulate(
    space: &FormSpace,
    trunc: usize,
    ghosts_of: impl Fn(&[i128]) -> Vec<i128> + Sync,
) -> Result<(Vec<Partition>, Vec<i128>, u64)> {
    let tables = (1..=trunc)
        .map(|k| PointTable::new(space, k, false))
        .collect::<Result<Vec<_>>>()?;
    let parts = enumerate(trunc);
    let index: HashMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let parent: Vec<(usize, usize)> = parts
        .iter()
        .map(|p| {
            if p.is_empty() {
                (0, 0)
            } else {
                let last = *p.parts().last().unwrap();
                (index[&Partition::from_parts(&p.parts()[..p.length() - 1])], last)
            }
        })
        .collect();
    let total = space.total();
    let chunk = 4096u64;
    let nchunks = total.div_ceil(chunk) as usize;
    let (sums, count) = par::map_reduce(
        nchunks,
        || (vec![0i128; parts.len()], 0u64),
        |c| {
            let mut sums = vec![0i128; parts.len()];
            let mut count = 0u64;
            let mut prod = vec![0i128; parts.len()];
            let lo = (c as u64 * chunk).max(1);
            let hi = ((c as u64 + 1) * chunk).min(total);
            for idx in lo..hi {
                let f = space.form(idx);
                if !space.is_smooth(&f) {
                    continue;
                }
                count += 1;
                let n: Vec<i128> = tables.iter().map(|t| t.count_zeros(&f.coeffs)).collect();
                let b = int_series_from_ghosts(&ghosts_of(&n));
                prod[0] = 1;
                for (j, &(par_idx, last)) in parent.iter().enumerate().skip(1) {
                    prod[j] = prod[par_idx] * b[last];
                }
                for (s, v) in sums.iter_mut().zip(&prod) {
                    *s += v;
                }
            }
            (sums, count)
        },
        |(mut a, ca), (b, cb)| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            (a, ca + cb)
        },
    );
    if count == 0 {
        return Err(Error::EmptyFamily(format!(
            "no smooth forms of degree {} on P^{} over F_{}",
            space.d,
            space.m,
            space.work.size()
        )));
    }
    Ok((parts, sums, count))
}

/// The empirical σ-moment generating function of `±Z` at ghost `i` (the working field of `space`).
pub fn empirical_geo_mgf(space: &FormSpace, trunc: usize, sign: Sign) -> Result<SymSeries<Rat>> {
    let (parts, sums, count) = accumulate(space, trunc, |n| match sign {
        Sign::Plus => n.to_vec(),
        Sign::Minus => n.iter().map(|x| -x).collect(),
    })?;
    let c = Rat::from_integer(BigInt::from(count));
    Ok(SymSeries::from_terms(
        parts
            .into_iter()
            .zip(sums)
            .filter(|(_, s)| *s != 0)
            .map(|(p, s)| (p, Rat::from_integer(BigInt::from(s)) / &c)),
        trunc,
    ))
}

fn epsilon(n: usize) -> i128 {
    if n % 2 == 1 {
        -1
    } else {
        1
    }
}

fn qpow(q: u64, e: usize) -> i128 {
    (q as i128).pow(e as u32)
}

/// `u^{nj} μ_j`, an integer, for `Y = ℙ^{n+1}`.
fn mu_scaled_ghost(q: u64, n: usize, j: usize) -> i128 {
    let eps = epsilon(n);
    let mut acc = 0i128;
    for a in (0..n).step_by(2) {
        acc -= eps * (qpow(q, j * a / 2) + qpow(q, j * (2 * n - a) / 2));
    }
    if n.is_multiple_of(2) {
        acc -= qpow(q, j * n / 2);
    }
    acc
}

/// Ghost `j` of `[H^a(ℙ^{dim})]`: `u^{ja}` for even `a ≤ 2·dim`, zero otherwise.
pub fn cohom_class(q: u64, dim: usize, a: usize, len: usize) -> WittTrunc<CycloHalf> {
    let ghosts = (1..=len)
        .map(|j| {
            if a.is_multiple_of(2) && a <= 2 * dim {
                CycloHalf::u_pow(2, q, (j * a) as i64).unwrap()
            } else {
                CycloHalf::zero_in(2, q).unwrap()
            }
        })
        .collect();
    WittTrunc::from_ghosts(ghosts)
}

/// The constant `μ` of the vanishing-cohomology limit for `Y = ℙ^{n+1}`, with ghosts
/// `−ε Σ_{a<n} (−1)^a (u^{-jn} + u^{j(n−2a)}) [H^a]_j − u^{-jn} [H^n]_j`.
pub fn mu_class(q: u64, n: usize, len: usize) -> WittTrunc<CycloHalf> {
    let eps = rint(epsilon(n) as i64);
    let ghosts = (1..=len)
        .map(|j| {
            let mut acc = CycloHalf::zero_in(2, q).unwrap();
            for a in 0..n {
                let h = cohom_class(q, n + 1, a, len).ghost(j);
                let t = CycloHalf::u_pow(2, q, -((j * n) as i64))
                    .unwrap()
                    .plus(&CycloHalf::u_pow(2, q, j as i64 * (n as i64 - 2 * a as i64)).unwrap());
                let sign = if a % 2 == 0 { rint(1) } else { rint(-1) };
                acc = acc.minus(&t.times(&h).scaled(&(&eps * sign)));
            }
            let hn = cohom_class(q, n + 1, n, len).ghost(j);
            acc.minus(&CycloHalf::u_pow(2, q, -((j * n) as i64)).unwrap().times(&hn))
        })
        .collect();
    WittTrunc::from_ghosts(ghosts)
}

/// The normalized vanishing-cohomology variable of a smooth form on `ℙ^{n+1}`, `n = m − 1`:
/// ghost `k` is `u^{-nik}(ε N_k) + μ_{ik}`.
pub fn vanishing_class(space: &FormSpace, f: &HomogForm, len: usize) -> Result<WittTrunc<CycloHalf>> {
    let z = space.zeta_of_section(f, len)?;
    let n = space.m - 1;
    let i = space.i as usize;
    let mu = mu_class(space.q, n, i * len);
    let eps = rint(epsilon(n) as i64);
    let ghosts = (1..=len)
        .map(|k| {
            CycloHalf::u_pow(2, space.q, -((n * i * k) as i64))
                .unwrap()
                .scaled(&(&z.ghost(k) * &eps))
                .plus(&mu.ghost(i * k))
        })
        .collect();
    Ok(WittTrunc::from_ghosts(ghosts))
}

/// The empirical σ-moment generating function of the normalized vanishing-cohomology variable at ghost `i`.
pub fn empirical_vanishing_mgf(space: &FormSpace, trunc: usize) -> Result<SymSeries<CycloHalf>> {
    let n = space.m - 1;
    let i = space.i as usize;
    let q = space.q;
    let eps = epsilon(n);
    let (parts, sums, count) = accumulate(space, trunc, |counts| {
        counts
            .iter()
            .enumerate()
            .map(|(k0, &nk)| eps * nk + mu_scaled_ghost(q, n, i * (k0 + 1)))
            .collect()
    })?;
    let c = Rat::from_integer(BigInt::from(count));
    Ok(SymSeries::from_terms(
        parts.into_iter().zip(sums).filter(|(_, s)| *s != 0).map(|(p, s)| {
            let u = CycloHalf::u_pow(2, q, -((n * i * p.size()) as i64)).unwrap();
            let v = u.scaled(&(Rat::from_integer(BigInt::from(s)) / &c));
            (p, v)
        }),
        trunc,
    ))
}

/// Ghost `j` of `p = ([q]^{n+1} − 1)/([q]^{n+2} − 1)`, with `n + 1 = m`.
pub fn p_ghost(q: u64, m: usize, j: usize) -> Rat {
    let a = BigInt::from(q).pow((j * m) as u32) - 1;
    let b = BigInt::from(q).pow((j * (m + 1)) as u32) - 1;
    Rat::new(a, b)
}

fn geo_sum<S: LambdaScalar>(sign: Sign, trunc: usize) -> SymSeries<S> {
    match sign {
        Sign::Plus => h_sum(1, trunc),
        Sign::Minus => alternating_e_sum(trunc),
    }
}

/// Numbers of closed points of each degree `1..=n` of `ℙ^m` over `F_Q`.
fn projective_orbit_counts(q: u64, i: usize, m: usize, n: usize) -> Result<Vec<u128>> {
    let too_big = || Error::SizeLimit(format!("point counts of P^{m} over F_{{{q}^{i}}} in degree {n} exceed i128"));
    let qq = q.checked_pow(i as u32).ok_or_else(too_big)? as i128;
    let mut pts = Vec::with_capacity(n);
    for k in 1..=n {
        let mut total: i128 = 0;
        for j in 0..=m {
            let t = qq.checked_pow((k * j) as u32).ok_or_else(too_big)?;
            total = total.checked_add(t).ok_or_else(too_big)?;
        }
        pts.push(total);
    }
    Ok((1..=n).map(|e| orbit_count_from_points(&pts, e) as u128).collect())
}

/// The limiting σ-moment generating function of `±Z` at ghost `i`:
/// the ghost-`i` projection of `(1 + p(h_1 + h_2 + …))^{[ℙ^m]}`, or of the
/// alternating `e` variant for the minus sign.
pub fn limit_geo_mgf(q: u64, m: usize, i: usize, trunc: usize, sign: Sign, mode: LimitMode) -> Result<SymSeries<Rat>> {
    if i == 0 || m == 0 {
        return Err(Error::InvalidArgument("m and i must be positive".into()));
    }
    let s = geo_sum::<Rat>(sign, trunc);
    match mode {
        LimitMode::Power => {
            let len = i * trunc.max(1);
            let pw = WittTrunc::from_ghosts((1..=len).map(|j| p_ghost(q, m, j)).collect());
            let base = SymSeries::one(trunc).add_unchecked(&s.map_into(|c| pw.scaled(c)));
            power_euler(&base, &AdmZSet::projective_space(q, m as u32, len), i)
        }
        LimitMode::Euler => {
            let counts = projective_orbit_counts(q, i, m, trunc)?;
            let mut acc = SymSeries::one(trunc);
            for (e0, &count) in counts.iter().enumerate() {
                let e = e0 + 1;
                let factor = SymSeries::one(trunc).add_unchecked(&s.dilate(e).scale(&p_ghost(q, m, i * e)));
                acc = acc.mul_unchecked(&factor.pow_u128(count));
            }
            Ok(acc)
        }
    }
}

/// The factor `Exp_σ(μ h_1)` at ghost `i`, i.e. `exp(Σ_k μ_{ik} p_k / k)`.
pub fn mu_exp_factor(q: u64, n: usize, i: usize, trunc: usize) -> SymSeries<CycloHalf> {
    let mu = mu_class(q, n, i * trunc.max(1));
    let mut y = SymSeries::zero(trunc);
    for k in 1..=trunc {
        y = y.add_unchecked(&p::<CycloHalf>(k, trunc).scale(&mu.ghost(i * k).scaled(&Rat::new(1.into(), (k as i64).into()))));
    }
    exp_classical(&y)
}

/// The limiting σ-moment generating function of the normalized vanishing-cohomology
/// variable for `Y = ℙ^{n+1}` at ghost `i`:
/// `(1 + p Σ_k [q^{-kn/2}] ε^k f_k)^{[Y]} · Exp_σ(μ h_1)` with `f = e, ε = −1` for odd `n`
/// and `f = h, ε = 1` for even `n`.
pub fn limit_vanishing_mgf(q: u64, n: usize, i: usize, trunc: usize, mode: LimitMode) -> Result<SymSeries<CycloHalf>> {
    if i == 0 {
        return Err(Error::InvalidArgument("ghost index must be positive".into()));
    }
    let m = n + 1;
    let odd = n % 2 == 1;
    let f = |k: usize| -> SymSeries<CycloHalf> {
        if odd {
            e(k, trunc)
        } else {
            h(k, trunc)
        }
    };
    let eps_k = |k: usize| rint(if odd && k % 2 == 1 { -1 } else { 1 });
    let power_part = match mode {
        LimitMode::Power => {
            let len = i * trunc.max(1);
            let mut base = SymSeries::<WittTrunc<CycloHalf>>::one(trunc);
            for k in 1..=trunc {
                let w = WittTrunc::from_ghosts(
                    (1..=len)
                        .map(|j| {
                            CycloHalf::u_pow(2, q, -((j * k * n) as i64))
                                .unwrap()
                                .scaled(&(p_ghost(q, m, j) * eps_k(k)))
                        })
                        .collect(),
                );
                base = base.add_unchecked(&f(k).map_into(|c| w.times(&WittTrunc::diagonal(c.clone()))));
            }
            power_euler(&base, &AdmZSet::projective_space(q, m as u32, len), i)?
        }
        LimitMode::Euler => {
            let counts = projective_orbit_counts(q, i, m, trunc)?;
            let mut acc = SymSeries::one(trunc);
            for (e0, &count) in counts.iter().enumerate() {
                let deg = e0 + 1;
                let j = i * deg;
                let mut factor = SymSeries::one(trunc);
                for k in 1..=trunc / deg {
                    let c = CycloHalf::u_pow(2, q, -((j * k * n) as i64))
                        .unwrap()
                        .scaled(&(p_ghost(q, m, j) * eps_k(k)));
                    factor = factor.add_unchecked(&f(k).dilate(deg).scale(&c));
                }
                acc = acc.mul_unchecked(&factor.pow_u128(count));
            }
            acc
        }
    };
    Ok(power_part.mul_unchecked(&mu_exp_factor(q, n, i, trunc)))
}
