//! Statistics of Kummer character L-functions over `F_q[x]`.
//!
//! For an `ℓ`-power free monic `f` over the working field `F_Q`, `Q = q^i`,
//! the random variable `X(f)` is the Witt vector of `𝓛(χ_f, t·Q^{-1/2})^{-1}`.
//! Its ghost component `k` is `−Q^{-k/2} Σ_{x ∈ F_{Q^k}} χ(N(f(x))^{(Q-1)/ℓ})`,
//! which this module evaluates by summing character values over the points
//! of the degree `k` extension. Character values live in `Z[ζ_ℓ]` during the
//! enumeration and are lifted to [`CycloHalf`] at the end.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{checked_irreducible_count, is_prime};
use crate::coeff::{rat, rint, CycloHalf, LambdaScalar, Rat};
use crate::error::{Error, Result};
use crate::ff::{self, Gf, Poly};
use crate::par;
use crate::partition::{enumerate, Partition};
use crate::symfunc::{e, tensor, BiPartition, BiSymSeries, Series, SymSeries};
use crate::witt::{power_euler, AdmZSet, WittTrunc};

/// A nontrivial character of order `ℓ` on `μ_ℓ(F_q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharCtx {
    q: u64,
    ell: u32,
    chi: u32,
}

impl CharCtx {
    /// `χ(w^j) = ζ_ℓ^{chi·j}` for the fixed generator `w = g^{(q-1)/ℓ}` of `μ_ℓ(F_q)`.
    pub fn new(q: u64, ell: u32, chi: u32) -> Result<Self> {
        CycloHalf::check_context(ell, q)?;
        if !(q - 1).is_multiple_of(ell as u64) {
            return Err(Error::InvalidArgument(format!("{ell} does not divide q - 1 = {}", q - 1)));
        }
        if chi == 0 || chi >= ell {
            return Err(Error::InvalidArgument(format!("character exponent {chi} must lie in 1..{ell}")));
        }
        Ok(CharCtx { q, ell, chi })
    }

    /// The base field size `q`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The character order `ℓ`.
    pub fn ell(&self) -> u32 {
        self.ell
    }
}

/// Elements of `Z[ζ_ℓ]` on the basis `ζ^0, …, ζ^{ℓ-2}` (a single integer for `ℓ = 2`).
pub type ZZeta = Vec<i128>;

fn zz_dim(ell: u32) -> usize {
    (ell as usize - 1).max(1)
}

/// Reduces a vector of coefficients of `ζ^0, …, ζ^{ℓ-1}`.
fn zz_reduce(v: &[i128], ell: u32) -> ZZeta {
    let l = ell as usize;
    (0..zz_dim(ell)).map(|a| v[a] - v[l - 1]).collect()
}

fn zz_pad(a: &[i128], ell: u32) -> Vec<i128> {
    let mut v = a.to_vec();
    v.resize(ell as usize, 0);
    v
}

fn zz_mul(a: &[i128], b: &[i128], ell: u32) -> ZZeta {
    let l = ell as usize;
    let mut v = vec![0i128; l];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[(i + j) % l] += x * y;
        }
    }
    zz_reduce(&v, ell)
}

fn zz_conj(a: &[i128], ell: u32) -> ZZeta {
    let l = ell as usize;
    let p = zz_pad(a, ell);
    let mut v = vec![0i128; l];
    for (i, &x) in p.iter().enumerate() {
        v[(l - i) % l] += x;
    }
    zz_reduce(&v, ell)
}

fn zz_add_assign(a: &mut [i128], b: &[i128]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn zz_one(ell: u32) -> ZZeta {
    let mut v = vec![0; zz_dim(ell)];
    v[0] = 1;
    v
}

fn zz_is_zero(a: &[i128]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// The element `Σ_a v_a ζ^a` as a [`CycloHalf`] with `u² = q`.
pub fn zz_to_cyclo(v: &[i128], ell: u32, q: u64) -> CycloHalf {
    let mut acc = CycloHalf::zero_in(ell, q).expect("checked context");
    for (a, &c) in v.iter().enumerate() {
        if c != 0 {
            let z = CycloHalf::zeta(ell, q, a as i64).expect("checked context");
            acc = acc.plus(&z.scaled(&Rat::from_integer(c.into())));
        }
    }
    acc
}

struct ExtField {
    field: Arc<Gf>,
    /// Embedding of the working field into this extension.
    embed: Vec<u32>,
    /// Inverse mod `ℓ` of `c`, where the image of `w` is `g^{c (S-1)/ℓ}`.
    cinv: u32,
}

/// The working field `F_{q^i}` with its extensions of degree `k ≤ max_k`.
pub struct CharField {
    ctx: CharCtx,
    i: u32,
    exts: Vec<ExtField>,
}

fn cinv_for(field: &Gf, w: u32, ell: u32) -> u32 {
    let s = field.size() as u64 - 1;
    let lw = field.log(w).expect("w is a unit") as u64;
    let c = (lw / (s / ell as u64)) % ell as u64;
    (1..ell).find(|&x| (x as u64 * c) % ell as u64 == 1).expect("c is a unit mod ℓ")
}

impl CharField {
    /// Builds `F_{q^i}` and its extensions of degree up to `max_k`.
    pub fn new(ctx: CharCtx, i: u32, max_k: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidArgument("extension degree i must be positive".into()));
        }
        let base = Gf::get(ctx.q)?;
        let w_base = base.exp((ctx.q - 1) / ctx.ell as u64);
        let qq = ctx.q.checked_pow(i).ok_or_else(|| Error::SizeLimit("working field too large".into()))?;
        let work = Gf::get(qq)?;
        let w_work = base.embedding_into(&work)?[w_base as usize];
        let mut exts = Vec::with_capacity(max_k.max(1));
        for k in 1..=max_k.max(1) {
            let size = qq
                .checked_pow(k as u32)
                .filter(|&s| s <= ff::MAX_FIELD_SIZE)
                .ok_or_else(|| Error::SizeLimit(format!("extension F_{{{qq}^{k}}} exceeds {} elements", ff::MAX_FIELD_SIZE)))?;
            let field = Gf::get(size)?;
            let embed = work.embedding_into(&field)?;
            let cinv = cinv_for(&field, embed[w_work as usize], ctx.ell);
            exts.push(ExtField { field, embed, cinv });
        }
        Ok(CharField { ctx, i, exts })
    }

    /// The character context.
    pub fn ctx(&self) -> CharCtx {
        self.ctx
    }

    /// The extension degree `i` of the working field.
    pub fn i(&self) -> u32 {
        self.i
    }

    /// The working field `F_{q^i}`.
    pub fn work(&self) -> &Gf {
        &self.exts[0].field
    }

    /// Largest extension degree available.
    pub fn max_k(&self) -> usize {
        self.exts.len()
    }

    /// Exponent `a` with `χ(y^{(S-1)/ℓ}) = ζ^a` for `y ≠ 0` in the degree `k` extension.
    #[inline]
    fn chi_exponent(&self, ext: &ExtField, y: u32) -> Option<usize> {
        let l = self.ctx.ell as u64;
        ext.field
            .log(y)
            .map(|lg| ((lg as u64 % l) * ext.cinv as u64 % l * self.ctx.chi as u64 % l) as usize)
    }

    /// `χ` of the `ℓ`-th power residue symbol of `f` at the closed point `P`.
    ///
    /// `P` is monic irreducible over the working field; the residue symbol is
    /// `N(P, f)^{(Q-1)/ℓ}` with `N(P, f) = ∏_{P(α) = 0} f(α)`. Returns zero when `P | f`.
    pub fn char_value(&self, f: &[u32], p: &[u32]) -> CycloHalf {
        let work = self.work();
        let n = ff::norm_of(work, p, f);
        match self.chi_exponent(&self.exts[0], n) {
            None => CycloHalf::zero_in(self.ctx.ell, self.ctx.q).unwrap(),
            Some(a) => CycloHalf::zeta(self.ctx.ell, self.ctx.q, a as i64).unwrap(),
        }
    }

    /// Counts of `χ(f(x))` values over the points `x` of the degree `k` extension,
    /// as a vector indexed by the exponent of `ζ`.
    pub fn character_counts(&self, f: &[u32], k: usize) -> Vec<i128> {
        let ext = &self.exts[k - 1];
        let fe: Poly = f.iter().map(|&c| ext.embed[c as usize]).collect();
        let mut counts = vec![0i128; self.ctx.ell as usize];
        for x in 0..ext.field.size() {
            if let Some(a) = self.chi_exponent(ext, ff::eval(&ext.field, &fe, x)) {
                counts[a] += 1;
            }
        }
        counts
    }

    /// Unnormalized ghost `k` of `𝓛(χ_f, t)^{-1}`: `−Σ_x χ(f(x))` over the degree `k` extension.
    pub fn unnormalized_ghost(&self, f: &[u32], k: usize) -> ZZeta {
        let counts = self.character_counts(f, k);
        zz_reduce(&counts, self.ctx.ell).into_iter().map(|x| -x).collect()
    }

    /// Coefficients `b_0, …, b_n` of `𝓛(χ_f, t)^{-1}` from ghosts computed directly.
    pub fn inverse_l_coeffs_direct(&self, f: &[u32], n: usize) -> Vec<ZZeta> {
        let ghosts: Vec<ZZeta> = (1..=n).map(|k| self.unnormalized_ghost(f, k)).collect();
        series_from_ghosts(&ghosts, self.ctx.ell)
    }

    /// Coefficients `b_0, …, b_n` of `𝓛(χ_f, t)^{-1}`, using that `𝓛` is a
    /// polynomial of degree at most `deg f − 1` to avoid large extensions.
    pub fn inverse_l_coeffs(&self, f: &[u32], n: usize) -> Vec<ZZeta> {
        let d = f.len() - 1;
        let m = n.min(d.saturating_sub(1));
        let b = self.inverse_l_coeffs_direct(f, m);
        if m == n {
            return b;
        }
        let l = invert_series(&b, self.ctx.ell);
        // 𝓛 has degree ≤ m here, so its inverse follows from the recursion
        let ell = self.ctx.ell;
        let mut out = b;
        for k in m + 1..=n {
            let mut acc = vec![0i128; zz_dim(ell)];
            for j in 1..=m {
                zz_add_assign(&mut acc, &zz_mul(&l[j], &out[k - j], ell));
            }
            out.push(acc.into_iter().map(|x| -x).collect());
        }
        out
    }

    /// Coefficients `c_0, …, c_n` of the unnormalized `𝓛(χ_f, t)`, computed directly.
    pub fn l_coeffs(&self, f: &[u32], n: usize) -> Vec<ZZeta> {
        invert_series(&self.inverse_l_coeffs_direct(f, n), self.ctx.ell)
    }

    fn check_power_free(&self, f: &[u32]) -> Result<()> {
        let work = self.work();
        let d = ff::degree(f).ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
        if f[d] != 1 {
            return Err(Error::InvalidArgument("polynomial is not monic".into()));
        }
        let ell = self.ctx.ell as usize;
        for e in 1..=d / ell {
            for p in ff::monic_irreducibles(work, e) {
                let mut pl = vec![1u32];
                for _ in 0..ell {
                    pl = ff::mul(work, &pl, &p);
                }
                if ff::divrem(work, f, &pl).1.is_empty() {
                    return Err(Error::NotPowerFree(self.ctx.ell));
                }
            }
        }
        Ok(())
    }

    /// `X(f) = 𝓛(χ_f, t·u^{-i})^{-1}` as a Witt vector of length `n`, where `u² = q`.
    pub fn l_inverse_normalized(&self, f: &[u32], n: usize) -> Result<WittTrunc<CycloHalf>> {
        self.check_power_free(f)?;
        if n > self.max_k() {
            return Err(Error::WittTooShort { have: self.max_k(), need: n });
        }
        let ell = self.ctx.ell;
        let q = self.ctx.q;
        let ghosts = (1..=n)
            .map(|k| {
                let g = zz_to_cyclo(&self.unnormalized_ghost(f, k), ell, q);
                g.times(&CycloHalf::u_pow(ell, q, -((self.i as usize * k) as i64)).unwrap())
            })
            .collect();
        Ok(WittTrunc::from_ghosts(ghosts))
    }

    /// The truncated central value `Σ_{j ≤ k} (−1)^j (e_j ∘ X)_1`.
    ///
    /// `(e_j ∘ X)_1` is the coefficient of `(−t)^j` in the reciprocal of the
    /// series of `X`, so the sum is the partial sum `Σ_{j ≤ k}` of the
    /// coefficients of `𝓛(χ_f, t·u^{-i})`.
    pub fn truncated_central_value(&self, f: &[u32], k: usize) -> Result<CycloHalf> {
        self.check_power_free(f)?;
        let ell = self.ctx.ell;
        let q = self.ctx.q;
        let c = invert_series(&self.inverse_l_coeffs(f, k), ell);
        let mut acc = CycloHalf::rational_in(ell, q, &rint(1)).unwrap();
        for (j, cj) in c.iter().enumerate().skip(1) {
            let u = CycloHalf::u_pow(ell, q, -((self.i as usize * j) as i64)).unwrap();
            acc = acc.plus(&zz_to_cyclo(cj, ell, q).times(&u));
        }
        Ok(acc)
    }
}

/// Series coefficients from ghosts: `k b_k = Σ_{j=1}^{k} g_j b_{k-j}`, exactly in `Z[ζ]`.
fn series_from_ghosts(ghosts: &[ZZeta], ell: u32) -> Vec<ZZeta> {
    let mut b = vec![zz_one(ell)];
    for k in 1..=ghosts.len() {
        let mut acc = vec![0i128; zz_dim(ell)];
        for j in 1..=k {
            zz_add_assign(&mut acc, &zz_mul(&ghosts[j - 1], &b[k - j], ell));
        }
        let kk = k as i128;
        assert!(acc.iter().all(|x| x % kk == 0), "series coefficients are integral");
        b.push(acc.into_iter().map(|x| x / kk).collect());
    }
    b
}

/// Inverse of a power series with constant term 1, to the same length.
fn invert_series(b: &[ZZeta], ell: u32) -> Vec<ZZeta> {
    let mut c = vec![zz_one(ell)];
    for k in 1..b.len() {
        let mut acc = vec![0i128; zz_dim(ell)];
        for j in 1..=k {
            zz_add_assign(&mut acc, &zz_mul(&b[j], &c[k - j], ell));
        }
        c.push(acc.into_iter().map(|x| -x).collect());
    }
    c
}

/// The monic `ℓ`-power free polynomials of degree `d` over the working field.
pub fn enumerate_ellfree(cf: &CharField, d: usize) -> Result<Vec<Poly>> {
    let work = cf.work();
    let flags = ff::power_free_flags(work, d, cf.ctx.ell)?;
    Ok(flags
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(idx, _)| ff::monic_from_index(work, d, idx as u64))
        .collect())
}

/// A σ-moment generating function: one alphabet for `ℓ = 2`, joint with the conjugate for `ℓ > 2`.
#[derive(Clone, Debug, PartialEq)]
pub enum CharMgf {
    /// `E[Exp_σ(X h_1)]`.
    Single(SymSeries<CycloHalf>),
    /// `E[Exp_σ(X h_1 + X̄ h̄_1)]`.
    Joint(BiSymSeries<CycloHalf>),
}

impl CharMgf {
    /// Coefficients keyed by `(τ, τ̄)`, with `τ̄` empty in the single case.
    pub fn coefficients(&self) -> BTreeMap<BiPartition, CycloHalf> {
        match self {
            CharMgf::Single(s) => s
                .terms()
                .iter()
                .map(|(k, v)| (BiPartition(k.clone(), Partition::empty()), v.clone()))
                .collect(),
            CharMgf::Joint(s) => s.terms().clone(),
        }
    }

    /// The coefficient of `m_τ m̄_τ̄`.
    pub fn coeff(&self, tau: &Partition, tau_bar: &Partition) -> CycloHalf {
        match self {
            CharMgf::Single(s) => {
                if tau_bar.is_empty() {
                    s.coeff(tau)
                } else {
                    CycloHalf::zero()
                }
            }
            CharMgf::Joint(s) => s.coeff(&BiPartition(tau.clone(), tau_bar.clone())),
        }
    }

    /// JSON coefficient table.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CharMgf::Single(s) => s.to_json(),
            CharMgf::Joint(s) => s.to_json(),
        }
    }
}

fn joint_keys(trunc: usize, joint: bool) -> Vec<(Partition, Partition)> {
    let parts = enumerate(trunc);
    let mut keys = Vec::new();
    for a in &parts {
        if joint {
            for b in &parts {
                if a.size() + b.size() <= trunc && !(a.is_empty() && b.is_empty()) {
                    keys.push((a.clone(), b.clone()));
                }
            }
        } else if !a.is_empty() {
            keys.push((a.clone(), Partition::empty()));
        }
    }
    keys
}

/// The empirical σ-moment generating function at ghost `i` (the working field of `cf`),
/// averaged over all monic `ℓ`-power free `f` of degree `d`.
///
/// The coefficient of `m_τ m̄_τ̄` is `u^{-i(|τ| + |τ̄|)}` times the average of
/// `∏_j b_{τ_j} ∏_j conj(b_{τ̄_j})`, where `b_k` is the coefficient of `t^k` in
/// `𝓛(χ_f, t)^{-1}`. With `joint = false` only `τ̄ = ∅` is kept and the result
/// is a single-alphabet series.
pub fn empirical_mgf_chars(cf: &CharField, d: usize, trunc: usize, joint: bool) -> Result<CharMgf> {
    let ell = cf.ctx.ell;
    let q = cf.ctx.q;
    let work = cf.work();
    let flags = ff::power_free_flags(work, d, ell)?;
    let members: Vec<u64> = flags
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(i, _)| i as u64)
        .collect();
    if members.is_empty() {
        return Err(Error::EmptyFamily(format!("no {ell}-power free polynomials of degree {d}")));
    }
    let needed = trunc.min(d.saturating_sub(1));
    if needed > cf.max_k() {
        return Err(Error::WittTooShort { have: cf.max_k(), need: needed });
    }
    let keys = joint_keys(trunc, joint);
    let parts: Vec<Partition> = enumerate(trunc);
    let part_index: BTreeMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let key_index: Vec<(usize, usize)> = keys.iter().map(|(a, b)| (part_index[a], part_index[b])).collect();
    let dim = zz_dim(ell);
    let chunks = par::chunks(members.len(), 64);
    let sums = par::map_reduce(
        chunks.len(),
        || vec![vec![0i128; dim]; keys.len()],
        |c| {
            let (lo, hi) = chunks[c];
            let mut acc = vec![vec![0i128; dim]; keys.len()];
            for &idx in &members[lo..hi] {
                let f = ff::monic_from_index(work, d, idx);
                let b = cf.inverse_l_coeffs(&f, trunc);
                // products over each partition, built from the partition with its last part removed
                let mut prod: Vec<ZZeta> = Vec::with_capacity(parts.len());
                for p in &parts {
                    if p.is_empty() {
                        prod.push(zz_one(ell));
                    } else {
                        let last = *p.parts().last().unwrap();
                        let parent = Partition::from_parts(&p.parts()[..p.length() - 1]);
                        let v = zz_mul(&prod[part_index[&parent]], &b[last], ell);
                        prod.push(v);
                    }
                }
                let conj: Vec<ZZeta> = if joint { prod.iter().map(|v| zz_conj(v, ell)).collect() } else { Vec::new() };
                for (slot, &(a, bb)) in acc.iter_mut().zip(&key_index) {
                    if joint {
                        if zz_is_zero(&prod[a]) || zz_is_zero(&conj[bb]) {
                            continue;
                        }
                        zz_add_assign(slot, &zz_mul(&prod[a], &conj[bb], ell));
                    } else {
                        zz_add_assign(slot, &prod[a]);
                    }
                }
            }
            acc
        },
        |mut x, y| {
            for (a, b) in x.iter_mut().zip(&y) {
                zz_add_assign(a, b);
            }
            x
        },
    );
    let count = Rat::from_integer((members.len() as i64).into());
    let one = CycloHalf::rational_in(ell, q, &rint(1)).unwrap();
    let mut terms: Vec<(BiPartition, CycloHalf)> = vec![(BiPartition(Partition::empty(), Partition::empty()), one)];
    for ((a, b), s) in keys.iter().zip(&sums) {
        if zz_is_zero(s) {
            continue;
        }
        let deg = (a.size() + b.size()) as i64;
        let u = CycloHalf::u_pow(ell, q, -(cf.i as i64) * deg).unwrap();
        let v = zz_to_cyclo(s, ell, q).times(&u).scaled(&count.recip());
        terms.push((BiPartition(a.clone(), b.clone()), v));
    }
    Ok(if joint {
        CharMgf::Joint(Series::from_terms(terms, trunc))
    } else {
        CharMgf::Single(Series::from_terms(terms.into_iter().map(|(k, v)| (k.0, v)), trunc))
    })
}

/// Limit evaluation mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMode {
    /// Product of local factors over the closed points of the affine line over `F_{q^i}`.
    Euler,
    /// Ghost projection of the power `F^{[𝔸¹]}` through the orbit data of the affine line over `F_q`.
    Power,
}

/// `(c_ℓ)_j = q^{j(ℓ-1)} / (q^{j(ℓ-1)} + … + 1)`.
pub fn c_ell_ghost(q: u64, ell: u32, j: usize) -> Rat {
    let qj = Rat::from_integer(num_bigint::BigInt::from(q).pow(j as u32));
    let mut den = rint(0);
    let mut pw = rint(1);
    for _ in 0..ell {
        den += &pw;
        pw *= &qj;
    }
    let num = num_traits::pow(qj, ell as usize - 1);
    num / den
}

fn sign(k: usize) -> Rat {
    if k.is_multiple_of(2) {
        rint(1)
    } else {
        rint(-1)
    }
}

/// The pairs `(k_1, k_2) ≠ (0, 0)` with `k_1 ≡ k_2 mod ℓ` and `k_1 + k_2 ≤ D`.
fn congruent_pairs(ell: u32, trunc: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k1 in 0..=trunc {
        for k2 in 0..=trunc - k1 {
            if (k1, k2) != (0, 0) && (k1 as i64 - k2 as i64).rem_euclid(ell as i64) == 0 {
                out.push((k1, k2));
            }
        }
    }
    out
}

/// The local factor at a closed point of degree `deg` over `F_{q^i}`, before substituting `t ↦ t^{deg}`.
fn local_factor_joint(ctx: CharCtx, i: usize, deg: usize, trunc: usize) -> BiSymSeries<CycloHalf> {
    let (ell, q) = (ctx.ell, ctx.q);
    let j = i * deg;
    let c = c_ell_ghost(q, ell, j);
    let mut acc = BiSymSeries::one(trunc);
    for (k1, k2) in congruent_pairs(ell, trunc / deg) {
        let coeff = CycloHalf::u_pow(ell, q, -((j * (k1 + k2)) as i64))
            .unwrap()
            .scaled(&(&c * sign(k1 + k2)));
        let term = tensor(&e::<CycloHalf>(k1, trunc), &e::<CycloHalf>(k2, trunc), trunc).scale(&coeff);
        acc = acc.add_unchecked(&term);
    }
    acc.dilate(deg)
}

fn local_factor_single(ctx: CharCtx, i: usize, deg: usize, trunc: usize) -> SymSeries<CycloHalf> {
    let (ell, q) = (ctx.ell, ctx.q);
    let j = i * deg;
    let c = c_ell_ghost(q, ell, j);
    let mut acc = SymSeries::one(trunc);
    for k in 1..=trunc / (2 * deg) {
        let coeff = CycloHalf::u_pow(ell, q, -((2 * j * k) as i64)).unwrap().scaled(&c);
        acc = acc.add_unchecked(&e::<CycloHalf>(2 * k, trunc).scale(&coeff));
    }
    acc.dilate(deg)
}

/// The Witt-coefficient series `1 + c_ℓ Σ (−1)^{k_1+k_2} [q^{-(k_1+k_2)/2}] e_{k_1} ē_{k_2}` with ghost length `len`.
pub fn witt_base_joint(ctx: CharCtx, trunc: usize, len: usize) -> BiSymSeries<WittTrunc<CycloHalf>> {
    let (ell, q) = (ctx.ell, ctx.q);
    let c: Vec<CycloHalf> = (1..=len)
        .map(|j| CycloHalf::rational_in(ell, q, &c_ell_ghost(q, ell, j)).unwrap())
        .collect();
    let mut acc = BiSymSeries::one(trunc);
    for (k1, k2) in congruent_pairs(ell, trunc) {
        let s = (k1 + k2) as i64;
        let ghosts = (1..=len)
            .map(|j| {
                CycloHalf::u_pow(ell, q, -(j as i64) * s)
                    .unwrap()
                    .times(&c[j - 1])
                    .scaled(&sign(k1 + k2))
            })
            .collect();
        let w = WittTrunc::from_ghosts(ghosts);
        let term = tensor(&e::<WittTrunc<CycloHalf>>(k1, trunc), &e(k2, trunc), trunc).scale(&w);
        acc = acc.add_unchecked(&term);
    }
    acc
}

/// The Witt-coefficient series `1 + c_2 Σ_{k ≥ 1} [q^{-k}] e_{2k}` with ghost length `len`.
pub fn witt_base_single(ctx: CharCtx, trunc: usize, len: usize) -> SymSeries<WittTrunc<CycloHalf>> {
    let (ell, q) = (ctx.ell, ctx.q);
    let mut acc = SymSeries::one(trunc);
    for k in 1..=trunc / 2 {
        let ghosts = (1..=len)
            .map(|j| {
                CycloHalf::u_pow(ell, q, -((2 * j * k) as i64))
                    .unwrap()
                    .scaled(&c_ell_ghost(q, ell, j))
            })
            .collect();
        acc = acc.add_unchecked(&e::<WittTrunc<CycloHalf>>(2 * k, trunc).scale(&WittTrunc::from_ghosts(ghosts)));
    }
    acc
}

/// The limiting σ-moment generating function at ghost `i`.
///
/// For `ℓ = 2` this is the single-alphabet series
/// `∏_P (1 + (c_2)_{i deg P} Σ_k q^{-ik deg P} p_{deg P} ∘ e_{2k})` over the closed
/// points `P` of the affine line over `F_{q^i}`; for `ℓ > 2` it is the joint series
/// with local factors `1 + (c_ℓ) Σ (−1)^{k_1+k_2} q_P^{-(k_1+k_2)/2} p_{deg P} ∘ (e_{k_1} ē_{k_2})`.
pub fn limit_mgf_chars(ctx: CharCtx, i: usize, trunc: usize, mode: LimitMode) -> Result<CharMgf> {
    if i == 0 {
        return Err(Error::InvalidArgument("ghost index must be positive".into()));
    }
    let joint = ctx.ell > 2;
    match mode {
        LimitMode::Euler => {
            let qi = ctx.q.checked_pow(i as u32).ok_or_else(|| Error::SizeLimit(format!("q^{i} exceeds u64")))?;
            if joint {
                let mut acc = BiSymSeries::one(trunc);
                for deg in 1..=trunc {
                    let n = checked_irreducible_count(qi, deg)
                        .ok_or_else(|| Error::SizeLimit(format!("closed points of degree {deg} over F_{qi}")))?;
                    acc = acc.mul_unchecked(&local_factor_joint(ctx, i, deg, trunc).pow_u128(n));
                }
                Ok(CharMgf::Joint(acc))
            } else {
                let mut acc = SymSeries::one(trunc);
                for deg in 1..=trunc {
                    let n = checked_irreducible_count(qi, deg)
                        .ok_or_else(|| Error::SizeLimit(format!("closed points of degree {deg} over F_{qi}")))?;
                    acc = acc.mul_unchecked(&local_factor_single(ctx, i, deg, trunc).pow_u128(n));
                }
                Ok(CharMgf::Single(acc))
            }
        }
        LimitMode::Power => {
            let len = i * trunc.max(1);
            let line = AdmZSet::affine_line(ctx.q, len);
            if joint {
                Ok(CharMgf::Joint(power_euler(&witt_base_joint(ctx, trunc, len), &line, i)?))
            } else {
                Ok(CharMgf::Single(power_euler(&witt_base_single(ctx, trunc, len), &line, i)?))
            }
        }
    }
}

/// Whether `ℓ` is an admissible character order for `q`.
pub fn admissible_ell(q: u64, ell: u32) -> bool {
    is_prime(ell as u64) && ell <= 7 && (q - 1).is_multiple_of(ell as u64)
}

/// `q^i / (q^i + 1)`, the coefficient of `m_{(1,1)}` at ghost `i` in the `ℓ = 2` limit.
pub fn quadratic_m11_limit(q: u64, i: usize) -> Rat {
    let qi = Rat::from_integer(num_bigint::BigInt::from(q).pow(i as u32));
    &qi / (&qi + rat(1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::from_parts(v)
    }

    fn cyc(ell: u32, q: u64, r: Rat) -> CycloHalf {
        CycloHalf::rational_in(ell, q, &r).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let cf = CharField::new(CharCtx::new(3, 2, 1).unwrap(), 1, 1).unwrap();
        assert_eq!(enumerate_ellfree(&cf, 1).unwrap().len(), 3);
        assert_eq!(enumerate_ellfree(&cf, 2).unwrap().len(), 6);
        assert_eq!(enumerate_ellfree(&cf, 3).unwrap().len(), 18);
        assert!(CharCtx::new(3, 3, 1).is_err());
        assert!(CharCtx::new(7, 3, 0).is_err());
    }

    #[test]
    fn character_values() {
        let cf = CharField::new(CharCtx::new(3, 2, 1).unwrap(), 1, 1).unwrap();
        let x = vec![0, 1];
        let one = cyc(2, 3, rint(1));
        assert_eq!(cf.char_value(&x, &[2, 1]), one);
        assert_eq!(cf.char_value(&x, &[1, 1]), one.negated());
        assert!(cf.char_value(&x, &[0, 1]).is_zero());
    }

    #[test]
    fn char_value_matches_extension_evaluation() {
        // the norm route against direct evaluation at a root in the extension
        for (q, ell) in [(3u64, 2u32), (4, 3), (7, 3)] {
            let ctx = CharCtx::new(q, ell, 1).unwrap();
            let cf = CharField::new(ctx, 1, 3).unwrap();
            let work = cf.work();
            let f: Poly = vec![1, 2 % work.size(), 0, 1];
            for deg in 1..=3 {
                let ext = &cf.exts[deg - 1];
                for p in ff::monic_irreducibles(work, deg) {
                    let pe: Poly = p.iter().map(|&c| ext.embed[c as usize]).collect();
                    let fe: Poly = f.iter().map(|&c| ext.embed[c as usize]).collect();
                    let root = (0..ext.field.size()).find(|&x| ff::eval(&ext.field, &pe, x) == 0).unwrap();
                    let y = ff::eval(&ext.field, &fe, root);
                    let expect = match cf.chi_exponent(ext, y) {
                        None => CycloHalf::zero_in(ell, q).unwrap(),
                        Some(a) => CycloHalf::zeta(ell, q, a as i64).unwrap(),
                    };
                    assert_eq!(cf.char_value(&f, &p), expect, "q={q} P={p:?}");
                }
            }
        }
    }

    #[test]
    fn linear_f_gives_zero_witt_vector() {
        let cf = CharField::new(CharCtx::new(3, 2, 1).unwrap(), 1, 4).unwrap();
        for f in enumerate_ellfree(&cf, 1).unwrap() {
            let w = cf.l_inverse_normalized(&f, 4).unwrap();
            assert_eq!(w, WittTrunc::zero_len(4));
        }
        let x = vec![0, 1];
        let w = cf.l_inverse_normalized(&x, 2).unwrap();
        assert!(w.to_series()[1].is_zero());
        assert_eq!(cf.l_inverse_normalized(&[1, 2, 1], 2), Err(Error::NotPowerFree(2)));
    }

    #[test]
    fn euler_product_oracle() {
        // ∏_{deg P ≤ N} (1 − (t u^{-i})^{deg P} χ(P)) against the point-sum ghosts
        for (q, ell, i) in [(3u64, 2u32, 1u32), (3, 2, 2), (4, 3, 1)] {
            let ctx = CharCtx::new(q, ell, 1).unwrap();
            let n = 3;
            let cf = CharField::new(ctx, i, n).unwrap();
            let work = cf.work();
            let f: Poly = vec![1, 1, 0, 1 % work.size(), 0, 1];
            let f = if cf.check_power_free(&f).is_ok() { f } else { vec![2 % work.size(), 1, 0, 0, 0, 1] };
            let mut series = vec![cyc(ell, q, rint(1))];
            series.resize(n + 1, CycloHalf::zero_in(ell, q).unwrap());
            for deg in 1..=n {
                let u = CycloHalf::u_pow(ell, q, -((i as usize * deg) as i64)).unwrap();
                for p in ff::monic_irreducibles(work, deg) {
                    let a = cf.char_value(&f, &p).times(&u).negated();
                    let mut next = series.clone();
                    for k in deg..=n {
                        next[k] = next[k].plus(&series[k - deg].times(&a));
                    }
                    series = next;
                }
            }
            let w = cf.l_inverse_normalized(&f, n).unwrap();
            assert_eq!(w.to_series(), series, "q={q} ell={ell} i={i}");
        }
    }

    #[test]
    fn l_series_degree_and_shortcut() {
        let cf = CharField::new(CharCtx::new(3, 2, 1).unwrap(), 1, 6).unwrap();
        for f in enumerate_ellfree(&cf, 5).unwrap().iter().take(40) {
            let c = cf.l_coeffs(f, 6);
            assert!(!zz_is_zero(&c[4]));
            assert!(zz_is_zero(&c[5]) && zz_is_zero(&c[6]));
            assert_eq!(cf.inverse_l_coeffs(f, 6), cf.inverse_l_coeffs_direct(f, 6));
        }
    }

    #[test]
    fn central_values() {
        let cf = CharField::new(CharCtx::new(3, 2, 1).unwrap(), 1, 4).unwrap();
        let one = cyc(2, 3, rint(1));
        let lin = vec![1, 1];
        for k in 0..3 {
            assert_eq!(cf.truncated_central_value(&lin, k).unwrap(), one);
        }
        let f = vec![1, 2, 0, 1];
        assert_eq!(cf.truncated_central_value(&f, 0).unwrap(), one);
        let c1 = zz_to_cyclo(&cf.l_coeffs(&f, 1)[1], 2, 3).times(&CycloHalf::u_pow(2, 3, -1).unwrap());
        assert_eq!(cf.truncated_central_value(&f, 1).unwrap(), one.plus(&c1));
    }

    #[test]
    fn limit_modes_agree() {
        for (q, ell, trunc) in [(3u64, 2u32, 6usize), (5, 2, 4), (4, 3, 4), (7, 3, 3)] {
            let ctx = CharCtx::new(q, ell, 1).unwrap();
            for i in 1..=2 {
                let a = limit_mgf_chars(ctx, i, trunc, LimitMode::Euler).unwrap();
                let b = limit_mgf_chars(ctx, i, trunc, LimitMode::Power).unwrap();
                assert_eq!(a, b, "q={q} ell={ell} i={i}");
            }
        }
    }

    #[test]
    fn limit_low_coefficients() {
        let ctx = CharCtx::new(3, 2, 1).unwrap();
        for i in 1..=3 {
            let m = limit_mgf_chars(ctx, i, 4, LimitMode::Euler).unwrap();
            assert_eq!(m.coeff(&part(&[1, 1]), &Partition::empty()), cyc(2, 3, quadratic_m11_limit(3, i)));
            assert!(m.coeff(&part(&[1]), &Partition::empty()).is_zero());
        }
        let ctx = CharCtx::new(4, 3, 1).unwrap();
        let m = limit_mgf_chars(ctx, 1, 2, LimitMode::Power).unwrap();
        assert_eq!(m.coeff(&part(&[1]), &part(&[1])), cyc(3, 4, rat(16, 21)));
    }

    #[test]
    fn empirical_basics() {
        let ctx = CharCtx::new(3, 2, 1).unwrap();
        let cf = CharField::new(ctx, 1, 4).unwrap();
        let m = empirical_mgf_chars(&cf, 1, 4, false).unwrap();
        assert_eq!(m, CharMgf::Single(SymSeries::one(4).map(|c: &CycloHalf| c.plus(&cyc(2, 3, rint(0))))));
        let m = empirical_mgf_chars(&cf, 3, 3, false).unwrap();
        assert_eq!(m.coeff(&Partition::empty(), &Partition::empty()), cyc(2, 3, rint(1)));
    }
}
