//! Moment generating functions of random matrices from compact groups.
//!
//! For a compact group `G_n` acting on `V = ℂⁿ`, the σ-moment generating
//! function of the eigenvalue alphabet is `Σ_τ E[h_τ(M)] m_τ`, and
//! `E[h_τ(M)] = dim (Sym^τ V)^{G_n}`. This module computes the finite `n`
//! coefficients exactly (cycle types for `Σ_n`, Kostka sums for `U(n)`,
//! Weyl constant terms for `O(n)`, `SO(n)` and `Sp(n)`), the limiting series
//! as `n → ∞`, trace moments through the Hall pairing with power sums, falling
//! moments of cycle counts, and a Haar Monte Carlo oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use crate::coeff::{rbig, Rat};
use crate::error::{Error, Result};
use crate::par;
use crate::partition::{enumerate, partitions_of, Partition};
use crate::plethy::{configuration_functions, exp_sigma, h_sum};
use crate::symfunc::{e, h, hall, hall_bi, kostka, p, tensor, to_basis, Basis, BiPartition, BiSymSeries, SymSeries};

/// Largest `n` handled by the Weyl constant-term engine.
pub const MAX_WEYL_N: usize = 6;
/// Largest `n` for the symmetric group engines.
pub const MAX_SYM_N: usize = 30;
/// Largest `n` for the Monte Carlo oracle.
pub const MAX_MC_N: usize = 64;

/// A compact group together with its standard representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// Permutation matrices acting on `ℂⁿ`.
    Symmetric(usize),
    /// Permutation matrices acting on the `(n − 1)`-dimensional standard representation.
    SymmetricStandard(usize),
    /// The unitary group `U(n)`.
    Unitary(usize),
    /// The real orthogonal group `O(n)`.
    Orthogonal(usize),
    /// The special orthogonal group `SO(n)`.
    SpecialOrthogonal(usize),
    /// The compact symplectic group `Sp(n)`, `n` even.
    Symplectic(usize),
}

/// The limiting behaviour shared by a sequence of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Symmetric,
    SymmetricStandard,
    Unitary,
    Orthogonal,
    Symplectic,
}

impl GroupTag {
    /// Checks `n ≥ 1` and that symplectic groups have even `n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidArgument("group size n must be at least 1".into()));
        }
        if let GroupTag::Symplectic(n) = self {
            if n % 2 != 0 {
                return Err(Error::InvalidArgument(format!("Sp(n) needs even n, got {n}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            GroupTag::Symmetric(n)
            | GroupTag::SymmetricStandard(n)
            | GroupTag::Unitary(n)
            | GroupTag::Orthogonal(n)
            | GroupTag::SpecialOrthogonal(n)
            | GroupTag::Symplectic(n) => n,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            GroupTag::Symmetric(_) => Family::Symmetric,
            GroupTag::SymmetricStandard(_) => Family::SymmetricStandard,
            GroupTag::Unitary(_) => Family::Unitary,
            GroupTag::Orthogonal(_) | GroupTag::SpecialOrthogonal(_) => Family::Orthogonal,
            GroupTag::Symplectic(_) => Family::Symplectic,
        }
    }

    /// Parses `sym`, `sym-std`, `u`, `o`, `so` or `sp` together with `n`.
    pub fn parse(name: &str, n: usize) -> Result<Self> {
        let tag = match name.to_ascii_lowercase().as_str() {
            "sym" | "symmetric" => GroupTag::Symmetric(n),
            "sym-std" | "std" | "standard" => GroupTag::SymmetricStandard(n),
            "u" | "unitary" => GroupTag::Unitary(n),
            "o" | "orthogonal" => GroupTag::Orthogonal(n),
            "so" => GroupTag::SpecialOrthogonal(n),
            "sp" | "symplectic" => GroupTag::Symplectic(n),
            other => return Err(Error::Parse(format!("unknown group '{other}'"))),
        };
        tag.validate()?;
        Ok(tag)
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Symmetric(n) => write!(f, "Sigma({n})"),
            GroupTag::SymmetricStandard(n) => write!(f, "Sigma({n}) standard"),
            GroupTag::Unitary(n) => write!(f, "U({n})"),
            GroupTag::Orthogonal(n) => write!(f, "O({n})"),
            GroupTag::SpecialOrthogonal(n) => write!(f, "SO({n})"),
            GroupTag::Symplectic(n) => write!(f, "Sp({n})"),
        }
    }
}

/// A moment generating function in one alphabet, or two for unitary groups.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupMgf {
    Single(SymSeries<Rat>),
    Joint(BiSymSeries<Rat>),
}

impl GroupMgf {
    /// Coefficient of `m_τ m̄_τ̄`; `τ̄` must be empty for a single alphabet.
    pub fn coeff(&self, tau: &Partition, tau_bar: &Partition) -> Rat {
        match self {
            GroupMgf::Single(s) => {
                if tau_bar.is_empty() {
                    s.coeff(tau)
                } else {
                    Rat::zero()
                }
            }
            GroupMgf::Joint(s) => s.coeff(&BiPartition(tau.clone(), tau_bar.clone())),
        }
    }

    /// All nonzero coefficients keyed by `(τ, τ̄)`.
    pub fn coefficients(&self) -> BTreeMap<BiPartition, Rat> {
        match self {
            GroupMgf::Single(s) => s
                .terms()
                .iter()
                .map(|(k, v)| (BiPartition(k.clone(), Partition::empty()), v.clone()))
                .collect(),
            GroupMgf::Joint(s) => s.terms().clone(),
        }
    }

    pub fn trunc(&self) -> usize {
        match self {
            GroupMgf::Single(s) => s.trunc(),
            GroupMgf::Joint(s) => s.trunc(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroupMgf::Single(s) => s.to_json(),
            GroupMgf::Joint(s) => s.to_json(),
        }
    }
}

/// Coefficients of `∏_i 1/(1 − t^{λ_i})` through degree `D`.
fn cycle_series(lambda: &Partition, trunc: usize, standard: bool) -> Vec<i128> {
    let mut f = vec![0i128; trunc + 1];
    f[0] = 1;
    for &l in lambda.parts() {
        for k in l..=trunc {
            f[k] += f[k - l];
        }
    }
    if standard {
        for k in (1..=trunc).rev() {
            f[k] -= f[k - 1];
        }
    }
    f
}

fn sym_mgf_impl(n: usize, trunc: usize, standard: bool) -> Result<SymSeries<Rat>> {
    if n == 0 {
        return Err(Error::InvalidArgument("group size n must be at least 1".into()));
    }
    if n > MAX_SYM_N {
        return Err(Error::SizeLimit(format!("symmetric group size {n} exceeds {MAX_SYM_N}")));
    }
    let types: Vec<(Rat, Vec<i128>)> = partitions_of(n)
        .into_iter()
        .map(|l| (l.z().recip(), cycle_series(&l, trunc, standard)))
        .collect();
    let mut out = SymSeries::zero(trunc);
    for tau in enumerate(trunc) {
        let mut acc = Rat::zero();
        for (w, f) in &types {
            let prod: i128 = tau.parts().iter().map(|&j| f[j]).product();
            if prod != 0 {
                acc += w * rbig(prod);
            }
        }
        out.set(tau, acc);
    }
    Ok(out)
}

/// Exact moment generating function of the permutation representation of `Σ_n`.
///
/// The coefficient of `m_τ` is the Burnside average over cycle types `λ ⊢ n`
/// of `∏_j [t^{τ_j}] ∏_i 1/(1 − t^{λ_i})`.
pub fn sym_group_mgf(n: usize, trunc: usize) -> Result<SymSeries<Rat>> {
    sym_mgf_impl(n, trunc, false)
}

/// Exact moment generating function of the standard representation of `Σ_n`.
pub fn sym_standard_mgf(n: usize, trunc: usize) -> Result<SymSeries<Rat>> {
    sym_mgf_impl(n, trunc, true)
}

/// The limiting moment generating function of a family, truncated at `D`.
///
/// `O ↦ Exp_σ(h_2)`, `Sp ↦ Exp_σ(e_2)`, `Σ ↦ Exp_σ(h_1 + h_2 + …)`,
/// standard `Σ ↦ Exp_σ(h_2 + h_3 + …)` and `U ↦ Exp_σ(h_1 h̄_1)`.
pub fn limit_mgf(family: Family, trunc: usize) -> GroupMgf {
    let single = |x: SymSeries<Rat>| GroupMgf::Single(exp_sigma(&x).expect("constant term is zero"));
    match family {
        Family::Orthogonal => single(h::<Rat>(2, trunc)),
        Family::Symplectic => single(e::<Rat>(2, trunc)),
        Family::Symmetric => single(h_sum::<Rat>(1, trunc)),
        Family::SymmetricStandard => single(h_sum::<Rat>(2, trunc)),
        Family::Unitary => {
            let x = tensor(&h::<Rat>(1, trunc), &h::<Rat>(1, trunc), trunc);
            GroupMgf::Joint(exp_sigma(&x).expect("constant term is zero"))
        }
    }
}

/// `dim (Sym^τ V ⊗ Sym^τ̄ V*)^{U(n)} = Σ_{λ: ‖λ‖ ≤ n} K_{λτ} K_{λτ̄}`.
pub fn unitary_inv_dim(n: usize, tau: &Partition, tau_bar: &Partition) -> i128 {
    if tau.size() != tau_bar.size() {
        return 0;
    }
    partitions_of(tau.size())
        .iter()
        .filter(|l| l.length() <= n)
        .map(|l| kostka(l, tau) as i128 * kostka(l, tau_bar) as i128)
        .sum()
}

/// Laurent polynomials in the torus coordinates with integer coefficients.
type Laurent = HashMap<Vec<i32>, i128>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out: Laurent = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
    for (ea, ca) in a {
        for (eb, cb) in b {
            let key: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(key).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Constant term of `a · b` without forming the product.
fn laurent_pair(a: &Laurent, b: &Laurent) -> i128 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = 0i128;
    for (e, c) in small {
        let neg: Vec<i32> = e.iter().map(|x| -x).collect();
        if let Some(d) = large.get(&neg) {
            acc += c * d;
        }
    }
    acc
}

fn unit_vec(rank: usize, i: usize, s: i32) -> Vec<i32> {
    let mut v = vec![0; rank];
    v[i] = s;
    v
}

/// One connected piece of a group seen through its maximal torus.
///
/// Eigenvalues are `x_i^{±1}` for the `rank` torus coordinates together with
/// the fixed eigenvalues in `fixed`. Integration against the Weyl density
/// `∏_{α ∈ Φ} (1 − x^α) / |W|` gives the Haar expectation on the piece.
struct TorusPiece {
    rank: usize,
    fixed: Vec<i32>,
    /// `−1` for the piece `−SO(n)`, which negates every eigenvalue.
    torus_sign: i128,
    density: Laurent,
    weyl_order: i128,
}

#[derive(Clone, Copy)]
enum RootSystem {
    /// `±e_i ± e_j`.
    D,
    /// `±e_i ± e_j` and `±e_i`.
    B,
    /// `±e_i ± e_j` and `±2e_i`.
    C,
}

impl TorusPiece {
    fn new(rank: usize, roots: RootSystem, fixed: Vec<i32>) -> Self {
        let mut alphas: Vec<Vec<i32>> = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0; rank];
                    v[i] = si;
                    v[j] = sj;
                    alphas.push(v);
                }
            }
            match roots {
                RootSystem::D => {}
                RootSystem::B => {
                    alphas.push(unit_vec(rank, i, 1));
                    alphas.push(unit_vec(rank, i, -1));
                }
                RootSystem::C => {
                    alphas.push(unit_vec(rank, i, 2));
                    alphas.push(unit_vec(rank, i, -2));
                }
            }
        }
        let mut density: Laurent = HashMap::from([(vec![0; rank], 1)]);
        for a in alphas {
            let factor: Laurent = HashMap::from([(vec![0; rank], 1), (a, -1)]);
            density = laurent_mul(&density, &factor);
        }
        let mut weyl_order: i128 = (1..=rank as i128).product::<i128>() << rank;
        if matches!(roots, RootSystem::D) && rank > 0 {
            weyl_order /= 2;
        }
        TorusPiece { rank, fixed, torus_sign: 1, density, weyl_order }
    }

    fn negated(mut self) -> Self {
        self.torus_sign = -self.torus_sign;
        self
    }

    /// `h_0, …, h_D` of the eigenvalues as Laurent polynomials.
    fn h_table(&self, trunc: usize) -> Vec<Laurent> {
        let zero = vec![0; self.rank];
        let mut table: Vec<Laurent> = (0..=trunc)
            .map(|k| if k == 0 { HashMap::from([(zero.clone(), 1)]) } else { HashMap::new() })
            .collect();
        let mut eigs: Vec<(i128, Vec<i32>)> = self.fixed.iter().map(|&s| (s as i128, zero.clone())).collect();
        for i in 0..self.rank {
            eigs.push((self.torus_sign, unit_vec(self.rank, i, 1)));
            eigs.push((self.torus_sign, unit_vec(self.rank, i, -1)));
        }
        for (c, v) in eigs {
            let step: Laurent = HashMap::from([(v, c)]);
            for k in 1..=trunc {
                let shifted = laurent_mul(&table[k - 1], &step);
                for (key, val) in shifted {
                    *table[k].entry(key).or_insert(0) += val;
                }
                table[k].retain(|_, c| *c != 0);
            }
        }
        table
    }

    /// `E[h_τ]` on this piece for every `τ` with `|τ| ≤ D`.
    fn expectations(&self, trunc: usize) -> BTreeMap<Partition, Rat> {
        let table = self.h_table(trunc);
        let parts = enumerate(trunc);
        let values = par::map_collect(parts.len(), |idx| {
            let tau = &parts[idx];
            let ps = tau.parts();
            let ct = match ps.split_last() {
                None => self.density.get(&vec![0; self.rank]).copied().unwrap_or(0),
                Some((last, rest)) => {
                    let mut acc = self.density.clone();
                    for &j in rest {
                        acc = laurent_mul(&acc, &table[j]);
                    }
                    laurent_pair(&acc, &table[*last])
                }
            };
            Rat::new(ct.into(), self.weyl_order.into())
        });
        parts.into_iter().zip(values).collect()
    }
}

/// The torus pieces of a group with their weights in the Haar measure.
fn pieces(tag: GroupTag) -> Result<Vec<(Rat, TorusPiece)>> {
    tag.validate()?;
    let n = tag.n();
    if n > MAX_WEYL_N {
        return Err(Error::SizeLimit(format!("{tag}: the constant-term engine supports n ≤ {MAX_WEYL_N}")));
    }
    let k = n / 2;
    let odd = n % 2 == 1;
    let one = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    Ok(match tag {
        GroupTag::Symplectic(_) => vec![(one, TorusPiece::new(k, RootSystem::C, vec![]))],
        GroupTag::SpecialOrthogonal(_) => {
            if odd {
                vec![(one, TorusPiece::new(k, RootSystem::B, vec![1]))]
            } else {
                vec![(one, TorusPiece::new(k, RootSystem::D, vec![]))]
            }
        }
        GroupTag::Orthogonal(_) => {
            if odd {
                vec![
                    (half.clone(), TorusPiece::new(k, RootSystem::B, vec![1])),
                    (half, TorusPiece::new(k, RootSystem::B, vec![-1]).negated()),
                ]
            } else {
                // The determinant −1 component has eigenvalues 1, −1 and those of Sp(n − 2).
                vec![
                    (half.clone(), TorusPiece::new(k, RootSystem::D, vec![])),
                    (half, TorusPiece::new(k - 1, RootSystem::C, vec![1, -1])),
                ]
            }
        }
        _ => return Err(Error::InvalidArgument(format!("{tag} is not handled by the constant-term engine"))),
    })
}

fn weyl_expectations(tag: GroupTag, trunc: usize) -> Result<BTreeMap<Partition, Rat>> {
    let mut out: BTreeMap<Partition, Rat> = BTreeMap::new();
    for (w, piece) in pieces(tag)? {
        for (tau, v) in piece.expectations(trunc) {
            *out.entry(tau).or_insert_with(Rat::zero) += &w * v;
        }
    }
    Ok(out)
}

fn as_integer(r: &Rat, what: &str) -> Result<i128> {
    if !r.is_integer() {
        return Err(Error::InvalidArgument(format!("{what}: non-integral dimension {r}")));
    }
    r.to_integer()
        .to_i128()
        .ok_or_else(|| Error::SizeLimit(format!("{what}: dimension does not fit in i128")))
}

/// `dim (Sym^τ ℂⁿ)^G` for `G = Sp(n)` or `SO(n)` by Weyl constant terms.
pub fn so_sp_inv_dim(tag: GroupTag, tau: &Partition) -> Result<i128> {
    match tag {
        GroupTag::Symplectic(_) | GroupTag::SpecialOrthogonal(_) => {}
        _ => return Err(Error::InvalidArgument(format!("{tag} is neither Sp(n) nor SO(n)"))),
    }
    let table = weyl_expectations(tag, tau.size())?;
    as_integer(&table[tau], &tag.to_string())
}

/// `dim (Sym^τ ℂⁿ)^{O(n)}`, averaging the two components of `O(n)`.
pub fn orthogonal_inv_dim(n: usize, tau: &Partition) -> Result<i128> {
    let tag = GroupTag::Orthogonal(n);
    let table = weyl_expectations(tag, tau.size())?;
    as_integer(&table[tau], &tag.to_string())
}

/// The exact finite-`n` moment generating function through degree `D`.
///
/// For unitary groups `D` bounds the total degree `|τ| + |τ̄|`.
pub fn finite_mgf(tag: GroupTag, trunc: usize) -> Result<GroupMgf> {
    tag.validate()?;
    match tag {
        GroupTag::Symmetric(n) => Ok(GroupMgf::Single(sym_group_mgf(n, trunc)?)),
        GroupTag::SymmetricStandard(n) => Ok(GroupMgf::Single(sym_standard_mgf(n, trunc)?)),
        GroupTag::Unitary(n) => {
            let mut out = BiSymSeries::zero(trunc);
            for d in 0..=trunc / 2 {
                let parts = partitions_of(d);
                for a in &parts {
                    for b in &parts {
                        out.set(BiPartition(a.clone(), b.clone()), rbig(unitary_inv_dim(n, a, b)));
                    }
                }
            }
            Ok(GroupMgf::Joint(out))
        }
        _ => {
            let table = weyl_expectations(tag, trunc)?;
            Ok(GroupMgf::Single(SymSeries::from_terms(table, trunc)))
        }
    }
}

/// Whether `(τ, τ̄)` lies in the range where the finite and limiting series agree.
pub fn within_cutoff(tag: GroupTag, tau: &Partition, tau_bar: &Partition) -> bool {
    let n = tag.n();
    match tag {
        GroupTag::Symmetric(_) | GroupTag::SymmetricStandard(_) => tau.size() <= n,
        GroupTag::Unitary(_) => tau.length() <= n && tau_bar.length() <= n,
        _ => tau.length() <= n,
    }
}

fn just_past_cutoff(tag: GroupTag, tau: &Partition, tau_bar: &Partition) -> bool {
    let n = tag.n();
    match tag {
        GroupTag::Symmetric(_) | GroupTag::SymmetricStandard(_) => tau.size() == n + 1,
        GroupTag::Unitary(_) => tau.length().max(tau_bar.length()) == n + 1,
        // The first symplectic relation is a Pfaffian in n + 2 vectors.
        GroupTag::Symplectic(_) => (n + 1..=n + 2).contains(&tau.length()),
        _ => tau.length() == n + 1,
    }
}

/// Comparison of a finite-`n` series with its limit.
#[derive(Clone, Debug)]
pub struct CutoffReport {
    pub tag: GroupTag,
    pub trunc: usize,
    /// Number of coefficients inside the cutoff that were compared.
    pub checked: usize,
    /// Keys inside the cutoff where the two series differ.
    pub mismatches: Vec<BiPartition>,
    /// A key just past the cutoff of smallest degree where the series differ.
    pub witness: Option<(BiPartition, Rat, Rat)>,
    /// Whether every finite coefficient is a non-negative integer at most the limit one.
    pub dominated: bool,
}

impl CutoffReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.dominated
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.tag.to_string(),
            "trunc_degree": self.trunc,
            "checked": self.checked,
            "mismatches": self.mismatches.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>(),
            "witness": self.witness.as_ref().map(|(k, a, b)| json!({
                "key": format!("{k:?}"),
                "finite": a.to_string(),
                "limit": b.to_string(),
            })),
            "dominated": self.dominated,
            "pass": self.passed(),
        })
    }
}

/// Compares `finite_mgf(tag, D)` with `limit_mgf` coefficient by coefficient.
pub fn cutoff_report(tag: GroupTag, trunc: usize) -> Result<CutoffReport> {
    let finite = finite_mgf(tag, trunc)?.coefficients();
    let limit = limit_mgf(tag.family(), trunc).coefficients();
    let mut keys: Vec<&BiPartition> = finite.keys().chain(limit.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.sort_by_key(|k| (k.0.size() + k.1.size(), (*k).clone()));
    let zero = Rat::zero();
    let mut report = CutoffReport { tag, trunc, checked: 0, mismatches: Vec::new(), witness: None, dominated: true };
    for key in keys {
        let a = finite.get(key).unwrap_or(&zero);
        let b = limit.get(key).unwrap_or(&zero);
        if !a.is_integer() || a.is_negative() || a > b {
            report.dominated = false;
        }
        if within_cutoff(tag, &key.0, &key.1) {
            report.checked += 1;
            if a != b {
                report.mismatches.push(key.clone());
            }
        } else if report.witness.is_none() && a != b && just_past_cutoff(tag, &key.0, &key.1) {
            report.witness = Some((key.clone(), a.clone(), b.clone()));
        }
    }
    Ok(report)
}

/// `∏_i p_i^{a_i}` as a series truncated at its degree.
fn power_product(a: &[usize], trunc: usize) -> SymSeries<Rat> {
    let mut acc = SymSeries::one(trunc);
    for (i, &k) in a.iter().enumerate() {
        if k > 0 {
            acc = acc.mul_unchecked(&p::<Rat>(i + 1, trunc).pow(k as u32));
        }
    }
    acc
}

fn weighted_degree(a: &[usize]) -> usize {
    a.iter().enumerate().map(|(i, k)| (i + 1) * k).sum()
}

fn pair_with_traces(mgf: &GroupMgf, a: &[usize], b: &[usize]) -> Result<Rat> {
    let trunc = mgf.trunc();
    match mgf {
        GroupMgf::Single(s) => {
            if weighted_degree(b) > 0 {
                return Err(Error::InvalidArgument("conjugate exponents need a unitary group".into()));
            }
            hall(s, &power_product(a, trunc))
        }
        GroupMgf::Joint(s) => {
            let g = tensor(&power_product(a, trunc), &power_product(b, trunc), trunc);
            hall_bi(s, &g)
        }
    }
}

fn trace_trunc(family: Family, a: &[usize], b: &[usize]) -> usize {
    match family {
        Family::Unitary => weighted_degree(a) + weighted_degree(b),
        _ => weighted_degree(a),
    }
}

/// The stable joint trace moment `E[∏_i Tr(M^i)^{a_i} ∏_i conj(Tr(M^i))^{b_i}]`.
///
/// It is the Hall pairing of the limiting series with `∏ p_i^{a_i}` (and
/// `∏ p̄_i^{b_i}` for unitary groups).
pub fn ds_trace_moment(family: Family, a: &[usize], b: &[usize]) -> Result<Rat> {
    let trunc = trace_trunc(family, a, b);
    pair_with_traces(&limit_mgf(family, trunc), a, b)
}

/// The exact trace moment over the finite group `tag`.
pub fn finite_trace_moment(tag: GroupTag, a: &[usize], b: &[usize]) -> Result<Rat> {
    let trunc = trace_trunc(tag.family(), a, b);
    pair_with_traces(&finite_mgf(tag, trunc)?, a, b)
}

/// The table `g_j(a) = E[(Tr M^j)^a]` of stable orthogonal trace moments.
///
/// `g_j(a)` vanishes when `j` and `a` are both odd, equals
/// `j^{a/2}(a − 1)(a − 3)⋯1` when `j` is odd and `a` even, and equals
/// `Σ_k C(a, 2k) j^k (2k − 1)!!` when `j` is even.
#[derive(Clone, Debug)]
pub struct GFunTable {
    values: Vec<Vec<Rat>>,
}

impl GFunTable {
    pub fn new(max_j: usize, max_a: usize) -> Self {
        let dfact = |m: usize| -> i128 { (1..=m as i128).rev().step_by(2).product() };
        let binom = |n: usize, k: usize| -> i128 {
            (0..k as i128).fold(1i128, |acc, i| acc * (n as i128 - i) / (i + 1))
        };
        let values = (0..=max_j)
            .map(|j| {
                (0..=max_a)
                    .map(|a| {
                        let ji = j as i128;
                        let v: i128 = if j == 0 {
                            1
                        } else if j % 2 == 1 {
                            if a % 2 == 1 {
                                0
                            } else {
                                ji.pow((a / 2) as u32) * dfact(a.saturating_sub(1))
                            }
                        } else {
                            (0..=a / 2)
                                .map(|k| binom(a, 2 * k) * ji.pow(k as u32) * dfact((2 * k).saturating_sub(1)))
                                .sum()
                        };
                        rbig(v)
                    })
                    .collect()
            })
            .collect();
        GFunTable { values }
    }

    /// `g_j(a)`, with `j ≥ 1`.
    pub fn get(&self, j: usize, a: usize) -> Rat {
        self.values[j][a].clone()
    }

    /// `∏_i g_i(a_i)` for an exponent vector indexed from `i = 1`.
    pub fn product(&self, a: &[usize]) -> Rat {
        a.iter().enumerate().fold(Rat::one(), |acc, (i, &k)| acc * self.get(i + 1, k))
    }
}

/// `E[∏_i C_i (C_i − 1) ⋯ (C_i − k_i + 1)]` over `Σ_n`, where `C_i` counts `i`-cycles.
pub fn cycle_falling_moments(n: usize, k: &[usize]) -> Result<Rat> {
    if n > MAX_SYM_N {
        return Err(Error::SizeLimit(format!("symmetric group size {n} exceeds {MAX_SYM_N}")));
    }
    let mut acc = Rat::zero();
    for lambda in partitions_of(n) {
        let mult = lambda.multiplicities(k.len().max(1));
        let mut prod: i128 = 1;
        for (i, &ki) in k.iter().enumerate() {
            let m = mult.get(i).copied().unwrap_or(0) as i128;
            prod *= (0..ki as i128).map(|r| m - r).product::<i128>();
        }
        if prod != 0 {
            acc += lambda.z().recip() * rbig(prod);
        }
    }
    Ok(acc)
}

/// The falling moment generating function `E[(1 + h_1)^{X}]` of the permutation
/// representation, obtained from [`sym_group_mgf`] through the configuration functions.
pub fn sym_falling_mgf(n: usize, trunc: usize) -> Result<SymSeries<Rat>> {
    let mgf = sym_group_mgf(n, trunc)?;
    let mut out = SymSeries::zero(trunc);
    for (tau, c_tau) in configuration_functions(trunc) {
        let mut acc = Rat::zero();
        for (mu, a) in to_basis(&c_tau, Basis::H)? {
            acc += a * mgf.coeff(&mu);
        }
        out.set(tau, acc);
    }
    Ok(out)
}

/// `Σ_k E[∏ (C_i)_{k_i}] ∏_i p_i^{k_i} / k_i!`, the cycle-count form of the falling series.
pub fn cycle_product_falling_mgf(n: usize, trunc: usize) -> Result<SymSeries<Rat>> {
    let mut out = SymSeries::zero(trunc);
    for lambda in enumerate(trunc) {
        let k = lambda.multiplicities(trunc);
        let fact: i128 = k.iter().map(|&m| (1..=m as i128).product::<i128>()).product();
        let coeff = cycle_falling_moments(n, &k)? / rbig(fact);
        if !coeff.is_zero() {
            out = out.add_unchecked(&power_product(&k, trunc).scale_rat(&coeff));
        }
    }
    Ok(out)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl McEstimate {
    /// Whether `exact` lies within `k` standard errors, with a floor for
    /// estimates whose sample variance vanishes up to rounding.
    pub fn agrees(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr + 1e-9
    }
}

/// Column-major dense complex matrix.
#[derive(Clone, Debug)]
struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let n = cols.len();
        CMat { n, data: cols.iter().flat_map(|c| c.iter().copied()).collect() }
    }

    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.n + r]
    }

    fn mul(&self, other: &CMat) -> CMat {
        let n = self.n;
        let mut data = vec![Complex64::zero(); n * n];
        for c in 0..n {
            for k in 0..n {
                let b = other.at(k, c);
                if b == Complex64::zero() {
                    continue;
                }
                for r in 0..n {
                    data[c * n + r] += self.at(r, k) * b;
                }
            }
        }
        CMat { n, data }
    }

    fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Removes the components along the orthonormal `basis` and normalizes.
fn orthonormalize(mut v: Vec<Complex64>, basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    for b in basis {
        let c = inner(b, &v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
    let norm = inner(&v, &v).re.sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// The antilinear map `σ(x; y) = (−ȳ; x̄)` on each coordinate pair.
fn quaternionic_partner(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); v.len()];
    for i in 0..v.len() / 2 {
        out[2 * i] = -v[2 * i + 1].conj();
        out[2 * i + 1] = v[2 * i].conj();
    }
    out
}

fn sample_haar(tag: GroupTag, rng: &mut ChaCha8Rng) -> CMat {
    let n = tag.n();
    let mut real = || -> f64 { StandardNormal.sample(rng) };
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    match tag {
        GroupTag::Unitary(_) => {
            for _ in 0..n {
                let v = (0..n).map(|_| Complex64::new(real(), real())).collect();
                let v = orthonormalize(v, &cols);
                cols.push(v);
            }
        }
        GroupTag::Orthogonal(_) | GroupTag::SpecialOrthogonal(_) => {
            for _ in 0..n {
                let v = (0..n).map(|_| Complex64::new(real(), 0.0)).collect();
                let v = orthonormalize(v, &cols);
                cols.push(v);
            }
            if matches!(tag, GroupTag::SpecialOrthogonal(_)) && real_det_sign(&cols) < 0.0 {
                for x in cols[0].iter_mut() {
                    *x = -*x;
                }
            }
        }
        GroupTag::Symplectic(_) => {
            for _ in 0..n / 2 {
                let v = (0..n).map(|_| Complex64::new(real(), real())).collect();
                let v = orthonormalize(v, &cols);
                let w = quaternionic_partner(&v);
                cols.push(v);
                cols.push(w);
            }
        }
        GroupTag::Symmetric(_) | GroupTag::SymmetricStandard(_) => {
            unreachable!("symmetric groups are sampled as permutations")
        }
    }
    CMat::from_columns(&cols)
}

/// Sign of the determinant of a real matrix given by columns, by Gaussian elimination.
fn real_det_sign(cols: &[Vec<Complex64>]) -> f64 {
    let n = cols.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].re).collect()).collect();
    let mut sign = 1.0;
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if piv != c {
            a.swap(piv, c);
            sign = -sign;
        }
        if a[c][c] < 0.0 {
            sign = -sign;
        }
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    sign
}

/// `h_0, …, h_D` of the eigenvalues from the traces of powers by Newton's identities.
fn h_from_traces(m: &CMat, trunc: usize) -> Vec<Complex64> {
    let mut traces = vec![Complex64::zero(); trunc + 1];
    let mut pow = m.clone();
    for k in 1..=trunc {
        if k > 1 {
            pow = pow.mul(m);
        }
        traces[k] = pow.trace();
    }
    let mut hs = vec![Complex64::one(); trunc + 1];
    for k in 1..=trunc {
        let s: Complex64 = (1..=k).map(|i| traces[i] * hs[k - i]).sum();
        hs[k] = s / k as f64;
    }
    hs
}

/// Keys estimated by [`haar_mc_table`]: all `τ` with `1 ≤ |τ| ≤ D`, and for
/// unitary groups all pairs with `|τ| = |τ̄| ≤ D`.
fn mc_keys(tag: GroupTag, trunc: usize) -> Vec<BiPartition> {
    let mut keys = Vec::new();
    for d in 1..=trunc {
        let parts = partitions_of(d);
        for a in &parts {
            if matches!(tag, GroupTag::Unitary(_)) {
                for b in &parts {
                    keys.push(BiPartition(a.clone(), b.clone()));
                }
            } else {
                keys.push(BiPartition(a.clone(), Partition::empty()));
            }
        }
    }
    keys
}

const MC_CHUNK: usize = 2048;

/// Monte Carlo estimates of `E[h_τ(M) conj(h_τ̄(M))]` over Haar measure for a table of keys.
///
/// Samples are drawn in fixed chunks, chunk `c` using stream `c` of a ChaCha
/// generator seeded with `seed`, and the chunk sums are combined in order, so
/// the result depends only on `seed` and `samples`.
pub fn haar_mc_table(tag: GroupTag, trunc: usize, samples: usize, seed: u64) -> Result<BTreeMap<BiPartition, McEstimate>> {
    tag.validate()?;
    if matches!(tag, GroupTag::Symmetric(_) | GroupTag::SymmetricStandard(_)) {
        return Err(Error::InvalidArgument("the Haar oracle covers U, O, SO and Sp".into()));
    }
    if tag.n() > MAX_MC_N {
        return Err(Error::SizeLimit(format!("{tag}: Monte Carlo supports n ≤ {MAX_MC_N}")));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let keys = mc_keys(tag, trunc);
    let ranges = par::chunks(samples, MC_CHUNK);
    let partials: Vec<Vec<(f64, f64)>> = par::map_collect(ranges.len(), |c| {
        let (lo, hi) = ranges[c];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let mut sums = vec![(0.0, 0.0); keys.len()];
        for _ in lo..hi {
            let m = sample_haar(tag, &mut rng);
            let hs = h_from_traces(&m, trunc);
            let prod = |t: &Partition| -> Complex64 { t.parts().iter().map(|&j| hs[j]).product() };
            for (slot, key) in sums.iter_mut().zip(&keys) {
                let v = (prod(&key.0) * prod(&key.1).conj()).re;
                slot.0 += v;
                slot.1 += v * v;
            }
        }
        sums
    });
    let total = samples as f64;
    let mut out = BTreeMap::new();
    for (idx, key) in keys.into_iter().enumerate() {
        let (s, s2) = partials.iter().fold((0.0, 0.0), |acc, part| (acc.0 + part[idx].0, acc.1 + part[idx].1));
        let mean = s / total;
        let var = ((s2 - total * mean * mean) / (total - 1.0)).max(0.0);
        out.insert(key, McEstimate { mean, stderr: (var / total).sqrt() });
    }
    Ok(out)
}

/// Monte Carlo estimate of `E[h_τ(M) conj(h_τ̄(M))]` over Haar measure.
pub fn haar_mc_oracle(tag: GroupTag, tau: &Partition, tau_bar: &Partition, samples: usize, seed: u64) -> Result<McEstimate> {
    if !matches!(tag, GroupTag::Unitary(_)) && !tau_bar.is_empty() {
        return Err(Error::InvalidArgument("conjugate partitions need a unitary group".into()));
    }
    if tau.size() != tau_bar.size() && matches!(tag, GroupTag::Unitary(_)) {
        return Ok(McEstimate { mean: 0.0, stderr: 0.0 });
    }
    let trunc = tau.size().max(1);
    let table = haar_mc_table(tag, trunc, samples, seed)?;
    Ok(table.get(&BiPartition(tau.clone(), tau_bar.clone())).copied().unwrap_or(McEstimate { mean: 1.0, stderr: 0.0 }))
}

/// Exact `E[h_τ conj(h_τ̄)]` from the finite engines, for comparison with the oracle.
pub fn exact_expectation(tag: GroupTag, tau: &Partition, tau_bar: &Partition) -> Result<Rat> {
    match tag {
        GroupTag::Unitary(n) => Ok(rbig(unitary_inv_dim(n, tau, tau_bar))),
        GroupTag::Orthogonal(n) if tau_bar.is_empty() => Ok(rbig(orthogonal_inv_dim(n, tau)?)),
        GroupTag::Symplectic(_) | GroupTag::SpecialOrthogonal(_) if tau_bar.is_empty() => {
            Ok(rbig(so_sp_inv_dim(tag, tau)?))
        }
        _ => finite_mgf(tag, tau.size() + tau_bar.size()).map(|m| m.coeff(tau, tau_bar)),
    }
}

/// Converts an exact rational to `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rint};

    fn part(v: &[usize]) -> Partition {
        Partition::from_parts(v)
    }

    #[test]
    fn sym_group_examples() {
        let m = sym_group_mgf(3, 4).unwrap();
        assert_eq!(m.coeff(&part(&[1])), rint(1));
        assert_eq!(m.coeff(&part(&[1, 1])), rint(2));
        assert_eq!(m.coeff(&part(&[2])), rint(2));
        let lim = limit_mgf(Family::Symmetric, 4);
        assert_eq!(lim.coeff(&part(&[2]), &Partition::empty()), rint(2));
    }

    #[test]
    fn sym_group_matches_orbit_count() {
        // Orbits of Σ_n on maps {1..k} → {1..n} are set partitions with at most n blocks.
        let bell_at_most = |k: usize, n: usize| -> i64 {
            let mut s = vec![vec![0i64; k + 1]; k + 1];
            s[0][0] = 1;
            for i in 1..=k {
                for j in 1..=i {
                    s[i][j] = s[i - 1][j - 1] + j as i64 * s[i - 1][j];
                }
            }
            (0..=n.min(k)).map(|j| s[k][j]).sum()
        };
        for n in 1..=5 {
            let m = sym_group_mgf(n, 5).unwrap();
            for k in 1..=5 {
                assert_eq!(m.coeff(&Partition::column(k)), rint(bell_at_most(k, n)), "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn limit_examples() {
        let o = limit_mgf(Family::Orthogonal, 4);
        assert_eq!(o.coeff(&part(&[2, 2]), &Partition::empty()), rint(2));
        let sp = limit_mgf(Family::Symplectic, 4);
        assert_eq!(sp.coeff(&part(&[1, 1, 1, 1]), &Partition::empty()), rint(3));
        let st = limit_mgf(Family::SymmetricStandard, 4);
        assert_eq!(st.coeff(&part(&[1]), &Partition::empty()), rint(0));
        let u = limit_mgf(Family::Unitary, 4);
        assert_eq!(u.coeff(&part(&[1, 1]), &part(&[1, 1])), rint(2));
    }

    #[test]
    fn unitary_examples() {
        assert_eq!(unitary_inv_dim(1, &part(&[2]), &part(&[2])), 1);
        assert_eq!(unitary_inv_dim(2, &part(&[1, 1]), &part(&[1, 1])), 2);
        assert_eq!(unitary_inv_dim(1, &part(&[1, 1]), &part(&[1, 1])), 1);
        assert_eq!(unitary_inv_dim(3, &part(&[1]), &part(&[1, 1])), 0);
    }

    /// `E[h_τ(x) h_τ̄(x^{-1})]` over `U(n)` by the Weyl density `∏_{i≠j}(1 − x_i/x_j)/n!`.
    fn unitary_ct(n: usize, tau: &Partition, tau_bar: &Partition) -> Rat {
        let mut density: Laurent = HashMap::from([(vec![0; n], 1)]);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[j] = -1;
                    density = laurent_mul(&density, &HashMap::from([(vec![0; n], 1), (v, -1)]));
                }
            }
        }
        let hk = |k: usize, s: i32| -> Laurent {
            let mut out: Laurent = HashMap::new();
            let mut stack = vec![(0usize, vec![0i32; n], k)];
            while let Some((i, e, left)) = stack.pop() {
                if i == n - 1 {
                    let mut e = e;
                    e[i] = s * left as i32;
                    *out.entry(e).or_insert(0) += 1;
                    continue;
                }
                for a in 0..=left {
                    let mut e2 = e.clone();
                    e2[i] = s * a as i32;
                    stack.push((i + 1, e2, left - a));
                }
            }
            out
        };
        let mut acc = density;
        for &j in tau.parts() {
            acc = laurent_mul(&acc, &hk(j, 1));
        }
        for &j in tau_bar.parts() {
            acc = laurent_mul(&acc, &hk(j, -1));
        }
        let ct = acc.get(&vec![0; n]).copied().unwrap_or(0);
        let fact: i128 = (1..=n as i128).product();
        Rat::new(ct.into(), fact.into())
    }

    #[test]
    fn unitary_kostka_matches_constant_term() {
        for n in 1..=3 {
            for d in 0..=3 {
                for a in partitions_of(d) {
                    for b in partitions_of(d) {
                        assert_eq!(rbig(unitary_inv_dim(n, &a, &b)), unitary_ct(n, &a, &b), "n={n} {a:?} {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn so_sp_examples() {
        assert_eq!(orthogonal_inv_dim(1, &part(&[2])).unwrap(), 1);
        assert_eq!(orthogonal_inv_dim(1, &part(&[1])).unwrap(), 0);
        assert_eq!(so_sp_inv_dim(GroupTag::Symplectic(2), &part(&[1, 1])).unwrap(), 1);
        assert_eq!(orthogonal_inv_dim(3, &part(&[2])).unwrap(), 1);
        assert_eq!(so_sp_inv_dim(GroupTag::Symplectic(2), &part(&[2])).unwrap(), 0);
        // SO(3) has the determinant as an invariant of Λ³, seen in Sym^(1,1,1).
        assert_eq!(so_sp_inv_dim(GroupTag::SpecialOrthogonal(3), &part(&[1, 1, 1])).unwrap(), 1);
        assert_eq!(orthogonal_inv_dim(3, &part(&[1, 1, 1])).unwrap(), 0);
        assert!(orthogonal_inv_dim(MAX_WEYL_N + 1, &part(&[1])).is_err());
        assert!(so_sp_inv_dim(GroupTag::Orthogonal(2), &part(&[1])).is_err());
    }

    #[test]
    fn small_groups_by_hand() {
        // O(2): x·x̄ is the only quadratic invariant, and Sym^2 of a plane has one.
        assert_eq!(orthogonal_inv_dim(2, &part(&[2])).unwrap(), 1);
        assert_eq!(orthogonal_inv_dim(2, &part(&[1, 1])).unwrap(), 1);
        // SO(2) = U(1) acting by x and x^{-1}: Sym^2 contains x·x^{-1} once.
        assert_eq!(so_sp_inv_dim(GroupTag::SpecialOrthogonal(2), &part(&[2])).unwrap(), 1);
        assert_eq!(so_sp_inv_dim(GroupTag::SpecialOrthogonal(2), &part(&[1, 1])).unwrap(), 2);
    }

    #[test]
    fn cutoff_and_domination() {
        let tags = [
            GroupTag::Symmetric(3),
            GroupTag::SymmetricStandard(3),
            GroupTag::Orthogonal(1),
            GroupTag::Orthogonal(2),
            GroupTag::Orthogonal(3),
            GroupTag::Symplectic(2),
            GroupTag::Symplectic(4),
            GroupTag::Unitary(1),
            GroupTag::Unitary(2),
        ];
        for tag in tags {
            let trunc = if matches!(tag, GroupTag::Unitary(_)) { 8 } else { (2 * tag.n() + 2).max(6) };
            let r = cutoff_report(tag, trunc).unwrap();
            assert!(r.passed(), "{tag}: {:?}", r);
            assert!(r.checked > 0);
            assert!(r.witness.is_some(), "{tag}: no witness");
        }
    }

    #[test]
    fn cutoff_witnesses() {
        let r = cutoff_report(GroupTag::Orthogonal(1), 4).unwrap();
        let (k, a, b) = r.witness.unwrap();
        assert_eq!(k.0, part(&[2, 2]));
        assert_eq!((a, b), (rint(1), rint(2)));
        let r = cutoff_report(GroupTag::Symmetric(3), 4).unwrap();
        assert_eq!(r.witness.unwrap().0 .0.size(), 4);
    }

    #[test]
    fn trace_moment_examples() {
        assert_eq!(ds_trace_moment(Family::Orthogonal, &[2], &[]).unwrap(), rint(1));
        assert_eq!(ds_trace_moment(Family::Orthogonal, &[1], &[]).unwrap(), rint(0));
        assert_eq!(ds_trace_moment(Family::Unitary, &[1], &[1]).unwrap(), rint(1));
        assert_eq!(ds_trace_moment(Family::Unitary, &[0, 1], &[0, 1]).unwrap(), rint(2));
        assert_eq!(ds_trace_moment(Family::Symplectic, &[0, 1], &[]).unwrap(), rint(-1));
        assert_eq!(ds_trace_moment(Family::Unitary, &[2], &[0, 1]).unwrap(), rint(0));
        assert_eq!(ds_trace_moment(Family::Unitary, &[2, 1], &[2, 1]).unwrap(), rint(4));
    }

    #[test]
    fn orthogonal_moments_match_g_table() {
        let g = GFunTable::new(8, 8);
        for lambda in enumerate(8) {
            let a = lambda.multiplicities(8);
            let a: Vec<usize> = a.into_iter().collect();
            assert_eq!(ds_trace_moment(Family::Orthogonal, &a, &[]).unwrap(), g.product(&a), "{a:?}");
        }
    }

    #[test]
    fn g_table_values() {
        let g = GFunTable::new(4, 6);
        assert_eq!(g.get(1, 2), rint(1));
        assert_eq!(g.get(1, 4), rint(3));
        assert_eq!(g.get(3, 4), rint(27));
        assert_eq!(g.get(3, 3), rint(0));
        assert_eq!(g.get(2, 1), rint(1));
        assert_eq!(g.get(2, 2), rint(3));
    }

    #[test]
    fn finite_trace_moments_stabilize() {
        assert_eq!(finite_trace_moment(GroupTag::Orthogonal(2), &[2], &[]).unwrap(), rint(1));
        assert_eq!(finite_trace_moment(GroupTag::Symplectic(2), &[0, 1], &[]).unwrap(), rint(-1));
        assert_eq!(finite_trace_moment(GroupTag::Unitary(2), &[0, 1], &[0, 1]).unwrap(), rint(2));
        // U(1): |x^2|^2 has mean 1, below the stable value 2.
        assert_eq!(finite_trace_moment(GroupTag::Unitary(1), &[0, 1], &[0, 1]).unwrap(), rint(1));
    }

    #[test]
    fn cycle_moment_examples() {
        assert_eq!(cycle_falling_moments(3, &[1]).unwrap(), rint(1));
        assert_eq!(cycle_falling_moments(2, &[0, 1]).unwrap(), rat(1, 2));
        assert_eq!(cycle_falling_moments(3, &[3]).unwrap(), rint(1));
        assert_eq!(cycle_falling_moments(2, &[3]).unwrap(), rint(0));
    }

    #[test]
    fn falling_mgf_consistency() {
        for n in 1..=5 {
            let a = sym_falling_mgf(n, n).unwrap();
            let b = cycle_product_falling_mgf(n, n).unwrap();
            assert_eq!(a, b, "n={n}");
        }
    }

    #[test]
    fn mc_examples() {
        let u = haar_mc_oracle(GroupTag::Unitary(2), &part(&[1]), &part(&[1]), 20_000, 7).unwrap();
        assert!(u.agrees(1.0, 4.0), "{u:?}");
        let o = haar_mc_oracle(GroupTag::Orthogonal(3), &part(&[1]), &Partition::empty(), 20_000, 7).unwrap();
        assert!(o.agrees(0.0, 4.0), "{o:?}");
        let s = haar_mc_oracle(GroupTag::Symplectic(2), &part(&[2]), &Partition::empty(), 20_000, 7).unwrap();
        assert!(s.agrees(0.0, 4.0), "{s:?}");
    }

    #[test]
    fn mc_is_deterministic() {
        let a = haar_mc_table(GroupTag::Symplectic(4), 3, 5000, 11).unwrap();
        let b = haar_mc_table(GroupTag::Symplectic(4), 3, 5000, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_matrices_have_group_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = sample_haar(GroupTag::Symplectic(4), &mut rng);
        // Unitary: M* M = I.
        for i in 0..4 {
            for j in 0..4 {
                let col_i: Vec<Complex64> = (0..4).map(|r| m.at(r, i)).collect();
                let col_j: Vec<Complex64> = (0..4).map(|r| m.at(r, j)).collect();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&col_i, &col_j) - expect).norm() < 1e-12);
            }
        }
        // Commutes with σ.
        let v: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64 + 0.5, 1.0 - k as f64)).collect();
        let apply = |x: &[Complex64]| -> Vec<Complex64> {
            (0..4).map(|r| (0..4).map(|c| m.at(r, c) * x[c]).sum()).collect()
        };
        let lhs = apply(&quaternionic_partner(&v));
        let rhs = quaternionic_partner(&apply(&v));
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).norm() < 1e-12);
        }
        let so = sample_haar(GroupTag::SpecialOrthogonal(3), &mut rng);
        let cols: Vec<Vec<Complex64>> = (0..3).map(|c| (0..3).map(|r| so.at(r, c)).collect()).collect();
        assert_eq!(real_det_sign(&cols), 1.0);
    }
}
