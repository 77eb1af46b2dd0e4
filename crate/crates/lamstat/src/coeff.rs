//! Exact coefficient scalars.
//!
//! Two concrete scalar rings are provided: [`Rat`], the rationals with trivial
//! Adams operations, and [`CycloHalf`], the ring `Q(ζ_ℓ)[u]/(u² − q)` used to
//! hold character values together with half-integral powers of `q`. Both
//! implement the [`LambdaScalar`] contract, as does the truncated Witt ring in
//! [`crate::witt`].

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{is_prime, prime_power};
use crate::error::{Error, Result};

/// Arbitrary precision rational number in reduced form.
pub type Rat = BigRational;

/// Builds the rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Builds a rational from a wide integer.
pub fn rbig(n: i128) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats a rational as `n` or `n/d`.
pub fn rat_string(r: &Rat) -> String {
    if *r.denom() == BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A commutative ring with Adams operations.
///
/// Implementations must satisfy `adams(1) = id`, `adams(j)∘adams(k) = adams(jk)`
/// and make every `adams(k)` a ring morphism.
pub trait LambdaScalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Image of a rational number.
    fn from_rat(r: &Rat) -> Self;
    /// Image of an integer.
    fn from_int(n: i64) -> Self {
        Self::from_rat(&rint(n))
    }
    /// True for the additive identity.
    fn is_zero(&self) -> bool;
    /// True for a zero that a sparse series may drop without losing information.
    ///
    /// A truncated value whose known components all vanish still records how
    /// many components are known, so it is zero but not exactly zero.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    /// Sum.
    fn plus(&self, other: &Self) -> Self;
    /// Difference.
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    /// Product.
    fn times(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn negated(&self) -> Self;
    /// Multiplication by a rational.
    fn scaled(&self, r: &Rat) -> Self {
        self.times(&Self::from_rat(r))
    }
    /// Multiplicative inverse where it exists.
    fn inverse(&self) -> Option<Self>;
    /// The Adams operation `p_k ∘`.
    fn adams(&self, k: u32) -> Self;
    /// Whether the ring contains the rationals.
    fn is_q_algebra() -> bool {
        true
    }
    /// Canonical exact string.
    fn to_exact_string(&self) -> String;
    /// Integer power.
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl LambdaScalar for Rat {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rat) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        (!num_traits::Zero::is_zero(self)).then(|| self.recip())
    }
    fn adams(&self, _k: u32) -> Self {
        self.clone()
    }
    fn to_exact_string(&self) -> String {
        rat_string(self)
    }
}

/// Element of `Q(ζ_ℓ)[u]/(u² − q)`.
///
/// Coefficients are stored on the basis `ζ^a u^b` with `0 ≤ a ≤ ℓ − 2` and
/// `b ∈ {0, 1}`. A value built from a bare rational carries no `ℓ` and no `q`
/// (stored as `ℓ = 1`, `q = 0`) and adopts the context of whatever it is
/// combined with. Combining two values with different nontrivial contexts is a
/// programming error and panics.
#[derive(Clone)]
pub struct CycloHalf {
    ell: u32,
    q: u64,
    coeffs: Vec<Rat>,
}

impl CycloHalf {
    fn zdim(ell: u32) -> usize {
        if ell <= 2 {
            1
        } else {
            (ell - 1) as usize
        }
    }

    fn udim(q: u64) -> usize {
        if q == 0 {
            1
        } else {
            2
        }
    }

    fn raw(ell: u32, q: u64) -> Self {
        CycloHalf {
            ell,
            q,
            coeffs: vec![Rat::zero(); Self::zdim(ell) * Self::udim(q)],
        }
    }

    /// Checks a context: `ℓ` a prime at most 7 and `q` a prime power.
    pub fn check_context(ell: u32, q: u64) -> Result<()> {
        if !(is_prime(ell as u64) && ell <= 7) {
            return Err(Error::UnsupportedEll(ell));
        }
        if prime_power(q).is_none() {
            return Err(Error::NotPrimePower(q));
        }
        Ok(())
    }

    /// Zero in the given context.
    pub fn zero_in(ell: u32, q: u64) -> Result<Self> {
        Self::check_context(ell, q)?;
        Ok(Self::raw(ell, q))
    }

    /// A rational constant in the given context.
    pub fn rational_in(ell: u32, q: u64, r: &Rat) -> Result<Self> {
        let mut x = Self::zero_in(ell, q)?;
        x.coeffs[0] = r.clone();
        Ok(x)
    }

    /// `ζ_ℓ^k` for any integer `k`.
    pub fn zeta(ell: u32, q: u64, k: i64) -> Result<Self> {
        Self::check_context(ell, q)?;
        Ok(Self::zeta_pow_raw(ell, q, k))
    }

    fn zeta_pow_raw(ell: u32, q: u64, k: i64) -> Self {
        let a = k.rem_euclid(ell as i64) as usize;
        let mut x = Self::raw(ell, q);
        let ud = Self::udim(q);
        if ell == 2 {
            x.coeffs[0] = if a == 0 { rint(1) } else { rint(-1) };
        } else if a + 1 == ell as usize {
            for j in 0..Self::zdim(ell) {
                x.coeffs[j * ud] = rint(-1);
            }
        } else {
            x.coeffs[a * ud] = rint(1);
        }
        x
    }

    /// `u^k` for any integer `k`, where `u² = q`.
    pub fn u_pow(ell: u32, q: u64, k: i64) -> Result<Self> {
        Self::check_context(ell, q)?;
        Ok(Self::u_pow_raw(ell, q, k))
    }

    fn u_pow_raw(ell: u32, q: u64, k: i64) -> Self {
        let mut x = Self::raw(ell, q);
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) as usize;
        let qq = rint(q as i64);
        let c = if half >= 0 {
            num_traits::pow(qq, half as usize)
        } else {
            num_traits::pow(qq.recip(), (-half) as usize)
        };
        x.coeffs[odd] = c;
        x
    }

    /// The cyclotomic order `ℓ` (1 when no root of unity is attached).
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// The value of `u²` (0 when no square root is attached).
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficient of `ζ^a u^b` in the reduced basis.
    pub fn coeff(&self, a: usize, b: usize) -> Rat {
        let ud = Self::udim(self.q);
        if a >= Self::zdim(self.ell) || b >= ud {
            return Rat::zero();
        }
        self.coeffs[a * ud + b].clone()
    }

    /// Returns `Some(r)` when the value is the rational `r`.
    pub fn as_rational(&self) -> Option<Rat> {
        self.coeffs[1..]
            .iter()
            .all(num_traits::Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn lift(&self, ell: u32, q: u64) -> Self {
        if self.ell == ell && self.q == q {
            return self.clone();
        }
        let mut x = Self::raw(ell, q);
        let ud_old = Self::udim(self.q);
        let ud_new = Self::udim(q);
        for a in 0..Self::zdim(self.ell) {
            for b in 0..ud_old {
                x.coeffs[a * ud_new + b] = self.coeffs[a * ud_old + b].clone();
            }
        }
        x
    }

    fn joint(&self, other: &Self) -> (u32, u64) {
        let ell = match (self.ell, other.ell) {
            (1, e) | (e, 1) => e,
            (a, b) if a == b => a,
            (a, b) => panic!("incompatible cyclotomic orders {a} and {b}"),
        };
        let q = match (self.q, other.q) {
            (0, e) | (e, 0) => e,
            (a, b) if a == b => a,
            (a, b) => panic!("incompatible square roots of {a} and {b}"),
        };
        (ell, q)
    }

    /// Complex conjugation: `ζ ↦ ζ^{-1}`, `u` fixed.
    pub fn conj(&self) -> Self {
        self.map_zeta(self.ell as i64 - 1)
    }

    fn map_zeta(&self, k: i64) -> Self {
        let ud = Self::udim(self.q);
        let mut out = Self::raw(self.ell, self.q);
        if self.ell <= 2 {
            // ζ_2 = −1 is stored as a rational sign, so the map is the identity
            out.coeffs.clone_from(&self.coeffs);
            return out;
        }
        for a in 0..Self::zdim(self.ell) {
            let z = Self::zeta_pow_raw(self.ell, self.q, a as i64 * k);
            for b in 0..ud {
                let c = &self.coeffs[a * ud + b];
                if c.is_zero() {
                    continue;
                }
                for a2 in 0..Self::zdim(self.ell) {
                    let zc = &z.coeffs[a2 * ud];
                    if !zc.is_zero() {
                        out.coeffs[a2 * ud + b] += c * zc;
                    }
                }
            }
        }
        out
    }

    /// Numerical value under `ζ ↦ e^{2πi/ℓ}` and `u ↦ +√q`.
    ///
    /// The computation is carried out in double precision; `precision` is the
    /// requested number of correct binary digits and is honoured up to 48.
    pub fn embed_complex(&self, precision: u32) -> Complex64 {
        let _ = precision.min(48);
        let ud = Self::udim(self.q);
        let sq = (self.q as f64).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..Self::zdim(self.ell) {
            let z = if self.ell <= 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / self.ell as f64)
            };
            for b in 0..ud {
                let c = &self.coeffs[a * ud + b];
                if c.is_zero() {
                    continue;
                }
                let cf = c.to_f64().unwrap_or(f64::NAN);
                let uf = if b == 1 { sq } else { 1.0 };
                acc += z * cf * uf;
            }
        }
        acc
    }

    /// Parses the canonical string form in the given context.
    pub fn parse(ell: u32, q: u64, s: &str) -> Result<Self> {
        let mut x = Self::zero_in(ell, q)?;
        let s = s.trim();
        if s == "0" {
            return Ok(x);
        }
        for term in s.split(" + ") {
            let parts: Vec<&str> = term.split('·').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad term {term:?}")));
            }
            let c = parse_rat(parts[0])?;
            let a: i64 = parts[1]
                .strip_prefix("z^")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad ζ exponent in {term:?}")))?;
            let b: i64 = parts[2]
                .strip_prefix("u^")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad u exponent in {term:?}")))?;
            let t = Self::zeta_pow_raw(ell, q, a)
                .times(&Self::u_pow_raw(ell, q, b))
                .scaled(&c);
            x = x.plus(&t);
        }
        Ok(x)
    }

    fn mult_matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = Self::raw(self.ell, self.q);
            e.coeffs[j] = rint(1);
            cols.push(self.times(&e).coeffs);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

impl PartialEq for CycloHalf {
    fn eq(&self, other: &Self) -> bool {
        let (ell, q) = self.joint(other);
        self.lift(ell, q).coeffs == other.lift(ell, q).coeffs
    }
}

impl Eq for CycloHalf {}

impl fmt::Debug for CycloHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl fmt::Display for CycloHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl LambdaScalar for CycloHalf {
    fn zero() -> Self {
        Self::raw(1, 0)
    }
    fn one() -> Self {
        Self::from_rat(&rint(1))
    }
    fn from_rat(r: &Rat) -> Self {
        CycloHalf {
            ell: 1,
            q: 0,
            coeffs: vec![r.clone()],
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(num_traits::Zero::is_zero)
    }
    fn plus(&self, other: &Self) -> Self {
        let (ell, q) = self.joint(other);
        let mut a = self.lift(ell, q);
        let b = other.lift(ell, q);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
    fn times(&self, other: &Self) -> Self {
        let (ell, q) = self.joint(other);
        let a = self.lift(ell, q);
        let b = other.lift(ell, q);
        let ud = Self::udim(q);
        let zd = Self::zdim(ell);
        let zfull = ell.max(1) as usize;
        // accumulate on ζ^0..ζ^{ℓ-1} before reducing
        let mut acc = vec![Rat::zero(); zfull * ud];
        let qq = rint(q as i64);
        for i in 0..zd {
            for bi in 0..ud {
                let x = &a.coeffs[i * ud + bi];
                if x.is_zero() {
                    continue;
                }
                for j in 0..zd {
                    for bj in 0..ud {
                        let y = &b.coeffs[j * ud + bj];
                        if y.is_zero() {
                            continue;
                        }
                        let z = (i + j) % zfull;
                        let prod = x * y;
                        let ub = bi + bj;
                        if ub == 2 {
                            acc[z * ud] += prod * &qq;
                        } else {
                            acc[z * ud + ub] += prod;
                        }
                    }
                }
            }
        }
        let mut out = Self::raw(ell, q);
        if ell > 2 {
            let top = zfull - 1;
            for b in 0..ud {
                let t = acc[top * ud + b].clone();
                for a in 0..zd {
                    out.coeffs[a * ud + b] = &acc[a * ud + b] - &t;
                }
            }
        } else {
            out.coeffs[..ud].clone_from_slice(&acc[..ud]);
        }
        out
    }
    fn negated(&self) -> Self {
        CycloHalf {
            ell: self.ell,
            q: self.q,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn scaled(&self, r: &Rat) -> Self {
        CycloHalf {
            ell: self.ell,
            q: self.q,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        let n = self.coeffs.len();
        let mut m = self.mult_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row.push(if i == 0 { rint(1) } else { Rat::zero() });
        }
        let sol = solve_augmented(m, n)?;
        Some(CycloHalf {
            ell: self.ell,
            q: self.q,
            coeffs: sol,
        })
    }
    fn adams(&self, k: u32) -> Self {
        let z = self.map_zeta(k as i64);
        if self.q == 0 || k == 1 {
            return z;
        }
        // u ↦ u^k
        let ud = 2;
        let uk = Self::u_pow_raw(self.ell, self.q, k as i64);
        let mut out = Self::raw(self.ell, self.q);
        for a in 0..Self::zdim(self.ell) {
            out.coeffs[a * ud] = z.coeffs[a * ud].clone();
        }
        let mut odd = Self::raw(self.ell, self.q);
        for a in 0..Self::zdim(self.ell) {
            odd.coeffs[a * ud] = z.coeffs[a * ud + 1].clone();
        }
        out.plus(&odd.times(&uk))
    }
    fn to_exact_string(&self) -> String {
        let ud = Self::udim(self.q);
        let mut terms = Vec::new();
        for a in 0..Self::zdim(self.ell) {
            for b in 0..ud {
                let c = &self.coeffs[a * ud + b];
                if !c.is_zero() {
                    terms.push(format!("{}·z^{}·u^{}", rat_string(c), a, b));
                }
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Solves a square rational system given as an augmented matrix.
fn solve_augmented(mut m: Vec<Vec<Rat>>, n: usize) -> Option<Vec<Rat>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &m[col][c] * &f;
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Absolute value of a rational as a float.
pub fn rat_abs_f64(r: &Rat) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adams_on_rationals_is_trivial() {
        assert_eq!(rat(7, 3).adams(5), rat(7, 3));
    }

    #[test]
    fn adams_on_zeta_and_u() {
        let z = CycloHalf::zeta(3, 4, 1).unwrap();
        assert_eq!(z.adams(2), CycloHalf::zeta(3, 4, 2).unwrap());
        let u = CycloHalf::u_pow(3, 4, 1).unwrap();
        assert_eq!(u.adams(3), u.scaled(&rint(4)));
    }

    #[test]
    fn cyclotomic_relation() {
        for ell in [2u32, 3, 5, 7] {
            let mut s = CycloHalf::zero_in(ell, 2).unwrap();
            for k in 0..ell {
                s = s.plus(&CycloHalf::zeta(ell, 2, k as i64).unwrap());
            }
            assert!(s.is_zero(), "ell = {ell}");
        }
    }

    #[test]
    fn embeddings() {
        let one_plus = CycloHalf::one().plus(&CycloHalf::zeta(2, 3, 1).unwrap());
        assert!(one_plus.embed_complex(40).norm() < 1e-12);
        let u = CycloHalf::u_pow(2, 9, 1).unwrap();
        assert!((u.embed_complex(40) - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let z = CycloHalf::zeta(3, 4, 1).unwrap().embed_complex(40);
        assert!((z - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn inverse_and_parse_round_trip() {
        let x = CycloHalf::zeta(5, 3, 2)
            .unwrap()
            .plus(&CycloHalf::u_pow(5, 3, -3).unwrap())
            .plus(&CycloHalf::from_rat(&rat(2, 7)));
        let y = x.inverse().unwrap();
        assert_eq!(x.times(&y), CycloHalf::one().lift(5, 3));
        let s = x.to_exact_string();
        assert_eq!(CycloHalf::parse(5, 3, &s).unwrap(), x);
    }

    #[test]
    fn unsupported_order_is_rejected() {
        assert_eq!(CycloHalf::zeta(11, 3, 1), Err(Error::UnsupportedEll(11)));
        assert_eq!(CycloHalf::zeta(4, 3, 1), Err(Error::UnsupportedEll(4)));
    }
}
