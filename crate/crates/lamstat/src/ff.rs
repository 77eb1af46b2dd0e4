//! Small finite fields and polynomials over them.
//!
//! `GF(p^e)` elements are integers in `0..p^e` whose base-`p` digits are the
//! coefficients in a polynomial basis `1, x, …, x^{e-1}`, where `x` is a root
//! of a primitive polynomial. Multiplication goes through discrete logarithm
//! tables and addition through Zech logarithms (or XOR in characteristic 2).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;

use crate::arith::prime_power;
use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// A finite field `GF(p^e)` with precomputed tables.
#[derive(Debug)]
pub struct Gf {
    p: u32,
    e: u32,
    size: u32,
    /// Coefficients `c_0, …, c_{e-1}` of the primitive modulus `x^e + Σ c_j x^j`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[n] = log(1 + g^n)`, or `u32::MAX` when `1 + g^n = 0`.
    zech: Vec<u32>,
}

static FIELDS: Lazy<RwLock<HashMap<u64, Arc<Gf>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl Gf {
    /// The field with `q` elements, built once and cached.
    pub fn get(q: u64) -> Result<Arc<Gf>> {
        if let Some(f) = FIELDS.read().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::SizeLimit(format!("field of size {q} exceeds {MAX_FIELD_SIZE}")));
        }
        let f = Arc::new(Self::build(p as u32, e));
        FIELDS.write().unwrap().insert(q, f.clone());
        Ok(f)
    }

    fn build(p: u32, e: u32) -> Gf {
        let size = p.pow(e);
        let order = (size - 1) as usize;
        // try monic moduli in increasing order until x generates the unit group
        for cand in 0..size {
            let modulus = digits(cand, p, e);
            if modulus[0] == 0 {
                continue;
            }
            let mut exp = vec![0u32; 2 * order.max(1)];
            let mut log = vec![u32::MAX; size as usize];
            let mut cur = vec![0u32; e as usize];
            cur[0] = 1;
            let mut ok = true;
            for n in 0..order {
                let v = undigits(&cur, p);
                if log[v as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[v as usize] = n as u32;
                exp[n] = v;
                // multiply by x: shift and reduce with x^e = -Σ c_j x^j
                let top = cur[e as usize - 1];
                for j in (1..e as usize).rev() {
                    cur[j] = cur[j - 1];
                }
                cur[0] = 0;
                for j in 0..e as usize {
                    let sub = (top * modulus[j]) % p;
                    cur[j] = (cur[j] + p - sub) % p;
                }
            }
            if !ok || undigits(&cur, p) != 1 {
                continue;
            }
            for n in order..2 * order {
                exp[n] = exp[n - order];
            }
            let mut zech = vec![u32::MAX; order.max(1)];
            for (n, z) in zech.iter_mut().enumerate().take(order) {
                let a = digits(exp[n], p, e);
                let mut s = a.clone();
                s[0] = (s[0] + 1) % p;
                let v = undigits(&s, p);
                if v != 0 {
                    *z = log[v as usize];
                }
            }
            return Gf {
                p,
                e,
                size,
                modulus,
                exp,
                log,
                zech,
            };
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// Characteristic.
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Number of elements.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// The fixed primitive element.
    pub fn generator(&self) -> u32 {
        self.exp[1]
    }

    /// Sum.
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let order = self.size - 1;
        let la = self.log[a as usize];
        let lb = self.log[b as usize];
        let n = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[n as usize];
        if z == u32::MAX {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    /// Additive inverse.
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        // -1 = g^{(Q-1)/2} in odd characteristic
        let half = (self.size - 1) / 2;
        self.exp[(self.log[a as usize] + half) as usize]
    }

    /// Difference.
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Product.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.size - 1;
        let l = self.log[a as usize];
        Some(self.exp[((order - l) % order) as usize])
    }

    /// Power with a large exponent.
    pub fn pow(&self, a: u32, n: u128) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size - 1) as u128;
        let l = (self.log[a as usize] as u128 * (n % order)) % order;
        self.exp[l as usize]
    }

    /// Discrete logarithm to the fixed generator; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `g^n` for the fixed generator `g`.
    pub fn exp(&self, n: u64) -> u32 {
        self.exp[(n % (self.size as u64 - 1)) as usize]
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// The embedding of this field into `big`, as a table indexed by element.
    ///
    /// The primitive element is sent to the smallest root of its minimal
    /// polynomial in `big`. Fails when this field is not a subfield of `big`.
    pub fn embedding_into(&self, big: &Gf) -> Result<Vec<u32>> {
        if big.p != self.p || !big.e.is_multiple_of(self.e) {
            return Err(Error::InvalidArgument(format!(
                "GF({}) is not a subfield of GF({})",
                self.size, big.size
            )));
        }
        let p = self.p;
        let modulus_at = |x: u32| -> u32 {
            // x^e + Σ c_j x^j with prime-field coefficients
            let mut acc = 1u32;
            for j in (0..self.e as usize).rev() {
                acc = big.add(big.mul(acc, x), self.modulus[j]);
            }
            acc
        };
        let root = if self.e == 1 {
            None
        } else {
            Some((0..big.size).find(|&x| modulus_at(x) == 0).expect("the minimal polynomial splits"))
        };
        let table = (0..self.size)
            .map(|a| match root {
                None => a,
                Some(r) => {
                    let d = digits(a, p, self.e);
                    let mut acc = 0u32;
                    for &c in d.iter().rev() {
                        acc = big.add(big.mul(acc, r), c);
                    }
                    acc
                }
            })
            .collect();
        Ok(table)
    }
}

/// A polynomial over a [`Gf`], stored low degree first without trailing zeros.
pub type Poly = Vec<u32>;

/// Drops trailing zero coefficients.
pub fn normalize(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

/// Horner evaluation.
#[inline]
pub fn eval(k: &Gf, f: &[u32], x: u32) -> u32 {
    let mut acc = 0;
    for &c in f.iter().rev() {
        acc = k.add(k.mul(acc, x), c);
    }
    acc
}

/// Product.
pub fn mul(k: &Gf, f: &[u32], g: &[u32]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(a, b));
        }
    }
    normalize(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(k: &Gf, f: &[u32], g: &[u32]) -> (Poly, Poly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let inv = k.inv(g[dg]).expect("nonzero leading coefficient");
    let mut r = normalize(f.to_vec());
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let mut qv = vec![0; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = k.mul(r[dr], inv);
        qv[dr - dg] = c;
        for j in 0..=dg {
            r[dr - dg + j] = k.sub(r[dr - dg + j], k.mul(c, g[j]));
        }
        r = normalize(r);
    }
    (normalize(qv), r)
}

/// Monic greatest common divisor.
pub fn gcd(k: &Gf, f: &[u32], g: &[u32]) -> Poly {
    let mut a = normalize(f.to_vec());
    let mut b = normalize(g.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(k, &a, &b);
        a = b;
        b = r;
    }
    make_monic(k, &a)
}

/// Divides by the leading coefficient.
pub fn make_monic(k: &Gf, f: &[u32]) -> Poly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = k.inv(f[d]).unwrap();
            f[..=d].iter().map(|&c| k.mul(c, inv)).collect()
        }
    }
}

/// Formal derivative.
pub fn derivative(k: &Gf, f: &[u32]) -> Poly {
    normalize(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| k.mul(k.from_int(i as i64), c))
            .collect(),
    )
}

/// Squarefree test through `gcd(f, f') = 1`.
pub fn is_squarefree(k: &Gf, f: &[u32]) -> bool {
    degree(f).is_some_and(|_| gcd(k, f, &derivative(k, f)) == vec![1])
}

/// `N(A, B) = ∏_{A(α) = 0} B(α)` for monic `A`, which equals the resultant `Res(A, B)`.
pub fn norm_of(k: &Gf, a: &[u32], b: &[u32]) -> u32 {
    let da = degree(a).expect("nonzero modulus");
    if da == 0 {
        return 1;
    }
    let r = divrem(k, b, a).1;
    match degree(&r) {
        None => 0,
        Some(0) => k.pow(r[0], da as u128),
        Some(dr) => {
            // N(A, R) = (-1)^{dA·dR} lc(R)^{dA} N(R / lc(R), A)
            let lc = r[dr];
            let monic = make_monic(k, &r);
            let mut v = k.mul(k.pow(lc, da as u128), norm_of(k, &monic, a));
            if (da * dr) % 2 == 1 {
                v = k.neg(v);
            }
            v
        }
    }
}

/// The `index`-th monic polynomial of degree `d`, ordering by base-`Q` digits of the lower coefficients.
pub fn monic_from_index(k: &Gf, d: usize, mut index: u64) -> Poly {
    let q = k.size() as u64;
    let mut f = Vec::with_capacity(d + 1);
    for _ in 0..d {
        f.push((index % q) as u32);
        index /= q;
    }
    f.push(1);
    f
}

/// Number of monic polynomials of degree `d`, if it fits in `u64`.
pub fn monic_count(k: &Gf, d: usize) -> Option<u64> {
    (k.size() as u64).checked_pow(d as u32)
}

/// All monic irreducible polynomials of degree `d` by trial division.
pub fn monic_irreducibles(k: &Gf, d: usize) -> Vec<Poly> {
    let total = monic_count(k, d).expect("desk-scale degree");
    let smaller: Vec<Vec<Poly>> = (1..=d / 2).map(|e| monic_irreducibles(k, e)).collect();
    (0..total)
        .map(|i| monic_from_index(k, d, i))
        .filter(|f| {
            smaller
                .iter()
                .flatten()
                .all(|g| !divrem(k, f, g).1.is_empty())
        })
        .collect()
}

/// Flags, for each monic polynomial of degree `d` in index order, whether it
/// is free of `ℓ`-th powers of nonconstant polynomials.
pub fn power_free_flags(k: &Gf, d: usize, ell: u32) -> Result<Vec<bool>> {
    let total = monic_count(k, d).filter(|&n| n <= 1 << 26).ok_or_else(|| {
        Error::SizeLimit(format!("{}^{} monic polynomials of degree {d}", k.size(), d))
    })?;
    let mut flags = vec![true; total as usize];
    let q = k.size() as u64;
    let ell = ell as usize;
    for e in 1..=d / ell {
        for p in monic_irreducibles(k, e) {
            let mut pl = vec![1u32];
            for _ in 0..ell {
                pl = mul(k, &pl, &p);
            }
            let rest = d - ell * e;
            for j in 0..monic_count(k, rest).unwrap() {
                let g = mul(k, &pl, &monic_from_index(k, rest, j));
                let idx = g[..d].iter().rev().fold(0u64, |acc, &c| acc * q + c as u64);
                flags[idx as usize] = false;
            }
        }
    }
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25, 27] {
            let k = Gf::get(q).unwrap();
            let n = k.size();
            for a in 0..n {
                assert_eq!(k.add(a, 0), a);
                assert_eq!(k.add(a, k.neg(a)), 0);
                assert_eq!(k.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                for b in 0..n {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    for c in [0, 1, n - 1, n / 2] {
                        let lhs = k.mul(a, k.add(b, c));
                        assert_eq!(lhs, k.add(k.mul(a, b), k.mul(a, c)), "q={q}");
                    }
                }
            }
            // Frobenius is additive
            let p = k.characteristic() as u128;
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(k.pow(k.add(a, b), p), k.add(k.pow(a, p), k.pow(b, p)));
                }
            }
        }
        assert!(Gf::get(6).is_err());
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        for (s, b) in [(2u64, 8u64), (4, 16), (3, 27), (9, 81), (4, 64)] {
            let small = Gf::get(s).unwrap();
            let big = Gf::get(b).unwrap();
            let t = small.embedding_into(&big).unwrap();
            for x in 0..small.size() {
                for y in 0..small.size() {
                    assert_eq!(t[small.add(x, y) as usize], big.add(t[x as usize], t[y as usize]));
                    assert_eq!(t[small.mul(x, y) as usize], big.mul(t[x as usize], t[y as usize]));
                }
            }
        }
        assert!(Gf::get(4).unwrap().embedding_into(&Gf::get(8).unwrap()).is_err());
    }

    #[test]
    fn polynomial_basics() {
        let k = Gf::get(3).unwrap();
        // x^2 + 1 is irreducible over F_3
        assert_eq!(monic_irreducibles(&k, 1).len(), 3);
        assert_eq!(monic_irreducibles(&k, 2).len(), 3);
        assert_eq!(monic_irreducibles(&k, 3).len(), 8);
        let f = vec![1, 0, 1];
        let g = vec![2, 1];
        let (qv, r) = divrem(&k, &mul(&k, &f, &g), &g);
        assert_eq!(qv, f);
        assert!(r.is_empty());
        assert!(is_squarefree(&k, &f));
        assert!(!is_squarefree(&k, &mul(&k, &g, &g)));
        // x^3 has zero derivative-free part in characteristic 3
        assert!(!is_squarefree(&k, &[0, 0, 0, 1]));
    }

    #[test]
    fn power_free_counts() {
        let k = Gf::get(3).unwrap();
        let count = |d| power_free_flags(&k, d, 2).unwrap().iter().filter(|&&b| b).count();
        assert_eq!(count(1), 3);
        assert_eq!(count(2), 6);
        assert_eq!(count(3), 18);
        let k4 = Gf::get(4).unwrap();
        let cube_free = power_free_flags(&k4, 4, 3).unwrap().iter().filter(|&&b| b).count();
        // q^d - q^{d-2} cube-free monic polynomials for d >= 3
        assert_eq!(cube_free, 256 - 16);
    }

    #[test]
    fn norm_matches_extension_product() {
        let k = Gf::get(3).unwrap();
        let big = Gf::get(27).unwrap();
        let t = k.embedding_into(&big).unwrap();
        let emb = |f: &[u32]| -> Poly { f.iter().map(|&c| t[c as usize]).collect() };
        let b = vec![2, 1, 0, 1, 1];
        for p in monic_irreducibles(&k, 3) {
            let pe = emb(&p);
            let be = emb(&b);
            let roots: Vec<u32> = (0..27).filter(|&x| eval(&big, &pe, x) == 0).collect();
            assert_eq!(roots.len(), 3);
            let prod = roots.iter().fold(1, |acc, &r| big.mul(acc, eval(&big, &be, r)));
            assert_eq!(prod, t[norm_of(&k, &p, &b) as usize]);
        }
    }
}
