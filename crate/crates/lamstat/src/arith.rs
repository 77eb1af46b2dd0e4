//! Small integer helpers: primality, prime powers, divisors and the Möbius function.

/// Returns true when `n` is prime.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^e` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The Möbius function.
pub fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Greatest common divisor.
pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of monic irreducible polynomials of degree `d` over a field with `q` elements.
pub fn irreducible_count(q: u64, d: usize) -> u64 {
    checked_irreducible_count(q, d)
        .and_then(|c| u64::try_from(c).ok())
        .expect("irreducible count exceeds u64")
}

/// [`irreducible_count`] in `u128`, or `None` when `q^d` overflows `i128`.
pub fn checked_irreducible_count(q: u64, d: usize) -> Option<u128> {
    let mut total: i128 = 0;
    for e in divisors(d) {
        let term = (q as i128).checked_pow(e as u32)?;
        total = total.checked_add(mobius(d / e) as i128 * term)?;
    }
    u128::try_from(total / d as i128).ok()
}

/// Number of closed points of degree `d` on a variety whose point counts over the
/// degree `k` extensions are `counts[k - 1]`.
pub fn orbit_count_from_points(counts: &[i128], d: usize) -> i128 {
    let total: i128 = divisors(d)
        .into_iter()
        .map(|e| mobius(d / e) as i128 * counts[e - 1])
        .sum();
    total / d as i128
}
