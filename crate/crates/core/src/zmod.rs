//! Exact arithmetic in `Z_p` and its unit group `U_p`.
//!
//! Everything here is integer-exact. A [`PrimeContext`] fixes the prime, the
//! smallest primitive root `ε`, and the factorization of `p - 1`; subgroups of
//! `U_p` are the cyclic groups `⟨ε^a⟩` with `a = (p - 1) / M`.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest prime accepted by [`find_generator`]. Every product of two residues
/// then fits comfortably in the 128-bit intermediates used below.
pub const MAX_PRIME: u64 = 1 << 32;

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &MR_WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut alpha = 0;
            while n.is_multiple_of(q) {
                n /= q;
                alpha += 1;
            }
            out.push((q, alpha));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `m_p` with `m_p · m ≡ 1 (mod p)`.
pub fn mod_inverse(m: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = m % p;
    if m == 0 {
        return Err(Error::NotInvertible { m, p });
    }
    // extended Euclid on (p, m)
    let (mut r0, mut r1) = (p as i128, m as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// A prime `p`, the smallest generator `ε` of `U_p`, and the factorization of `p - 1`.
///
/// Immutable after construction. The DFT twiddle table is built lazily on
/// first use and shared by every signal over this prime.
#[derive(Debug)]
pub struct PrimeContext {
    p: u64,
    epsilon: u64,
    factorization: Vec<(u64, u32)>,
    twiddles: OnceLock<Vec<Complex64>>,
}

impl PartialEq for PrimeContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.epsilon == other.epsilon
    }
}

impl PrimeContext {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Signal length, i.e. `p` as an index bound.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.p as usize
    }

    pub fn epsilon(&self) -> u64 {
        self.epsilon
    }

    /// `(q_i, α_i)` with `∏ q_i^{α_i} = p - 1`, `q_1 < q_2 < …`.
    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn group_order(&self) -> u64 {
        self.p - 1
    }

    /// `ε^e mod p`.
    pub fn power(&self, e: u64) -> u64 {
        pow_mod(self.epsilon, e % self.group_order().max(1), self.p)
    }

    pub fn inverse(&self, m: u64) -> Result<u64> {
        let m = m % self.p;
        if m == 0 {
            return Err(Error::NotInvertible { m, p: self.p });
        }
        mod_inverse(m, self.p)
    }

    /// Every divisor of `p - 1`, ascending, generated from the factorization.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, alpha) in &self.factorization {
            let mut next = Vec::with_capacity(divs.len() * (alpha as usize + 1));
            for &d in &divs {
                let mut qp = 1;
                for _ in 0..=alpha {
                    next.push(d * qp);
                    qp *= q;
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// Exponent vector `(r_1, …, r_k)` of a divisor `d` of `p - 1` over the factorization.
    pub fn exponents_of(&self, mut d: u64) -> Result<Vec<u32>> {
        if d == 0 || !self.group_order().is_multiple_of(d) {
            return Err(Error::NotADivisor { order: d, group_order: self.group_order() });
        }
        Ok(self
            .factorization
            .iter()
            .map(|&(q, _)| {
                let mut r = 0;
                while d.is_multiple_of(q) {
                    d /= q;
                    r += 1;
                }
                r
            })
            .collect())
    }

    /// `e^{-2πi j/p}` for `j = 0..p`, each computed from its own angle.
    pub fn twiddles(&self) -> &[Complex64] {
        self.twiddles.get_or_init(|| {
            let p = self.p as f64;
            (0..self.p).map(|j| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 / p)).collect()
        })
    }

    fn has_full_order(&self, g: u64) -> bool {
        let n = self.group_order();
        self.factorization.iter().all(|&(q, _)| pow_mod(g, n / q, self.p) != 1)
    }
}

/// Builds the context for `p`, choosing the smallest primitive root.
///
/// `p = 2` is accepted with `ε = 1` (trivial `U_2`).
pub fn find_generator(p: u64) -> Result<Arc<PrimeContext>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= MAX_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    let mut ctx = PrimeContext { p, epsilon: 1, factorization: factorize(p - 1), twiddles: OnceLock::new() };
    if p > 2 {
        ctx.epsilon = (2..p).find(|&g| ctx.has_full_order(g)).expect("every prime has a primitive root");
    }
    Ok(Arc::new(ctx))
}

/// The unique subgroup `M = ⟨ε^a⟩` of `U_p` of a given order, with its cosets.
///
/// `cosets[t]` lists `ε^{t + r·a}` for `r = 0..M` in that order, which is also
/// the `t`-th row of the Y-matrix.
#[derive(Debug, Clone)]
pub struct Subgroup {
    ctx: Arc<PrimeContext>,
    order: u64,
    index: u64,
    elements: Vec<u64>,
    cosets: Vec<Vec<u64>>,
    coset_of: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.order == other.order
    }
}

impl Subgroup {
    pub fn of_order(ctx: &Arc<PrimeContext>, order: u64) -> Result<Self> {
        let n = ctx.group_order();
        if order == 0 || !n.is_multiple_of(order) {
            return Err(Error::NotADivisor { order, group_order: n });
        }
        let p = ctx.p();
        let index = n / order;
        let step = ctx.power(index);

        let mut cosets = Vec::with_capacity(index as usize);
        let mut coset_of = vec![usize::MAX; p as usize];
        for t in 0..index {
            let mut x = ctx.power(t);
            let mut row = Vec::with_capacity(order as usize);
            for _ in 0..order {
                coset_of[x as usize] = t as usize;
                row.push(x);
                x = mul_mod(x, step, p);
            }
            cosets.push(row);
        }
        let mut elements = cosets[0].clone();
        elements.sort_unstable();

        Ok(Self { ctx: ctx.clone(), order, index, elements, cosets, coset_of })
    }

    pub fn context(&self) -> &Arc<PrimeContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// `M`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `a = (p - 1) / M`, the number of cosets.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Subgroup elements in ascending order.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    pub fn contains(&self, m: u64) -> bool {
        self.coset_of(m) == Some(0)
    }

    /// Index `t` of the coset `ε^t·M` containing `x`; `None` for `x ≡ 0`.
    pub fn coset_of(&self, x: u64) -> Option<usize> {
        let x = x % self.p();
        match self.coset_of[x as usize] {
            usize::MAX => None,
            t => Some(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_inverse(m: u64, p: u64) -> u64 {
        (1..p).find(|&x| (x * m) % p == 1).unwrap()
    }

    fn small_primes(limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap(), 1);
        assert_eq!(brute_inverse(2, 7), 4);
        assert_eq!(mod_inverse(2, 7).unwrap(), 4);
        assert_eq!(brute_inverse(3, 13), 9);
        assert_eq!(mod_inverse(3, 13).unwrap(), 9);
    }

    #[test]
    fn inverse_errors_are_distinct() {
        assert_eq!(mod_inverse(0, 7), Err(Error::NotInvertible { m: 0, p: 7 }));
        assert_eq!(mod_inverse(14, 7), Err(Error::NotInvertible { m: 0, p: 7 }));
        assert_eq!(mod_inverse(2, 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn inverse_exhaustive_below_1000() {
        for p in small_primes(1000) {
            for m in 1..p {
                let inv = mod_inverse(m, p).unwrap();
                assert_eq!(mul_mod(inv, m, p), 1, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn primality_matches_trial_division() {
        let brute: BTreeSet<u64> = small_primes(5000).into_iter().collect();
        for n in 0..=5000 {
            assert_eq!(is_prime(n), brute.contains(&n), "n={n}");
        }
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297)); // 641 * 6700417
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn generator_examples() {
        assert_eq!(find_generator(7).unwrap().epsilon(), 3);
        assert_eq!(find_generator(13).unwrap().epsilon(), 2);
        assert_eq!(find_generator(3).unwrap().epsilon(), 2);
        let two = find_generator(2).unwrap();
        assert_eq!(two.epsilon(), 1);
        assert!(two.factorization().is_empty());
        assert_eq!(two.divisors(), vec![1]);
    }

    #[test]
    fn generator_errors() {
        assert_eq!(find_generator(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(find_generator(1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(find_generator(4_294_967_311).unwrap_err(), Error::PrimeTooLarge(4_294_967_311));
    }

    #[test]
    fn generator_has_full_orbit_below_1000() {
        for p in small_primes(1000) {
            let ctx = find_generator(p).unwrap();
            let eps = ctx.epsilon();
            let mut seen = BTreeSet::new();
            let mut x = 1;
            for _ in 0..p - 1 {
                seen.insert(x);
                x = (x * eps) % p;
            }
            assert_eq!(seen.len() as u64, p - 1, "p={p}");
            // smallest: no smaller candidate has a full orbit
            for g in 2..eps {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = (x * g) % p;
                    ord += 1;
                }
                assert!(ord < p - 1);
            }
            let prod: u64 = ctx.factorization().iter().map(|&(q, a)| q.pow(a)).product();
            assert_eq!(prod, p - 1);
        }
    }

    #[test]
    fn divisor_examples() {
        let brute = |p: u64| (1..p).filter(|d| (p - 1).is_multiple_of(*d)).collect::<Vec<_>>();
        assert_eq!(brute(13), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(find_generator(13).unwrap().divisors(), brute(13));
        assert_eq!(find_generator(7).unwrap().divisors(), vec![1, 2, 3, 6]);
        assert_eq!(find_generator(3).unwrap().divisors(), vec![1, 2]);
        for p in small_primes(400).into_iter().skip(1) {
            assert_eq!(find_generator(p).unwrap().divisors(), brute(p));
        }
    }

    #[test]
    fn exponents_round_trip() {
        let ctx = find_generator(13).unwrap();
        assert_eq!(ctx.exponents_of(4).unwrap(), vec![2, 0]);
        assert_eq!(ctx.exponents_of(3).unwrap(), vec![0, 1]);
        assert_eq!(ctx.exponents_of(1).unwrap(), vec![0, 0]);
        assert!(ctx.exponents_of(5).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let ctx7 = find_generator(7).unwrap();
        let m = Subgroup::of_order(&ctx7, 3).unwrap();
        assert_eq!(m.elements(), &[1, 2, 4]);
        assert_eq!(m.index(), 2);
        assert_eq!(m.cosets()[0], vec![1, 2, 4]);
        assert_eq!(m.cosets()[1], vec![3, 6, 5]);

        let ctx13 = find_generator(13).unwrap();
        let m1 = Subgroup::of_order(&ctx13, 3).unwrap();
        assert_eq!(ctx13.power(4), 3);
        assert_eq!(m1.elements(), &[1, 3, 9]);

        let trivial = Subgroup::of_order(&ctx13, 1).unwrap();
        assert_eq!(trivial.elements(), &[1]);
        assert_eq!(trivial.cosets().len(), 12);
        assert!(trivial.cosets().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn subgroup_rejects_non_divisor() {
        let ctx = find_generator(13).unwrap();
        assert_eq!(Subgroup::of_order(&ctx, 5).unwrap_err(), Error::NotADivisor { order: 5, group_order: 12 });
        assert!(Subgroup::of_order(&ctx, 0).is_err());
    }

    #[test]
    fn cosets_partition_units() {
        for p in small_primes(200).into_iter().skip(1) {
            let ctx = find_generator(p).unwrap();
            for order in ctx.divisors() {
                let sg = Subgroup::of_order(&ctx, order).unwrap();
                let mut seen = BTreeSet::new();
                for (t, coset) in sg.cosets().iter().enumerate() {
                    assert_eq!(coset.len() as u64, order);
                    for &x in coset {
                        assert!(seen.insert(x), "overlap at {x}");
                        assert_eq!(sg.coset_of(x), Some(t));
                    }
                }
                assert_eq!(seen, (1..p).collect());
                // closure and identity
                assert!(sg.contains(1));
                for &a in sg.elements() {
                    for &b in sg.elements() {
                        assert!(sg.contains(mul_mod(a, b, p)));
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_of_each_order_is_unique() {
        for p in small_primes(100).into_iter().skip(1) {
            let ctx = find_generator(p).unwrap();
            let mut cyclic: BTreeSet<Vec<u64>> = BTreeSet::new();
            for x in 1..p {
                let mut set = BTreeSet::new();
                let mut y = x;
                loop {
                    set.insert(y);
                    if y == 1 {
                        break;
                    }
                    y = (y * x) % p;
                }
                cyclic.insert(set.into_iter().collect());
            }
            let divisors = ctx.divisors();
            assert_eq!(cyclic.len(), divisors.len());
            for order in divisors {
                let matching: Vec<_> = cyclic.iter().filter(|s| s.len() as u64 == order).collect();
                assert_eq!(matching.len(), 1);
                assert_eq!(matching[0].as_slice(), Subgroup::of_order(&ctx, order).unwrap().elements());
            }
        }
    }
}
