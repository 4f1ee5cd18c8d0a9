//! Integer arithmetic shared by the field and residue-ring modules: modular
//! powers, deterministic primality, and factorization by trial division
//! followed by Brent's variant of Pollard rho.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
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

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorMap(Vec<(u64, u32)>);

impl FactorMap {
    pub fn new() -> Self {
        FactorMap(Vec::new())
    }

    /// Builds from arbitrary pairs, merging repeated primes.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (q, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == q => last.1 += e,
                _ => out.push((q, e)),
            }
        }
        FactorMap(out)
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(q, _)| q)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(q, e)| q.pow(e)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn push(&mut self, prime: u64, exp: u32) {
        debug_assert!(self.0.last().is_none_or(|&(q, _)| q < prime));
        self.0.push((prime, exp));
    }
}

/// Factors `n` completely. Fails only if Pollard rho exhausts `budget`
/// iterations across all of its attempts on some composite cofactor.
pub fn factorize(n: u64, budget: u64) -> Result<FactorMap> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut pairs = Vec::new();
    let mut m = n;
    let mut q = 2u64;
    while q <= TRIAL_LIMIT && q * q <= m {
        if m % q == 0 {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            pairs.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if is_prime(c) {
                pairs.push((c, 1));
                continue;
            }
            let d = find_factor(c, budget).ok_or(Error::FactorBudget(n))?;
            stack.push(d);
            stack.push(c / d);
        }
    }
    Ok(FactorMap::from_pairs(pairs))
}

// Tries increments c = 1, 2, ... with the same total iteration budget.
fn find_factor(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0;
    for c in 1..64 {
        if spent >= budget {
            break;
        }
        let (res, used) = brent_rho(n, c, budget - spent);
        spent += used;
        if let Some(d) = res {
            return Some(d);
        }
    }
    None
}

fn brent_rho(n: u64, c: u64, budget: u64) -> (Option<u64>, u64) {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x;
    let mut ys;
    let mut used = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            used += BATCH.min(r - k);
            let g = gcd(q, n);
            if g != 1 {
                if g != n {
                    return (Some(g), used);
                }
                // Backtrack one step at a time from the saved point.
                loop {
                    ys = f(ys);
                    let g = gcd(x.abs_diff(ys), n);
                    if g != 1 {
                        return (if g != n { Some(g) } else { None }, used);
                    }
                }
            }
            k += BATCH;
        }
        r *= 2;
        if used >= budget {
            return (None, used);
        }
    }
}

/// Multiplicative order of `g` modulo `m` given a multiple of it and that
/// multiple's factorization. Requires `g^multiple = 1 (mod m)`.
pub fn order_from_multiple(g: u64, m: u64, multiple: u64, factors: &FactorMap) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut t = multiple;
    for &(q, e) in factors.pairs() {
        for _ in 0..e {
            if t % q == 0 && pow_mod(g, t / q, m) == 1 {
                t /= q;
            } else {
                break;
            }
        }
    }
    t
}

pub fn euler_phi(f: &FactorMap) -> u64 {
    f.pairs().iter().map(|&(q, e)| q.pow(e - 1) * (q - 1)).product()
}
