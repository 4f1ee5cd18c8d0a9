//! Orbits of `x -> g x`, `x -> x + a` and `x -> x^e` on `Z_ell`, and the
//! consecutive-powers check for `theta = 2` in prime fields.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "lowercase")]
pub enum ResidueMap {
    Mul { g: u64 },
    Add { a: u64 },
    Pow { e: u64 },
}

impl ResidueMap {
    #[inline]
    pub fn apply(&self, x: u64, ell: u64) -> u64 {
        match *self {
            ResidueMap::Mul { g } => nt::mul_mod(g, x, ell),
            ResidueMap::Add { a } => ((x as u128 + a as u128) % ell as u128) as u64,
            ResidueMap::Pow { e } => nt::pow_mod(x, e, ell),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStats {
    pub ell: u64,
    #[serde(flatten)]
    pub map: ResidueMap,
    pub start: u64,
    /// Preperiod length.
    pub tail: u64,
    /// Eventual period.
    pub cycle: u64,
}

/// Brent's cycle detection: returns `(tail, cycle)` for the orbit of `x0`.
pub fn brent<F: Fn(u64) -> u64>(x0: u64, f: F) -> (u64, u64) {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0;
    let mut hare = f(x0);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }
    let mut tortoise = x0;
    let mut hare = x0;
    for _ in 0..lam {
        hare = f(hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    (mu, lam)
}

pub fn orbit(map: ResidueMap, ell: u64, x0: u64) -> Result<OrbitStats> {
    if ell == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    let map = match map {
        ResidueMap::Mul { g } => ResidueMap::Mul { g: g % ell },
        ResidueMap::Add { a } => ResidueMap::Add { a: a % ell },
        pow => pow,
    };
    let start = x0 % ell;
    let (tail, cycle) = brent(start, |x| map.apply(x, ell));
    Ok(OrbitStats { ell, map, start, tail, cycle })
}

/// Closed-form `(tail, cycle)` where one exists: `mul g` with `g` and `x0`
/// coprime to `ell`, every `add a`, and `pow e` with `x0` coprime to `ell`.
pub fn predicted_orbit(map: ResidueMap, ell: u64, x0: u64) -> Result<Option<(u64, u64)>> {
    predicted_orbit_with_budget(map, ell, x0, crate::Limits::default().factor_budget)
}

/// [`predicted_orbit`] with an explicit Pollard-rho budget.
pub fn predicted_orbit_with_budget(map: ResidueMap, ell: u64, x0: u64, budget: u64) -> Result<Option<(u64, u64)>> {
    if ell == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    let x0 = x0 % ell;
    Ok(match map {
        ResidueMap::Add { a } => Some((0, ell / nt::gcd(a % ell, ell))),
        ResidueMap::Mul { g } => {
            if nt::gcd(g, ell) != 1 || nt::gcd(x0, ell) != 1 {
                None
            } else {
                Some((0, mult_order(g, ell, budget)?))
            }
        }
        ResidueMap::Pow { e } => {
            if nt::gcd(x0, ell) != 1 || e < 2 {
                None
            } else {
                let t = mult_order(x0, ell, budget)?;
                // t = t1 * t' with t1 supported on primes of e and gcd(t', e) = 1.
                let tf = nt::factorize(t, budget)?;
                let ef = nt::factorize(e.max(1), budget)?;
                let ev: HashMap<u64, u32> = ef.pairs().iter().copied().collect();
                let mut tail = 0u64;
                let mut t_prime = 1u64;
                for &(q, k) in tf.pairs() {
                    match ev.get(&q) {
                        Some(&v) => tail = tail.max(u64::from(k.div_ceil(v))),
                        None => t_prime *= q.pow(k),
                    }
                }
                Some((tail, mult_order(e % t_prime, t_prime, budget)?))
            }
        }
    })
}

fn mult_order(g: u64, m: u64, budget: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    let phi = nt::euler_phi(&nt::factorize(m, budget)?);
    Ok(nt::order_from_multiple(g, m, phi, &nt::factorize(phi, budget)?))
}

/// `(1/ell) sum_a cycle(x -> x + a)`, by running every orbit.
pub fn additive_period_average_direct(ell: u64) -> Result<Ratio<u64>> {
    if ell == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    let mut total = 0u64;
    for a in 0..ell {
        total += orbit(ResidueMap::Add { a }, ell, 0)?.cycle;
    }
    Ok(Ratio::new(total, ell))
}

/// Node count of the functional graph of `x -> x^e` on `Z_ell`, split into
/// cyclic nodes and tail nodes.
pub fn power_map_partition(ell: u64, e: u64) -> Result<(u64, u64)> {
    if ell == 0 {
        return Err(Error::invalid("modulus must be at least 1"));
    }
    let mut on_cycle = vec![false; ell as usize];
    for x in 0..ell {
        let (tail, cycle) = brent(x, |y| nt::pow_mod(y, e, ell));
        if tail == 0 {
            on_cycle[x as usize] = true;
        }
        debug_assert!(cycle >= 1);
    }
    let cyclic = on_cycle.iter().filter(|&&c| c).count() as u64;
    Ok((cyclic, ell - cyclic))
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub p: u64,
    #[serde(rename = "count_J")]
    pub count_j: u64,
    pub implication_holds: bool,
    pub observed_freq: f64,
    pub conjectured_freq: f64,
    pub actual_freq: f64,
}

/// Scans `m = 1..p-1` for `2^m mod p` in the open interval `(p/4, p/2)` and
/// checks that each such `m` has `2^{m+1} mod p` in `(p/2, p)`.
pub fn counterexample_2b(p: u64) -> Result<CounterexampleReport> {
    if !nt::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || !is_primitive_root(2, p)? {
        return Err(Error::NotPrimitive(2, p));
    }
    let mut count_j = 0u64;
    let mut implication_holds = true;
    let mut x = 1u64;
    for _ in 1..p {
        x = 2 * x % p;
        // p/4 < x < p/2
        if 4 * x > p && 2 * x < p {
            count_j += 1;
            let next = 2 * x % p;
            implication_holds &= 2 * next > p && next < p;
        }
    }
    Ok(CounterexampleReport {
        p,
        count_j,
        implication_holds,
        observed_freq: count_j as f64 / (p - 1) as f64,
        conjectured_freq: 3.0 / 16.0,
        actual_freq: 0.25,
    })
}

pub fn is_primitive_root(g: u64, p: u64) -> Result<bool> {
    if g % p == 0 {
        return Ok(false);
    }
    let f = nt::factorize(p - 1, crate::Limits::default().factor_budget)?;
    let primitive = f.primes().all(|q| nt::pow_mod(g, (p - 1) / q, p) != 1);
    Ok(primitive)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Tortoise-and-hare free oracle: record first visit times.
    fn naive(map: ResidueMap, ell: u64, x0: u64) -> (u64, u64) {
        let mut seen = HashMap::new();
        let mut x = x0 % ell;
        let mut i = 0u64;
        loop {
            if let Some(&j) = seen.get(&x) {
                return (j, i - j);
            }
            seen.insert(x, i);
            x = map.apply(x, ell);
            i += 1;
        }
    }

    #[test]
    fn example_orbits() {
        let o = orbit(ResidueMap::Mul { g: 2 }, 9, 1).unwrap();
        assert_eq!((o.tail, o.cycle), (0, 6));
        let o = orbit(ResidueMap::Add { a: 4 }, 6, 0).unwrap();
        assert_eq!((o.tail, o.cycle), (0, 3));
        let o = orbit(ResidueMap::Pow { e: 2 }, 7, 3).unwrap();
        assert_eq!((o.tail, o.cycle), (1, 2));
        assert_eq!(naive(ResidueMap::Pow { e: 2 }, 7, 3), (1, 2));
        assert_eq!(predicted_orbit(ResidueMap::Pow { e: 2 }, 7, 3).unwrap(), Some((1, 2)));
        let o = orbit(ResidueMap::Mul { g: 5 }, 1, 0).unwrap();
        assert_eq!((o.tail, o.cycle), (0, 1));
    }

    #[test]
    fn brent_matches_naive_on_non_invertible_maps() {
        for ell in 1..200u64 {
            for x0 in [0, 1, 2, ell / 2, ell.saturating_sub(1)] {
                for map in [ResidueMap::Mul { g: 6 }, ResidueMap::Pow { e: 3 }, ResidueMap::Pow { e: 4 }] {
                    let o = orbit(map, ell, x0).unwrap();
                    assert_eq!((o.tail, o.cycle), naive(map, ell, x0), "{map:?} ell={ell} x0={x0}");
                }
            }
        }
    }

    #[test]
    fn additive_direct_values() {
        assert_eq!(additive_period_average_direct(6).unwrap(), Ratio::new(21, 6));
        assert_eq!(additive_period_average_direct(1).unwrap(), Ratio::new(1, 1));
        assert_eq!(additive_period_average_direct(4).unwrap(), Ratio::new(11, 4));
        for ell in 1..=200 {
            assert_eq!(
                additive_period_average_direct(ell).unwrap(),
                crate::arith::additive_average_period(ell).unwrap()
            );
        }
    }

    #[test]
    fn counterexample_small_primes() {
        let r = counterexample_2b(5).unwrap();
        assert_eq!(r.count_j, 1);
        assert_eq!(r.observed_freq, 0.25);
        assert!(r.implication_holds);
        let r = counterexample_2b(13).unwrap();
        assert_eq!((r.count_j, r.observed_freq), (3, 0.25));
        let r = counterexample_2b(11).unwrap();
        assert_eq!(r.count_j, 3);
        assert!((r.observed_freq - 0.3).abs() < 1e-15);
        assert!(r.implication_holds);
    }

    #[test]
    fn counterexample_errors() {
        assert!(matches!(counterexample_2b(7), Err(Error::NotPrimitive(2, 7))));
        assert!(matches!(counterexample_2b(15), Err(Error::NotPrime(15))));
        assert!(counterexample_2b(2).is_err());
    }

    #[test]
    fn power_map_nodes_conserved() {
        for ell in [1u64, 7, 12, 64, 105] {
            for e in [2u64, 3, 5] {
                let (cyc, tail) = power_map_partition(ell, e).unwrap();
                assert_eq!(cyc + tail, ell);
                assert!(cyc >= 1);
            }
        }
    }
}
