mod common;

use common::{gcd, order_naive, phi_naive};
use num_rational::Ratio;
use orbitlab::arith::{
    additive_average_period, average_divisor, avg_multiplicative_order, carmichael, divisor_average, growth_ratio,
    primitive_root_prime_count, q_average, sum_carmichael, Sieve,
};
use orbitlab::residue::additive_period_average_direct;

#[test]
fn sieve_records_match_naive_values() {
    let s = Sieve::new(2000, 1 << 30).unwrap();
    for ell in 1..=2000u64 {
        let max_order = (1..=ell.max(2) - 1)
            .filter(|&x| gcd(x, ell) == 1)
            .filter_map(|x| order_naive(x, ell))
            .max()
            .unwrap_or(1);
        let rec = s.record(ell, 2);
        assert_eq!(rec.lambda, max_order, "lambda({ell})");
        assert_eq!(rec.phi, phi_naive(ell), "phi({ell})");
        assert_eq!(rec.tau, (1..=ell).filter(|d| ell % d == 0).count() as u64);
        assert_eq!(rec.sigma, (1..=ell).filter(|d| ell % d == 0).sum::<u64>());
        assert_eq!(rec.factors.value(), ell);
        for g in [2u64, 3, 10] {
            let t = s.order(g, ell);
            assert_eq!(t, order_naive(g, ell), "t_{g}({ell})");
            if let Some(t) = t {
                assert_eq!(rec.lambda % t, 0);
                assert_eq!(rec.phi % rec.lambda, 0);
            }
        }
    }
}

#[test]
fn carmichael_of_prime_powers() {
    let s = Sieve::new(1 << 12, 1 << 30).unwrap();
    assert_eq!(carmichael(&s.factor(8)), 2);
    assert_eq!(carmichael(&s.factor(16)), 4);
    assert_eq!(carmichael(&s.factor(4)), 2);
    assert_eq!(carmichael(&s.factor(3 * 5 * 7)), 12);
    assert_eq!(carmichael(&s.factor(4096)), 1024);
}

#[test]
fn average_order_small_cases() {
    // t_2 over odd ell <= 10: 1, 2, 4, 6, 3 -> 16/10.
    assert_eq!(avg_multiplicative_order(10, 2, 1 << 30).unwrap(), 1.6);
    let direct: u64 = (1..=500u64).filter_map(|l| order_naive(3, l)).sum();
    assert!((avg_multiplicative_order(500, 3, 1 << 30).unwrap() - direct as f64 / 500.0).abs() < 1e-12);
    assert!(avg_multiplicative_order(10, 1, 1 << 30).is_err());
}

#[test]
fn sum_lambda_ratio_is_below_one() {
    let r = sum_carmichael(20_000, 2, 1 << 30).unwrap();
    assert!(r.order_ratio > 0.0 && r.order_ratio < 1.0);
}

#[test]
fn q_matches_simulated_periods() {
    for ell in 1..=120u64 {
        assert_eq!(additive_average_period(ell).unwrap(), additive_period_average_direct(ell).unwrap(), "ell={ell}");
    }
    assert_eq!(additive_average_period(1).unwrap(), Ratio::from_integer(1));
    // ell = p: (1 + p(p-1)) / p
    assert_eq!(additive_average_period(7).unwrap(), Ratio::new(43, 7));
    let q = q_average(10_000, 1 << 30).unwrap();
    assert!((q.normalized - 1.0).abs() < 1e-3);
}

#[test]
fn average_divisor_identities() {
    for p in common::primes_naive(2, 600) {
        assert_eq!(average_divisor(p).unwrap(), Ratio::new(p + 1, 2));
    }
    assert_eq!(average_divisor(12).unwrap(), Ratio::new(28, 6));
    let d = divisor_average(10, 1 << 30).unwrap();
    let direct: f64 = (1..=10u64).map(|k| {
        let ds: Vec<u64> = (1..=k).filter(|d| k % d == 0).collect();
        ds.iter().sum::<u64>() as f64 / ds.len() as f64
    }).sum::<f64>() / 10.0;
    assert!((d.value - direct).abs() < 1e-12);
}

#[test]
fn primitive_root_counts() {
    for (x, g) in [(10u64, 3u64), (100, 2), (1000, 2), (1000, 10), (500, 5)] {
        let want = common::primes_naive(2, x)
            .into_iter()
            .filter(|&p| g % p != 0 && order_naive(g, p) == Some(p - 1))
            .count() as u64;
        assert_eq!(primitive_root_prime_count(x, g, 1 << 30).unwrap(), want, "x={x} g={g}");
    }
    assert_eq!(primitive_root_prime_count(10, 3, 1 << 30).unwrap(), 3);
}

#[test]
fn growth_series_is_increasing_at_small_decades() {
    let s = Sieve::new(100_000, 1 << 30).unwrap();
    let series = s.avg_order_series(2, &[1000, 10_000, 100_000]).unwrap();
    let g = growth_ratio(&series);
    assert!(g.windows(2).all(|w| w[1].1 > w[0].1), "{g:?}");
}

#[test]
fn sieve_caps() {
    assert!(Sieve::new(1000, 999).is_err());
    let s = Sieve::new(1000, 1 << 30).unwrap();
    assert!(s.avg_order_series(2, &[2000]).is_err());
    assert!(s.avg_order_series(2, &[100, 50]).is_err());
}
