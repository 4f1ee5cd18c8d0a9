//! Sieved arithmetic functions and their averages: Euler phi, Carmichael
//! lambda, multiplicative orders, additive periods and average divisors.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::nt::{self, FactorMap};

/// `3 zeta(3) / pi^2`, the slope of the mean additive period.
pub const Q_SLOPE: f64 = 3.0 * 1.202_056_903_159_594_2 / (std::f64::consts::PI * std::f64::consts::PI);

/// Constant in `D(K) ~ kappa K / sqrt(log K)`.
pub const KAPPA: f64 = 0.4067;

/// Smallest-prime-factor table for `1..=bound`.
#[derive(Clone, Debug)]
pub struct Sieve {
    spf: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithRecord {
    pub ell: u64,
    pub factors: FactorMap,
    pub phi: u64,
    pub lambda: u64,
    pub tau: u64,
    pub sigma: u64,
    /// Multiplicative order of `g`; absent when `gcd(g, ell) > 1`.
    pub order_g: Option<u64>,
}

impl Sieve {
    pub fn new(bound: u64, cap: u128) -> Result<Self> {
        if bound == 0 {
            return Err(Error::invalid("sieve bound must be at least 1"));
        }
        check_cap("sieve bound", u128::from(bound), cap)?;
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &q in &primes {
                let j = i * q as usize;
                if q > si || j > n {
                    break;
                }
                spf[j] = q;
            }
        }
        Ok(Sieve { spf })
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn is_prime(&self, k: u64) -> bool {
        k >= 2 && self.spf[k as usize] as u64 == k
    }

    pub fn factor(&self, k: u64) -> FactorMap {
        assert!(k >= 1 && k <= self.bound(), "{k} outside sieve range");
        let mut f = FactorMap::new();
        let mut m = k as usize;
        while m > 1 {
            let q = self.spf[m] as usize;
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            f.push(q as u64, e);
        }
        f
    }

    /// `t_g(ell)`, or `None` if `gcd(g, ell) > 1`. `t_g(1) = 1`.
    pub fn order(&self, g: u64, ell: u64) -> Option<u64> {
        if nt::gcd(g, ell) != 1 {
            return None;
        }
        if ell == 1 {
            return Some(1);
        }
        let lam = carmichael(&self.factor(ell));
        Some(nt::order_from_multiple(g, ell, lam, &self.factor(lam)))
    }

    pub fn record(&self, ell: u64, g: u64) -> ArithRecord {
        let factors = self.factor(ell);
        let lambda = carmichael(&factors);
        let order_g = (nt::gcd(g, ell) == 1).then(|| {
            if ell == 1 {
                1
            } else {
                nt::order_from_multiple(g, ell, lambda, &self.factor(lambda))
            }
        });
        ArithRecord {
            ell,
            phi: nt::euler_phi(&factors),
            lambda,
            tau: tau(&factors),
            sigma: sigma(&factors),
            order_g,
            factors,
        }
    }

    /// Records for `ell = 1..=bound`, in order.
    pub fn records(&self, g: u64) -> impl Iterator<Item = ArithRecord> + '_ {
        (1..=self.bound()).map(move |ell| self.record(ell, g))
    }
}

pub fn carmichael(f: &FactorMap) -> u64 {
    f.pairs().iter().fold(1, |acc, &(q, e)| {
        let part = if q == 2 && e >= 3 { 1 << (e - 2) } else { q.pow(e - 1) * (q - 1) };
        nt::lcm(acc, part)
    })
}

pub fn tau(f: &FactorMap) -> u64 {
    f.pairs().iter().map(|&(_, e)| u64::from(e) + 1).product()
}

pub fn sigma(f: &FactorMap) -> u64 {
    f.pairs().iter().map(|&(q, e)| (q.pow(e + 1) - 1) / (q - 1)).product()
}

/// `sum_{d | ell} d phi(d)`.
fn divisor_period_sum(f: &FactorMap) -> u64 {
    f.pairs()
        .iter()
        .map(|&(q, e)| 1 + q * (q.pow(2 * e) - 1) / (q + 1))
        .product()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgSeries {
    pub statistic: String,
    pub points: Vec<(u64, f64)>,
}

fn check_checkpoints(checkpoints: &[u64]) -> Result<u64> {
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("checkpoints must be positive and strictly increasing"));
    }
    Ok(*checkpoints.last().unwrap())
}

// Exact prefix sums of `value(ell)` at each checkpoint.
fn prefix_sums<F>(checkpoints: &[u64], value: F) -> Vec<u128>
where
    F: Fn(u64) -> u128 + Sync,
{
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut total = 0u128;
    let mut start = 1u64;
    for &cp in checkpoints {
        total += (start..=cp).into_par_iter().map(&value).sum::<u128>();
        out.push(total);
        start = cp + 1;
    }
    out
}

impl Sieve {
    /// `T_g(L) = (1/L) sum_{ell <= L, gcd(g, ell) = 1} t_g(ell)` at each checkpoint.
    pub fn avg_order_series(&self, g: u64, checkpoints: &[u64]) -> Result<AvgSeries> {
        let top = check_checkpoints(checkpoints)?;
        self.check_bound(top)?;
        let sums = prefix_sums(checkpoints, |ell| u128::from(self.order(g, ell).unwrap_or(0)));
        Ok(AvgSeries {
            statistic: format!("T_{g}"),
            points: checkpoints.iter().zip(sums).map(|(&l, s)| (l, s as f64 / l as f64)).collect(),
        })
    }

    /// `(1/L) sum_{ell <= L} lambda(ell)` at each checkpoint.
    pub fn sum_lambda_series(&self, checkpoints: &[u64]) -> Result<AvgSeries> {
        let top = check_checkpoints(checkpoints)?;
        self.check_bound(top)?;
        let sums = prefix_sums(checkpoints, |ell| u128::from(carmichael(&self.factor(ell))));
        Ok(AvgSeries {
            statistic: "sumLambda".into(),
            points: checkpoints.iter().zip(sums).map(|(&l, s)| (l, s as f64 / l as f64)).collect(),
        })
    }

    /// `(1/L) sum_{ell <= L} Q(ell)` at each checkpoint.
    pub fn q_average_series(&self, checkpoints: &[u64]) -> Result<AvgSeries> {
        let top = check_checkpoints(checkpoints)?;
        self.check_bound(top)?;
        // Q(ell) = S(ell)/ell; accumulate over a common denominator-free float
        // sum in fixed order.
        let mut points = Vec::with_capacity(checkpoints.len());
        let mut acc = KahanSum::default();
        let mut start = 1;
        for &cp in checkpoints {
            for ell in start..=cp {
                acc.add(divisor_period_sum(&self.factor(ell)) as f64 / ell as f64);
            }
            points.push((cp, acc.total() / cp as f64));
            start = cp + 1;
        }
        Ok(AvgSeries { statistic: "Qavg".into(), points })
    }

    /// `D(K) = (1/K) sum_{k <= K} sigma(k)/tau(k)` at each checkpoint.
    pub fn divisor_average_series(&self, checkpoints: &[u64]) -> Result<AvgSeries> {
        let top = check_checkpoints(checkpoints)?;
        self.check_bound(top)?;
        let mut points = Vec::with_capacity(checkpoints.len());
        let mut acc = KahanSum::default();
        let mut start = 1;
        for &cp in checkpoints {
            for k in start..=cp {
                let f = self.factor(k);
                acc.add(sigma(&f) as f64 / tau(&f) as f64);
            }
            points.push((cp, acc.total() / cp as f64));
            start = cp + 1;
        }
        Ok(AvgSeries { statistic: "Davg".into(), points })
    }

    /// Primes `p <= x`, `p` not dividing `g`, for which `g` generates `Z_p^*`.
    pub fn primitive_root_prime_count(&self, x: u64, g: u64) -> Result<u64> {
        self.check_bound(x)?;
        let count = (2..=x)
            .into_par_iter()
            .filter(|&p| self.is_prime(p) && g % p != 0)
            .filter(|&p| {
                let q = p - 1;
                self.factor(q).primes().all(|r| nt::pow_mod(g, q / r, p) != 1)
            })
            .count();
        Ok(count as u64)
    }

    fn check_bound(&self, top: u64) -> Result<()> {
        if top > self.bound() {
            return Err(Error::invalid(format!("{top} exceeds sieve bound {}", self.bound())));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn avg_multiplicative_order(l: u64, g: u64, cap: u128) -> Result<f64> {
    if g < 2 {
        return Err(Error::invalid("base g must be at least 2"));
    }
    let s = Sieve::new(l, cap)?;
    Ok(s.avg_order_series(g, &[l])?.points[0].1)
}

#[derive(Clone, Debug, Serialize)]
pub struct SumLambda {
    #[serde(rename = "L")]
    pub l: u64,
    pub value: f64,
    pub g: u64,
    /// `T_g(L)` divided by `value`.
    pub order_ratio: f64,
}

pub fn sum_carmichael(l: u64, g: u64, cap: u128) -> Result<SumLambda> {
    let s = Sieve::new(l, cap)?;
    let value = s.sum_lambda_series(&[l])?.points[0].1;
    let t = s.avg_order_series(g, &[l])?.points[0].1;
    Ok(SumLambda { l, value, g, order_ratio: t / value })
}

/// `Q(ell) = (1/ell) sum_{d | ell} d phi(d)`, the mean period of `x -> x + a` on `Z_ell`.
pub fn additive_average_period(ell: u64) -> Result<Ratio<u64>> {
    if ell == 0 {
        return Err(Error::invalid("ell must be at least 1"));
    }
    let f = nt::factorize(ell, crate::Limits::default().factor_budget)?;
    Ok(Ratio::new(divisor_period_sum(&f), ell))
}

#[derive(Clone, Debug, Serialize)]
pub struct QAverage {
    #[serde(rename = "L")]
    pub l: u64,
    pub value: f64,
    /// `value / (Q_SLOPE * L)`.
    pub normalized: f64,
}

pub fn q_average(l: u64, cap: u128) -> Result<QAverage> {
    let s = Sieve::new(l, cap)?;
    let value = s.q_average_series(&[l])?.points[0].1;
    Ok(QAverage { l, value, normalized: value / (Q_SLOPE * l as f64) })
}

/// `d(k) = sigma(k) / tau(k)`.
pub fn average_divisor(k: u64) -> Result<Ratio<u64>> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let f = nt::factorize(k, crate::Limits::default().factor_budget)?;
    Ok(Ratio::new(sigma(&f), tau(&f)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorAverage {
    #[serde(rename = "K")]
    pub k: u64,
    pub value: f64,
    /// `D(K) sqrt(log K) / K`, expected to approach `KAPPA`.
    pub norm_sqrt: f64,
    /// `D(K) log K / (1.5 K)`, the normalization the data rules out.
    pub norm_arnold: f64,
}

impl DivisorAverage {
    pub fn from_value(k: u64, value: f64) -> Self {
        let kf = k as f64;
        let lk = kf.ln();
        DivisorAverage { k, value, norm_sqrt: value * lk.sqrt() / kf, norm_arnold: value * lk / (1.5 * kf) }
    }
}

pub fn divisor_average(k: u64, cap: u128) -> Result<DivisorAverage> {
    if k < 2 {
        return Err(Error::invalid("K must be at least 2"));
    }
    let s = Sieve::new(k, cap)?;
    Ok(DivisorAverage::from_value(k, s.divisor_average_series(&[k])?.points[0].1))
}

pub fn primitive_root_prime_count(x: u64, g: u64, cap: u128) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    Sieve::new(x, cap)?.primitive_root_prime_count(x, g)
}

/// One row of the checkpoint table emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct CheckpointRow {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "T_g")]
    pub t_g: f64,
    #[serde(rename = "T_g_logL_over_L")]
    pub t_growth: f64,
    #[serde(rename = "sumLambda")]
    pub sum_lambda: f64,
    pub ratio: f64,
    #[serde(rename = "Qavg")]
    pub q_avg: f64,
    #[serde(rename = "Qavg_norm")]
    pub q_norm: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "D_norm_sqrt")]
    pub d_norm_sqrt: f64,
    #[serde(rename = "D_norm_arnold")]
    pub d_norm_arnold: f64,
}

/// `T_g(L) log L / L` for each point of a `T_g` series.
pub fn growth_ratio(series: &AvgSeries) -> Vec<(u64, f64)> {
    series.points.iter().map(|&(l, t)| (l, t * (l as f64).ln() / l as f64)).collect()
}

impl Sieve {
    pub fn checkpoint_table(&self, g: u64, checkpoints: &[u64]) -> Result<Vec<CheckpointRow>> {
        let t = self.avg_order_series(g, checkpoints)?;
        let lam = self.sum_lambda_series(checkpoints)?;
        let q = self.q_average_series(checkpoints)?;
        let d = self.divisor_average_series(checkpoints)?;
        Ok((0..checkpoints.len())
            .map(|i| {
                let l = checkpoints[i];
                let lf = l as f64;
                let (tg, sl, qa, dv) = (t.points[i].1, lam.points[i].1, q.points[i].1, d.points[i].1);
                let da = if l >= 2 { DivisorAverage::from_value(l, dv) } else { DivisorAverage { k: l, value: dv, norm_sqrt: 0.0, norm_arnold: 0.0 } };
                CheckpointRow {
                    l,
                    t_g: tg,
                    t_growth: tg * lf.ln() / lf,
                    sum_lambda: sl,
                    ratio: tg / sl,
                    q_avg: qa,
                    q_norm: qa / (Q_SLOPE * lf),
                    d: dv,
                    d_norm_sqrt: da.norm_sqrt,
                    d_norm_arnold: da.norm_arnold,
                }
            })
            .collect())
    }
}
