//! Additive character sums `sum_m e_p(Tr(gamma theta^{E(m)}))` and the
//! Koksma-Szusz bracket for box discrepancy.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::points::{generate, ExponentSchedule, ScheduleKind, UnitPointSet};

const TABLE_MAX: u64 = 1 << 22;

/// `k -> e(k / modulus)` with a lookup table for small moduli.
pub struct UnitRoots {
    modulus: u64,
    table: Vec<Complex64>,
}

impl UnitRoots {
    pub fn new(modulus: u64) -> Self {
        let table = if modulus <= TABLE_MAX {
            (0..modulus).map(|k| Self::direct(k, modulus)).collect()
        } else {
            Vec::new()
        };
        UnitRoots { modulus, table }
    }

    fn direct(k: u64, modulus: u64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * (k as f64) / (modulus as f64))
    }

    #[inline]
    pub fn get(&self, k: u64) -> Complex64 {
        let k = k % self.modulus;
        match self.table.get(k as usize) {
            Some(&z) => z,
            None => Self::direct(k, self.modulus),
        }
    }
}

/// Neumaier-compensated complex accumulator. Summation order is the caller's,
/// so results are reproducible bit for bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumResult {
    pub p: u64,
    pub n: usize,
    pub schedule: String,
    #[serde(rename = "M")]
    pub m: u64,
    /// Polynomial-basis coefficients of gamma.
    pub gamma: Vec<u64>,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub envelope: f64,
    pub ratio: f64,
}

impl ExpSumResult {
    fn new(ctx: &FieldCtx, sched: &ExponentSchedule, gamma: &FFElem, value: Complex64) -> Self {
        let envelope = envelope(ctx, sched);
        let abs = value.norm();
        ExpSumResult {
            p: ctx.p(),
            n: ctx.n(),
            schedule: sched.to_string(),
            m: sched.len,
            gamma: gamma.coeffs().to_vec(),
            re: value.re,
            im: value.im,
            abs,
            envelope,
            ratio: abs / envelope,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoValue {
    pub k: u32,
    pub rho: Ratio<u64>,
}

/// The saving exponent for sums over `theta^{m^k}`.
pub fn rho(k: u32) -> Result<RhoValue> {
    match k {
        0 | 1 => Err(Error::invalid("rho(k) needs k >= 2")),
        2 => Ok(RhoValue { k, rho: Ratio::new(1, 8) }),
        _ => {
            let k64 = u64::from(k);
            let c = k64.div_ceil(2);
            Ok(RhoValue { k, rho: Ratio::new(c - 1, 2 * k64 * c + 2) })
        }
    }
}

/// Comparison quantity for `|S|`: `p^{n/2} log p` for initial segments,
/// `p^{(1-rho(k)) n}` for monomial exponents, and the trivial bound `M` otherwise.
pub fn envelope(ctx: &FieldCtx, sched: &ExponentSchedule) -> f64 {
    let p = ctx.p() as f64;
    let n = ctx.n() as f64;
    let classic = p.powf(n / 2.0) * p.ln();
    match sched.kind {
        ScheduleKind::Linear | ScheduleKind::Monomial { k: 1 } => classic,
        ScheduleKind::Monomial { k } => {
            let r = rho(k).expect("k >= 2").rho;
            let r = *r.numer() as f64 / *r.denom() as f64;
            p.powf((1.0 - r) * n)
        }
        _ => sched.len as f64,
    }
}

/// `sum_{m=1}^{M} e_p(Tr(gamma theta^{E(m)}))`, evaluated element by element.
pub fn incomplete_sum(ctx: &FieldCtx, gamma: &FFElem, sched: &ExponentSchedule) -> Result<ExpSumResult> {
    ctx.check(gamma)?;
    if gamma.is_zero() {
        return Err(Error::ZeroGamma);
    }
    let roots = UnitRoots::new(ctx.p());
    let order = ctx.group_order();
    let mut acc = CompensatedSum::default();
    let step = ctx.mul(gamma, ctx.theta());
    let mut cur = gamma.clone();
    for m in 1..=sched.len {
        let alpha = match sched.kind {
            ScheduleKind::Linear => {
                cur = if m == 1 { step.clone() } else { ctx.mul(&cur, ctx.theta()) };
                cur.clone()
            }
            _ => ctx.mul(gamma, &ctx.theta_pow(sched.exponent(m, order))),
        };
        acc.add(roots.get(ctx.trace_linear(&alpha)));
    }
    Ok(ExpSumResult::new(ctx, sched, gamma, acc.value()))
}

/// Sum for `gamma = sum_j c_j omega_j` over precomputed orbit coordinates:
/// `Tr(gamma theta^e) = sum_j c_j a_j(e)`.
fn sum_from_coords(pts: &UnitPointSet, c: &[u64], roots: &UnitRoots, p: u64) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for a in pts.iter() {
        let t = a.iter().zip(c).fold(0u64, |s, (&x, &y)| (s + crate::nt::mul_mod(x, y, p)) % p);
        acc.add(roots.get(t));
    }
    acc.value()
}

/// Largest `|S|` over all nonzero gamma; ties resolve to the smallest gamma index.
pub fn max_over_gamma(ctx: &FieldCtx, sched: &ExponentSchedule, cap: u128) -> Result<ExpSumResult> {
    check_cap("gamma enumeration", u128::from(ctx.size()), cap)?;
    let p = ctx.p();
    let n = ctx.n();
    let pts = generate(ctx, sched)?;
    let roots = UnitRoots::new(p);
    let (best_idx, best_val) = (1..ctx.size())
        .into_par_iter()
        .map(|idx| {
            let c = ctx.elem_from_index(idx);
            (idx, sum_from_coords(&pts, c.coeffs(), &roots, p))
        })
        .reduce(
            || (0, Complex64::new(-1.0, 0.0)),
            |a, b| {
                let (na, nb) = (a.1.norm(), b.1.norm());
                if nb > na || (nb == na && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    let c = ctx.elem_from_index(best_idx);
    let mut gamma = ctx.zero();
    for (j, &cj) in c.coeffs().iter().enumerate() {
        gamma = ctx.add(&gamma, &ctx.scale(&ctx.dual_basis()[j], cj));
    }
    debug_assert_eq!(n, gamma.coeffs().len());
    Ok(ExpSumResult::new(ctx, sched, &gamma, best_val))
}

/// `1/L + (1/M) sum_{0 < |c|_inf <= L} prod_j (1+|c_j|)^{-1} |sum_u e(c.u)|`,
/// the Koksma-Szusz bracket without its implied constant.
pub fn koksma_szusz_rhs(pts: &UnitPointSet, l: u64, cap: u128) -> Result<f64> {
    if l < 2 {
        return Err(Error::invalid("Koksma-Szusz needs an integer L > 1"));
    }
    if pts.is_empty() {
        return Err(Error::invalid("empty point set"));
    }
    let n = pts.dim();
    let side = 2 * u128::from(l) + 1;
    let work = side
        .checked_pow(n as u32)
        .and_then(|v| v.checked_mul(pts.len() as u128))
        .unwrap_or(u128::MAX);
    check_cap("Koksma-Szusz frequencies", work, cap)?;
    let den = pts.denominator();
    let roots = UnitRoots::new(den);
    let count = side.pow(n as u32) as u64;
    let l_i = l as i64;
    let terms: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let mut c = Vec::with_capacity(n);
            let mut weight = 1.0;
            let mut origin = true;
            for _ in 0..n {
                let cj = (rest % side as u64) as i64 - l_i;
                rest /= side as u64;
                origin &= cj == 0;
                weight /= 1.0 + cj.unsigned_abs() as f64;
                c.push(cj.rem_euclid(den as i64) as u64);
            }
            if origin {
                return 0.0;
            }
            weight * sum_from_coords(pts, &c, &roots, den).norm()
        })
        .collect();
    let mut acc = CompensatedSum::default();
    for t in terms {
        acc.add(Complex64::new(t, 0.0));
    }
    Ok(1.0 / l as f64 + acc.value().re / pts.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho(2).unwrap().rho, Ratio::new(1, 8));
        assert_eq!(rho(3).unwrap().rho, Ratio::new(1, 14));
        assert_eq!(rho(4).unwrap().rho, Ratio::new(1, 18));
        assert!(rho(1).is_err());
        for k in 2..=64 {
            let r = rho(k).unwrap().rho;
            assert!(r > Ratio::new(0, 1) && r <= Ratio::new(1, 8), "k = {k}");
        }
        // Non-increasing along each parity class, but not overall.
        for k in 3..=62 {
            assert!(rho(k + 2).unwrap().rho <= rho(k).unwrap().rho, "k = {k}");
        }
        assert_eq!(rho(5).unwrap().rho, Ratio::new(1, 16));
        assert!(rho(5).unwrap().rho > rho(4).unwrap().rho);
    }

    #[test]
    fn complete_sum_is_minus_one() {
        let ctx = FieldCtx::build(5, 2, 0).unwrap();
        let sched = ExponentSchedule::linear(ctx.group_order()).unwrap();
        for idx in 1..ctx.size() {
            let g = ctx.elem_from_index(idx);
            let s = incomplete_sum(&ctx, &g, &sched).unwrap().value();
            assert!((s - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn two_term_sum_mod_five() {
        let ctx = FieldCtx::build(5, 1, 0).unwrap();
        let s = incomplete_sum(&ctx, &ctx.one(), &ExponentSchedule::linear(2).unwrap()).unwrap();
        // Independent: e(2/5) + e(4/5) summed by hand in cos/sin.
        let re = (TAU * 0.4).cos() + (TAU * 0.8).cos();
        let im = (TAU * 0.4).sin() + (TAU * 0.8).sin();
        assert!((s.abs - re.hypot(im)).abs() < 1e-12);
        assert!((s.abs - 0.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn zero_gamma_rejected() {
        let ctx = FieldCtx::build(5, 1, 0).unwrap();
        let sched = ExponentSchedule::linear(2).unwrap();
        assert!(matches!(incomplete_sum(&ctx, &ctx.zero(), &sched), Err(Error::ZeroGamma)));
    }

    #[test]
    fn max_over_gamma_small_cases() {
        let ctx = FieldCtx::build(2, 1, 0).unwrap();
        let r = max_over_gamma(&ctx, &ExponentSchedule::linear(1).unwrap(), 1 << 20).unwrap();
        assert!((r.abs - 1.0).abs() < 1e-12);

        let ctx = FieldCtx::build(17, 1, 0).unwrap();
        let r = max_over_gamma(&ctx, &ExponentSchedule::linear(16).unwrap(), 1 << 20).unwrap();
        assert!((r.abs - 1.0).abs() < 1e-9);
    }

    #[test]
    fn max_over_gamma_agrees_with_direct_route() {
        let ctx = FieldCtx::build(3, 3, 0).unwrap();
        let sched = ExponentSchedule::linear(10).unwrap();
        let best = max_over_gamma(&ctx, &sched, 1 << 20).unwrap();
        let brute = (1..ctx.size())
            .map(|i| incomplete_sum(&ctx, &ctx.elem_from_index(i), &sched).unwrap().abs)
            .fold(0.0, f64::max);
        assert!((best.abs - brute).abs() < 1e-12);
        let g = ctx.elem(best.gamma.clone()).unwrap();
        let direct = incomplete_sum(&ctx, &g, &sched).unwrap();
        assert!((direct.value() - best.value()).norm() < 1e-12);
    }

    #[test]
    fn gamma_cap() {
        let ctx = FieldCtx::build(101, 1, 0).unwrap();
        let r = max_over_gamma(&ctx, &ExponentSchedule::linear(3).unwrap(), 10);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn ks_full_orbit_mod_five() {
        let ctx = FieldCtx::build(5, 1, 0).unwrap();
        let pts = generate(&ctx, &ExponentSchedule::linear(4).unwrap()).unwrap();
        let v = koksma_szusz_rhs(&pts, 2, 1 << 20).unwrap();
        // Every nonzero frequency below 5 sums to -1 over Z_5^*.
        let expect = 0.5 + (2.0 / 2.0 + 2.0 / 3.0) / 4.0;
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn ks_lattice_only_aliases_count() {
        let pts = UnitPointSet::from_numerators(1, 7, (0..7).collect()).unwrap();
        let v = koksma_szusz_rhs(&pts, 8, 1 << 20).unwrap();
        // c = +-7 alias to 0 and give |sum| = M; other frequencies vanish.
        let expect = 1.0 / 8.0 + 2.0 / 8.0;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn ks_single_point() {
        let pts = UnitPointSet::from_numerators(2, 5, vec![1, 3]).unwrap();
        let v = koksma_szusz_rhs(&pts, 3, 1 << 20).unwrap();
        let w: f64 = (-3i32..=3).map(|c| 1.0 / (1.0 + c.abs() as f64)).sum();
        assert!((v - (1.0 / 3.0 + w * w - 1.0)).abs() < 1e-12);
    }
}
