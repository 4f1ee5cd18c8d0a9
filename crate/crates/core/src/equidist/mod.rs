//! Counting orbit points in regions, discrepancies, and boundary shells.

mod discrepancy;
mod mc;
mod region;
mod shell;

use rayon::prelude::*;
use serde::Serialize;

pub use discrepancy::{box_discrepancy, DiscrepancyMethod, DiscrepancyMode, DiscrepancyReport};
pub use region::{ball_volume, Predicate, Region, RegionKind, RegionSpec};
pub use shell::{shell_volume, ShellEstimate};

use crate::error::{check_cap, Error, Result};
use crate::field::FieldCtx;
use crate::points::{generate, ExponentSchedule, UnitPointSet};
use crate::Limits;

pub fn count_in_region(pts: &UnitPointSet, omega: &Region) -> Result<u64> {
    omega.count(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    pub count: u64,
    pub expected: f64,
    /// `|count - M vol|`.
    pub raw: f64,
    /// `|count / M - vol|`, the region discrepancy.
    pub normalized: f64,
}

pub fn region_deviation(pts: &UnitPointSet, omega: &Region) -> Result<Deviation> {
    let count = omega.count(pts)?;
    let m = pts.len() as f64;
    let expected = m * omega.volume();
    let raw = (count as f64 - expected).abs();
    Ok(Deviation { count, expected, raw, normalized: if m > 0.0 { raw / m } else { 0.0 } })
}

/// `Delta(U, Omega) / D(U)^{1/n}`: the empirical constant in the region-versus-box
/// discrepancy comparison. Reported, never judged.
pub fn region_box_ratio(region_discrepancy: f64, box_discrepancy: f64, dim: usize) -> f64 {
    if box_discrepancy == 0.0 {
        return 0.0;
    }
    region_discrepancy / box_discrepancy.powf(1.0 / dim as f64)
}

/// Mean of `|N_theta(f; M, Omega) - M vol Omega|` over every primitive root `theta`.
pub fn avg_primitive_root_deviation(
    p: u64,
    n: usize,
    f: &[i64],
    m: u64,
    omega: &Region,
    limits: &Limits,
) -> Result<f64> {
    let base = FieldCtx::build_with_budget(p, n, 0, limits.factor_budget)?;
    check_cap("primitive-root enumeration", u128::from(base.size()), limits.prim_root_enum)?;
    if m > base.group_order() {
        return Err(Error::invalid("M must not exceed p^n - 1"));
    }
    if omega.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: omega.dim() });
    }
    let sched = ExponentSchedule::polynomial(f.to_vec(), m)?;
    let roots = base.primitive_roots();
    let devs: Vec<f64> = roots
        .into_par_iter()
        .map(|theta| {
            let ctx = base.with_theta(theta)?;
            Ok(region_deviation(&generate(&ctx, &sched)?, omega)?.raw)
        })
        .collect::<Result<_>>()?;
    Ok(devs.iter().sum::<f64>() / devs.len() as f64)
}
