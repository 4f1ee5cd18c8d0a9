//! Unit-cube point sets `(1/p) a_{E(m)}`, `m = 1..M`, for the exponent schedules
//! `E(m) = m`, `f(m)`, `m^k` and `e^m`.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::field::{FFElem, FieldCtx};
use crate::nt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleKind {
    Linear,
    /// Integer coefficients, constant term first.
    Polynomial { coeffs: Vec<i64> },
    Monomial { k: u32 },
    Powering { e: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSchedule {
    pub kind: ScheduleKind,
    pub len: u64,
}

impl ExponentSchedule {
    pub fn new(kind: ScheduleKind, len: u64) -> Result<Self> {
        if len < 1 {
            return Err(Error::invalid("schedule length M must be at least 1"));
        }
        match &kind {
            ScheduleKind::Polynomial { coeffs } => {
                if coeffs.iter().skip(1).all(|&c| c == 0) {
                    return Err(Error::invalid("polynomial schedule must be nonconstant"));
                }
            }
            ScheduleKind::Monomial { k } if *k < 1 => {
                return Err(Error::invalid("monomial degree k must be at least 1"))
            }
            ScheduleKind::Powering { e } if *e < 2 => {
                return Err(Error::invalid("powering base e must be at least 2"))
            }
            _ => {}
        }
        Ok(ExponentSchedule { kind, len })
    }

    pub fn linear(len: u64) -> Result<Self> {
        Self::new(ScheduleKind::Linear, len)
    }

    pub fn polynomial(coeffs: Vec<i64>, len: u64) -> Result<Self> {
        Self::new(ScheduleKind::Polynomial { coeffs }, len)
    }

    pub fn monomial(k: u32, len: u64) -> Result<Self> {
        Self::new(ScheduleKind::Monomial { k }, len)
    }

    pub fn powering(e: u64, len: u64) -> Result<Self> {
        Self::new(ScheduleKind::Powering { e }, len)
    }

    /// `E(m)` reduced into `[0, order)`.
    pub fn exponent(&self, m: u64, order: u64) -> u64 {
        match &self.kind {
            ScheduleKind::Linear => m % order,
            ScheduleKind::Polynomial { coeffs } => {
                let q = order as i128;
                let x = (m as i128) % q;
                let v = coeffs.iter().rev().fold(0i128, |acc, &c| (acc * x + c as i128) % q);
                v.rem_euclid(q) as u64
            }
            ScheduleKind::Monomial { k } => nt::pow_mod(m, u64::from(*k), order),
            ScheduleKind::Powering { e } => nt::pow_mod(*e, m, order),
        }
    }
}

impl fmt::Display for ExponentSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScheduleKind::Linear => write!(f, "linear"),
            ScheduleKind::Polynomial { coeffs } => {
                let c: Vec<String> = coeffs.iter().map(i64::to_string).collect();
                write!(f, "poly[{}]", c.join(","))
            }
            ScheduleKind::Monomial { k } => write!(f, "monomial[k={k}]"),
            ScheduleKind::Powering { e } => write!(f, "powering[e={e}]"),
        }
    }
}

/// Points with exact coordinates `num / denominator`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitPointSet {
    dim: usize,
    denominator: u64,
    nums: Vec<u64>,
}

impl UnitPointSet {
    pub fn from_numerators(dim: usize, denominator: u64, nums: Vec<u64>) -> Result<Self> {
        if dim == 0 || denominator == 0 {
            return Err(Error::invalid("dimension and denominator must be positive"));
        }
        if nums.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, found: nums.len() % dim });
        }
        if nums.iter().any(|&a| a >= denominator) {
            return Err(Error::invalid("coordinates must lie in [0, 1)"));
        }
        Ok(UnitPointSet { dim, denominator, nums })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.nums.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u64] {
        &self.nums[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.nums.chunks_exact(self.dim)
    }

    pub fn as_f64(&self, i: usize) -> Vec<f64> {
        let d = self.denominator as f64;
        self.point(i).iter().map(|&a| a as f64 / d).collect()
    }

    /// One row per point, one `num/den` column per coordinate, header `x0,x1,...`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record((0..self.dim).map(|j| format!("x{j}")))?;
        for pt in self.iter() {
            w.write_record(pt.iter().map(|a| format!("{a}/{}", self.denominator)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let dim = r.headers()?.len();
        let mut denominator = None;
        let mut nums = Vec::new();
        for rec in r.records() {
            for field in rec?.iter() {
                let (a, d) = field
                    .split_once('/')
                    .ok_or_else(|| Error::invalid(format!("expected num/den, got {field:?}")))?;
                let a: u64 = a.trim().parse().map_err(|_| Error::invalid("bad numerator"))?;
                let d: u64 = d.trim().parse().map_err(|_| Error::invalid("bad denominator"))?;
                if *denominator.get_or_insert(d) != d {
                    return Err(Error::invalid("mixed denominators"));
                }
                nums.push(a);
            }
        }
        Self::from_numerators(dim, denominator.unwrap_or(1), nums)
    }

    /// JSON form: `{"dim", "denominator", "points": [["a/p", ...], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let pts: Vec<Vec<String>> = self
            .iter()
            .map(|pt| pt.iter().map(|a| format!("{a}/{}", self.denominator)).collect())
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "denominator": self.denominator,
            "points": pts,
        })
    }
}

/// Point `m` (1-indexed) is `(a_{0,E(m)}, ..., a_{n-1,E(m)}) / p`.
pub fn generate(ctx: &FieldCtx, sched: &ExponentSchedule) -> Result<UnitPointSet> {
    if sched.len < 1 {
        return Err(Error::invalid("schedule length M must be at least 1"));
    }
    let order = ctx.group_order();
    let n = ctx.n();
    let len = usize::try_from(sched.len).map_err(|_| Error::invalid("M too large"))?;
    let nums: Vec<u64> = match sched.kind {
        ScheduleKind::Linear => {
            let mut cur = ctx.one();
            let mut out = Vec::with_capacity(len * n);
            for _ in 0..len {
                cur = ctx.mul(&cur, ctx.theta());
                out.extend(ctx.power_coords(&cur));
            }
            out
        }
        _ => (1..=sched.len)
            .into_par_iter()
            .flat_map_iter(|m| ctx.power_coords(&ctx.theta_pow(sched.exponent(m, order))))
            .collect(),
    };
    UnitPointSet::from_numerators(n, ctx.p(), nums)
}

/// Coordinates of the elements `theta^{E(m)}` themselves, for callers that
/// need the field elements rather than points.
pub fn orbit_elements(ctx: &FieldCtx, sched: &ExponentSchedule) -> Vec<FFElem> {
    let order = ctx.group_order();
    (1..=sched.len).map(|m| ctx.theta_pow(sched.exponent(m, order))).collect()
}

/// True iff the full linear orbit visits every nonzero `(1/p)`-lattice point exactly once.
pub fn full_orbit_lattice_check(ctx: &FieldCtx, cap: u128) -> Result<bool> {
    let order = ctx.group_order();
    check_cap("full-orbit lattice", u128::from(order), cap)?;
    let pts = generate(ctx, &ExponentSchedule::linear(order)?)?;
    let mut seen = HashSet::with_capacity(pts.len());
    for pt in pts.iter() {
        if pt.iter().all(|&a| a == 0) || !seen.insert(pt) {
            return Ok(false);
        }
    }
    Ok(seen.len() as u64 == order)
}
