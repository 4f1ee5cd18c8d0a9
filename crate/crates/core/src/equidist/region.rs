use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::UnitPointSet;

use super::mc::{self, UniformSampler};

/// Membership tests for regions whose volume is only known by sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Predicate {
    /// `sum_i u_i <= level`.
    Simplex { level: f64 },
    /// Ball intersected with the unit cube; the ball may stick out.
    ClippedBall { center: Vec<f64>, radius: f64 },
    /// `normal . u <= offset`.
    Halfspace { normal: Vec<f64>, offset: f64 },
}

impl Predicate {
    pub fn contains(&self, u: &[f64]) -> bool {
        match self {
            Predicate::Simplex { level } => u.iter().sum::<f64>() <= *level,
            Predicate::ClippedBall { center, radius } => {
                dist2(u, center) <= radius * radius
            }
            Predicate::Halfspace { normal, offset } => {
                normal.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() <= *offset
            }
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Predicate::Simplex { .. } => None,
            Predicate::ClippedBall { center, .. } => Some(center.len()),
            Predicate::Halfspace { normal, .. } => Some(normal.len()),
        }
    }
}

/// Region as accepted on the command line:
/// `{"kind":"box","lo":[..],"hi":[..]}`, `{"kind":"ball","center":[..],"radius":r}`,
/// `{"kind":"mc","dim":n,"predicate":{..},"samples":N,"seed":s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionSpec {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Mc { dim: usize, predicate: Predicate, samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionKind {
    /// Half-open box `prod [lo_i, hi_i)`.
    AxisBox { lo: Vec<f64>, hi: Vec<f64> },
    /// Closed ball lying inside the cube.
    Ball { center: Vec<f64>, radius: f64 },
    MonteCarlo { predicate: Predicate, samples: u64, seed: u64, std_error: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    kind: RegionKind,
    dim: usize,
    volume: f64,
}

impl Region {
    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        let ok = lo.iter().zip(&hi).all(|(&a, &b)| (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && a <= b);
        if !ok {
            return Err(Error::invalid("box needs 0 <= lo <= hi <= 1 in every coordinate"));
        }
        let volume = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let dim = lo.len();
        Ok(Region { kind: RegionKind::AxisBox { lo, hi }, dim, volume })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius >= 0.0) {
            return Err(Error::invalid("ball needs a center and a nonnegative radius"));
        }
        if center.iter().any(|&c| c - radius < 0.0 || c + radius > 1.0) {
            return Err(Error::invalid("ball must lie inside the unit cube; use an mc region"));
        }
        let dim = center.len();
        let volume = ball_volume(dim, radius);
        Ok(Region { kind: RegionKind::Ball { center, radius }, dim, volume })
    }

    /// Estimates the volume with `samples` uniform draws from `seed`.
    pub fn monte_carlo(dim: usize, predicate: Predicate, samples: u64, seed: u64) -> Result<Self> {
        if dim == 0 || samples == 0 {
            return Err(Error::invalid("mc region needs dim >= 1 and samples >= 1"));
        }
        if let Some(d) = predicate.dim().filter(|&d| d != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: d });
        }
        let hits = mc::count_hits(dim, samples, seed, |u, _| predicate.contains(u));
        let (volume, std_error) = mc::proportion(hits, samples);
        Ok(Region { kind: RegionKind::MonteCarlo { predicate, samples, seed, std_error }, dim, volume })
    }

    pub fn from_spec(spec: RegionSpec) -> Result<Self> {
        match spec {
            RegionSpec::Box { lo, hi } => Self::axis_box(lo, hi),
            RegionSpec::Ball { center, radius } => Self::ball(center, radius),
            RegionSpec::Mc { dim, predicate, samples, seed } => Self::monte_carlo(dim, predicate, samples, seed),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(serde_json::from_str(text)?)
    }

    pub fn unit_cube(dim: usize) -> Self {
        Self::axis_box(vec![0.0; dim], vec![1.0; dim]).expect("valid cube")
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Standard error of the volume; zero for closed-form regions.
    pub fn volume_std_error(&self) -> f64 {
        match &self.kind {
            RegionKind::MonteCarlo { std_error, .. } => *std_error,
            _ => 0.0,
        }
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        match &self.kind {
            RegionKind::AxisBox { lo, hi } => {
                u.iter().zip(lo.iter().zip(hi)).all(|(&x, (&a, &b))| a <= x && x < b)
            }
            RegionKind::Ball { center, radius } => dist2(u, center) <= radius * radius,
            RegionKind::MonteCarlo { predicate, .. } => predicate.contains(u),
        }
    }

    /// Exact count for boxes and balls; predicate evaluation for sampled regions.
    pub fn count(&self, pts: &UnitPointSet) -> Result<u64> {
        if pts.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: pts.dim() });
        }
        let den = pts.denominator();
        let count = match &self.kind {
            RegionKind::AxisBox { lo, hi } => {
                let bounds: Vec<(u64, u64)> =
                    lo.iter().zip(hi).map(|(&a, &b)| (ceil_scaled(a, den), ceil_scaled(b, den))).collect();
                pts.iter()
                    .filter(|pt| pt.iter().zip(&bounds).all(|(&x, &(a, b))| a <= x && x < b))
                    .count()
            }
            RegionKind::Ball { center, radius } => {
                let exact = ExactBall::new(center, *radius);
                pts.iter().filter(|pt| exact.contains(pt, den)).count()
            }
            RegionKind::MonteCarlo { predicate, .. } => {
                let d = den as f64;
                pts.iter()
                    .filter(|pt| {
                        let u: Vec<f64> = pt.iter().map(|&a| a as f64 / d).collect();
                        predicate.contains(&u)
                    })
                    .count()
            }
        };
        Ok(count as u64)
    }

    /// Distance from `u` to the region (zero inside), exact for boxes and balls.
    pub(crate) fn distance_outside(&self, u: &[f64], eps: f64, rng: &mut UniformSampler) -> Option<f64> {
        match &self.kind {
            RegionKind::AxisBox { lo, hi } => Some(
                u.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(&x, (&a, &b))| (a - x).max(x - b).max(0.0).powi(2))
                    .sum::<f64>()
                    .sqrt(),
            ),
            RegionKind::Ball { center, radius } => Some((dist2(u, center).sqrt() - radius).max(0.0)),
            RegionKind::MonteCarlo { predicate, .. } => {
                probe(u, eps, rng, |v| in_cube(v) && predicate.contains(v)).then_some(0.0)
            }
        }
    }

    /// Distance from a point of the region to `[0,1]^n \ region`; `None` if that set is empty.
    pub(crate) fn distance_to_complement(&self, u: &[f64], eps: f64, rng: &mut UniformSampler) -> Option<f64> {
        match &self.kind {
            RegionKind::AxisBox { lo, hi } => {
                let mut best = f64::INFINITY;
                for (&x, (&a, &b)) in u.iter().zip(lo.iter().zip(hi)) {
                    if a > 0.0 {
                        best = best.min(x - a);
                    }
                    if b < 1.0 {
                        best = best.min(b - x);
                    }
                }
                best.is_finite().then_some(best.max(0.0))
            }
            RegionKind::Ball { center, radius } => Some((radius - dist2(u, center).sqrt()).max(0.0)),
            RegionKind::MonteCarlo { predicate, .. } => {
                probe(u, eps, rng, |v| in_cube(v) && !predicate.contains(v)).then_some(0.0)
            }
        }
    }
}

fn in_cube(v: &[f64]) -> bool {
    v.iter().all(|x| (0.0..=1.0).contains(x))
}

// Looks for a point satisfying `hit` within distance `eps` of `u`, along the
// coordinate axes and a few random directions.
fn probe(u: &[f64], eps: f64, rng: &mut UniformSampler, hit: impl Fn(&[f64]) -> bool) -> bool {
    const RADII: [f64; 4] = [0.25, 0.5, 0.75, 0.999];
    const RANDOM_DIRS: usize = 8;
    let n = u.len();
    let mut v = vec![0.0; n];
    let mut try_dir = |d: &[f64]| {
        RADII.iter().any(|&t| {
            for ((vi, &ui), &di) in v.iter_mut().zip(u).zip(d) {
                *vi = ui + t * eps * di;
            }
            hit(&v)
        })
    };
    for axis in 0..n {
        for sign in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[axis] = sign;
            if try_dir(&d) {
                return true;
            }
        }
    }
    for _ in 0..RANDOM_DIRS {
        let mut d: Vec<f64> = (0..n).map(|_| rng.rng().random::<f64>() * 2.0 - 1.0).collect();
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|x| *x /= norm);
        if try_dir(&d) {
            return true;
        }
    }
    false
}

fn dist2(u: &[f64], c: &[f64]) -> f64 {
    u.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Volume of the `dim`-ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    // V_0 = 1, V_1 = 2r, V_n = V_{n-2} * 2 pi r^2 / n
    let mut v = [1.0, 2.0 * r];
    if dim < 2 {
        return v[dim];
    }
    for k in 2..=dim {
        v[k % 2] *= 2.0 * PI * r * r / k as f64;
    }
    v[dim % 2]
}

/// Smallest integer `a` with `a >= x * den`, computed exactly.
fn ceil_scaled(x: f64, den: u64) -> u64 {
    let r = BigRational::from_float(x).expect("finite");
    let scaled = r * BigRational::from_integer(BigInt::from(den));
    scaled.ceil().to_integer().to_u64().unwrap_or(0)
}

/// Ball membership for rational points: a fast float check, with exact
/// rational arithmetic when the point is within rounding distance of the sphere.
struct ExactBall<'a> {
    center: &'a [f64],
    radius: f64,
}

impl<'a> ExactBall<'a> {
    fn new(center: &'a [f64], radius: f64) -> Self {
        ExactBall { center, radius }
    }

    fn contains(&self, pt: &[u64], den: u64) -> bool {
        let d = den as f64;
        let u: Vec<f64> = pt.iter().map(|&a| a as f64 / d).collect();
        let gap = dist2(&u, self.center) - self.radius * self.radius;
        if gap.abs() > 1e-9 {
            return gap < 0.0;
        }
        let den_r = BigRational::from_integer(BigInt::from(den));
        let mut acc = BigRational::zero();
        for (&a, &c) in pt.iter().zip(self.center) {
            let diff = BigRational::from_integer(BigInt::from(a)) / &den_r - BigRational::from_float(c).unwrap();
            acc += &diff * &diff;
        }
        let r = BigRational::from_float(self.radius).unwrap();
        acc <= &r * &r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_specs() {
        let b = Region::from_json(r#"{"kind":"box","lo":[0,0.25],"hi":[0.5,1]}"#).unwrap();
        assert!((b.volume() - 0.375).abs() < 1e-15);
        let c = Region::from_json(r#"{"kind":"ball","center":[0.5,0.5],"radius":0.25}"#).unwrap();
        assert!((c.volume() - PI / 16.0).abs() < 1e-15);
        let m = Region::from_json(
            r#"{"kind":"mc","dim":2,"predicate":{"type":"simplex","level":1.0},"samples":200000,"seed":3}"#,
        )
        .unwrap();
        assert!((m.volume() - 0.5).abs() < 4.0 * m.volume_std_error());
    }

    #[test]
    fn invalid_regions() {
        assert!(Region::axis_box(vec![0.6], vec![0.5]).is_err());
        assert!(Region::axis_box(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Region::ball(vec![0.1, 0.5], 0.2).is_err());
        assert!(Region::from_json(r#"{"kind":"torus"}"#).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1, 0.3) - 0.6).abs() < 1e-15);
        assert!((ball_volume(2, 0.5) - PI / 4.0).abs() < 1e-15);
        assert!((ball_volume(3, 1.0) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(4, 1.0) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_box_edges() {
        // 0.3 is not exactly representable; 3/10 must still be inside [0.3, 0.7).
        let pts = UnitPointSet::from_numerators(1, 10, vec![2, 3, 6, 7]).unwrap();
        let b = Region::axis_box(vec![0.3], vec![0.7]).unwrap();
        assert_eq!(b.count(&pts).unwrap(), 2);
    }

    #[test]
    fn exact_ball_boundary() {
        // Points exactly on the circle of radius 1/4 belong to the closed ball.
        let pts = UnitPointSet::from_numerators(2, 8, vec![6, 4, 4, 6, 7, 4, 3, 3]).unwrap();
        let b = Region::ball(vec![0.5, 0.5], 0.25).unwrap();
        let expected = pts
            .iter()
            .filter(|p| {
                let (dx, dy) = (p[0] as i64 - 4, p[1] as i64 - 4);
                dx * dx + dy * dy <= 4
            })
            .count() as u64;
        assert_eq!(expected, 3);
        assert_eq!(b.count(&pts).unwrap(), expected);
    }

    #[test]
    fn dimension_mismatch() {
        let pts = UnitPointSet::from_numerators(2, 5, vec![1, 2]).unwrap();
        let b = Region::unit_cube(1);
        assert!(matches!(b.count(&pts), Err(Error::DimensionMismatch { .. })));
    }
}
