//! Box discrepancy `D(U) = sup_B |#(U cap B)/#U - vol B|`.
//!
//! Exact mode works in integer units of the shared denominator. The supremum
//! of `count - vol` is attained by closed boxes with faces on point
//! coordinates, and the supremum of `vol - count` is approached by open boxes
//! with faces on point coordinates or on the cube faces, so both are scanned
//! over the candidate set `{0, 1} ∪ coordinates`.

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::points::UnitPointSet;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyMethod {
    Exact,
    CriticalGrid,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiscrepancyMode {
    Exact,
    /// Grid boxes with faces on multiples of `resolution`.
    Grid { resolution: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub value: f64,
    pub method: DiscrepancyMethod,
    /// `exact value <= value + error_bound`; zero in exact mode.
    pub error_bound: f64,
    pub points: u64,
    pub dim: usize,
}

pub fn box_discrepancy(pts: &UnitPointSet, mode: DiscrepancyMode, limits: &crate::Limits) -> Result<DiscrepancyReport> {
    if pts.is_empty() {
        return Err(Error::invalid("empty point set"));
    }
    let (value, method, error_bound) = match mode {
        DiscrepancyMode::Exact => {
            if pts.dim() > 2 {
                return Err(Error::CapExceeded { what: "exact discrepancy dimension", size: pts.dim() as u128, cap: 2 });
            }
            check_cap("exact discrepancy points", pts.len() as u128, limits.exact_points)?;
            (exact(pts), DiscrepancyMethod::Exact, 0.0)
        }
        DiscrepancyMode::Grid { resolution } => {
            if !(resolution > 0.0 && resolution <= 1.0) {
                return Err(Error::invalid("grid resolution must lie in (0, 1]"));
            }
            let lines = (1.0 / resolution).ceil() as u64;
            let step = 1.0 / lines as f64;
            let value = grid(pts, lines, limits.grid_work)?;
            (value, DiscrepancyMethod::CriticalGrid, 2.0 * pts.dim() as f64 * step)
        }
    };
    Ok(DiscrepancyReport { value, method, error_bound, points: pts.len() as u64, dim: pts.dim() })
}

fn sorted_candidates(pts: &UnitPointSet, axis: usize) -> Vec<u64> {
    let mut c: Vec<u64> = pts.iter().map(|p| p[axis]).collect();
    c.push(0);
    c.push(pts.denominator());
    c.sort_unstable();
    c.dedup();
    c
}

fn exact(pts: &UnitPointSet) -> f64 {
    let m = pts.len() as i128;
    let den = pts.denominator() as i128;
    let (best, scale) = if pts.dim() == 1 {
        let ys = sorted_candidates(pts, 0);
        let mut counts = vec![0i64; ys.len()];
        for p in pts.iter() {
            counts[ys.binary_search(&p[0]).unwrap()] += 1;
        }
        let (c, o) = scan(&ys, &counts, &counts, den, m);
        (c.max(o), m * den)
    } else {
        let xs = sorted_candidates(pts, 0);
        let ys = sorted_candidates(pts, 1);
        // Points grouped by x candidate, each as a y-candidate index.
        let mut by_x: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
        for p in pts.iter() {
            by_x[xs.binary_search(&p[0]).unwrap()].push(ys.binary_search(&p[1]).unwrap());
        }
        let mut best = i128::MIN;
        let mut closed = vec![0i64; ys.len()];
        let mut open = vec![0i64; ys.len()];
        let zero = vec![0i64; ys.len()];
        for i in 0..xs.len() {
            closed.iter_mut().for_each(|c| *c = 0);
            open.iter_mut().for_each(|c| *c = 0);
            for j in i..xs.len() {
                for &y in &by_x[j] {
                    closed[y] += 1;
                }
                if j > i + 1 {
                    for &y in &by_x[j - 1] {
                        open[y] += 1;
                    }
                }
                let width = (xs[j] - xs[i]) as i128;
                let (c, _) = scan(&ys, &closed, &zero, den * den, m * width);
                best = best.max(c);
                if j > i {
                    let (_, o) = scan(&ys, &zero, &open, den * den, m * width);
                    best = best.max(o);
                }
            }
        }
        (best, m * den * den)
    };
    best.max(0) as f64 / scale as f64
}

/// One-dimensional scan over y-candidates for a fixed strip. With
/// `V = count * count_scale - slope * len`, returns the largest closed-interval
/// `V` and the largest open-interval `-V`.
fn scan(ys: &[u64], closed: &[i64], open: &[i64], count_scale: i128, slope: i128) -> (i128, i128) {
    let mut best_closed = i128::MIN;
    let mut best_open = i128::MIN;
    let mut below_closed = 0i128; // points strictly below ys[k] (closed counts)
    let mut below_open = 0i128;
    let mut min_closed_start = i128::MAX;
    let mut min_open_start = i128::MAX;
    for (k, &y) in ys.iter().enumerate() {
        let y = y as i128;
        // Closed interval [a, b]: count = C<=(b) - C<(a).
        min_closed_start = min_closed_start.min(below_closed * count_scale - slope * y);
        let upto_closed = below_closed + closed[k] as i128;
        best_closed = best_closed.max(upto_closed * count_scale - slope * y - min_closed_start);
        // Open interval (a, b): count = C<(b) - C<=(a), a < b.
        if min_open_start != i128::MAX {
            best_open = best_open.max(slope * y - below_open * count_scale - min_open_start);
        }
        let upto_open = below_open + open[k] as i128;
        min_open_start = min_open_start.min(slope * y - upto_open * count_scale);
        below_closed = upto_closed;
        below_open = upto_open;
    }
    (best_closed, best_open)
}

/// Largest deviation over closed and open boxes with faces on the `1/lines` grid.
fn grid(pts: &UnitPointSet, lines: u64, work_cap: u128) -> Result<f64> {
    let n = pts.dim();
    let side = (2 * lines + 1) as usize;
    let per_dim = u128::from(lines) * u128::from(lines + 1) / 2;
    let boxes = per_dim.checked_pow(n as u32).unwrap_or(u128::MAX);
    check_cap("grid discrepancy boxes", boxes.saturating_mul(1 << n), work_cap)?;
    let cells = side.checked_pow(n as u32).ok_or_else(|| Error::invalid("grid too fine"))?;
    check_cap("grid discrepancy cells", cells as u128, work_cap)?;
    // Half-grid code per coordinate: 2k on line k, 2k+1 strictly between k and k+1.
    let den = pts.denominator() as u128;
    let mut hist = vec![0u64; cells];
    for p in pts.iter() {
        let mut idx = 0usize;
        for &a in p.iter().rev() {
            let scaled = u128::from(a) * u128::from(lines);
            let code = 2 * (scaled / den) as usize + usize::from(scaled % den != 0);
            idx = idx * side + code;
        }
        hist[idx] += 1;
    }
    // Inclusive prefix sums along each axis.
    let mut stride = 1usize;
    for _ in 0..n {
        for i in 0..cells {
            if (i / stride) % side != 0 {
                hist[i] += hist[i - stride];
            }
        }
        stride *= side;
    }
    let m = pts.len() as f64;
    let step = 1.0 / lines as f64;
    let mut best = 0.0f64;
    let mut lo = vec![0u64; n];
    let mut hi = vec![1u64; n];
    loop {
        let vol: f64 = lo.iter().zip(&hi).map(|(&a, &b)| (b - a) as f64 * step).product();
        // Closed: codes 2*lo..=2*hi; open: 2*lo+1..=2*hi-1.
        let closed = box_sum(&hist, side, n, &lo, &hi, false);
        let open = box_sum(&hist, side, n, &lo, &hi, true);
        best = best.max(closed as f64 / m - vol).max(vol - open as f64 / m);
        if !advance(&mut lo, &mut hi, lines) {
            break;
        }
    }
    Ok(best)
}

fn advance(lo: &mut [u64], hi: &mut [u64], lines: u64) -> bool {
    for d in 0..lo.len() {
        if hi[d] < lines {
            hi[d] += 1;
            return true;
        }
        if lo[d] + 1 < lines {
            lo[d] += 1;
            hi[d] = lo[d] + 1;
            return true;
        }
        lo[d] = 0;
        hi[d] = 1;
    }
    false
}

fn box_sum(prefix: &[u64], side: usize, n: usize, lo: &[u64], hi: &[u64], open: bool) -> u64 {
    let bounds: Vec<(i64, i64)> = lo
        .iter()
        .zip(hi)
        .map(|(&a, &b)| {
            let (a, b) = (2 * a as i64, 2 * b as i64);
            if open { (a + 1, b - 1) } else { (a, b) }
        })
        .collect();
    if bounds.iter().any(|&(a, b)| a > b) {
        return 0;
    }
    let mut total = 0i64;
    for corner in 0..(1usize << n) {
        let mut idx = 0usize;
        let mut sign = 1i64;
        let mut skip = false;
        for d in (0..n).rev() {
            let (a, b) = bounds[d];
            let c = if corner >> d & 1 == 1 {
                sign = -sign;
                a - 1
            } else {
                b
            };
            if c < 0 {
                skip = true;
                break;
            }
            idx = idx * side + c as usize;
        }
        if !skip {
            total += sign * prefix[idx] as i64;
        }
    }
    total as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Limits;

    fn d(pts: &UnitPointSet) -> f64 {
        box_discrepancy(pts, DiscrepancyMode::Exact, &Limits::default()).unwrap().value
    }

    #[test]
    fn single_midpoint() {
        // The degenerate closed box [1/2, 1/2] holds the point and has volume 0.
        let pts = UnitPointSet::from_numerators(1, 2, vec![1]).unwrap();
        assert_eq!(d(&pts), 1.0);
    }

    #[test]
    fn equidistant_lattice() {
        for p in [2u64, 5, 7, 13] {
            let pts = UnitPointSet::from_numerators(1, p, (0..p).collect()).unwrap();
            assert!((d(&pts) - 1.0 / p as f64).abs() < 1e-15, "p = {p}");
        }
    }

    #[test]
    fn two_dim_single_point() {
        // A box hugging (1/2,1/2) has volume -> 0 and count 1; the open
        // cube minus lines gives volume 1, count 0.
        let pts = UnitPointSet::from_numerators(2, 2, vec![1, 1]).unwrap();
        assert!((d(&pts) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn caps() {
        let pts = UnitPointSet::from_numerators(3, 5, vec![1, 2, 3]).unwrap();
        assert!(box_discrepancy(&pts, DiscrepancyMode::Exact, &Limits::default()).is_err());
        let big = UnitPointSet::from_numerators(1, 1000, (0..600).collect()).unwrap();
        assert!(matches!(
            box_discrepancy(&big, DiscrepancyMode::Exact, &Limits::default()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn grid_brackets_exact() {
        let pts = UnitPointSet::from_numerators(2, 7, vec![1, 3, 4, 2, 6, 6, 2, 5]).unwrap();
        let exact = d(&pts);
        let g = box_discrepancy(&pts, DiscrepancyMode::Grid { resolution: 1.0 / 14.0 }, &Limits::default()).unwrap();
        assert!(g.value <= exact + 1e-12);
        assert!(exact <= g.value + g.error_bound);
        // Grid lines through every coordinate recover the exact value.
        assert!((g.value - exact).abs() < 1e-12);
    }
}
