//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use orbitlab::{FFElem, FieldCtx, UnitPointSet};
use rand::Rng;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn primes_naive(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime_naive(n)).collect()
}

/// Multiplicative order of `g` mod `ell` by repeated multiplication.
pub fn order_naive(g: u64, ell: u64) -> Option<u64> {
    if ell == 1 {
        return Some(1);
    }
    if gcd(g % ell, ell) != 1 {
        return None;
    }
    let mut x = g % ell;
    let mut k = 1;
    while x != 1 {
        x = x * g % ell;
        k += 1;
    }
    Some(k)
}

pub fn phi_naive(ell: u64) -> u64 {
    (1..=ell).filter(|&x| gcd(x, ell) == 1).count() as u64
}

/// Order of a field element by repeated multiplication.
pub fn elem_order(ctx: &FieldCtx, a: &FFElem) -> u64 {
    let mut x = a.clone();
    let mut k = 1;
    while x != ctx.one() {
        x = ctx.mul(&x, a);
        k += 1;
    }
    k
}

/// Count of points in `[lo, hi]` (closed) or `(lo, hi)` (open) boxes, on the exact numerators.
pub fn count_box(pts: &UnitPointSet, lo: &[f64], hi: &[f64], closed: bool) -> u64 {
    let den = pts.denominator() as f64;
    pts.iter()
        .filter(|p| {
            p.iter().enumerate().all(|(j, &a)| {
                let u = a as f64 / den;
                if closed {
                    lo[j] <= u && u <= hi[j]
                } else {
                    lo[j] < u && u < hi[j]
                }
            })
        })
        .count() as u64
}

/// Largest deviation over `trials` random boxes, each tried closed and open.
/// Faces are drawn from a mixture of uniform reals and the points' own
/// coordinates so that near-critical boxes actually occur.
pub fn brute_random_boxes<R: Rng>(pts: &UnitPointSet, trials: usize, rng: &mut R) -> f64 {
    let n = pts.dim();
    let m = pts.len() as f64;
    let den = pts.denominator() as f64;
    let mut best: f64 = 0.0;
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for _ in 0..trials {
        for j in 0..n {
            let draw = |rng: &mut R| match rng.random_range(0..4) {
                0 => rng.random::<f64>(),
                1 => pts.point(rng.random_range(0..pts.len()))[j] as f64 / den,
                2 => 0.0,
                _ => 1.0,
            };
            let (a, b) = (draw(rng), draw(rng));
            lo[j] = a.min(b);
            hi[j] = a.max(b);
        }
        let vol: f64 = (0..n).map(|j| hi[j] - lo[j]).product();
        for closed in [true, false] {
            let c = count_box(pts, &lo, &hi, closed) as f64;
            best = best.max((c / m - vol).abs());
        }
    }
    best
}

/// Exhaustive maximum over every box with faces in `{0, 1} ∪ coordinates`
/// and every open/closed choice per face. Counts come from prefix sums over
/// a half-step code grid (code `2i` on candidate `i`, `2i + 1` between).
/// Supports `n <= 2`.
pub fn critical_box_oracle(pts: &UnitPointSet) -> f64 {
    let n = pts.dim();
    assert!(n == 1 || n == 2);
    let den = pts.denominator();
    let m = pts.len() as f64;
    let cands: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut c: Vec<u64> = pts.iter().map(|p| p[j]).chain([0, den]).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let sx = 2 * cands[0].len() - 1;
    let sy = if n == 2 { 2 * cands[1].len() - 1 } else { 1 };
    // pre[x][y] = points with code_x < x and code_y < y
    let mut pre = vec![vec![0i64; sy + 1]; sx + 1];
    for p in pts.iter() {
        let cx = 2 * cands[0].binary_search(&p[0]).unwrap();
        let cy = if n == 2 { 2 * cands[1].binary_search(&p[1]).unwrap() } else { 0 };
        pre[cx + 1][cy + 1] += 1;
    }
    for x in 1..=sx {
        for y in 1..=sy {
            pre[x][y] += pre[x - 1][y] + pre[x][y - 1] - pre[x - 1][y - 1];
        }
    }
    let count = |x0: usize, x1: usize, y0: usize, y1: usize| -> i64 {
        if x0 > x1 || y0 > y1 {
            return 0;
        }
        pre[x1 + 1][y1 + 1] - pre[x0][y1 + 1] - pre[x1 + 1][y0] + pre[x0][y0]
    };
    // Code range of an interval from candidate a to candidate b, faces closed or open.
    let range = |a: usize, b: usize, lo_closed: bool, hi_closed: bool| -> Option<(usize, usize)> {
        let lo = if lo_closed { 2 * a } else { 2 * a + 1 };
        let hi = if hi_closed { 2 * b } else { (2 * b).checked_sub(1)? };
        (lo <= hi).then_some((lo, hi))
    };
    let flags = [(true, true), (true, false), (false, true), (false, false)];
    let mut best: f64 = 0.0;
    let kx = cands[0].len();
    let ky = if n == 2 { cands[1].len() } else { 1 };
    for a in 0..kx {
        for b in a..kx {
            let wx = (cands[0][b] - cands[0][a]) as f64 / den as f64;
            for &(lc, hc) in &flags {
                let rx = range(a, b, lc, hc);
                for c in 0..ky {
                    for d in c..ky {
                        let wy = if n == 2 { (cands[1][d] - cands[1][c]) as f64 / den as f64 } else { 1.0 };
                        for &(lc2, hc2) in if n == 2 { &flags[..] } else { &flags[..1] } {
                            let ry = if n == 2 { range(c, d, lc2, hc2) } else { Some((0, 0)) };
                            let k = match (rx, ry) {
                                (Some((x0, x1)), Some((y0, y1))) => count(x0, x1, y0, y1),
                                _ => 0,
                            };
                            best = best.max((k as f64 / m - wx * wy).abs());
                        }
                    }
                }
            }
        }
    }
    best
}

pub fn random_point_set<R: Rng>(rng: &mut R, dim: usize, max_len: usize) -> UnitPointSet {
    let den = [5u64, 7, 8, 11, 16, 31, 97][rng.random_range(0..7)];
    let len = rng.random_range(1..=max_len);
    let nums = (0..len * dim).map(|_| rng.random_range(0..den)).collect();
    UnitPointSet::from_numerators(dim, den, nums).unwrap()
}
