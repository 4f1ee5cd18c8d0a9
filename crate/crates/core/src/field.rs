//! Exact arithmetic in `F_p` and `F_{p^n}`.
//!
//! Elements are stored in the polynomial basis `1, x, ..., x^{n-1}` of the
//! chosen modulus. Orbit coordinates live in the power basis
//! `1, theta, ..., theta^{n-1}` of the primitive root and are recovered either
//! as traces against the dual basis or through the change-of-basis matrix;
//! both are precomputed at construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nt::{self, FactorMap};

/// Field element in the polynomial basis, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FFElem {
    coeffs: Vec<u64>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration `sum c_i p^i`.
    pub fn index(&self, p: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }
}

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    n: usize,
    /// Monic modulus, constant term first, length `n + 1`.
    modulus: Vec<u64>,
    theta: FFElem,
    dual_basis: Vec<FFElem>,
    group_order: u64,
    group_factors: FactorMap,
    seed: u64,
    /// `Tr(x^k)` for `k < n`.
    trace_of_monomial: Vec<u64>,
    /// Columns are `theta^j` in the polynomial basis.
    power_basis: Vec<Vec<u64>>,
    /// Row `j` maps polynomial coefficients to the `theta^j` coordinate.
    coord_rows: Vec<Vec<u64>>,
}

impl FieldCtx {
    /// Builds the canonical context for `F_{p^n}`: smallest monic irreducible
    /// modulus and smallest primitive root in the enumeration `sum c_i p^i`.
    pub fn build(p: u64, n: usize, seed: u64) -> Result<Self> {
        Self::build_with_budget(p, n, seed, crate::Limits::default().factor_budget)
    }

    pub fn build_with_budget(p: u64, n: usize, seed: u64, factor_budget: u64) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        let size = field_size(p, n)?;
        let modulus = smallest_irreducible(p, n);
        let group_order = size - 1;
        let group_factors = nt::factorize(group_order, factor_budget)?;
        let mut ctx = FieldCtx {
            p,
            n,
            modulus,
            theta: FFElem { coeffs: vec![0; n] },
            dual_basis: Vec::new(),
            group_order,
            group_factors,
            seed,
            trace_of_monomial: Vec::new(),
            power_basis: Vec::new(),
            coord_rows: Vec::new(),
        };
        ctx.trace_of_monomial = (0..n)
            .map(|k| {
                let mut e = vec![0; n];
                e[k] = 1;
                ctx.trace(&FFElem { coeffs: e })
            })
            .collect();
        let theta = (1..size)
            .map(|i| ctx.elem_from_index(i))
            .find(|a| ctx.is_primitive(a))
            .expect("a cyclic group always has a generator");
        ctx.set_theta(theta)?;
        Ok(ctx)
    }

    /// Same field and modulus, different primitive root.
    pub fn with_theta(&self, theta: FFElem) -> Result<Self> {
        let mut ctx = self.clone();
        ctx.set_theta(theta)?;
        Ok(ctx)
    }

    fn set_theta(&mut self, theta: FFElem) -> Result<()> {
        self.check(&theta)?;
        if !self.is_primitive(&theta) {
            return Err(Error::invalid("theta is not a primitive root"));
        }
        let n = self.n;
        let p = self.p;
        let mut powers = Vec::with_capacity(2 * n);
        let mut cur = self.one();
        for _ in 0..2 * n {
            powers.push(cur.clone());
            cur = self.mul(&cur, &theta);
        }
        let power_basis: Vec<Vec<u64>> = powers[..n].iter().map(|a| a.coeffs.clone()).collect();
        // Gram matrix T_ij = Tr(theta^{i+j}); its inverse gives the dual basis.
        let gram: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| self.trace_linear(&powers[i + j])).collect())
            .collect();
        let gram_inv = mat_inverse(&gram, p).expect("trace form is nondegenerate");
        let dual_basis: Vec<FFElem> = gram_inv
            .iter()
            .map(|row| {
                let mut c = vec![0u64; n];
                for (k, &w) in row.iter().enumerate() {
                    for (ci, &b) in c.iter_mut().zip(&power_basis[k]) {
                        *ci = (*ci + nt::mul_mod(w, b, p)) % p;
                    }
                }
                FFElem { coeffs: c }
            })
            .collect();
        let coord_rows: Vec<Vec<u64>> = dual_basis
            .iter()
            .map(|w| {
                (0..n)
                    .map(|k| {
                        let mut xk = vec![0; n];
                        xk[k] = 1;
                        self.trace_linear(&self.mul(w, &FFElem { coeffs: xk }))
                    })
                    .collect()
            })
            .collect();
        self.theta = theta;
        self.dual_basis = dual_basis;
        self.power_basis = power_basis;
        self.coord_rows = coord_rows;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn theta(&self) -> &FFElem {
        &self.theta
    }

    pub fn dual_basis(&self) -> &[FFElem] {
        &self.dual_basis
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn group_factors(&self) -> &FactorMap {
        &self.group_factors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn size(&self) -> u64 {
        self.group_order + 1
    }

    /// `theta^j` in the polynomial basis, for `j < n`.
    pub fn power_basis(&self) -> &[Vec<u64>] {
        &self.power_basis
    }

    pub fn elem(&self, coeffs: Vec<u64>) -> Result<FFElem> {
        let a = FFElem { coeffs };
        self.check(&a)?;
        Ok(a)
    }

    pub fn zero(&self) -> FFElem {
        FFElem { coeffs: vec![0; self.n] }
    }

    pub fn one(&self) -> FFElem {
        let mut c = vec![0; self.n];
        c[0] = 1;
        FFElem { coeffs: c }
    }

    /// Inverse of [`FFElem::index`]: `i < p^n`.
    pub fn elem_from_index(&self, mut i: u64) -> FFElem {
        let coeffs = (0..self.n)
            .map(|_| {
                let c = i % self.p;
                i /= self.p;
                c
            })
            .collect();
        FFElem { coeffs }
    }

    pub fn check(&self, a: &FFElem) -> Result<()> {
        if a.coeffs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.coeffs.len() });
        }
        if let Some(&c) = a.coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::invalid(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        Ok(())
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.p).collect();
        FFElem { coeffs }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FFElem { coeffs }
    }

    pub fn scale(&self, a: &FFElem, s: u64) -> FFElem {
        let s = s % self.p;
        let coeffs = a.coeffs.iter().map(|&x| nt::mul_mod(x, s, self.p)).collect();
        FFElem { coeffs }
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let n = self.n;
        let p = self.p;
        if n == 1 {
            return FFElem { coeffs: vec![nt::mul_mod(a.coeffs[0], b.coeffs[0], p)] };
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        reduce(&mut prod, &self.modulus, p);
        prod.truncate(n);
        FFElem { coeffs: prod }
    }

    pub fn pow(&self, a: &FFElem, mut exp: u64) -> FFElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `theta^m` with `m` reduced modulo the group order.
    pub fn theta_pow(&self, m: u64) -> FFElem {
        self.pow(&self.theta, m % self.group_order)
    }

    pub fn is_primitive(&self, a: &FFElem) -> bool {
        if a.is_zero() {
            return false;
        }
        let q = self.group_order;
        self.pow(a, q) == self.one()
            && self.group_factors.primes().all(|r| self.pow(a, q / r) != self.one())
    }

    /// All primitive roots, as powers `theta^x` with `gcd(x, p^n - 1) = 1`, in increasing `x`.
    pub fn primitive_roots(&self) -> Vec<FFElem> {
        let q = self.group_order;
        let mut out = Vec::new();
        let mut cur = self.one();
        for x in 1..=q {
            cur = self.mul(&cur, &self.theta);
            if nt::gcd(x, q) == 1 {
                out.push(cur.clone());
            }
        }
        out
    }

    /// `sum_{k<n} alpha^{p^k}`, evaluated through Frobenius powers.
    pub fn trace(&self, a: &FFElem) -> u64 {
        let mut acc = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.n {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, self.p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace must lie in F_p");
        acc.coeffs[0]
    }

    /// Trace through the precomputed linear functional; agrees with [`FieldCtx::trace`].
    pub fn trace_linear(&self, a: &FFElem) -> u64 {
        a.coeffs
            .iter()
            .zip(&self.trace_of_monomial)
            .fold(0, |acc, (&c, &t)| (acc + nt::mul_mod(c, t, self.p)) % self.p)
    }

    /// `a_{j,m} = Tr(omega_j theta^m)`.
    pub fn coordinate(&self, j: usize, m: u64) -> Result<u64> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, bound: self.n });
        }
        let t = self.theta_pow(m);
        Ok(self.trace_linear(&self.mul(&self.dual_basis[j], &t)))
    }

    /// Coordinates of `a` in the basis `1, theta, ..., theta^{n-1}`.
    pub fn power_coords(&self, a: &FFElem) -> Vec<u64> {
        self.coord_rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&a.coeffs)
                    .fold(0, |acc, (&r, &c)| (acc + nt::mul_mod(r, c, self.p)) % self.p)
            })
            .collect()
    }
}

fn field_size(p: u64, n: usize) -> Result<u64> {
    u32::try_from(n)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&s| s <= 1 << 40)
        .ok_or_else(|| Error::invalid(format!("field size {p}^{n} too large")))
}

// Reduces `poly` in place modulo the monic `modulus`.
fn reduce(poly: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let n = modulus.len() - 1;
    while poly.len() > n {
        let lead = poly.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let off = poly.len() - n;
        for (k, &m) in modulus[..n].iter().enumerate() {
            let sub = lead * m % p;
            poly[off + k] = (poly[off + k] + p - sub) % p;
        }
    }
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    reduce(&mut prod, modulus, p);
    trim(&mut prod);
    prod
}

fn poly_powmod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = nt::pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let lead = r[r.len() - 1] * inv % p;
        let off = r.len() - 1 - db;
        for (k, &c) in b.iter().enumerate() {
            r[off + k] = (r[off + k] + p - lead * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or test: `f` of degree `n` is irreducible iff `gcd(f, x^{p^i} - x) = 1` for `i <= n/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 0..n / 2 {
        frob = poly_powmod(&frob, p, f, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut low = vec![0u64; n];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // Next coefficient vector in the order sum c_i p^i.
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < n, "irreducible polynomials of every degree exist");
        }
    }
}

fn mat_inverse(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = nt::pow_mod(a[col][col], p - 2, p);
        for v in a[col].iter_mut() {
            *v = nt::mul_mod(*v, inv, p);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (v, &pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v = (*v + p - nt::mul_mod(f, pv, p)) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
