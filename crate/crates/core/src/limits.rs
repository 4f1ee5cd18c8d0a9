//! Effort caps for the enumeration-heavy experiments.
//!
//! Defaults can be overridden as a whole through `ORBITLAB_MAX_ENUM`, which
//! replaces every enumeration cap by the given value. `ORBITLAB_FACTOR_BUDGET`
//! sets the Pollard-rho iteration budget.

use std::env;

pub const MAX_ENUM_ENV: &str = "ORBITLAB_MAX_ENUM";
pub const FACTOR_BUDGET_ENV: &str = "ORBITLAB_FACTOR_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order `p^n - 1` for the full-orbit lattice check.
    pub lattice: u128,
    /// Largest field size `p^n` for enumerating every nonzero gamma.
    pub gamma_enum: u128,
    /// Largest `(2L+1)^n * M` work for the Koksma-Szusz sum.
    pub ks_work: u128,
    /// Largest field size `p^n` for averaging over all primitive roots.
    pub prim_root_enum: u128,
    /// Largest bound for the arithmetic sieve.
    pub sieve: u128,
    /// Largest number of points for exact box discrepancy.
    pub exact_points: u128,
    /// Largest number of grid boxes times points in grid mode.
    pub grid_work: u128,
    /// Largest modulus for simulating a single residue orbit.
    pub orbit_modulus: u128,
    /// Pollard-rho iteration budget per attempt.
    pub factor_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            lattice: 1_000_000,
            gamma_enum: 100_000,
            ks_work: 500_000_000,
            prim_root_enum: 10_000,
            sieve: 10_000_000,
            exact_points: 512,
            grid_work: 2_000_000_000,
            orbit_modulus: 1_000_000_000,
            factor_budget: 1 << 20,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = env::var(MAX_ENUM_ENV).ok().and_then(|v| v.trim().parse::<u128>().ok()) {
            limits.lattice = cap;
            limits.gamma_enum = cap;
            limits.ks_work = cap;
            limits.prim_root_enum = cap;
            limits.sieve = cap;
            limits.grid_work = cap;
            limits.orbit_modulus = cap;
        }
        if let Some(budget) =
            env::var(FACTOR_BUDGET_ENV).ok().and_then(|v| v.trim().parse::<u64>().ok())
        {
            limits.factor_budget = budget;
        }
        limits
    }
}
