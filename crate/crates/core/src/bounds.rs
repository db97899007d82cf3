//! Closed-form quantities from the occupancy and length analysis.
//!
//! The occupancy sequence `β_i` and the phase index `i*(n)` are computed
//! exactly. Length bounds keep only the leading terms; comparisons against
//! measured tours apply [`DEFAULT_SLACK`].

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::bead::bead_width;
use crate::dubins::Rho;
use crate::error::{Error, Result};
use crate::tiling::{build_tiling, Environment};

/// Multiplicative slack for comparing measured lengths with leading-order
/// bounds.
pub const DEFAULT_SLACK: f64 = 1.25;

/// `β_i = 2^{1−i}`.
pub fn beta(i: i64) -> Result<BigRational> {
    if i < 1 {
        return Err(Error::InvalidPhase(i));
    }
    Ok(BigRational::new(
        BigInt::one(),
        BigInt::one() << ((i - 1) as usize),
    ))
}

/// Right-hand side of `β_{i+1} = 2^{i−2} β_i²`.
pub fn beta_recursion(i: i64) -> Result<BigRational> {
    let b = beta(i)?;
    let scale = if i >= 2 {
        BigRational::from_integer(BigInt::one() << ((i - 2) as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2))
    };
    Ok(scale * &b * &b)
}

/// Whether `6 · 2^k · log₂ n ≤ n`.
fn istar_holds(n: u64, k: i64) -> bool {
    // q = n / (6 · 2^k) as an exact fraction num/den
    let (num, den) = if k >= 0 {
        (BigUint::from(n), BigUint::from(6u32) << (k as usize))
    } else {
        (BigUint::from(n) << ((-k) as usize), BigUint::from(6u32))
    };
    let a = BigUint::from(n.ilog2());
    // log₂ n ∈ [a, a + 1), with equality only for powers of two
    if num < &a * &den {
        return false;
    }
    if num >= (&a + 1u32) * &den {
        return true;
    }
    if n.is_power_of_two() {
        return true;
    }
    // a < q < a + 1 and log₂ n is irrational: compare den·log₂ n with num
    let q = ratio_to_f64(&num, &den);
    let margin = (n as f64).log2() - q;
    if margin.abs() > 1e-9 * q.max(1.0) {
        return margin < 0.0;
    }
    // n^den ≤ 2^num, exactly
    let den_small: u32 = den
        .try_into()
        .expect("denominator in the near-tie band is small");
    let lhs = BigUint::from(n).pow(den_small);
    let shift = u64::try_from(&num).expect("numerator in the near-tie band is small");
    let rhs = BigUint::one() << shift as usize;
    lhs <= rhs
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(60);
    let n = (num >> shift).to_u64_digits().first().copied().unwrap_or(0) as f64;
    let d = (den >> shift).to_u64_digits().first().copied().unwrap_or(0) as f64;
    n / d
}

/// `i*(n) = ⌊log₂ n − log₂ log₂ n − log₂ 6⌋`: the largest integer `k` with
/// `6 · 2^k · log₂ n ≤ n`.
pub fn istar(n: u64) -> Result<i64> {
    if n < 2 {
        return Err(Error::IstarDomain(n));
    }
    let x = n as f64;
    let mut k = (x.log2() - x.log2().log2() - 6f64.log2()).floor() as i64;
    while !istar_holds(n, k) {
        k -= 1;
    }
    while istar_holds(n, k + 1) {
        k += 1;
    }
    Ok(k)
}

/// Inputs for the per-phase length bounds of odd phase `2j − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub width: f64,
    pub height: f64,
    pub rho: Rho,
    pub n: usize,
    /// Bead half-length.
    pub l: f64,
    pub j: u32,
}

impl BoundInputs {
    /// Inputs with the half-length of the tiling for `n` targets.
    pub fn for_instance(env: Environment, rho: Rho, n: usize, j: u32) -> Result<Self> {
        let grid = build_tiling(env, n, rho)?;
        Ok(Self::with_half_length(env, rho, n, grid.l, j))
    }

    pub fn with_half_length(env: Environment, rho: Rho, n: usize, l: f64, j: u32) -> Self {
        Self {
            width: env.width,
            height: env.height,
            rho,
            n,
            l,
            j,
        }
    }

    /// `c_1 = W / ∛(ρWH)`.
    pub fn c1(&self) -> f64 {
        self.width / (self.rho.get() * self.width * self.height).cbrt()
    }

    fn w(&self) -> f64 {
        bead_width(self.l, self.rho).expect("half-length within (0, 2ρ]")
    }

    fn pow2(&self, shift: i32) -> f64 {
        2f64.powi(self.j as i32 + shift)
    }
}

/// `⌈W / (2^j l)⌉`.
pub fn beads_per_pass(b: &BoundInputs) -> u64 {
    (b.width / (b.pow2(0) * b.l)).ceil() as u64
}

/// `2^{j−1} · 2l · (c_1 n^{1/3} / 2^j + 1)`.
pub fn pass_length_bound(b: &BoundInputs) -> f64 {
    let n13 = (b.n as f64).cbrt();
    b.pow2(-1) * 2.0 * b.l * (b.c1() * n13 / b.pow2(0) + 1.0)
}

/// `7πρ/3 + 2^{j−2} w(l)`.
pub fn uturn_bound(b: &BoundInputs) -> f64 {
    7.0 * PI * b.rho.get() / 3.0 + b.pow2(-2) * b.w()
}

/// `⌈H / (2^{j−2} w(l))⌉`.
pub fn num_passes_bound(b: &BoundInputs) -> u64 {
    (b.height / (b.pow2(-2) * b.w())).ceil() as u64
}

/// Relaxed pass count `ρH / (2^{j−3} l²) + 1`.
pub fn num_passes_relaxed(b: &BoundInputs) -> f64 {
    b.rho.get() * b.height / (b.pow2(-3) * b.l * b.l) + 1.0
}

/// `4(W + Hπρ)`.
pub fn closure_bound(width: f64, height: f64, rho: Rho) -> f64 {
    4.0 * (width + height * PI * rho.get())
}

/// `N_pass · (L_pass + L_uturn) + L_closure` for phase `2j − 1`.
pub fn phase_length_bound(b: &BoundInputs) -> f64 {
    num_passes_bound(b) as f64 * (pass_length_bound(b) + uturn_bound(b))
        + closure_bound(b.width, b.height, b.rho)
}

/// All bound components for one odd phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBound {
    pub j: u32,
    pub phase: u32,
    pub beads_per_pass: u64,
    pub pass_length: f64,
    pub uturn: f64,
    pub num_passes: u64,
    pub num_passes_relaxed: f64,
    pub closure: f64,
    pub total: f64,
}

impl PhaseBound {
    pub fn new(b: &BoundInputs) -> Self {
        Self {
            j: b.j,
            phase: 2 * b.j - 1,
            beads_per_pass: beads_per_pass(b),
            pass_length: pass_length_bound(b),
            uturn: uturn_bound(b),
            num_passes: num_passes_bound(b),
            num_passes_relaxed: num_passes_relaxed(b),
            closure: closure_bound(b.width, b.height, b.rho),
            total: phase_length_bound(b),
        }
    }
}

/// Bounds for every odd phase of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub l: f64,
    pub c1: f64,
    pub rows: Vec<PhaseBound>,
}

impl BoundTable {
    /// `Σ_j L_{2j−1}`.
    pub fn odd_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.total).sum()
    }

    /// `3 · Σ_j L_{2j−1}`, which bounds the length of all phases.
    pub fn total(&self) -> f64 {
        3.0 * self.odd_sum()
    }

    pub fn row(&self, phase: u32) -> Option<&PhaseBound> {
        self.rows.iter().find(|r| r.phase == phase)
    }
}

/// Largest `j` with an odd phase `2j − 1` among `⌊log₂ n⌋ + 1` phases.
pub fn max_odd_j(n: usize) -> u32 {
    (n.max(1).ilog2() + 1).div_ceil(2)
}

pub fn odd_phase_bounds(env: Environment, rho: Rho, n: usize) -> Result<BoundTable> {
    let grid = build_tiling(env, n, rho)?;
    let rows = (1..=max_odd_j(n))
        .map(|j| PhaseBound::new(&BoundInputs::with_half_length(env, rho, n, grid.l, j)))
        .collect();
    let c1 = BoundInputs::with_half_length(env, rho, n, grid.l, 1).c1();
    Ok(BoundTable {
        l: grid.l,
        c1,
        rows,
    })
}

/// `β_i · n` as a float, for reporting.
pub fn beta_times(i: i64, n: usize) -> Result<f64> {
    let b = beta(i)? * BigRational::from_integer(BigInt::from(n));
    Ok(ratio_to_f64(
        &b.numer().magnitude().clone(),
        &b.denom().magnitude().clone(),
    ))
}

/// Whether `v ≤ β_i n`, exactly.
pub fn within_beta(i: i64, n: usize, v: usize) -> Result<bool> {
    let rhs = beta(i)? * BigRational::from_integer(BigInt::from(n));
    let lhs = BigRational::from_integer(BigInt::from(v));
    Ok(lhs <= rhs)
}
