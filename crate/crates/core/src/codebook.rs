//! Code sizes, rates and string-length bounds.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frame::TieBreakMode;
use crate::params::CodeParams;
use crate::weights::WeightMap;

/// Table values for q=4, ℓ=2 that are far beyond desk-scale enumeration.
/// Shown for comparison only; nothing here recomputes them.
pub const ALLNODES_REFERENCE_4_2: u64 = 1_296_453_150_720;
pub const TOTAL_FEASIBLE_REFERENCE_4_2: u64 = 1_540_034_496_000;

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n! / (n-k)!`
pub fn falling(n: usize, k: usize) -> BigUint {
    ((n - k + 1) as u64..=n as u64).fold(BigUint::one(), |acc, j| acc * j)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling(n, k) / factorial(k)
}

/// Closed interval around `log2(n)`, `n ≥ 1`.
fn log2_bounds(n: &BigUint) -> (f64, f64) {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_u64().expect("at most 60 bits");
    let lo = (top as f64).log2() + shift as f64;
    let hi = if shift == 0 { lo } else { ((top + 1) as f64).log2() + shift as f64 };
    // f64 log2 is accurate to a few ulps; widen generously.
    let pad = 1e-12 * hi.abs().max(1.0);
    (lo - pad, hi + pad)
}

/// `log2 M / log2 (q^ℓ)!` as a certified interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rate {
    pub lower: f64,
    pub upper: f64,
}

impl Rate {
    pub fn of(size: &BigUint, params: &CodeParams) -> Rate {
        let (nlo, nhi) = log2_bounds(size);
        let (dlo, dhi) = log2_bounds(&factorial(params.edge_count()));
        Rate {
            lower: (nlo / dhi).max(0.0),
            upper: nhi / dlo,
        }
    }

    /// Fixed-point rendering, if the whole interval rounds the same way.
    pub fn render(&self, decimals: usize) -> Option<String> {
        let lo = format!("{:.*}", decimals, self.lower);
        let hi = format!("{:.*}", decimals, self.upper);
        (lo == hi).then_some(lo)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render(3) {
            Some(s) => f.write_str(&s),
            None => write!(f, "[{:.4}, {:.4}]", self.lower, self.upper),
        }
    }
}

/// One row of the size comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeEntry {
    pub size: BigUint,
    pub rate: Rate,
    /// Quoted from the literature, not recomputed.
    pub reference_only: bool,
}

impl SizeEntry {
    fn new(size: BigUint, params: &CodeParams, reference_only: bool) -> Self {
        let rate = Rate::of(&size, params);
        SizeEntry {
            size,
            rate,
            reference_only,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeSizeReport {
    pub q: usize,
    pub ell: usize,
    pub systematic: SizeEntry,
    pub selfloop: SizeEntry,
    pub firstnode: SizeEntry,
    pub prior_work: SizeEntry,
    /// Reference count for the all-nodes construction, not recomputed. At
    /// q = 3, ℓ = 2 the literal all-nodes condition (as in
    /// [`encode_full`](crate::nonsystematic::encode_full)) accepts only 24192
    /// of the 30240 feasible rankings; the reference counts every one.
    pub allnodes_reference: Option<SizeEntry>,
    pub total_feasible_reference: Option<SizeEntry>,
}

/// `(q^ℓ - q^{ℓ-1} + 1)!`
pub fn systematic_size(params: &CodeParams) -> BigUint {
    factorial(params.edge_count() - params.vertex_count() + 1)
}

/// Self-loops ranked freely on top of the loop-free systematic code.
pub fn selfloop_size(params: &CodeParams) -> BigUint {
    let n = params.edge_count();
    let k = n - params.vertex_count() + 1;
    factorial(k - params.q()) * falling(n, params.q())
}

/// `(q^ℓ - q^{ℓ-1} + 2 - q)! · (q-1)/(q+1) · q^ℓ!/(q^ℓ-q)!`
pub fn firstnode_size(params: &CodeParams) -> Result<BigUint> {
    let q = params.q();
    let n = params.edge_count();
    let k = n - params.vertex_count() + 2;
    if k < q {
        return Err(Error::InvalidParams("alphabet too large for this length".into()));
    }
    let num = factorial(k - q) * (q as u64 - 1) * falling(n, q);
    let (quot, rem) = num.div_rem(&BigUint::from(q as u64 + 1));
    if !rem.is_zero() {
        return Err(Error::Invariant("first-node code size is not an integer".into()));
    }
    Ok(quot)
}

/// Size of the earlier recursive construction used for comparison.
pub fn prior_work_size(params: &CodeParams) -> BigUint {
    let q = params.q();
    let mut size = BigUint::from(30240u32);
    for j in 4..=q {
        size *= factorial(j) * binomial(j * j - j + 1, j);
    }
    let qf = factorial(q);
    for i in 3..=params.ell() {
        let exp = q.pow(i as u32 - 1) + q.pow(i as u32 - 3) - 2 * q.pow(i as u32 - 2);
        size *= qf.pow(exp as u32);
    }
    size
}

pub fn code_sizes(params: &CodeParams) -> Result<CodeSizeReport> {
    params.require_encoder_regime()?;
    let entry = |size| SizeEntry::new(size, params, false);
    let reference = |size: u64| SizeEntry::new(BigUint::from(size), params, true);
    let (allnodes, total) = match (params.q(), params.ell()) {
        (3, 2) => (Some(reference(30240)), Some(reference(30240))),
        (4, 2) => (
            Some(reference(ALLNODES_REFERENCE_4_2)),
            Some(reference(TOTAL_FEASIBLE_REFERENCE_4_2)),
        ),
        _ => (None, None),
    };
    Ok(CodeSizeReport {
        q: params.q(),
        ell: params.ell(),
        systematic: entry(systematic_size(params)),
        selfloop: entry(selfloop_size(params)),
        firstnode: entry(firstnode_size(params)?),
        prior_work: entry(prior_work_size(params)),
        allnodes_reference: allnodes,
        total_feasible_reference: total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthBounds {
    /// `q^{5ℓ}`
    pub upper: BigInt,
    /// `⌊(3q^6 + 4q^3)/2⌋`, only for the reverse-edge frame at ℓ = 2.
    pub reverse_edge_upper: Option<BigInt>,
    /// Largest `|wt(e)|` on the Hamiltonian path after balancing.
    pub path_weight: BigInt,
    /// `C(q^ℓ + 1, 2)`: distinct positive weights cannot sum to less.
    pub lower: BigInt,
    /// Largest possible systematic information set, `q^ℓ - q^{ℓ-1} + 1`.
    pub max_systematic_k: usize,
}

impl LengthBounds {
    /// The upper bound that applies to encoder output in `mode`.
    pub fn applicable_upper(&self) -> &BigInt {
        self.reverse_edge_upper.as_ref().unwrap_or(&self.upper)
    }
}

pub fn length_bounds(params: &CodeParams, mode: TieBreakMode) -> LengthBounds {
    let q = BigInt::from(params.q());
    let n = params.edge_count();
    let k = n - params.vertex_count() + 1;
    let reverse_edge_upper = (mode == TieBreakMode::ReverseEdge && params.ell() == 2)
        .then(|| (q.pow(6) * 3u32 + q.pow(3) * 4u32) / 2u32);
    LengthBounds {
        upper: q.pow(5 * params.ell() as u32),
        reverse_edge_upper,
        path_weight: BigInt::from(binomial(k + 1, 2)),
        lower: BigInt::from(binomial(n + 1, 2)),
        max_systematic_k: k,
    }
}

/// Whether `wt(E)` stays within the applicable upper bound.
pub fn verify_length(x: &WeightMap, mode: TieBreakMode) -> bool {
    let bound = length_bounds(x.params(), mode);
    x.total() <= num_rational::BigRational::from_integer(bound.applicable_upper().clone())
}
