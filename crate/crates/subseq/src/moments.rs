//! Exact moments of embedding-pair counts under i.i.d. random words, bounds on
//! the second moment, exhaustive enumeration oracles, and the majorization
//! order on letter distributions.
//!
//! For words of length `n` with letters drawn i.i.d. from a distribution with
//! collision probability `q = Σ p_j²`, the mean count of `k`-long embedding
//! pairs is exactly `C(n,k)² q^k` (each of the `C(n,k)²` tuple pairs matches
//! with probability `q^k`). The uniform alphabet of size `a` has `q = 1/a`.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::count::count_levels_generic;
use crate::error::{Error, Result};
use crate::logspace::{log_sum_exp, ln_gamma, LogReal};
use crate::seq::Sequence;
use crate::ExactRational;

/// Default word-pair budget for [`second_moment_exhaustive`] and
/// [`first_moment_exhaustive`].
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1_000_000;

/// A probability vector over symbols `0..a` with exactly rational entries and
/// a cached collision probability `q = Σ p_j²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<ExactRational>,
    collision: ExactRational,
}

impl ProbVector {
    /// Validates nonnegativity and that the entries sum to exactly 1.
    pub fn new(probs: Vec<ExactRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument(
                "probability vector must be nonempty".into(),
            ));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidArgument(
                "probabilities must be nonnegative".into(),
            ));
        }
        let total: ExactRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!(
                "probabilities must sum to exactly 1 (got {total})"
            )));
        }
        let collision = probs.iter().map(|p| p * p).sum();
        Ok(Self { probs, collision })
    }

    /// The uniform distribution on an alphabet of size `a`.
    pub fn uniform(a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument(
                "alphabet size must be positive".into(),
            ));
        }
        let p = ExactRational::new(BigInt::one(), BigInt::from(a));
        let probs = vec![p; a as usize];
        Self::new(probs)
    }

    pub fn probs(&self) -> &[ExactRational] {
        &self.probs
    }

    /// Collision probability `q = Σ p_j²`, the chance two independent letters
    /// coincide.
    pub fn collision(&self) -> &ExactRational {
        &self.collision
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }
}

/// Letter distribution parameter accepted by the moment and simulation
/// operations: either the uniform alphabet of a given size or an explicit
/// probability vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Dist {
    Uniform(u32),
    Probs(ProbVector),
}

impl Dist {
    /// Collision probability `q` of the distribution.
    pub fn collision(&self) -> Result<ExactRational> {
        match self {
            Dist::Uniform(a) => {
                if *a == 0 {
                    return Err(Error::InvalidArgument(
                        "alphabet size must be positive".into(),
                    ));
                }
                Ok(ExactRational::new(BigInt::one(), BigInt::from(*a)))
            }
            Dist::Probs(p) => Ok(p.collision().clone()),
        }
    }

    pub fn support_size(&self) -> Result<u32> {
        match self {
            Dist::Uniform(a) if *a > 0 => Ok(*a),
            Dist::Uniform(_) => Err(Error::InvalidArgument(
                "alphabet size must be positive".into(),
            )),
            Dist::Probs(p) => Ok(p.support_size() as u32),
        }
    }
}

/// Exact mean number of `k`-long embedding pairs: `C(n,k)² q^k`.
/// Returns 0 when `k > n`; `k = 0` is rejected.
pub fn expected_count_k(n: u64, k: u64, dist: &Dist) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let q = dist.collision()?;
    if k > n {
        return Ok(ExactRational::zero());
    }
    let b = binomial(BigUint::from(n), BigUint::from(k));
    let b2 = ExactRational::from(BigInt::from(b.pow(2)));
    let mut qk = ExactRational::one();
    for _ in 0..k {
        qk *= &q;
    }
    Ok(b2 * qk)
}

/// Exact mean of the all-length total: `Σ_{k=1}^n C(n,k)² q^k`.
pub fn expected_total(n: u64, dist: &Dist) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let q = dist.collision()?;
    // term_k = C(n,k)² q^k, stepped by term_{k+1}/term_k = ((n-k)/(k+1))² q
    let mut term = ExactRational::from(BigInt::from(n * n)) * &q;
    let mut total = term.clone();
    for k in 1..n {
        let ratio = ExactRational::new(BigInt::from(n - k), BigInt::from(k + 1));
        term *= &ratio * &ratio * &q;
        total += &term;
    }
    Ok(total)
}

/// Two-sided exact bracket for the second moment of the `k`-long count under
/// the uniform alphabet of size `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentBounds {
    pub lower: ExactRational,
    pub upper: ExactRational,
}

/// Exact bounds `C(n,k)⁴ a^{-2k} ≤ E[T²] ≤ C(n,k)² a^{-k} Σ_{j=0}^k
/// C(n-k,j)² C(n-j,k-j)² a^{-j}` (uniform letters only). The lower bound is
/// the squared mean.
pub fn second_moment_bounds(n: u64, k: u64, a: u32) -> Result<MomentBounds> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k <= n (got k={k}, n={n})"
        )));
    }
    if a == 0 {
        return Err(Error::InvalidArgument(
            "alphabet size must be positive".into(),
        ));
    }
    let a_big = BigUint::from(a);
    let bnk = binomial(BigUint::from(n), BigUint::from(k));
    let lower = ExactRational::new(
        BigInt::from(bnk.pow(4)),
        BigInt::from(a_big.pow(2 * k as u32)),
    );

    let mut sum = ExactRational::zero();
    for j in 0..=k {
        let c1 = binomial(BigUint::from(n - k), BigUint::from(j));
        let c2 = binomial(BigUint::from(n - j), BigUint::from(k - j));
        sum += ExactRational::new(
            BigInt::from(c1.pow(2) * c2.pow(2)),
            BigInt::from(a_big.pow(j as u32)),
        );
    }
    let upper =
        ExactRational::new(BigInt::from(bnk.pow(2)), BigInt::from(a_big.pow(k as u32))) * sum;
    debug_assert!(lower <= upper);
    Ok(MomentBounds { lower, upper })
}

fn exhaustive_moment(n: u64, k: u64, a: u32, budget: u64, power: u32) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if a == 0 {
        return Err(Error::InvalidArgument(
            "alphabet size must be positive".into(),
        ));
    }
    let pairs = BigUint::from(a).pow(2 * n as u32);
    if pairs > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: pairs.to_u128().unwrap_or(u128::MAX),
            budget: budget as u128,
        });
    }

    let mut sum = BigUint::zero();
    let mut wx = vec![0u32; n as usize];
    loop {
        let x = Sequence::new(wx.clone(), a)?;
        let mut wy = vec![0u32; n as usize];
        loop {
            let y = Sequence::new(wy.clone(), a)?;
            let t = if k > n {
                BigUint::zero()
            } else {
                match count_levels_generic::<u128>(&x, &y, k as usize) {
                    Some(levels) => BigUint::from(*levels.last().unwrap()),
                    None => count_levels_generic::<BigUint>(&x, &y, k as usize)
                        .unwrap()
                        .pop()
                        .unwrap(),
                }
            };
            sum += t.pow(power);
            if !next_word(&mut wy, a) {
                break;
            }
        }
        if !next_word(&mut wx, a) {
            break;
        }
    }
    Ok(ExactRational::new(BigInt::from(sum), BigInt::from(pairs)))
}

/// Exact `E[T²]` for the `k`-long count by full enumeration of all `a^{2n}`
/// word pairs (uniform letters). Refuses when the pair count exceeds `budget`.
pub fn second_moment_exhaustive(n: u64, k: u64, a: u32, budget: u64) -> Result<ExactRational> {
    exhaustive_moment(n, k, a, budget, 2)
}

/// Exact `E[T]` by the same enumeration — the ground-truth check for the
/// closed-form mean.
pub fn first_moment_exhaustive(n: u64, k: u64, a: u32, budget: u64) -> Result<ExactRational> {
    exhaustive_moment(n, k, a, budget, 1)
}

/// Advances a base-`a` word through all values; false when it wraps to zero.
fn next_word(word: &mut [u32], a: u32) -> bool {
    for d in word.iter_mut() {
        *d += 1;
        if *d < a {
            return true;
        }
        *d = 0;
    }
    false
}

/// Majorization test: `p` majorizes `q` iff, after sorting both descending,
/// every partial sum of `p` dominates that of `q`. Shorter vectors are padded
/// with zeros.
pub fn majorizes(p: &ProbVector, q: &ProbVector) -> bool {
    let len = p.probs.len().max(q.probs.len());
    let sorted_desc = |v: &ProbVector| {
        let mut s = v.probs.clone();
        s.resize(len, ExactRational::zero());
        s.sort_by(|a, b| b.cmp(a));
        s
    };
    let ps = sorted_desc(p);
    let qs = sorted_desc(q);
    let mut sum_p = ExactRational::zero();
    let mut sum_q = ExactRational::zero();
    for (a, b) in ps.iter().zip(&qs) {
        sum_p += a;
        sum_q += b;
        if sum_p < sum_q {
            return false;
        }
    }
    true
}

/// Side selector for [`bound_asymptote`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

/// Log-space leading term of the second-moment bounds as `n → ∞` at fixed
/// `k, a`: lower `n^{4k}/((k!)⁴ a^{2k})`; upper
/// `(1/((k!)² a^k)) Σ_{j=0}^k 1/((j!)² ((k-j)!)² a^j) · n^{4k}`.
pub fn bound_asymptote(n: u64, k: u64, a: u32, which: BoundSide) -> Result<LogReal> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k <= n (got k={k}, n={n})"
        )));
    }
    if a == 0 {
        return Err(Error::InvalidArgument(
            "alphabet size must be positive".into(),
        ));
    }
    let (nf, kf, af) = (n as f64, k as f64, a as f64);
    let ln = match which {
        BoundSide::Lower => {
            4.0 * kf * nf.ln() - 4.0 * ln_gamma(kf + 1.0) - 2.0 * kf * af.ln()
        }
        BoundSide::Upper => {
            let terms: Vec<f64> = (0..=k)
                .map(|j| {
                    let jf = j as f64;
                    -2.0 * ln_gamma(jf + 1.0) - 2.0 * ln_gamma(kf - jf + 1.0) - jf * af.ln()
                })
                .collect();
            let coeff = log_sum_exp(&terms).ln().unwrap();
            4.0 * kf * nf.ln() - 2.0 * ln_gamma(kf + 1.0) - kf * af.ln() + coeff
        }
    };
    Ok(LogReal::from_ln(ln))
}
