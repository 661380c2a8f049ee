//! Exact counting of common-subsequence embedding pairs.
//!
//! An embedding pair of length `k` is a pair of strictly increasing index
//! tuples, one per word, whose letters agree position by position. Three
//! independent engines compute these counts:
//!
//! * a leveled dynamic program over 2-D prefix sums (`count_k`,
//!   `count_by_level`) — Θ(k·n_x·n_y) cell updates, Θ(k·n_y) rolling memory;
//! * a direct quadratic recurrence for the all-length total
//!   (`count_all_direct`) — Θ(n_x·n_y) cells;
//! * a brute-force enumerator transcribing the definition
//!   (`count_k_bruteforce`) — the test oracle, budget-guarded.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedSub, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::seq::Sequence;
use crate::BigCount;

/// Default tuple-pair budget for [`count_k_bruteforce`].
pub const DEFAULT_BRUTEFORCE_BUDGET: u64 = 10_000_000;

/// Scalar in which counts are accumulated. Checked arithmetic lets fixed-width
/// instantiations (`u64`, `u128`) report overflow instead of wrapping; the
/// arbitrary-precision instantiation never overflows.
pub trait CountScalar: Clone + PartialEq + Zero + One + CheckedAdd + CheckedSub {}
impl<T: Clone + PartialEq + Zero + One + CheckedAdd + CheckedSub> CountScalar for T {}

fn check_pair(x: &Sequence, y: &Sequence) -> Result<()> {
    if x.alphabet_size() != y.alphabet_size() {
        return Err(Error::InvalidArgument(format!(
            "sequences must share one alphabet (got sizes {} and {})",
            x.alphabet_size(),
            y.alphabet_size()
        )));
    }
    Ok(())
}

/// Per-level corner values `P_l(n_x, n_y)` for `l = 1..=kmax`, computed in one
/// leveled sweep. `kmax` must not exceed `min(n_x, n_y)`. Returns `None` when
/// the scalar type overflows.
///
/// Level `l` satisfies `P_l(i,j) = P_l(i-1,j) + P_l(i,j-1) - P_l(i-1,j-1) + E_l(i,j)`
/// with `E_l(i,j) = [x_i = y_j] · P_{l-1}(i-1,j-1)` and `P_0 ≡ 1`. One row per
/// level is kept; levels are updated in decreasing order within each row so that
/// level `l-1` still holds row `i-1` when level `l` consumes it. The update is
/// ordered `(P(i-1,j) - P(i-1,j-1)) + P(i,j-1) + E` — the subtracted pair is a
/// column sum of nonnegative terms, so unsigned subtraction cannot underflow.
pub fn count_levels_generic<S: CountScalar>(
    x: &Sequence,
    y: &Sequence,
    kmax: usize,
) -> Option<Vec<S>> {
    let xs = x.symbols();
    let ys = y.symbols();
    let ny = ys.len();
    debug_assert!(kmax <= xs.len().min(ny));

    let mut rows: Vec<Vec<S>> = Vec::with_capacity(kmax + 1);
    rows.push(vec![S::one(); ny + 1]); // level 0: the empty embedding
    for _ in 0..kmax {
        rows.push(vec![S::zero(); ny + 1]);
    }

    for (i, &xi) in xs.iter().enumerate() {
        let i = i + 1;
        for l in (1..=kmax.min(i)).rev() {
            let (lower, upper) = rows.split_at_mut(l);
            let prev = &lower[l - 1]; // still row i-1 of level l-1
            let cur = &mut upper[0];
            let mut diag = S::zero(); // P_l(i-1, j-1), starting at column 0
            for j in 1..=ny {
                let above = cur[j].clone(); // P_l(i-1, j)
                let mut v = above.checked_sub(&diag)?;
                v = v.checked_add(&cur[j - 1])?;
                if xi == ys[j - 1] {
                    v = v.checked_add(&prev[j - 1])?;
                }
                cur[j] = v;
                diag = above;
            }
        }
    }

    Some((1..=kmax).map(|l| rows[l][ny].clone()).collect())
}

/// Number of `k`-long common-subsequence embedding pairs of `x` and `y`.
/// Returns 0 when `k` exceeds either length; `k = 0` is rejected (the counted
/// family is defined for `k ≥ 1`).
pub fn count_k(x: &Sequence, y: &Sequence, k: usize) -> Result<BigCount> {
    check_pair(x, y)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > x.len().min(y.len()) {
        return Ok(BigCount::zero());
    }
    let levels =
        count_levels_generic::<BigUint>(x, y, k).expect("arbitrary precision cannot overflow");
    Ok(levels.into_iter().next_back().unwrap())
}

/// Full per-length profile: entry `l` (1-based) is `count_k(x, y, l)` for
/// `l = 1..=min(n_x, n_y)`, computed in a single leveled sweep.
pub fn count_by_level(x: &Sequence, y: &Sequence) -> Result<Vec<BigCount>> {
    check_pair(x, y)?;
    let kmax = x.len().min(y.len());
    Ok(count_levels_generic::<BigUint>(x, y, kmax)
        .expect("arbitrary precision cannot overflow"))
}

/// Total number of nonempty common-subsequence embedding pairs, summed over
/// all lengths.
pub fn count_all(x: &Sequence, y: &Sequence) -> Result<BigCount> {
    Ok(count_by_level(x, y)?.into_iter().sum())
}

/// Independent engine for the all-length total:
/// `A(i,j) = A(i-1,j) + A(i,j-1) - A(i-1,j-1) + [x_i = y_j]·A(i-1,j-1)` with
/// unit boundary, returning `A(n_x, n_y) - 1` (drop the empty embedding).
/// On match cells the diagonal terms cancel, leaving one addition.
pub fn count_all_direct(x: &Sequence, y: &Sequence) -> Result<BigCount> {
    check_pair(x, y)?;
    let xs = x.symbols();
    let ys = y.symbols();
    let ny = ys.len();

    let mut prev: Vec<BigUint> = vec![BigUint::one(); ny + 1];
    let mut cur: Vec<BigUint> = vec![BigUint::one(); ny + 1];
    for &xi in xs {
        for j in 1..=ny {
            cur[j] = if xi == ys[j - 1] {
                &cur[j - 1] + &prev[j]
            } else {
                // A is nondecreasing in each coordinate, so this cannot underflow.
                &cur[j - 1] - &prev[j - 1] + &prev[j]
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(&prev[ny] - 1u32)
}

/// Enumeration oracle transcribing the definition: walks every pair of
/// strictly increasing `k`-tuples and counts letterwise matches. Refuses
/// (rather than approximates) when `C(n_x,k)·C(n_y,k)` exceeds `budget`.
pub fn count_k_bruteforce(x: &Sequence, y: &Sequence, k: usize, budget: u64) -> Result<BigCount> {
    check_pair(x, y)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let xs = x.symbols();
    let ys = y.symbols();
    if k > xs.len().min(ys.len()) {
        return Ok(BigCount::zero());
    }

    let pairs = num_integer::binomial(BigUint::from(xs.len()), BigUint::from(k))
        * num_integer::binomial(BigUint::from(ys.len()), BigUint::from(k));
    if pairs > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: pairs.to_u128().unwrap_or(u128::MAX),
            budget: budget as u128,
        });
    }

    let mut total: u64 = 0;
    for xi in (0..xs.len()).combinations(k) {
        for yj in (0..ys.len()).combinations(k) {
            if xi.iter().zip(&yj).all(|(&i, &j)| xs[i] == ys[j]) {
                total += 1;
            }
        }
    }
    Ok(BigCount::from(total))
}

/// Full ending/prefix matrices of one DP level, for inspection and testing.
/// `ending_counts[i][j]` counts the level-`level` embeddings whose last matched
/// index pair is exactly `(i, j)`; `prefix_counts[i][j]` counts those lying
/// entirely within the prefixes `x[1..=i]`, `y[1..=j]`.
#[derive(Debug, Clone)]
pub struct LevelTables {
    pub level: usize,
    pub ending_counts: Vec<Vec<BigCount>>,
    pub prefix_counts: Vec<Vec<BigCount>>,
}

impl LevelTables {
    /// Builds the tables for `level` by stepping up from level 1.
    pub fn compute(x: &Sequence, y: &Sequence, level: usize) -> Result<LevelTables> {
        check_pair(x, y)?;
        if level == 0 {
            return Err(Error::InvalidArgument("level must be at least 1".into()));
        }
        let (nx, ny) = (x.len(), y.len());
        // prefix table of the level below; level 0 is identically 1
        let mut below: Vec<Vec<BigUint>> = vec![vec![BigUint::one(); ny + 1]; nx + 1];
        let mut tables = None;
        for l in 1..=level {
            let mut ending = vec![vec![BigUint::zero(); ny + 1]; nx + 1];
            let mut prefix = vec![vec![BigUint::zero(); ny + 1]; nx + 1];
            for i in 1..=nx {
                for j in 1..=ny {
                    if x.symbols()[i - 1] == y.symbols()[j - 1] {
                        ending[i][j] = below[i - 1][j - 1].clone();
                    }
                    prefix[i][j] = &prefix[i - 1][j] + &prefix[i][j - 1] - &prefix[i - 1][j - 1]
                        + &ending[i][j];
                }
            }
            below = prefix.clone();
            tables = Some(LevelTables {
                level: l,
                ending_counts: ending,
                prefix_counts: prefix,
            });
        }
        Ok(tables.unwrap())
    }
}
