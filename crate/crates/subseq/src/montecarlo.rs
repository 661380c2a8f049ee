//! Seeded sampling of random word pairs, the empirical law of the k-long
//! match count, and Kolmogorov-distance comparison against the standard
//! normal — the machinery for checking asymptotic normality numerically.
//!
//! Reproducibility contract: every random quantity is a pure function of
//! `(seed, stream_index)`. The 64-bit seed is expanded by SplitMix64 into a
//! 256-bit ChaCha8 key; the stream index selects one of 2⁶⁴ independent
//! ChaCha8 streams under that key. Replica `i` of a simulation uses stream
//! `base + i`, so results never depend on how replicas are scheduled across
//! threads.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::count_levels_generic;
use crate::error::{Error, Result};
use crate::moments::{expected_count_k, Dist};
use crate::seq::Sequence;
use crate::{BigCount, ExactRational};

/// One reproducible random stream: ChaCha8 keyed by a SplitMix64 expansion of
/// the 64-bit seed, positioned on the given stream index.
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_exact_mut(8) {
            // SplitMix64 step (Steele–Lea–Flood constants)
            s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            chunk.copy_from_slice(&z.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_index);
        Self {
            rng,
            seed,
            stream_index,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Unbiased uniform draw from `0..bound` (multiply-shift with rejection).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let mut x = self.next_u64();
        let mut m = (x as u128) * (bound as u128);
        let mut lo = m as u64;
        if lo < bound {
            let threshold = bound.wrapping_neg() % bound;
            while lo < threshold {
                x = self.next_u64();
                m = (x as u128) * (bound as u128);
                lo = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Unbiased uniform draw from `0..bound` for arbitrary-width bounds
    /// (fixed-width draws, rejection above the bound).
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "bound must be positive");
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_mask: u64 = if bits.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (bits % 64)) - 1
        };
        loop {
            let mut v = BigUint::zero();
            for w in 0..words {
                let mut word = self.next_u64();
                if w + 1 == words {
                    word &= top_mask;
                }
                v |= BigUint::from(word) << (64 * w as u64);
            }
            if &v < bound {
                return v;
            }
        }
    }
}

/// Precomputed integer-weight form of a distribution: symbol `i` has exact
/// probability `weight_i / total`, so one uniform draw from `0..total`
/// inverted through the cumulative weights samples the law exactly.
enum Sampler {
    Uniform(u64),
    Weighted { cum: Vec<u64>, total: u64 },
    WeightedBig { cum: Vec<BigUint>, total: BigUint },
}

impl Sampler {
    fn new(dist: &Dist) -> Result<Self> {
        match dist {
            Dist::Uniform(a) => {
                if *a == 0 {
                    return Err(Error::InvalidArgument(
                        "alphabet size must be positive".into(),
                    ));
                }
                Ok(Sampler::Uniform(*a as u64))
            }
            Dist::Probs(p) => {
                let denom = p
                    .probs()
                    .iter()
                    .fold(BigUint::one(), |acc, q| acc.lcm(q.denom().magnitude()));
                let mut cum = Vec::with_capacity(p.probs().len());
                let mut running = BigUint::zero();
                for q in p.probs() {
                    let w = q.numer().magnitude() * (&denom / q.denom().magnitude());
                    running += w;
                    cum.push(running.clone());
                }
                debug_assert_eq!(running, denom, "weights must sum to the denominator");
                match denom.to_u64() {
                    Some(total) => Ok(Sampler::Weighted {
                        cum: cum.iter().map(|c| c.to_u64().unwrap()).collect(),
                        total,
                    }),
                    None => Ok(Sampler::WeightedBig { cum, total: denom }),
                }
            }
        }
    }

    fn draw(&self, rng: &mut RngStream) -> u32 {
        match self {
            Sampler::Uniform(a) => rng.below(*a) as u32,
            Sampler::Weighted { cum, total } => {
                let r = rng.below(*total);
                cum.partition_point(|c| *c <= r) as u32
            }
            Sampler::WeightedBig { cum, total } => {
                let r = rng.below_big(total);
                cum.partition_point(|c| *c <= r) as u32
            }
        }
    }
}

/// `n` i.i.d. symbols from `dist`, drawn from the given stream. Non-uniform
/// laws are inverted exactly: probabilities are put over a common integer
/// denominator and one uniform integer draw per symbol picks the bucket.
pub fn sample_word(n: u64, dist: &Dist, rng: &mut RngStream) -> Result<Sequence> {
    let sampler = Sampler::new(dist)?;
    let alphabet = dist.support_size()?;
    Ok(sample_word_with(n, &sampler, alphabet, rng))
}

fn sample_word_with(n: u64, sampler: &Sampler, alphabet: u32, rng: &mut RngStream) -> Sequence {
    let symbols: Vec<u32> = (0..n).map(|_| sampler.draw(rng)).collect();
    Sequence::new(symbols, alphabet).expect("sampled symbols lie in the alphabet")
}

/// Standard normal CDF `Φ(x)`, evaluated as `erfc(-x/√2)/2` through libm's
/// complementary error function (absolute error well under 10⁻¹²).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov distance between the empirical CDF of `samples` and `Φ`:
/// after sorting, `max_i max(|i/N − Φ(x_i)|, |(i−1)/N − Φ(x_i)|)`.
pub fn kolmogorov_distance(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument(
            "kolmogorov_distance needs at least one sample".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = normal_cdf(x);
        let hi = ((i + 1) as f64 / n - phi).abs();
        let lo = (i as f64 / n - phi).abs();
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// One bin of a standardized-sample histogram: half-open `[lo, hi)`, except
/// the last bin which closes at the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Empirical summary of `num_samples` draws of the k-long match count.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub n: u64,
    pub k: u64,
    pub dist: Dist,
    pub num_samples: u64,
    pub seed: u64,
    pub sample_mean: f64,
    /// Unbiased (length − 1 denominator) sample variance.
    pub sample_variance: f64,
    /// Kolmogorov distance between the standardized empirical law and Φ.
    pub kolmogorov_distance: f64,
    pub histogram: Vec<HistogramBin>,
    /// Exact mean `C(n,k)² q^k` for reference.
    pub theoretical_mean: ExactRational,
}

const HISTOGRAM_BINS: usize = 20;

/// One sampled count, kept exact: the narrow path covers everything the CLT
/// suite touches, the wide path keeps correctness for huge inputs.
enum SampledCount {
    Narrow(u128),
    Wide(BigCount),
}

fn sample_count(
    n: u64,
    k: u64,
    sampler: &Sampler,
    alphabet: u32,
    seed: u64,
    stream: u64,
) -> SampledCount {
    let mut rng = RngStream::new(seed, stream);
    let x = sample_word_with(n, sampler, alphabet, &mut rng);
    let y = sample_word_with(n, sampler, alphabet, &mut rng);
    let k = k as usize;
    if k > x.len().min(y.len()) {
        return SampledCount::Narrow(0);
    }
    match count_levels_generic::<u128>(&x, &y, k) {
        Some(levels) => SampledCount::Narrow(levels[k - 1]),
        None => {
            let levels =
                count_levels_generic::<BigCount>(&x, &y, k).expect("big counts cannot overflow");
            SampledCount::Wide(levels[k - 1].clone())
        }
    }
}

/// Convert exact counts to `f64` offsets from an integer shift `m` (chosen as
/// the floor of the theoretical mean when any count exceeds 2⁵³, zero
/// otherwise, so that standardized values never lose low-order digits to
/// rounding of a huge common magnitude).
fn counts_to_offsets(counts: &[SampledCount], theoretical_mean: &ExactRational) -> (Vec<f64>, f64) {
    let exceeds = counts.iter().any(|c| match c {
        SampledCount::Narrow(v) => *v > (1u128 << 53),
        SampledCount::Wide(_) => true,
    });
    if !exceeds {
        let vals = counts
            .iter()
            .map(|c| match c {
                SampledCount::Narrow(v) => *v as f64,
                SampledCount::Wide(_) => unreachable!(),
            })
            .collect();
        return (vals, 0.0);
    }
    let shift: BigInt = theoretical_mean.floor().to_integer();
    let shift_f = shift
        .to_f64()
        .expect("theoretical mean is finite in double range for feasible n");
    let vals = counts
        .iter()
        .map(|c| {
            let v: BigInt = match c {
                SampledCount::Narrow(v) => BigInt::from(*v),
                SampledCount::Wide(v) => BigInt::from(v.clone()),
            };
            let d = v - &shift;
            d.to_f64().expect("offset from the mean fits a double")
        })
        .collect();
    (vals, shift_f)
}

fn simulate_with_base(
    n: u64,
    k: u64,
    dist: &Dist,
    num_samples: u64,
    seed: u64,
    parallelism: usize,
    stream_base: u64,
) -> Result<SimulationReport> {
    if num_samples < 2 {
        return Err(Error::InvalidArgument(
            "num_samples must be at least 2".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if parallelism == 0 {
        return Err(Error::InvalidArgument(
            "parallelism must be at least 1".into(),
        ));
    }
    let theoretical_mean = expected_count_k(n, k, dist)?;
    let sampler = Sampler::new(dist)?;
    let alphabet = dist.support_size()?;

    let total = num_samples as usize;
    let workers = parallelism.min(total);
    let mut counts: Vec<SampledCount> = Vec::with_capacity(total);
    if workers == 1 {
        for i in 0..num_samples {
            counts.push(sample_count(n, k, &sampler, alphabet, seed, stream_base + i));
        }
    } else {
        let chunk = total.div_ceil(workers);
        let mut parts: Vec<Vec<SampledCount>> = Vec::with_capacity(workers);
        std::thread::scope(|scope| {
            let sampler = &sampler;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = w * chunk;
                    let hi = ((w + 1) * chunk).min(total);
                    scope.spawn(move || {
                        (lo..hi)
                            .map(|i| {
                                sample_count(n, k, sampler, alphabet, seed, stream_base + i as u64)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                parts.push(h.join().expect("sampling worker panicked"));
            }
        });
        // index order: parts were spawned over consecutive ranges
        for p in parts {
            counts.extend(p);
        }
    }

    let (offsets, shift) = counts_to_offsets(&counts, &theoretical_mean);
    let nf = offsets.len() as f64;
    let mean_off = offsets.iter().sum::<f64>() / nf;
    let variance = offsets.iter().map(|v| (v - mean_off).powi(2)).sum::<f64>() / (nf - 1.0);
    if variance == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    let sd = variance.sqrt();
    let standardized: Vec<f64> = offsets.iter().map(|v| (v - mean_off) / sd).collect();
    let d_k = kolmogorov_distance(&standardized)?;

    let lo = standardized.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = standardized
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    let mut bins: Vec<HistogramBin> = (0..HISTOGRAM_BINS)
        .map(|b| HistogramBin {
            lo: lo + b as f64 * width,
            hi: if b + 1 == HISTOGRAM_BINS {
                hi
            } else {
                lo + (b + 1) as f64 * width
            },
            count: 0,
        })
        .collect();
    for &z in &standardized {
        let idx = (((z - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
        bins[idx].count += 1;
    }

    Ok(SimulationReport {
        n,
        k,
        dist: dist.clone(),
        num_samples,
        seed,
        sample_mean: shift + mean_off,
        sample_variance: variance,
        kolmogorov_distance: d_k,
        histogram: bins,
        theoretical_mean,
    })
}

/// Draw `num_samples` independent word pairs, count k-long embedding pairs in
/// each, and report the standardized empirical law's distance to the normal.
/// Deterministic in `(seed, num_samples)` at any parallelism: replica `i`
/// always uses stream `i`, and results merge in replica order.
pub fn simulate(
    n: u64,
    k: u64,
    dist: &Dist,
    num_samples: u64,
    seed: u64,
    parallelism: usize,
) -> Result<SimulationReport> {
    simulate_with_base(n, k, dist, num_samples, seed, parallelism, 0)
}

/// One `simulate` run per entry of a strictly increasing `n_list`, with
/// disjoint stream ranges per run (run `j` owns streams `j·2³² ..`), returning
/// `(n, d_K)` pairs for trend inspection.
pub fn clt_trend(
    n_list: &[u64],
    k: u64,
    dist: &Dist,
    num_samples: u64,
    seed: u64,
) -> Result<Vec<(u64, f64)>> {
    if n_list.len() < 2 {
        return Err(Error::InvalidArgument(
            "n_list must contain at least two lengths".into(),
        ));
    }
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "n_list must be strictly increasing".into(),
        ));
    }
    if num_samples >= 1 << 32 {
        return Err(Error::InvalidArgument(
            "num_samples must stay below 2^32 so per-run stream ranges stay disjoint".into(),
        ));
    }
    let parallelism = std::thread::available_parallelism().map_or(1, |p| p.get());
    n_list
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let base = (j as u64) << 32;
            let report = simulate_with_base(n, k, dist, num_samples, seed, parallelism, base)?;
            Ok((n, report.kolmogorov_distance))
        })
        .collect()
}
