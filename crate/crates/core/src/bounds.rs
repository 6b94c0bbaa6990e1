//! Counting bounds for q-matroids, exact where possible and in base-2
//! log scale where the quantities are doubly exponential.
//!
//! The lower bounds count pavings and are exact big integers: the number of
//! q-matroids on F_q^n is at least 2^(q^((n-k)(k-1))), and the functions here
//! return that base-2 exponent q^((n-k)(k-1)) exactly. The upper bounds count
//! representable q-matroids and live in log scale as [`LogValue`]s, fixed-point
//! reals with 96 binary digits after the point. All arithmetic is integer
//! arithmetic, so every result is bit-for-bit reproducible across runs and
//! platforms; the documented accuracy contract is a relative error of at most
//! 1e-12, with a very large margin in practice.
//!
//! The two transcendental constants that appear in the exponents were
//! evaluated once to well over thirty significant digits and are pinned as
//! decimal literals. Everything else (binary logs of integers, log-scale
//! sums) is computed on demand by digit extraction and square-root chains.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Binary digits kept after the point in a [`LogValue`].
const FRAC_BITS: usize = 96;

/// Working precision for digit extraction and the square-root chain.
/// Twice `FRAC_BITS`, so truncation noise stays below the last kept digit.
const WORK_BITS: usize = 192;

/// Largest exponent accepted when materialising q^e as an exact integer.
const EXPONENT_CEILING: u64 = 1_000_000;

/// log2(e), pinned.
const LOG2_E: &str = "1.442695040888963407359924681001892137426645954152985934135";

/// log2(111/32), pinned. 111/32 is the constant from the Gaussian binomial
/// sandwich: the product of (1 - q^-i)^-1 over i >= 1 is below 111/32 for
/// every q >= 2.
const LOG2_111_32: &str = "1.794415866350105963311543121560992008521239377364669109207";

/// A real number in fixed-point binary, used as the base-2 logarithm of some
/// (usually astronomically large) positive count.
///
/// Internally `units / 2^96`. Comparisons, addition, and subtraction are
/// exact; scaling by a rational and log-scale summation round once to the
/// grid, so errors stay within a few units of 2^-96.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LogValue {
    units: BigInt,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue { units: BigInt::zero() }
    }

    /// Exact embedding of an integer, e.g. a lower-bound exponent.
    pub fn from_integer(v: &BigUint) -> Self {
        LogValue { units: BigInt::from(v.clone()) << FRAC_BITS }
    }

    /// log2 of a positive integer. Exact for powers of two.
    pub fn log2_of(m: u64) -> Self {
        assert!(m >= 1, "log2 of a nonpositive integer");
        LogValue { units: log2_core(&BigUint::from(m), 0) }
    }

    /// Parses a pinned positive decimal literal. Rounds once to the grid.
    fn from_decimal(s: &str) -> Self {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits: BigUint = format!("{int}{frac}").parse().expect("pinned literal");
        let den = BigUint::from(10u32).pow(frac.len() as u32);
        LogValue { units: div_round(&(BigInt::from(digits) << FRAC_BITS), &BigInt::from(den)) }
    }

    /// Multiplies by the exact rational num/den, rounding once.
    pub fn scale(&self, num: u128, den: u128) -> Self {
        assert!(den > 0);
        let n = &self.units * BigInt::from(num);
        LogValue { units: div_round(&n, &BigInt::from(den)) }
    }

    /// log2 of the sum of the represented values: log2(sum_i 2^(t_i)).
    ///
    /// Terms more than 70 binary orders of magnitude below the maximum are
    /// dropped; they sit far beneath the accuracy contract.
    pub fn log2_sum(terms: &[LogValue]) -> LogValue {
        assert!(!terms.is_empty());
        let amax = terms.iter().max().expect("nonempty").units.clone();
        let mut total = BigUint::zero();
        for t in terms {
            total += exp2_neg(&(&t.units - &amax));
        }
        LogValue { units: amax + log2_core(&total, WORK_BITS) }
    }

    pub fn to_f64(&self) -> f64 {
        self.units.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(FRAC_BITS as i32)
    }

    /// Fixed-point decimal rendering with `dp` digits after the point,
    /// rounding half away from zero. Deterministic; used for CSV output.
    pub fn to_decimal(&self, dp: usize) -> String {
        let scaled = &self.units * BigInt::from(10u32).pow(dp as u32);
        let r = div_round(&scaled, &(BigInt::one() << FRAC_BITS));
        let sign = if r.is_negative() { "-" } else { "" };
        let abs = r.magnitude().clone();
        if dp == 0 {
            return format!("{sign}{abs}");
        }
        let (ip, fp) = abs.div_rem(&BigUint::from(10u32).pow(dp as u32));
        format!("{sign}{ip}.{fp:0>dp$}")
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue({})", self.to_decimal(18))
    }
}

impl std::ops::Add for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        LogValue { units: &self.units + &rhs.units }
    }
}

impl std::ops::Sub for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        LogValue { units: &self.units - &rhs.units }
    }
}

/// Rounds num/den to the nearest integer, halves away from zero. den > 0.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let two_num = num << 1usize;
    let adj = if num.is_negative() { &two_num - den } else { &two_num + den };
    adj / (den << 1usize)
}

/// log2 of x / 2^in_frac (x > 0), returned in units of 2^-96.
///
/// Classic digit extraction: normalise the mantissa into [1, 2) at working
/// precision, then repeatedly square; each overflow past 2 yields one bit of
/// the fraction. 96 extracted bits at 192 working bits keeps the truncation
/// noise below 2^-95.
fn log2_core(x: &BigUint, in_frac: usize) -> BigInt {
    assert!(!x.is_zero());
    let bits = x.bits() as usize;
    let int_part = bits as i64 - 1 - in_frac as i64;
    let mut m = (x << WORK_BITS) >> (bits - 1);
    let overflow = BigUint::one() << (WORK_BITS + 1);
    let mut frac = BigInt::zero();
    for _ in 0..FRAC_BITS {
        m = (&m * &m) >> WORK_BITS;
        frac <<= 1;
        if m >= overflow {
            m >>= 1;
            frac += 1;
        }
    }
    (BigInt::from(int_part) << FRAC_BITS) + frac
}

/// The chain s_j = 2^(2^-(j+1)) at working precision, built once by repeated
/// integer square roots of 2.
fn sqrt_chain() -> &'static Vec<BigUint> {
    static CHAIN: OnceLock<Vec<BigUint>> = OnceLock::new();
    CHAIN.get_or_init(|| {
        let mut chain = Vec::with_capacity(FRAC_BITS);
        let mut cur = BigUint::one() << (2 * WORK_BITS + 1);
        for _ in 0..FRAC_BITS {
            let s = cur.sqrt();
            cur = &s << WORK_BITS;
            chain.push(s);
        }
        chain
    })
}

/// floor(2^(d/2^96) * 2^192) for d <= 0. Exact when d is an exact integer
/// multiple of 2^96; otherwise within a few units of the last place.
fn exp2_neg(d: &BigInt) -> BigUint {
    assert!(!d.is_positive());
    let a = d.magnitude();
    let k = (a >> FRAC_BITS).to_usize().unwrap_or(usize::MAX);
    if k > WORK_BITS {
        return BigUint::zero();
    }
    let f = a & ((BigUint::one() << FRAC_BITS) - 1u32);
    let mut t = BigUint::one() << WORK_BITS;
    if !f.is_zero() {
        let chain = sqrt_chain();
        for (j, s) in chain.iter().enumerate() {
            if f.bit((FRAC_BITS - 1 - j) as u64) {
                t = (&t * s) >> WORK_BITS;
            }
        }
    }
    ((BigUint::one() << (2 * WORK_BITS)) / t) >> k
}

fn log2_e() -> &'static LogValue {
    static V: OnceLock<LogValue> = OnceLock::new();
    V.get_or_init(|| LogValue::from_decimal(LOG2_E))
}

fn log2_111_32() -> &'static LogValue {
    static V: OnceLock<LogValue> = OnceLock::new();
    V.get_or_init(|| LogValue::from_decimal(LOG2_111_32))
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::OutOfRange(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

/// q^e as an exact big integer, guarded against runaway exponents.
fn q_power(q: u64, e: u64) -> Result<BigUint> {
    if e > EXPONENT_CEILING {
        return Err(Error::CeilingExceeded(format!(
            "exponent {e} exceeds the {EXPONENT_CEILING} ceiling for exact powers"
        )));
    }
    Ok(BigUint::from(q).pow(e as u32))
}

/// Base-2 exponent of the paving lower bound for rank-k q-matroids on F_q^n:
/// there are more than 2^(q^((n-k)(k-1))) of them. Returns q^((n-k)(k-1))
/// exactly. Requires n >= 4 and 2 <= k <= n/2.
pub fn lower_bound_n(n: u64, k: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if n < 4 || k < 2 || 2 * k > n {
        return Err(Error::OutOfRange(format!(
            "lower bound needs n >= 4 and 2 <= k <= n/2, got n={n}, k={k}"
        )));
    }
    q_power(q, (n - k) * (k - 1))
}

/// The lower bound at the strongest admissible rank, k = floor(n/2).
pub fn lower_bound_n_all(n: u64, q: u64) -> Result<BigUint> {
    lower_bound_n(n, n / 2, q)
}

/// log2 of the rank-1 upper bound: representable rank-1 q-matroids on F_q^n
/// number fewer than q^(log_q(n) + n^2 + n log_q(e)) + 1. Requires n >= 2.
pub fn upper_bound_r_rank1(n: u64, q: u64) -> Result<LogValue> {
    check_q(q)?;
    if n < 2 {
        return Err(Error::OutOfRange(format!("rank-1 bound needs n >= 2, got {n}")));
    }
    let x = rank1_term(n, q);
    Ok(LogValue::log2_sum(&[x, LogValue::zero()]))
}

/// log2(n) + n^2 log2(q) + n log2(e): the rank-1 count before the trailing +1.
fn rank1_term(n: u64, q: u64) -> LogValue {
    let nn = n as u128;
    let a = LogValue::log2_of(n);
    let b = LogValue::log2_of(q).scale(nn * nn, 1);
    let c = log2_e().scale(nn, 1);
    &(&a + &b) + &c
}

/// log2 of the rank-k upper bound, k >= 2: fewer than
/// q^(n^2 k^2 - n k^3 + nk log_q(e) + nk log_q(111/32)) representable
/// rank-k q-matroids on F_q^n. Rank 1 has its own sharper variant.
/// Requires 2 <= k <= n/2.
pub fn upper_bound_r_rank_k(n: u64, k: u64, q: u64) -> Result<LogValue> {
    check_q(q)?;
    if k < 2 || 2 * k > n {
        return Err(Error::OutOfRange(format!(
            "rank-k bound needs 2 <= k <= n/2 (rank 1 has its own variant), got n={n}, k={k}"
        )));
    }
    let (nn, kk) = (n as u128, k as u128);
    let poly = LogValue::log2_of(q).scale(nn * nn * kk * kk - nn * kk * kk * kk, 1);
    let tail = (log2_e() + log2_111_32()).scale(nn * kk, 1);
    Ok(&poly + &tail)
}

/// log2 of the uniform-in-k majorisation used by the combined bound:
/// q^(n^2/4 + log_q(e) n^2/2 + log_q(111/32) n^2/2). Requires n >= 4.
pub fn upper_bound_r_uniform(n: u64, q: u64) -> Result<LogValue> {
    check_q(q)?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("uniform bound needs n >= 4, got {n}")));
    }
    let n2 = (n as u128) * (n as u128);
    let head = LogValue::log2_of(q).scale(n2, 4);
    let tail = (log2_e() + log2_111_32()).scale(n2, 2);
    Ok(&head + &tail)
}

/// log2 of the combined upper bound on representable q-matroids of every
/// rank: R_q(n) < 2 (q^(n^2/4 + log_q(e) n^2/2 + log_q(111/32) n^2/2
/// + log_q(n/2)) + q^(log_q(n) + n^2 + n log_q(e)) + 2). The trailing +2
/// absorbs the rank-0 count and the rank-1 bound's +1. Requires n >= 4.
pub fn upper_bound_r_all(n: u64, q: u64) -> Result<LogValue> {
    let one = LogValue::from_integer(&BigUint::one());
    let uniform_part = &(&upper_bound_r_uniform(n, q)? + &LogValue::log2_of(n)) - &one;
    let rank1_part = rank1_term(n, q);
    let sum = LogValue::log2_sum(&[uniform_part, rank1_part, one.clone()]);
    Ok(&sum + &one)
}

/// Alternative combined bound that sums the per-rank bounds term by term
/// instead of majorising them through the uniform exponent. Far weaker for
/// large n (the k near n/2 terms dominate); off the default paths and
/// exposed only behind an explicit opt-in.
pub fn upper_bound_r_all_summed(n: u64, q: u64) -> Result<LogValue> {
    check_q(q)?;
    if n < 4 {
        return Err(Error::OutOfRange(format!("combined bound needs n >= 4, got {n}")));
    }
    let one = LogValue::from_integer(&BigUint::one());
    let mut terms = vec![one.clone(), rank1_term(n, q)];
    for k in 2..=n / 2 {
        terms.push(upper_bound_r_rank_k(n, k, q)?);
    }
    let sum = LogValue::log2_sum(&terms);
    Ok(&sum + &one)
}

/// The Gaussian binomial sandwich: q^((n-k)k) <= [n k]_q <= 111/32 q^((n-k)k).
/// Returns the exact pair (lower, upper). Requires k <= n and q >= 2.
pub fn qbinom_sandwich(n: u64, k: u64, q: u64) -> Result<(BigUint, BigRational)> {
    check_q(q)?;
    if k > n {
        return Err(Error::OutOfRange(format!("sandwich needs k <= n, got n={n}, k={k}")));
    }
    let lower = q_power(q, (n - k) * k)?;
    let upper = BigRational::new(BigInt::from(&lower * 111u32), BigInt::from(32));
    Ok((lower, upper))
}

/// One row of [`asymptotic_table`]: everything needed to compare the exact
/// paving lower bound against the log-scale representability upper bound.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub n: u64,
    /// Exact base-2 exponent of the lower bound, q^((n - floor(n/2)) (floor(n/2) - 1)).
    pub log2_lower_n: BigUint,
    /// log2 of the combined upper bound on representable q-matroids.
    pub log2_upper_r: LogValue,
    /// log2_lower_n - log2_upper_r; positive once non-representable
    /// q-matroids outnumber representable ones.
    pub gap: LogValue,
}

/// Tabulates lower exponent, upper log, and their gap for n_from..=n_to.
/// Requires n_from >= 4 and n_from <= n_to.
pub fn asymptotic_table(q: u64, n_from: u64, n_to: u64) -> Result<Vec<BoundRow>> {
    check_q(q)?;
    if n_from < 4 || n_from > n_to {
        return Err(Error::OutOfRange(format!(
            "table needs 4 <= n_from <= n_to, got {n_from}..={n_to}"
        )));
    }
    let mut rows = Vec::with_capacity((n_to - n_from + 1) as usize);
    for n in n_from..=n_to {
        let log2_lower_n = lower_bound_n_all(n, q)?;
        let log2_upper_r = upper_bound_r_all(n, q)?;
        let gap = &LogValue::from_integer(&log2_lower_n) - &log2_upper_r;
        rows.push(BoundRow { n, log2_lower_n, log2_upper_r, gap });
    }
    Ok(rows)
}

/// Smallest n in 4..=n_max whose gap is positive, i.e. the crossover past
/// which the paving lower bound provably exceeds the representability upper
/// bound. None if the gap stays nonpositive on the whole range.
pub fn crossover(q: u64, n_max: u64) -> Result<Option<u64>> {
    let rows = asymptotic_table(q, 4, n_max.max(4))?;
    Ok(rows.iter().find(|r| r.gap.units.is_positive()).map(|r| r.n))
}
