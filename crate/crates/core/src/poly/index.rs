//! Multi-indices on the lattice (1/q)·ℤⁿ≥0 and their canonical ordering.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A positive rational degree `num/den`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Degree {
    num: u32,
    den: u32,
}

impl Degree {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::parse("d", "denominator must be positive"));
        }
        if num == 0 {
            return Err(Error::parse("d", "degree must be positive"));
        }
        let g = gcd(num as u64, den as u64) as u32;
        Ok(Degree {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(d: u32) -> Result<Self> {
        Self::new(d, 1)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// d·q when it is an integer.
    pub fn times(&self, q: u32) -> Option<u32> {
        let p = self.num as u64 * q as u64;
        p.is_multiple_of(self.den as u64).then(|| (p / self.den as u64) as u32)
    }

    pub fn is_even_integer(&self) -> bool {
        self.den == 1 && self.num.is_multiple_of(2)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Degree {
    type Err = Error;

    /// Accepts `4`, `1/2`, or a terminating decimal such as `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("d", format!("cannot read degree from `{s}`"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse::<u32>().map_err(|_| bad())?;
            let b = b.trim().parse::<u32>().map_err(|_| bad())?;
            return Degree::new(a, b);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 6 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u32.pow(frac.len() as u32);
            let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: u32 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            return Degree::new(int * den + frac, den);
        }
        Degree::integer(s.parse().map_err(|_| bad())?)
    }
}

/// Exponent vector α with entries `numerators[i] / q`.
///
/// Ordering is graded (total ascending), then lexicographic *descending* on the
/// numerators, so `(4,0) < (3,1) < … < (0,4)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    numerators: Vec<u32>,
    q: u32,
}

impl ExponentVector {
    pub fn new(numerators: Vec<u32>, q: u32) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::InvalidArgument("exponent vector needs n ≥ 1".into()));
        }
        if q == 0 {
            return Err(Error::InvalidArgument("lattice denominator q must be ≥ 1".into()));
        }
        Ok(ExponentVector { numerators, q })
    }

    pub fn zeros(n: usize, q: u32) -> Self {
        ExponentVector {
            numerators: vec![0; n],
            q,
        }
    }

    /// `total`·e_axis, i.e. the pure power |x_axis|^(total/q).
    pub fn axis(n: usize, axis: usize, total: u32, q: u32) -> Self {
        let mut numerators = vec![0; n];
        numerators[axis] = total;
        ExponentVector { numerators, q }
    }

    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    /// Σ numerators, i.e. q·|α|.
    pub fn total(&self) -> u32 {
        self.numerators.iter().sum()
    }

    /// |α| as a real number.
    pub fn degree(&self) -> f64 {
        self.total() as f64 / self.q as f64
    }

    pub fn exponent(&self, i: usize) -> f64 {
        self.numerators[i] as f64 / self.q as f64
    }

    /// True when some entry is an odd integer (only meaningful for q = 1).
    pub fn has_odd_component(&self) -> bool {
        self.q == 1 && self.numerators.iter().any(|k| k % 2 == 1)
    }

    pub fn is_axis_power(&self) -> bool {
        self.numerators.iter().filter(|&&k| k > 0).count() == 1
    }

    /// α + β on the same lattice.
    pub fn add(&self, other: &ExponentVector) -> Result<ExponentVector> {
        if self.q != other.q || self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {self} and {other}"
            )));
        }
        Ok(ExponentVector {
            numerators: self
                .numerators
                .iter()
                .zip(&other.numerators)
                .map(|(a, b)| a + b)
                .collect(),
            q: self.q,
        })
    }

    /// Comma-joined numerators, as used by the CSV and JSON formats.
    pub fn key(&self) -> String {
        self.numerators
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())?;
        if self.q != 1 {
            write!(f, "/{}", self.q)?;
        }
        Ok(())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.numerators.cmp(&self.numerators))
            .then_with(|| self.q.cmp(&other.q))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in dimension `n` whose numerators sum to `d_times_q`,
/// in canonical (lexicographic descending) order.
pub fn enumerate_indices(n: usize, d_times_q: u32, q: u32) -> Vec<ExponentVector> {
    assert!(n >= 1 && q >= 1, "enumerate_indices needs n ≥ 1 and q ≥ 1");
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut current, 0, d_times_q, &mut |v| {
        out.push(ExponentVector {
            numerators: v.to_vec(),
            q,
        })
    });
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        emit(current);
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill(current, pos + 1, remaining - k, emit);
    }
}

/// Binomial coefficient C(n, k) as f64-safe u128.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// c_α = |α|! / (α₁!⋯α_n!) for an integer exponent vector.
pub fn multinomial_coefficient(alpha: &ExponentVector) -> Result<u64> {
    if alpha.q != 1 {
        return Err(Error::InvalidArgument(format!(
            "multinomial coefficient needs integer exponents, got {alpha}"
        )));
    }
    // product of binomials C(k₁+…+k_i, k_i)
    let mut acc: u128 = 1;
    let mut running = 0u64;
    for &k in &alpha.numerators {
        running += k as u64;
        acc = acc
            .checked_mul(binomial(running, k as u64))
            .ok_or_else(|| Error::InvalidArgument(format!("multinomial of {alpha} overflows")))?;
    }
    u64::try_from(acc)
        .map_err(|_| Error::InvalidArgument(format!("multinomial of {alpha} overflows")))
}
