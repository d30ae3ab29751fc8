//! Exact arithmetic kernel: naturals, rationals, rational intervals and a
//! fixed-point accumulator that tracks its own rounding error.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Unbounded natural number.
pub type Nat = BigUint;
/// Unbounded signed integer.
pub type Int = BigInt;
/// Exact rational, always stored in lowest terms with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval divisor contains zero")]
    DivisorContainsZero,
    #[error("empty interval: lower end exceeds upper end")]
    EmptyInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact rational arithmetic with an explicit error for division by zero.
pub fn rat_arith(a: &Rat, b: &Rat, op: RatOp) -> Result<Rat, ExactError> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => {
            if b.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rat {
    Rat::from_integer(n.into())
}

pub fn nat_to_rat(n: &Nat) -> Rat {
    Rat::from_integer(BigInt::from(n.clone()))
}

pub fn nat_to_int(n: &Nat) -> Int {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

/// `max(i, 0)` as a natural.
pub fn nat_from_int(i: &Int) -> Nat {
    i.to_biguint().unwrap_or_default()
}

/// Modified subtraction: `a - b` when `a >= b`, otherwise zero.
pub fn monus(a: &Nat, b: &Nat) -> Nat {
    if a > b {
        a - b
    } else {
        Nat::zero()
    }
}

/// `2^k` as a rational.
pub fn pow2(k: u64) -> Rat {
    Rat::from_integer(BigInt::one() << k)
}

/// `2^-k` as a rational.
pub fn inv_pow2(k: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k)
}

/// `1/(x+1)`.
pub fn inv_succ(x: &Nat) -> Rat {
    Rat::new(BigInt::one(), nat_to_int(x) + 1)
}

pub fn floor_rat(r: &Rat) -> Int {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: &Rat) -> Int {
    -((-r.numer()).div_floor(r.denom()))
}

/// `floor(r + 1/2)`.
pub fn round_half_up(r: &Rat) -> Int {
    let two = BigInt::from(2);
    (r.numer() * &two + r.denom()).div_floor(&(r.denom() * two))
}

/// Smallest `k` with `2^k >= n` (and `0` for `n <= 1`).
pub fn ceil_log2(n: &Nat) -> u64 {
    if n <= &Nat::one() {
        0
    } else {
        (n - 1u32).bits()
    }
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rat,
    hi: Rat,
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::EmptyInterval);
        }
        Ok(RatInterval { lo, hi })
    }

    /// Builds the interval spanned by two endpoints given in either order.
    pub fn spanning(a: Rat, b: Rat) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(q: Rat) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    /// `[center - radius, center + radius]`; `radius` must be non-negative.
    pub fn ball(center: &Rat, radius: &Rat) -> Self {
        debug_assert!(!radius.is_negative());
        RatInterval {
            lo: center - radius,
            hi: center + radius,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, q: &Rat) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Largest absolute value attained on the interval.
    pub fn magnitude(&self) -> Rat {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value attained on the interval.
    pub fn mignitude(&self) -> Rat {
        if self.contains_zero() {
            Rat::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }

    pub fn neg(&self) -> Self {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if p < &lo {
                lo = p.clone();
            }
            if p > &hi {
                hi = p.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, q: &Rat) -> Self {
        RatInterval::spanning(&self.lo * q, &self.hi * q)
    }

    pub fn add_rat(&self, q: &Rat) -> Self {
        RatInterval {
            lo: &self.lo + q,
            hi: &self.hi + q,
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.contains_zero() {
            return Err(ExactError::DivisorContainsZero);
        }
        Ok(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Tight enclosure of `{ t^k : t in self }`.
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return RatInterval::point(Rat::one());
        }
        let lo_k = num_traits::pow(self.lo.clone(), k as usize);
        let hi_k = num_traits::pow(self.hi.clone(), k as usize);
        if k % 2 == 1 {
            RatInterval { lo: lo_k, hi: hi_k }
        } else if self.contains_zero() {
            let hi = if lo_k > hi_k { lo_k } else { hi_k };
            RatInterval { lo: Rat::zero(), hi }
        } else {
            RatInterval::spanning(lo_k, hi_k)
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        RatInterval {
            lo: if self.lo < other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi > other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(RatInterval {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.midpoint();
        (
            RatInterval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            RatInterval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }
}

/// Fixed-point accumulator over the denominator `2^scale`.
///
/// Every absorbed term is rounded to the nearest multiple of `2^-scale`; the
/// exact rounding residue is added to [`error_bound`](Self::error_bound), so
/// the represented sum never drifts further than the recorded bound from the
/// exact sum of everything absorbed.
#[derive(Debug, Clone)]
pub struct TrackedAccumulator {
    scale: u32,
    sum: Int,
    error: Rat,
    terms: u64,
}

impl TrackedAccumulator {
    pub fn new(scale: u32) -> Self {
        TrackedAccumulator {
            scale,
            sum: Int::zero(),
            error: Rat::zero(),
            terms: 0,
        }
    }

    /// Scale giving a total rounding error of at most `2^-precision_bits`
    /// after `count` absorptions.
    pub fn scale_for(precision_bits: u32, count: u64) -> u32 {
        let count_bits = ceil_log2(&Nat::from(count.max(1))) as u32;
        precision_bits + count_bits + 2
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Sum numerator over `2^scale`.
    pub fn sum_numerator(&self) -> &Int {
        &self.sum
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    pub fn absorb(&mut self, term: &Rat) {
        let unit = BigInt::one() << self.scale;
        let scaled = term * Rat::from_integer(unit.clone());
        let rounded = round_half_up(&scaled);
        let residue = (scaled - Rat::from_integer(rounded.clone())).abs() / Rat::from_integer(unit);
        self.sum += rounded;
        self.error += residue;
        self.terms += 1;
    }

    pub fn absorb_all<'a, I: IntoIterator<Item = &'a Rat>>(&mut self, terms: I) {
        for t in terms {
            self.absorb(t);
        }
    }

    pub fn value(&self) -> Rat {
        Rat::new(self.sum.clone(), BigInt::one() << self.scale)
    }

    pub fn error_bound(&self) -> &Rat {
        &self.error
    }

    /// Interval guaranteed to contain the exact sum of the absorbed terms.
    pub fn enclosure(&self) -> RatInterval {
        RatInterval::ball(&self.value(), &self.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
    /// To the nearest representable value, ties upward.
    Nearest,
}

/// Renders `r` with exactly `digits` digits after the decimal point.
pub fn render_decimal(r: &Rat, digits: usize, mode: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rat::from_integer(scale.clone());
    let n = match mode {
        Rounding::Floor => floor_rat(&scaled),
        Rounding::Ceil => ceil_rat(&scaled),
        Rounding::Nearest => round_half_up(&scaled),
    };
    render_scaled(&n, digits)
}

/// Renders the integer `n` as the decimal `n / 10^digits`.
pub fn render_scaled(n: &Int, digits: usize) -> String {
    let negative = n.is_negative();
    let mag = n.abs().to_string();
    let body = if digits == 0 {
        mag
    } else {
        let padded = if mag.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
        } else {
            mag
        };
        let split = padded.len() - digits;
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Lossy conversion used only for diagnostics.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
