//! Approximation pairs, nested intervals, b-adic expansions and subset-sum reals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::Mutex;

use crate::class::ClassTag;
use crate::creal::{CReal, Comparison, Modulus, RealError};
use crate::exact::{floor_rat, inv_pow2, inv_succ, nat_from_int, nat_to_int, nat_to_rat, rat, Nat, Rat};

/// A rational sequence over the naturals.
pub type RatSeq = Arc<dyn Fn(u64) -> Result<Rat, RealError> + Send + Sync>;

fn seq<F>(f: F) -> RatSeq
where
    F: Fn(u64) -> Result<Rat, RealError> + Send + Sync + 'static,
{
    Arc::new(f)
}

/// `(A, E)` with `|A(x) - α| <= E(x)` and `E` decreasing to zero.
#[derive(Clone)]
pub struct ApproxPair {
    a: RatSeq,
    e: RatSeq,
}

impl fmt::Debug for ApproxPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ApproxPair")
    }
}

impl ApproxPair {
    pub fn new<A, E>(a: A, e: E) -> Self
    where
        A: Fn(u64) -> Result<Rat, RealError> + Send + Sync + 'static,
        E: Fn(u64) -> Result<Rat, RealError> + Send + Sync + 'static,
    {
        ApproxPair { a: seq(a), e: seq(e) }
    }

    pub fn a(&self, x: u64) -> Result<Rat, RealError> {
        (self.a)(x)
    }

    pub fn e(&self, x: u64) -> Result<Rat, RealError> {
        (self.e)(x)
    }

    /// Least `x` with `E(x) <= eps`, found by doubling and then bisection.
    pub fn index_for(&self, eps: &Rat, limit: u64) -> Result<u64, RealError> {
        if self.e(0)? <= *eps {
            return Ok(0);
        }
        let mut hi = 1u64;
        while self.e(hi)? > *eps {
            if hi >= limit {
                return Err(RealError::FuelExhausted {
                    budget: Nat::from(limit),
                    what: format!("scanning for E(x) <= {eps}"),
                });
            }
            hi = hi.saturating_mul(2).min(limit);
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.e(mid)? <= *eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// The real `A(s(x))` with `s(x) = min{n : E(n) <= 1/(x+1)}`.
    pub fn to_creal(&self, provenance: impl Into<String>) -> CReal {
        let me = self.clone();
        CReal::new(Modulus::Inverse, ClassTag::Recursive, provenance, move |x| {
            let eps = inv_succ(x);
            let s = me.index_for(&eps, u64::MAX)?;
            me.a(s)
        })
    }

    /// Pair with `E'(n) = min_{i<=n} E(i)` and `A'(n) = A(k(n))`, `k(n)` the
    /// first index attaining that minimum.
    pub fn monotonized(&self) -> ApproxPair {
        let me = self.clone();
        let memo: Arc<Mutex<Vec<(u64, Rat)>>> = Arc::new(Mutex::new(Vec::new()));
        let best = {
            let me = me.clone();
            move |n: u64| -> Result<(u64, Rat), RealError> {
                let mut m = memo.lock();
                while m.len() as u64 <= n {
                    let i = m.len() as u64;
                    let e = me.e(i)?;
                    let next = match m.last() {
                        Some((k, prev)) if *prev <= e => (*k, prev.clone()),
                        _ => (i, e),
                    };
                    m.push(next);
                }
                Ok(m[n as usize].clone())
            }
        };
        let best = Arc::new(best);
        let b2 = best.clone();
        ApproxPair::new(
            move |n| {
                let (k, _) = best(n)?;
                me.a(k)
            },
            move |n| Ok(b2(n)?.1),
        )
    }
}

/// Monotone rational brackets `f(x) <= f(x+1) <= α <= g(x+1) <= g(x)`.
#[derive(Clone)]
pub struct NestedIntervals {
    f: RatSeq,
    g: RatSeq,
}

impl fmt::Debug for NestedIntervals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NestedIntervals")
    }
}

impl NestedIntervals {
    pub fn new<F, G>(f: F, g: G) -> Self
    where
        F: Fn(u64) -> Result<Rat, RealError> + Send + Sync + 'static,
        G: Fn(u64) -> Result<Rat, RealError> + Send + Sync + 'static,
    {
        NestedIntervals { f: seq(f), g: seq(g) }
    }

    pub fn lower(&self, x: u64) -> Result<Rat, RealError> {
        (self.f)(x)
    }

    pub fn upper(&self, x: u64) -> Result<Rat, RealError> {
        (self.g)(x)
    }

    /// The real whose approximation at `x` is the midpoint of the first
    /// bracket of width at most `2/(x+1)`.
    pub fn to_creal(&self, provenance: impl Into<String>) -> CReal {
        nested_to_approx(self).to_creal(provenance)
    }
}

/// Running max of `A - E` and running min of `A + E`.
pub fn approx_to_nested(p: &ApproxPair) -> NestedIntervals {
    let p = p.clone();
    let memo: Arc<Mutex<Vec<(Rat, Rat)>>> = Arc::new(Mutex::new(Vec::new()));
    let bracket = Arc::new(move |x: u64| -> Result<(Rat, Rat), RealError> {
        let mut m = memo.lock();
        while m.len() as u64 <= x {
            let i = m.len() as u64;
            let (a, e) = (p.a(i)?, p.e(i)?);
            let (lo, hi) = (&a - &e, &a + &e);
            let next = match m.last() {
                Some((f, g)) => (lo.max(f.clone()), hi.min(g.clone())),
                None => (lo, hi),
            };
            m.push(next);
        }
        Ok(m[x as usize].clone())
    });
    let b2 = bracket.clone();
    NestedIntervals::new(move |x| Ok(bracket(x)?.0), move |x| Ok(b2(x)?.1))
}

/// Midpoint and half-width.
pub fn nested_to_approx(ni: &NestedIntervals) -> ApproxPair {
    let (n1, n2) = (ni.clone(), ni.clone());
    let half = rat(1, 2);
    let half2 = half.clone();
    ApproxPair::new(
        move |x| Ok((n1.upper(x)? + n1.lower(x)?) * &half),
        move |x| Ok((n2.upper(x)? - n2.lower(x)?) * &half2),
    )
}

/// `(a.approx, modulus)`.
pub fn pr_approximation(a: &CReal) -> ApproxPair {
    let (a1, a2) = (a.clone(), a.clone());
    ApproxPair::new(
        move |x| a1.approx(&Nat::from(x)),
        move |x| Ok(a2.modulus_at(&Nat::from(x))),
    )
}

type DigitFn = Arc<dyn Fn(u64) -> Nat + Send + Sync>;

/// `integer_part + Σ_{n>=1} digit(n)/b^n`.
#[derive(Clone)]
pub struct DigitStream {
    base: Nat,
    integer_part: Nat,
    digits: DigitFn,
}

impl fmt::Debug for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitStream")
            .field("base", &self.base)
            .field("integer_part", &self.integer_part)
            .finish()
    }
}

impl DigitStream {
    /// Digits must lie in `0..base` and `base > 1`.
    pub fn new<D>(base: Nat, integer_part: Nat, digits: D) -> Result<Self, RealError>
    where
        D: Fn(u64) -> Nat + Send + Sync + 'static,
    {
        if base <= Nat::one() {
            return Err(RealError::InvalidInput(format!("base {base} must exceed 1")));
        }
        let b = base.clone();
        let digits = move |n: u64| {
            let d = digits(n);
            assert!(d < b, "digit {d} at position {n} is out of range for base {b}");
            d
        };
        Ok(DigitStream {
            base,
            integer_part,
            digits: Arc::new(digits),
        })
    }

    /// From a digit function `f` indexed from `0`, `α = Σ_{n>=0} f(n)/b^n`.
    pub fn from_function<D>(base: Nat, f: D) -> Result<Self, RealError>
    where
        D: Fn(u64) -> Nat + Send + Sync + 'static,
    {
        let ip = f(0);
        Self::new(base, ip, f)
    }

    /// A finite expansion followed by zeros.
    pub fn from_prefix(base: Nat, integer_part: Nat, digits: Vec<Nat>) -> Result<Self, RealError> {
        Self::new(base, integer_part, move |n| {
            if n == 0 {
                return Nat::zero();
            }
            digits.get(n as usize - 1).cloned().unwrap_or_default()
        })
    }

    /// Long-division expansion of a nonnegative rational.
    pub fn rational(q: &Rat, base: Nat) -> Result<Self, RealError> {
        if q.is_negative() {
            return Err(RealError::InvalidInput("expansions need a nonnegative value".into()));
        }
        let ip = nat_from_int(&floor_rat(q));
        let frac = q - nat_to_rat(&ip);
        let (p, d) = (nat_from_int(frac.numer()), nat_from_int(frac.denom()));
        let b = base.clone();
        Self::new(base, ip, move |n| {
            if n == 0 {
                return Nat::zero();
            }
            let scaled = &p * num_traits::pow(b.clone(), n as usize) / &d;
            scaled % &b
        })
    }

    pub fn base(&self) -> &Nat {
        &self.base
    }

    pub fn integer_part(&self) -> &Nat {
        &self.integer_part
    }

    /// Fractional digit at position `n >= 1`.
    pub fn digit(&self, n: u64) -> Nat {
        (self.digits)(n)
    }

    /// `integer_part + Σ_{n=1..k} digit(n)/b^n`.
    pub fn prefix_value(&self, k: u64) -> Rat {
        let mut num = nat_to_int(&self.integer_part);
        let b = nat_to_int(&self.base);
        for n in 1..=k {
            num = num * &b + nat_to_int(&self.digit(n));
        }
        Rat::new(num, b.pow(k as u32))
    }
}

/// Reconstruction with `approx(x)` the prefix through position `x + 1`,
/// within `b^-x <= 2^-x`.
pub fn badic_to_creal(d: &DigitStream) -> CReal {
    let d = d.clone();
    let provenance = format!("base-{} expansion", d.base);
    CReal::new(Modulus::DyadicExp, ClassTag::Recursive, provenance, move |x| {
        let k = x
            .to_u64()
            .ok_or_else(|| RealError::ResourceLimit(format!("digit position {x} too large")))?;
        Ok(d.prefix_value(k + 1))
    })
}

/// How far digit extraction got.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigitOutcome {
    Complete,
    /// No strict separation at this position within the fuel; position `0`
    /// is the integer part.
    UnknownAt(u64),
}

/// Digits produced by [`extract_digits`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub base: Nat,
    pub integer_part: Option<Nat>,
    /// Fractional digits, position `1` first.
    pub digits: Vec<Nat>,
    pub outcome: DigitOutcome,
}

impl Extraction {
    /// The determined prefix as a stream followed by zeros.
    pub fn to_stream(&self) -> Result<DigitStream, RealError> {
        DigitStream::from_prefix(
            self.base.clone(),
            self.integer_part.clone().unwrap_or_default(),
            self.digits.clone(),
        )
    }

    /// Digits joined as text, `?` marking the first undetermined position.
    /// Bases above 10 separate digits with spaces.
    pub fn render(&self) -> String {
        let wide = self.base > Nat::from(10u32);
        let mut out = match &self.integer_part {
            Some(ip) => ip.to_string(),
            None => return "?".to_string(),
        };
        if !self.digits.is_empty() || self.outcome != DigitOutcome::Complete {
            out.push('.');
        }
        let mut parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        if let DigitOutcome::UnknownAt(_) = self.outcome {
            parts.push("?".into());
        }
        out.push_str(&parts.join(if wide { " " } else { "" }));
        out
    }
}

fn strictly_below(a: &CReal, q: &Rat, fuel: &Nat) -> Result<Option<bool>, RealError> {
    Ok(match a.cmp_rational(q, fuel)? {
        Comparison::Less => Some(true),
        Comparison::Greater => Some(false),
        Comparison::Unknown => None,
    })
}

/// The first `positions` fractional digits of `a` in base `base`.
///
/// Reals built from a rational use long division. Otherwise each digit is the
/// first candidate whose upper cut point is certified to lie strictly above
/// the value; an undecided comparison stops the extraction.
pub fn extract_digits(a: &CReal, base: &Nat, positions: u64, fuel: &Nat) -> Result<Extraction, RealError> {
    if base <= &Nat::one() {
        return Err(RealError::InvalidInput(format!("base {base} must exceed 1")));
    }
    if let Some(q) = a.exact_value() {
        let s = DigitStream::rational(q, base.clone())?;
        return Ok(Extraction {
            base: base.clone(),
            integer_part: Some(s.integer_part().clone()),
            digits: (1..=positions).map(|n| s.digit(n)).collect(),
            outcome: DigitOutcome::Complete,
        });
    }
    let mut out = Extraction {
        base: base.clone(),
        integer_part: None,
        digits: Vec::new(),
        outcome: DigitOutcome::Complete,
    };

    // Integer part: n < α < n + 1.
    let rough = a.approx_within(&rat(1, 2))?;
    if rough < rat(-1, 1) {
        return Err(RealError::InvalidInput("expansions need a nonnegative value".into()));
    }
    let mut n = (floor_rat(&rough) - BigInt::one()).max(BigInt::zero());
    match strictly_below(a, &Rat::from_integer(n.clone()), fuel)? {
        Some(false) => {}
        Some(true) if n.is_zero() => {
            return Err(RealError::InvalidInput("expansions need a nonnegative value".into()));
        }
        _ => {
            out.outcome = DigitOutcome::UnknownAt(0);
            return Ok(out);
        }
    }
    loop {
        match strictly_below(a, &Rat::from_integer(&n + 1), fuel)? {
            Some(true) => break,
            Some(false) => n += 1,
            None => {
                out.outcome = DigitOutcome::UnknownAt(0);
                return Ok(out);
            }
        }
    }
    out.integer_part = Some(nat_from_int(&n));

    let b = nat_to_int(base);
    let mut prefix = Rat::from_integer(n);
    let mut unit = Rat::one();
    for k in 1..=positions {
        unit /= Rat::from_integer(b.clone());
        let mut digit = BigInt::zero();
        loop {
            if digit == &b - 1 {
                break;
            }
            let cut = &prefix + &unit * Rat::from_integer(&digit + 1);
            match strictly_below(a, &cut, fuel)? {
                Some(true) => break,
                Some(false) => digit += 1,
                None => {
                    out.outcome = DigitOutcome::UnknownAt(k);
                    return Ok(out);
                }
            }
        }
        prefix += &unit * Rat::from_integer(digit.clone());
        out.digits.push(nat_from_int(&digit));
    }
    Ok(out)
}

/// `α = Σ_{n : χ(n)} 2^-n`, approximated by the partial sums `s_x` with
/// `s_x <= α <= s_x + 2^-x`.
pub fn subset_sum_real<C>(chi: C, class: ClassTag) -> CReal
where
    C: Fn(u64) -> bool + Send + Sync + 'static,
{
    let chi = Arc::new(chi);
    CReal::new(Modulus::DyadicExp, class, "subset sum of powers of 1/2", move |x| {
        let x = x
            .to_u64()
            .ok_or_else(|| RealError::ResourceLimit(format!("index {x} too large")))?;
        Ok(subset_partial_sum(chi.as_ref(), x))
    })
}

/// `s_x = Σ_{n <= x, χ(n)} 2^-n`.
pub fn subset_partial_sum(chi: &dyn Fn(u64) -> bool, x: u64) -> Rat {
    let mut num = BigInt::zero();
    for n in 0..=x {
        num <<= 1;
        if chi(n) {
            num += 1;
        }
    }
    Rat::new(num, BigInt::one() << x as usize)
}

/// The brackets `[s_x, s_x + 2^-x]`.
pub fn subset_sum_nested<C>(chi: C) -> NestedIntervals
where
    C: Fn(u64) -> bool + Send + Sync + 'static,
{
    let chi = Arc::new(chi);
    let c2 = chi.clone();
    NestedIntervals::new(
        move |x| Ok(subset_partial_sum(chi.as_ref(), x)),
        move |x| Ok(subset_partial_sum(c2.as_ref(), x) + inv_pow2(x)),
    )
}

/// `floor((floor(2·4^k·q + 1/2) mod 4) / 2)`: the digit `f(k)` of
/// `α = Σ f(n)/4^n`, `f(n) ∈ {0, 1}`, from any `q` with `|q - α| <= 4^-(k+1)`.
pub fn digit_recovery(q: &Rat, k: u64) -> Nat {
    let four_k = BigInt::one() << (2 * k) as usize;
    let t = q * Rat::from_integer(four_k * 2) + rat(1, 2);
    let m = floor_rat(&t).mod_floor(&BigInt::from(4));
    nat_from_int(&(m / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    #[test]
    fn constant_pair_nests_to_its_bounds() {
        let q = rat(2, 7);
        let q2 = q.clone();
        let p = ApproxPair::new(move |_| Ok(q2.clone()), |x| Ok(inv_succ(&n(x))));
        let ni = approx_to_nested(&p);
        for x in 0..30 {
            assert_eq!(ni.lower(x).unwrap(), &q - inv_succ(&n(x)));
            assert_eq!(ni.upper(x).unwrap(), &q + inv_succ(&n(x)));
        }
    }

    #[test]
    fn dyadic_brackets_give_exact_pair() {
        let q = rat(5, 3);
        let (q1, q2) = (q.clone(), q.clone());
        let ni = NestedIntervals::new(move |x| Ok(&q1 - inv_pow2(x)), move |x| Ok(&q2 + inv_pow2(x)));
        let p = nested_to_approx(&ni);
        for x in 0..40 {
            assert_eq!(p.a(x).unwrap(), q);
            assert_eq!(p.e(x).unwrap(), inv_pow2(x));
        }
        let flat = NestedIntervals::new(|_| Ok(rat(1, 2)), |_| Ok(rat(1, 2)));
        assert!(nested_to_approx(&flat).e(7).unwrap().is_zero());
    }

    #[test]
    fn pair_to_real_uses_first_small_error() {
        let p = ApproxPair::new(|x| Ok(rat(1, 3) + inv_pow2(x)), |x| Ok(inv_pow2(x)));
        assert_eq!(p.index_for(&rat(1, 100), 1000).unwrap(), 7);
        let r = p.to_creal("test");
        for x in 0..50u64 {
            assert!((r.approx_u64(x).unwrap() - rat(1, 3)).abs() <= inv_succ(&n(x)));
        }
    }

    #[test]
    fn monotonized_pair_is_decreasing() {
        let p = ApproxPair::new(|x| Ok(rat_int(x as i64 % 3)), |x| {
            Ok(if x % 2 == 0 { inv_succ(&n(x)) } else { rat_int(5) })
        });
        let m = p.monotonized();
        for x in 0..40 {
            assert!(m.e(x + 1).unwrap() <= m.e(x).unwrap());
        }
        assert_eq!(m.e(3).unwrap(), rat(1, 3));
        assert_eq!(m.a(3).unwrap(), rat_int(2));
    }

    #[test]
    fn pr_approximation_exposes_modulus() {
        let third = CReal::from_rational(rat(1, 3));
        let p = pr_approximation(&third);
        assert_eq!(p.a(9).unwrap(), rat(1, 3));
        assert_eq!(p.e(9).unwrap(), rat(1, 10));
        let dyadic = subset_sum_real(|_| true, ClassTag::LowerElementary);
        assert_eq!(pr_approximation(&dyadic).e(5).unwrap(), rat(1, 32));
    }

    #[test]
    fn badic_reconstruction() {
        let thirds = DigitStream::new(n(10), n(0), |_| n(3)).unwrap();
        let r = badic_to_creal(&thirds);
        for x in 0..30u64 {
            assert!((r.approx_u64(x).unwrap() - rat(1, 3)).abs() <= inv_pow2(x));
        }
        let alt = DigitStream::from_function(n(2), |k| n((k + 1) % 2)).unwrap();
        let r = badic_to_creal(&alt);
        for x in 0..30u64 {
            assert!((r.approx_u64(x).unwrap() - rat(4, 3)).abs() <= inv_pow2(x));
        }
        let zero = DigitStream::new(n(7), n(0), |_| n(0)).unwrap();
        assert!(badic_to_creal(&zero).approx_u64(12).unwrap().is_zero());
        assert!(DigitStream::new(n(1), n(0), |_| n(0)).is_err());
    }

    #[test]
    fn long_division_digits() {
        let q = CReal::from_rational(rat(1, 4));
        let e = extract_digits(&q, &n(10), 4, &n(10)).unwrap();
        assert_eq!(e.digits, vec![n(2), n(5), n(0), n(0)]);
        assert_eq!(e.render(), "0.2500");
        let e = extract_digits(&CReal::from_rational(rat(22, 7)), &n(10), 6, &n(0)).unwrap();
        assert_eq!(e.render(), "3.142857");
    }

    #[test]
    fn cut_point_rational_is_unknown() {
        let half = CReal::from_rational(rat(1, 2)).opaque();
        let starved = extract_digits(&half, &n(10), 3, &n(0)).unwrap();
        assert_eq!(starved.outcome, DigitOutcome::UnknownAt(0));
        assert_eq!(starved.render(), "?");
        for fuel in [3u64, 10, 1000, 1 << 20] {
            let e = extract_digits(&half, &n(10), 3, &n(fuel)).unwrap();
            assert_eq!(e.integer_part, Some(n(0)));
            assert_eq!(e.outcome, DigitOutcome::UnknownAt(1));
            assert!(e.digits.is_empty());
            assert_eq!(e.render(), "0.?");
        }
    }

    #[test]
    fn opaque_third_extracts() {
        let third = CReal::from_rational(rat(1, 3)).opaque();
        let e = extract_digits(&third, &n(10), 5, &n(1 << 20)).unwrap();
        assert_eq!(e.render(), "0.33333");
    }

    #[test]
    fn subset_sums() {
        let all = subset_sum_real(|_| true, ClassTag::LowerElementary);
        let even = subset_sum_real(|k| k % 2 == 0, ClassTag::LowerElementary);
        let none = subset_sum_real(|_| false, ClassTag::LowerElementary);
        for x in 0..64u64 {
            assert!((all.approx_u64(x).unwrap() - rat_int(2)).abs() <= inv_pow2(x));
            assert!((even.approx_u64(x).unwrap() - rat(4, 3)).abs() <= inv_pow2(x));
            assert!(none.approx_u64(x).unwrap().is_zero());
        }
        let ni = subset_sum_nested(|k| k % 2 == 0);
        assert_eq!(ni.upper(0).unwrap() - ni.lower(0).unwrap(), rat_int(1));
    }

    #[test]
    fn digit_recovery_examples() {
        let alpha = rat(17, 16);
        assert_eq!(digit_recovery(&alpha, 2), n(1));
        assert_eq!(digit_recovery(&alpha, 1), n(0));
        assert_eq!(digit_recovery(&Rat::zero(), 5), n(0));
        assert_eq!(digit_recovery(&(rat_int(1) + rat(1, 64)), 0), n(1));
    }
}
