//! Computable reals as approximation oracles with an explicit modulus.

mod root;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;

use crate::class::ClassTag;
use crate::exact::{
    ceil_log2, ceil_rat, nat_from_int, inv_pow2, inv_succ, nat_to_int, nat_to_rat, rat_int, render_scaled,
    round_half_up, Nat, Rat, RatInterval,
};
use crate::fseq::{FSequence, FseqError};

pub use root::{isolate_real_roots, poly_root, RootBracket, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealError {
    #[error("fuel exhausted after probing indices up to {budget} while {what}")]
    FuelExhausted { budget: Nat, what: String },
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("no certified sign change on the bracket: {0}")]
    NoSignChange(String),
    #[error("multiple-root detection failed: {0}")]
    MultipleRoot(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Fseq(#[from] FseqError),
}

/// Error guarantee of an approximation oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modulus {
    /// `|approx(x) - α| <= 1/(x+1)`.
    Inverse,
    /// `|approx(x) - α| <= 2^-x`.
    DyadicExp,
}

impl Modulus {
    pub fn at(&self, x: &Nat) -> Rat {
        match self {
            Modulus::Inverse => inv_succ(x),
            Modulus::DyadicExp => {
                let k = u64::try_from(x).expect("dyadic modulus index fits in 64 bits");
                inv_pow2(k)
            }
        }
    }

    /// Least index whose modulus is at most `1/(y+1)`.
    pub fn index_for_inverse(&self, y: &Nat) -> Nat {
        match self {
            Modulus::Inverse => y.clone(),
            Modulus::DyadicExp => Nat::from(ceil_log2(&(y + 1u32))),
        }
    }

    /// Least index whose modulus is at most `eps` (`eps > 0`).
    pub fn index_for(&self, eps: &Rat) -> Nat {
        let y = nat_from_int(&(ceil_rat(&eps.recip()) - BigInt::one()));
        self.index_for_inverse(&y)
    }
}

/// Three-way answer of a semi-decidable comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Unknown,
}

type ApproxFn = dyn Fn(&Nat) -> Result<Rat, RealError> + Send + Sync;

struct Inner {
    approx: Box<ApproxFn>,
    modulus: Modulus,
    class: ClassTag,
    provenance: String,
    exact: Option<Rat>,
    memo: Mutex<HashMap<Nat, Rat>>,
}

/// A computable real: a memoized oracle `x ↦ q` with a modulus guarantee.
#[derive(Clone)]
pub struct CReal(Arc<Inner>);

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CReal")
            .field("modulus", &self.0.modulus)
            .field("class", &self.0.class)
            .field("provenance", &self.0.provenance)
            .finish()
    }
}

/// Indices `0, 1, 3, 7, …, 2^k - 1` not exceeding `budget`, then `budget`.
pub fn probe_schedule(budget: &Nat) -> Vec<Nat> {
    let mut out = Vec::new();
    let mut x = Nat::zero();
    while &x <= budget {
        out.push(x.clone());
        x = x * 2u32 + 1u32;
    }
    if out.last() != Some(budget) {
        out.push(budget.clone());
    }
    out
}

impl CReal {
    pub fn new<F>(modulus: Modulus, class: ClassTag, provenance: impl Into<String>, approx: F) -> Self
    where
        F: Fn(&Nat) -> Result<Rat, RealError> + Send + Sync + 'static,
    {
        CReal(Arc::new(Inner {
            approx: Box::new(approx),
            modulus,
            class,
            provenance: provenance.into(),
            exact: None,
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn from_rational(q: Rat) -> Self {
        let v = q.clone();
        let mut inner = Inner {
            approx: Box::new(move |_| Ok(v.clone())),
            modulus: Modulus::Inverse,
            class: ClassTag::LowerElementary,
            provenance: format!("rational {q}"),
            exact: None,
            memo: Mutex::new(HashMap::new()),
        };
        inner.exact = Some(q);
        CReal(Arc::new(inner))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// Real whose approximations are the values of `a`; the caller asserts
    /// `|a(x) - α| <= 1/(x+1)`.
    pub fn from_fsequence(a: FSequence, provenance: impl Into<String>) -> Self {
        let class = a.class();
        CReal::new(Modulus::Inverse, class, provenance, move |x| Ok(a.eval(x)?))
    }

    /// The same oracle without exact-value metadata, forcing generic code paths.
    pub fn opaque(&self) -> Self {
        let me = self.clone();
        CReal::new(self.modulus(), self.class(), self.provenance().to_string(), move |x| {
            me.approx(x)
        })
    }

    pub fn with_provenance(&self, provenance: impl Into<String>) -> Self {
        let me = self.clone();
        let mut out = CReal::new(self.modulus(), self.class(), provenance, move |x| me.approx(x));
        if let Some(q) = self.exact_value() {
            Arc::get_mut(&mut out.0).expect("fresh").exact = Some(q.clone());
        }
        out
    }

    pub fn with_class(&self, class: ClassTag) -> Self {
        let me = self.clone();
        CReal::new(self.modulus(), class, self.provenance().to_string(), move |x| me.approx(x))
    }

    pub fn modulus(&self) -> Modulus {
        self.0.modulus
    }

    pub fn class(&self) -> ClassTag {
        self.0.class
    }

    pub fn provenance(&self) -> &str {
        &self.0.provenance
    }

    /// Exact value when the real was built from a rational.
    pub fn exact_value(&self) -> Option<&Rat> {
        self.0.exact.as_ref()
    }

    pub fn approx(&self, x: &Nat) -> Result<Rat, RealError> {
        if let Some(v) = self.0.memo.lock().get(x) {
            return Ok(v.clone());
        }
        let v = (self.0.approx)(x)?;
        self.0.memo.lock().insert(x.clone(), v.clone());
        Ok(v)
    }

    pub fn approx_u64(&self, x: u64) -> Result<Rat, RealError> {
        self.approx(&Nat::from(x))
    }

    pub fn modulus_at(&self, x: &Nat) -> Rat {
        self.0.modulus.at(x)
    }

    /// Approximation within `1/(y+1)` regardless of the modulus kind.
    pub fn approx_inverse(&self, y: &Nat) -> Result<Rat, RealError> {
        if let Some(q) = self.exact_value() {
            return Ok(q.clone());
        }
        self.approx(&self.0.modulus.index_for_inverse(y))
    }

    /// Approximation within `eps`.
    pub fn approx_within(&self, eps: &Rat) -> Result<Rat, RealError> {
        if let Some(q) = self.exact_value() {
            return Ok(q.clone());
        }
        self.approx(&self.0.modulus.index_for(eps))
    }

    /// Interval of radius `1/(y+1)` containing the value.
    pub fn enclosure(&self, y: &Nat) -> Result<RatInterval, RealError> {
        if let Some(q) = self.exact_value() {
            return Ok(RatInterval::point(q.clone()));
        }
        Ok(RatInterval::ball(&self.approx_inverse(y)?, &inv_succ(y)))
    }

    pub fn neg(&self) -> CReal {
        if let Some(q) = self.exact_value() {
            return CReal::from_rational(-q.clone());
        }
        let me = self.clone();
        CReal::new(self.modulus(), self.class(), format!("-({})", self.provenance()), move |x| {
            Ok(-me.approx(x)?)
        })
    }

    pub fn add(&self, other: &CReal) -> CReal {
        CReal::sum(&[self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &CReal) -> CReal {
        CReal::sum(&[self.clone(), other.neg()])
    }

    /// Sum of `k` reals, each queried at index `k(x+1) - 1`.
    pub fn sum(terms: &[CReal]) -> CReal {
        if terms.iter().all(|t| t.exact_value().is_some()) {
            let total = terms
                .iter()
                .fold(Rat::zero(), |acc, t| acc + t.exact_value().expect("checked"));
            return CReal::from_rational(total);
        }
        let terms = terms.to_vec();
        let k = terms.len() as u64;
        let class = ClassTag::join_all(terms.iter().map(|t| t.class()));
        let provenance = terms
            .iter()
            .map(|t| t.provenance().to_string())
            .collect::<Vec<_>>()
            .join(" + ");
        CReal::new(Modulus::Inverse, class, provenance, move |x| {
            let y = (x + 1u32) * k - 1u32;
            let mut total = Rat::zero();
            for t in &terms {
                total += t.approx_inverse(&y)?;
            }
            Ok(total)
        })
    }

    /// Product, queried at index `Kx + K` with `K >= |α| + |β| + 1`.
    pub fn mul(&self, other: &CReal) -> CReal {
        if let (Some(p), Some(q)) = (self.exact_value(), other.exact_value()) {
            return CReal::from_rational(p * q);
        }
        if let Some(q) = self.exact_value() {
            return other.scale(q);
        }
        if let Some(q) = other.exact_value() {
            return self.scale(q);
        }
        let (a, b) = (self.clone(), other.clone());
        let class = a.class().join(b.class());
        let provenance = format!("({}) * ({})", a.provenance(), b.provenance());
        let k_cell: OnceLock<Nat> = OnceLock::new();
        CReal::new(Modulus::Inverse, class, provenance, move |x| {
            let k = match k_cell.get() {
                Some(k) => k.clone(),
                None => {
                    let a0 = a.approx_inverse(&Nat::zero())?.abs();
                    let b0 = b.approx_inverse(&Nat::zero())?.abs();
                    let k = ceil_rat(&(a0 + b0 + rat_int(3)))
                        .to_biguint()
                        .expect("positive");
                    k_cell.get_or_init(|| k).clone()
                }
            };
            let y = &k * x + &k;
            Ok(a.approx_inverse(&y)? * b.approx_inverse(&y)?)
        })
    }

    /// `q · α`, querying `α` at index `ceil(|q|(x+1)) - 1`.
    pub fn scale(&self, q: &Rat) -> CReal {
        if q.is_zero() {
            return CReal::from_rational(Rat::zero());
        }
        if let Some(v) = self.exact_value() {
            return CReal::from_rational(v * q);
        }
        let me = self.clone();
        let q = q.clone();
        let provenance = format!("{} * ({})", q, self.provenance());
        CReal::new(Modulus::Inverse, self.class(), provenance, move |x| {
            let y = nat_from_int(&(ceil_rat(&(q.abs() * nat_to_rat(&(x + 1u32)))) - BigInt::one()));
            Ok(&q * me.approx_inverse(&y)?)
        })
    }

    pub fn abs(&self) -> CReal {
        if let Some(q) = self.exact_value() {
            return CReal::from_rational(q.abs());
        }
        let me = self.clone();
        CReal::new(self.modulus(), self.class(), format!("|{}|", self.provenance()), move |x| {
            Ok(me.approx(x)?.abs())
        })
    }

    /// First index `c` in the probe schedule with `|approx(c)| >= 3/(c+1)`,
    /// which certifies `|α| >= 2/(c+1)`.
    fn reciprocal_witness(&self, budget: Option<&Nat>) -> Result<Nat, RealError> {
        let check = |y: &Nat| -> Result<bool, RealError> {
            let a = self.approx_inverse(y)?.abs();
            Ok(a * nat_to_rat(&(y + 1u32)) >= rat_int(3))
        };
        match budget {
            Some(b) => {
                for y in probe_schedule(b) {
                    if check(&y)? {
                        return Ok(y);
                    }
                }
                Err(RealError::FuelExhausted {
                    budget: b.clone(),
                    what: "searching for a nonzero witness".to_string(),
                })
            }
            None => {
                let mut y = Nat::zero();
                loop {
                    if check(&y)? {
                        return Ok(y);
                    }
                    y = y * 2u32 + 1u32;
                }
            }
        }
    }

    fn reciprocal_from_witness(&self, c: Option<Nat>) -> CReal {
        let me = self.clone();
        let provenance = format!("1/({})", self.provenance());
        let cell: OnceLock<Nat> = OnceLock::new();
        if let Some(c) = c {
            let _ = cell.set(c);
        }
        CReal::new(Modulus::Inverse, self.class(), provenance, move |x| {
            let c = match cell.get() {
                Some(c) => c.clone(),
                None => {
                    let c = me.reciprocal_witness(None)?;
                    cell.get_or_init(|| c).clone()
                }
            };
            let c1 = nat_to_int(&(&c + 1u32));
            let need = Rat::new(&c1 * &c1 * nat_to_int(&(x + 1u32)), BigInt::from(2));
            let y = nat_from_int(&(ceil_rat(&need) - BigInt::one()));
            let y = if y < c { c.clone() } else { y };
            Ok(me.approx_inverse(&y)?.recip())
        })
    }

    /// Reciprocal of a real the caller asserts is nonzero; the witness search
    /// runs without a budget on first use.
    pub fn reciprocal(&self) -> CReal {
        if let Some(q) = self.exact_value() {
            if !q.is_zero() {
                return CReal::from_rational(q.recip());
            }
        }
        self.reciprocal_from_witness(None)
    }

    /// Reciprocal whose nonzero witness must be found at indices `<= budget`.
    pub fn try_reciprocal(&self, budget: &Nat) -> Result<CReal, RealError> {
        if let Some(q) = self.exact_value() {
            if !q.is_zero() {
                return Ok(CReal::from_rational(q.recip()));
            }
        }
        let c = self.reciprocal_witness(Some(budget))?;
        Ok(self.reciprocal_from_witness(Some(c)))
    }

    pub fn div(&self, other: &CReal) -> CReal {
        self.mul(&other.reciprocal())
    }

    /// Compares against `q` by probing indices up to `budget`.
    pub fn cmp_rational(&self, q: &Rat, budget: &Nat) -> Result<Comparison, RealError> {
        if let Some(v) = self.exact_value() {
            return Ok(match v.cmp(q) {
                std::cmp::Ordering::Less => Comparison::Less,
                std::cmp::Ordering::Greater => Comparison::Greater,
                std::cmp::Ordering::Equal => Comparison::Unknown,
            });
        }
        for x in probe_schedule(budget) {
            let d = self.approx(&x)? - q;
            let m = self.modulus_at(&x);
            if d > m {
                return Ok(Comparison::Greater);
            }
            if d < -m {
                return Ok(Comparison::Less);
            }
        }
        Ok(Comparison::Unknown)
    }

    /// Square root of a real certified positive within `budget`.
    pub fn sqrt(&self, budget: &Nat) -> Result<CReal, RealError> {
        match self.cmp_rational(&Rat::zero(), budget)? {
            Comparison::Greater => {}
            Comparison::Less => {
                return Err(RealError::InvalidInput("square root of a negative real".into()))
            }
            Comparison::Unknown => {
                if self.exact_value().is_some_and(|q| q.is_zero()) {
                    return Ok(CReal::from_rational(Rat::zero()));
                }
                return Err(RealError::FuelExhausted {
                    budget: budget.clone(),
                    what: "certifying a positive radicand".to_string(),
                });
            }
        }
        let b = ceil_rat(&self.approx_inverse(&Nat::zero())?.abs()) + 2;
        let coeffs = vec![self.neg(), CReal::from_int(0), CReal::from_int(1)];
        let r = poly_root(&coeffs, &Rat::zero(), &Rat::from_integer(b), budget)?;
        Ok(r.with_provenance(format!("sqrt({})", self.provenance())))
    }

    /// Rounded decimal value with a certified error bound.
    pub fn to_decimal(&self, digits: usize) -> Result<DecimalApprox, RealError> {
        let ten_d = BigInt::from(10u32).pow(digits as u32);
        let eps = Rat::new(BigInt::one(), ten_d.clone());
        let q = self.approx_within(&eps)?;
        let scaled = round_half_up(&(q * Rat::from_integer(ten_d.clone())));
        Ok(DecimalApprox {
            text: render_scaled(&scaled, digits),
            value: Rat::new(scaled, ten_d.clone()),
            bound: Rat::new(BigInt::from(2), ten_d),
            digits,
        })
    }
}

/// A decimal string `d` with `|d - α| <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalApprox {
    pub text: String,
    pub value: Rat,
    pub bound: Rat,
    pub digits: usize,
}

impl DecimalApprox {
    /// The bound in the compact form `2e-<digits>`.
    pub fn bound_text(&self) -> String {
        format_bound(&self.bound)
    }
}

impl fmt::Display for DecimalApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.text, self.bound_text())
    }
}

/// Renders `m / 10^k` as `me-k` when the bound has that shape, otherwise as a fraction.
pub fn format_bound(bound: &Rat) -> String {
    if bound.is_zero() {
        return "0".to_string();
    }
    let mut den = bound.denom().clone();
    let mut k = 0u32;
    let ten = BigInt::from(10u32);
    let mut num = bound.numer().clone();
    loop {
        if den.is_one() {
            break;
        }
        if (&den % &ten).is_zero() {
            den /= &ten;
            k += 1;
        } else if (&den % 2u32).is_zero() {
            den /= 2u32;
            num *= 5u32;
            k += 1;
        } else if (&den % 5u32).is_zero() {
            den /= 5u32;
            num *= 2u32;
            k += 1;
        } else {
            return bound.to_string();
        }
    }
    if k == 0 {
        num.to_string()
    } else {
        format!("{num}e-{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    /// `√2` via Newton-free bisection on exact rationals, as a test oracle.
    fn sqrt2_approx(x: &Nat) -> Rat {
        let eps = inv_succ(x);
        let (mut lo, mut hi) = (rat(1, 1), rat(2, 1));
        while &hi - &lo > eps {
            let m = (&lo + &hi) / rat_int(2);
            if &m * &m < rat_int(2) {
                lo = m;
            } else {
                hi = m;
            }
        }
        lo
    }

    fn sqrt2() -> CReal {
        CReal::new(Modulus::Inverse, ClassTag::LowerElementary, "sqrt2", |x| Ok(sqrt2_approx(x)))
    }

    #[test]
    fn schedule_ends_at_budget() {
        assert_eq!(probe_schedule(&n(10)), vec![n(0), n(1), n(3), n(7), n(10)]);
        assert_eq!(probe_schedule(&n(7)), vec![n(0), n(1), n(3), n(7)]);
        assert_eq!(probe_schedule(&n(0)), vec![n(0)]);
    }

    #[test]
    fn rational_modulus_is_exact() {
        let third = CReal::from_rational(rat(1, 3));
        assert_eq!(third.approx_u64(17).unwrap(), rat(1, 3));
        assert_eq!(third.to_decimal(5).unwrap().to_string(), "0.33333 ± 2e-5");
    }

    #[test]
    fn comparisons() {
        let s = sqrt2().opaque();
        let budget = n(10_000);
        assert_eq!(s.cmp_rational(&rat(7, 5), &budget).unwrap(), Comparison::Greater);
        assert_eq!(s.cmp_rational(&rat(3, 2), &budget).unwrap(), Comparison::Less);
        let half = CReal::from_rational(rat(1, 2)).opaque();
        assert_eq!(half.cmp_rational(&rat(1, 2), &budget).unwrap(), Comparison::Unknown);
    }

    #[test]
    fn arithmetic_respects_modulus() {
        let s = sqrt2();
        let three_halves = CReal::from_rational(rat(3, 2)).opaque();
        let sum = s.add(&three_halves);
        let prod = s.mul(&s);
        let recip = s.reciprocal();
        for x in [0u64, 1, 3, 7, 63, 1000] {
            let xn = n(x);
            let m = inv_succ(&xn);
            let exact_prod = rat_int(2);
            assert!((prod.approx(&xn).unwrap() - &exact_prod).abs() <= m);
            let truth = sqrt2_approx(&n(1_000_000));
            let slack = rat(1, 1_000_000);
            let err = (sum.approx(&xn).unwrap() - (&truth + rat(3, 2))).abs();
            assert!(err <= &m + &slack);
            let err = (recip.approx(&xn).unwrap() - &truth / rat_int(2)).abs();
            assert!(err <= &m + &slack);
        }
    }

    #[test]
    fn fueled_reciprocal_of_zero_exhausts() {
        let z = CReal::from_rational(Rat::zero()).opaque();
        assert!(matches!(
            z.try_reciprocal(&n(1000)),
            Err(RealError::FuelExhausted { .. })
        ));
    }

    #[test]
    fn bound_formatting() {
        assert_eq!(format_bound(&rat(2, 1_000_000)), "2e-6");
        assert_eq!(format_bound(&rat(1, 4)), "25e-2");
        assert_eq!(format_bound(&rat(1, 3)), "1/3");
        assert_eq!(format_bound(&rat(3, 1)), "3");
    }

    #[test]
    fn decimal_of_negative_values() {
        let d = CReal::from_rational(rat(-2, 3)).to_decimal(3).unwrap();
        assert_eq!(d.text, "-0.667");
    }

    #[test]
    fn dyadic_modulus_index() {
        assert_eq!(Modulus::DyadicExp.index_for_inverse(&n(0)), n(0));
        assert_eq!(Modulus::DyadicExp.index_for_inverse(&n(1)), n(1));
        assert_eq!(Modulus::DyadicExp.index_for_inverse(&n(2)), n(2));
        assert_eq!(Modulus::DyadicExp.index_for_inverse(&n(3)), n(2));
        assert_eq!(Modulus::Inverse.index_for(&rat(1, 1000)), n(999));
    }
}
