//! Series summation with explicit tail cut-offs, and the constants catalog.

mod catalog;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::class::ClassTag;
use crate::creal::{CReal, Modulus, RealError};
use crate::exact::{ceil_log2, inv_succ, nat_to_int, Nat, Rat, TrackedAccumulator};
use crate::fseq::{normalize_denominator, round_div, F2Sequence, FseqError, Triple};

pub use catalog::{catalog_specs, constant, f_r, ConstantId};
pub use catalog::{
    catalan_spec, e_spec, gamma_inner_spec, gamma_outer_spec, leibniz_spec, liouville_spec,
    ln_pi_spec, ln_step_spec, zeta_spec,
};

/// Tail cut-off `ξ`.
pub type XiFn = Arc<dyn Fn(&Nat) -> Nat + Send + Sync>;

/// A series `Σ α(n)` given by a normalized two-argument sequence for its
/// terms and a cut-off `ξ` with `|Σ_{n > ξ(x)} α(n)| <= 1/(x+1)`.
#[derive(Clone)]
pub struct SeriesSpec {
    pub name: String,
    pub term: F2Sequence,
    xi: XiFn,
    pub class: ClassTag,
}

impl fmt::Debug for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSpec")
            .field("name", &self.name)
            .field("class", &self.class)
            .finish()
    }
}

impl SeriesSpec {
    /// A term sequence without `h(x, n) = x` is normalized first.
    pub fn new<X>(name: impl Into<String>, term: F2Sequence, xi: X, class: ClassTag) -> Self
    where
        X: Fn(&Nat) -> Nat + Send + Sync + 'static,
    {
        let term = if term.is_normalized() {
            term
        } else {
            normalize_denominator(&term)
        };
        SeriesSpec {
            name: name.into(),
            term,
            xi: Arc::new(xi),
            class,
        }
    }

    pub fn xi(&self, x: &Nat) -> Nat {
        (self.xi)(x)
    }

    pub fn xi_u64(&self, x: u64) -> Nat {
        self.xi(&Nat::from(x))
    }
}

/// An exact series term `±p/q` with `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactTerm {
    Small { negative: bool, p: u64, q: u64 },
    Big { negative: bool, p: Nat, q: Nat },
}

impl ExactTerm {
    pub fn new(negative: bool, p: Nat, q: Nat) -> Self {
        match (p.to_u64(), q.to_u64()) {
            (Some(p), Some(q)) => ExactTerm::Small { negative, p, q },
            _ => ExactTerm::Big { negative, p, q },
        }
    }

    pub fn value(&self) -> Rat {
        let (negative, p, q) = match self {
            ExactTerm::Small { negative, p, q } => (*negative, Nat::from(*p), Nat::from(*q)),
            ExactTerm::Big { negative, p, q } => (*negative, p.clone(), q.clone()),
        };
        let v = Rat::new(nat_to_int(&p), nat_to_int(&q));
        if negative {
            -v
        } else {
            v
        }
    }

    /// `C((x+1)p, q-1)`, the rounded numerator over `x + 1`.
    fn rounded_numerator(&self, x: &Nat) -> (bool, Nat) {
        match self {
            ExactTerm::Small { negative, p, q } => {
                let fast = x.to_u64().and_then(|x| {
                    let i = (x as u128 + 1).checked_mul(*p as u128)?;
                    let d = *q as u128;
                    Some((i.checked_mul(2)?.checked_add(d)?) / (2 * d))
                });
                match fast {
                    Some(v) => (*negative, Nat::from(v)),
                    None => (*negative, round_div(&((x + 1u32) * *p), &Nat::from(*q - 1))),
                }
            }
            ExactTerm::Big { negative, p, q } => {
                (*negative, round_div(&((x + 1u32) * p), &(q - 1u32)))
            }
        }
    }
}

/// Normalized sequence for a series with exact terms `alpha(n)`.
///
/// Pointwise equal to `normalize_denominator` applied to the exact
/// presentation `(p, 0, q - 1)` or `(0, p, q - 1)`.
pub fn exact_terms<A>(class: ClassTag, alpha: A) -> F2Sequence
where
    A: Fn(u64) -> ExactTerm + Send + Sync + 'static,
{
    F2Sequence::normalized_from_fn(class, move |x, n| {
        let n = to_u64(n, "term index")?;
        let (negative, v) = alpha(n).rounded_numerator(x);
        Ok(if negative { (Nat::zero(), v) } else { (v, Nat::zero()) })
    })
}

fn to_u64(n: &Nat, what: &str) -> Result<u64, FseqError> {
    n.to_u64()
        .ok_or_else(|| FseqError::IndexTooLarge(format!("{what} {n} exceeds 64 bits")))
}

/// `Σ_{n <= m} (f(y, n), g(y, n))` for a normalized term sequence, skipping
/// indices past the declared support.
fn sum_numerators(term: &F2Sequence, y: &Nat, m: &Nat) -> Result<(Nat, Nat), FseqError> {
    let mut last = m.clone();
    if let Some(s) = term.support(y) {
        if s == 0 {
            return Ok((Nat::zero(), Nat::zero()));
        }
        let cap = Nat::from(s - 1);
        if cap < last {
            last = cap;
        }
    }
    let last = to_u64(&last, "summation bound")?;
    let mut f = Nat::zero();
    let mut g = Nat::zero();
    for n in 0..=last {
        let t = term.triple(y, &Nat::from(n))?;
        debug_assert_eq!(&t.h, y, "partial sums need h(x, n) = x");
        f += t.f;
        g += t.g;
    }
    Ok((f, g))
}

/// Partial sums `(x, m) ↦ Σ_{n <= m} α(n)` with denominator `xm + x + m + 1`.
///
/// Each summand is read at index `xm + x + m`, so the `m + 1` errors add up
/// to at most `1/(x+1)`.
pub fn partial_sums(alpha: &F2Sequence) -> F2Sequence {
    let term = if alpha.is_normalized() {
        alpha.clone()
    } else {
        normalize_denominator(alpha)
    };
    F2Sequence::from_fn(term.class(), move |x, m| {
        let y = x * m + x + m;
        let (f, g) = sum_numerators(&term, &y, m)?;
        Ok(Triple::new(f, g, y))
    })
}

/// The sum of a series, read off the partial sums at `(2x+1, ξ(2x+1))`.
pub fn skordev_sum(spec: &SeriesSpec) -> CReal {
    let spec = spec.clone();
    let class = spec.class.join(spec.term.class());
    let provenance = format!("{}, Skordev summation", spec.name);
    CReal::new(Modulus::Inverse, class, provenance, move |x| {
        let z = x * 2u32 + 1u32;
        let m = spec.xi(&z);
        let y = (&z + 1u32) * (&m + 1u32) - 1u32;
        let (f, g) = sum_numerators(&spec.term, &y, &m)?;
        Ok(Rat::new(nat_to_int(&f) - nat_to_int(&g), nat_to_int(&(y + 1u32))))
    })
}

type CoeffFn = Arc<dyn Fn(u64) -> Rat + Send + Sync>;
type ValueFn = Arc<dyn Fn(u64) -> Result<CReal, RealError> + Send + Sync>;

/// `Σ c(n)·v(n)` with rational weights `c(n)` and real values `v(n)`.
///
/// At index `x` with `ε = 1/(x+1)`, the series is cut where `tail(M) <= ε/4`,
/// term `n` gets the error budget `(3/4)·4^-n·ε/2`, and rounding in the
/// accumulator stays below `ε/8`.
#[derive(Clone)]
pub struct WeightedSeries {
    pub name: String,
    pub class: ClassTag,
    coeff: CoeffFn,
    value: ValueFn,
    tail: CoeffFn,
}

impl WeightedSeries {
    /// `tail(M)` must bound `|Σ_{n > M} c(n)·v(n)|` and tend to zero.
    pub fn new<C, V, T>(name: impl Into<String>, class: ClassTag, coeff: C, value: V, tail: T) -> Self
    where
        C: Fn(u64) -> Rat + Send + Sync + 'static,
        V: Fn(u64) -> Result<CReal, RealError> + Send + Sync + 'static,
        T: Fn(u64) -> Rat + Send + Sync + 'static,
    {
        WeightedSeries {
            name: name.into(),
            class,
            coeff: Arc::new(coeff),
            value: Arc::new(value),
            tail: Arc::new(tail),
        }
    }

    pub fn coeff(&self, n: u64) -> Rat {
        (self.coeff)(n)
    }

    pub fn value(&self, n: u64) -> Result<CReal, RealError> {
        (self.value)(n)
    }

    pub fn tail(&self, m: u64) -> Rat {
        (self.tail)(m)
    }

    fn cutoff(&self, eps: &Rat) -> u64 {
        let target = eps / Rat::from_integer(4.into());
        let mut m = 0u64;
        while self.tail(m) > target {
            m += 1;
        }
        m
    }

    /// Approximation within `1/(x+1)`.
    pub fn approx(&self, x: &Nat) -> Result<Rat, RealError> {
        let eps = inv_succ(x);
        let m = self.cutoff(&eps);
        let bits = ceil_log2(&((x + 1u32) * 8u32)) as u32;
        let mut acc = TrackedAccumulator::new(TrackedAccumulator::scale_for(bits, m + 1));
        let mut beta = Rat::new(3.into(), 8.into()) * &eps;
        for n in 0..=m {
            let c = self.coeff(n);
            if !c.is_zero() {
                let v = self.value(n)?.approx_within(&(&beta / c.abs()))?;
                acc.absorb(&(c * v));
            }
            beta /= Rat::from_integer(4.into());
        }
        debug_assert!(acc.error_bound() * Rat::from_integer(8.into()) <= eps);
        Ok(acc.value())
    }

    pub fn to_creal(&self) -> CReal {
        let me = self.clone();
        let provenance = format!("{}, weighted budget summation", self.name);
        CReal::new(Modulus::Inverse, self.class, provenance, move |x| me.approx(x))
    }
}

impl fmt::Debug for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedSeries")
            .field("name", &self.name)
            .field("class", &self.class)
            .finish()
    }
}

/// Least `r` with `r^k >= n`.
pub(crate) fn ceil_root(n: &Nat, k: u32) -> Nat {
    let r = num_integer::Roots::nth_root(n, k);
    if num_traits::pow(r.clone(), k as usize) < *n {
        r + Nat::one()
    } else {
        r
    }
}
