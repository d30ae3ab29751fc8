//! F-sequences: rational sequences `(f(x) - g(x)) / (h(x) + 1)` presented by
//! natural-number functions, and their two-argument variants.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::class::ClassTag;
use crate::exact::{monus, nat_to_int, Nat, Rat};
use crate::term::{eval_term, FunctionTerm, TermError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FseqError {
    #[error("reciprocal of a sequence that takes the value zero at index {0}")]
    ZeroValue(Nat),
    #[error("term evaluation failed: {0}")]
    Term(#[from] TermError),
    #[error("{0}")]
    Arity(String),
    #[error("index too large: {0}")]
    IndexTooLarge(String),
    #[error("inner approximation failed: {0}")]
    Inner(String),
}

/// The three natural numbers `(f, g, h)` presenting `(f - g) / (h + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub f: Nat,
    pub g: Nat,
    pub h: Nat,
}

impl Triple {
    pub fn new(f: Nat, g: Nat, h: Nat) -> Self {
        Triple { f, g, h }
    }

    pub fn value(&self) -> Rat {
        Rat::new(
            nat_to_int(&self.f) - nat_to_int(&self.g),
            nat_to_int(&self.h) + 1,
        )
    }

    /// Triple presenting the rational `q` (`h + 1` is the denominator of `q`).
    pub fn from_rational(q: &Rat) -> Self {
        let num = q.numer();
        let h = (q.denom() - 1u32)
            .to_biguint()
            .expect("denominators are positive");
        let mag = num.magnitude().clone();
        if num < &BigInt::zero() {
            Triple::new(Nat::zero(), mag, h)
        } else {
            Triple::new(mag, Nat::zero(), h)
        }
    }
}

type TripleFn1 = Arc<dyn Fn(&Nat) -> Result<Triple, FseqError> + Send + Sync>;
type TripleFn2 = Arc<dyn Fn(&Nat, &Nat) -> Result<Triple, FseqError> + Send + Sync>;
/// For a first argument `x`, an index `N` with `f(x, n) = g(x, n) = 0` for all `n >= N`.
pub type SupportFn = Arc<dyn Fn(&Nat) -> Option<u64> + Send + Sync>;

/// Unary F-sequence.
#[derive(Clone)]
pub struct FSequence {
    triple: TripleFn1,
    class: ClassTag,
}

impl fmt::Debug for FSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FSequence").field("class", &self.class).finish()
    }
}

fn eval_unary(t: &FunctionTerm, x: &Nat) -> Result<Nat, FseqError> {
    Ok(eval_term(t, std::slice::from_ref(x))?)
}

fn check_arity(t: &FunctionTerm, want: usize) -> Result<(), FseqError> {
    if t.arity() != 0 && t.arity() != want {
        return Err(FseqError::Arity(format!(
            "term `{t}` has arity {}, expected {want}",
            t.arity()
        )));
    }
    Ok(())
}

impl FSequence {
    pub fn from_fn<F>(class: ClassTag, triple: F) -> Self
    where
        F: Fn(&Nat) -> Result<Triple, FseqError> + Send + Sync + 'static,
    {
        FSequence {
            triple: Arc::new(triple),
            class,
        }
    }

    /// Builds the sequence from three unary terms; the class is their join.
    pub fn from_terms(f: FunctionTerm, g: FunctionTerm, h: FunctionTerm) -> Result<Self, FseqError> {
        for t in [&f, &g, &h] {
            check_arity(t, 1)?;
        }
        let class = ClassTag::join_all([f.classify(), g.classify(), h.classify()]);
        Ok(Self::from_fn(class, move |x| {
            Ok(Triple::new(
                eval_unary(&f, x)?,
                eval_unary(&g, x)?,
                eval_unary(&h, x)?,
            ))
        }))
    }

    /// The constant sequence `q`.
    pub fn from_rational(q: &Rat) -> Self {
        let t = Triple::from_rational(q);
        Self::from_fn(ClassTag::LowerElementary, move |_| Ok(t.clone()))
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn triple(&self, x: &Nat) -> Result<Triple, FseqError> {
        (self.triple)(x)
    }

    pub fn eval(&self, x: &Nat) -> Result<Rat, FseqError> {
        Ok(self.triple(x)?.value())
    }

    pub fn eval_u64(&self, x: u64) -> Result<Rat, FseqError> {
        self.eval(&Nat::from(x))
    }
}

/// Two-argument F-sequence `(f(x, n) - g(x, n)) / (h(x, n) + 1)`.
#[derive(Clone)]
pub struct F2Sequence {
    triple: TripleFn2,
    class: ClassTag,
    support: Option<SupportFn>,
    normalized: bool,
}

impl fmt::Debug for F2Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("F2Sequence")
            .field("class", &self.class)
            .field("normalized", &self.normalized)
            .field("has_support", &self.support.is_some())
            .finish()
    }
}

impl F2Sequence {
    pub fn from_fn<F>(class: ClassTag, triple: F) -> Self
    where
        F: Fn(&Nat, &Nat) -> Result<Triple, FseqError> + Send + Sync + 'static,
    {
        F2Sequence {
            triple: Arc::new(triple),
            class,
            support: None,
            normalized: false,
        }
    }

    /// Builds a sequence whose denominator is `x + 1`; `num(x, n)` returns `(f, g)`.
    pub fn normalized_from_fn<F>(class: ClassTag, num: F) -> Self
    where
        F: Fn(&Nat, &Nat) -> Result<(Nat, Nat), FseqError> + Send + Sync + 'static,
    {
        F2Sequence {
            triple: Arc::new(move |x, n| {
                let (f, g) = num(x, n)?;
                Ok(Triple::new(f, g, x.clone()))
            }),
            class,
            support: None,
            normalized: true,
        }
    }

    pub fn from_terms(f: FunctionTerm, g: FunctionTerm, h: FunctionTerm) -> Result<Self, FseqError> {
        for t in [&f, &g, &h] {
            check_arity(t, 2)?;
        }
        let class = ClassTag::join_all([f.classify(), g.classify(), h.classify()]);
        Ok(Self::from_fn(class, move |x, n| {
            let args = [x.clone(), n.clone()];
            Ok(Triple::new(
                eval_term(&f, &args)?,
                eval_term(&g, &args)?,
                eval_term(&h, &args)?,
            ))
        }))
    }

    /// Declares where the numerators vanish; see [`SupportFn`].
    pub fn with_support<S>(mut self, support: S) -> Self
    where
        S: Fn(&Nat) -> Option<u64> + Send + Sync + 'static,
    {
        self.support = Some(Arc::new(support));
        self
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    /// `true` when `h(x, n) = x` by construction.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn support(&self, x: &Nat) -> Option<u64> {
        self.support.as_ref().and_then(|s| s(x))
    }

    pub fn triple(&self, x: &Nat, n: &Nat) -> Result<Triple, FseqError> {
        (self.triple)(x, n)
    }

    pub fn eval(&self, x: &Nat, n: &Nat) -> Result<Rat, FseqError> {
        Ok(self.triple(x, n)?.value())
    }

    pub fn eval_u64(&self, x: u64, n: u64) -> Result<Rat, FseqError> {
        self.eval(&Nat::from(x), &Nat::from(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqOp {
    Add,
    Sub,
    Mul,
}

/// Pointwise sum, difference or product, presented again by naturals.
pub fn combine(a: &FSequence, b: &FSequence, op: SeqOp) -> FSequence {
    let (a, b) = (a.clone(), b.clone());
    let class = a.class.join(b.class);
    FSequence::from_fn(class, move |x| {
        let s = a.triple(x)?;
        let t = b.triple(x)?;
        let ds = &s.h + 1u32;
        let dt = &t.h + 1u32;
        let h = &ds * &dt - 1u32;
        let (f, g) = match op {
            SeqOp::Add => (&s.f * &dt + &t.f * &ds, &s.g * &dt + &t.g * &ds),
            SeqOp::Sub => (&s.f * &dt + &t.g * &ds, &s.g * &dt + &t.f * &ds),
            SeqOp::Mul => (&s.f * &t.f + &s.g * &t.g, &s.f * &t.g + &s.g * &t.f),
        };
        Ok(Triple::new(f, g, h))
    })
}

/// Pointwise reciprocal; evaluation fails at any index where the value is zero.
pub fn reciprocal(a: &FSequence) -> FSequence {
    let a = a.clone();
    let class = a.class;
    FSequence::from_fn(class, move |x| {
        let t = a.triple(x)?;
        let d = &t.h + 1u32;
        if t.f > t.g {
            Ok(Triple::new(d, Nat::zero(), &t.f - &t.g - 1u32))
        } else if t.g > t.f {
            Ok(Triple::new(Nat::zero(), d, &t.g - &t.f - 1u32))
        } else {
            Err(FseqError::ZeroValue(x.clone()))
        }
    })
}

/// A reindexing map `x ↦ φ(x)` with its class.
#[derive(Clone)]
pub struct Reindex {
    map: Arc<dyn Fn(&Nat) -> Nat + Send + Sync>,
    class: ClassTag,
}

impl Reindex {
    pub fn new<F>(class: ClassTag, map: F) -> Self
    where
        F: Fn(&Nat) -> Nat + Send + Sync + 'static,
    {
        Reindex {
            map: Arc::new(map),
            class,
        }
    }

    /// `x ↦ k·x + c`.
    pub fn affine(k: u64, c: u64) -> Self {
        Reindex::new(ClassTag::LowerElementary, move |x| x * k + c)
    }

    pub fn apply(&self, x: &Nat) -> Nat {
        (self.map)(x)
    }
}

/// `x ↦ a(φ(x))`.
pub fn compose_reindex(a: &FSequence, phi: &Reindex) -> FSequence {
    let a = a.clone();
    let phi = phi.clone();
    let class = a.class.join(phi.class);
    FSequence::from_fn(class, move |x| a.triple(&phi.apply(x)))
}

/// `C(i, j) = floor(i / (j + 1) + 1/2)`.
pub fn round_div(i: &Nat, j: &Nat) -> Nat {
    if let (Some(i), Some(j)) = (i.to_u64(), j.to_u64()) {
        let (i, d) = (i as u128, j as u128 + 1);
        return Nat::from((2 * i + d) / (2 * d));
    }
    let d = j + 1u32;
    (i * 2u32 + &d).div_floor(&(d * 2u32))
}

fn normalized_pair(x: &Nat, t: &Triple) -> (Nat, Nat) {
    if t.g.is_zero() || t.f.is_zero() {
        let scale = x + 1u32;
        let r = round_div(&(&scale * (&t.f + &t.g)), &t.h);
        return if t.g.is_zero() { (r, Nat::zero()) } else { (Nat::zero(), r) };
    }
    let scale = x + 1u32;
    let f = round_div(&(&scale * monus(&t.f, &t.g)), &t.h);
    let g = round_div(&(&scale * monus(&t.g, &t.f)), &t.h);
    (f, g)
}

/// Rewrites `a` so that its denominator is `x + 1`.
///
/// If `|a(x, n) - α(n)| <= 1/(x+1)` for all `x`, the result satisfies the
/// same bound with `h(x, n) = x`.
pub fn normalize_denominator(a: &F2Sequence) -> F2Sequence {
    let inner = a.clone();
    let support = a.support.clone();
    let mut out = F2Sequence::normalized_from_fn(a.class, move |x, n| {
        let t = inner.triple(&(x * 2u32 + 1u32), n)?;
        Ok(normalized_pair(x, &t))
    });
    if let Some(s) = support {
        out = out.with_support(move |x| s(&(x * 2u32 + 1u32)));
    }
    out
}

/// Unary form of [`normalize_denominator`].
pub fn normalize_unary(a: &FSequence) -> FSequence {
    let inner = a.clone();
    FSequence::from_fn(a.class, move |x| {
        let t = inner.triple(&(x * 2u32 + 1u32))?;
        let (f, g) = normalized_pair(x, &t);
        Ok(Triple::new(f, g, x.clone()))
    })
}

/// Normalization with a strict error: if `|a(x) - α| <= 1/(x+1)` then the
/// result satisfies `|b(x) - α| < 1/(x+1)` with denominator `x + 1`.
pub fn strict_normalize(a: &FSequence) -> FSequence {
    let inner = a.clone();
    FSequence::from_fn(a.class, move |x| {
        let t = inner.triple(&((x + 1u32) * 2u32 + 1u32))?;
        let (f, g) = normalized_pair(x, &t);
        Ok(Triple::new(f, g, x.clone()))
    })
}
