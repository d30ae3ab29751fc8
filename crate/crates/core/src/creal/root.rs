use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{CReal, Comparison, Modulus, RealError};
use crate::class::ClassTag;
use crate::exact::{ceil_rat, nat_to_int, nat_to_rat, rat_int, Nat, Rat, RatInterval};

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Rat {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        self.coeffs
            .iter()
            .rev()
            .fold(RatInterval::point(Rat::zero()), |acc, c| acc.mul(x).add_rat(c))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    fn scale(&self, q: &Rat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty") / d.lead();
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[shift + i] -= c * &factor;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().recip();
        a.scale(&l)
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn square_free(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let q = self.div_rem(&g).0;
        let l = q.lead().recip();
        q.scale(&l)
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            chain.push(r.scale(&rat_int(-1)));
        }
        chain.pop();
        chain
    }

    /// Upper bound on the absolute value of every real root.
    pub fn cauchy_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        max + Rat::one()
    }
}

fn sign_changes(chain: &[UPoly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// An isolating interval for a single real root; `lo == hi` marks an exact
/// rational root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Rat,
    pub hi: Rat,
}

/// Isolates every real root of a nonzero rational polynomial, in increasing order.
pub fn isolate_real_roots(p: &UPoly) -> Vec<RootBracket> {
    let sf = p.square_free();
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = sf.sturm_chain();
    let b = sf.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        if count == 0 {
            continue;
        }
        if sf.eval(&hi).is_zero() {
            out.push(RootBracket { lo: hi.clone(), hi: hi.clone() });
            if count > 1 {
                let nudged = hi.clone() - (&hi - &lo) / rat_int(1024);
                stack.push((lo, nudged));
            }
            continue;
        }
        if count == 1 && !sf.eval(&lo).is_zero() {
            out.push(RootBracket { lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / rat_int(2);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Coefficient data for evaluating `P` and `P'` with certified enclosures.
struct Coeffs {
    reals: Vec<CReal>,
}

impl Coeffs {
    fn enclosures(&self, y: &Nat) -> Result<Vec<RatInterval>, RealError> {
        self.reals.iter().map(|c| c.enclosure(y)).collect()
    }

    fn approximations(&self, y: &Nat) -> Result<Vec<Rat>, RealError> {
        self.reals.iter().map(|c| c.approx_inverse(y)).collect()
    }
}

fn horner_interval(coeffs: &[RatInterval], x: &RatInterval) -> RatInterval {
    coeffs
        .iter()
        .rev()
        .fold(RatInterval::point(Rat::zero()), |acc, c| acc.mul(x).add(c))
}

fn horner(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn horner_rat_interval(coeffs: &[Rat], x: &RatInterval) -> RatInterval {
    coeffs
        .iter()
        .rev()
        .fold(RatInterval::point(Rat::zero()), |acc, c| acc.mul(x).add_rat(c))
}

fn derivative_intervals(c: &[RatInterval]) -> Vec<RatInterval> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| ci.scale(&rat_int(i as i64)))
        .collect()
}

const DERIVATIVE_PIECES: i64 = 16;

/// Bounds `0 < c <= |P'| <= d` on `[a, b]`, if the enclosure separates `P'` from zero.
fn derivative_bounds(coeffs: &[RatInterval], a: &Rat, b: &Rat) -> Option<(Rat, Rat)> {
    let dp = derivative_intervals(coeffs);
    let step = (b - a) / rat_int(DERIVATIVE_PIECES);
    let mut c: Option<Rat> = None;
    let mut d = Rat::zero();
    let mut sign = 0i8;
    for k in 0..DERIVATIVE_PIECES {
        let lo = a + &step * rat_int(k);
        let hi = a + &step * rat_int(k + 1);
        let e = horner_interval(&dp, &RatInterval::new(lo, hi).expect("ordered"));
        if e.contains_zero() {
            return None;
        }
        let s = if e.is_positive() { 1 } else { -1 };
        if sign != 0 && s != sign {
            return None;
        }
        sign = s;
        let mig = e.mignitude();
        c = Some(match c {
            Some(v) if v < mig => v,
            _ => mig,
        });
        let mag = e.magnitude();
        if mag > d {
            d = mag;
        }
    }
    c.map(|c| (c, d))
}

fn value_at(coeffs: &[CReal], t: &Rat) -> CReal {
    let mut power = Rat::one();
    let mut terms = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        terms.push(c.scale(&power));
        power *= t;
    }
    CReal::sum(&terms)
}

fn sign_of(coeffs: &[CReal], t: &Rat, budget: &Nat) -> Result<Comparison, RealError> {
    value_at(coeffs, t).cmp_rational(&Rat::zero(), budget)
}

/// Leftmost midpoint index `j` in `[j0, j1]` with `|P(X_j)| <= bound`.
#[allow(clippy::too_many_arguments)]
fn leftmost_admissible(
    p: &[Rat],
    a: &Rat,
    half_step: &Rat,
    bound: &Rat,
    j0: &Nat,
    j1: &Nat,
) -> Option<Nat> {
    let point = |j: &Nat| a + half_step * nat_to_rat(&(j * 2u32 + 1u32));
    if j0 == j1 {
        let v = horner(p, &point(j0));
        return (v.abs() <= *bound).then(|| j0.clone());
    }
    let span = RatInterval::new(point(j0), point(j1)).expect("ordered");
    if horner_rat_interval(p, &span).mignitude() > *bound {
        return None;
    }
    let mid: Nat = (j0 + j1) / 2u32;
    leftmost_admissible(p, a, half_step, bound, j0, &mid)
        .or_else(|| leftmost_admissible(p, a, half_step, bound, &(&mid + 1u32), j1))
}

const MAX_BRACKET_REFINEMENTS: usize = 80;

/// The unique root of `Σ coeffs[i]·X^i` in the bracket `[a, b]`.
///
/// The endpoint signs must be certified opposite using comparisons that
/// probe indices up to `budget`, and `P'` must be separable from zero on
/// some sub-bracket still containing the root.
pub fn poly_root(coeffs: &[CReal], a: &Rat, b: &Rat, budget: &Nat) -> Result<CReal, RealError> {
    if a >= b {
        return Err(RealError::InvalidInput("bracket must satisfy a < b".into()));
    }
    if coeffs.len() < 2 {
        return Err(RealError::InvalidInput("polynomial must have degree >= 1".into()));
    }
    let class = ClassTag::join_all(coeffs.iter().map(|c| c.class()));
    let exact: Option<Vec<Rat>> = coeffs.iter().map(|c| c.exact_value().cloned()).collect();
    let coeffs: Vec<CReal> = match &exact {
        Some(qs) => {
            let p = UPoly::new(qs.clone());
            if p.is_zero() {
                return Err(RealError::InvalidInput("zero polynomial".into()));
            }
            for t in [a, b] {
                if p.eval(t).is_zero() {
                    return Ok(CReal::from_rational(t.clone()));
                }
            }
            p.square_free()
                .coeffs()
                .iter()
                .map(|q| CReal::from_rational(q.clone()))
                .collect()
        }
        None => coeffs.to_vec(),
    };

    let sa = sign_of(&coeffs, a, budget)?;
    let sb = sign_of(&coeffs, b, budget)?;
    if sa == Comparison::Unknown || sb == Comparison::Unknown {
        return Err(RealError::FuelExhausted {
            budget: budget.clone(),
            what: "certifying the sign of P at the bracket endpoints".to_string(),
        });
    }
    if sa == sb {
        return Err(RealError::NoSignChange(format!(
            "P has the same sign at {a} and {b}"
        )));
    }

    let data = Coeffs { reals: coeffs };
    let (mut lo, mut hi) = (a.clone(), b.clone());
    let mut precision = Nat::from(1023u32);
    let mut found = None;
    for _ in 0..MAX_BRACKET_REFINEMENTS {
        let enc = data.enclosures(&precision)?;
        if let Some(cd) = derivative_bounds(&enc, &lo, &hi) {
            found = Some(cd);
            break;
        }
        if &precision < budget {
            precision = (precision * 2u32 + 1u32).min(budget.clone());
        }
        let width = &hi - &lo;
        let mut split = None;
        for frac in [rat_int(1) / rat_int(2), Rat::new(3.into(), 8.into()), Rat::new(5.into(), 8.into())] {
            let m = &lo + &width * frac;
            match sign_of(&data.reals, &m, budget)? {
                Comparison::Unknown => continue,
                s => {
                    split = Some((m, s));
                    break;
                }
            }
        }
        let Some((m, s)) = split else {
            return Err(RealError::MultipleRoot(format!(
                "could not decide the sign of P inside [{lo}, {hi}]"
            )));
        };
        if s == sa {
            lo = m;
        } else {
            hi = m;
        }
    }
    let Some((c, d)) = found else {
        return Err(RealError::MultipleRoot(format!(
            "P' could not be separated from zero near the root in [{a}, {b}]"
        )));
    };

    let m = if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
    let mut q = Rat::zero();
    let mut power = Rat::one();
    for r in &data.reals {
        if r.exact_value().is_none() {
            q += &power;
        }
        power *= &m;
    }
    let width = &hi - &lo;
    let spread = &d * &width;
    let l = ceil_rat(&((&spread + &q * rat_int(4)) / (&c * rat_int(2))));
    let l = if l < BigInt::one() { BigInt::one() } else { l };
    let l = l.to_biguint().expect("positive");

    let provenance = format!("root of a degree-{} polynomial in [{a}, {b}]", data.reals.len() - 1);
    Ok(CReal::new(Modulus::Inverse, class, provenance, move |x| {
        let y = &l * x + &l;
        let p = data.approximations(&y)?;
        let y1 = nat_to_int(&(&y + 1u32));
        let bound = (&spread + &q * rat_int(2)) / Rat::from_integer(&y1 * 2);
        let half_step = &width / Rat::from_integer(y1 * 2);
        leftmost_admissible(&p, &lo, &half_step, &bound, &Nat::zero(), &y)
            .map(|j| &lo + &half_step * nat_to_rat(&(j * 2u32 + 1u32)))
            .ok_or_else(|| {
                RealError::MultipleRoot("no admissible midpoint; the bracket holds no simple root".into())
            })
    }))
}
