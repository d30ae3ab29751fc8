//! Independent reference values for the integration suites.
//!
//! Nothing here calls into the library: every constant is an exact rational
//! interval built from textbook series with explicit remainder bounds, using
//! fixed-point floor/ceil accumulation so long sums stay cheap.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

/// `1 / (x + 1)`.
pub fn inv_succ(x: u64) -> Q {
    Q::new(BigInt::one(), BigInt::from(x) + 1)
}

pub fn pow2_neg(k: u64) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Iv {
    pub lo: Q,
    pub hi: Q,
}

impl Iv {
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "oracle interval out of order");
        Iv { lo, hi }
    }

    pub fn point(v: Q) -> Self {
        Iv { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        Iv::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Iv {
        Iv::new(-&self.hi, -&self.lo)
    }

    pub fn add_q(&self, c: &Q) -> Iv {
        Iv::new(&self.lo + c, &self.hi + c)
    }

    pub fn scale(&self, c: &Q) -> Iv {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Iv::new(a, b)
        } else {
            Iv::new(b, a)
        }
    }

    pub fn mul(&self, o: &Iv) -> Iv {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Iv::new(lo, hi)
    }

    pub fn recip(&self) -> Iv {
        assert!(self.lo.is_positive() || self.hi.is_negative(), "reciprocal of an interval around 0");
        Iv::new(self.hi.recip(), self.lo.recip())
    }

    /// Rounds the endpoints outward to multiples of `2^-bits`.
    pub fn outward(&self, bits: usize) -> Iv {
        let d = BigInt::one() << bits;
        let lo = (&self.lo * qi(d.clone())).floor().to_integer();
        let hi = (&self.hi * qi(d.clone())).ceil().to_integer();
        Iv::new(Q::new(lo, d.clone()), Q::new(hi, d))
    }

    /// Widens by `r` on both sides.
    pub fn widen(&self, r: &Q) -> Iv {
        Iv::new(&self.lo - r, &self.hi + r)
    }

    pub fn contains(&self, v: &Q) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mid();
        m.numer().to_string().parse::<f64>().unwrap() / m.denom().to_string().parse::<f64>().unwrap()
    }
}

/// True when every point of `truth` lies within `r` of `a`.
pub fn within(a: &Q, truth: &Iv, r: &Q) -> bool {
    &(a - r) <= &truth.lo && &truth.hi <= &(a + r)
}

/// Sum of rationals with each term rounded outward to a multiple of `2^-bits`.
pub struct FixedSum {
    bits: usize,
    lo: BigInt,
    hi: BigInt,
}

impl FixedSum {
    pub fn new(bits: usize) -> Self {
        FixedSum {
            bits,
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        }
    }

    pub fn add(&mut self, num: &BigInt, den: &BigInt) {
        assert!(den.is_positive());
        let scaled = num << self.bits;
        let (fl, rem) = scaled.div_mod_floor(den);
        self.lo += &fl;
        self.hi += if rem.is_zero() { fl } else { fl + 1 };
    }

    pub fn add_q(&mut self, t: &Q) {
        self.add(t.numer(), t.denom());
    }

    pub fn interval(&self) -> Iv {
        let d = BigInt::one() << self.bits;
        Iv::new(Q::new(self.lo.clone(), d.clone()), Q::new(self.hi.clone(), d))
    }
}

const BITS: usize = 256;

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |a, k| a * k)
}

/// `e = Σ 1/n!`, tail after `n = 60` at most `2/61!`.
pub fn e() -> Iv {
    let mut s = FixedSum::new(BITS);
    for n in 0..=60 {
        s.add(&BigInt::one(), &factorial(n));
    }
    let iv = s.interval();
    Iv::new(iv.lo, iv.hi + Q::new(2.into(), factorial(61)))
}

/// `1/e = Σ (-1)^n/n!`, alternating.
pub fn exp_neg1() -> Iv {
    let mut s = FixedSum::new(BITS);
    for n in 0..=60u64 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        s.add(&BigInt::from(sign), &factorial(n));
    }
    s.interval().widen(&Q::new(1.into(), factorial(61)))
}

/// `arctan(1/k)` by its alternating series.
fn arctan_inv(k: u64, terms: u64) -> Iv {
    let mut s = FixedSum::new(BITS);
    let k = BigInt::from(k);
    for n in 0..terms {
        let den = BigInt::from(2 * n + 1) * k.pow(2 * n as u32 + 1);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        s.add(&BigInt::from(sign), &den);
    }
    let next = Q::new(1.into(), BigInt::from(2 * terms + 1) * k.pow(2 * terms as u32 + 1));
    s.interval().widen(&next)
}

/// Machin: `π = 16 arctan(1/5) - 4 arctan(1/239)`.
pub fn pi() -> Iv {
    arctan_inv(5, 60).scale(&qi(16)).sub(&arctan_inv(239, 30).scale(&qi(4)))
}

/// `ln 2 = Σ_{k>=1} 1/(k 2^k)`, tail after `N` at most `1/((N+1)2^N)`.
pub fn ln2() -> Iv {
    let n_max = 300u64;
    let mut s = FixedSum::new(BITS);
    for k in 1..=n_max {
        s.add(&BigInt::one(), &(BigInt::from(k) << k as usize));
    }
    let iv = s.interval();
    let tail = Q::new(1.into(), BigInt::from(n_max + 1) << n_max as usize);
    Iv::new(iv.lo, iv.hi + tail)
}

pub fn ln_rat(r: &Q) -> Iv {
    ln_rat_bits(r, BITS)
}

/// `ln r = 2 atanh((r-1)/(r+1))` for rational `r > 0`, in fixed point, to
/// width about `2^-bits`.
pub fn ln_rat_bits(r: &Q, bits: usize) -> Iv {
    assert!(r.is_positive());
    if r.is_one() {
        return Iv::point(Q::zero());
    }
    if r < &Q::one() {
        return ln_rat_bits(&r.recip(), bits).neg();
    }
    let s_bits = bits + 64;
    let y = (r - Q::one()) / (r + Q::one());
    let y2 = &y * &y;
    let (yn, yd) = (y2.numer().clone(), y2.denom().clone());
    let scaled = y.numer() << s_bits;
    let mut p_lo = scaled.div_floor(y.denom());
    let mut p_hi = -((-scaled).div_floor(y.denom()));
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let stop = BigInt::one() << 40;
    let mut k = 0u64;
    while p_hi > stop {
        let d = BigInt::from(2 * k + 1);
        lo += p_lo.div_floor(&d);
        hi += -((-&p_hi).div_floor(&d));
        p_lo = (&p_lo * &yn).div_floor(&yd);
        p_hi = -((-(&p_hi * &yn)).div_floor(&yd));
        k += 1;
    }
    // Remaining terms are bounded by p/((2k+1)(1 - y²)).
    let tail = Q::new(p_hi, BigInt::one() << s_bits) / (qi(2 * k + 1) * (Q::one() - &y2));
    let den = BigInt::one() << s_bits;
    Iv::new(Q::new(lo, den.clone()), Q::new(hi, den) + tail)
        .scale(&qi(2))
        .outward(bits)
}

/// `ln` is increasing, so the endpoints map to an enclosure.
pub fn ln_iv(x: &Iv) -> Iv {
    let x = x.outward(100);
    Iv::new(ln_rat(&x.lo).lo, ln_rat(&x.hi).hi)
}

/// `ln N` for a natural `N >= 1`.
pub fn ln_nat(n: u64) -> Iv {
    if n == 1 {
        return Iv::point(Q::zero());
    }
    ln_rat(&qi(n))
}

/// Catalan's constant by its alternating series, `2·10^5` terms.
pub fn catalan() -> Iv {
    static CELL: OnceLock<Iv> = OnceLock::new();
    CELL.get_or_init(|| {
        let terms = 200_000u64;
        let mut s = FixedSum::new(BITS);
        for n in 0..terms {
            let d = BigInt::from(2 * n + 1);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            s.add(&BigInt::from(sign), &(&d * &d));
        }
        let d = BigInt::from(2 * terms + 1);
        s.interval().widen(&Q::new(1.into(), &d * &d))
    })
    .clone()
}

/// `ζ(k)` by direct summation plus the integral bracket of the tail.
pub fn zeta(k: u32) -> Iv {
    assert!(k >= 2);
    let n_max: u64 = match k {
        2 => 200_000,
        3 => 20_000,
        _ => 2_000,
    };
    let mut s = FixedSum::new(BITS);
    for n in 1..=n_max {
        s.add(&BigInt::one(), &BigInt::from(n).pow(k));
    }
    let km1 = BigInt::from(k - 1);
    let lo_tail = Q::new(1.into(), &km1 * BigInt::from(n_max + 1).pow(k - 1));
    let hi_tail = Q::new(1.into(), &km1 * BigInt::from(n_max).pow(k - 1));
    let iv = s.interval();
    Iv::new(iv.lo + lo_tail, iv.hi + hi_tail)
}

pub fn zeta_cached(k: u32) -> Iv {
    static CELL: OnceLock<std::sync::Mutex<std::collections::HashMap<u32, Iv>>> = OnceLock::new();
    let m = CELL.get_or_init(Default::default);
    if let Some(v) = m.lock().unwrap().get(&k) {
        return v.clone();
    }
    let v = zeta(k);
    m.lock().unwrap().insert(k, v.clone());
    v
}

/// Euler–Maclaurin at `N = 1024` with `ln N = 10 ln 2`:
/// `γ = H_N - ln N - 1/(2N) + 1/(12N²) - 1/(120N⁴) + R`, `|R| <= 1/(252 N⁶)`.
pub fn euler_gamma() -> Iv {
    let n = 1024i64;
    let mut h = FixedSum::new(BITS);
    for k in 1..=n {
        h.add(&BigInt::one(), &BigInt::from(k));
    }
    let nn = qi(n);
    let corr = -(nn.recip() / qi(2)) + (&nn * &nn).recip() / qi(12)
        - (&nn * &nn * &nn * &nn).recip() / qi(120);
    let rem = (&nn * &nn * &nn * &nn * &nn * &nn).recip() / qi(252);
    h.interval()
        .sub(&ln2().scale(&qi(10)))
        .add_q(&corr)
        .widen(&rem)
}

/// `Σ_{n>=0} 10^-((n+1)!)`; terms after `n = 4` sum to below `2·10^-720`.
pub fn liouville() -> Iv {
    let mut sum = Q::zero();
    for n in 0..=4u64 {
        let e = factorial(n + 1);
        let e = u32::try_from(e).unwrap();
        sum += Q::new(1.into(), BigInt::from(10u32).pow(e));
    }
    let tail = Q::new(2.into(), BigInt::from(10u32).pow(720));
    Iv::new(sum.clone(), sum + tail)
}

pub fn ln_pi() -> Iv {
    ln_iv(&pi())
}

/// Bisection for the positive root of `x^k - c` bracketed by `[lo, hi]`,
/// where `c` is only known to lie in `target`.
fn kth_root(k: u32, target: &Iv, lo: Q, hi: Q, steps: u32) -> Iv {
    let pow = |x: &Q| num_traits::pow(x.clone(), k as usize);
    // Largest certified-below and smallest certified-above.
    let (mut a, mut b) = (lo.clone(), hi.clone());
    for _ in 0..steps {
        let m = (&a + &b) / qi(2);
        if pow(&m) <= target.lo {
            a = m;
        } else {
            b = m;
        }
    }
    let lower = a;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..steps {
        let m = (&a + &b) / qi(2);
        if pow(&m) >= target.hi {
            b = m;
        } else {
            a = m;
        }
    }
    Iv::new(lower, b)
}

pub fn sqrt2() -> Iv {
    kth_root(2, &Iv::point(qi(2)), qi(1), qi(2), 90)
}

pub fn cbrt_e() -> Iv {
    kth_root(3, &e(), qi(1), qi(2), 90)
}

/// `Ξ_n = 1/(n+1) - ln(1 + 1/(n+1))`.
pub fn xi_euler(n: u64) -> Iv {
    let r = Q::new(BigInt::from(n + 2), BigInt::from(n + 1));
    ln_rat(&r)
        .neg()
        .add_q(&Q::new(1.into(), BigInt::from(n + 1)))
        .outward(BITS)
}

/// Constants keyed by their command-line names.
pub fn by_name(name: &str) -> Iv {
    match name {
        "e" => e(),
        "pi" => pi(),
        "catalan" => catalan(),
        "gamma" => euler_gamma(),
        "liouville" => liouville(),
        "lnpi" => ln_pi(),
        "ln:2" => ln2(),
        _ => {
            if let Some(n) = name.strip_prefix("ln:") {
                return ln_nat(n.parse().unwrap());
            }
            if let Some(k) = name.strip_prefix("zeta:") {
                return zeta_cached(k.parse().unwrap());
            }
            panic!("no oracle for {name}")
        }
    }
}

/// Parses a decimal literal such as `3.14159` exactly.
pub fn dec(s: &str) -> Q {
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (i, f) = body.split_once('.').unwrap_or((body, ""));
    let num: BigInt = format!("{i}{f}").parse().unwrap();
    let v = Q::new(num, BigInt::from(10u32).pow(f.len() as u32));
    if neg {
        -v
    } else {
        v
    }
}

pub fn pow_q(base: u64, e: u64) -> BigInt {
    BigInt::from(base).pow(e as u32)
}

fn alt(n: u64, den: BigInt) -> Iv {
    let v = Q::new(BigInt::one(), den);
    Iv::point(if n % 2 == 1 { -v } else { v })
}

/// Term `α(n)` and limit of each catalog series, computed independently.
pub fn series_reference(name: &str) -> (Box<dyn Fn(u64) -> Iv>, Iv) {
    let factorial = |n: u64| (1..=n).fold(BigInt::one(), |a, k| a * k);
    match name {
        "factorial series" => (Box::new(move |n| Iv::point(Q::new(1.into(), factorial(n)))), e()),
        "Leibniz series" => (
            Box::new(|n| alt(n, BigInt::from(2 * n + 1))),
            pi().scale(&q(1, 4)),
        ),
        "Catalan series" => (Box::new(|n| alt(n, BigInt::from(2 * n + 1).pow(2))), catalan()),
        "Euler double series" => (Box::new(xi_euler), euler_gamma()),
        "zeta series for ln(pi/2)" => (
            Box::new(|n| {
                let w = Q::new(1.into(), BigInt::from(2 * (n + 1)) << (2 * n + 1) as usize);
                zeta_cached(2 * n as u32 + 2).scale(&w)
            }),
            ln_pi().sub(&ln2()),
        ),
        _ => {
            if let Some(rest) = name.strip_prefix("alternating series for ln(1 + 1/") {
                let big_n: u64 = rest.trim_end_matches(')').parse().unwrap();
                let limit = ln_rat(&Q::new(BigInt::from(big_n + 1), BigInt::from(big_n)));
                return (
                    Box::new(move |n| alt(n, BigInt::from(n + 1) * pow_q(big_n, n + 1))),
                    limit,
                );
            }
            if let Some(rest) = name.strip_prefix("zeta series of order ") {
                let k: u32 = rest.parse().unwrap();
                return (
                    Box::new(move |n| Iv::point(Q::new(1.into(), BigInt::from(n + 1).pow(k)))),
                    zeta_cached(k),
                );
            }
            if let Some(rest) = name.strip_prefix("inner Euler series ") {
                let m: u64 = rest.parse().unwrap();
                return (
                    Box::new(move |j| alt(j, BigInt::from(j + 2) * pow_q(m + 1, j + 2))),
                    xi_euler(m),
                );
            }
            panic!("no reference for {name}")
        }
    }
}

/// Exact tail `Σ_{n>ξ} α(n)` of a catalog series, enclosed.
pub fn series_true_tail(name: &str, xi: u64) -> Iv {
    if name == "Liouville series" {
        // Terms after ξ sum to less than 2·10^-(ξ+2)! <= 2·10^-(ξ+2).
        return Iv::new(Q::zero(), Q::new(2.into(), pow_q(10, xi + 2)));
    }
    let (alpha, limit) = series_reference(name);
    let partial = (0..=xi).fold(Iv::point(Q::zero()), |acc, n| acc.add(&alpha(n)).outward(300));
    limit.sub(&partial)
}
