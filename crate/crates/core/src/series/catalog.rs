use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};
use parking_lot::Mutex;

use super::{ceil_root, exact_terms, skordev_sum, ExactTerm, SeriesSpec, WeightedSeries};
use crate::class::ClassTag;
use crate::creal::{CReal, Modulus, RealError};
use crate::exact::{ceil_log2, rat_int, Int, Nat, Rat};
use crate::fseq::{normalize_denominator, F2Sequence, FseqError, Triple};

/// Named constants with a series construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantId {
    E,
    Pi,
    /// `ln N`, `N >= 1`.
    LnN(u64),
    CatalanG,
    EulerGamma,
    LiouvilleL,
    /// `ζ(k)`, `k >= 2`.
    Zeta(u32),
    LnPi,
}

impl fmt::Display for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantId::E => write!(f, "e"),
            ConstantId::Pi => write!(f, "pi"),
            ConstantId::LnN(n) => write!(f, "ln:{n}"),
            ConstantId::CatalanG => write!(f, "catalan"),
            ConstantId::EulerGamma => write!(f, "gamma"),
            ConstantId::LiouvilleL => write!(f, "liouville"),
            ConstantId::Zeta(k) => write!(f, "zeta:{k}"),
            ConstantId::LnPi => write!(f, "lnpi"),
        }
    }
}

impl FromStr for ConstantId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let param = |prefix: &str| -> Option<Result<u64, String>> {
            s.strip_prefix(prefix).map(|rest| {
                rest.parse::<u64>()
                    .map_err(|_| format!("`{s}`: expected a natural number after `{prefix}`"))
            })
        };
        if let Some(n) = param("ln:") {
            return Ok(ConstantId::LnN(n?));
        }
        if let Some(k) = param("zeta:") {
            let k = u32::try_from(k?).map_err(|_| format!("`{s}`: order too large"))?;
            return Ok(ConstantId::Zeta(k));
        }
        match s.as_str() {
            "e" => Ok(ConstantId::E),
            "pi" => Ok(ConstantId::Pi),
            "catalan" => Ok(ConstantId::CatalanG),
            "gamma" => Ok(ConstantId::EulerGamma),
            "liouville" => Ok(ConstantId::LiouvilleL),
            "lnpi" => Ok(ConstantId::LnPi),
            _ => Err(format!(
                "unknown constant `{s}` (expected e, pi, ln:N, catalan, gamma, liouville, zeta:K or lnpi)"
            )),
        }
    }
}

fn inner_error(e: RealError) -> FseqError {
    match e {
        RealError::Fseq(inner) => inner,
        other => FseqError::Inner(other.to_string()),
    }
}

fn identity(x: &Nat) -> Nat {
    x.clone()
}

fn small(n: &Nat) -> u64 {
    n.to_u64().expect("term index fits in 64 bits")
}

fn factorial(k: u64) -> Nat {
    (2..=k).fold(Nat::one(), |acc, i| acc * i)
}

/// `Σ 1/n!` with `f(x, n) = floor((x+1)/n!)` and `ξ(0) = 1, ξ(1) = 2, ξ(x) = x`.
pub fn e_spec() -> SeriesSpec {
    let term = F2Sequence::normalized_from_fn(ClassTag::LowerElementary, |x, n| {
        let n = small(n);
        let mut fact = Nat::one();
        for i in 2..=n {
            fact *= i;
            if fact > x + 1u32 {
                return Ok((Nat::zero(), Nat::zero()));
            }
        }
        Ok(((x + 1u32) / fact, Nat::zero()))
    })
    .with_support(|x| {
        let limit = x + 1u32;
        let mut fact = Nat::one();
        let mut n = 0u64;
        while fact <= limit {
            n += 1;
            fact *= n;
        }
        Some(n)
    });
    let xi = |x: &Nat| match x.to_u64() {
        Some(0) => Nat::one(),
        Some(1) => Nat::from(2u32),
        _ => x.clone(),
    };
    SeriesSpec::new("factorial series", term, xi, ClassTag::LowerElementary)
}

/// `Σ 10^-(n+1)!` with `ξ(x) = x`.
pub fn liouville_spec() -> SeriesSpec {
    let term = exact_terms(ClassTag::LowerElementary, |n| {
        let e = factorial(n + 1);
        let e = usize::try_from(e).expect("exponent below the support is small");
        ExactTerm::new(false, Nat::one(), num_traits::pow(Nat::from(10u32), e))
    })
    .with_support(|x| {
        // 10^d > 2(x+1) once d >= bits·log10(2).
        let bits = (x * 2u32 + 2u32).bits();
        let digits = bits * 30103 / 100_000 + 1;
        let mut n = 0u64;
        let mut fact = 1u64;
        while fact < digits {
            n += 1;
            fact *= n + 1;
        }
        Some(n)
    });
    SeriesSpec::new("Liouville series", term, identity, ClassTag::LowerElementary)
}

/// `π/4 = Σ (-1)^n/(2n+1)` with `ξ(x) = x`.
pub fn leibniz_spec() -> SeriesSpec {
    let term = exact_terms(ClassTag::LowerElementary, |n| ExactTerm::Small {
        negative: n % 2 == 1,
        p: 1,
        q: 2 * n + 1,
    });
    SeriesSpec::new("Leibniz series", term, identity, ClassTag::LowerElementary)
}

/// `ln(1 + 1/N) = Σ (-1)^n/((n+1)N^(n+1))` with `ξ(x) = x`.
pub fn ln_step_spec(big_n: u64) -> SeriesSpec {
    assert!(big_n >= 1, "ln step needs N >= 1");
    let mut term = exact_terms(ClassTag::LowerElementary, move |n| {
        let k = n + 1;
        if big_n == 1 {
            return ExactTerm::Small { negative: n % 2 == 1, p: 1, q: k };
        }
        let den = Nat::from(k) * num_traits::pow(Nat::from(big_n), k as usize);
        ExactTerm::new(n % 2 == 1, Nat::one(), den)
    });
    if big_n >= 2 {
        // |α(n)| <= 2^-(n+1), below 1/(2(x+1)) once 2^n > x+1.
        term = term.with_support(|x| Some((x + 1u32).bits()));
    }
    SeriesSpec::new(
        format!("alternating series for ln(1 + 1/{big_n})"),
        term,
        identity,
        ClassTag::LowerElementary,
    )
}

/// `G = Σ (-1)^n/(2n+1)^2` with `ξ(x) = x`.
pub fn catalan_spec() -> SeriesSpec {
    let term = exact_terms(ClassTag::LowerElementary, |n| {
        let d = Nat::from(2 * n + 1);
        ExactTerm::new(n % 2 == 1, Nat::one(), &d * &d)
    });
    SeriesSpec::new("Catalan series", term, identity, ClassTag::LowerElementary)
}

/// `ζ(k) = Σ 1/(n+1)^k` with `ξ(x) = ceil((x+1)^(1/(k-1)))`.
pub fn zeta_spec(k: u32) -> SeriesSpec {
    assert!(k >= 2, "zeta needs k >= 2");
    let term = exact_terms(ClassTag::LowerElementary, move |n| {
        ExactTerm::new(false, Nat::one(), num_traits::pow(Nat::from(n + 1), k as usize))
    })
    .with_support(move |x| {
        let r = num_integer::Roots::nth_root(&(x * 2u32 + 2u32), k);
        r.to_u64()
    });
    SeriesSpec::new(
        format!("zeta series of order {k}"),
        term,
        move |x| ceil_root(&(x + 1u32), k - 1),
        ClassTag::LowerElementary,
    )
}

/// `Ξ_n = 1/(n+1) - ln(1 + 1/(n+1)) = Σ_m (-1)^m/((m+2)(n+1)^(m+2))` with `ξ(x) = x`.
pub fn gamma_inner_spec(outer: u64) -> SeriesSpec {
    let mut term = exact_terms(ClassTag::LowerElementary, move |m| {
        let e = m + 2;
        if outer == 0 {
            return ExactTerm::Small { negative: m % 2 == 1, p: 1, q: e };
        }
        let den = Nat::from(e) * num_traits::pow(Nat::from(outer + 1), e as usize);
        ExactTerm::new(m % 2 == 1, Nat::one(), den)
    });
    if outer >= 1 {
        // |α(m)| <= 2^-(m+3), below 1/(2(x+1)) once 2^(m+2) > x+1.
        term = term.with_support(|x| Some((x + 1u32).bits()));
    }
    SeriesSpec::new(
        format!("inner Euler series {outer}"),
        term,
        identity,
        ClassTag::LowerElementary,
    )
}

fn gamma_inner(outer: u64) -> CReal {
    static CACHE: OnceLock<Mutex<Vec<CReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut v = cache.lock();
    while v.len() as u64 <= outer {
        let n = v.len() as u64;
        v.push(skordev_sum(&gamma_inner_spec(n)));
    }
    v[outer as usize].clone()
}

/// `γ = Σ_n Ξ_n` with `ξ(x) = x`; the outer terms are the inner sums' approximations.
pub fn gamma_outer_spec() -> SeriesSpec {
    let raw = F2Sequence::from_fn(ClassTag::LowerElementary, |z, n| {
        let q = gamma_inner(small(n)).approx(z).map_err(inner_error)?;
        Ok(Triple::from_rational(&q))
    });
    SeriesSpec::new(
        "Euler double series",
        normalize_denominator(&raw),
        identity,
        ClassTag::LowerElementary,
    )
}

/// `f_R(k) = ζ(k + 2)`.
pub fn f_r(k: u32) -> CReal {
    constant(ConstantId::Zeta(k + 2)).expect("order at least 2")
}

fn ln_pi_weight(n: u64) -> Rat {
    let den = Nat::from(2 * (n + 1)) << (2 * n + 1) as usize;
    Rat::new(1.into(), den.into())
}

/// `ζ(k)` from `Σ_{n<=N} n^-k` plus the midpoint of the integral bracket
/// `[1/((k-1)(N+1)^(k-1)), 1/((k-1)N^(k-1))]` on the tail, whose width is at
/// most `N^-k`. `N = ⌈(x+1)^(1/k)⌉` instead of the `x^(1/(k-1))` terms a
/// plain partial sum needs.
fn zeta_tail_corrected(k: u32) -> CReal {
    CReal::new(
        Modulus::Inverse,
        ClassTag::LowerElementary,
        format!("zeta({k}) with integral tail correction"),
        move |x| {
            let big_n = ceil_root(&(x + 1u32), k);
            let n_max = big_n
                .to_u64()
                .ok_or_else(|| RealError::ResourceLimit("zeta partial sum too long".into()))?;
            // Floored fixed-point terms lose less than N·2^-scale <= ε/4 in total.
            let scale = ceil_log2(&((x + 1u32) * 4u32 * n_max)) as usize;
            let unit = Int::one() << scale;
            let sum: Int = (1..=n_max).map(|n| &unit / Int::from(n).pow(k)).sum();
            let km1 = Int::from(k - 1);
            let upper = Rat::new(1.into(), &km1 * Int::from(n_max).pow(k - 1));
            let lower = Rat::new(1.into(), km1 * Int::from(n_max + 1).pow(k - 1));
            Ok(Rat::new(sum, unit) + (upper + lower) / rat_int(2))
        },
    )
}

fn ln_pi_weighted() -> WeightedSeries {
    WeightedSeries::new(
        "ln 2 plus zeta series",
        ClassTag::LowerElementary,
        ln_pi_weight,
        |n| {
            let k = u32::try_from(2 * n + 2)
                .map_err(|_| RealError::ResourceLimit("zeta order overflow".into()))?;
            Ok(zeta_tail_corrected(k))
        },
        // Σ_{n > M} 2/(2(n+1)2^(2n+1)) <= 1/(3·2^(2M+1)).
        |m| Rat::new(1.into(), (Nat::from(3u32) << (2 * m + 1) as usize).into()),
    )
}

/// `Σ f_R(2n)/(2(n+1)2^(2n+1))` as a series with `ξ(x) = x`.
pub fn ln_pi_spec() -> SeriesSpec {
    let raw = F2Sequence::from_fn(ClassTag::LowerElementary, |z, n| {
        // The weight is at most 1/4, so reading ζ at index z keeps the error below 1/(z+1).
        let n = small(n);
        let zeta = constant(ConstantId::Zeta(2 * n as u32 + 2))
            .and_then(|c| c.approx(z))
            .map_err(inner_error)?;
        Ok(Triple::from_rational(&(ln_pi_weight(n) * zeta)))
    });
    SeriesSpec::new(
        "zeta series for ln(pi/2)",
        normalize_denominator(&raw),
        identity,
        ClassTag::LowerElementary,
    )
}

/// The series behind the catalog, for checking tail bounds.
pub fn catalog_specs() -> Vec<SeriesSpec> {
    vec![
        e_spec(),
        liouville_spec(),
        leibniz_spec(),
        ln_step_spec(1),
        ln_step_spec(2),
        ln_step_spec(3),
        catalan_spec(),
        zeta_spec(2),
        zeta_spec(3),
        zeta_spec(4),
        gamma_inner_spec(0),
        gamma_inner_spec(1),
        gamma_inner_spec(5),
        gamma_outer_spec(),
        ln_pi_spec(),
    ]
}

fn build(id: ConstantId) -> Result<CReal, RealError> {
    Ok(match id {
        ConstantId::E => skordev_sum(&e_spec()),
        ConstantId::Pi => skordev_sum(&leibniz_spec())
            .scale(&rat_int(4))
            .with_provenance("4 × Leibniz series, Skordev summation"),
        ConstantId::LnN(0) => {
            return Err(RealError::InvalidInput("ln:N needs N >= 1".into()));
        }
        ConstantId::LnN(1) => CReal::from_rational(Rat::zero()).with_provenance("ln 1 = 0"),
        ConstantId::LnN(big_n) => {
            // ln(1 + 1/1) = ln(1 + 1/2) + ln(1 + 1/3); both converge geometrically.
            let steps: Vec<CReal> = [2, 3]
                .into_iter()
                .chain(2..big_n)
                .map(|j| skordev_sum(&ln_step_spec(j)))
                .collect();
            let rest = if big_n > 2 {
                format!(" + Σ_{{2<=j<{big_n}}} ln(1 + 1/j)")
            } else {
                String::new()
            };
            CReal::sum(&steps).with_provenance(format!(
                "ln(3/2) + ln(4/3){rest}, alternating series, Skordev summation"
            ))
        }
        ConstantId::CatalanG => skordev_sum(&catalan_spec()),
        ConstantId::EulerGamma => skordev_sum(&gamma_outer_spec()),
        ConstantId::LiouvilleL => skordev_sum(&liouville_spec()),
        ConstantId::Zeta(k) if k < 2 => {
            return Err(RealError::InvalidInput(format!("zeta:{k} diverges; need k >= 2")));
        }
        ConstantId::Zeta(k) => skordev_sum(&zeta_spec(k)),
        ConstantId::LnPi => {
            let ln2 = constant(ConstantId::LnN(2))?;
            ln2.add(&ln_pi_weighted().to_creal())
                .with_provenance("ln 2 + zeta series, weighted budget summation")
        }
    })
}

/// The catalog real for `id`; repeated calls share one memoized oracle.
pub fn constant(id: ConstantId) -> Result<CReal, RealError> {
    static CACHE: OnceLock<Mutex<HashMap<ConstantId, CReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().get(&id) {
        return Ok(c.clone());
    }
    let c = build(id)?;
    Ok(cache.lock().entry(id).or_insert(c).clone())
}
