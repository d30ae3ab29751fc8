//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{inv_succ, within, Iv, Q};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use periodica::class::ClassTag;
use periodica::creal::{poly_root, CReal, RealError};
use periodica::exact::{inv_pow2, rat, Rat};
use periodica::expansions::{
    approx_to_nested, badic_to_creal, digit_recovery, extract_digits, nested_to_approx, ApproxPair, DigitOutcome,
    NestedIntervals,
};
use periodica::fseq::{normalize_denominator, round_div, F2Sequence, Triple};
use periodica::semialg::{
    integrate, ln_region, parse_sa, period_catalog, Box, MPoly, PeriodName, SemialgSet, VolumeRefiner,
};
use periodica::series::{catalog_specs, constant, ConstantId};
use periodica::term::{builtin, eval_term, parse_term, FunctionTerm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn nat(v: u64) -> BigUint {
    BigUint::from(v)
}

fn cat(name: &str) -> CReal {
    constant(name.parse::<ConstantId>().unwrap()).unwrap()
}

fn sample_points() -> Vec<u64> {
    let mut xs: Vec<u64> = (0..=64).collect();
    xs.extend([127, 1023]);
    xs
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    // (constant, target accuracy as 1/(x+1)).
    let targets: [(&str, u64); 8] = [
        ("e", 100_000_000),
        ("liouville", 100_000_000),
        ("ln:2", 100_000),
        ("catalan", 100_000),
        ("zeta:3", 100_000),
        ("pi", 10_000),
        ("gamma", 1_000),
        ("lnpi", 10_000),
    ];
    for (name, target) in targets {
        let c = cat(name);
        let oracle = common::by_name(name);
        let mut xs = sample_points();
        xs.push(target - 1);
        for x in xs {
            let a = c.approx_u64(x).map_err(|e| format!("{name} at {x}: {e}"))?;
            ensure!(within(&a, &oracle, &inv_succ(x)), "{name} misses 1/(x+1) at x = {x}");
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!("8 constants at 67 sample points plus target accuracy, {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let specs = catalog_specs();
    for spec in &specs {
        for x in [0u64, 1, 2, 7, 31] {
            let xi = spec.xi_u64(x).to_u64().unwrap();
            let tail = common::series_true_tail(&spec.name, xi);
            ensure!(
                tail.lo.abs().max(tail.hi.abs()) <= inv_succ(x),
                "{} tail exceeds 1/(x+1) at x = {x}",
                spec.name
            );
        }
    }
    let e = specs.iter().find(|s| s.name == "factorial series").unwrap();
    ensure!(e.xi_u64(0).to_u64() == Some(1), "factorial cutoff at 0 is not 1");
    ensure!(common::series_true_tail(&e.name, 1).hi <= Q::one(), "e - 2 > 1");
    let leibniz = specs.iter().find(|s| s.name == "Leibniz series").unwrap();
    for x in [0u64, 1, 2, 7, 31] {
        let xi = leibniz.xi_u64(x).to_u64().unwrap();
        let tail = common::series_true_tail(&leibniz.name, xi);
        ensure!(tail.lo.abs().max(tail.hi.abs()) <= common::q(1, 2 * xi as i64 + 3), "Leibniz tail at {x}");
    }
    Ok(format!("{} series at x in {{0,1,2,7,31}}", specs.len()))
}

fn noisy_triple(c: &Rat, x: &BigUint, k: i64, big_k: i64, pad: u64) -> Triple {
    let x1 = BigInt::from(x.clone()) + 1;
    let t = Triple::from_rational(&(c + Rat::new(BigInt::from(k), x1 * big_k)));
    Triple::new(t.f + pad, t.g + pad, t.h)
}

fn criterion_3() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let limits: Vec<Rat> = (0..4).map(|_| rat(rng.gen_range(-500..=500), rng.gen_range(1..=40))).collect();
        let big_k = rng.gen_range(1..=9i64);
        let pad = rng.gen_range(0..3u64);
        let lim = limits.clone();
        let a = F2Sequence::from_fn(ClassTag::LowerElementary, move |x, n| {
            let n: usize = n.try_into().unwrap();
            let xs = u64::try_from(x).unwrap_or(0);
            let k = ((xs * 7919 + n as u64 * 104_729) % (2 * big_k as u64 + 1)) as i64 - big_k;
            Ok(noisy_triple(&lim[n], x, k, big_k, pad * (xs % 3)))
        });
        let b = normalize_denominator(&a);
        for (n, c) in limits.iter().enumerate() {
            for x in 0..=200u64 {
                let t = b.triple(&nat(x), &nat(n as u64)).map_err(|e| e.to_string())?;
                ensure!(t.h == nat(x), "seed {seed}: h({x}, {n}) = {}", t.h);
                ensure!((t.value() - c).abs() <= inv_succ(x), "seed {seed}: modulus at ({x}, {n})");
            }
        }
    }
    for j in 0..=100u64 {
        let d = BigInt::from(j + 1);
        for i in 0..=10_000u64 {
            let c = BigInt::from(round_div(&nat(i), &nat(j)));
            ensure!((&c * &d * 2u32 - BigInt::from(2 * i)).abs() <= d, "C({i}, {j}) = {c}");
        }
    }
    Ok("100 sequences normalized; C(i, j) within 1/2 for i <= 10^4, j <= 100".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let coeffs = [CReal::from_int(-2), CReal::from_int(0), CReal::from_int(1)];
    let r = poly_root(&coeffs, &rat(1, 1), &rat(2, 1), &nat(10_000)).map_err(|e| e.to_string())?;
    let sqrt2 = common::sqrt2();
    for x in 0..=10_000u64 {
        ensure!(within(&r.approx_u64(x).unwrap(), &sqrt2, &inv_succ(x)), "sqrt 2 at {x}");
    }
    let coeffs = [cat("e").neg(), CReal::from_int(0), CReal::from_int(0), CReal::from_int(1)];
    let r = poly_root(&coeffs, &rat(1, 1), &rat(2, 1), &nat(10_000)).map_err(|e| e.to_string())?;
    let cbrt = common::cbrt_e();
    for x in 0..=256u64 {
        ensure!(within(&r.approx_u64(x).unwrap(), &cbrt, &r.modulus_at(&nat(x))), "cube root of e at {x}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("sqrt 2 for x <= 10^4, cube root of e for x <= 256, {elapsed:.1?}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut pick = || -> (CReal, Iv) {
        match rng.gen_range(0..4) {
            0 => {
                let n = [rng.gen_range(-50..=-1), rng.gen_range(1..=50)][rng.gen_range(0..2)];
                let q = rat(n, rng.gen_range(1..=9));
                (CReal::from_rational(q.clone()).opaque(), Iv::point(q))
            }
            1 => (cat("e"), common::e()),
            2 => (cat("pi"), common::pi()),
            _ => (cat("ln:2"), common::ln2()),
        }
    };
    for pair in 0..20 {
        let (a, oa) = pick();
        let (b, ob) = pick();
        let inv = a.try_reciprocal(&nat(10_000)).map_err(|e| format!("pair {pair}: {e}"))?;
        let checks = [(a.add(&b), oa.add(&ob)), (a.mul(&b), oa.mul(&ob)), (inv, oa.recip())];
        for (k, (real, oracle)) in checks.iter().enumerate() {
            for x in [0u64, 1, 7, 63, 255, 1000] {
                let v = real.approx_u64(x).map_err(|e| e.to_string())?;
                ensure!(within(&v, oracle, &real.modulus_at(&nat(x))), "pair {pair}, op {k}, x = {x}");
            }
        }
    }
    match CReal::from_rational(Rat::zero()).opaque().try_reciprocal(&nat(10_000)) {
        Err(RealError::FuelExhausted { .. }) => {}
        other => return Err(format!("reciprocal of 0: {other:?}")),
    }
    Ok("20 pairs under add, mul, reciprocal; 1/0 exhausts fuel".into())
}

fn random_pair(rng: &mut ChaCha8Rng) -> (ApproxPair, Iv) {
    let dyadic = rng.gen_bool(0.5);
    let c = rat(rng.gen_range(1..=5), 1);
    let (base, alpha): (std::boxed::Box<dyn Fn(u64) -> Rat + Send + Sync>, Iv) = if rng.gen_bool(0.5) {
        let q = rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=50));
        let q2 = q.clone();
        (std::boxed::Box::new(move |_| q2.clone()), Iv::point(q))
    } else {
        let (real, oracle) = match rng.gen_range(0..3) {
            0 => (cat("e"), common::e()),
            1 => (cat("ln:2"), common::ln2()),
            _ => (cat("pi"), common::pi()),
        };
        let read = move |x: u64| if dyadic { (1u64 << x.min(20)) * 8 } else { 8 * (x + 1) };
        (std::boxed::Box::new(move |x| real.approx_u64(read(x)).unwrap()), oracle)
    };
    let err = move |x: u64| if dyadic { &c * inv_pow2(x.min(20)) } else { &c * rat(1, x as i64 + 1) };
    let e2 = err.clone();
    let phase = rng.gen_range(0..7u64);
    let pair = ApproxPair::new(
        move |x| Ok(base(x) + e2(x) * rat(((x + phase) % 7) as i64 - 3, 16)),
        move |x| Ok(err(x)),
    );
    (pair, alpha)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for inst in 0..100 {
        let (pair, alpha) = random_pair(&mut rng);
        let ni = approx_to_nested(&pair);
        for x in 0..40u64 {
            let (f0, f1) = (ni.lower(x).unwrap(), ni.lower(x + 1).unwrap());
            let (g0, g1) = (ni.upper(x).unwrap(), ni.upper(x + 1).unwrap());
            ensure!(f0 <= f1 && f1 <= alpha.lo && alpha.hi <= g1 && g1 <= g0, "instance {inst}: nesting at {x}");
        }
        let back = nested_to_approx(&ni);
        for x in 0..40u64 {
            ensure!(within(&back.a(x).unwrap(), &alpha, &back.e(x).unwrap()), "instance {inst}: bracket at {x}");
        }
    }
    let q = rat(22, 7);
    let (q1, q2) = (q.clone(), q.clone());
    let ni = NestedIntervals::new(move |x| Ok(&q1 - inv_pow2(x)), move |x| Ok(&q2 + inv_pow2(x)));
    let pair = nested_to_approx(&ni);
    for x in 0..64u64 {
        ensure!(pair.a(x).unwrap() == q && pair.e(x).unwrap() == inv_pow2(x), "(q, 2^-x) differs at {x}");
    }
    Ok("100 round trips bracket; q -/+ 2^-x gives (q, 2^-x)".into())
}

fn criterion_7() -> Outcome {
    for len in 0..=8u32 {
        for bits in 0..(1u32 << len) {
            let digit = |n: u32| (bits >> n) & 1;
            let prefix: Q = (0..len).map(|n| Q::new(digit(n).into(), BigInt::one() << (2 * n))).sum();
            let ones_tail = Q::new(BigInt::from(4), BigInt::from(3) * (BigInt::one() << (2 * len)));
            for alpha in [prefix.clone(), &prefix + ones_tail] {
                for k in 0..len {
                    let radius = Q::new(BigInt::one(), BigInt::one() << (2 * (k + 1)));
                    for j in -16..=16i64 {
                        let q = &alpha + &radius * rat(j, 16);
                        ensure!(digit_recovery(&q, k as u64) == nat(digit(k).into()), "prefix {bits:b}/{len}, k {k}");
                    }
                }
            }
        }
    }
    let ex = extract_digits(&cat("pi"), &nat(10), 6, &(BigUint::one() << 26)).map_err(|e| e.to_string())?;
    ensure!(ex.render() == "3.141592", "pi renders as {}", ex.render());
    for (name, real, upto, fuel) in [
        ("e", cat("e"), 200u64, 210u64),
        ("liouville", cat("liouville"), 200, 210),
        ("pi", cat("pi"), 12, 20),
    ] {
        let ex = extract_digits(&real, &nat(2), upto + 1, &(BigUint::one() << fuel)).map_err(|e| e.to_string())?;
        ensure!(ex.outcome == DigitOutcome::Complete, "{name}: extraction incomplete");
        let rebuilt = badic_to_creal(&ex.to_stream().map_err(|e| e.to_string())?);
        for x in 0..=upto {
            let d = (rebuilt.approx_u64(x).unwrap() - real.approx_u64(x).unwrap()).abs();
            let bound = real.modulus_at(&nat(x)).max(inv_pow2(x)) * rat(2, 1);
            ensure!(d <= bound, "{name}: round trip at {x}");
        }
    }
    let fuel = BigUint::one() << 16;
    for (q, base, good) in [(rat(1, 2), 10u64, vec![5u64]), (rat(1, 2), 2, vec![1]), (rat(3, 8), 2, vec![0, 1, 1])] {
        let ex = extract_digits(&CReal::from_rational(q.clone()).opaque(), &nat(base), 8, &fuel)
            .map_err(|e| e.to_string())?;
        ensure!(matches!(ex.outcome, DigitOutcome::UnknownAt(_)), "{q} base {base} did not stop");
        for (i, d) in ex.digits.iter().enumerate() {
            ensure!(i < good.len() && *d == nat(good[i]), "{q} base {base}: wrong digit {i}");
        }
    }
    Ok("recovery exhaustive to length 8; pi = 3.141592; round trips; boundaries Unknown".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let quarter = parse_sa("vars 2\nx1 > 0 & x2 > 0 & 1 - x1^2 - x2^2 > 0\n").unwrap().set;
    let mut r = VolumeRefiner::new(&quarter, &Box::unit(2)).map_err(|e| e.to_string())?;
    let target = common::pi().scale(&rat(1, 4));
    let mut prev = r.result();
    while prev.width() > rat(1, 1000) {
        ensure!(r.depth() < 14, "width {} at depth 14", prev.width());
        r.refine().map_err(|e| e.to_string())?;
        let cur = r.result();
        ensure!(prev.lower <= cur.lower && cur.upper <= prev.upper, "not monotone at depth {}", r.depth());
        prev = cur;
    }
    ensure!(prev.lower <= target.lo && target.hi <= prev.upper, "bounds miss pi/4");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "quarter disk took {elapsed:?}");
    let depth = r.depth();

    let (s, dom) = ln_region(&rat(2, 1)).map_err(|e| e.to_string())?;
    let mut r = VolumeRefiner::new(&s, &dom).map_err(|e| e.to_string())?;
    let mut prev = r.result();
    for _ in 0..10 {
        r.refine().map_err(|e| e.to_string())?;
        let cur = r.result();
        ensure!(prev.lower <= cur.lower && cur.upper <= prev.upper, "ln region not monotone");
        prev = cur;
    }

    let thousandth = rat(1, 1000);
    let ln2 = period_catalog(&PeriodName::LnRho(rat(2, 1))).map_err(|e| e.to_string())?;
    let v = ln2.approx_u64(999).map_err(|e| e.to_string())?;
    ensure!(within(&v, &common::ln2(), &thousandth), "LnRho(2) = {v}");

    let one = MPoly::constant(1, rat(1, 1));
    let p = MPoly::parse("x^2 - x", 1).unwrap();
    let i = integrate(&SemialgSet::full(1), &p, &one, &Box::unit(1)).map_err(|e| e.to_string())?;
    let v = i.approx_u64(999).map_err(|e| e.to_string())?;
    ensure!(within(&v, &Iv::point(rat(-1, 6)), &thousandth), "integral = {v}");
    Ok(format!("quarter disk width <= 10^-3 at depth {depth} in {elapsed:.1?}; ln 2 and -1/6 within 10^-3"))
}

fn ackermann_oracle(m: u64, k: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
    if let Some(&v) = memo.get(&(m, k)) {
        return v;
    }
    let v = match (m, k) {
        (0, k) => k + 1,
        (m, 0) => ackermann_oracle(m - 1, 1, memo),
        (m, k) => {
            let inner = ackermann_oracle(m, k - 1, memo);
            ackermann_oracle(m - 1, inner, memo)
        }
    };
    memo.insert((m, k), v);
    v
}

fn ev(t: &FunctionTerm, args: &[u64]) -> BigUint {
    let args: Vec<BigUint> = args.iter().map(|&a| nat(a)).collect();
    eval_term(t, &args).unwrap()
}

fn criterion_9() -> Outcome {
    type Oracle = fn(u64, u64) -> u64;
    let binary: [(&str, Oracle); 5] = [
        ("add", |x, y| x + y),
        ("mul", |x, y| x * y),
        ("sub", |x, y| x.saturating_sub(y)),
        ("min", |x, y| x.min(y)),
        ("max", |x, y| x.max(y)),
    ];
    for (name, oracle) in binary {
        let t = builtin(name).unwrap();
        for x in 0..=200 {
            for y in 0..=200 {
                ensure!(ev(&t, &[x, y]) == nat(oracle(x, y)), "{name}({x}, {y})");
            }
        }
    }
    let sgn = builtin("sgn").unwrap();
    let fact = builtin("factorial").unwrap();
    let mut want = nat(1);
    for x in 0..=200u64 {
        ensure!(ev(&sgn, &[x]) == nat(u64::from(x != 0)), "sgn({x})");
        if x > 0 {
            want *= x;
        }
        ensure!(ev(&fact, &[x]) == want, "factorial({x})");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (div, pow) = (builtin("div").unwrap(), builtin("pow").unwrap());
    for _ in 0..1000 {
        let (x, y) = (rng.gen_range(0..=200u64), rng.gen_range(0..=200u64));
        ensure!(ev(&div, &[x, y]) == nat(x / (y + 1)), "div({x}, {y})");
        ensure!(ev(&pow, &[x, y]) == num_traits::pow(nat(x), y as usize), "pow({x}, {y})");
    }
    let a = builtin("ackermann").unwrap();
    let mut memo = HashMap::new();
    for m in 0..=3 {
        for k in 0..=5 {
            ensure!(ev(&a, &[m, k]) == nat(ackermann_oracle(m, k, &mut memo)), "A({m}, {k})");
        }
    }
    let f3 = parse_term("ladder(3)").unwrap();
    for x in 0..=8u64 {
        for y in 0..=8u32 {
            ensure!(ev(&f3, &[x, y as u64]) == nat(x.pow(y)), "f3({x}, {y})");
        }
    }
    use ClassTag::*;
    let classes = [
        ("add", LowerElementary),
        ("div", LowerElementary),
        ("sgn", LowerElementary),
        ("pow", Elementary),
        ("factorial", PrimitiveRecursive),
        ("ackermann", Recursive),
    ];
    for (name, class) in classes {
        let got = builtin(name).unwrap().classify();
        ensure!(got == class, "{name} classified as {got:?}");
    }
    Ok("builtins, Ackermann, ladder and classifier agree".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
