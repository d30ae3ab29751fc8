//! The reference values agree with published decimal expansions.

mod common;

use common::*;

fn pins(iv: &Iv, published: &str, tol: &str) {
    let p = dec(published);
    assert!(within(&p, iv, &dec(tol)), "{published}: {:?}", iv.to_f64());
    assert!(iv.width() < dec("0.000000001"));
}

#[test]
fn classic_constants() {
    pins(&e(), "2.71828182845904523536", "0.00000000000000000001");
    pins(&exp_neg1(), "0.36787944117144232160", "0.00000000000000000001");
    pins(&pi(), "3.14159265358979323846", "0.00000000000000000001");
    pins(&ln2(), "0.69314718055994530942", "0.00000000000000000001");
    pins(&ln_nat(10), "2.30258509299404568402", "0.00000000000000000001");
    pins(&ln_pi(), "1.14472988584940017414", "0.00000000000000000001");
    pins(&sqrt2(), "1.41421356237309504880", "0.00000000000000000001");
    pins(&cbrt_e(), "1.39561242508608952863", "0.00000000000000000001");
    pins(&liouville(), "0.11000100000000000000", "0.00000000000000000001");
}

#[test]
fn slowly_converging_constants() {
    pins(&catalan(), "0.91596559417721901505", "0.0000000001");
    pins(&zeta(3), "1.20205690315959428540", "0.0000000001");
    pins(&zeta(2), "1.64493406684822643647", "0.0000000001");
    pins(&euler_gamma(), "0.57721566490153286061", "0.0000000000000000001");
}

#[test]
fn interval_helpers() {
    let a = Iv::new(q(1, 2), q(1, 1));
    let b = Iv::new(q(-1, 1), q(2, 1));
    assert_eq!(a.mul(&b), Iv::new(q(-1, 1), q(2, 1)));
    assert_eq!(a.recip(), Iv::new(q(1, 1), q(2, 1)));
    assert_eq!(a.sub(&b), Iv::new(q(-3, 2), q(2, 1)));
    assert!(within(&q(3, 4), &a, &q(1, 4)));
    assert!(!within(&q(3, 4), &a, &q(1, 5)));
    let mut s = FixedSum::new(4);
    s.add(&1.into(), &3.into());
    assert_eq!(s.interval(), Iv::new(q(5, 16), q(6, 16)));
}

#[test]
fn euler_terms_sum_to_gamma() {
    // Ξ_n <= 1/(2(n+1)²); the first 2000 terms leave a tail below 1/4000.
    let mut acc = Iv::point(q(0, 1));
    for n in 0..2000 {
        acc = acc.add(&xi_euler(n));
    }
    let g = euler_gamma();
    assert!(acc.hi <= g.hi);
    assert!(&g.lo - &acc.hi <= q(1, 4000));
}

