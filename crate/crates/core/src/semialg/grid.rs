//! Integer fast path for classifying grid cells.
//!
//! At depth `d` the `k`-th side of cell `i` is `[N_k(i), N_k(i+1)] / D_k`
//! with `N_k(i) = A_k 2^d + W_k i` and `D_k = L_k 2^d`, where the domain side
//! is `[A_k/L_k, (A_k+W_k)/L_k]`. Multiplying a polynomial's monomial-wise
//! enclosure by the positive constant `lcm(coeff dens) · Π_k D_k^(deg_k)`
//! turns it into integer arithmetic without changing any sign decision, so
//! the result agrees with the rational path whenever `i128` does not overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{BoxClass, Relation, SemialgSet};
use crate::exact::RatInterval;

#[derive(Clone, Copy)]
struct Iv {
    lo: i128,
    hi: i128,
}

impl Iv {
    fn mul(self, o: Iv) -> Option<Iv> {
        let p = [
            self.lo.checked_mul(o.lo)?,
            self.lo.checked_mul(o.hi)?,
            self.hi.checked_mul(o.lo)?,
            self.hi.checked_mul(o.hi)?,
        ];
        Some(Iv {
            lo: *p.iter().min().expect("four products"),
            hi: *p.iter().max().expect("four products"),
        })
    }

    fn pow(self, k: u32) -> Option<Iv> {
        if k == 0 {
            return Some(Iv { lo: 1, hi: 1 });
        }
        let lo_k = self.lo.checked_pow(k)?;
        let hi_k = self.hi.checked_pow(k)?;
        Some(if k % 2 == 1 {
            Iv { lo: lo_k, hi: hi_k }
        } else if self.lo <= 0 && self.hi >= 0 {
            Iv { lo: 0, hi: lo_k.max(hi_k) }
        } else {
            Iv { lo: lo_k.min(hi_k), hi: lo_k.max(hi_k) }
        })
    }
}

struct Mono {
    exps: Vec<u32>,
    /// Integer coefficient after clearing denominators.
    coeff: BigInt,
}

struct Cond {
    monos: Vec<Mono>,
    degs: Vec<u32>,
    relation: Relation,
}

/// Per-depth constants; `None` when they do not fit in `i128`.
struct Level {
    offsets: Vec<i128>,
    factors: Vec<Vec<i128>>,
}

pub(super) struct GridClassifier {
    nvars: usize,
    dnf: Vec<Vec<Cond>>,
    /// `(A_k, W_k, L_k)` per variable.
    sides: Vec<(BigInt, BigInt, BigInt)>,
    widths: Vec<i128>,
    max_deg: Vec<u32>,
    level: Option<(u32, Option<Level>)>,
}

impl GridClassifier {
    pub(super) fn new(set: &SemialgSet, domain: &[RatInterval]) -> Option<Self> {
        let nvars = set.nvars();
        let sides: Vec<(BigInt, BigInt, BigInt)> = domain
            .iter()
            .map(|s| {
                let l = s.lo().denom().lcm(s.hi().denom());
                let a = s.lo().numer() * (&l / s.lo().denom());
                let b = s.hi().numer() * (&l / s.hi().denom());
                (a.clone(), b - a, l)
            })
            .collect();
        let widths = sides
            .iter()
            .map(|(_, w, _)| w.to_i128())
            .collect::<Option<Vec<_>>>()?;
        let mut max_deg = vec![0u32; nvars];
        let dnf = set
            .dnf()
            .iter()
            .map(|conj| {
                conj.iter()
                    .map(|c| {
                        let lcm = c
                            .poly
                            .terms()
                            .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
                        let mut degs = vec![0u32; nvars];
                        let monos = c
                            .poly
                            .terms()
                            .map(|(e, q)| {
                                for (d, &k) in degs.iter_mut().zip(e) {
                                    *d = (*d).max(k);
                                }
                                Mono {
                                    exps: e.clone(),
                                    coeff: q.numer() * (&lcm / q.denom()),
                                }
                            })
                            .collect();
                        for (m, &d) in max_deg.iter_mut().zip(&degs) {
                            *m = (*m).max(d);
                        }
                        Cond { monos, degs, relation: c.relation }
                    })
                    .collect()
            })
            .collect();
        Some(GridClassifier {
            nvars,
            dnf,
            sides,
            widths,
            max_deg,
            level: None,
        })
    }

    fn build_level(&self, depth: u32) -> Option<Level> {
        let two_d = BigInt::one() << depth as usize;
        let offsets = self
            .sides
            .iter()
            .map(|(a, _, _)| (a * &two_d).to_i128())
            .collect::<Option<Vec<_>>>()?;
        let dens: Vec<BigInt> = self.sides.iter().map(|(_, _, l)| l * &two_d).collect();
        let factors = self
            .dnf
            .iter()
            .flatten()
            .map(|c| {
                c.monos
                    .iter()
                    .map(|m| {
                        let mut f = m.coeff.clone();
                        for k in 0..self.nvars {
                            f *= num_traits::pow(dens[k].clone(), (c.degs[k] - m.exps[k]) as usize);
                        }
                        f.to_i128()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Level { offsets, factors })
    }

    /// Prepares constants for cells at `depth`.
    pub(super) fn set_depth(&mut self, depth: u32) {
        if self.level.as_ref().map(|(d, _)| *d) != Some(depth) {
            let level = self.build_level(depth);
            self.level = Some((depth, level));
        }
    }

    /// Classification in the almost-everywhere sense, or `None` to defer to
    /// the rational path.
    pub(super) fn classify(&self, cell: &[u64]) -> Option<BoxClass> {
        let (_, level) = self.level.as_ref()?;
        let level = level.as_ref()?;
        let mut powers: Vec<Vec<Iv>> = Vec::with_capacity(self.nvars);
        for k in 0..self.nvars {
            let i = i128::from(cell[k]);
            let lo = level.offsets[k].checked_add(self.widths[k].checked_mul(i)?)?;
            let hi = lo.checked_add(self.widths[k])?;
            let side = Iv { lo, hi };
            let pk = (0..=self.max_deg[k])
                .map(|e| side.pow(e))
                .collect::<Option<Vec<_>>>()?;
            powers.push(pk);
        }
        let mut factor_rows = level.factors.iter();
        let mut all_false = true;
        let mut inside = false;
        for conj in &self.dnf {
            let mut truth = Some(true);
            for c in conj {
                let factors = factor_rows.next().expect("one row per condition");
                if truth == Some(false) {
                    continue;
                }
                let (mut lo, mut hi) = (0i128, 0i128);
                for (m, &f) in c.monos.iter().zip(factors) {
                    let mut iv = Iv { lo: 1, hi: 1 };
                    for k in 0..self.nvars {
                        if m.exps[k] > 0 {
                            iv = iv.mul(powers[k][m.exps[k] as usize])?;
                        }
                    }
                    let (a, b) = (iv.lo.checked_mul(f)?, iv.hi.checked_mul(f)?);
                    let (a, b) = if f < 0 { (b, a) } else { (a, b) };
                    lo = lo.checked_add(a)?;
                    hi = hi.checked_add(b)?;
                }
                let t = if c.monos.is_empty() {
                    Some(c.relation == Relation::EqZero)
                } else {
                    match c.relation {
                        Relation::Gt if lo >= 0 && !is_constant(c) => Some(true),
                        Relation::Gt if lo > 0 => Some(true),
                        Relation::Gt if hi <= 0 => Some(false),
                        Relation::EqZero if lo > 0 || hi < 0 => Some(false),
                        _ => None,
                    }
                };
                truth = match (truth, t) {
                    (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                };
            }
            match truth {
                Some(true) => inside = true,
                None => all_false = false,
                Some(false) => {}
            }
        }
        Some(if inside {
            BoxClass::Inside
        } else if all_false {
            BoxClass::Outside
        } else {
            BoxClass::Boundary
        })
    }
}

fn is_constant(c: &Cond) -> bool {
    c.monos.iter().all(|m| m.exps.iter().all(|&k| k == 0))
}
