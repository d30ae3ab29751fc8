use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use super::{FunctionTerm, Node, TermError};
use crate::exact::{monus, Nat};

/// Resource ceilings for a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalLimits {
    /// Maximum number of evaluation steps (node visits and loop iterations).
    pub max_steps: u64,
    /// Maximum bit length of any intermediate value.
    pub max_bits: u64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_steps: 200_000_000,
            max_bits: 1 << 22,
        }
    }
}

/// Term evaluator with a cache of primitive-recursion traces.
///
/// Terms passed to [`Evaluator::eval`] are retained for the evaluator's
/// lifetime so that cache keys stay unambiguous.
pub struct Evaluator {
    limits: EvalLimits,
    steps: u64,
    memo: HashMap<(usize, Vec<Nat>), Nat>,
    pinned: Vec<FunctionTerm>,
}

impl Evaluator {
    pub fn new(limits: EvalLimits) -> Self {
        Evaluator {
            limits,
            steps: 0,
            memo: HashMap::new(),
            pinned: Vec::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn eval(&mut self, t: &FunctionTerm, args: &[Nat]) -> Result<Nat, TermError> {
        if !self.pinned.iter().any(|p| p.ptr_id() == t.ptr_id()) {
            self.pinned.push(t.clone());
        }
        if t.arity() != 0 && t.arity() != args.len() {
            return Err(TermError::ArgumentCount {
                expected: t.arity(),
                got: args.len(),
            });
        }
        self.go(t, args)
    }

    fn tick(&mut self) -> Result<(), TermError> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(TermError::ResourceLimit(format!(
                "more than {} evaluation steps",
                self.limits.max_steps
            )));
        }
        Ok(())
    }

    fn check_size(&self, v: Nat) -> Result<Nat, TermError> {
        if v.bits() > self.limits.max_bits {
            return Err(TermError::ResourceLimit(format!(
                "intermediate value exceeds {} bits",
                self.limits.max_bits
            )));
        }
        Ok(v)
    }

    fn counter(v: &Nat) -> Result<u64, TermError> {
        v.to_u64().ok_or_else(|| {
            TermError::ResourceLimit(format!("iteration count {v} does not fit in 64 bits"))
        })
    }

    fn with_first(first: Nat, rest: &[Nat]) -> Vec<Nat> {
        let mut v = Vec::with_capacity(rest.len() + 1);
        v.push(first);
        v.extend_from_slice(rest);
        v
    }

    fn go(&mut self, t: &FunctionTerm, args: &[Nat]) -> Result<Nat, TermError> {
        self.tick()?;
        match t.node() {
            Node::Zero => Ok(Nat::zero()),
            Node::Succ => Ok(&args[0] + 1u32),
            Node::Proj { i, .. } => Ok(args[i - 1].clone()),
            Node::Const(c) => Ok(c.clone()),
            Node::Add => self.check_size(&args[0] + &args[1]),
            Node::Mul => {
                if args[0].bits() + args[1].bits() > self.limits.max_bits + 1 {
                    return Err(TermError::ResourceLimit(format!(
                        "product exceeds {} bits",
                        self.limits.max_bits
                    )));
                }
                self.check_size(&args[0] * &args[1])
            }
            Node::Sub => Ok(monus(&args[0], &args[1])),
            Node::Compose(g, hs) => {
                if g.arity() == 0 {
                    return self.go(g, &[]);
                }
                let mut vals = Vec::with_capacity(hs.len());
                for h in hs {
                    vals.push(self.go(h, args)?);
                }
                self.go(g, &vals)
            }
            Node::PrimRec(g, h) => self.recursion(t, g, h, None, args),
            Node::BoundedPrimRec(g, h, j) => self.recursion(t, g, h, Some(j), args),
            Node::BoundedSum(f) => {
                let n = Self::counter(&args[0])?;
                let mut total = Nat::zero();
                for s in 0..=n {
                    self.tick()?;
                    total += self.go(f, &Self::with_first(Nat::from(s), &args[1..]))?;
                }
                self.check_size(total)
            }
            Node::BoundedProd(f) => {
                let n = Self::counter(&args[0])?;
                let mut total = Nat::one();
                for s in 0..=n {
                    self.tick()?;
                    let v = self.go(f, &Self::with_first(Nat::from(s), &args[1..]))?;
                    total = self.check_size(total * v)?;
                }
                Ok(total)
            }
            Node::Minimizer(f) => {
                let k = args.len() - 1;
                let bound = Self::counter(&args[k])?;
                let mut probe = args.to_vec();
                for j in 0..bound {
                    self.tick()?;
                    probe[k] = Nat::from(j);
                    if self.go(f, &probe)?.is_zero() {
                        return Ok(Nat::from(j));
                    }
                }
                Ok(args[k].clone())
            }
            Node::Ladder(n) => self.ladder(*n, &args[0], &args[1]),
            Node::Ackermann => self.ackermann(&args[0], &args[1]),
            Node::Named(_, def) => self.go(def, args),
        }
    }

    fn recursion(
        &mut self,
        t: &FunctionTerm,
        g: &FunctionTerm,
        h: &FunctionTerm,
        bound: Option<&FunctionTerm>,
        args: &[Nat],
    ) -> Result<Nat, TermError> {
        let id = t.ptr_id();
        if let Some(v) = self.memo.get(&(id, args.to_vec())) {
            return Ok(v.clone());
        }
        let n = Self::counter(&args[0])?;
        let rest = &args[1..];
        let mut acc = self.go(g, rest)?;
        for step in 0..=n {
            let here = Self::with_first(Nat::from(step), rest);
            if let Some(j) = bound {
                let limit = self.go(j, &here)?;
                if acc > limit {
                    return Err(TermError::BoundViolation {
                        step: Nat::from(step),
                        value: acc,
                        bound: limit,
                    });
                }
            }
            self.memo.insert((id, here.clone()), acc.clone());
            if step == n {
                break;
            }
            self.tick()?;
            let mut h_args = Vec::with_capacity(rest.len() + 2);
            h_args.push(Nat::from(step));
            h_args.push(acc);
            h_args.extend_from_slice(rest);
            acc = self.go(h, &h_args)?;
        }
        Ok(acc)
    }

    fn ladder(&mut self, n: u32, x: &Nat, y: &Nat) -> Result<Nat, TermError> {
        self.tick()?;
        match n {
            0 => Ok(x + 1u32),
            1 => self.check_size(x + y),
            2 => self.go(&FunctionTerm::mul(), &[x.clone(), y.clone()]),
            3 => {
                let e = Self::counter(y)?;
                if x > &Nat::one() && x.bits().saturating_sub(1).saturating_mul(e) > self.limits.max_bits {
                    return Err(TermError::ResourceLimit(format!(
                        "power exceeds {} bits",
                        self.limits.max_bits
                    )));
                }
                let e = u32::try_from(e).map_err(|_| {
                    TermError::ResourceLimit("exponent does not fit in 32 bits".to_string())
                })?;
                self.check_size(num_traits::pow(x.clone(), e as usize))
            }
            _ => {
                let count = Self::counter(y)?;
                let mut acc = Nat::one();
                for _ in 0..count {
                    acc = self.ladder(n - 1, x, &acc)?;
                }
                Ok(acc)
            }
        }
    }

    fn ackermann(&mut self, m: &Nat, n: &Nat) -> Result<Nat, TermError> {
        let mut stack = vec![Self::counter(m)?];
        let mut n = Self::counter(n)?;
        while let Some(m) = stack.pop() {
            self.tick()?;
            if m == 0 {
                n = n.checked_add(1).ok_or_else(|| {
                    TermError::ResourceLimit("Ackermann value exceeds 64 bits".to_string())
                })?;
            } else if n == 0 {
                stack.push(m - 1);
                n = 1;
            } else {
                stack.push(m - 1);
                stack.push(m);
                n -= 1;
            }
        }
        Ok(Nat::from(n))
    }
}

/// Evaluates `t` on `args` with default limits.
pub fn eval_term(t: &FunctionTerm, args: &[Nat]) -> Result<Nat, TermError> {
    Evaluator::new(EvalLimits::default()).eval(t, args)
}
