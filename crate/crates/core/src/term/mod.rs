//! A small language of natural-number function terms, with an evaluator and
//! a syntactic complexity classifier.

mod builtins;
mod eval;
mod parse;

use std::fmt;
use std::sync::Arc;

use crate::class::ClassTag;
use crate::exact::Nat;

pub use builtins::{builtin, BUILTIN_NAMES};
pub use eval::{eval_term, EvalLimits, Evaluator};
pub use parse::parse_term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("arity error in {op}: {detail}")]
    Arity { op: &'static str, detail: String },
    #[error("unknown function name `{0}`")]
    UnknownName(String),
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("bounded recursion exceeded its bound at step {step}: value {value} > bound {bound}")]
    BoundViolation { step: Nat, value: Nat, bound: Nat },
    #[error("evaluation resource limit reached: {0}")]
    ResourceLimit(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Zero,
    Succ,
    Proj { n: usize, i: usize },
    /// Constant function; it adapts to whatever arity its context requires.
    Const(Nat),
    Add,
    Mul,
    /// Modified subtraction.
    Sub,
    Compose(FunctionTerm, Vec<FunctionTerm>),
    PrimRec(FunctionTerm, FunctionTerm),
    BoundedPrimRec(FunctionTerm, FunctionTerm, FunctionTerm),
    BoundedSum(FunctionTerm),
    BoundedProd(FunctionTerm),
    Minimizer(FunctionTerm),
    Ladder(u32),
    Ackermann,
    /// A catalog function: evaluates and classifies as its definition,
    /// prints as its name.
    Named(&'static str, FunctionTerm),
}

/// Immutable, cheaply clonable function term with a checked arity.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionTerm {
    node: Arc<Node>,
    arity: usize,
}

impl fmt::Debug for FunctionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn arity_err(op: &'static str, detail: String) -> TermError {
    TermError::Arity { op, detail }
}

impl FunctionTerm {
    fn leaf(node: Node, arity: usize) -> Self {
        FunctionTerm {
            node: Arc::new(node),
            arity,
        }
    }

    pub fn zero() -> Self {
        Self::leaf(Node::Zero, 1)
    }

    pub fn succ() -> Self {
        Self::leaf(Node::Succ, 1)
    }

    pub fn proj(n: usize, i: usize) -> Result<Self, TermError> {
        if n == 0 || i == 0 || i > n {
            return Err(arity_err(
                "proj",
                format!("proj({n},{i}) needs 1 <= i <= n"),
            ));
        }
        Ok(Self::leaf(Node::Proj { n, i }, n))
    }

    pub fn constant(c: impl Into<Nat>) -> Self {
        Self::leaf(Node::Const(c.into()), 0)
    }

    pub fn add() -> Self {
        Self::leaf(Node::Add, 2)
    }

    pub fn mul() -> Self {
        Self::leaf(Node::Mul, 2)
    }

    pub fn sub() -> Self {
        Self::leaf(Node::Sub, 2)
    }

    pub fn ladder(n: u32) -> Self {
        Self::leaf(Node::Ladder(n), 2)
    }

    pub fn ackermann() -> Self {
        Self::leaf(Node::Ackermann, 2)
    }

    /// `g(h_1(x), …, h_m(x))`.
    pub fn compose(g: FunctionTerm, hs: Vec<FunctionTerm>) -> Result<Self, TermError> {
        if !g.is_adaptive() && g.arity != hs.len() {
            return Err(arity_err(
                "comp",
                format!("outer term has arity {} but {} inner terms were given", g.arity, hs.len()),
            ));
        }
        if g.is_adaptive() && !hs.is_empty() {
            return Err(arity_err(
                "comp",
                "a constant takes no inner terms".to_string(),
            ));
        }
        let mut n: Option<usize> = None;
        for h in hs.iter().filter(|h| !h.is_adaptive()) {
            match n {
                None => n = Some(h.arity),
                Some(k) if k != h.arity => {
                    return Err(arity_err(
                        "comp",
                        format!("inner terms disagree on arity ({k} vs {})", h.arity),
                    ))
                }
                _ => {}
            }
        }
        let arity = n.unwrap_or(0);
        Ok(Self::leaf(Node::Compose(g, hs), arity))
    }

    /// `f(0, x…) = g(x…)`, `f(y+1, x…) = h(y, f(y, x…), x…)`.
    pub fn primrec(g: FunctionTerm, h: FunctionTerm) -> Result<Self, TermError> {
        let m = Self::recursion_arity("primrec", &g, &h)?;
        Ok(Self::leaf(Node::PrimRec(g, h), m))
    }

    /// Primitive recursion whose trace must stay below `j` pointwise.
    pub fn bounded_primrec(
        g: FunctionTerm,
        h: FunctionTerm,
        j: FunctionTerm,
    ) -> Result<Self, TermError> {
        let m = Self::recursion_arity("bprimrec", &g, &h)?;
        if !j.is_adaptive() && j.arity != m {
            return Err(arity_err(
                "bprimrec",
                format!("bound term must have arity {m}, found {}", j.arity),
            ));
        }
        Ok(Self::leaf(Node::BoundedPrimRec(g, h, j), m))
    }

    fn recursion_arity(
        op: &'static str,
        g: &FunctionTerm,
        h: &FunctionTerm,
    ) -> Result<usize, TermError> {
        if h.arity < 2 {
            return Err(arity_err(
                op,
                format!("step term must have arity >= 2, found {}", h.arity),
            ));
        }
        let m = h.arity - 1;
        if !g.is_adaptive() && g.arity != m - 1 {
            return Err(arity_err(
                op,
                format!("base term must have arity {}, found {}", m - 1, g.arity),
            ));
        }
        Ok(m)
    }

    /// `(y, x…) ↦ Σ_{t ≤ y} f(t, x…)`.
    pub fn bounded_sum(f: FunctionTerm) -> Result<Self, TermError> {
        Self::unary_op("bsum", f, Node::BoundedSum)
    }

    /// `(y, x…) ↦ Π_{t ≤ y} f(t, x…)`.
    pub fn bounded_prod(f: FunctionTerm) -> Result<Self, TermError> {
        Self::unary_op("bprod", f, Node::BoundedProd)
    }

    /// `(x…, b) ↦` least `j ≤ b` with `f(x…, j) = 0`, else `b`.
    pub fn minimizer(f: FunctionTerm) -> Result<Self, TermError> {
        Self::unary_op("mu", f, Node::Minimizer)
    }

    fn unary_op(
        op: &'static str,
        f: FunctionTerm,
        wrap: fn(FunctionTerm) -> Node,
    ) -> Result<Self, TermError> {
        if f.arity == 0 {
            return Err(arity_err(op, "operand must have arity >= 1".to_string()));
        }
        let arity = f.arity;
        Ok(Self::leaf(wrap(f), arity))
    }

    pub(crate) fn named(name: &'static str, def: FunctionTerm) -> Self {
        let arity = def.arity;
        Self::leaf(Node::Named(name, def), arity)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Number of arguments; `0` for constants, which accept any arity.
    pub fn arity(&self) -> usize {
        self.arity
    }

    fn is_adaptive(&self) -> bool {
        self.arity == 0
    }

    pub(crate) fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.node) as usize
    }

    /// Conservative syntactic class of the function this term denotes.
    pub fn classify(&self) -> ClassTag {
        use ClassTag::*;
        match self.node() {
            Node::Zero
            | Node::Succ
            | Node::Proj { .. }
            | Node::Const(_)
            | Node::Add
            | Node::Mul
            | Node::Sub => LowerElementary,
            Node::Compose(g, hs) => {
                ClassTag::join_all(std::iter::once(g.classify()).chain(hs.iter().map(|h| h.classify())))
            }
            Node::BoundedSum(f) | Node::Minimizer(f) => f.classify(),
            Node::BoundedProd(f) => f.classify().join(Elementary),
            Node::BoundedPrimRec(g, h, j) => ClassTag::join_all([
                g.classify(),
                h.classify(),
                j.classify(),
                ClassTag::E(2),
            ]),
            Node::PrimRec(g, h) => g.classify().join(h.classify()).join(PrimitiveRecursive),
            Node::Ladder(n) if *n <= 2 => LowerElementary,
            Node::Ladder(n) => ClassTag::grzegorczyk(*n),
            Node::Ackermann => Recursive,
            Node::Named(_, def) => def.classify(),
        }
    }
}

impl fmt::Display for FunctionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Zero => write!(f, "Z"),
            Node::Succ => write!(f, "S"),
            Node::Proj { n, i } => write!(f, "proj({n},{i})"),
            Node::Const(c) => write!(f, "const({c})"),
            Node::Add => write!(f, "add"),
            Node::Mul => write!(f, "mul"),
            Node::Sub => write!(f, "sub"),
            Node::Compose(g, hs) => {
                write!(f, "comp({g},[")?;
                for (k, h) in hs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{h}")?;
                }
                write!(f, "])")
            }
            Node::PrimRec(g, h) => write!(f, "primrec({g},{h})"),
            Node::BoundedPrimRec(g, h, j) => write!(f, "bprimrec({g},{h},{j})"),
            Node::BoundedSum(t) => write!(f, "bsum({t})"),
            Node::BoundedProd(t) => write!(f, "bprod({t})"),
            Node::Minimizer(t) => write!(f, "mu({t})"),
            Node::Ladder(n) => write!(f, "ladder({n})"),
            Node::Ackermann => write!(f, "ackermann"),
            Node::Named(name, _) => write!(f, "{name}"),
        }
    }
}
