//! Semialgebraic sets as DNF of polynomial sign conditions, with certified
//! volumes and integrals by dyadic box subdivision.

mod format;
mod grid;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;
use rayon::prelude::*;

use crate::class::ClassTag;
use crate::creal::{CReal, Modulus, RealError};
use crate::exact::{inv_succ, Nat, Rat, RatInterval};
use crate::expansions::NestedIntervals;

pub use format::{parse_sa, SaFile};
pub use poly::{MPoly, PolyParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemialgError {
    #[error("dimension mismatch: {0} vs {1} variables")]
    DimensionMismatch(usize, usize),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("denominator enclosure contains 0 on the domain")]
    DenominatorZero,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subdivision depth {0} exceeds the ceiling")]
    DepthLimit(u32),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

impl From<SemialgError> for RealError {
    fn from(e: SemialgError) -> Self {
        match e {
            SemialgError::DepthLimit(_) => RealError::ResourceLimit(e.to_string()),
            other => RealError::InvalidInput(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    EqZero,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignCondition {
    pub poly: MPoly,
    pub relation: Relation,
}

/// Three-valued truth of a condition over a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Truth {
    True,
    False,
    Unknown,
}

impl SignCondition {
    pub fn gt(poly: MPoly) -> Self {
        SignCondition { poly, relation: Relation::Gt }
    }

    pub fn eq_zero(poly: MPoly) -> Self {
        SignCondition { poly, relation: Relation::EqZero }
    }

    pub fn holds_at(&self, point: &[Rat]) -> bool {
        let v = self.poly.eval(point);
        match self.relation {
            Relation::EqZero => v.is_zero(),
            Relation::Gt => v.is_positive(),
        }
    }

    fn constant_truth(&self) -> Option<bool> {
        let c = self.poly.as_constant()?;
        Some(match self.relation {
            Relation::EqZero => c.is_zero(),
            Relation::Gt => c.is_positive(),
        })
    }

    /// With `almost_everywhere`, a nonconstant `g >= 0` on the box counts as
    /// `g > 0`, since the zero set of a nonzero polynomial is null.
    fn truth_on(&self, sides: &[RatInterval], almost_everywhere: bool) -> Truth {
        if let Some(t) = self.constant_truth() {
            return if t { Truth::True } else { Truth::False };
        }
        let enc = self.poly.eval_interval(sides);
        match self.relation {
            Relation::Gt if enc.lo().is_positive() => Truth::True,
            Relation::Gt if almost_everywhere && !enc.lo().is_negative() => Truth::True,
            Relation::Gt if !enc.hi().is_positive() => Truth::False,
            Relation::EqZero if !enc.contains_zero() => Truth::False,
            _ => Truth::Unknown,
        }
    }

    /// The complement as a disjunction of conditions.
    fn negated(&self) -> [SignCondition; 2] {
        match self.relation {
            Relation::EqZero => [
                SignCondition::gt(self.poly.clone()),
                SignCondition::gt(self.poly.neg()),
            ],
            Relation::Gt => [
                SignCondition::eq_zero(self.poly.clone()),
                SignCondition::gt(self.poly.neg()),
            ],
        }
    }
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::EqZero => write!(f, "{} = 0", self.poly),
            Relation::Gt => write!(f, "{} > 0", self.poly),
        }
    }
}

/// `⋃_i ⋂_j c_ij` over `R^nvars`. An empty disjunction is the empty set; an
/// empty conjunction is all of `R^nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemialgSet {
    nvars: usize,
    dnf: Vec<Vec<SignCondition>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    /// `a` relative to `b`: `b ∖ a`. Use [`SemialgSet::full`] for the plain complement.
    Complement,
    Product,
}

impl SemialgSet {
    pub fn empty(nvars: usize) -> Self {
        SemialgSet { nvars, dnf: Vec::new() }
    }

    pub fn full(nvars: usize) -> Self {
        SemialgSet { nvars, dnf: vec![Vec::new()] }
    }

    pub fn atom(cond: SignCondition) -> Self {
        Self::conjunction(cond.poly.nvars(), vec![cond]).expect("single condition")
    }

    pub fn conjunction(nvars: usize, conds: Vec<SignCondition>) -> Result<Self, SemialgError> {
        for c in &conds {
            if c.poly.nvars() != nvars {
                return Err(SemialgError::DimensionMismatch(nvars, c.poly.nvars()));
            }
        }
        Ok(SemialgSet { nvars, dnf: vec![conds] }.simplified())
    }

    pub fn from_dnf(nvars: usize, dnf: Vec<Vec<SignCondition>>) -> Result<Self, SemialgError> {
        let mut out = Self::empty(nvars);
        for conj in dnf {
            out = out.union(&Self::conjunction(nvars, conj)?)?;
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dnf(&self) -> &[Vec<SignCondition>] {
        &self.dnf
    }

    pub fn is_empty_syntactically(&self) -> bool {
        self.dnf.is_empty()
    }

    pub fn has_equalities(&self) -> bool {
        self.dnf
            .iter()
            .flatten()
            .any(|c| c.relation == Relation::EqZero)
    }

    /// Drops constant-true conditions, constant-false conjunctions, and
    /// duplicate conditions and conjunctions.
    fn simplified(self) -> Self {
        let mut dnf: Vec<Vec<SignCondition>> = Vec::new();
        'conj: for conj in self.dnf {
            let mut kept: Vec<SignCondition> = Vec::new();
            for c in conj {
                match c.constant_truth() {
                    Some(true) => continue,
                    Some(false) => continue 'conj,
                    None => {
                        if !kept.contains(&c) {
                            kept.push(c);
                        }
                    }
                }
            }
            if kept.is_empty() {
                return Self::full(self.nvars);
            }
            if !dnf.contains(&kept) {
                dnf.push(kept);
            }
        }
        SemialgSet { nvars: self.nvars, dnf }
    }

    fn check_dims(&self, other: &Self) -> Result<(), SemialgError> {
        if self.nvars != other.nvars {
            return Err(SemialgError::DimensionMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self, SemialgError> {
        self.check_dims(other)?;
        let mut dnf = self.dnf.clone();
        dnf.extend(other.dnf.iter().cloned());
        Ok(SemialgSet { nvars: self.nvars, dnf }.simplified())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, SemialgError> {
        self.check_dims(other)?;
        let mut dnf = Vec::with_capacity(self.dnf.len() * other.dnf.len());
        for a in &self.dnf {
            for b in &other.dnf {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                dnf.push(c);
            }
        }
        Ok(SemialgSet { nvars: self.nvars, dnf }.simplified())
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.nvars);
        for conj in &self.dnf {
            let mut alternatives = Self::empty(self.nvars);
            for c in conj {
                for n in c.negated() {
                    alternatives.dnf.push(vec![n]);
                }
            }
            let alternatives = alternatives.simplified();
            out = out.intersect(&alternatives).expect("same dimension");
        }
        out
    }

    /// `self × other ⊂ R^(n+m)`.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.nvars + other.nvars;
        let mut dnf = Vec::new();
        for a in &self.dnf {
            for b in &other.dnf {
                let mut c: Vec<SignCondition> = a
                    .iter()
                    .map(|s| SignCondition {
                        poly: s.poly.embed(n, 0),
                        relation: s.relation,
                    })
                    .collect();
                c.extend(b.iter().map(|s| SignCondition {
                    poly: s.poly.embed(n, self.nvars),
                    relation: s.relation,
                }));
                dnf.push(c);
            }
        }
        SemialgSet { nvars: n, dnf }.simplified()
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.dnf
            .iter()
            .any(|conj| conj.iter().all(|c| c.holds_at(point)))
    }

    /// Re-embeds into `nvars` variables starting at variable 0.
    fn lifted(&self, nvars: usize) -> Self {
        let dnf = self
            .dnf
            .iter()
            .map(|conj| {
                conj.iter()
                    .map(|c| SignCondition {
                        poly: c.poly.embed(nvars, 0),
                        relation: c.relation,
                    })
                    .collect()
            })
            .collect();
        SemialgSet { nvars, dnf }
    }
}

impl fmt::Display for SemialgSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dnf.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .dnf
            .iter()
            .map(|conj| {
                if conj.is_empty() {
                    "true".to_string()
                } else {
                    conj.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" & ")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

pub fn set_algebra(a: &SemialgSet, b: &SemialgSet, op: SetOp) -> Result<SemialgSet, SemialgError> {
    match op {
        SetOp::Union => a.union(b),
        SetOp::Intersect => a.intersect(b),
        SetOp::Complement => b.intersect(&a.complement()),
        SetOp::Product => Ok(a.product(b)),
    }
}

/// Axis-aligned box with rational sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Box {
    sides: Vec<RatInterval>,
}

impl Box {
    pub fn new(sides: Vec<RatInterval>) -> Self {
        Box { sides }
    }

    pub fn from_bounds(bounds: &[(Rat, Rat)]) -> Result<Self, SemialgError> {
        let sides = bounds
            .iter()
            .map(|(a, b)| {
                RatInterval::new(a.clone(), b.clone())
                    .map_err(|_| SemialgError::InvalidBox(format!("side [{a}, {b}] is empty")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Box { sides })
    }

    pub fn unit(nvars: usize) -> Self {
        Box {
            sides: vec![RatInterval::new(Rat::zero(), Rat::one()).expect("ordered"); nvars],
        }
    }

    pub fn sides(&self) -> &[RatInterval] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn volume(&self) -> Rat {
        self.sides.iter().map(RatInterval::width).product()
    }

    /// Parses `"a,b;c,d;…"`, one `lo,hi` pair per variable.
    pub fn parse(s: &str) -> Result<Self, SemialgError> {
        let mut bounds = Vec::new();
        for part in s.split(';') {
            let mut ends = part.split(',');
            let (Some(a), Some(b), None) = (ends.next(), ends.next(), ends.next()) else {
                return Err(SemialgError::InvalidBox(format!(
                    "`{}`: expected `lo,hi`",
                    part.trim()
                )));
            };
            bounds.push((parse_rational(a)?, parse_rational(b)?));
        }
        Self::from_bounds(&bounds)
    }

    fn with_extra_side(&self, side: RatInterval) -> Self {
        let mut sides = self.sides.clone();
        sides.push(side);
        Box { sides }
    }
}

impl fmt::Display for Box {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sides
            .iter()
            .map(|s| format!("{},{}", s.lo(), s.hi()))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Rational literal: integer, `p/q`, or decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rat, SemialgError> {
    let s = s.trim();
    let bad = || SemialgError::InvalidParameter(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac.is_empty())
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let value = Rat::new(num, BigInt::from(10u32).pow(frac.len() as u32));
    Ok(if negative { -value } else { value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxClass {
    Inside,
    Outside,
    Boundary,
}

fn classify_sides(s: &SemialgSet, sides: &[RatInterval], almost_everywhere: bool) -> BoxClass {
    let mut all_false = true;
    for conj in &s.dnf {
        let mut conj_truth = Truth::True;
        for c in conj {
            match c.truth_on(sides, almost_everywhere) {
                Truth::False => {
                    conj_truth = Truth::False;
                    break;
                }
                Truth::Unknown => conj_truth = Truth::Unknown,
                Truth::True => {}
            }
        }
        match conj_truth {
            Truth::True => return BoxClass::Inside,
            Truth::Unknown => all_false = false,
            Truth::False => {}
        }
    }
    if all_false {
        BoxClass::Outside
    } else {
        BoxClass::Boundary
    }
}

/// Certifies a box as inside or outside the set by interval enclosures.
/// `Inside` needs one conjunction whose conditions all hold on the whole box.
pub fn classify_box(s: &SemialgSet, b: &Box) -> BoxClass {
    assert_eq!(s.nvars, b.dim(), "box dimension");
    classify_sides(s, &b.sides, false)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeResult {
    pub lower: Rat,
    pub upper: Rat,
    pub depth: u32,
    pub cells_classified: u64,
}

impl VolumeResult {
    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lower + &self.upper) / Rat::from_integer(2.into())
    }
}

/// Level-by-level subdivision state. At depth `d` every boundary cell is a
/// grid cell of side `width / 2^d` in each coordinate, addressed by its
/// integer coordinates.
pub struct VolumeRefiner {
    set: SemialgSet,
    domain: Box,
    depth: u32,
    boundary: Vec<Vec<u64>>,
    inside_volume: Rat,
    cells_classified: u64,
    grid: Option<grid::GridClassifier>,
}

/// Deepest level the integer cell addressing supports.
pub const MAX_SUBDIVISION_DEPTH: u32 = 62;

impl VolumeRefiner {
    pub fn new(s: &SemialgSet, domain: &Box) -> Result<Self, SemialgError> {
        if s.nvars != domain.dim() {
            return Err(SemialgError::DimensionMismatch(s.nvars, domain.dim()));
        }
        // A non-constant equality cuts out a null set, so its conjunction adds
        // no volume. Constant equalities were already folded away.
        let dnf = s
            .dnf
            .iter()
            .filter(|conj| conj.iter().all(|c| c.relation != Relation::EqZero))
            .cloned()
            .collect();
        let s = &SemialgSet { nvars: s.nvars, dnf };
        let mut r = VolumeRefiner {
            set: s.clone(),
            domain: domain.clone(),
            depth: 0,
            boundary: Vec::new(),
            inside_volume: Rat::zero(),
            cells_classified: 1,
            grid: grid::GridClassifier::new(s, &domain.sides),
        };
        match classify_sides(s, &domain.sides, true) {
            BoxClass::Inside => r.inside_volume = domain.volume(),
            BoxClass::Outside => {}
            BoxClass::Boundary => r.boundary.push(vec![0; s.nvars]),
        }
        Ok(r)
    }

    fn cell_volume(&self) -> Rat {
        let shrink = Rat::from_integer(BigInt::one() << (self.depth as usize * self.set.nvars));
        self.domain.volume() / shrink
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn boundary_cells(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_exact(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn result(&self) -> VolumeResult {
        let boundary = self.cell_volume() * Rat::from_integer(self.boundary.len().into());
        VolumeResult {
            lower: self.inside_volume.clone(),
            upper: &self.inside_volume + boundary,
            depth: self.depth,
            cells_classified: self.cells_classified,
        }
    }

    fn sides_of(&self, cell: &[u64], depth: u32) -> Vec<RatInterval> {
        let denom = Rat::from_integer(BigInt::one() << depth as usize);
        cell.iter()
            .zip(&self.domain.sides)
            .map(|(&i, side)| {
                let step = side.width() / &denom;
                let lo = side.lo() + &step * Rat::from_integer(i.into());
                let hi = &lo + &step;
                RatInterval::new(lo, hi).expect("positive step")
            })
            .collect()
    }

    /// Splits every boundary cell into `2^n` children and classifies them.
    pub fn refine(&mut self) -> Result<(), SemialgError> {
        if self.boundary.is_empty() {
            return Ok(());
        }
        if self.depth >= MAX_SUBDIVISION_DEPTH {
            return Err(SemialgError::DepthLimit(self.depth + 1));
        }
        let n = self.set.nvars;
        let next = self.depth + 1;
        if let Some(g) = &mut self.grid {
            g.set_depth(next);
        }
        let children: Vec<(Vec<u64>, BoxClass)> = self
            .boundary
            .par_iter()
            .flat_map_iter(|cell| {
                (0..1u64 << n).map(move |mask| {
                    let child: Vec<u64> = cell
                        .iter()
                        .enumerate()
                        .map(|(k, &i)| 2 * i + ((mask >> k) & 1))
                        .collect();
                    child
                })
            })
            .map(|child| {
                let class = self
                    .grid
                    .as_ref()
                    .and_then(|g| g.classify(&child))
                    .unwrap_or_else(|| classify_sides(&self.set, &self.sides_of(&child, next), true));
                (child, class)
            })
            .collect();
        self.cells_classified += children.len() as u64;
        self.depth = next;
        let cell_volume = self.cell_volume();
        let mut inside = 0u64;
        let mut boundary = Vec::new();
        for (child, class) in children {
            match class {
                BoxClass::Inside => inside += 1,
                BoxClass::Boundary => boundary.push(child),
                BoxClass::Outside => {}
            }
        }
        self.inside_volume += cell_volume * Rat::from_integer(inside.into());
        self.boundary = boundary;
        Ok(())
    }

    /// Refines until the bounds are at most `width` apart.
    pub fn refine_to_width(&mut self, width: &Rat, ceiling: u32) -> Result<VolumeResult, SemialgError> {
        loop {
            let r = self.result();
            if &r.width() <= width {
                return Ok(r);
            }
            if self.depth >= ceiling {
                return Err(SemialgError::DepthLimit(ceiling));
            }
            self.refine()?;
        }
    }
}

/// Certified lower and upper volume bounds after at most `max_depth` levels.
pub fn volume_bounds(s: &SemialgSet, domain: &Box, max_depth: u32) -> Result<VolumeResult, SemialgError> {
    let mut r = VolumeRefiner::new(s, domain)?;
    while r.depth < max_depth && !r.is_exact() {
        r.refine()?;
    }
    Ok(r.result())
}

/// Depth ceiling used by [`volume_creal`].
pub const DEFAULT_DEPTH_CEILING: u32 = 24;

/// The volume of `s ∩ domain` as a real; index `x` refines until the bounds
/// are within `2/(x+1)` and returns their midpoint.
pub fn volume_creal(s: &SemialgSet, domain: &Box) -> Result<CReal, SemialgError> {
    volume_creal_with_ceiling(s, domain, DEFAULT_DEPTH_CEILING)
}

pub fn volume_creal_with_ceiling(s: &SemialgSet, domain: &Box, ceiling: u32) -> Result<CReal, SemialgError> {
    let refiner = VolumeRefiner::new(s, domain)?;
    if refiner.is_exact() {
        return Ok(CReal::from_rational(refiner.result().lower)
            .with_provenance("exact volume by box classification"));
    }
    let state = Arc::new(Mutex::new(refiner));
    Ok(CReal::new(
        Modulus::Inverse,
        ClassTag::Recursive,
        "volume by certified box subdivision",
        move |x: &Nat| {
            let target = inv_succ(x) * Rat::from_integer(2.into());
            let r = state.lock().refine_to_width(&target, ceiling)?;
            Ok(r.midpoint())
        },
    ))
}

/// Bounds at depth `d` as a nested interval sequence.
pub fn volume_nested(s: &SemialgSet, domain: &Box, ceiling: u32) -> Result<NestedIntervals, SemialgError> {
    let levels: Arc<Mutex<(VolumeRefiner, Vec<VolumeResult>)>> =
        Arc::new(Mutex::new((VolumeRefiner::new(s, domain)?, Vec::new())));
    let bracket = move |d: u64| -> Result<VolumeResult, RealError> {
        let mut guard = levels.lock();
        let (refiner, seen) = &mut *guard;
        if seen.is_empty() {
            seen.push(refiner.result());
        }
        while (seen.len() as u64) <= d {
            if refiner.depth() >= ceiling {
                return Err(SemialgError::DepthLimit(ceiling).into());
            }
            refiner.refine()?;
            seen.push(refiner.result());
        }
        Ok(seen[d as usize].clone())
    };
    let bracket = Arc::new(bracket);
    let upper = Arc::clone(&bracket);
    Ok(NestedIntervals::new(
        move |d| Ok(bracket(d)?.lower),
        move |d| Ok(upper(d)?.upper),
    ))
}

/// `∫_s num/den` over the domain box, as the difference of the volumes of the
/// regions under the positive and negative parts.
pub fn integrate(s: &SemialgSet, num: &MPoly, den: &MPoly, domain: &Box) -> Result<CReal, SemialgError> {
    let n = s.nvars;
    for p in [num, den] {
        if p.nvars() != n {
            return Err(SemialgError::DimensionMismatch(n, p.nvars()));
        }
    }
    if domain.dim() != n {
        return Err(SemialgError::DimensionMismatch(n, domain.dim()));
    }
    let den_enc = den.eval_interval(&domain.sides);
    if den_enc.contains_zero() {
        return Err(SemialgError::DenominatorZero);
    }
    let num_enc = num.eval_interval(&domain.sides);
    let ratio = num_enc.div(&den_enc).map_err(|_| SemialgError::DenominatorZero)?;
    let height = ratio.magnitude();
    if height.is_zero() {
        return Ok(CReal::from_rational(Rat::zero()).with_provenance("integral of 0"));
    }

    let m = n + 1;
    let t = MPoly::var(m, n);
    let p = num.embed(m, 0);
    let q = den.embed(m, 0);
    let tq = t.mul(&q);
    // t·Q < ±P with the inequality flipped when Q < 0.
    let (pos, neg) = if den_enc.is_positive() {
        (p.sub(&tq), p.neg().sub(&tq))
    } else {
        (tq.sub(&p), tq.add(&p))
    };
    let base = s
        .lifted(m)
        .intersect(&SemialgSet::atom(SignCondition::gt(t)))?;
    let lifted_domain = domain.with_extra_side(RatInterval::new(Rat::zero(), height).expect("height >= 0"));

    let positive = base.intersect(&SemialgSet::atom(SignCondition::gt(pos)))?;
    let negative = base.intersect(&SemialgSet::atom(SignCondition::gt(neg)))?;
    let v1 = volume_creal(&positive, &lifted_domain)?;
    let v2 = volume_creal(&negative, &lifted_domain)?;
    Ok(v1.sub(&v2).with_provenance("signed volume difference of lifted regions"))
}

/// Periods realized as volumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodName {
    PiDisk,
    /// `ln ρ`, `ρ > 1`.
    LnRho(Rat),
}

pub fn unit_disk() -> SemialgSet {
    SemialgSet::atom(SignCondition::gt(
        MPoly::parse("1 - x^2 - y^2", 2).expect("static polynomial"),
    ))
}

/// `{1 < x < ρ, 0 < xy < 1}` together with its bounding box `[1, ρ] × [0, 1]`.
pub fn ln_region(rho: &Rat) -> Result<(SemialgSet, Box), SemialgError> {
    if rho <= &Rat::one() {
        return Err(SemialgError::InvalidParameter(format!("ln region needs ρ > 1, got {rho}")));
    }
    let rho_c = MPoly::constant(2, rho.clone());
    let x = MPoly::var(2, 0);
    let xy = x.mul(&MPoly::var(2, 1));
    let one = MPoly::constant(2, Rat::one());
    let set = SemialgSet::conjunction(
        2,
        vec![
            SignCondition::gt(x.sub(&one)),
            SignCondition::gt(rho_c.sub(&x)),
            SignCondition::gt(xy.clone()),
            SignCondition::gt(one.sub(&xy)),
        ],
    )?;
    let domain = Box::from_bounds(&[(Rat::one(), rho.clone()), (Rat::zero(), Rat::one())])?;
    Ok((set, domain))
}

pub fn period_catalog(name: &PeriodName) -> Result<CReal, SemialgError> {
    match name {
        PeriodName::PiDisk => {
            let one = Rat::one();
            let domain = Box::from_bounds(&[(-one.clone(), one.clone()), (-one.clone(), one)])?;
            Ok(volume_creal(&unit_disk(), &domain)?.with_provenance("area of the unit disk"))
        }
        PeriodName::LnRho(rho) => {
            let (set, domain) = ln_region(rho)?;
            Ok(volume_creal(&set, &domain)?
                .with_provenance(format!("area of {{1 < x < {rho}, 0 < xy < 1}}")))
        }
    }
}
