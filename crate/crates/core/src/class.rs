use std::fmt;

/// Complexity class attached to functions, sequences and reals.
///
/// The classes form the chain
/// `LowerElementary ⊆ E(2) ⊆ Elementary = E(3) ⊆ E(4) ⊆ … ⊆ PrimitiveRecursive ⊆ Recursive`.
/// `LowerElementary` and `E(2)` stay distinct tags even though it is open
/// whether they coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    LowerElementary,
    Elementary,
    /// Grzegorczyk level `n`; only `n == 2` or `n >= 4` are produced by
    /// [`ClassTag::grzegorczyk`].
    E(u32),
    PrimitiveRecursive,
    Recursive,
}

impl ClassTag {
    /// Canonical tag for the Grzegorczyk class `E^n`.
    pub fn grzegorczyk(n: u32) -> ClassTag {
        match n {
            0..=2 => ClassTag::E(2),
            3 => ClassTag::Elementary,
            _ => ClassTag::E(n),
        }
    }

    fn rank(self) -> u64 {
        match self {
            ClassTag::LowerElementary => 0,
            ClassTag::E(n) if n <= 2 => 1,
            ClassTag::Elementary | ClassTag::E(3) => 2,
            ClassTag::E(n) => n as u64 - 1,
            ClassTag::PrimitiveRecursive => u64::MAX - 1,
            ClassTag::Recursive => u64::MAX,
        }
    }

    /// Least class containing both.
    pub fn join(self, other: ClassTag) -> ClassTag {
        let a = self.canonical();
        let b = other.canonical();
        if a.rank() >= b.rank() {
            a
        } else {
            b
        }
    }

    pub fn join_all<I: IntoIterator<Item = ClassTag>>(tags: I) -> ClassTag {
        tags.into_iter()
            .fold(ClassTag::LowerElementary, ClassTag::join)
    }

    /// `true` when every member of `self` is a member of `other`.
    pub fn is_within(self, other: ClassTag) -> bool {
        self.canonical().rank() <= other.canonical().rank()
    }

    fn canonical(self) -> ClassTag {
        match self {
            ClassTag::E(n) => ClassTag::grzegorczyk(n),
            t => t,
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            ClassTag::LowerElementary => write!(f, "ℓEL"),
            ClassTag::Elementary => write!(f, "EL"),
            ClassTag::E(2) => write!(f, "E²"),
            ClassTag::E(n) => write!(f, "E^{n}"),
            ClassTag::PrimitiveRecursive => write!(f, "PR"),
            ClassTag::Recursive => write!(f, "R"),
        }
    }
}
