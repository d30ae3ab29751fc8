//! Text format for set descriptions.
//!
//! ```text
//! # quarter disk
//! vars 2
//! domain 0,1;0,1
//! x1 > 0 & x2 > 0 & 1 - x1^2 - x2^2 > 0
//! ```
//!
//! Each non-header line is one disjunct; atoms are `&`-separated and have
//! the form `lhs > rhs`, `lhs < rhs` or `lhs = rhs`. The `domain` line is
//! optional.

use std::fmt;

use super::{Box, MPoly, SemialgError, SemialgSet, SignCondition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaFile {
    pub set: SemialgSet,
    pub domain: Option<Box>,
}

fn syntax(line: usize, message: impl Into<String>) -> SemialgError {
    SemialgError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_atom(atom: &str, nvars: usize, line: usize) -> Result<SignCondition, SemialgError> {
    let (pos, op) = atom
        .char_indices()
        .find(|(_, c)| matches!(c, '>' | '<' | '='))
        .ok_or_else(|| syntax(line, format!("`{}`: expected `>`, `<` or `=`", atom.trim())))?;
    let lhs = &atom[..pos];
    let rhs = &atom[pos + 1..];
    if rhs.contains(['>', '<', '=']) {
        return Err(syntax(line, format!("`{}`: one relation per atom", atom.trim())));
    }
    let parse = |s: &str| {
        MPoly::parse(s, nvars).map_err(|e| syntax(line, format!("`{}`: {e}", s.trim())))
    };
    let (l, r) = (parse(lhs)?, parse(rhs)?);
    Ok(match op {
        '>' => SignCondition::gt(l.sub(&r)),
        '<' => SignCondition::gt(r.sub(&l)),
        _ => SignCondition::eq_zero(l.sub(&r)),
    })
}

pub fn parse_sa(text: &str) -> Result<SaFile, SemialgError> {
    let mut nvars: Option<usize> = None;
    let mut domain = None;
    let mut dnf = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vars") {
            if nvars.is_some() {
                return Err(syntax(line, "duplicate `vars` header"));
            }
            if !dnf.is_empty() {
                return Err(syntax(line, "`vars` must precede the clauses"));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(line, "`vars` needs a natural number"))?;
            nvars = Some(n);
            continue;
        }
        if let Some(rest) = content.strip_prefix("domain") {
            let b = Box::parse(rest).map_err(|e| syntax(line, e.to_string()))?;
            domain = Some(b);
            continue;
        }
        let n = nvars.ok_or_else(|| syntax(line, "missing `vars n` header"))?;
        let conj = content
            .split('&')
            .map(|atom| parse_atom(atom, n, line))
            .collect::<Result<Vec<_>, _>>()?;
        dnf.push(conj);
    }
    let n = nvars.ok_or_else(|| syntax(1, "missing `vars n` header"))?;
    if let Some(b) = &domain {
        if b.dim() != n {
            return Err(SemialgError::DimensionMismatch(n, b.dim()));
        }
    }
    Ok(SaFile {
        set: SemialgSet::from_dnf(n, dnf)?,
        domain,
    })
}

impl fmt::Display for SaFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.set.nvars())?;
        if let Some(b) = &self.domain {
            writeln!(f, "domain {b}")?;
        }
        for conj in self.set.dnf() {
            if conj.is_empty() {
                writeln!(f, "0 = 0")?;
            } else {
                let atoms: Vec<String> = conj.iter().map(|c| c.to_string()).collect();
                writeln!(f, "{}", atoms.join(" & "))?;
            }
        }
        Ok(())
    }
}
