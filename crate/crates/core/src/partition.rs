//! Partitions, their Young diagrams, residues and ladders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing list of positive parts. The empty list is `∅`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_modulus(e: usize) -> Result<()> {
    if e < 2 {
        Err(Error::InvalidModulus(e))
    } else {
        Ok(())
    }
}

/// `(c − b + a) mod e` for the node in row `b`, column `c` (both 1-based).
pub fn residue(b: usize, c: usize, e: usize, a: i64) -> Result<usize> {
    check_modulus(e)?;
    if b == 0 || c == 0 {
        return Err(Error::InvalidArgument(format!("node ({b},{c}) is not 1-based")));
    }
    Ok(residue_unchecked(b, c, e, a))
}

#[inline]
pub(crate) fn residue_unchecked(b: usize, c: usize, e: usize, a: i64) -> usize {
    (a + c as i64 - b as i64).rem_euclid(e as i64) as usize
}

/// One non-empty ladder of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    pub index: usize,
    pub size: usize,
    pub residue: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LadderDecomposition {
    pub entries: Vec<Ladder>,
}

impl LadderDecomposition {
    /// The induction word `(residue, multiplicity)` in application order.
    pub fn word(&self) -> Vec<(i64, usize)> {
        self.entries.iter().map(|l| (l.residue as i64, l.size)).collect()
    }
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts increase.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("parts {parts:?} are not weakly decreasing")));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("parts {parts:?} contain an interior zero")));
        }
        Ok(Partition { parts })
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]) && !parts.contains(&0));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `b` (1-based); zero beyond the length.
    pub fn part(&self, b: usize) -> usize {
        if b == 0 {
            return usize::MAX;
        }
        self.parts.get(b - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Nodes `(row, col)` of the Young diagram, row by row.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |c| (i + 1, c)))
    }

    pub fn contains_node(&self, b: usize, c: usize) -> bool {
        b >= 1 && c >= 1 && self.part(b) >= c
    }

    /// Rows `b` where a node can be added, top to bottom; the node is `(b, λ_b + 1)`.
    pub fn addable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len() + 1).filter(move |&b| b == 1 || self.part(b - 1) > self.part(b))
    }

    /// Rows `b` whose last node is removable, top to bottom.
    pub fn removable_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len()).filter(move |&b| self.part(b) > self.part(b + 1))
    }

    /// Adds one node at the end of row `b` (must be addable).
    pub(crate) fn with_added_row(&self, b: usize) -> Partition {
        let mut parts = self.parts.clone();
        if b > parts.len() {
            parts.push(1);
        } else {
            parts[b - 1] += 1;
        }
        Partition::from_sorted_unchecked(parts)
    }

    pub(crate) fn with_removed_row(&self, b: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[b - 1] -= 1;
        if parts[b - 1] == 0 {
            parts.pop();
        }
        Partition::from_sorted_unchecked(parts)
    }

    pub fn ladder_decomposition(&self, e: usize, a: i64) -> Result<LadderDecomposition> {
        check_modulus(e)?;
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for (b, c) in self.nodes() {
            *counts.entry(b + (e - 1) * (c - 1)).or_default() += 1;
        }
        let entries = counts
            .into_iter()
            .map(|(index, size)| Ladder {
                index,
                size,
                residue: (a + 1 - index as i64).rem_euclid(e as i64) as usize,
            })
            .collect();
        Ok(LadderDecomposition { entries })
    }

    /// False iff some non-zero part is repeated at least `e` times.
    pub fn is_e_regular(&self, e: usize) -> bool {
        let mut run = 0;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 && self.parts[i - 1] == *p {
                run += 1;
            } else {
                run = 1;
            }
            if run >= e {
                return false;
            }
        }
        true
    }

    /// True iff every difference `λ_i − λ_{i+1}` (with `λ_{l+1} = 0`) is below `e`.
    pub fn is_e_restricted(&self, e: usize) -> bool {
        (1..=self.len()).all(|b| self.part(b) - self.part(b + 1) < e)
    }

    /// Partition dominance `self ⊵ other`. Sizes must agree.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::IncomparableInput(format!(
                "{self} and {other} have different sizes"
            )));
        }
        Ok(self.dominates_unchecked(other))
    }

    pub(crate) fn dominates_unchecked(&self, other: &Partition) -> bool {
        let (mut s, mut t) = (0usize, 0usize);
        for b in 1..=self.len().max(other.len()) {
            s += self.part(b);
            t += other.part(b);
            if s < t {
                return false;
            }
        }
        true
    }

    /// All partitions of `n` in lexicographically decreasing order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition::from_sorted_unchecked(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        rec(n, n, &mut cur, &mut out);
        out
    }

    /// Grouped text form, e.g. `(4^2,2,1)`; the empty partition is `∅`.
    pub fn to_grouped_string(&self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        let mut items = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            if j - i > 1 {
                items.push(format!("{}^{}", self.parts[i], j - i));
            } else {
                items.push(self.parts[i].to_string());
            }
            i = j;
        }
        format!("({})", items.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grouped_string())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn is_empty_token(s: &str) -> bool {
    matches!(s, "" | "∅" | "()" | "0" | "-" | "[]")
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `(4,4,2,1)`, `(4^2,2,1)`, `4,4,2,1`, and `∅`/`()` for the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if is_empty_token(&t) {
            return Ok(Partition::empty());
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(&t);
        if is_empty_token(inner) {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for item in inner.split(',') {
            let (base, rep) = match item.split_once('^') {
                Some((b, r)) => (b, r),
                None => (item, "1"),
            };
            let base: usize = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {item:?} in {s:?}")))?;
            let rep: usize = rep
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {item:?} in {s:?}")))?;
            parts.extend(std::iter::repeat_n(base, rep));
        }
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}
