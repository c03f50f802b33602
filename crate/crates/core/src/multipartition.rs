//! Multipartitions, multicharges, node orders, good nodes and multirunner insertion.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abacus::{add_runner, inserted_runner_is_empty, AbacusDisplay};
use crate::error::{Error, Result};
use crate::partition::{check_modulus, is_empty_token, residue_unchecked, Partition};

/// An ordered tuple of `r ≥ 1` partitions.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition {
    comps: Vec<Partition>,
}

/// A node `(row, col, comp)`, all 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
    pub comp: usize,
}

impl Node {
    pub fn new(row: usize, col: usize, comp: usize) -> Self {
        Node { row, col, comp }
    }

    /// `self` is above `other`: an earlier component, or the same component and an earlier row.
    pub fn is_above(&self, other: &Node) -> bool {
        self.comp < other.comp || (self.comp == other.comp && self.row < other.row)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.comp)
    }
}

/// `node_above(m, n)`.
pub fn node_above(m: &Node, n: &Node) -> bool {
    m.is_above(n)
}

/// A multicharge `(a_1, …, a_r)` together with the modulus `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Multicharge {
    e: usize,
    charges: Vec<i64>,
}

impl Multicharge {
    pub fn new(e: usize, charges: Vec<i64>) -> Result<Self> {
        check_modulus(e)?;
        if charges.is_empty() {
            return Err(Error::InvalidArgument("a multicharge needs at least one entry".into()));
        }
        Ok(Multicharge { e, charges })
    }

    /// The multicharge `a_j = s_j`.
    pub fn from_residues(e: usize, s: &[usize]) -> Result<Self> {
        Self::new(e, s.iter().map(|&x| (x % e.max(1)) as i64).collect())
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn charges(&self) -> &[i64] {
        &self.charges
    }

    pub fn level(&self) -> usize {
        self.charges.len()
    }

    pub fn residues(&self) -> Vec<usize> {
        self.charges.iter().map(|a| a.rem_euclid(self.e as i64) as usize).collect()
    }

    pub fn node_residue(&self, n: &Node) -> usize {
        residue_unchecked(n.row, n.col, self.e, self.charges[n.comp - 1])
    }
}

/// Signed entry of an i-signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Addable,
    Removable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSignature {
    /// Surviving signed nodes, listed from lower to higher.
    pub signature: Vec<(Sign, Node)>,
    pub good: Option<Node>,
}

impl Multipartition {
    pub fn new(comps: Vec<Partition>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::InvalidArgument("a multipartition needs r >= 1 components".into()));
        }
        Ok(Multipartition { comps })
    }

    pub fn empty(r: usize) -> Self {
        assert!(r >= 1, "r must be positive");
        Multipartition { comps: vec![Partition::empty(); r] }
    }

    pub fn from_parts(parts: &[&[usize]]) -> Result<Self> {
        let comps = parts.iter().map(|p| Partition::new(p.to_vec())).collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn components(&self) -> &[Partition] {
        &self.comps
    }

    pub fn component(&self, j: usize) -> &Partition {
        &self.comps[j - 1]
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    pub fn size(&self) -> usize {
        self.comps.iter().map(Partition::size).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.iter().all(Partition::is_empty)
    }

    /// `(λ^{(2)}, …, λ^{(r)})`.
    pub fn tail(&self) -> Option<Multipartition> {
        if self.comps.len() < 2 {
            None
        } else {
            Some(Multipartition { comps: self.comps[1..].to_vec() })
        }
    }

    /// `(∅, λ^{(2)}, …, λ^{(r)})`.
    pub fn with_empty_head(&self) -> Multipartition {
        let mut comps = self.comps.clone();
        comps[0] = Partition::empty();
        Multipartition { comps }
    }

    /// `(head, self…)`.
    pub fn prepend(&self, head: Partition) -> Multipartition {
        let mut comps = Vec::with_capacity(self.comps.len() + 1);
        comps.push(head);
        comps.extend(self.comps.iter().cloned());
        Multipartition { comps }
    }

    pub(crate) fn replace_component(&self, j: usize, p: Partition) -> Multipartition {
        let mut comps = self.comps.clone();
        comps[j - 1] = p;
        Multipartition { comps }
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(j, p)| p.nodes().map(move |(b, c)| Node::new(b, c, j + 1)))
    }

    pub fn contains_node(&self, n: &Node) -> bool {
        n.comp >= 1 && n.comp <= self.level() && self.comps[n.comp - 1].contains_node(n.row, n.col)
    }

    pub fn addable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (j, p) in self.comps.iter().enumerate() {
            for b in p.addable_rows() {
                out.push(Node::new(b, p.part(b) + 1, j + 1));
            }
        }
        out
    }

    pub fn removable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (j, p) in self.comps.iter().enumerate() {
            for b in p.removable_rows() {
                out.push(Node::new(b, p.part(b), j + 1));
            }
        }
        out
    }

    /// Addable and removable `i`-nodes, each sorted from higher to lower.
    pub fn addable_removable_i_nodes(&self, mc: &Multicharge, i: usize) -> (Vec<Node>, Vec<Node>) {
        let add = self.addable_nodes().into_iter().filter(|n| mc.node_residue(n) == i).collect();
        let rem = self.removable_nodes().into_iter().filter(|n| mc.node_residue(n) == i).collect();
        (add, rem)
    }

    pub fn with_node_added(&self, n: &Node) -> Multipartition {
        self.replace_component(n.comp, self.comps[n.comp - 1].with_added_row(n.row))
    }

    pub fn with_node_removed(&self, n: &Node) -> Multipartition {
        self.replace_component(n.comp, self.comps[n.comp - 1].with_removed_row(n.row))
    }

    /// The reduced `i`-signature and the good `i`-node, if any.
    pub fn reduced_i_signature(&self, mc: &Multicharge, i: usize) -> ReducedSignature {
        let (add, rem) = self.addable_removable_i_nodes(mc, i);
        let mut all: Vec<(Sign, Node)> = add
            .into_iter()
            .map(|n| (Sign::Addable, n))
            .chain(rem.into_iter().map(|n| (Sign::Removable, n)))
            .collect();
        // Lower to higher: later component first, then later row first.
        all.sort_by_key(|(_, x)| std::cmp::Reverse((x.comp, x.row)));
        let mut stack: Vec<(Sign, Node)> = Vec::with_capacity(all.len());
        for entry in all {
            if entry.0 == Sign::Addable && matches!(stack.last(), Some((Sign::Removable, _))) {
                stack.pop();
            } else {
                stack.push(entry);
            }
        }
        let good = stack.iter().find(|(s, _)| *s == Sign::Removable).map(|(_, n)| *n);
        ReducedSignature { signature: stack, good }
    }

    /// Whether `self` can be emptied by removing good nodes one at a time.
    /// Every choice of residue is explored, with memoised dead ends.
    pub fn is_regular(&self, mc: &Multicharge) -> bool {
        fn search(lam: &Multipartition, mc: &Multicharge, dead: &mut HashSet<Multipartition>) -> bool {
            if lam.is_empty() {
                return true;
            }
            if dead.contains(lam) {
                return false;
            }
            for i in 0..mc.e() {
                if let Some(good) = lam.reduced_i_signature(mc, i).good {
                    if search(&lam.with_node_removed(&good), mc, dead) {
                        return true;
                    }
                }
            }
            dead.insert(lam.clone());
            false
        }
        search(self, mc, &mut HashSet::new())
    }

    pub fn is_e_multiregular(&self, e: usize) -> bool {
        self.comps.iter().all(|p| p.is_e_regular(e))
    }

    /// Dominance `self ⊵ other` on multipartitions of the same size and level.
    pub fn dominates(&self, other: &Multipartition) -> Result<bool> {
        if self.level() != other.level() || self.size() != other.size() {
            return Err(Error::IncomparableInput(format!(
                "{self} and {other} differ in size or level"
            )));
        }
        Ok(self.dominates_unchecked(other))
    }

    pub(crate) fn dominates_unchecked(&self, other: &Multipartition) -> bool {
        let (mut before_s, mut before_t) = (0usize, 0usize);
        for (p, q) in self.comps.iter().zip(&other.comps) {
            let (mut s, mut t) = (before_s, before_t);
            for b in 1..=p.len().max(q.len()) {
                s += p.part(b);
                t += q.part(b);
                if s < t {
                    return false;
                }
            }
            if s < t {
                return false;
            }
            before_s = s;
            before_t = t;
        }
        true
    }

    /// `self ≽ other`: a larger first component, or first components of equal
    /// size with `self^{(1)} ⊵ other^{(1)}`.
    pub fn refined_order_geq(&self, other: &Multipartition) -> bool {
        let (p, q) = (&self.comps[0], &other.comps[0]);
        match p.size().cmp(&q.size()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => p.dominates_unchecked(q),
        }
    }

    /// The fixed enumeration order: component by component, larger size
    /// first, then lexicographically larger parts first.
    pub fn enumeration_cmp(&self, other: &Multipartition) -> Ordering {
        for (p, q) in self.comps.iter().zip(&other.comps) {
            let ord = q.size().cmp(&p.size()).then_with(|| q.parts().cmp(p.parts()));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.level().cmp(&other.level())
    }

    pub fn e_multicore(&self, e: usize) -> Result<Multipartition> {
        let comps = self
            .comps
            .iter()
            .map(|p| Ok(AbacusDisplay::encode(p, e, p.len() as i64)?.e_core()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Multipartition { comps })
    }
}

/// All `r`-multipartitions of `n` in the enumeration order.
pub fn enumerate_multipartitions(n: usize, r: usize) -> Vec<Multipartition> {
    assert!(r >= 1, "r must be positive");
    let by_size: Vec<Vec<Partition>> = (0..=n).map(Partition::all).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Partition> = Vec::with_capacity(r);
    fn rec(
        rem: usize,
        left: usize,
        by_size: &[Vec<Partition>],
        cur: &mut Vec<Partition>,
        out: &mut Vec<Multipartition>,
    ) {
        if left == 1 {
            for p in &by_size[rem] {
                cur.push(p.clone());
                out.push(Multipartition { comps: cur.clone() });
                cur.pop();
            }
            return;
        }
        for size in (0..=rem).rev() {
            for p in &by_size[size] {
                cur.push(p.clone());
                rec(rem - size, left - 1, by_size, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, r, &by_size, &mut cur, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0].enumeration_cmp(&w[1]) == Ordering::Less));
    out
}

/// The common inserted-runner label `d` with `k_j + s_j ≡ d (mod e)` for all `j`.
pub fn common_runner_label(e: usize, s: &[usize], k: &[i64]) -> Result<usize> {
    if s.len() != k.len() {
        return Err(Error::IncompatibleK(format!("k has {} entries but r = {}", k.len(), s.len())));
    }
    let labels: Vec<usize> = s
        .iter()
        .zip(k)
        .map(|(&sj, &kj)| (kj + sj as i64).rem_euclid(e as i64) as usize)
        .collect();
    if labels.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::IncompatibleK(format!(
            "k + s gives runner labels {labels:?} mod {e}; they must all agree"
        )));
    }
    Ok(labels[0])
}

/// `λ^{+k}` together with the new residues `s⁺` modulo `e + 1`.
pub fn add_multirunner(lambda: &Multipartition, mc: &Multicharge, k: &[i64]) -> Result<(Multipartition, Vec<usize>)> {
    let e = mc.e();
    if lambda.level() != mc.level() {
        return Err(Error::InvalidArgument("multicharge and multipartition differ in level".into()));
    }
    common_runner_label(e, &mc.residues(), k)?;
    let mut comps = Vec::with_capacity(lambda.level());
    let mut s_plus = Vec::with_capacity(lambda.level());
    for ((p, &a), &kj) in lambda.components().iter().zip(mc.charges()).zip(k) {
        if a < p.len() as i64 || a < kj {
            return Err(Error::InsufficientCharge { charge: a, length: p.len().max(kj.max(0) as usize) });
        }
        if a + kj < 0 {
            return Err(Error::InvalidK { charge: a, k: kj });
        }
        let ins = AbacusDisplay::encode(p, e, a)?.insert_runner(kj)?;
        s_plus.push(ins.display.charge() % (e + 1));
        comps.push(ins.display.decode());
    }
    Ok((Multipartition { comps }, s_plus))
}

/// True iff every inserted runner of `λ^{+k}` is empty.
pub fn multirunner_is_empty(lambda: &Multipartition, mc: &Multicharge, k: &[i64]) -> Result<bool> {
    common_runner_label(mc.e(), &mc.residues(), k)?;
    let mut all = true;
    for ((p, &a), &kj) in lambda.components().iter().zip(mc.charges()).zip(k) {
        all &= inserted_runner_is_empty(p, mc.e(), a, kj)?;
    }
    Ok(all)
}

/// Componentwise `add_runner`, kept for cross-checking `add_multirunner`.
pub fn add_runner_componentwise(lambda: &Multipartition, mc: &Multicharge, k: &[i64]) -> Result<Multipartition> {
    let comps = lambda
        .components()
        .iter()
        .zip(mc.charges())
        .zip(k)
        .map(|((p, &a), &kj)| add_runner(p, mc.e(), a, kj))
        .collect::<Result<Vec<_>>>()?;
    Multipartition::new(comps)
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.comps.iter().map(Partition::to_grouped_string).collect();
        write!(f, "({})", items.join(","))
    }
}

impl fmt::Debug for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Multipartition {
    type Err = Error;

    /// Accepts `((3,1),(1^2))`, `(∅,(1))` and `((2),())`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("multipartition {s:?} must be parenthesised")))?;
        let mut comps = Vec::new();
        let mut depth = 0i32;
        let mut start = 0usize;
        let chars: Vec<(usize, char)> = inner.char_indices().collect();
        for &(idx, ch) in &chars {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    comps.push(&inner[start..idx]);
                    start = idx + ch.len_utf8();
                }
                _ => {}
            }
            if depth < 0 {
                return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
        }
        comps.push(&inner[start..]);
        let comps = comps
            .into_iter()
            .map(|c| {
                if is_empty_token(c) {
                    Ok(Partition::empty())
                } else if c.starts_with('(') {
                    c.parse::<Partition>()
                } else {
                    Err(Error::Parse(format!("component {c:?} of {s:?} must be parenthesised")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Multipartition::new(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let m = mp("((3,1),(1^2))");
        assert_eq!(m, Multipartition::from_parts(&[&[3, 1], &[1, 1]]).unwrap());
        assert_eq!(m.to_string(), "((3,1),(1^2))");
        assert_eq!(mp("(∅,(1))"), Multipartition::from_parts(&[&[], &[1]]).unwrap());
        assert_eq!(mp("((),(1))"), mp("(∅,(1))"));
        assert_eq!(mp("((2))").level(), 1);
        assert!("((2),(1)".parse::<Multipartition>().is_err());
        let json = serde_json::to_string(&mp("((3,1),∅,(2))")).unwrap();
        assert_eq!(json, "[[3,1],[],[2]]");
        assert_eq!(serde_json::from_str::<Multipartition>(&json).unwrap(), mp("((3,1),∅,(2))"));
    }

    #[test]
    fn node_residue_examples() {
        let mc = Multicharge::new(4, vec![1, 0]).unwrap();
        assert_eq!(mc.node_residue(&Node::new(1, 1, 1)), 1);
        assert_eq!(mc.node_residue(&Node::new(2, 1, 2)), 3);
        assert_eq!(mc.node_residue(&Node::new(1, 3, 1)), 3);
    }

    #[test]
    fn node_above_examples() {
        assert!(node_above(&Node::new(1, 1, 1), &Node::new(1, 1, 2)));
        assert!(!node_above(&Node::new(3, 1, 1), &Node::new(1, 5, 1)));
        let n = Node::new(2, 2, 1);
        assert!(!node_above(&n, &n));
    }

    /// Oracle: scan every cell of a bounding box and test addability and
    /// removability by set membership.
    fn scan_i_nodes(lam: &Multipartition, mc: &Multicharge, i: usize) -> (Vec<Node>, Vec<Node>) {
        let mut add = Vec::new();
        let mut rem = Vec::new();
        for j in 1..=lam.level() {
            let p = lam.component(j);
            for b in 1..=p.len() + 2 {
                for c in 1..=p.part(1) + 2 {
                    let n = Node::new(b, c, j);
                    if mc.node_residue(&n) != i {
                        continue;
                    }
                    let inside = p.contains_node(b, c);
                    let up_ok = b == 1 || p.contains_node(b - 1, c);
                    let left_ok = c == 1 || p.contains_node(b, c - 1);
                    if !inside && up_ok && left_ok {
                        add.push(n);
                    }
                    if inside && !p.contains_node(b + 1, c) && !p.contains_node(b, c + 1) {
                        rem.push(n);
                    }
                }
            }
        }
        let key = |n: &Node| (n.comp, n.row);
        add.sort_by_key(key);
        rem.sort_by_key(key);
        (add, rem)
    }

    #[test]
    fn i_node_examples() {
        let mc = Multicharge::new(2, vec![0, 0]).unwrap();
        let (add, rem) = mp("((1),∅)").addable_removable_i_nodes(&mc, 1);
        assert_eq!(add, vec![Node::new(1, 2, 1), Node::new(2, 1, 1)]);
        assert!(rem.is_empty());

        let mc = Multicharge::new(3, vec![1, 1, 1]).unwrap();
        let (add, rem) = Multipartition::empty(3).addable_removable_i_nodes(&mc, 1);
        assert_eq!(add, vec![Node::new(1, 1, 1), Node::new(1, 1, 2), Node::new(1, 1, 3)]);
        assert!(rem.is_empty());

        let mc = Multicharge::new(4, vec![1, 0]).unwrap();
        let (_, rem) = mp("((3,1),(1,1))").addable_removable_i_nodes(&mc, 3);
        assert!(rem.contains(&Node::new(2, 1, 2)));
    }

    #[test]
    fn good_node_examples() {
        let mc = Multicharge::new(4, vec![1, 0]).unwrap();
        let lam = mp("((3,1),(1,1))");
        let good = lam.reduced_i_signature(&mc, 3).good.unwrap();
        assert_eq!(lam.with_node_removed(&good), mp("((2,1),(1,1))"));

        for i in 0..4 {
            assert!(Multipartition::empty(2).reduced_i_signature(&mc, i).good.is_none());
        }

        let mc = Multicharge::new(2, vec![0, 0]).unwrap();
        let sig = mp("((1),(1))").reduced_i_signature(&mc, 0);
        assert_eq!(sig.good, Some(Node::new(1, 1, 2)));
    }

    #[test]
    fn worked_regular_example_follows_drawn_sequence() {
        let mc = Multicharge::new(4, vec![1, 0]).unwrap();
        let mut lam = mp("((3,1),(1^2))");
        for (i, expect) in [
            (3, "((2,1),(1^2))"),
            (0, "((2),(1^2))"),
            (2, "((1),(1^2))"),
            (3, "((1),(1))"),
            (1, "(∅,(1))"),
            (0, "(∅,∅)"),
        ] {
            let good = lam.reduced_i_signature(&mc, i).good.expect("good node");
            lam = lam.with_node_removed(&good);
            assert_eq!(lam, mp(expect));
        }
        assert!(mp("((3,1),(1^2))").is_regular(&mc));
        assert!(Multipartition::empty(3).is_regular(&mc));
    }

    /// Oracle: breadth-first search over every sequence of good-node removals.
    fn regular_by_bfs(lam: &Multipartition, mc: &Multicharge) -> bool {
        let mut queue = VecDeque::from([lam.clone()]);
        let mut seen = HashSet::new();
        while let Some(cur) = queue.pop_front() {
            if cur.is_empty() {
                return true;
            }
            for i in 0..mc.e() {
                if let Some(g) = cur.reduced_i_signature(mc, i).good {
                    let next = cur.with_node_removed(&g);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    #[test]
    fn regularity_matches_bfs_oracle() {
        let mc = Multicharge::new(2, vec![0, 0]).unwrap();
        let lam = mp("((1,1),∅)");
        assert_eq!(lam.is_regular(&mc), regular_by_bfs(&lam, &mc));
        for (e, charges) in [(2, vec![0, 0]), (2, vec![0, 1]), (3, vec![0, 1]), (3, vec![2, 0, 1])] {
            let mc = Multicharge::new(e, charges.clone()).unwrap();
            for n in 0..=5 {
                for lam in enumerate_multipartitions(n, charges.len()) {
                    let reg = lam.is_regular(&mc);
                    assert_eq!(reg, regular_by_bfs(&lam, &mc), "{lam}");
                    if reg {
                        assert!(lam.is_e_multiregular(e), "{lam} regular but not multiregular");
                    }
                }
            }
        }
    }

    #[test]
    fn level_one_regularity_is_e_regularity() {
        for e in 2..=4 {
            let mc = Multicharge::new(e, vec![0]).unwrap();
            for n in 0..=8 {
                for lam in enumerate_multipartitions(n, 1) {
                    assert_eq!(lam.is_regular(&mc), lam.component(1).is_e_regular(e), "{lam}");
                }
            }
        }
    }

    #[test]
    fn multiregular_examples() {
        assert!(mp("((4,3,1),(2))").is_e_multiregular(3));
        assert!(!mp("((4,1,1,1,1),∅)").is_e_multiregular(3));
        assert!(Multipartition::empty(2).is_e_multiregular(2));
    }

    #[test]
    fn dominance_examples() {
        let a = mp("((2,1),(1))");
        assert!(a.dominates(&a).unwrap());
        assert!(mp("((2),∅)").dominates(&mp("(∅,(2))")).unwrap());
        let (x, y) = (mp("((1,1),(1))"), mp("((1),(2))"));
        // Prefix sums: x gives 1,2 | 3 and y gives 1,1 | 3,3 ... so x ⊵ y.
        let x_over_y = x.dominates(&y).unwrap();
        let y_over_x = y.dominates(&x).unwrap();
        assert!(x_over_y && !y_over_x);
        assert!(matches!(a.dominates(&mp("((1),(1))")), Err(Error::IncomparableInput(_))));
    }

    /// Oracle for dominance: evaluate every inequality explicitly.
    fn dominance_oracle(x: &Multipartition, y: &Multipartition) -> bool {
        let r = x.level();
        for j in 1..=r {
            let before_x: usize = (1..j).map(|a| x.component(a).size()).sum();
            let before_y: usize = (1..j).map(|a| y.component(a).size()).sum();
            for i in 0..=(x.size() + 1) {
                let sx: usize = before_x + (1..=i).map(|b| x.component(j).part(b)).sum::<usize>();
                let sy: usize = before_y + (1..=i).map(|b| y.component(j).part(b)).sum::<usize>();
                if sx < sy {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn dominance_is_a_partial_order() {
        for (n, r) in [(4, 2), (3, 3), (5, 2)] {
            let all = enumerate_multipartitions(n, r);
            for x in &all {
                for y in &all {
                    let xy = x.dominates(y).unwrap();
                    assert_eq!(xy, dominance_oracle(x, y));
                    if xy && y.dominates(x).unwrap() {
                        assert_eq!(x, y);
                    }
                    if xy {
                        for z in &all {
                            if y.dominates(z).unwrap() {
                                assert!(x.dominates(z).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn refined_order_examples() {
        assert!(mp("((2),∅)").refined_order_geq(&mp("((1,1),∅)")));
        assert!(!mp("(∅,(1))").refined_order_geq(&mp("((1),∅)")));
        let m = mp("((2,1),(1))");
        assert!(m.refined_order_geq(&m));
    }

    #[test]
    fn refined_order_refines_dominance() {
        let all = enumerate_multipartitions(4, 2);
        for x in &all {
            for y in &all {
                if x.dominates(y).unwrap() {
                    assert!(x.refined_order_geq(y), "{x} ⊵ {y}");
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_multipartitions(0, 3), vec![Multipartition::empty(3)]);
        let two = enumerate_multipartitions(2, 1);
        assert_eq!(two, vec![mp("((2))"), mp("((1,1))")]);
        assert_eq!(enumerate_multipartitions(3, 2).len(), 10);
        assert_eq!(enumerate_multipartitions(3, 2)[0], mp("((3),∅)"));
    }

    #[test]
    fn multirunner_worked_example() {
        let lam = mp("((4,3,2),(2^2),(3))");
        let mc = Multicharge::new(4, vec![11, 9, 12]).unwrap();
        let k = [-3, -9, -4];
        let (plus, s_plus) = add_multirunner(&lam, &mc, &k).unwrap();
        assert_eq!(plus, mp("((6,5,3),(5^2,2^3,1^4),(5,1^3))"));
        assert_eq!(plus, add_runner_componentwise(&lam, &mc, &k).unwrap());
        assert_eq!(s_plus.len(), 3);
        assert!(multirunner_is_empty(&lam, &mc, &k).unwrap());
    }

    #[test]
    fn multirunner_level_one_and_errors() {
        let mc = Multicharge::new(3, vec![7]).unwrap();
        let (plus, _) = add_multirunner(&Multipartition::empty(1), &mc, &[-5]).unwrap();
        assert_eq!(plus.component(1), &crate::abacus::empty_plus_k_closed_form(3, -5).unwrap());
        let mc = Multicharge::new(2, vec![0, 1]).unwrap();
        assert!(matches!(
            add_multirunner(&Multipartition::empty(2), &mc, &[0, 0]),
            Err(Error::IncompatibleK(_))
        ));
        let mc = Multicharge::new(2, vec![0, 0]).unwrap();
        assert!(matches!(
            add_multirunner(&mp("((1),∅)"), &mc, &[0, 0]),
            Err(Error::InsufficientCharge { .. })
        ));
    }

    #[test]
    fn zero_k_reinserts_a_full_runner() {
        // s ≡ d and a_j = c_j e + d: inserting with k = 0 at a full height.
        let lam = mp("((2,1),(3))");
        let mc = Multicharge::new(3, vec![7, 4]).unwrap();
        let (plus, _) = add_multirunner(&lam, &mc, &[0, 0]).unwrap();
        assert_eq!(plus, add_runner_componentwise(&lam, &mc, &[0, 0]).unwrap());
        for j in 1..=2 {
            let back = AbacusDisplay::encode(plus.component(j), 4, 7).unwrap();
            assert_eq!(back.decode(), *plus.component(j));
        }
    }

    #[test]
    fn multirunner_emptiness_examples() {
        let mc = Multicharge::new(2, vec![2, 4]).unwrap();
        assert!(!multirunner_is_empty(&mp("((1),∅)"), &mc, &[0, -2]).unwrap());
        assert!(multirunner_is_empty(&Multipartition::empty(2), &mc, &[0, -2]).unwrap());
    }

    #[test]
    fn multicore_examples() {
        let lam = mp("((2),∅,(4,1))");
        let core = lam.e_multicore(2).unwrap();
        assert_eq!(core, mp("(∅,∅,(2,1))"));
        assert_eq!(core.e_multicore(2).unwrap(), core);
    }

    fn arb_multipartition(r: usize) -> impl Strategy<Value = Multipartition> {
        prop::collection::vec(
            prop::collection::vec(1usize..6, 0..5).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                Partition::new(v).unwrap()
            }),
            r,
        )
        .prop_map(|c| Multipartition::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn i_nodes_match_scan(lam in arb_multipartition(3), e in 2usize..5, a in prop::collection::vec(0i64..9, 3), i in 0usize..5) {
            let mc = Multicharge::new(e, a).unwrap();
            let i = i % e;
            prop_assert_eq!(lam.addable_removable_i_nodes(&mc, i), scan_i_nodes(&lam, &mc, i));
        }

        #[test]
        fn text_round_trip(lam in arb_multipartition(3)) {
            prop_assert_eq!(lam.to_string().parse::<Multipartition>().unwrap(), lam);
        }
    }
}
