//! Finite vectors of the Fock space and the divided-power action of `f_i`.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::multipartition::{Multicharge, Multipartition, Node};

/// An operator word: `(label, multiplicity)` pairs, first-applied first.
/// Labels are integers and are reduced modulo `e` when applied.
pub type Word = Vec<(i64, usize)>;

/// A finite formal sum of multipartitions with Laurent polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector {
    mc: Multicharge,
    terms: FxHashMap<Multipartition, LaurentPoly>,
}

impl FockVector {
    pub fn zero(mc: Multicharge) -> Self {
        FockVector { mc, terms: FxHashMap::default() }
    }

    pub fn basis(mc: Multicharge, lambda: Multipartition) -> Self {
        let mut v = Self::zero(mc);
        v.add_term(lambda, &LaurentPoly::one());
        v
    }

    pub fn multicharge(&self) -> &Multicharge {
        &self.mc
    }

    pub fn e(&self) -> usize {
        self.mc.e()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Multipartition) -> Option<&LaurentPoly> {
        self.terms.get(lambda)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multipartition, &LaurentPoly)> {
        self.terms.iter()
    }

    /// Terms listed in the enumeration order of multipartitions.
    pub fn sorted_terms(&self) -> Vec<(&Multipartition, &LaurentPoly)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| a.0.enumeration_cmp(b.0));
        out
    }

    pub fn add_term(&mut self, lambda: Multipartition, c: &LaurentPoly) {
        self.add_shifted_term(lambda, c, 0);
    }

    fn add_shifted_term(&mut self, lambda: Multipartition, c: &LaurentPoly, shift: i32) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&lambda) {
            Some(cur) => {
                cur.add_shifted(c, shift);
                if cur.is_zero() {
                    self.terms.remove(&lambda);
                }
            }
            None => {
                self.terms.insert(lambda, c.shift(shift));
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &LaurentPoly) {
        for (lam, p) in &other.terms {
            let prod = c * p;
            self.add_term(lam.clone(), &prod);
        }
    }

    /// Applies `f` to every key, keeping coefficients. Fails if two keys collide.
    pub fn map_keys<F>(&self, mc: Multicharge, mut f: F) -> Result<FockVector>
    where
        F: FnMut(&Multipartition) -> Result<Multipartition>,
    {
        let mut out = FockVector::zero(mc);
        for (lam, p) in &self.terms {
            let key = f(lam)?;
            if out.terms.insert(key.clone(), p.clone()).is_some() {
                return Err(Error::InternalInconsistency(format!("two keys map to {key}")));
            }
        }
        Ok(out)
    }

    /// `f_i^{(m)}` applied to this vector.
    pub fn apply_f(&self, i: usize, m: usize) -> FockVector {
        assert!(m >= 1, "multiplicity must be positive");
        let i = i % self.e();
        let mut out = FockVector::zero(self.mc.clone());
        for (lam, c) in &self.terms {
            for (xi, n) in expansions_with_n(lam, &self.mc, i, m) {
                out.add_shifted_term(xi, c, n);
            }
        }
        out
    }

    pub fn apply_word(&self, word: &[(i64, usize)]) -> FockVector {
        let e = self.e() as i64;
        let mut cur = self.clone();
        for &(label, m) in word {
            cur = cur.apply_f(label.rem_euclid(e) as usize, m);
        }
        cur
    }

    /// Whether every coefficient is a single monomial with coefficient 1.
    pub fn is_monomial(&self) -> bool {
        self.terms.values().all(|p| p.terms().len() == 1 && p.terms()[0].1 == 1.into())
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let items: Vec<String> =
            self.sorted_terms().into_iter().map(|(lam, p)| format!("({p})·{lam}")).collect();
        write!(f, "{}", items.join(" + "))
    }
}

/// All `m`-subsets of `0..n`, each ascending.
fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in start..=(n - (m - cur.len())) {
            cur.push(x);
            rec(x + 1, n, m, cur, out);
            cur.pop();
        }
    }
    if m <= n {
        rec(0, n, m, &mut cur, &mut out);
    }
    out
}

fn add_nodes(lam: &Multipartition, nodes: &[Node]) -> Multipartition {
    nodes.iter().fold(lam.clone(), |acc, n| acc.with_node_added(n))
}

/// Every `ξ` with `λ →(m:i) ξ`, paired with `N_i(λ, ξ)`.
///
/// Addable `i`-nodes are sorted from top to bottom. Adding `i`-nodes never
/// creates or destroys other addable `i`-nodes, so the addable `i`-nodes of `ξ`
/// above the `t`-th chosen node (0-based, at sorted position `p`) number `p − t`.
fn expansions_with_n(lam: &Multipartition, mc: &Multicharge, i: usize, m: usize) -> Vec<(Multipartition, i32)> {
    let (add, rem) = lam.addable_removable_i_nodes(mc, i);
    let rem_above: Vec<i32> =
        add.iter().map(|a| rem.iter().filter(|r| r.is_above(a)).count() as i32).collect();
    combinations(add.len(), m)
        .into_iter()
        .map(|idx| {
            let n: i32 = idx.iter().enumerate().map(|(t, &p)| p as i32 - t as i32 - rem_above[p]).sum();
            let chosen: Vec<Node> = idx.iter().map(|&p| add[p]).collect();
            (add_nodes(lam, &chosen), n)
        })
        .collect()
}

/// All `ξ` obtained from `λ` by adding `m` addable `i`-nodes at once.
pub fn expansions(lam: &Multipartition, mc: &Multicharge, i: usize, m: usize) -> Vec<Multipartition> {
    assert!(m >= 1, "multiplicity must be positive");
    let (add, _) = lam.addable_removable_i_nodes(mc, i % mc.e());
    combinations(add.len(), m).into_iter().map(|idx| {
        let chosen: Vec<Node> = idx.iter().map(|&p| add[p]).collect();
        add_nodes(lam, &chosen)
    }).collect()
}

/// The nodes of `ξ ∖ λ`, checked to be addable `i`-nodes of `λ`.
fn added_nodes(lam: &Multipartition, xi: &Multipartition, mc: &Multicharge, i: usize) -> Result<Vec<Node>> {
    let bad = || Error::InvalidPair(format!("{xi} is not obtained from {lam} by adding {i}-nodes"));
    if lam.level() != xi.level() || lam.level() != mc.level() {
        return Err(bad());
    }
    if lam.nodes().any(|n| !xi.contains_node(&n)) {
        return Err(bad());
    }
    let diff: Vec<Node> = xi.nodes().filter(|n| !lam.contains_node(n)).collect();
    let (add, _) = lam.addable_removable_i_nodes(mc, i);
    if diff.is_empty() || diff.iter().any(|n| !add.contains(n)) {
        return Err(bad());
    }
    Ok(diff)
}

/// `N_i(λ, ξ)` straight from its definition: for each added node, the
/// addable `i`-nodes of `ξ` above it minus the removable `i`-nodes of `λ` above it.
pub fn n_coeff(lam: &Multipartition, xi: &Multipartition, mc: &Multicharge, i: usize) -> Result<i64> {
    let diff = added_nodes(lam, xi, mc, i)?;
    let (add_xi, _) = xi.addable_removable_i_nodes(mc, i);
    let (_, rem_lam) = lam.addable_removable_i_nodes(mc, i);
    let mut n = 0i64;
    for node in &diff {
        n += add_xi.iter().filter(|a| a.is_above(node)).count() as i64;
        n -= rem_lam.iter().filter(|r| r.is_above(node)).count() as i64;
    }
    Ok(n)
}

/// `N_i(λ, ξ)` split by components: counts inside the node's own component,
/// plus the full difference of addable and removable `i`-node counts of every
/// earlier component.
pub fn n_coeff_componentwise(lam: &Multipartition, xi: &Multipartition, mc: &Multicharge, i: usize) -> Result<i64> {
    let diff = added_nodes(lam, xi, mc, i)?;
    let r = lam.level();
    let comp_counts = |p: &Multipartition, j: usize| {
        let single = Multipartition::new(vec![p.component(j).clone()]).expect("one component");
        let one = Multicharge::new(mc.e(), vec![mc.charges()[j - 1]]).expect("valid modulus");
        single.addable_removable_i_nodes(&one, i)
    };
    let add_xi: Vec<Vec<Node>> = (1..=r).map(|j| comp_counts(xi, j).0).collect();
    let rem_lam: Vec<Vec<Node>> = (1..=r).map(|j| comp_counts(lam, j).1).collect();
    let mut n = 0i64;
    for node in &diff {
        let j = node.comp;
        n += add_xi[j - 1].iter().filter(|a| a.row < node.row).count() as i64;
        n -= rem_lam[j - 1].iter().filter(|x| x.row < node.row).count() as i64;
        for earlier in 1..j {
            n += add_xi[earlier - 1].len() as i64 - rem_lam[earlier - 1].len() as i64;
        }
    }
    Ok(n)
}
