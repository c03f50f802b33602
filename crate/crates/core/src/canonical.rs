//! Canonical basis vectors `G^s_e(μ)` by the recursive LLT-type algorithm.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::laurent::LaurentPoly;
use crate::multipartition::{enumerate_multipartitions, Multicharge, Multipartition};
use crate::partition::{check_modulus, Partition};

/// Cache key of a column: modulus, residues (reduced mod `e`) and `μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnKey {
    pub e: usize,
    pub s: Vec<usize>,
    pub mu: Multipartition,
}

impl ColumnKey {
    pub fn new(e: usize, s: &[usize], mu: Multipartition) -> Result<Self> {
        check_modulus(e)?;
        if s.len() != mu.level() {
            return Err(Error::InvalidArgument(format!(
                "residue vector has {} entries but {mu} has {} components",
                s.len(),
                mu.level()
            )));
        }
        Ok(ColumnKey { e, s: s.iter().map(|x| x % e).collect(), mu })
    }

    pub fn multicharge(&self) -> Multicharge {
        Multicharge::from_residues(self.e, &self.s).expect("validated modulus")
    }
}

/// `(e|s|μ)`, e.g. `(2|0,0|((1),(1)))`.
impl fmt::Display for ColumnKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.s.iter().map(ToString::to_string).collect();
        write!(f, "({}|{}|{})", self.e, s.join(","), self.mu)
    }
}

impl FromStr for ColumnKey {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("column key {text:?} must look like (e|s|mu)"));
        let inner = text.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
        let mut it = inner.splitn(3, '|');
        let (e, s, mu) = (it.next().ok_or_else(bad)?, it.next().ok_or_else(bad)?, it.next().ok_or_else(bad)?);
        let e: usize = e.parse().map_err(|_| bad())?;
        let s = s.split(',').map(|x| x.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        ColumnKey::new(e, &s, mu.parse()?)
    }
}

/// How step 3(c) picks among several dominance-maximal candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The earliest in the enumeration order.
    #[default]
    First,
    /// The latest in the enumeration order.
    Last,
}

/// Which columns a decomposition matrix carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnSet {
    #[default]
    Multiregular,
    Regular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMatrix {
    pub e: usize,
    pub s: Vec<usize>,
    pub n: usize,
    pub rows: Vec<Multipartition>,
    pub cols: Vec<Multipartition>,
    /// `entries[row][col]`.
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl DecompositionMatrix {
    pub fn at_one(&self) -> Vec<Vec<num_bigint::BigInt>> {
        self.entries.iter().map(|row| row.iter().map(LaurentPoly::eval_at_one).collect()).collect()
    }
}

/// Column engine with a session-lifetime memo table.
#[derive(Default)]
pub struct CanonicalBasis {
    tie_break: TieBreak,
    cache: Mutex<FxHashMap<ColumnKey, Arc<FockVector>>>,
}

/// Number of `r`-multipartitions of `n`.
fn count_multipartitions(n: usize, r: usize) -> u128 {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    let mut acc = vec![0u128; n + 1];
    acc[0] = 1;
    for _ in 0..r {
        let mut next = vec![0u128; n + 1];
        for (a, &x) in acc.iter().enumerate() {
            for b in 0..=(n - a) {
                next[a + b] += x * p[b];
            }
        }
        acc = next;
    }
    acc[n]
}

/// `μ ≻ ν`: `μ ⪰ ν` and not `ν ⪰ μ`.
fn refined_strictly_above(mu: &Multipartition, nu: &Multipartition) -> bool {
    mu.refined_order_geq(nu) && !nu.refined_order_geq(mu)
}

/// Checks the three defining properties of a column: coefficient 1 at `μ`,
/// other coefficients in `vZ[v]`, support dominated by `μ`.
pub fn check_column_invariants(mu: &Multipartition, col: &FockVector) -> Result<()> {
    match col.coeff(mu) {
        Some(c) if c.is_one() => {}
        other => {
            return Err(Error::InternalInconsistency(format!(
                "column of {mu} has coefficient {} at {mu}",
                other.map(ToString::to_string).unwrap_or_else(|| "0".into())
            )))
        }
    }
    for (lam, c) in col.iter() {
        if lam == mu {
            continue;
        }
        if !c.is_in_vzv() {
            return Err(Error::InternalInconsistency(format!("column of {mu}: coefficient {c} at {lam} not in vZ[v]")));
        }
        if lam.size() != mu.size() || !mu.dominates_unchecked(lam) {
            return Err(Error::InternalInconsistency(format!("column of {mu}: {lam} is not dominated by {mu}")));
        }
    }
    Ok(())
}

impl CanonicalBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_tie_break(tie_break: TieBreak) -> Self {
        CanonicalBasis { tie_break, cache: Mutex::default() }
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn cached_len(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    /// All cached columns, sorted by key text.
    pub fn snapshot(&self) -> Vec<(ColumnKey, Arc<FockVector>)> {
        let mut out: Vec<_> =
            self.cache.lock().expect("cache lock").iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by_cached_key(|(k, _)| k.to_string());
        out
    }

    /// Seeds the memo table, e.g. from a persisted cache. The column is
    /// checked against the defining invariants first.
    pub fn insert_column(&self, key: ColumnKey, col: FockVector) -> Result<()> {
        check_column_invariants(&key.mu, &col)?;
        if col.multicharge() != &key.multicharge() {
            return Err(Error::InvalidArgument(format!("column for {key} carries the wrong multicharge")));
        }
        self.cache.lock().expect("cache lock").insert(key, Arc::new(col));
        Ok(())
    }

    fn lookup(&self, key: &ColumnKey) -> Option<Arc<FockVector>> {
        self.cache.lock().expect("cache lock").get(key).cloned()
    }

    /// Stores a freshly computed column. A concurrent duplicate is fine as long as it agrees.
    fn store(&self, key: ColumnKey, col: FockVector) -> Result<Arc<FockVector>> {
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(existing) = cache.get(&key) {
            if **existing != col {
                return Err(Error::InternalInconsistency(format!("two different columns computed for {key}")));
            }
            return Ok(existing.clone());
        }
        let col = Arc::new(col);
        cache.insert(key, col.clone());
        Ok(col)
    }

    /// `G^s_e(μ)`.
    pub fn column(&self, e: usize, s: &[usize], mu: &Multipartition) -> Result<Arc<FockVector>> {
        let key = ColumnKey::new(e, s, mu.clone())?;
        if !mu.is_e_multiregular(e) {
            return Err(Error::OutOfBasis(mu.to_string()));
        }
        self.column_by_key(key)
    }

    fn column_by_key(&self, key: ColumnKey) -> Result<Arc<FockVector>> {
        if let Some(hit) = self.lookup(&key) {
            return Ok(hit);
        }
        let col = self.compute(&key)?;
        self.store(key, col)
    }

    fn compute(&self, key: &ColumnKey) -> Result<FockVector> {
        let (e, mu) = (key.e, &key.mu);
        let mc = key.multicharge();
        if mu.is_empty() {
            return Ok(FockVector::basis(mc, mu.clone()));
        }
        let head = mu.component(1);
        if head.is_empty() {
            let tail = mu.tail().expect("a non-empty multipartition with empty head has r > 1");
            let sub = self.column_by_key(ColumnKey::new(e, &key.s[1..], tail)?)?;
            return sub.map_keys(mc, |lam| Ok(lam.prepend(Partition::empty())));
        }
        let mu0 = mu.with_empty_head();
        let base = self.column_by_key(ColumnKey::new(e, &key.s, mu0)?)?;
        let word = head.ladder_decomposition(e, key.s[0] as i64)?.word();
        let mut a = base.apply_word(&word);

        if a.coeff(mu).is_none_or(|c| !c.is_one()) {
            return Err(Error::InternalInconsistency(format!("coefficient of {mu} in A({mu}) is not 1")));
        }
        let bound = count_multipartitions(mu.size(), mu.level());
        let mut rounds: u128 = 0;
        while let Some(nu) = self.pick_target(mu, &a) {
            rounds += 1;
            if rounds > bound {
                return Err(Error::InternalInconsistency(format!("step 3(c) for {mu} did not terminate")));
            }
            if !refined_strictly_above(mu, &nu) {
                return Err(Error::InternalInconsistency(format!("stripping target {nu} is not below {mu}")));
            }
            if !nu.is_e_multiregular(e) {
                return Err(Error::InternalInconsistency(format!(
                    "stripping target {nu} for {mu} is not {e}-multiregular"
                )));
            }
            let alpha = a.coeff(&nu).expect("target has a coefficient").symmetric_defect();
            let g = self.column_by_key(ColumnKey::new(e, &key.s, nu)?)?;
            a.add_scaled(&g, &(-alpha));
        }
        check_column_invariants(mu, &a)?;
        if a.iter().any(|(_, c)| !c.has_nonnegative_coefficients()) {
            log::warn!("column {key} has a negative coefficient");
        }
        Ok(a)
    }

    /// A dominance-maximal `ν ≠ μ` whose coefficient lies outside `vZ[v]`.
    fn pick_target(&self, mu: &Multipartition, a: &FockVector) -> Option<Multipartition> {
        let bad: Vec<&Multipartition> =
            a.iter().filter(|(lam, c)| *lam != mu && !c.is_in_vzv()).map(|(lam, _)| lam).collect();
        let mut maximal: Vec<&Multipartition> = bad
            .iter()
            .filter(|x| !bad.iter().any(|y| y != *x && y.dominates_unchecked(x)))
            .copied()
            .collect();
        maximal.sort_by(|x, y| x.enumeration_cmp(y));
        let pick = match self.tie_break {
            TieBreak::First => maximal.first(),
            TieBreak::Last => maximal.last(),
        };
        pick.map(|m| (*m).clone())
    }

    /// Rows: every `r`-multipartition of `n`; columns: the multiregular (or
    /// regular) ones; entry `d^s_{λμ}(v)`.
    pub fn decomposition_matrix(&self, e: usize, s: &[usize], n: usize, set: ColumnSet) -> Result<DecompositionMatrix> {
        check_modulus(e)?;
        if s.is_empty() {
            return Err(Error::InvalidArgument("residue vector must be non-empty".into()));
        }
        let mc = Multicharge::from_residues(e, s)?;
        let rows = enumerate_multipartitions(n, s.len());
        let cols: Vec<Multipartition> = rows
            .iter()
            .filter(|m| match set {
                ColumnSet::Multiregular => m.is_e_multiregular(e),
                ColumnSet::Regular => m.is_regular(&mc),
            })
            .cloned()
            .collect();
        let columns = cols.iter().map(|m| self.column(e, s, m)).collect::<Result<Vec<_>>>()?;
        let entries = rows
            .iter()
            .map(|lam| {
                columns.iter().map(|c| c.coeff(lam).cloned().unwrap_or_else(LaurentPoly::zero)).collect()
            })
            .collect();
        Ok(DecompositionMatrix { e, s: mc.residues(), n, rows, cols, entries })
    }

    /// Compares `G_{e+1}(μ^{+k})` with the image of `G_e(μ)` under `λ ↦ λ^{+k}`.
    pub fn level1_runner_check(&self, e: usize, s: usize, mu: &Partition, k: i64) -> Result<bool> {
        if (mu.len() as i64) > -k {
            return Err(Error::PreconditionFailure(format!("need l({mu}) <= -k, got k={k}")));
        }
        if !mu.is_e_regular(e) {
            return Err(Error::OutOfBasis(mu.to_string()));
        }
        let s = s % e;
        let mu_m = Multipartition::new(vec![mu.clone()])?;
        let lhs = self.column(e, &[s], &mu_m)?;
        // Any charge at least the size of μ covers every row of the column.
        let lower = (mu.size() as i64).max(-k).max(k);
        let a = crate::abacus::minimal_charge(s, e, lower);
        let lift = |p: &Partition| -> Result<(Partition, usize)> {
            let ins = crate::abacus::AbacusDisplay::encode(p, e, a)?.insert_runner(k)?;
            Ok((ins.display.decode(), ins.display.charge() % (e + 1)))
        };
        let (mu_plus, s_plus) = lift(mu)?;
        let mc_plus = Multicharge::from_residues(e + 1, &[s_plus])?;
        let image = lhs.map_keys(mc_plus, |lam| {
            Multipartition::new(vec![lift(lam.component(1))?.0])
        })?;
        let rhs = self.column(e + 1, &[s_plus], &Multipartition::new(vec![mu_plus])?)?;
        Ok(image == *rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mp(s: &str) -> Multipartition {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn column_map(col: &FockVector) -> Vec<(String, String)> {
        col.sorted_terms().into_iter().map(|(l, p)| (l.to_string(), p.to_string())).collect()
    }

    #[test]
    fn column_examples() {
        let cb = CanonicalBasis::new();
        let col = cb.column(2, &[0], &mp("((2))")).unwrap();
        assert_eq!(column_map(&col), vec![("((2))".into(), "1".into()), ("((1^2))".into(), "v".into())]);

        let col = cb.column(2, &[0, 0], &mp("((2,1),(1))")).unwrap();
        let expect = [
            ("((2,1),(1))", "1"),
            ("((2),(2))", "v"),
            ("((2),(1^2))", "v^2"),
            ("((1^2),(2))", "v^2"),
            ("((1^2),(1^2))", "v^3"),
            ("((1),(2,1))", "v^4"),
        ];
        assert_eq!(col.len(), expect.len());
        for (lam, p) in expect {
            assert_eq!(col.coeff(&mp(lam)), Some(&poly(p)), "{lam}");
        }

        for (e, s) in [(2, vec![0]), (3, vec![1, 2]), (4, vec![0, 0, 3])] {
            let empty = Multipartition::empty(s.len());
            let col = cb.column(e, &s, &empty).unwrap();
            assert_eq!(col.len(), 1);
            assert!(col.coeff(&empty).unwrap().is_one());
        }
    }

    #[test]
    fn rejects_non_multiregular() {
        let cb = CanonicalBasis::new();
        assert!(matches!(cb.column(2, &[0], &mp("((1,1))")), Err(Error::OutOfBasis(_))));
    }

    #[test]
    fn level_one_e3_n3() {
        // Graded lift of the decomposition matrix of S_3 in characteristic 3.
        let cb = CanonicalBasis::new();
        let m = cb.decomposition_matrix(3, &[0], 3, ColumnSet::Multiregular).unwrap();
        assert_eq!(m.rows, vec![mp("((3))"), mp("((2,1))"), mp("((1^3))")]);
        assert_eq!(m.cols, vec![mp("((3))"), mp("((2,1))")]);
        assert_eq!(m.entries[0], vec![poly("1"), poly("0")]);
        assert_eq!(m.entries[1], vec![poly("v"), poly("1")]);
        assert_eq!(m.entries[2], vec![poly("0"), poly("v")]);
    }

    #[test]
    fn decomposition_matrix_examples() {
        let cb = CanonicalBasis::new();
        let m = cb.decomposition_matrix(2, &[0, 0], 0, ColumnSet::Multiregular).unwrap();
        assert_eq!(m.entries, vec![vec![LaurentPoly::one()]]);

        let m = cb.decomposition_matrix(2, &[0], 2, ColumnSet::Multiregular).unwrap();
        assert_eq!(m.rows, vec![mp("((2))"), mp("((1^2))")]);
        assert_eq!(m.entries, vec![vec![poly("1")], vec![poly("v")]]);

        let m = cb.decomposition_matrix(2, &[0, 0], 3, ColumnSet::Multiregular).unwrap();
        assert_eq!(m.rows.len(), 10);
        for (j, mu) in m.cols.iter().enumerate() {
            for (i, lam) in m.rows.iter().enumerate() {
                let d = &m.entries[i][j];
                if lam == mu {
                    assert!(d.is_one());
                } else if !d.is_zero() {
                    assert!(d.is_in_vzv());
                    assert!(mu.dominates(lam).unwrap());
                }
            }
        }
    }

    #[test]
    fn regular_columns_are_a_subset() {
        let cb = CanonicalBasis::new();
        let all = cb.decomposition_matrix(2, &[0, 1], 3, ColumnSet::Multiregular).unwrap();
        let reg = cb.decomposition_matrix(2, &[0, 1], 3, ColumnSet::Regular).unwrap();
        assert!(reg.cols.iter().all(|c| all.cols.contains(c)));
        assert!(!reg.cols.is_empty());
    }

    /// Oracle: at level one and `e` larger than `n`, every column is a unit vector.
    #[test]
    fn semisimple_level_one() {
        let cb = CanonicalBasis::new();
        let m = cb.decomposition_matrix(5, &[0], 4, ColumnSet::Multiregular).unwrap();
        for (i, row) in m.entries.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                assert_eq!(d.is_one(), i == j);
                assert!(i == j || d.is_zero());
            }
        }
    }

    /// At `v = 1` this is the decomposition matrix of `S_4` in characteristic 2.
    #[test]
    fn level_one_e2_n4_at_one() {
        let cb = CanonicalBasis::new();
        let m = cb.decomposition_matrix(2, &[0], 4, ColumnSet::Multiregular).unwrap();
        let got: Vec<Vec<i64>> = m
            .at_one()
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        // rows (4),(3,1),(2^2),(2,1^2),(1^4); cols (4),(3,1)
        assert_eq!(got, vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn tie_break_independence_small() {
        let first = CanonicalBasis::with_tie_break(TieBreak::First);
        let last = CanonicalBasis::with_tie_break(TieBreak::Last);
        for (e, s) in [(2, vec![0, 0]), (2, vec![0, 1]), (3, vec![0, 1])] {
            for n in 0..=4 {
                let a = first.decomposition_matrix(e, &s, n, ColumnSet::Multiregular).unwrap();
                let b = last.decomposition_matrix(e, &s, n, ColumnSet::Multiregular).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn level1_runner_examples() {
        let cb = CanonicalBasis::new();
        assert!(cb.level1_runner_check(2, 0, &Partition::empty(), 0).unwrap());
        assert!(cb.level1_runner_check(3, 1, &Partition::empty(), -4).unwrap());
        assert!(cb.level1_runner_check(2, 0, &Partition::new(vec![2]).unwrap(), -1).unwrap());
        assert!(cb.level1_runner_check(2, 0, &Partition::new(vec![3, 1]).unwrap(), -2).unwrap());
        assert!(matches!(
            cb.level1_runner_check(2, 0, &Partition::new(vec![3, 1]).unwrap(), -1),
            Err(Error::PreconditionFailure(_))
        ));
    }

    #[test]
    fn key_text_round_trip() {
        let key = ColumnKey::new(2, &[0, 3], mp("((2,1),∅)")).unwrap();
        assert_eq!(key.to_string(), "(2|0,1|((2,1),∅))");
        assert_eq!(key.to_string().parse::<ColumnKey>().unwrap(), key);
        assert!("(2|0|".parse::<ColumnKey>().is_err());
    }

    #[test]
    fn seeded_cache_is_used_and_checked() {
        let cb = CanonicalBasis::new();
        let col = cb.column(2, &[0], &mp("((2))")).unwrap();
        let fresh = CanonicalBasis::new();
        let key = ColumnKey::new(2, &[0], mp("((2))")).unwrap();
        fresh.insert_column(key.clone(), (*col).clone()).unwrap();
        assert_eq!(*fresh.column(2, &[0], &mp("((2))")).unwrap(), *col);
        let broken = FockVector::zero(key.multicharge());
        assert!(CanonicalBasis::new().insert_column(key, broken).is_err());
    }

    #[test]
    fn multipartition_counts() {
        assert_eq!(count_multipartitions(3, 2), 10);
        assert_eq!(count_multipartitions(0, 4), 1);
        assert_eq!(count_multipartitions(5, 1), 7);
    }

    /// With `k = -l(μ)` only, a row of `G_e(μ)` longer than `-k` does not
    /// keep an empty inserted runner, and the two sides can differ.
    #[test]
    fn short_k_with_long_rows_can_break_equality() {
        let cb = CanonicalBasis::new();
        let mu = Partition::new(vec![4]).unwrap();
        assert!(!cb.level1_runner_check(2, 0, &mu, -1).unwrap());
        assert!(cb.level1_runner_check(2, 0, &mu, -2).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn level1_runner_equality_when_every_row_fits(e in 2usize..=3, s in 0usize..3, n in 0usize..=5, pick in 0usize..100, extra in 0i64..3) {
            let regular: Vec<Partition> = Partition::all(n).into_iter().filter(|p| p.is_e_regular(e)).collect();
            let mu = &regular[pick % regular.len()];
            let cb = CanonicalBasis::new();
            let col = cb.column(e, &[s % e], &Multipartition::new(vec![mu.clone()]).unwrap()).unwrap();
            let longest = col.iter().map(|(l, _)| l.component(1).len()).max().unwrap_or(0) as i64;
            prop_assert!(cb.level1_runner_check(e, s, mu, -longest - extra).unwrap());
        }
    }
}
