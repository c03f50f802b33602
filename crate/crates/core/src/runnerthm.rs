//! Empty-runner insertion on canonical basis vectors: the conditions on `k`,
//! the relabelling of operators, the induction word for `∅^{+k}`, and the
//! machine check of `G^{s⁺}_{e+1}(μ^{+k}) = G^s_e(μ)^{+k}`.

use serde::{Deserialize, Serialize};

use crate::abacus::{minimal_charge, AbacusDisplay};
use crate::canonical::CanonicalBasis;
use crate::error::{Error, Result};
use crate::fock::{FockVector, Word};
use crate::laurent::LaurentPoly;
use crate::multipartition::{common_runner_label, Multicharge, Multipartition};
use crate::partition::{check_modulus, Partition};

/// A vector `k` together with everything derived from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunnerSpec {
    pub e: usize,
    pub s: Vec<usize>,
    pub k: Vec<i64>,
    /// Common label of the inserted runners.
    pub d: usize,
    pub s_plus: Vec<usize>,
    pub charges: Vec<i64>,
    /// `a_j + k_j = c_j e + d`.
    pub c: Vec<i64>,
}

impl RunnerSpec {
    /// Builds the spec from the congruence condition alone. Charges are the
    /// smallest `a_j ≡ s_j` with `a_j ≥ max(l_j, -k_j, k_j)`.
    pub fn from_congruence(e: usize, s: &[usize], k: &[i64], lengths: &[usize]) -> Result<Self> {
        check_modulus(e)?;
        if s.len() != k.len() || s.len() != lengths.len() || s.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "s, k and mu must have the same positive length (got {}, {}, {})",
                s.len(),
                k.len(),
                lengths.len()
            )));
        }
        let s: Vec<usize> = s.iter().map(|x| x % e).collect();
        let d = common_runner_label(e, &s, k).map_err(|err| match err {
            Error::IncompatibleK(msg) => Error::Violates51(msg),
            other => other,
        })?;
        let ei = e as i64;
        let mut charges = Vec::with_capacity(s.len());
        let mut c = Vec::with_capacity(s.len());
        let mut s_plus = Vec::with_capacity(s.len());
        for ((&sj, &kj), &lj) in s.iter().zip(k).zip(lengths) {
            let a = minimal_charge(sj, e, (lj as i64).max(-kj).max(kj));
            let cj = (a + kj - d as i64) / ei;
            debug_assert_eq!(cj * ei + d as i64, a + kj);
            charges.push(a);
            c.push(cj);
            s_plus.push(((a + cj) % (ei + 1)) as usize);
        }
        Ok(RunnerSpec { e, s, k: k.to_vec(), d, s_plus, charges, c })
    }

    /// The `(e+1)`-charge `b_j = a_j + c_j` of component `j` (1-based).
    pub fn plus_charge(&self, j: usize) -> i64 {
        self.charges[j - 1] + self.c[j - 1]
    }

    pub fn multicharge(&self) -> Multicharge {
        Multicharge::from_residues(self.e, &self.s).expect("validated modulus")
    }

    pub fn plus_multicharge(&self) -> Multicharge {
        Multicharge::from_residues(self.e + 1, &self.s_plus).expect("valid modulus")
    }

    /// `λ^{+k}`. Each component is encoded with the spec's charge raised by a
    /// multiple of `e` until it covers the component's length; the result does
    /// not depend on that choice.
    pub fn plus_k(&self, lam: &Multipartition) -> Result<Multipartition> {
        if lam.level() != self.k.len() {
            return Err(Error::InvalidArgument(format!("{lam} does not have {} components", self.k.len())));
        }
        let comps = lam
            .components()
            .iter()
            .enumerate()
            .map(|(j, p)| self.plus_k_component(j + 1, p))
            .collect::<Result<Vec<_>>>()?;
        Multipartition::new(comps)
    }

    fn plus_k_component(&self, j: usize, p: &Partition) -> Result<Partition> {
        let e = self.e as i64;
        let a = self.charges[j - 1];
        let short = (p.len() as i64 - a).max(0);
        let a = a + e * ((short + e - 1) / e);
        Ok(AbacusDisplay::encode(p, self.e, a)?.insert_runner(self.k[j - 1])?.display.decode())
    }

    /// Whether every inserted runner of `λ^{+k}` is empty: `l(λ^{(j)}) ≤ -k_j` for all `j`.
    pub fn is_empty_for(&self, lam: &Multipartition) -> bool {
        lam.components().iter().zip(&self.k).all(|(p, &kj)| (p.len() as i64) <= -kj)
    }
}

/// Checks both conditions on `k` against `μ` and returns the populated spec.
pub fn validate_k(mu: &Multipartition, e: usize, s: &[usize], k: &[i64]) -> Result<RunnerSpec> {
    let lengths: Vec<usize> = mu.components().iter().map(Partition::len).collect();
    let spec = RunnerSpec::from_congruence(e, s, k, &lengths)?;
    check_length_chain(mu, e, k)?;
    Ok(spec)
}

fn check_length_chain(mu: &Multipartition, e: usize, k: &[i64]) -> Result<()> {
    let l1 = mu.component(1).len() as i64;
    if k[0] > -l1 {
        return Err(Error::Violates52(format!("k1 = {} exceeds -l(mu1) = {}", k[0], -l1)));
    }
    for j in 2..=mu.level() {
        let bound = k[j - 2] - mu.component(j).len() as i64 - e as i64;
        if k[j - 1] > bound {
            return Err(Error::Violates52(format!("k{j} = {} exceeds k{} - l(mu{j}) - e = {bound}", k[j - 1], j - 1)));
        }
    }
    Ok(())
}

/// The smallest `k` satisfying both conditions for `μ`.
pub fn minimal_k(mu: &Multipartition, e: usize, s: &[usize]) -> Result<Vec<i64>> {
    minimal_k_from(mu, e, s, -(mu.component(1).len() as i64))
}

/// The largest `k` with the given first entry that satisfies both conditions
/// for `μ`, taking each later entry as large as the chain allows.
pub fn minimal_k_from(mu: &Multipartition, e: usize, s: &[usize], k1: i64) -> Result<Vec<i64>> {
    check_modulus(e)?;
    if s.len() != mu.level() {
        return Err(Error::InvalidArgument("s and mu differ in level".into()));
    }
    if k1 > -(mu.component(1).len() as i64) {
        return Err(Error::Violates52(format!("k1 = {k1} exceeds -l(mu1)")));
    }
    let ei = e as i64;
    let mut k = vec![k1];
    let d = (k[0] + s[0] as i64).rem_euclid(ei);
    for j in 2..=mu.level() {
        let top = k[j - 2] - mu.component(j).len() as i64 - ei;
        // Largest value ≤ top with value + s_j ≡ d.
        let t = (top + s[j - 1] as i64 - d).rem_euclid(ei);
        k.push(top - t);
    }
    Ok(k)
}

/// `g(i)`: `i` below `d`, otherwise `i + 1`.
pub fn relabel_g(i: usize, d: usize) -> usize {
    if i < d {
        i
    } else {
        i + 1
    }
}

/// Replaces `f_i^{(h)}` by `F_{g(i)}^{(h)}` for `i ≠ d`, and `f_d^{(h)}` by
/// `F_{d+1}^{(h)} F_d^{(h)}` (so `F_d` is applied first).
pub fn lift_word(word: &[(i64, usize)], e: usize, d: usize) -> Word {
    let mut out = Vec::with_capacity(word.len() + 4);
    for &(label, h) in word {
        let i = label.rem_euclid(e as i64) as usize;
        if i == d {
            out.push((d as i64, h));
            out.push((d as i64 + 1, h));
        } else {
            out.push((relabel_g(i, d) as i64, h));
        }
    }
    out
}

/// The operator word, in application order, taking `∅` to `∅^{+k}` in the
/// `(e+1)`-Fock space whose charge `b` is that of the display of `∅^{+k}`.
/// Labels are integers, to be read modulo `e + 1`.
pub fn empty_runner_word(e: usize, b: i64, k: i64) -> Result<Word> {
    check_modulus(e)?;
    if k > 0 {
        return Err(Error::OutOfDomain(format!("the induction word needs k <= 0, got {k}")));
    }
    let m = (-k) as usize;
    let (k1, k2) = (m / e, m % e);
    let mut word = Vec::new();
    for l in 1..=k1 {
        let top = b + l as i64 - 1;
        for step in 0..e as i64 {
            word.push((top - step, l));
        }
    }
    let alpha = b + k1 as i64;
    for step in 0..k2 as i64 {
        word.push((alpha - step, k1 + 1));
    }
    Ok(word)
}

/// The label `L` with `μ^{+k} = F_L^{(ℓ)}(μ^{+(k+1)})`, in the space of charge `b`
/// (the `(e+1)`-charge of the display of `μ^{+k}`).
pub fn fneg_step_label(e: usize, b: i64, k: i64) -> usize {
    (b + k + 1).rem_euclid(e as i64 + 1) as usize
}

/// `(f_i^{(m)} λ)^{+k}` against the lifted operator applied to `λ^{+k}`.
pub fn verify_operator_commutation(lam: &Multipartition, spec: &RunnerSpec, i: usize, m: usize) -> Result<bool> {
    if !spec.is_empty_for(lam) {
        return Err(Error::PreconditionFailure(format!("the inserted multirunner of {lam} is not empty")));
    }
    let i = i % spec.e;
    let lhs = FockVector::basis(spec.multicharge(), lam.clone()).apply_f(i, m);
    let lhs = lhs.map_keys(spec.plus_multicharge(), |x| spec.plus_k(x))?;
    let start = FockVector::basis(spec.plus_multicharge(), spec.plus_k(lam)?);
    let rhs = start.apply_word(&lift_word(&[(i as i64, m)], spec.e, spec.d));
    Ok(lhs == rhs)
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    /// `None` for a term of the right-hand side that no `λ` maps to.
    pub lambda: Option<Multipartition>,
    pub lambda_plus_k: Multipartition,
    pub lhs_poly: LaurentPoly,
    pub rhs_poly: LaurentPoly,
    pub equal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    pub e: usize,
    pub s: Vec<usize>,
    pub s_plus: Vec<usize>,
    pub k: Vec<i64>,
    pub mu: Multipartition,
    pub mu_plus_k: Multipartition,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Computes `G^s_e(μ)`, maps its rows through `^{+k}`, and compares with an
/// independent computation of `G^{s⁺}_{e+1}(μ^{+k})`.
///
/// With `unsafe_k` only the congruence condition is enforced, so the
/// comparison can be run for exploration on `k` outside the length chain.
pub fn verify_main_theorem(
    cb: &CanonicalBasis,
    mu: &Multipartition,
    e: usize,
    s: &[usize],
    k: &[i64],
    unsafe_k: bool,
) -> Result<Report> {
    let spec = if unsafe_k {
        let lengths: Vec<usize> = mu.components().iter().map(Partition::len).collect();
        RunnerSpec::from_congruence(e, s, k, &lengths)?
    } else {
        validate_k(mu, e, s, k)?
    };
    let lhs = cb.column(e, &spec.s, mu)?;
    let mu_plus = spec.plus_k(mu)?;
    let rhs = cb.column(e + 1, &spec.s_plus, &mu_plus)?;

    let mut rows = Vec::with_capacity(rhs.len());
    let mut hit = std::collections::HashSet::new();
    for (lam, p) in lhs.sorted_terms() {
        let lam_plus = spec.plus_k(lam)?;
        let q = rhs.coeff(&lam_plus).cloned().unwrap_or_else(LaurentPoly::zero);
        hit.insert(lam_plus.clone());
        rows.push(ReportRow { lambda: Some(lam.clone()), lambda_plus_k: lam_plus, equal: *p == q, lhs_poly: p.clone(), rhs_poly: q });
    }
    for (lam_plus, q) in rhs.sorted_terms() {
        if !hit.contains(lam_plus) {
            rows.push(ReportRow {
                lambda: None,
                lambda_plus_k: lam_plus.clone(),
                lhs_poly: LaurentPoly::zero(),
                rhs_poly: q.clone(),
                equal: false,
            });
        }
    }
    let verdict = if rows.iter().all(|r| r.equal) { Verdict::Pass } else { Verdict::Fail };
    Ok(Report { verdict, e, s: spec.s.clone(), s_plus: spec.s_plus.clone(), k: spec.k.clone(), mu: mu.clone(), mu_plus_k: mu_plus, rows })
}

/// Applies the induction word for `∅^{+k_1}` to `(∅, μ₋^{+k₋})` and to its
/// canonical basis vector, and checks that only the first component moves:
/// the single term becomes `μ₀^{+k}` and the column becomes the column of `μ₀^{+k}`.
pub fn verify_first_component_locality(cb: &CanonicalBasis, mu: &Multipartition, spec: &RunnerSpec) -> Result<bool> {
    let mu0 = mu.with_empty_head();
    if !spec.is_empty_for(&mu0) {
        return Err(Error::PreconditionFailure(format!("the inserted multirunner of {mu0} is not empty")));
    }
    let mc_plus = spec.plus_multicharge();
    let word = empty_runner_word(spec.e, spec.plus_charge(1), spec.k[0])?;
    let target = spec.plus_k(&mu0)?;

    let start = target.replace_component(1, Partition::empty());
    let single = FockVector::basis(mc_plus.clone(), start.clone()).apply_word(&word);
    if single != FockVector::basis(mc_plus, target.clone()) {
        return Ok(false);
    }
    if !start.is_e_multiregular(spec.e + 1) || !target.is_e_multiregular(spec.e + 1) {
        return Err(Error::InternalInconsistency(format!("{start} or {target} is not (e+1)-multiregular")));
    }
    let col = cb.column(spec.e + 1, &spec.s_plus, &start)?.apply_word(&word);
    let expect = cb.column(spec.e + 1, &spec.s_plus, &target)?;
    Ok(col == *expect)
}
