//! Abacus displays of single partitions and insertion of a runner.
//!
//! A display with `e` runners and charge `a` holds exactly `a` beads at the
//! positions `λ_j − j + a` for `1 ≤ j ≤ a`. Position `x` lies on runner
//! `x mod e` at level `⌊x / e⌋`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{check_modulus, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbacusDisplay {
    runners: usize,
    charge: usize,
    /// Sorted ascending, pairwise distinct, exactly `charge` of them.
    beads: Vec<usize>,
}

/// The result of inserting a runner into a display with `e` runners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunnerInsertion {
    /// The new display on `e + 1` runners.
    pub display: AbacusDisplay,
    /// Label of the inserted runner in the new display.
    pub label: usize,
    /// Number of beads placed on the inserted runner.
    pub beads_added: usize,
}

impl AbacusDisplay {
    pub fn encode(lambda: &Partition, e: usize, a: i64) -> Result<Self> {
        check_modulus(e)?;
        if a < lambda.len() as i64 {
            return Err(Error::InsufficientCharge { charge: a, length: lambda.len() });
        }
        let a = a as usize;
        let mut beads: Vec<usize> = (1..=a).map(|j| lambda.part(j) + a - j).collect();
        beads.reverse();
        Ok(AbacusDisplay { runners: e, charge: a, beads })
    }

    /// Builds a display from raw bead positions.
    pub fn from_beads(e: usize, mut beads: Vec<usize>) -> Result<Self> {
        check_modulus(e)?;
        beads.sort_unstable();
        if beads.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated bead in {beads:?}")));
        }
        Ok(AbacusDisplay { runners: e, charge: beads.len(), beads })
    }

    pub fn runners(&self) -> usize {
        self.runners
    }

    pub fn charge(&self) -> usize {
        self.charge
    }

    pub fn beads(&self) -> &[usize] {
        &self.beads
    }

    pub fn has_bead(&self, x: usize) -> bool {
        self.beads.binary_search(&x).is_ok()
    }

    /// The part attached to each bead is the number of spaces before it.
    pub fn decode(&self) -> Partition {
        let parts: Vec<usize> = self
            .beads
            .iter()
            .enumerate()
            .rev()
            .map(|(idx, &x)| x - idx)
            .filter(|&p| p > 0)
            .collect();
        Partition::from_sorted_unchecked(parts)
    }

    pub fn smallest_space(&self) -> usize {
        self.beads
            .iter()
            .enumerate()
            .find(|(idx, &x)| x != *idx)
            .map(|(idx, _)| idx)
            .unwrap_or(self.beads.len())
    }

    pub fn beads_on_runner(&self, runner: usize) -> usize {
        self.beads.iter().filter(|&&x| x % self.runners == runner).count()
    }

    /// Slides every bead as high as possible on its runner.
    pub fn core_display(&self) -> AbacusDisplay {
        let e = self.runners;
        let mut beads = Vec::with_capacity(self.charge);
        for r in 0..e {
            let count = self.beads_on_runner(r);
            beads.extend((0..count).map(|lvl| lvl * e + r));
        }
        beads.sort_unstable();
        AbacusDisplay { runners: e, charge: self.charge, beads }
    }

    pub fn e_core(&self) -> Partition {
        self.core_display().decode()
    }

    /// Inserts a new runner immediately left of runner `d`, carrying `c`
    /// beads at its top positions, where `charge + k = c·e + d`.
    pub fn insert_runner(&self, k: i64) -> Result<RunnerInsertion> {
        let a = self.charge as i64;
        if a + k < 0 {
            return Err(Error::InvalidK { charge: a, k });
        }
        let e = self.runners;
        let total = (a + k) as usize;
        let (c, d) = (total / e, total % e);
        let mut beads: Vec<usize> = self
            .beads
            .iter()
            .map(|&x| {
                let (q, r) = (x / e, x % e);
                if r < d {
                    q * (e + 1) + r
                } else {
                    q * (e + 1) + r + 1
                }
            })
            .collect();
        beads.extend((0..c).map(|t| t * (e + 1) + d));
        beads.sort_unstable();
        Ok(RunnerInsertion {
            display: AbacusDisplay { runners: e + 1, charge: self.charge + c, beads },
            label: d,
            beads_added: c,
        })
    }

    /// Plain-text rendering: a header of runner labels, then one row per
    /// level with `b` for a bead and `.` for a space. A runner given in
    /// `marked` gets a `*` under its label.
    pub fn render(&self, marked: Option<usize>) -> String {
        let e = self.runners;
        let last = self.beads.last().copied().unwrap_or(0);
        let levels = last / e + 2;
        let mut out = String::new();
        let header: Vec<String> = (0..e).map(|r| format!("{r:>2}")).collect();
        let _ = writeln!(out, "{}", header.join(" "));
        if let Some(m) = marked {
            let marks: Vec<String> =
                (0..e).map(|r| if r == m { " *".to_string() } else { "  ".to_string() }).collect();
            let _ = writeln!(out, "{}", marks.join(" "));
        }
        for lvl in 0..levels {
            let row: Vec<String> = (0..e)
                .map(|r| if self.has_bead(lvl * e + r) { " b".into() } else { " .".into() })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// `λ^{+k}`: decode of the display of `λ` (charge `a`, `e` runners) with a runner inserted.
pub fn add_runner(lambda: &Partition, e: usize, a: i64, k: i64) -> Result<Partition> {
    let display = AbacusDisplay::encode(lambda, e, a)?;
    Ok(display.insert_runner(k)?.display.decode())
}

/// True iff the smallest space of the display of `λ^{+k}` lies on the inserted runner.
pub fn inserted_runner_is_empty(lambda: &Partition, e: usize, a: i64, k: i64) -> Result<bool> {
    let display = AbacusDisplay::encode(lambda, e, a)?;
    let ins = display.insert_runner(k)?;
    Ok(ins.display.smallest_space() % (e + 1) == ins.label)
}

/// The smallest charge `a ≥ lower` with `a ≡ residue (mod e)`.
pub fn minimal_charge(residue: usize, e: usize, lower: i64) -> i64 {
    let e = e as i64;
    let r = residue as i64;
    let lower = lower.max(0);
    lower + (r - lower).rem_euclid(e)
}

/// `λ^{+k}` computed with the smallest admissible charge congruent to `s` mod `e`.
/// Also returns the charge used and the `(e+1)`-charge of the result.
pub fn add_runner_canonical(lambda: &Partition, e: usize, s: usize, k: i64) -> Result<(Partition, i64, i64)> {
    let lower = (lambda.len() as i64).max(-k).max(k);
    let a = minimal_charge(s, e, lower);
    let display = AbacusDisplay::encode(lambda, e, a)?;
    let ins = display.insert_runner(k)?;
    Ok((ins.display.decode(), a, ins.display.charge() as i64))
}

/// `∅^{+k}` from its closed form: `((k₁+1)^{k₂}, k₁^e, …, 1^e)` where `−k = k₁e + k₂`.
pub fn empty_plus_k_closed_form(e: usize, k: i64) -> Result<Partition> {
    check_modulus(e)?;
    if k > 0 {
        return Err(Error::OutOfDomain(format!("closed form needs k <= 0, got {k}")));
    }
    let m = (-k) as usize;
    let (k1, k2) = (m / e, m % e);
    let mut parts = vec![k1 + 1; k2];
    for p in (1..=k1).rev() {
        parts.extend(std::iter::repeat_n(p, e));
    }
    Ok(Partition::from_sorted_unchecked(parts))
}
