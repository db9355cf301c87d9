//! Two-generator families whose products never become CSR, with closed-form witnesses.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::csr::{is_csr, CsrVerdict};
use crate::ensemble::{Ensemble, Profile};
use crate::error::{Error, Result};
use crate::reference::{self, Display};
use crate::semiring::{MaxPlus, MaxPlusMatrix};
use crate::trellis::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FamilyId {
    /// Primitive ambient digraph, critical 2-cycle.
    #[serde(rename = "P1_six")]
    P1Six,
    /// Primitive ambient digraph, critical 3-cycle.
    #[serde(rename = "P1_three")]
    P1Three,
    /// Ambient cyclicity 2, critical cyclicity 4.
    #[serde(rename = "P2_six")]
    P2Six,
    /// Three critical loops.
    #[serde(rename = "P3_four")]
    P3Four,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [FamilyId::P1Six, FamilyId::P1Three, FamilyId::P2Six, FamilyId::P3Four];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::P1Six => "P1_six",
            FamilyId::P1Three => "P1_three",
            FamilyId::P2Six => "P2_six",
            FamilyId::P3Four => "P3_four",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Expected values of Γ and of its CSR product at one entry (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectedWitness {
    pub row: usize,
    pub col: usize,
    pub product: f64,
    pub csr: f64,
}

/// Words `1^{ones(t)} 2` for `t ≥ t_min`.
#[derive(Clone, Debug)]
pub struct WordClass {
    pub pattern: &'static str,
    pub multiplier: usize,
    pub offset: usize,
    pub t_min: usize,
    pub witnesses: Vec<ExpectedWitness>,
}

impl WordClass {
    pub fn ones(&self, t: usize) -> usize {
        self.multiplier * t + self.offset
    }

    pub fn word(&self, t: usize) -> Word {
        Word::power_then(0, self.ones(t), 1)
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub id: FamilyId,
    pub generators: Vec<MaxPlusMatrix>,
    pub profile: Profile,
    pub word_classes: Vec<WordClass>,
    /// Every word longer than this is claimed to be covered by some failing word.
    pub claimed_length_threshold: Option<usize>,
}

fn grid(s: &str) -> MaxPlusMatrix {
    s.parse().expect("family matrices are well formed")
}

fn witness(row: usize, col: usize, product: f64, csr: f64) -> ExpectedWitness {
    ExpectedWitness {
        row: row - 1,
        col: col - 1,
        product,
        csr,
    }
}

fn class(pattern: &'static str, multiplier: usize, offset: usize, t_min: usize, witnesses: Vec<ExpectedWitness>) -> WordClass {
    WordClass {
        pattern,
        multiplier,
        offset,
        t_min,
        witnesses,
    }
}

pub fn build_family(id: FamilyId) -> Family {
    match id {
        FamilyId::P1Six => Family {
            id,
            generators: vec![
                grid(
                    "e 0 -100 e e e; 0 e e e -100 e; e e e -100 e e;
                     -100 e e e e e; e e e e e -100; e -100 e e e e",
                ),
                grid(
                    "e 0 -100 e e e; 0 e e e -1 e; e e e -100 e e;
                     -1 e e e e e; e e e e e -100; e -100 e e e e",
                ),
            ],
            profile: Profile::P1,
            word_classes: vec![
                class("1^(2t) 2", 2, 0, 2, vec![witness(6, 5, -401.0, -302.0)]),
                class(
                    "1^(2t+1) 2",
                    2,
                    1,
                    1,
                    vec![witness(2, 5, -301.0, -202.0), witness(4, 5, -401.0, -302.0)],
                ),
            ],
            claimed_length_threshold: Some(29),
        },
        FamilyId::P1Three => Family {
            id,
            generators: vec![
                grid("e 0 e; e -100 0; 0 -100 -100"),
                grid("e 0 e; e -1 0; 0 -100 -1"),
            ],
            profile: Profile::P1,
            word_classes: vec![
                class("1^(3t+2) 2", 3, 2, 0, vec![witness(1, 2, -100.0, -2.0)]),
                class("1^(3t+3) 2", 3, 3, 0, vec![witness(3, 2, -100.0, -2.0)]),
                class("1^(3t+4) 2", 3, 4, 0, vec![witness(2, 2, -100.0, -2.0)]),
            ],
            claimed_length_threshold: None,
        },
        FamilyId::P2Six => Family {
            id,
            generators: vec![
                grid(
                    "e 0 e e e e; e e 0 e e e; e e e 0 -100 e;
                     0 e e e e e; e e e e e -100; e e e -100 e e",
                ),
                grid(
                    "e 0 e e e e; e e 0 e e e; e e e 0 -1 e;
                     0 e e e e e; e e e e e -1; e e e -1 e e",
                ),
            ],
            profile: Profile::P2,
            word_classes: vec![
                class("1^(4t) 2", 4, 0, 2, vec![witness(1, 5, -301.0, -202.0)]),
                class("1^(4t+1) 2", 4, 1, 2, vec![witness(4, 5, -301.0, -202.0)]),
                class("1^(4t+2) 2", 4, 2, 2, vec![witness(3, 5, -301.0, -202.0)]),
                class("1^(4t+3) 2", 4, 3, 2, vec![witness(2, 5, -301.0, -202.0)]),
            ],
            claimed_length_threshold: Some(9),
        },
        FamilyId::P3Four => Family {
            id,
            generators: vec![
                grid("0 -100 e e; e 0 -100 e; e e 0 -100; -100 e e e"),
                grid("0 -1 e e; e 0 -1 e; e e 0 -100; -100 e e e"),
            ],
            profile: Profile::P3,
            word_classes: vec![class(
                "1^t 2",
                1,
                0,
                2,
                vec![witness(1, 3, -101.0, -2.0), witness(4, 3, -201.0, -102.0)],
            )],
            claimed_length_threshold: Some(3),
        },
    }
}

/// Displayed products for the family, keyed by the number of leading first generators.
pub fn family_displays(id: FamilyId) -> Vec<Display> {
    match id {
        FamilyId::P1Six => reference::p1_six_displays(),
        FamilyId::P1Three => reference::p1_three_displays(),
        FamilyId::P2Six => reference::p2_six_displays(),
        FamilyId::P3Four => reference::p3_four_displays(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub row: usize,
    pub col: usize,
    pub expected_product: f64,
    pub product: MaxPlus,
    pub expected_csr: f64,
    pub csr: MaxPlus,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordCheck {
    pub pattern: &'static str,
    pub t: usize,
    pub length: usize,
    pub is_csr: bool,
    pub witnesses: Vec<WitnessCheck>,
}

impl WordCheck {
    pub fn passed(&self) -> bool {
        !self.is_csr && self.witnesses.iter().all(|w| w.ok)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: FamilyId,
    pub profile_expected: Profile,
    pub profile_found: Profile,
    pub checks: Vec<WordCheck>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.profile_expected == self.profile_found && self.checks.iter().all(WordCheck::passed)
    }
}

pub fn family_ensemble(f: &Family) -> Result<Ensemble> {
    Ensemble::build(f.generators.clone())
}

fn check_word(e: &Ensemble, class: &WordClass, t: usize) -> Result<(WordCheck, CsrVerdict)> {
    let word = class.word(t);
    let verdict = is_csr(e, &word)?;
    let witnesses = class
        .witnesses
        .iter()
        .map(|w| {
            let product = verdict.product.get(w.row, w.col);
            let csr = verdict.csr.get(w.row, w.col);
            WitnessCheck {
                row: w.row,
                col: w.col,
                expected_product: w.product,
                product,
                expected_csr: w.csr,
                csr,
                ok: product == MaxPlus::finite(w.product) && csr == MaxPlus::finite(w.csr),
            }
        })
        .collect();
    Ok((
        WordCheck {
            pattern: class.pattern,
            t,
            length: word.len(),
            is_csr: verdict.holds,
            witnesses,
        },
        verdict,
    ))
}

/// Checks every word class at every `t`, including the closed-form witness values.
pub fn verify_family(f: &Family, t_values: &[usize]) -> Result<FamilyReport> {
    let e = family_ensemble(f)?;
    let mut checks = Vec::new();
    for class in &f.word_classes {
        for &t in t_values {
            if t < class.t_min {
                return Err(Error::Precondition(format!(
                    "{} needs t >= {}, got {t}",
                    class.pattern, class.t_min
                )));
            }
            checks.push(check_word(&e, class, t)?.0);
        }
    }
    Ok(FamilyReport {
        family: f.id,
        profile_expected: f.profile,
        profile_found: e.report.profile,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisplayCheck {
    pub name: &'static str,
    pub length: usize,
    pub product_matches: bool,
    pub csr_matches: bool,
    pub product: MaxPlusMatrix,
    pub csr: MaxPlusMatrix,
}

impl DisplayCheck {
    pub fn passed(&self) -> bool {
        self.product_matches && self.csr_matches
    }
}

/// Compares the computed product and CSR product with each displayed pair.
pub fn check_displays(f: &Family) -> Result<Vec<DisplayCheck>> {
    let e = family_ensemble(f)?;
    family_displays(f.id)
        .into_iter()
        .map(|d| {
            let word = Word::power_then(0, d.ones, 1);
            let v = is_csr(&e, &word)?;
            Ok(DisplayCheck {
                name: d.name,
                length: word.len(),
                product_matches: v.product == d.product,
                csr_matches: v.csr == d.csr,
                product: v.product,
                csr: v.csr,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: FamilyId,
    pub k_max: usize,
    /// Lengths for which some family word fails to be CSR.
    pub failing_lengths: Vec<usize>,
    /// Lengths up to `k_max` without a failing family word.
    pub uncovered_lengths: Vec<usize>,
    /// Every length above this (up to `k_max`) is covered.
    pub covered_above: usize,
    pub claimed_length_threshold: Option<usize>,
}

impl ScanReport {
    pub fn claim_holds(&self) -> bool {
        self.claimed_length_threshold
            .is_none_or(|c| self.covered_above <= c)
    }
}

/// For each length up to `k_max`, looks for a family word of that length that is not CSR.
pub fn transient_nonexistence_scan(f: &Family, k_max: usize) -> Result<ScanReport> {
    let e = family_ensemble(f)?;
    let mut failing = Vec::new();
    let mut uncovered = Vec::new();
    for k in 1..=k_max {
        let mut found = false;
        for class in &f.word_classes {
            let ones = k - 1;
            if ones < class.offset || (ones - class.offset) % class.multiplier != 0 {
                continue;
            }
            let t = (ones - class.offset) / class.multiplier;
            if t < class.t_min {
                continue;
            }
            if !is_csr(&e, &class.word(t))?.holds {
                found = true;
                break;
            }
        }
        if found {
            failing.push(k);
        } else {
            uncovered.push(k);
        }
    }
    Ok(ScanReport {
        family: f.id,
        k_max,
        covered_above: uncovered.last().copied().unwrap_or(0),
        failing_lengths: failing,
        uncovered_lengths: uncovered,
        claimed_length_threshold: f.claimed_length_threshold,
    })
}
