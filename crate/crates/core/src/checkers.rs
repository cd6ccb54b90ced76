//! Decision procedures for the hypotheses of the splitting results: the
//! `p > h + 1` bound, the direct central-character orthogonality check, the
//! four sufficient criteria, and the p-valuation window.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::levi::{self, build_levi, xi_and_hm};
use crate::root_datum::RootDatum;
use crate::weights::{self, is_p_small, residue_modulus, ModPCharacter, UnderlineWeight};
use crate::weyl::{self, minimal_coset_reps, underline_digits, weak_order_leq, WeylElement};

pub const DEFAULT_UNDERLINE_CAP: usize = 1_000_000;

/// Enumeration limits shared by the checkers and report builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub weyl: usize,
    pub underline: usize,
    pub dim: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            weyl: weyl::DEFAULT_WEYL_CAP,
            underline: DEFAULT_UNDERLINE_CAP,
            dim: weights::DEFAULT_DIM_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// Reduced word with 1-based simple-reflection indices.
pub fn word1(w: &WeylElement) -> Vec<usize> {
    w.word.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two underline coset representatives of different total length whose
    /// central characters agree. Words are listed per embedding.
    CosetPair {
        v: Vec<Vec<usize>>,
        w: Vec<Vec<usize>>,
        length_v: usize,
        length_w: usize,
        character: ModPCharacter,
    },
    Bound {
        what: String,
        p: u64,
        bound: i64,
    },
    CenterNotConnected {
        invariants: Vec<i64>,
    },
    NotPSmall {
        root: Vec<i64>,
        embedding: usize,
        value: i64,
    },
    /// Every embedding has `<lambda_j + rho, alpha^vee> = p - 1`.
    RootAtPMinusOne {
        root: Vec<i64>,
    },
    Incomparable {
        shorter: Vec<usize>,
        longer: Vec<usize>,
    },
    RootSum {
        a: Vec<i64>,
        b: Vec<i64>,
    },
    Valuation {
        root: Vec<i64>,
        numer: i64,
        denom: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(name: &str, witnesses: Vec<Witness>) -> Self {
        CheckReport {
            name: name.to_string(),
            verdict: if witnesses.is_empty() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witnesses,
            notes: Vec::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `p > h + 1` for the largest Coxeter number among the components.
pub fn check_p_bound(datum: &RootDatum, p: u64) -> CheckReport {
    let h = datum.coxeter_number_max();
    let mut w = Vec::new();
    if p as i64 <= h + 1 {
        w.push(Witness::Bound {
            what: "p > h + 1".into(),
            p,
            bound: h + 1,
        });
    }
    CheckReport::new("p_bound", w)
        .with_note("the base field is unramified by construction (degree f, ramification 1)")
}

/// Mod-p central characters of `L_J(w . lambda)` for every underline `w`,
/// computed from per-embedding partial exponents.
struct CharacterTable {
    reps: Vec<WeylElement>,
    f: usize,
    modulus: u64,
    tag: String,
    /// `partial[j][r]` = exponents of `w_r . lambda_j` weighted by `p^j`.
    partial: Vec<Vec<Vec<u64>>>,
    total: usize,
}

impl CharacterTable {
    fn build(
        datum: &RootDatum,
        j: &[usize],
        lambda: &UnderlineWeight,
        shift: Option<&[i64]>,
        p: u64,
        f: usize,
        caps: &Caps,
    ) -> Result<Self> {
        let reps = minimal_coset_reps(datum, j, caps.weyl)?.elements;
        let size = (reps.len() as u128).pow(f as u32);
        if size > caps.underline as u128 {
            return Err(Error::EnumerationCap {
                size,
                cap: caps.underline,
            });
        }
        let basis = levi::central_basis(datum, j);
        let modulus = residue_modulus(p, f)?;
        let mut partial = Vec::with_capacity(f);
        let mut pj: u128 = 1;
        for comp in &lambda.components {
            let mut row = Vec::with_capacity(reps.len());
            for w in &reps {
                let mut mu = weyl::dot_single(datum, w, comp)?;
                if let Some(s) = shift {
                    mu.iter_mut().zip(s).for_each(|(a, b)| *a += b);
                }
                let ex: Vec<u64> = basis
                    .vectors
                    .iter()
                    .map(|xi| {
                        let v = crate::intlin::dot(&mu, xi) as i128 * pj as i128;
                        v.rem_euclid(modulus as i128) as u64
                    })
                    .collect();
                row.push(ex);
            }
            partial.push(row);
            pj = pj * p as u128 % modulus as u128;
        }
        Ok(CharacterTable {
            total: size as usize,
            reps,
            f,
            modulus,
            tag: basis.tag,
            partial,
        })
    }

    fn exponents(&self, digits: &[usize]) -> Vec<u64> {
        let mut acc = vec![0u64; self.partial[0][0].len()];
        for (j, &r) in digits.iter().enumerate() {
            for (a, b) in acc.iter_mut().zip(&self.partial[j][r]) {
                *a = (*a + b) % self.modulus;
            }
        }
        acc
    }

    fn length(&self, digits: &[usize]) -> usize {
        digits.iter().map(|&r| self.reps[r].length()).sum()
    }

    fn words(&self, digits: &[usize]) -> Vec<Vec<usize>> {
        digits.iter().map(|&r| word1(&self.reps[r])).collect()
    }

    fn character(&self, exponents: Vec<u64>) -> ModPCharacter {
        ModPCharacter {
            modulus: self.modulus,
            basis_tag: self.tag.clone(),
            exponents,
        }
    }

    /// `(length, exponents)` for every underline index, in index order.
    fn all(&self) -> Vec<(usize, Vec<u64>)> {
        (0..self.total)
            .into_par_iter()
            .map(|k| {
                let digits = underline_digits(k, self.reps.len(), self.f);
                (self.length(&digits), self.exponents(&digits))
            })
            .collect()
    }
}

const MAX_WITNESSES: usize = 16;

fn require_p_small(datum: &RootDatum, lambda: &UnderlineWeight, p: u64, f: usize) -> Result<()> {
    lambda.check_shape(datum.lattice_rank, f)?;
    let small = is_p_small(datum, lambda, p)?;
    if let Some((idx, j, v)) = small.witness {
        return Err(Error::NotPSmall(format!(
            "<lambda_{j} + rho, alpha^vee> = {v} > {p} for the root with coordinates {:?}",
            datum.roots()[idx].coords
        )));
    }
    Ok(())
}

/// Characters of distinct total lengths must never coincide. This is the exact
/// finite check; the sufficient criteria below are cross-validation only.
pub fn check_orthogonality_direct(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<CheckReport> {
    require_p_small(datum, lambda, p, f)?;
    let table = CharacterTable::build(datum, j, lambda, None, p, f, caps)?;
    let all = table.all();
    let mut first: HashMap<&[u64], Vec<(usize, usize)>> = HashMap::new();
    let mut witnesses = Vec::new();
    for (k, (len, ex)) in all.iter().enumerate() {
        let seen = first.entry(ex.as_slice()).or_default();
        if let Some(&(k0, len0)) = seen.iter().find(|(_, l)| l != len) {
            if witnesses.len() < MAX_WITNESSES {
                let n = table.reps.len();
                let dv = underline_digits(k0, n, f);
                let dw = underline_digits(k, n, f);
                witnesses.push(Witness::CosetPair {
                    v: table.words(&dv),
                    w: table.words(&dw),
                    length_v: len0,
                    length_w: *len,
                    character: table.character(ex.clone()),
                });
            }
        }
        if !seen.iter().any(|(_, l)| l == len) {
            seen.push((k, *len));
        }
    }
    Ok(CheckReport::new("orthogonality_direct", witnesses))
}

/// Two underline elements given by their 1-based reduced words per embedding.
pub type WordPair = (Vec<Vec<usize>>, Vec<Vec<usize>>);

/// Whether the characters `w . lambda` on the full torus are pairwise distinct
/// over all underline `w`; returns a colliding pair if not.
pub fn multiplicity_free_witness(
    datum: &RootDatum,
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<Option<WordPair>> {
    let table = CharacterTable::build(datum, &[], lambda, None, p, f, caps)?;
    let all = table.all();
    let mut seen: HashMap<&[u64], usize> = HashMap::new();
    for (k, (_, ex)) in all.iter().enumerate() {
        if let Some(&k0) = seen.get(ex.as_slice()) {
            let n = table.reps.len();
            return Ok(Some((
                table.words(&underline_digits(k0, n, f)),
                table.words(&underline_digits(k, n, f)),
            )));
        }
        seen.insert(ex, k);
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    /// Torus case with connected center.
    MT,
    /// Torus case with trivial weight.
    TrivialWt,
    Bruhat,
    Abelian,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::MT,
        Criterion::TrivialWt,
        Criterion::Bruhat,
        Criterion::Abelian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::MT => "criterion_mt",
            Criterion::TrivialWt => "criterion_trivial_weight",
            Criterion::Bruhat => "criterion_bruhat",
            Criterion::Abelian => "criterion_abelian",
        }
    }

    /// Whether the criterion's shape preconditions hold for `(J, lambda)`.
    pub fn applies(self, j: &[usize], lambda: &UnderlineWeight) -> bool {
        match self {
            Criterion::MT => j.is_empty(),
            Criterion::TrivialWt => j.is_empty() && lambda.is_zero(),
            Criterion::Bruhat | Criterion::Abelian => lambda.is_zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CriterionOptions {
    /// Only test highest and second-highest coroots in the torus criterion.
    pub refined_mt: bool,
}

fn lemma_bound(datum: &RootDatum, j: &[usize], p: u64) -> Result<Option<Witness>> {
    let dim_n = build_levi(datum, j, 1)?.dim_n_alg as i64;
    let h_m = xi_and_hm(datum, j)?.h_m;
    let bound = dim_n * h_m + 1;
    Ok((p as i64 <= bound).then(|| Witness::Bound {
        what: "p > |Phi^+ - Phi_J^+| h_M + 1".into(),
        p,
        bound,
    }))
}

#[allow(clippy::too_many_arguments)]
pub fn check_sufficient_criterion(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    which: Criterion,
    opts: CriterionOptions,
    caps: &Caps,
) -> Result<CheckReport> {
    if !which.applies(j, lambda) {
        return Err(Error::WrongMode(format!(
            "{} needs {}",
            which.name(),
            match which {
                Criterion::MT => "J = {}",
                Criterion::TrivialWt => "J = {} and lambda = 0",
                _ => "lambda = 0",
            }
        )));
    }
    lambda.check_shape(datum.lattice_rank, f)?;
    let mut witnesses = check_p_bound(datum, p).witnesses;
    match which {
        Criterion::MT => {
            let smith = crate::intlin::smith(&datum.simple_roots);
            if !datum.center_is_connected() {
                witnesses.push(Witness::CenterNotConnected {
                    invariants: smith.invariants,
                });
            }
            let small = is_p_small(datum, lambda, p)?;
            if let Some((idx, emb, value)) = small.witness {
                witnesses.push(Witness::NotPSmall {
                    root: datum.roots()[idx].coords.clone(),
                    embedding: emb,
                    value,
                });
            }
            let top: Vec<i64> = (0..datum.components.len())
                .map(|c| {
                    datum
                        .roots()
                        .iter()
                        .filter(|r| r.component == c)
                        .map(|r| r.coroot_height())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for r in datum.roots() {
                if opts.refined_mt && r.coroot_height() < top[r.component] - 1 {
                    continue;
                }
                let all_hit = lambda
                    .components
                    .iter()
                    .all(|c| crate::intlin::dot(c, &r.coroot) + r.coroot_height() == p as i64 - 1);
                if all_hit {
                    witnesses.push(Witness::RootAtPMinusOne {
                        root: r.coords.clone(),
                    });
                }
            }
        }
        Criterion::TrivialWt => {}
        Criterion::Bruhat => {
            witnesses.extend(lemma_bound(datum, j, p)?);
            let reps = minimal_coset_reps(datum, j, caps.weyl)?;
            'pairs: for v in &reps.elements {
                for w in &reps.elements {
                    if v.length() < w.length() && !weak_order_leq(v, w) {
                        witnesses.push(Witness::Incomparable {
                            shorter: word1(v),
                            longer: word1(w),
                        });
                        if witnesses.len() >= MAX_WITNESSES {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        Criterion::Abelian => {
            witnesses.extend(lemma_bound(datum, j, p)?);
            if !levi::is_abelian_nilradical(datum, j) {
                let phi = weights::phi_j_plus(datum, j);
                let rs = datum.roots();
                let outside: Vec<usize> = (0..rs.len()).filter(|i| !phi.contains(i)).collect();
                'outer: for &a in &outside {
                    for &b in &outside {
                        let sum: Vec<i64> = rs[a]
                            .vector
                            .iter()
                            .zip(&rs[b].vector)
                            .map(|(x, y)| x + y)
                            .collect();
                        if a < b && datum.root_index(&sum).is_some() {
                            witnesses.push(Witness::RootSum {
                                a: rs[a].coords.clone(),
                                b: rs[b].coords.clone(),
                            });
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    let mut report = CheckReport::new(which.name(), witnesses);
    if which == Criterion::MT && opts.refined_mt {
        report = report.with_note("restricted to highest and second-highest coroots");
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationEntry {
    pub root: Vec<i64>,
    pub height: i64,
    pub coxeter: i64,
    pub numer: i64,
    pub denom: i64,
}

impl ValuationEntry {
    pub fn value(&self) -> Ratio<i64> {
        Ratio::new(self.numer, self.denom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationTable {
    pub entries: Vec<ValuationEntry>,
    pub report: CheckReport,
}

/// `hgt(alpha) / h(alpha)` over `Phi^+ - Phi_J^+`; passes when every value lies in `(1/(p-1), 1]`.
pub fn p_valuation_table(datum: &RootDatum, j: &[usize], p: u64) -> Result<ValuationTable> {
    weyl::validate_subset(datum, j)?;
    let phi = weights::phi_j_plus(datum, j);
    let coxeter = &datum.positive_roots().coxeter_numbers;
    let low = Ratio::new(1, p as i64 - 1);
    let mut entries = Vec::new();
    let mut witnesses = Vec::new();
    for (idx, r) in datum.roots().iter().enumerate() {
        if phi.contains(&idx) {
            continue;
        }
        let h = coxeter[r.component];
        let v = Ratio::new(r.height, h);
        if v <= low || v > Ratio::from_integer(1) {
            witnesses.push(Witness::Valuation {
                root: r.coords.clone(),
                numer: *v.numer(),
                denom: *v.denom(),
            });
        }
        entries.push(ValuationEntry {
            root: r.coords.clone(),
            height: r.height,
            coxeter: h,
            numer: *v.numer(),
            denom: *v.denom(),
        });
    }
    Ok(ValuationTable {
        entries,
        report: CheckReport::new("p_valuation", witnesses),
    })
}
