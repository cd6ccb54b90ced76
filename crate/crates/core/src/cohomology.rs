//! Constituent-level cohomology reports: Kostant decompositions, the
//! semisimplified `N_0`-cohomology, the shifted and twisted left adjoint, graded
//! Satake targets, principal series, and parameter supports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::checkers::{
    self, check_orthogonality_direct, check_p_bound, word1, Caps, CheckReport, Verdict,
};
use crate::error::{Error, Result};
use crate::levi::{self, build_levi, LeviDatum};
use crate::root_datum::RootDatum;
use crate::weights::{self, restrict_mod_p, CocharBasis, ModPCharacter, UnderlineWeight};
use crate::weyl::{self, minimal_coset_reps, underline_digits};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constituent {
    /// `w . lambda`, plus the twist `delta` in left-adjoint reports.
    pub weight: UnderlineWeight,
    /// Reduced words (1-based) of the underline coset representative, per embedding.
    pub witness_w: Vec<Vec<usize>>,
    pub length: usize,
    pub dim: u128,
    pub central_char: ModPCharacter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportKind {
    LieAlgebra,
    GroupSemisimplified,
    LeftAdjoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Degree {
    pub degree: i64,
    pub constituents: Vec<Constituent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub kind: ReportKind,
    /// 1-based simple-root indices.
    pub j: Vec<usize>,
    pub f: usize,
    pub degrees: Vec<Degree>,
    /// Set when the degrees list graded pieces of a filtration rather than a
    /// direct sum decomposition.
    pub caveat: bool,
    pub notes: Vec<String>,
}

impl CohomologyReport {
    pub fn degree(&self, n: i64) -> &[Constituent] {
        self.degrees
            .iter()
            .find(|d| d.degree == n)
            .map_or(&[], |d| d.constituents.as_slice())
    }

    /// Sum of constituent dimensions in each degree, lowest degree first.
    pub fn dims(&self) -> Vec<(i64, u128)> {
        self.degrees
            .iter()
            .map(|d| (d.degree, d.constituents.iter().map(|c| c.dim).sum()))
            .collect()
    }

    pub fn constituent_count(&self) -> usize {
        self.degrees.iter().map(|d| d.constituents.len()).sum()
    }
}

fn one_based(j: &[usize]) -> Vec<usize> {
    j.iter().map(|i| i + 1).collect()
}

fn require_assumptions(
    datum: &RootDatum,
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
) -> Result<()> {
    lambda.check_shape(datum.lattice_rank, f)?;
    let bound = check_p_bound(datum, p);
    if !bound.passed() {
        return Err(Error::AssumptionViolated(format!(
            "p = {p} does not exceed h + 1 = {}",
            datum.coxeter_number_max() + 1
        )));
    }
    let small = weights::is_p_small(datum, lambda, p)?;
    if let Some((idx, j, v)) = small.witness {
        return Err(Error::AssumptionViolated(format!(
            "lambda is not p-small: <lambda_{j} + rho, alpha^vee> = {v} for root {:?}",
            datum.roots()[idx].coords
        )));
    }
    Ok(())
}

/// Constituents `L_J(w . lambda + shift)` over underline `w`, grouped by total length.
fn constituents_by_length(
    datum: &RootDatum,
    levi: &LeviDatum,
    lambda: &UnderlineWeight,
    shift: Option<&UnderlineWeight>,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<BTreeMap<usize, Vec<Constituent>>> {
    let reps = minimal_coset_reps(datum, &levi.j, caps.weyl)?.elements;
    let size = (reps.len() as u128).pow(f as u32);
    if size > caps.underline as u128 {
        return Err(Error::EnumerationCap {
            size,
            cap: caps.underline,
        });
    }
    let n = reps.len();
    let built: Vec<Result<(usize, Constituent)>> = (0..size as usize)
        .into_par_iter()
        .map(|k| {
            let digits = underline_digits(k, n, f);
            let ws: Vec<&weyl::WeylElement> = digits.iter().map(|&r| &reps[r]).collect();
            let mu = weyl::dot_action(datum, &ws, lambda)?;
            let dim = weights::weyl_dim(datum, &levi.j, &mu)?;
            let weight = match shift {
                Some(s) => mu.add(s),
                None => mu,
            };
            let central_char = restrict_mod_p(&weight, &levi.central_basis, p, f)?;
            let length = ws.iter().map(|w| w.length()).sum();
            Ok((
                length,
                Constituent {
                    weight,
                    witness_w: ws.iter().map(|w| word1(w)).collect(),
                    length,
                    dim,
                    central_char,
                },
            ))
        })
        .collect();
    let mut out: BTreeMap<usize, Vec<Constituent>> = BTreeMap::new();
    for item in built {
        let (len, c) = item?;
        out.entry(len).or_default().push(c);
    }
    Ok(out)
}

fn lie_report(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
    kind: ReportKind,
) -> Result<CohomologyReport> {
    require_assumptions(datum, lambda, p, f)?;
    let levi = build_levi(datum, j, f)?;
    let by_len = constituents_by_length(datum, &levi, lambda, None, p, f, caps)?;
    let caveat = kind == ReportKind::GroupSemisimplified;
    let mut notes = Vec::new();
    if caveat {
        notes.push(
            "degrees list the graded pieces of an M_0-stable filtration; the module structure is not computed"
                .to_string(),
        );
    }
    Ok(CohomologyReport {
        kind,
        j: one_based(&levi.j),
        f,
        degrees: by_len
            .into_iter()
            .map(|(len, constituents)| Degree {
                degree: len as i64,
                constituents,
            })
            .collect(),
        caveat,
        notes,
    })
}

/// Kostant decomposition of `H^i(n, L(lambda))` into `L_J(w . lambda)`.
pub fn kostant_report(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<CohomologyReport> {
    lie_report(datum, j, lambda, p, f, caps, ReportKind::LieAlgebra)
}

/// Jordan–Hölder constituents of `H^n(N_0, L(lambda))`; same data as the
/// Kostant report, flagged as a filtration.
pub fn group_cohomology_report(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<CohomologyReport> {
    lie_report(
        datum,
        j,
        lambda,
        p,
        f,
        caps,
        ReportKind::GroupSemisimplified,
    )
}

/// Degree `n` holds the group constituents of degree `n + dim N_0`, twisted by `delta`.
pub fn left_adjoint_report(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<CohomologyReport> {
    require_assumptions(datum, lambda, p, f)?;
    let levi = build_levi(datum, j, f)?;
    let delta = levi::delta_character(datum, &levi.j, f)?;
    let by_len = constituents_by_length(datum, &levi, lambda, Some(&delta), p, f, caps)?;
    let shift = levi.dim_n0 as i64;
    Ok(CohomologyReport {
        kind: ReportKind::LeftAdjoint,
        j: one_based(&levi.j),
        f,
        degrees: by_len
            .into_iter()
            .map(|(len, constituents)| Degree {
                degree: len as i64 - shift,
                constituents,
            })
            .collect(),
        caveat: true,
        notes: vec!["weights include the twist delta = 2rho - 2rho_M in every embedding".into()],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtRank {
    pub degree: usize,
    pub rank: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatakeTargetReport {
    pub j: Vec<usize>,
    pub dim_n0: usize,
    /// One entry per `n` in `[-dim N_0, 0]`.
    pub targets: Vec<Degree>,
    pub orthogonality: CheckReport,
    /// For `J = ∅`: free ranks of the torus Ext algebra over the group algebra of `T/T_0`.
    pub torus_ext_ranks: Option<Vec<ExtRank>>,
    pub notes: Vec<String>,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn satake_target_report(
    datum: &RootDatum,
    j: &[usize],
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<SatakeTargetReport> {
    let left = left_adjoint_report(datum, j, lambda, p, f, caps)?;
    let levi = build_levi(datum, j, f)?;
    let orthogonality = check_orthogonality_direct(datum, &levi.j, lambda, p, f, caps)?;
    if !orthogonality.passed() {
        return Err(Error::OrthogonalityFails(Box::new(orthogonality)));
    }
    let targets = (-(levi.dim_n0 as i64)..=0)
        .map(|n| Degree {
            degree: n,
            constituents: left.degree(n).to_vec(),
        })
        .collect();
    let torus_ext_ranks = levi.j.is_empty().then(|| {
        let top = (f * datum.lattice_rank) as u64;
        (0..=top)
            .map(|i| ExtRank {
                degree: i as usize,
                rank: binomial(top, i),
            })
            .collect()
    });
    Ok(SatakeTargetReport {
        j: one_based(&levi.j),
        dim_n0: levi.dim_n0,
        targets,
        orthogonality,
        torus_ext_ranks,
        notes: vec![
            "targets are given by Jordan-Holder constituents; the comultiplication depends on a choice of realization and is not pinned".into(),
        ],
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipalSeriesReport {
    pub chi0: ModPCharacter,
    pub matched_w: Option<Vec<Vec<usize>>>,
    pub matched_length: Option<usize>,
    /// `(degree, dimension)` over a window covering every possibly nonzero degree.
    pub dims: Vec<(usize, u128)>,
}

impl PrincipalSeriesReport {
    pub fn nonzero(&self) -> Vec<(usize, u128)> {
        self.dims.iter().copied().filter(|&(_, d)| d > 0).collect()
    }
}

/// The trivial character of the finite torus.
pub fn trivial_character(datum: &RootDatum, p: u64, f: usize) -> Result<ModPCharacter> {
    restrict_mod_p(
        &UnderlineWeight::zero(datum.lattice_rank, f),
        &CocharBasis::torus(datum.lattice_rank),
        p,
        f,
    )
}

pub fn principal_series_report(
    datum: &RootDatum,
    chi0: &ModPCharacter,
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<PrincipalSeriesReport> {
    let bound = check_p_bound(datum, p);
    if !bound.passed() {
        return Err(Error::AssumptionViolated(format!(
            "p = {p} does not exceed h + 1 = {}",
            datum.coxeter_number_max() + 1
        )));
    }
    let modulus = weights::residue_modulus(p, f)?;
    if chi0.basis_tag != "T"
        || chi0.exponents.len() != datum.lattice_rank
        || chi0.modulus != modulus
    {
        return Err(Error::BasisShapeMismatch(format!(
            "chi0 must be a character of T with {} exponents modulo {modulus}",
            datum.lattice_rank
        )));
    }
    let reps = weyl::enumerate_weyl(datum, caps.weyl)?.elements;
    let size = (reps.len() as u128).pow(f as u32);
    if size > caps.underline as u128 {
        return Err(Error::EnumerationCap {
            size,
            cap: caps.underline,
        });
    }
    let basis = CocharBasis::torus(datum.lattice_rank);
    let zero = UnderlineWeight::zero(datum.lattice_rank, f);
    let mut matched: Option<(Vec<Vec<usize>>, usize)> = None;
    for k in 0..size as usize {
        let digits = underline_digits(k, reps.len(), f);
        let ws: Vec<&weyl::WeylElement> = digits.iter().map(|&r| &reps[r]).collect();
        let mu = weyl::dot_action(datum, &ws, &zero)?.neg();
        if restrict_mod_p(&mu, &basis, p, f)? == *chi0 {
            let len = ws.iter().map(|w| w.length()).sum();
            matched = Some((ws.iter().map(|w| word1(w)).collect(), len));
            break;
        }
    }
    let rk = f * datum.lattice_rank;
    let top = f * datum.roots().len() + rk;
    let dims = (0..=top)
        .map(|i| {
            let d = match &matched {
                Some((_, l)) if i >= *l => binomial(rk as u64, (i - l) as u64),
                _ => 0,
            };
            (i, d)
        })
        .collect();
    Ok(PrincipalSeriesReport {
        chi0: chi0.clone(),
        matched_length: matched.as_ref().map(|m| m.1),
        matched_w: matched.map(|m| m.0),
        dims,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportPoint {
    pub zeta: ModPCharacter,
    pub degrees: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterEntry {
    pub j: Vec<usize>,
    pub verdict: Verdict,
    /// Present only when the orthogonality check passes.
    pub points: Option<Vec<SupportPoint>>,
}

/// Support points of the left adjoint for each `J` (all subsets in bitmask
/// order unless `subsets` is given).
pub fn parameter_support(
    datum: &RootDatum,
    lambda: &UnderlineWeight,
    p: u64,
    f: usize,
    caps: &Caps,
    subsets: Option<&[Vec<usize>]>,
) -> Result<Vec<ParameterEntry>> {
    let r = datum.rank();
    let all: Vec<Vec<usize>> = match subsets {
        Some(s) => s.to_vec(),
        None => (0u64..1 << r)
            .map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
            .collect(),
    };
    all.par_iter()
        .map(|j| {
            let levi = build_levi(datum, j, f)?;
            let report = checkers::check_orthogonality_direct(datum, &levi.j, lambda, p, f, caps)?;
            if !report.passed() {
                return Ok(ParameterEntry {
                    j: one_based(&levi.j),
                    verdict: report.verdict,
                    points: None,
                });
            }
            let delta = levi::delta_character(datum, &levi.j, f)?;
            let by_len = constituents_by_length(datum, &levi, lambda, Some(&delta), p, f, caps)?;
            let mut points: BTreeMap<ModPCharacter, Vec<i64>> = BTreeMap::new();
            for (len, cs) in by_len {
                for c in cs {
                    let degs = points.entry(c.central_char).or_default();
                    let n = len as i64 - levi.dim_n0 as i64;
                    if !degs.contains(&n) {
                        degs.push(n);
                    }
                }
            }
            Ok(ParameterEntry {
                j: one_based(&levi.j),
                verdict: report.verdict,
                points: Some(
                    points
                        .into_iter()
                        .map(|(zeta, degrees)| SupportPoint { zeta, degrees })
                        .collect(),
                ),
            })
        })
        .collect()
}
