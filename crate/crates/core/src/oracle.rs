//! Brute-force cross-checks: Chevalley structure constants, the weight-graded
//! Chevalley–Eilenberg cohomology of the nilradical over `F_p`, and an explicit
//! `sl_2` module.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::checkers::Caps;
use crate::cohomology::kostant_report;
use crate::error::{Error, Result};
use crate::levi::build_levi;
use crate::root_datum::RootDatum;
use crate::weights::{freudenthal_levi, UnderlineWeight};

pub const DEFAULT_ORACLE_CAP: usize = 12;

/// `[e_a, e_b] = n e_{a+b}` for positive roots `a < b` (table indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub a: usize,
    pub b: usize,
    pub sum: usize,
    pub n: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChevalleyTable {
    pub brackets: Vec<Bracket>,
    #[serde(skip)]
    lookup: HashMap<(usize, usize), (usize, i64)>,
}

impl ChevalleyTable {
    /// `N_{a,b}` with antisymmetry, or `None` when `a + b` is not a root.
    pub fn constant(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        if a < b {
            self.lookup.get(&(a, b)).copied()
        } else {
            self.lookup.get(&(b, a)).map(|&(s, n)| (s, -n))
        }
    }

    /// `[e_x, [e_y, e_z]]` as a multiple of `e_{x+y+z}`.
    fn nested(&self, x: usize, y: usize, z: usize) -> i64 {
        if y == z {
            return 0;
        }
        let Some((yz, n1)) = self.constant(y, z) else {
            return 0;
        };
        if x == yz {
            return 0;
        }
        self.constant(x, yz).map_or(0, |(_, n2)| n1 * n2)
    }

    fn jacobi_defect(&self, x: usize, y: usize, z: usize) -> i64 {
        self.nested(x, y, z) + self.nested(y, z, x) + self.nested(z, x, y)
    }
}

fn coords_sum(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Structure constants on the positive part, `|N_{a,b}| = r + 1` with `r` the
/// largest `m` such that `b - m a` is a root. Extraspecial pairs get sign `+`;
/// the remaining signs are forced through the Jacobi identity, one root height
/// at a time, with a backtracking search if propagation stalls.
pub fn chevalley_constants(datum: &RootDatum) -> Result<ChevalleyTable> {
    let rs = datum.roots();
    let by_coords: HashMap<&[i64], usize> = rs
        .iter()
        .enumerate()
        .map(|(i, r)| (r.coords.as_slice(), i))
        .collect();
    let is_root = |c: &[i64]| -> bool {
        if c.iter().all(|&x| x >= 0) {
            by_coords.contains_key(c)
        } else if c.iter().all(|&x| x <= 0) {
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            by_coords.contains_key(neg.as_slice())
        } else {
            false
        }
    };

    // Pairs (a < b) grouped by the root they sum to.
    let mut pairs_of: BTreeMap<usize, Vec<(usize, usize, i64)>> = BTreeMap::new();
    for a in 0..rs.len() {
        for b in a + 1..rs.len() {
            let s = coords_sum(&rs[a].coords, &rs[b].coords);
            let Some(&sum) = by_coords.get(s.as_slice()) else {
                continue;
            };
            let mut r = 0;
            loop {
                let probe: Vec<i64> = rs[b]
                    .coords
                    .iter()
                    .zip(&rs[a].coords)
                    .map(|(y, x)| y - (r + 1) * x)
                    .collect();
                if is_root(&probe) {
                    r += 1;
                } else {
                    break;
                }
            }
            pairs_of.entry(sum).or_default().push((a, b, r + 1));
        }
    }

    let mut table = ChevalleyTable {
        brackets: Vec::new(),
        lookup: HashMap::new(),
    };
    // Roots are sorted by height, so processing sums in index order settles all
    // lower brackets before a Jacobi relation needs them.
    for (&sum, pairs) in &pairs_of {
        // Extraspecial pair: the one whose first root comes earliest.
        let mut signs: Vec<Option<i64>> = vec![None; pairs.len()];
        let special = (0..pairs.len())
            .min_by_key(|&i| (pairs[i].0, pairs[i].1))
            .unwrap();
        signs[special] = Some(1);

        // Triples x + y + z = sum; each one ties together the pairs summing to `sum`.
        let mut triples = Vec::new();
        for x in 0..rs.len() {
            for y in x + 1..rs.len() {
                for z in y + 1..rs.len() {
                    let s = coords_sum(&coords_sum(&rs[x].coords, &rs[y].coords), &rs[z].coords);
                    if by_coords.get(s.as_slice()) == Some(&sum) {
                        triples.push((x, y, z));
                    }
                }
            }
        }
        let pair_index: HashMap<(usize, usize), usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b, _))| ((a, b), i))
            .collect();
        // Each triple gives sum_t coeff_t * sign(pair_t) = 0.
        let equations: Vec<Vec<(usize, i64)>> = triples
            .iter()
            .map(|&(x, y, z)| {
                let mut terms = Vec::new();
                for (u, v, w) in [(x, y, z), (y, z, x), (z, x, y)] {
                    // [e_u, [e_v, e_w]] = N_{v,w} N_{u, v+w} e_sum
                    let Some((vw, n1)) = table.constant(v, w) else {
                        continue;
                    };
                    let (lo, hi, orient) = if u < vw { (u, vw, 1) } else { (vw, u, -1) };
                    let i = pair_index[&(lo, hi)];
                    terms.push((i, n1 * orient * pairs[i].2));
                }
                terms
            })
            .filter(|t| !t.is_empty())
            .collect();

        loop {
            let mut progress = false;
            for eq in &equations {
                let unknown: Vec<&(usize, i64)> =
                    eq.iter().filter(|(i, _)| signs[*i].is_none()).collect();
                if unknown.len() != 1 {
                    continue;
                }
                let (ui, uc) = *unknown[0];
                let known: i64 = eq
                    .iter()
                    .filter(|(i, _)| signs[*i].is_some())
                    .map(|(i, c)| c * signs[*i].unwrap())
                    .sum();
                if known % uc != 0 || (known / uc).abs() != 1 {
                    return Err(Error::JacobiFailure(format!(
                        "no sign solves the relation for root {:?}",
                        rs[sum].coords
                    )));
                }
                signs[ui] = Some(-known / uc);
                progress = true;
            }
            if !progress {
                break;
            }
        }
        let free: Vec<usize> = (0..pairs.len()).filter(|&i| signs[i].is_none()).collect();
        if !free.is_empty() {
            let satisfied = |s: &[Option<i64>]| {
                equations
                    .iter()
                    .all(|eq| eq.iter().map(|(i, c)| c * s[*i].unwrap()).sum::<i64>() == 0)
            };
            let mut found = None;
            for mask in 0u64..1 << free.len() {
                let mut trial = signs.clone();
                for (k, &i) in free.iter().enumerate() {
                    trial[i] = Some(if mask >> k & 1 == 1 { -1 } else { 1 });
                }
                if satisfied(&trial) {
                    found = Some(trial);
                    break;
                }
            }
            signs = found.ok_or_else(|| {
                Error::JacobiFailure(format!("sign search failed for root {:?}", rs[sum].coords))
            })?;
        }
        for (i, &(a, b, mag)) in pairs.iter().enumerate() {
            let n = signs[i].unwrap() * mag;
            table.lookup.insert((a, b), (sum, n));
            table.brackets.push(Bracket { a, b, sum, n });
        }
    }

    for x in 0..rs.len() {
        for y in x + 1..rs.len() {
            for z in y + 1..rs.len() {
                let defect = table.jacobi_defect(x, y, z);
                if defect != 0 {
                    return Err(Error::JacobiFailure(format!(
                        "Jacobi defect {defect} on roots {:?}, {:?}, {:?}",
                        rs[x].coords, rs[y].coords, rs[z].coords
                    )));
                }
            }
        }
    }
    Ok(table)
}

/// The nilradical `n` tensored up to `f` embedding copies, over `F_p`.
#[derive(Debug, Clone, Serialize)]
pub struct NilpotentAlgebraFp {
    /// `(root index, embedding copy)`.
    pub basis: Vec<(usize, usize)>,
    /// `[b_i, b_j] = c b_k` for `i < j`, coefficients reduced mod `p`.
    pub brackets: Vec<(usize, usize, usize, u64)>,
    pub p: u64,
}

pub fn nilpotent_algebra(
    datum: &RootDatum,
    j: &[usize],
    p: u64,
    f: usize,
) -> Result<NilpotentAlgebraFp> {
    let levi = build_levi(datum, j, f)?;
    let table = chevalley_constants(datum)?;
    let outside: Vec<usize> = (0..datum.roots().len())
        .filter(|i| !levi.phi_j_plus.contains(i))
        .collect();
    let mut basis = Vec::new();
    for copy in 0..f {
        for &r in &outside {
            basis.push((r, copy));
        }
    }
    let pos: HashMap<(usize, usize), usize> =
        basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut brackets = Vec::new();
    for (i, &(a, ca)) in basis.iter().enumerate() {
        for (k, &(b, cb)) in basis.iter().enumerate().skip(i + 1) {
            if ca != cb {
                continue;
            }
            if let Some((s, n)) = table.constant(a, b) {
                let target = pos[&(s, ca)];
                brackets.push((i, k, target, n.rem_euclid(p as i64) as u64));
            }
        }
    }
    Ok(NilpotentAlgebraFp { basis, brackets, p })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CeEntry {
    pub degree: usize,
    /// T-weight as an underline weight, one component per embedding.
    pub weight: UnderlineWeight,
    pub dim: u64,
}

/// Sign of the permutation sorting `seq` (entries distinct).
fn sort_sign(seq: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Differential of the dual basis vector `e^k`: `d e^k = -sum N e^i ^ e^j`.
fn dual_differentials(
    alg: &NilpotentAlgebraFp,
    n: usize,
    exact: &[(usize, usize, usize, i64)],
) -> Vec<Vec<(usize, usize, i64)>> {
    let _ = alg;
    let mut out = vec![Vec::new(); n];
    for &(i, j, k, c) in exact {
        out[k].push((i, j, -c));
    }
    out
}

/// `d` applied to the monomial `mask` as a sparse integer vector.
fn d_monomial(mask: u32, de: &[Vec<(usize, usize, i64)>]) -> BTreeMap<u32, i64> {
    let elems: Vec<usize> = (0..32).filter(|b| mask >> b & 1 == 1).collect();
    let mut out: BTreeMap<u32, i64> = BTreeMap::new();
    for (t, &s) in elems.iter().enumerate() {
        for &(a, b, c) in &de[s] {
            let rest = mask & !(1 << s);
            if rest >> a & 1 == 1 || rest >> b & 1 == 1 {
                continue;
            }
            let mut seq: Vec<usize> = elems[..t].to_vec();
            seq.push(a);
            seq.push(b);
            seq.extend_from_slice(&elems[t + 1..]);
            let sign = if t % 2 == 0 { 1 } else { -1 } * sort_sign(&seq);
            let target = rest | 1 << a | 1 << b;
            *out.entry(target).or_insert(0) += sign * c;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let k = rows[r][c];
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - k * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Weight-graded cohomology `H^i(n, F_p)` from the Chevalley–Eilenberg complex.
pub fn ce_cohomology_trivial(
    datum: &RootDatum,
    j: &[usize],
    p: u64,
    f: usize,
    cap: usize,
) -> Result<Vec<CeEntry>> {
    let levi = build_levi(datum, j, f)?;
    if levi.dim_n0 > cap {
        return Err(Error::SizeCap {
            dim: levi.dim_n0,
            cap,
        });
    }
    let alg = nilpotent_algebra(datum, j, p, f)?;
    let table = chevalley_constants(datum)?;
    let n = alg.basis.len();
    let d = datum.lattice_rank;
    let pos: HashMap<(usize, usize), usize> =
        alg.basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut exact = Vec::new();
    for (i, &(a, ca)) in alg.basis.iter().enumerate() {
        for (k, &(b, cb)) in alg.basis.iter().enumerate().skip(i + 1) {
            if ca == cb {
                if let Some((s, c)) = table.constant(a, b) {
                    exact.push((i, k, pos[&(s, ca)], c));
                }
            }
        }
    }
    let de = dual_differentials(&alg, n, &exact);

    // The dual vector e^b has weight -alpha in its embedding slot.
    let weight_of = |mask: u32| -> Vec<i64> {
        let mut w = vec![0i64; f * d];
        for (b, &(r, copy)) in alg.basis.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for (x, y) in w[copy * d..(copy + 1) * d]
                    .iter_mut()
                    .zip(&datum.roots()[r].vector)
                {
                    *x -= y;
                }
            }
        }
        w
    };

    let total: u32 = 1 << n;
    let images: Vec<BTreeMap<u32, i64>> = (0..total)
        .into_par_iter()
        .map(|m| d_monomial(m, &de))
        .collect();
    for (m, img) in images.iter().enumerate() {
        let mut dd: BTreeMap<u32, i64> = BTreeMap::new();
        for (&t, &c) in img {
            for (&u, &c2) in &images[t as usize] {
                *dd.entry(u).or_insert(0) += c * c2;
            }
        }
        if dd.values().any(|&v| v != 0) {
            return Err(Error::JacobiFailure(format!(
                "d o d != 0 on cochain {m:#b}"
            )));
        }
    }

    // Blocks keyed by (degree, weight).
    let mut blocks: BTreeMap<(usize, Vec<i64>), Vec<u32>> = BTreeMap::new();
    for m in 0..total {
        blocks
            .entry((m.count_ones() as usize, weight_of(m)))
            .or_default()
            .push(m);
    }
    let rank_of = |deg: usize, w: &Vec<i64>| -> usize {
        let Some(src) = blocks.get(&(deg, w.clone())) else {
            return 0;
        };
        let Some(dst) = blocks.get(&(deg + 1, w.clone())) else {
            return 0;
        };
        let col: HashMap<u32, usize> = dst.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let rows: Vec<Vec<u64>> = src
            .iter()
            .map(|&m| {
                let mut row = vec![0u64; dst.len()];
                for (t, &c) in &images[m as usize] {
                    row[col[t]] = c.rem_euclid(p as i64) as u64;
                }
                row
            })
            .collect();
        rank_mod_p(rows, p)
    };
    let keys: Vec<(usize, Vec<i64>)> = blocks.keys().cloned().collect();
    let entries: Vec<Option<CeEntry>> = keys
        .par_iter()
        .map(|(deg, w)| {
            let size = blocks[&(*deg, w.clone())].len();
            let out_rank = rank_of(*deg, w);
            let in_rank = if *deg == 0 { 0 } else { rank_of(deg - 1, w) };
            let dim = size - out_rank - in_rank;
            (dim > 0).then(|| CeEntry {
                degree: *deg,
                weight: UnderlineWeight::new(w.chunks(d).map(<[i64]>::to_vec).collect()),
                dim: dim as u64,
            })
        })
        .collect();
    Ok(entries.into_iter().flatten().collect())
}

/// Multiset `(degree, T-weight) -> multiplicity` predicted by the Kostant
/// decomposition with trivial coefficients.
pub fn kostant_weight_multiset(
    datum: &RootDatum,
    j: &[usize],
    p: u64,
    f: usize,
    caps: &Caps,
) -> Result<BTreeMap<(usize, UnderlineWeight), u64>> {
    let zero = UnderlineWeight::zero(datum.lattice_rank, f);
    let report = kostant_report(datum, j, &zero, p, f, caps)?;
    let levi = build_levi(datum, j, f)?;
    let mut out = BTreeMap::new();
    for deg in &report.degrees {
        for c in &deg.constituents {
            // The T-weights of an outer tensor product over embeddings.
            let mut partial: Vec<(Vec<Vec<i64>>, u64)> = vec![(Vec::new(), 1)];
            for comp in &c.weight.components {
                let t = freudenthal_levi(datum, &levi.j, comp, caps.dim)?;
                let mut next = Vec::new();
                for (prefix, m) in &partial {
                    for (mu, k) in &t.entries {
                        let mut v = prefix.clone();
                        v.push(mu.clone());
                        next.push((v, m * k));
                    }
                }
                partial = next;
            }
            for (w, m) in partial {
                *out.entry((deg.degree as usize, UnderlineWeight::new(w)))
                    .or_insert(0) += m;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub agree: bool,
    pub oracle_dims: Vec<u64>,
    pub kostant_dims: Vec<u64>,
    /// `(degree, weight, oracle multiplicity, Kostant multiplicity)` where they differ.
    pub mismatches: Vec<(usize, UnderlineWeight, u64, u64)>,
}

fn per_degree(m: &BTreeMap<(usize, UnderlineWeight), u64>) -> Vec<u64> {
    let top = m.keys().map(|(d, _)| *d).max().map_or(0, |d| d + 1);
    let mut out = vec![0; top];
    for ((d, _), v) in m {
        out[*d] += v;
    }
    out
}

/// Compare the Chevalley–Eilenberg oracle with the Kostant decomposition for `lambda = 0`.
pub fn compare_with_kostant(
    datum: &RootDatum,
    j: &[usize],
    p: u64,
    f: usize,
    caps: &Caps,
    oracle_cap: usize,
) -> Result<OracleComparison> {
    let ce = ce_cohomology_trivial(datum, j, p, f, oracle_cap)?;
    let mut oracle: BTreeMap<(usize, UnderlineWeight), u64> = BTreeMap::new();
    for e in ce {
        *oracle.entry((e.degree, e.weight)).or_insert(0) += e.dim;
    }
    let kostant = kostant_weight_multiset(datum, j, p, f, caps)?;
    let mut mismatches = Vec::new();
    let keys: std::collections::BTreeSet<&(usize, UnderlineWeight)> =
        oracle.keys().chain(kostant.keys()).collect();
    for k in keys {
        let a = oracle.get(k).copied().unwrap_or(0);
        let b = kostant.get(k).copied().unwrap_or(0);
        if a != b {
            mismatches.push((k.0, k.1.clone(), a, b));
        }
    }
    Ok(OracleComparison {
        agree: mismatches.is_empty(),
        oracle_dims: per_degree(&oracle),
        kostant_dims: per_degree(&kostant),
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sl2Cohomology {
    /// `sl_2` weights `<mu, alpha^vee>` of `H^0`.
    pub h0: Vec<i64>,
    pub h1: Vec<i64>,
}

/// Cohomology of `n = F_p e` with coefficients in `Sym^lambda` of the standard
/// representation, `e (x^{lambda-k} y^k) = k x^{lambda-k+1} y^{k-1}`.
pub fn sl2_module_oracle(lambda: i64, p: u64) -> Result<Sl2Cohomology> {
    let max = p as i64 - 1;
    if !(0..=max).contains(&lambda) {
        return Err(Error::WeightOutOfRange {
            weight: lambda,
            max,
        });
    }
    // Basis v_k = x^{lambda-k} y^k of weight lambda - 2k; e v_k = k v_{k-1}.
    let coeff = |k: i64| (k as u64) % p;
    let mut h0 = Vec::new();
    let mut h1 = Vec::new();
    for k in 0..=lambda {
        if k == 0 || coeff(k) == 0 {
            h0.push(lambda - 2 * k);
        }
        // v_k lies in the image iff e v_{k+1} = (k+1) v_k is nonzero.
        let hit = k < lambda && coeff(k + 1) != 0;
        if !hit {
            // H^1(n, V) = V / eV tensored with n^*, which has weight -2.
            h1.push(lambda - 2 * k - 2);
        }
    }
    Ok(Sl2Cohomology { h0, h1 })
}
