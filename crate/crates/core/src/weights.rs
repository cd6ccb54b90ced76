//! Weights: dominance, p-smallness, Weyl dimensions, Freudenthal
//! multiplicities, and restriction to characters of finite tori.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use num_traits::CheckedMul;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{dot, IMatrix};
use crate::root_datum::RootDatum;

pub const DEFAULT_DIM_CAP: u128 = 100_000;

/// An `f`-tuple of weights; component `j` is read through `Frob^j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnderlineWeight {
    pub components: Vec<Vec<i64>>,
}

impl UnderlineWeight {
    pub fn new(components: Vec<Vec<i64>>) -> Self {
        UnderlineWeight { components }
    }

    pub fn zero(d: usize, f: usize) -> Self {
        UnderlineWeight {
            components: vec![vec![0; d]; f],
        }
    }

    pub fn repeat(v: &[i64], f: usize) -> Self {
        UnderlineWeight {
            components: vec![v.to_vec(); f],
        }
    }

    pub fn f(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|&x| x == 0)
    }

    pub fn check_shape(&self, d: usize, f: usize) -> Result<()> {
        if self.f() != f || self.components.iter().any(|c| c.len() != d) {
            return Err(Error::ShapeMismatch(format!(
                "expected {f} weight components of length {d}"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &UnderlineWeight) -> UnderlineWeight {
        UnderlineWeight {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> UnderlineWeight {
        UnderlineWeight {
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|x| -x).collect())
                .collect(),
        }
    }
}

/// A named basis of a cocharacter lattice (of `T` or of the connected center `C_M`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocharBasis {
    pub tag: String,
    pub vectors: IMatrix,
}

impl CocharBasis {
    /// Standard basis of `X_*(T) = Z^d`.
    pub fn torus(d: usize) -> Self {
        CocharBasis {
            tag: "T".to_string(),
            vectors: crate::intlin::identity(d),
        }
    }
}

/// A character of a finite torus, as exponents modulo `q - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModPCharacter {
    pub modulus: u64,
    pub basis_tag: String,
    pub exponents: Vec<u64>,
}

/// `q - 1 = p^f - 1`.
pub fn residue_modulus(p: u64, f: usize) -> Result<u64> {
    if p < 2 || f == 0 {
        return Err(Error::Config(format!(
            "need p >= 2 and f >= 1, got p = {p}, f = {f}"
        )));
    }
    u32::try_from(f)
        .ok()
        .and_then(|f| p.checked_pow(f))
        .map(|q| q - 1)
        .ok_or_else(|| Error::Overflow(format!("{p}^{f}")))
}

/// Exponent `b` is `sum_j p^j <lambda_j, xi_b>` reduced into `[0, q-2]`.
pub fn restrict_mod_p(
    lambda: &UnderlineWeight,
    basis: &CocharBasis,
    p: u64,
    f: usize,
) -> Result<ModPCharacter> {
    if lambda.f() != f {
        return Err(Error::BasisShapeMismatch(format!(
            "weight has {} components, f = {f}",
            lambda.f()
        )));
    }
    if let Some(bad) = basis
        .vectors
        .iter()
        .find(|v| lambda.components.iter().any(|c| c.len() != v.len()))
    {
        return Err(Error::BasisShapeMismatch(format!(
            "cocharacter of length {} against weights of length {}",
            bad.len(),
            lambda.components.first().map_or(0, Vec::len)
        )));
    }
    let m = residue_modulus(p, f)? as i128;
    let exponents = basis
        .vectors
        .iter()
        .map(|xi| {
            let mut acc: i128 = 0;
            let mut pj: i128 = 1;
            for comp in &lambda.components {
                acc = (acc + pj * dot(comp, xi) as i128).rem_euclid(m);
                pj = pj * p as i128 % m;
            }
            acc as u64
        })
        .collect();
    Ok(ModPCharacter {
        modulus: m as u64,
        basis_tag: basis.tag.clone(),
        exponents,
    })
}

/// Outcome of a p-smallness test; `witness` is `(root index, embedding, <lambda_j + rho, alpha^vee>)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PSmallness {
    pub small: bool,
    pub witness: Option<(usize, usize, i64)>,
}

pub fn check_dominant(datum: &RootDatum, lambda: &UnderlineWeight) -> Result<()> {
    lambda.check_shape(datum.lattice_rank, lambda.f())?;
    match lambda.components.iter().find(|c| !datum.is_dominant(c)) {
        Some(c) => Err(Error::NotDominant(c.clone())),
        None => Ok(()),
    }
}

/// `<lambda_j + rho, alpha^vee> <= p` for every positive root and embedding.
pub fn is_p_small(datum: &RootDatum, lambda: &UnderlineWeight, p: u64) -> Result<PSmallness> {
    check_dominant(datum, lambda)?;
    for (j, comp) in lambda.components.iter().enumerate() {
        for (idx, r) in datum.roots().iter().enumerate() {
            let v = dot(comp, &r.coroot) + r.coroot_height();
            if v > p as i64 {
                return Ok(PSmallness {
                    small: false,
                    witness: Some((idx, j, v)),
                });
            }
        }
    }
    Ok(PSmallness {
        small: true,
        witness: None,
    })
}

/// Indices of the positive roots lying in the span of `j`.
pub fn phi_j_plus(datum: &RootDatum, j: &[usize]) -> Vec<usize> {
    datum
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.coords
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || j.contains(&i))
        })
        .map(|(idx, _)| idx)
        .collect()
}

fn is_dominant_for(datum: &RootDatum, j: &[usize], x: &[i64]) -> bool {
    j.iter().all(|&i| dot(x, &datum.simple_coroots[i]) >= 0)
}

fn weyl_dim_single(datum: &RootDatum, roots: &[usize], mu: &[i64]) -> Result<u128> {
    let mut acc = Ratio::from_integer(1i128);
    for &idx in roots {
        let r = &datum.roots()[idx];
        let h = r.coroot_height() as i128;
        let factor = Ratio::new(dot(mu, &r.coroot) as i128 + h, h);
        acc = acc
            .checked_mul(&factor)
            .ok_or_else(|| Error::Overflow("Weyl dimension product".into()))?;
    }
    debug_assert!(acc.is_integer());
    Ok(acc.to_integer() as u128)
}

/// Weyl's dimension formula for the Levi factor `M_J`, multiplied over embeddings.
pub fn weyl_dim(datum: &RootDatum, j: &[usize], mu: &UnderlineWeight) -> Result<u128> {
    let roots = phi_j_plus(datum, j);
    let mut total: u128 = 1;
    for comp in &mu.components {
        if comp.len() != datum.lattice_rank {
            return Err(Error::ShapeMismatch(format!(
                "weight of length {} for lattice rank {}",
                comp.len(),
                datum.lattice_rank
            )));
        }
        if !is_dominant_for(datum, j, comp) {
            return Err(Error::NotDominantForJ(comp.clone()));
        }
        total = total
            .checked_mul(weyl_dim_single(datum, &roots, comp)?)
            .ok_or_else(|| Error::Overflow("Weyl dimension product".into()))?;
    }
    Ok(total)
}

/// Characteristic-zero weight multiplicities of an irreducible module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityTable {
    pub entries: BTreeMap<Vec<i64>, u64>,
}

impl MultiplicityTable {
    pub fn total(&self) -> u128 {
        self.entries.values().map(|&m| m as u128).sum()
    }

    pub fn get(&self, mu: &[i64]) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }
}

/// Freudenthal multiplicities for the whole group.
pub fn freudenthal(datum: &RootDatum, lambda: &[i64], cap: u128) -> Result<MultiplicityTable> {
    let all: Vec<usize> = (0..datum.rank()).collect();
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    freudenthal_levi(datum, &all, lambda, cap)
}

/// Freudenthal multiplicities for the Levi factor `M_J`, whose root system is `Phi_J`.
pub fn freudenthal_levi(
    datum: &RootDatum,
    j: &[usize],
    lambda: &[i64],
    cap: u128,
) -> Result<MultiplicityTable> {
    if lambda.len() != datum.lattice_rank {
        return Err(Error::ShapeMismatch(format!(
            "weight of length {} for lattice rank {}",
            lambda.len(),
            datum.lattice_rank
        )));
    }
    if !is_dominant_for(datum, j, lambda) {
        return Err(Error::NotDominantForJ(lambda.to_vec()));
    }
    let roots = phi_j_plus(datum, j);
    let dim = weyl_dim_single(datum, &roots, lambda)?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let n = datum.rank();
    let sym = datum.symmetrizer();
    let rs = datum.roots();

    // Dominant weights below lambda, with the simple-root coordinates of lambda - mu.
    let mut depth: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    depth.insert(lambda.to_vec(), vec![0; n]);
    let mut queue = vec![lambda.to_vec()];
    let mut k = 0;
    while k < queue.len() {
        let mu = queue[k].clone();
        let base = depth[&mu].clone();
        for &idx in &roots {
            let r = &rs[idx];
            let next: Vec<i64> = mu.iter().zip(&r.vector).map(|(a, b)| a - b).collect();
            if depth.contains_key(&next) || !is_dominant_for(datum, j, &next) {
                continue;
            }
            let coords: Vec<i64> = base.iter().zip(&r.coords).map(|(a, b)| a + b).collect();
            depth.insert(next.clone(), coords);
            queue.push(next);
        }
        k += 1;
    }
    let mut dominant: Vec<Vec<i64>> = queue;
    dominant.sort_by(|a, b| {
        let ha: i64 = depth[a].iter().sum();
        let hb: i64 = depth[b].iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });

    // (x, alpha) for a weight x and a root with simple coordinates c.
    let form = |x: &[i64], c: &[i64]| -> i64 {
        (0..n)
            .filter(|&i| c[i] != 0)
            .map(|i| c[i] * dot(x, &datum.simple_coroots[i]) * sym[i])
            .sum()
    };
    let dominant_conjugate = |x: &[i64]| -> Vec<i64> {
        let mut x = x.to_vec();
        'outer: loop {
            for &i in j {
                if dot(&x, &datum.simple_coroots[i]) < 0 {
                    datum.reflect(i, &mut x);
                    continue 'outer;
                }
            }
            return x;
        }
    };
    let lambda_shift: Vec<i64> = (0..n)
        .map(|i| dot(lambda, &datum.simple_coroots[i]) + 1)
        .collect();

    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    mult.insert(lambda.to_vec(), 1);
    for mu in dominant.iter().skip(1) {
        let beta = &depth[mu];
        // (lambda + rho, lambda + rho) - (mu + rho, mu + rho) = 2 (lambda + rho, beta) - (beta, beta)
        let lr: i64 = (0..n).map(|i| beta[i] * lambda_shift[i] * sym[i]).sum();
        let den = 2 * lr - datum.root_form(beta, beta);
        let mut num: i64 = 0;
        for &idx in &roots {
            let r = &rs[idx];
            let mut x = mu.clone();
            loop {
                for (a, b) in x.iter_mut().zip(&r.vector) {
                    *a += b;
                }
                let m = mult.get(&dominant_conjugate(&x)).copied().unwrap_or(0);
                if m == 0 {
                    break;
                }
                num += 2 * m as i64 * form(&x, &r.coords);
            }
        }
        assert!(
            den > 0 && num % den == 0,
            "Freudenthal recursion is not integral"
        );
        let m = (num / den) as u64;
        if m > 0 {
            mult.insert(mu.clone(), m);
        }
    }

    let mut entries = BTreeMap::new();
    for mu in &dominant {
        let Some(&m) = mult.get(mu) else { continue };
        let mut orbit: HashSet<Vec<i64>> = HashSet::new();
        orbit.insert(mu.clone());
        let mut stack = vec![mu.clone()];
        while let Some(x) = stack.pop() {
            for &i in j {
                let mut y = x.clone();
                datum.reflect(i, &mut y);
                if orbit.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        for x in orbit {
            entries.insert(x, m);
        }
    }
    Ok(MultiplicityTable { entries })
}

/// Longest `alpha`-string length `<mu, alpha^vee> + 1` among weights of `L(lambda)`.
pub fn weight_string_max(datum: &RootDatum, lambda: &[i64], cap: u128) -> Result<i64> {
    let table = freudenthal(datum, lambda, cap)?;
    let mut best = 1;
    for mu in table.entries.keys() {
        for r in datum.roots() {
            let v = dot(mu, &r.coroot);
            if v >= 0 {
                best = best.max(v + 1);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Preset;

    fn datum(t: &str, p: Preset) -> RootDatum {
        RootDatum::build(t.parse().unwrap(), p).unwrap()
    }

    #[test]
    fn p_small_boundaries() {
        let sl2 = datum("A1", Preset::SimplyConnected);
        for p in [5u64, 7, 11] {
            let l = UnderlineWeight::new(vec![vec![p as i64 - 1]]);
            assert!(is_p_small(&sl2, &l, p).unwrap().small);
            let l = UnderlineWeight::new(vec![vec![p as i64]]);
            let r = is_p_small(&sl2, &l, p).unwrap();
            assert!(!r.small);
            assert_eq!(r.witness.map(|w| w.0), Some(0));
        }
        let gl2 = datum("A1", Preset::GLStyle);
        let l = UnderlineWeight::new(vec![vec![5, 0]]);
        assert!(is_p_small(&gl2, &l, 7).unwrap().small);
        let l = UnderlineWeight::new(vec![vec![0, 1]]);
        assert!(matches!(
            is_p_small(&gl2, &l, 7),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn dimensions() {
        let sl2 = datum("A1", Preset::SimplyConnected);
        for m in 0..6 {
            let mu = UnderlineWeight::new(vec![vec![m]]);
            assert_eq!(weyl_dim(&sl2, &[0], &mu).unwrap(), m as u128 + 1);
            assert_eq!(weyl_dim(&sl2, &[], &mu).unwrap(), 1);
        }
        let gl3 = datum("A2", Preset::GLStyle);
        let mu = UnderlineWeight::new(vec![vec![1, 0, -1]]);
        assert_eq!(weyl_dim(&gl3, &[0, 1], &mu).unwrap(), 8);
        let mu = UnderlineWeight::new(vec![vec![0, -1, 1]]);
        assert_eq!(weyl_dim(&gl3, &[0], &mu).unwrap(), 2);
        assert!(matches!(
            weyl_dim(&gl3, &[1], &mu),
            Err(Error::NotDominantForJ(_))
        ));
    }

    #[test]
    fn freudenthal_examples() {
        let gl3 = datum("A2", Preset::GLStyle);
        let t = freudenthal(&gl3, &[1, 0, -1], DEFAULT_DIM_CAP).unwrap();
        assert_eq!(t.get(&[0, 0, 0]), 2);
        assert_eq!(t.total(), 8);
        let sl2 = datum("A1", Preset::SimplyConnected);
        let t = freudenthal(&sl2, &[3], DEFAULT_DIM_CAP).unwrap();
        let keys: Vec<Vec<i64>> = t.entries.keys().cloned().collect();
        assert_eq!(keys, vec![vec![-3], vec![-1], vec![1], vec![3]]);
        assert!(t.entries.values().all(|&m| m == 1));
        let zero = freudenthal(&gl3, &[0, 0, 0], DEFAULT_DIM_CAP).unwrap();
        assert_eq!(zero.entries.len(), 1);
    }

    #[test]
    fn freudenthal_g2_adjoint() {
        let g2 = datum("G2", Preset::SimplyConnected);
        // The adjoint module: its zero weight space is the Cartan subalgebra.
        let theta = g2.roots()[g2.positive_roots().highest[0]].vector.clone();
        let t = freudenthal(&g2, &theta, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(t.total(), 14);
        assert_eq!(t.get(&[0, 0]), 2);
    }

    #[test]
    fn dimension_cap() {
        let sl2 = datum("A1", Preset::SimplyConnected);
        assert!(matches!(
            freudenthal(&sl2, &[20], 10),
            Err(Error::DimensionCap { dim: 21, cap: 10 })
        ));
    }

    #[test]
    fn string_lengths() {
        let sl2 = datum("A1", Preset::SimplyConnected);
        assert_eq!(weight_string_max(&sl2, &[0], DEFAULT_DIM_CAP).unwrap(), 1);
        assert_eq!(weight_string_max(&sl2, &[4], DEFAULT_DIM_CAP).unwrap(), 5);
        let gl3 = datum("A2", Preset::GLStyle);
        assert_eq!(
            weight_string_max(&gl3, &[1, 0, -1], DEFAULT_DIM_CAP).unwrap(),
            3
        );
    }

    #[test]
    fn restriction_examples() {
        let t2 = CocharBasis::torus(2);
        for p in [5u64, 7, 11] {
            let a = UnderlineWeight::new(vec![vec![p as i64 - 2, 0]]);
            let b = UnderlineWeight::new(vec![vec![-1, p as i64 - 1]]);
            let ra = restrict_mod_p(&a, &t2, p, 1).unwrap();
            assert_eq!(ra, restrict_mod_p(&b, &t2, p, 1).unwrap());
            assert_eq!(ra.exponents, vec![p - 2, 0]);
        }
        let t1 = CocharBasis::torus(1);
        let l = UnderlineWeight::new(vec![vec![3], vec![2]]);
        let r = restrict_mod_p(&l, &t1, 5, 2).unwrap();
        assert_eq!(r.modulus, 24);
        assert_eq!(r.exponents, vec![13]);
        let zero = UnderlineWeight::zero(2, 1);
        assert_eq!(
            restrict_mod_p(&zero, &t2, 7, 1).unwrap().exponents,
            vec![0, 0]
        );
        let short = UnderlineWeight::new(vec![vec![1]]);
        assert!(matches!(
            restrict_mod_p(&short, &t2, 7, 1),
            Err(Error::BasisShapeMismatch(_))
        ));
    }
}
