//! Split root data, Cartan types, and positive root tables.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{self, dot, IMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "A" | "a" => Family::A,
            "B" | "b" => Family::B,
            "C" | "c" => Family::C,
            "D" | "d" => Family::D,
            "E" | "e" => Family::E,
            "F" | "f" => Family::F,
            "G" | "g" => Family::G,
            other => return Err(Error::InvalidType(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An irreducible Cartan type such as `B3` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family}{rank}")))
        }
    }

    /// Simple roots in a Euclidean realization, with every coordinate doubled
    /// so that E8 and F4 stay integral.
    fn doubled_euclidean_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let unit = |len: usize, i: usize| -> Vec<i64> {
            let mut v = vec![0; len];
            v[i] = 2;
            v
        };
        let diff = |len: usize, i: usize, j: usize| -> Vec<i64> {
            let mut v = vec![0; len];
            v[i] += 2;
            v[j] -= 2;
            v
        };
        match self.family {
            Family::A => (0..n).map(|i| diff(n + 1, i, i + 1)).collect(),
            Family::B | Family::C | Family::D => {
                let mut out: Vec<Vec<i64>> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                let last = match self.family {
                    Family::B => unit(n, n - 1),
                    Family::C => unit(n, n - 1).into_iter().map(|x| 2 * x).collect(),
                    _ => {
                        let mut v = vec![0; n];
                        v[n - 2] = 2;
                        v[n - 1] = 2;
                        v
                    }
                };
                out.push(last);
                out
            }
            Family::E => {
                let mut out = vec![vec![1, -1, -1, -1, -1, -1, -1, 1]];
                let mut a2 = vec![0; 8];
                a2[0] = 2;
                a2[1] = 2;
                out.push(a2);
                for i in 0..6 {
                    out.push(diff(8, i + 1, i));
                }
                out.truncate(n);
                out
            }
            Family::F => vec![
                diff(4, 1, 2),
                diff(4, 2, 3),
                unit(4, 3),
                vec![1, -1, -1, -1],
            ],
            Family::G => vec![vec![2, -2, 0], vec![-4, 2, 2]],
        }
    }

    /// Cartan matrix with `A[i][j] = <alpha_i, alpha_j^vee>`, Bourbaki numbering.
    pub fn cartan_matrix(&self) -> IMatrix {
        let roots = self.doubled_euclidean_roots();
        let n = roots.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 2 * dot(&roots[i], &roots[j]) / dot(&roots[j], &roots[j]))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = chars
            .next()
            .ok_or_else(|| Error::InvalidType(String::new()))?
            .to_string()
            .parse()?;
        let rank = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(fam, rank)
    }
}

/// Block-diagonal Cartan matrix of a product of irreducible types.
pub fn block_cartan(types: &[CartanType]) -> IMatrix {
    let n: usize = types.iter().map(|t| t.rank).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for t in types {
        let a = t.cartan_matrix();
        for i in 0..t.rank {
            for j in 0..t.rank {
                out[off + i][off + j] = a[i][j];
            }
        }
        off += t.rank;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    SimplyConnected,
    Adjoint,
    GLStyle,
    Raw,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "simplyconnected" | "sc" => Preset::SimplyConnected,
            "adjoint" | "ad" => Preset::Adjoint,
            "glstyle" | "gl" => Preset::GLStyle,
            "raw" => Preset::Raw,
            _ => return Err(Error::UnsupportedPreset(s.to_string())),
        })
    }
}

/// One positive root together with its coroot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    /// Coordinates in the basis of simple roots.
    pub coords: Vec<i64>,
    /// Vector in `X^*`.
    pub vector: Vec<i64>,
    /// Coordinates of the coroot in the basis of simple coroots.
    pub coroot_coords: Vec<i64>,
    /// Coroot vector in `X_*`.
    pub coroot: Vec<i64>,
    pub height: i64,
    pub component: usize,
}

impl Root {
    pub fn coroot_height(&self) -> i64 {
        self.coroot_coords.iter().sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PositiveRootTable {
    /// Sorted by height, then by simple-root coordinates in decreasing
    /// lexicographic order; the first `rank` entries are the simple roots.
    pub roots: Vec<Root>,
    /// Index into `roots` of the highest root of each component.
    pub highest: Vec<usize>,
    pub coxeter_numbers: Vec<i64>,
}

/// A split root datum realized on `Z^d` with the dot-product pairing.
#[derive(Debug, Clone, Serialize)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub preset: Preset,
    pub lattice_rank: usize,
    pub simple_roots: IMatrix,
    pub simple_coroots: IMatrix,
    #[serde(skip)]
    cartan: IMatrix,
    /// Simple-root indices of each irreducible component, in increasing order.
    pub components: Vec<Vec<usize>>,
    #[serde(skip)]
    table: PositiveRootTable,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
    #[serde(skip)]
    two_rho: Vec<i64>,
    #[serde(skip)]
    symmetrizer: Vec<i64>,
}

impl RootDatum {
    pub fn build(cartan_type: CartanType, preset: Preset) -> Result<Self> {
        let a = cartan_type.cartan_matrix();
        let n = cartan_type.rank;
        let (roots, coroots) = match preset {
            Preset::SimplyConnected => (a.clone(), intlin::identity(n)),
            Preset::Adjoint => (intlin::identity(n), intlin::transpose(&a)),
            Preset::GLStyle => {
                if cartan_type.family != Family::A {
                    return Err(Error::UnsupportedPreset(format!(
                        "GLStyle is only defined for type A, not {cartan_type}"
                    )));
                }
                let r: IMatrix = (0..n)
                    .map(|i| {
                        let mut v = vec![0; n + 1];
                        v[i] = 1;
                        v[i + 1] = -1;
                        v
                    })
                    .collect();
                (r.clone(), r)
            }
            Preset::Raw => {
                return Err(Error::UnsupportedPreset(
                    "raw data must be supplied through RootDatum::from_raw".into(),
                ))
            }
        };
        Self::assemble(cartan_type, preset, roots, coroots, a)
    }

    /// Validate user-supplied simple roots and coroots against the declared type.
    pub fn from_raw(cartan_type: CartanType, roots: IMatrix, coroots: IMatrix) -> Result<Self> {
        let a = cartan_type.cartan_matrix();
        Self::assemble(cartan_type, Preset::Raw, roots, coroots, a)
    }

    fn assemble(
        cartan_type: CartanType,
        preset: Preset,
        roots: IMatrix,
        coroots: IMatrix,
        expected: IMatrix,
    ) -> Result<Self> {
        let n = expected.len();
        if roots.len() != n || coroots.len() != n {
            return Err(Error::InvalidDatum(format!(
                "expected {n} simple roots and coroots, got {} and {}",
                roots.len(),
                coroots.len()
            )));
        }
        let d = roots[0].len();
        if d == 0 || roots.iter().chain(&coroots).any(|v| v.len() != d) {
            return Err(Error::InvalidDatum(
                "vectors must share one positive length".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let got = dot(&roots[i], &coroots[j]);
                if got != expected[i][j] {
                    return Err(Error::InvalidDatum(format!(
                        "<alpha_{}, alpha_{}^vee> = {got}, Cartan matrix of {cartan_type} says {}",
                        i + 1,
                        j + 1,
                        expected[i][j]
                    )));
                }
            }
        }
        if intlin::smith(&roots).rank() != n || intlin::smith(&coroots).rank() != n {
            return Err(Error::InvalidDatum(
                "simple roots or coroots are dependent".into(),
            ));
        }
        let components = components_of(&expected);
        let symmetrizer = symmetrizer_of(&expected, &components);
        let mut datum = RootDatum {
            cartan_type,
            preset,
            lattice_rank: d,
            simple_roots: roots,
            simple_coroots: coroots,
            cartan: expected,
            components,
            table: PositiveRootTable {
                roots: Vec::new(),
                highest: Vec::new(),
                coxeter_numbers: Vec::new(),
            },
            index: HashMap::new(),
            two_rho: Vec::new(),
            symmetrizer,
        };
        datum.table = datum.enumerate_roots();
        datum.index = datum
            .table
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.vector.clone(), i))
            .collect();
        let mut two_rho = vec![0; d];
        for r in &datum.table.roots {
            for (x, y) in two_rho.iter_mut().zip(&r.vector) {
                *x += y;
            }
        }
        datum.two_rho = two_rho;
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn cartan_matrix(&self) -> &IMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &PositiveRootTable {
        &self.table
    }

    pub fn roots(&self) -> &[Root] {
        &self.table.roots
    }

    /// Index of the positive root with the given vector.
    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// `Some((index, true))` for a positive root, `Some((index, false))` for the
    /// negative of positive root `index`, `None` for a non-root.
    pub fn signed_root_index(&self, v: &[i64]) -> Option<(usize, bool)> {
        if let Some(i) = self.root_index(v) {
            return Some((i, true));
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.root_index(&neg).map(|i| (i, false))
    }

    /// `2 rho`, the sum of the positive roots.
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    /// Integer weights with `(alpha_i, alpha_j) = A[i][j] * d_j` symmetric,
    /// normalized so the short roots of each component have `d = 1`.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn component_of(&self, simple: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&simple))
            .expect("every simple root lies in a component")
    }

    /// `<x, alpha_i^vee>` for every simple coroot.
    pub fn simple_pairings(&self, x: &[i64]) -> Vec<i64> {
        self.simple_coroots.iter().map(|c| dot(x, c)).collect()
    }

    pub fn is_dominant(&self, x: &[i64]) -> bool {
        self.simple_pairings(x).iter().all(|&v| v >= 0)
    }

    /// Apply the simple reflection `s_i` to a weight.
    pub fn reflect(&self, i: usize, x: &mut [i64]) {
        let k = dot(x, &self.simple_coroots[i]);
        for (a, b) in x.iter_mut().zip(&self.simple_roots[i]) {
            *a -= k * b;
        }
    }

    /// Apply the simple reflection `s_i` to a cocharacter.
    pub fn reflect_coweight(&self, i: usize, x: &mut [i64]) {
        let k = dot(&self.simple_roots[i], x);
        for (a, b) in x.iter_mut().zip(&self.simple_coroots[i]) {
            *a -= k * b;
        }
    }

    /// Reflection matrix of `s_i` acting on column vectors of `X^*`.
    pub fn reflection_matrix(&self, i: usize) -> IMatrix {
        let d = self.lattice_rank;
        let mut m = intlin::identity(d);
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x -= self.simple_roots[i][r] * self.simple_coroots[i][c];
            }
        }
        m
    }

    /// `X^*/ZPhi` is torsion-free iff every invariant factor of the simple root matrix is 1.
    pub fn center_is_connected(&self) -> bool {
        intlin::smith(&self.simple_roots)
            .invariants
            .iter()
            .all(|&x| x == 1)
    }

    pub fn coxeter_number_max(&self) -> i64 {
        self.table
            .coxeter_numbers
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Integer inner product `(x, y)` of two elements of the root lattice given
    /// by simple-root coordinates.
    pub fn root_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (xi, row) in x.iter().zip(&self.cartan) {
            if *xi == 0 {
                continue;
            }
            for ((yj, a), d) in y.iter().zip(row).zip(&self.symmetrizer) {
                s += xi * yj * a * d;
            }
        }
        s
    }

    fn enumerate_roots(&self) -> PositiveRootTable {
        let n = self.rank();
        let a = &self.cartan;
        let mut known: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut levels: Vec<Vec<Vec<i64>>> = vec![(0..n)
            .map(|i| {
                let mut c = vec![0; n];
                c[i] = 1;
                c
            })
            .collect()];
        for c in &levels[0] {
            known.insert(c.clone(), ());
        }
        loop {
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in levels.last().unwrap() {
                for i in 0..n {
                    // <beta, alpha_i^vee> = sum_k c_k A[k][i]
                    let pair: i64 = (0..n).map(|k| beta[k] * a[k][i]).sum();
                    let mut r = 0;
                    let mut probe = beta.clone();
                    loop {
                        probe[i] -= 1;
                        if known.contains_key(&probe) {
                            r += 1;
                        } else {
                            break;
                        }
                    }
                    let q = r - pair;
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) {
                            known.insert(up.clone(), ());
                            next.push(up);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            // Descending coordinates, so the simple root alpha_i sits at index i.
            next.sort_by(|a, b| b.cmp(a));
            levels.push(next);
        }

        let mut coroot_of: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut roots = Vec::new();
        for (h, level) in levels.iter().enumerate() {
            for coords in level {
                let cc = if h == 0 {
                    coords.clone()
                } else {
                    // beta^vee = s_i((s_i beta)^vee) for any i with <beta, alpha_i^vee> > 0.
                    let i = (0..n)
                        .find(|&i| (0..n).map(|k| coords[k] * a[k][i]).sum::<i64>() > 0)
                        .expect("non-simple positive root has a descent");
                    let pair: i64 = (0..n).map(|k| coords[k] * a[k][i]).sum();
                    let mut lower = coords.clone();
                    lower[i] -= pair;
                    let mut cc = coroot_of[&lower].clone();
                    // s_i on coroot coordinates: c_i -= sum_k <alpha_i, alpha_k^vee> c_k
                    let k_pair: i64 = (0..n).map(|k| a[i][k] * cc[k]).sum();
                    cc[i] -= k_pair;
                    cc
                };
                coroot_of.insert(coords.clone(), cc.clone());
                let vector = combine(coords, &self.simple_roots);
                let coroot = combine(&cc, &self.simple_coroots);
                let support = coords.iter().position(|&x| x != 0).unwrap();
                roots.push(Root {
                    coords: coords.clone(),
                    vector,
                    coroot_coords: cc,
                    coroot,
                    height: h as i64 + 1,
                    component: self.component_of(support),
                });
            }
        }
        let mut highest = Vec::new();
        let mut coxeter_numbers = Vec::new();
        for c in 0..self.components.len() {
            let idx = (0..roots.len())
                .filter(|&i| roots[i].component == c)
                .max_by_key(|&i| roots[i].height)
                .unwrap();
            highest.push(idx);
            coxeter_numbers.push(roots[idx].height + 1);
        }
        PositiveRootTable {
            roots,
            highest,
            coxeter_numbers,
        }
    }
}

fn combine(coords: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    let d = basis[0].len();
    let mut v = vec![0; d];
    for (c, b) in coords.iter().zip(basis) {
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    v
}

fn components_of(a: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && a[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn symmetrizer_of(a: &[Vec<i64>], components: &[Vec<usize>]) -> Vec<i64> {
    let n = a.len();
    let mut d: Vec<Ratio<i64>> = vec![Ratio::from_integer(0); n];
    for comp in components {
        d[comp[0]] = Ratio::from_integer(1);
        let mut done = vec![comp[0]];
        let mut k = 0;
        while k < done.len() {
            let i = done[k];
            for &j in comp {
                if a[i][j] != 0 && *d[j].numer() == 0 {
                    // a[i][j] d_j = a[j][i] d_i
                    d[j] = d[i] * Ratio::new(a[j][i], a[i][j]);
                    done.push(j);
                }
            }
            k += 1;
        }
        let min = comp.iter().map(|&i| d[i]).min().unwrap();
        for &i in comp {
            d[i] /= min;
        }
    }
    d.iter().map(|r| r.to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> CartanType {
        s.parse().unwrap()
    }

    #[test]
    fn sl2_and_gl2() {
        let sl2 = RootDatum::build(ty("A1"), Preset::SimplyConnected).unwrap();
        assert_eq!(sl2.lattice_rank, 1);
        assert_eq!(sl2.simple_roots, vec![vec![2]]);
        assert_eq!(sl2.simple_coroots, vec![vec![1]]);
        let gl2 = RootDatum::build(ty("A1"), Preset::GLStyle).unwrap();
        assert_eq!(gl2.simple_roots, vec![vec![1, -1]]);
        assert_eq!(gl2.simple_coroots, vec![vec![1, -1]]);
    }

    #[test]
    fn g2_cartan() {
        assert_eq!(ty("G2").cartan_matrix(), vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(ty("B2").cartan_matrix(), vec![vec![2, -2], vec![-1, 2]]);
    }

    #[test]
    fn bad_types() {
        assert!(CartanType::new(Family::E, 5).is_err());
        assert!(CartanType::new(Family::B, 1).is_err());
        assert!(CartanType::new(Family::D, 2).is_err());
        assert!(matches!(
            RootDatum::build(ty("B2"), Preset::GLStyle),
            Err(Error::UnsupportedPreset(_))
        ));
    }

    #[test]
    fn small_root_tables() {
        let a2 = RootDatum::build(ty("A2"), Preset::SimplyConnected).unwrap();
        let heights: Vec<i64> = a2.roots().iter().map(|r| r.height).collect();
        assert_eq!(heights, vec![1, 1, 2]);
        assert_eq!(a2.positive_roots().coxeter_numbers, vec![3]);
        let g2 = RootDatum::build(ty("G2"), Preset::SimplyConnected).unwrap();
        assert_eq!(g2.roots().len(), 6);
        assert_eq!(g2.positive_roots().coxeter_numbers, vec![6]);
        let b2 = RootDatum::build(ty("B2"), Preset::SimplyConnected).unwrap();
        assert_eq!(b2.roots().len(), 4);
        assert_eq!(b2.positive_roots().coxeter_numbers, vec![4]);
    }

    #[test]
    fn center_connectedness() {
        let gl2 = RootDatum::build(ty("A1"), Preset::GLStyle).unwrap();
        assert!(gl2.center_is_connected());
        let sl2 = RootDatum::build(ty("A1"), Preset::SimplyConnected).unwrap();
        assert!(!sl2.center_is_connected());
        let pgl2 = RootDatum::build(ty("A1"), Preset::Adjoint).unwrap();
        assert!(pgl2.center_is_connected());
    }

    #[test]
    fn g2_coroots_pair_to_two() {
        let g2 = RootDatum::build(ty("G2"), Preset::Adjoint).unwrap();
        for r in g2.roots() {
            assert_eq!(dot(&r.vector, &r.coroot), 2);
        }
        // The dual root system is again G2, so its highest coroot has height 5.
        let max = g2.roots().iter().map(Root::coroot_height).max().unwrap();
        assert_eq!(max, 5);
    }

    #[test]
    fn raw_rejects_wrong_pairing() {
        let err = RootDatum::from_raw(ty("A1"), vec![vec![1]], vec![vec![1]]);
        assert!(matches!(err, Err(Error::InvalidDatum(_))));
        let ok = RootDatum::from_raw(ty("A1"), vec![vec![1, -1, 0]], vec![vec![1, -1, 5]]);
        assert!(ok.is_ok());
    }
}
