//! Weyl groups, parabolic coset representatives, and the dot action.
//!
//! Inversion sets follow `Phi_w = Phi^+ ∩ w(Phi^-)` and are stored as bitsets
//! over the positive root table (at most 120 roots, for E8). Elements are built
//! by right multiplication, so `v <= w` in the right weak order exactly when
//! `Phi_v ⊆ Phi_w`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_datum::RootDatum;
use crate::weights::UnderlineWeight;

pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylElement {
    /// Reduced word, read left to right as a product of simple reflections
    /// (0-based indices).
    pub word: Vec<usize>,
    /// Row-major `d x d` matrix of the action on `X^*`.
    #[serde(skip)]
    pub action: Vec<i64>,
    #[serde(skip)]
    pub inversions: u128,
}

impl WeylElement {
    pub fn identity(d: usize) -> Self {
        let mut action = vec![0; d * d];
        for i in 0..d {
            action[i * d + i] = 1;
        }
        WeylElement {
            word: Vec::new(),
            action,
            inversions: 0,
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let d = x.len();
        debug_assert_eq!(self.action.len(), d * d);
        (0..d)
            .map(|r| (0..d).map(|c| self.action[r * d + c] * x[c]).sum())
            .collect()
    }

    /// Indices of the positive roots in the inversion set.
    pub fn inversion_roots(&self) -> Vec<usize> {
        (0..128)
            .filter(|&i| self.inversions >> i & 1 == 1)
            .collect()
    }

    /// `self * s_i`, given that the length goes up.
    fn times_simple(&self, datum: &RootDatum, i: usize) -> Option<WeylElement> {
        let image = self.apply(&datum.simple_roots[i]);
        let (idx, positive) = datum
            .signed_root_index(&image)
            .expect("Weyl group permutes roots");
        if !positive {
            return None;
        }
        let d = datum.lattice_rank;
        let s = datum.reflection_matrix(i);
        let mut action = vec![0; d * d];
        for r in 0..d {
            for c in 0..d {
                action[r * d + c] = (0..d).map(|k| self.action[r * d + k] * s[k][c]).sum();
            }
        }
        let mut word = self.word.clone();
        word.push(i);
        Some(WeylElement {
            word,
            action,
            inversions: self.inversions | 1u128 << idx,
        })
    }
}

/// Breadth-first enumeration by right multiplication, keeping only elements
/// whose inversion set avoids `forbidden`. Discovery order is canonical: by
/// length, then parent order, then generator index.
fn bfs(datum: &RootDatum, forbidden: u128, cap: usize) -> Result<Vec<WeylElement>> {
    let d = datum.lattice_rank;
    let n = datum.rank();
    let two_rho = datum.two_rho().to_vec();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let e = WeylElement::identity(d);
    seen.insert(two_rho.clone(), ());
    let mut out = vec![e];
    let mut start = 0;
    loop {
        let end = out.len();
        for k in start..end {
            for i in 0..n {
                let Some(next) = out[k].times_simple(datum, i) else {
                    continue;
                };
                if next.inversions & forbidden != 0 {
                    continue;
                }
                let key = next.apply(&two_rho);
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, ());
                out.push(next);
                if out.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
            }
        }
        if out.len() == end {
            break;
        }
        start = end;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    two_rho: Vec<i64>,
}

impl WeylGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element with the given action, located through its image of `2 rho`.
    pub fn find_by_action(&self, action: &[i64]) -> Option<&WeylElement> {
        let probe = WeylElement {
            word: Vec::new(),
            action: action.to_vec(),
            inversions: 0,
        };
        self.index
            .get(&probe.apply(&self.two_rho))
            .map(|&i| &self.elements[i])
    }

    pub fn by_length(&self) -> BTreeMap<usize, usize> {
        count_lengths(&self.elements)
    }
}

pub fn enumerate_weyl(datum: &RootDatum, cap: usize) -> Result<WeylGroup> {
    let elements = bfs(datum, 0, cap)?;
    let two_rho = datum.two_rho().to_vec();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, w)| (w.apply(&two_rho), i))
        .collect();
    Ok(WeylGroup {
        elements,
        index,
        two_rho,
    })
}

fn count_lengths(elements: &[WeylElement]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for w in elements {
        *m.entry(w.length()).or_insert(0) += 1;
    }
    m
}

/// Bitmask of the positive roots lying in the span of `j`.
pub fn phi_j_mask(datum: &RootDatum, j: &[usize]) -> u128 {
    let mut mask = 0u128;
    for (idx, r) in datum.roots().iter().enumerate() {
        let inside = r
            .coords
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || j.contains(&i));
        if inside {
            mask |= 1u128 << idx;
        }
    }
    mask
}

/// The set `^J W` of minimal-length representatives of `W_J \ W`.
#[derive(Debug, Clone, Serialize)]
pub struct CosetReps {
    pub j: Vec<usize>,
    pub elements: Vec<WeylElement>,
    pub by_length: BTreeMap<usize, usize>,
}

impl CosetReps {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `{w : w^{-1}(Phi_J^+) ⊆ Phi^+}`, i.e. the elements whose inversion set
/// contains no root of `Phi_J`. The set is closed under taking prefixes of
/// reduced words, so it is enumerated without building all of `W`.
pub fn minimal_coset_reps(datum: &RootDatum, j: &[usize], cap: usize) -> Result<CosetReps> {
    validate_subset(datum, j)?;
    let mut j = j.to_vec();
    j.sort_unstable();
    j.dedup();
    let elements = bfs(datum, phi_j_mask(datum, &j), cap)?;
    let by_length = count_lengths(&elements);
    Ok(CosetReps {
        j,
        elements,
        by_length,
    })
}

pub fn validate_subset(datum: &RootDatum, j: &[usize]) -> Result<()> {
    if let Some(&bad) = j.iter().find(|&&i| i >= datum.rank()) {
        return Err(Error::ShapeMismatch(format!(
            "simple root index {} out of range 1..={}",
            bad + 1,
            datum.rank()
        )));
    }
    Ok(())
}

/// `2 (w . x) = w(2x + 2rho) - 2rho` on a single embedding.
pub fn dot_single(datum: &RootDatum, w: &WeylElement, x: &[i64]) -> Result<Vec<i64>> {
    if x.len() != datum.lattice_rank || w.action.len() != x.len() * x.len() {
        return Err(Error::ShapeMismatch(format!(
            "weight of length {} for lattice rank {}",
            x.len(),
            datum.lattice_rank
        )));
    }
    let two_rho = datum.two_rho();
    let shifted: Vec<i64> = x.iter().zip(two_rho).map(|(a, r)| 2 * a + r).collect();
    let image = w.apply(&shifted);
    image
        .iter()
        .zip(two_rho)
        .map(|(a, r)| {
            let v = a - r;
            if v % 2 != 0 {
                Err(Error::Overflow(format!("dot action left 2X^*: {image:?}")))
            } else {
                Ok(v / 2)
            }
        })
        .collect()
}

/// Componentwise dot action of an underline element.
pub fn dot_action(
    datum: &RootDatum,
    w: &[&WeylElement],
    lambda: &UnderlineWeight,
) -> Result<UnderlineWeight> {
    if w.len() != lambda.f() {
        return Err(Error::ShapeMismatch(format!(
            "{} Weyl components for {} weight components",
            w.len(),
            lambda.f()
        )));
    }
    let components = w
        .iter()
        .zip(&lambda.components)
        .map(|(wj, lj)| dot_single(datum, wj, lj))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnderlineWeight { components })
}

/// Right weak order: `Phi_v ⊆ Phi_w`.
pub fn weak_order_leq(v: &WeylElement, w: &WeylElement) -> bool {
    v.inversions & !w.inversions == 0
}

/// The unique element of `^J W` of length `|Phi^+ - Phi_J^+|`.
pub fn longest_relative_element(datum: &RootDatum, j: &[usize], cap: usize) -> Result<WeylElement> {
    let reps = minimal_coset_reps(datum, j, cap)?;
    let target = datum.roots().len() - phi_j_mask(datum, &reps.j).count_ones() as usize;
    let mut top = reps.elements.into_iter().filter(|w| w.length() == target);
    let w = top.next().expect("^J W has a longest element");
    debug_assert!(top.next().is_none());
    Ok(w)
}

/// Index tuples of `(^J W)^f`, embedding 0 most significant.
pub fn underline_indices(count: usize, f: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = count.checked_pow(f as u32).unwrap_or(usize::MAX);
    (0..total).map(move |k| underline_digits(k, count, f))
}

/// Decode one index of `(^J W)^f` into its tuple, embedding 0 most significant.
pub fn underline_digits(mut k: usize, count: usize, f: usize) -> Vec<usize> {
    let mut digits = vec![0; f];
    for slot in digits.iter_mut().rev() {
        *slot = k % count;
        k /= count;
    }
    digits
}
