//! Data attached to the standard Levi subgroup `M_J` and its parabolic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlin::{self, dot};
use crate::root_datum::RootDatum;
use crate::weights::{phi_j_plus, CocharBasis, UnderlineWeight};
use crate::weyl::validate_subset;

#[derive(Debug, Clone, Serialize)]
pub struct LeviDatum {
    /// 0-based simple-root indices, sorted.
    pub j: Vec<usize>,
    pub phi_j_plus: Vec<usize>,
    /// `2 rho_M`.
    pub two_rho_m: Vec<i64>,
    pub dim_n_alg: usize,
    pub dim_n0: usize,
    pub f: usize,
    pub central_basis: CocharBasis,
}

/// Tag naming the cocharacter basis of `C_M`; `J = ∅` gives the torus itself.
pub fn basis_tag(j: &[usize]) -> String {
    if j.is_empty() {
        "T".to_string()
    } else {
        let idx: Vec<String> = j.iter().map(|i| (i + 1).to_string()).collect();
        format!("C_M{{{}}}", idx.join(","))
    }
}

/// Saturated lattice `{xi : <alpha, xi> = 0 for alpha in J}` in Hermite form.
pub fn central_basis(datum: &RootDatum, j: &[usize]) -> CocharBasis {
    let rows: Vec<Vec<i64>> = j.iter().map(|&i| datum.simple_roots[i].clone()).collect();
    let vectors = if rows.is_empty() {
        intlin::identity(datum.lattice_rank)
    } else {
        intlin::kernel_basis(&rows, datum.lattice_rank)
    };
    CocharBasis {
        tag: basis_tag(j),
        vectors,
    }
}

fn normalize(datum: &RootDatum, j: &[usize]) -> Result<Vec<usize>> {
    validate_subset(datum, j)?;
    let mut j = j.to_vec();
    j.sort_unstable();
    j.dedup();
    Ok(j)
}

pub fn build_levi(datum: &RootDatum, j: &[usize], f: usize) -> Result<LeviDatum> {
    let j = normalize(datum, j)?;
    let phi = phi_j_plus(datum, &j);
    let mut two_rho_m = vec![0; datum.lattice_rank];
    for &idx in &phi {
        for (x, y) in two_rho_m.iter_mut().zip(&datum.roots()[idx].vector) {
            *x += y;
        }
    }
    let dim_n_alg = datum.roots().len() - phi.len();
    Ok(LeviDatum {
        central_basis: central_basis(datum, &j),
        j,
        phi_j_plus: phi,
        two_rho_m,
        dim_n_alg,
        dim_n0: f * dim_n_alg,
        f,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentXi {
    pub component: usize,
    /// The whole component lies in `J`; no `xi` exists and it is excluded from `h_M`.
    pub inside_j: bool,
    pub xi: Option<Vec<i64>>,
    pub pairing_with_highest: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiData {
    pub components: Vec<ComponentXi>,
    pub h_m: i64,
}

/// Minimizers `xi_j` and `h_M`, searching every admissible objective value up to
/// the value of a known feasible point.
pub fn xi_and_hm(datum: &RootDatum, j: &[usize]) -> Result<XiData> {
    xi_and_hm_bounded(datum, j, None)
}

/// As [`xi_and_hm`], but give up with `SearchBoxExhausted` once the objective
/// exceeds `limit` without a feasible point.
pub fn xi_and_hm_bounded(datum: &RootDatum, j: &[usize], limit: Option<i64>) -> Result<XiData> {
    let j = normalize(datum, j)?;
    let n = datum.rank();
    let d = datum.lattice_rank;
    let m = &datum.simple_roots;
    let smith = intlin::smith(m);
    let exponent = *smith.invariants.last().unwrap_or(&1);
    let kernel = intlin::kernel_basis(m, d);
    let kernel_right = intlin::hermite_rows_from_right(&kernel);

    let mut components = Vec::new();
    let mut h_m = 0;
    for (c, comp) in datum.components.iter().enumerate() {
        let free: Vec<usize> = comp.iter().copied().filter(|i| !j.contains(i)).collect();
        if free.is_empty() {
            components.push(ComponentXi {
                component: c,
                inside_j: true,
                xi: None,
                pairing_with_highest: None,
            });
            continue;
        }
        let highest = &datum.roots()[datum.positive_roots().highest[c]];
        let weights: Vec<i64> = free.iter().map(|&i| highest.coords[i]).collect();
        let floor: i64 = weights.iter().sum();
        let feasible_value = exponent * floor;
        let top = limit.map_or(feasible_value, |l| l.min(feasible_value));

        let mut found: Option<(i64, Vec<i64>)> = None;
        for value in floor..=top {
            let mut best: Option<Vec<i64>> = None;
            for_each_composition(&weights, value, &mut |cs| {
                let mut target = vec![0; n];
                for (&i, &ci) in free.iter().zip(cs) {
                    target[i] = ci;
                }
                if let Some(xi) = intlin::solve(m, &target, d) {
                    let xi = intlin::reduce_from_right(&xi, &kernel_right);
                    if best.as_ref().is_none_or(|b| xi < *b) {
                        best = Some(xi);
                    }
                }
            });
            if let Some(xi) = best {
                found = Some((value, xi));
                break;
            }
        }
        let Some((value, xi)) = found else {
            return Err(Error::SearchBoxExhausted { radius: top });
        };
        debug_assert_eq!(dot(&highest.vector, &xi), value);
        h_m = h_m.max(value);
        components.push(ComponentXi {
            component: c,
            inside_j: false,
            xi: Some(xi),
            pairing_with_highest: Some(value),
        });
    }
    Ok(XiData { components, h_m })
}

/// Calls `visit` on every `c` with all `c_i >= 1` and `sum w_i c_i = total`.
fn for_each_composition(weights: &[i64], total: i64, visit: &mut dyn FnMut(&[i64])) {
    fn rec(
        weights: &[i64],
        k: usize,
        remaining: i64,
        cur: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        if k == weights.len() {
            if remaining == 0 {
                visit(cur);
            }
            return;
        }
        let rest: i64 = weights[k + 1..].iter().sum();
        let mut c = 1;
        while weights[k] * c + rest <= remaining {
            cur.push(c);
            rec(weights, k + 1, remaining - weights[k] * c, cur, visit);
            cur.pop();
            c += 1;
        }
    }
    rec(weights, 0, total, &mut Vec::new(), visit);
}

/// No two roots of the nilradical add up to a root.
pub fn is_abelian_nilradical(datum: &RootDatum, j: &[usize]) -> bool {
    let phi = phi_j_plus(datum, j);
    let outside: Vec<usize> = (0..datum.roots().len())
        .filter(|i| !phi.contains(i))
        .collect();
    let rs = datum.roots();
    for (a, &x) in outside.iter().enumerate() {
        for &y in &outside[a..] {
            let sum: Vec<i64> = rs[x]
                .vector
                .iter()
                .zip(&rs[y].vector)
                .map(|(p, q)| p + q)
                .collect();
            if datum.root_index(&sum).is_some() {
                return false;
            }
        }
    }
    true
}

/// `2 rho - 2 rho_M` in every embedding.
pub fn delta_character(datum: &RootDatum, j: &[usize], f: usize) -> Result<UnderlineWeight> {
    let levi = build_levi(datum, j, f)?;
    let delta: Vec<i64> = datum
        .two_rho()
        .iter()
        .zip(&levi.two_rho_m)
        .map(|(a, b)| a - b)
        .collect();
    Ok(UnderlineWeight::repeat(&delta, f))
}
