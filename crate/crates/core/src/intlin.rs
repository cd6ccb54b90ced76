//! Exact integer linear algebra on small dense matrices.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Everything here is sized for
//! root-datum work (dimension at most a few dozen), so the algorithms are the
//! textbook elimination procedures without any attention to coefficient growth
//! beyond overflow checks in debug builds.

pub type IMatrix = Vec<Vec<i64>>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn identity(n: usize) -> IMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> IMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|r| r[j]).collect())
        .collect()
}

/// Extended gcd: returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Smith normal form `U * M * V = D` with `D` diagonal, nonnegative, and
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Nonzero invariant factors, in order; `len()` is the rank.
    pub invariants: Vec<i64>,
    pub left: IMatrix,
    pub right: IMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

pub fn smith(m: &[Vec<i64>]) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: IMatrix = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            // Clear column t.
            for i in (t + 1)..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    row_axpy(&mut a, i, t, -q);
                    row_axpy(&mut u, i, t, -q);
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        u.swap(t, i);
                        done = false;
                    }
                }
            }
            // Clear row t.
            for j in (t + 1)..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    col_axpy(&mut a, j, t, -q);
                    col_axpy(&mut v, j, t, -q);
                    if a[t][j] != 0 {
                        col_swap(&mut a, t, j);
                        col_swap(&mut v, t, j);
                        done = false;
                    }
                }
            }
            if !done {
                continue;
            }
            // Divisibility: the pivot must divide the whole trailing block.
            let bad = ((t + 1)..rows)
                .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % a[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    row_axpy(&mut a, t, i, 1);
                    row_axpy(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let invariants = (0..t).map(|i| a[i][i]).collect();
    Smith {
        invariants,
        left: u,
        right: v,
    }
}

fn row_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    let src_row = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(src_row) {
        *x += k * y;
    }
}

fn col_axpy(m: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

fn col_swap(m: &mut [Vec<i64>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// The result has no zero rows, strictly increasing pivot columns, positive
/// pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(m: &[Vec<i64>]) -> IMatrix {
    let cols = m.first().map_or(0, Vec::len);
    let mut a: IMatrix = m
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Combine all rows below r into a gcd at (r, c).
        for i in (r + 1)..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(a[r][c], a[i][c]);
            let (p, q) = (a[r][c] / g, a[i][c] / g);
            let ri = a[r].clone();
            let ii = a[i].clone();
            for k in 0..cols {
                a[r][k] = x * ri[k] + y * ii[k];
                a[i][k] = -q * ri[k] + p * ii[k];
            }
        }
        if a[r][c] == 0 {
            // Look for a nonzero entry further down (all of them were folded in).
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_euclid(a[r][c]);
            row_axpy(&mut a, i, r, -q);
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|&x| x != 0));
    a
}

/// Hermite form with pivots taken from the last column leftwards; used to pick
/// canonical coset representatives that keep trailing coordinates small.
pub fn hermite_rows_from_right(m: &[Vec<i64>]) -> IMatrix {
    let rev: IMatrix = m
        .iter()
        .map(|r| r.iter().rev().copied().collect())
        .collect();
    hermite_rows(&rev)
        .into_iter()
        .map(|r| r.into_iter().rev().collect())
        .collect()
}

/// Reduce `v` modulo the lattice whose right-Hermite basis is `basis`, so that
/// at each pivot column (scanned from the right) the entry lies in `[0, pivot)`.
pub fn reduce_from_right(v: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    let mut out = v.to_vec();
    for row in basis {
        let Some(pc) = row.iter().rposition(|&x| x != 0) else {
            continue;
        };
        let q = out[pc].div_euclid(row[pc]);
        for (o, b) in out.iter_mut().zip(row) {
            *o -= q * b;
        }
    }
    out
}

/// Saturated integer kernel `{x : M x = 0}` of `m` (columns = unknowns), as the
/// rows of its Hermite normal form.
pub fn kernel_basis(m: &[Vec<i64>], unknowns: usize) -> IMatrix {
    if m.is_empty() {
        return identity(unknowns);
    }
    let s = smith(m);
    let v = &s.right;
    let gens: IMatrix = (s.rank()..unknowns)
        .map(|j| v.iter().map(|row| row[j]).collect())
        .collect();
    hermite_rows(&gens)
}

/// One integer solution of `M x = c`, if any exists.
pub fn solve(m: &[Vec<i64>], c: &[i64], unknowns: usize) -> Option<Vec<i64>> {
    if m.is_empty() {
        return Some(vec![0; unknowns]);
    }
    let s = smith(m);
    let uc = mat_vec(&s.left, c);
    let mut y = vec![0i64; unknowns];
    for (i, &val) in uc.iter().enumerate() {
        if i < s.rank() {
            if val % s.invariants[i] != 0 {
                return None;
            }
            y[i] = val / s.invariants[i];
        } else if val != 0 {
            return None;
        }
    }
    Some(mat_vec(&s.right, &y))
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(sw) = ((k + 1)..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * a[n - 1][n - 1]) as i64
}
