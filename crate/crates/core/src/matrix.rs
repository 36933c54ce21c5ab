//! Exact integer matrix algebra: Hermite and Smith normal forms with
//! accumulated unimodular transforms, left kernels, rank and determinant.
//!
//! Matrices are plain `Vec<Vec<i64>>` in row-major order. All arithmetic is
//! carried out in `i128` with overflow checks, so every result is exact; an
//! intermediate value outside `i64` range on output is reported by panic
//! rather than silently wrapped.

const OVERFLOW: &str = "integer overflow in exact matrix arithmetic";

#[inline]
fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect(OVERFLOW)
}

#[inline]
fn ck_sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect(OVERFLOW)
}

#[inline]
fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect(OVERFLOW)
}

fn to_wide(a: &[Vec<i64>]) -> Vec<Vec<i128>> {
    a.iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect()
}

fn from_wide(a: &[Vec<i128>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            row.iter()
                .map(|&x| i64::try_from(x).expect(OVERFLOW))
                .collect()
        })
        .collect()
}

fn wide_identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// The `n` by `n` identity matrix.
pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn column_count(a: &[Vec<i64>]) -> usize {
    let cols = a.first().map_or(0, |row| row.len());
    assert!(
        a.iter().all(|row| row.len() == cols),
        "ragged matrix: all rows must have the same length"
    );
    cols
}

/// `row_i -= q * row_j` on a wide matrix.
fn row_sub(m: &mut [Vec<i128>], i: usize, j: usize, q: i128) {
    if q == 0 {
        return;
    }
    let rj = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(rj) {
        *x = ck_sub(*x, ck_mul(q, y));
    }
}

fn negate_row(m: &mut [Vec<i128>], i: usize) {
    for x in m[i].iter_mut() {
        *x = ck_sub(0, *x);
    }
}

/// `col_j -= q * col_t` on a wide matrix.
fn col_sub(m: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    if q == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[j] = ck_sub(row[j], ck_mul(q, row[t]));
    }
}

fn col_swap(m: &mut [Vec<i128>], j: usize, t: usize) {
    for row in m.iter_mut() {
        row.swap(j, t);
    }
}

/// Result of a row-style Hermite normal form computation.
#[derive(Debug, Clone)]
pub struct HermiteForm {
    /// The normal form. Nonzero rows come first, pivots are positive, and
    /// every entry above a pivot lies in `[0, pivot)`.
    pub h: Vec<Vec<i64>>,
    /// Unimodular matrix with `transform * input == h`.
    pub transform: Vec<Vec<i64>>,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
}

/// Row-style Hermite normal form with transform.
///
/// The returned form is the canonical one, so two generating sets span the
/// same row lattice exactly when their nonzero HNF rows coincide.
pub fn hnf(a: &[Vec<i64>]) -> HermiteForm {
    let rows = a.len();
    let cols = column_count(a);
    let mut h = to_wide(a);
    let mut u = wide_identity(rows);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        // Euclidean elimination below row r in this column.
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if h[i][col] != 0 && piv.is_none_or(|p| h[i][col].abs() < h[p][col].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut cleared = true;
            for i in r + 1..rows {
                if h[i][col] != 0 {
                    let q = h[i][col].div_euclid(h[r][col]);
                    row_sub(&mut h, i, r, q);
                    row_sub(&mut u, i, r, q);
                    if h[i][col] != 0 {
                        cleared = false;
                    }
                }
            }
            if cleared {
                break;
            }
        }
        if h[r][col] != 0 {
            if h[r][col] < 0 {
                negate_row(&mut h, r);
                negate_row(&mut u, r);
            }
            for i in 0..r {
                let q = h[i][col].div_euclid(h[r][col]);
                row_sub(&mut h, i, r, q);
                row_sub(&mut u, i, r, q);
            }
            r += 1;
        }
    }
    HermiteForm {
        h: from_wide(&h),
        transform: from_wide(&u),
        rank: r,
    }
}

/// Basis of the left kernel `{ x : x * a == 0 }`.
///
/// The rows returned form a basis of a saturated sublattice of the row space
/// (they extend to a basis of the ambient lattice).
pub fn left_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let form = hnf(a);
    form.transform[form.rank..].to_vec()
}

/// Rank of an integer matrix.
pub fn rank(a: &[Vec<i64>]) -> usize {
    hnf(a).rank
}

/// Result of a Smith normal form computation.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Diagonal entries, nonnegative with `diag[i]` dividing `diag[i + 1]`;
    /// the length is `min(rows, cols)` and trailing entries past the rank
    /// are zero.
    pub diag: Vec<i64>,
    /// Unimodular row transform.
    pub left: Vec<Vec<i64>>,
    /// Unimodular column transform: `left * input * right` is diagonal.
    pub right: Vec<Vec<i64>>,
    /// Inverse of `right`, accumulated alongside it.
    pub right_inv: Vec<Vec<i64>>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

/// Smith normal form with both transforms and the inverse of the column
/// transform.
///
/// Satisfies `left * a * right == diag` and `right * right_inv == identity`.
/// The inverse is accumulated exactly rather than recovered afterwards, so
/// it is available even for large transforms.
pub fn snf(a: &[Vec<i64>]) -> SmithForm {
    let rows = a.len();
    let cols = column_count(a);
    let k = rows.min(cols);
    let mut d = to_wide(a);
    let mut l = wide_identity(rows);
    let mut r = wide_identity(cols);
    let mut r_inv = wide_identity(cols);
    let mut t = 0;
    while t < k {
        let mut pivot = None;
        'search: for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0 {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        l.swap(t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut r, t, pj);
        r_inv.swap(t, pj);
        loop {
            // Clear the pivot column, restarting whenever a remainder
            // strictly smaller than the pivot shows up.
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let q = d[i][t].div_euclid(d[t][t]);
                    row_sub(&mut d, i, t, q);
                    row_sub(&mut l, i, t, q);
                    if d[i][t] != 0 {
                        d.swap(i, t);
                        l.swap(i, t);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Clear the pivot row; column operations mirror into the
            // accumulated right transform and, inverted, into right_inv.
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let q = d[t][j].div_euclid(d[t][t]);
                    col_sub(&mut d, j, t, q);
                    col_sub(&mut r, j, t, q);
                    row_sub(&mut r_inv, t, j, -q);
                    if d[t][j] != 0 {
                        col_swap(&mut d, j, t);
                        col_swap(&mut r, j, t);
                        r_inv.swap(j, t);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: the pivot must divide the remaining block.
            let mut bad_row = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if d[i][j].rem_euclid(d[t][t].abs()) != 0 {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    row_sub(&mut d, t, i, -1);
                    row_sub(&mut l, t, i, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut l, t);
        }
        t += 1;
    }
    let diag: Vec<i64> = (0..k)
        .map(|i| i64::try_from(d[i][i]).expect(OVERFLOW))
        .collect();
    // The column transform operations preserved row ops on r_inv as exact
    // inverses, so r * r_inv is the identity by construction.
    SmithForm {
        diag,
        left: from_wide(&l),
        right: from_wide(&r),
        right_inv: from_wide(&r_inv),
        rank: t,
    }
}

/// Matrix product of two integer matrices.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = column_count(a);
    assert_eq!(inner, b.len(), "dimension mismatch in matrix product");
    let cols = column_count(b);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc: i128 = 0;
                    for (k, &x) in row.iter().enumerate() {
                        acc = ck_add(acc, ck_mul(x as i128, b[k][j] as i128));
                    }
                    i64::try_from(acc).expect(OVERFLOW)
                })
                .collect()
        })
        .collect()
}

/// Image of a column vector under left multiplication: rows of `a` dotted
/// with `v`.
pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), v.len(), "dimension mismatch in matrix-vector product");
            let mut acc: i128 = 0;
            for (&x, &y) in row.iter().zip(v) {
                acc = ck_add(acc, ck_mul(x as i128, y as i128));
            }
            i64::try_from(acc).expect(OVERFLOW)
        })
        .collect()
}

/// Image of a row vector under right multiplication: `v * a`.
pub fn vec_mat(v: &[i64], a: &[Vec<i64>]) -> Vec<i64> {
    assert_eq!(v.len(), a.len(), "dimension mismatch in vector-matrix product");
    let cols = column_count(a);
    (0..cols)
        .map(|j| {
            let mut acc: i128 = 0;
            for (k, &x) in v.iter().enumerate() {
                acc = ck_add(acc, ck_mul(x as i128, a[k][j] as i128));
            }
            i64::try_from(acc).expect(OVERFLOW)
        })
        .collect()
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    assert_eq!(column_count(a), n, "determinant of a non-square matrix");
    if n == 0 {
        return 1;
    }
    let mut m = to_wide(a);
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ck_sub(ck_mul(m[i][j], m[k][k]), ck_mul(m[i][k], m[k][j]));
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    i64::try_from(ck_mul(sign, m[n - 1][n - 1])).expect(OVERFLOW)
}
