//! Exact rational linear algebra on small integer matrices.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect()
}

/// Row-reduces in place and returns the pivot columns.
fn row_reduce(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != Q::from_integer(0)) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::from_integer(1) / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != Q::from_integer(0) {
                let f = m[i][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals of a list of integer vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    row_reduce(&mut to_q(vectors)).len()
}

pub fn rank_q(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    row_reduce(&mut vectors.to_vec()).len()
}

/// The vector `f` in the row space of `rows` with `rows_i · f = values_i`.
/// `rows` must be linearly independent.
pub fn dual_functional(rows: &[Vec<i64>], values: &[i64]) -> Vec<Q> {
    let k = rows.len();
    let dim = rows.first().map_or(0, Vec::len);
    let r = to_q(rows);
    // Gram system (R Rᵀ) y = values, then f = Rᵀ y
    let mut m: Vec<Vec<Q>> = (0..k)
        .map(|i| {
            let mut row: Vec<Q> = (0..k)
                .map(|j| (0..dim).map(|c| r[i][c] * r[j][c]).sum())
                .collect();
            row.push(Q::from_integer(values[i] as i128));
            row
        })
        .collect();
    row_reduce(&mut m);
    let y: Vec<Q> = m.iter().map(|row| row[k]).collect();
    (0..dim)
        .map(|c| (0..k).map(|i| y[i] * r[i][c]).sum())
        .collect()
}

pub fn linearly_independent(vectors: &[Vec<i64>]) -> bool {
    rank(vectors) == vectors.len()
}

/// Coefficients `x` with `sum x_i * basis_i == v`, or `None` when `v` is not
/// in the rational span. `basis` must be linearly independent.
pub fn coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<Q>> {
    let k = basis.len();
    let dim = v.len();
    // columns are the basis vectors, last column is v
    let mut m: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| Q::from_integer(b[i] as i128)).collect();
            row.push(Q::from_integer(v[i] as i128));
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Q::from_integer(0); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = m[row][k];
    }
    Some(x)
}

/// Integer coordinates of `v` in `basis`, if `v` lies in the lattice it spans.
pub fn lattice_coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    coordinates(basis, v)?
        .into_iter()
        .map(|q| q.is_integer().then(|| q.to_integer() as i64))
        .collect()
}

/// Whether `u = t * v` for some rational `t > 0`.
pub fn positive_multiple(u: &[i64], v: &[i64]) -> bool {
    if u.len() != v.len() {
        return false;
    }
    let mut ratio: Option<Q> = None;
    for (&a, &b) in u.iter().zip(v) {
        match (a == 0, b == 0) {
            (true, true) => continue,
            (true, false) | (false, true) => return false,
            (false, false) => {
                let q = Q::new(a as i128, b as i128);
                if q <= Q::from_integer(0) || ratio.is_some_and(|r| r != q) {
                    return false;
                }
                ratio = Some(q);
            }
        }
    }
    ratio.is_some()
}
