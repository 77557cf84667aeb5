//! Integer row reductions used by the group code: Hermite normal form and
//! Smith invariant factors over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type IntRow = Vec<BigInt>;

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows only, in echelon
/// order, with positive pivots and every entry above a pivot reduced into
/// `[0, pivot)`.
pub(crate) fn hermite_rows(mut rows: Vec<IntRow>, ncols: usize) -> Vec<IntRow> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        // Euclid on the column until a single nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for i in top..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                match best {
                    Some(b) if rows[b][col].abs() <= rows[i][col].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(piv) = best else { break };
            rows.swap(top, piv);
            let mut done = true;
            for i in (top + 1)..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                sub_multiple(&mut rows[i], &pivot_row, &q);
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[top][col].is_zero() {
            continue;
        }
        if rows[top][col].is_negative() {
            for x in rows[top].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = rows[top].clone();
        for i in 0..top {
            let q = rows[i][col].div_floor(&pivot_row[col]);
            sub_multiple(&mut rows[i], &pivot_row, &q);
        }
        top += 1;
    }
    rows.truncate(top);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix.
pub(crate) fn smith_invariants(mut m: Vec<IntRow>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if m[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in (t + 1)..nrows {
            let q = m[i][t].div_floor(&m[t][t]);
            let pivot_row = m[t].clone();
            sub_multiple(&mut m[i], &pivot_row, &q);
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        for j in (t + 1)..ncols {
            let q = m[t][j].div_floor(&m[t][t]);
            if q.is_zero() && m[t][j].is_zero() {
                continue;
            }
            for row in m.iter_mut() {
                let v = row[t].clone();
                row[j] -= &q * v;
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the remaining block by the pivot
        let mut fixed = true;
        'outer: for i in (t + 1)..nrows {
            for j in (t + 1)..ncols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    let row_i = m[i].clone();
                    for (a, b) in m[t].iter_mut().zip(row_i) {
                        *a += b;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

pub(crate) fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v))
}
