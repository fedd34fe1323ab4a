//! Exact Gaussian elimination over `Q(ζ_k)`.

use crate::cyclotomic::Cyclo;

/// Rank of a dense matrix given as rows. All entries must share a field.
pub fn rank(rows: &[Vec<Cyclo>]) -> usize {
    let mut m: Vec<Vec<Cyclo>> = rows.to_vec();
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..n_cols {
        let Some(pivot) = (r..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][col].inv().expect("pivot is nonzero");
        for i in (r + 1)..n_rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] * &inv;
            for j in col..n_cols {
                let t = &factor * &m[r][j];
                m[i][j] -= &t;
            }
        }
        r += 1;
        if r == n_rows {
            break;
        }
    }
    r
}

/// Rank of a 0/1 (or small integer) matrix over `Q`.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    let q = crate::cyclotomic::CyclotomicField::rationals();
    let m: Vec<Vec<Cyclo>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| q.from_int(x)).collect())
        .collect();
    rank(&m)
}
