//! Hermite and Smith normal forms of small integer matrices.

pub type Row = Vec<i64>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is upper triangular with positive pivots; entries above a pivot
/// lie in `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut m: Vec<Row> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        // Euclid down the column until one non-zero entry remains
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..m.len() {
                if m[i][col] != 0 && best.map_or(true, |b| m[i][col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..m.len() {
                let q = m[i][col].div_euclid(m[pivot_row][col]);
                if q != 0 {
                    let (top, rest) = m.split_at_mut(i);
                    for (x, &y) in rest[0].iter_mut().zip(&top[pivot_row]) {
                        *x -= q * y;
                    }
                }
                if m[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            m[pivot_row].iter_mut().for_each(|x| *x = -*x);
        }
        let p = m[pivot_row][col];
        for i in 0..pivot_row {
            let q = m[i][col].div_euclid(p);
            if q != 0 {
                let (top, rest) = m.split_at_mut(pivot_row);
                for (x, &y) in top[i].iter_mut().zip(&rest[0]) {
                    *x -= q * y;
                }
            }
        }
        pivot_row += 1;
    }
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Smith form of an `m x k` matrix: returns the diagonal (length `min(m, k)`,
/// non-negative, each dividing the next) and a unimodular `k x k` matrix `V`
/// such that `U * A * V = diag` for some unimodular `U`.
pub fn smith_normal_form(a: &[Row], k: usize) -> (Vec<i64>, Vec<Row>) {
    let mut m: Vec<Row> = a.to_vec();
    let rows = m.len();
    let mut v: Vec<Row> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    let col_op = |m: &mut Vec<Row>, v: &mut Vec<Row>, dst: usize, src: usize, q: i64| {
        // column dst -= q * column src
        for r in m.iter_mut() {
            r[dst] -= q * r[src];
        }
        for r in v.iter_mut() {
            r[dst] -= q * r[src];
        }
    };
    let col_swap = |m: &mut Vec<Row>, v: &mut Vec<Row>, a: usize, b: usize| {
        for r in m.iter_mut() {
            r.swap(a, b);
        }
        for r in v.iter_mut() {
            r.swap(a, b);
        }
    };
    let n = rows.min(k);
    for t in 0..n {
        loop {
            // smallest non-zero entry of the trailing block
            let mut best = None;
            for i in t..rows {
                for j in t..k {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj): (usize, usize)| {
                            m[i][j].abs() < m[bi][bj].abs()
                        })
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (finish_diag(&m, n), v);
            };
            m.swap(t, bi);
            col_swap(&mut m, &mut v, t, bj);
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    let (top, rest) = m.split_at_mut(i);
                    for (x, &y) in rest[0].iter_mut().zip(&top[t]) {
                        *x -= q * y;
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..k {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut m, &mut v, j, t, q);
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..k).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let (top, rest) = m.split_at_mut(i);
                    for (x, &y) in top[t].iter_mut().zip(&rest[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            m[t][t] = -m[t][t];
        }
    }
    (finish_diag(&m, n), v)
}

fn finish_diag(m: &[Row], n: usize) -> Vec<i64> {
    (0..n).map(|i| m[i][i].abs()).collect()
}

/// Inverse of a unimodular integer matrix (Gauss-Jordan with Euclidean pivoting).
pub fn unimodular_inverse(v: &[Row]) -> Vec<Row> {
    let k = v.len();
    let mut a: Vec<Vec<i128>> = v
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut inv: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    for c in 0..k {
        loop {
            let b = (c..k)
                .filter(|&i| a[i][c] != 0)
                .min_by_key(|&i| a[i][c].abs())
                .expect("matrix is unimodular");
            a.swap(c, b);
            inv.swap(c, b);
            for i in c + 1..k {
                let q = a[i][c].div_euclid(a[c][c]);
                if q != 0 {
                    for j in 0..k {
                        let (ac, ic) = (a[c][j], inv[c][j]);
                        a[i][j] -= q * ac;
                        inv[i][j] -= q * ic;
                    }
                }
            }
            if (c + 1..k).all(|i| a[i][c] == 0) {
                break;
            }
        }
        if a[c][c] < 0 {
            a[c].iter_mut().for_each(|x| *x = -*x);
            inv[c].iter_mut().for_each(|x| *x = -*x);
        }
        assert_eq!(a[c][c], 1, "matrix is not unimodular");
        for i in 0..k {
            if i != c && a[i][c] != 0 {
                let q = a[i][c];
                for j in 0..k {
                    let (ac, ic) = (a[c][j], inv[c][j]);
                    a[i][j] -= q * ac;
                    inv[i][j] -= q * ic;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

pub fn mat_mul(a: &[Row], b: &[Row]) -> Vec<Row> {
    let k = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..k)
                .map(|j| r.iter().zip(b).map(|(&x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}
