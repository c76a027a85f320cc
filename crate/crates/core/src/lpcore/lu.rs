//! Basis factorization for the revised simplex.
//!
//! `factor` eliminates column and row singletons first (the UPR bases are
//! dominated by logical columns and network-like structure, so this usually
//! consumes almost everything) and finishes the remaining nucleus with a dense
//! partial-pivoting LU. Basis changes between refactorizations are kept as
//! product-form eta columns.

const PIVOT_ABS_TOL: f64 = 1e-11;
const SINGLETON_REL_TOL: f64 = 1e-2;
const ETA_DROP_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
struct Step {
    row: usize,
    col: usize,
    pivot: f64,
    /// Row multipliers applied as `v[i] -= l * v[row]`.
    lower: Vec<(usize, f64)>,
    /// Entries of the pivot row in columns pivoted later.
    upper: Vec<(usize, f64)>,
}

#[derive(Debug, Clone)]
struct Eta {
    pos: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

/// Basis positions that could not be pivoted, each paired with a row that
/// was left uncovered. Replacing the basic column at `pos` with the logical of
/// `row` makes the basis nonsingular again.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Singular {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct LuFactors {
    m: usize,
    steps: Vec<Step>,
    etas: Vec<Eta>,
}

impl LuFactors {
    pub fn num_etas(&self) -> usize {
        self.etas.len()
    }

    /// Solves `B x = rhs`; `rhs` is indexed by row, the result by basis position.
    pub fn ftran(&self, rhs: &mut [f64]) -> Vec<f64> {
        debug_assert_eq!(rhs.len(), self.m);
        for step in &self.steps {
            let v = rhs[step.row];
            if v != 0.0 {
                for &(i, l) in &step.lower {
                    rhs[i] -= l * v;
                }
            }
        }
        let mut x = vec![0.0; self.m];
        for step in self.steps.iter().rev() {
            let mut s = rhs[step.row];
            for &(j, u) in &step.upper {
                s -= u * x[j];
            }
            x[step.col] = s / step.pivot;
        }
        for eta in &self.etas {
            let xp = x[eta.pos] / eta.pivot;
            x[eta.pos] = xp;
            if xp != 0.0 {
                for &(i, a) in &eta.entries {
                    x[i] -= a * xp;
                }
            }
        }
        x
    }

    /// Solves `B^T y = c`; `c` is indexed by basis position, the result by row.
    pub fn btran(&self, c: &mut [f64]) -> Vec<f64> {
        debug_assert_eq!(c.len(), self.m);
        for eta in self.etas.iter().rev() {
            let mut s = c[eta.pos];
            for &(i, a) in &eta.entries {
                s -= a * c[i];
            }
            c[eta.pos] = s / eta.pivot;
        }
        let mut w = vec![0.0; self.m];
        for step in &self.steps {
            let wr = c[step.col] / step.pivot;
            w[step.row] = wr;
            if wr != 0.0 {
                for &(j, u) in &step.upper {
                    c[j] -= u * wr;
                }
            }
        }
        for step in self.steps.iter().rev() {
            let mut s = w[step.row];
            for &(i, l) in &step.lower {
                s -= l * w[i];
            }
            w[step.row] = s;
        }
        w
    }

    /// Records the basis change that puts the column with FTRAN image `alpha`
    /// at position `pos`.
    pub fn push_eta(&mut self, pos: usize, alpha: &[f64]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, a)| i != pos && a.abs() > ETA_DROP_TOL)
            .map(|(i, &a)| (i, a))
            .collect();
        self.etas.push(Eta { pos, pivot: alpha[pos], entries });
    }
}

/// Factors the `m x m` basis whose column at position `k` is `columns[k]`
/// (sparse `(row, value)` pairs).
pub(crate) fn factor(m: usize, columns: &[Vec<(usize, f64)>]) -> Result<LuFactors, Singular> {
    assert_eq!(columns.len(), m);
    let mut row_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (k, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            if v != 0.0 {
                row_cols[r].push((k, v));
            }
        }
    }
    let mut row_active = vec![true; m];
    let mut col_active = vec![true; m];
    let mut row_count: Vec<usize> = row_cols.iter().map(Vec::len).collect();
    let mut col_count: Vec<usize> = columns.iter().map(|c| c.iter().filter(|e| e.1 != 0.0).count()).collect();

    let mut steps = Vec::with_capacity(m);
    let mut col_stack: Vec<usize> = (0..m).rev().filter(|&k| col_count[k] == 1).collect();
    let mut row_stack: Vec<usize> = (0..m).rev().filter(|&r| row_count[r] == 1).collect();

    loop {
        if let Some(k) = col_stack.pop() {
            if !col_active[k] || col_count[k] != 1 {
                continue;
            }
            let (r, piv) = match columns[k].iter().find(|&&(r, v)| row_active[r] && v != 0.0) {
                Some(&e) => e,
                None => continue,
            };
            if piv.abs() < PIVOT_ABS_TOL {
                continue;
            }
            let mut upper = Vec::new();
            for &(j, v) in &row_cols[r] {
                if j != k && col_active[j] {
                    upper.push((j, v));
                    col_count[j] -= 1;
                    if col_count[j] == 1 {
                        col_stack.push(j);
                    }
                }
            }
            row_active[r] = false;
            col_active[k] = false;
            steps.push(Step { row: r, col: k, pivot: piv, lower: Vec::new(), upper });
            continue;
        }
        if let Some(r) = row_stack.pop() {
            if !row_active[r] || row_count[r] != 1 {
                continue;
            }
            let (k, piv) = match row_cols[r].iter().find(|&&(k, _)| col_active[k]) {
                Some(&e) => e,
                None => continue,
            };
            let col_max = columns[k]
                .iter()
                .filter(|e| row_active[e.0])
                .map(|e| e.1.abs())
                .fold(0.0, f64::max);
            if piv.abs() < PIVOT_ABS_TOL || piv.abs() < SINGLETON_REL_TOL * col_max {
                continue;
            }
            let mut lower = Vec::new();
            for &(i, v) in &columns[k] {
                if i != r && row_active[i] && v != 0.0 {
                    lower.push((i, v / piv));
                    row_count[i] -= 1;
                    if row_count[i] == 1 {
                        row_stack.push(i);
                    }
                }
            }
            row_active[r] = false;
            col_active[k] = false;
            steps.push(Step { row: r, col: k, pivot: piv, lower, upper: Vec::new() });
            continue;
        }
        break;
    }

    let rows: Vec<usize> = (0..m).filter(|&r| row_active[r]).collect();
    let cols: Vec<usize> = (0..m).filter(|&k| col_active[k]).collect();
    debug_assert_eq!(rows.len(), cols.len());
    if !cols.is_empty() {
        let n = rows.len();
        let mut row_pos = vec![usize::MAX; m];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let mut dense = vec![vec![0.0; n]; n];
        for (c, &k) in cols.iter().enumerate() {
            for &(r, v) in &columns[k] {
                if row_active[r] {
                    dense[row_pos[r]][c] += v;
                }
            }
        }
        let mut row_done = vec![false; n];
        let mut col_done = vec![false; n];
        let mut dropped = Vec::new();
        for c in 0..n {
            let mut best = None;
            let mut best_abs = PIVOT_ABS_TOL;
            for i in 0..n {
                if !row_done[i] && dense[i][c].abs() > best_abs {
                    best_abs = dense[i][c].abs();
                    best = Some(i);
                }
            }
            let Some(p) = best else {
                dropped.push(cols[c]);
                continue;
            };
            let piv = dense[p][c];
            row_done[p] = true;
            col_done[c] = true;
            let mut upper = Vec::new();
            for c2 in 0..n {
                if !col_done[c2] && dense[p][c2] != 0.0 {
                    upper.push((cols[c2], dense[p][c2]));
                }
            }
            let mut lower = Vec::new();
            let pivot_row = dense[p].clone();
            for i in 0..n {
                if row_done[i] || dense[i][c] == 0.0 {
                    continue;
                }
                let l = dense[i][c] / piv;
                lower.push((rows[i], l));
                dense[i][c] = 0.0;
                for c2 in 0..n {
                    if !col_done[c2] && pivot_row[c2] != 0.0 {
                        dense[i][c2] -= l * pivot_row[c2];
                    }
                }
            }
            steps.push(Step { row: rows[p], col: cols[c], pivot: piv, lower, upper });
        }
        if !dropped.is_empty() {
            let free_rows = (0..n).filter(|&i| !row_done[i]).map(|i| rows[i]);
            return Err(Singular { pairs: dropped.into_iter().zip(free_rows).collect() });
        }
    }
    Ok(LuFactors { m, steps, etas: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(a: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
        let m = a.len();
        (0..m)
            .map(|k| (0..m).filter(|&r| a[r][k] != 0.0).map(|r| (r, a[r][k])).collect())
            .collect()
    }

    fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let m = a.len();
        (0..m).map(|i| (0..m).map(|j| a[j][i]).collect()).collect()
    }

    fn check_solves(a: &[Vec<f64>], lu: &LuFactors) {
        let m = a.len();
        let rhs: Vec<f64> = (0..m).map(|i| (i as f64 * 0.7).sin() + 1.5).collect();
        let x = lu.ftran(&mut rhs.clone());
        let back = matvec(a, &x);
        for i in 0..m {
            assert!((back[i] - rhs[i]).abs() < 1e-9, "ftran residual {}", back[i] - rhs[i]);
        }
        let y = lu.btran(&mut rhs.clone());
        let back = matvec(&transpose(a), &y);
        for i in 0..m {
            assert!((back[i] - rhs[i]).abs() < 1e-9, "btran residual {}", back[i] - rhs[i]);
        }
    }

    #[test]
    fn triangular_and_dense_mix() {
        let a = vec![
            vec![2.0, 0.0, 1.0, 0.0, 0.0],
            vec![1.0, 3.0, 0.0, 0.0, 1.0],
            vec![0.0, 1.0, 4.0, 2.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0, -1.0],
        ];
        let lu = factor(5, &dense_to_cols(&a)).unwrap();
        check_solves(&a, &lu);
    }

    #[test]
    fn negative_identity() {
        let m = 4;
        let a: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { -1.0 } else { 0.0 }).collect()).collect();
        let lu = factor(m, &dense_to_cols(&a)).unwrap();
        check_solves(&a, &lu);
    }

    #[test]
    fn eta_updates_track_column_replacement() {
        let mut a = vec![
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![3.0, 0.0, 1.0],
        ];
        let mut lu = factor(3, &dense_to_cols(&a)).unwrap();
        let new_col = [1.0, 1.0, 2.0];
        let alpha = lu.ftran(&mut new_col.to_vec());
        lu.push_eta(1, &alpha);
        for (r, row) in a.iter_mut().enumerate() {
            row[1] = new_col[r];
        }
        check_solves(&a, &lu);
    }

    #[test]
    fn singular_reports_replacement_pairs() {
        let a = vec![
            vec![1.0, 2.0, 0.0],
            vec![2.0, 4.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let err = factor(3, &dense_to_cols(&a)).unwrap_err();
        assert_eq!(err.pairs.len(), 1);
    }
}
