//! Floating-point eigenstructure of a commuting semisimple family with
//! positive real spectra.
//!
//! Everything here only *proposes*: joint eigenblocks give the log-linear
//! system whose rounded solution seeds the exact candidate checks, and the
//! eigenvalue logs give search windows.  No verdict is taken on floats
//! alone.

use crate::exactnum::{IntMat, RatPoly};
use num_traits::ToPrimitive;

const NULL_TOL: f64 = 1e-7;

/// A common eigenspace of the family, carried as an orthonormal basis.
#[derive(Debug, Clone)]
pub(crate) struct JointBlock {
    pub cols: Vec<Vec<f64>>,
    /// `log lambda_i` of generator `i` on this block.
    pub log_eigs: Vec<f64>,
}

/// Outcome of the numeric log-linear proposer.
#[derive(Debug, Clone)]
pub(crate) enum Proposal {
    /// The system was unusable (singular basis or rank-deficient logs).
    Degenerate,
    /// Real solution of the log-linear system, to be rounded and checked.
    Solution(Vec<f64>),
}

#[derive(Debug, Clone)]
pub(crate) struct EigenData {
    pub blocks: Vec<JointBlock>,
    /// Smallest `|log lambda|` over all generators, eigenvalues `!= 1`.
    pub lambda_min_log: f64,
    /// Additive slack of the search-window formula, from the basis
    /// conditioning.
    pub c_spec: f64,
}

impl EigenData {
    pub fn build(gens: &[IntMat]) -> Option<EigenData> {
        let n = gens[0].rows();
        let gens_f: Vec<Vec<Vec<f64>>> = gens.iter().map(mat_to_f64).collect();
        // Exact characteristic polynomials, roots refined to f64.
        let mut eigenvalues: Vec<Vec<f64>> = Vec::new();
        for g in gens {
            let cp = RatPoly::from_bigint_coeffs(&g.char_poly().ok()?);
            let mut roots = cp.real_roots_f64();
            if roots.iter().any(|&r| r <= 0.0) {
                return None;
            }
            roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * b.abs().max(1.0));
            eigenvalues.push(roots);
        }
        // Split R^n into joint eigenblocks, one generator at a time.
        let mut blocks = vec![JointBlock {
            cols: (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
            log_eigs: vec![],
        }];
        for (gi, gf) in gens_f.iter().enumerate() {
            let mut next = Vec::new();
            for block in &blocks {
                let d = block.cols.len();
                // Restriction in the orthonormal basis of the block.
                let mut restr = vec![vec![0.0; d]; d];
                for (c, col) in block.cols.iter().enumerate() {
                    let image = mat_vec(gf, col);
                    for (r, row_col) in block.cols.iter().enumerate() {
                        restr[r][c] = dot(row_col, &image);
                    }
                }
                let mut consumed = 0;
                for &lam in &eigenvalues[gi] {
                    let mut shifted = restr.clone();
                    for (i, row) in shifted.iter_mut().enumerate() {
                        row[i] -= lam;
                    }
                    let null = nullspace(&shifted);
                    if null.is_empty() {
                        continue;
                    }
                    consumed += null.len();
                    let cols: Vec<Vec<f64>> = null
                        .iter()
                        .map(|coeffs| combine(&block.cols, coeffs))
                        .collect();
                    let cols = gram_schmidt(cols)?;
                    let mut log_eigs = block.log_eigs.clone();
                    log_eigs.push(lam.ln());
                    next.push(JointBlock { cols, log_eigs });
                }
                if consumed != d {
                    return None; // numerically inconclusive split
                }
            }
            blocks = next;
        }
        // Window constants.
        let mut lambda_min_log = f64::INFINITY;
        for evs in &eigenvalues {
            for &l in evs {
                let a = l.ln().abs();
                if a > 1e-9 && a < lambda_min_log {
                    lambda_min_log = a;
                }
            }
        }
        let basis: Vec<Vec<f64>> = blocks.iter().flat_map(|b| b.cols.clone()).collect();
        let cond = condition_estimate(&basis)?;
        let c_spec = 2.0 * cond.max(1.0).ln() + 16.0;
        Some(EigenData {
            blocks,
            lambda_min_log,
            c_spec,
        })
    }

    /// Norms of the components of `v` along each joint block.
    pub fn component_norms(&self, v: &[f64]) -> Option<Vec<f64>> {
        let cols: Vec<&Vec<f64>> = self.blocks.iter().flat_map(|b| b.cols.iter()).collect();
        let coeffs = solve_square(&cols, v)?;
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut at = 0;
        for b in &self.blocks {
            let d = b.cols.len();
            let comp = combine(&b.cols, &coeffs[at..at + d]);
            out.push(norm(&comp));
            at += d;
        }
        Some(out)
    }

    /// Least-squares solution of the log-linear system built from the
    /// blocks where both `u` and `w` have a visibly nonzero component.
    /// (A component can be legitimately tiny after contraction by a large
    /// twist, so visible zero-patterns are never used as a verdict, only to
    /// select usable rows.)
    pub fn propose(&self, u: &[f64], w: &[f64], k: usize) -> Proposal {
        let (Some(nu), Some(nw)) = (self.component_norms(u), self.component_norms(w)) else {
            return Proposal::Degenerate;
        };
        let scale_u = norm(u).max(1.0);
        let scale_w = norm(w).max(1.0);
        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let zu = nu[i] < NULL_TOL * scale_u;
            let zw = nw[i] < NULL_TOL * scale_w;
            if !zu && !zw {
                rows.push((b.log_eigs.clone(), nu[i].ln() - nw[i].ln()));
            }
        }
        if rows.is_empty() {
            return Proposal::Degenerate;
        }
        // Normal equations L^T L y = L^T d.
        let mut ata = vec![vec![0.0; k]; k];
        let mut atb = vec![0.0; k];
        for (row, rhs) in &rows {
            for i in 0..k {
                for j in 0..k {
                    ata[i][j] += row[i] * row[j];
                }
                atb[i] += row[i] * rhs;
            }
        }
        let cols: Vec<Vec<f64>> = (0..k)
            .map(|j| (0..k).map(|i| ata[i][j]).collect())
            .collect();
        let refs: Vec<&Vec<f64>> = cols.iter().collect();
        match solve_square(&refs, &atb) {
            Some(y) => Proposal::Solution(y),
            None => Proposal::Degenerate,
        }
    }

    /// Window bound for exhaustive twist scans:
    /// `ceil((log(1+|u|) + log(1+|w|) + c_spec) / lambda_min_log)`.
    pub fn window(&self, u_sup: f64, w_sup: f64) -> i64 {
        if !self.lambda_min_log.is_finite() {
            return 1;
        }
        let y = ((1.0 + u_sup).ln() + (1.0 + w_sup).ln() + self.c_spec) / self.lambda_min_log;
        y.ceil() as i64 + 2
    }
}

pub(crate) fn mat_to_f64(m: &IntMat) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).to_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn combine(cols: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (col, &c) in cols.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(col) {
            *o += c * x;
        }
    }
    out
}

/// Basis of the (numeric) kernel, as coefficient vectors.
fn nullspace(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = NULL_TOL * scale;
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let (best, best_val) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= tol {
            continue;
        }
        m.swap(r, best);
        let p = m[r][c];
        for i in 0..rows {
            if i != r && m[i][c].abs() > 0.0 {
                let f = m[i][c] / p;
                for j in 0..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0.0; cols];
            v[fc] = 1.0;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[ri][fc] / m[ri][pc];
            }
            v
        })
        .collect()
}

/// Orthonormalize; `None` when the vectors degenerate.
fn gram_schmidt(mut cols: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    for i in 0..cols.len() {
        for j in 0..i {
            let proj = dot(&cols[i], &cols[j]);
            let prev = cols[j].clone();
            for (x, p) in cols[i].iter_mut().zip(&prev) {
                *x -= proj * p;
            }
        }
        let n = norm(&cols[i]);
        if n < 1e-9 {
            return None;
        }
        for x in cols[i].iter_mut() {
            *x /= n;
        }
    }
    Some(cols)
}

/// Solve the square system with the given columns; `None` when singular.
fn solve_square(cols: &[&Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    if cols.len() != n {
        return None;
    }
    let mut aug: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    for c in 0..n {
        let (best, best_val) = (c..n)
            .map(|i| (i, aug[i][c].abs()))
            .fold((c, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val < 1e-12 {
            return None;
        }
        aug.swap(c, best);
        for i in 0..n {
            if i != c {
                let f = aug[i][c] / aug[c][c];
                for j in c..=n {
                    aug[i][j] -= f * aug[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| aug[i][n] / aug[i][i]).collect())
}

fn condition_estimate(basis: &[Vec<f64>]) -> Option<f64> {
    let n = basis.len();
    let refs: Vec<&Vec<f64>> = basis.iter().collect();
    let mut inv_norm = 0.0f64;
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve_square(&refs, &e)?;
        inv_norm = inv_norm.max(col.iter().map(|x| x.abs()).sum());
    }
    let fwd_norm = basis
        .iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    Some(fwd_norm * inv_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::IntMat;

    fn sl2() -> IntMat {
        IntMat::from_rows_i64(&[vec![2, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn builds_blocks_for_hyperbolic_sl2() {
        let data = EigenData::build(&[sl2()]).unwrap();
        assert_eq!(data.blocks.len(), 2);
        let lam = (3.0 + 5f64.sqrt()) / 2.0;
        let mut logs: Vec<f64> = data.blocks.iter().map(|b| b.log_eigs[0]).collect();
        logs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((logs[1] - lam.ln()).abs() < 1e-9);
        assert!((logs[0] + lam.ln()).abs() < 1e-9);
        assert!((data.lambda_min_log - lam.ln()).abs() < 1e-9);
    }

    #[test]
    fn builds_joint_blocks_for_commuting_pair() {
        // A (+) I and I (+) A commute; four joint blocks.
        let a = sl2();
        let mut g1 = IntMat::identity(4);
        let mut g2 = IntMat::identity(4);
        for i in 0..2 {
            for j in 0..2 {
                g1.set(i, j, a.get(i, j).clone());
                g2.set(2 + i, 2 + j, a.get(i, j).clone());
            }
        }
        let data = EigenData::build(&[g1, g2]).unwrap();
        assert_eq!(data.blocks.len(), 4);
        for b in &data.blocks {
            assert_eq!(b.log_eigs.len(), 2);
        }
    }

    #[test]
    fn proposes_the_right_twist() {
        let spec = [sl2()];
        let data = EigenData::build(&spec).unwrap();
        // u = phi^3 w for w = (1, 0)
        let phi = mat_to_f64(&spec[0]);
        let w = vec![1.0, 0.0];
        let mut u = w.clone();
        for _ in 0..3 {
            u = mat_vec(&phi, &u);
        }
        match data.propose(&u, &w, 1) {
            Proposal::Solution(y) => assert!((y[0] - 3.0).abs() < 0.25, "proposed {y:?}"),
            other => panic!("expected a solution, got {other:?}"),
        }
    }
}
