//! Small dense linear algebra: row-major matrices, LU determinants in log
//! form, one-sided Jacobi singular values and pivoted row selection.
//!
//! Sizes here are a few hundred at most, so everything is plain `O(n³)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::scalar::fmath;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:>12.5e} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nr * nc);
        for row in rows {
            assert_eq!(row.len(), nc, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: nr,
            cols: nc,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(fmath::abs(x)))
    }

    pub fn frobenius(&self) -> f64 {
        fmath::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)];
            }
        }
        m
    }

    /// Determinant via partial-pivoting LU.
    pub fn log_det(&self) -> LogDet {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = 1.0;
        let mut ln_abs = 0.0;
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pv) =
                (k..n)
                    .map(|r| (r, fmath::abs(a[(r, k)])))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pv == 0.0 {
                return LogDet {
                    sign: 0.0,
                    ln_abs: f64::NEG_INFINITY,
                    min_pivot: 0.0,
                };
            }
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            let piv = a[(k, k)];
            if piv < 0.0 {
                sign = -sign;
            }
            ln_abs += fmath::ln(fmath::abs(piv));
            min_pivot = min_pivot.min(fmath::abs(piv));
            for r in k + 1..n {
                let f = a[(r, k)] / piv;
                if f == 0.0 {
                    continue;
                }
                for c in k + 1..n {
                    let v = a[(k, c)];
                    a[(r, c)] -= f * v;
                }
            }
        }
        LogDet {
            sign,
            ln_abs,
            min_pivot: if n == 0 { 1.0 } else { min_pivot },
        }
    }

    pub fn det(&self) -> f64 {
        self.log_det().value()
    }

    /// Copy with every row scaled to unit max-norm, then every column.
    pub fn equilibrated(&self) -> Matrix {
        let mut m = self.clone();
        for r in 0..m.rows {
            let s = m.row(r).iter().fold(0.0, |a: f64, &x| a.max(fmath::abs(x)));
            if s > 0.0 {
                for c in 0..m.cols {
                    m[(r, c)] /= s;
                }
            }
        }
        for c in 0..m.cols {
            let s = (0..m.rows).fold(0.0, |a: f64, r| a.max(fmath::abs(m[(r, c)])));
            if s > 0.0 {
                for r in 0..m.rows {
                    m[(r, c)] /= s;
                }
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Solves the square system `self · x = b`.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        assert_eq!(n, b.len());
        let mut a = self.clone();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| {
                fmath::abs(a[(i, k)])
                    .partial_cmp(&fmath::abs(a[(j, k)]))
                    .unwrap_or(core::cmp::Ordering::Equal)
            })?;
            if a[(p, k)] == 0.0 {
                return None;
            }
            a.swap_rows(p, k);
            x.swap(p, k);
            for r in k + 1..n {
                let f = a[(r, k)] / a[(k, k)];
                for c in k..n {
                    let v = a[(k, c)];
                    a[(r, c)] -= f * v;
                }
                x[r] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|c| a[(k, c)] * x[c]).sum();
            x[k] = (x[k] - s) / a[(k, k)];
        }
        Some(x)
    }

    /// Singular values in decreasing order (one-sided Jacobi).
    pub fn singular_values(&self) -> Vec<f64> {
        // Work on the orientation with fewer columns.
        let a = if self.cols > self.rows {
            self.transpose()
        } else {
            self.clone()
        };
        let (m, n) = (a.rows, a.cols);
        let mut cols: Vec<Vec<f64>> = (0..n).map(|c| (0..m).map(|r| a[(r, c)]).collect()).collect();
        let eps = 1e-15;
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: f64 = cols[p].iter().map(|x| x * x).sum();
                    let beta: f64 = cols[q].iter().map(|x| x * x).sum();
                    let gamma: f64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x * y).sum();
                    if gamma == 0.0 || fmath::abs(gamma) <= eps * fmath::sqrt(alpha * beta) {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (fmath::abs(zeta) + fmath::sqrt(1.0 + zeta * zeta));
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / fmath::sqrt(1.0 + t * t);
                    let s = c * t;
                    let (lo, hi) = cols.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = c * xp - s * yq;
                        *y = s * xp + c * yq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols
            .iter()
            .map(|c| fmath::sqrt(c.iter().map(|x| x * x).sum()))
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
        sv
    }
}

/// Determinant stored as `sign · exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub sign: f64,
    pub ln_abs: f64,
    /// Smallest pivot magnitude met during elimination.
    pub min_pivot: f64,
}

impl LogDet {
    pub fn value(&self) -> f64 {
        self.sign * fmath::exp(self.ln_abs)
    }
}

/// Numerical rank decision from singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    /// Ratio between the smallest kept and the largest dropped singular
    /// value; infinite when nothing was dropped or nothing kept.
    pub gap: f64,
}

pub fn numerical_rank(singular_values: &[f64], rel_eps: f64) -> RankDecision {
    let smax = singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return RankDecision {
            rank: 0,
            gap: f64::INFINITY,
        };
    }
    let rank = singular_values.iter().filter(|&&s| s > rel_eps * smax).count();
    let gap = match (rank.checked_sub(1), singular_values.get(rank)) {
        (Some(k), Some(&dropped)) if dropped > 0.0 => singular_values[k] / dropped,
        _ => f64::INFINITY,
    };
    RankDecision { rank, gap }
}

/// How [`select_rows`] breaks ties between candidate pivots.
pub enum Pivoting<'a, R: Rng> {
    /// Always take the row with the largest residual.
    Greedy,
    /// Pick uniformly among rows whose residual is at least `ratio` times
    /// the largest one.
    Randomized { rng: &'a mut R, ratio: f64 },
}

/// Picks `count` rows of `block` that form a well-conditioned square minor,
/// by pivoted Gram–Schmidt on the unit-normalised rows.
///
/// `required` rows are taken first (in order) and `forbidden` rows are never
/// taken. Returns `None` when the rows cannot reach full column rank, judged
/// by a residual below `tol` (after normalisation).
pub fn select_rows<R: Rng>(
    block: &Matrix,
    count: usize,
    required: &[usize],
    forbidden: &[usize],
    tol: f64,
    mut pivoting: Pivoting<'_, R>,
) -> Option<Vec<usize>> {
    let k = block.cols();
    if count > block.rows() || count > k {
        return None;
    }
    if count == 0 {
        return Some(Vec::new());
    }
    let mut residual: Vec<Option<Vec<f64>>> = (0..block.rows())
        .map(|r| {
            if forbidden.contains(&r) {
                return None;
            }
            let row = block.row(r);
            let n = fmath::sqrt(row.iter().map(|x| x * x).sum());
            (n > 0.0).then(|| row.iter().map(|x| x / n).collect())
        })
        .collect();
    let mut chosen = Vec::with_capacity(count);
    let norm = |v: &[f64]| fmath::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    while chosen.len() < count {
        let pick = if let Some(&r) = required.get(chosen.len()) {
            residual[r].as_ref().map(|v| (r, norm(v)))?
        } else {
            let cands: Vec<(usize, f64)> = residual
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.as_ref().map(|v| (i, norm(v))))
                .collect();
            let best = cands.iter().fold(0.0f64, |m, c| m.max(c.1));
            match &mut pivoting {
                Pivoting::Greedy => *cands.iter().find(|c| c.1 == best)?,
                Pivoting::Randomized { rng, ratio } => {
                    let good: Vec<_> = cands.iter().filter(|c| c.1 >= *ratio * best).collect();
                    *good[rng.gen_range(0..good.len())]
                }
            }
        };
        let (r, n) = pick;
        if n <= tol {
            return None;
        }
        let q: Vec<f64> = residual[r].take()?.iter().map(|x| x / n).collect();
        chosen.push(r);
        for v in residual.iter_mut().flatten() {
            let d: f64 = v.iter().zip(&q).map(|(a, b)| a * b).sum();
            for (a, b) in v.iter_mut().zip(&q) {
                *a -= d * b;
            }
        }
    }
    Some(chosen)
}
