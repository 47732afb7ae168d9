//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Everything here runs at desk scale (dimensions in the tens, entries
//! bounded by small group moduli), so plain `i64` arithmetic with classic
//! elimination is sufficient and keeps the normal forms exactly
//! reproducible.

use std::fmt;

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[to] += q * row[from]
    fn add_row(&mut self, from: usize, to: usize, q: i64) {
        for j in 0..self.cols {
            let v = self[(from, j)];
            self[(to, j)] += q * v;
        }
    }

    /// col[to] += q * col[from]
    fn add_col(&mut self, from: usize, to: usize, q: i64) {
        for i in 0..self.rows {
            let v = self[(i, from)];
            self[(i, to)] += q * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Row-style Hermite normal form of the lattice spanned by the rows.
///
/// Zero rows are dropped; pivots are positive, strictly right of earlier
/// pivots, and entries above a pivot are reduced into `[0, pivot)`. The
/// result is the unique canonical basis of the row lattice.
pub fn hnf(m: &Mat) -> Mat {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean elimination in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if a[(i, col)] != 0
                    && best.is_none_or(|b| a[(i, col)].abs() < a[(b, col)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            let p = a[(pivot_row, col)];
            let mut done = true;
            for i in pivot_row + 1..rows {
                let q = a[(i, col)].div_euclid(p);
                if q != 0 {
                    a.add_row(pivot_row, i, -q);
                }
                if a[(i, col)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(pivot_row, col)] == 0 {
            continue;
        }
        if a[(pivot_row, col)] < 0 {
            a.negate_row(pivot_row);
        }
        let p = a[(pivot_row, col)];
        for i in 0..pivot_row {
            let q = a[(i, col)].div_euclid(p);
            if q != 0 {
                a.add_row(pivot_row, i, -q);
            }
        }
        pivot_row += 1;
    }
    Mat::from_rows(&a.rows_vec()[..pivot_row])
}

/// Smith normal form `d = r * m * c` with unimodular transforms.
pub struct Snf {
    pub d: Mat,
    pub r: Mat,
    pub c: Mat,
    /// Inverse of `c`, maintained alongside it.
    pub c_inv: Mat,
}

impl Snf {
    /// Diagonal entries `d₁ | d₂ | …` (zeros included at the tail).
    pub fn diag(&self) -> Vec<i64> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d[(i, i)]).collect()
    }
}

/// Computes the Smith normal form: `D` diagonal with `dᵢ | dᵢ₊₁`,
/// `D = R·M·C`, `R` and `C` unimodular.
pub fn smith_normal_form(m: &Mat) -> Snf {
    let mut a = m.clone();
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut r = Mat::identity(rows);
    let mut c = Mat::identity(cols);
    let mut c_inv = Mat::identity(cols);

    // Column op bookkeeping: a ← a·E implies c ← c·E and c_inv ← E⁻¹·c_inv.
    let n = rows.min(cols);
    for t in 0..n {
        'pivot: loop {
            // Smallest |entry| in the remaining block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)] != 0
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break 'pivot };
            a.swap_rows(t, bi);
            r.swap_rows(t, bi);
            a.swap_cols(t, bj);
            c.swap_cols(t, bj);
            c_inv.swap_rows(t, bj);

            let p = a[(t, t)];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[(i, t)].div_euclid(p);
                if q != 0 {
                    a.add_row(t, i, -q);
                    r.add_row(t, i, -q);
                }
                if a[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[(t, j)].div_euclid(p);
                if q != 0 {
                    a.add_col(t, j, -q);
                    c.add_col(t, j, -q);
                    // a·E with E = I - q·e_{t,j}; E⁻¹·c_inv adds q·row j to row t.
                    c_inv.add_row(j, t, q);
                }
                if a[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Pivot must divide every remaining entry; if not, mix that row in.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if a[(i, j)] % a[(t, t)] != 0 {
                        a.add_row(i, t, 1);
                        r.add_row(i, t, 1);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            r.negate_row(t);
        }
    }
    Snf { d: a, r, c, c_inv }
}

/// Solves `x · upper = v` exactly, where `upper` is a square
/// upper-triangular row basis (as produced by [`hnf`] on a full-rank
/// lattice). Returns `None` when `v` is not in the row lattice.
pub fn solve_upper_triangular(upper: &Mat, v: &[i64]) -> Option<Vec<i64>> {
    let k = upper.nrows();
    debug_assert_eq!(upper.ncols(), k);
    debug_assert_eq!(v.len(), k);
    let mut x = vec![0i64; k];
    let mut rem: Vec<i64> = v.to_vec();
    for j in 0..k {
        let p = upper[(j, j)];
        debug_assert!(p > 0);
        if rem[j] % p != 0 {
            return None;
        }
        let q = rem[j] / p;
        x[j] = q;
        if q != 0 {
            for jj in j..k {
                rem[jj] -= q * upper[(j, jj)];
            }
        }
    }
    if rem.iter().all(|&z| z == 0) {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &Mat) {
        let s = smith_normal_form(m);
        assert_eq!(s.r.mul(m).mul(&s.c), s.d, "D = R·M·C must hold");
        assert_eq!(s.c.mul(&s.c_inv), Mat::identity(m.ncols()));
        let diag = s.diag();
        for w in diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0].max(1), 0, "divisibility chain {diag:?}");
            }
        }
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn snf_zero_and_identity() {
        check_snf(&Mat::zero(2, 3));
        let s = smith_normal_form(&Mat::zero(2, 3));
        assert_eq!(s.diag(), vec![0, 0]);
        check_snf(&Mat::identity(3));
        assert_eq!(smith_normal_form(&Mat::identity(3)).diag(), vec![1, 1, 1]);
    }

    #[test]
    fn snf_hand_example() {
        // [[2,4],[6,8]] has invariant factors 2, 4.
        let m = Mat::from_rows(&[vec![2, 4], vec![6, 8]]);
        check_snf(&m);
        assert_eq!(smith_normal_form(&m).diag(), vec![2, 4]);
    }

    #[test]
    fn snf_rect_examples() {
        for rows in [
            vec![vec![1, 1], vec![4, 0], vec![0, 4]],
            vec![vec![2, 0, 0], vec![0, 3, 0]],
            vec![vec![6, 4]],
            vec![vec![3, 3, 0, 0], vec![1, 0, 1, 3]],
        ] {
            check_snf(&Mat::from_rows(&rows));
        }
        let s = smith_normal_form(&Mat::from_rows(&[vec![1, 1], vec![4, 0], vec![0, 4]]));
        assert_eq!(s.diag(), vec![1, 4]);
    }

    #[test]
    fn hnf_canonical() {
        // Two generating sets of the same lattice in Z^2 (mod 4 relations).
        let a = Mat::from_rows(&[vec![1, 1], vec![2, 0], vec![4, 0], vec![0, 4]]);
        let b = Mat::from_rows(&[vec![3, 1], vec![2, 4], vec![4, 0], vec![0, 4]]);
        assert_eq!(hnf(&a), hnf(&b));
        let h = hnf(&a);
        assert_eq!(h.rows_vec(), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn hnf_drops_zero_rows_and_orders_pivots() {
        let m = Mat::from_rows(&[vec![0, 0, 0], vec![0, 5, 10], vec![0, 0, 7]]);
        let h = hnf(&m);
        assert_eq!(h.rows_vec(), vec![vec![0, 5, 3], vec![0, 0, 7]]);
    }

    #[test]
    fn solve_triangular_roundtrip() {
        let b = Mat::from_rows(&[vec![1, 1], vec![0, 2]]);
        let x = solve_upper_triangular(&b, &[3, 5]).unwrap();
        assert_eq!(x, vec![3, 1]);
        assert!(solve_upper_triangular(&b, &[0, 1]).is_none());
    }
}
