//! Dense integer matrices and the Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: i64) {
        for j in 0..self.cols {
            let v = self[(source, j)];
            self[(target, j)] = checked_axpy(self[(target, j)], factor, v);
        }
    }

    /// `(row a, row b) <- op * (row a, row b)`.
    fn combine_rows(&mut self, a: usize, b: usize, op: [[i64; 2]; 2]) {
        for j in 0..self.cols {
            let (x, y) = (self[(a, j)], self[(b, j)]);
            self[(a, j)] = checked_axpy(checked_axpy(0, op[0][0], x), op[0][1], y);
            self[(b, j)] = checked_axpy(checked_axpy(0, op[1][0], x), op[1][1], y);
        }
    }

    /// `(col a, col b) <- (col a, col b) * op`.
    fn combine_cols(&mut self, a: usize, b: usize, op: [[i64; 2]; 2]) {
        for i in 0..self.rows {
            let (x, y) = (self[(i, a)], self[(i, b)]);
            self[(i, a)] = checked_axpy(checked_axpy(0, x, op[0][0]), y, op[1][0]);
            self[(i, b)] = checked_axpy(checked_axpy(0, x, op[0][1]), y, op[1][1]);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

/// `acc + a * b`, panicking on overflow in every build profile.
fn checked_axpy(acc: i64, a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .expect("integer overflow in matrix arithmetic")
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = checked_axpy(out[(i, j)], a, rhs[(k, j)]);
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_rows() {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:>4}")).collect();
            writeln!(f, "[{}]", cells.join(""))?;
        }
        Ok(())
    }
}

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `d`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.d.diagonal().into_iter().filter(|&x| x != 0).collect()
    }
}

/// Smith normal form by alternating row and column Hermite reductions.
///
/// Each Hermite pass reduces the entries beside a pivot modulo that pivot,
/// which keeps both the working matrix and the transforms small.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    loop {
        let rank = hermite_rows(&mut d, &mut u);
        shorten_kernel_rows(&mut u, rank);
        if is_monomial(&d) {
            break;
        }
        let mut dt = d.transpose();
        let mut vt = v.transpose();
        let rank = hermite_rows(&mut dt, &mut vt);
        shorten_kernel_rows(&mut vt, rank);
        d = dt.transpose();
        v = vt.transpose();
        if is_monomial(&d) {
            break;
        }
    }

    // move the nonzero entries onto the leading diagonal
    let mut rank = 0;
    while let Some((i, j)) = (rank..m)
        .flat_map(|i| (rank..n).map(move |j| (i, j)))
        .find(|&(i, j)| d[(i, j)] != 0)
    {
        d.swap_rows(rank, i);
        u.swap_rows(rank, i);
        d.swap_cols(rank, j);
        v.swap_cols(rank, j);
        rank += 1;
    }

    // (a, b) -> (gcd, lcm) until each entry divides the next
    for i in 0..rank {
        for j in i + 1..rank {
            let (x, y) = (d[(i, i)], d[(j, j)]);
            if y % x == 0 {
                continue;
            }
            let (g, s, t) = extended_gcd(x, y);
            u.combine_rows(i, j, [[s, t], [-y / g, x / g]]);
            v.combine_cols(i, j, [[1, -t * y / g], [1, s * x / g]]);
            d[(i, i)] = g;
            d[(j, j)] = x / g * y;
        }
    }
    for i in 0..rank {
        if d[(i, i)] < 0 {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    SmithForm { d, u, v }
}

/// `a / b` rounded to the nearest integer.
fn nearest_quotient(a: i64, b: i64) -> i64 {
    let q = a.div_euclid(b);
    if 2 * a.rem_euclid(b) > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

fn is_monomial(d: &IntMatrix) -> bool {
    let rows_ok = (0..d.rows()).all(|i| (0..d.cols()).filter(|&j| d[(i, j)] != 0).count() <= 1);
    let cols_ok = (0..d.cols()).all(|j| (0..d.rows()).filter(|&i| d[(i, j)] != 0).count() <= 1);
    rows_ok && cols_ok
}

/// `(g, s, t)` with `g = s a + t b = gcd(a, b) ≥ 0`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1, 0);
    let (mut t0, mut t1) = (0, 1);
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

/// Row echelon form with positive pivots and the entries above each pivot
/// reduced into `[0, pivot)`; every row operation is applied to `u` too.
/// Returns the number of nonzero rows.
fn hermite_rows(d: &mut IntMatrix, u: &mut IntMatrix) -> usize {
    let (m, n) = (d.rows(), d.cols());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid down the column with the smallest entry as pivot
        while let Some(p) = (r..m)
            .filter(|&i| d[(i, c)] != 0)
            .min_by_key(|&i| d[(i, c)].abs())
        {
            d.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                let q = nearest_quotient(d[(i, c)], d[(r, c)]);
                if q != 0 {
                    d.add_row(i, r, -q);
                    u.add_row(i, r, -q);
                }
                done &= d[(i, c)] == 0;
            }
            if done {
                break;
            }
        }
        let p = d[(r, c)];
        if p == 0 {
            continue;
        }
        if p < 0 {
            d.negate_row(r);
            u.negate_row(r);
        }
        let p = d[(r, c)];
        for k in 0..r {
            let q = d[(k, c)].div_euclid(p);
            if q != 0 {
                d.add_row(k, r, -q);
                u.add_row(k, r, -q);
            }
        }
        r += 1;
    }
    r
}

/// Rows `rank..` of `u` span the left kernel of the current matrix. They are
/// LLL-reduced among themselves and then used to size-reduce rows `..rank`;
/// neither step changes the product with the (zero) kernel rows.
fn shorten_kernel_rows(u: &mut IntMatrix, rank: usize) {
    let k = u.rows() - rank;
    if k == 0 {
        return;
    }
    let row =
        |u: &IntMatrix, i: usize| -> Vec<f64> { (0..u.cols()).map(|j| u[(i, j)] as f64).collect() };
    let dotf = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    // Gram-Schmidt of the kernel rows, recomputed after every change
    let gram_schmidt = |u: &IntMatrix| -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut star: Vec<Vec<f64>> = Vec::new();
        let mut mu = vec![vec![0.0; k]; k];
        for i in 0..k {
            let mut b = row(u, rank + i);
            for j in 0..i {
                let denom = dotf(&star[j], &star[j]);
                mu[i][j] = if denom == 0.0 {
                    0.0
                } else {
                    dotf(&row(u, rank + i), &star[j]) / denom
                };
                for (x, y) in b.iter_mut().zip(&star[j]) {
                    *x -= mu[i][j] * y;
                }
            }
            star.push(b);
        }
        (star, mu)
    };
    let mut i = 1;
    let mut guard = 0;
    while i < k && guard < 10_000 {
        guard += 1;
        for j in (0..i).rev() {
            let (_, mu) = gram_schmidt(u);
            let c = mu[i][j].round() as i64;
            if c != 0 {
                u.add_row(rank + i, rank + j, -c);
            }
        }
        let (star, mu) = gram_schmidt(u);
        let lhs = dotf(&star[i], &star[i]);
        let rhs = (0.75 - mu[i][i - 1] * mu[i][i - 1]) * dotf(&star[i - 1], &star[i - 1]);
        if lhs >= rhs {
            i += 1;
        } else {
            u.swap_rows(rank + i, rank + i - 1);
            i = (i - 1).max(1);
        }
    }
    let (star, _) = gram_schmidt(u);
    for t in 0..rank {
        for j in (0..k).rev() {
            let denom = dotf(&star[j], &star[j]);
            if denom == 0.0 {
                continue;
            }
            let c = (dotf(&row(u, t), &star[j]) / denom).round() as i64;
            if c != 0 {
                u.add_row(t, rank + j, -c);
            }
        }
    }
}
