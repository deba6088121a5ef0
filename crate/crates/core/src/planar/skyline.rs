//! Envelope (skyline) Cholesky factorization for the banded SPD matrices of
//! row-major grid orderings.

/// Lower-triangular factor stored row by row: row `i` holds columns
/// `first[i]..=i` contiguously starting at `start[i]`.
pub(crate) struct SkylineCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NotPositiveDefinite {
    pub row: usize,
}

impl SkylineCholesky {
    /// Factors the symmetric matrix given by its lower triangle as
    /// `(row, col, value)` entries with `col <= row`; duplicates are summed.
    pub fn factor(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self, NotPositiveDefinite> {
        let mut first: Vec<usize> = (0..n).collect();
        for &(r, c, _) in entries {
            debug_assert!(c <= r && r < n);
            first[r] = first[r].min(c);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (i, &f) in first.iter().enumerate() {
            start.push(total);
            total += i - f + 1;
        }
        start.push(total);
        let mut values = vec![0.0; total];
        for &(r, c, v) in entries {
            values[start[r] + c - first[r]] += v;
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_i = &values[start[i] + lo - fi..start[i] + j - fi];
                let row_j = &values[start[j] + lo - fj..start[j] + j - fj];
                let dot: f64 = row_i.iter().zip(row_j).map(|(a, b)| a * b).sum();
                let diag = values[start[j + 1] - 1];
                let at = start[i] + j - fi;
                values[at] = (values[at] - dot) / diag;
            }
            let row = &values[start[i]..start[i + 1] - 1];
            let d = values[start[i + 1] - 1] - row.iter().map(|a| a * a).sum::<f64>();
            if !(d > 0.0) {
                return Err(NotPositiveDefinite { row: i });
            }
            values[start[i + 1] - 1] = d.sqrt();
        }
        Ok(SkylineCholesky { first, start, values })
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    /// Solves `L L^T x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1] - 1];
            let dot: f64 = row.iter().zip(&b[fi..i]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - dot) / self.values[self.start[i + 1] - 1];
        }
        for i in (0..n).rev() {
            b[i] /= self.values[self.start[i + 1] - 1];
            let xi = b[i];
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1] - 1];
            for (bj, a) in b[fi..i].iter_mut().zip(row) {
                *bj -= a * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_solve() {
        let n = 50;
        let mut entries = Vec::new();
        for i in 0..n {
            entries.push((i, i, 2.0));
            if i > 0 {
                entries.push((i, i - 1, -1.0));
            }
        }
        let chol = SkylineCholesky::factor(n, &entries).unwrap();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b: Vec<f64> = (0..n)
            .map(|i| {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                2.0 * x[i] - left - right
            })
            .collect();
        chol.solve(&mut b);
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-10);
        }
    }

    #[test]
    fn wide_envelope_matches_dense() {
        // 3x3 grid Laplacian plus identity, row-major: bandwidth 3.
        let n = 9;
        let mut dense = vec![vec![0.0; n]; n];
        for k in 0..n {
            dense[k][k] = 5.0;
            if k % 3 > 0 {
                dense[k][k - 1] = -1.0;
                dense[k - 1][k] = -1.0;
            }
            if k >= 3 {
                dense[k][k - 3] = -1.0;
                dense[k - 3][k] = -1.0;
            }
        }
        let entries: Vec<_> = (0..n)
            .flat_map(|r| (0..=r).map(move |c| (r, c)))
            .filter(|&(r, c)| dense[r][c] != 0.0)
            .map(|(r, c)| (r, c, dense[r][c]))
            .collect();
        let chol = SkylineCholesky::factor(n, &entries).unwrap();
        let mut b: Vec<f64> = (0..n).map(|i| i as f64 - 3.0).collect();
        let rhs = b.clone();
        chol.solve(&mut b);
        for r in 0..n {
            let ax: f64 = (0..n).map(|c| dense[r][c] * b[c]).sum();
            assert!((ax - rhs[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_rejected() {
        let entries = [(0, 0, 1.0), (1, 0, 2.0), (1, 1, 1.0)];
        assert_eq!(SkylineCholesky::factor(2, &entries).err(), Some(NotPositiveDefinite { row: 1 }));
    }
}
