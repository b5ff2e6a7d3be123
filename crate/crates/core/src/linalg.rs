//! Small direct solvers: tridiagonal (Thomas) and dense LU with partial pivoting.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tridiagonal matrix stored by diagonals. `lower[i]` couples row `i + 1` to
/// column `i`; `upper[i]` couples row `i` to column `i + 1`.
#[derive(Debug, Clone)]
pub struct Tridiagonal<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn zeros(n: usize) -> Self {
        let off = n.saturating_sub(1);
        Self {
            lower: vec![T::zero(); off],
            diag: vec![T::zero(); n],
            upper: vec![T::zero(); off],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        let mut y: Vec<T> = (0..n).map(|i| self.diag[i] * x[i]).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] = y[i] + self.upper[i] * x[i + 1];
            y[i + 1] = y[i + 1] + self.lower[i] * x[i];
        }
        y
    }

    /// Solves `A x = rhs` by the Thomas algorithm. No pivoting: the matrices
    /// assembled here are symmetric positive definite or diagonally dominant.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::invalid(format!(
                "tridiagonal solve: rhs has {} entries, matrix has {n} rows",
                rhs.len()
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let mut pivot = self.diag[0];
        check_pivot(pivot, 0)?;
        if n > 1 {
            c[0] = self.upper[0] / pivot;
        }
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i - 1] * c[i - 1];
            check_pivot(pivot, i)?;
            if i + 1 < n {
                c[i] = self.upper[i] / pivot;
            }
            d[i] = (rhs[i] - self.lower[i - 1] * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] = d[i] - c[i] * d[i + 1];
        }
        Ok(d)
    }
}

fn check_pivot<T: Real>(pivot: T, row: usize) -> Result<()> {
    if pivot == T::zero() || !pivot.is_finite() {
        Err(Error::numerical(format!(
            "singular tridiagonal system (pivot {pivot} in row {row})"
        )))
    } else {
        Ok(())
    }
}

/// Dense row-major LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    pub fn factor(n: usize, mut a: Vec<T>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::invalid("dense LU: matrix is not n x n"));
        }
        let scale = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tiny = scale * T::epsilon() * T::from_usize_lossy(n.max(1));
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[i * n + k].abs()))
                    .fold(
                        (k, T::zero()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax <= tiny || !pmax.is_finite() {
                return Err(Error::numerical(format!(
                    "singular dense system (column {k}, pivot {pmax})"
                )));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let akk = a[k * n + k];
            for i in k + 1..n {
                let l = a[i * n + k] / akk;
                a[i * n + k] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        a[i * n + j] = a[i * n + j] - l * a[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_matches_hand_solution() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] -> x = [1 1 1]
        let mut a = Tridiagonal::<f64>::zeros(3);
        a.diag = vec![2.0; 3];
        a.lower = vec![-1.0; 2];
        a.upper = vec![-1.0; 2];
        let x = a.solve(&[1.0, 0.0, 1.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn thomas_reports_zero_pivot() {
        let a = Tridiagonal::<f64>::zeros(2);
        assert!(matches!(a.solve(&[1.0, 1.0]), Err(Error::Numerical(_))));
    }

    #[test]
    fn dense_lu_pivots() {
        // needs a row swap: [0 1; 1 0]
        let lu = DenseLu::factor(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(lu.solve(&[3.0, 5.0]), vec![5.0, 3.0]);
        assert!(DenseLu::factor(2, vec![1.0, 2.0, 2.0, 4.0]).is_err());
    }
}
