//! Cyclic Jacobi eigenvalue solver for small dense symmetric matrices.

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Dense square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Ok(Self { dim, data: rows.iter().flatten().copied().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).take(self.dim).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.frobenius().max(f64::MIN_POSITIVE);
        (0..self.dim).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol * scale))
    }

    pub fn negated(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| -x).collect() }
    }
}

/// All eigenvalues of a symmetric matrix, in ascending order.
///
/// Rotations sweep the strict upper triangle in row order until the
/// off-diagonal Frobenius norm drops below `1e-14` of the full norm.
pub fn jacobi_eigen(matrix: &SymMatrix) -> Result<Vec<f64>> {
    let n = matrix.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!("dimension {n} above {MAX_DIM}")));
    }
    if matrix.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    if !matrix.is_symmetric(1e-12) {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let mut a = matrix.clone();
    // Symmetrize exactly so rotations act on a truly symmetric array.
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let target = 1e-14 * a.frobenius();
    let mut sweeps = 0;
    while a.off_diagonal_norm() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericFailure(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

fn rotate(a: &mut SymMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
}

/// Largest eigenvalue.
pub fn max_eigenvalue(matrix: &SymMatrix) -> Result<f64> {
    jacobi_eigen(matrix).and_then(|e| {
        e.last().copied().ok_or_else(|| Error::InvalidArgument("empty matrix".into()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let id = SymMatrix::from_fn(3, |i, j| if i == j { 1.0 } else { 0.0 });
        assert_eq!(jacobi_eigen(&id).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = SymMatrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(max_eigenvalue(&d).unwrap(), 2.0);
        let one = SymMatrix::from_rows(&[vec![-0.75]]).unwrap();
        assert_eq!(max_eigenvalue(&one).unwrap(), -0.75);
    }

    #[test]
    fn two_by_two() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = jacobi_eigen(&m).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(jacobi_eigen(&m), Err(Error::InvalidArgument(_))));
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn negation_flips_spectrum() {
        let m = SymMatrix::from_fn(5, |i, j| 1.0 / (i + j + 1) as f64 - if i == j { 0.3 } else { 0.0 });
        let top = max_eigenvalue(&m).unwrap();
        let bottom = jacobi_eigen(&m.negated()).unwrap()[0];
        assert!((top + bottom).abs() < 1e-13);
    }
}
