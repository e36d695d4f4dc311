//! Symmetric tridiagonal matrices and Sturm-sequence bisection.

use crate::error::{Error, Result};

/// Absolute accuracy of [`eig_lowest`].
pub const EIG_ABS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Argument("empty matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::Argument(format!(
                "off-diagonal has {} entries, expected {}",
                off.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Argument("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "dimension mismatch");
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// Number of eigenvalues strictly below `shift` (negative pivots of the
    /// LDLᵀ factorization of `T − shift·I`).
    pub fn sturm_count(&self, shift: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE
            * self
                .off
                .iter()
                .map(|e| e * e)
                .fold(1.0, f64::max);
        let mut count = 0;
        let mut q = self.diag[0] - shift;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - shift - e * e / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        (lo - pad, hi + pad)
    }
}

/// The `k` smallest eigenvalues in ascending order, each to [`EIG_ABS_TOL`].
pub fn eig_lowest(m: &SymTridiagonal, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > m.dim() {
        return Err(Error::Argument(format!(
            "requested {k} eigenvalues of a {}x{} matrix",
            m.dim(),
            m.dim()
        )));
    }
    let (glo, ghi) = m.gershgorin();
    let tol = 0.25 * EIG_ABS_TOL;
    let mut out = Vec::with_capacity(k);
    let mut lo = glo;
    for j in 0..k {
        // eigenvalue j is the smallest x with count(x) > j
        let mut a = lo;
        let mut b = ghi;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if m.sturm_count(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let value = 0.5 * (a + b);
        out.push(value);
        lo = a;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let m = SymTridiagonal::new(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let e = eig_lowest(&m, 2).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-10 && (e[1] - 2.0).abs() < 1e-10);
        assert!(eig_lowest(&m, 0).is_err());
        assert!(eig_lowest(&m, 4).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, f64::NAN], vec![0.5]).is_err());
    }

    #[test]
    fn discrete_laplacian() {
        let n = 200;
        let h = 0.05;
        let m = SymTridiagonal::new(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1]).unwrap();
        let e = eig_lowest(&m, 10).unwrap();
        for (j, v) in e.iter().enumerate() {
            let exact = 2.0 * (1.0 - ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos()) / (h * h);
            assert!((v - exact).abs() < 1e-10, "{j}: {v} vs {exact}");
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let m = SymTridiagonal::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        // eigenvalues 1 and 3
        assert_eq!(m.sturm_count(0.5), 0);
        assert_eq!(m.sturm_count(2.0), 1);
        assert_eq!(m.sturm_count(3.5), 2);
    }

    #[test]
    fn matvec_symmetric() {
        let m = SymTridiagonal::new(vec![1.0, 2.0, 3.0], vec![0.5, -1.0]).unwrap();
        assert_eq!(m.matvec(&[1.0, 0.0, 0.0]), vec![1.0, 0.5, 0.0]);
        assert_eq!(m.matvec(&[0.0, 0.0, 1.0]), vec![0.0, -1.0, 3.0]);
    }
}
