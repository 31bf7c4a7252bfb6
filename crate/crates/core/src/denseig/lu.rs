use alloc::vec::Vec;

use crate::matrix::{cabs, CMat, C64};

/// LU factorization with partial pivoting, `P·M = L·U`, stored packed.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    /// Smallest pivot modulus encountered.
    pub min_pivot: f64,
}

impl Lu {
    pub fn factor(m: &CMat) -> Self {
        assert!(m.is_square(), "LU of a non-square matrix");
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, cabs(lu[(i, k)])))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(pmax);
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let piv = lu[(k, k)];
            if pmax == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                if l.re == 0.0 && l.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Self { lu, perm, min_pivot }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `M x = b`. Zero pivots yield non-finite output; check
    /// [`Lu::min_pivot`] first.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> C64 {
        let n = self.dim();
        let mut det = C64::new(1.0, 0.0);
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        // sign of the permutation
        let mut seen = alloc::vec![false; n];
        let mut swaps = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            swaps += len - 1;
        }
        if swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Gaussian;

    #[test]
    fn solves_random_system() {
        let mut g = Gaussian::new(3);
        let m = g.complex_matrix(7, 7);
        let x = g.complex_vector(7);
        let b = m.mul_vec(&x);
        let lu = Lu::factor(&m);
        let y = lu.solve(&b);
        for (a, b) in x.iter().zip(&y) {
            assert!(cabs(a - b) < 1e-12);
        }
    }

    #[test]
    fn determinant_of_permuted_diagonal() {
        // [[0, 2], [3, 0]] has determinant -6
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = C64::new(2.0, 0.0);
        m[(1, 0)] = C64::new(3.0, 0.0);
        let det = Lu::factor(&m).determinant();
        assert!(cabs(det - C64::new(-6.0, 0.0)) < 1e-15);
    }
}
