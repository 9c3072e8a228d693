/// Explicit dense inverse of an `m x m` basis matrix, row-major.
#[derive(Debug, Clone)]
pub(crate) struct BasisInverse {
    m: usize,
    inv: Vec<f64>,
}

impl BasisInverse {
    pub fn identity(m: usize) -> Self {
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        Self { m, inv }
    }

    /// Inverts the matrix whose columns are produced by `column(k, out)`.
    /// Returns `None` when a pivot falls below `pivot_tol`.
    pub fn factor(
        m: usize,
        pivot_tol: f64,
        mut column: impl FnMut(usize, &mut [f64]),
    ) -> Option<Self> {
        // Gauss-Jordan with partial pivoting on [B | I].
        let mut b = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for k in 0..m {
            column(k, &mut col);
            for i in 0..m {
                b[i * m + k] = col[i];
            }
        }
        let mut inv = Self::identity(m).inv;
        for k in 0..m {
            let (piv_row, piv_abs) =
                (k..m)
                    .map(|i| (i, b[i * m + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if piv_abs < pivot_tol {
                return None;
            }
            if piv_row != k {
                for c in 0..m {
                    b.swap(k * m + c, piv_row * m + c);
                    inv.swap(k * m + c, piv_row * m + c);
                }
            }
            let p = b[k * m + k];
            for c in 0..m {
                b[k * m + c] /= p;
                inv[k * m + c] /= p;
            }
            for i in 0..m {
                if i == k {
                    continue;
                }
                let f = b[i * m + k];
                if f == 0.0 {
                    continue;
                }
                for c in 0..m {
                    b[i * m + c] -= f * b[k * m + c];
                    inv[i * m + c] -= f * inv[k * m + c];
                }
            }
        }
        Some(Self { m, inv })
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.inv[r * self.m..(r + 1) * self.m]
    }

    /// `B^{-1} a` for a dense column `a`.
    pub fn ftran(&self, a: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = super::dot(self.row(i), a);
        }
    }

    /// `B^{-1} e_k`.
    pub fn ftran_unit(&self, k: usize, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.inv[i * self.m + k];
        }
    }

    /// `c^T B^{-1}`.
    pub fn btran(&self, c: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0.0 {
                for (o, v) in out.iter_mut().zip(self.row(i)) {
                    *o += ci * v;
                }
            }
        }
    }

    /// Product-form update after column `alpha = B^{-1} a_q` replaces basis
    /// position `r`.
    pub fn update(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let p = alpha[r];
        for c in 0..m {
            self.inv[r * m + c] /= p;
        }
        for i in 0..m {
            if i == r || alpha[i] == 0.0 {
                continue;
            }
            let f = alpha[i];
            for c in 0..m {
                self.inv[i * m + c] -= f * self.inv[r * m + c];
            }
        }
    }
}
