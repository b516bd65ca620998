//! Dense complex matrices sized for 2-, 4-, and 8-dimensional Hilbert spaces.
//!
//! Row-major storage over `Complex64`. Every operation is a pure function
//! that allocates its result; the dimensions never exceed 8, so nothing is
//! gained from sparsity or blocking. Basis convention: computational basis
//! |0>, |1> with |+> = (|0> + |1>)/sqrt(2); tensor order is always
//! Alice (x) Bob (x) Bob-ancilla.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// Build a matrix from row-major entries; fails if the length is not
    /// `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                op: "new",
                lhs_rows: rows,
                lhs_cols: cols,
                rhs_rows: data.len(),
                rhs_cols: 1,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// Build entrywise from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// n x n identity.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Column vector from entries.
    pub fn col_vector(entries: &[Complex64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_col_vector(&self) -> bool {
        self.cols == 1
    }

    /// Entry at (r, c); panics on out-of-range indices.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[r * self.cols + c]
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Kronecker product; block ordering is self-major (left factor varies
    /// slowest). Total on all shapes.
    pub fn kron(&self, other: &CMat) -> CMat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![Complex64::ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.data[ar * self.cols + ac];
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        let r = ar * other.rows + br;
                        let c = ac * other.cols + bc;
                        data[r * cols + c] = a * other.data[br * other.cols + bc];
                    }
                }
            }
        }
        CMat { rows, cols, data }
    }

    /// Matrix product.
    pub fn mul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: other.rows,
                rhs_cols: other.cols,
            });
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &CMat) -> Result<CMat> {
        self.zip(other, "add", |a, b| a + b)
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        self.zip(other, "sub", |a, b| a - b)
    }

    fn zip(
        &self,
        other: &CMat,
        op: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<CMat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                op,
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: other.rows,
                rhs_cols: other.cols,
            });
        }
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, k: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| k * a).collect(),
        }
    }

    /// Real scalar multiple.
    pub fn scale_re(&self, k: f64) -> CMat {
        self.scale(Complex64::new(k, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self.data[c * self.cols + r].conj())
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "trace",
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    /// Frobenius norm (the 2-norm for column vectors).
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Entrywise Hermiticity check: max |M - M†| < tol.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()).expect("square") < tol
    }

    /// Entrywise unitarity check: max |M†M - 1| < tol.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .mul(self)
                .expect("square")
                .max_abs_diff(&CMat::identity(self.rows))
                .expect("square")
                < tol
    }
}

/// Pauli sigma_x.
pub fn sigma_x() -> CMat {
    CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("fixed shape")
}

/// Pauli sigma_z.
pub fn sigma_z() -> CMat {
    CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("fixed shape")
}

/// Hadamard gate.
pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_real(2, 2, &[s, s, s, -s]).expect("fixed shape")
}

/// Expectation value: Tr[state . op] for a density-matrix input, <psi|op|psi>
/// for a unit column-vector input.
pub fn expval(state: &CMat, op: &CMat) -> Result<Complex64> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            op: "expval",
            rows: op.rows,
            cols: op.cols,
        });
    }
    if state.is_col_vector() {
        if state.rows != op.rows {
            return Err(Error::ShapeMismatch {
                op: "expval",
                lhs_rows: state.rows,
                lhs_cols: state.cols,
                rhs_rows: op.rows,
                rhs_cols: op.cols,
            });
        }
        let v = op.mul(state)?;
        Ok(state
            .data
            .iter()
            .zip(&v.data)
            .map(|(&a, &b)| a.conj() * b)
            .sum())
    } else {
        if state.rows != op.rows || !state.is_square() {
            return Err(Error::ShapeMismatch {
                op: "expval",
                lhs_rows: state.rows,
                lhs_cols: state.cols,
                rhs_rows: op.rows,
                rhs_cols: op.cols,
            });
        }
        // Tr[state . op] without forming the product.
        let n = state.rows;
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += state.data[i * n + k] * op.data[k * n + i];
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Unit tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_plus() -> CMat {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMat::col_vector(&[
            Complex64::new(s, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(s, 0.0),
        ])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = CMat::identity(2).kron(&CMat::identity(2));
        assert_eq!(k, CMat::identity(4));
    }

    #[test]
    fn kron_sigma_x_flips_both_qubits() {
        let op = sigma_x().kron(&sigma_x());
        let ket00 = CMat::col_vector(&[
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ]);
        let out = op.mul(&ket00).unwrap();
        assert_eq!(out.get(3, 0), Complex64::ONE);
        assert_eq!(out.get(0, 0), Complex64::ZERO);
    }

    #[test]
    fn kron_sign_pattern_of_sigma_z() {
        let op = sigma_z().kron(&CMat::identity(2));
        assert_eq!(op.get(0, 0), Complex64::ONE);
        assert_eq!(op.get(3, 3), -Complex64::ONE);
    }

    #[test]
    fn pauli_involution() {
        let sq = sigma_x().mul(&sigma_x()).unwrap();
        assert!(sq.max_abs_diff(&CMat::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn adjoint_is_an_involution() {
        let m = CMat::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(-0.5, 0.25),
                Complex64::new(0.0, -1.0),
                Complex64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        assert!(m.adjoint().adjoint().max_abs_diff(&m).unwrap() < 1e-15);
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(CMat::identity(8).trace().unwrap(), Complex64::new(8.0, 0.0));
    }

    #[test]
    fn expval_on_phi_plus() {
        let xx = sigma_x().kron(&sigma_x());
        let xz = sigma_x().kron(&sigma_z());
        let psi = phi_plus();
        assert!((expval(&psi, &xx).unwrap().re - 1.0).abs() < 1e-15);
        assert!(expval(&psi, &xz).unwrap().norm() < 1e-15);
    }

    #[test]
    fn expval_matches_cos_angle_law() {
        // (cos a sx + sin a sz) (x) sx on |phi+> contracts to cos(a).
        let a = std::f64::consts::FRAC_PI_4;
        let obs = sigma_x().scale_re(a.cos()).add(&sigma_z().scale_re(a.sin())).unwrap();
        let got = expval(&phi_plus(), &obs.kron(&sigma_x())).unwrap();
        assert!((got.re - a.cos()).abs() < 1e-14);
        assert!(got.im.abs() < 1e-15);
    }

    #[test]
    fn expval_accepts_density_input() {
        let psi = phi_plus();
        let rho = psi.mul(&psi.adjoint()).unwrap();
        let op = sigma_x().kron(&sigma_x());
        let a = expval(&psi, &op).unwrap();
        let b = expval(&rho, &op).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        assert!(sigma_x().mul(&CMat::identity(4)).is_err());
        assert!(sigma_x().add(&CMat::identity(4)).is_err());
        let column = CMat::col_vector(&[Complex64::ONE, Complex64::ZERO]);
        assert!(column.trace().is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = CMat> {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(
                move |v| {
                    CMat::new(
                        rows,
                        cols,
                        v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect(),
                    )
                    .unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn kron_is_bilinear(a in cmat(2, 2), b in cmat(2, 2), c in cmat(3, 2)) {
                let lhs = a.add(&b).unwrap().kron(&c);
                let rhs = a.kron(&c).add(&b.kron(&c)).unwrap();
                prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
            }

            #[test]
            fn kron_mixed_product(a in cmat(2, 2), b in cmat(3, 3), c in cmat(2, 2), d in cmat(3, 3)) {
                let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
                let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
                prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
            }

            #[test]
            fn trace_of_kron_factorizes(a in cmat(2, 2), b in cmat(3, 3)) {
                let lhs = a.kron(&b).trace().unwrap();
                let rhs = a.trace().unwrap() * b.trace().unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }

            #[test]
            fn mul_associative(a in cmat(2, 2), b in cmat(2, 2), c in cmat(2, 2)) {
                let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
                let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-13);
            }
        }
    }
}
