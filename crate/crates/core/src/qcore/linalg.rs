//! Small fixed-size complex matrix helpers.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices indexed 0..4 as I, X, Y, Z.
pub fn pauli(k: usize) -> Mat2 {
    match k {
        0 => Mat2::new(ONE, ZERO, ZERO, ONE),
        1 => Mat2::new(ZERO, ONE, ONE, ZERO),
        2 => Mat2::new(ZERO, -I, I, ZERO),
        3 => Mat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on ion 1 (the high bit of the basis index).
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r >> 1, col >> 1)] * b[(r & 1, col & 1)])
}

pub fn dagger4(m: &Mat4) -> Mat4 {
    m.adjoint()
}

pub fn frobenius(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let mut v = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Full eigendecomposition of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &Mat4) -> (Vector4<f64>, Mat4) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    (eig.eigenvalues, eig.eigenvectors)
}

pub fn diag4(d: [C64; 4]) -> Mat4 {
    Mat4::from_diagonal(&Vector4::new(d[0], d[1], d[2], d[3]))
}

pub fn trace(m: &Mat4) -> C64 {
    m[(0, 0)] + m[(1, 1)] + m[(2, 2)] + m[(3, 3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_places_ion_one_on_high_bit() {
        let x = pauli(1);
        let id = pauli(0);
        let m = kron(&x, &id);
        // X on ion 1 maps |00> (0) to |10> (2)
        assert_eq!(m[(2, 0)], ONE);
        assert_eq!(m[(1, 0)], ZERO);
    }

    #[test]
    fn eigenvalues_of_diag() {
        let m = diag4([c(0.4, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.2, 0.0)]);
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 0.1).abs() < 1e-14 && (e[3] - 0.4).abs() < 1e-14);
    }
}
