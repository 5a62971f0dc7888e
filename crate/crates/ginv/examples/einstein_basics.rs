//! Einstein-product fundamentals: building tensors, contracting them, and
//! the matricization map that turns the product into matrix multiplication.
//!
//! Run with: `cargo run --example einstein_basics`

use ginv::tensor::{DenseTensor, TensorShape};
use num_complex::Complex64;

fn main() -> ginv::Result<()> {
    // A 2x2 x 3 tensor (row block [2,2], column block [3]) acting on a
    // 3 x 2 tensor: the Einstein product contracts the shared [3] block.
    let a_shape = TensorShape::new(vec![2, 2], vec![3])?;
    let b_shape = TensorShape::new(vec![3], vec![2])?;
    let a = DenseTensor::from_real(
        a_shape,
        &[1.0, 2.0, 0.0, -1.0, 1.0, 1.0, 3.0, 0.0, 2.0, 0.5, -2.0, 1.0],
    )?;
    let b = DenseTensor::from_real(b_shape, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0])?;

    let c = a.einstein_product(&b)?;
    println!(
        "A: rows {:?} cols {:?};  B: rows {:?} cols {:?};  A*B: rows {:?} cols {:?}",
        a.shape().row_modes(),
        a.shape().col_modes(),
        b.shape().row_modes(),
        b.shape().col_modes(),
        c.shape().row_modes(),
        c.shape().col_modes()
    );
    println!("(A*B)[(0,1), (0)] = {}", c.get(&[0, 1], &[0]));

    // Matricization is a homomorphism: unfold, multiply, fold back.
    let via_matrices =
        DenseTensor::dematricize(&(a.matricize() * b.matricize()), c.shape().clone())?;
    println!(
        "homomorphism check |A*B - fold(mat(A)*mat(B))| = {:.3e}",
        c.sub(&via_matrices)?.frobenius_norm()
    );

    // The conjugate transpose swaps the blocks and is an anti-homomorphism.
    let lhs = c.conj_transpose();
    let rhs = b.conj_transpose().einstein_product(&a.conj_transpose())?;
    println!(
        "anti-homomorphism check |(A*B)^H - B^H*A^H| = {:.3e}",
        lhs.sub(&rhs)?.frobenius_norm()
    );

    // Identity tensor over a mode block.
    let id = DenseTensor::identity(&[2, 2])?;
    let back = id.einstein_product(&a)?;
    println!(
        "identity check |I*A - A| = {:.3e}",
        back.sub(&a)?.frobenius_norm()
    );

    // Entries are complex; scaling by i rotates the phase.
    let rotated = a.scale(Complex64::new(0.0, 1.0));
    println!("i*A[(0,0),(0)] = {}", rotated.get(&[0, 0], &[0]));
    Ok(())
}
