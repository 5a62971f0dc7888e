//! Property-based invariants of the tensor algebra and the inverse kernels.

use ginv::inverse::{self, InverseKind};
use ginv::io;
use ginv::tensor::{DenseTensor, TensorShape};
use num_complex::Complex64;
use proptest::prelude::*;

/// All multi-indices of a mode block, lexicographic (row-major) order.
fn indices(modes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &m in modes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..m).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Direct summation definition of the Einstein product, independent of the
/// matricized implementation.
fn einstein_by_loops(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
    let shape = TensorShape::new(
        a.shape().row_modes().to_vec(),
        b.shape().col_modes().to_vec(),
    )
    .unwrap();
    let mut c = DenseTensor::zeros(shape);
    for i in indices(a.shape().row_modes()) {
        for j in indices(b.shape().col_modes()) {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in indices(a.shape().col_modes()) {
                acc += a.get(&i, &s) * b.get(&s, &j);
            }
            c.set(&i, &j, acc);
        }
    }
    c
}

fn mode_block() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=2)
}

fn tensor_with(rows: Vec<usize>, cols: Vec<usize>) -> impl Strategy<Value = DenseTensor> {
    let shape = TensorShape::new(rows, cols).unwrap();
    let len = shape.row_count() * shape.col_count();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len..=len).prop_map(move |vals| {
        let entries = vals
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        DenseTensor::new(shape.clone(), entries).unwrap()
    })
}

/// A triple A: r x s, B: s x t, C: t x u with matching contraction blocks.
fn chain_triple() -> impl Strategy<Value = (DenseTensor, DenseTensor, DenseTensor)> {
    (mode_block(), mode_block(), mode_block(), mode_block()).prop_flat_map(|(r, s, t, u)| {
        (
            tensor_with(r, s.clone()),
            tensor_with(s, t.clone()),
            tensor_with(t, u),
        )
    })
}

fn square_tensor() -> impl Strategy<Value = DenseTensor> {
    mode_block().prop_flat_map(|m| tensor_with(m.clone(), m))
}

fn any_tensor() -> impl Strategy<Value = DenseTensor> {
    (mode_block(), mode_block()).prop_flat_map(|(r, c)| tensor_with(r, c))
}

proptest! {
    #[test]
    fn product_matches_loop_oracle((a, b, _c) in chain_triple()) {
        let fast = a.einstein_product(&b).unwrap();
        let slow = einstein_by_loops(&a, &b);
        prop_assert!(fast.approx_eq(&slow, 1e-13));
    }

    #[test]
    fn product_is_associative((a, b, c) in chain_triple()) {
        let left = a.einstein_product(&b).unwrap().einstein_product(&c).unwrap();
        let right = a.einstein_product(&b.einstein_product(&c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn adjoint_is_anti_homomorphism((a, b, _c) in chain_triple()) {
        let lhs = a.einstein_product(&b).unwrap().conj_transpose();
        let rhs = b.conj_transpose().einstein_product(&a.conj_transpose()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn matricize_round_trips(t in any_tensor()) {
        let back = DenseTensor::dematricize(&t.matricize(), t.shape().clone()).unwrap();
        prop_assert_eq!(back.entries(), t.entries());
    }

    #[test]
    fn matricize_is_homomorphism((a, b, _c) in chain_triple()) {
        let folded = DenseTensor::dematricize(
            &(a.matricize() * b.matricize()),
            a.einstein_product(&b).unwrap().shape().clone(),
        )
        .unwrap();
        prop_assert!(folded.approx_eq(&a.einstein_product(&b).unwrap(), 1e-13));
    }

    #[test]
    fn moore_penrose_satisfies_all_four(t in any_tensor()) {
        let y = inverse::compute_inverse(&t, InverseKind::Mp).unwrap();
        let residuals =
            inverse::verify_equations(&t, &y, inverse::defining_equations(InverseKind::Mp))
                .unwrap();
        prop_assert!(residuals.satisfied(1e-9), "residuals {:?}", residuals);
    }

    #[test]
    fn drazin_commutes_and_absorbs(t in square_tensor()) {
        let dz = inverse::compute_inverse(&t, InverseKind::Drazin).unwrap();
        let residuals =
            inverse::verify_equations(&t, &dz, inverse::defining_equations(InverseKind::Drazin))
                .unwrap();
        prop_assert!(residuals.satisfied(1e-8), "residuals {:?}", residuals);
    }

    #[test]
    fn composites_are_outer_inverses(t in square_tensor()) {
        for kind in [InverseKind::Cmp, InverseKind::Dmp, InverseKind::Mpd,
                     InverseKind::Mpcep, InverseKind::Cepmp] {
            let z = inverse::compute_inverse(&t, kind).unwrap();
            prop_assert!(inverse::is_outer(&t, &z).unwrap() <= 1e-8, "{kind:?}");
        }
    }

    #[test]
    fn tensor_file_round_trip_is_bit_exact(t in any_tensor()) {
        let text = io::tensor_to_string(&t);
        let back = io::tensor_from_str(&text).unwrap();
        prop_assert_eq!(back.shape(), t.shape());
        prop_assert_eq!(back.entries(), t.entries());
    }

    #[test]
    fn frobenius_norm_is_unitarily_stable(t in any_tensor()) {
        // the adjoint permutes entries up to conjugation: same norm
        let diff = (t.conj_transpose().frobenius_norm() - t.frobenius_norm()).abs();
        prop_assert!(diff <= 1e-12 * t.frobenius_norm().max(1.0));
    }
}
