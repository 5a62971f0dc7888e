//! Benchmarks inverse-based solvers on discretized Poisson operators:
//! a Dirichlet Laplacian augmented with a nilpotent block (index > 1) and
//! a singular Neumann Laplacian (index 1).
//!
//! Run with: `cargo run --release --example poisson_benchmark`

use ginv::inverse::{self, InverseKind};
use ginv::io;
use ginv::problems::{self, NilpotentBlock};
use ginv::solve;
use ginv::tensor::TensorShape;
use num_complex::Complex64;

fn main() -> ginv::Result<()> {
    // Dirichlet n=6 with the 3x3 nilpotent augmentation: index 4.
    let base = problems::dirichlet_poisson(6)?;
    let d = problems::augment_nilpotent(&base, NilpotentBlock::N2)?;
    let k = inverse::tensor_index(&d)?;
    let dk = d.power(k)?;
    let rhs_shape = TensorShape::new(d.shape().col_modes().to_vec(), vec![])?;
    let seed = problems::random_tensor(rhs_shape, 17, problems::RandomKind::Dense)?;
    let mut b = dk.einstein_product(&seed)?;
    b = b.scale(Complex64::new(1.0 / b.frobenius_norm(), 0.0));

    let report = solve::residual_report(&d, &b, &InverseKind::ALL, 3)?;
    println!(
        "dirichlet n=6 + N2 block: index {}, nnz {}",
        report.index, report.nnz
    );
    println!("{}", io::BENCH_CSV_HEADER);
    for row in &report.rows {
        println!(
            "{}",
            io::bench_csv_row(
                "dirichlet6-n2",
                4,
                report.index,
                report.nnz,
                row.kind.label(),
                row.residual,
                row.mean_time_s(),
                report.repeats,
                17,
            )
        );
    }

    // Neumann n=12: index 1, so Drazin, core-EP, and every composite
    // collapse to the same solver; the residual column shows the agreement.
    let neumann = problems::neumann_poisson(12)?;
    let nk = inverse::tensor_index(&neumann)?;
    let rhs_shape = TensorShape::new(neumann.shape().col_modes().to_vec(), vec![])?;
    let seed = problems::random_tensor(rhs_shape, 29, problems::RandomKind::Dense)?;
    let range = neumann.einstein_product(&seed)?;
    let nb = range.scale(Complex64::new(1.0 / range.frobenius_norm(), 0.0));
    let kinds = [
        InverseKind::Mp,
        InverseKind::Drazin,
        InverseKind::CoreEp,
        InverseKind::Mpd,
    ];
    let report = solve::residual_report(&neumann, &nb, &kinds, 3)?;
    println!("\nneumann n=12: index {nk}, nnz {}", report.nnz);
    for row in &report.rows {
        println!(
            "  {:<8} residual {:.3e}  inverse {:.4}s  apply {:.6}s",
            row.kind.label(),
            row.residual,
            row.mean_inverse_time_s,
            row.mean_apply_time_s
        );
    }
    Ok(())
}
