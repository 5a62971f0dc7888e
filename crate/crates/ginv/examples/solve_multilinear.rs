//! Solving the multilinear system `D * Z = B`: the general least-squares
//! solution family and the unique constrained solutions for right-hand
//! sides drawn from `R(D^k)`.
//!
//! Run with: `cargo run --example solve_multilinear`

use ginv::inverse;
use ginv::problems::{self, RandomKind};
use ginv::solve::{self, SolveMode, SolveRequest};
use ginv::tensor::TensorShape;

fn main() -> ginv::Result<()> {
    let d = problems::paper_fixture().tensor;
    let k = inverse::tensor_index(&d)?;
    let rhs_shape = TensorShape::new(d.shape().col_modes().to_vec(), vec![])?;

    // General modes return a family Z = Z0 + P*Q parameterized by Q.
    let b = problems::random_tensor(rhs_shape.clone(), 42, RandomKind::Dense)?;
    println!("general solution families (operator index {k}):");
    for mode in [
        SolveMode::CmpPower,
        SolveMode::CmpProjected,
        SolveMode::MpcepGeneral,
    ] {
        let family = solve::solve_general(&SolveRequest::new(d.clone(), b.clone(), mode))?;
        let base = solve::general_system_residual(&d, &family.particular, &b, mode)?;
        let q = problems::random_tensor(rhs_shape.clone(), 99, RandomKind::Dense)?;
        let member = family.member(&q)?;
        let shifted = solve::general_system_residual(&d, &member, &b, mode)?;
        println!(
            "  {:<14} residual {:.3e} (particular) {:.3e} (random member)  [{}]",
            mode.label(),
            base,
            shifted,
            family.constraint_desc
        );
    }

    // Constrained modes: for B in R(D^k) the solution K*B is unique within
    // the advertised range.
    let seed_b = problems::random_tensor(rhs_shape.clone(), 5, RandomKind::Dense)?;
    let dk = d.power(k)?;
    let b_in_range = dk.einstein_product(&seed_b)?;
    println!("\nconstrained modes, B drawn from R(D^{k}):");
    for mode in SolveMode::CONSTRAINED {
        let z = solve::solve_constrained(&SolveRequest::new(d.clone(), b_in_range.clone(), mode))?;
        let residual = d.einstein_product(&z)?.sub(&b_in_range)?.frobenius_norm()
            / b_in_range.frobenius_norm();
        let unique = solve::constrained_uniqueness_certificate(&d, mode)?;
        println!(
            "  {:<18} |D*Z - B|/|B| = {:.3e}  uniqueness certificate: {}",
            mode.label(),
            residual,
            if unique { "ok" } else { "FAILED" }
        );
    }

    // A right-hand side outside R(D^k) is rejected.
    let bad = problems::random_tensor(rhs_shape, 123, RandomKind::Dense)?;
    let err = solve::solve_constrained(&SolveRequest::new(d, bad, SolveMode::CmpConstrained));
    println!("\nout-of-range rhs: {:?}", err.err());
    Ok(())
}
