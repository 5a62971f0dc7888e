//! Executable characterization theorems: subspace predicates, the unique
//! three-equation systems behind each composite inverse, equality conditions
//! between composites, and outer inverses with prescribed range/null space.

use crate::error::{GinvError, Result};
use crate::inverse::{self, InverseKind};
use crate::kernels::{self, CMatrix};
use crate::tensor::DenseTensor;
use num_complex::Complex64;

/// Residuals of the three equations of a characterizing system.
#[derive(Debug, Clone, Copy)]
pub struct SystemResidual {
    pub eq_residuals: [f64; 3],
    pub satisfied: bool,
}

impl SystemResidual {
    pub fn max_residual(&self) -> f64 {
        self.eq_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// The unique-solution systems. `Ydx`/`Xdy` carry the explicit bilateral
/// factors; the rest are the named composite-inverse systems.
#[derive(Debug, Clone)]
pub enum System {
    /// `Z*D*Z=Z, D*Z=D*X, Z*D=Y*D*X*D` with `X` outer, `Y` inner;
    /// unique solution `Y*D*X`.
    Ydx {
        x: DenseTensor,
        y: DenseTensor,
    },
    /// `Z*D*Z=Z, Z*D=X*D, D*Z=D*X*D*Y` with `X` outer, `Y` inner;
    /// unique solution `X*D*Y`.
    Xdy {
        x: DenseTensor,
        y: DenseTensor,
    },
    Cmp,
    Dmp,
    Mpd,
    Mpcep,
    Cepmp,
}

impl System {
    /// The composite inverse that uniquely solves a named system.
    pub fn inverse_kind(&self) -> Option<InverseKind> {
        match self {
            System::Cmp => Some(InverseKind::Cmp),
            System::Dmp => Some(InverseKind::Dmp),
            System::Mpd => Some(InverseKind::Mpd),
            System::Mpcep => Some(InverseKind::Mpcep),
            System::Cepmp => Some(InverseKind::Cepmp),
            _ => None,
        }
    }
}

/// `R(Q) ⊆ R(P)`: rank of the column-concatenation equals rank of `P`.
pub fn range_contains(p: &DenseTensor, q: &DenseTensor) -> Result<bool> {
    if p.shape().row_modes() != q.shape().row_modes() {
        return Err(GinvError::ShapeMismatch(format!(
            "range_contains: row modes {:?} vs {:?}",
            p.shape().row_modes(),
            q.shape().row_modes()
        )));
    }
    let pm = p.matricize();
    let qm = q.matricize();
    let mut stacked = CMatrix::zeros(pm.nrows(), pm.ncols() + qm.ncols());
    stacked
        .view_mut((0, 0), (pm.nrows(), pm.ncols()))
        .copy_from(&pm);
    stacked
        .view_mut((0, pm.ncols()), (qm.nrows(), qm.ncols()))
        .copy_from(&qm);
    // The inputs are typically products of SVD-based inverses, so their
    // "zero" singular values sit near 1e-14 relative rather than machine
    // epsilon. Use the same 1e-10 relative cutoff as `null_contains` for
    // both rank decisions so noise cannot inflate the stacked rank.
    let sv_stacked = kernels::svd(&stacked)?.singular_values;
    let sv_p = kernels::svd(&pm)?.singular_values;
    let cutoff = 1e-10 * sv_stacked.first().copied().unwrap_or(0.0);
    let rank = |sv: &[f64]| sv.iter().filter(|&&s| s > cutoff).count();
    Ok(rank(&sv_stacked) == rank(&sv_p))
}

/// `N(A) ⊆ N(B)`: tested as `||B*(I - A^dagger*A)|| <= tol * ||B||`.
pub fn null_contains(a: &DenseTensor, b: &DenseTensor) -> Result<bool> {
    if a.shape().col_modes() != b.shape().col_modes() {
        return Err(GinvError::ShapeMismatch(format!(
            "null_contains: col modes {:?} vs {:?}",
            a.shape().col_modes(),
            b.shape().col_modes()
        )));
    }
    let am = a.matricize();
    let bm = b.matricize();
    let projector = CMatrix::identity(am.ncols(), am.ncols()) - kernels::pinv(&am)? * &am;
    let num = (&bm * projector).norm();
    Ok(num <= 1e-10 * bm.norm().max(1.0))
}

fn rel(num: f64, denom: f64) -> f64 {
    num / denom.max(1.0)
}

fn residual(lhs: &DenseTensor, rhs: &DenseTensor) -> Result<f64> {
    Ok(rel(lhs.sub(rhs)?.frobenius_norm(), rhs.frobenius_norm()))
}

/// Right-hand sides `(R1, R2)` of the two linear equations `D*Z = R1` and
/// `Z*D = R2` of the chosen system.
fn system_rhs(d: &DenseTensor, system: &System) -> Result<(DenseTensor, DenseTensor)> {
    let prod = |factors: &[&DenseTensor]| -> Result<DenseTensor> {
        let mut acc = factors[0].clone();
        for f in &factors[1..] {
            acc = acc.einstein_product(f)?;
        }
        Ok(acc)
    };
    match system {
        System::Ydx { x, y } => Ok((prod(&[d, x])?, prod(&[y, d, x, d])?)),
        System::Xdy { x, y } => Ok((prod(&[d, x, d, y])?, prod(&[x, d])?)),
        System::Cmp => {
            let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
            let dz = inverse::compute_inverse(d, InverseKind::Drazin)?;
            Ok((prod(&[d, &dz, d, &mp])?, prod(&[&mp, d, &dz, d])?))
        }
        System::Dmp => {
            let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
            let dz = inverse::compute_inverse(d, InverseKind::Drazin)?;
            Ok((prod(&[d, &dz, d, &mp])?, prod(&[&dz, d])?))
        }
        System::Mpd => {
            let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
            let dz = inverse::compute_inverse(d, InverseKind::Drazin)?;
            Ok((prod(&[d, &dz])?, prod(&[&mp, d, &dz, d])?))
        }
        System::Mpcep => {
            let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
            let cep = inverse::compute_inverse(d, InverseKind::CoreEp)?;
            Ok((prod(&[d, &cep])?, prod(&[&mp, d, &cep, d])?))
        }
        System::Cepmp => {
            let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
            let cep = inverse::compute_inverse(d, InverseKind::CoreEp)?;
            Ok((prod(&[d, &cep, d, &mp])?, prod(&[&cep, d])?))
        }
    }
}

/// Residuals of the three equations of `system` evaluated at `Z`.
pub fn verify_system(
    d: &DenseTensor,
    z: &DenseTensor,
    system: &System,
    tol: f64,
) -> Result<SystemResidual> {
    if !d.shape().is_square() {
        return Err(GinvError::NotSquare(
            d.shape().row_modes().to_vec(),
            d.shape().col_modes().to_vec(),
        ));
    }
    let (r1, r2) = system_rhs(d, system)?;
    let zdz = z.einstein_product(d)?.einstein_product(z)?;
    let eq_residuals = [
        rel(zdz.sub(z)?.frobenius_norm(), z.frobenius_norm()),
        residual(&d.einstein_product(z)?, &r1)?,
        residual(&z.einstein_product(d)?, &r2)?,
    ];
    Ok(SystemResidual {
        eq_residuals,
        satisfied: eq_residuals.iter().all(|&r| r <= tol),
    })
}

/// Column-major vectorization.
fn vec_of(m: &CMatrix) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

/// Solves the system's two linear equations by stacked least squares and
/// checks that the min-norm solution satisfies the product equation and
/// coincides with the closed-form composite inverse.
pub fn uniqueness_probe(d: &DenseTensor, system: &System, tol: f64) -> Result<bool> {
    let (r1, r2) = system_rhs(d, system)?;
    let m = d.matricize();
    let n = m.nrows();
    let eye = CMatrix::identity(n, n);
    // vec(M Z) = (I ⊗ M) vec(Z); vec(Z M) = (M^T ⊗ I) vec(Z)
    let a_top = eye.kronecker(&m);
    let a_bot = m.transpose().kronecker(&eye);
    let mut a = CMatrix::zeros(2 * n * n, n * n);
    a.view_mut((0, 0), (n * n, n * n)).copy_from(&a_top);
    a.view_mut((n * n, 0), (n * n, n * n)).copy_from(&a_bot);
    let mut b = nalgebra::DVector::zeros(2 * n * n);
    b.rows_mut(0, n * n).copy_from(&vec_of(&r1.matricize()));
    b.rows_mut(n * n, n * n).copy_from(&vec_of(&r2.matricize()));
    let z_vec = kernels::pinv(&a)? * b;
    let z_mat = CMatrix::from_column_slice(n, n, z_vec.as_slice());
    let z = DenseTensor::dematricize(&z_mat, d.shape().clone())?;

    let res = verify_system(d, &z, system, tol)?;
    if !res.satisfied {
        return Ok(false);
    }
    let closed_form = match system {
        System::Ydx { x, y } => inverse::bilateral_inverse_unchecked(d, y, x)?,
        System::Xdy { x, y } => inverse::bilateral_inverse_unchecked(d, x, y)?,
        other => inverse::compute_inverse(d, other.inverse_kind().unwrap())?,
    };
    Ok(z.approx_eq(&closed_form, tol))
}

/// Equality conditions between pairs of composite inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityPair {
    /// `CMP = MPD  ⟺  N(D^dagger) ⊆ N(D^k)`
    CmpEqMpd,
    /// `CMP = DMP  ⟺  R(D^k) ⊆ R(D^dagger)`
    CmpEqDmp,
    /// `MPCEP = CEPMP  ⟺  N(D^dagger) ⊆ N(D^⊕) ∧ R(D^⊕) ⊆ R(D^dagger*D^k)`
    MpcepEqCepmp,
    /// `DMP*D = CMP*D  ⟺  R(D^k) ⊆ R(D^dagger)`
    DmpCmpProducts,
}

/// Evaluates both sides of the chosen iff theorem; callers assert agreement.
pub fn equality_condition(d: &DenseTensor, pair: EqualityPair, tol: f64) -> Result<(bool, bool)> {
    if !d.shape().is_square() {
        return Err(GinvError::NotSquare(
            d.shape().row_modes().to_vec(),
            d.shape().col_modes().to_vec(),
        ));
    }
    let k = inverse::tensor_index(d)?;
    let dk = d.power(k)?;
    let mp = inverse::compute_inverse(d, InverseKind::Mp)?;
    match pair {
        EqualityPair::CmpEqMpd => {
            let cmp = inverse::compute_inverse(d, InverseKind::Cmp)?;
            let mpd = inverse::compute_inverse(d, InverseKind::Mpd)?;
            Ok((cmp.approx_eq(&mpd, tol), null_contains(&mp, &dk)?))
        }
        EqualityPair::CmpEqDmp => {
            let cmp = inverse::compute_inverse(d, InverseKind::Cmp)?;
            let dmp = inverse::compute_inverse(d, InverseKind::Dmp)?;
            Ok((cmp.approx_eq(&dmp, tol), range_contains(&mp, &dk)?))
        }
        EqualityPair::MpcepEqCepmp => {
            let mpcep = inverse::compute_inverse(d, InverseKind::Mpcep)?;
            let cepmp = inverse::compute_inverse(d, InverseKind::Cepmp)?;
            let cep = inverse::compute_inverse(d, InverseKind::CoreEp)?;
            let mp_dk = mp.einstein_product(&dk)?;
            let cond = null_contains(&mp, &cep)? && range_contains(&mp_dk, &cep)?;
            Ok((mpcep.approx_eq(&cepmp, tol), cond))
        }
        EqualityPair::DmpCmpProducts => {
            let cmp = inverse::compute_inverse(d, InverseKind::Cmp)?;
            let dmp = inverse::compute_inverse(d, InverseKind::Dmp)?;
            let lhs = dmp.einstein_product(d)?;
            let rhs = cmp.einstein_product(d)?;
            Ok((lhs.approx_eq(&rhs, tol), range_contains(&mp, &dk)?))
        }
    }
}

/// `Y = D^(2)_{R(B_t), N(C_t)}`: outer inverse with prescribed range and
/// null space, both inclusions checked in each direction.
pub fn prescribed_outer_check(
    d: &DenseTensor,
    y: &DenseTensor,
    b_t: &DenseTensor,
    c_t: &DenseTensor,
) -> Result<bool> {
    if inverse::is_outer(d, y)? > 1e-9 {
        return Ok(false);
    }
    Ok(range_contains(b_t, y)?
        && range_contains(y, b_t)?
        && null_contains(c_t, y)?
        && null_contains(y, c_t)?)
}

/// For `X, Z ∈ D{1}`: `X*D*Z = Z*D*X  ⟺  X*D = Z*D ∧ D*Z = D*X`.
/// Returns both flags so callers can assert the equivalence.
pub fn commuting_inner_condition(
    d: &DenseTensor,
    x: &DenseTensor,
    z: &DenseTensor,
    tol: f64,
) -> Result<(bool, bool)> {
    for (t, name) in [(x, "X"), (z, "Z")] {
        if inverse::is_inner(d, t)? > tol {
            return Err(GinvError::NotGeneralizedInverse(format!(
                "{name} is not an inner inverse of D"
            )));
        }
    }
    let xdz = x.einstein_product(d)?.einstein_product(z)?;
    let zdx = z.einstein_product(d)?.einstein_product(x)?;
    let products_equal = xdz.approx_eq(&zdx, tol);
    let xd = x.einstein_product(d)?;
    let zd = z.einstein_product(d)?;
    let dz = d.einstein_product(z)?;
    let dx = d.einstein_product(x)?;
    let sides_equal = xd.approx_eq(&zd, tol) && dz.approx_eq(&dx, tol);
    Ok((products_equal, sides_equal))
}
