//! Tensor-level generalized inverses and equation-set predicates.
//!
//! The Moore-Penrose, Drazin and core-EP inverses are computed through the
//! matricization bijection; the composite inverses (DMP, MPD, CMP, MPCEP,
//! CEPMP) are assembled from freshly computed factors. Bilateral inverses
//! `X * D * Y` accept any members of `D{1} ∪ D{2}`.

use crate::error::{GinvError, Result};
use crate::kernels;
use crate::tensor::DenseTensor;
use std::collections::BTreeMap;
use std::fmt;

/// Default relative verification tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Selects the computation path for a named generalized inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InverseKind {
    Mp,
    Drazin,
    CoreEp,
    Dmp,
    Mpd,
    Cmp,
    Mpcep,
    Cepmp,
}

impl InverseKind {
    /// All kinds in residual-table order.
    pub const ALL: [InverseKind; 8] = [
        InverseKind::Mp,
        InverseKind::Drazin,
        InverseKind::CoreEp,
        InverseKind::Cmp,
        InverseKind::Mpd,
        InverseKind::Dmp,
        InverseKind::Mpcep,
        InverseKind::Cepmp,
    ];

    pub fn requires_square(self) -> bool {
        !matches!(self, InverseKind::Mp)
    }

    pub fn label(self) -> &'static str {
        match self {
            InverseKind::Mp => "mp",
            InverseKind::Drazin => "drazin",
            InverseKind::CoreEp => "core-ep",
            InverseKind::Dmp => "dmp",
            InverseKind::Mpd => "mpd",
            InverseKind::Cmp => "cmp",
            InverseKind::Mpcep => "mpcep",
            InverseKind::Cepmp => "cepmp",
        }
    }

    pub fn parse(s: &str) -> Option<InverseKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.label() == s.to_ascii_lowercase())
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The seven defining-equation labels from the generalized-inverse table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquationLabel {
    /// (1) `D * Y * D = D`
    Inner,
    /// (2) `Y * D * Y = Y`
    Outer,
    /// (3) `(D * Y)^* = D * Y`
    HermDy,
    /// (4) `(Y * D)^* = Y * D`
    HermYd,
    /// (1^k) `Y * D^{k+1} = D^k`
    RankPower,
    /// (5) `D * Y = Y * D`
    Commute,
    /// (6) `D * Y^2 = Y`
    CoreAbsorb,
}

impl EquationLabel {
    pub const ALL: [EquationLabel; 7] = [
        EquationLabel::Inner,
        EquationLabel::Outer,
        EquationLabel::HermDy,
        EquationLabel::HermYd,
        EquationLabel::RankPower,
        EquationLabel::Commute,
        EquationLabel::CoreAbsorb,
    ];

    pub fn needs_square(self) -> bool {
        matches!(
            self,
            EquationLabel::RankPower | EquationLabel::Commute | EquationLabel::CoreAbsorb
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            EquationLabel::Inner => "1",
            EquationLabel::Outer => "2",
            EquationLabel::HermDy => "3",
            EquationLabel::HermYd => "4",
            EquationLabel::RankPower => "1^k",
            EquationLabel::Commute => "5",
            EquationLabel::CoreAbsorb => "6",
        }
    }
}

/// Per-equation relative Frobenius residuals.
#[derive(Debug, Clone, Default)]
pub struct EquationResiduals {
    residuals: BTreeMap<EquationLabel, f64>,
}

impl EquationResiduals {
    pub fn get(&self, label: EquationLabel) -> Option<f64> {
        self.residuals.get(&label).copied()
    }

    pub fn insert(&mut self, label: EquationLabel, value: f64) {
        self.residuals.insert(label, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (EquationLabel, f64)> + '_ {
        self.residuals.iter().map(|(&l, &v)| (l, v))
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    pub fn satisfied(&self, tol: f64) -> bool {
        self.residuals.values().all(|&r| r <= tol)
    }
}

/// Index of a square tensor: smallest `k` with rank stabilization of powers.
pub fn tensor_index(d: &DenseTensor) -> Result<usize> {
    kernels::index_of(&d.matricize())
}

/// Computes the requested generalized inverse of `d`.
pub fn compute_inverse(d: &DenseTensor, kind: InverseKind) -> Result<DenseTensor> {
    if kind.requires_square() && !d.shape().is_square() {
        return Err(GinvError::NotSquare(
            d.shape().row_modes().to_vec(),
            d.shape().col_modes().to_vec(),
        ));
    }
    let m = d.matricize();
    let result = match kind {
        InverseKind::Mp => kernels::pinv(&m)?,
        InverseKind::Drazin => kernels::drazin(&m)?,
        InverseKind::CoreEp => kernels::core_ep(&m)?,
        InverseKind::Dmp => {
            let dz = kernels::drazin(&m)?;
            let p = kernels::pinv(&m)?;
            dz * &m * p
        }
        InverseKind::Mpd => {
            let dz = kernels::drazin(&m)?;
            let p = kernels::pinv(&m)?;
            p * &m * dz
        }
        InverseKind::Cmp => {
            let dz = kernels::drazin(&m)?;
            let p = kernels::pinv(&m)?;
            &p * &m * dz * &m * &p
        }
        InverseKind::Mpcep => {
            let cep = kernels::core_ep(&m)?;
            let p = kernels::pinv(&m)?;
            p * &m * cep
        }
        InverseKind::Cepmp => {
            let cep = kernels::core_ep(&m)?;
            let p = kernels::pinv(&m)?;
            cep * &m * p
        }
    };
    DenseTensor::dematricize(&result, d.shape().transposed())
}

fn rel(num: f64, denom: f64) -> f64 {
    num / denom.max(1.0)
}

/// Residual of Penrose equation (1), relative to `||D||_F`.
pub fn is_inner(d: &DenseTensor, y: &DenseTensor) -> Result<f64> {
    let dyd = d.einstein_product(y)?.einstein_product(d)?;
    let num = dyd.sub(d)?.frobenius_norm();
    let denom = d.frobenius_norm();
    Ok(if denom == 0.0 { num } else { num / denom })
}

/// Residual of Penrose equation (2), relative to `max(1, ||Y||_F)`.
pub fn is_outer(d: &DenseTensor, y: &DenseTensor) -> Result<f64> {
    let ydy = y.einstein_product(d)?.einstein_product(y)?;
    let num = ydy.sub(y)?.frobenius_norm();
    let denom = y.frobenius_norm();
    Ok(if denom == 0.0 {
        num
    } else {
        num / denom.max(1.0)
    })
}

fn is_member(d: &DenseTensor, y: &DenseTensor, tol: f64) -> Result<bool> {
    Ok(is_inner(d, y)? <= tol || is_outer(d, y)? <= tol)
}

/// Per-label relative residuals of the chosen defining equations.
pub fn verify_equations(
    d: &DenseTensor,
    y: &DenseTensor,
    labels: &[EquationLabel],
) -> Result<EquationResiduals> {
    let mut out = EquationResiduals::default();
    let needs_square = labels.iter().any(|l| l.needs_square());
    if needs_square && !d.shape().is_square() {
        return Err(GinvError::NotSquare(
            d.shape().row_modes().to_vec(),
            d.shape().col_modes().to_vec(),
        ));
    }
    for &label in labels {
        let residual = match label {
            EquationLabel::Inner => is_inner(d, y)?,
            EquationLabel::Outer => is_outer(d, y)?,
            EquationLabel::HermDy => {
                let dy = d.einstein_product(y)?;
                rel(
                    dy.conj_transpose().sub(&dy)?.frobenius_norm(),
                    dy.frobenius_norm(),
                )
            }
            EquationLabel::HermYd => {
                let yd = y.einstein_product(d)?;
                rel(
                    yd.conj_transpose().sub(&yd)?.frobenius_norm(),
                    yd.frobenius_norm(),
                )
            }
            EquationLabel::RankPower => {
                let k = tensor_index(d)?;
                let dk = d.power(k)?;
                let lhs = y.einstein_product(&d.power(k + 1)?)?;
                rel(lhs.sub(&dk)?.frobenius_norm(), dk.frobenius_norm())
            }
            EquationLabel::Commute => {
                let dy = d.einstein_product(y)?;
                let yd = y.einstein_product(d)?;
                rel(dy.sub(&yd)?.frobenius_norm(), dy.frobenius_norm())
            }
            EquationLabel::CoreAbsorb => {
                let dyy = d.einstein_product(y)?.einstein_product(y)?;
                rel(dyy.sub(y)?.frobenius_norm(), y.frobenius_norm())
            }
        };
        out.insert(label, residual);
    }
    Ok(out)
}

/// The equation set a named inverse must satisfy.
pub fn defining_equations(kind: InverseKind) -> &'static [EquationLabel] {
    match kind {
        InverseKind::Mp => &[
            EquationLabel::Inner,
            EquationLabel::Outer,
            EquationLabel::HermDy,
            EquationLabel::HermYd,
        ],
        InverseKind::Drazin => &[
            EquationLabel::RankPower,
            EquationLabel::Outer,
            EquationLabel::Commute,
        ],
        InverseKind::CoreEp => &[
            EquationLabel::RankPower,
            EquationLabel::CoreAbsorb,
            EquationLabel::HermDy,
        ],
        // the composites are outer inverses of D
        _ => &[EquationLabel::Outer],
    }
}

/// Bilateral inverse `X * D * Y` with membership validation of `X` and `Y`.
pub fn bilateral_inverse(d: &DenseTensor, x: &DenseTensor, y: &DenseTensor) -> Result<DenseTensor> {
    if !is_member(d, x, DEFAULT_TOL)? {
        return Err(GinvError::NotGeneralizedInverse(
            "X is neither an inner nor an outer inverse of D".into(),
        ));
    }
    if !is_member(d, y, DEFAULT_TOL)? {
        return Err(GinvError::NotGeneralizedInverse(
            "Y is neither an inner nor an outer inverse of D".into(),
        ));
    }
    bilateral_inverse_unchecked(d, x, y)
}

/// `X * D * Y` without membership validation. For callers that construct
/// `X`, `Y` themselves.
pub fn bilateral_inverse_unchecked(
    d: &DenseTensor,
    x: &DenseTensor,
    y: &DenseTensor,
) -> Result<DenseTensor> {
    x.einstein_product(d)?.einstein_product(y)
}

/// The dual `Y * D * X` of the bilateral inverse `X * D * Y`.
pub fn dual_bilateral(d: &DenseTensor, x: &DenseTensor, y: &DenseTensor) -> Result<DenseTensor> {
    bilateral_inverse(d, y, x)
}

/// Closure cases for products of inner/outer inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureCase {
    /// `X, Y ∈ D{1,2}` implies both products in `D{1,2}`.
    Both12,
    /// `X ∈ D{2}`, `Y ∈ D{1}` implies both products in `D{2}`.
    OuterInner,
    /// `X, Y ∈ D{1}` implies both products in `D{1}`.
    Both1,
}

/// Checks the closure property of `X * D * Y` and `Y * D * X` for the
/// claimed membership case. Errors when `X`/`Y` fail their own claimed
/// membership.
pub fn closure_check(
    d: &DenseTensor,
    x: &DenseTensor,
    y: &DenseTensor,
    case: ClosureCase,
    tol: f64,
) -> Result<bool> {
    let check_pre = |t: &DenseTensor, inner: bool, outer: bool, name: &str| -> Result<()> {
        if inner && is_inner(d, t)? > tol {
            return Err(GinvError::PreconditionViolated(format!(
                "{name} is not an inner inverse"
            )));
        }
        if outer && is_outer(d, t)? > tol {
            return Err(GinvError::PreconditionViolated(format!(
                "{name} is not an outer inverse"
            )));
        }
        Ok(())
    };
    match case {
        ClosureCase::Both12 => {
            check_pre(x, true, true, "X")?;
            check_pre(y, true, true, "Y")?;
        }
        ClosureCase::OuterInner => {
            check_pre(x, false, true, "X")?;
            check_pre(y, true, false, "Y")?;
        }
        ClosureCase::Both1 => {
            check_pre(x, true, false, "X")?;
            check_pre(y, true, false, "Y")?;
        }
    }
    let xdy = bilateral_inverse_unchecked(d, x, y)?;
    let ydx = bilateral_inverse_unchecked(d, y, x)?;
    let holds = |t: &DenseTensor| -> Result<bool> {
        Ok(match case {
            ClosureCase::Both12 => is_inner(d, t)? <= tol && is_outer(d, t)? <= tol,
            ClosureCase::OuterInner => is_outer(d, t)? <= tol,
            ClosureCase::Both1 => is_inner(d, t)? <= tol,
        })
    };
    Ok(holds(&xdy)? && holds(&ydx)?)
}
