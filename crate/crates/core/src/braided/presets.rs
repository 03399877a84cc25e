//! Named braided vector spaces used as fixtures.

use super::{BraidedSpace, Kind};
use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::scalar::CycloField;

/// Diagonal type: c(x_i⊗x_j) = q_ij x_j⊗x_i.
pub fn quantum_linear(field: &'static CycloField, q: Vec<Vec<Scalar>>, budget: usize) -> Result<BraidedSpace> {
    diagonal_with_kind(field, q.clone(), Kind::Diagonal(q), budget)
}

fn diagonal_with_kind(field: &'static CycloField, q: Vec<Vec<Scalar>>, kind: Kind, budget: usize) -> Result<BraidedSpace> {
    let d = q.len();
    if d == 0 || q.iter().any(|r| r.len() != d) {
        return Err(Error::BadParams("diagonal braiding needs a square matrix".into()));
    }
    if q.iter().flatten().any(|v| v.is_zero()) {
        return Err(Error::BadParams("diagonal braiding entries must be nonzero".into()));
    }
    BraidedSpace::from_rule(field, d, kind, budget, |i, j| vec![(j, i, q[i][j].clone())])
}

pub fn flip(field: &'static CycloField, d: usize, budget: usize) -> Result<BraidedSpace> {
    BraidedSpace::from_rule(field, d, Kind::Flip, budget, |i, j| vec![(j, i, field.one())])
}

/// c = q·Id.
pub fn scalar(field: &'static CycloField, d: usize, q: Scalar, budget: usize) -> Result<BraidedSpace> {
    if q.is_zero() {
        return Err(Error::BadParams("scalar braiding needs q != 0".into()));
    }
    BraidedSpace::from_rule(field, d, Kind::Scalar(q.clone()), budget, |i, j| vec![(i, j, q.clone())])
}

/// The rack braiding on four points: c(z_i⊗z_j) = −z_{2i−j}⊗z_i, indices mod 4.
pub fn d4_rack(field: &'static CycloField, budget: usize) -> Result<BraidedSpace> {
    BraidedSpace::from_rule(field, 4, Kind::Preset("d4_rack".into()), budget, |i, j| {
        vec![((2 * i + 4 - j) % 4, i, field.from_int(-1))]
    })
}

/// Three-dimensional non-Hecke braiding with parameter `mu`, q = mu².
///
/// c fixes the flip on pairs involving e0, c(e_i e_i) = q e_i e_i for i = 1,2,
/// c(e2 e1) = mu e1 e2 + (q−1) e2 e1 and c(e1 e2) = (q/mu) e2 e1.
pub fn gurevich(field: &'static CycloField, mu: Scalar, budget: usize) -> Result<BraidedSpace> {
    if mu.is_zero() {
        return Err(Error::BadParams("gurevich needs mu != 0".into()));
    }
    let q = &mu * &mu;
    if q.is_one() {
        return Err(Error::BadParams("gurevich needs q = mu^2 != 1".into()));
    }
    let q_over_mu = &q * &mu.inv()?;
    let one = field.one();
    BraidedSpace::from_rule(field, 3, Kind::Preset("gurevich".into()), budget, |i, j| {
        if i == 0 || j == 0 {
            vec![(j, i, one.clone())]
        } else if i == j {
            vec![(i, i, q.clone())]
        } else if (i, j) == (2, 1) {
            vec![(1, 2, mu.clone()), (2, 1, &q - &one)]
        } else {
            vec![(2, 1, q_over_mu.clone())]
        }
    })
}

/// Diagonal 2×2 with q_12 = 1 and all other entries −1.
pub fn twodim_sdeg2(field: &'static CycloField, budget: usize) -> Result<BraidedSpace> {
    let m = field.from_int(-1);
    let q = vec![vec![m.clone(), field.one()], vec![m.clone(), m]];
    diagonal_with_kind(field, q, Kind::Preset("twodim_sdeg2".into()), budget)
}

/// The q-matrix of Cartan type A_n: q_ii = q, q_{i,i+1} = q^{−1}, all others 1.
pub fn cartan_matrix(field: &'static CycloField, n: usize, q: &Scalar) -> Result<Vec<Vec<Scalar>>> {
    let qi = q.inv()?;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        q.clone()
                    } else if j == i + 1 {
                        qi.clone()
                    } else {
                        field.one()
                    }
                })
                .collect()
        })
        .collect())
}

pub fn cartan_an(field: &'static CycloField, n: usize, q: Scalar, budget: usize) -> Result<BraidedSpace> {
    if n == 0 {
        return Err(Error::BadParams("cartan_An needs n >= 1".into()));
    }
    let m = cartan_matrix(field, n, &q)?;
    diagonal_with_kind(field, m, Kind::Preset(format!("cartan_A{n}")), budget)
}

/// Standard Hecke braiding of GL_d type with mark q.
pub fn standard_hecke(field: &'static CycloField, d: usize, q: Scalar, budget: usize) -> Result<BraidedSpace> {
    let one = field.one();
    BraidedSpace::from_rule(field, d, Kind::Preset("standard_hecke".into()), budget, |i, j| {
        if i == j {
            vec![(i, i, q.clone())]
        } else if i < j {
            vec![(j, i, q.clone())]
        } else {
            vec![(j, i, one.clone()), (i, j, &q - &one)]
        }
    })
}
