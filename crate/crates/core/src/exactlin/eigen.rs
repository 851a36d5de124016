//! Generalized eigenspaces of degree-preserving endomorphisms.

use super::matrix::Matrix;
use super::multimap::MultiMap;
use super::poly::roots_in_field;
use super::scalar::{Field, Scalar};
use super::space::GradedSpace;
use super::vector::Vector;
use super::ExactError;

/// One generalized eigenspace, with its basis expressed in the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenspace {
    pub eigenvalue: Scalar,
    pub basis: Vec<Vector>,
}

/// Decomposes `endo` restricted to the span of `subspace` (basis indices closed
/// under `endo`) into generalized eigenspaces for eigenvalues in the base field,
/// sorted by eigenvalue.
pub fn eigen_decompose(space: &GradedSpace, subspace: &[u32], endo: &MultiMap) -> Result<Vec<Eigenspace>, ExactError> {
    if endo.arity() != 1 || endo.degree() != 0 {
        return Err(ExactError::Invalid("eigen decomposition needs an arity-1 degree-0 map".into()));
    }
    let field = space.field();
    let n = subspace.len();
    let position: std::collections::HashMap<u32, usize> =
        subspace.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut a = Matrix::zeros(field, n, n);
    for (col, &b) in subspace.iter().enumerate() {
        if let Some(img) = endo.get(&[b]) {
            for (o, c) in img.iter() {
                if space.degree(o) != space.degree(b) {
                    return Err(ExactError::Invalid(format!(
                        "endomorphism moves {} out of its degree",
                        space.label(b)
                    )));
                }
                let row = *position.get(&o).ok_or_else(|| {
                    ExactError::Invalid(format!("endomorphism maps {} outside the subspace", space.label(b)))
                })?;
                a.set(row, col, c.clone());
            }
        }
    }
    let blocks = decompose_matrix(&a)?;
    Ok(blocks
        .into_iter()
        .map(|(eigenvalue, vecs)| Eigenspace {
            eigenvalue,
            basis: vecs
                .into_iter()
                .map(|v| v.into_iter().enumerate().map(|(i, c)| (subspace[i], c)).collect())
                .collect(),
        })
        .collect())
}

/// Generalized eigenspaces of a square matrix as lists of coordinate vectors.
pub fn decompose_matrix(a: &Matrix) -> Result<Vec<(Scalar, Vec<Vec<Scalar>>)>, ExactError> {
    let field: Field = a.field();
    if a.rows() == 0 {
        return Ok(vec![]);
    }
    let (roots, residual) = roots_in_field(&a.charpoly())?;
    if residual > 0 {
        return Err(ExactError::EigenvaluesOutsideField { field, residual_degree: residual });
    }
    let mut out = Vec::new();
    for (lambda, mult) in roots {
        let kernel = a.shifted(&lambda).pow(mult).kernel();
        if kernel.len() != mult {
            return Err(ExactError::Invalid(format!(
                "generalized eigenspace for {lambda} has dimension {} but multiplicity {mult}",
                kernel.len()
            )));
        }
        out.push((lambda, kernel));
    }
    Ok(out)
}
