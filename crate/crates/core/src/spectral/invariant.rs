use std::collections::BTreeSet;

use crate::error::{check_dim, Error, Result};
use crate::exactpoly::{Monomial, Polynomial, Rational};
use crate::linalg::{Echelon, Matrix};
use crate::vectorfield::{poly_to_sparse, VectorField};

/// A finite-dimensional subspace of polynomials containing the coordinates
/// and stable under one or more vector fields.
///
/// `basis[i] = x_i` for `i < n`. Matrices act on coordinate columns:
/// `δ(basis[j]) = Σ_i m[(i, j)] basis[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSubspace {
    basis: Vec<Polynomial>,
    echelon: Echelon<Monomial>,
    matrices: Vec<Matrix>,
}

impl InvariantSubspace {
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.basis[0].nvars()
    }

    /// Matrix of the first (or only) field the subspace was built from.
    pub fn matrix(&self) -> &Matrix {
        &self.matrices[0]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.echelon.contains(&poly_to_sparse(p))
    }

    /// Coordinates of `p` in the basis, or `None` when `p` is outside.
    pub fn coordinates(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        if !self.contains(p) {
            return None;
        }
        let monos: BTreeSet<&Monomial> = self.echelon.rows().flat_map(|r| r.keys()).collect();
        let monos: Vec<&Monomial> = monos.into_iter().collect();
        let mut a = Matrix::zeros(monos.len(), self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            for (i, m) in monos.iter().enumerate() {
                a[(i, j)] = b.coeff(m);
            }
        }
        let rhs: Vec<Rational> = monos.iter().map(|m| p.coeff(m)).collect();
        a.solve(&rhs)
    }

    /// The polynomial with the given coordinates.
    pub fn combine(&self, coords: &[Rational]) -> Polynomial {
        let n = self.nvars();
        self.basis
            .iter()
            .zip(coords)
            .fold(Polynomial::zero(n), |acc, (b, c)| &acc + &b.scale(c))
    }

    /// Matrix of an arbitrary field on this subspace; errors if the field
    /// does not preserve it.
    pub fn matrix_of(&self, field: &VectorField) -> Result<Matrix> {
        check_dim(self.nvars(), field.dim())?;
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            let img = field.apply(b)?;
            let c = self
                .coordinates(&img)
                .ok_or_else(|| Error::InvalidArgument(format!("field {field} does not preserve the subspace")))?;
            for (i, v) in c.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// The field whose value on `x_i` is the `i`-th column of `m` read in
    /// this basis.
    pub fn lift(&self, m: &Matrix) -> VectorField {
        let n = self.nvars();
        let coeffs = (0..n).map(|i| self.combine(&m.column(i))).collect();
        VectorField::new(coeffs).expect("dimensions agree")
    }
}

/// Smallest subspace containing the coordinates and stable under `δ`,
/// failing once an image exceeds `degree_cap`.
pub fn find_invariant_subspace(field: &VectorField, degree_cap: usize) -> Result<InvariantSubspace> {
    find_common_invariant_subspace(std::slice::from_ref(field), degree_cap)
}

/// Smallest subspace containing the coordinates and stable under every field.
pub fn find_common_invariant_subspace(fields: &[VectorField], degree_cap: usize) -> Result<InvariantSubspace> {
    let n = fields
        .first()
        .map(VectorField::dim)
        .ok_or_else(|| Error::InvalidArgument("no fields supplied".into()))?;
    for f in fields {
        check_dim(n, f.dim())?;
    }
    let mut basis: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    let mut echelon = Echelon::new();
    for b in &basis {
        echelon.insert(poly_to_sparse(b));
    }
    let mut next = 0;
    while next < basis.len() {
        let b = basis[next].clone();
        for f in fields {
            let img = f.apply(&b)?;
            if img.degree() > degree_cap as i64 {
                return Err(Error::DegreeCapExceeded(degree_cap));
            }
            let rem = echelon.reduce(&poly_to_sparse(&img));
            if !rem.is_empty() {
                echelon.insert(rem.clone());
                basis.push(crate::vectorfield::sparse_to_poly(n, &rem));
            }
        }
        next += 1;
    }
    let mut space = InvariantSubspace { basis, echelon, matrices: Vec::new() };
    space.matrices = fields.iter().map(|f| space.matrix_of(f)).collect::<Result<_>>()?;
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn small_examples() {
        let v = find_invariant_subspace(&vf("[y, 0]"), 4).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(!v.matrix().is_zero());
        assert!(v.matrix().pow(2).is_zero());
        let e = find_invariant_subspace(&vf("[x, y]"), 4).unwrap();
        assert_eq!(e.matrix(), &Matrix::identity(2));
        assert!(matches!(
            find_invariant_subspace(&vf("[2*x^2*y, -2*x*y^2]"), 6),
            Err(Error::DegreeCapExceeded(6))
        ));
    }

    #[test]
    fn quadratic_subspace() {
        // x -> y^2 -> 0, y -> 0
        let v = find_invariant_subspace(&vf("[y^2, 0]"), 4).unwrap();
        assert_eq!(v.dim(), 3);
        let lifted = v.lift(v.matrix());
        assert_eq!(lifted, vf("[y^2, 0]"));
    }
}
