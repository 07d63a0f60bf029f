use serde_json::{json, Value};

use super::invariant::{find_invariant_subspace, InvariantSubspace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::vectorfield::VectorField;

/// Additive Jordan-Chevalley decomposition `A = S + N` of a square matrix.
///
/// Newton iteration `S <- S - p(S) p'(S)^{-1}` on the squarefree part `p`
/// of the characteristic polynomial. Everything stays rational; no
/// eigenvalues are computed.
pub fn jordan_chevalley(a: &Matrix) -> (Matrix, Matrix) {
    let p = a.charpoly().squarefree_part();
    let dp = p.derivative();
    let mut s = a.clone();
    loop {
        let ps = s.eval_poly(&p);
        if ps.is_zero() {
            break;
        }
        let inv = s.eval_poly(&dp).inverse().expect("p' is invertible at S when p is squarefree");
        s = s.sub(&ps.mul(&inv));
    }
    let n = a.sub(&s);
    (s, n)
}

/// Semisimple and nilpotent parts of a locally finite field, with the
/// invariant subspace on which they were computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanPair {
    pub semisimple: VectorField,
    pub nilpotent: VectorField,
    pub subspace: InvariantSubspace,
    pub semisimple_matrix: Matrix,
    pub nilpotent_matrix: Matrix,
}

impl JordanPair {
    pub fn to_json(&self) -> Value {
        json!({
            "semisimple": self.semisimple.to_string(),
            "nilpotent": self.nilpotent.to_string(),
            "subspace": self.subspace.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "semisimple_matrix": matrix_json(&self.semisimple_matrix),
            "nilpotent_matrix": matrix_json(&self.nilpotent_matrix),
        })
    }
}

pub(crate) fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|v| Value::String(v.to_string())).collect()))
            .collect(),
    )
}

/// Jordan parts of `δ`, computed on its smallest invariant subspace
/// containing the coordinates and lifted back through their action on the
/// coordinates.
pub fn jordan_decompose(field: &VectorField, degree_cap: usize) -> Result<JordanPair> {
    let space = find_invariant_subspace(field, degree_cap)?;
    jordan_on(field, space)
}

pub(crate) fn jordan_on(field: &VectorField, space: InvariantSubspace) -> Result<JordanPair> {
    let a = space.matrix_of(field)?;
    let (s, n) = jordan_chevalley(&a);
    let semisimple = space.lift(&s);
    let nilpotent = field.sub(&semisimple);
    // The lifted derivations must act on the subspace by exactly S and N.
    if space.matrix_of(&semisimple)? != s || space.matrix_of(&nilpotent)? != n {
        return Err(Error::Internal("lifted Jordan parts do not reproduce the matrices".into()));
    }
    Ok(JordanPair { semisimple, nilpotent, subspace: space, semisimple_matrix: s, nilpotent_matrix: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn matrix_split() {
        let a = Matrix::from_ints(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
        let (s, n) = jordan_chevalley(&a);
        assert_eq!(s, Matrix::from_ints(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]));
        assert!(n.is_nilpotent());
        assert!(s.commutator(&n).is_zero());
        // Irreducible quadratic: semisimple over the closure, untouched.
        let r = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        assert_eq!(jordan_chevalley(&r).0, r);
    }

    #[test]
    fn field_examples() {
        let j = jordan_decompose(&vf("[x + y, y]"), 4).unwrap();
        assert_eq!(j.semisimple, vf("[x, y]"));
        assert_eq!(j.nilpotent, vf("[y, 0]"));
        let j = jordan_decompose(&vf("[y, 0]"), 4).unwrap();
        assert!(j.semisimple.is_zero());
        let j = jordan_decompose(&vf("[x, 0]"), 4).unwrap();
        assert!(j.nilpotent.is_zero());
    }

    #[test]
    fn nonlinear_subspace() {
        // δ = (2x + y^2)∂x + y∂y preserves span{x, y, y^2}
        let d = vf("[2*x + y^2, y]");
        let j = jordan_decompose(&d, 4).unwrap();
        assert!(j.semisimple.bracket(&j.nilpotent).unwrap().is_zero());
        assert!(j.semisimple_matrix.is_semisimple());
        assert!(j.nilpotent_matrix.is_nilpotent());
        assert_eq!(j.semisimple.add(&j.nilpotent), d);
        assert_eq!(j.semisimple, vf("[2*x, y]"));
        assert_eq!(j.nilpotent, vf("[y^2, 0]"));
    }
}
