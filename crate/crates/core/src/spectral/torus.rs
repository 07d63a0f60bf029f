use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactpoly::{Monomial, Rational};
use crate::linalg::Matrix;
use crate::polymap::Automorphism;
use crate::vectorfield::{diagonal_field, VectorField};

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Returns the nonzero rows: upper echelon, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // Euclid on column c below row r until one nonzero entry remains.
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|v| !v.is_zero()));
    m
}

/// The minimal torus of a commuting family of diagonal fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusData {
    pub rank: usize,
    /// `rank x n`: weight of coordinate `x_i` under torus factor `j`.
    pub weight_matrix: Vec<Vec<BigInt>>,
    /// Basis of the weight lattice, as vectors indexed by the input fields.
    pub lattice_basis: Vec<Vec<Rational>>,
    /// `Σ_i w_{j,i} x_i ∂/∂x_i`, one per torus factor, in the diagonal
    /// coordinates.
    pub generators: Vec<VectorField>,
}

fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

impl TorusData {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "weight_matrix": self.weight_matrix.iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "lattice_basis": self.lattice_basis.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Diagonal coefficients `c_i` of `Σ c_i x_i ∂/∂x_i`, if the field has that form.
pub fn diagonal_coefficients(field: &VectorField) -> Option<Vec<Rational>> {
    let n = field.dim();
    (0..n)
        .map(|i| {
            let f = field.coeff(i);
            match f.len() {
                0 => Some(Rational::zero()),
                1 => {
                    let (m, c) = f.leading_term()?;
                    (*m == Monomial::var(n, i)).then(|| c.clone())
                }
                _ => None,
            }
        })
        .collect()
}

/// Smallest torus whose Lie algebra contains the given toral fields.
///
/// With a `conjugator` `c`, the fields are first replaced by `c·δ`, which
/// must be diagonal. Weights of all monomials up to `degree_cap` are
/// collected; the lattice they span is put in Hermite normal form.
pub fn minimal_torus(
    fields: &[VectorField],
    degree_cap: usize,
    conjugator: Option<&Automorphism>,
) -> Result<TorusData> {
    let n = fields
        .first()
        .map(VectorField::dim)
        .ok_or_else(|| Error::InvalidArgument("no fields supplied".into()))?;
    let fields: Vec<VectorField> = match conjugator {
        Some(c) => fields.iter().map(|f| f.pushforward(c)).collect::<Result<_>>()?,
        None => fields.to_vec(),
    };
    for (i, a) in fields.iter().enumerate() {
        for b in &fields[i + 1..] {
            if !a.bracket(b)?.is_zero() {
                return Err(Error::NonCommuting);
            }
        }
    }
    let diag: Vec<Vec<Rational>> = fields
        .iter()
        .map(|f| diagonal_coefficients(f).ok_or_else(|| Error::NonDiagonal(f.to_string())))
        .collect::<Result<_>>()?;
    let k = fields.len();
    // Weight of x^a under field r is Σ_i a_i c_{r,i}; scale to integers.
    let denom = diag.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let coord_weight = |i: usize| -> Vec<BigInt> {
        (0..k).map(|r| (&diag[r][i] * Rational::from_integer(denom.clone())).to_integer()).collect()
    };
    let coord: Vec<Vec<BigInt>> = (0..n).map(coord_weight).collect();
    let mut weights = Vec::new();
    for mono in monomials_up_to(n, degree_cap.max(1)) {
        let w: Vec<BigInt> = (0..k)
            .map(|r| (0..n).map(|i| &coord[i][r] * BigInt::from(mono[i])).sum())
            .collect();
        weights.push(w);
    }
    let hnf = hermite_normal_form(&weights);
    let rank = hnf.len();
    // Express each coordinate weight in the lattice basis.
    let mut basis_t = Matrix::zeros(k, rank);
    for (j, b) in hnf.iter().enumerate() {
        for r in 0..k {
            basis_t[(r, j)] = Rational::from_integer(b[r].clone());
        }
    }
    let mut weight_matrix = vec![vec![BigInt::zero(); n]; rank];
    for i in 0..n {
        let rhs: Vec<Rational> = coord[i].iter().map(|v| Rational::from_integer(v.clone())).collect();
        let sol = basis_t
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("coordinate weight outside the lattice".into()))?;
        for (j, v) in sol.into_iter().enumerate() {
            if !v.is_integer() {
                return Err(Error::Internal("non-integral lattice coordinates".into()));
            }
            weight_matrix[j][i] = v.to_integer();
        }
    }
    let scale = Rational::new(BigInt::one(), denom);
    let lattice_basis = hnf
        .iter()
        .map(|b| b.iter().map(|v| Rational::from_integer(v.clone()) * &scale).collect())
        .collect();
    let generators = weight_matrix
        .iter()
        .map(|row| diagonal_field(&row.iter().map(|v| Rational::from_integer(v.clone())).collect::<Vec<_>>()))
        .collect();
    Ok(TorusData { rank, weight_matrix, lattice_basis, generators })
}

fn monomials_up_to(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    let mut frontier = out.clone();
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &frontier {
            // Only raise variables at or after the last nonzero one to
            // enumerate each monomial once.
            let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in start..n {
                let mut e = m.clone();
                e[i] += 1;
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn hnf_small() {
        assert_eq!(hermite_normal_form(&ints(&[&[2], &[3]])), ints(&[&[1]]));
        assert_eq!(hermite_normal_form(&ints(&[&[2, 4], &[0, 6], &[2, 10]])), ints(&[&[2, 4], &[0, 6]]));
        assert_eq!(hermite_normal_form(&ints(&[&[4, 1], &[2, 3]])), ints(&[&[2, 3], &[0, 5]]));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }

    #[test]
    fn torus_examples() {
        let t = minimal_torus(&[vf("[x, y]")], 6, None).unwrap();
        assert_eq!(t.rank, 1);
        assert_eq!(t.weight_matrix, ints(&[&[1, 1]]));
        let t = minimal_torus(&[vf("[2*x, 3*y]")], 6, None).unwrap();
        assert_eq!(t.weight_matrix, ints(&[&[2, 3]]));
        let t = minimal_torus(&[vf("[x, 0]"), vf("[0, y]")], 6, None).unwrap();
        assert_eq!(t.rank, 2);
        assert_eq!(t.weight_matrix, ints(&[&[1, 0], &[0, 1]]));
        let t = minimal_torus(&[vf("[1/2*x, -1/3*y]")], 6, None).unwrap();
        assert_eq!(t.weight_matrix, ints(&[&[3, -2]]));
        assert!(matches!(minimal_torus(&[vf("[y, 0]")], 6, None), Err(Error::NonDiagonal(_))));
    }
}
