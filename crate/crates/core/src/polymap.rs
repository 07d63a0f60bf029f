//! Polynomial endomorphisms and automorphisms of affine n-space.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactpoly::{text, Monomial, Polynomial, Rational};
use crate::linalg::Matrix;

/// The map `x -> (f1(x), ..., fn(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    comps: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(comps: Vec<Polynomial>) -> Result<Self> {
        let n = comps.len();
        for c in &comps {
            check_dim(n, c.nvars())?;
        }
        Ok(PolyMap { comps })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { comps: (0..n).map(|i| Polynomial::var(n, i)).collect() }
    }

    /// `x -> A x + b`.
    pub fn affine(a: &Matrix, b: &[Rational]) -> Result<Self> {
        let n = a.rows();
        check_dim(n, a.cols())?;
        check_dim(n, b.len())?;
        let comps = (0..n)
            .map(|i| {
                let mut terms: Vec<(Monomial, Rational)> =
                    (0..n).map(|j| (Monomial::var(n, j), a[(i, j)].clone())).collect();
                terms.push((Monomial::one(n), b[i].clone()));
                Polynomial::from_terms(n, terms)
            })
            .collect();
        Ok(PolyMap { comps })
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(text::parse_list(src, '(', ')')?)
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.comps
    }

    /// `self ∘ h`, i.e. `x -> self(h(x))`.
    pub fn compose(&self, h: &PolyMap) -> Result<PolyMap> {
        check_dim(self.dim(), h.dim())?;
        let comps = self.comps.iter().map(|f| f.substitute(&h.comps)).collect::<Result<_>>()?;
        Ok(PolyMap { comps })
    }

    /// `self ∘ h` modulo terms of degree above `max_degree`.
    pub fn compose_truncated(&self, h: &PolyMap, max_degree: u32) -> Result<PolyMap> {
        check_dim(self.dim(), h.dim())?;
        let comps = self
            .comps
            .iter()
            .map(|f| f.substitute_truncated(&h.comps, max_degree))
            .collect::<Result<_>>()?;
        Ok(PolyMap { comps })
    }

    pub fn truncate(&self, max_degree: u32) -> PolyMap {
        PolyMap { comps: self.comps.iter().map(|c| c.truncate(max_degree)).collect() }
    }

    /// The Jacobian matrix `(∂f_i/∂x_j)` and its determinant.
    pub fn jacobian(&self) -> (Vec<Vec<Polynomial>>, Polynomial) {
        let n = self.dim();
        let m: Vec<Vec<Polynomial>> = self
            .comps
            .iter()
            .map(|f| (0..n).map(|j| f.partial_derivative(j).expect("index in range")).collect())
            .collect();
        let det = poly_det(&m, n);
        (m, det)
    }

    /// Degree-one coefficients, i.e. the differential at the origin.
    pub fn linear_part(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (i, f) in self.comps.iter().enumerate() {
            for j in 0..n {
                m[(i, j)] = f.coeff(&Monomial::var(n, j));
            }
        }
        m
    }

    pub fn constant_part(&self) -> Vec<Rational> {
        self.comps.iter().map(Polynomial::constant_term).collect()
    }

    pub fn apply_point(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        self.comps.iter().map(|f| f.eval(p)).collect()
    }

    /// Maximum total degree of the components.
    pub fn degree(&self) -> i64 {
        self.comps.iter().map(Polynomial::degree).max().unwrap_or(-1)
    }

    pub fn is_identity(&self) -> bool {
        self.comps.iter().enumerate().all(|(i, c)| *c == Polynomial::var(self.dim(), i))
    }

    pub fn fixes_origin(&self) -> bool {
        self.constant_part().iter().all(Zero::is_zero)
    }
}

fn poly_det(m: &[Vec<Polynomial>], n: usize) -> Polynomial {
    let nv = m.first().and_then(|r| r.first()).map_or(n, Polynomial::nvars);
    match m.len() {
        0 => Polynomial::one(nv),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut acc = Polynomial::zero(nv);
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][j] * &poly_det(&minor, n);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_list(&self.comps, '(', ')'))
    }
}

/// A polynomial automorphism together with a certified inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    forward: PolyMap,
    inverse: PolyMap,
}

impl Automorphism {
    /// Pair a map with a claimed inverse, checking both round trips exactly.
    pub fn new(forward: PolyMap, inverse: PolyMap) -> Result<Self> {
        check_dim(forward.dim(), inverse.dim())?;
        if !forward.compose(&inverse)?.is_identity() || !inverse.compose(&forward)?.is_identity() {
            return Err(Error::NotAutomorphism("supplied inverse does not invert the map".into()));
        }
        Ok(Automorphism { forward, inverse })
    }

    /// Caller guarantees that `inverse` inverts `forward`.
    pub(crate) fn from_parts_unchecked(forward: PolyMap, inverse: PolyMap) -> Self {
        Automorphism { forward, inverse }
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { forward: PolyMap::identity(n), inverse: PolyMap::identity(n) }
    }

    /// Invertible affine map `x -> A x + b`.
    pub fn affine(a: &Matrix, b: &[Rational]) -> Result<Self> {
        let inv = a
            .inverse()
            .ok_or_else(|| Error::NotAutomorphism("singular linear part".into()))?;
        let shift: Vec<Rational> = inv.mul_vec(b).into_iter().map(|v| -v).collect();
        Ok(Automorphism { forward: PolyMap::affine(a, b)?, inverse: PolyMap::affine(&inv, &shift)? })
    }

    /// Elementary map `x_i -> c x_i + p`, where `p` does not involve `x_i`.
    pub fn elementary(n: usize, i: usize, c: Rational, p: &Polynomial) -> Result<Self> {
        check_dim(n, p.nvars())?;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        if c.is_zero() {
            return Err(Error::NotAutomorphism("zero scaling".into()));
        }
        if p.degree_in(i) > 0 {
            return Err(Error::InvalidArgument(format!("shift involves {}", text::var_name(n, i))));
        }
        let xi = Polynomial::var(n, i);
        let mut fwd = PolyMap::identity(n).comps;
        fwd[i] = &xi.scale(&c) + p;
        let mut inv = PolyMap::identity(n).comps;
        inv[i] = (&xi - p).scale(&(Rational::one() / c));
        Ok(Automorphism { forward: PolyMap { comps: fwd }, inverse: PolyMap { comps: inv } })
    }

    /// `f1 ∘ f2 ∘ ... ∘ fk`; inverses are composed in reverse order.
    pub fn from_factors(factors: &[Automorphism], n: usize) -> Result<Self> {
        let mut acc = Automorphism::identity(n);
        for f in factors.iter().rev() {
            acc = f.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn forward(&self) -> &PolyMap {
        &self.forward
    }

    pub fn inverse(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.forward.dim()
    }

    pub fn inverted(&self) -> Automorphism {
        Automorphism { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: self.forward.compose(&other.forward)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }

    pub fn into_parts(self) -> (PolyMap, PolyMap) {
        (self.forward, self.inverse)
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.forward.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    fn m(s: &str) -> PolyMap {
        PolyMap::parse(s).unwrap()
    }

    #[test]
    fn composition_examples() {
        let u = m("(x+y^2, y)");
        let v = m("(x, y+x^2)");
        assert_eq!(u.compose(&v).unwrap().to_string(), "(x^4 + 2*x^2*y + y^2 + x, x^2 + y)");
        let tau = m("(y, x)");
        assert_eq!(tau.compose(&u).unwrap().compose(&tau).unwrap(), v);
        assert_eq!(PolyMap::identity(2).compose(&u).unwrap(), u);
        assert!(u.compose(&m("(x1, x2, x3)")).is_err());
    }

    #[test]
    fn jacobian_and_linear_part() {
        let phi = m("(x+y^2, y)").compose(&m("(x, y+x^2)")).unwrap();
        assert!(phi.jacobian().1.is_constant());
        assert_eq!(phi.jacobian().1.constant_term(), int(1));
        assert_eq!(phi.linear_part(), Matrix::identity(2));
        assert_eq!(phi.degree(), 4);
        assert_eq!(m("(2*x, 3*y)").linear_part(), Matrix::from_ints(&[&[2, 0], &[0, 3]]));
        let (_, det) = m("(x1 + x2*x3, x2, 2*x3)").jacobian();
        assert_eq!(det.to_string(), "2");
    }

    #[test]
    fn points() {
        assert_eq!(m("(x, y+x^2)").apply_point(&[int(1), int(0)]).unwrap(), vec![int(1), int(1)]);
        assert_eq!(m("(y, x)").apply_point(&[int(4), int(7)]).unwrap(), vec![int(7), int(4)]);
    }

    #[test]
    fn automorphism_constructors() {
        let u = Automorphism::elementary(2, 0, int(1), &Polynomial::var(2, 1).pow(2)).unwrap();
        assert_eq!(u.inverse().to_string(), "(-y^2 + x, y)");
        let a = Automorphism::affine(&Matrix::from_ints(&[&[1, 2], &[0, 1]]), &[int(1), int(-1)]).unwrap();
        assert!(Automorphism::new(a.forward().clone(), a.inverse().clone()).is_ok());
        let w = Automorphism::from_factors(&[u.clone(), a.clone(), u.clone()], 2).unwrap();
        assert!(w.forward().compose(w.inverse()).unwrap().is_identity());
        assert!(Automorphism::new(m("(x+y^2, y)"), m("(x+y^2, y)")).is_err());
    }
}
