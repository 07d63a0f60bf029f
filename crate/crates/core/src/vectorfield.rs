//! Polynomial vector fields `δ = Σ f_i ∂/∂x_i` acting as derivations.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::exactpoly::{text, Monomial, Polynomial, Rational};
use crate::linalg::{Echelon, SparseVec};
use crate::polymap::Automorphism;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    coeffs: Vec<Polynomial>,
}

/// Outcome of a bounded local-nilpotency test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Index of one coordinate of a flattened vector field: a monomial in
/// component `coord`. Ordered by monomial (graded lex), then by lower
/// coordinate index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldKey {
    pub mono: Monomial,
    pub coord: usize,
}

impl Ord for FieldKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mono.cmp(&other.mono).then_with(|| Reverse(self.coord).cmp(&Reverse(other.coord)))
    }
}

impl PartialOrd for FieldKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn poly_to_sparse(p: &Polynomial) -> SparseVec<Monomial> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

pub(crate) fn sparse_to_poly(nvars: usize, v: &SparseVec<Monomial>) -> Polynomial {
    Polynomial::from_terms(nvars, v.iter().map(|(m, c)| (m.clone(), c.clone())))
}

impl VectorField {
    pub fn new(coeffs: Vec<Polynomial>) -> Result<Self> {
        let n = coeffs.len();
        for c in &coeffs {
            check_dim(n, c.nvars())?;
        }
        Ok(VectorField { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        VectorField { coeffs: vec![Polynomial::zero(n); n] }
    }

    /// `p ∂/∂x_i`
    pub fn single(n: usize, i: usize, p: Polynomial) -> Self {
        let mut f = Self::zero(n);
        f.coeffs[i] = p;
        f
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(text::parse_list(src, '[', ']')?)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Polynomial {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.iter().map(Polynomial::degree).max().unwrap_or(-1)
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rational) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    /// `δ(p) = Σ f_i ∂p/∂x_i`
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        check_dim(self.dim(), p.nvars())?;
        let mut acc = Polynomial::zero(self.dim());
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let d = p.partial_derivative(i)?;
            if !d.is_zero() {
                acc = &acc + &(f * &d);
            }
        }
        Ok(acc)
    }

    /// `[δ, η]`, acting on `x_i` as `δ(η(x_i)) - η(δ(x_i))`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        check_dim(self.dim(), other.dim())?;
        let coeffs = (0..self.dim())
            .map(|i| Ok(&self.apply(&other.coeffs[i])? - &other.apply(&self.coeffs[i])?))
            .collect::<Result<_>>()?;
        Ok(VectorField { coeffs })
    }

    pub fn divergence(&self) -> Polynomial {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Polynomial::zero(self.dim()), |acc, (i, f)| &acc + &f.partial_derivative(i).expect("index in range"))
    }

    /// The conjugated field `g·δ`, with `(g·δ)(p) = δ(p ∘ g) ∘ g⁻¹`.
    pub fn pushforward(&self, g: &Automorphism) -> Result<VectorField> {
        check_dim(self.dim(), g.dim())?;
        let inv = g.inverse().components();
        let coeffs = g
            .forward()
            .components()
            .iter()
            .map(|gi| self.apply(gi)?.substitute(inv))
            .collect::<Result<_>>()?;
        Ok(VectorField { coeffs })
    }

    /// Iterates `δ^k(p)` for `k = 0..=count`.
    pub fn iterates(&self, p: &Polynomial, count: usize) -> Result<Vec<Polynomial>> {
        let mut out = vec![p.clone()];
        for _ in 0..count {
            let next = self.apply(out.last().unwrap())?;
            let stop = next.is_zero();
            out.push(next);
            if stop {
                break;
            }
        }
        Ok(out)
    }

    /// For each coordinate the least `k <= bound` with `δ^k(x_i) = 0`.
    pub fn nilpotency_orders(&self, bound: usize) -> Result<Option<Vec<usize>>> {
        let n = self.dim();
        let mut orders = Vec::with_capacity(n);
        for i in 0..n {
            let its = self.iterates(&Polynomial::var(n, i), bound)?;
            match its.iter().position(Polynomial::is_zero) {
                Some(k) => orders.push(k),
                None => return Ok(None),
            }
        }
        Ok(Some(orders))
    }

    /// Bounded test for local nilpotency.
    ///
    /// `True` when every coordinate is killed within `bound` steps (the
    /// coordinates generate the ring). `False` only with a certificate: a
    /// nonzero iterate `δ^k(x_i)` in the span of `x_i, ..., δ^{k-1}(x_i)`,
    /// which makes the cyclic subspace of `x_i` invariant with a minimal
    /// polynomial other than `t^k`.
    pub fn is_locally_nilpotent(&self, bound: usize) -> Result<Verdict> {
        if bound == 0 {
            return Err(Error::InvalidArgument("bound must be at least 1".into()));
        }
        let n = self.dim();
        let mut all_killed = true;
        for i in 0..n {
            let mut span: Echelon<Monomial> = Echelon::new();
            let mut cur = Polynomial::var(n, i);
            let mut killed = false;
            for _ in 0..=bound {
                if cur.is_zero() {
                    killed = true;
                    break;
                }
                if !span.insert(poly_to_sparse(&cur)) {
                    return Ok(Verdict::False);
                }
                cur = self.apply(&cur)?;
            }
            all_killed &= killed;
        }
        Ok(if all_killed { Verdict::True } else { Verdict::Inconclusive })
    }

    /// Flatten into a sparse coefficient vector.
    pub fn to_sparse(&self) -> SparseVec<FieldKey> {
        let mut out = BTreeMap::new();
        for (coord, f) in self.coeffs.iter().enumerate() {
            for (m, c) in f.terms() {
                out.insert(FieldKey { mono: m.clone(), coord }, c.clone());
            }
        }
        out
    }

    pub fn from_sparse(n: usize, v: &SparseVec<FieldKey>) -> VectorField {
        let mut parts: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); n];
        for (k, c) in v {
            parts[k.coord].push((k.mono.clone(), c.clone()));
        }
        VectorField { coeffs: parts.into_iter().map(|t| Polynomial::from_terms(n, t)).collect() }
    }

    /// Coefficients in the divergence-free basis `∂_{i,j}` of the plane.
    pub fn expand_in_partial_basis(&self) -> Result<BTreeMap<(i64, i64), Rational>> {
        check_dim(2, self.dim())?;
        let div = self.divergence();
        if !div.is_zero() {
            return Err(Error::NonzeroDivergence(div.to_string()));
        }
        let mut out = BTreeMap::new();
        for (m, c) in self.coeffs[0].terms() {
            let (a, b) = (m.exponent(0) as i64, m.exponent(1) as i64);
            out.insert((a - 1, b), c / Rational::from_integer((b + 1).into()));
        }
        let mut rest = self.clone();
        for (&(i, j), c) in &out {
            rest = rest.sub(&partial_basis_field(i, j)?.scale(c));
        }
        for (m, c) in rest.coeffs[1].terms() {
            let a = m.exponent(0) as i64;
            if m.exponent(1) != 0 || !rest.coeffs[0].is_zero() {
                return Err(Error::Internal("residual after ∂x elimination is not a function of x".into()));
            }
            out.insert((a, -1), -c / Rational::from_integer((a + 1).into()));
        }
        Ok(out)
    }

    /// Whether every basis weight `(i, j)` in the expansion has `i ≡ j mod 3`.
    pub fn is_s_invariant(&self) -> Result<bool> {
        Ok(self.expand_in_partial_basis()?.keys().all(|&(i, j)| (i - j).rem_euclid(3) == 0))
    }
}

/// Whether `(i, j)` indexes a basis field: `i, j >= -1`, not both `-1`.
pub fn in_lambda(i: i64, j: i64) -> bool {
    i >= -1 && j >= -1 && (i, j) != (-1, -1)
}

/// `∂_{i,j} = (j+1) x^{i+1} y^j ∂x - (i+1) x^i y^{j+1} ∂y`.
pub fn partial_basis_field(i: i64, j: i64) -> Result<VectorField> {
    if !in_lambda(i, j) {
        return Err(Error::NotInLambda(i, j));
    }
    let mono = |a: i64, b: i64, c: i64| -> Polynomial {
        if c == 0 {
            Polynomial::zero(2)
        } else {
            Polynomial::monomial(Monomial::from_exponents(&[a as u32, b as u32]), Rational::from_integer(c.into()))
        }
    };
    Ok(VectorField { coeffs: vec![mono(i + 1, j, j + 1), mono(i, j + 1, -(i + 1))] })
}

/// Reassemble `Σ c_{i,j} ∂_{i,j}`.
pub fn from_partial_basis(coeffs: &BTreeMap<(i64, i64), Rational>) -> Result<VectorField> {
    let mut acc = VectorField::zero(2);
    for (&(i, j), c) in coeffs {
        acc = acc.add(&partial_basis_field(i, j)?.scale(c));
    }
    Ok(acc)
}

/// The Euler-type field `Σ w_i x_i ∂/∂x_i`.
pub fn diagonal_field(weights: &[Rational]) -> VectorField {
    let n = weights.len();
    VectorField {
        coeffs: weights.iter().enumerate().map(|(i, w)| Polynomial::var(n, i).scale(w)).collect(),
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_list(&self.coeffs, '[', ']'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;
    use crate::polymap::PolyMap;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        crate::exactpoly::parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn apply_and_bracket() {
        assert_eq!(vf("[y, 0]").apply(&p("x")).unwrap(), p("y"));
        assert!(vf("[y, 0]").apply(&p("y")).unwrap().is_zero());
        assert_eq!(partial_basis_field(-1, 2).unwrap().apply(&p("x")).unwrap(), p("3*y^2"));
        assert_eq!(vf("[y, 0]").bracket(&vf("[0, x]")).unwrap().to_string(), "[-x, y]");
        let d = vf("[x^2*y, x - y^3]");
        assert!(d.bracket(&d).unwrap().is_zero());
    }

    #[test]
    fn basis_fields() {
        assert_eq!(partial_basis_field(-1, 2).unwrap().to_string(), "[3*y^2, 0]");
        assert_eq!(partial_basis_field(2, -1).unwrap().to_string(), "[0, -3*x^2]");
        assert_eq!(partial_basis_field(0, 0).unwrap().to_string(), "[x, -y]");
        assert!(matches!(partial_basis_field(-1, -1), Err(Error::NotInLambda(-1, -1))));
        assert!(partial_basis_field(-2, 3).is_err());
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(vf("[x, y]").divergence(), p("2"));
        assert!(vf("[y, 0]").divergence().is_zero());
        assert!(partial_basis_field(3, 5).unwrap().divergence().is_zero());
    }

    #[test]
    fn expansion() {
        let e = vf("[3*y^2, 0]").expand_in_partial_basis().unwrap();
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![((-1, 2), int(1))]);
        let e = vf("[x, -y]").expand_in_partial_basis().unwrap();
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![((0, 0), int(1))]);
        let b = partial_basis_field(-1, 2).unwrap().bracket(&partial_basis_field(0, 0).unwrap()).unwrap();
        let e = b.expand_in_partial_basis().unwrap();
        assert_eq!(e.into_iter().collect::<Vec<_>>(), vec![((-1, 2), int(3))]);
        let mixed = vf("[x*y + 1, x^3 - 1/2*y^2]");
        let e = mixed.expand_in_partial_basis().unwrap();
        assert_eq!(from_partial_basis(&e).unwrap(), mixed);
        assert!(matches!(vf("[x, y]").expand_in_partial_basis(), Err(Error::NonzeroDivergence(_))));
    }

    #[test]
    fn pushforward_examples() {
        let tau = Automorphism::new(PolyMap::parse("(y, x)").unwrap(), PolyMap::parse("(y, x)").unwrap()).unwrap();
        assert_eq!(vf("[y, 0]").pushforward(&tau).unwrap(), vf("[0, x]"));
        let d = vf("[x*y, y^2 + 1]");
        assert_eq!(d.pushforward(&Automorphism::identity(2)).unwrap(), d);
    }

    #[test]
    fn nilpotency_verdicts() {
        assert_eq!(vf("[y, 0]").is_locally_nilpotent(5).unwrap(), Verdict::True);
        assert_eq!(vf("[x, 0]").is_locally_nilpotent(5).unwrap(), Verdict::False);
        let v = vf("[2*x^2*y, -2*x*y^2]").is_locally_nilpotent(8).unwrap();
        assert_ne!(v, Verdict::True);
        assert_eq!(partial_basis_field(-1, 4).unwrap().is_locally_nilpotent(3).unwrap(), Verdict::True);
    }
}
