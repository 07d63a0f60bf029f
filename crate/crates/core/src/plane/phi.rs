//! Powers of `φ = u ∘ v = (x + (y + x²)², y + x²)` and the torus
//! degenerations built from them.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::sgroup::{mono2, torus_conjugation_limit};
use crate::error::{Error, Result};
use crate::exactpoly::{Polynomial, Rational, UPoly};
use crate::polymap::PolyMap;

/// `φ ∘ (f, h) = (f + h² + 2f²h + f⁴, h + f²)`, optionally truncated.
fn phi_left(f: &Polynomial, h: &Polynomial, cap: Option<u32>) -> (Polynomial, Polynomial) {
    let sq = |p: &Polynomial| match cap {
        Some(d) => p.mul_truncated(p, d),
        None => p * p,
    };
    let h2 = h + &sq(f);
    let f2 = f + &sq(&h2);
    (f2, h2)
}

pub fn phi() -> PolyMap {
    phi_power(1)
}

/// `φ^k`, fully expanded. The degree is `4^k`, so this is only practical
/// for small `k`.
pub fn phi_power(k: usize) -> PolyMap {
    phi_iterate(k, None)
}

/// `φ^k` modulo monomials of degree above `max_degree`. Exact on the kept
/// terms because every component vanishes at the origin.
pub fn phi_power_truncated(k: usize, max_degree: u32) -> PolyMap {
    phi_iterate(k, Some(max_degree))
}

fn phi_iterate(k: usize, cap: Option<u32>) -> PolyMap {
    let mut f = Polynomial::var(2, 0);
    let mut h = Polynomial::var(2, 1);
    for _ in 0..k {
        (f, h) = phi_left(&f, &h, cap);
    }
    PolyMap::new(vec![f, h]).expect("plane map")
}

/// The coefficient of `y^(3k-1)` in the first component of `φ^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YTermReport {
    pub k: usize,
    pub coefficient: Rational,
    /// The same coefficient from the univariate recursion along `x = 0`.
    pub recurrence: Rational,
}

impl YTermReport {
    pub fn holds(&self) -> bool {
        self.coefficient.is_positive() && self.coefficient == self.recurrence
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "coefficient": self.coefficient.to_string(),
            "recurrence": self.recurrence.to_string(),
            "positive": self.coefficient.is_positive(),
            "holds": self.holds(),
        })
    }
}

fn upoly_truncate(p: &UPoly, d: usize) -> UPoly {
    UPoly::from_coeffs(p.coeffs().iter().take(d + 1).cloned().collect())
}

/// Along `x = 0`: `f ← f + h² + 2f²h + f⁴`, `h ← h + f²`.
fn axis_recurrence(k: usize, d: usize) -> (UPoly, UPoly) {
    let mut f = UPoly::zero();
    let mut h = UPoly::t();
    for _ in 0..k {
        let h2 = upoly_truncate(&h.add(&f.mul(&f)), d);
        let f2 = upoly_truncate(&f.add(&h2.mul(&h2)), d);
        (f, h) = (f2, h2);
    }
    (f, h)
}

pub fn check_y_term(k: usize) -> Result<YTermReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let d = 3 * k - 1;
    let g = phi_power_truncated(k, d as u32);
    let coefficient = g.component(0).coeff(&mono2(0, d as u32));
    let recurrence = axis_recurrence(k, d).0.coeff(d);
    Ok(YTermReport { k, coefficient, recurrence })
}

/// Degeneration of `φ^(k+1)` to `(x + c y^(3k+2), y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneration {
    pub k: usize,
    /// `c_j` with `φ^(k+1) ∘ (x + Σ c_j y^(3j-1), y)` free of `y^(3j-1)`
    /// on the axis for `j <= k`.
    pub corrections: Vec<Rational>,
    pub limit: PolyMap,
    pub coefficient: Rational,
}

impl Degeneration {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "corrections": self.corrections.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "weights": [3 * self.k as i64 + 2, 1],
            "limit": self.limit.to_string(),
            "coefficient": self.coefficient.to_string(),
        })
    }
}

/// Correct `φ^(k+1)` on the right by `(x + Σ c_j y^(3j-1), y)`, `j <= k`,
/// so that `y^(3k+2)` is the lowest axis term, and take the limit under the
/// torus of weight `(3k+2, 1)`.
///
/// Composition is truncated at degree `3k+2`; every dropped monomial has
/// positive torus exponent, so the limit is unaffected.
pub fn degenerate_phi_power(k: usize) -> Result<Degeneration> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let top = 3 * k as u32 + 2;
    let g = phi_power_truncated(k + 1, top);
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let shear = |cs: &[Rational]| -> Vec<Polynomial> {
        let tail = cs
            .iter()
            .enumerate()
            .map(|(j, c)| Polynomial::monomial(mono2(0, 3 * j as u32 + 2), c.clone()));
        vec![tail.fold(x.clone(), |acc, t| &acc + &t), y.clone()]
    };
    // The x-term of f_(k+1) has coefficient 1 and every other term
    // involving x has higher order after substitution, so each c_j is
    // fixed by the coefficient of y^(3j-1) with c_j = 0.
    let mut corrections: Vec<Rational> = Vec::with_capacity(k);
    for j in 1..=k as u32 {
        let e = 3 * j - 1;
        corrections.push(Rational::zero());
        let f = g.component(0).substitute_truncated(&shear(&corrections), e)?;
        *corrections.last_mut().unwrap() = -f.coeff(&mono2(0, e));
    }
    let images = shear(&corrections);
    let corrected = PolyMap::new(
        g.components().iter().map(|p| p.substitute_truncated(&images, top)).collect::<Result<_>>()?,
    )?;
    let limit = torus_conjugation_limit(&corrected, (top as i64, 1))?;
    let coefficient = limit.component(0).coeff(&mono2(0, top));
    let expected = PolyMap::new(vec![&x + &Polynomial::monomial(mono2(0, top), coefficient.clone()), y.clone()])?;
    if coefficient.is_zero() || limit != expected {
        return Err(Error::Internal(format!("unexpected limit {limit}")));
    }
    Ok(Degeneration { k, corrections, limit, coefficient })
}

/// Whether both components of `φ^k` (or its truncation) have only
/// non-negative integer coefficients.
pub fn has_nonnegative_integer_coeffs(g: &PolyMap) -> bool {
    g.components().iter().all(Polynomial::has_nonnegative_integer_coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    #[test]
    fn phi_expansion() {
        assert_eq!(phi().to_string(), "(x^4 + 2*x^2*y + y^2 + x, x^2 + y)");
        let p2 = phi_power(2);
        assert_eq!(p2.degree(), 16);
        assert_eq!(phi_power_truncated(2, 5), p2.truncate(5));
        assert!(has_nonnegative_integer_coeffs(&p2));
    }

    #[test]
    fn y_terms() {
        let expect = [1, 2, 42, 3144];
        for (k, e) in (1..=4).zip(expect) {
            let r = check_y_term(k).unwrap();
            assert_eq!(r.coefficient, int(e));
            assert!(r.holds());
        }
    }

    #[test]
    fn degenerations() {
        let d = degenerate_phi_power(1).unwrap();
        assert_eq!(d.corrections, [int(-2)]);
        assert_eq!(d.coefficient, int(18));
        assert_eq!(d.limit.to_string(), "(18*y^5 + x, y)");
        let d = degenerate_phi_power(2).unwrap();
        assert_eq!(d.corrections, [int(-3), int(-72)]);
        assert_eq!(d.coefficient, int(4014));
    }
}
