use num_traits::One;

use crate::error::{Error, Result};
use crate::exactpoly::{Polynomial, Rational};
use crate::polymap::{Automorphism, PolyMap};
use crate::vectorfield::VectorField;

fn exp_components(field: &VectorField, orders: &[usize]) -> Result<PolyMap> {
    let n = field.dim();
    let comps = (0..n)
        .map(|i| {
            let its = field.iterates(&Polynomial::var(n, i), orders[i])?;
            let mut acc = Polynomial::zero(n);
            let mut fact = Rational::one();
            for (k, p) in its.iter().enumerate() {
                if k > 0 {
                    fact *= Rational::from_integer((k as i64).into());
                }
                acc = &acc + &p.scale(&(Rational::one() / &fact));
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    PolyMap::new(comps)
}

/// `exp(δ)`: the automorphism `x_i -> Σ_k δ^k(x_i) / k!` of a locally
/// nilpotent field, paired with `exp(-δ)` as its inverse.
pub fn exp_lnd(field: &VectorField, certify_bound: usize) -> Result<Automorphism> {
    let orders = field
        .nilpotency_orders(certify_bound)?
        .ok_or(Error::NotLocallyNilpotent(certify_bound))?;
    let forward = exp_components(field, &orders)?;
    let inverse = exp_components(&field.scale(&-Rational::one()), &orders)?;
    Ok(Automorphism::from_parts_unchecked(forward, inverse))
}

/// `exp(t δ)`.
pub fn exp_scaled(field: &VectorField, t: &Rational, certify_bound: usize) -> Result<Automorphism> {
    exp_lnd(&field.scale(t), certify_bound)
}

/// Pullback minus identity, `p -> p ∘ g - p`, optionally modulo degree
/// above `cap`.
fn pullback_minus_id(g: &PolyMap, p: &Polynomial, cap: Option<u32>) -> Result<Polynomial> {
    let pulled = match cap {
        Some(d) => p.substitute_truncated(g.components(), d)?,
        None => p.substitute(g.components())?,
    };
    Ok(&pulled - p)
}

fn log_series(map: &PolyMap, certify_bound: usize, cap: Option<u32>) -> Result<(VectorField, usize)> {
    let n = map.dim();
    let mut coeffs = Vec::with_capacity(n);
    let mut total_order = 0;
    for i in 0..n {
        let mut d = pullback_minus_id(map, &Polynomial::var(n, i), cap)?;
        let mut acc = Polynomial::zero(n);
        let mut k = 1i64;
        while !d.is_zero() {
            if k as usize > certify_bound {
                return Err(Error::NotUnipotent(certify_bound));
            }
            let c = Rational::new(if k % 2 == 1 { 1 } else { -1 }.into(), k.into());
            acc = &acc + &d.scale(&c);
            d = pullback_minus_id(map, &d, cap)?;
            k += 1;
        }
        total_order += k as usize;
        coeffs.push(acc);
    }
    Ok((VectorField::new(coeffs)?, total_order))
}

/// `δ` with `exp(δ) = g`, or `None` when the candidate fails the check.
fn certified(map: &PolyMap, field: VectorField, total_order: usize) -> Option<VectorField> {
    // δ is a polynomial in D on the span of all D^k(x_i), whose dimension
    // is at most total_order.
    let back = exp_lnd(&field, total_order.max(1)).ok()?;
    (back.forward() == map).then_some(field)
}

/// `log(g)`: the locally nilpotent field `δ` with
/// `δ(x_i) = Σ_{k>=1} (-1)^{k+1} D^k(x_i) / k`, `D = g^* - id`.
///
/// `g` counts as unipotent when every `D^k(x_i)` vanishes for some
/// `k <= certify_bound`; the result is checked by `exp(δ) = g`.
///
/// Every `D^k(x_i)` is a combination of components of `g^j = exp(jδ)`,
/// whose degrees are bounded independently of `j`, so the series is first
/// run modulo degree above `deg g`. The exact check decides; on failure the
/// untruncated series is used.
pub fn log_unipotent(g: &Automorphism, certify_bound: usize) -> Result<VectorField> {
    log_unipotent_map(g.forward(), certify_bound)
}

/// [`log_unipotent`] for a bare map; no inverse is needed.
pub fn log_unipotent_map(map: &PolyMap, certify_bound: usize) -> Result<VectorField> {
    let cap = map.degree().max(1) as u32;
    if let Ok((field, order)) = log_series(map, certify_bound, Some(cap)) {
        if let Some(field) = certified(map, field, order) {
            return Ok(field);
        }
    }
    let (field, order) = log_series(map, certify_bound, None)?;
    certified(map, field, order).ok_or_else(|| Error::Internal("exp(log(g)) differs from g".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_lnd(&vf("[y, 0]"), 4).unwrap().to_string(), "(x + y, y)");
        let u = exp_lnd(&vf("[y^2, 0]"), 4).unwrap();
        assert_eq!(u.to_string(), "(y^2 + x, y)");
        assert_eq!(u.inverse().to_string(), "(-y^2 + x, y)");
        assert!(exp_lnd(&VectorField::zero(2), 1).unwrap().forward().is_identity());
        assert!(matches!(exp_lnd(&vf("[x, 0]"), 5), Err(Error::NotLocallyNilpotent(5))));
    }

    #[test]
    fn log_examples() {
        let u = exp_lnd(&vf("[y^2, 0]"), 4).unwrap();
        assert_eq!(log_unipotent(&u, 4).unwrap(), vf("[y^2, 0]"));
        assert!(log_unipotent(&Automorphism::identity(2), 1).unwrap().is_zero());
        let t = exp_lnd(&vf("[y, 0]"), 4).unwrap();
        assert_eq!(log_unipotent(&t, 4).unwrap(), vf("[y, 0]"));
    }

    #[test]
    fn nontrivial_roundtrip() {
        // Triangular LND in three variables with a nonlinear tail.
        let d = VectorField::parse("[x2 + x3^2, x3, 0]").unwrap();
        let g = exp_lnd(&d, 6).unwrap();
        assert!(g.forward().compose(g.inverse()).unwrap().is_identity());
        assert_eq!(log_unipotent(&g, 6).unwrap(), d);
        let half = exp_scaled(&d, &rat(1, 2), 6).unwrap();
        assert_eq!(half.compose(&half).unwrap().forward(), g.forward());
    }
}
