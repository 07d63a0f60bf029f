//! Amalgamated-product factorization of plane automorphisms into
//! de Jonquieres and affine factors.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::exactpoly::{Polynomial, Rational, UPoly};
use crate::linalg::Matrix;
use crate::polymap::{Automorphism, PolyMap};

/// `(a x + h(y), c y + d)` with `a, c != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JonqFactor {
    pub a: Rational,
    pub h: UPoly,
    pub c: Rational,
    pub d: Rational,
}

/// `(m00 x + m01 y + b0, m10 x + m11 y + b1)` with invertible `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub m: [[Rational; 2]; 2],
    pub b: [Rational; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Jonq(JonqFactor),
    Affine(AffineMap),
}

fn konst(c: &Rational) -> Polynomial {
    Polynomial::constant(2, c.clone())
}

impl JonqFactor {
    pub fn new(a: Rational, h: UPoly, c: Rational, d: Rational) -> Result<Self> {
        if a.is_zero() || c.is_zero() {
            return Err(Error::NotAutomorphism("de Jonquieres factor with zero scaling".into()));
        }
        Ok(JonqFactor { a, h, c, d })
    }

    /// `(x + h(y), y)`
    pub fn shear(h: UPoly) -> Self {
        JonqFactor { a: Rational::one(), h, c: Rational::one(), d: Rational::zero() }
    }

    pub fn degree(&self) -> i64 {
        self.h.degree().max(1)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.c.is_one() && self.d.is_zero() && self.h.is_zero()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &JonqFactor) -> JonqFactor {
        let inner = UPoly::from_coeffs(vec![other.d.clone(), other.c.clone()]);
        JonqFactor {
            a: &self.a * &other.a,
            h: other.h.scale(&self.a).add(&self.h.compose(&inner)),
            c: &self.c * &other.c,
            d: &self.c * &other.d + &self.d,
        }
    }

    pub fn inverse(&self) -> JonqFactor {
        let ainv = Rational::one() / &self.a;
        let cinv = Rational::one() / &self.c;
        let inner = UPoly::from_coeffs(vec![-&self.d * &cinv, cinv.clone()]);
        JonqFactor {
            a: ainv.clone(),
            h: self.h.compose(&inner).scale(&-ainv),
            c: cinv.clone(),
            d: -&self.d * cinv,
        }
    }

    /// `self ∘ g`, computed as `(a g1 + h(g2), c g2 + d)`.
    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        let (g1, g2) = (g.component(0), g.component(1));
        let first = &g1.scale(&self.a) + &self.h.eval_polynomial(g2);
        let second = &g2.scale(&self.c) + &konst(&self.d);
        PolyMap::new(vec![first, second]).expect("plane map")
    }

    pub fn to_map(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    fn as_affine(&self) -> Option<AffineMap> {
        (self.h.degree() <= 1).then(|| AffineMap {
            m: [[self.a.clone(), self.h.coeff(1)], [Rational::zero(), self.c.clone()]],
            b: [self.h.coeff(0), self.d.clone()],
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_string(),
            "h": self.h.to_polynomial(2, 1).to_string(),
            "c": self.c.to_string(),
            "d": self.d.to_string(),
        })
    }
}

impl AffineMap {
    pub fn new(m: [[Rational; 2]; 2], b: [Rational; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(Error::NotAutomorphism("singular affine factor".into()));
        }
        Ok(AffineMap { m, b })
    }

    pub fn identity() -> Self {
        let (o, z) = (Rational::one(), Rational::zero());
        AffineMap { m: [[o.clone(), z.clone()], [z.clone(), o]], b: [z.clone(), z] }
    }

    /// The coordinate swap `(y, x)`.
    pub fn swap() -> Self {
        let (o, z) = (Rational::one(), Rational::zero());
        AffineMap { m: [[z.clone(), o.clone()], [o, z.clone()]], b: [z.clone(), z] }
    }

    pub fn from_map(g: &PolyMap) -> Result<Self> {
        check_dim(2, g.dim())?;
        if g.degree() > 1 {
            return Err(Error::InvalidArgument(format!("{g} is not affine")));
        }
        let l = g.linear_part();
        let c = g.constant_part();
        Self::new(
            [[l[(0, 0)].clone(), l[(0, 1)].clone()], [l[(1, 0)].clone(), l[(1, 1)].clone()]],
            [c[0].clone(), c[1].clone()],
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Whether the map also lies in the de Jonquieres group.
    pub fn in_borel(&self) -> bool {
        self.m[1][0].is_zero()
    }

    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let (p, q) = (&self.m, &other.m);
        let m = [
            [&p[0][0] * &q[0][0] + &p[0][1] * &q[1][0], &p[0][0] * &q[0][1] + &p[0][1] * &q[1][1]],
            [&p[1][0] * &q[0][0] + &p[1][1] * &q[1][0], &p[1][0] * &q[0][1] + &p[1][1] * &q[1][1]],
        ];
        let b = [
            &p[0][0] * &other.b[0] + &p[0][1] * &other.b[1] + &self.b[0],
            &p[1][0] * &other.b[0] + &p[1][1] * &other.b[1] + &self.b[1],
        ];
        AffineMap { m, b }
    }

    pub fn inverse(&self) -> AffineMap {
        let m = &self.m;
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        let inv = [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ];
        let b = [
            -(&inv[0][0] * &self.b[0] + &inv[0][1] * &self.b[1]),
            -(&inv[1][0] * &self.b[0] + &inv[1][1] * &self.b[1]),
        ];
        AffineMap { m: inv, b }
    }

    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        let (g1, g2) = (g.component(0), g.component(1));
        let row = |r: usize| &(&g1.scale(&self.m[r][0]) + &g2.scale(&self.m[r][1])) + &konst(&self.b[r]);
        PolyMap::new(vec![row(0), row(1)]).expect("plane map")
    }

    pub fn to_map(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    fn as_jonq(&self) -> Option<JonqFactor> {
        self.in_borel().then(|| JonqFactor {
            a: self.m[0][0].clone(),
            h: UPoly::from_coeffs(vec![self.b[0].clone(), self.m[0][1].clone()]),
            c: self.m[1][1].clone(),
            d: self.b[1].clone(),
        })
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(vec![self.m[0].to_vec(), self.m[1].to_vec()])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.m.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "translation": self.b.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl Factor {
    pub fn kind(&self) -> &'static str {
        match self {
            Factor::Jonq(_) => "jonq",
            Factor::Affine(_) => "affine",
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Factor::Jonq(j) => j.degree(),
            Factor::Affine(_) => 1,
        }
    }

    pub fn inverse(&self) -> Factor {
        match self {
            Factor::Jonq(j) => Factor::Jonq(j.inverse()),
            Factor::Affine(a) => Factor::Affine(a.inverse()),
        }
    }

    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        match self {
            Factor::Jonq(j) => j.apply_left(g),
            Factor::Affine(a) => a.apply_left(g),
        }
    }

    pub fn to_map(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    fn is_identity(&self) -> bool {
        match self {
            Factor::Jonq(j) => j.is_identity(),
            Factor::Affine(a) => a.is_identity(),
        }
    }

    pub fn to_json(&self) -> Value {
        let data = match self {
            Factor::Jonq(j) => j.to_json(),
            Factor::Affine(a) => a.to_json(),
        };
        json!({ "kind": self.kind(), "data": data, "map": self.to_map().to_string() })
    }
}

/// A product `F1 ∘ F2 ∘ ... ∘ Fk` of alternating de Jonquieres and affine
/// factors. In reduced form interior de Jonquieres factors have degree at
/// least 2 and interior affine factors are not triangular, so the length
/// and the degree sequence are invariants of the automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmalgamWord {
    pub factors: Vec<Factor>,
}

impl AmalgamWord {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Degrees of the de Jonquieres factors, left to right.
    pub fn jonq_degrees(&self) -> Vec<i64> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Factor::Jonq(j) => Some(j.degree()),
                Factor::Affine(_) => None,
            })
            .collect()
    }

    /// Apply the factors right to left, each on the left of the
    /// accumulated map.
    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        self.factors.iter().rev().fold(g.clone(), |acc, f| f.apply_left(&acc))
    }

    pub fn recompose(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    pub fn inverse(&self) -> AmalgamWord {
        AmalgamWord { factors: self.factors.iter().rev().map(Factor::inverse).collect() }
    }

    /// Bring the word to reduced form: drop identities, merge neighbours of
    /// the same kind, and absorb triangular affine factors into an adjacent
    /// de Jonquieres factor (the right one when both exist).
    pub fn normalize(&mut self) {
        loop {
            let mut changed = false;
            let mut out: Vec<Factor> = Vec::with_capacity(self.factors.len());
            for f in self.factors.drain(..) {
                let f = match f {
                    Factor::Jonq(j) => match j.as_affine() {
                        Some(a) => {
                            changed = true;
                            Factor::Affine(a)
                        }
                        None => Factor::Jonq(j),
                    },
                    other => other,
                };
                if f.is_identity() {
                    changed = true;
                    continue;
                }
                match (out.last_mut(), f) {
                    (Some(Factor::Jonq(prev)), Factor::Jonq(j)) => {
                        *prev = prev.compose(&j);
                        changed = true;
                    }
                    (Some(Factor::Affine(prev)), Factor::Affine(a)) => {
                        *prev = prev.compose(&a);
                        changed = true;
                    }
                    (_, f) => out.push(f),
                }
            }
            // Absorb triangular affine factors.
            if out.len() > 1 {
                for i in 0..out.len() {
                    let Factor::Affine(a) = &out[i] else { continue };
                    let Some(b) = a.as_jonq() else { continue };
                    if let Some(Factor::Jonq(right)) = out.get(i + 1) {
                        out[i + 1] = Factor::Jonq(b.compose(right));
                    } else if let Some(Factor::Jonq(left)) = i.checked_sub(1).and_then(|k| out.get(k)) {
                        out[i - 1] = Factor::Jonq(left.compose(&b));
                    } else {
                        continue;
                    }
                    out.remove(i);
                    changed = true;
                    break;
                }
            }
            self.factors = out;
            if !changed {
                break;
            }
        }
    }

    pub fn to_json(&self, recomposition_check: bool) -> Value {
        json!({
            "factors": self.factors.iter().map(Factor::to_json).collect::<Vec<_>>(),
            "length": self.len(),
            "degrees": self.jonq_degrees(),
            "recomposition_check": recomposition_check,
        })
    }
}

impl fmt::Display for AmalgamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_map().to_string()).collect();
        write!(f, "{}", parts.join(" ∘ "))
    }
}

/// One elementary peeling step: `(x + c y^m, y)` or `(x, y + c x^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Step {
    X(Rational, u32),
    Y(Rational, u32),
}

/// If `lead_a = c · lead_b^m`, return `c`.
fn power_ratio(lead_a: &Polynomial, lead_b_pow: &Polynomial) -> Option<Rational> {
    let (ma, ca) = lead_a.leading_term()?;
    let (mb, cb) = lead_b_pow.leading_term()?;
    if ma != mb {
        return None;
    }
    let c = ca / cb;
    (lead_b_pow.scale(&c) == *lead_a).then_some(c)
}

/// Powers of a fixed polynomial, computed on demand.
struct PowerCache {
    base: Polynomial,
    powers: Vec<Polynomial>,
}

impl PowerCache {
    fn new(base: Polynomial) -> Self {
        let one = Polynomial::one(base.nvars());
        PowerCache { base, powers: vec![one] }
    }

    fn get(&mut self, m: u32) -> &Polynomial {
        while self.powers.len() <= m as usize {
            let next = self.powers.last().unwrap() * &self.base;
            self.powers.push(next);
        }
        &self.powers[m as usize]
    }
}

/// Degree-reduction peeling: returns the elementary steps (leftmost first)
/// and the final affine map, so that `g = E1 ∘ ... ∘ Es ∘ A`.
pub(crate) fn peel(g: &PolyMap) -> Result<(Vec<Step>, AffineMap)> {
    check_dim(2, g.dim())?;
    let mut r1 = g.component(0).clone();
    let mut r2 = g.component(1).clone();
    let mut steps = Vec::new();
    let mut cache1: Option<PowerCache> = None;
    let mut cache2: Option<PowerCache> = None;
    loop {
        let (d1, d2) = (r1.degree(), r2.degree());
        if d1 <= 1 && d2 <= 1 {
            let last = PolyMap::new(vec![r1, r2])?;
            return AffineMap::from_map(&last).map(|a| (steps, a));
        }
        let fail = || Error::NotAutomorphism(format!("no reduction applies at degrees ({d1}, {d2})"));
        if d1 >= d2 {
            if d2 < 1 || d1 % d2 != 0 {
                return Err(fail());
            }
            let m = (d1 / d2) as u32;
            let cache = cache2.get_or_insert_with(|| PowerCache::new(r2.clone()));
            let pw = cache.get(m);
            let lead_pw = pw.leading_form();
            if let Some(c) = power_ratio(&r1.leading_form(), &lead_pw) {
                r1 = &r1 - &pw.scale(&c);
                cache1 = None;
                steps.push(Step::X(c, m));
                continue;
            }
            if d1 != d2 {
                return Err(fail());
            }
        }
        if d1 < 1 || d2 % d1 != 0 {
            return Err(fail());
        }
        let m = (d2 / d1) as u32;
        let cache = cache1.get_or_insert_with(|| PowerCache::new(r1.clone()));
        let pw = cache.get(m);
        let c = power_ratio(&r2.leading_form(), &pw.leading_form()).ok_or_else(fail)?;
        r2 = &r2 - &pw.scale(&c);
        cache2 = None;
        steps.push(Step::Y(c, m));
    }
}

/// Factor a plane automorphism into reduced amalgam form.
///
/// Fails with `NotAutomorphism` exactly when no peeling step applies,
/// which happens precisely for non-automorphisms.
pub fn jvk_factorize(g: &PolyMap) -> Result<AmalgamWord> {
    let (steps, last) = peel(g)?;
    let mut factors = Vec::new();
    let mut i = 0;
    while i < steps.len() {
        let is_x = matches!(steps[i], Step::X(..));
        let mut h = UPoly::zero();
        while i < steps.len() && matches!(steps[i], Step::X(..)) == is_x {
            let (Step::X(c, m) | Step::Y(c, m)) = &steps[i];
            h = h.add(&UPoly::term(c.clone(), *m as usize));
            i += 1;
        }
        if is_x {
            factors.push(Factor::Jonq(JonqFactor::shear(h)));
        } else {
            factors.push(Factor::Affine(AffineMap::swap()));
            factors.push(Factor::Jonq(JonqFactor::shear(h)));
            factors.push(Factor::Affine(AffineMap::swap()));
        }
    }
    factors.push(Factor::Affine(last));
    let mut word = AmalgamWord { factors };
    word.normalize();
    Ok(word)
}

/// The inverse of a plane automorphism through its factorization; the
/// result is certified by reducing `g⁻¹ ∘ g` to the identity.
pub fn invert(g: &PolyMap) -> Result<Automorphism> {
    let word = jvk_factorize(g)?;
    let inv = word.inverse();
    if !inv.apply_left(g).is_identity() {
        return Err(Error::Internal("inverse factors do not cancel".into()));
    }
    Ok(Automorphism::from_parts_unchecked(g.clone(), inv.recompose()))
}

/// Automorphism from a word, with the inverse taken factorwise.
pub fn word_automorphism(word: &AmalgamWord) -> Automorphism {
    Automorphism::from_parts_unchecked(word.recompose(), word.inverse().recompose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    fn m(s: &str) -> PolyMap {
        PolyMap::parse(s).unwrap()
    }

    #[test]
    fn jonq_algebra() {
        let j = JonqFactor::new(int(2), UPoly::from_ints(&[1, 0, 3]), int(-1), int(5)).unwrap();
        let k = JonqFactor::new(int(1), UPoly::from_ints(&[0, 1, 0, 1]), int(3), int(0)).unwrap();
        assert_eq!(j.compose(&k).to_map(), j.to_map().compose(&k.to_map()).unwrap());
        assert!(j.compose(&j.inverse()).is_identity());
        let a = AffineMap::new([[int(1), int(2)], [int(3), int(4)]], [int(1), int(-1)]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.compose(&AffineMap::swap()).to_map(), a.to_map().compose(&AffineMap::swap().to_map()).unwrap());
    }

    #[test]
    fn factor_examples() {
        let u = m("(x + y^2, y)");
        let w = jvk_factorize(&u).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.recompose(), u);

        let phi = u.compose(&m("(x, y + x^2)")).unwrap();
        let w = jvk_factorize(&phi).unwrap();
        let kinds: Vec<&str> = w.factors.iter().map(Factor::kind).collect();
        assert_eq!(kinds, ["jonq", "affine", "jonq", "affine"]);
        assert_eq!(w.jonq_degrees(), [2, 2]);
        assert_eq!(w.recompose(), phi);

        let t1 = m("(x + y^3 + y, y)");
        let t2 = m("(x, y + x^2)");
        let g = t2.compose(&t1).unwrap();
        let w = jvk_factorize(&g).unwrap();
        assert_eq!(w.recompose(), g);
        assert_eq!(w.jonq_degrees(), [2, 3]);
    }

    #[test]
    fn rejects_non_automorphisms() {
        assert!(matches!(jvk_factorize(&m("(x + y^2, y + x^2)")), Err(Error::NotAutomorphism(_))));
        assert!(matches!(jvk_factorize(&m("(x^2, y)")), Err(Error::NotAutomorphism(_))));
        assert!(matches!(jvk_factorize(&m("(x + y, 2*x + 2*y)")), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn inversion() {
        assert_eq!(invert(&m("(x + y^2, y)")).unwrap().inverse(), &m("(x - y^2, y)"));
        assert_eq!(invert(&m("(y, x)")).unwrap().inverse(), &m("(y, x)"));
        let phi = m("(x + y^2, y)").compose(&m("(x, y + x^2)")).unwrap();
        let inv = invert(&phi).unwrap();
        assert!(phi.compose(inv.inverse()).unwrap().is_identity());
        assert_eq!(inv.inverse(), &m("(x, y - x^2)").compose(&m("(x - y^2, y)")).unwrap());
    }
}
