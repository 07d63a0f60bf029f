//! The group of plane automorphisms commuting with `s = (ζx, ζ²y)`,
//! `ζ³ = 1`, with identity linear part, and its free generators
//! `u = (x + y², y)`, `v = (x, y + x²)`.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::jvk::{peel, Step};
use crate::error::{check_dim, Error, Result};
use crate::exactpoly::{int, Monomial, Polynomial, Rational, UPoly};
use crate::linalg::Matrix;
use crate::polymap::{Automorphism, PolyMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SKind {
    J,
    Jminus,
}

impl SKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SKind::J => "J",
            SKind::Jminus => "Jminus",
        }
    }
}

/// `J(f) = (x + y²f(y³), y)` or `J⁻(f) = (x, y + x²f(x³))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SFactor {
    pub kind: SKind,
    pub f: UPoly,
}

/// `t² f(t³)`
fn spread(f: &UPoly) -> UPoly {
    let mut c = vec![Rational::zero(); 3 * f.coeffs().len()];
    for (k, v) in f.coeffs().iter().enumerate() {
        c[3 * k + 2] = v.clone();
    }
    UPoly::from_coeffs(c)
}

impl SFactor {
    pub fn new(kind: SKind, f: UPoly) -> Self {
        SFactor { kind, f }
    }

    pub fn degree(&self) -> i64 {
        3 * self.f.degree() + 2
    }

    pub fn inverse(&self) -> SFactor {
        SFactor { kind: self.kind, f: self.f.scale(&-Rational::one()) }
    }

    /// `self ∘ g`
    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        let shear = spread(&self.f);
        let (g1, g2) = (g.component(0), g.component(1));
        let comps = match self.kind {
            SKind::J => vec![g1 + &shear.eval_polynomial(g2), g2.clone()],
            SKind::Jminus => vec![g1.clone(), g2 + &shear.eval_polynomial(g1)],
        };
        PolyMap::new(comps).expect("plane map")
    }

    pub fn to_map(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "data": { "f": self.f.to_polynomial(2, 1).to_string() },
            "map": self.to_map().to_string(),
        })
    }
}

impl fmt::Display for SFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            SKind::J => "J",
            SKind::Jminus => "J-",
        };
        write!(f, "{name}({})", self.f)
    }
}

/// Alternating product of `J` and `J⁻` factors with nonzero `f`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SWord {
    pub factors: Vec<SFactor>,
}

impl SWord {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn apply_left(&self, g: &PolyMap) -> PolyMap {
        self.factors.iter().rev().fold(g.clone(), |acc, f| f.apply_left(&acc))
    }

    pub fn recompose(&self) -> PolyMap {
        self.apply_left(&PolyMap::identity(2))
    }

    pub fn inverse(&self) -> SWord {
        SWord { factors: self.factors.iter().rev().map(SFactor::inverse).collect() }
    }

    pub fn to_automorphism(&self) -> Automorphism {
        Automorphism::from_parts_unchecked(self.recompose(), self.inverse().recompose())
    }

    /// Merge equal neighbours and drop trivial factors.
    pub fn reduce(&mut self) {
        let mut out: Vec<SFactor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            match out.last_mut() {
                Some(prev) if prev.kind == f.kind => {
                    prev.f = prev.f.add(&f.f);
                    if prev.f.is_zero() {
                        out.pop();
                    }
                }
                _ if f.f.is_zero() => {}
                _ => out.push(f),
            }
        }
        self.factors = out;
    }

    pub fn to_json(&self, recomposition_check: bool) -> Value {
        json!({
            "factors": self.factors.iter().map(SFactor::to_json).collect::<Vec<_>>(),
            "length": self.len(),
            "recomposition_check": recomposition_check,
        })
    }
}

impl fmt::Display for SWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ∘ "))
    }
}

pub fn j_map(f: &UPoly) -> PolyMap {
    SFactor::new(SKind::J, f.clone()).to_map()
}

pub fn jminus_map(f: &UPoly) -> PolyMap {
    SFactor::new(SKind::Jminus, f.clone()).to_map()
}

/// First monomial violating `a + 2b ≡ k (mod 3)` in component `k`.
pub fn s_weight_violation(g: &PolyMap) -> Option<String> {
    for (k, comp) in g.components().iter().enumerate() {
        for (m, _) in comp.terms() {
            let w = m.exponent(0) + 2 * m.exponent(1);
            if w % 3 != (k as u32 + 1) % 3 {
                let mono = Polynomial::monomial(m.clone(), Rational::one());
                return Some(format!("component {} contains {mono} of weight {} mod 3", k + 1, w % 3));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub reason: Option<String>,
}

impl Membership {
    pub fn to_json(&self) -> Value {
        json!({ "member": self.member, "reason": self.reason })
    }
}

fn structural_violation(g: &PolyMap) -> Option<String> {
    if !g.fixes_origin() {
        return Some("does not fix the origin".into());
    }
    if g.linear_part() != Matrix::identity(2) {
        return Some("linear part is not the identity".into());
    }
    s_weight_violation(g)
}

/// Membership in the S-invariant unipotent subgroup: origin fixed,
/// identity linear part, S-weights, and a certified factorization.
pub fn is_member_f_closure(g: &PolyMap) -> Result<Membership> {
    check_dim(2, g.dim())?;
    if let Some(reason) = structural_violation(g) {
        return Ok(Membership { member: false, reason: Some(reason) });
    }
    Ok(match peel(g) {
        Ok(_) => Membership { member: true, reason: None },
        Err(e) => Membership { member: false, reason: Some(format!("not an automorphism: {e}")) },
    })
}

/// Unique reduced word in `J(f)`, `J⁻(f)` for an element of the group.
pub fn s_normal_form(g: &PolyMap) -> Result<SWord> {
    check_dim(2, g.dim())?;
    if let Some(reason) = structural_violation(g) {
        return Err(Error::NotSInvariant(reason));
    }
    let (steps, last) = peel(g)?;
    if !last.is_identity() {
        return Err(Error::Internal("affine remainder of an S-invariant map".into()));
    }
    let mut factors: Vec<SFactor> = Vec::new();
    for step in steps {
        let (kind, c, m) = match step {
            Step::X(c, m) => (SKind::J, c, m),
            Step::Y(c, m) => (SKind::Jminus, c, m),
        };
        if m % 3 != 2 {
            return Err(Error::Internal(format!("peeling exponent {m} outside 2 mod 3")));
        }
        let term = UPoly::term(c, (m / 3) as usize);
        match factors.last_mut() {
            Some(prev) if prev.kind == kind => prev.f = prev.f.add(&term),
            _ => factors.push(SFactor::new(kind, term)),
        }
    }
    Ok(SWord { factors })
}

/// A letter of the free group on `u, v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    U,
    UInv,
    V,
    VInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::U, Letter::UInv, Letter::V, Letter::VInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::U => Letter::UInv,
            Letter::UInv => Letter::U,
            Letter::V => Letter::VInv,
            Letter::VInv => Letter::V,
        }
    }

    fn factor(self) -> SFactor {
        match self {
            Letter::U => SFactor::new(SKind::J, UPoly::one()),
            Letter::UInv => SFactor::new(SKind::J, UPoly::constant(int(-1))),
            Letter::V => SFactor::new(SKind::Jminus, UPoly::one()),
            Letter::VInv => SFactor::new(SKind::Jminus, UPoly::constant(int(-1))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Letter::U => "u",
            Letter::UInv => "u^-1",
            Letter::V => "v",
            Letter::VInv => "v^-1",
        }
    }
}

/// Parse `u v^-1 U ...`; capitals denote inverses, `*`, `,` and spaces
/// separate letters.
pub fn parse_word(src: &str) -> Result<Vec<Letter>> {
    let tokens = src.split(|c: char| c.is_whitespace() || c == '*' || c == ',').filter(|t| !t.is_empty());
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in tokens {
        let letter = match tok {
            "u" => Letter::U,
            "U" | "u^-1" | "u^(-1)" => Letter::UInv,
            "v" => Letter::V,
            "V" | "v^-1" | "v^(-1)" => Letter::VInv,
            _ => return Err(Error::Parse { pos, msg: format!("unknown letter {tok:?}") }),
        };
        out.push(letter);
        pos += tok.len() + 1;
    }
    Ok(out)
}

/// Free reduction.
pub fn reduce_word(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn format_word(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

/// The word as a product of `J`/`J⁻` syllables; reduced when the input is.
pub fn word_to_sword(word: &[Letter]) -> SWord {
    let mut w = SWord { factors: word.iter().map(|l| l.factor()).collect() };
    w.reduce();
    w
}

/// Number of maximal runs of one generator in the freely reduced word.
pub fn syllable_length(word: &[Letter]) -> usize {
    word_to_sword(&reduce_word(word)).len()
}

/// Evaluate a word in `u, v` as a plane map.
pub fn free_word_eval(word: &[Letter]) -> PolyMap {
    word.iter().rev().fold(PolyMap::identity(2), |acc, l| l.factor().apply_left(&acc))
}

#[derive(Debug, Clone)]
pub struct SGenerators {
    pub u: Automorphism,
    pub v: Automorphism,
    pub tau: Automorphism,
}

/// `u = (x + y², y)`, `v = (x, y + x²)` and the swap `τ`, with `v = τuτ`.
pub fn s_generators() -> SGenerators {
    let u = Letter::U.factor().to_map();
    let v = Letter::V.factor().to_map();
    let swap = PolyMap::parse("(y, x)").expect("swap");
    SGenerators {
        u: Automorphism::from_parts_unchecked(u, Letter::UInv.factor().to_map()),
        v: Automorphism::from_parts_unchecked(v, Letter::VInv.factor().to_map()),
        tau: Automorphism::from_parts_unchecked(swap.clone(), swap),
    }
}

fn scaling(t: &Rational, a: i64, b: i64) -> PolyMap {
    let p = |e: i64| {
        if e >= 0 {
            num_traits::pow(t.clone(), e as usize)
        } else {
            Rational::one() / num_traits::pow(t.clone(), (-e) as usize)
        }
    };
    PolyMap::new(vec![
        Polynomial::var(2, 0).scale(&p(a)),
        Polynomial::var(2, 1).scale(&p(b)),
    ])
    .expect("plane map")
}

/// `λ_t⁻¹ ∘ g ∘ λ_t` with `λ_t = (t^a x, t^b y)`, `t != 0`.
pub fn torus_act(g: &PolyMap, weights: (i64, i64), t: &Rational) -> Result<PolyMap> {
    check_dim(2, g.dim())?;
    if t.is_zero() {
        return Err(Error::InvalidArgument("torus parameter must be nonzero".into()));
    }
    let (a, b) = weights;
    let inner = g.compose(&scaling(t, a, b))?;
    scaling(t, -a, -b).compose(&inner)
}

/// Limit of `λ_t⁻¹ ∘ g ∘ λ_t` as `t -> 0`: monomial `x^i y^j` in component
/// `k` acquires `t^(a i + b j - w_k)` with `w = (a, b)`.
pub fn torus_conjugation_limit(g: &PolyMap, weights: (i64, i64)) -> Result<PolyMap> {
    check_dim(2, g.dim())?;
    let (a, b) = weights;
    let w = [a, b];
    let mut comps = Vec::with_capacity(2);
    for (k, comp) in g.components().iter().enumerate() {
        let mut kept = Vec::new();
        for (m, c) in comp.terms() {
            let e = a * m.exponent(0) as i64 + b * m.exponent(1) as i64 - w[k];
            if e < 0 {
                return Err(Error::NoLimit {
                    component: k + 1,
                    monomial: Polynomial::monomial(m.clone(), Rational::one()).to_string(),
                    exponent: e,
                });
            }
            if e == 0 {
                kept.push((m.clone(), c.clone()));
            }
        }
        comps.push(Polynomial::from_terms(2, kept));
    }
    PolyMap::new(comps)
}

/// `x^i y^j` in two variables.
pub(crate) fn mono2(i: u32, j: u32) -> Monomial {
    Monomial::from_exponents(&[i, j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> PolyMap {
        PolyMap::parse(s).unwrap()
    }

    #[test]
    fn generators() {
        let g = s_generators();
        assert_eq!(g.u.forward(), &m("(x + y^2, y)"));
        let conj = g.tau.forward().compose(g.u.forward()).unwrap().compose(g.tau.forward()).unwrap();
        assert_eq!(&conj, g.v.forward());
        assert!(s_weight_violation(g.u.forward()).is_none());
        assert!(s_weight_violation(g.v.forward()).is_none());
        assert!(s_weight_violation(&m("(x + y, y)")).is_some());
    }

    #[test]
    fn words() {
        let w = parse_word("u v U V").unwrap();
        assert_eq!(w, [Letter::U, Letter::V, Letter::UInv, Letter::VInv]);
        assert_eq!(reduce_word(&parse_word("u v V U v").unwrap()), [Letter::V]);
        assert_eq!(syllable_length(&parse_word("u u v u^-1").unwrap()), 3);
        assert!(parse_word("u w").is_err());
        let phi = free_word_eval(&parse_word("u v").unwrap());
        assert_eq!(phi, m("(x + (y + x^2)^2, y + x^2)"));
    }

    #[test]
    fn normal_forms() {
        let phi = free_word_eval(&parse_word("u v").unwrap());
        let nf = s_normal_form(&phi).unwrap();
        assert_eq!(nf, word_to_sword(&parse_word("u v").unwrap()));
        assert_eq!(nf.recompose(), phi);
        assert_eq!(nf.to_string(), "J(1) ∘ J-(1)");
        let g = j_map(&UPoly::from_ints(&[2, 0, -1])).compose(&jminus_map(&UPoly::from_ints(&[0, 3]))).unwrap();
        let nf = s_normal_form(&g).unwrap();
        assert_eq!(nf.len(), 2);
        assert_eq!(nf.factors[0].f, UPoly::from_ints(&[2, 0, -1]));
        assert_eq!(nf.factors[1].f, UPoly::from_ints(&[0, 3]));
        assert!(s_normal_form(&PolyMap::identity(2)).unwrap().is_empty());
        assert!(matches!(s_normal_form(&m("(x + y^3, y)")), Err(Error::NotSInvariant(_))));
    }

    #[test]
    fn membership() {
        assert!(is_member_f_closure(&m("(x + y^2, y)")).unwrap().member);
        let r = is_member_f_closure(&m("(x + 1, y)")).unwrap();
        assert_eq!(r.reason.as_deref(), Some("does not fix the origin"));
        let r = is_member_f_closure(&m("(x + x^4, y)")).unwrap();
        assert!(!r.member && r.reason.unwrap().starts_with("not an automorphism"));
    }

    #[test]
    fn torus_limits() {
        let g = m("(x + y^5, y)");
        assert_eq!(torus_conjugation_limit(&g, (5, 1)).unwrap(), g);
        assert_eq!(torus_conjugation_limit(&g, (4, 1)).unwrap(), PolyMap::identity(2));
        assert!(matches!(torus_conjugation_limit(&g, (6, 1)), Err(Error::NoLimit { component: 1, .. })));
        let t = Rational::from_integer(2.into());
        assert_eq!(torus_act(&g, (4, 1), &t).unwrap(), m("(x + 2*y^5, y)"));
    }
}
