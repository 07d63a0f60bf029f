use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::Rational;
use crate::error::{check_dim, Error, Result};

/// Sparse polynomial in `n` variables with exact rational coefficients.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for dimension {nvars}");
        Polynomial { nvars, terms: vec![(Monomial::var(nvars, i), Rational::one())] }
    }

    pub fn monomial(mono: Monomial, c: Rational) -> Self {
        let nvars = mono.nvars();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![(mono, c)] }
    }

    /// Build from arbitrary terms; duplicates are summed and zeros dropped.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_sorted_map(nvars, acc)
    }

    fn from_sorted_map(nvars: usize, map: BTreeMap<Monomial, Rational>) -> Self {
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { nvars, terms }
    }

    fn from_unsorted(nvars: usize, mut terms: Vec<(Monomial, Rational)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.first().map_or(-1, |(m, _)| m.degree() as i64)
    }

    /// Degree in a single variable; `-1` for zero.
    pub fn degree_in(&self, i: usize) -> i64 {
        self.terms.iter().map(|(m, _)| m.exponent(i) as i64).max().unwrap_or(-1)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Polynomial { nvars: self.nvars, terms }
    }

    /// The top-degree homogeneous component.
    pub fn leading_form(&self) -> Polynomial {
        match self.degree() {
            -1 => self.clone(),
            d => self.homogeneous_part(d as u32),
        }
    }

    /// Drop every term of total degree greater than `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= max_degree).cloned().collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect();
        Self::from_unsorted(self.nvars, terms)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn arith(&self, other: &Polynomial, op: ArithOp) -> Result<Polynomial> {
        check_dim(self.nvars, other.nvars)?;
        Ok(match op {
            ArithOp::Add => self.merge(other, false),
            ArithOp::Sub => self.merge(other, true),
            ArithOp::Mul => self.mul_impl(other, None),
        })
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })));
        Polynomial { nvars: self.nvars, terms: out }
    }

    /// Product with every term of degree above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: u32) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch");
        self.mul_impl(other, Some(max_degree))
    }

    fn mul_impl(&self, other: &Polynomial, max_degree: Option<u32>) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        // Clear denominators so the inner loop runs over integers.
        let (pa, da) = self.integer_parts();
        let (pb, db) = other.integer_parts();
        let denom = da * db;
        let small = |v: &[(Monomial, BigInt)]| -> Option<Vec<i64>> {
            v.iter().map(|(_, c)| c.to_i64()).collect()
        };
        if let (Some(sa), Some(sb)) = (small(&pa), small(&pb)) {
            if let Some(acc) = mul_small(&pa, &sa, &pb, &sb, max_degree) {
                let terms = acc
                    .into_iter()
                    .filter(|(_, c)| *c != 0)
                    .map(|(m, c)| (m, Rational::new(BigInt::from(c), denom.clone())))
                    .collect();
                return Self::from_unsorted(self.nvars, terms);
            }
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(pa.len() * pb.len() / 2 + 1);
        for (ma, ca) in &pa {
            let dega = ma.degree();
            for (mb, cb) in &pb {
                if let Some(d) = max_degree {
                    if dega + mb.degree() > d {
                        continue;
                    }
                }
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, denom.clone())))
            .collect();
        Self::from_unsorted(self.nvars, terms)
    }

    /// Numerators over the least common denominator.
    fn integer_parts(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let lcm = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&lcm / c.denom())))
            .collect();
        (nums, lcm)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        self.pow_impl(k, None)
    }

    pub fn pow_truncated(&self, k: u32, max_degree: u32) -> Polynomial {
        self.pow_impl(k, Some(max_degree))
    }

    fn pow_impl(&self, k: u32, max_degree: Option<u32>) -> Polynomial {
        let mut result = Self::one(self.nvars);
        if let Some(d) = max_degree {
            result = result.truncate(d);
        }
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base, max_degree);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base, max_degree);
            }
        }
        result
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, dim: self.nvars });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(i) > 0)
            .map(|(m, c)| {
                let e = m.exponent(i);
                (m.lower(i).expect("positive exponent"), c * Rational::from_integer(e.into()))
            })
            .collect();
        // Lowering one exponent keeps distinct monomials distinct but can
        // reorder them, so re-sort.
        Ok(Self::from_unsorted(self.nvars, terms))
    }

    /// Replace `x_i` by `images[i]` and expand.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        self.substitute_impl(images, None)
    }

    /// Substitution modulo terms of degree above `max_degree`.
    pub fn substitute_truncated(&self, images: &[Polynomial], max_degree: u32) -> Result<Polynomial> {
        self.substitute_impl(images, Some(max_degree))
    }

    fn substitute_impl(&self, images: &[Polynomial], max_degree: Option<u32>) -> Result<Polynomial> {
        check_dim(self.nvars, images.len())?;
        let target = images.first().map_or(0, |p| p.nvars);
        for img in images {
            check_dim(target, img.nvars)?;
        }
        if self.nvars == 0 {
            return Ok(Polynomial::constant(target, self.constant_term()));
        }
        let mut ctx = SubstContext {
            images,
            target,
            max_degree,
            powers: images.iter().map(|_| Vec::new()).collect(),
        };
        let refs: Vec<&(Monomial, Rational)> = self.terms.iter().collect();
        Ok(ctx.horner(&refs, 0))
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, point.len())?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Re-embed into a ring with a different variable count, mapping variable
    /// `i` to `index_map[i]`.
    pub fn remap_vars(&self, nvars: usize, index_map: &[usize]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; nvars];
                for (i, &k) in m.exponents().iter().enumerate() {
                    e[index_map[i]] += k;
                }
                (Monomial::from_exponents(&e), c.clone())
            })
            .collect();
        Self::from_unsorted(nvars, terms)
    }

    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer() && !c.is_negative())
    }
}

fn mul_small(
    pa: &[(Monomial, BigInt)],
    sa: &[i64],
    pb: &[(Monomial, BigInt)],
    sb: &[i64],
    max_degree: Option<u32>,
) -> Option<HashMap<Monomial, i128>> {
    let mut acc: HashMap<Monomial, i128> = HashMap::with_capacity(pa.len() * pb.len() / 2 + 1);
    for ((ma, _), &ca) in pa.iter().zip(sa) {
        let dega = ma.degree();
        for ((mb, _), &cb) in pb.iter().zip(sb) {
            if let Some(d) = max_degree {
                if dega + mb.degree() > d {
                    continue;
                }
            }
            let prod = (ca as i128) * (cb as i128);
            let slot = acc.entry(ma.mul(mb)).or_insert(0);
            *slot = slot.checked_add(prod)?;
        }
    }
    Some(acc)
}

struct SubstContext<'a> {
    images: &'a [Polynomial],
    target: usize,
    max_degree: Option<u32>,
    powers: Vec<Vec<Polynomial>>,
}

impl SubstContext<'_> {
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul_impl(b, self.max_degree)
    }

    fn power(&mut self, var: usize, k: u32) -> Polynomial {
        let cache_len = self.powers[var].len();
        if cache_len == 0 {
            let mut one = Polynomial::one(self.target);
            if let Some(d) = self.max_degree {
                one = one.truncate(d);
            }
            self.powers[var].push(one);
        }
        while self.powers[var].len() <= k as usize {
            let last = self.powers[var].last().unwrap().clone();
            let next = self.mul(&last, &self.images[var]);
            self.powers[var].push(next);
        }
        self.powers[var][k as usize].clone()
    }

    /// Horner evaluation in variable `var`, recursing on the rest.
    fn horner(&mut self, terms: &[&(Monomial, Rational)], var: usize) -> Polynomial {
        if var == self.images.len() {
            let c: Rational = terms.iter().map(|(_, c)| c.clone()).sum();
            let mut p = Polynomial::constant(self.target, c);
            if let Some(d) = self.max_degree {
                p = p.truncate(d);
            }
            return p;
        }
        let mut groups: BTreeMap<u32, Vec<&(Monomial, Rational)>> = BTreeMap::new();
        for t in terms {
            groups.entry(t.0.exponent(var)).or_default().push(t);
        }
        let mut acc = Polynomial::zero(self.target);
        let mut prev: Option<u32> = None;
        for (&e, group) in groups.iter().rev() {
            let inner = self.horner(group, var + 1);
            if let Some(p) = prev {
                if !acc.is_zero() {
                    let step = self.power(var, p - e);
                    acc = self.mul(&acc, &step);
                }
            }
            acc = acc.merge(&inner, false);
            prev = Some(e);
        }
        if let Some(p) = prev {
            if p > 0 && !acc.is_zero() {
                let step = self.power(var, p);
                acc = self.mul(&acc, &step);
            }
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        self.merge(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        self.merge(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "dimension mismatch");
        self.mul_impl(rhs, None)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { nvars: self.nvars, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_polynomial(self))
    }
}
