use std::fmt;

use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::Rational;

/// Dense univariate polynomial over the rationals, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c * t^k`
    pub fn term(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> UPoly {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.leading_coeff();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Rational::one() / self.leading_coeff()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree() <= 0 {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() <= 0
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// `self(inner(t))`
    pub fn compose(&self, inner: &UPoly) -> UPoly {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    /// Embed as a polynomial in variable `var` of an `nvars`-variable ring.
    pub fn to_polynomial(&self, nvars: usize, var: usize) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.coeffs.iter().enumerate().map(|(k, c)| {
                (Monomial::var(nvars, var).pow(k as u32), c.clone())
            }),
        )
    }

    /// Evaluate at a multivariate polynomial.
    pub fn eval_polynomial(&self, p: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(p.nvars()), |acc, c| &(&acc * p) + &Polynomial::constant(p.nvars(), c.clone()))
    }

    /// Read back a polynomial that only involves variable `var`.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Option<UPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            if m.exponents().iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            let k = m.exponent(var) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_polynomial(1, 0);
        write!(f, "{}", super::text::format_polynomial(&p).replace("x1", "t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        // (t-1)^2 (t+2)
        let p = UPoly::from_ints(&[2, -3, 0, 1]);
        assert!(!p.is_squarefree());
        assert_eq!(p.squarefree_part(), UPoly::from_ints(&[-2, 1, 1]));
        let (q, r) = p.div_rem(&UPoly::from_ints(&[-1, 1]));
        assert_eq!(q, UPoly::from_ints(&[-2, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&p.derivative()), UPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn compose_and_eval() {
        let h = UPoly::from_ints(&[0, 0, 1]);
        let lin = UPoly::from_ints(&[1, 2]);
        assert_eq!(h.compose(&lin), UPoly::from_ints(&[1, 4, 4]));
        assert_eq!(h.eval(&Rational::from_integer(3.into())), Rational::from_integer(9.into()));
        assert_eq!(h.to_string(), "t^2");
    }
}
