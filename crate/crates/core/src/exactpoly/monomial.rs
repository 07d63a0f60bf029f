use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector `x1^e1 * ... * xn^en`.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// with `x1 > x2 > ... > xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (e, d) in out.iter_mut().zip(other.0.iter()) {
            *e = e.checked_sub(*d)?;
        }
        Some(Monomial(out))
    }

    /// Lower the exponent of variable `i` by one.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        let mut out = self.0.clone();
        out[i] = out[i].checked_sub(1)?;
        Some(Monomial(out))
    }

    pub fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut out = self.0.clone();
        out[i] = e;
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x2 = Monomial::from_exponents(&[2, 0]);
        let xy = Monomial::from_exponents(&[1, 1]);
        let y2 = Monomial::from_exponents(&[0, 2]);
        let x = Monomial::from_exponents(&[1, 0]);
        let y3 = Monomial::from_exponents(&[0, 3]);
        assert!(x2 > xy && xy > y2 && y2 > x);
        assert!(y3 > x2);
    }

    #[test]
    fn divide_and_lower() {
        let m = Monomial::from_exponents(&[2, 1]);
        assert_eq!(m.div(&Monomial::from_exponents(&[1, 1])), Some(Monomial::var(2, 0)));
        assert_eq!(m.div(&Monomial::from_exponents(&[0, 2])), None);
        assert_eq!(Monomial::var(2, 1).lower(0), None);
    }
}
