use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};

/// Finite Laurent polynomial `sum c_k z^k` in one variable with exact
/// coefficients. Zero coefficients are never stored. No truncation order is
/// attached: callers decide what to keep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    /// `c z^k`.
    pub fn monomial(k: i64, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Accumulates `c z^k`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `z^-1`, i.e. the residue at `z = 0` of `self * dz`.
    pub fn residue(&self) -> Rational {
        self.coeff(-1)
    }

    /// Substitutes `z -> -z`.
    pub fn reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, if k % 2 == 0 { c.clone() } else { -c.clone() })).collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, c * s)).collect();
        Self { coeffs }
    }

    /// Multiplies by `z^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k + shift, c.clone())).collect();
        Self { coeffs }
    }

    /// Drops every term with exponent above `max_exp`.
    pub fn truncate_above(&self, max_exp: i64) -> Self {
        let coeffs = self.coeffs.range(..=max_exp).map(|(&k, c)| (k, c.clone())).collect();
        Self { coeffs }
    }

    /// Series inverse `1/self`, keeping exponents `<= max_exp`. Returns `None`
    /// for the zero polynomial.
    ///
    /// Writes `self = c z^k (1 + r)` with `r` having only positive exponents,
    /// so `1/self = c^-1 z^-k sum_j (-r)^j`; each power of `r` raises the
    /// minimum exponent by at least one, so the sum is finite after truncation.
    pub fn inverse_truncated(&self, max_exp: i64) -> Option<Self> {
        let (&k, lead) = self.coeffs.iter().next()?;
        let lead_inv = lead.recip();
        let leading = -k;
        if max_exp < leading {
            return Some(Self::zero());
        }
        let neg_r = Self::one() - self.shift(-k).scale(&lead_inv);
        let budget = max_exp - leading;
        let mut acc = Self::one();
        let mut power = Self::one();
        for _ in 0..budget {
            power = (&power * &neg_r).truncate_above(budget);
            if power.is_zero() {
                break;
            }
            acc = acc + power.clone();
        }
        Some(acc.shift(leading).scale(&lead_inv).truncate_above(max_exp))
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (k, c) in rhs.coeffs {
            self.add_term(k, c);
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let coeffs = self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect();
        LaurentPoly { coeffs }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                _ => write!(f, "({})z^{}", format_rational(c), k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::rat;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (k, rat(c, 1))))
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(lp(&[(-1, 1)]) * lp(&[(1, 1)]), LaurentPoly::one());
        assert_eq!(lp(&[(0, 1), (1, 1)]) * lp(&[(0, 1), (1, -1)]), lp(&[(0, 1), (2, -1)]));
        assert_eq!(lp(&[(-2, 1)]) * lp(&[(-1, 3)]), lp(&[(-3, 3)]));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(lp(&[(-1, 3), (0, 2), (1, 1)]).residue(), rat(3, 1));
        assert_eq!(lp(&[(-2, 1)]).residue(), rat(0, 1));
        assert_eq!((lp(&[(-1, 5)]) - lp(&[(-1, 5)])).residue(), rat(0, 1));
        assert!((lp(&[(-1, 5)]) - lp(&[(-1, 5)])).is_zero());
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(lp(&[(1, 1)]).reflect(), lp(&[(1, -1)]));
        assert_eq!(lp(&[(-1, 1), (2, 1)]).reflect(), lp(&[(-1, -1), (2, 1)]));
        assert_eq!(LaurentPoly::one().reflect(), LaurentPoly::one());
    }

    #[test]
    fn inverse_of_monomial_and_binomial() {
        let inv = lp(&[(2, 2)]).inverse_truncated(5).unwrap();
        assert_eq!(inv, LaurentPoly::monomial(-2, rat(1, 2)));
        // 1/(1 - z) = 1 + z + z^2 + z^3
        let inv = lp(&[(0, 1), (1, -1)]).inverse_truncated(3).unwrap();
        assert_eq!(inv, lp(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert!(LaurentPoly::zero().inverse_truncated(3).is_none());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..4, -5i64..5, 1i64..4), 0..6)
            .prop_map(|v| LaurentPoly::from_terms(v.into_iter().map(|(k, n, d)| (k, rat(n, d)))))
    }

    proptest! {
        #[test]
        fn residue_of_product_is_convolution(a in arb_poly(), b in arb_poly()) {
            let direct = (&a * &b).residue();
            let mut conv = Rational::zero();
            for (k, ak) in a.terms() {
                conv += ak * b.coeff(-1 - k);
            }
            prop_assert_eq!(direct, conv);
        }

        #[test]
        fn reflect_is_involution(a in arb_poly()) {
            prop_assert_eq!(a.reflect().reflect(), a);
        }

        #[test]
        fn truncated_inverse_is_inverse(a in arb_poly()) {
            prop_assume!(!a.is_zero());
            let max_exp = 6;
            let inv = a.inverse_truncated(max_exp).unwrap();
            let lead = a.min_exponent().unwrap();
            // product equals 1 up to exponent max_exp + lead
            let prod = (&a * &inv).truncate_above(max_exp + lead);
            prop_assert_eq!(prod, LaurentPoly::one());
        }
    }
}
