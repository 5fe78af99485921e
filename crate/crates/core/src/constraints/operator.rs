use num_bigint::BigInt;
use num_traits::Zero;

use crate::formal::Rational;
use crate::series::{PMonomial, PSeries};

/// `coeff * hbar^hbar * multiply * d/dp_{derive[0]} d/dp_{derive[1]} ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTerm {
    pub coeff: Rational,
    pub hbar: i64,
    pub multiply: PMonomial,
    pub derive: Vec<u32>,
}

impl OpTerm {
    /// Change in weighted degree of any monomial this term does not kill.
    pub fn degree_change(&self) -> i64 {
        self.multiply.degree() as i64 - self.derive.iter().map(|&i| i64::from(i)).sum::<i64>()
    }

    fn apply_to(&self, m: &PMonomial, c: &Rational) -> Option<(PMonomial, Rational)> {
        let mut mono = m.clone();
        let mut factor = BigInt::from(1);
        for &i in &self.derive {
            let (e, q) = mono.derive(i)?;
            factor *= e;
            mono = q;
        }
        Some((mono.mul(&self.multiply), c * &self.coeff * factor))
    }
}

/// Differential operator in the `p` variables as an explicit list of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOperator {
    terms: Vec<OpTerm>,
}

impl DiffOperator {
    pub fn new(terms: Vec<OpTerm>) -> Self {
        Self { terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    /// Common value of `hbar - degree_change` over all terms: how much the
    /// gap between `hbar` exponent and weighted degree moves. `None` for an
    /// operator that mixes gradings (or has no terms).
    pub fn grading_shift(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|t| t.hbar - t.degree_change());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    /// Applies the operator, ignoring `hbar`, keeping degrees `<= order`.
    pub fn apply(&self, a: &PSeries, order: u32) -> PSeries {
        let mut out = PSeries::zero(order);
        for t in &self.terms {
            for (m, c) in a.terms() {
                if let Some((mono, coeff)) = t.apply_to(m, c) {
                    out.add_term(mono, coeff);
                }
            }
        }
        out
    }

    /// Applies the operator to a graded series, tracking the `hbar` shift
    /// and how far the result can be trusted.
    pub fn apply_graded(&self, a: &Graded) -> Graded {
        let shift = self.grading_shift().unwrap_or(0);
        let drops = self.terms.iter().map(|t| -t.degree_change());
        let (min_drop, max_drop) = drops.fold((i64::MAX, i64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if self.terms.is_empty() {
            return Graded { series: PSeries::zero(a.series.order()), shift: a.shift, reliable: a.reliable };
        }
        let order = (i64::from(a.series.order()) - min_drop).max(0) as u32;
        Graded { series: self.apply(&a.series, order), shift: a.shift + shift, reliable: a.reliable - max_drop }
    }
}

/// A truncated series whose monomial of weighted degree `d` carries
/// `hbar^(d + shift)`. Terms of degree `<= reliable` are complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded {
    pub series: PSeries,
    pub shift: i64,
    pub reliable: i64,
}

impl Graded {
    /// A series from the Bessel data: `hbar` exponent equals degree.
    pub fn from_series(series: &PSeries) -> Self {
        Self { series: series.clone(), shift: 0, reliable: i64::from(series.order()) }
    }

    /// Reliable order measured in powers of `hbar`.
    pub fn reliable_hbar(&self) -> i64 {
        self.reliable + self.shift
    }

    /// Terms of degree `<= reliable`, in canonical order.
    pub fn reliable_terms(&self) -> impl Iterator<Item = (&PMonomial, &Rational)> + '_ {
        self.series.terms().filter(|(m, _)| (m.degree() as i64) <= self.reliable)
    }

    /// `sum c_k a_k`; all inputs must share a shift.
    pub fn combine(parts: &[(Rational, &Graded)]) -> Graded {
        let shift = parts.first().map_or(0, |(_, g)| g.shift);
        assert!(parts.iter().all(|(_, g)| g.shift == shift), "combining series of different grading");
        let reliable = parts.iter().map(|(_, g)| g.reliable).min().unwrap_or(0);
        let order = parts.iter().map(|(_, g)| g.series.order()).max().unwrap_or(0);
        let mut series = PSeries::zero(order);
        for (c, g) in parts {
            for (m, v) in g.series.terms() {
                series.add_term(m.clone(), c * v);
            }
        }
        Graded { series, shift, reliable }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::rat;

    fn mono(exps: &[(u32, u32)]) -> PMonomial {
        PMonomial::from_exps(exps.iter().copied()).unwrap()
    }

    #[test]
    fn second_derivative_term() {
        let op = DiffOperator::new(vec![OpTerm {
            coeff: rat(1, 1),
            hbar: 0,
            multiply: PMonomial::one(),
            derive: vec![1, 1],
        }]);
        let a = PSeries::monomial(mono(&[(1, 3), (3, 1)]), rat(1, 2), 10);
        let out = op.apply(&a, 10);
        assert_eq!(out, PSeries::monomial(mono(&[(1, 1), (3, 1)]), rat(3, 1), 10));
        assert_eq!(op.grading_shift(), Some(2));
        let g = op.apply_graded(&Graded::from_series(&a));
        assert_eq!((g.shift, g.reliable), (2, 8));
    }

    #[test]
    fn mixed_grading_detected() {
        let op = DiffOperator::new(vec![
            OpTerm { coeff: rat(1, 1), hbar: 0, multiply: PMonomial::one(), derive: vec![1] },
            OpTerm { coeff: rat(1, 1), hbar: 0, multiply: PMonomial::one(), derive: vec![3] },
        ]);
        assert_eq!(op.grading_shift(), None);
    }
}
