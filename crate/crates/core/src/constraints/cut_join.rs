use num_bigint::BigInt;

use super::operator::{DiffOperator, OpTerm};
use crate::formal::{format_rational, rat, Rational};
use crate::report::{Report, ResidualTerm};
use crate::series::{OddIndex, PMonomial, PSeries};

fn p(i: u32) -> PMonomial {
    PMonomial::var(OddIndex::new(i).expect("odd index"))
}

/// `M = p1/8 + 1/2 sum_{i,j odd} ij p_{i+j+1} d^2/dp_i dp_j
///        + sum_{i,j odd} (i+j-1) p_i p_j d/dp_{i+j-1}`,
/// with all derivative indices cut at `max_index`. Every term raises the
/// weighted degree by exactly one.
pub fn cut_and_join_operator(max_index: u32) -> DiffOperator {
    let mut terms = vec![OpTerm { coeff: rat(1, 8), hbar: 0, multiply: p(1), derive: vec![] }];
    let odd = || (1..=max_index).step_by(2);
    for i in odd() {
        for j in odd() {
            terms.push(OpTerm {
                coeff: rat(i64::from(i) * i64::from(j), 2),
                hbar: 0,
                multiply: p(i + j + 1),
                derive: vec![i, j],
            });
        }
    }
    for k in odd() {
        // i + j - 1 = k with i, j odd
        for i in (1..=k).step_by(2) {
            let j = k + 1 - i;
            terms.push(OpTerm { coeff: rat(i64::from(k), 1), hbar: 0, multiply: p(i).mul(&p(j)), derive: vec![k] });
        }
    }
    DiffOperator::new(terms)
}

/// `M a`, truncated at the order of `a`.
pub fn cut_and_join(a: &PSeries) -> PSeries {
    let max_index = a.max_index().unwrap_or(1);
    cut_and_join_operator(max_index).apply(a, a.order())
}

/// `Z = exp(hbar M) 1 = sum_k M^k 1 / k!` through weighted degree `order`.
/// `M^k 1` is homogeneous of degree `k`, which is also its `hbar` power.
pub fn evolve(order: u32) -> PSeries {
    let mut z = PSeries::one(order);
    let mut term = PSeries::one(order);
    for k in 1..=order {
        term = cut_and_join(&term).scale(&Rational::new(BigInt::from(1), BigInt::from(k)));
        z = z.add(&term);
    }
    z
}

/// Compares the flow against an independently built `Z`.
pub fn evolve_check(z: &PSeries) -> Report {
    let flowed = evolve(z.order());
    let diff = flowed.sub(z);
    let residuals = diff
        .terms()
        .map(|(m, c)| ResidualTerm::new("exp(hbar M) 1 - exp(F)", m.to_string(), format_rational(c)))
        .collect();
    Report::new("cutjoin", z.order(), i64::from(z.order()), residuals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(exps: &[(u32, u32)]) -> PMonomial {
        PMonomial::from_exps(exps.iter().copied()).unwrap()
    }

    #[test]
    fn m_on_one_and_p1() {
        assert_eq!(cut_and_join(&PSeries::one(4)), PSeries::monomial(p(1), rat(1, 8), 4));
        let a = PSeries::monomial(p(1), rat(1, 8), 4);
        assert_eq!(cut_and_join(&a), PSeries::monomial(mono(&[(1, 2)]), rat(9, 64), 4));
    }

    #[test]
    fn m_on_p3() {
        // p1 p3 / 8, plus (i, j) = (1, 3) and (3, 1) in the join term, 3 p1 p3 each
        let a = PSeries::monomial(p(3), rat(1, 1), 8);
        let expected = PSeries::from_terms(8, [(mono(&[(1, 1), (3, 1)]), rat(1, 8) + rat(6, 1))]);
        assert_eq!(cut_and_join(&a), expected);
    }

    #[test]
    fn m_raises_degree_by_one() {
        let op = cut_and_join_operator(9);
        assert!(op.terms().iter().all(|t| t.degree_change() == 1));
    }

    #[test]
    fn evolve_small() {
        assert_eq!(evolve(0), PSeries::one(0));
        let expected = PSeries::from_terms(1, [(PMonomial::one(), rat(1, 1)), (p(1), rat(1, 8))]);
        assert_eq!(evolve(1), expected);
    }
}
