use num_bigint::BigInt;
use num_traits::One;

use super::operator::{DiffOperator, Graded, OpTerm};
use crate::formal::{format_rational, rat, Rational};
use crate::report::{Report, ResidualTerm};
use crate::series::{OddIndex, PMonomial, PSeries};

/// Index `m >= 0` of the Virasoro operator `L_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VirasoroIndex(pub u32);

impl VirasoroIndex {
    /// Index of the variable `p_{2m+1}` hit by the `1/hbar` term.
    pub fn leading_var(self) -> u32 {
        2 * self.0 + 1
    }
}

fn p(i: u32) -> PMonomial {
    PMonomial::var(OddIndex::new(i).expect("odd index"))
}

/// `L_m = -(m + 1/2)/hbar d/dp_{2m+1} + sum_{i odd} (m + i/2) p_i d/dp_{2m+i}
///        + sum_{i+j=2m, odd} ij/4 d^2/dp_i dp_j + delta_{m,0}/16`.
///
/// The sum over `i` is cut at derivative index `max_index`; variables above
/// it must not occur in the series the operator is applied to.
pub fn virasoro_operator(m: VirasoroIndex, max_index: u32) -> DiffOperator {
    let mm = m.0;
    let mut terms = vec![OpTerm {
        coeff: -rat(2 * i64::from(mm) + 1, 2),
        hbar: -1,
        multiply: PMonomial::one(),
        derive: vec![m.leading_var()],
    }];
    let mut i = 1;
    while 2 * mm + i <= max_index {
        terms.push(OpTerm {
            coeff: rat(2 * i64::from(mm) + i64::from(i), 2),
            hbar: 0,
            multiply: p(i),
            derive: vec![2 * mm + i],
        });
        i += 2;
    }
    let mut i = 1;
    while i < 2 * mm {
        let j = 2 * mm - i;
        terms.push(OpTerm {
            coeff: rat(i64::from(i) * i64::from(j), 4),
            hbar: 0,
            multiply: PMonomial::one(),
            derive: vec![i, j],
        });
        i += 2;
    }
    if mm == 0 {
        terms.push(OpTerm { coeff: rat(1, 16), hbar: 0, multiply: PMonomial::one(), derive: vec![] });
    }
    DiffOperator::new(terms)
}

/// `L_m a`. Every output monomial of degree `d` sits at `hbar^(d + shift)`
/// with `shift` raised by `2m`; the `1/hbar` term costs one order of
/// reliability beyond the `2m` every term drops.
pub fn apply_virasoro(m: VirasoroIndex, a: &Graded) -> Graded {
    let max_index = a.series.max_index().unwrap_or(1).max(m.leading_var());
    virasoro_operator(m, max_index).apply_graded(a)
}

/// Checks `L_m Z = 0` for `0 <= m <= m_max` through `hbar^(N-1)`.
pub fn virasoro_annihilation_check(zs: &PSeries, m_max: u32) -> Report {
    let input = Graded::from_series(zs);
    let mut residuals = Vec::new();
    for m in 0..=m_max {
        let out = apply_virasoro(VirasoroIndex(m), &input);
        for (mono, c) in out.reliable_terms() {
            residuals.push(ResidualTerm::new(
                format!("L_{m}"),
                format!("{} hbar^{}", mono, mono.degree() as i64 + out.shift),
                format_rational(c),
            ));
        }
    }
    Report::new("virasoro", zs.order(), i64::from(zs.order()) - 1, residuals)
}

/// Residual of `[L_m, L_n] - (m - n) L_{m+n}` on `a`, restricted to the
/// degrees where all three compositions are reliable.
pub fn commutator_residual(m: u32, n: u32, a: &PSeries) -> Graded {
    let g = Graded::from_series(a);
    let (lm, ln) = (VirasoroIndex(m), VirasoroIndex(n));
    let mn = apply_virasoro(lm, &apply_virasoro(ln, &g));
    let nm = apply_virasoro(ln, &apply_virasoro(lm, &g));
    let sum = apply_virasoro(VirasoroIndex(m + n), &g);
    let factor = Rational::from_integer(BigInt::from(i64::from(m) - i64::from(n)));
    Graded::combine(&[(Rational::one(), &mn), (-Rational::one(), &nm), (-factor, &sum)])
}

/// True iff `[L_m, L_n] a = (m - n) L_{m+n} a` through the reliable order.
pub fn virasoro_commutator_check(m: u32, n: u32, a: &PSeries) -> bool {
    commutator_residual(m, n, a).reliable_terms().next().is_none()
}
