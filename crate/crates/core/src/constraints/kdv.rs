//! KdV check for `u = d^2 F / dp1^2` in the variables `x = q1`, `t = q3`.
//!
//! With `q_k = hbar^k p_k` the free energy is `hbar`-free (its `hbar` power
//! equals the weighted degree), and the equation reads
//! `u_t = u u_x + u_xxx / 12` with `u(x, 0) = 1 / (8 (1 - x)^2)`.

use num_bigint::BigInt;

use super::operator::{DiffOperator, Graded, OpTerm};
use crate::bessel::UTable;
use crate::error::{Error, Result};
use crate::formal::{format_rational, rat, Rational};
use crate::report::{Report, ResidualTerm};
use crate::series::{free_energy, PMonomial, PSeries};

/// Degrees lost between `F` and the residual: `u_t` needs `d/dp3` on top of
/// the two `d/dp1`.
pub const KDV_ORDER_LOSS: u32 = 5;

fn two_point_u(table: &UTable, order: u32) -> PSeries {
    // restricting before differentiating commutes with d/dp1, d/dp3
    free_energy(table, order).restrict(&[1, 3]).partial(1).partial(1)
}

/// `u_t - u u_x - u_xxx / 12`, kept through weighted degree `order - 5`,
/// where every term is complete.
pub fn kdv_residual(table: &UTable, order: u32) -> Result<PSeries> {
    if order < KDV_ORDER_LOSS {
        return Err(Error::OrderTooLow { needed: KDV_ORDER_LOSS, got: order });
    }
    let u = two_point_u(table, order);
    let ux = u.partial(1);
    let ut = u.partial(3);
    let uxxx = ux.partial(1).partial(1);
    let residual = ut.sub(&u.mul(&ux)).sub(&uxxx.scale(&rat(1, 12)));
    Ok(residual.with_order(order - KDV_ORDER_LOSS))
}

/// Coefficients of `x^k` in `u(x, 0)` for `k = 0..=order-2`.
pub fn kdv_initial_condition(table: &UTable, order: u32) -> Vec<Rational> {
    let u = two_point_u(table, order).restrict(&[1]);
    (0..=order.saturating_sub(2))
        .map(|k| {
            let m = PMonomial::from_exps([(1, k)]).expect("p1");
            u.coeff(&m)
        })
        .collect()
}

/// Every term of `u = F_{p1 p1}` carries at least `hbar^2`, so `u -> 0` as
/// `hbar -> 0`.
pub fn dispersionless_limit_vanishes(table: &UTable, order: u32) -> bool {
    let second = DiffOperator::new(vec![OpTerm {
        coeff: Rational::from_integer(BigInt::from(1)),
        hbar: 0,
        multiply: PMonomial::one(),
        derive: vec![1, 1],
    }]);
    let u = second.apply_graded(&Graded::from_series(&free_energy(table, order)));
    let shift = u.shift;
    let ok = u.series.terms().all(|(m, _)| m.degree() as i64 + shift >= 1);
    ok
}

/// Residual, initial condition and dispersionless limit in one report.
pub fn kdv_check(table: &UTable, order: u32) -> Result<Report> {
    let mut residuals: Vec<ResidualTerm> = kdv_residual(table, order)?
        .terms()
        .map(|(m, c)| ResidualTerm::new("u_t - u u_x - u_xxx/12", m.to_string(), format_rational(c)))
        .collect();
    for (k, c) in kdv_initial_condition(table, order).into_iter().enumerate() {
        let expected = rat(k as i64 + 1, 8);
        if c != expected {
            residuals.push(ResidualTerm::new(
                "u(x,0) - 1/(8(1-x)^2)",
                format!("x^{k}"),
                format_rational(&(c - expected)),
            ));
        }
    }
    if !dispersionless_limit_vanishes(table, order) {
        residuals.push(ResidualTerm::new("dispersionless limit", "hbar^0", "nonzero"));
    }
    let reliable = i64::from(order) - i64::from(KDV_ORDER_LOSS);
    Ok(Report::new("kdv", order, reliable, residuals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn residual_vanishes_at_order_eight() {
        let r = kdv_residual(&UTable::new(), 8).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.order(), 3);
    }

    #[test]
    fn low_order_rejected() {
        assert_eq!(kdv_residual(&UTable::new(), 4), Err(Error::OrderTooLow { needed: 5, got: 4 }));
    }

    #[test]
    fn u_low_terms() {
        let u = two_point_u(&UTable::new(), 8);
        let m = |e: &[(u32, u32)]| PMonomial::from_exps(e.iter().copied()).unwrap();
        assert_eq!(u.constant_term(), rat(1, 8));
        assert_eq!(u.coeff(&m(&[(3, 1)])), rat(9, 32));
        assert_eq!(u.coeff(&m(&[(1, 1), (3, 1)])), rat(45, 32));
    }

    #[test]
    fn initial_condition_is_geometric_square() {
        let ic = kdv_initial_condition(&UTable::new(), 8);
        let expected: Vec<Rational> = (0..=6).map(|k| rat(k + 1, 8)).collect();
        assert_eq!(ic, expected);
        assert!(dispersionless_limit_vanishes(&UTable::new(), 8));
    }

    #[test]
    fn wrong_dispersion_coefficient_fails() {
        let t = UTable::new();
        let u = two_point_u(&t, 8);
        let ux = u.partial(1);
        let res = u.partial(3).sub(&u.mul(&ux)).sub(&ux.partial(1).partial(1).scale(&rat(1, 6)));
        assert!(!res.with_order(3).is_zero());
        assert!(!res.constant_term().is_zero());
    }

    #[test]
    fn report_passes() {
        assert!(kdv_check(&UTable::new(), 8).unwrap().passed());
        assert!(!kdv_check(&UTable::with_base_case(rat(1, 4)), 8).unwrap().passed());
    }
}
